use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rearrange::oracle::ray_accessible;
use rearrange::scene::{generate, GenSpec};
use rearrange::sim::{perturb, run, RelocationPolicy, SimConfig};
use rearrange::{Method, PlannerConfig};

fn dynamic(seed: u64, n: usize) -> SimConfig {
    SimConfig {
        perturbation: 0.01,
        reloc_policy: RelocationPolicy::Remove,
        step_limit: n,
        seed,
    }
}

#[test]
fn perturbed_runs_reach_the_target() {
    let cfg = PlannerConfig::default();
    for seed in 0..100 {
        let scene = generate(&GenSpec::tabletop(10, seed)).unwrap();
        for m in Method::ALL {
            let r = run(&scene, m, &cfg, &dynamic(seed, 10)).unwrap();
            assert!(r.success, "{m} seed {seed}: {:?}", r.diagnostics);
            assert_eq!(r.decisions.len(), r.relocations + 1);
            assert!(!r.final_scene.contains(scene.target_id));
        }
    }
}

#[test]
fn proposed_grasps_the_target_only_when_reachable() {
    let cfg = PlannerConfig::default();
    for seed in 0..50 {
        let scene = generate(&GenSpec::tabletop(8, seed)).unwrap();
        let r = run(&scene, Method::Proposed, &cfg, &dynamic(seed, 8)).unwrap();
        assert!(r.target_accessible, "seed {seed}");
    }
}

#[test]
fn perturbation_keeps_scenes_valid() {
    for seed in 0..50 {
        let mut scene = generate(&GenSpec::tabletop(10, seed)).unwrap();
        let before = scene.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..5 {
            perturb(&mut scene, 0.01, &mut rng);
            scene.validate().unwrap();
            assert!(scene.min_clearance().unwrap() >= 0.0);
        }
        for (a, b) in before.objects.iter().zip(&scene.objects) {
            assert_eq!(a.id, b.id);
            assert_eq!(a.radius, b.radius);
            assert!((a.center.x - b.center.x).abs() <= 0.05 + 1e-12);
            assert!((a.center.y - b.center.y).abs() <= 0.05 + 1e-12);
        }
    }
}

#[test]
fn runs_replay_identically() {
    let cfg = PlannerConfig::default();
    let scene = generate(&GenSpec::tabletop(10, 11)).unwrap();
    for m in Method::ALL {
        let a = run(&scene, m, &cfg, &dynamic(3, 10))
            .unwrap()
            .without_timing();
        let b = run(&scene, m, &cfg, &dynamic(3, 10))
            .unwrap()
            .without_timing();
        assert_eq!(a.to_json(), b.to_json());
    }
}

#[test]
fn static_run_final_scene_is_open() {
    let cfg = PlannerConfig::default();
    let scene = generate(&GenSpec::tabletop(6, 21)).unwrap();
    let r = run(&scene, Method::Proposed, &cfg, &SimConfig::static_run(6)).unwrap();
    let mut before_target = scene.clone();
    for id in &r.order()[..r.relocations] {
        before_target.remove(*id);
    }
    assert!(
        ray_accessible(
            &before_target,
            scene.target_id,
            &cfg.cspace,
            cfg.histogram.window
        )
        .unwrap()
        .accessible
    );
}
