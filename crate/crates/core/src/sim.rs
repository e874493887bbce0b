//! Abstract execution: grasp, delete, perturb, replan.
//!
//! Each iteration optionally jitters every object, asks the method for the next
//! grasp on the current scene and deletes the grasped object. Planning time is
//! measured per decision.

use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geometry::Point2;
use crate::oracle;
use crate::planner::{Method, PlannerConfig};
use crate::scene::{ObjectId, Scene};
use crate::{Error, Result};

/// Proposals per object per step before its pose is left unchanged.
const PERTURB_ATTEMPTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelocationPolicy {
    /// Grasped objects leave the scene.
    Remove,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    /// Half-width of the per-step uniform pose noise on each axis, meters.
    pub perturbation: f64,
    pub reloc_policy: RelocationPolicy,
    pub step_limit: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn static_run(step_limit: usize) -> Self {
        Self {
            perturbation: 0.0,
            reloc_policy: RelocationPolicy::Remove,
            step_limit,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.perturbation.is_finite() && self.perturbation >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "perturbation {} must be >= 0",
                self.perturbation
            )));
        }
        if self.step_limit < 1 {
            return Err(Error::InvalidParameter("step_limit must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decision {
    pub object_id: ObjectId,
    /// Seconds spent choosing this object.
    pub planning_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub success: bool,
    pub relocations: usize,
    pub decisions: Vec<Decision>,
    /// Whether an exact approach ray was open when the target was grasped.
    pub target_accessible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<String>,
    pub final_scene: Scene,
}

impl SimResult {
    pub fn order(&self) -> Vec<ObjectId> {
        self.decisions.iter().map(|d| d.object_id).collect()
    }

    pub fn mean_decision_time(&self) -> f64 {
        if self.decisions.is_empty() {
            return 0.0;
        }
        self.decisions.iter().map(|d| d.planning_time).sum::<f64>() / self.decisions.len() as f64
    }

    /// Copy with all timings zeroed, for reproducible output.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.decisions.iter_mut().for_each(|d| d.planning_time = 0.0);
        r
    }

    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("result serialization is infallible");
        text.push('\n');
        text
    }

    /// One row per grasp; outcome fields are repeated on every row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,object_id,planning_time,success,target_accessible\n");
        for (i, d) in self.decisions.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                i, d.object_id, d.planning_time, self.success, self.target_accessible
            ));
        }
        out
    }
}

/// Jitters every object independently, rejecting proposals that overlap or leave the workspace.
pub fn perturb(scene: &mut Scene, half_width: f64, rng: &mut impl Rng) {
    if half_width <= 0.0 {
        return;
    }
    for i in 0..scene.objects.len() {
        let current = scene.objects[i];
        for _ in 0..PERTURB_ATTEMPTS {
            let proposal = current.center
                + Point2::new(
                    rng.gen_range(-half_width..=half_width),
                    rng.gen_range(-half_width..=half_width),
                );
            let fits = scene.workspace.contains_disk(proposal, current.radius);
            let clear =
                scene.objects.iter().enumerate().all(|(j, o)| {
                    j == i || o.center.distance(proposal) >= o.radius + current.radius
                });
            if fits && clear {
                scene.objects[i].center = proposal;
                break;
            }
        }
    }
}

pub fn run(
    scene: &Scene,
    method: Method,
    cfg: &PlannerConfig,
    sim: &SimConfig,
) -> Result<SimResult> {
    scene.validate()?;
    cfg.validate()?;
    sim.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(sim.seed);
    let mut working = scene.clone();
    let mut decisions = Vec::new();
    let mut target_accessible = false;

    for _ in 0..sim.step_limit {
        perturb(&mut working, sim.perturbation, &mut rng);
        let start = Instant::now();
        let step = method.next_step(&working, cfg)?;
        let planning_time = start.elapsed().as_secs_f64();
        let id = step.object_id;
        if id == scene.target_id {
            target_accessible =
                oracle::ray_accessible(&working, id, &cfg.cspace, cfg.histogram.window)?.accessible;
        }
        match sim.reloc_policy {
            RelocationPolicy::Remove => {
                working.remove(id).ok_or(Error::Cycle(id))?;
            }
        }
        decisions.push(Decision {
            object_id: id,
            planning_time,
        });
        if id == scene.target_id {
            return Ok(SimResult {
                success: true,
                relocations: decisions.len() - 1,
                decisions,
                target_accessible,
                diagnostics: None,
                final_scene: working,
            });
        }
    }
    let relocations = decisions.len();
    Ok(SimResult {
        success: false,
        relocations,
        decisions,
        target_accessible,
        diagnostics: Some(format!(
            "step limit {} reached with target {} still in the scene ({} objects left)",
            sim.step_limit,
            scene.target_id,
            working.len()
        )),
        final_scene: working,
    })
}
