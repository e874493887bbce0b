//! Independent geometric oracles shared by the integration tests.
#![allow(dead_code)]

use rearrange::geometry::Point2;
use rearrange::scene::{generate, GenSpec};
use rearrange::{CSpaceParams, ObjectId, Scene};

/// Whether the ray from `origin` along unit `dir` meets the closed disk `(center, radius)`.
/// From inside the disk a ray counts as blocked when it does not point away from the center.
pub fn ray_hits_disk(origin: Point2, dir: Point2, center: Point2, radius: f64) -> bool {
    let w = Point2::new(center.x - origin.x, center.y - origin.y);
    let along = w.x * dir.x + w.y * dir.y;
    let dist2 = w.x * w.x + w.y * w.y;
    if dist2 <= radius * radius {
        return along >= 0.0;
    }
    along >= 0.0 && dist2 - along * along <= radius * radius
}

/// Unit direction at `angle_deg` counter-clockwise from the origin-to-base ray.
pub fn approach_direction(origin: Point2, base: Point2, angle_deg: f64) -> Point2 {
    let bx = base.x - origin.x;
    let by = base.y - origin.y;
    let len = (bx * bx + by * by).sqrt();
    let (s, c) = angle_deg.to_radians().sin_cos();
    Point2::new((c * bx - s * by) / len, (s * bx + c * by) / len)
}

/// Whether the approach ray at `angle_deg` toward `acting` misses every other inflated object.
pub fn ray_free(scene: &Scene, acting: ObjectId, cs: &CSpaceParams, angle_deg: f64) -> bool {
    let t = scene.get(acting).unwrap();
    let dir = approach_direction(t.center, scene.base, angle_deg);
    scene.objects.iter().filter(|o| o.id != acting).all(|o| {
        let r = t.radius + cs.safety_margin + o.radius + cs.gripper_radius;
        !ray_hits_disk(t.center, dir, o.center, r)
    })
}

/// Distance from `p` to segment `ab`, via the perpendicular foot when it falls inside the segment.
pub fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let (abx, aby) = (b.x - a.x, b.y - a.y);
    let len = (abx * abx + aby * aby).sqrt();
    let to_a = ((p.x - a.x).powi(2) + (p.y - a.y).powi(2)).sqrt();
    let to_b = ((p.x - b.x).powi(2) + (p.y - b.y).powi(2)).sqrt();
    if len == 0.0 {
        return to_a;
    }
    let before_a = (p.x - a.x) * abx + (p.y - a.y) * aby < 0.0;
    let after_b = (p.x - b.x) * abx + (p.y - b.y) * aby > 0.0;
    if before_a {
        to_a
    } else if after_b {
        to_b
    } else {
        ((p.x - a.x) * aby - (p.y - a.y) * abx).abs() / len
    }
}

/// Scenes with N cycling through `sizes`.
pub fn scenes(count: u64, sizes: &[usize], seed_offset: u64) -> Vec<Scene> {
    (0..count)
        .map(|i| {
            let n = sizes[(i as usize) % sizes.len()];
            generate(&GenSpec::tabletop(n, seed_offset + i)).unwrap()
        })
        .collect()
}

/// Target at `center`, obstacles at `(bearing°, distance)` in its target-to-base frame.
pub fn ring_scene(center: Point2, radius: f64, placements: &[(f64, f64)]) -> Scene {
    use rearrange::geometry::Rect;
    use rearrange::ObjectDisk;
    let base = Point2::new(0.25, -0.05);
    let mut objects = vec![ObjectDisk::new(0, center.x, center.y, radius)];
    for (i, &(beta, d)) in placements.iter().enumerate() {
        let dir = approach_direction(center, base, beta);
        objects.push(ObjectDisk::new(
            i as u32 + 1,
            center.x + d * dir.x,
            center.y + d * dir.y,
            radius,
        ));
    }
    Scene::new(Rect::square(0.5), base, objects, ObjectId(0)).unwrap()
}
