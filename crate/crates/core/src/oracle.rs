//! Ground truth for accessibility and minimum relocation.
//!
//! Works with exact angular intervals rather than sectors: a straight approach
//! ray from the acting target is blocked by an inflated obstacle when it points
//! within `asin(r_total / d)` of the obstacle's bearing, or within 90° when the
//! acting target already sits inside the inflated disk.

use itertools::Itertools;
use serde::Serialize;

use crate::cspace::CSpaceParams;
use crate::geometry::{wrap_degrees, Point2};
use crate::par::{self, Execution};
use crate::scene::{ObjectId, Scene};
use crate::{Error, Result};

/// Largest scene `min_relocation_set` will enumerate.
pub const MAX_ENUMERATION: usize = 15;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccessReport {
    pub accessible: bool,
    /// Maximal open intervals of free approach directions, degrees.
    pub free_angles: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinRelocation {
    pub k: usize,
    pub witness: Vec<ObjectId>,
}

fn heading(v: Point2) -> f64 {
    v.y.atan2(v.x).to_degrees()
}

/// Blocked interval `(lo, hi)` of every other object, in the target-to-base frame.
pub fn blocked_intervals(
    scene: &Scene,
    acting_target: ObjectId,
    params: &CSpaceParams,
) -> Result<Vec<(ObjectId, f64, f64)>> {
    let t = scene
        .get(acting_target)
        .ok_or(Error::UnknownObject(acting_target))?;
    let zero = heading(scene.base - t.center);
    Ok(scene
        .objects
        .iter()
        .filter(|o| o.id != acting_target)
        .map(|o| {
            let v = o.center - t.center;
            let d = v.norm();
            let r = params.total_radius(t.radius, o.radius);
            let half = if d <= r {
                90.0
            } else {
                (r / d).asin().to_degrees()
            };
            let beta = wrap_degrees(heading(v) - zero);
            (o.id, beta - half, beta + half)
        })
        .collect())
}

/// Free sub-intervals of `[-window, window]` not covered by any closed blocked interval.
pub fn free_intervals(
    blocked: impl IntoIterator<Item = (f64, f64)>,
    window: f64,
) -> Vec<(f64, f64)> {
    let mut clipped: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in blocked {
        for shift in [-360.0, 0.0, 360.0] {
            let (a, b) = ((lo + shift).max(-window), (hi + shift).min(window));
            if a <= b {
                clipped.push((a, b));
            }
        }
    }
    clipped.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut free = Vec::new();
    let mut cursor = -window;
    for (a, b) in clipped {
        if a > cursor {
            free.push((cursor, a));
        }
        cursor = cursor.max(b);
    }
    if cursor < window {
        free.push((cursor, window));
    }
    free
}

/// Whether some straight approach ray within the window misses every inflated obstacle.
pub fn ray_accessible(
    scene: &Scene,
    acting_target: ObjectId,
    params: &CSpaceParams,
    window: f64,
) -> Result<AccessReport> {
    let blocked = blocked_intervals(scene, acting_target, params)?;
    let free_angles = free_intervals(blocked.into_iter().map(|(_, lo, hi)| (lo, hi)), window);
    Ok(AccessReport {
        accessible: !free_angles.is_empty(),
        free_angles,
    })
}

/// Smallest set of obstacles whose removal opens an approach ray to the scene's target.
pub fn min_relocation_set(
    scene: &Scene,
    params: &CSpaceParams,
    window: f64,
    exec: Execution,
) -> Result<MinRelocation> {
    if scene.len() > MAX_ENUMERATION {
        return Err(Error::EnumerationBound {
            limit: MAX_ENUMERATION,
            actual: scene.len(),
        });
    }
    let blocked = blocked_intervals(scene, scene.target_id, params)?;
    let opens = |removed: &[usize]| {
        let rest = blocked
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, &(_, lo, hi))| (lo, hi));
        !free_intervals(rest, window).is_empty()
    };
    for k in 0..=blocked.len() {
        let subsets: Vec<Vec<usize>> = (0..blocked.len()).combinations(k).collect();
        if let Some(found) = par::find_first(exec, &subsets, |s| opens(s)) {
            return Ok(MinRelocation {
                k,
                witness: found.iter().map(|&i| blocked[i].0).collect(),
            });
        }
    }
    unreachable!("removing every obstacle always opens the window")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;
    use crate::scene::ObjectDisk;

    fn scene(objects: Vec<ObjectDisk>) -> Scene {
        Scene::new(
            Rect::square(0.5),
            Point2::new(0.25, -0.05),
            objects,
            ObjectId(0),
        )
        .unwrap()
    }

    #[test]
    fn interval_subtraction() {
        assert_eq!(free_intervals([], 45.0), vec![(-45.0, 45.0)]);
        assert!(free_intervals([(-45.0, 45.0)], 45.0).is_empty());
        assert!(free_intervals([(-50.0, 0.0), (0.0, 50.0)], 45.0).is_empty());
        assert_eq!(
            free_intervals([(-10.0, 10.0)], 45.0),
            vec![(-45.0, -10.0), (10.0, 45.0)]
        );
        assert_eq!(
            free_intervals([(170.0, 200.0)], 180.0),
            vec![(-160.0, 170.0)]
        );
        assert_eq!(
            free_intervals([(-45.0, -20.0), (-30.0, -25.0)], 45.0),
            vec![(-20.0, 45.0)]
        );
    }

    #[test]
    fn empty_scene_is_open() {
        let s = scene(vec![ObjectDisk::new(0, 0.25, 0.3, 0.03)]);
        let r = ray_accessible(&s, ObjectId(0), &CSpaceParams::default(), 45.0).unwrap();
        assert!(r.accessible);
        assert_eq!(r.free_angles, vec![(-45.0, 45.0)]);
        let m =
            min_relocation_set(&s, &CSpaceParams::default(), 45.0, Execution::Sequential).unwrap();
        assert_eq!(
            m,
            MinRelocation {
                k: 0,
                witness: vec![]
            }
        );
    }

    #[test]
    fn exact_cover_is_blocked() {
        // r_total / d = sin 45° puts the blocked interval exactly at [-45, 45].
        let params = CSpaceParams::new(0.0, 0.04).unwrap();
        let r_total = 0.03 + 0.03 + 0.04;
        let d = r_total / 45f64.to_radians().sin();
        let s = scene(vec![
            ObjectDisk::new(0, 0.25, 0.4, 0.03),
            ObjectDisk::new(1, 0.25, 0.4 - d, 0.03),
        ]);
        let blocked = blocked_intervals(&s, ObjectId(0), &params).unwrap();
        let (lo, hi) = (blocked[0].1, blocked[0].2);
        assert!((lo + 45.0).abs() < 1e-9 && (hi - 45.0).abs() < 1e-9);
        let exact = free_intervals([(-45.0, 45.0)], 45.0);
        assert!(exact.is_empty());
    }

    #[test]
    fn enumeration_bound() {
        let objects: Vec<_> = (0..16)
            .map(|i| {
                ObjectDisk::new(
                    i,
                    0.03 + 0.06 * (i % 8) as f64,
                    0.1 + 0.2 * (i / 8) as f64,
                    0.02,
                )
            })
            .collect();
        let s = scene(objects);
        assert!(matches!(
            min_relocation_set(&s, &CSpaceParams::default(), 45.0, Execution::Sequential),
            Err(Error::EnumerationBound {
                limit: 15,
                actual: 16
            })
        ));
    }
}
