//! Configuration-space inflation.
//!
//! The acting target grows by the safety margin, and each obstacle grows by the
//! acting target's radius, the margin and the gripper radius. The target then
//! reduces to a point and every obstacle to a disk of `r_total`.

use serde::{Deserialize, Serialize};

use crate::geometry::Point2;
use crate::scene::{ObjectId, Scene};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CSpaceParams {
    /// Safety margin around the held target, meters.
    pub safety_margin: f64,
    /// End-effector radius, meters.
    pub gripper_radius: f64,
}

impl Default for CSpaceParams {
    fn default() -> Self {
        Self {
            safety_margin: 0.01,
            gripper_radius: 0.04,
        }
    }
}

impl CSpaceParams {
    pub fn new(safety_margin: f64, gripper_radius: f64) -> Result<Self> {
        let p = Self {
            safety_margin,
            gripper_radius,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.safety_margin.is_finite() && self.safety_margin >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "safety margin {} must be >= 0",
                self.safety_margin
            )));
        }
        if !(self.gripper_radius.is_finite() && self.gripper_radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gripper radius {} must be > 0",
                self.gripper_radius
            )));
        }
        Ok(())
    }

    /// `r_t + r_s + r_o + r_g`.
    pub fn total_radius(&self, target_radius: f64, obstacle_radius: f64) -> f64 {
        target_radius + self.safety_margin + obstacle_radius + self.gripper_radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InflatedObstacle {
    pub source_id: ObjectId,
    pub center: Point2,
    pub r_total: f64,
}

/// Inflates every object except `acting_target` relative to the acting target's radius.
pub fn inflate(
    scene: &Scene,
    params: &CSpaceParams,
    acting_target: ObjectId,
) -> Result<Vec<InflatedObstacle>> {
    let target = scene
        .get(acting_target)
        .ok_or(Error::UnknownObject(acting_target))?;
    Ok(scene
        .objects
        .iter()
        .filter(|o| o.id != acting_target)
        .map(|o| InflatedObstacle {
            source_id: o.id,
            center: o.center,
            r_total: params.total_radius(target.radius, o.radius),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;
    use crate::scene::ObjectDisk;
    use approx::assert_relative_eq;

    fn pair(target_r: f64, obstacle_r: f64) -> Scene {
        Scene::new(
            Rect::square(0.5),
            Point2::new(0.25, -0.05),
            vec![
                ObjectDisk::new(0, 0.25, 0.25, target_r),
                ObjectDisk::new(1, 0.25, 0.1, obstacle_r),
            ],
            ObjectId(0),
        )
        .unwrap()
    }

    #[test]
    fn four_term_sum() {
        let params = CSpaceParams::new(0.01, 0.02).unwrap();
        let inflated = inflate(&pair(0.035, 0.030), &params, ObjectId(0)).unwrap();
        assert_eq!(inflated.len(), 1);
        assert_relative_eq!(inflated[0].r_total, 0.095, epsilon = 1e-12);
        assert_eq!(inflated[0].center, Point2::new(0.25, 0.1));
    }

    #[test]
    fn acting_target_can_be_an_obstacle() {
        let params = CSpaceParams::default();
        let inflated = inflate(&pair(0.035, 0.030), &params, ObjectId(1)).unwrap();
        assert_eq!(inflated[0].source_id, ObjectId(0));
        assert_relative_eq!(
            inflated[0].r_total,
            0.030 + 0.01 + 0.035 + 0.04,
            epsilon = 1e-12
        );
    }

    #[test]
    fn target_only_scene_has_no_obstacles() {
        let scene = Scene::new(
            Rect::square(0.5),
            Point2::new(0.25, -0.05),
            vec![ObjectDisk::new(3, 0.2, 0.2, 0.03)],
            ObjectId(3),
        )
        .unwrap();
        assert!(inflate(&scene, &CSpaceParams::default(), ObjectId(3))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn degenerates_to_physical_disk() {
        let params = CSpaceParams {
            safety_margin: 0.0,
            gripper_radius: 0.0,
        };
        let inflated = inflate(&pair(1e-12, 0.03), &params, ObjectId(0)).unwrap();
        assert_relative_eq!(inflated[0].r_total, 0.03, epsilon = 1e-11);
    }

    #[test]
    fn unknown_target() {
        assert!(matches!(
            inflate(&pair(0.03, 0.03), &CSpaceParams::default(), ObjectId(9)),
            Err(Error::UnknownObject(ObjectId(9)))
        ));
    }

    #[test]
    fn parameter_validation() {
        assert!(CSpaceParams::new(-0.01, 0.02).is_err());
        assert!(CSpaceParams::new(0.0, 0.0).is_err());
        assert!(CSpaceParams::new(0.0, 0.01).is_ok());
    }
}
