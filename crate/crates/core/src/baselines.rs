//! Reference removal strategies used for comparison.
//!
//! Both are reconstructions of the removal-selection logic only.
//! [`straight_line_plan`] clears every obstacle touching the straight corridor
//! from the base to the target. [`gaussian_plan`] places a Gaussian bump at each
//! obstacle's bearing and grasps the target once some direction's density falls
//! below a hand-set threshold.

use serde::{Deserialize, Serialize};

use crate::cspace::{self, CSpaceParams};
use crate::geometry::{angular_distance, point_segment_distance};
use crate::histogram::{AngularSupport, Frame, HistogramConfig, HistogramParams, PolarHistogram};
use crate::planner::{self, DecisionRecord, Plan, PlanStep};
use crate::scene::{ObjectId, Scene};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    /// Density below which a direction counts as open.
    pub threshold: f64,
    /// Ratio of each bump's standard deviation to the obstacle's enlargement angle.
    pub sigma_scale: f64,
}

impl Default for GaussianParams {
    fn default() -> Self {
        Self {
            threshold: 0.1,
            sigma_scale: 0.5,
        }
    }
}

impl GaussianParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold.is_finite() && self.threshold > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tau {} must be > 0",
                self.threshold
            )));
        }
        if !(self.sigma_scale.is_finite() && self.sigma_scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma scale {} must be > 0",
                self.sigma_scale
            )));
        }
        Ok(())
    }
}

/// Obstacles whose inflated disk meets the closed base-to-target segment, nearest to the base first.
pub fn corridor_blockers(scene: &Scene, params: &CSpaceParams) -> Result<Vec<ObjectId>> {
    let target = scene
        .target()
        .ok_or(Error::UnknownObject(scene.target_id))?;
    let mut hits: Vec<(f64, ObjectId)> = cspace::inflate(scene, params, scene.target_id)?
        .into_iter()
        .filter(|o| point_segment_distance(o.center, scene.base, target.center) <= o.r_total)
        .map(|o| (o.center.distance(scene.base), o.source_id))
        .collect();
    hits.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(hits.into_iter().map(|(_, id)| id).collect())
}

fn bare(id: ObjectId) -> PlanStep {
    PlanStep {
        object_id: id,
        decision: None,
        chain: Vec::new(),
    }
}

/// Removes every corridor blocker in order, then the target.
pub fn straight_line_plan(scene: &Scene, params: &CSpaceParams) -> Result<Plan> {
    scene.validate()?;
    let mut steps: Vec<PlanStep> = corridor_blockers(scene, params)?
        .into_iter()
        .map(bare)
        .collect();
    steps.push(bare(scene.target_id));
    Ok(Plan { steps })
}

/// Next grasp of the straight-line strategy on the current scene.
pub fn straight_line_step(scene: &Scene, params: &CSpaceParams) -> Result<PlanStep> {
    let next = corridor_blockers(scene, params)?
        .first()
        .copied()
        .unwrap_or(scene.target_id);
    Ok(bare(next))
}

/// Per-sector density `Σ exp(-(θ-β)²/(2σ²))` seen from the target, `σ = sigma_scale·γ`.
pub fn gaussian_density(
    scene: &Scene,
    params: &CSpaceParams,
    hist: &HistogramParams,
    gp: &GaussianParams,
) -> Result<PolarHistogram> {
    hist.validate()?;
    let target = scene
        .target()
        .ok_or(Error::UnknownObject(scene.target_id))?;
    let frame = Frame::new(target.center, scene.base)?;
    let mut density = PolarHistogram::zeros(HistogramConfig::with_map_width(hist, 1));
    for obs in cspace::inflate(scene, params, scene.target_id)? {
        let support = AngularSupport::of(&obs, &frame, hist.alpha)?;
        let sigma = gp.sigma_scale * support.half_width;
        for k in 0..density.len() {
            let delta = angular_distance(density.sector_angle(k), support.beta);
            density.magnitudes[k] += (-(delta * delta) / (2.0 * sigma * sigma)).exp();
        }
    }
    Ok(density)
}

/// Next grasp of the Gaussian-density strategy.
pub fn gaussian_step(
    scene: &Scene,
    params: &CSpaceParams,
    hist: &HistogramParams,
    gp: &GaussianParams,
) -> Result<PlanStep> {
    gp.validate()?;
    let target = *scene
        .target()
        .ok_or(Error::UnknownObject(scene.target_id))?;
    let density = gaussian_density(scene, params, hist, gp)?;
    let argmin = density.argmin_angle();
    let min = density.min_magnitude();
    let d_max = planner::max_distance(scene, scene.target_id)?;
    let record = |chosen_c| DecisionRecord {
        d_max,
        argmin_sector: argmin,
        chosen_c,
        histogram_min_magnitude: min,
    };
    if min < gp.threshold || scene.len() == 1 {
        return Ok(PlanStep {
            object_id: scene.target_id,
            decision: Some(record(None)),
            chain: Vec::new(),
        });
    }
    let frame = Frame::new(target.center, scene.base)?;
    let (c, _, id) = scene
        .objects
        .iter()
        .filter(|o| o.id != scene.target_id)
        .map(|o| {
            (
                angular_distance(frame.bearing(o.center), argmin),
                o.center.distance(target.center),
                o.id,
            )
        })
        .min_by(|a, b| {
            a.0.total_cmp(&b.0)
                .then(a.1.total_cmp(&b.1))
                .then(a.2.cmp(&b.2))
        })
        .expect("scene has an obstacle");
    Ok(PlanStep {
        object_id: id,
        decision: Some(record(Some(c))),
        chain: Vec::new(),
    })
}

/// Removes obstacles one at a time, recomputing the density after each removal.
pub fn gaussian_plan(
    scene: &Scene,
    params: &CSpaceParams,
    hist: &HistogramParams,
    gp: &GaussianParams,
) -> Result<Plan> {
    planner::iterate(scene, |s| gaussian_step(s, params, hist, gp))
}
