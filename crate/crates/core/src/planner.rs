//! Relocation planning with the polar histogram.
//!
//! [`accessibility_check`] looks at an acting target: if some approach sector is
//! empty the acting target itself is graspable, otherwise it names the obstacle
//! whose bearing lies closest to the least-occupied direction. [`replan_step`]
//! follows that chain of blockers from the real target until it reaches an
//! object that can be grasped right now. [`plan`] repeats this on the shrinking
//! scene until the target itself is taken.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::{self, GaussianParams};
use crate::cspace::{self, CSpaceParams};
use crate::geometry::angular_distance;
use crate::histogram::{
    self, AngularSupport, Frame, HistogramConfig, HistogramParams, PolarHistogram,
};
use crate::scene::{ObjectId, Scene};
use crate::{Error, Result};

/// Everything a removal strategy may need.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlannerConfig {
    pub cspace: CSpaceParams,
    pub histogram: HistogramParams,
    pub gaussian: GaussianParams,
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<()> {
        self.cspace.validate()?;
        self.histogram.validate()?;
        self.gaussian.validate()
    }

    /// Same configuration with every length multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            cspace: CSpaceParams {
                safety_margin: self.cspace.safety_margin * factor,
                gripper_radius: self.cspace.gripper_radius * factor,
            },
            histogram: HistogramParams {
                cell: self.histogram.cell * factor,
                ..self.histogram
            },
            gaussian: self.gaussian,
        }
    }
}

/// Audit trail of the decision that made an object graspable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecisionRecord {
    /// Radius of the local map around the grasped object, meters.
    pub d_max: f64,
    /// Direction of the least-occupied sector, degrees.
    pub argmin_sector: f64,
    /// Angular distance between this object's bearing and the free direction of
    /// the object it was cleared for. `None` for the original target.
    pub chosen_c: Option<f64>,
    pub histogram_min_magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanStep {
    pub object_id: ObjectId,
    pub decision: Option<DecisionRecord>,
    /// Blocker chain from the original target to `object_id` at decision time.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chain: Vec<ObjectId>,
}

/// Ordered grasps; the last one is the original target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub steps: Vec<PlanStep>,
}

impl Plan {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn relocations(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }

    pub fn order(&self) -> Vec<ObjectId> {
        self.steps.iter().map(|s| s.object_id).collect()
    }

    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("plan serialization is infallible");
        text.push('\n');
        text
    }

    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("step,object_id,d_max,argmin_sector,chosen_c,histogram_min_magnitude\n");
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for (i, s) in self.steps.iter().enumerate() {
            let d = s.decision;
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                i,
                s.object_id,
                opt(d.map(|d| d.d_max)),
                opt(d.map(|d| d.argmin_sector)),
                opt(d.and_then(|d| d.chosen_c)),
                opt(d.map(|d| d.histogram_min_magnitude)),
            ));
        }
        out
    }
}

/// Outcome of one accessibility check.
#[derive(Debug, Clone, PartialEq)]
pub struct Accessibility {
    /// The acting target when it is graspable, otherwise the obstacle to remove.
    pub object: ObjectId,
    pub d_max: f64,
    pub argmin_sector: f64,
    pub min_magnitude: f64,
    /// Angular criterion of the selected obstacle, `None` when the acting target is free.
    pub chosen_c: Option<f64>,
    pub histogram: PolarHistogram,
}

impl Accessibility {
    pub fn is_free(&self) -> bool {
        self.chosen_c.is_none()
    }
}

/// Largest center distance from `acting` to any other object, 0 if alone.
pub fn max_distance(scene: &Scene, acting: ObjectId) -> Result<f64> {
    let t = scene.get(acting).ok_or(Error::UnknownObject(acting))?;
    Ok(scene
        .objects
        .iter()
        .filter(|o| o.id != acting)
        .map(|o| o.center.distance(t.center))
        .fold(0.0, f64::max))
}

/// Decides what to grasp when trying to reach `acting_target`.
pub fn accessibility_check(
    scene: &Scene,
    acting_target: ObjectId,
    d_max: f64,
    params: &CSpaceParams,
    hist: &HistogramParams,
) -> Result<Accessibility> {
    check_ignoring(scene, acting_target, d_max, params, hist, &[])
}

/// Like [`accessibility_check`], but objects in `ignored` neither occupy sectors
/// nor compete for removal.
pub fn check_ignoring(
    scene: &Scene,
    acting_target: ObjectId,
    d_max: f64,
    params: &CSpaceParams,
    hist: &HistogramParams,
    ignored: &[ObjectId],
) -> Result<Accessibility> {
    if scene.is_empty() {
        return Err(Error::EmptyScene);
    }
    if !(d_max.is_finite() && d_max >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "d_max {d_max} must be >= 0"
        )));
    }
    let target = *scene
        .get(acting_target)
        .ok_or(Error::UnknownObject(acting_target))?;
    let frame = Frame::new(target.center, scene.base)?;
    let cfg = HistogramConfig::for_range(hist, d_max)?;

    let nearby: Vec<_> = cspace::inflate(scene, params, acting_target)?
        .into_iter()
        .filter(|o| !ignored.contains(&o.source_id))
        .filter(|o| o.center.distance(target.center) <= d_max)
        .collect();

    let histogram = histogram::total_histogram(&nearby, target.center, scene.base, &cfg)?;
    let argmin_sector = histogram.argmin_angle();
    let min_magnitude = histogram.min_magnitude();

    if histogram.has_free_sector() || nearby.is_empty() {
        return Ok(Accessibility {
            object: acting_target,
            d_max,
            argmin_sector,
            min_magnitude,
            chosen_c: None,
            histogram,
        });
    }

    let mut best: Option<(f64, f64, ObjectId)> = None;
    for obs in &nearby {
        let support = AngularSupport::of(obs, &frame, cfg.alpha)?;
        let c = angular_distance(support.beta, argmin_sector);
        let key = (c, support.distance, obs.source_id);
        let better = match best {
            None => true,
            Some(b) => {
                key.0 < b.0 || (key.0 == b.0 && (key.1 < b.1 || (key.1 == b.1 && key.2 < b.2)))
            }
        };
        if better {
            best = Some(key);
        }
    }
    let (c, _, object) = best.expect("nearby is non-empty");
    Ok(Accessibility {
        object,
        d_max,
        argmin_sector,
        min_magnitude,
        chosen_c: Some(c),
        histogram,
    })
}

/// Next object to grasp in the current scene.
///
/// Stateless: starting from the scene's target it follows blockers until an
/// object with a free approach sector is found. Objects already on the chain are
/// ignored while clearing their own blockers so the chain cannot loop.
pub fn replan_step(
    scene: &Scene,
    params: &CSpaceParams,
    hist: &HistogramParams,
) -> Result<PlanStep> {
    if scene.is_empty() {
        return Err(Error::EmptyScene);
    }
    let mut chain = vec![scene.target_id];
    let mut nominated_c: Option<f64> = None;
    loop {
        let acting = *chain.last().expect("chain starts non-empty");
        let d_max = max_distance(scene, acting)?;
        let ancestors = &chain[..chain.len() - 1];
        let check = check_ignoring(scene, acting, d_max, params, hist, ancestors)?;
        if check.object == acting {
            return Ok(PlanStep {
                object_id: acting,
                decision: Some(DecisionRecord {
                    d_max,
                    argmin_sector: check.argmin_sector,
                    chosen_c: nominated_c,
                    histogram_min_magnitude: check.min_magnitude,
                }),
                chain,
            });
        }
        if chain.contains(&check.object) {
            return Err(Error::Cycle(check.object));
        }
        nominated_c = check.chosen_c;
        chain.push(check.object);
    }
}

/// Full relocation sequence ending with the target.
pub fn plan(scene: &Scene, params: &CSpaceParams, hist: &HistogramParams) -> Result<Plan> {
    iterate(scene, |s| replan_step(s, params, hist))
}

/// Grasps whatever `next` names until the target is gone.
pub(crate) fn iterate(
    scene: &Scene,
    mut next: impl FnMut(&Scene) -> Result<PlanStep>,
) -> Result<Plan> {
    scene.validate()?;
    let mut working = scene.clone();
    let mut steps: Vec<PlanStep> = Vec::new();
    loop {
        let step = next(&working)?;
        let id = step.object_id;
        if working.remove(id).is_none() {
            return Err(Error::Cycle(id));
        }
        steps.push(step);
        if id == scene.target_id {
            return Ok(Plan { steps });
        }
        if steps.len() >= scene.len() {
            // every obstacle is gone and the target was still refused
            return Err(Error::Cycle(scene.target_id));
        }
    }
}

/// Removal strategy selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Proposed,
    Baseline,
    Gaussian,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Proposed, Method::Baseline, Method::Gaussian];

    pub fn name(self) -> &'static str {
        match self {
            Method::Proposed => "proposed",
            Method::Baseline => "baseline",
            Method::Gaussian => "gaussian",
        }
    }

    /// One stateless decision on the current scene.
    pub fn next_step(self, scene: &Scene, cfg: &PlannerConfig) -> Result<PlanStep> {
        match self {
            Method::Proposed => replan_step(scene, &cfg.cspace, &cfg.histogram),
            Method::Baseline => baselines::straight_line_step(scene, &cfg.cspace),
            Method::Gaussian => {
                baselines::gaussian_step(scene, &cfg.cspace, &cfg.histogram, &cfg.gaussian)
            }
        }
    }

    pub fn plan(self, scene: &Scene, cfg: &PlannerConfig) -> Result<Plan> {
        match self {
            Method::Proposed => plan(scene, &cfg.cspace, &cfg.histogram),
            Method::Baseline => baselines::straight_line_plan(scene, &cfg.cspace),
            Method::Gaussian => {
                baselines::gaussian_plan(scene, &cfg.cspace, &cfg.histogram, &cfg.gaussian)
            }
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "proposed" => Ok(Method::Proposed),
            "baseline" => Ok(Method::Baseline),
            "gaussian" => Ok(Method::Gaussian),
            other => Err(Error::UnknownMethod(other.to_string())),
        }
    }
}
