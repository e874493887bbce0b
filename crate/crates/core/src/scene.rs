//! Scene description, random instance generation and the scene file format.

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cspace::CSpaceParams;
use crate::geometry::{Point2, Rect};
use crate::oracle;
use crate::{Error, Result};

/// Placement attempts per disk before generation gives up.
pub const REJECTION_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectId(pub u32);

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A circular object on the table, either the target or an obstacle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectDisk {
    pub id: ObjectId,
    pub center: Point2,
    pub radius: f64,
}

impl ObjectDisk {
    pub fn new(id: u32, x: f64, y: f64, radius: f64) -> Self {
        Self {
            id: ObjectId(id),
            center: Point2::new(x, y),
            radius,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub workspace: Rect,
    /// Shoulder position of the manipulator.
    pub base: Point2,
    pub objects: Vec<ObjectDisk>,
    pub target_id: ObjectId,
}

impl Scene {
    /// Builds a scene and checks every invariant.
    pub fn new(
        workspace: Rect,
        base: Point2,
        objects: Vec<ObjectDisk>,
        target_id: ObjectId,
    ) -> Result<Self> {
        let scene = Self {
            workspace,
            base,
            objects,
            target_id,
        };
        scene.validate()?;
        Ok(scene)
    }

    pub fn validate(&self) -> Result<()> {
        let ws = &self.workspace;
        if !(ws.xmin.is_finite()
            && ws.ymin.is_finite()
            && ws.xmax.is_finite()
            && ws.ymax.is_finite())
            || ws.xmax <= ws.xmin
            || ws.ymax <= ws.ymin
        {
            return Err(Error::InvalidScene(format!("degenerate workspace {ws:?}")));
        }
        if !(self.base.x.is_finite() && self.base.y.is_finite()) {
            return Err(Error::InvalidScene("base is not finite".into()));
        }
        if ws.interior_contains(self.base) {
            return Err(Error::InvalidScene(
                "base must lie on or outside a workspace edge".into(),
            ));
        }
        let mut ids: Vec<ObjectId> = Vec::with_capacity(self.objects.len());
        for obj in &self.objects {
            if !(obj.radius.is_finite() && obj.radius > 0.0) {
                return Err(Error::InvalidScene(format!(
                    "object {} has non-positive radius {}",
                    obj.id, obj.radius
                )));
            }
            if !(obj.center.x.is_finite() && obj.center.y.is_finite())
                || !ws.contains_disk(obj.center, obj.radius)
            {
                return Err(Error::InvalidScene(format!(
                    "object {} does not fit inside the workspace",
                    obj.id
                )));
            }
            if ids.contains(&obj.id) {
                return Err(Error::InvalidScene(format!(
                    "duplicate object id {}",
                    obj.id
                )));
            }
            ids.push(obj.id);
        }
        if !ids.contains(&self.target_id) {
            return Err(Error::InvalidScene(format!(
                "target {} is not among the objects",
                self.target_id
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn get(&self, id: ObjectId) -> Option<&ObjectDisk> {
        self.objects.iter().find(|o| o.id == id)
    }

    pub fn contains(&self, id: ObjectId) -> bool {
        self.get(id).is_some()
    }

    pub fn target(&self) -> Option<&ObjectDisk> {
        self.get(self.target_id)
    }

    /// Deletes an object, returning it if present.
    pub fn remove(&mut self, id: ObjectId) -> Option<ObjectDisk> {
        let idx = self.objects.iter().position(|o| o.id == id)?;
        Some(self.objects.remove(idx))
    }

    /// Multiplies every coordinate and radius by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let ws = self.workspace;
        Self {
            workspace: Rect {
                xmin: ws.xmin * factor,
                ymin: ws.ymin * factor,
                xmax: ws.xmax * factor,
                ymax: ws.ymax * factor,
            },
            base: self.base * factor,
            objects: self
                .objects
                .iter()
                .map(|o| ObjectDisk {
                    id: o.id,
                    center: o.center * factor,
                    radius: o.radius * factor,
                })
                .collect(),
            target_id: self.target_id,
        }
    }

    /// Smallest clearance `|c_a - c_b| - r_a - r_b` over all pairs, or `None` with fewer than two objects.
    pub fn min_clearance(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for (i, a) in self.objects.iter().enumerate() {
            for b in &self.objects[i + 1..] {
                let gap = a.center.distance(b.center) - a.radius - b.radius;
                best = Some(best.map_or(gap, |g| g.min(gap)));
            }
        }
        best
    }
}

/// How the generator designates the target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TargetPolicy {
    /// Uniformly among the placed disks.
    Uniform,
    /// The disk placed at this index.
    Index(usize),
    /// Uniformly among disks with no open approach ray; placements without one are redrawn.
    Occluded { cspace: CSpaceParams, window: f64 },
}

/// Scene redraws allowed under [`TargetPolicy::Occluded`].
pub const OCCLUSION_BUDGET: usize = 1_000;

/// Parameters of the random instance generator.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    /// Number of objects including the target.
    pub n_objects: usize,
    pub workspace_side: f64,
    /// Inclusive-exclusive interval of disk diameters, meters.
    pub diameter_range: (f64, f64),
    pub seed: u64,
    /// Required clearance between any two disks, meters.
    pub min_gap: f64,
    pub target: TargetPolicy,
    /// Distance of the base point outside the accessible edge, meters.
    pub base_offset: f64,
}

impl GenSpec {
    /// Tabletop defaults: 0.5 m square, diameters U(6, 7.5) cm, 5 mm clearance.
    pub fn tabletop(n_objects: usize, seed: u64) -> Self {
        Self {
            n_objects,
            workspace_side: 0.5,
            diameter_range: (0.06, 0.075),
            seed,
            min_gap: 0.005,
            target: TargetPolicy::Uniform,
            base_offset: 0.05,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.diameter_range;
        if self.n_objects < 1 {
            return Err(Error::InvalidParameter(
                "n_objects must be at least 1".into(),
            ));
        }
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi >= lo) {
            return Err(Error::InvalidParameter(format!(
                "diameter range [{lo}, {hi}] must be positive and ordered"
            )));
        }
        if !(self.workspace_side.is_finite() && self.workspace_side > hi) {
            return Err(Error::InvalidParameter(format!(
                "workspace side {} must exceed the largest diameter",
                self.workspace_side
            )));
        }
        if !(self.min_gap.is_finite() && self.min_gap >= 0.0) {
            return Err(Error::InvalidParameter(
                "min_gap must be non-negative".into(),
            ));
        }
        if !(self.base_offset.is_finite() && self.base_offset >= 0.0) {
            return Err(Error::InvalidParameter(
                "base_offset must be non-negative".into(),
            ));
        }
        if let TargetPolicy::Index(idx) = self.target {
            if idx >= self.n_objects {
                return Err(Error::InvalidParameter(format!(
                    "target index {idx} out of range for {} objects",
                    self.n_objects
                )));
            }
        }
        Ok(())
    }
}

/// Random sequential placement of non-overlapping disks.
///
/// The robot base sits `base_offset` below the midpoint of the bottom edge, so
/// the workspace is reachable from that one side only.
pub fn generate(spec: &GenSpec) -> Result<Scene> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let workspace = Rect::square(spec.workspace_side);
    let base = Point2::new(
        workspace.xmin + workspace.width() / 2.0,
        workspace.ymin - spec.base_offset,
    );
    let draws = match spec.target {
        TargetPolicy::Occluded { .. } => OCCLUSION_BUDGET,
        _ => 1,
    };
    for _ in 0..draws {
        let objects = place_disks(spec, workspace, &mut rng)?;
        let target_index = match spec.target {
            TargetPolicy::Index(idx) => idx,
            TargetPolicy::Uniform => rng.gen_range(0..objects.len()),
            TargetPolicy::Occluded { cspace, window } => {
                let probe = Scene {
                    workspace,
                    base,
                    objects: objects.clone(),
                    target_id: objects[0].id,
                };
                let mut blocked = Vec::new();
                for (i, o) in objects.iter().enumerate() {
                    if !oracle::ray_accessible(&probe, o.id, &cspace, window)?.accessible {
                        blocked.push(i);
                    }
                }
                if blocked.is_empty() {
                    continue;
                }
                blocked[rng.gen_range(0..blocked.len())]
            }
        };
        let target_id = objects[target_index].id;
        return Scene::new(workspace, base, objects, target_id);
    }
    Err(Error::InvalidParameter(format!(
        "no placement with an occluded object in {OCCLUSION_BUDGET} draws"
    )))
}

fn place_disks(spec: &GenSpec, workspace: Rect, rng: &mut ChaCha8Rng) -> Result<Vec<ObjectDisk>> {
    let (lo, hi) = spec.diameter_range;
    let mut objects: Vec<ObjectDisk> = Vec::with_capacity(spec.n_objects);
    for i in 0..spec.n_objects {
        let diameter = if hi > lo { rng.gen_range(lo..hi) } else { lo };
        let radius = diameter / 2.0;
        let mut placed = false;
        for _ in 0..REJECTION_BUDGET {
            let center = Point2::new(
                rng.gen_range(workspace.xmin + radius..=workspace.xmax - radius),
                rng.gen_range(workspace.ymin + radius..=workspace.ymax - radius),
            );
            let clear = objects
                .iter()
                .all(|o| o.center.distance(center) >= o.radius + radius + spec.min_gap);
            if clear {
                objects.push(ObjectDisk {
                    id: ObjectId(i as u32),
                    center,
                    radius,
                });
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::DensityInfeasible {
                placed: objects.len(),
                requested: spec.n_objects,
                attempts: REJECTION_BUDGET,
            });
        }
    }
    Ok(objects)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    workspace: Rect,
    base: Point2,
    target_id: ObjectId,
    objects: Vec<ObjectRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectRecord {
    id: ObjectId,
    x: f64,
    y: f64,
    radius: f64,
}

impl SceneFile {
    fn from_scene(scene: &Scene) -> Self {
        Self {
            workspace: scene.workspace,
            base: scene.base,
            target_id: scene.target_id,
            objects: scene
                .objects
                .iter()
                .map(|o| ObjectRecord {
                    id: o.id,
                    x: o.center.x,
                    y: o.center.y,
                    radius: o.radius,
                })
                .collect(),
        }
    }
}

impl Serialize for Scene {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        SceneFile::from_scene(self).serialize(serializer)
    }
}

/// Parses and validates a scene file.
pub fn load_scene(text: &str) -> Result<Scene> {
    let file: SceneFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let objects = file
        .objects
        .into_iter()
        .map(|r| ObjectDisk {
            id: r.id,
            center: Point2::new(r.x, r.y),
            radius: r.radius,
        })
        .collect();
    Scene::new(file.workspace, file.base, objects, file.target_id)
}

/// Serializes a scene; floats are written in shortest round-trip form.
pub fn save_scene(scene: &Scene) -> String {
    let mut text = serde_json::to_string_pretty(&SceneFile::from_scene(scene))
        .expect("scene serialization is infallible");
    text.push('\n');
    text
}
