//! Threshold-free polar histogram seen from the acting target.
//!
//! Angles are degrees in a frame whose 0° ray points from the acting target to
//! the robot base; positive angles are counter-clockwise. Each inflated obstacle
//! occupies the sectors its disk subtends and contributes `a - b·d²` there (`d`
//! in map cells). The constants satisfy `a - b·((w_s - 1)/2)² = 1`, so any
//! obstacle inside the map contributes at least 1 and a zero sector always means
//! an unobstructed approach ray.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cspace::InflatedObstacle;
use crate::geometry::Point2;
use crate::{Error, Result};

/// Magnitudes below this count as free.
pub const ZERO_TOLERANCE: f64 = 1e-9;

/// User-facing histogram settings; magnitude constants are derived per call.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramParams {
    /// Sector width, degrees.
    pub alpha: f64,
    /// Half-angle of the approach cone around the base direction, degrees.
    pub window: f64,
    /// Edge length of one map cell, meters.
    pub cell: f64,
}

impl Default for HistogramParams {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            window: 45.0,
            cell: 0.005,
        }
    }
}

impl HistogramParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha {} must be > 0",
                self.alpha
            )));
        }
        if !(self.window > 0.0 && self.window <= 180.0) {
            return Err(Error::InvalidParameter(format!(
                "window {} must be in (0, 180]",
                self.window
            )));
        }
        if !(self.cell.is_finite() && self.cell > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "cell {} must be > 0",
                self.cell
            )));
        }
        Ok(())
    }
}

/// Fully resolved histogram configuration for one local map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramConfig {
    pub alpha: f64,
    pub window: f64,
    pub cell: f64,
    pub a: f64,
    pub b: f64,
    /// Square map width `w_s`, cells (odd, target at the center cell).
    pub map_width: u64,
}

impl HistogramConfig {
    /// Map just large enough to hold a disk of radius `d_max` around the target, with `b = 1`.
    pub fn for_range(params: &HistogramParams, d_max: f64) -> Result<Self> {
        params.validate()?;
        if !(d_max.is_finite() && d_max >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "d_max {d_max} must be >= 0"
            )));
        }
        let half = (d_max / params.cell).ceil().max(1.0) as u64;
        Ok(Self::with_map_width(params, 2 * half + 1))
    }

    /// Configuration for an explicit map width, with `b = 1` and `a` from the boundary condition.
    pub fn with_map_width(params: &HistogramParams, map_width: u64) -> Self {
        let half = (map_width.saturating_sub(1)) as f64 / 2.0;
        Self {
            alpha: params.alpha,
            window: params.window,
            cell: params.cell,
            a: 1.0 + half * half,
            b: 1.0,
            map_width,
        }
    }

    pub fn validate(&self) -> Result<()> {
        HistogramParams {
            alpha: self.alpha,
            window: self.window,
            cell: self.cell,
        }
        .validate()?;
        if !(self.a > 0.0 && self.b > 0.0) {
            return Err(Error::InvalidParameter("a and b must be positive".into()));
        }
        let residual = self.a - self.b * self.map_radius_cells().powi(2) - 1.0;
        if residual.abs() > 1e-9 * self.a.max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "a - b((w_s-1)/2)^2 = {} but must equal 1",
                residual + 1.0
            )));
        }
        Ok(())
    }

    /// `(w_s - 1) / 2`.
    pub fn map_radius_cells(&self) -> f64 {
        (self.map_width.saturating_sub(1)) as f64 / 2.0
    }

    pub fn sector_count(&self) -> usize {
        ((2.0 * self.window / self.alpha) + 1e-9).floor() as usize + 1
    }

    pub fn sector_angle(&self, k: usize) -> f64 {
        -self.window + k as f64 * self.alpha
    }

    /// Magnitude contributed at distance `d` meters, `a - b·(d/cell)²`.
    pub fn magnitude_at(&self, distance: f64) -> f64 {
        let cells = distance / self.cell;
        self.a - self.b * cells * cells
    }
}

/// Enlargement half-angle in sectors: `asin(r_total / d) / alpha`, saturating at `90 / alpha`.
pub fn enlargement_angle(r_total: f64, distance: f64, alpha: f64) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::Degenerate(format!(
            "distance {distance} must be > 0"
        )));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha {alpha} must be > 0"
        )));
    }
    let ratio = r_total / distance;
    let degrees = if ratio >= 1.0 {
        90.0
    } else {
        ratio.asin().to_degrees()
    };
    Ok(degrees / alpha)
}

/// Rotated frame centered on the acting target, 0° toward the base.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    origin: Point2,
    forward: Point2,
}

impl Frame {
    pub fn new(origin: Point2, base: Point2) -> Result<Self> {
        let toward = base - origin;
        let len = toward.norm();
        if !(len > 0.0) {
            return Err(Error::Degenerate(
                "acting target coincides with the base".into(),
            ));
        }
        Ok(Self {
            origin,
            forward: Point2::new(toward.x / len, toward.y / len),
        })
    }

    pub fn origin(&self) -> Point2 {
        self.origin
    }

    /// Bearing of `p` in degrees, `(-180, 180]`.
    pub fn bearing(&self, p: Point2) -> f64 {
        let v = p - self.origin;
        self.forward
            .cross(v)
            .atan2(self.forward.dot(v))
            .to_degrees()
    }
}

/// Bearing and distance of an inflated obstacle, with its angular half-width in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularSupport {
    pub beta: f64,
    pub distance: f64,
    pub half_width: f64,
}

impl AngularSupport {
    pub fn of(obs: &InflatedObstacle, frame: &Frame, alpha: f64) -> Result<Self> {
        let distance = obs.center.distance(frame.origin());
        if !(distance > 0.0) {
            return Err(Error::Degenerate(format!(
                "obstacle {} is centered on the acting target",
                obs.source_id
            )));
        }
        let gamma = enlargement_angle(obs.r_total, distance, alpha)?;
        Ok(Self {
            beta: frame.bearing(obs.center),
            distance,
            half_width: gamma * alpha,
        })
    }

    /// Whether sector `[center - alpha/2, center + alpha/2)` meets the closed support.
    pub fn touches_sector(&self, center: f64, alpha: f64) -> bool {
        let lo = self.beta - self.half_width;
        let hi = self.beta + self.half_width;
        [-360.0, 0.0, 360.0]
            .iter()
            .any(|shift| center - alpha / 2.0 <= hi + shift && center + alpha / 2.0 > lo + shift)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarHistogram {
    pub config: HistogramConfig,
    pub magnitudes: Vec<f64>,
}

impl PolarHistogram {
    pub fn zeros(config: HistogramConfig) -> Self {
        Self {
            magnitudes: vec![0.0; config.sector_count()],
            config,
        }
    }

    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    pub fn sector_angle(&self, k: usize) -> f64 {
        self.config.sector_angle(k)
    }

    pub fn is_free(&self, k: usize) -> bool {
        self.magnitudes[k] < ZERO_TOLERANCE
    }

    pub fn min_magnitude(&self) -> f64 {
        self.magnitudes
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn has_free_sector(&self) -> bool {
        self.min_magnitude() < ZERO_TOLERANCE
    }

    /// Index of the minimum-magnitude sector.
    ///
    /// Ties go to the sector nearest 0°, then to the negative side.
    pub fn argmin(&self) -> usize {
        let min = self.min_magnitude();
        let tied = |m: f64| {
            if min < ZERO_TOLERANCE {
                m < ZERO_TOLERANCE
            } else {
                m - min <= ZERO_TOLERANCE * min.max(1.0)
            }
        };
        let mut best: Option<usize> = None;
        for (k, &m) in self.magnitudes.iter().enumerate() {
            if !tied(m) {
                continue;
            }
            best = match best {
                None => Some(k),
                Some(b) => {
                    let (ab, ak) = (self.sector_angle(b), self.sector_angle(k));
                    if ak.abs() < ab.abs() || (ak.abs() == ab.abs() && ak < ab) {
                        Some(k)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best.unwrap_or(0)
    }

    pub fn argmin_angle(&self) -> f64 {
        self.sector_angle(self.argmin())
    }

    pub fn add_assign(&mut self, other: &PolarHistogram) {
        for (m, o) in self.magnitudes.iter_mut().zip(&other.magnitudes) {
            *m += o;
        }
    }

    /// `sector_angle_deg,magnitude` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sector_angle_deg,magnitude\n");
        for (k, m) in self.magnitudes.iter().enumerate() {
            let _ = writeln!(out, "{},{}", self.sector_angle(k), m);
        }
        out
    }
}

fn accumulate(hist: &mut PolarHistogram, support: &AngularSupport) {
    let cfg = hist.config;
    if support.distance / cfg.cell > cfg.map_radius_cells() {
        // outside the local map
        return;
    }
    let magnitude = cfg.magnitude_at(support.distance);
    for (k, m) in hist.magnitudes.iter_mut().enumerate() {
        if support.touches_sector(cfg.sector_angle(k), cfg.alpha) {
            *m += magnitude;
        }
    }
}

/// Histogram of a single obstacle. Obstacles beyond the map radius contribute nothing.
pub fn obstacle_histogram(
    obs: &InflatedObstacle,
    frame: &Frame,
    cfg: &HistogramConfig,
) -> Result<PolarHistogram> {
    let support = AngularSupport::of(obs, frame, cfg.alpha)?;
    let mut hist = PolarHistogram::zeros(*cfg);
    accumulate(&mut hist, &support);
    Ok(hist)
}

/// Sector-wise sum of every obstacle's histogram.
pub fn total_histogram(
    obstacles: &[InflatedObstacle],
    target_center: Point2,
    base: Point2,
    cfg: &HistogramConfig,
) -> Result<PolarHistogram> {
    let frame = Frame::new(target_center, base)?;
    let mut hist = PolarHistogram::zeros(*cfg);
    for obs in obstacles {
        let support = AngularSupport::of(obs, &frame, cfg.alpha)?;
        accumulate(&mut hist, &support);
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::ObjectId;
    use approx::assert_relative_eq;

    fn params() -> HistogramParams {
        HistogramParams::default()
    }

    // Target at the origin, base straight down the negative y axis.
    fn frame() -> Frame {
        Frame::new(Point2::new(0.0, 0.0), Point2::new(0.0, -1.0)).unwrap()
    }

    fn at_bearing(id: u32, beta_deg: f64, distance: f64, r_total: f64) -> InflatedObstacle {
        // 0° is -y; positive bearings are counter-clockwise, toward +x.
        let phi = (beta_deg - 90.0).to_radians();
        InflatedObstacle {
            source_id: ObjectId(id),
            center: Point2::new(distance * phi.cos(), distance * phi.sin()),
            r_total,
        }
    }

    #[test]
    fn enlargement_closed_forms() {
        assert_relative_eq!(
            enlargement_angle(0.5, 1.0, 1.0).unwrap(),
            30.0,
            epsilon = 1e-12
        );
        assert_eq!(enlargement_angle(1.0, 1.0, 1.0).unwrap(), 90.0);
        assert_eq!(enlargement_angle(2.0, 1.0, 1.0).unwrap(), 90.0);
        assert_eq!(enlargement_angle(2.0, 1.0, 2.0).unwrap(), 45.0);
        assert!(enlargement_angle(0.1, 0.0, 1.0).is_err());
        assert!(enlargement_angle(0.1, -1.0, 1.0).is_err());
    }

    #[test]
    fn enlargement_matches_scalar_oracle() {
        // asin(0.475) from the series sum x + x^3/6 + 3x^5/40 + ... to convergence.
        let x: f64 = 0.475;
        let mut term = x;
        let mut sum = 0.0;
        let mut n = 0u32;
        while term.abs() > 1e-18 {
            sum += term;
            let k = n as f64;
            term *= x * x * (2.0 * k + 1.0) * (2.0 * k + 1.0) / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
            n += 1;
        }
        let expected = sum * 180.0 / std::f64::consts::PI;
        assert_relative_eq!(expected, 28.3594, epsilon = 1e-4);
        assert_relative_eq!(
            enlargement_angle(0.095, 0.20, 1.0).unwrap(),
            expected,
            epsilon = 1e-10
        );
    }

    #[test]
    fn constants_satisfy_boundary_condition() {
        let cfg = HistogramConfig::with_map_width(&params(), 101);
        assert_eq!(cfg.a, 2501.0);
        assert_eq!(cfg.b, 1.0);
        cfg.validate().unwrap();
        let bad = HistogramConfig { a: 10.0, ..cfg };
        assert!(bad.validate().is_err());

        let ranged = HistogramConfig::for_range(&params(), 0.25).unwrap();
        assert_eq!(ranged.map_width, 101);
        ranged.validate().unwrap();
    }

    #[test]
    fn sector_layout() {
        let cfg = HistogramConfig::with_map_width(&params(), 101);
        assert_eq!(cfg.sector_count(), 91);
        assert_eq!(cfg.sector_angle(0), -45.0);
        assert_eq!(cfg.sector_angle(45), 0.0);
        assert_eq!(cfg.sector_angle(90), 45.0);
        let coarse = HistogramParams {
            alpha: 2.0,
            ..params()
        };
        assert_eq!(
            HistogramConfig::with_map_width(&coarse, 11).sector_count(),
            46
        );
    }

    #[test]
    fn boundary_distance_gives_unit_magnitude() {
        let cfg = HistogramConfig::with_map_width(&params(), 101);
        // 50 cells of 5 mm
        let obs = at_bearing(1, 0.0, 0.25, 0.05);
        let h = obstacle_histogram(&obs, &frame(), &cfg).unwrap();
        let hits: Vec<f64> = h.magnitudes.iter().copied().filter(|&m| m > 0.0).collect();
        assert!(!hits.is_empty());
        for m in hits {
            assert_relative_eq!(m, 1.0, epsilon = 1e-9);
        }
        assert_relative_eq!(h.magnitudes[45], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn twenty_cells_gives_2101_over_support() {
        let cfg = HistogramConfig::with_map_width(&params(), 101);
        let obs = at_bearing(1, 0.0, 0.1, 0.05);
        let h = obstacle_histogram(&obs, &frame(), &cfg).unwrap();
        let gamma = enlargement_angle(0.05, 0.1, 1.0).unwrap();
        assert_relative_eq!(gamma, 30.0, epsilon = 1e-12);
        for k in 0..h.len() {
            let angle = h.sector_angle(k);
            if angle.abs() <= 30.0 {
                assert_relative_eq!(h.magnitudes[k], 2101.0, epsilon = 1e-9);
            } else if angle.abs() > 31.0 {
                assert_eq!(h.magnitudes[k], 0.0, "sector {angle}");
            }
        }
    }

    #[test]
    fn support_outside_window_is_invisible() {
        let cfg = HistogramConfig::with_map_width(&params(), 101);
        let r_total = 0.1 * 10f64.to_radians().sin();
        let obs = at_bearing(1, 60.0, 0.1, r_total);
        let h = obstacle_histogram(&obs, &frame(), &cfg).unwrap();
        assert!(h.magnitudes.iter().all(|&m| m == 0.0));
    }

    #[test]
    fn saturated_obstacle_blocks_its_half_plane() {
        let cfg = HistogramConfig::with_map_width(&params(), 101);
        let behind = at_bearing(1, 180.0, 0.05, 0.1);
        assert!(obstacle_histogram(&behind, &frame(), &cfg)
            .unwrap()
            .magnitudes
            .iter()
            .all(|&m| m == 0.0));
        let side = at_bearing(2, 90.0, 0.05, 0.1);
        let h = obstacle_histogram(&side, &frame(), &cfg).unwrap();
        // support [0, 180]: sectors from -0.5 upward are hit
        assert_eq!(h.magnitudes[44], 0.0);
        assert!(h.magnitudes[45..].iter().all(|&m| m > 0.0));
    }

    #[test]
    fn coincident_centers_rejected() {
        let cfg = HistogramConfig::with_map_width(&params(), 101);
        let obs = InflatedObstacle {
            source_id: ObjectId(1),
            center: Point2::new(0.0, 0.0),
            r_total: 0.1,
        };
        assert!(obstacle_histogram(&obs, &frame(), &cfg).is_err());
    }

    #[test]
    fn beyond_map_radius_contributes_nothing() {
        let cfg = HistogramConfig::with_map_width(&params(), 21);
        let obs = at_bearing(1, 0.0, 0.2, 0.05);
        let h = obstacle_histogram(&obs, &frame(), &cfg).unwrap();
        assert!(h.magnitudes.iter().all(|&m| m == 0.0));
    }

    #[test]
    fn empty_and_doubled_sums() {
        let cfg = HistogramConfig::with_map_width(&params(), 101);
        let origin = Point2::new(0.0, 0.0);
        let base = Point2::new(0.0, -1.0);
        let empty = total_histogram(&[], origin, base, &cfg).unwrap();
        assert!(empty.magnitudes.iter().all(|&m| m == 0.0));
        assert!(empty.has_free_sector());

        let obs = at_bearing(1, 12.0, 0.12, 0.04);
        let single = total_histogram(&[obs], origin, base, &cfg).unwrap();
        let double = total_histogram(&[obs, obs], origin, base, &cfg).unwrap();
        for (s, d) in single.magnitudes.iter().zip(&double.magnitudes) {
            assert_eq!(2.0 * s, *d);
        }
    }

    #[test]
    fn flanked_corridor_has_zero_sector() {
        let cfg = HistogramConfig::with_map_width(&params(), 101);
        let left = at_bearing(1, -35.0, 0.15, 0.15 * 20f64.to_radians().sin());
        let right = at_bearing(2, 35.0, 0.15, 0.15 * 20f64.to_radians().sin());
        let h = total_histogram(
            &[left, right],
            Point2::new(0.0, 0.0),
            Point2::new(0.0, -1.0),
            &cfg,
        )
        .unwrap();
        assert!(h.has_free_sector());
        assert_eq!(h.argmin_angle(), 0.0);
        assert!(h.magnitudes[0] > 0.0 && h.magnitudes[90] > 0.0);
    }

    #[test]
    fn argmin_ties_prefer_center_then_negative() {
        let cfg = HistogramConfig::with_map_width(&params(), 101);
        let mut h = PolarHistogram::zeros(cfg);
        h.magnitudes.iter_mut().for_each(|m| *m = 5.0);
        h.magnitudes[40] = 2.0; // -5°
        h.magnitudes[50] = 2.0; // +5°
        assert_eq!(h.argmin_angle(), -5.0);
        h.magnitudes[48] = 2.0;
        assert_eq!(h.argmin_angle(), 3.0);
    }

    #[test]
    fn csv_dump() {
        let cfg = HistogramConfig::with_map_width(
            &HistogramParams {
                alpha: 45.0,
                ..params()
            },
            11,
        );
        let h = PolarHistogram::zeros(cfg);
        assert_eq!(h.to_csv(), "sector_angle_deg,magnitude\n-45,0\n0,0\n45,0\n");
    }
}
