//! Static SVG snapshots of a scene, its C-space and the target's histogram.

use std::fmt::Write as _;

use crate::cspace::{self, CSpaceParams};
use crate::geometry::Point2;
use crate::histogram::{HistogramParams, PolarHistogram};
use crate::planner::{self, Plan};
use crate::scene::{ObjectId, Scene};
use crate::Result;

const PX_PER_M: f64 = 1000.0;
const MARGIN: f64 = 40.0;
const PANEL_HEIGHT: f64 = 160.0;

#[derive(Debug, Clone, Default)]
pub struct RenderOptions {
    /// Draw the C-space outline of every obstacle relative to the target.
    pub inflated: bool,
    /// Append a bar panel with the target's polar histogram.
    pub histogram: bool,
    /// Label objects with their position in this plan.
    pub plan: Option<Plan>,
    pub cspace: CSpaceParams,
    pub hist: HistogramParams,
}

/// Histogram the planner sees for the scene's target with every object in range.
pub fn target_histogram(
    scene: &Scene,
    cs: &CSpaceParams,
    hist: &HistogramParams,
) -> Result<PolarHistogram> {
    let d_max = planner::max_distance(scene, scene.target_id)?;
    Ok(planner::accessibility_check(scene, scene.target_id, d_max, cs, hist)?.histogram)
}

struct View {
    xmin: f64,
    ymax: f64,
}

impl View {
    fn px(&self, p: Point2) -> (f64, f64) {
        (
            MARGIN + (p.x - self.xmin) * PX_PER_M,
            MARGIN + (self.ymax - p.y) * PX_PER_M,
        )
    }
}

pub fn render_svg(scene: &Scene, opts: &RenderOptions) -> Result<String> {
    scene.validate()?;
    let ws = scene.workspace;
    // the view covers the workspace and the base
    let xmin = ws.xmin.min(scene.base.x);
    let xmax = ws.xmax.max(scene.base.x);
    let ymin = ws.ymin.min(scene.base.y);
    let ymax = ws.ymax.max(scene.base.y);
    let view = View { xmin, ymax };
    let width = 2.0 * MARGIN + (xmax - xmin) * PX_PER_M;
    let scene_height = 2.0 * MARGIN + (ymax - ymin) * PX_PER_M;
    let histogram = if opts.histogram {
        Some(target_histogram(scene, &opts.cspace, &opts.hist)?)
    } else {
        None
    };
    let height = scene_height
        + if histogram.is_some() {
            PANEL_HEIGHT + MARGIN
        } else {
            0.0
        };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
    let (x0, y0) = view.px(Point2::new(ws.xmin, ws.ymax));
    let _ = writeln!(
        svg,
        r##"<rect class="workspace" x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="#f4f1ea" stroke="#555"/>"##,
        ws.width() * PX_PER_M,
        ws.height() * PX_PER_M
    );
    let (bx, by) = view.px(scene.base);
    let _ = writeln!(
        svg,
        r##"<polygon class="base" points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="#2a7"/>"##,
        bx,
        by - 8.0,
        bx - 8.0,
        by + 6.0,
        bx + 8.0,
        by + 6.0
    );

    if opts.inflated {
        for obs in cspace::inflate(scene, &opts.cspace, scene.target_id)? {
            let (cx, cy) = view.px(obs.center);
            let _ = writeln!(
                svg,
                r##"<ellipse class="inflated" data-id="{}" cx="{cx:.2}" cy="{cy:.2}" rx="{r:.2}" ry="{r:.2}" fill="none" stroke="#c44" stroke-dasharray="4 3"/>"##,
                obs.source_id,
                r = obs.r_total * PX_PER_M
            );
        }
    }

    for obj in &scene.objects {
        let (cx, cy) = view.px(obj.center);
        let (class, fill) = if obj.id == scene.target_id {
            ("object target", "#3a3")
        } else {
            ("object obstacle", "#c33")
        };
        let _ = writeln!(
            svg,
            r##"<circle class="{class}" data-id="{}" cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" fill="{fill}" stroke="#222"/>"##,
            obj.id,
            obj.radius * PX_PER_M
        );
    }

    if let Some(plan) = &opts.plan {
        for (i, step) in plan.steps.iter().enumerate() {
            if let Some(obj) = scene.get(step.object_id) {
                let (cx, cy) = view.px(obj.center);
                let _ = writeln!(
                    svg,
                    r##"<text class="order" x="{cx:.2}" y="{:.2}" text-anchor="middle" font-size="14" fill="#fff">{}</text>"##,
                    cy + 5.0,
                    i + 1
                );
            }
        }
    }

    if let Some(h) = &histogram {
        write_histogram_panel(&mut svg, h, width, scene_height, scene.target_id);
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn write_histogram_panel(
    svg: &mut String,
    h: &PolarHistogram,
    width: f64,
    top: f64,
    target: ObjectId,
) {
    let panel_width = width - 2.0 * MARGIN;
    let bar_width = panel_width / h.len().max(1) as f64;
    let peak = h.magnitudes.iter().copied().fold(0.0, f64::max).max(1.0);
    let floor = top + PANEL_HEIGHT;
    let _ = writeln!(
        svg,
        r##"<g class="histogram" data-target="{target}"><line x1="{MARGIN:.2}" y1="{floor:.2}" x2="{:.2}" y2="{floor:.2}" stroke="#555"/>"##,
        MARGIN + panel_width
    );
    for (k, &m) in h.magnitudes.iter().enumerate() {
        let x = MARGIN + k as f64 * bar_width;
        let angle = h.sector_angle(k);
        if h.is_free(k) {
            let _ = writeln!(
                svg,
                r##"<rect class="bar free" data-angle="{angle}" data-magnitude="{m}" x="{x:.2}" y="{:.2}" width="{bar_width:.2}" height="3.00" fill="#3a3"/>"##,
                floor - 3.0
            );
        } else {
            let bar = m / peak * PANEL_HEIGHT;
            let _ = writeln!(
                svg,
                r##"<rect class="bar" data-angle="{angle}" data-magnitude="{m}" x="{x:.2}" y="{:.2}" width="{bar_width:.2}" height="{bar:.2}" fill="#c33"/>"##,
                floor - bar
            );
        }
    }
    let _ = writeln!(
        svg,
        r##"<text x="{MARGIN:.2}" y="{:.2}" font-size="12">{:.0}°</text><text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{:.0}°</text></g>"##,
        floor + 16.0,
        h.sector_angle(0),
        MARGIN + panel_width,
        floor + 16.0,
        h.sector_angle(h.len().saturating_sub(1))
    );
}
