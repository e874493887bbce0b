//! Benchmark campaigns: methods × object counts × seeds on shared scenes.

use std::fmt::Write as _;

use serde::Serialize;

use crate::oracle::{self, MAX_ENUMERATION};
use crate::par::{self, Execution};
use crate::planner::{Method, PlannerConfig};
use crate::scene::{self, GenSpec, Scene};
use crate::sim::{self, SimConfig};
use crate::Result;

/// Default threshold grid searched for the Gaussian method.
pub const TAU_GRID: [f64; 12] = [
    0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.135, 0.2, 0.3, 0.5, 1.0,
];

#[derive(Debug, Clone, PartialEq)]
pub enum TauChoice {
    /// Use the configured threshold as is.
    Fixed,
    /// Pick, per object count, the threshold with the highest valid-grasp rate,
    /// then the fewest mean relocations.
    GridSearch(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub methods: Vec<Method>,
    pub n_list: Vec<usize>,
    pub seeds: Vec<u64>,
    /// Generator settings; `n_objects` and `seed` are overwritten per cell.
    pub template: GenSpec,
    pub planner: PlannerConfig,
    pub tau: TauChoice,
    pub perturbation: f64,
    pub with_oracle: bool,
    /// Record decision times; disable for reproducible output.
    pub timing: bool,
    pub exec: Execution,
}

impl BenchSpec {
    pub fn new(methods: Vec<Method>, n_list: Vec<usize>, seed_count: u64) -> Self {
        Self {
            methods,
            n_list,
            seeds: (0..seed_count).collect(),
            template: GenSpec::tabletop(1, 0),
            planner: PlannerConfig::default(),
            tau: TauChoice::GridSearch(TAU_GRID.to_vec()),
            perturbation: 0.0,
            with_oracle: true,
            timing: true,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub method: Method,
    pub n_objects: usize,
    pub seed: u64,
    pub relocations: usize,
    pub oracle_k: Option<usize>,
    pub mean_decision_time: f64,
    /// Target grasped within the step limit through an open approach ray.
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub method: Method,
    pub n_objects: usize,
    pub runs: usize,
    pub mean_relocations: f64,
    pub sd_relocations: f64,
    /// Mean of `relocations - oracle_k` over runs with an oracle value.
    pub mean_oracle_gap: Option<f64>,
    pub mean_decision_time: f64,
    pub success_rate: f64,
    /// Threshold used, for the Gaussian method.
    pub tau: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    pub summary: Vec<SummaryRow>,
}

/// Sample mean and (n-1) standard deviation.
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

struct Cell {
    n: usize,
    seed: u64,
    scene: Scene,
    oracle_k: Option<usize>,
}

fn run_one(
    cell: &Cell,
    method: Method,
    cfg: &PlannerConfig,
    spec: &BenchSpec,
) -> Result<BenchRecord> {
    let sim_cfg = SimConfig {
        perturbation: spec.perturbation,
        seed: cell.seed,
        ..SimConfig::static_run(cell.n.max(1))
    };
    let r = sim::run(&cell.scene, method, cfg, &sim_cfg)?;
    Ok(BenchRecord {
        method,
        n_objects: cell.n,
        seed: cell.seed,
        relocations: r.relocations,
        oracle_k: cell.oracle_k,
        mean_decision_time: if spec.timing {
            r.mean_decision_time()
        } else {
            0.0
        },
        success: r.success && r.target_accessible,
    })
}

fn summarize(method: Method, n: usize, records: &[BenchRecord], tau: Option<f64>) -> SummaryRow {
    let relocs: Vec<f64> = records.iter().map(|r| r.relocations as f64).collect();
    let (mean, sd) = mean_sd(&relocs);
    let gaps: Vec<f64> = records
        .iter()
        .filter_map(|r| r.oracle_k.map(|k| r.relocations as f64 - k as f64))
        .collect();
    let times: Vec<f64> = records.iter().map(|r| r.mean_decision_time).collect();
    SummaryRow {
        method,
        n_objects: n,
        runs: records.len(),
        mean_relocations: mean,
        sd_relocations: sd,
        mean_oracle_gap: (!gaps.is_empty()).then(|| mean_sd(&gaps).0),
        mean_decision_time: mean_sd(&times).0,
        success_rate: records.iter().filter(|r| r.success).count() as f64
            / records.len().max(1) as f64,
        tau,
    }
}

/// Runs the full factorial. Rows come back ordered by (method, n, seed) as listed in `spec`.
pub fn run_campaign(spec: &BenchSpec) -> Result<BenchReport> {
    spec.planner.validate()?;
    let keys: Vec<(usize, u64)> = spec
        .n_list
        .iter()
        .flat_map(|&n| spec.seeds.iter().map(move |&s| (n, s)))
        .collect();
    let cells: Vec<Cell> = par::map(spec.exec, &keys, |&(n, seed)| {
        let gen = GenSpec {
            n_objects: n,
            seed,
            ..spec.template.clone()
        };
        let scene = scene::generate(&gen)?;
        let oracle_k = if spec.with_oracle && n <= MAX_ENUMERATION {
            let cs = &spec.planner.cspace;
            Some(
                oracle::min_relocation_set(
                    &scene,
                    cs,
                    spec.planner.histogram.window,
                    Execution::Sequential,
                )?
                .k,
            )
        } else {
            None
        };
        Ok(Cell {
            n,
            seed,
            scene,
            oracle_k,
        })
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let mut records = Vec::new();
    let mut summary = Vec::new();
    for &method in &spec.methods {
        for &n in &spec.n_list {
            let group: Vec<&Cell> = cells.iter().filter(|c| c.n == n).collect();
            let candidates: Vec<Option<f64>> = match (method, &spec.tau) {
                (Method::Gaussian, TauChoice::GridSearch(grid)) if !grid.is_empty() => {
                    grid.iter().map(|&t| Some(t)).collect()
                }
                (Method::Gaussian, _) => vec![Some(spec.planner.gaussian.threshold)],
                _ => vec![None],
            };
            let jobs: Vec<(Option<f64>, &Cell)> = candidates
                .iter()
                .flat_map(|&tau| group.iter().map(move |&c| (tau, c)))
                .collect();
            let results: Vec<BenchRecord> = par::map(spec.exec, &jobs, |&(tau, cell)| {
                let mut cfg = spec.planner;
                if let Some(t) = tau {
                    cfg.gaussian.threshold = t;
                }
                run_one(cell, method, &cfg, spec)
            })
            .into_iter()
            .collect::<Result<_>>()?;

            let per_tau = group.len();
            let mut best: Option<(usize, SummaryRow)> = None;
            for (i, &tau) in candidates.iter().enumerate() {
                let slice = &results[i * per_tau..(i + 1) * per_tau];
                let row = summarize(method, n, slice, tau);
                let better = match &best {
                    None => true,
                    Some((_, b)) => {
                        row.success_rate > b.success_rate
                            || (row.success_rate == b.success_rate
                                && row.mean_relocations < b.mean_relocations)
                    }
                };
                if better {
                    best = Some((i, row));
                }
            }
            let (i, row) = best.expect("at least one candidate");
            records.extend_from_slice(&results[i * per_tau..(i + 1) * per_tau]);
            summary.push(row);
        }
    }
    Ok(BenchReport { records, summary })
}

impl BenchReport {
    pub fn summary_for(&self, method: Method, n: usize) -> Option<&SummaryRow> {
        self.summary
            .iter()
            .find(|r| r.method == method && r.n_objects == n)
    }

    pub const RECORD_HEADER: &'static str =
        "method,n_objects,seed,relocations,oracle_k,mean_decision_time,success";
    pub const SUMMARY_HEADER: &'static str =
        "method,n_objects,runs,mean_relocations,sd_relocations,mean_oracle_gap,mean_decision_time,success_rate,tau";

    /// Record rows, a blank line, then the per-(method, n) summary.
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut out = String::new();
        let _ = writeln!(out, "{}", Self::RECORD_HEADER);
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.method,
                r.n_objects,
                r.seed,
                r.relocations,
                r.oracle_k.map(|k| k.to_string()).unwrap_or_default(),
                r.mean_decision_time,
                r.success
            );
        }
        out.push('\n');
        let _ = writeln!(out, "{}", Self::SUMMARY_HEADER);
        for s in &self.summary {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                s.method,
                s.n_objects,
                s.runs,
                s.mean_relocations,
                s.sd_relocations,
                opt(s.mean_oracle_gap),
                s.mean_decision_time,
                s.success_rate,
                opt(s.tau)
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("report serialization is infallible");
        text.push('\n');
        text
    }
}
