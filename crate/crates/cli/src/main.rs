use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rearrange::bench::{run_campaign, BenchSpec, TauChoice, TAU_GRID};
use rearrange::oracle::{min_relocation_set, ray_accessible};
use rearrange::par::Execution;
use rearrange::render::{render_svg, target_histogram, RenderOptions};
use rearrange::scene::{generate, load_scene, save_scene, GenSpec, TargetPolicy};
use rearrange::sim::{run, RelocationPolicy, SimConfig};
use rearrange::{Error, Method, PlannerConfig, Scene};

#[derive(Parser)]
#[command(
    name = "rearrange",
    version,
    about = "Plan which objects to move before grasping a target in clutter",
    allow_negative_numbers = true
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Safety margin added around every obstacle, meters.
    #[arg(long, global = true)]
    safety_margin: Option<f64>,
    /// Gripper disk radius, meters.
    #[arg(long, global = true)]
    gripper_radius: Option<f64>,
    /// Sector width, degrees.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Half-angle of the approach window, degrees.
    #[arg(long, global = true)]
    window: Option<f64>,
    /// Histogram map cell size, meters.
    #[arg(long, global = true)]
    cell: Option<f64>,
    /// Gaussian density threshold. For bench, disables the grid search.
    #[arg(long, global = true)]
    tau: Option<f64>,
    #[arg(long, global = true)]
    sigma_scale: Option<f64>,
    /// Per-step perturbation half-width, meters.
    #[arg(long, global = true)]
    perturbation: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random tabletop scene.
    Gen(GenArgs),
    /// Plan a grasp sequence for a scene file.
    Plan {
        scene: PathBuf,
        #[arg(long, default_value = "proposed")]
        method: Method,
    },
    /// Run a seeded campaign over methods and object counts.
    Bench(BenchArgs),
    /// Exact minimum relocation count by exhaustive search (at most 15 objects).
    Oracle { scene: PathBuf },
    /// Draw a scene as SVG, or dump the target histogram with --format csv.
    Render(RenderArgs),
    /// Execute a plan step by step, optionally jittering the scene between grasps.
    Sim {
        scene: PathBuf,
        #[arg(long, default_value = "proposed")]
        method: Method,
        /// Maximum grasps; defaults to the object count.
        #[arg(long)]
        step_limit: Option<usize>,
        /// Zero the recorded decision times.
        #[arg(long)]
        no_timing: bool,
    },
}

#[derive(Args)]
struct GenArgs {
    /// Number of objects including the target.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    side: f64,
    #[arg(long, default_value_t = 0.06)]
    diameter_min: f64,
    #[arg(long, default_value_t = 0.075)]
    diameter_max: f64,
    #[arg(long, default_value_t = 0.005)]
    min_gap: f64,
    #[arg(long, default_value_t = 0.05)]
    base_offset: f64,
    /// Make the object placed at this index the target.
    #[arg(long, conflicts_with = "occluded")]
    target_index: Option<usize>,
    /// Only accept scenes whose target has no open approach ray.
    #[arg(long)]
    occluded: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "proposed,baseline,gaussian"
    )]
    methods: Vec<Method>,
    #[arg(long, value_delimiter = ',', default_value = "4,6,8,10")]
    n: Vec<usize>,
    /// Seeds per object count, starting at --seed.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    #[arg(long)]
    no_oracle: bool,
    /// Zero the recorded decision times for reproducible output.
    #[arg(long)]
    no_timing: bool,
    #[arg(long)]
    sequential: bool,
    /// Generate scenes whose target has no open approach ray.
    #[arg(long)]
    occluded: bool,
}

#[derive(Args)]
struct RenderArgs {
    scene: PathBuf,
    /// Append the target's polar histogram panel.
    #[arg(long)]
    histogram: bool,
    /// Outline inflated obstacles.
    #[arg(long)]
    inflated: bool,
    /// Label objects with their order in this method's plan.
    #[arg(long)]
    plan: Option<Method>,
}

enum Failure {
    Input(String),
    Planner(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Cycle(_) | Error::Degenerate(_) => Failure::Planner(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn config(g: &Global) -> Result<PlannerConfig, Failure> {
    let mut cfg = PlannerConfig::default();
    let set = |slot: &mut f64, v: Option<f64>| {
        if let Some(v) = v {
            *slot = v;
        }
    };
    set(&mut cfg.cspace.safety_margin, g.safety_margin);
    set(&mut cfg.cspace.gripper_radius, g.gripper_radius);
    set(&mut cfg.histogram.alpha, g.alpha);
    set(&mut cfg.histogram.window, g.window);
    set(&mut cfg.histogram.cell, g.cell);
    set(&mut cfg.gaussian.threshold, g.tau);
    set(&mut cfg.gaussian.sigma_scale, g.sigma_scale);
    cfg.validate()?;
    Ok(cfg)
}

fn read_scene(path: &Path) -> Result<Scene, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
    };
    Ok(load_scene(&text)?)
}

fn emit(g: &Global, text: &str) -> Result<(), Failure> {
    match &g.output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
        }
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable output");
    text.push('\n');
    text
}

#[derive(serde::Serialize)]
struct OracleReport<'a> {
    k: usize,
    witness: &'a [rearrange::ObjectId],
    accessible: bool,
    free_angles: &'a [(f64, f64)],
}

fn occluded(cfg: &PlannerConfig) -> TargetPolicy {
    TargetPolicy::Occluded {
        cspace: cfg.cspace,
        window: cfg.histogram.window,
    }
}

/// Returns `Ok(false)` when the command ran but the planner did not reach its goal.
fn execute(cli: &Cli) -> Result<bool, Failure> {
    let g = &cli.global;
    let cfg = config(g)?;
    let format = g.format.unwrap_or(Format::Json);
    match &cli.command {
        Command::Gen(a) => {
            let spec = GenSpec {
                n_objects: a.n,
                workspace_side: a.side,
                diameter_range: (a.diameter_min, a.diameter_max),
                seed: g.seed.unwrap_or(0),
                min_gap: a.min_gap,
                target: match (a.target_index, a.occluded) {
                    (Some(i), _) => TargetPolicy::Index(i),
                    (None, true) => occluded(&cfg),
                    (None, false) => TargetPolicy::Uniform,
                },
                base_offset: a.base_offset,
            };
            let scene = generate(&spec)?;
            let text = match format {
                Format::Json => save_scene(&scene),
                Format::Csv => {
                    let mut out = String::from("id,x,y,radius,target\n");
                    for o in &scene.objects {
                        out.push_str(&format!(
                            "{},{},{},{},{}\n",
                            o.id,
                            o.center.x,
                            o.center.y,
                            o.radius,
                            o.id == scene.target_id
                        ));
                    }
                    out
                }
            };
            emit(g, &text)?;
            Ok(true)
        }
        Command::Plan { scene, method } => {
            let scene = read_scene(scene)?;
            let plan = method.plan(&scene, &cfg)?;
            emit(
                g,
                &match format {
                    Format::Json => plan.to_json(),
                    Format::Csv => plan.to_csv(),
                },
            )?;
            Ok(true)
        }
        Command::Bench(a) => {
            let start = g.seed.unwrap_or(0);
            let mut spec = BenchSpec::new(a.methods.clone(), a.n.clone(), a.seeds);
            spec.seeds = (start..start + a.seeds).collect();
            spec.planner = cfg;
            spec.tau = match g.tau {
                Some(_) => TauChoice::Fixed,
                None => TauChoice::GridSearch(TAU_GRID.to_vec()),
            };
            spec.perturbation = g.perturbation.unwrap_or(0.0);
            spec.with_oracle = !a.no_oracle;
            spec.timing = !a.no_timing;
            spec.exec = if a.sequential {
                Execution::Sequential
            } else {
                Execution::default()
            };
            if a.occluded {
                spec.template.target = occluded(&cfg);
            }
            let report = run_campaign(&spec)?;
            emit(
                g,
                &match format {
                    Format::Json => report.to_json(),
                    Format::Csv => report.to_csv(),
                },
            )?;
            Ok(true)
        }
        Command::Oracle { scene } => {
            let scene = read_scene(scene)?;
            let w = cfg.histogram.window;
            let access = ray_accessible(&scene, scene.target_id, &cfg.cspace, w)?;
            let min = min_relocation_set(&scene, &cfg.cspace, w, Execution::default())?;
            let text = match format {
                Format::Json => json(&OracleReport {
                    k: min.k,
                    witness: &min.witness,
                    accessible: access.accessible,
                    free_angles: &access.free_angles,
                }),
                Format::Csv => {
                    let ids: Vec<String> = min.witness.iter().map(|id| id.to_string()).collect();
                    format!(
                        "k,witness,accessible\n{},{},{}\n",
                        min.k,
                        ids.join(";"),
                        access.accessible
                    )
                }
            };
            emit(g, &text)?;
            Ok(true)
        }
        Command::Render(a) => {
            let scene = read_scene(&a.scene)?;
            let text = match g.format {
                Some(Format::Csv) => {
                    target_histogram(&scene, &cfg.cspace, &cfg.histogram)?.to_csv()
                }
                Some(Format::Json) => {
                    return Err(Failure::Input(
                        "render writes SVG, or the histogram with --format csv".into(),
                    ))
                }
                None => {
                    let plan = a.plan.map(|m| m.plan(&scene, &cfg)).transpose()?;
                    let opts = RenderOptions {
                        inflated: a.inflated,
                        histogram: a.histogram,
                        plan,
                        cspace: cfg.cspace,
                        hist: cfg.histogram,
                    };
                    render_svg(&scene, &opts)?
                }
            };
            emit(g, &text)?;
            Ok(true)
        }
        Command::Sim {
            scene,
            method,
            step_limit,
            no_timing,
        } => {
            let scene = read_scene(scene)?;
            let sim = SimConfig {
                perturbation: g.perturbation.unwrap_or(0.0),
                reloc_policy: RelocationPolicy::Remove,
                step_limit: step_limit.unwrap_or(scene.len()),
                seed: g.seed.unwrap_or(0),
            };
            let mut result = run(&scene, *method, &cfg, &sim)?;
            if *no_timing {
                result = result.without_timing();
            }
            emit(
                g,
                &match format {
                    Format::Json => result.to_json(),
                    Format::Csv => result.to_csv(),
                },
            )?;
            if let Some(d) = &result.diagnostics {
                eprintln!("rearrange: {d}");
            }
            Ok(result.success)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Planner(msg)) => {
            eprintln!("rearrange: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("rearrange: {msg}");
            ExitCode::from(2)
        }
    }
}
