//! `blayer`: run the built-in benchmarks or a config file and write CSV, VTK and a summary.

use anyhow::Context;
use blayer_core::bench::{run_to_dir, Benchmark, BenchmarkConfig, PatchVariant, RunOptions, Summary};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "blayer", version, about = "Isogeometric boundary-layer benchmarks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output directory (default: out/<benchmark id>).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for independent refinement levels.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Seed recorded in the summary; all runs are deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Exit nonzero when an acceptance criterion fails.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Straight,
    Inclined,
    Curved,
}

impl From<Variant> for PatchVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Straight => PatchVariant::Straight,
            Variant::Inclined => PatchVariant::Inclined,
            Variant::Curved => PatchVariant::Curved,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Offset accuracy tables for the three offset methods.
    OffsetValidate {
        /// Curve patch file (default: built-in quadratic test curve).
        #[arg(long)]
        curve: Option<String>,
    },
    /// Constant-stress patch tests across an embedded interface.
    PatchTest {
        /// Run only these variants (repeatable).
        #[arg(long, value_enum)]
        variant: Vec<Variant>,
    },
    /// Pure-bending beam on the cross-hatched background mesh.
    BendingBeam,
    /// Energy-norm convergence of the contact block.
    ConvergenceBlock,
    /// Hertzian contact of a half-cylinder against a rigid plate.
    Hertz {
        /// Load levels (repeatable; default 0.3 and 0.5).
        #[arg(long)]
        p: Vec<f64>,
        /// Skip the selective-refinement run.
        #[arg(long)]
        no_selective: bool,
    },
    /// Run a benchmark config file.
    Run { config: PathBuf },
    /// Print the default config of a benchmark.
    DefaultConfig { id: String },
}

fn exit_code(category: &str) -> u8 {
    match category {
        "config" => 2,
        "geometry" => 3,
        "solver" => 4,
        "acceptance" => 5,
        _ => 6,
    }
}

fn config_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error [config]: {e}");
    ExitCode::from(exit_code("config"))
}

fn build_config(cmd: Command) -> anyhow::Result<BenchmarkConfig> {
    let default = |id: &str| -> anyhow::Result<Benchmark> { Ok(Benchmark::default_for(id)?) };
    let b = match cmd {
        Command::OffsetValidate { curve } => {
            let mut b = default("offset-validate")?;
            if let (Benchmark::OffsetValidate(c), Some(f)) = (&mut b, curve) {
                c.curve = f;
            }
            b
        }
        Command::PatchTest { variant } => {
            let mut b = default("patch-test")?;
            if let Benchmark::PatchTest(c) = &mut b {
                if !variant.is_empty() {
                    c.variants = variant.into_iter().map(Into::into).collect();
                }
            }
            b
        }
        Command::BendingBeam => default("bending-beam")?,
        Command::ConvergenceBlock => default("convergence-block")?,
        Command::Hertz { p, no_selective } => {
            let mut b = default("hertz")?;
            if let Benchmark::Hertz(c) = &mut b {
                if !p.is_empty() {
                    c.loads = p;
                }
                if no_selective {
                    c.selective = None;
                }
            }
            b
        }
        Command::Run { config } => {
            let text = std::fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            return Ok(BenchmarkConfig::parse(&text)?);
        }
        Command::DefaultConfig { .. } => unreachable!(),
    };
    Ok(BenchmarkConfig::new(b))
}

fn report(sum: &Summary, out: &std::path::Path) {
    for c in &sum.criteria {
        println!("[{}] {}: {:.6e} ({})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value, c.threshold);
    }
    println!("{}: {} in {:.1} s, artifacts in {}", sum.benchmark, sum.status, sum.runtime_s, out.display());
    if !sum.message.is_empty() {
        println!("{}", sum.message);
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Command::DefaultConfig { id } = &cli.command {
        return match Benchmark::default_for(id).and_then(|b| BenchmarkConfig::new(b).to_toml()) {
            Ok(t) => {
                print!("{t}");
                ExitCode::SUCCESS
            }
            Err(e) => config_error(e),
        };
    }
    let g = cli.global;
    let cfg = match build_config(cli.command) {
        Ok(c) => c,
        Err(e) => return config_error(format!("{e:#}")),
    };
    if g.jobs == 0 {
        return config_error("--jobs must be at least 1");
    }
    let out = g.out.or_else(|| cfg.output.as_ref().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("out").join(cfg.benchmark.id()));
    let sum = run_to_dir(&cfg, &RunOptions { jobs: g.jobs, seed: g.seed }, &out);
    report(&sum, &out);
    match sum.status.as_str() {
        "pass" => ExitCode::SUCCESS,
        "fail" if !g.strict => ExitCode::SUCCESS,
        _ => {
            eprintln!("error [{}]: {}", sum.category, sum.message);
            ExitCode::from(exit_code(&sum.category))
        }
    }
}
