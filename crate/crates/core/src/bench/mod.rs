//! Built-in benchmarks, configuration files and run artifacts.

pub mod beam;
pub mod config;
pub mod convergence;
pub mod custom;
pub mod hertz;
pub mod model;
pub mod offset_validate;
pub mod patch;
pub mod report;

pub use config::*;
pub use hertz::{hertz_reference, HertzReference};
pub use model::{element_stresses, LayeredModel, LayeredSetup};
pub use report::{fmt_f, linear_r2, loglog_slope, Artifacts, Csv, CriterionResult, Summary};

use crate::error::Result;
use std::path::Path;
use std::time::Instant;

#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Worker threads for independent ladder levels (1 = serial).
    pub jobs: usize,
    /// Recorded in the summary; all built-in runs are deterministic.
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { jobs: 1, seed: 0 }
    }
}

/// Run a benchmark in memory.
pub fn run_benchmark(cfg: &BenchmarkConfig, opts: &RunOptions) -> Result<(Summary, Artifacts)> {
    cfg.validate()?;
    let t = Instant::now();
    let (mut sum, art) = match &cfg.benchmark {
        Benchmark::OffsetValidate(c) => offset_validate::run_offset_validate(c)?,
        Benchmark::PatchTest(c) => patch::run_patch_test(c)?,
        Benchmark::BendingBeam(c) => beam::run_bending_beam(c)?,
        Benchmark::ConvergenceBlock(c) => convergence::run_convergence_block(c, opts.jobs)?,
        Benchmark::Hertz(c) => hertz::run_hertz(c, opts.jobs)?,
        Benchmark::Custom(c) => custom::run_custom(c)?,
    };
    sum.runtime_s = t.elapsed().as_secs_f64();
    sum.metric("seed", opts.seed as f64);
    Ok((sum, art))
}

/// Run and write artifacts plus `summary.toml` into `out`; the summary is written on failure too.
pub fn run_to_dir(cfg: &BenchmarkConfig, opts: &RunOptions, out: &Path) -> Summary {
    let t = Instant::now();
    let sum = match run_benchmark(cfg, opts).and_then(|(s, a)| a.write_all(out).map(|_| s)) {
        Ok(s) => s,
        Err(e) => {
            let mut s = Summary::from_error(cfg.benchmark.id(), &e);
            s.runtime_s = t.elapsed().as_secs_f64();
            s
        }
    };
    let _ = std::fs::create_dir_all(out);
    if let Err(e) = std::fs::write(out.join("summary.toml"), sum.to_toml()) {
        log::error!("cannot write summary: {e}");
    }
    sum
}
