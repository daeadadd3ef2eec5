//! Acceptance report: runs every built-in benchmark with its default configuration and
//! prints one pass/fail line per acceptance criterion.
//!
//! Criteria listed in `KNOWN_RED` are reported (and print FAIL when they fail) but do not
//! fail the test; the README documents why they are not met.

mod common;

use blayer_core::bench::{run_benchmark, Benchmark, BenchmarkConfig, RunOptions, Summary};
use blayer_core::mesh::ElementKind;
use common::*;
use std::time::Instant;

const KNOWN_RED: &[usize] = &[1];

struct Line {
    id: usize,
    title: &'static str,
    pass: bool,
    runtime_s: f64,
    cap_s: f64,
    detail: String,
}

fn run(id: &str) -> Summary {
    let cfg = BenchmarkConfig::new(Benchmark::default_for(id).unwrap());
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    run_benchmark(&cfg, &RunOptions { jobs, seed: 0 }).unwrap().0
}

/// Pass when every matching check passes (and at least one matches).
fn line(id: usize, title: &'static str, sum: &Summary, select: impl Fn(&str) -> bool, runtime_s: f64, cap_s: f64) -> Line {
    let checks: Vec<_> = sum.criteria.iter().filter(|c| select(&c.name)).collect();
    let detail = checks
        .iter()
        .map(|c| format!("{} = {:.4e} [{}]{}", c.name, c.value, c.threshold, if c.pass { "" } else { " FAIL" }))
        .collect::<Vec<_>>()
        .join("; ");
    let pass = !checks.is_empty() && checks.iter().all(|c| c.pass) && runtime_s <= cap_s;
    Line { id, title, pass, runtime_s, cap_s, detail }
}

fn metric(sum: &Summary, key: &str) -> f64 {
    sum.metrics.get(key).copied().unwrap_or(f64::NAN)
}

fn property_line() -> Line {
    let t = Instant::now();
    let mut worst = [0.0f64; 6];
    for degree in 1..5 {
        for k in 0..=20 {
            let w: Vec<f64> = (0..16).map(|i| 0.3 + (i * 7 % 5) as f64 * 0.4).collect();
            worst[0] = worst[0].max(partition_of_unity_defect(degree, &[0.3, 0.55, 0.71], &w, k as f64 / 20.0));
        }
    }
    for (h, bump, r) in [(0.5, 0.0, 1), (1.0, 0.2, 3), (0.7, -0.15, 6)] {
        worst[1] = worst[1].max(biorthogonality_defect(h, bump, r));
    }
    for kind in [ElementKind::Quad4, ElementKind::Quad8, ElementKind::Nurbs] {
        for seed in 0..3 {
            worst[2] = worst[2].max(tangent_defect(kind, 0.2, 0.05, seed));
        }
    }
    for (mid, cells, r) in [(2.6, 4, 3), (2.2, 5, 4), (2.85, 7, 2)] {
        worst[3] = worst[3].max(row_sum_defect(mid, cells, r));
    }
    for (y, n) in [([0.5, 2.5, 1.0], 3), ([1.5, 1.5, 1.5], 4), ([2.7, 0.3, 2.2], 9)] {
        for kind in [ElementKind::Quad4, ElementKind::Quad8] {
            worst[4] = worst[4].max(area_conservation_defect(y[0], y[1], y[2], n, n + 1, kind));
        }
    }
    for (load, cells) in [(0.1, 4), (0.05, 8)] {
        worst[5] = worst[5].max(kkt_defect(load, cells));
    }
    let limits = [1e-12, 1e-12, 1e-6, 1e-10, 1e-12, 1e-8];
    let names = ["partition of unity", "biorthogonality", "FD tangent (rel)", "D*/kappa row sums", "cut-cell area", "KKT"];
    let detail = names
        .iter()
        .zip(worst.iter().zip(&limits))
        .map(|(n, (w, l))| format!("{n} = {w:.2e} [<= {l:.0e}]{}", if w <= l { "" } else { " FAIL" }))
        .collect::<Vec<_>>()
        .join("; ");
    let runtime_s = t.elapsed().as_secs_f64();
    let pass = worst.iter().zip(&limits).all(|(w, l)| w <= l) && runtime_s <= 300.0;
    Line { id: 9, title: "property suites", pass, runtime_s, cap_s: 300.0, detail }
}

#[test]
fn acceptance_criteria() {
    let mut lines = Vec::new();

    let ov = run("offset-validate");
    lines.push(line(1, "surface offset errors", &ov, |n| n.starts_with("surface"), metric(&ov, "runtime.surface_s"), 60.0));
    lines.push(line(2, "curve offset ordering", &ov, |n| n.starts_with("curve"), metric(&ov, "runtime.curve_s"), 30.0));
    lines.push(line(3, "circular-arc offset exactness", &ov, |n| n.starts_with("circular"), metric(&ov, "runtime.arcs_s"), 5.0));

    let pt = run("patch-test");
    lines.push(line(4, "patch tests", &pt, |_| true, pt.runtime_s, 60.0));

    let bb = run("bending-beam");
    lines.push(line(5, "mesh-locking study", &bb, |_| true, bb.runtime_s, 120.0));

    let cb = run("convergence-block");
    lines.push(line(6, "energy-norm convergence", &cb, |_| true, cb.runtime_s, 600.0));

    let hz = run("hertz");
    let sel = metric(&hz, "selective.runtime_s");
    lines.push(line(7, "Hertz contact", &hz, |n| !n.starts_with("selective"), hz.runtime_s - sel, 600.0));
    let mut l8 = line(8, "selective refinement", &hz, |n| n.starts_with("selective"), sel, 120.0);
    l8.detail.push_str(&format!("; dofs = {}", metric(&hz, "selective.dofs")));
    lines.push(l8);

    lines.push(property_line());

    println!();
    for l in &lines {
        let tag = match (l.pass, KNOWN_RED.contains(&l.id)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("criterion {}: {tag} - {} ({:.1} s, cap {} s) :: {}", l.id, l.title, l.runtime_s, l.cap_s, l.detail);
    }
    let unexpected: Vec<usize> = lines.iter().filter(|l| !l.pass && !KNOWN_RED.contains(&l.id)).map(|l| l.id).collect();
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
}
