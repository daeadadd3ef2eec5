//! Browser bindings for three small demos. Every entry point returns a JSON string;
//! the `*_json` functions are plain Rust and testable natively.

use blayer_core::bench::hertz::{hertz_reference, solve_hertz, HertzMesh};
use blayer_core::bench::offset_validate::table_curve;
use blayer_core::bench::HertzConfig;
use blayer_core::nurbs::NurbsPatch;
use blayer_core::offset::{exact_offset_point, offset, offset_error_metrics, OffsetMethod, OffsetRequest};
use serde::Serialize;
use wasm_bindgen::prelude::*;

type Pts = Vec<[f64; 2]>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn sample_curve(c: &NurbsPatch, n: usize) -> Result<Pts, String> {
    let (a, b) = c.domain(0);
    (0..=n).map(|k| c.curve_point(a + (b - a) * k as f64 / n as f64).map(|v| v.0).map_err(err)).collect()
}

fn control_polygon(c: &NurbsPatch) -> Pts {
    (0..c.n_points()).map(|i| [c.point(i)[0], c.point(i)[1]]).collect()
}

fn parse_method(name: &str) -> Result<OffsetMethod, String> {
    OffsetMethod::ALL.into_iter().find(|m| m.name() == name).ok_or_else(|| format!("unknown offset method '{name}'"))
}

#[derive(Serialize)]
struct OffsetView {
    base: Pts,
    base_polygon: Pts,
    exact: Pts,
    offset: Pts,
    offset_polygon: Pts,
    e_inf: f64,
    e_l2: f64,
    iterations: usize,
}

/// Offset of the built-in quadratic test curve by `distance` with the named method.
pub fn offset_explorer_json(distance: f64, method: &str) -> Result<String, String> {
    let base = table_curve().map_err(err)?;
    let r = offset(&base, &OffsetRequest::new(distance, parse_method(method)?)).map_err(err)?;
    let (e_inf, e_l2) = offset_error_metrics(&base, &r.offset, distance, false, 200).map_err(err)?;
    let (a, b) = base.domain(0);
    let n = 200;
    let exact = (0..=n)
        .map(|k| exact_offset_point(&base, &[a + (b - a) * k as f64 / n as f64], distance, false).map(|p| [p[0], p[1]]).map_err(err))
        .collect::<Result<Pts, String>>()?;
    let view = OffsetView {
        base: sample_curve(&base, n)?,
        base_polygon: control_polygon(&base),
        exact,
        offset: sample_curve(&r.offset, n)?,
        offset_polygon: control_polygon(&r.offset),
        e_inf,
        e_l2,
        iterations: r.iterations,
    };
    serde_json::to_string(&view).map_err(err)
}

#[derive(Serialize)]
struct HertzView {
    b: f64,
    p_max: f64,
    analytic: Vec<[f64; 2]>,
    /// Empty when `level` is zero.
    numeric: Vec<[f64; 2]>,
    numeric_p_max: f64,
    dofs: usize,
}

/// Analytic Hertz profile at load `p`, plus a coupled layer/background solve when `level` > 0.
pub fn hertz_profile_json(p: f64, level: f64) -> Result<String, String> {
    let cfg = HertzConfig::default();
    let hr = hertz_reference(p, cfg.radius, cfg.e, cfg.nu).map_err(err)?;
    let n = 100;
    let analytic = (0..=n)
        .map(|k| {
            let x = -1.5 * hr.b + 3.0 * hr.b * k as f64 / n as f64;
            [x, hr.pressure_or_zero(x)]
        })
        .collect();
    let mut view = HertzView { b: hr.b, p_max: hr.p_max, analytic, numeric: Vec::new(), numeric_p_max: 0.0, dofs: 0 };
    if level > 0.0 {
        let run = solve_hertz(&cfg, &HertzMesh::uniform(&cfg, level), p).map_err(err)?;
        view.numeric = run.profile.iter().map(|&(x, l)| [x, l]).collect();
        view.numeric_p_max = run.p_max;
        view.dofs = run.model.dofs();
    }
    serde_json::to_string(&view).map_err(err)
}

#[derive(Serialize)]
struct KnotView {
    knots_before: Vec<f64>,
    knots_after: Vec<f64>,
    polygon_before: Pts,
    polygon_after: Pts,
    curve: Pts,
    /// Max distance between the curves before and after insertion.
    max_deviation: f64,
}

/// Insert knot `u` (`mult` times) into the built-in test curve.
pub fn knot_insertion_json(u: f64, mult: usize) -> Result<String, String> {
    let base = table_curve().map_err(err)?;
    let refined = base.insert_knot(0, u, mult).map_err(err)?;
    let n = 200;
    let before = sample_curve(&base, n)?;
    let after = sample_curve(&refined, n)?;
    let max_deviation = before.iter().zip(&after).map(|(a, b)| (a[0] - b[0]).hypot(a[1] - b[1])).fold(0.0, f64::max);
    let view = KnotView {
        knots_before: base.knot_vector(0).knots().to_vec(),
        knots_after: refined.knot_vector(0).knots().to_vec(),
        polygon_before: control_polygon(&base),
        polygon_after: control_polygon(&refined),
        curve: after,
        max_deviation,
    };
    serde_json::to_string(&view).map_err(err)
}

#[wasm_bindgen]
pub fn offset_explorer(distance: f64, method: &str) -> Result<String, JsValue> {
    offset_explorer_json(distance, method).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn hertz_profile(p: f64, level: f64) -> Result<String, JsValue> {
    hertz_profile_json(p, level).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn knot_insertion(u: f64, mult: usize) -> Result<String, JsValue> {
    knot_insertion_json(u, mult).map_err(|e| JsValue::from_str(&e))
}
