//! Offset accuracy tables for a quadratic curve, a bicubic surface and circular arcs.

use super::config::OffsetValidateConfig;
use super::hertz::circular_arc;
use super::report::{fmt_f, Artifacts, Csv, Summary};
use crate::error::Result;
use crate::nurbs::{read_patch, KnotVector, NurbsPatch};
use crate::offset::{offset, offset_error_metrics, OffsetMethod, OffsetRequest, OptimizerSettings};
use std::time::Instant;

/// Rational quadratic test curve with two knot spans.
pub fn table_curve() -> Result<NurbsPatch> {
    let kv = KnotVector::new(vec![0., 0., 0., 0.5, 1., 1., 1.], 2)?;
    let s = 0.5f64.sqrt();
    NurbsPatch::curve2(kv, &[[0., 0.], [0.2, 1.], [1., 1.3], [1.8, 0.8]], &[1., s, 1., s])
}

/// Bicubic 6 x 6 test surface on [-25, 25]².
pub fn table_surface() -> Result<NurbsPatch> {
    const Z: [[f64; 6]; 6] = [
        [-10., -8., -5., -3., -8., -10.],
        [-5., -4., -3., -2., -4., -5.],
        [0., -4., -8., -8., -4., 2.],
        [0., -4., -8., -8., -4., 2.],
        [-5., -4., -3., -2., -4., -5.],
        [-10., -8., -5., -3., -8., -10.],
    ];
    let c = [-25., -15., -5., 5., 15., 25.];
    let mut pts = Vec::with_capacity(108);
    for (j, &y) in c.iter().enumerate() {
        for (i, &x) in c.iter().enumerate() {
            pts.extend([x, y, Z[j][i]]);
        }
    }
    let kv = KnotVector::new(vec![0., 0., 0., 0., 1. / 3., 2. / 3., 1., 1., 1., 1.], 3)?;
    NurbsPatch::new(vec![kv.clone(), kv], 3, pts, vec![1.0; 36])
}

#[derive(Clone, Debug, PartialEq)]
pub struct OffsetRow {
    pub geometry: String,
    pub method: OffsetMethod,
    pub distance: f64,
    pub e_inf: f64,
    pub e_l2: f64,
    pub iterations: usize,
}

pub fn measure(geometry: &str, base: &NurbsPatch, ell: f64, m: OffsetMethod, opt: &OptimizerSettings, samples: usize) -> Result<OffsetRow> {
    let mut req = OffsetRequest::new(ell, m);
    req.optimizer = opt.clone();
    let r = offset(base, &req)?;
    let (e_inf, e_l2) = offset_error_metrics(base, &r.offset, ell, false, samples)?;
    Ok(OffsetRow { geometry: geometry.into(), method: m, distance: ell, e_inf, e_l2, iterations: r.iterations })
}

fn within(v: f64, target: f64, rel: f64) -> bool {
    (v - target).abs() <= rel * target
}

pub fn run_offset_validate(cfg: &OffsetValidateConfig) -> Result<(Summary, Artifacts)> {
    let mut sum = Summary::new("offset-validate");
    let mut rows = Vec::new();
    let curve = if cfg.curve.is_empty() { table_curve()? } else { read_patch(std::path::Path::new(&cfg.curve))? };
    let mut ordering_ok = true;
    let mut bound_ok = true;
    let t = Instant::now();
    for &ell in &cfg.distances {
        let mut by = Vec::new();
        for &m in &cfg.methods {
            let r = measure("curve", &curve, ell, m, &cfg.optimizer, cfg.samples_per_span)?;
            bound_ok &= r.e_l2 <= r.e_inf;
            by.push((m, r.e_l2));
            rows.push(r);
        }
        let get = |m| by.iter().find(|v| v.0 == m).map(|v| v.1);
        if let (Some(o), Some(i), Some(p)) = (get(OffsetMethod::Optimization), get(OffsetMethod::Interpolation), get(OffsetMethod::PolygonTranslation)) {
            ordering_ok &= o <= i && i <= p;
        }
    }
    sum.check("curve: e_L2 ordering Opt <= Interp <= PT for every distance", cfg.distances.len() as f64, "all distances", ordering_ok);
    sum.check("curve: e_L2 <= e_inf for every method", cfg.distances.len() as f64, "all rows", bound_ok);
    sum.metric("runtime.curve_s", t.elapsed().as_secs_f64());
    if cfg.surface {
        let t = Instant::now();
        let s = table_surface()?;
        let ell = cfg.surface_distance;
        for &m in &cfg.methods {
            let r = measure("surface", &s, ell, m, &cfg.surface_optimizer, cfg.samples_per_span)?;
            match m {
                OffsetMethod::PolygonTranslation => {
                    sum.check("surface PT e_inf", r.e_inf, "0.7403 +- 10%", within(r.e_inf, 0.7403, 0.1));
                    sum.check("surface PT e_L2", r.e_l2, "0.2491 +- 10%", within(r.e_l2, 0.2491, 0.1));
                }
                OffsetMethod::Interpolation => {
                    sum.check("surface Interp e_inf", r.e_inf, "0.2082 +- 10%", within(r.e_inf, 0.2082, 0.1));
                    sum.check("surface Interp e_L2", r.e_l2, "0.04993 +- 10%", within(r.e_l2, 0.04993, 0.1));
                }
                OffsetMethod::Optimization => sum.check("surface Opt e_inf", r.e_inf, "<= 0.21", r.e_inf <= 0.21),
            }
            rows.push(r);
        }
        sum.metric("runtime.surface_s", t.elapsed().as_secs_f64());
    }
    if cfg.arc_exactness {
        let t = Instant::now();
        let mut worst: f64 = 0.0;
        for (k, (a0, a1)) in [(0.0, -1.2), (1.0, 2.5), (-0.3, -3.0)].into_iter().enumerate() {
            let arc = circular_arc([0.3 * k as f64, -0.2], 1.0 + k as f64, a0, a1)?;
            for m in [OffsetMethod::PolygonTranslation, OffsetMethod::Interpolation] {
                let ell = 0.2 * (1.0 + k as f64);
                let r = measure(&format!("arc{k}"), &arc, ell, m, &cfg.optimizer, cfg.samples_per_span)?;
                worst = worst.max(r.e_inf);
                rows.push(r);
            }
        }
        sum.check("circular arcs: PT / Interp e_inf", worst, "<= 1e-10", worst <= 1e-10);
        sum.metric("runtime.arcs_s", t.elapsed().as_secs_f64());
    }
    let mut csv = Csv::new(&["geometry", "method", "distance", "e_inf", "e_L2", "iterations"]);
    for r in &rows {
        csv.push(vec![r.geometry.clone(), r.method.name().into(), fmt_f(r.distance), fmt_f(r.e_inf), fmt_f(r.e_l2), r.iterations.to_string()]);
    }
    let mut art = Artifacts::default();
    art.add("offset_errors.csv", csv.render());
    sum.finish();
    Ok((sum, art))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_table_at_015() {
        let c = table_curve().unwrap();
        let pt = measure("curve", &c, 0.15, OffsetMethod::PolygonTranslation, &Default::default(), 200).unwrap();
        let ip = measure("curve", &c, 0.15, OffsetMethod::Interpolation, &Default::default(), 200).unwrap();
        assert!(within(pt.e_inf, 3.599e-2, 1e-3) && within(pt.e_l2, 2.320e-2, 1e-3), "{pt:?}");
        assert!(within(ip.e_inf, 2.646e-2, 1e-3) && within(ip.e_l2, 1.095e-2, 1e-3), "{ip:?}");
    }
}
