//! Plain-text patch records.
//!
//! ```text
//! # comment
//! pdim 2
//! dim 3
//! degrees 3 3
//! knots 0 0 0 0 0.5 1 1 1 1
//! knots 0 0 0 0 0.5 1 1 1 1
//! points 25
//! x y z w
//! ...
//! ```
//! One `knots` line per parametric direction; control points follow with the
//! first direction varying fastest. Floats are written in shortest round-trip form.

use super::{KnotVector, NurbsPatch};
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

pub fn format_patch(patch: &NurbsPatch) -> String {
    let mut s = String::new();
    let join = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" ");
    writeln!(s, "pdim {}", patch.pdim()).unwrap();
    writeln!(s, "dim {}", patch.dim()).unwrap();
    let degs: Vec<String> = patch.knot_vectors().iter().map(|k| k.degree().to_string()).collect();
    writeln!(s, "degrees {}", degs.join(" ")).unwrap();
    for kv in patch.knot_vectors() {
        writeln!(s, "knots {}", join(kv.knots())).unwrap();
    }
    writeln!(s, "points {}", patch.n_points()).unwrap();
    for i in 0..patch.n_points() {
        let mut row = patch.point(i).to_vec();
        row.push(patch.weight(i));
        writeln!(s, "{}", join(&row)).unwrap();
    }
    s
}

fn bad(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("patch record line {line}: {msg}"))
}

pub fn parse_patch(text: &str) -> Result<NurbsPatch> {
    let mut pdim = None;
    let mut dim = None;
    let mut degrees: Vec<usize> = Vec::new();
    let mut knots: Vec<Vec<f64>> = Vec::new();
    let mut npts: Option<usize> = None;
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let parse_f = |ln: usize, t: &str| t.parse::<f64>().map_err(|e| bad(ln, format!("{t}: {e}")));
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let mut tok = line.split_whitespace();
        let head = tok.next().unwrap();
        if let Some(n) = npts {
            if weights.len() < n && head.parse::<f64>().is_ok() {
                let vals = line.split_whitespace().map(|t| parse_f(ln, t)).collect::<Result<Vec<_>>>()?;
                let d = dim.ok_or_else(|| bad(ln, "dim missing before points"))?;
                if vals.len() != d + 1 {
                    return Err(bad(ln, format!("expected {} numbers, got {}", d + 1, vals.len())));
                }
                points.extend_from_slice(&vals[..d]);
                weights.push(vals[d]);
                continue;
            }
        }
        let rest: Vec<&str> = tok.collect();
        let one = |ln: usize| -> Result<usize> {
            rest.first().ok_or_else(|| bad(ln, "missing value"))?.parse().map_err(|e| bad(ln, e))
        };
        match head {
            "pdim" => pdim = Some(one(ln)?),
            "dim" => dim = Some(one(ln)?),
            "degrees" => {
                degrees = rest.iter().map(|t| t.parse().map_err(|e| bad(ln, e))).collect::<Result<_>>()?
            }
            "knots" => knots.push(rest.iter().map(|t| parse_f(ln, t)).collect::<Result<_>>()?),
            "points" => npts = Some(one(ln)?),
            other => return Err(bad(ln, format!("unknown keyword {other}"))),
        }
    }
    let pdim = pdim.ok_or_else(|| Error::Config("patch record: missing pdim".into()))?;
    let dim = dim.ok_or_else(|| Error::Config("patch record: missing dim".into()))?;
    if degrees.len() != pdim || knots.len() != pdim {
        return Err(Error::Config("patch record: degrees/knots do not match pdim".into()));
    }
    if Some(weights.len()) != npts {
        return Err(Error::Config("patch record: point count mismatch".into()));
    }
    let kvs = knots
        .into_iter()
        .zip(degrees)
        .map(|(k, p)| KnotVector::new(k, p))
        .collect::<Result<Vec<_>>>()?;
    NurbsPatch::new(kvs, dim, points, weights)
}

pub fn read_patch(path: &Path) -> Result<NurbsPatch> {
    parse_patch(&std::fs::read_to_string(path)?)
}

pub fn write_patch(path: &Path, patch: &NurbsPatch) -> Result<()> {
    std::fs::write(path, format_patch(patch))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let kv = KnotVector::new(vec![0., 0., 0., 0.5, 1., 1., 1.], 2).unwrap();
        let s = 0.5f64.sqrt();
        let c = NurbsPatch::curve2(kv, &[[0., 0.], [0.2, 1.], [1., 1.3], [1.8, 0.8]], &[1., s, 1., s]).unwrap();
        let txt = format_patch(&c);
        let back = parse_patch(&txt).unwrap();
        assert_eq!(back, c);
        assert!(parse_patch("pdim 1\ndim 2\nfoo 3\n").is_err());
    }
}
