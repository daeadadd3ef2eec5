//! B-spline / NURBS evaluation, refinement and the patch text format.

mod io;
mod knots;
mod patch;

pub use io::{read_patch, write_patch, parse_patch, format_patch};
pub use knots::{BasisEval, KnotVector, KNOT_TOL};
pub use patch::{normal_from_tangent, NurbsPatch, RationalBasis};
