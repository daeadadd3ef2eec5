//! Isogeometric boundary-layer toolkit: NURBS kernels, offsets, layer and
//! background meshes, cut-cell quadrature, embedded mortar coupling, mortar
//! contact against rigid masters and a load-stepped Newton solver.

pub mod bench;
pub mod contact;
pub mod cutcell;
pub mod dual;
pub mod elasticity;
pub mod embedded;
pub mod error;
pub mod geom;
pub mod mesh;
pub mod nurbs;
pub mod offset;
pub mod quadrature;
pub mod solver;

pub use error::{Error, Result};
