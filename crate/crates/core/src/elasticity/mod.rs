//! Plane-strain continuum kernels for quad4, quad8, tri3 and NURBS elements.

pub mod kernel;
pub mod loads;
pub mod shape;

pub use kernel::{cauchy_stress, element_force_stiffness, svk_stress_tangent, Kinematics, Material};
pub use loads::{dead_traction, edge_gauss_points, follower_pressure};
pub use shape::{element_geometry, element_shape, inverse_isoparametric_map, lagrange_shape, physical_gradients, Shape};
