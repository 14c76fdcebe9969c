//! Radial meshes, quadrature, weighted norms, finite differences and test functions.

mod corpus;
mod mesh;
mod quadrature;

pub use corpus::{test_function_corpus, RadialFunction, SmoothRadialFunction, TestFunction};
pub use mesh::{make_radial_mesh, sphere_area, Grading, GridFunction, RadialMesh};
pub use quadrature::{fornberg_weights, gauss_legendre_5, SupportQuadrature};
