//! Piecewise-affine configurations on triangle meshes, the discrete elastic
//! energy and its minimization.

mod energy;
mod mesh;
mod minimize;

pub use energy::{assemble_energy, assemble_gradient, Configuration, Discretization};
pub use mesh::{build_mesh, TriMesh};
pub use minimize::{minimize, minimize_discretization, BoundaryCondition, MinimizeOptions, MinimizeResult};
