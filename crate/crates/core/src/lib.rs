//! Hyperelastic bodies with discrete disclinations and dislocations.
//!
//! A body is an atlas of reference charts (frame fields `P`) together with an
//! archetype energy density. From the frames we derive the induced metric
//! `PᵀP`, the material (Levi-Civita) parallel transport, disclination content
//! (holonomy) and Burgers vectors of closed loops, and the elastic energy of
//! configurations on triangle meshes. The `homogenize` module builds
//! piecewise-flat cone manifolds from smooth metrics and runs the convergence
//! and obstruction experiments on them.
//!
//! Everything is two-dimensional.

pub mod archetype;
pub mod body;
pub mod cli;
pub mod defects;
pub mod elasticity;
pub mod error;
pub mod geometry;
pub mod homogenize;
pub mod quadrature;
pub mod tolerance;

pub use error::{Error, Result};
pub use geometry::{Mat2, Point};
pub use tolerance::Tolerances;
