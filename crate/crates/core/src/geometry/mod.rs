//! Two-dimensional frames, metrics, curves and parallel transport.

mod curve;
mod domain;
mod metric;
mod transport;

pub use curve::Curve;
pub use domain::{Domain, StarDomain};
pub use metric::{
    christoffel, christoffel_auto, gaussian_curvature, ConformalFactor, ConformalMetric, FnMetric,
    MetricField,
};
pub use transport::{
    isometry_defect, transport_chart, transport_concat, transport_ode, transport_segment, OdeOptions,
};

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Point = Vector2<f64>;
pub type Mat2 = Matrix2<f64>;

/// Transport matrices map tangent vectors at the start of a curve to tangent
/// vectors at its end, both in chart coordinates.
pub type TransportMatrix = Mat2;

/// Christoffel symbols indexed as `gamma[k][i][j]` = Γᵏᵢⱼ.
pub type Christoffel = [[[f64; 2]; 2]; 2];

/// A reference map `P(p): T_pM → ℝ²` written in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameMatrix(Mat2);

impl FrameMatrix {
    pub fn new(m: Mat2) -> Result<Self> {
        let det = m.determinant();
        if !(det.is_finite() && det > 0.0) {
            return Err(Error::InvalidFrame { det });
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn inverse(&self) -> Mat2 {
        inverse(&self.0)
    }

    pub fn is_volume_preserving(&self, tol_vol: f64) -> bool {
        (self.0.determinant() - 1.0).abs() <= tol_vol
    }
}

/// Symmetric positive-definite 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricTensor(Mat2);

impl MetricTensor {
    pub fn new(m: Mat2) -> Result<Self> {
        if (m[(0, 1)] - m[(1, 0)]).abs() > 1e-12 * (1.0 + m.abs().max()) {
            return Err(Error::InvalidArgument(format!(
                "metric is not symmetric: {m:?}"
            )));
        }
        let (l1, l2) = sym_eigenvalues(&m);
        if !(l1 > 0.0 && l2 > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "metric is not positive definite (eigenvalues {l1}, {l2})"
            )));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }
}

/// The metric `PᵀP` induced by a reference map.
pub fn metric_from_reference(p: &Mat2) -> Result<MetricTensor> {
    let frame = FrameMatrix::new(*p)?;
    let m = frame.matrix().transpose() * frame.matrix();
    // Symmetrize away rounding in the off-diagonal.
    let off = 0.5 * (m[(0, 1)] + m[(1, 0)]);
    MetricTensor::new(Mat2::new(m[(0, 0)], off, off, m[(1, 1)]))
}

pub fn rotation(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    Mat2::new(c, -s, s, c)
}

/// Angle of the rotation closest to `m` in the Frobenius norm, in (-π, π].
pub fn rotation_angle(m: &Mat2) -> f64 {
    (m[(1, 0)] - m[(0, 1)]).atan2(m[(0, 0)] + m[(1, 1)])
}

/// Closest rotation to `m` in the Frobenius norm (the polar factor when det m > 0).
pub fn nearest_rotation(m: &Mat2) -> Mat2 {
    rotation(rotation_angle(m))
}

pub fn frobenius(m: &Mat2) -> f64 {
    m.norm()
}

pub fn inverse(m: &Mat2) -> Mat2 {
    let det = m.determinant();
    Mat2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) / det
}

/// Cofactor matrix, the derivative of `det` with respect to the entries.
pub fn cofactor(m: &Mat2) -> Mat2 {
    Mat2::new(m[(1, 1)], -m[(1, 0)], -m[(0, 1)], m[(0, 0)])
}

/// Eigenvalues of a symmetric 2×2 matrix in ascending order.
pub fn sym_eigenvalues(m: &Mat2) -> (f64, f64) {
    let a = m[(0, 0)];
    let d = m[(1, 1)];
    let b = 0.5 * (m[(0, 1)] + m[(1, 0)]);
    let mean = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    (mean - rad, mean + rad)
}

/// Symmetric positive square root of a symmetric positive-definite matrix.
pub fn sym_sqrt(m: &Mat2) -> Mat2 {
    // For 2×2 SPD matrices: √M = (M + √det·I) / √(tr M + 2√det).
    let s = m.determinant().sqrt();
    let t = (m.trace() + 2.0 * s).sqrt();
    (m + Mat2::identity() * s) / t
}

/// Polar angle of `p` around `center`, taken in `[start, start + 2π)`.
pub fn angle_in_branch(p: Point, center: Point, start: f64) -> f64 {
    let d = p - center;
    let mut phi = d.y.atan2(d.x);
    let two_pi = std::f64::consts::TAU;
    phi = start + (phi - start).rem_euclid(two_pi);
    phi
}

pub fn cross(a: Point, b: Point) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Serializable row-major matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowMajor(pub [[f64; 2]; 2]);

impl From<Mat2> for RowMajor {
    fn from(m: Mat2) -> Self {
        RowMajor([[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]])
    }
}

impl From<RowMajor> for Mat2 {
    fn from(r: RowMajor) -> Self {
        Mat2::new(r.0[0][0], r.0[0][1], r.0[1][0], r.0[1][1])
    }
}
