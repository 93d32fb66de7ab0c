use serde::{Deserialize, Serialize};

use super::{inverse, Christoffel, Domain, Mat2, Point};
use crate::{Error, Result};

/// A smooth Riemannian metric on a chart domain.
pub trait MetricField: Send + Sync {
    /// Metric tensor at `p`; errors outside the domain.
    fn metric(&self, p: Point) -> Result<Mat2>;

    fn domain(&self) -> &Domain;

    /// Optional analytic partial derivatives `[∂₁G, ∂₂G]`.
    fn derivatives(&self, _p: Point) -> Option<[Mat2; 2]> {
        None
    }

    /// Optional analytic Gaussian curvature.
    fn curvature(&self, _p: Point) -> Option<f64> {
        None
    }
}

fn symbols_from_derivatives(g: &Mat2, dg: &[Mat2; 2]) -> Christoffel {
    let ginv = inverse(g);
    let mut gamma = [[[0.0; 2]; 2]; 2];
    for k in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                let mut s = 0.0;
                for l in 0..2 {
                    s += ginv[(k, l)] * (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)]);
                }
                gamma[k][i][j] = 0.5 * s;
            }
        }
    }
    gamma
}

/// Levi-Civita Christoffel symbols by central finite differences of the metric.
pub fn christoffel<M: MetricField + ?Sized>(g: &M, p: Point, h: f64) -> Result<Christoffel> {
    if !g.domain().stencil_inside(p, h) {
        return Err(Error::domain(p, "finite-difference stencil leaves the metric domain"));
    }
    let g0 = g.metric(p)?;
    let mut dg = [Mat2::zeros(); 2];
    for (i, d) in dg.iter_mut().enumerate() {
        let mut e = Point::zeros();
        e[i] = h;
        *d = (g.metric(p + e)? - g.metric(p - e)?) / (2.0 * h);
    }
    Ok(symbols_from_derivatives(&g0, &dg))
}

/// Christoffel symbols using the analytic derivative hook when the metric has one.
pub fn christoffel_auto<M: MetricField + ?Sized>(g: &M, p: Point, h: f64) -> Result<Christoffel> {
    match g.derivatives(p) {
        Some(dg) => Ok(symbols_from_derivatives(&g.metric(p)?, &dg)),
        None => christoffel(g, p, h),
    }
}

/// Gaussian curvature: analytic if available, otherwise finite differences of
/// the Christoffel symbols (outer step `h_outer`, inner step `h_inner`).
pub fn gaussian_curvature<M: MetricField + ?Sized>(
    g: &M,
    p: Point,
    h_inner: f64,
    h_outer: f64,
) -> Result<f64> {
    if let Some(k) = g.curvature(p) {
        return Ok(k);
    }
    let gm = g.metric(p)?;
    let gamma = christoffel_auto(g, p, h_inner)?;
    let mut dgamma = [[[[0.0; 2]; 2]; 2]; 2]; // [d][k][i][j]
    for d in 0..2 {
        let mut e = Point::zeros();
        e[d] = h_outer;
        let plus = christoffel_auto(g, p + e, h_inner)?;
        let minus = christoffel_auto(g, p - e, h_inner)?;
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    dgamma[d][k][i][j] = (plus[k][i][j] - minus[k][i][j]) / (2.0 * h_outer);
                }
            }
        }
    }
    // Rˡ₂₁₂ = ∂₁Γˡ₂₂ − ∂₂Γˡ₂₁ + Γˡ₁ₘΓᵐ₂₂ − Γˡ₂ₘΓᵐ₂₁, K = G₁ₗRˡ₂₁₂ / det G
    let mut r = [0.0; 2];
    for (l, rl) in r.iter_mut().enumerate() {
        let mut v = dgamma[0][l][1][1] - dgamma[1][l][1][0];
        for m in 0..2 {
            v += gamma[l][0][m] * gamma[m][1][1] - gamma[l][1][m] * gamma[m][1][0];
        }
        *rl = v;
    }
    Ok((gm[(0, 0)] * r[0] + gm[(0, 1)] * r[1]) / gm.determinant())
}

/// Conformal factor `u` of a metric `G = e^{2u} Id`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ConformalFactor {
    /// `u = 0`, the Euclidean metric.
    Unit,
    /// Stereographic metric `4 / (1 + k|x|²)² Id` of constant curvature `k`.
    ConstantCurvature { k: f64 },
    /// `u = amplitude · exp(−|x|² / width²)`.
    GaussianBump { amplitude: f64, width: f64 },
}

impl ConformalFactor {
    pub fn u(&self, p: Point) -> f64 {
        let r2 = p.norm_squared();
        match *self {
            ConformalFactor::Unit => 0.0,
            ConformalFactor::ConstantCurvature { k } => (2.0 / (1.0 + k * r2)).ln(),
            ConformalFactor::GaussianBump { amplitude, width } => {
                amplitude * (-r2 / (width * width)).exp()
            }
        }
    }

    pub fn grad_u(&self, p: Point) -> Point {
        let r2 = p.norm_squared();
        match *self {
            ConformalFactor::Unit => Point::zeros(),
            ConformalFactor::ConstantCurvature { k } => p * (-2.0 * k / (1.0 + k * r2)),
            ConformalFactor::GaussianBump { width, .. } => p * (-2.0 * self.u(p) / (width * width)),
        }
    }

    pub fn laplacian_u(&self, p: Point) -> f64 {
        let r2 = p.norm_squared();
        match *self {
            ConformalFactor::Unit => 0.0,
            ConformalFactor::ConstantCurvature { k } => {
                let s = 1.0 + k * r2;
                -4.0 * k / (s * s)
            }
            ConformalFactor::GaussianBump { width, .. } => {
                let w2 = width * width;
                self.u(p) * (4.0 * r2 / (w2 * w2) - 4.0 / w2)
            }
        }
    }

    /// Whether the factor is finite on the whole closed rectangle/disk of radius `r`.
    pub fn is_regular_within(&self, r: f64) -> bool {
        match *self {
            ConformalFactor::ConstantCurvature { k } => 1.0 + k.min(0.0) * r * r > 0.0,
            ConformalFactor::GaussianBump { width, .. } => width > 0.0,
            ConformalFactor::Unit => true,
        }
    }
}

/// Conformally flat metric `e^{2u} Id` with analytic derivatives and curvature.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalMetric {
    pub factor: ConformalFactor,
    pub domain: Domain,
}

impl ConformalMetric {
    pub fn new(factor: ConformalFactor, domain: Domain) -> Self {
        Self { factor, domain }
    }

    pub fn flat(domain: Domain) -> Self {
        Self::new(ConformalFactor::Unit, domain)
    }

    /// The unit-curvature metric `4/(1+|x|²)² Id`.
    pub fn sphere_cap(domain: Domain) -> Self {
        Self::new(ConformalFactor::ConstantCurvature { k: 1.0 }, domain)
    }

    fn scale(&self, p: Point) -> f64 {
        (2.0 * self.factor.u(p)).exp()
    }
}

impl MetricField for ConformalMetric {
    fn metric(&self, p: Point) -> Result<Mat2> {
        if !self.domain.contains(p) {
            return Err(Error::domain(p, "conformal metric"));
        }
        Ok(Mat2::identity() * self.scale(p))
    }

    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn derivatives(&self, p: Point) -> Option<[Mat2; 2]> {
        let s = self.scale(p);
        let g = self.factor.grad_u(p);
        Some([
            Mat2::identity() * (2.0 * g.x * s),
            Mat2::identity() * (2.0 * g.y * s),
        ])
    }

    fn curvature(&self, p: Point) -> Option<f64> {
        Some(-self.factor.laplacian_u(p) / self.scale(p))
    }
}

/// Metric given by an arbitrary closure; derivatives by finite differences.
pub struct FnMetric {
    evaluator: Box<dyn Fn(Point) -> Mat2 + Send + Sync>,
    domain: Domain,
}

impl FnMetric {
    pub fn new(domain: Domain, evaluator: impl Fn(Point) -> Mat2 + Send + Sync + 'static) -> Self {
        Self {
            evaluator: Box::new(evaluator),
            domain,
        }
    }
}

impl std::fmt::Debug for FnMetric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FnMetric").field("domain", &self.domain).finish()
    }
}

impl MetricField for FnMetric {
    fn metric(&self, p: Point) -> Result<Mat2> {
        if !self.domain.contains(p) {
            return Err(Error::domain(p, "metric"));
        }
        Ok((self.evaluator)(p))
    }

    fn domain(&self) -> &Domain {
        &self.domain
    }
}
