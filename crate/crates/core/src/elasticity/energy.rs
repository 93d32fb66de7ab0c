use crate::archetype::{grad_archetype, Archetype};
use crate::body::Body;
use crate::geometry::{inverse, Mat2, Point};
use crate::{Error, Result};

use super::TriMesh;

/// Finite-difference step for archetypes without an analytic gradient.
const ARCHETYPE_FD_STEP: f64 = 1e-6;

/// Per-vertex positions of a piecewise-affine map `f: M → ℝ²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub positions: Vec<Point>,
}

impl Configuration {
    pub fn new(positions: Vec<Point>) -> Result<Self> {
        if positions.iter().any(|p| !(p.x.is_finite() && p.y.is_finite())) {
            return Err(Error::InvalidArgument("configuration has non-finite entries".into()));
        }
        Ok(Self { positions })
    }

    /// The chart-identity embedding.
    pub fn identity(mesh: &TriMesh) -> Self {
        Self {
            positions: mesh.vertices.clone(),
        }
    }

    pub fn affine(mesh: &TriMesh, a: &Mat2) -> Self {
        Self {
            positions: mesh.vertices.iter().map(|x| a * x).collect(),
        }
    }

    pub fn map(mesh: &TriMesh, mut f: impl FnMut(Point) -> Point) -> Self {
        Self {
            positions: mesh.vertices.iter().map(|x| f(*x)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Element {
    tri: [usize; 3],
    /// Inverse of the chart edge matrix `[x₁ − x₀, x₂ − x₀]`.
    edges_inv: Mat2,
    /// `P(c_T)⁻¹` at the barycenter.
    frame_inv: Mat2,
    /// `|det P(c_T)| · area(T)`.
    weight: f64,
}

/// A body and mesh with per-triangle frames evaluated once.
#[derive(Debug, Clone)]
pub struct Discretization {
    archetype: Archetype,
    elements: Vec<Element>,
    vertex_count: usize,
}

impl Discretization {
    pub fn new(body: &Body, mesh: &TriMesh) -> Result<Self> {
        let charts = mesh.assign_charts(body)?;
        Self::with_charts(body, mesh, &charts)
    }

    /// Uses the given chart for each triangle; the barycenter must lie in it.
    pub fn with_charts(body: &Body, mesh: &TriMesh, charts: &[usize]) -> Result<Self> {
        if charts.len() != mesh.triangles.len() {
            return Err(Error::InvalidArgument("one chart per triangle is required".into()));
        }
        let frames = mesh
            .triangles
            .iter()
            .enumerate()
            .map(|(t, _)| {
                let chart = body
                    .charts
                    .get(charts[t])
                    .ok_or_else(|| Error::InvalidArgument(format!("no chart {}", charts[t])))?;
                Ok(*chart.frame_at(mesh.barycenter(t))?.matrix())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_frames(body.archetype.clone(), mesh, &frames))
    }

    /// Discretization with explicit per-triangle frames.
    pub fn from_frames(archetype: Archetype, mesh: &TriMesh, frames: &[Mat2]) -> Self {
        let elements = mesh
            .triangles
            .iter()
            .zip(frames)
            .enumerate()
            .map(|(t, (tri, p))| {
                let [x0, x1, x2] = mesh.corners(t);
                let edges = Mat2::from_columns(&[x1 - x0, x2 - x0]);
                Element {
                    tri: *tri,
                    edges_inv: inverse(&edges),
                    frame_inv: inverse(p),
                    weight: p.determinant().abs() * mesh.signed_area(t),
                }
            })
            .collect();
        Self {
            archetype,
            elements,
            vertex_count: mesh.vertices.len(),
        }
    }

    pub fn archetype(&self) -> &Archetype {
        &self.archetype
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    fn derivative(e: &Element, f: &[Point]) -> Mat2 {
        let [a, b, c] = e.tri;
        let df = Mat2::from_columns(&[f[b] - f[a], f[c] - f[a]]);
        df * e.edges_inv
    }

    /// Per-triangle energies `W(A_T P⁻¹) |det P| area(T)`.
    pub fn triangle_energies(&self, f: &Configuration) -> Vec<f64> {
        self.elements
            .iter()
            .map(|e| {
                let a = Self::derivative(e, &f.positions);
                self.archetype.eval(&(a * e.frame_inv)) * e.weight
            })
            .collect()
    }

    /// Total energy; infeasible configurations give `+∞`.
    pub fn energy(&self, f: &Configuration) -> f64 {
        let total: f64 = self.triangle_energies(f).into_iter().sum();
        if total.is_finite() {
            total
        } else {
            f64::INFINITY
        }
    }

    /// `E(new) − E(old)` without cancellation for small steps.
    ///
    /// Triangles whose strain changes little integrate `∇W : ΔB` along the
    /// straight path with 5-point Gauss–Legendre; the rest subtract directly.
    pub fn energy_difference(&self, old: &Configuration, new: &Configuration) -> f64 {
        let mut total = 0.0;
        for e in &self.elements {
            let b0 = Self::derivative(e, &old.positions) * e.frame_inv;
            let b1 = Self::derivative(e, &new.positions) * e.frame_inv;
            let db = b1 - b0;
            let small = db.norm() < 1e-3 * (1.0 + b0.norm());
            let analytic = small && self.archetype.analytic_gradient(&b0).is_some();
            let diff = if analytic {
                crate::quadrature::GAUSS5
                    .iter()
                    .map(|&(t, w)| {
                        let g = self
                            .archetype
                            .analytic_gradient(&(b0 + db * t))
                            .unwrap_or_else(|| Mat2::from_element(f64::NAN));
                        w * g.component_mul(&db).sum()
                    })
                    .sum::<f64>()
            } else {
                self.archetype.eval(&b1) - self.archetype.eval(&b0)
            };
            total += diff * e.weight;
        }
        if total.is_nan() {
            f64::INFINITY
        } else {
            total
        }
    }

    pub fn gradient(&self, f: &Configuration) -> Result<Vec<Point>> {
        let mut g = vec![Point::zeros(); self.vertex_count];
        for e in &self.elements {
            let a = Self::derivative(e, &f.positions);
            let w_grad = grad_archetype(&self.archetype, &(a * e.frame_inv), ARCHETYPE_FD_STEP)?;
            let d_a = w_grad * e.frame_inv.transpose() * e.weight;
            let d_f = d_a * e.edges_inv.transpose();
            let c0 = d_f.column(0).into_owned();
            let c1 = d_f.column(1).into_owned();
            let [v0, v1, v2] = e.tri;
            g[v1] += c0;
            g[v2] += c1;
            g[v0] -= c0 + c1;
        }
        if g.iter().any(|v| !(v.x.is_finite() && v.y.is_finite())) {
            return Err(Error::InfeasiblePoint);
        }
        Ok(g)
    }
}

/// `∑_T W(A_T P(c_T)⁻¹) |det P(c_T)| area(T)`.
pub fn assemble_energy(body: &Body, mesh: &TriMesh, f: &Configuration) -> Result<f64> {
    Ok(Discretization::new(body, mesh)?.energy(f))
}

pub fn assemble_gradient(body: &Body, mesh: &TriMesh, f: &Configuration) -> Result<Vec<Point>> {
    let disc = Discretization::new(body, mesh)?;
    if !disc.energy(f).is_finite() {
        return Err(Error::InfeasiblePoint);
    }
    disc.gradient(f)
}
