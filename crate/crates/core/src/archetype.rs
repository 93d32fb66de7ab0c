//! Archetype energy densities on 2×2 matrices and their symmetry groups.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::geometry::{cofactor, nearest_rotation, rotation, Mat2, Point};
use crate::{Error, Result};

/// User-supplied energy density with an optional analytic gradient.
pub struct CustomArchetype {
    pub name: String,
    pub energy: Box<dyn Fn(&Mat2) -> f64 + Send + Sync>,
    pub gradient: Option<Box<dyn Fn(&Mat2) -> Mat2 + Send + Sync>>,
}

impl fmt::Debug for CustomArchetype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomArchetype")
            .field("name", &self.name)
            .field("analytic_gradient", &self.gradient.is_some())
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum Archetype {
    /// `‖B‖² + (det B − 1)²`
    IsotropicNeoHookean,
    /// `dist²(B, SO(2))`
    IsotropicDistance,
    /// `Σₖ (|B vₖ| − 1)² + (det B − 1)²` with `vₖ = (cos kπ/n, sin kπ/n)`, k < n.
    NFoldDiscrete { n: usize },
    Custom(Arc<CustomArchetype>),
}

impl PartialEq for Archetype {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Archetype::IsotropicNeoHookean, Archetype::IsotropicNeoHookean) => true,
            (Archetype::IsotropicDistance, Archetype::IsotropicDistance) => true,
            (Archetype::NFoldDiscrete { n: a }, Archetype::NFoldDiscrete { n: b }) => a == b,
            (Archetype::Custom(a), Archetype::Custom(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

/// Rotational symmetry group of an archetype.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryGroup {
    ContinuousSo2,
    /// Rotations by `2πk/m`, `k = 0..m`.
    Cyclic(usize),
}

impl SymmetryGroup {
    pub fn is_discrete(&self) -> bool {
        matches!(self, SymmetryGroup::Cyclic(_))
    }

    /// Rotation angles of a discrete group (empty for SO(2)).
    pub fn angles(&self) -> Vec<f64> {
        match *self {
            SymmetryGroup::ContinuousSo2 => Vec::new(),
            SymmetryGroup::Cyclic(m) => (0..m).map(|k| TAU * k as f64 / m as f64).collect(),
        }
    }

    pub fn elements(&self) -> Vec<Mat2> {
        self.angles().into_iter().map(rotation).collect()
    }

    /// Closest group element to `m` in the Frobenius norm and the distance to it.
    pub fn nearest_element(&self, m: &Mat2) -> (Mat2, f64) {
        match self {
            SymmetryGroup::ContinuousSo2 => {
                let r = nearest_rotation(m);
                (r, (m - r).norm())
            }
            SymmetryGroup::Cyclic(_) => self
                .elements()
                .into_iter()
                .map(|r| (r, (m - r).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("cyclic groups are non-empty"),
        }
    }
}

/// Free-function form of [`SymmetryGroup::nearest_element`].
pub fn nearest_element(group: &SymmetryGroup, m: &Mat2) -> (Mat2, f64) {
    group.nearest_element(m)
}

fn direction(k: usize, n: usize) -> Point {
    let t = k as f64 * PI / n as f64;
    Point::new(t.cos(), t.sin())
}

impl Archetype {
    pub fn name(&self) -> String {
        match self {
            Archetype::IsotropicNeoHookean => "isotropic-neo-hookean".into(),
            Archetype::IsotropicDistance => "isotropic-distance".into(),
            Archetype::NFoldDiscrete { n } => format!("n-fold-discrete({n})"),
            Archetype::Custom(c) => c.name.clone(),
        }
    }

    pub fn eval(&self, b: &Mat2) -> f64 {
        match self {
            Archetype::IsotropicNeoHookean => {
                let d = b.determinant() - 1.0;
                b.norm_squared() + d * d
            }
            Archetype::IsotropicDistance => {
                // max_R tr(RᵀB) = |(b11 + b22, b21 − b12)|
                let s = (b[(0, 0)] + b[(1, 1)]).hypot(b[(1, 0)] - b[(0, 1)]);
                (b.norm_squared() - 2.0 * s + 2.0).max(0.0)
            }
            Archetype::NFoldDiscrete { n } => {
                let d = b.determinant() - 1.0;
                let stretch: f64 = (0..*n)
                    .map(|k| {
                        let l = (b * direction(k, *n)).norm() - 1.0;
                        l * l
                    })
                    .sum();
                stretch + d * d
            }
            Archetype::Custom(c) => (c.energy)(b),
        }
    }

    /// Analytic gradient when available.
    pub fn analytic_gradient(&self, b: &Mat2) -> Option<Mat2> {
        match self {
            Archetype::IsotropicNeoHookean => {
                Some(b * 2.0 + cofactor(b) * (2.0 * (b.determinant() - 1.0)))
            }
            Archetype::IsotropicDistance => Some((b - nearest_rotation(b)) * 2.0),
            Archetype::NFoldDiscrete { n } => {
                let mut g = cofactor(b) * (2.0 * (b.determinant() - 1.0));
                for k in 0..*n {
                    let v = direction(k, *n);
                    let bv = b * v;
                    let len = bv.norm();
                    if len > 0.0 {
                        g += (bv * v.transpose()) * (2.0 * (len - 1.0) / len);
                    }
                }
                Some(g)
            }
            Archetype::Custom(c) => c.gradient.as_ref().map(|g| g(b)),
        }
    }

    /// The symmetry group: known in closed form for the built-in kinds,
    /// detected numerically for custom archetypes.
    pub fn symmetry_group(&self) -> Result<SymmetryGroup> {
        match self {
            Archetype::IsotropicNeoHookean | Archetype::IsotropicDistance => {
                Ok(SymmetryGroup::ContinuousSo2)
            }
            Archetype::NFoldDiscrete { n } => Ok(SymmetryGroup::Cyclic(2 * n)),
            Archetype::Custom(_) => detect_group(self, 360, 1e-8, &default_samples(0)),
        }
    }

    pub fn is_isotropic(&self) -> bool {
        matches!(self.symmetry_group(), Ok(SymmetryGroup::ContinuousSo2))
    }
}

pub fn eval_archetype(a: &Archetype, b: &Mat2) -> f64 {
    a.eval(b)
}

/// Central finite-difference gradient of an energy density.
pub fn fd_gradient(a: &Archetype, b: &Mat2, h: f64) -> Result<Mat2> {
    let mut g = Mat2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let mut plus = *b;
            let mut minus = *b;
            plus[(i, j)] += h;
            minus[(i, j)] -= h;
            let (ep, em) = (a.eval(&plus), a.eval(&minus));
            if !(ep.is_finite() && em.is_finite()) {
                return Err(Error::InfeasiblePoint);
            }
            g[(i, j)] = (ep - em) / (2.0 * h);
        }
    }
    Ok(g)
}

/// Gradient of the archetype: analytic for built-in kinds, finite differences otherwise.
pub fn grad_archetype(a: &Archetype, b: &Mat2, h: f64) -> Result<Mat2> {
    if !a.eval(b).is_finite() {
        return Err(Error::InfeasiblePoint);
    }
    match a.analytic_gradient(b) {
        Some(g) => Ok(g),
        None => fd_gradient(a, b, h),
    }
}

/// The default sample set: 64 matrices `Id + 0.3 N` with standard normal `N`.
pub fn default_samples(seed: u64) -> Vec<Mat2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..64)
        .map(|_| {
            let mut n = Mat2::zeros();
            for v in n.iter_mut() {
                *v = StandardNormal.sample(&mut rng);
            }
            Mat2::identity() + n * 0.3
        })
        .collect()
}

/// `max_B |W(B g) − W(B)|` over the samples.
pub fn symmetry_distance(a: &Archetype, g: &Mat2, samples: &[Mat2]) -> f64 {
    samples
        .iter()
        .map(|b| (a.eval(&(b * g)) - a.eval(b)).abs())
        .fold(0.0, f64::max)
}

pub(crate) fn golden_section_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Detects the rotational symmetry group of `a` by scanning `resolution`
/// equally spaced angles, refining local minima of the symmetry distance.
pub fn detect_group(
    a: &Archetype,
    resolution: usize,
    tol: f64,
    samples: &[Mat2],
) -> Result<SymmetryGroup> {
    if resolution < 360 {
        return Err(Error::InvalidArgument(format!(
            "resolution must be at least 360, got {resolution}"
        )));
    }
    if samples.is_empty() {
        return Err(Error::InvalidArgument("empty sample set".into()));
    }
    let spacing = TAU / resolution as f64;
    let dist = |theta: f64| symmetry_distance(a, &rotation(theta), samples);
    let values: Vec<f64> = (0..resolution).map(|j| dist(j as f64 * spacing)).collect();
    if values.iter().all(|&d| d < tol) {
        return Ok(SymmetryGroup::ContinuousSo2);
    }

    let mut passing: Vec<f64> = Vec::new();
    for j in 0..resolution {
        let prev = values[(j + resolution - 1) % resolution];
        let next = values[(j + 1) % resolution];
        let theta = j as f64 * spacing;
        let accepted = if values[j] < tol {
            Some(theta)
        } else if values[j] <= prev && values[j] <= next {
            let (t, d) = golden_section_min(dist, theta - spacing, theta + spacing, 80);
            (d < tol).then_some(t.rem_euclid(TAU))
        } else {
            None
        };
        if let Some(t) = accepted {
            let dup = passing.iter().any(|&q| {
                let d = (q - t).rem_euclid(TAU);
                d.min(TAU - d) < 0.5 * spacing
            });
            if !dup {
                passing.push(t);
            }
        }
    }
    passing.sort_by(f64::total_cmp);
    let m = passing.len();
    if m == 0 {
        return Err(Error::InconsistentGroup { count: 0 });
    }
    // A finite rotation group of order m consists exactly of the multiples of 2π/m.
    let step = TAU / m as f64;
    let closed = passing
        .iter()
        .enumerate()
        .all(|(k, &t)| (t - k as f64 * step).abs() < 1e-6);
    if !closed {
        return Err(Error::InconsistentGroup { count: m });
    }
    Ok(SymmetryGroup::Cyclic(m))
}
