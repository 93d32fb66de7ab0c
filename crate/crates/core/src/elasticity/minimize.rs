use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::body::Body;
use crate::geometry::{Mat2, Point};
use crate::{Error, Result};

use super::{Configuration, Discretization, TriMesh};

/// Armijo sufficient-decrease constant.
const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;

/// Pinned vertices and their target positions.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundaryCondition {
    pub pinned: Vec<(usize, Point)>,
}

impl BoundaryCondition {
    pub fn free() -> Self {
        Self::default()
    }

    /// Pins every boundary vertex to `f(x)`.
    pub fn boundary_map(mesh: &TriMesh, f: impl Fn(Point) -> Point) -> Self {
        Self {
            pinned: mesh
                .boundary_vertices()
                .map(|i| (i, f(mesh.vertices[i])))
                .collect(),
        }
    }

    pub fn boundary_affine(mesh: &TriMesh, a: &Mat2) -> Self {
        Self::boundary_map(mesh, |x| a * x)
    }

    fn validate(&self, vertex_count: usize) -> Result<()> {
        if let Some((i, _)) = self.pinned.iter().find(|(i, _)| *i >= vertex_count) {
            return Err(Error::InvalidArgument(format!("pinned vertex {i} is not in the mesh")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MinimizeOptions {
    pub gtol: f64,
    pub max_iter: usize,
    pub memory: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            gtol: 1e-8,
            max_iter: 5000,
            memory: 10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MinimizeResult {
    pub configuration: Configuration,
    pub energy: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
    /// Energy after each accepted step, starting with the initial energy,
    /// tracked through accurately evaluated energy differences.
    pub energy_history: Vec<f64>,
    pub converged: bool,
}

/// Minimizes the discrete energy of `body` on `mesh` from `start`
/// (the chart-identity embedding when `None`).
pub fn minimize(
    body: &Body,
    mesh: &TriMesh,
    bc: &BoundaryCondition,
    start: Option<Configuration>,
    opts: &MinimizeOptions,
) -> Result<MinimizeResult> {
    let disc = Discretization::new(body, mesh)?;
    let start = start.unwrap_or_else(|| Configuration::identity(mesh));
    minimize_discretization(&disc, bc, start, opts)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Limited-memory BFGS over the free vertex coordinates with Armijo
/// backtracking; a failed line search restarts from steepest descent.
pub fn minimize_discretization(
    disc: &Discretization,
    bc: &BoundaryCondition,
    mut start: Configuration,
    opts: &MinimizeOptions,
) -> Result<MinimizeResult> {
    let n = disc.vertex_count();
    if start.positions.len() != n {
        return Err(Error::InvalidArgument("start configuration does not match the mesh".into()));
    }
    bc.validate(n)?;
    let mut is_free = vec![true; n];
    for &(i, target) in &bc.pinned {
        is_free[i] = false;
        start.positions[i] = target;
    }
    let free: Vec<usize> = (0..n).filter(|&i| is_free[i]).collect();

    let to_config = |x: &[f64], base: &Configuration| {
        let mut c = base.clone();
        for (k, &v) in free.iter().enumerate() {
            c.positions[v] = Point::new(x[2 * k], x[2 * k + 1]);
        }
        c
    };
    // Energy change from `x` to `xn` and the gradient at `xn`.
    let eval = |x: &[f64], xn: &[f64], base: &Configuration| -> Result<(f64, Vec<f64>)> {
        let c = to_config(xn, base);
        if !disc.energy(&c).is_finite() {
            return Ok((f64::INFINITY, Vec::new()));
        }
        let delta = disc.energy_difference(&to_config(x, base), &c);
        let g = disc.gradient(&c)?;
        Ok((delta, free.iter().flat_map(|&v| [g[v].x, g[v].y]).collect()))
    };

    let mut x: Vec<f64> = free
        .iter()
        .flat_map(|&v| [start.positions[v].x, start.positions[v].y])
        .collect();
    let mut e = disc.energy(&to_config(&x, &start));
    if !e.is_finite() {
        return Err(Error::InfeasiblePoint);
    }
    let (_, mut g) = eval(&x, &x, &start)?;
    let mut history = vec![e];
    let mut pairs: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut iterations = 0;

    while norm(&g) >= opts.gtol && iterations < opts.max_iter {
        let mut accepted = None;
        for steepest in [false, true] {
            let d = if steepest || pairs.is_empty() {
                g.iter().map(|v| -v).collect::<Vec<_>>()
            } else {
                two_loop(&g, &pairs)
            };
            let slope = dot(&g, &d);
            if !(slope < 0.0) {
                continue;
            }
            let mut alpha = if pairs.is_empty() || steepest {
                (1.0 / norm(&g)).min(1.0)
            } else {
                1.0
            };
            for _ in 0..MAX_BACKTRACKS {
                let xn: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + alpha * b).collect();
                let (delta, gn) = eval(&x, &xn, &start)?;
                if delta.is_finite() && delta <= ARMIJO_C1 * alpha * slope {
                    accepted = Some((xn, e + delta, gn));
                    break;
                }
                alpha *= 0.5;
            }
            if accepted.is_some() {
                break;
            }
            pairs.clear();
        }
        let Some((xn, en, gn)) = accepted else {
            return Err(Error::StalledDescent {
                iterations,
                energy: e,
                gradient_norm: norm(&g),
                iterate: Box::new(to_config(&x, &start).positions),
            });
        };
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-16 * norm(&s) * norm(&y) {
            pairs.push_back((s, y, 1.0 / sy));
            if pairs.len() > opts.memory.max(1) {
                pairs.pop_front();
            }
        }
        x = xn;
        e = en;
        g = gn;
        history.push(e);
        iterations += 1;
    }
    let gradient_norm = norm(&g);
    let configuration = to_config(&x, &start);
    Ok(MinimizeResult {
        energy: disc.energy(&configuration),
        configuration,
        iterations,
        gradient_norm,
        energy_history: history,
        converged: gradient_norm < opts.gtol,
    })
}

fn two_loop(g: &[f64], pairs: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(pairs.len());
    for (s, y, rho) in pairs.iter().rev() {
        let a = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    let (s, y, _) = pairs.back().expect("non-empty history");
    let gamma = dot(s, y) / dot(y, y);
    for qi in q.iter_mut() {
        *qi *= gamma;
    }
    for ((s, y, rho), a) in pairs.iter().zip(alphas.iter().rev()) {
        let b = rho * dot(y, &q);
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += (a - b) * si;
        }
    }
    q.iter().map(|v| -v).collect()
}
