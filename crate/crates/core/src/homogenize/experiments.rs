use serde::{Deserialize, Serialize};

use crate::archetype::Archetype;
use crate::body::{Body, ReferenceChart};
use crate::elasticity::{build_mesh, Configuration, Discretization};
use crate::geometry::{
    gaussian_curvature, rotation_angle, sym_sqrt, transport_ode, ConformalMetric, Curve, Domain,
    Mat2, MetricField, OdeOptions, Point,
};
use crate::quadrature::{integrate_triangle, integrate_unit};
use crate::{Error, Result, Tolerances};

use super::cone::{boundary_turning, cone_transport, flatten, route_loop, ConeManifold};
use super::implant::implant_cone_body;
use super::triangulate::{segment_length, triangulate_metric, DEFAULT_MIN_ANGLE};

/// Half-width of the square chart domain used with the unit sphere-cap metric.
pub const SPHERE_CAP_HALF_WIDTH: f64 = 0.85;

/// The unit-curvature stereographic metric on a slightly larger square than
/// the triangulated domain `[−0.85, 0.85]²`, which is returned alongside.
pub fn sphere_cap_setup() -> (ConformalMetric, Domain) {
    let w = SPHERE_CAP_HALF_WIDTH;
    (
        ConformalMetric::sphere_cap(Domain::rect(-1.0, -1.0, 1.0, 1.0)),
        Domain::rect(-w, -w, w, w),
    )
}

/// One resolution of a convergence study. `value` and `reference` are the
/// compared quantities; their meaning depends on the study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub n: usize,
    pub error: f64,
    pub value: f64,
    pub reference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub quantity: String,
    pub records: Vec<ConvergenceRecord>,
    /// Least-squares slope of `log error` against `log(1/n)`.
    pub observed_order: Option<f64>,
}

impl ConvergenceReport {
    pub fn new(quantity: impl Into<String>, records: Vec<ConvergenceRecord>) -> Self {
        let ns: Vec<usize> = records.iter().map(|r| r.n).collect();
        let errs: Vec<f64> = records.iter().map(|r| r.error).collect();
        Self {
            quantity: quantity.into(),
            observed_order: observed_order(&ns, &errs),
            records,
        }
    }

    pub fn is_decreasing(&self) -> bool {
        self.records.windows(2).all(|w| w[1].error < w[0].error)
    }

    pub fn last_error(&self) -> Option<f64> {
        self.records.last().map(|r| r.error)
    }
}

/// Least-squares slope of `log e` against `log(1/n)`; `None` with fewer than
/// two points or any non-positive error.
pub fn observed_order(ns: &[usize], errors: &[f64]) -> Option<f64> {
    if ns.len() < 2 || ns.len() != errors.len() || errors.iter().any(|e| !(*e > 0.0)) {
        return None;
    }
    let xs: Vec<f64> = ns.iter().map(|&n| -(n as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Some(sxy / sxx)
}

/// Cone manifold of `g` on `domain` at resolution `n`.
pub fn cone_manifold<M: MetricField + ?Sized>(g: &M, domain: &Domain, n: usize) -> Result<ConeManifold> {
    flatten(&triangulate_metric(g, domain, n, DEFAULT_MIN_ANGLE)?)
}

/// Frobenius distance between the cone-manifold transport along the routed
/// loop and the smooth transport of `g` along the same curve.
///
/// `value` is the rotation angle of the cone holonomy, `reference` that of
/// the smooth one.
pub fn transport_convergence<M: MetricField + ?Sized>(
    g: &M,
    domain: &Domain,
    loop_curve: &Curve,
    ns: &[usize],
) -> Result<ConvergenceReport> {
    let records = ns
        .iter()
        .map(|&n| {
            let c = cone_manifold(g, domain, n)?;
            let routed = route_loop(&c, loop_curve)?;
            let cone = cone_transport(&c, &routed.strip)?;
            let smooth = transport_ode(g, &routed.curve, &OdeOptions::default())?;
            Ok(ConvergenceRecord {
                n,
                error: (cone - smooth).norm(),
                value: rotation_angle(&cone),
                reference: rotation_angle(&smooth),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport::new("transport", records))
}

/// Metric length of `a + t e + s t(1 − t) |e| ν` for the unit normal `ν`.
fn bent_length<M: MetricField + ?Sized>(g: &M, a: Point, b: Point, s: f64) -> f64 {
    let e = b - a;
    let nu = Point::new(-e.y, e.x);
    integrate_unit(8, |t| {
        let p = a + e * t + nu * (s * t * (1.0 - t));
        let v = e + nu * (s * (1.0 - 2.0 * t));
        match g.metric(p) {
            Ok(m) => v.dot(&(m * v)).sqrt(),
            Err(_) => f64::INFINITY,
        }
    })
}

/// Relative gap between the straight-segment edge length and the shortest
/// parabolic arc between the same endpoints (a proxy for the geodesic).
pub fn edge_geodesic_gap<M: MetricField + ?Sized>(g: &M, a: Point, b: Point) -> Result<f64> {
    let straight = segment_length(g, a, b)?;
    let (_, bent) = crate::archetype::golden_section_min(|s| bent_length(g, a, b, s), -0.25, 0.25, 120);
    let bent = bent.min(bent_length(g, a, b, 0.0));
    Ok(((straight - bent) / bent).max(0.0))
}

/// Max relative gap between straight chart edges and geodesics per resolution.
///
/// `value` is the mean gap, `reference` the largest metric edge length.
pub fn metric_convergence<M: MetricField + ?Sized>(
    g: &M,
    domain: &Domain,
    ns: &[usize],
) -> Result<ConvergenceReport> {
    let records = ns
        .iter()
        .map(|&n| {
            let t = triangulate_metric(g, domain, n, DEFAULT_MIN_ANGLE)?;
            let mut edges: Vec<(usize, usize)> = t
                .mesh
                .triangles
                .iter()
                .flat_map(|tri| (0..3).map(move |k| (tri[k].min(tri[(k + 1) % 3]), tri[k].max(tri[(k + 1) % 3]))))
                .collect();
            edges.sort_unstable();
            edges.dedup();
            let gaps = edges
                .iter()
                .map(|&(i, j)| edge_geodesic_gap(g, t.mesh.vertices[i], t.mesh.vertices[j]))
                .collect::<Result<Vec<_>>>()?;
            let max = gaps.iter().copied().fold(0.0, f64::max);
            Ok(ConvergenceRecord {
                n,
                error: max,
                value: gaps.iter().sum::<f64>() / gaps.len() as f64,
                reference: t.max_edge_length(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport::new("metric", records))
}

/// Test maps with constant derivative, so the smooth energy is a plain
/// integral of the metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TestMap {
    Identity,
    Affine { matrix: crate::geometry::RowMajor },
}

impl TestMap {
    fn derivative(&self) -> Mat2 {
        match self {
            TestMap::Identity => Mat2::identity(),
            TestMap::Affine { matrix } => (*matrix).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyConvergence {
    /// Smooth-body energy `∫ W(A G^{-1/2}) √det G dx` by fine quadrature.
    pub exact: f64,
    /// Relative errors of the implanted cone body.
    pub implant: ConvergenceReport,
    /// Relative errors of the single-chart body with `P = √G`.
    pub torsion: ConvergenceReport,
}

/// Energy of `W(A √G⁻¹) √det G` over `domain` on a `64 × 64` grid of
/// triangles with the degree-8 rule.
pub fn smooth_energy<M: MetricField + ?Sized>(
    g: &M,
    domain: &Domain,
    archetype: &Archetype,
    a: &Mat2,
) -> Result<f64> {
    let mesh = build_mesh(domain, 64)?;
    let mut total = 0.0;
    for t in 0..mesh.triangles.len() {
        let [p0, p1, p2] = mesh.corners(t);
        let mut err = None;
        total += integrate_triangle(p0, p1, p2, |p| match g.metric(p) {
            Ok(m) => {
                let root = sym_sqrt(&m);
                archetype.eval(&(a * crate::geometry::inverse(&root))) * root.determinant()
            }
            Err(e) => {
                err = Some(e);
                0.0
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(total)
}

/// Body with the single chart `P = √G` on `domain`; generally not closed.
pub fn torsion_body<M: MetricField + Clone + 'static>(
    g: &M,
    domain: &Domain,
    archetype: Archetype,
) -> Result<Body> {
    let metric = g.clone();
    let chart = ReferenceChart::from_fn(domain.clone(), move |p| match metric.metric(p) {
        Ok(m) => sym_sqrt(&m),
        Err(_) => Mat2::from_element(f64::NAN),
    });
    Body::new(vec![chart], archetype, domain.clone())
}

/// Energies of a fixed test map on the implanted cone bodies and on the
/// torsion comparison body, against the smooth energy.
pub fn energy_convergence<M: MetricField + Clone + 'static>(
    g: &M,
    domain: &Domain,
    archetype: &Archetype,
    map: TestMap,
    ns: &[usize],
    tol: &Tolerances,
) -> Result<EnergyConvergence> {
    if archetype.symmetry_group()?.is_discrete() {
        return Err(Error::Obstruction(format!(
            "energy convergence needs an isotropic archetype; {} has a discrete symmetry group",
            archetype.name()
        )));
    }
    let a = map.derivative();
    let exact = smooth_energy(g, domain, archetype, &a)?;
    let relative = |e: f64| {
        if exact.abs() > 0.0 {
            (e - exact).abs() / exact.abs()
        } else {
            e.abs()
        }
    };
    let torsion = torsion_body(g, domain, archetype.clone())?;
    let mut implant_records = Vec::new();
    let mut torsion_records = Vec::new();
    for &n in ns {
        let t = triangulate_metric(g, domain, n, DEFAULT_MIN_ANGLE)?;
        let c = flatten(&t)?;
        let body = implant_cone_body(&c, archetype.clone(), tol)?;
        let f = Configuration::affine(&t.mesh, &a);
        let e_implant = Discretization::new(&body, &t.mesh)?.energy(&f);
        let e_torsion = Discretization::new(&torsion, &t.mesh)?.energy(&f);
        implant_records.push(ConvergenceRecord {
            n,
            error: relative(e_implant),
            value: e_implant,
            reference: exact,
        });
        torsion_records.push(ConvergenceRecord {
            n,
            error: relative(e_torsion),
            value: e_torsion,
            reference: exact,
        });
    }
    Ok(EnergyConvergence {
        exact,
        implant: ConvergenceReport::new("energy-implant", implant_records),
        torsion: ConvergenceReport::new("energy-torsion", torsion_records),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeficitReport {
    pub n: usize,
    /// Max over interior vertices of `|δ − ∫K| / |∫K|` on barycentric dual
    /// cells; vertices with `|∫K| ≤ 1e−12` are skipped.
    pub max_relative_error: f64,
    pub max_abs_error: f64,
    pub interior_deficit_sum: f64,
    pub interior_curvature_sum: f64,
    /// `|Σ δ − Σ ∫K|` over interior vertices and their dual cells.
    pub gauss_bonnet_residual: f64,
    /// `Σ (π − θ)` over boundary vertices.
    pub boundary_turning: f64,
}

/// Curvature integral `∫ K √det G` over the barycentric dual cell of `v`.
pub fn dual_cell_curvature<M: MetricField + ?Sized>(g: &M, c: &ConeManifold, v: usize) -> Result<f64> {
    let x = c.positions[v];
    let mut total = 0.0;
    for (t, r) in c.fan(v) {
        let tri = c.triangles[t];
        let centroid = (c.positions[tri[0]] + c.positions[tri[1]] + c.positions[tri[2]]) / 3.0;
        let ma = (x + c.positions[r[1]]) * 0.5;
        let mb = (x + c.positions[r[2]]) * 0.5;
        for (p, q) in [(ma, centroid), (centroid, mb)] {
            let mut err = None;
            total += integrate_triangle(x, p, q, |y| {
                let k = gaussian_curvature(g, y, 1e-4, 1e-3);
                let m = g.metric(y);
                match (k, m) {
                    (Ok(k), Ok(m)) => k * m.determinant().sqrt(),
                    (Err(e), _) | (_, Err(e)) => {
                        err = Some(e);
                        0.0
                    }
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
    }
    Ok(total)
}

/// Compares vertex deficits with curvature integrals over dual cells.
pub fn deficit_vs_curvature<M: MetricField + ?Sized>(g: &M, domain: &Domain, n: usize) -> Result<DeficitReport> {
    let c = cone_manifold(g, domain, n)?;
    let mut max_rel = 0.0f64;
    let mut max_abs = 0.0f64;
    let mut sum_d = 0.0;
    let mut sum_k = 0.0;
    for v in c.interior_vertices() {
        let d = c.deficits[v].unwrap();
        let k = dual_cell_curvature(g, &c, v)?;
        sum_d += d;
        sum_k += k;
        max_abs = max_abs.max((d - k).abs());
        if k.abs() > 1e-12 {
            max_rel = max_rel.max((d - k).abs() / k.abs());
        }
    }
    Ok(DeficitReport {
        n,
        max_relative_error: max_rel,
        max_abs_error: max_abs,
        interior_deficit_sum: sum_d,
        interior_curvature_sum: sum_k,
        gauss_bonnet_residual: (sum_d - sum_k).abs(),
        boundary_turning: boundary_turning(&c),
    })
}
