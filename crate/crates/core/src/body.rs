//! Lattice structures: atlases of reference charts over a body region, their
//! closedness and overlap-compatibility checks, and the single-disclination
//! and single-dislocation constructions.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::archetype::{Archetype, SymmetryGroup};
use crate::geometry::{
    angle_in_branch, rotation, transport_chart, Domain, FrameMatrix, Mat2,
    MetricField, Point, StarDomain, TransportMatrix,
};
use crate::{Error, Result, Tolerances};

/// A smooth field of reference frames `P(p)` on a chart domain.
pub trait FrameField: Send + Sync + fmt::Debug {
    fn frame(&self, p: Point) -> Mat2;

    /// Exact closedness residual for frames that are not smooth in chart
    /// coordinates (piecewise-constant developments). `None` means the
    /// finite-difference curl applies.
    fn jump_residual(&self) -> Option<f64> {
        None
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConstantFrame(pub Mat2);

impl FrameField for ConstantFrame {
    fn frame(&self, _p: Point) -> Mat2 {
        self.0
    }
}

/// `d(χ⁻¹)` for the sector-removal gluing `χ⁻¹(r, φ) = r (cos βφ, sin βφ)`,
/// with the polar angle taken in `[branch_start, branch_start + 2π)`.
/// In Cartesian coordinates `P = R(βφ) diag(1, β) R(−φ)`.
#[derive(Debug, Clone, Copy)]
pub struct DisclinationFrame {
    pub beta: f64,
    pub branch_start: f64,
    pub center: Point,
}

impl FrameField for DisclinationFrame {
    fn frame(&self, p: Point) -> Mat2 {
        let phi = angle_in_branch(p, self.center, self.branch_start);
        rotation(self.beta * phi) * Mat2::new(1.0, 0.0, 0.0, self.beta) * rotation(-phi)
    }
}

/// `Id + (ε/2π) e₁ ⊗ dφ` around `center`.
#[derive(Debug, Clone, Copy)]
pub struct DislocationFrame {
    pub eps: f64,
    pub center: Point,
}

impl FrameField for DislocationFrame {
    fn frame(&self, p: Point) -> Mat2 {
        let d = p - self.center;
        let r2 = d.norm_squared();
        let c = self.eps / (TAU * r2);
        // dφ = (−y dx + x dy) / r²
        Mat2::new(1.0 - c * d.y, c * d.x, 0.0, 1.0)
    }
}

/// Frame given by a closure.
pub struct FnFrame(pub Box<dyn Fn(Point) -> Mat2 + Send + Sync>);

impl fmt::Debug for FnFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("FnFrame")
    }
}

impl FrameField for FnFrame {
    fn frame(&self, p: Point) -> Mat2 {
        (self.0)(p)
    }
}

/// Piecewise-constant frame on the fan of a star domain: the differential of
/// a continuous piecewise-affine developing map.
#[derive(Debug, Clone)]
pub struct FanFrame {
    pub star: StarDomain,
    pub frames: Vec<Mat2>,
}

impl FrameField for FanFrame {
    fn frame(&self, p: Point) -> Mat2 {
        match self.star.locate(p) {
            Some(k) => self.frames[k],
            None => Mat2::from_element(f64::NAN),
        }
    }

    /// Closedness of a piecewise-constant form is continuity of its
    /// tangential component across each interior spoke.
    fn jump_residual(&self) -> Option<f64> {
        let m = self.star.fan.len();
        let closed_fan = m > 2 && (self.star.fan[m - 1].1 - self.star.fan[0].0).norm() < 1e-12;
        let mut worst = 0.0f64;
        for k in 0..m {
            let prev = if k == 0 {
                if !closed_fan {
                    continue;
                }
                m - 1
            } else {
                k - 1
            };
            let outer = self.star.fan[k].0;
            if self
                .star
                .excluded_spokes
                .iter()
                .any(|s| (s - outer).norm() < 1e-12)
            {
                continue;
            }
            let e = outer - self.star.center;
            let jump = (self.frames[k] * e - self.frames[prev] * e).norm() / e.norm();
            worst = worst.max(jump);
        }
        Some(worst)
    }
}

/// A reference chart `(U, P)`.
#[derive(Clone)]
pub struct ReferenceChart {
    pub domain: Domain,
    frame: Arc<dyn FrameField>,
}

impl fmt::Debug for ReferenceChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReferenceChart")
            .field("domain", &self.domain)
            .field("frame", &self.frame)
            .finish()
    }
}

impl ReferenceChart {
    pub fn new(domain: Domain, frame: impl FrameField + 'static) -> Self {
        Self {
            domain,
            frame: Arc::new(frame),
        }
    }

    pub fn from_fn(domain: Domain, f: impl Fn(Point) -> Mat2 + Send + Sync + 'static) -> Self {
        Self::new(domain, FnFrame(Box::new(f)))
    }

    pub fn contains(&self, p: Point) -> bool {
        self.domain.contains(p)
    }

    /// Frame at `p` without domain or validity checks.
    pub fn raw_frame(&self, p: Point) -> Mat2 {
        self.frame.frame(p)
    }

    pub fn frame_field(&self) -> &Arc<dyn FrameField> {
        &self.frame
    }

    pub fn frame_at(&self, p: Point) -> Result<FrameMatrix> {
        if !self.domain.contains(p) {
            return Err(Error::domain(p, "reference chart"));
        }
        FrameMatrix::new(self.frame.frame(p))
    }

    /// Material transport `P(q)⁻¹ P(p)` between two points of the chart.
    pub fn transport(&self, p: Point, q: Point) -> Result<TransportMatrix> {
        let fp = self.frame_at(p)?;
        let fq = self.frame_at(q)?;
        transport_chart(fp.matrix(), fq.matrix())
    }

    /// Line integral `∫ P(γ) γ̇` along the straight segment `[a, b]`
    /// (composite 5-node Gauss–Legendre).
    pub fn segment_integral(&self, a: Point, b: Point, panels: usize) -> Point {
        let d = b - a;
        let mut total = Point::zeros();
        let panels = panels.max(1);
        let width = 1.0 / panels as f64;
        for k in 0..panels {
            for &(x, w) in &crate::quadrature::GAUSS5 {
                let t = (k as f64 + x) * width;
                total += self.frame.frame(a + d * t) * d * (w * width);
            }
        }
        total
    }

    /// Rejects a declared volume density that does not match `det P`.
    pub fn check_volume(&self, declared: impl Fn(Point) -> f64, tol_vol: f64) -> Result<()> {
        for p in self.domain.sample_points(16) {
            let det = self.frame.frame(p).determinant();
            let v = declared(p);
            if (v - det).abs() > tol_vol * det.abs().max(1.0) {
                return Err(Error::InvalidArgument(format!(
                    "declared volume {v} differs from det P = {det} at ({}, {})",
                    p.x, p.y
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedReport {
    pub max_residual: f64,
    pub samples: usize,
    pub pass: bool,
}

/// Max over grid samples of `|∂₁P_{i2} − ∂₂P_{i1}|` by finite differences.
pub fn check_closed(chart: &ReferenceChart, h: f64, tol: f64) -> ClosedReport {
    if let Some(r) = chart.frame.jump_residual() {
        return ClosedReport {
            max_residual: r,
            samples: 0,
            pass: r < tol,
        };
    }
    // Central differences at h and h/2 combined by Richardson extrapolation.
    let diff = |p: Point, e: Point| -> Mat2 {
        let wide = (chart.raw_frame(p + e) - chart.raw_frame(p - e)) / (2.0 * e.norm());
        let narrow =
            (chart.raw_frame(p + e * 0.5) - chart.raw_frame(p - e * 0.5)) / e.norm();
        (narrow * 4.0 - wide) / 3.0
    };
    let ex = Point::new(h, 0.0);
    let ey = Point::new(0.0, h);
    let mut worst = 0.0f64;
    let mut samples = 0;
    for p in chart.domain.sample_points(32) {
        if !chart.domain.stencil_inside(p, h) {
            continue;
        }
        let d1 = diff(p, ex);
        let d2 = diff(p, ey);
        for i in 0..2 {
            worst = worst.max((d1[(i, 1)] - d2[(i, 0)]).abs());
        }
        samples += 1;
    }
    ClosedReport {
        max_residual: worst,
        samples,
        pass: worst < tol,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompatibilityReport {
    pub max_group_distance: f64,
    pub samples: usize,
    pub locally_constant: bool,
    pub pass: bool,
}

/// Checks `P_a(p) P_b(p)⁻¹ ∈ G` on sampled overlap points.
pub fn check_overlap_compatibility(
    a: &ReferenceChart,
    b: &ReferenceChart,
    archetype: &Archetype,
    tol: f64,
) -> Result<CompatibilityReport> {
    let group = archetype.symmetry_group()?;
    check_overlap_with_group(a, b, &group, tol)
}

pub fn check_overlap_with_group(
    a: &ReferenceChart,
    b: &ReferenceChart,
    group: &SymmetryGroup,
    tol: f64,
) -> Result<CompatibilityReport> {
    let mut points: Vec<Point> = a
        .domain
        .sample_points(16)
        .into_iter()
        .filter(|p| b.contains(*p))
        .collect();
    if points.len() < 4 {
        points.extend(
            b.domain
                .sample_points(16)
                .into_iter()
                .filter(|p| a.contains(*p)),
        );
    }
    if points.is_empty() {
        return Err(Error::DisjointDomains);
    }
    let mut worst = 0.0f64;
    let mut nearest = Vec::with_capacity(points.len());
    for p in &points {
        let pa = a.frame_at(*p)?;
        let pb = b.frame_at(*p)?;
        let transition = pa.matrix() * pb.inverse();
        let (el, d) = group.nearest_element(&transition);
        worst = worst.max(d);
        nearest.push(el);
    }
    // For discrete groups the transition must be constant along connected
    // pieces of the overlap; compare neighbouring samples joined inside it.
    let mut locally_constant = true;
    if group.is_discrete() && points.len() > 1 {
        let mut spacing = f64::INFINITY;
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                spacing = spacing.min((points[i] - points[j]).norm());
            }
        }
        let radius = 1.5 * spacing;
        'outer: for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if (points[i] - points[j]).norm() > radius {
                    continue;
                }
                if (nearest[i] - nearest[j]).norm() > 1e-9
                    && a.domain.segment_inside(points[i], points[j])
                    && b.domain.segment_inside(points[i], points[j])
                {
                    locally_constant = false;
                    break 'outer;
                }
            }
        }
    }
    Ok(CompatibilityReport {
        max_group_distance: worst,
        samples: points.len(),
        locally_constant,
        pass: worst < tol && locally_constant,
    })
}

fn boxes_overlap(a: &Domain, b: &Domain) -> bool {
    let (amin, amax) = a.bbox();
    let (bmin, bmax) = b.bbox();
    amin.x < bmax.x && bmin.x < amax.x && amin.y < bmax.y && bmin.y < amax.y
}

/// `(M, {U_α, P_α}, W)`: reference charts over a body region with an archetype.
#[derive(Debug, Clone)]
pub struct Body {
    pub charts: Vec<ReferenceChart>,
    pub archetype: Archetype,
    pub group: SymmetryGroup,
    /// Declared body region in the global chart.
    pub region: Domain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapEntry {
    pub first: usize,
    pub second: usize,
    pub report: CompatibilityReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub closed: Vec<ClosedReport>,
    pub overlaps: Vec<OverlapEntry>,
    pub closed_pass: bool,
    pub compatible_pass: bool,
    pub max_group_distance: f64,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.closed_pass && self.compatible_pass
    }
}

impl Body {
    pub fn new(charts: Vec<ReferenceChart>, archetype: Archetype, region: Domain) -> Result<Self> {
        if charts.is_empty() {
            return Err(Error::InvalidArgument("a body needs at least one chart".into()));
        }
        let group = archetype.symmetry_group()?;
        Ok(Self {
            charts,
            archetype,
            group,
            region,
        })
    }

    /// Lowest-index chart containing `p`.
    pub fn chart_index_at(&self, p: Point) -> Option<usize> {
        self.charts.iter().position(|c| c.contains(p))
    }

    pub fn frame_at(&self, p: Point) -> Result<(usize, FrameMatrix)> {
        let i = self
            .chart_index_at(p)
            .ok_or_else(|| Error::domain(p, "no chart contains the point"))?;
        Ok((i, self.charts[i].frame_at(p)?))
    }

    /// Checks closedness of every chart and compatibility of every overlap.
    pub fn validate(&self, tol: &Tolerances) -> Result<ValidationReport> {
        let closed: Vec<ClosedReport> = self
            .charts
            .iter()
            .map(|c| check_closed(c, tol.closed_step, tol.closed))
            .collect();
        let mut overlaps = Vec::new();
        for i in 0..self.charts.len() {
            for j in (i + 1)..self.charts.len() {
                if !boxes_overlap(&self.charts[i].domain, &self.charts[j].domain) {
                    continue;
                }
                match check_overlap_with_group(&self.charts[i], &self.charts[j], &self.group, tol.group)
                {
                    Ok(report) => overlaps.push(OverlapEntry {
                        first: i,
                        second: j,
                        report,
                    }),
                    Err(Error::DisjointDomains) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        let max_group_distance = overlaps
            .iter()
            .map(|o| o.report.max_group_distance)
            .fold(0.0, f64::max);
        Ok(ValidationReport {
            closed_pass: closed.iter().all(|c| c.pass),
            compatible_pass: overlaps.iter().all(|o| o.report.pass),
            closed,
            overlaps,
            max_group_distance,
        })
    }

    /// Validates and converts a compatibility failure into an error.
    pub fn validated(self, tol: &Tolerances) -> Result<Self> {
        let report = self.validate(tol)?;
        if !report.compatible_pass {
            return Err(Error::IncompatibleDisclination {
                distance: report.max_group_distance,
            });
        }
        if !report.closed_pass {
            let worst = report
                .closed
                .iter()
                .map(|c| c.max_residual)
                .fold(0.0, f64::max);
            return Err(Error::InvalidArgument(format!(
                "reference chart is not closed (residual {worst:e})"
            )));
        }
        Ok(self)
    }

    pub fn induced_metric(&self) -> InducedMetric {
        InducedMetric { body: self.clone() }
    }

    /// `W_p(A) = W(A P(p)⁻¹)` using the lowest-index chart containing `p`.
    pub fn energy_density_at(&self, p: Point, a: &Mat2) -> Result<f64> {
        let (_, frame) = self.frame_at(p)?;
        Ok(self.archetype.eval(&(a * frame.inverse())))
    }

    pub fn energy_density_in_chart(&self, chart: usize, p: Point, a: &Mat2) -> Result<f64> {
        let frame = self
            .charts
            .get(chart)
            .ok_or_else(|| Error::InvalidArgument(format!("no chart {chart}")))?
            .frame_at(p)?;
        Ok(self.archetype.eval(&(a * frame.inverse())))
    }
}

/// The metric `PᵀP` of a body, evaluated in whichever chart contains the point.
#[derive(Debug, Clone)]
pub struct InducedMetric {
    body: Body,
}

impl MetricField for InducedMetric {
    fn metric(&self, p: Point) -> Result<Mat2> {
        if !self.body.region.contains(p) {
            return Err(Error::domain(p, "body region"));
        }
        let (_, f) = self.body.frame_at(p)?;
        Ok(f.matrix().transpose() * f.matrix())
    }

    fn domain(&self) -> &Domain {
        &self.body.region
    }
}

pub fn induced_metric(body: &Body) -> InducedMetric {
    body.induced_metric()
}

pub fn energy_density_at(body: &Body, p: Point, a: &Mat2) -> Result<f64> {
    body.energy_density_at(p, a)
}

/// The two reference charts of the single-disclination body: `U₁` with
/// `φ ∈ (0, 2π)` and `U₂` with `φ ∈ (−π, π)`, both with `β = 1 − α`.
pub fn disclination_charts(r0: f64, r1: f64, alpha: f64) -> Result<[ReferenceChart; 2]> {
    if !(r0 >= 0.0 && r0 < r1) {
        return Err(Error::InvalidArgument(format!(
            "disclination body needs 0 <= r0 < r1, got r0 = {r0}, r1 = {r1}"
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "disclination angle fraction must lie in (0, 1), got {alpha}"
        )));
    }
    let beta = 1.0 - alpha;
    let chart = |phi0: f64| {
        ReferenceChart::new(
            Domain::AnnulusSector {
                center: Point::zeros(),
                r0,
                r1,
                phi0,
                phi1: phi0 + TAU,
            },
            DisclinationFrame {
                beta,
                branch_start: phi0,
                center: Point::zeros(),
            },
        )
    };
    Ok([chart(0.0), chart(-PI)])
}

/// Annulus with a sector of angle `2πα` removed and its edges glued.
pub fn build_disclination_body(
    r0: f64,
    r1: f64,
    alpha: f64,
    archetype: Archetype,
    tol: &Tolerances,
) -> Result<Body> {
    let charts = disclination_charts(r0, r1, alpha)?;
    Body::new(charts.to_vec(), archetype, Domain::annulus(r0, r1))?.validated(tol)
}

/// Single-chart body on `r ∈ (ε, r₁)` with `P = Id + (ε/2π) e₁ ⊗ dφ`.
pub fn build_dislocation_body(eps: f64, r1: f64, archetype: Archetype) -> Result<Body> {
    if !(eps >= 0.0 && eps < r1) {
        return Err(Error::InvalidArgument(format!(
            "dislocation body needs 0 <= eps < r1, got eps = {eps}, r1 = {r1}"
        )));
    }
    let domain = Domain::annulus(eps, r1);
    let chart = ReferenceChart::new(
        domain.clone(),
        DislocationFrame {
            eps,
            center: Point::zeros(),
        },
    );
    Body::new(vec![chart], archetype, domain)
}

/// Defect-free body with `P = Id` on `domain`.
pub fn build_trivial_body(domain: Domain, archetype: Archetype) -> Result<Body> {
    let chart = ReferenceChart::new(domain.clone(), ConstantFrame(Mat2::identity()));
    Body::new(vec![chart], archetype, domain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rotation_angle;

    fn hex() -> Archetype {
        Archetype::NFoldDiscrete { n: 3 }
    }

    #[test]
    fn closedness_residuals() {
        let c = ReferenceChart::new(Domain::unit_square(), ConstantFrame(Mat2::new(2.0, 1.0, 0.0, 1.0)));
        assert_eq!(check_closed(&c, 1e-4, 1e-6).max_residual, 0.0);

        let body = build_dislocation_body(0.1, 1.0, hex()).unwrap();
        let r = check_closed(&body.charts[0], 1e-4, 1e-6);
        assert!(r.pass && r.max_residual < 1e-6, "{r:?}");
        assert!(r.samples > 100);

        // P = Id + x e₁ ⊗ dy has dP = e₁ dx∧dy.
        let c = ReferenceChart::from_fn(Domain::unit_square(), |p| Mat2::new(1.0, p.x, 0.0, 1.0));
        let r = check_closed(&c, 1e-4, 1e-6);
        assert!((r.max_residual - 1.0).abs() < 1e-9);
        assert!(!r.pass);

        for c in disclination_charts(0.5, 2.0, 0.25).unwrap() {
            assert!(check_closed(&c, 1e-4, 1e-6).pass);
        }
    }

    #[test]
    fn disclination_frame_on_the_positive_ray() {
        let [u1, _] = disclination_charts(0.5, 2.0, 1.0 / 6.0).unwrap();
        let p = u1.frame_at(Point::new(1.0, 1e-12)).unwrap();
        assert!((p.matrix() - Mat2::new(1.0, 0.0, 0.0, 5.0 / 6.0)).norm() < 1e-10);
        // On the negative side the frame has turned by R(2πβ).
        let q = u1.frame_at(Point::new(1.0, -1e-12)).unwrap();
        let transition = q.matrix() * p.inverse();
        let angle = rotation_angle(&transition);
        assert!((angle - (TAU * 5.0 / 6.0 - TAU)).abs() < 1e-9);
    }

    #[test]
    fn small_alpha_approaches_identity_frame() {
        let [u1, _] = disclination_charts(0.5, 2.0, 1e-12).unwrap();
        for p in u1.domain.sample_points(8) {
            assert!((u1.raw_frame(p) - Mat2::identity()).norm() < 1e-10);
        }
    }

    #[test]
    fn overlap_compatibility() {
        let [u1, u2] = disclination_charts(0.5, 2.0, 0.3).unwrap();
        let same = check_overlap_compatibility(&u1, &u1, &hex(), 1e-8).unwrap();
        assert!(same.pass && same.max_group_distance < 1e-12);

        for alpha in [0.05, 0.3, 0.77] {
            let [u1, u2] = disclination_charts(0.5, 2.0, alpha).unwrap();
            let r = check_overlap_compatibility(&u1, &u2, &Archetype::IsotropicDistance, 1e-8).unwrap();
            assert!(r.pass, "{alpha}: {r:?}");
        }

        let [a, b] = disclination_charts(0.5, 2.0, 0.2).unwrap();
        let r = check_overlap_compatibility(&a, &b, &hex(), 1e-8).unwrap();
        assert!(!r.pass);
        // R(0.4π) is 12° from the nearest hexagonal element.
        let expected = 2.0 * 2f64.sqrt() * (PI / 30.0).sin();
        assert!((r.max_group_distance - expected).abs() < 1e-12, "{r:?}");
        assert!(r.max_group_distance > 0.1);

        let far = ReferenceChart::new(Domain::rect(5.0, 5.0, 6.0, 6.0), ConstantFrame(Mat2::identity()));
        assert!(matches!(
            check_overlap_compatibility(&u2, &far, &hex(), 1e-8),
            Err(Error::DisjointDomains)
        ));
    }

    #[test]
    fn non_constant_discrete_transition_is_detected() {
        // Transition jumps between two group elements inside a connected overlap.
        let a = ReferenceChart::new(Domain::unit_square(), ConstantFrame(Mat2::identity()));
        let b = ReferenceChart::from_fn(Domain::unit_square(), |p| {
            if p.x < 0.5 {
                Mat2::identity()
            } else {
                rotation(PI / 3.0)
            }
        });
        let r = check_overlap_compatibility(&a, &b, &hex(), 1e-8).unwrap();
        assert!(r.max_group_distance < 1e-12);
        assert!(!r.locally_constant && !r.pass);
    }

    #[test]
    fn disclination_body_validity_follows_group() {
        let tol = Tolerances::default();
        assert!(build_disclination_body(0.5, 2.0, 1.0 / 6.0, hex(), &tol).is_ok());
        assert!(build_disclination_body(0.5, 2.0, 0.5, Archetype::NFoldDiscrete { n: 2 }, &tol).is_ok());
        match build_disclination_body(0.5, 2.0, 0.2, hex(), &tol) {
            Err(Error::IncompatibleDisclination { distance }) => assert!(distance > 0.1),
            other => panic!("expected incompatibility, got {other:?}"),
        }
        assert!(build_disclination_body(0.5, 2.0, 0.2, Archetype::IsotropicNeoHookean, &tol).is_ok());
        assert!(build_disclination_body(2.0, 1.0, 0.2, hex(), &tol).is_err());
        assert!(build_disclination_body(0.5, 1.0, 1.0, hex(), &tol).is_err());
    }

    #[test]
    fn dislocation_line_integral() {
        let eps = 0.1;
        let body = build_dislocation_body(eps, 1.0, hex()).unwrap();
        let c = crate::geometry::Curve::circle(Point::zeros(), 0.5, 64, 0.0).unwrap();
        let total: Point = c
            .segments()
            .map(|(a, b)| body.charts[0].segment_integral(a, b, 4))
            .sum();
        assert!((total - Point::new(eps, 0.0)).norm() < 1e-12, "{total:?}");
        let tol = Tolerances::default();
        for arch in [hex(), Archetype::IsotropicDistance] {
            let b = build_dislocation_body(eps, 1.0, arch).unwrap();
            assert!(b.validate(&tol).unwrap().pass());
        }
        let trivial = build_dislocation_body(0.0, 1.0, hex()).unwrap();
        assert_eq!(trivial.charts[0].raw_frame(Point::new(0.3, 0.2)), Mat2::identity());
    }

    #[test]
    fn induced_metric_is_chart_independent() {
        let tol = Tolerances::default();
        let body = build_disclination_body(0.5, 2.0, 1.0 / 3.0, Archetype::IsotropicDistance, &tol).unwrap();
        let mut checked = 0;
        for p in Domain::annulus(0.5, 2.0).sample_points(12) {
            if body.charts[0].contains(p) && body.charts[1].contains(p) {
                let g1 = body.charts[0].raw_frame(p);
                let g2 = body.charts[1].raw_frame(p);
                assert!((g1.transpose() * g1 - g2.transpose() * g2).norm() < 1e-10);
                let a = Mat2::new(1.2, 0.1, -0.3, 0.9);
                let w1 = body.energy_density_in_chart(0, p, &a).unwrap();
                let w2 = body.energy_density_in_chart(1, p, &a).unwrap();
                assert!((w1 - w2).abs() < 1e-10);
                checked += 1;
            }
        }
        assert!(checked >= 100, "{checked}");
        let m = body.induced_metric();
        assert!(m.metric(Point::new(0.1, 0.0)).is_err());
    }

    #[test]
    fn dislocation_induced_metric_closed_form() {
        let eps = 0.1;
        let r0 = 0.4;
        let body = build_dislocation_body(eps, 1.0, Archetype::IsotropicDistance).unwrap();
        let g = body.induced_metric().metric(Point::new(r0, 0.0)).unwrap();
        // At (r0, 0): dφ = dy / r0, so P = Id + (ε / 2π r0) e₁ ⊗ e₂.
        let c = eps / (TAU * r0);
        let p = Mat2::new(1.0, c, 0.0, 1.0);
        assert!((g - p.transpose() * p).norm() < 1e-15);
    }

    #[test]
    fn energy_density_cancels_reference_frame() {
        let body = build_trivial_body(Domain::unit_square(), Archetype::IsotropicDistance).unwrap();
        assert_eq!(body.energy_density_at(Point::new(0.5, 0.5), &Mat2::identity()).unwrap(), 0.0);
        let b = build_dislocation_body(0.1, 1.0, Archetype::IsotropicNeoHookean).unwrap();
        let p = Point::new(0.3, 0.4);
        let frame = *b.frame_at(p).unwrap().1.matrix();
        let w = b.energy_density_at(p, &frame).unwrap();
        assert!((w - Archetype::IsotropicNeoHookean.eval(&Mat2::identity())).abs() < 1e-14);
        assert!(b.energy_density_at(Point::new(0.01, 0.0), &frame).is_err());
    }

    #[test]
    fn declared_volume_must_match() {
        let body = build_dislocation_body(0.1, 1.0, hex()).unwrap();
        let c = &body.charts[0];
        assert!(c.check_volume(|p| c.raw_frame(p).determinant(), 1e-8).is_ok());
        assert!(c.check_volume(|_| 1.0, 1e-8).is_err());
    }

    #[test]
    fn fan_frame_jump_residual() {
        let pts: Vec<Point> = (0..6)
            .map(|k| {
                let t = k as f64 * PI / 3.0;
                Point::new(t.cos(), t.sin())
            })
            .collect();
        let star = StarDomain {
            center: Point::zeros(),
            fan: (0..6).map(|k| (pts[k], pts[(k + 1) % 6])).collect(),
            excluded_spokes: vec![pts[0]],
        };
        let chart = ReferenceChart::new(
            Domain::Star(star.clone()),
            FanFrame {
                star: star.clone(),
                frames: vec![Mat2::identity(); 6],
            },
        );
        assert_eq!(check_closed(&chart, 1e-4, 1e-6).max_residual, 0.0);
        let mut frames = vec![Mat2::identity(); 6];
        frames[2] = Mat2::new(1.0, 0.5, 0.0, 1.0);
        let broken = ReferenceChart::new(Domain::Star(star.clone()), FanFrame { star, frames });
        assert!(!check_closed(&broken, 1e-4, 1e-6).pass);
    }
}
