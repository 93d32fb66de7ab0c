//! Disclination content and Burgers vectors of closed curves.

use serde::{Deserialize, Serialize};

use crate::archetype::SymmetryGroup;
use crate::body::Body;
use crate::geometry::{transport_concat, Curve, Mat2, Point, RowMajor, TransportMatrix};
use crate::{Error, Result, Tolerances};

/// Maximum bisection depth when splitting segments across chart boundaries.
const MAX_SPLIT_DEPTH: u32 = 40;

/// Quadrature panels per chart-contained piece for the Burgers integral.
const BURGERS_PANELS: usize = 4;

/// A straight piece of a loop assigned to a single chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartSegment {
    pub chart: usize,
    pub start: Point,
    pub end: Point,
}

/// Splits each segment of `curve` into pieces contained in one chart.
///
/// Labelled segments must lie in their chart. Unlabelled ones go to the
/// lowest-index chart containing the whole segment, bisecting otherwise.
pub fn segment_by_chart(body: &Body, curve: &Curve) -> Result<Vec<ChartSegment>> {
    let mut out = Vec::new();
    for ((a, b), label) in curve.segments().zip(curve.chart_labels()) {
        match label {
            Some(i) => {
                let chart = body
                    .charts
                    .get(*i)
                    .ok_or_else(|| Error::InvalidArgument(format!("no chart {i}")))?;
                if !chart.domain.segment_inside(a, b) {
                    return Err(Error::ChartCover(a.x, a.y, b.x, b.y));
                }
                out.push(ChartSegment {
                    chart: *i,
                    start: a,
                    end: b,
                });
            }
            None => split_segment(body, a, b, 0, &mut out)?,
        }
    }
    Ok(out)
}

fn split_segment(
    body: &Body,
    a: Point,
    b: Point,
    depth: u32,
    out: &mut Vec<ChartSegment>,
) -> Result<()> {
    if let Some(i) = body
        .charts
        .iter()
        .position(|c| c.domain.segment_inside(a, b))
    {
        out.push(ChartSegment {
            chart: i,
            start: a,
            end: b,
        });
        return Ok(());
    }
    if depth >= MAX_SPLIT_DEPTH {
        return Err(Error::ChartCover(a.x, a.y, b.x, b.y));
    }
    let mid = (a + b) * 0.5;
    // A midpoint on a cut can end up in no chart at all; nudge it along the segment.
    let mid = if body.chart_index_at(mid).is_some() {
        mid
    } else {
        let alt = a + (b - a) * 0.5000001;
        if body.chart_index_at(alt).is_none() {
            return Err(Error::ChartCover(a.x, a.y, b.x, b.y));
        }
        alt
    };
    split_segment(body, a, mid, depth + 1, out)?;
    split_segment(body, mid, b, depth + 1, out)
}

/// Holonomy `c_γ` of a closed loop together with its conjugate `P(p) c_γ P(p)⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct DisclinationContent {
    pub matrix: TransportMatrix,
    pub base_point: Point,
    /// Chart used for the conjugation at the base point.
    pub base_chart: usize,
    pub conjugated: Mat2,
}

impl DisclinationContent {
    /// Rotation angle of the conjugated content.
    pub fn angle(&self) -> f64 {
        crate::geometry::rotation_angle(&self.conjugated)
    }

    pub fn identity_distance(&self) -> f64 {
        (self.conjugated - Mat2::identity()).norm()
    }

    /// Conjugates with another chart containing the base point.
    pub fn conjugated_in(&self, body: &Body, chart: usize) -> Result<Mat2> {
        let frame = body
            .charts
            .get(chart)
            .ok_or_else(|| Error::InvalidArgument(format!("no chart {chart}")))?
            .frame_at(self.base_point)?;
        Ok(frame.matrix() * self.matrix * frame.inverse())
    }
}

fn require_closed(curve: &Curve) -> Result<()> {
    if !curve.is_closed() {
        return Err(Error::InvalidArgument("loop is not closed".into()));
    }
    Ok(())
}

/// Chart transports of each piece, in traversal order.
fn piece_transports(body: &Body, pieces: &[ChartSegment]) -> Result<Vec<TransportMatrix>> {
    pieces
        .iter()
        .map(|s| body.charts[s.chart].transport(s.start, s.end))
        .collect()
}

pub fn disclination_content(body: &Body, curve: &Curve) -> Result<DisclinationContent> {
    require_closed(curve)?;
    let pieces = segment_by_chart(body, curve)?;
    let matrix = transport_concat(&piece_transports(body, &pieces)?)?;
    let base_point = curve.start();
    let (base_chart, frame) = body.frame_at(base_point)?;
    Ok(DisclinationContent {
        matrix,
        base_point,
        base_chart,
        conjugated: frame.matrix() * matrix * frame.inverse(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupMembership {
    pub nearest_element: RowMajor,
    pub distance: f64,
    pub pass: bool,
}

pub fn membership(group: &SymmetryGroup, conjugated: &Mat2, tol: f64) -> GroupMembership {
    let (el, distance) = group.nearest_element(conjugated);
    GroupMembership {
        nearest_element: el.into(),
        distance,
        pass: distance < tol,
    }
}

/// Checks that the conjugated disclination content lies in the symmetry group.
pub fn verify_content_in_group(
    body: &Body,
    curve: &Curve,
    tol: &Tolerances,
) -> Result<(DisclinationContent, GroupMembership)> {
    let content = disclination_content(body, curve)?;
    let m = membership(&body.group, &content.conjugated, tol.group);
    Ok((content, m))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BurgersVector {
    /// Tangent vector at the base point, in chart coordinates.
    pub vector: Point,
    pub loop_curve: Curve,
    /// `P(p) b`, the vector expressed in lattice directions.
    pub lattice: Point,
    /// Set when the loop has nonzero disclination content and the value
    /// therefore depends on the chosen circuit.
    pub circuit_dependent: bool,
}

/// `b_γ = ∫ (Π_{γ(0)}^{γ(t)})⁻¹ γ̇ dt`.
///
/// On each chart piece `[a, b]` the integrand equals
/// `(Π_{p→a})⁻¹ P(a)⁻¹ P(γ) γ̇`, so only `∫ P γ̇` needs quadrature.
pub fn burgers_vector(body: &Body, curve: &Curve, tol: &Tolerances) -> Result<BurgersVector> {
    burgers_vector_with(body, curve, tol, false)
}

/// As [`burgers_vector`], optionally accepting loops with disclination content.
pub fn burgers_vector_with(
    body: &Body,
    curve: &Curve,
    tol: &Tolerances,
    allow_disclination: bool,
) -> Result<BurgersVector> {
    let content = disclination_content(body, curve)?;
    let distance = content.identity_distance();
    let circuit_dependent = distance >= tol.identity;
    if circuit_dependent && !allow_disclination {
        return Err(Error::DisclinationPresent { distance });
    }
    let pieces = segment_by_chart(body, curve)?;
    let mut to_start = Mat2::identity();
    let mut total = Point::zeros();
    for s in &pieces {
        let chart = &body.charts[s.chart];
        let frame_a = chart.frame_at(s.start)?;
        let integral = chart.segment_integral(s.start, s.end, BURGERS_PANELS);
        let inv = crate::geometry::inverse(&to_start);
        total += inv * (frame_a.inverse() * integral);
        to_start = chart.transport(s.start, s.end)? * to_start;
    }
    let frame = body.charts[content.base_chart].frame_at(content.base_point)?;
    Ok(BurgersVector {
        vector: total,
        loop_curve: curve.clone(),
        lattice: frame.matrix() * total,
        circuit_dependent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archetype::Archetype;
    use crate::body::{build_disclination_body, build_dislocation_body, build_trivial_body};
    use crate::geometry::{rotation, Domain};
    use std::f64::consts::{PI, TAU};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn core_loop(radius: f64, segments: usize, start: f64) -> Curve {
        Curve::circle(Point::zeros(), radius, segments, start).unwrap()
    }

    #[test]
    fn disclination_core_loop_rotates_by_two_pi_alpha() {
        for alpha in [1.0 / 6.0, 1.0 / 3.0, 0.5] {
            let body =
                build_disclination_body(0.5, 2.0, alpha, Archetype::NFoldDiscrete { n: 3 }, &tol())
                    .unwrap();
            for start in [0.0, 0.4, PI, 4.0] {
                let c = disclination_content(&body, &core_loop(1.0, 48, start)).unwrap();
                assert!((c.conjugated - rotation(TAU * alpha)).norm() < 1e-10, "{alpha} {start}");
                assert!((c.matrix.determinant() - 1.0).abs() < 1e-8);
            }
            // Clockwise traversal gives the inverse.
            let c = disclination_content(&body, &core_loop(1.0, 48, 0.3).reversed()).unwrap();
            assert!((c.conjugated - rotation(-TAU * alpha)).norm() < 1e-10);
        }
    }

    #[test]
    fn contractible_loops_have_trivial_content() {
        let body =
            build_disclination_body(0.5, 2.0, 0.25, Archetype::IsotropicDistance, &tol()).unwrap();
        for center in [Point::new(1.2, 0.0), Point::new(-1.2, 0.1), Point::new(0.0, -1.3)] {
            let c = disclination_content(&body, &Curve::circle(center, 0.3, 16, 0.2).unwrap())
                .unwrap();
            assert!(c.identity_distance() < 1e-12);
        }
    }

    #[test]
    fn dislocation_loop_has_trivial_content_and_burgers() {
        let eps = 0.1;
        let body = build_dislocation_body(eps, 1.0, Archetype::NFoldDiscrete { n: 3 }).unwrap();
        let loop_c = Curve::circle(Point::new(0.05, -0.02), 0.5, 64, 0.7).unwrap();
        let c = disclination_content(&body, &loop_c).unwrap();
        assert!(c.identity_distance() < 1e-8);
        let b = burgers_vector(&body, &loop_c, &tol()).unwrap();
        let frame = body.charts[0].frame_at(loop_c.start()).unwrap();
        let expected = frame.inverse() * Point::new(eps, 0.0);
        assert!((b.vector - expected).norm() < 1e-6, "{:?} vs {expected:?}", b.vector);
        assert!((b.lattice - Point::new(eps, 0.0)).norm() < 1e-6);
        assert!(!b.circuit_dependent);
    }

    #[test]
    fn burgers_is_homotopy_invariant() {
        let body = build_dislocation_body(0.1, 1.0, Archetype::IsotropicDistance).unwrap();
        let base = Point::new(0.6, 0.0);
        // A circle and a square through the same base point.
        let circle = Curve::circle(Point::zeros(), 0.6, 40, 0.0).unwrap();
        let square = Curve::closed_polygon(vec![
            base,
            Point::new(0.6, 0.5),
            Point::new(-0.5, 0.5),
            Point::new(-0.5, -0.6),
            Point::new(0.6, -0.6),
        ])
        .unwrap();
        let b1 = burgers_vector(&body, &circle, &tol()).unwrap();
        let b2 = burgers_vector(&body, &square.refined(8), &tol()).unwrap();
        assert!((b1.vector - b2.vector).norm() < 1e-6);
        // A loop not enclosing the hole has zero Burgers vector.
        let aside = Curve::circle(Point::new(0.6, 0.0), 0.2, 32, 0.0).unwrap();
        assert!(burgers_vector(&body, &aside, &tol()).unwrap().vector.norm() < 1e-9);
    }

    #[test]
    fn trivial_body_has_zero_burgers() {
        let body = build_trivial_body(Domain::rect(-1.0, -1.0, 1.0, 1.0), Archetype::IsotropicNeoHookean)
            .unwrap();
        let c = Curve::circle(Point::new(0.1, 0.0), 0.7, 20, 0.0).unwrap();
        assert!(burgers_vector(&body, &c, &tol()).unwrap().vector.norm() < 1e-14);
    }

    #[test]
    fn burgers_additivity() {
        let body = build_dislocation_body(0.1, 1.5, Archetype::IsotropicDistance).unwrap();
        let p = Point::new(1.0, 0.0);
        let q = Point::new(-1.0, 0.3);
        let g1 = Curve::circle(Point::new(0.7, 0.0), 0.3, 32, 0.0).unwrap();
        let g2 = Curve::circle(Point::new(-0.7, 0.3), 0.3, 32, PI).unwrap();
        let arc = Curve::polyline(vec![p, Point::new(0.0, 1.0), q]).unwrap();
        let combined = g1.then(&arc).unwrap().then(&g2).unwrap().then(&arc.reversed()).unwrap();
        let b1 = burgers_vector(&body, &g1, &tol()).unwrap().vector;
        let b2 = burgers_vector(&body, &g2, &tol()).unwrap().vector;
        let pi_arc = body.charts[0].transport(p, q).unwrap();
        let bc = burgers_vector(&body, &combined, &tol()).unwrap().vector;
        assert!((bc - (b1 + crate::geometry::inverse(&pi_arc) * b2)).norm() < 1e-9);

        // Around the hole the two halves add to the full Burgers vector.
        let around = Curve::circle(Point::zeros(), 1.0, 64, 0.0).unwrap();
        let b = burgers_vector(&body, &around, &tol()).unwrap();
        assert!((b.lattice - Point::new(0.1, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn burgers_with_disclination_needs_override() {
        let body =
            build_disclination_body(0.5, 2.0, 1.0 / 6.0, Archetype::NFoldDiscrete { n: 3 }, &tol())
                .unwrap();
        let c = core_loop(1.0, 48, 0.1);
        assert!(matches!(
            burgers_vector(&body, &c, &tol()),
            Err(Error::DisclinationPresent { .. })
        ));
        let b = burgers_vector_with(&body, &c, &tol(), true).unwrap();
        assert!(b.circuit_dependent);
    }

    #[test]
    fn group_membership_reports() {
        let hex = Archetype::NFoldDiscrete { n: 3 };
        let body = build_disclination_body(0.5, 2.0, 1.0 / 3.0, hex, &tol()).unwrap();
        let (_, m) = verify_content_in_group(&body, &core_loop(1.2, 40, 0.5), &tol()).unwrap();
        assert!(m.pass && m.distance < 1e-8);
        assert!((Mat2::from(m.nearest_element) - rotation(TAU / 3.0)).norm() < 1e-12);

        let (_, m) =
            verify_content_in_group(&body, &Curve::circle(Point::new(1.2, 0.0), 0.2, 12, 0.0).unwrap(), &tol())
                .unwrap();
        assert!(m.pass && (Mat2::from(m.nearest_element) - Mat2::identity()).norm() < 1e-12);

        let iso = build_disclination_body(0.5, 2.0, 0.123, Archetype::IsotropicDistance, &tol()).unwrap();
        let (_, m) = verify_content_in_group(&iso, &core_loop(1.0, 40, 0.0), &tol()).unwrap();
        assert!(m.pass);
    }

    #[test]
    fn conjugation_is_chart_consistent() {
        let hex = Archetype::NFoldDiscrete { n: 3 };
        let body = build_disclination_body(0.5, 2.0, 1.0 / 6.0, hex, &tol()).unwrap();
        // Base point in the upper half plane lies in both charts.
        let c = disclination_content(&body, &core_loop(1.0, 40, 1.0)).unwrap();
        let other = c.conjugated_in(&body, 1).unwrap();
        let a = membership(&body.group, &c.conjugated, 1e-8);
        let b = membership(&body.group, &other, 1e-8);
        assert_eq!(a.pass, b.pass);
    }

    #[test]
    fn segmentation_covers_the_loop() {
        let body =
            build_disclination_body(0.5, 2.0, 0.25, Archetype::IsotropicDistance, &tol()).unwrap();
        let c = core_loop(1.0, 7, 0.0);
        let pieces = segment_by_chart(&body, &c).unwrap();
        assert_eq!(pieces.first().unwrap().start, c.start());
        assert_eq!(pieces.last().unwrap().end, c.end());
        for w in pieces.windows(2) {
            assert_eq!(w[0].end, w[1].start);
        }
        // A loop through the hole cannot be covered.
        let through = Curve::closed_polygon(vec![
            Point::new(-1.0, 0.1),
            Point::new(1.0, 0.1),
            Point::new(1.0, 1.0),
        ])
        .unwrap();
        assert!(matches!(
            disclination_content(&body, &through),
            Err(Error::ChartCover(..))
        ));
        assert!(disclination_content(&body, &Curve::polyline(vec![Point::new(1.0, 0.0), Point::new(0.0, 1.0)]).unwrap())
            .is_err());
    }

    #[test]
    fn discreteness_gap() {
        let hex = Archetype::NFoldDiscrete { n: 3 };
        let gap = 2.0 * 2f64.sqrt() * (PI / 6.0).sin() - 1e-6;
        for k in 1..6 {
            let body = build_disclination_body(0.4, 2.0, k as f64 / 6.0, hex.clone(), &tol()).unwrap();
            for (center, radius) in [(Point::zeros(), 1.0), (Point::new(0.1, 0.2), 1.3), (Point::new(1.2, 0.0), 0.3)] {
                let c = disclination_content(&body, &Curve::circle(center, radius, 36, 0.2).unwrap())
                    .unwrap();
                let d = c.identity_distance();
                assert!(d < 1e-8 || d >= gap, "{k} {d}");
            }
        }
    }
}
