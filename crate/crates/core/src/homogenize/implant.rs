use std::collections::VecDeque;

use crate::archetype::{Archetype, SymmetryGroup};
use crate::body::{Body, FanFrame, ReferenceChart};
use crate::geometry::{rotation, Domain, Mat2, Point, StarDomain};
use crate::{Error, Result, Tolerances};

use super::cone::{rotation_between, ConeManifold};

/// Largest distance from the symmetry group over the rotations by the
/// interior deficits.
pub fn max_deficit_group_distance(c: &ConeManifold, group: &SymmetryGroup) -> f64 {
    c.deficits
        .iter()
        .flatten()
        .map(|&d| group.nearest_element(&rotation(d)).1)
        .fold(0.0, f64::max)
}

/// Frame of `next` unfolded from `frame` across the chart edge vector `e`.
fn unfold(c: &ConeManifold, frame: &Mat2, next: usize, e: Point) -> Mat2 {
    let l = c.developing_map(next);
    rotation_between(l * e, frame * e) * l
}

/// Developing frames along a breadth-first spanning tree of the dual graph.
fn global_frames(c: &ConeManifold) -> Vec<Mat2> {
    let mut frames: Vec<Option<Mat2>> = vec![None; c.triangles.len()];
    let mut queue = VecDeque::new();
    for root in 0..c.triangles.len() {
        if frames[root].is_some() {
            continue;
        }
        frames[root] = Some(c.developing_map(root));
        queue.push_back(root);
        while let Some(t) = queue.pop_front() {
            let frame = frames[t].unwrap();
            for k in 0..3 {
                if let Some(s) = c.neighbors[t][k] {
                    if frames[s].is_none() {
                        let tri = c.triangles[t];
                        let e = c.positions[tri[(k + 2) % 3]] - c.positions[tri[(k + 1) % 3]];
                        frames[s] = Some(unfold(c, &frame, s, e));
                        queue.push_back(s);
                    }
                }
            }
        }
    }
    frames.into_iter().map(|f| f.unwrap()).collect()
}

/// Star chart around `v` whose frames are unfolded around the fan starting at
/// position `first` with `start_frame`; spokes in `cuts` are excluded.
fn star_chart(
    c: &ConeManifold,
    v: usize,
    fan: &[(usize, [usize; 3])],
    first: usize,
    start_frame: Mat2,
    cuts: Vec<Point>,
) -> ReferenceChart {
    let m = fan.len();
    let center = c.positions[v];
    let star = StarDomain {
        center,
        fan: fan
            .iter()
            .map(|(_, r)| (c.positions[r[1]], c.positions[r[2]]))
            .collect(),
        excluded_spokes: cuts,
    };
    let mut frames = vec![Mat2::zeros(); m];
    frames[first] = start_frame;
    for step in 1..m {
        let k = (first + step) % m;
        let prev = (k + m - 1) % m;
        // Spoke shared by fan triangles `prev` and `k`.
        let e = c.positions[fan[k].1[1]] - center;
        frames[k] = unfold(c, &frames[prev], fan[k].0, e);
    }
    ReferenceChart::new(Domain::Star(star.clone()), FanFrame { star, frames })
}

/// Body whose charts are the vertex stars of the cone manifold, with frames
/// given by developing the flat triangles into the plane.
///
/// Interior vertices get two charts cut along opposite spokes; their
/// transition is the rotation by the deficit. A discrete archetype is
/// rejected unless every such rotation lies in its symmetry group.
pub fn implant_cone_body(c: &ConeManifold, archetype: Archetype, tol: &Tolerances) -> Result<Body> {
    let group = archetype.symmetry_group()?;
    if group.is_discrete() {
        let distance = max_deficit_group_distance(c, &group);
        if distance >= tol.group {
            return Err(Error::IncompatibleDisclination { distance });
        }
    }
    let global = global_frames(c);
    let mut charts = Vec::new();
    for v in 0..c.positions.len() {
        let fan = c.fan(v);
        if fan.is_empty() {
            continue;
        }
        let m = fan.len();
        let spoke = |k: usize| c.positions[fan[k].1[1]];
        if c.boundary[v] {
            let cuts = vec![spoke(0), c.positions[fan[m - 1].1[2]]];
            charts.push(star_chart(c, v, &fan, 0, global[fan[0].0], cuts));
        } else {
            let a = star_chart(c, v, &fan, 0, global[fan[0].0], vec![spoke(0)]);
            let half = m / 2;
            let start_b = match a.frame_field().frame(interior_point(c, fan[half].0)) {
                f if f.iter().all(|x| x.is_finite()) => f,
                _ => return Err(Error::Mesh(format!("star of vertex {v} is degenerate"))),
            };
            let b = star_chart(c, v, &fan, half, start_b, vec![spoke(half)]);
            charts.push(a);
            charts.push(b);
        }
    }
    let (min, max) = bounding_box(&c.positions);
    let body = Body::new(charts, archetype, Domain::Rect { min, max })?;
    body.validated(tol)
}

fn interior_point(c: &ConeManifold, t: usize) -> Point {
    let tri = c.triangles[t];
    (c.positions[tri[0]] + c.positions[tri[1]] + c.positions[tri[2]]) / 3.0
}

fn bounding_box(points: &[Point]) -> (Point, Point) {
    let mut min = points[0];
    let mut max = points[0];
    for p in points {
        min = min.inf(p);
        max = max.sup(p);
    }
    (min, max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defects::disclination_content;
    use crate::geometry::{rotation_angle, ConformalMetric, Curve};
    use crate::homogenize::{flatten, triangulate_metric, DEFAULT_MIN_ANGLE};

    fn sphere_cone(n: usize) -> ConeManifold {
        let g = ConformalMetric::sphere_cap(Domain::rect(-1.0, -1.0, 1.0, 1.0));
        let t = triangulate_metric(&g, &Domain::rect(-0.85, -0.85, 0.85, 0.85), n, DEFAULT_MIN_ANGLE)
            .unwrap();
        flatten(&t).unwrap()
    }

    #[test]
    fn flat_cone_accepts_hexagonal() {
        let g = ConformalMetric::flat(Domain::rect(-2.0, -2.0, 2.0, 2.0));
        let t = triangulate_metric(&g, &Domain::unit_square(), 4, DEFAULT_MIN_ANGLE).unwrap();
        let c = flatten(&t).unwrap();
        let body = implant_cone_body(&c, Archetype::NFoldDiscrete { n: 3 }, &Tolerances::default())
            .unwrap();
        let report = body.validate(&Tolerances::default()).unwrap();
        assert!(report.pass());
        assert!(report.max_group_distance < 1e-10);
    }

    #[test]
    fn sphere_cap_dichotomy_at_n8() {
        let c = sphere_cone(8);
        let tol = Tolerances::default();
        assert!(c.max_abs_deficit() < 0.2);
        match implant_cone_body(&c, Archetype::NFoldDiscrete { n: 3 }, &tol) {
            Err(Error::IncompatibleDisclination { distance }) => assert!(distance > 0.1, "{distance}"),
            other => panic!("expected rejection, got {other:?}"),
        }
        let body = implant_cone_body(&c, Archetype::IsotropicNeoHookean, &tol).unwrap();
        let report = body.validate(&tol).unwrap();
        assert!(report.closed_pass && report.compatible_pass);
    }

    /// A small loop around an interior vertex of the implant body carries
    /// the vertex deficit as disclination content.
    #[test]
    fn vertex_loop_content_is_the_deficit() {
        let c = sphere_cone(8);
        let body = implant_cone_body(&c, Archetype::IsotropicDistance, &Tolerances::default()).unwrap();
        let v = c.interior_vertices().nth(10).unwrap();
        let loop_c = Curve::circle(c.positions[v], 0.05, 24, 0.3).unwrap();
        let content = disclination_content(&body, &loop_c).unwrap();
        let angle = rotation_angle(&content.conjugated);
        assert!((angle - c.deficits[v].unwrap()).abs() < 1e-10, "{angle}");
        // Charts agree with the developing map up to rotation.
        let (_, frame) = body.frame_at(interior_point(&c, 0)).unwrap();
        let l = c.developing_map(0);
        let m = frame.matrix();
        assert!((m.transpose() * m - l.transpose() * l).norm() < 1e-12);
    }
}
