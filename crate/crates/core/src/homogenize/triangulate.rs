use std::collections::HashMap;

use crate::elasticity::{build_mesh, TriMesh};
use crate::geometry::{Domain, MetricField, Point};
use crate::quadrature::GAUSS5;
use crate::{Error, Result};

/// Default lower bound on triangle angles, in radians.
pub const DEFAULT_MIN_ANGLE: f64 = 0.2;

/// A chart triangulation with metric edge lengths.
///
/// `lengths[t][k]` is the length of the edge of triangle `t` opposite its
/// corner `k`.
#[derive(Debug, Clone)]
pub struct MetricTriangulation {
    pub mesh: TriMesh,
    pub lengths: Vec<[f64; 3]>,
}

impl MetricTriangulation {
    pub fn max_edge_length(&self) -> f64 {
        self.lengths
            .iter()
            .flat_map(|l| l.iter().copied())
            .fold(0.0, f64::max)
    }
}

/// Metric length of the straight chart segment `[a, b]` by 5-node Gauss–Legendre.
pub fn segment_length<M: MetricField + ?Sized>(g: &M, a: Point, b: Point) -> Result<f64> {
    let d = b - a;
    let mut total = 0.0;
    for &(t, w) in &GAUSS5 {
        let m = g.metric(a + d * t)?;
        total += w * d.dot(&(m * d)).sqrt();
    }
    Ok(total)
}

/// Corner angles from opposite edge lengths by the law of cosines.
pub fn corner_angles(l: &[f64; 3]) -> [f64; 3] {
    let angle = |k: usize| {
        let (a, b, c) = (l[(k + 1) % 3], l[(k + 2) % 3], l[k]);
        ((a * a + b * b - c * c) / (2.0 * a * b)).clamp(-1.0, 1.0).acos()
    };
    [angle(0), angle(1), angle(2)]
}

/// Structured triangulation of `domain` with edge lengths measured in `g`.
///
/// Every triangle angle computed from the lengths must lie in
/// `[min_angle, π − min_angle]`.
pub fn triangulate_metric<M: MetricField + ?Sized>(
    g: &M,
    domain: &Domain,
    n: usize,
    min_angle: f64,
) -> Result<MetricTriangulation> {
    if !matches!(domain, Domain::Rect { .. }) {
        return Err(Error::InvalidArgument(
            "metric triangulation needs a rectangular domain".into(),
        ));
    }
    let mesh = build_mesh(domain, n)?;
    let mut cache: HashMap<(usize, usize), f64> = HashMap::new();
    let mut lengths = Vec::with_capacity(mesh.triangles.len());
    for tri in &mesh.triangles {
        let mut l = [0.0; 3];
        for k in 0..3 {
            let (i, j) = (tri[(k + 1) % 3], tri[(k + 2) % 3]);
            let key = (i.min(j), i.max(j));
            l[k] = match cache.get(&key) {
                Some(&v) => v,
                None => {
                    let (a, b) = (mesh.vertices[key.0], mesh.vertices[key.1]);
                    if !g.domain().segment_inside(a, b) {
                        return Err(Error::domain(a, "triangulation edge leaves the metric domain"));
                    }
                    let v = segment_length(g, a, b)?;
                    cache.insert(key, v);
                    v
                }
            };
        }
        lengths.push(l);
    }
    for (t, l) in lengths.iter().enumerate() {
        for &angle in &corner_angles(l) {
            if !(angle >= min_angle && angle <= std::f64::consts::PI - min_angle) {
                return Err(Error::Anisotropy {
                    triangle: t,
                    angle,
                    min: min_angle,
                });
            }
        }
    }
    Ok(MetricTriangulation { mesh, lengths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ConformalMetric, FnMetric, Mat2};

    #[test]
    fn euclidean_lengths_are_chart_lengths() {
        let g = ConformalMetric::flat(Domain::rect(-1.0, -1.0, 2.0, 2.0));
        for n in [2, 5, 8] {
            let t = triangulate_metric(&g, &Domain::unit_square(), n, DEFAULT_MIN_ANGLE).unwrap();
            for (tri, l) in t.mesh.triangles.iter().zip(&t.lengths) {
                for k in 0..3 {
                    let d = t.mesh.vertices[tri[(k + 1) % 3]] - t.mesh.vertices[tri[(k + 2) % 3]];
                    assert!((l[k] - d.norm()).abs() < 1e-14);
                }
            }
        }
    }

    /// Along a ray from the origin the sphere-cap length is `2 atan(r)`.
    #[test]
    fn sphere_cap_radial_length_matches_arctangent() {
        let g = ConformalMetric::sphere_cap(Domain::rect(-2.0, -2.0, 2.0, 2.0));
        for len in [0.05, 0.2, 0.4] {
            let dir = Point::new(0.6, 0.8);
            let l = segment_length(&g, Point::zeros(), dir * len).unwrap();
            let exact = 2.0 * len.atan();
            assert!((l - exact).abs() < 1e-9 * exact.max(1.0), "{len}: {l} vs {exact}");
            // Through the origin, symmetric about it; the single-panel rule
            // error grows like the tenth power of the segment length.
            let l2 = segment_length(&g, -dir * len, dir * len).unwrap();
            assert!((l2 - 2.0 * exact).abs() < 1e-2 * len.powi(10) + 1e-13, "{len}");
        }
    }

    #[test]
    fn doubling_n_halves_edges() {
        let g = ConformalMetric::sphere_cap(Domain::rect(-1.0, -1.0, 1.0, 1.0));
        let d = Domain::rect(-0.85, -0.85, 0.85, 0.85);
        let mut prev = None;
        for n in [8, 16, 32, 64] {
            let h = triangulate_metric(&g, &d, n, DEFAULT_MIN_ANGLE).unwrap().max_edge_length();
            if let Some(p) = prev {
                let ratio: f64 = p / h;
                assert!((ratio - 2.0).abs() < 0.1, "{ratio}");
                assert!((ratio / 2.0 - 1.0).abs() < 0.05);
            }
            prev = Some(h);
        }
    }

    #[test]
    fn anisotropic_metric_is_rejected() {
        let g = FnMetric::new(Domain::rect(-1.0, -1.0, 2.0, 2.0), |_| Mat2::new(400.0, 0.0, 0.0, 1.0));
        assert!(matches!(
            triangulate_metric(&g, &Domain::unit_square(), 4, DEFAULT_MIN_ANGLE),
            Err(Error::Anisotropy { .. })
        ));
    }

    #[test]
    fn leaving_the_metric_domain_is_an_error() {
        let g = ConformalMetric::flat(Domain::unit_square());
        assert!(triangulate_metric(&g, &Domain::unit_square(), 4, DEFAULT_MIN_ANGLE).is_err());
    }

    #[test]
    fn scaling_metric_scales_lengths() {
        let c = 3.0;
        let base = ConformalMetric::sphere_cap(Domain::rect(-1.0, -1.0, 1.0, 1.0));
        let inner = base.clone();
        let scaled = FnMetric::new(Domain::rect(-1.0, -1.0, 1.0, 1.0), move |p| {
            inner.metric(p).unwrap() * (c * c)
        });
        let d = Domain::rect(-0.5, -0.5, 0.5, 0.5);
        let a = triangulate_metric(&base, &d, 6, DEFAULT_MIN_ANGLE).unwrap();
        let b = triangulate_metric(&scaled, &d, 6, DEFAULT_MIN_ANGLE).unwrap();
        for (la, lb) in a.lengths.iter().zip(&b.lengths) {
            for k in 0..3 {
                assert!((lb[k] - c * la[k]).abs() < 1e-13 * lb[k]);
            }
        }
    }
}
