use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use crate::geometry::{cross, inverse, rotation, transport_concat, Curve, Mat2, Point, TransportMatrix};
use crate::{Error, Result};

use super::triangulate::{corner_angles, MetricTriangulation};

/// A piecewise-flat surface: chart triangles each carrying the Euclidean
/// metric with prescribed edge lengths.
#[derive(Debug, Clone)]
pub struct ConeManifold {
    /// Chart positions of the vertices, used to locate points and loops.
    pub positions: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    /// `lengths[t][k]`: edge of `t` opposite corner `k`.
    pub lengths: Vec<[f64; 3]>,
    pub angles: Vec<[f64; 3]>,
    /// `neighbors[t][k]`: triangle across the edge opposite corner `k`.
    pub neighbors: Vec<[Option<usize>; 3]>,
    pub boundary: Vec<bool>,
    pub total_angle: Vec<f64>,
    /// `2π − total angle` at interior vertices.
    pub deficits: Vec<Option<f64>>,
    /// Linear part of the isometric placement of each triangle: chart
    /// vectors to vectors of the flat triangle.
    developing: Vec<Mat2>,
}

impl ConeManifold {
    /// Flat triangles with the given lengths on a chart triangulation.
    pub fn new(positions: Vec<Point>, triangles: Vec<[usize; 3]>, lengths: Vec<[f64; 3]>) -> Result<Self> {
        if lengths.len() != triangles.len() {
            return Err(Error::InvalidArgument("one length triple per triangle is required".into()));
        }
        for (t, l) in lengths.iter().enumerate() {
            let ok = (0..3).all(|k| l[k] > 0.0 && l[k] < l[(k + 1) % 3] + l[(k + 2) % 3]);
            if !ok {
                return Err(Error::MetricDegeneracy { triangle: t });
            }
            let tri = triangles[t];
            if tri.iter().any(|&i| i >= positions.len()) {
                return Err(Error::Mesh(format!("triangle {t} references a missing vertex")));
            }
            let [a, b, c] = [positions[tri[0]], positions[tri[1]], positions[tri[2]]];
            if !(cross(b - a, c - a) > 0.0) {
                return Err(Error::Mesh(format!("triangle {t} is not positively oriented")));
            }
        }

        let mut edge_owner: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        let mut neighbors = vec![[None; 3]; triangles.len()];
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let (i, j) = (tri[(k + 1) % 3], tri[(k + 2) % 3]);
                // Each directed edge appears once in an oriented surface.
                if let Some(&(s, m)) = edge_owner.get(&(j, i)) {
                    neighbors[t][k] = Some(s);
                    neighbors[s][m] = Some(t);
                } else if edge_owner.insert((i, j), (t, k)).is_some() {
                    return Err(Error::Mesh(format!("edge ({i}, {j}) is used twice with the same orientation")));
                }
            }
        }
        let mut boundary = vec![false; positions.len()];
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                if neighbors[t][k].is_none() {
                    boundary[tri[(k + 1) % 3]] = true;
                    boundary[tri[(k + 2) % 3]] = true;
                }
            }
        }

        let angles: Vec<[f64; 3]> = lengths.iter().map(corner_angles).collect();
        let mut total_angle = vec![0.0; positions.len()];
        for (tri, a) in triangles.iter().zip(&angles) {
            for k in 0..3 {
                total_angle[tri[k]] += a[k];
            }
        }
        let mut used = vec![false; positions.len()];
        for tri in &triangles {
            for &i in tri {
                used[i] = true;
            }
        }
        let deficits = (0..positions.len())
            .map(|i| (used[i] && !boundary[i]).then(|| TAU - total_angle[i]))
            .collect();

        let developing = triangles
            .iter()
            .zip(&lengths)
            .zip(&angles)
            .map(|((tri, l), a)| {
                let x0 = positions[tri[0]];
                let chart = Mat2::from_columns(&[positions[tri[1]] - x0, positions[tri[2]] - x0]);
                let flat = Mat2::from_columns(&[
                    Point::new(l[2], 0.0),
                    Point::new(l[1] * a[0].cos(), l[1] * a[0].sin()),
                ]);
                flat * inverse(&chart)
            })
            .collect();

        Ok(Self {
            positions,
            triangles,
            lengths,
            angles,
            neighbors,
            boundary,
            total_angle,
            deficits,
            developing,
        })
    }

    /// Chart-to-flat linear map of triangle `t`.
    pub fn developing_map(&self, t: usize) -> Mat2 {
        self.developing[t]
    }

    pub fn max_edge_length(&self) -> f64 {
        self.lengths
            .iter()
            .flat_map(|l| l.iter().copied())
            .fold(0.0, f64::max)
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.positions.len()).filter(|&i| self.deficits[i].is_some())
    }

    pub fn max_abs_deficit(&self) -> f64 {
        self.deficits
            .iter()
            .flatten()
            .map(|d| d.abs())
            .fold(0.0, f64::max)
    }

    /// Triangles around `v` in counter-clockwise order, each rotated so that
    /// `v` comes first. Open fans start at a boundary edge.
    pub fn fan(&self, v: usize) -> Vec<(usize, [usize; 3])> {
        let incident: Vec<(usize, [usize; 3])> = self
            .triangles
            .iter()
            .enumerate()
            .filter_map(|(t, tri)| {
                let k = tri.iter().position(|&i| i == v)?;
                Some((t, [tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]]))
            })
            .collect();
        if incident.is_empty() {
            return incident;
        }
        let start = incident
            .iter()
            .position(|(_, r)| !incident.iter().any(|(_, s)| s[2] == r[1]))
            .unwrap_or(0);
        let mut order = vec![incident[start]];
        while order.len() < incident.len() {
            let last = order.last().unwrap().1[2];
            match incident.iter().find(|(_, r)| r[1] == last) {
                Some(next) if next.0 != order[0].0 => order.push(*next),
                _ => break,
            }
        }
        order
    }

    /// Local corner index of the edge shared by `t` and `s` (opposite corner in `t`).
    pub(crate) fn shared_edge(&self, t: usize, s: usize) -> Option<usize> {
        (0..3).find(|&k| self.neighbors[t][k] == Some(s))
    }

    /// Transport from `t` into the adjacent `s`, in chart coordinates.
    pub fn crossing(&self, t: usize, s: usize) -> Result<TransportMatrix> {
        let k = self
            .shared_edge(t, s)
            .ok_or_else(|| Error::Strip(format!("triangles {t} and {s} are not adjacent")))?;
        let tri = self.triangles[t];
        let e = self.positions[tri[(k + 2) % 3]] - self.positions[tri[(k + 1) % 3]];
        let (lt, ls) = (self.developing[t], self.developing[s]);
        let r = rotation_between(lt * e, ls * e);
        Ok(inverse(&ls) * r * lt)
    }

    /// Barycentric coordinates of `p` in triangle `t`.
    pub(crate) fn barycentric(&self, t: usize, p: Point) -> [f64; 3] {
        let [a, b, c] = self.triangles[t].map(|i| self.positions[i]);
        let area = cross(b - a, c - a);
        let lb = cross(p - a, c - a) / area;
        let lc = cross(b - a, p - a) / area;
        [1.0 - lb - lc, lb, lc]
    }
}

/// Rotation taking the direction of `from` to the direction of `to`.
pub(crate) fn rotation_between(from: Point, to: Point) -> Mat2 {
    rotation(cross(from, to).atan2(from.dot(&to)))
}

/// Flat triangles with the edge lengths of a metric triangulation.
pub fn flatten(t: &MetricTriangulation) -> Result<ConeManifold> {
    ConeManifold::new(t.mesh.vertices.clone(), t.mesh.triangles.clone(), t.lengths.clone())
}

/// Transport along a strip of consecutively adjacent triangles, obtained by
/// laying the triangles out in the plane one after another.
pub fn cone_transport(c: &ConeManifold, strip: &[usize]) -> Result<TransportMatrix> {
    if strip.is_empty() {
        return Err(Error::Strip("empty strip".into()));
    }
    if let Some(&t) = strip.iter().find(|&&t| t >= c.triangles.len()) {
        return Err(Error::Strip(format!("no triangle {t}")));
    }
    if strip.len() == 1 {
        return Ok(Mat2::identity());
    }
    let parts = strip
        .windows(2)
        .map(|w| c.crossing(w[0], w[1]))
        .collect::<Result<Vec<_>>>()?;
    transport_concat(&parts)
}

/// A loop routed through the triangulation.
#[derive(Debug, Clone)]
pub struct RoutedLoop {
    pub strip: Vec<usize>,
    /// The curve actually routed (shrunk slightly if the original touched a vertex).
    pub curve: Curve,
    pub perturbed: bool,
}

/// Walks triangle adjacencies along `curve` to obtain its triangle strip.
///
/// A curve passing within rounding distance of a vertex is shrunk towards its
/// centroid by `1e-6·h` (then larger multiples) and routed again.
pub fn route_loop(c: &ConeManifold, curve: &Curve) -> Result<RoutedLoop> {
    let h = c
        .triangles
        .iter()
        .flat_map(|tri| {
            (0..3).map(move |k| (c.positions[tri[k]] - c.positions[tri[(k + 1) % 3]]).norm())
        })
        .fold(0.0, f64::max);
    let mut last_err = None;
    for attempt in 0..6 {
        let candidate = if attempt == 0 {
            curve.clone()
        } else {
            curve.shrunk(1e-6 * h * f64::powi(10.0, attempt - 1))
        };
        match walk(c, &candidate) {
            Ok(strip) => {
                return Ok(RoutedLoop {
                    strip,
                    curve: candidate,
                    perturbed: attempt > 0,
                })
            }
            Err(WalkError::Degenerate(msg)) => last_err = Some(msg),
            Err(WalkError::Fatal(e)) => return Err(e),
        }
    }
    Err(Error::Routing(format!(
        "loop passes through a vertex after perturbation: {}",
        last_err.unwrap_or_default()
    )))
}

enum WalkError {
    Degenerate(String),
    Fatal(Error),
}

const WALK_EPS: f64 = 1e-10;

fn locate_strict(c: &ConeManifold, p: Point) -> std::result::Result<usize, WalkError> {
    for t in 0..c.triangles.len() {
        let l = c.barycentric(t, p);
        if l.iter().all(|&x| x > WALK_EPS) {
            return Ok(t);
        }
        if l.iter().all(|&x| x > -WALK_EPS) {
            return Err(WalkError::Degenerate(format!("point ({}, {}) lies on an edge", p.x, p.y)));
        }
    }
    Err(WalkError::Fatal(Error::Routing(format!(
        "point ({}, {}) is outside the triangulation",
        p.x, p.y
    ))))
}

fn walk(c: &ConeManifold, curve: &Curve) -> std::result::Result<Vec<usize>, WalkError> {
    if !curve.is_closed() {
        return Err(WalkError::Fatal(Error::Routing("loop is not closed".into())));
    }
    for &p in curve.vertices() {
        locate_strict(c, p)?;
    }
    let start = locate_strict(c, curve.start())?;
    let mut strip = vec![start];
    let mut cur = start;
    for (a, b) in curve.segments() {
        let mut t_now = 0.0;
        let limit = 4 * c.triangles.len();
        for _ in 0..limit {
            let lb = c.barycentric(cur, b);
            if lb.iter().all(|&x| x > WALK_EPS) {
                break;
            }
            let la = c.barycentric(cur, a);
            // Exit through the edge whose barycentric coordinate first hits zero.
            let mut best: Option<(f64, usize)> = None;
            for k in 0..3 {
                let slope = lb[k] - la[k];
                if slope >= 0.0 {
                    continue;
                }
                let t = la[k] / -slope;
                if t >= t_now - WALK_EPS && best.is_none_or(|(bt, _)| t < bt) {
                    best = Some((t, k));
                }
            }
            let Some((t, k)) = best else {
                return Err(WalkError::Degenerate("no exit edge found".into()));
            };
            let p = a + (b - a) * t;
            let lp = c.barycentric(cur, p);
            if (0..3).filter(|&j| j != k).any(|j| lp[j] < WALK_EPS) {
                return Err(WalkError::Degenerate(format!(
                    "segment passes through a vertex near ({}, {})",
                    p.x, p.y
                )));
            }
            let Some(next) = c.neighbors[cur][k] else {
                return Err(WalkError::Fatal(Error::Routing(format!(
                    "loop leaves the triangulation near ({}, {})",
                    p.x, p.y
                ))));
            };
            strip.push(next);
            cur = next;
            t_now = t;
        }
    }
    if cur != start {
        return Err(WalkError::Degenerate("walk did not return to the start".into()));
    }
    Ok(strip)
}

/// Sum of the angles `π − θ_v` at boundary vertices.
pub fn boundary_turning(c: &ConeManifold) -> f64 {
    (0..c.positions.len())
        .filter(|&i| c.boundary[i])
        .map(|i| PI - c.total_angle[i])
        .sum()
}
