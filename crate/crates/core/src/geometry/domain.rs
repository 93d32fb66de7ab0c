use std::f64::consts::TAU;

use super::{angle_in_branch, cross, Point};

/// An open region of the chart plane.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    /// Open axis-aligned rectangle.
    Rect { min: Point, max: Point },
    /// Full open annulus `r ∈ (r0, r1)` around `center`; `r0 = 0` punctures the center.
    Annulus { center: Point, r0: f64, r1: f64 },
    /// Open annular sector `r ∈ (r0, r1)`, `φ ∈ (phi0, phi1)` with `phi1 - phi0 ≤ 2π`.
    AnnulusSector {
        center: Point,
        r0: f64,
        r1: f64,
        phi0: f64,
        phi1: f64,
    },
    /// Open star of a mesh vertex, possibly cut along one spoke.
    Star(StarDomain),
}

/// The union of a fan of triangles `(center, a_k, b_k)` around a vertex,
/// minus the center, the outer boundary and the excluded spokes.
#[derive(Debug, Clone, PartialEq)]
pub struct StarDomain {
    pub center: Point,
    /// Counter-clockwise fan, `fan[k] = (a_k, b_k)` with `b_k == a_{k+1}`.
    pub fan: Vec<(Point, Point)>,
    /// Outer endpoints of spokes that are not part of the domain (cuts and
    /// boundary spokes of an open fan).
    pub excluded_spokes: Vec<Point>,
}

const EDGE_EPS: f64 = 1e-12;

impl StarDomain {
    fn scale(&self) -> f64 {
        self.fan
            .iter()
            .map(|(a, _)| (a - self.center).norm())
            .fold(0.0, f64::max)
    }

    fn is_excluded(&self, outer: Point) -> bool {
        let tol = 1e-12 * (1.0 + self.scale());
        self.excluded_spokes
            .iter()
            .any(|s| (s - outer).norm() <= tol)
    }

    /// Index of the fan triangle containing `p` (closed on interior spokes).
    pub fn locate(&self, p: Point) -> Option<usize> {
        let v = self.center;
        let scale = self.scale();
        if (p - v).norm() <= EDGE_EPS * (1.0 + scale) {
            return None;
        }
        for (k, &(a, b)) in self.fan.iter().enumerate() {
            let area2 = cross(a - v, b - v);
            let la = cross(p - v, b - v) / area2;
            let lb = cross(a - v, p - v) / area2;
            let lv = 1.0 - la - lb;
            if lv > EDGE_EPS && la >= -EDGE_EPS && lb >= -EDGE_EPS {
                if la.abs() <= EDGE_EPS && self.is_excluded(b) {
                    return None;
                }
                if lb.abs() <= EDGE_EPS && self.is_excluded(a) {
                    return None;
                }
                return Some(k);
            }
        }
        None
    }

    fn segment_inside(&self, a: Point, b: Point) -> bool {
        const SAMPLES: usize = 16;
        for i in 0..=SAMPLES {
            let t = i as f64 / SAMPLES as f64;
            if self.locate(a + (b - a) * t).is_none() {
                return false;
            }
        }
        if distance_to_segment(self.center, a, b) <= EDGE_EPS * (1.0 + self.scale()) {
            return false;
        }
        !self
            .excluded_spokes
            .iter()
            .any(|&s| segments_touch(a, b, self.center, s))
    }
}

fn distance_to_segment(p: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let len2 = d.norm_squared();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(&d) / len2).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

fn segments_touch(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = cross(b - a, c - a);
    let d2 = cross(b - a, d - a);
    let d3 = cross(d - c, a - c);
    let d4 = cross(d - c, b - c);
    let scale = 1e-14 * ((b - a).norm() + (d - c).norm()).powi(2).max(1e-300);
    if d1 * d2 < -scale && d3 * d4 < -scale {
        return true;
    }
    distance_to_segment(c, a, b) <= 1e-12
        || distance_to_segment(d, a, b) <= 1e-12
        || distance_to_segment(a, c, d) <= 1e-12
        || distance_to_segment(b, c, d) <= 1e-12
}

impl Domain {
    pub fn unit_square() -> Self {
        Domain::Rect {
            min: Point::new(0.0, 0.0),
            max: Point::new(1.0, 1.0),
        }
    }

    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Domain::Rect {
            min: Point::new(x0, y0),
            max: Point::new(x1, y1),
        }
    }

    pub fn annulus(r0: f64, r1: f64) -> Self {
        Domain::Annulus {
            center: Point::zeros(),
            r0,
            r1,
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            Domain::Rect { min, max } => p.x > min.x && p.x < max.x && p.y > min.y && p.y < max.y,
            Domain::Annulus { center, r0, r1 } => {
                let r = (p - center).norm();
                r > *r0 && r < *r1
            }
            Domain::AnnulusSector {
                center,
                r0,
                r1,
                phi0,
                phi1,
            } => {
                let r = (p - center).norm();
                if !(r > *r0 && r < *r1) {
                    return false;
                }
                let phi = angle_in_branch(p, *center, *phi0);
                phi > *phi0 && phi < *phi1
            }
            Domain::Star(s) => s.locate(p).is_some(),
        }
    }

    /// Whether the closed straight segment `[a, b]` lies in the domain.
    pub fn segment_inside(&self, a: Point, b: Point) -> bool {
        match self {
            Domain::Rect { .. } => self.contains(a) && self.contains(b),
            Domain::Annulus { center, r0, r1 } => {
                (a - center).norm() < *r1
                    && (b - center).norm() < *r1
                    && distance_to_segment(*center, a, b) > *r0
            }
            Domain::AnnulusSector {
                center,
                r0,
                r1,
                phi0,
                phi1,
            } => {
                if (a - center).norm() >= *r1
                    || (b - center).norm() >= *r1
                    || distance_to_segment(*center, a, b) <= *r0
                    || distance_to_segment(*center, a, b) == 0.0
                {
                    return false;
                }
                // The polar angle is monotone along a segment avoiding the center.
                let da = a - center;
                let db = b - center;
                let sweep = cross(da, db).atan2(da.dot(&db));
                let start = angle_in_branch(a, *center, *phi0);
                let end = start + sweep;
                start > *phi0 && start < *phi1 && end > *phi0 && end < *phi1
            }
            Domain::Star(s) => s.segment_inside(a, b),
        }
    }

    /// Whether the `h`-stencil `p ± h e_i` lies in the domain.
    pub fn stencil_inside(&self, p: Point, h: f64) -> bool {
        let ex = Point::new(h, 0.0);
        let ey = Point::new(0.0, h);
        self.segment_inside(p - ex, p + ex) && self.segment_inside(p - ey, p + ey)
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bbox(&self) -> (Point, Point) {
        match self {
            Domain::Rect { min, max } => (*min, *max),
            Domain::Annulus { center, r1, .. } | Domain::AnnulusSector { center, r1, .. } => {
                let r = Point::new(*r1, *r1);
                (center - r, center + r)
            }
            Domain::Star(s) => {
                let mut min = s.center;
                let mut max = s.center;
                for &(a, b) in &s.fan {
                    for q in [a, b] {
                        min = min.inf(&q);
                        max = max.sup(&q);
                    }
                }
                (min, max)
            }
        }
    }

    /// Sample points inside the domain: cell centers of a `k × k` grid over
    /// the bounding box, or a few interior points per triangle for stars.
    pub fn sample_points(&self, k: usize) -> Vec<Point> {
        match self {
            Domain::Star(s) => {
                let weights = [
                    (1.0 / 3.0, 1.0 / 3.0),
                    (0.2, 0.6),
                    (0.6, 0.2),
                    (0.2, 0.2),
                ];
                s.fan
                    .iter()
                    .flat_map(|&(a, b)| {
                        weights
                            .iter()
                            .map(move |&(wa, wb)| s.center * (1.0 - wa - wb) + a * wa + b * wb)
                    })
                    .filter(|p| self.contains(*p))
                    .collect()
            }
            _ => {
                let (min, max) = self.bbox();
                grid_cell_centers(min, max, k)
                    .into_iter()
                    .filter(|p| self.contains(*p))
                    .collect()
            }
        }
    }

    /// Area of the domain (exact for all variants).
    pub fn area(&self) -> f64 {
        match self {
            Domain::Rect { min, max } => (max.x - min.x) * (max.y - min.y),
            Domain::Annulus { r0, r1, .. } => 0.5 * TAU * (r1 * r1 - r0 * r0),
            Domain::AnnulusSector {
                r0, r1, phi0, phi1, ..
            } => 0.5 * (phi1 - phi0) * (r1 * r1 - r0 * r0),
            Domain::Star(s) => s
                .fan
                .iter()
                .map(|&(a, b)| 0.5 * cross(a - s.center, b - s.center))
                .sum(),
        }
    }
}

pub(crate) fn grid_cell_centers(min: Point, max: Point, k: usize) -> Vec<Point> {
    let k = k.max(1);
    let dx = (max.x - min.x) / k as f64;
    let dy = (max.y - min.y) / k as f64;
    let mut out = Vec::with_capacity(k * k);
    for j in 0..k {
        for i in 0..k {
            out.push(Point::new(
                min.x + (i as f64 + 0.5) * dx,
                min.y + (j as f64 + 0.5) * dy,
            ));
        }
    }
    out
}
