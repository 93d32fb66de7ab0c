use super::Point;
use crate::{Error, Result};

/// Piecewise-linear parametrized path in chart coordinates.
///
/// Parameters are normalized arc length in chart coordinates. Segment chart
/// labels are optional; unlabeled segments are assigned a chart on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    vertices: Vec<Point>,
    params: Vec<f64>,
    charts: Vec<Option<usize>>,
}

impl Curve {
    pub fn polyline(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidArgument("a curve needs at least two vertices".into()));
        }
        if vertices.iter().any(|p| !(p.x.is_finite() && p.y.is_finite())) {
            return Err(Error::InvalidArgument("curve vertices must be finite".into()));
        }
        let mut params = Vec::with_capacity(vertices.len());
        let mut s = 0.0;
        params.push(0.0);
        for w in vertices.windows(2) {
            let len = (w[1] - w[0]).norm();
            if len == 0.0 {
                return Err(Error::InvalidArgument("repeated consecutive curve vertex".into()));
            }
            s += len;
            params.push(s);
        }
        for t in params.iter_mut() {
            *t /= s;
        }
        let charts = vec![None; vertices.len() - 1];
        Ok(Self {
            vertices,
            params,
            charts,
        })
    }

    /// Closed polygon through `points`; the first point is appended at the end.
    pub fn closed_polygon(mut points: Vec<Point>) -> Result<Self> {
        if let Some(&first) = points.first() {
            points.push(first);
        }
        Self::polyline(points)
    }

    /// Regular polygon inscribed in a circle, traversed counter-clockwise
    /// starting at angle `start_angle`.
    pub fn circle(center: Point, radius: f64, segments: usize, start_angle: f64) -> Result<Self> {
        if segments < 3 || !(radius > 0.0) {
            return Err(Error::InvalidArgument(
                "circle needs positive radius and at least three segments".into(),
            ));
        }
        let pts = (0..segments)
            .map(|k| {
                let t = start_angle + std::f64::consts::TAU * k as f64 / segments as f64;
                center + Point::new(t.cos(), t.sin()) * radius
            })
            .collect();
        Self::closed_polygon(pts)
    }

    pub fn with_chart_labels(mut self, labels: Vec<Option<usize>>) -> Result<Self> {
        if labels.len() != self.charts.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} chart labels, got {}",
                self.charts.len(),
                labels.len()
            )));
        }
        self.charts = labels;
        Ok(self)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn chart_labels(&self) -> &[Option<usize>] {
        &self.charts
    }

    pub fn start(&self) -> Point {
        self.vertices[0]
    }

    pub fn end(&self) -> Point {
        *self.vertices.last().unwrap()
    }

    pub fn is_closed(&self) -> bool {
        (self.start() - self.end()).norm() <= 1e-12 * (1.0 + self.start().norm())
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| (b - a).norm()).sum()
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        let mut charts = self.charts.clone();
        charts.reverse();
        let params = self.params.iter().rev().map(|t| 1.0 - t).collect();
        Self {
            vertices,
            params,
            charts,
        }
    }

    /// Splits every segment into `k` equal pieces.
    pub fn refined(&self, k: usize) -> Self {
        let k = k.max(1);
        let mut vertices = vec![self.vertices[0]];
        let mut charts = Vec::new();
        for ((a, b), label) in self.segments().zip(&self.charts) {
            for i in 1..=k {
                vertices.push(a + (b - a) * (i as f64 / k as f64));
                charts.push(*label);
            }
        }
        let mut c = Self::polyline(vertices).expect("refinement of a valid curve");
        c.charts = charts;
        c
    }

    /// `other` traversed after `self`; requires matching endpoints.
    pub fn then(&self, other: &Curve) -> Result<Self> {
        if (self.end() - other.start()).norm() > 1e-12 * (1.0 + self.end().norm()) {
            return Err(Error::InvalidArgument("curves do not connect".into()));
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        let mut charts = self.charts.clone();
        charts.extend_from_slice(&other.charts);
        let mut c = Self::polyline(vertices)?;
        c.charts = charts;
        Ok(c)
    }

    /// Rigidly shrinks the curve towards its vertex centroid by `delta` (chart units).
    pub fn shrunk(&self, delta: f64) -> Self {
        let n = if self.is_closed() {
            self.vertices.len() - 1
        } else {
            self.vertices.len()
        };
        let centroid = self.vertices[..n].iter().sum::<Point>() / n as f64;
        let vertices = self
            .vertices
            .iter()
            .map(|p| {
                let d = p - centroid;
                let r = d.norm();
                if r > delta {
                    centroid + d * ((r - delta) / r)
                } else {
                    *p
                }
            })
            .collect();
        let mut c = Self::polyline(vertices).expect("shrinking keeps a valid curve");
        c.charts = self.charts.clone();
        c
    }
}
