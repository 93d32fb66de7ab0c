use std::f64::consts::TAU;

use crate::body::Body;
use crate::geometry::{cross, Domain, Point};
use crate::{Error, Result};

/// Smallest admissible triangle area.
const MIN_AREA: f64 = 1e-12;

/// Triangle mesh in chart coordinates with positively oriented triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    pub vertices: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary: Vec<bool>,
}

impl TriMesh {
    /// Validates indices, orientation and non-degeneracy.
    pub fn new(vertices: Vec<Point>, triangles: Vec<[usize; 3]>, boundary: Vec<bool>) -> Result<Self> {
        if boundary.len() != vertices.len() {
            return Err(Error::Mesh("boundary markers do not match vertex count".into()));
        }
        let mesh = Self {
            vertices,
            triangles,
            boundary,
        };
        for (t, tri) in mesh.triangles.iter().enumerate() {
            if tri.iter().any(|&i| i >= mesh.vertices.len()) {
                return Err(Error::Mesh(format!("triangle {t} references a missing vertex")));
            }
            let area = mesh.signed_area(t);
            if !(area > MIN_AREA) {
                return Err(Error::Mesh(format!(
                    "triangle {t} is degenerate or negatively oriented (area {area:e})"
                )));
            }
        }
        Ok(mesh)
    }

    pub fn corners(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        0.5 * cross(b - a, c - a)
    }

    pub fn barycenter(&self, t: usize) -> Point {
        let [a, b, c] = self.corners(t);
        (a + b + c) / 3.0
    }

    pub fn diameter(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        (b - a).norm().max((c - b).norm()).max((a - c).norm())
    }

    pub fn max_diameter(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| self.diameter(t))
            .fold(0.0, f64::max)
    }

    pub fn boundary_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(|&i| self.boundary[i])
    }

    /// Lowest-index chart of `body` containing each triangle's barycenter.
    pub fn assign_charts(&self, body: &Body) -> Result<Vec<usize>> {
        (0..self.triangles.len())
            .map(|t| {
                body.chart_index_at(self.barycenter(t)).ok_or_else(|| {
                    Error::Mesh(format!("triangle {t} is not inside any chart of the body"))
                })
            })
            .collect()
    }
}

/// Structured triangulation of a rectangle, annulus or annular sector.
///
/// Rectangles get `resolution²` quads, annuli `resolution` radial by
/// `resolution` angular cells; each cell is split into two triangles.
pub fn build_mesh(domain: &Domain, resolution: usize) -> Result<TriMesh> {
    if resolution < 2 {
        return Err(Error::Mesh(format!("resolution must be at least 2, got {resolution}")));
    }
    let n = resolution;
    match domain {
        Domain::Rect { min, max } => {
            let grid = |i: usize, j: usize| {
                Point::new(
                    min.x + (max.x - min.x) * i as f64 / n as f64,
                    min.y + (max.y - min.y) * j as f64 / n as f64,
                )
            };
            structured(n, n, false, grid, |i, j| i == 0 || j == 0 || i == n || j == n)
        }
        Domain::Annulus { center, r0, r1 } => {
            if !(*r0 > 0.0) {
                return Err(Error::Mesh("annulus meshes need a positive inner radius".into()));
            }
            let grid = |i: usize, j: usize| {
                let r = r0 + (r1 - r0) * i as f64 / n as f64;
                let t = TAU * j as f64 / n as f64;
                center + Point::new(t.cos(), t.sin()) * r
            };
            structured(n, n, true, grid, |i, _| i == 0 || i == n)
        }
        Domain::AnnulusSector {
            center,
            r0,
            r1,
            phi0,
            phi1,
        } => {
            if !(*r0 > 0.0) {
                return Err(Error::Mesh("sector meshes need a positive inner radius".into()));
            }
            let grid = |i: usize, j: usize| {
                let r = r0 + (r1 - r0) * i as f64 / n as f64;
                let t = phi0 + (phi1 - phi0) * j as f64 / n as f64;
                center + Point::new(t.cos(), t.sin()) * r
            };
            structured(n, n, false, grid, |i, j| i == 0 || j == 0 || i == n || j == n)
        }
        Domain::Star(_) => Err(Error::Mesh("star domains are meshed by the homogenization module".into())),
    }
}

/// `nx × ny` cells on a grid indexed `(i, j)`; `periodic` wraps `j`.
fn structured(
    nx: usize,
    ny: usize,
    periodic: bool,
    grid: impl Fn(usize, usize) -> Point,
    on_boundary: impl Fn(usize, usize) -> bool,
) -> Result<TriMesh> {
    let rows = if periodic { ny } else { ny + 1 };
    let index = |i: usize, j: usize| (j % rows) * (nx + 1) + i;
    let mut vertices = Vec::with_capacity((nx + 1) * rows);
    let mut boundary = Vec::with_capacity((nx + 1) * rows);
    for j in 0..rows {
        for i in 0..=nx {
            vertices.push(grid(i, j));
            boundary.push(on_boundary(i, j));
        }
    }
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let a = index(i, j);
            let b = index(i + 1, j);
            let c = index(i + 1, j + 1);
            let d = index(i, j + 1);
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    TriMesh::new(vertices, triangles, boundary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_counts() {
        let m = build_mesh(&Domain::unit_square(), 2).unwrap();
        assert_eq!(m.triangles.len(), 8);
        assert_eq!(m.vertices.len(), 9);
        assert_eq!(m.boundary.iter().filter(|b| **b).count(), 8);
        let total: f64 = (0..8).map(|t| m.signed_area(t)).sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert!(build_mesh(&Domain::unit_square(), 1).is_err());
    }

    #[test]
    fn annulus_counts_and_diameters() {
        for n in [3, 4, 8, 16] {
            let m = build_mesh(&Domain::annulus(1.0, 2.0), n).unwrap();
            assert_eq!(m.triangles.len(), 2 * n * n);
            assert!((0..m.triangles.len()).all(|t| m.signed_area(t) > 1e-12));
            assert!(m.max_diameter() <= 2.0 * TAU / n as f64 + 1.0 / n as f64);
        }
        // Two angular cells collapse onto a diameter.
        assert!(matches!(build_mesh(&Domain::annulus(1.0, 2.0), 2), Err(Error::Mesh(_))));
    }

    #[test]
    fn rect_diameter_scales_with_resolution() {
        for n in [4, 8, 32] {
            let m = build_mesh(&Domain::rect(0.0, 0.0, 2.0, 1.0), n).unwrap();
            let h = (4.0f64 + 1.0).sqrt() / n as f64;
            assert!(m.max_diameter() <= h + 1e-12);
        }
    }

    #[test]
    fn reversed_triangle_is_rejected() {
        let v = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
        assert!(TriMesh::new(v.clone(), vec![[0, 2, 1]], vec![true; 3]).is_err());
        assert!(TriMesh::new(v, vec![[0, 1, 2]], vec![true; 3]).is_ok());
    }
}
