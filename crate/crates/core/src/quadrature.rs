//! Gauss–Legendre rules on the unit interval and on triangles.

use crate::Point;

/// 5-node Gauss–Legendre rule on [0, 1] as (node, weight) pairs.
pub const GAUSS5: [(f64, f64); 5] = {
    const X1: f64 = 0.538_469_310_105_683_1;
    const X2: f64 = 0.906_179_845_938_664;
    const W0: f64 = 0.568_888_888_888_888_9;
    const W1: f64 = 0.478_628_670_499_366_5;
    const W2: f64 = 0.236_926_885_056_189_1;
    [
        (0.5 * (1.0 - X2), 0.5 * W2),
        (0.5 * (1.0 - X1), 0.5 * W1),
        (0.5, 0.5 * W0),
        (0.5 * (1.0 + X1), 0.5 * W1),
        (0.5 * (1.0 + X2), 0.5 * W2),
    ]
};

/// Composite 5-node Gauss–Legendre integral of `f` over [0, 1] with `panels` panels.
pub fn integrate_unit<F: FnMut(f64) -> f64>(panels: usize, mut f: F) -> f64 {
    let panels = panels.max(1);
    let width = 1.0 / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let t0 = k as f64 * width;
        for &(x, w) in &GAUSS5 {
            total += w * width * f(t0 + x * width);
        }
    }
    total
}

/// Integral of `f` over the triangle (a, b, c) using a collapsed 5×5
/// Gauss–Legendre product rule (exact for polynomials of degree 8).
pub fn integrate_triangle<F: FnMut(Point) -> f64>(a: Point, b: Point, c: Point, mut f: F) -> f64 {
    let e1 = b - a;
    let e2 = c - a;
    let area = 0.5 * (e1.x * e2.y - e1.y * e2.x).abs();
    let mut total = 0.0;
    for &(u, wu) in &GAUSS5 {
        for &(v, wv) in &GAUSS5 {
            // Duffy map from the unit square onto the reference triangle.
            let s = u;
            let t = v * (1.0 - u);
            let jac = 1.0 - u;
            total += wu * wv * jac * f(a + e1 * s + e2 * t);
        }
    }
    2.0 * area * total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_rule_integrates_degree_nine() {
        let exact = 1.0 / 10.0;
        let got = integrate_unit(1, |t| t.powi(9));
        assert!((got - exact).abs() < 1e-15);
        let weights: f64 = GAUSS5.iter().map(|(_, w)| w).sum();
        assert!((weights - 1.0).abs() < 1e-15);
    }

    #[test]
    fn triangle_rule_area_and_moments() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(2.0, 0.0);
        let c = Point::new(0.0, 1.0);
        assert!((integrate_triangle(a, b, c, |_| 1.0) - 1.0).abs() < 1e-14);
        // ∫ x over the triangle = area * centroid_x = 1 * 2/3
        assert!((integrate_triangle(a, b, c, |p| p.x) - 2.0 / 3.0).abs() < 1e-14);
        // ∫ x^2 y^2 over the unit right triangle = 1/180
        let u = integrate_triangle(a, Point::new(1.0, 0.0), c, |p| p.x * p.x * p.y * p.y);
        assert!((u - 1.0 / 180.0).abs() < 1e-15);
    }
}
