use super::{christoffel_auto, Curve, FrameMatrix, Mat2, MetricField, Point, TransportMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    /// Integration step in chart length units; `None` means curve length / 2000.
    pub step: Option<f64>,
    /// Finite-difference step for Christoffel symbols when no analytic derivatives exist.
    pub fd_step: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            step: None,
            fd_step: 1e-5,
        }
    }
}

/// Parallel transport of the coordinate frame along a piecewise-linear curve,
/// solving `v̇ᵏ + Γᵏᵢⱼ γ̇ⁱ vʲ = 0` with fixed-step classical RK4.
pub fn transport_ode<M: MetricField + ?Sized>(
    g: &M,
    curve: &Curve,
    opts: &OdeOptions,
) -> Result<TransportMatrix> {
    let step = opts.step.unwrap_or(curve.length() / 2000.0);
    if !(step > 0.0) {
        return Err(Error::InvalidArgument("integration step must be positive".into()));
    }
    let mut v = Mat2::identity();
    for (a, b) in curve.segments() {
        if !g.domain().segment_inside(a, b) {
            return Err(Error::domain(a, "curve segment leaves the metric domain"));
        }
        let vel = b - a;
        let n = ((vel.norm() / step).ceil() as usize).max(1);
        let ds = 1.0 / n as f64;
        let rhs = |s: f64, v: &Mat2| -> Result<Mat2> {
            let gamma = christoffel_auto(g, a + vel * s, opts.fd_step)?;
            let mut m = Mat2::zeros();
            for k in 0..2 {
                for j in 0..2 {
                    m[(k, j)] = gamma[k][0][j] * vel.x + gamma[k][1][j] * vel.y;
                }
            }
            Ok(-(m * v))
        };
        for i in 0..n {
            let s = i as f64 * ds;
            let k1 = rhs(s, &v)?;
            let k2 = rhs(s + 0.5 * ds, &(v + k1 * (0.5 * ds)))?;
            let k3 = rhs(s + 0.5 * ds, &(v + k2 * (0.5 * ds)))?;
            let k4 = rhs(s + ds, &(v + k3 * ds))?;
            v += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (ds / 6.0);
        }
    }
    Ok(v)
}

/// Transport `P(q)⁻¹ P(p)` inside a single chart with frames `P(p)`, `P(q)`.
pub fn transport_chart(frame_p: &Mat2, frame_q: &Mat2) -> Result<TransportMatrix> {
    let fp = FrameMatrix::new(*frame_p)?;
    let fq = FrameMatrix::new(*frame_q)?;
    Ok(fq.inverse() * fp.matrix())
}

/// Transport along a concatenation of curves: the last part acts first on the left.
pub fn transport_concat(parts: &[TransportMatrix]) -> Result<TransportMatrix> {
    if parts.is_empty() {
        return Err(Error::InvalidArgument("empty transport list".into()));
    }
    Ok(parts.iter().fold(Mat2::identity(), |acc, p| p * acc))
}

/// `‖Πᵀ G(q) Π − G(p)‖_F`.
pub fn isometry_defect(pi: &TransportMatrix, g_start: &Mat2, g_end: &Mat2) -> f64 {
    (pi.transpose() * g_end * pi - g_start).norm()
}

/// Convenience wrapper for transporting between two points along a straight segment.
pub fn transport_segment<M: MetricField + ?Sized>(
    g: &M,
    p: Point,
    q: Point,
    opts: &OdeOptions,
) -> Result<TransportMatrix> {
    transport_ode(g, &Curve::polyline(vec![p, q])?, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rotation, rotation_angle, ConformalMetric, Domain};
    use crate::quadrature::integrate_triangle;

    #[test]
    fn flat_transport_is_identity() {
        let g = ConformalMetric::flat(Domain::rect(-2.0, -2.0, 2.0, 2.0));
        let c = Curve::circle(Point::new(0.1, 0.2), 1.0, 12, 0.3).unwrap();
        let pi = transport_ode(&g, &c, &OdeOptions::default()).unwrap();
        assert!((pi - Mat2::identity()).norm() < 1e-14);
    }

    #[test]
    fn concat_composes_rotations() {
        let id = transport_concat(&[Mat2::identity(), Mat2::identity()]).unwrap();
        assert_eq!(id, Mat2::identity());
        let r = transport_concat(&[rotation(0.2), rotation(0.5)]).unwrap();
        assert!((r - rotation(0.7)).norm() < 1e-15);
        let a = Mat2::new(1.0, 2.0, 0.0, 1.0);
        let b = Mat2::new(2.0, 0.0, 1.0, 1.0);
        assert_eq!(transport_concat(&[a, b]).unwrap(), b * a);
        assert!(transport_concat(&[]).is_err());
    }

    #[test]
    fn chart_formula() {
        let p = Mat2::new(1.0, 0.3, 0.0, 2.0);
        assert!((transport_chart(&p, &p).unwrap() - Mat2::identity()).norm() < 1e-15);
        assert!(transport_chart(&p, &Mat2::zeros()).is_err());
    }

    /// Holonomy of a small loop on the unit sphere equals the enclosed
    /// curvature integral; the oracle integrates K dA over the polygon with a
    /// triangle rule.
    #[test]
    fn sphere_holonomy_matches_enclosed_curvature() {
        let g = ConformalMetric::sphere_cap(Domain::rect(-1.0, -1.0, 1.0, 1.0));
        let center = Point::new(0.2, -0.1);
        let c = Curve::circle(center, 0.15, 24, 0.0).unwrap();
        let oracle: f64 = c
            .segments()
            .map(|(a, b)| {
                integrate_triangle(center, a, b, |p| {
                    let s = 1.0 + p.norm_squared();
                    4.0 / (s * s)
                })
            })
            .sum();
        let pi = transport_ode(&g, &c, &OdeOptions::default()).unwrap();
        // Conformal metric: the transport at the base point is a pure rotation.
        let angle = rotation_angle(&pi);
        assert!((angle - oracle).abs() < 1e-9, "{angle} vs {oracle}");
        let gp = g.metric(c.start()).unwrap();
        assert!(isometry_defect(&pi, &gp, &gp) < 1e-6);
    }

    #[test]
    fn step_halving_is_fourth_order() {
        let g = ConformalMetric::sphere_cap(Domain::rect(-1.0, -1.0, 1.0, 1.0));
        let c = Curve::polyline(vec![Point::new(-0.5, -0.3), Point::new(0.6, 0.4)]).unwrap();
        let run = |h: f64| {
            transport_ode(
                &g,
                &c,
                &OdeOptions {
                    step: Some(h),
                    ..Default::default()
                },
            )
            .unwrap()
        };
        let (a, b, c2) = (run(0.2), run(0.1), run(0.05));
        let e1 = (a - b).norm();
        let e2 = (b - c2).norm();
        assert!(e1 < 0.2f64.powi(4));
        assert!(e1 / e2 > 10.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn reversed_curve_gives_inverse() {
        let g = ConformalMetric::sphere_cap(Domain::rect(-1.0, -1.0, 1.0, 1.0));
        let c = Curve::polyline(vec![
            Point::new(-0.5, -0.3),
            Point::new(0.6, 0.4),
            Point::new(0.1, 0.7),
        ])
        .unwrap();
        let fwd = transport_ode(&g, &c, &OdeOptions::default()).unwrap();
        let back = transport_ode(&g, &c.reversed(), &OdeOptions::default()).unwrap();
        assert!((back * fwd - Mat2::identity()).norm() < 1e-6);
        let gp = g.metric(c.start()).unwrap();
        let gq = g.metric(c.end()).unwrap();
        assert!(isometry_defect(&fwd, &gp, &gq) < 1e-6);
        assert!(fwd.determinant() > 0.0);
    }

    #[test]
    fn curve_leaving_domain_is_rejected() {
        let g = ConformalMetric::flat(Domain::unit_square());
        let c = Curve::polyline(vec![Point::new(0.5, 0.5), Point::new(1.5, 0.5)]).unwrap();
        assert!(matches!(
            transport_ode(&g, &c, &OdeOptions::default()),
            Err(Error::Domain { .. })
        ));
    }
}
