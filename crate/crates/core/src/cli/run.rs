use std::fmt::Write as _;

use crate::archetype::{default_samples, detect_group, SymmetryGroup};
use crate::body::{build_disclination_body, build_dislocation_body, build_trivial_body, disclination_charts, Body};
use crate::defects::{burgers_vector_with, verify_content_in_group};
use crate::elasticity::{build_mesh, minimize, BoundaryCondition, Configuration, Discretization};
use crate::geometry::{rotation_angle, transport_ode, ConformalMetric, Curve, Domain, OdeOptions, Point};
use crate::homogenize::{
    cone_manifold, deficit_vs_curvature, energy_convergence, implant_cone_body, max_deficit_group_distance,
    metric_convergence, transport_convergence, ConvergenceRecord, ConvergenceReport,
};
use crate::{Error, Result, Tolerances};

use super::config::{rect_domain, BodySpec, BoundarySpec, Command, LoopSpec, RunConfig};
use super::report::*;

/// Everything a run produces besides the metadata sidecar.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub report: Report,
    /// Convergence table, for commands that produce one.
    pub csv: Option<String>,
    /// Non-zero when the report itself records a failure.
    pub exit_code: i32,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_OBSTRUCTION: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) => EXIT_VALIDATION,
        e if e.is_obstruction() => EXIT_OBSTRUCTION,
        Error::DisclinationPresent { .. } => EXIT_OBSTRUCTION,
        _ => EXIT_NUMERICAL,
    }
}

pub fn build_body(spec: &BodySpec, tol: &Tolerances, validate: bool) -> Result<Body> {
    match *spec {
        BodySpec::Disclination { alpha, r0, r1, archetype } => {
            if validate {
                build_disclination_body(r0, r1, alpha, archetype.archetype(), tol)
            } else {
                let charts = disclination_charts(r0, r1, alpha)?;
                Body::new(charts.to_vec(), archetype.archetype(), Domain::annulus(r0, r1))
            }
        }
        BodySpec::Dislocation { eps, r1, archetype } => {
            let body = build_dislocation_body(eps, r1, archetype.archetype())?;
            if validate {
                body.validated(tol)
            } else {
                Ok(body)
            }
        }
        BodySpec::Trivial { domain, archetype } => build_trivial_body(rect_domain(&domain), archetype.archetype()),
    }
}

/// The loop described by `spec`; `Core` circles the defect core once.
pub fn build_loop(spec: &LoopSpec, body: &BodySpec) -> Result<Curve> {
    match spec {
        LoopSpec::Core => {
            let (center, radius) = match *body {
                BodySpec::Disclination { r0, r1, .. } => (Point::zeros(), 0.5 * (r0 + r1)),
                BodySpec::Dislocation { eps, r1, .. } => (Point::zeros(), 0.5 * (eps + r1)),
                BodySpec::Trivial { domain, .. } => (
                    Point::new(0.5 * (domain[0] + domain[2]), 0.5 * (domain[1] + domain[3])),
                    0.25 * (domain[2] - domain[0]).min(domain[3] - domain[1]),
                ),
            };
            Curve::circle(center, radius, 256, 0.1)
        }
        LoopSpec::Circle {
            center,
            radius,
            segments,
            start_angle,
        } => Curve::circle(*center, *radius, *segments, *start_angle),
        LoopSpec::Points(p) => Curve::closed_polygon(p.clone()),
    }
}

fn pair(p: Point) -> [f64; 2] {
    [p.x, p.y]
}

pub fn execute(config: &RunConfig) -> Result<Artifacts> {
    let tol = &config.tolerances;
    let ok = |report| Artifacts {
        report,
        csv: None,
        exit_code: EXIT_OK,
    };
    match &config.command {
        Command::Holonomy { body, loop_spec, ode } => {
            let b = build_body(body, tol, false)?;
            let curve = build_loop(loop_spec, body)?;
            let (content, m) = verify_content_in_group(&b, &curve, tol)?;
            let ode = if *ode {
                let g = b.induced_metric();
                let pi = transport_ode(&g, &curve, &OdeOptions::default())?;
                let frame = b.charts[content.base_chart].frame_at(content.base_point)?;
                let conj = frame.matrix() * pi * frame.inverse();
                Some(OdeHolonomy {
                    matrix: conj.into(),
                    angle: rotation_angle(&conj),
                    chart_gap: (conj - content.conjugated).norm(),
                })
            } else {
                None
            };
            Ok(ok(Report::Holonomy(HolonomyReport {
                body: body.name().into(),
                archetype: b.archetype.name(),
                base_point: pair(content.base_point),
                base_chart: content.base_chart,
                holonomy: content.matrix.into(),
                matrix: content.conjugated.into(),
                angle: content.angle(),
                identity_distance: content.identity_distance(),
                nearest_element: m.nearest_element,
                distance: m.distance,
                pass: m.pass,
                ode,
            })))
        }
        Command::Burgers {
            body,
            loop_spec,
            allow_disclination,
        } => {
            let b = build_body(body, tol, false)?;
            let curve = build_loop(loop_spec, body)?;
            let bv = burgers_vector_with(&b, &curve, tol, *allow_disclination)?;
            Ok(ok(Report::Burgers(BurgersReport {
                body: body.name().into(),
                base_point: pair(curve.start()),
                vector: pair(bv.vector),
                lattice: pair(bv.lattice),
                circuit_dependent: bv.circuit_dependent,
            })))
        }
        Command::Symmetry { archetype, resolution } => {
            let a = archetype.archetype();
            let group = detect_group(&a, *resolution, tol.symmetry, &default_samples(config.seed))?;
            let (kind, order) = match group {
                SymmetryGroup::ContinuousSo2 => ("continuous-so2", None),
                SymmetryGroup::Cyclic(m) => ("discrete-cyclic", Some(m)),
            };
            Ok(ok(Report::Symmetry(SymmetryReport {
                archetype: a.name(),
                kind: kind.into(),
                order,
                angles: group.angles(),
                resolution: *resolution,
                seed: config.seed,
            })))
        }
        Command::Minimize {
            body,
            resolution,
            boundary,
            options,
        } => {
            let b = build_body(body, tol, true)?;
            let mesh = build_mesh(&b.region, *resolution)?;
            let bc = match boundary {
                BoundarySpec::Free => BoundaryCondition::free(),
                BoundarySpec::Identity => BoundaryCondition::boundary_map(&mesh, |x| x),
                BoundarySpec::Affine(a) => BoundaryCondition::boundary_affine(&mesh, a),
            };
            let initial_energy = Discretization::new(&b, &mesh)?.energy(&Configuration::identity(&mesh));
            let r = minimize(&b, &mesh, &bc, None, options)?;
            Ok(Artifacts {
                exit_code: if r.converged { EXIT_OK } else { EXIT_NUMERICAL },
                report: Report::Minimize(MinimizeReport {
                    body: body.name().into(),
                    archetype: b.archetype.name(),
                    resolution: *resolution,
                    vertices: mesh.vertices.iter().copied().map(pair).collect(),
                    triangles: mesh.triangles.clone(),
                    positions: r.configuration.positions.iter().copied().map(pair).collect(),
                    initial_energy,
                    energy: r.energy,
                    iterations: r.iterations,
                    gradient_norm: r.gradient_norm,
                    converged: r.converged,
                }),
                csv: None,
            })
        }
        Command::Homogenize {
            metric,
            n,
            archetype,
            half_width,
            loop_radius,
            test_map,
        } => {
            let g = ConformalMetric::new(metric.factor(), Domain::rect(-1.0, -1.0, 1.0, 1.0));
            let w = *half_width;
            let domain = Domain::rect(-w, -w, w, w);
            let arch = archetype.archetype();
            let group = arch.symmetry_group()?;
            let mut distances = Vec::new();
            let mut deficits = Vec::new();
            for &k in n {
                let c = cone_manifold(&g, &domain, k)?;
                distances.push(max_deficit_group_distance(&c, &group));
                implant_cone_body(&c, arch.clone(), tol)?;
                deficits.push(deficit_vs_curvature(&g, &domain, k)?);
            }
            let loop_curve = Curve::circle(Point::zeros(), *loop_radius, 256, 0.1)?;
            let transport = transport_convergence(&g, &domain, &loop_curve, n)?;
            let metric_gap = metric_convergence(&g, &domain, n)?;
            let energy = energy_convergence(&g, &domain, &arch, *test_map, n, tol)?;
            let derived = |name: &str, f: &dyn Fn(&crate::homogenize::DeficitReport) -> f64| {
                ConvergenceReport::new(
                    name,
                    deficits
                        .iter()
                        .map(|d| ConvergenceRecord {
                            n: d.n,
                            error: f(d),
                            value: d.interior_deficit_sum,
                            reference: d.interior_curvature_sum,
                        })
                        .collect(),
                )
            };
            let tables = [
                transport.clone(),
                metric_gap.clone(),
                energy.implant.clone(),
                energy.torsion.clone(),
                derived("deficit-relative", &|d| d.max_relative_error),
                derived("gauss-bonnet", &|d| d.gauss_bonnet_residual),
            ];
            Ok(Artifacts {
                report: Report::Homogenize(HomogenizeReport {
                    metric: metric.name(),
                    archetype: arch.name(),
                    n: n.clone(),
                    half_width: w,
                    loop_radius: *loop_radius,
                    max_deficit_group_distance: distances,
                    deficits,
                    transport,
                    metric_gap,
                    energy,
                }),
                csv: Some(convergence_csv(&tables)),
                exit_code: EXIT_OK,
            })
        }
        Command::Validate { body } => {
            let b = build_body(body, tol, false)?;
            let v = b.validate(tol)?;
            Ok(Artifacts {
                exit_code: if v.pass() { EXIT_OK } else { EXIT_OBSTRUCTION },
                report: Report::Validate(ValidateReport {
                    body: body.name().into(),
                    archetype: b.archetype.name(),
                    closed: v.closed_pass.into(),
                    compatible: v.compatible_pass.into(),
                    max_group_distance: v.max_group_distance,
                    details: v,
                }),
                csv: None,
            })
        }
    }
}

/// `n,quantity,error,observed_order` rows, one per record.
pub fn convergence_csv(reports: &[ConvergenceReport]) -> String {
    let mut out = String::from("n,quantity,error,observed_order\n");
    for r in reports {
        let order = r.observed_order.map(|o| o.to_string()).unwrap_or_default();
        for rec in &r.records {
            writeln!(out, "{},{},{},{}", rec.n, r.quantity, rec.error, order).unwrap();
        }
    }
    out
}
