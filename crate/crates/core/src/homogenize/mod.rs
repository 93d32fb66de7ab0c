//! Piecewise-flat approximation of smooth metrics: triangulation with metric
//! edge lengths, cone manifolds, implant bodies, and the convergence and
//! obstruction experiments.

mod cone;
mod experiments;
mod implant;
mod triangulate;

pub use cone::{boundary_turning, cone_transport, flatten, route_loop, ConeManifold, RoutedLoop};
pub use triangulate::{
    corner_angles, segment_length, triangulate_metric, MetricTriangulation, DEFAULT_MIN_ANGLE,
};
pub use implant::{implant_cone_body, max_deficit_group_distance};
pub use experiments::{
    cone_manifold, deficit_vs_curvature, dual_cell_curvature, edge_geodesic_gap, energy_convergence,
    metric_convergence, observed_order, smooth_energy, sphere_cap_setup, torsion_body,
    transport_convergence, ConvergenceRecord, ConvergenceReport, DeficitReport, EnergyConvergence,
    TestMap, SPHERE_CAP_HALF_WIDTH,
};
