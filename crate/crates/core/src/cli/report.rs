//! Report documents written to `report.json`. Angles are in radians and
//! matrices row-major.

use serde::{Deserialize, Serialize};

use crate::body::ValidationReport;
use crate::geometry::RowMajor;
use crate::homogenize::{ConvergenceReport, DeficitReport, EnergyConvergence};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "cmd", rename_all = "kebab-case")]
pub enum Report {
    Holonomy(HolonomyReport),
    Burgers(BurgersReport),
    Symmetry(SymmetryReport),
    Minimize(MinimizeReport),
    Homogenize(HomogenizeReport),
    Validate(ValidateReport),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdeHolonomy {
    /// `P(p) Π P(p)⁻¹` with `Π` from the transport ODE on the induced metric.
    pub matrix: RowMajor,
    pub angle: f64,
    /// Frobenius distance to the chart-formula result.
    pub chart_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolonomyReport {
    pub body: String,
    pub archetype: String,
    pub base_point: [f64; 2],
    pub base_chart: usize,
    /// Holonomy in chart coordinates at the base point.
    pub holonomy: RowMajor,
    /// Holonomy conjugated into lattice directions.
    pub matrix: RowMajor,
    pub angle: f64,
    pub identity_distance: f64,
    pub nearest_element: RowMajor,
    pub distance: f64,
    pub pass: bool,
    pub ode: Option<OdeHolonomy>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BurgersReport {
    pub body: String,
    pub base_point: [f64; 2],
    /// Burgers vector in chart coordinates at the base point.
    pub vector: [f64; 2],
    /// The same vector in lattice directions.
    pub lattice: [f64; 2],
    pub circuit_dependent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetryReport {
    pub archetype: String,
    /// `continuous-so2` or `discrete-cyclic`.
    pub kind: String,
    pub order: Option<usize>,
    pub angles: Vec<f64>,
    pub resolution: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinimizeReport {
    pub body: String,
    pub archetype: String,
    pub resolution: usize,
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub positions: Vec<[f64; 2]>,
    pub initial_energy: f64,
    pub energy: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomogenizeReport {
    pub metric: String,
    pub archetype: String,
    pub n: Vec<usize>,
    pub half_width: f64,
    pub loop_radius: f64,
    /// Largest group distance of a vertex deficit, per resolution.
    pub max_deficit_group_distance: Vec<f64>,
    pub deficits: Vec<DeficitReport>,
    pub transport: ConvergenceReport,
    pub metric_gap: ConvergenceReport,
    pub energy: EnergyConvergence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateReport {
    pub body: String,
    pub archetype: String,
    pub closed: Verdict,
    pub compatible: Verdict,
    pub max_group_distance: f64,
    pub details: ValidationReport,
}

/// Run metadata, kept out of the data files so they stay byte-identical
/// across runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub program: String,
    pub version: String,
    pub cmd: String,
    pub seed: u64,
    pub tolerances: crate::Tolerances,
    pub elapsed_seconds: f64,
    pub exit_code: i32,
}
