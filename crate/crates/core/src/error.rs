use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid frame: determinant {det:e} (frames must be orientation preserving and invertible)")]
    InvalidFrame { det: f64 },

    #[error("point ({x}, {y}) is outside the domain: {context}")]
    Domain { x: f64, y: f64, context: String },

    #[error("energy is not finite at the evaluated point")]
    InfeasiblePoint,

    #[error("passing rotation angles are not closed under composition ({count} angles); the tolerance is probably too loose")]
    InconsistentGroup { count: usize },

    #[error("chart domains do not overlap")]
    DisjointDomains,

    #[error("incompatible disclination: transition is at group distance {distance:.6e} from the symmetry group")]
    IncompatibleDisclination { distance: f64 },

    #[error("segment from ({0}, {1}) to ({2}, {3}) is not contained in any chart")]
    ChartCover(f64, f64, f64, f64),

    #[error("loop carries disclination content at distance {distance:.6e} from the identity; the Burgers vector is circuit dependent")]
    DisclinationPresent { distance: f64 },

    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("descent stalled after {iterations} iterations (energy {energy:e}, gradient norm {gradient_norm:e})")]
    StalledDescent {
        iterations: usize,
        energy: f64,
        gradient_norm: f64,
        iterate: Box<Vec<crate::Point>>,
    },

    #[error("triangle {triangle} has angle {angle:.4} rad outside [{min:.4}, pi - {min:.4}]")]
    Anisotropy { triangle: usize, angle: f64, min: f64 },

    #[error("metric degeneracy: triangle {triangle} violates the strict triangle inequality")]
    MetricDegeneracy { triangle: usize },

    #[error("invalid triangle strip: {0}")]
    Strip(String),

    #[error("loop routing failed: {0}")]
    Routing(String),

    #[error("obstruction: {0}")]
    Obstruction(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn domain(p: crate::Point, context: impl Into<String>) -> Self {
        Error::Domain {
            x: p.x,
            y: p.y,
            context: context.into(),
        }
    }

    /// True for errors that express a mathematical incompatibility between
    /// the defect content and the symmetry of the archetype.
    pub fn is_obstruction(&self) -> bool {
        matches!(
            self,
            Error::IncompatibleDisclination { .. } | Error::Obstruction(_)
        )
    }
}
