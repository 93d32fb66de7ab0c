//! Tolerances shared by all modules, collected in one record so they can be
//! overridden from the command line by name.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// |det P - 1| bound for frames declared volume preserving.
    pub vol: f64,
    /// Isometry defect allowed for ODE transports.
    pub isometry_ode: f64,
    /// Isometry defect allowed for chart-formula transports.
    pub isometry_chart: f64,
    /// Finite-difference step for Christoffel symbols (chart units).
    pub christoffel_step: f64,
    /// Symmetry-detection threshold on `symmetry_distance`.
    pub symmetry: f64,
    /// Frobenius distance below which a matrix counts as a group element.
    pub group: f64,
    /// Frobenius distance from the identity for "zero disclination content".
    pub identity: f64,
    /// Closedness residual threshold for reference charts.
    pub closed: f64,
    /// Finite-difference step for closedness checks.
    pub closed_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            vol: 1e-8,
            isometry_ode: 1e-6,
            isometry_chart: 1e-12,
            christoffel_step: 1e-5,
            symmetry: 1e-8,
            group: 1e-8,
            identity: 1e-6,
            closed: 1e-6,
            closed_step: 1e-4,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 9] = [
        "vol",
        "isometry_ode",
        "isometry_chart",
        "christoffel_step",
        "symmetry",
        "group",
        "identity",
        "closed",
        "closed_step",
    ];

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "vol" => &mut self.vol,
            "isometry_ode" => &mut self.isometry_ode,
            "isometry_chart" => &mut self.isometry_chart,
            "christoffel_step" => &mut self.christoffel_step,
            "symmetry" => &mut self.symmetry,
            "group" => &mut self.group,
            "identity" => &mut self.identity,
            "closed" => &mut self.closed,
            "closed_step" => &mut self.closed_step,
            _ => return None,
        })
    }

    /// Overrides one tolerance by name. Values must be finite and strictly positive.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerance {name} must be strictly positive, got {value}"
            )));
        }
        let slot = self
            .slot(name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown tolerance {name:?}")))?;
        *slot = value;
        Ok(())
    }

    /// Parses a `name=value` override.
    pub fn apply_override(&mut self, spec: &str) -> Result<()> {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("expected name=value, got {spec:?}")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("not a number: {value:?}")))?;
        self.set(name.trim(), value)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        let mut copy = *self;
        copy.slot(name).map(|v| *v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn override_by_name() {
        let mut t = Tolerances::default();
        t.apply_override("group=1e-6").unwrap();
        assert_eq!(t.group, 1e-6);
        assert!(t.apply_override("group=0").is_err());
        assert!(t.apply_override("group=-1").is_err());
        assert!(t.apply_override("nonsense=1").is_err());
        assert!(t.apply_override("group").is_err());
        for name in Tolerances::NAMES {
            assert!(t.get(name).unwrap() > 0.0);
        }
    }
}
