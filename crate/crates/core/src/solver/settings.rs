use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linsys::{DEFAULT_EPS_MIN, DEFAULT_LAMBDA};
use crate::scaling::{DEFAULT_EPS_EQUIL, DEFAULT_MAX_PASSES};

/// Solver parameters.
///
/// Deserializes from a flat JSON object whose keys are the field names;
/// missing keys keep their defaults and unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    /// Relaxation parameter, in (0, 2).
    pub alpha: f64,
    /// Proximal weight on x in the linear subproblem.
    pub sigma: f64,
    /// Initial scalar penalty ρ̄.
    pub rho_bar_init: f64,
    pub eps_abs: f64,
    pub eps_rel: f64,
    pub eps_pinf: f64,
    pub eps_dinf: f64,
    pub max_admm_iter: usize,
    /// Termination and infeasibility checks run every this many iterations.
    pub check_interval: usize,
    /// ρ̄ is adapted every this many iterations.
    pub rho_update_interval: usize,
    /// λ of the adaptive PCG tolerance, in (0, 1).
    pub lambda_pcg: f64,
    /// Floor of the adaptive PCG tolerance.
    pub eps_pcg_min: f64,
    /// PCG iteration cap; `None` uses [`crate::linsys::default_max_iter`].
    pub pcg_max_iter: Option<usize>,
    pub scaling_enabled: bool,
    pub eps_equil: f64,
    pub equil_max_passes: usize,
    /// Free-form note carried into reports (e.g. the precision a run used).
    pub precision_note: Option<String>,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            alpha: 1.6,
            sigma: 1e-6,
            rho_bar_init: 0.1,
            eps_abs: 1e-3,
            eps_rel: 1e-3,
            eps_pinf: 1e-4,
            eps_dinf: 1e-4,
            max_admm_iter: 50_000,
            check_interval: 5,
            rho_update_interval: 10,
            lambda_pcg: DEFAULT_LAMBDA,
            eps_pcg_min: DEFAULT_EPS_MIN,
            pcg_max_iter: None,
            scaling_enabled: true,
            eps_equil: DEFAULT_EPS_EQUIL,
            equil_max_passes: DEFAULT_MAX_PASSES,
            precision_note: None,
        }
    }
}

impl Settings {
    pub fn validate(&self) -> Result<()> {
        fn bad(msg: String) -> Result<()> {
            Err(Error::InvalidSettings(msg))
        }
        let positive = [
            ("sigma", self.sigma),
            ("rho_bar_init", self.rho_bar_init),
            ("eps_pinf", self.eps_pinf),
            ("eps_dinf", self.eps_dinf),
            ("eps_pcg_min", self.eps_pcg_min),
            ("eps_equil", self.eps_equil),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive and finite, got {v}"));
            }
        }
        for (name, v) in [("eps_abs", self.eps_abs), ("eps_rel", self.eps_rel)] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(format!("{name} must be non-negative, got {v}"));
            }
        }
        if !(self.alpha > 0.0 && self.alpha < 2.0) {
            return bad(format!("alpha must lie in (0, 2), got {}", self.alpha));
        }
        if !(self.lambda_pcg > 0.0 && self.lambda_pcg < 1.0) {
            return bad(format!("lambda_pcg must lie in (0, 1), got {}", self.lambda_pcg));
        }
        let counts = [
            ("max_admm_iter", self.max_admm_iter),
            ("check_interval", self.check_interval),
            ("rho_update_interval", self.rho_update_interval),
            ("equil_max_passes", self.equil_max_passes),
        ];
        for (name, v) in counts {
            if v == 0 {
                return bad(format!("{name} must be at least 1"));
            }
        }
        if self.pcg_max_iter == Some(0) {
            return bad("pcg_max_iter must be at least 1".into());
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Settings = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let s = Settings::default();
        assert_eq!((s.alpha, s.sigma), (1.6, 1e-6));
        assert_eq!((s.check_interval, s.rho_update_interval), (5, 10));
        assert_eq!((s.lambda_pcg, s.eps_pcg_min), (0.15, 1e-7));
        assert!(s.validate().is_ok());
    }

    #[test]
    fn partial_json_keeps_defaults() {
        let s = Settings::from_json(r#"{"eps_abs": 1e-5, "scaling_enabled": false}"#).unwrap();
        assert_eq!(s.eps_abs, 1e-5);
        assert!(!s.scaling_enabled);
        assert_eq!(s.alpha, 1.6);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(Settings::from_json(r#"{"rho": 1.0}"#).is_err());
        assert!(Settings::from_json(r#"{"alpha": 2.0}"#).is_err());
        assert!(Settings::from_json(r#"{"check_interval": 0}"#).is_err());
        assert!(Settings::from_json(r#"{"lambda_pcg": 1.5}"#).is_err());
    }
}
