//! JSON configuration shared by `verify`, `sweep-theorem2` and `approximate`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::DEFAULT_CLAMP;
use crate::families::Family;

fn default_order() -> f64 {
    3.0
}
fn default_grid() -> usize {
    4096
}
fn default_lambda() -> f64 {
    DEFAULT_CLAMP
}
fn default_trials() -> usize {
    32
}
fn default_arc_counts() -> Vec<usize> {
    vec![8, 16, 32, 64]
}
fn default_cap() -> f64 {
    100.0
}
fn default_sweep_factor() -> f64 {
    5.0
}
fn default_eps_factor() -> f64 {
    0.1
}
fn default_schedule() -> Vec<usize> {
    (1..=8).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub alpha: f64,
    pub rho: f64,
    #[serde(rename = "N")]
    pub power: u32,
    #[serde(rename = "M", default = "default_order")]
    pub order: f64,
    #[serde(default = "default_grid")]
    pub grid_n: usize,
    #[serde(rename = "lambda", default = "default_lambda")]
    pub clamp: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_arc_counts")]
    pub arc_counts: Vec<usize>,
    /// Cap on empirical lemma constants.
    #[serde(default = "default_cap")]
    pub constant_cap: f64,
    /// Sweep verdict: max norm ≤ factor · `‖f^ρ‖_{A_α}`.
    #[serde(default = "default_sweep_factor")]
    pub sweep_cap_factor: f64,
    #[serde(default)]
    pub family: Family,
    /// Index of `γ` among the gaps of `E_f`.
    #[serde(default)]
    pub gamma: usize,
    /// Indices of the gaps forming `Γ`; defaults to every other gap, or `{γ}`
    /// when there is only one.
    #[serde(rename = "Gamma", default)]
    pub big_gamma: Option<Vec<usize>>,
    /// Pipeline target `ε = eps_factor · ‖f‖_{A_α}`.
    #[serde(default = "default_eps_factor")]
    pub eps_factor: f64,
    #[serde(default = "default_schedule")]
    pub schedule: Vec<usize>,
}

impl SweepConfig {
    pub fn new(alpha: f64, rho: f64, power: u32) -> Self {
        Self {
            alpha,
            rho,
            power,
            order: default_order(),
            grid_n: default_grid(),
            clamp: default_lambda(),
            seed: 0,
            trials: default_trials(),
            arc_counts: default_arc_counts(),
            constant_cap: default_cap(),
            sweep_cap_factor: default_sweep_factor(),
            family: Family::default(),
            gamma: 0,
            big_gamma: None,
            eps_factor: default_eps_factor(),
            schedule: default_schedule(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 0.5) {
            return Err(Error::InvalidParameter(format!("alpha = {} outside (0, 1/2]", self.alpha)));
        }
        if !(self.rho > 1.0 && self.rho <= 2.0) {
            return Err(Error::InvalidParameter(format!("rho = {} outside (1, 2]", self.rho)));
        }
        if self.power == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        if !(self.order > 0.0) {
            return Err(Error::InvalidParameter("M must be positive".into()));
        }
        if !(self.clamp > 0.0 && self.clamp.is_finite()) {
            return Err(Error::InvalidParameter("lambda must be positive".into()));
        }
        if !(self.eps_factor > 0.0) {
            return Err(Error::InvalidParameter("eps_factor must be positive".into()));
        }
        if !(self.constant_cap > 0.0 && self.sweep_cap_factor > 0.0) {
            return Err(Error::InvalidParameter("caps must be positive".into()));
        }
        crate::grid::check_grid_size(self.grid_n)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}
