//! JSON run configuration. Unknown keys anywhere are rejected.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub physical: PhysicalConfig,
    pub pump: PumpConfig,
    #[serde(default)]
    pub dispersion: DispersionConfig,
    pub phase_match: PhaseMatchConfig,
    /// Half-width `M` of the signal window; defaults from the pump.
    #[serde(default)]
    pub window: Option<usize>,
    pub drive: DriveConfig,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalConfig {
    pub gamma_s: f64,
    pub gamma_p: f64,
    pub n0: f64,
    pub chi: f64,
    pub l: f64,
    pub omega0: f64,
    #[serde(rename = "Omega")]
    pub omega_fsr: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PumpConfig {
    Gaussian { delta_p: f64 },
    /// Two-column text file `index amplitude`.
    Custom { path: PathBuf },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DispersionConfig {
    Coefficients {
        beta1: f64,
        beta2p: f64,
        beta2s: f64,
    },
    Material {
        kp_prime: f64,
        ks_prime: f64,
        kp_double_prime: f64,
        ks_double_prime: f64,
    },
}

impl Default for DispersionConfig {
    fn default() -> Self {
        Self::Coefficients {
            beta1: 0.0,
            beta2p: 0.0,
            beta2s: 0.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhaseMatchConfig {
    Sinc {},
    Exponential { eta: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DriveConfig {
    /// Normalized pumping rate `r`.
    R(f64),
    /// Average pump power per unit area (W/m²).
    Power(f64),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Largest analysis frequency (rad/s). Defaults to `5 gamma_s`.
    #[serde(default)]
    pub omega_max: Option<f64>,
    /// Same in Hz; converted with `2π` here and nowhere else.
    #[serde(default)]
    pub omega_max_hz: Option<f64>,
    #[serde(default = "default_points")]
    pub points: usize,
    /// Number of supermodes to export.
    #[serde(default = "default_supermodes")]
    pub supermodes: usize,
    #[serde(default)]
    pub lo: Option<LoConfig>,
    #[serde(default)]
    pub dump_coupling: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            omega_max: None,
            omega_max_hz: None,
            points: default_points(),
            supermodes: default_supermodes(),
            lo: None,
            dump_coupling: false,
        }
    }
}

fn default_points() -> usize {
    101
}

fn default_supermodes() -> usize {
    3
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoConfig {
    #[serde(default)]
    pub supermode: Option<usize>,
    #[serde(default)]
    pub file: Option<PathBuf>,
    /// Homodyne phase (rad): 0 selects the `+` quadrature, π/2 the `−`.
    pub theta: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// Check the closed-form optimized case; requires a width-matched
    /// Gaussian / exponential configuration.
    #[serde(default)]
    pub analytic_case: bool,
    /// Analysis frequencies (rad/s) for the covariance oracle; defaults to
    /// `0, gamma_s, 3 gamma_s`.
    #[serde(default)]
    pub omegas: Option<Vec<f64>>,
    /// Integration horizon (s) for decay fits; defaults to `10 / gamma_s`.
    #[serde(default)]
    pub decay_horizon: Option<f64>,
    /// Monte Carlo trajectories; 0 disables the stochastic check.
    #[serde(default = "default_trajectories")]
    pub trajectories: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            analytic_case: false,
            omegas: None,
            decay_horizon: None,
            trajectories: default_trajectories(),
            seed: 0,
        }
    }
}

fn default_trajectories() -> usize {
    200
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    /// Reads the config and resolves relative file paths against its directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut config = Self::from_json(&text)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        if let PumpConfig::Custom { path } = &mut config.pump {
            *path = resolve(base, path);
        }
        if let Some(LoConfig { file: Some(file), .. }) = &mut config.analysis.lo {
            *file = resolve(base, file);
        }
        Ok(config)
    }

    pub fn omega_max(&self) -> Result<f64, CliError> {
        match (self.analysis.omega_max, self.analysis.omega_max_hz) {
            (Some(_), Some(_)) => Err(CliError::Config(
                "give at most one of analysis.omega_max and analysis.omega_max_hz".into(),
            )),
            (Some(w), None) => Ok(w),
            (None, Some(f)) => Ok(2.0 * std::f64::consts::PI * f),
            (None, None) => Ok(5.0 * self.physical.gamma_s),
        }
    }
}

fn resolve(base: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}
