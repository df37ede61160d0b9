//! Phase mismatch between pump mode `m + q` and signal modes `m`, `q`, and the
//! phase-matching factor that weights each parametric coupling.


use num_traits::Float;

use crate::error::{invalid, Result};

/// Below this |phi| the sinc factor is evaluated from its Taylor series.
const SINC_SERIES_CUTOFF: f64 = 1e-8;

/// Dimensionless dispersion coefficients of the quadratic mismatch expansion.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DispersionParams {
    /// Group-velocity mismatch.
    pub beta1: f64,
    /// Pump group-velocity dispersion.
    pub beta2p: f64,
    /// Signal group-velocity dispersion.
    pub beta2s: f64,
}

impl DispersionParams {
    pub fn new(beta1: f64, beta2p: f64, beta2s: f64) -> Result<Self> {
        if !(beta1.is_finite() && beta2p.is_finite() && beta2s.is_finite()) {
            return Err(invalid("beta", "dispersion coefficients must be finite"));
        }
        Ok(Self {
            beta1,
            beta2p,
            beta2s,
        })
    }

    /// Equal group velocities and signal GVD twice the pump GVD.
    pub fn matched(beta2p: f64) -> Result<Self> {
        Self::new(0.0, beta2p, 2.0 * beta2p)
    }

    /// Coefficients from material wave-vector derivatives (s/m and s²/m), the
    /// comb spacing `omega_fsr` (rad/s) and the crystal length (m).
    pub fn from_material(
        kp_prime: f64,
        ks_prime: f64,
        kp_double_prime: f64,
        ks_double_prime: f64,
        omega_fsr: f64,
        length: f64,
    ) -> Result<Self> {
        if !(omega_fsr.is_finite() && omega_fsr > 0.0) {
            return Err(invalid("Omega", "must be finite and strictly positive"));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(invalid("l", "must be finite and strictly positive"));
        }
        Self::new(
            0.5 * omega_fsr * (kp_prime - ks_prime) * length,
            0.25 * omega_fsr * omega_fsr * kp_double_prime * length,
            0.25 * omega_fsr * omega_fsr * ks_double_prime * length,
        )
    }
}

/// `phi(m, q) = beta1 (m+q) + beta2p (m+q)² - beta2s (m² + q²)`.
pub fn mismatch_angle(m: i64, q: i64, d: &DispersionParams) -> f64 {
    let sum = (m + q) as f64;
    let (m, q) = (m as f64, q as f64);
    d.beta1 * sum + d.beta2p * sum * sum - d.beta2s * (m * m + q * q)
}

/// Shape of the phase-matching curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseMatchModel {
    /// `sin(phi) / phi`.
    Sinc,
    /// `exp(-eta |phi| / 2)`.
    ExponentialAbs { eta: f64 },
}

impl PhaseMatchModel {
    pub fn exponential(eta: f64) -> Result<Self> {
        let model = Self::ExponentialAbs { eta };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Sinc => Ok(()),
            Self::ExponentialAbs { eta } if eta.is_finite() && eta > 0.0 => Ok(()),
            Self::ExponentialAbs { .. } => {
                Err(invalid("eta", "must be finite and strictly positive"))
            }
        }
    }
}

pub fn pm_factor(phi: f64, model: PhaseMatchModel) -> f64 {
    match model {
        PhaseMatchModel::Sinc => sinc(phi),
        PhaseMatchModel::ExponentialAbs { eta } => (-0.5 * eta * phi.abs()).exp(),
    }
}

fn sinc(phi: f64) -> f64 {
    if phi.abs() < SINC_SERIES_CUTOFF {
        1.0 - phi * phi / 6.0
    } else {
        phi.sin() / phi
    }
}
