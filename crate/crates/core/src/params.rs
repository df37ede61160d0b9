//! Physical constants of the crystal and cavity, and the conversion from pump
//! power to the dimensionless drive parameters `sigma` and `r`.
//!
//! Angular frequencies are in rad/s and powers are per unit area (W/m²), so the
//! effective transverse area never enters.


use num_traits::Float;

use crate::error::{invalid, Error, Result};

/// Speed of light in vacuum (m/s), exact.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vacuum permittivity (F/m), CODATA 2022.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_818_8e-12;

/// Crystal and cavity constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Signal cavity damping rate (rad/s).
    pub gamma_s: f64,
    /// Pump cavity damping rate (rad/s).
    pub gamma_p: f64,
    /// Refractive index at the phase-matched frequencies.
    pub n0: f64,
    /// Nonlinear susceptibility (SI).
    pub chi: f64,
    /// Crystal length (m).
    pub length: f64,
    /// Degenerate signal angular frequency (rad/s).
    pub omega0: f64,
    /// Free spectral range of the comb (rad/s).
    pub free_spectral_range: f64,
}

impl PhysicalParams {
    pub fn new(
        gamma_s: f64,
        gamma_p: f64,
        n0: f64,
        chi: f64,
        length: f64,
        omega0: f64,
        free_spectral_range: f64,
    ) -> Result<Self> {
        let params = Self {
            gamma_s,
            gamma_p,
            n0,
            chi,
            length,
            omega0,
            free_spectral_range,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("gamma_s", self.gamma_s),
            ("gamma_p", self.gamma_p),
            ("n0", self.n0),
            ("chi", self.chi),
            ("l", self.length),
            ("omega0", self.omega0),
            ("Omega", self.free_spectral_range),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(invalid(name, "must be finite and strictly positive"));
            }
        }
        Ok(())
    }
}

/// Single-mode cw oscillation threshold `P0` (W/m²).
///
/// `P0 = 2 γs² γp n0³ c³ ε0 / (4√2 χ l ω0)²`
pub fn cw_threshold_power(params: &PhysicalParams) -> f64 {
    let c = SPEED_OF_LIGHT;
    let numerator = 2.0
        * params.gamma_s.powi(2)
        * params.gamma_p
        * params.n0.powi(3)
        * c.powi(3)
        * VACUUM_PERMITTIVITY;
    let coupling = 4.0 * core::f64::consts::SQRT_2 * params.chi * params.length * params.omega0;
    numerator / (coupling * coupling)
}

/// Normalized pump amplitude `sigma = sqrt(P / P0)`.
pub fn pump_strength(power: f64, p0: f64) -> Result<f64> {
    if !(p0.is_finite() && p0 > 0.0) {
        return Err(invalid("P0", "must be finite and strictly positive"));
    }
    if !(power.is_finite() && power >= 0.0) {
        return Err(invalid("P", "must be finite and non-negative"));
    }
    Ok((power / p0).sqrt())
}

/// Normalized pumping rate `r = sigma * lambda0`; threshold sits at `r = 1`.
pub fn pumping_rate(sigma: f64, lambda0: f64) -> Result<f64> {
    if !(lambda0.is_finite() && lambda0 > 0.0) {
        return Err(invalid("lambda0", "must be finite and strictly positive"));
    }
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(invalid("sigma", "must be finite and non-negative"));
    }
    Ok(sigma * lambda0)
}

/// Pump power expressed in the units the dynamics use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpDrive {
    pub power: f64,
    pub p0: f64,
    pub sigma: f64,
    /// Set once the dominant coupling eigenvalue is known.
    pub r: Option<f64>,
}

impl PumpDrive {
    pub fn from_power(power: f64, p0: f64) -> Result<Self> {
        let sigma = pump_strength(power, p0)?;
        Ok(Self {
            power,
            p0,
            sigma,
            r: None,
        })
    }

    /// Drive specified directly by the pumping rate `r` for a coupling whose
    /// dominant eigenvalue has magnitude `lambda0`.
    pub fn from_rate(r: f64, p0: f64, lambda0: f64) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(invalid("r", "must be finite and non-negative"));
        }
        if !(lambda0.is_finite() && lambda0 > 0.0) {
            return Err(invalid("lambda0", "must be finite and strictly positive"));
        }
        if !(p0.is_finite() && p0 > 0.0) {
            return Err(invalid("P0", "must be finite and strictly positive"));
        }
        let sigma = r / lambda0;
        Ok(Self {
            power: sigma * sigma * p0,
            p0,
            sigma,
            r: Some(r),
        })
    }

    pub fn with_lambda0(mut self, lambda0: f64) -> Result<Self> {
        self.r = Some(pumping_rate(self.sigma, lambda0)?);
        Ok(self)
    }

    /// Fails with [`Error::AboveThreshold`] unless `r < 1`.
    pub fn require_below_threshold(&self) -> Result<f64> {
        match self.r {
            Some(r) if r < 1.0 => Ok(r),
            Some(r) => Err(Error::AboveThreshold { r }),
            None => Err(invalid("r", "pumping rate unknown until lambda0 is attached")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> PhysicalParams {
        PhysicalParams::new(1.0e6, 1.0e8, 1.66, 4.0e-12, 2.0e-3, 1.177e15, 6.283e8).unwrap()
    }

    #[test]
    fn threshold_scales_with_chi_and_gamma() {
        let base = reference();
        let p0 = cw_threshold_power(&base);
        let chi2 = PhysicalParams { chi: 2.0 * base.chi, ..base };
        let g2 = PhysicalParams { gamma_s: 2.0 * base.gamma_s, ..base };
        assert!((cw_threshold_power(&chi2) / p0 - 0.25).abs() < 1e-15);
        assert!((cw_threshold_power(&g2) / p0 - 4.0).abs() < 1e-15);
        for a in [2.0, 10.0] {
            let scaled = PhysicalParams { chi: a * base.chi, ..base };
            let rel = cw_threshold_power(&scaled) * a * a / p0 - 1.0;
            assert!(rel.abs() < 1e-14);
            let scaled = PhysicalParams { length: a * base.length, ..base };
            let rel = cw_threshold_power(&scaled) * a * a / p0 - 1.0;
            assert!(rel.abs() < 1e-14);
        }
    }

    #[test]
    fn threshold_golden_value() {
        // Independent evaluation in extended precision of the closed form for
        // the reference parameter set.
        let p0 = cw_threshold_power(&reference());
        let golden = 7.692_760_660_689_854e31;
        assert!((p0 / golden - 1.0).abs() < 1e-12, "{p0:e}");
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(PhysicalParams::new(0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, 1.0, -1.0, 1.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, 1.0, 1.0, 1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn pump_strength_examples() {
        assert_eq!(pump_strength(3.0, 3.0).unwrap(), 1.0);
        assert_eq!(pump_strength(12.0, 3.0).unwrap(), 2.0);
        assert_eq!(pump_strength(0.0, 3.0).unwrap(), 0.0);
        assert!(pump_strength(1.0, 0.0).is_err());
        assert!(pump_strength(1.0, -2.0).is_err());
    }

    #[test]
    fn pumping_rate_examples() {
        let lambda0 = 4.2;
        assert!((pumping_rate(1.0 / lambda0, lambda0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(pumping_rate(0.0, lambda0).unwrap(), 0.0);
        assert_eq!(pumping_rate(0.5, 1.0).unwrap(), 0.5);
        assert!(pumping_rate(0.5, 0.0).is_err());
        assert!(pumping_rate(0.5, -1.0).is_err());
    }

    #[test]
    fn drive_round_trip() {
        let drive = PumpDrive::from_rate(0.5, 2.0, 4.0).unwrap();
        assert!((drive.sigma - 0.125).abs() < 1e-16);
        let back = PumpDrive::from_power(drive.power, 2.0).unwrap().with_lambda0(4.0).unwrap();
        assert!((back.r.unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(back.require_below_threshold().unwrap(), back.r.unwrap());
        let above = PumpDrive::from_rate(1.2, 2.0, 4.0).unwrap();
        assert!(matches!(above.require_below_threshold(), Err(Error::AboveThreshold { .. })));
    }

    proptest::proptest! {
        #[test]
        fn sigma_squared_round_trip(sigma in 0.0f64..1e3, p0 in 1e-6f64..1e6) {
            let back = pump_strength(sigma * sigma * p0, p0).unwrap();
            proptest::prop_assert!((back - sigma).abs() <= 4.0 * f64::EPSILON * sigma.max(1e-300));
        }
    }
}
