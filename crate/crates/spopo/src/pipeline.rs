//! Turns a [`RunConfig`] into the assembled model shared by all commands.

use spopo_core::{
    cw_threshold_power, decompose, CouplingMatrix, DispersionParams, HomodyneLO, ModeWindow,
    PhaseMatchModel, PhysicalParams, PumpDrive, PumpSpectrum, SupermodeSet,
};

use crate::config::{DispersionConfig, DriveConfig, LoConfig, PhaseMatchConfig, PumpConfig, RunConfig};
use crate::error::CliError;
use crate::io::read_spectrum;

pub struct Model {
    pub params: PhysicalParams,
    pub p0: f64,
    pub pump: PumpSpectrum,
    pub dispersion: DispersionParams,
    pub phase_match: PhaseMatchModel,
    pub window: ModeWindow,
    pub coupling: CouplingMatrix,
    pub supermodes: SupermodeSet,
    pub drive: PumpDrive,
}

impl Model {
    pub fn gamma_s(&self) -> f64 {
        self.params.gamma_s
    }

    pub fn sigma(&self) -> f64 {
        self.drive.sigma
    }

    pub fn r(&self) -> f64 {
        self.drive.r.unwrap_or(0.0)
    }

    pub fn require_below_threshold(&self) -> Result<f64, CliError> {
        Ok(self.drive.require_below_threshold()?)
    }

    /// The LO from the config, if any.
    pub fn local_oscillator(&self, lo: &LoConfig) -> Result<HomodyneLO, CliError> {
        match (lo.supermode, &lo.file) {
            (Some(k), None) => Ok(HomodyneLO::supermode(&self.supermodes, k, lo.theta)?),
            (None, Some(path)) => {
                let coefficients = read_spectrum(path)?;
                if coefficients.len() != self.window.len() {
                    return Err(CliError::Config(format!(
                        "LO file {} spans {} modes, window has {}",
                        path.display(),
                        coefficients.len(),
                        self.window.len()
                    )));
                }
                Ok(HomodyneLO::normalized(coefficients, lo.theta)?)
            }
            _ => Err(CliError::Config(
                "analysis.lo needs exactly one of `supermode` or `file`".into(),
            )),
        }
    }
}

pub fn build(config: &RunConfig) -> Result<Model, CliError> {
    let p = &config.physical;
    let params = PhysicalParams::new(
        p.gamma_s,
        p.gamma_p,
        p.n0,
        p.chi,
        p.l,
        p.omega0,
        p.omega_fsr,
    )?;
    let p0 = cw_threshold_power(&params);

    let (pump, window) = match &config.pump {
        PumpConfig::Gaussian { delta_p } => {
            let window = config
                .window
                .map(ModeWindow::new)
                .unwrap_or_else(|| ModeWindow::default_for_width(*delta_p));
            // pump spans every m + q reachable from the window
            let pump_window = ModeWindow::new(2 * window.half_width().max(1));
            (PumpSpectrum::gaussian(*delta_p, pump_window)?, window)
        }
        PumpConfig::Custom { path } => {
            let pump = PumpSpectrum::custom(read_spectrum(path)?)?;
            let window = config.window.map(ModeWindow::new).unwrap_or(pump.window());
            (pump, window)
        }
    };

    let dispersion = match config.dispersion {
        DispersionConfig::Coefficients {
            beta1,
            beta2p,
            beta2s,
        } => DispersionParams::new(beta1, beta2p, beta2s)?,
        DispersionConfig::Material {
            kp_prime,
            ks_prime,
            kp_double_prime,
            ks_double_prime,
        } => DispersionParams::from_material(
            kp_prime,
            ks_prime,
            kp_double_prime,
            ks_double_prime,
            params.free_spectral_range,
            params.length,
        )?,
    };

    let phase_match = match config.phase_match {
        PhaseMatchConfig::Sinc {} => PhaseMatchModel::Sinc,
        PhaseMatchConfig::Exponential { eta } => PhaseMatchModel::exponential(eta)?,
    };

    let coupling = CouplingMatrix::build(&pump, &dispersion, phase_match, window)?;
    let supermodes = decompose(&coupling)?;
    let lambda0 = supermodes.lambda0_abs();
    if lambda0 == 0.0 {
        return Err(spopo_core::Error::ZeroCoupling.into());
    }
    let drive = match config.drive {
        DriveConfig::R(r) => PumpDrive::from_rate(r, p0, lambda0)?,
        DriveConfig::Power(power) => PumpDrive::from_power(power, p0)?.with_lambda0(lambda0)?,
    };

    Ok(Model {
        params,
        p0,
        pump,
        dispersion,
        phase_match,
        window,
        coupling,
        supermodes,
        drive,
    })
}
