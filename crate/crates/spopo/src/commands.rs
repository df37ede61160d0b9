//! The four subcommands. Every output is rendered in memory first so that a
//! failing run leaves no partial files behind.

use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::{Path, PathBuf};

use spopo_core::verify::{
    analytic_optimized_case, covariance_variance, stochastic_variance_estimate,
    time_domain_decay, OptimizedCaseSpec,
};
use spopo_core::{
    branch_rates, homodyne_variance, spopo_threshold, variance_spectrum, Branch, FrequencyGrid,
    HomodyneLO, PhaseMatchModel,
};

use crate::config::{DispersionConfig, PumpConfig, RunConfig};
use crate::error::CliError;
use crate::io::{csv, eigenvalue_table, fmt_f64, matrix_dump, supermode_table};
use crate::pipeline::{build, Model};
use crate::report::{Check, Report};

/// Relative tolerance on decay-rate fits.
pub const DECAY_TOLERANCE: f64 = 5e-3;
/// Absolute tolerance between the covariance oracle and the supermode route.
pub const ORACLE_TOLERANCE: f64 = 1e-10;
/// Accepted eigen-residual and orthonormality defect.
pub const DECOMPOSITION_TOLERANCE: f64 = 1e-10;
/// Relative tolerance on the closed-form optimized case.
pub const ANALYTIC_TOLERANCE: f64 = 0.01;
pub const RANK_ONE_TOLERANCE: f64 = 1e-8;
/// Monte Carlo acceptance in standard errors.
pub const STOCHASTIC_SIGMAS: f64 = 3.0;

type Outputs = Vec<(PathBuf, String)>;

fn write_all(out_dir: &Path, files: Outputs) -> Result<(), CliError> {
    fs::create_dir_all(out_dir)?;
    for (name, body) in files {
        fs::write(out_dir.join(name), body)?;
    }
    Ok(())
}

fn exported_modes(config: &RunConfig, model: &Model) -> usize {
    config.analysis.supermodes.min(model.supermodes.len())
}

pub fn analyze(config: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    let model = build(config)?;
    let set = &model.supermodes;
    let rates = branch_rates(set, model.sigma(), model.gamma_s());
    let p_thr = spopo_threshold(model.p0, set)?;

    let mut files: Outputs = vec![
        ("eigenvalues.csv".into(), eigenvalue_table(set, &rates.plus, &rates.minus)),
        ("summary.txt".into(), summary(&model, p_thr)),
    ];
    for k in 0..exported_modes(config, &model) {
        files.push((format!("supermode_{k}.csv").into(), supermode_table(set, k)));
    }
    if config.analysis.dump_coupling {
        files.push(("coupling.txt".into(), matrix_dump(&model.coupling)));
    }
    write_all(out_dir, files)
}

fn summary(model: &Model, p_thr: f64) -> String {
    let set = &model.supermodes;
    let lines = [
        ("modes", model.window.len().to_string()),
        ("window_half_width", model.window.half_width().to_string()),
        ("P0", fmt_f64(model.p0)),
        ("P_thr", fmt_f64(p_thr)),
        ("P_thr_over_P0", fmt_f64(p_thr / model.p0)),
        ("P0_over_P_thr", fmt_f64(model.p0 / p_thr)),
        ("lambda0", fmt_f64(set.lambda0_abs())),
        ("lambda0_sign", fmt_f64(set.lambda0_sign())),
        ("P", fmt_f64(model.drive.power)),
        ("sigma", fmt_f64(model.sigma())),
        ("r", fmt_f64(model.r())),
        ("below_threshold", spopo_core::is_below_threshold(model.r()).to_string()),
    ];
    lines
        .iter()
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect()
}

fn grid(config: &RunConfig) -> Result<FrequencyGrid, CliError> {
    Ok(FrequencyGrid::linear(config.omega_max()?, config.analysis.points)?)
}

fn homodyne_table(model: &Model, lo: &HomodyneLO, r: f64, grid: &FrequencyGrid) -> Result<String, CliError> {
    let rows = grid
        .omegas()
        .iter()
        .map(|&w| {
            let v = homodyne_variance(lo, &model.supermodes, r, model.gamma_s(), w)?;
            Ok(vec![fmt_f64(w), fmt_f64(v)])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(csv(&["omega_rad_per_s", "variance"], rows))
}

pub fn squeeze(config: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    let model = build(config)?;
    let r = model.require_below_threshold()?;
    let grid = grid(config)?;
    let mut files: Outputs = Vec::new();
    for k in 0..exported_modes(config, &model) {
        let ratio = model.supermodes.ratio(k)?;
        let spectrum = variance_spectrum(k, r, ratio, model.gamma_s(), &grid)?;
        let rows = (0..grid.len()).map(|i| {
            vec![
                fmt_f64(grid.omegas()[i]),
                fmt_f64(spectrum.v_minus[i]),
                fmt_f64(spectrum.v_plus[i]),
            ]
        });
        files.push((
            format!("squeeze_{k}.csv").into(),
            csv(&["omega_rad_per_s", "v_minus", "v_plus"], rows),
        ));
    }
    if let Some(lo) = &config.analysis.lo {
        let lo = model.local_oscillator(lo)?;
        files.push(("homodyne.csv".into(), homodyne_table(&model, &lo, r, &grid)?));
    }
    write_all(out_dir, files)
}

pub fn homodyne(config: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    let lo_config = config
        .analysis
        .lo
        .as_ref()
        .ok_or_else(|| CliError::Config("homodyne needs analysis.lo".into()))?;
    let model = build(config)?;
    let r = model.require_below_threshold()?;
    let lo = model.local_oscillator(lo_config)?;
    let table = homodyne_table(&model, &lo, r, &grid(config)?)?;
    write_all(out_dir, vec![("homodyne.csv".into(), table)])
}

fn optimized_case(config: &RunConfig, model: &Model) -> Result<OptimizedCaseSpec, CliError> {
    let PumpConfig::Gaussian { delta_p } = config.pump else {
        return Err(CliError::Config("analytic_case requires a gaussian pump".into()));
    };
    let DispersionConfig::Coefficients { beta1, beta2p, beta2s } = config.dispersion else {
        return Err(CliError::Config("analytic_case requires dispersion coefficients".into()));
    };
    if beta1 != 0.0 || beta2s != 2.0 * beta2p {
        return Err(CliError::Config(
            "analytic_case requires beta1 = 0 and beta2s = 2 beta2p".into(),
        ));
    }
    let PhaseMatchModel::ExponentialAbs { eta } = model.phase_match else {
        return Err(CliError::Config("analytic_case requires the exponential model".into()));
    };
    Ok(OptimizedCaseSpec::new(delta_p, beta2p, eta, model.window)?)
}

/// Runs every oracle and returns the rendered report with its pass/fail state.
pub fn verification_report(config: &RunConfig, seed: u64) -> Result<Report, CliError> {
    let model = build(config)?;
    let spec = if config.verify.analytic_case {
        Some(optimized_case(config, &model)?)
    } else {
        None
    };
    let r = model.require_below_threshold()?;
    let gamma = model.gamma_s();
    let sigma = model.sigma();
    let set = &model.supermodes;

    let mut report = Report::new();
    report.header("modes", model.window.len().to_string());
    report.header("r", fmt_f64(r));
    report.header("seed", seed.to_string());

    let scale = model.coupling.frobenius_norm();
    report.push(Check::at_most(
        "decomposition.residual",
        set.max_residual(&model.coupling) / scale,
        DECOMPOSITION_TOLERANCE,
    ));
    report.push(Check::at_most(
        "decomposition.orthonormality",
        set.orthonormality_error(),
        DECOMPOSITION_TOLERANCE,
    ));

    if let Some(spec) = spec {
        let analytic = analytic_optimized_case(&spec)?;
        report.push(Check::at_most(
            "analytic.lambda0_relative_error",
            analytic.lambda0_relative_error(),
            ANALYTIC_TOLERANCE,
        ));
        report.push(Check::at_most(
            "analytic.rank_one_residual",
            analytic.rank1_residual,
            RANK_ONE_TOLERANCE,
        ));
        report.push(Check::at_most(
            "analytic.threshold_ratio_relative_error",
            analytic.threshold_relative_error(),
            ANALYTIC_TOLERANCE,
        ));
        report.header("analytic.fitted_width", fmt_f64(analytic.fitted_width));
    }

    let lo = match &config.analysis.lo {
        Some(lo) => model.local_oscillator(lo)?,
        None => {
            let theta = if set.lambda0_sign() < 0.0 { 0.0 } else { FRAC_PI_2 };
            HomodyneLO::supermode(set, 0, theta)?
        }
    };
    let omegas = config
        .verify
        .omegas
        .clone()
        .unwrap_or_else(|| vec![0.0, gamma, 3.0 * gamma]);
    if omegas.is_empty() || omegas.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(CliError::Config("verify.omegas must be non-empty and non-negative".into()));
    }
    for (i, &w) in omegas.iter().enumerate() {
        let oracle = covariance_variance(&model.coupling, sigma, gamma, w, &lo)?;
        report.push(Check::at_most(
            &format!("oracle.covariance_vs_supermode[{i}]"),
            oracle.residual_vs_supermode,
            ORACLE_TOLERANCE,
        ));
    }

    let horizon = config.verify.decay_horizon.unwrap_or(10.0 / gamma);
    let rates = branch_rates(set, sigma, gamma);
    for k in 0..exported_modes(config, &model) {
        for (branch, label, expected) in [
            (Branch::Plus, "plus", rates.plus[k]),
            (Branch::Minus, "minus", rates.minus[k]),
        ] {
            let fitted = time_domain_decay(&model.coupling, sigma, gamma, k, branch, horizon)?;
            report.push(Check::at_most(
                &format!("decay.k{k}.{label}"),
                (fitted / expected - 1.0).abs(),
                DECAY_TOLERANCE,
            ));
        }
    }

    if config.verify.trajectories > 0 {
        let w = omegas[0];
        let expected = homodyne_variance(&lo, set, r, gamma, w)?;
        let est = stochastic_variance_estimate(
            &model.coupling,
            sigma,
            gamma,
            w,
            &lo,
            config.verify.trajectories,
            seed,
        )?;
        report.header("stochastic.estimate", fmt_f64(est.estimate));
        report.header("stochastic.standard_error", fmt_f64(est.standard_error));
        report.header("stochastic.expected", fmt_f64(expected));
        report.push(Check::at_most(
            "stochastic.deviation_in_standard_errors",
            (est.estimate - expected).abs() / est.standard_error,
            STOCHASTIC_SIGMAS,
        ));
    }
    Ok(report)
}

pub fn verify(config: &RunConfig, out_dir: &Path, seed: u64) -> Result<Report, CliError> {
    let report = verification_report(config, seed)?;
    write_all(out_dir, vec![("verify_report.txt".into(), report.render())])?;
    if report.passed() {
        Ok(report)
    } else {
        Err(CliError::VerificationFailed(format!(
            "{} of {} checks failed",
            report.failures(),
            report.len()
        )))
    }
}
