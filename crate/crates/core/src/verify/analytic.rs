use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;

use crate::comb::{ModeWindow, PumpSpectrum};
use crate::coupling::CouplingMatrix;
use crate::error::{invalid, Result};
use crate::phase_matching::{DispersionParams, PhaseMatchModel};
use crate::supermodes::{decompose, SupermodeSet};

/// Allowed deviation of `eta |beta2p| delta_p²` from 1.
pub const WIDTH_MATCH_TOLERANCE: f64 = 1e-12;

/// Gaussian pump, equal group velocities, signal GVD twice the pump GVD and
/// an exponential phase-matching curve whose width matches the pump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizedCaseSpec {
    pub delta_p: f64,
    pub beta2p: f64,
    pub eta: f64,
    pub window: ModeWindow,
}

impl OptimizedCaseSpec {
    pub fn new(delta_p: f64, beta2p: f64, eta: f64, window: ModeWindow) -> Result<Self> {
        if !(delta_p.is_finite() && delta_p > 0.0) {
            return Err(invalid("delta_p", "must be finite and strictly positive"));
        }
        if !(beta2p.is_finite() && beta2p != 0.0) {
            return Err(invalid("beta2p", "must be finite and nonzero"));
        }
        if !(eta.is_finite() && eta > 0.0) {
            return Err(invalid("eta", "must be finite and strictly positive"));
        }
        if (eta * beta2p.abs() * delta_p * delta_p - 1.0).abs() > WIDTH_MATCH_TOLERANCE {
            return Err(invalid(
                "eta",
                "width matching requires eta * |beta2p| * delta_p^2 = 1",
            ));
        }
        Ok(Self {
            delta_p,
            beta2p,
            eta,
            window,
        })
    }

    /// Picks `eta` so the width-matching condition holds.
    pub fn matched(delta_p: f64, beta2p: f64, window: ModeWindow) -> Result<Self> {
        if !(delta_p.is_finite() && delta_p > 0.0 && beta2p.is_finite() && beta2p != 0.0) {
            return Err(invalid("delta_p", "delta_p and beta2p must be finite and nonzero"));
        }
        Self::new(delta_p, beta2p, 1.0 / (beta2p.abs() * delta_p * delta_p), window)
    }

    /// Coupling kernel; the pump spans `2M` so no `m + q` is truncated.
    pub fn coupling(&self) -> Result<CouplingMatrix> {
        let pump_window = ModeWindow::new(2 * self.window.half_width().max(1));
        let pump = PumpSpectrum::gaussian(self.delta_p, pump_window)?;
        CouplingMatrix::build(
            &pump,
            &DispersionParams::matched(self.beta2p)?,
            PhaseMatchModel::exponential(self.eta)?,
            self.window,
        )
    }
}

/// `π^{1/4} √(Δp / 2)`.
pub fn optimized_lambda0(delta_p: f64) -> f64 {
    PI.powf(0.25) * (0.5 * delta_p).sqrt()
}

/// `P0 / P_thr = √π Δp / 2`.
pub fn optimized_threshold_reduction(delta_p: f64) -> f64 {
    PI.sqrt() * delta_p / 2.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticReport {
    pub lambda0_expected: f64,
    pub lambda0_numeric: f64,
    /// `|Λ_1| / Λ_0`.
    pub rank1_residual: f64,
    /// Width `w` of the best fit `exp(−m² / w²)` to the critical supermode.
    pub fitted_width: f64,
    /// RMS residual of the log-linear Gaussian fit.
    pub gaussian_fit_error: f64,
    /// `P0 / P_thr = Λ_0²`.
    pub threshold_ratio: f64,
    pub threshold_ratio_expected: f64,
}

impl AnalyticReport {
    pub fn lambda0_relative_error(&self) -> f64 {
        (self.lambda0_numeric / self.lambda0_expected - 1.0).abs()
    }

    pub fn threshold_relative_error(&self) -> f64 {
        (self.threshold_ratio / self.threshold_ratio_expected - 1.0).abs()
    }
}

/// Builds and diagonalizes the optimized-case kernel and compares it with the
/// closed form. Requires `delta_p ≥ 5` and `M ≥ 6 delta_p`.
pub fn analytic_optimized_case(spec: &OptimizedCaseSpec) -> Result<AnalyticReport> {
    let spec = OptimizedCaseSpec::new(spec.delta_p, spec.beta2p, spec.eta, spec.window)?;
    if spec.delta_p < 5.0 {
        return Err(invalid("delta_p", "closed form needs delta_p >= 5"));
    }
    if (spec.window.half_width() as f64) < 6.0 * spec.delta_p {
        return Err(invalid("window", "closed form needs M >= 6 delta_p"));
    }
    let set = decompose(&spec.coupling()?)?;
    let lambda0 = set.lambda0_abs();
    let rank1_residual = if set.len() > 1 {
        set.eigenvalue(1).abs() / lambda0
    } else {
        0.0
    };
    let (fitted_width, gaussian_fit_error) = gaussian_fit(&set);
    Ok(AnalyticReport {
        lambda0_expected: optimized_lambda0(spec.delta_p),
        lambda0_numeric: lambda0,
        rank1_residual,
        fitted_width,
        gaussian_fit_error,
        threshold_ratio: lambda0 * lambda0,
        threshold_ratio_expected: optimized_threshold_reduction(spec.delta_p),
    })
}

/// Least-squares fit of `ln|L_{0,m}| = a − m² / w²` over components above
/// 1e-6 of the peak.
fn gaussian_fit(set: &SupermodeSet) -> (f64, f64) {
    let v = set.eigenvector(0);
    let window = set.window();
    let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let points: Vec<(f64, f64)> = v
        .iter()
        .enumerate()
        .filter(|(_, x)| x.abs() > 1e-6 * peak)
        .map(|(i, x)| {
            let m = window.index_at(i) as f64;
            (m * m, x.abs().ln())
        })
        .collect();
    let n = points.len() as f64;
    if points.len() < 2 {
        return (f64::NAN, f64::NAN);
    }
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return (f64::NAN, f64::NAN);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let rms = (points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let width = if slope < 0.0 { (-1.0 / slope).sqrt() } else { f64::INFINITY };
    (width, rms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_p_20() {
        let spec = OptimizedCaseSpec::matched(20.0, 1e-3, ModeWindow::new(120)).unwrap();
        let report = analytic_optimized_case(&spec).unwrap();
        assert!((report.lambda0_expected - 4.210_052_079_138_115).abs() < 1e-12);
        assert!(report.lambda0_relative_error() < 0.01);
        assert!(report.rank1_residual < 1e-8);
        assert!((report.threshold_ratio_expected - 17.724_538_509_055_16).abs() < 1e-10);
        assert!(report.threshold_relative_error() < 0.01);
        // dominant supermode is exp(-m²/Δp²)
        assert!((report.fitted_width / 20.0 - 1.0).abs() < 1e-6);
        assert!(report.gaussian_fit_error < 1e-6);
    }

    #[test]
    fn continuum_limit_already_reached() {
        // Poisson summation makes the lattice sums exact to exp(-π² Δp²/2),
        // so the closed form holds to rounding for every Δp ≥ 5.
        for delta_p in [5.0, 10.0, 20.0, 40.0] {
            let window = ModeWindow::new((6.0 * delta_p) as usize);
            let spec = OptimizedCaseSpec::matched(delta_p, -2e-3, window).unwrap();
            let report = analytic_optimized_case(&spec).unwrap();
            assert!(report.lambda0_relative_error() < 1e-12, "{delta_p}");
        }
    }

    #[test]
    fn invariant_violations_rejected() {
        let w = ModeWindow::new(120);
        assert!(OptimizedCaseSpec::new(20.0, 1e-3, 2.0 / (1e-3 * 400.0), w).is_err());
        assert!(OptimizedCaseSpec::new(20.0, 0.0, 1.0, w).is_err());
        let narrow = OptimizedCaseSpec::matched(20.0, 1e-3, ModeWindow::new(60)).unwrap();
        assert!(analytic_optimized_case(&narrow).is_err());
        let small = OptimizedCaseSpec::matched(2.0, 1e-3, ModeWindow::new(60)).unwrap();
        assert!(analytic_optimized_case(&small).is_err());
    }
}
