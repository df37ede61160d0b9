//! Output quadrature spectra of the supermodes below threshold and their
//! homodyne variances for an arbitrary local-oscillator comb.
//!
//! Variances are normalized to the vacuum level (1). Quadrature labels follow
//! the intracavity branches: `+` is `S + S†`, `−` is `−i(S − S†)`. A local
//! oscillator at phase `theta` measures `cos θ S⁽⁺⁾ + sin θ S⁽⁻⁾`.

use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

use crate::error::{invalid, Error, Result};
use crate::supermodes::SupermodeSet;

/// Tolerance on the unit norm of local-oscillator coefficients.
pub const LO_NORM_TOLERANCE: f64 = 1e-12;

/// Quadrature branch of a supermode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Strictly increasing non-negative analysis frequencies (rad/s).
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    omegas: Vec<f64>,
}

impl FrequencyGrid {
    pub fn new(omegas: Vec<f64>) -> Result<Self> {
        if omegas.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(invalid("omega", "frequencies must be finite and non-negative"));
        }
        if omegas.windows(2).any(|p| p[1] <= p[0]) {
            return Err(invalid("omega", "frequencies must be strictly increasing"));
        }
        Ok(Self { omegas })
    }

    /// `points` evenly spaced frequencies from 0 to `omega_max` inclusive.
    pub fn linear(omega_max: f64, points: usize) -> Result<Self> {
        match points {
            0 => Err(invalid("points", "must be at least 1")),
            1 => Self::new(alloc::vec![0.0]),
            _ => {
                if !(omega_max.is_finite() && omega_max > 0.0) {
                    return Err(invalid("omega_max", "must be finite and strictly positive"));
                }
                let step = omega_max / (points - 1) as f64;
                Self::new((0..points).map(|i| i as f64 * step).collect())
            }
        }
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }
}

/// Squeezed / antisqueezed variance pair of one supermode over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceSpectrum {
    pub k: usize,
    pub grid: FrequencyGrid,
    /// Squeezed quadrature (≤ 1).
    pub v_minus: Vec<f64>,
    /// Antisqueezed quadrature (≥ 1).
    pub v_plus: Vec<f64>,
}

/// Local-oscillator comb: real spectral coefficients with unit norm, and the
/// homodyne phase.
#[derive(Debug, Clone, PartialEq)]
pub struct HomodyneLO {
    coefficients: Vec<f64>,
    theta: f64,
}

impl HomodyneLO {
    /// Coefficients must already satisfy `Σ e² = 1` within [`LO_NORM_TOLERANCE`].
    pub fn new(coefficients: Vec<f64>, theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(invalid("theta", "must be finite"));
        }
        if coefficients.iter().any(|e| !e.is_finite()) {
            return Err(invalid("lo", "coefficients must be finite"));
        }
        let norm_sq: f64 = coefficients.iter().map(|e| e * e).sum();
        if (norm_sq - 1.0).abs() > LO_NORM_TOLERANCE {
            return Err(invalid("lo", "coefficients must have unit norm"));
        }
        Ok(Self {
            coefficients,
            theta,
        })
    }

    /// Rescales the coefficients to unit norm.
    pub fn normalized(mut coefficients: Vec<f64>, theta: f64) -> Result<Self> {
        if coefficients.iter().any(|e| !e.is_finite()) {
            return Err(invalid("lo", "coefficients must be finite"));
        }
        let norm = crate::comb::l2_norm(&coefficients);
        if norm == 0.0 {
            return Err(invalid("lo", "at least one coefficient must be nonzero"));
        }
        for e in &mut coefficients {
            *e /= norm;
        }
        Self::new(coefficients, theta)
    }

    /// LO matched to supermode `k`.
    pub fn supermode(set: &SupermodeSet, k: usize, theta: f64) -> Result<Self> {
        if k >= set.len() {
            return Err(invalid("k", "supermode index out of range"));
        }
        Self::normalized(set.eigenvector(k).to_vec(), theta)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Weights `(cos² θ, sin² θ)` of the `+` and `−` quadratures.
    pub fn quadrature_weights(&self) -> (f64, f64) {
        let c = self.theta.cos();
        let s = self.theta.sin();
        (c * c, s * s)
    }
}

fn check_rate(r: f64) -> Result<()> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(invalid("r", "must be finite and non-negative"));
    }
    if r >= 1.0 {
        return Err(Error::AboveThreshold { r });
    }
    Ok(())
}

fn check_common(omega: f64, gamma_s: f64) -> Result<()> {
    if !(gamma_s.is_finite() && gamma_s > 0.0) {
        return Err(invalid("gamma_s", "must be finite and strictly positive"));
    }
    if !omega.is_finite() {
        return Err(invalid("omega", "must be finite"));
    }
    Ok(())
}

/// Output/input ratio of a supermode quadrature at analysis frequency `omega`:
/// `[γs(1 ± r ρ) − iω] / [γs(−1 ± r ρ) + iω]` with `ρ = Λ_k / Λ_0`.
pub fn transfer_function(
    branch: Branch,
    omega: f64,
    r: f64,
    ratio: f64,
    gamma_s: f64,
) -> Result<Complex64> {
    check_rate(r)?;
    check_common(omega, gamma_s)?;
    let g = r * ratio * branch.sign();
    let num = Complex64::new(gamma_s * (1.0 + g), -omega);
    let den = Complex64::new(gamma_s * (-1.0 + g), omega);
    Ok(num / den)
}

/// `|transfer_function|²` evaluated directly, keeping the raw branch label
/// (for `Λ_k < 0` the `+` branch is the squeezed one).
pub fn branch_variance(branch: Branch, omega: f64, r: f64, ratio: f64, gamma_s: f64) -> Result<f64> {
    check_rate(r)?;
    check_common(omega, gamma_s)?;
    let g = r * ratio * branch.sign();
    let w2 = omega * omega;
    let gs2 = gamma_s * gamma_s;
    Ok((gs2 * (1.0 + g) * (1.0 + g) + w2) / (gs2 * (1.0 - g) * (1.0 - g) + w2))
}

/// Squeezed and antisqueezed spectra of supermode `k`, ordered by magnitude of
/// the eigenvalue ratio so that `v_minus ≤ 1 ≤ v_plus`.
pub fn variance_spectrum(
    k: usize,
    r: f64,
    ratio: f64,
    gamma_s: f64,
    grid: &FrequencyGrid,
) -> Result<VarianceSpectrum> {
    check_rate(r)?;
    check_common(0.0, gamma_s)?;
    if !ratio.is_finite() {
        return Err(invalid("ratio", "must be finite"));
    }
    let a = r * ratio.abs();
    let gs2 = gamma_s * gamma_s;
    let squeezed = gs2 * (1.0 - a) * (1.0 - a);
    let anti = gs2 * (1.0 + a) * (1.0 + a);
    let mut v_minus = Vec::with_capacity(grid.len());
    let mut v_plus = Vec::with_capacity(grid.len());
    for &w in grid.omegas() {
        let w2 = w * w;
        v_minus.push((squeezed + w2) / (anti + w2));
        v_plus.push((anti + w2) / (squeezed + w2));
    }
    Ok(VarianceSpectrum {
        k,
        grid: grid.clone(),
        v_minus,
        v_plus,
    })
}

/// Best squeezing of a supermode, reached at threshold and zero frequency:
/// `((Λ_0 − |Λ_k|) / (Λ_0 + |Λ_k|))²`.
pub fn min_variance(lambda_k_abs: f64, lambda0_abs: f64) -> Result<f64> {
    if !(lambda0_abs.is_finite() && lambda0_abs > 0.0) {
        return Err(invalid("lambda0", "must be finite and strictly positive"));
    }
    if !(lambda_k_abs.is_finite() && lambda_k_abs >= 0.0) {
        return Err(invalid("lambda_k", "must be finite and non-negative"));
    }
    if lambda_k_abs > lambda0_abs {
        return Err(invalid("lambda_k", "exceeds the dominant eigenvalue magnitude"));
    }
    let q = (lambda0_abs - lambda_k_abs) / (lambda0_abs + lambda_k_abs);
    Ok(q * q)
}

/// Overlaps `c_k = Σ_m e_m L_{k,m}` of the LO with every supermode.
pub fn lo_projection(lo: &HomodyneLO, set: &SupermodeSet) -> Result<Vec<f64>> {
    if lo.coefficients.len() != set.window().len() {
        return Err(Error::WindowMismatch {
            expected: set.window().len(),
            found: lo.coefficients.len(),
        });
    }
    Ok(set
        .eigenvectors()
        .iter()
        .map(|v| v.iter().zip(&lo.coefficients).map(|(a, b)| a * b).sum())
        .collect())
}

/// Homodyne variance for an arbitrary LO: independent supermodes mixed with
/// weights `c_k²`, each quadrature weighted by the LO phase.
pub fn homodyne_variance(
    lo: &HomodyneLO,
    set: &SupermodeSet,
    r: f64,
    gamma_s: f64,
    omega: f64,
) -> Result<f64> {
    check_rate(r)?;
    check_common(omega, gamma_s)?;
    let overlaps = lo_projection(lo, set)?;
    let (w_plus, w_minus) = lo.quadrature_weights();
    let l0 = set.lambda0_abs();
    let mut total = 0.0;
    for (k, c) in overlaps.iter().enumerate() {
        let ratio = if l0 > 0.0 { set.eigenvalue(k) / l0 } else { 0.0 };
        let plus = branch_variance(Branch::Plus, omega, r, ratio, gamma_s)?;
        let minus = branch_variance(Branch::Minus, omega, r, ratio, gamma_s)?;
        total += c * c * (w_plus * plus + w_minus * minus);
    }
    Ok(total)
}
