//! Homodyne variance from the full mode-basis linear response, without
//! diagonalizing the coupling.
//!
//! With `L` real, the quadratures `X = s + s†` and `Y = −i(s − s†)` obey
//! `dX/dt = A₊ X + √(2γs) X_in` and `dY/dt = A₋ Y + √(2γs) Y_in` with
//! `A± = γs(−I ± σL)`. The mirror gives `X_out = M₊(ω) X_in` where
//! `M±(ω) = −I + 2γs (iωI − A±)⁻¹`. Vacuum inputs are white with unit
//! symmetrized density and uncorrelated between quadratures, so the LO
//! variance is `cos²θ ‖M₊ e‖² + sin²θ ‖M₋ e‖²` (`M±` is complex symmetric).

use alloc::vec::Vec;
use num_complex::Complex64;

use super::dense::solve_complex;
use crate::coupling::CouplingMatrix;
use crate::error::{invalid, Error, Result};
use crate::squeezing::{homodyne_variance, HomodyneLO};
use crate::supermodes::decompose;

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceReport {
    pub omega: f64,
    pub lo: HomodyneLO,
    pub variance: f64,
    /// `|variance − squeezing::homodyne_variance|`.
    pub residual_vs_supermode: f64,
}

/// Oracle variance only.
pub fn covariance_homodyne_variance(
    coupling: &CouplingMatrix,
    sigma: f64,
    gamma_s: f64,
    omega: f64,
    lo: &HomodyneLO,
) -> Result<f64> {
    let n = coupling.dim();
    if lo.coefficients().len() != n {
        return Err(Error::WindowMismatch {
            expected: n,
            found: lo.coefficients().len(),
        });
    }
    if !(gamma_s.is_finite() && gamma_s > 0.0) {
        return Err(invalid("gamma_s", "must be finite and strictly positive"));
    }
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(invalid("sigma", "must be finite and non-negative"));
    }
    if !omega.is_finite() {
        return Err(invalid("omega", "must be finite"));
    }
    let (w_plus, w_minus) = lo.quadrature_weights();
    let e: Vec<Complex64> = lo
        .coefficients()
        .iter()
        .map(|&x| Complex64::new(x, 0.0))
        .collect();
    let mut total = 0.0;
    for (sign, weight) in [(1.0, w_plus), (-1.0, w_minus)] {
        if weight == 0.0 {
            continue;
        }
        // iωI − A = (γs + iω) I − s γs σ L
        let mut k = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut z = Complex64::new(-sign * gamma_s * sigma * coupling.at(i, j), 0.0);
                if i == j {
                    z += Complex64::new(gamma_s, omega);
                }
                k.push(z);
            }
        }
        let x = solve_complex(k, n, &e)
            .ok_or(Error::Unstable("iωI − A is singular at or above threshold"))?;
        let norm_sq: f64 = x
            .iter()
            .zip(&e)
            .map(|(xi, ei)| (2.0 * gamma_s * xi - ei).norm_sqr())
            .sum();
        total += weight * norm_sq;
    }
    Ok(total)
}

/// Oracle variance together with its deviation from the supermode route.
pub fn covariance_variance(
    coupling: &CouplingMatrix,
    sigma: f64,
    gamma_s: f64,
    omega: f64,
    lo: &HomodyneLO,
) -> Result<CovarianceReport> {
    let variance = covariance_homodyne_variance(coupling, sigma, gamma_s, omega, lo)?;
    let set = decompose(coupling)?;
    let r = sigma * set.lambda0_abs();
    if r >= 1.0 {
        return Err(Error::AboveThreshold { r });
    }
    let supermode = homodyne_variance(lo, &set, r, gamma_s, omega)?;
    Ok(CovarianceReport {
        omega,
        lo: lo.clone(),
        variance,
        residual_vs_supermode: (variance - supermode).abs(),
    })
}
