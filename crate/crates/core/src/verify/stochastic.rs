//! Monte Carlo estimate of the homodyne spectral variance.
//!
//! Each quadrature is an Ornstein–Uhlenbeck system `dX = A X dt + √(2γs) dW`
//! with `A = −γs(I ∓ σL)`, integrated by Euler–Maruyama from its stationary
//! distribution `N(0, (I ∓ σL)⁻¹)`. The output `−dW + √(2γs) X dt` is
//! projected on the LO and a Hann-windowed periodogram at `omega` is averaged
//! over trajectories. Trajectory `j` draws from ChaCha8 stream `j` of `seed`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use num_traits::Float;

use super::dense::{cholesky, spd_inverse};
use crate::coupling::CouplingMatrix;
use crate::error::{invalid, Error, Result};
use crate::squeezing::HomodyneLO;

pub const MIN_TRAJECTORIES: usize = 100;

/// Trajectory length in slowest relaxation times.
const HORIZON_RELAXATIONS: f64 = 40.0;
/// Lower bound on the trajectory length in units of `1/γs`.
const MIN_HORIZON_GAMMA: f64 = 50.0;
const STEP_GAMMA: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StochasticEstimate {
    pub estimate: f64,
    pub standard_error: f64,
    pub trajectories: usize,
}

struct Quadrature {
    /// Amplitude of this quadrature in the homodyne current.
    amplitude: f64,
    /// `I ∓ σL`, row-major.
    restoring: Vec<f64>,
    /// Cholesky factor of the stationary covariance.
    stationary_chol: Vec<f64>,
    /// Smallest eigenvalue of `restoring`.
    slowest: f64,
}

impl Quadrature {
    fn new(coupling: &CouplingMatrix, sigma: f64, sign: f64, amplitude: f64) -> Result<Self> {
        let n = coupling.dim();
        let mut restoring = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                restoring[i * n + j] =
                    if i == j { 1.0 } else { 0.0 } - sign * sigma * coupling.at(i, j);
            }
        }
        let chol = cholesky(&restoring, n)
            .ok_or(Error::Unstable("drift is not stable: pump at or above threshold"))?;
        let stationary = spd_inverse(&chol, n);
        let stationary_chol = cholesky(&stationary, n)
            .ok_or(Error::Unstable("stationary covariance is not positive definite"))?;
        let slowest = 1.0 / largest_eigenvalue_spd(&stationary, n);
        Ok(Self {
            amplitude,
            restoring,
            stationary_chol,
            slowest,
        })
    }
}

/// Power iteration; the matrix is positive definite so it converges to the
/// largest eigenvalue.
fn largest_eigenvalue_spd(a: &[f64], n: usize) -> f64 {
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    // break symmetry in case the start vector is orthogonal to the top mode
    for (i, x) in v.iter_mut().enumerate() {
        *x += 1e-3 * (i as f64 + 1.0).sin();
    }
    let mut w = vec![0.0; n];
    let mut lambda = 0.0;
    for _ in 0..2000 {
        for i in 0..n {
            w[i] = (0..n).map(|j| a[i * n + j] * v[j]).sum();
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let next: f64 = w.iter().zip(&v).map(|(a, b)| a * b).sum();
        for (x, y) in v.iter_mut().zip(&w) {
            *x = y / norm;
        }
        if (next - lambda).abs() <= 1e-10 * next.abs() {
            return next.max(norm);
        }
        lambda = next;
    }
    lambda
}

pub fn stochastic_variance_estimate(
    coupling: &CouplingMatrix,
    sigma: f64,
    gamma_s: f64,
    omega: f64,
    lo: &HomodyneLO,
    n_trajectories: usize,
    seed: u64,
) -> Result<StochasticEstimate> {
    let n = coupling.dim();
    if n_trajectories == 0 {
        return Err(invalid("n_trajectories", "must be nonzero"));
    }
    if n_trajectories < MIN_TRAJECTORIES {
        return Err(invalid("n_trajectories", "at least 100 trajectories are required"));
    }
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
    if !(omega.is_finite() && omega >= 0.0) {
        return Err(invalid("omega", "must be finite and non-negative"));
    }

    let (c, s) = (lo.theta().cos(), lo.theta().sin());
    let mut quadratures = Vec::new();
    for (sign, amplitude) in [(1.0, c), (-1.0, s)] {
        if amplitude * amplitude > 1e-30 {
            quadratures.push(Quadrature::new(coupling, sigma, sign, amplitude)?);
        }
    }
    let slowest = quadratures
        .iter()
        .map(|q| q.slowest)
        .fold(f64::INFINITY, f64::min);
    let horizon = (HORIZON_RELAXATIONS / (gamma_s * slowest)).max(MIN_HORIZON_GAMMA / gamma_s);
    let mut dt = STEP_GAMMA / gamma_s;
    if omega > 0.0 {
        dt = dt.min(STEP_GAMMA / omega);
    }
    let steps = (horizon / dt).ceil() as usize;
    let dt = horizon / steps as f64;

    let window: Vec<f64> = (0..steps)
        .map(|i| {
            let x = (PI * (i as f64 + 0.5) / steps as f64).sin();
            x * x
        })
        .collect();
    let window_energy: f64 = window.iter().map(|w| w * w).sum::<f64>() * dt;
    let rotation = Complex64::from_polar(1.0, -omega * dt);
    let start_phase = Complex64::from_polar(1.0, -0.5 * omega * dt);

    let e = lo.coefficients();
    let noise_scale = (2.0 * gamma_s).sqrt();
    let sqrt_dt = dt.sqrt();
    let mut x = vec![vec![0.0; n]; quadratures.len()];
    let mut ax = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut samples = Vec::with_capacity(n_trajectories);

    for traj in 0..n_trajectories {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(traj as u64);

        for (q, state) in quadratures.iter().zip(x.iter_mut()) {
            for zi in z.iter_mut() {
                *zi = rng.sample(StandardNormal);
            }
            for i in 0..n {
                state[i] = (0..=i).map(|k| q.stationary_chol[i * n + k] * z[k]).sum();
            }
        }

        let mut acc = Complex64::new(0.0, 0.0);
        let mut phase = start_phase;
        for &w in &window {
            let mut current = 0.0;
            for (q, state) in quadratures.iter().zip(x.iter_mut()) {
                for zi in z.iter_mut() {
                    let g: f64 = rng.sample(StandardNormal);
                    *zi = g * sqrt_dt;
                }
                let mut out = 0.0;
                for i in 0..n {
                    out += e[i] * (noise_scale * state[i] * dt - z[i]);
                }
                current += q.amplitude * out;
                for i in 0..n {
                    let row = &q.restoring[i * n..(i + 1) * n];
                    ax[i] = row.iter().zip(state.iter()).map(|(a, b)| a * b).sum();
                }
                for i in 0..n {
                    state[i] += -gamma_s * ax[i] * dt + noise_scale * z[i];
                }
            }
            acc += phase * (w * current);
            phase *= rotation;
        }
        samples.push(acc.norm_sqr() / window_energy);
    }

    let count = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / count;
    let var = samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1.0);
    Ok(StochasticEstimate {
        estimate: mean,
        standard_error: (var / count).sqrt(),
        trajectories: n_trajectories,
    })
}
