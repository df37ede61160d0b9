//! Deterministic mean-field integration: `ds/dt = −γs s + γs σ L s*`, started
//! on a supermode, with the decay rate fitted from the log-amplitude.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

use crate::coupling::CouplingMatrix;
use crate::error::{invalid, Error, Result};
use crate::squeezing::Branch;
use crate::supermodes::decompose;

/// Largest RK4 step in units of `1/γs`.
pub const MAX_STEP_GAMMA: f64 = 0.01;

fn drift(coupling: &CouplingMatrix, sigma: f64, gamma_s: f64, s: &[Complex64], out: &mut [Complex64]) {
    for (i, o) in out.iter_mut().enumerate() {
        let row = coupling.row(i);
        let mut acc = Complex64::new(0.0, 0.0);
        for (l, z) in row.iter().zip(s) {
            acc += z.conj() * *l;
        }
        *o = -s[i] * gamma_s + acc * (gamma_s * sigma);
    }
}

/// Classical fixed-step RK4. `observer` sees the state at every step,
/// including the initial one.
pub fn integrate_mean_field(
    coupling: &CouplingMatrix,
    sigma: f64,
    gamma_s: f64,
    initial: &[Complex64],
    dt: f64,
    steps: usize,
    mut observer: impl FnMut(f64, &[Complex64]),
) -> Result<Vec<Complex64>> {
    let n = coupling.dim();
    if initial.len() != n {
        return Err(Error::WindowMismatch {
            expected: n,
            found: initial.len(),
        });
    }
    let mut s = initial.to_vec();
    let zero = Complex64::new(0.0, 0.0);
    let (mut k1, mut k2, mut k3, mut k4) = (vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]);
    let mut tmp = vec![zero; n];
    observer(0.0, &s);
    for step in 0..steps {
        drift(coupling, sigma, gamma_s, &s, &mut k1);
        for i in 0..n {
            tmp[i] = s[i] + k1[i] * (0.5 * dt);
        }
        drift(coupling, sigma, gamma_s, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = s[i] + k2[i] * (0.5 * dt);
        }
        drift(coupling, sigma, gamma_s, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = s[i] + k3[i] * dt;
        }
        drift(coupling, sigma, gamma_s, &tmp, &mut k4);
        for i in 0..n {
            s[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
        }
        observer((step + 1) as f64 * dt, &s);
    }
    Ok(s)
}

/// Least-squares slope of `ln ‖s(t)‖` over `[0, horizon]`.
pub fn fit_decay_rate(
    coupling: &CouplingMatrix,
    sigma: f64,
    gamma_s: f64,
    initial: &[Complex64],
    horizon: f64,
) -> Result<f64> {
    if !(gamma_s.is_finite() && gamma_s > 0.0) {
        return Err(invalid("gamma_s", "must be finite and strictly positive"));
    }
    if !(horizon.is_finite() && horizon >= 3.0 / gamma_s) {
        return Err(invalid("horizon", "must be at least 3 / gamma_s"));
    }
    let steps = (horizon * gamma_s / MAX_STEP_GAMMA).ceil() as usize;
    let dt = horizon / steps as f64;
    let (mut sx, mut sy, mut sxx, mut sxy, mut count) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut degenerate = false;
    integrate_mean_field(coupling, sigma, gamma_s, initial, dt, steps, |t, s| {
        let norm = s.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            degenerate = true;
            return;
        }
        let y = norm.ln();
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        count += 1.0;
    })?;
    if degenerate {
        return Err(invalid("initial", "amplitude vanished or diverged during integration"));
    }
    Ok((count * sxy - sx * sy) / (count * sxx - sx * sx))
}

/// Fitted rate of supermode `k` on the given branch; the `−` branch starts
/// from `i L_k`.
pub fn time_domain_decay(
    coupling: &CouplingMatrix,
    sigma: f64,
    gamma_s: f64,
    k: usize,
    branch: Branch,
    horizon: f64,
) -> Result<f64> {
    let set = decompose(coupling)?;
    if k >= set.len() {
        return Err(invalid("k", "supermode index out of range"));
    }
    let r = sigma * set.lambda0_abs();
    if r >= 1.0 {
        return Err(Error::AboveThreshold { r });
    }
    let phase = match branch {
        Branch::Plus => Complex64::new(1.0, 0.0),
        Branch::Minus => Complex64::new(0.0, 1.0),
    };
    let initial: Vec<Complex64> = set.eigenvector(k).iter().map(|&x| phase * x).collect();
    fit_decay_rate(coupling, sigma, gamma_s, &initial, horizon)
}
