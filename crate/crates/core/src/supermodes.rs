//! Eigendecomposition of the coupling matrix into supermodes, their branch
//! decay rates and the synchronously pumped oscillation threshold.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_traits::Float;

use crate::comb::ModeWindow;
use crate::coupling::CouplingMatrix;
use crate::error::{invalid, Error, Result};

/// Eigenvalues whose magnitudes differ by less than this (relative to the
/// largest) are ordered by sign, then by solver order.
const TIE_TOLERANCE: f64 = 1e-12;

/// Accepted eigen-residual relative to the Frobenius norm of the kernel.
const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Supermodes sorted by descending `|Λ_k|`.
///
/// Eigenvectors are orthonormal and sign-fixed so that their largest-magnitude
/// component is positive. Inside a degenerate eigenspace (notably the null
/// space of a rank-deficient kernel) the basis is whatever the solver returned
/// and is not unique.
#[derive(Debug, Clone, PartialEq)]
pub struct SupermodeSet {
    window: ModeWindow,
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<Vec<f64>>,
}

impl SupermodeSet {
    pub fn window(&self) -> ModeWindow {
        self.window
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, k: usize) -> f64 {
        self.eigenvalues[k]
    }

    /// Components `L_{k,m}` in window order.
    pub fn eigenvector(&self, k: usize) -> &[f64] {
        &self.eigenvectors[k]
    }

    pub fn eigenvectors(&self) -> &[Vec<f64>] {
        &self.eigenvectors
    }

    /// `|Λ_0|`.
    pub fn lambda0_abs(&self) -> f64 {
        self.eigenvalues[0].abs()
    }

    /// Sign of the dominant eigenvalue: `1.0` or `-1.0` (`0.0` for a zero kernel).
    pub fn lambda0_sign(&self) -> f64 {
        let l0 = self.eigenvalues[0];
        if l0 > 0.0 {
            1.0
        } else if l0 < 0.0 {
            -1.0
        } else {
            0.0
        }
    }

    /// Signed `Λ_k / |Λ_0|`.
    pub fn ratio(&self, k: usize) -> Result<f64> {
        let l0 = self.lambda0_abs();
        if l0 == 0.0 {
            return Err(Error::ZeroCoupling);
        }
        Ok(self.eigenvalues[k] / l0)
    }

    /// `r = sigma |Λ_0|`.
    pub fn pumping_rate(&self, sigma: f64) -> Result<f64> {
        crate::params::pumping_rate(sigma, self.lambda0_abs()).map_err(|e| match e {
            Error::InvalidParameter { name: "lambda0", .. } => Error::ZeroCoupling,
            other => other,
        })
    }

    /// Largest `‖L v_k − Λ_k v_k‖` over all supermodes.
    pub fn max_residual(&self, coupling: &CouplingMatrix) -> f64 {
        let n = self.len();
        let mut lv = vec![0.0; n];
        let mut worst = 0.0f64;
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            coupling.apply(v, &mut lv);
            let r: f64 = lv
                .iter()
                .zip(v)
                .map(|(a, b)| (a - lambda * b) * (a - lambda * b))
                .sum();
            worst = worst.max(r.sqrt());
        }
        worst
    }

    /// Largest deviation of the Gram matrix of the eigenvectors from identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.eigenvectors.iter().enumerate() {
            for (j, b) in self.eigenvectors.iter().enumerate().skip(i) {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Full real-symmetric eigendecomposition of the coupling kernel.
pub fn decompose(coupling: &CouplingMatrix) -> Result<SupermodeSet> {
    let n = coupling.dim();
    let max_iter = 1000 + 100 * n;
    let eig = nalgebra::SymmetricEigen::try_new(coupling.to_dmatrix(), f64::EPSILON, max_iter)
        .ok_or(Error::NoConvergence {
            residual: f64::INFINITY,
        })?;

    let raw: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let order = sort_order(&raw);
    let eigenvalues: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&i| {
            let mut v: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
            fix_sign(&mut v);
            v
        })
        .collect();

    let set = SupermodeSet {
        window: coupling.window(),
        eigenvalues,
        eigenvectors,
    };
    let residual = set.max_residual(coupling);
    let scale = coupling.frobenius_norm().max(f64::MIN_POSITIVE);
    if !(residual <= RESIDUAL_TOLERANCE * scale) {
        return Err(Error::NoConvergence { residual });
    }
    Ok(set)
}

fn sort_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].abs().total_cmp(&values[a].abs()).then(a.cmp(&b)));
    let tol = TIE_TOLERANCE * values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut start = 0;
    while start < order.len() {
        let head = values[order[start]].abs();
        let mut end = start + 1;
        while end < order.len() && head - values[order[end]].abs() <= tol {
            end += 1;
        }
        order[start..end].sort_by(|&a, &b| {
            let pa = values[a] > 0.0;
            let pb = values[b] > 0.0;
            match (pa, pb) {
                (true, false) => Ordering::Less,
                (false, true) => Ordering::Greater,
                _ => a.cmp(&b),
            }
        });
        start = end;
    }
    order
}

fn fix_sign(v: &mut [f64]) {
    let mut pivot = 0.0f64;
    for x in v.iter() {
        if x.abs() > pivot.abs() {
            pivot = *x;
        }
    }
    if pivot < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Growth rates of the in-phase (`+`) and quadrature (`−`) eigen-spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchRates {
    /// `γs (−1 + σ Λ_k)` (rad/s).
    pub plus: Vec<f64>,
    /// `γs (−1 − σ Λ_k)` (rad/s).
    pub minus: Vec<f64>,
}

pub fn branch_rates(set: &SupermodeSet, sigma: f64, gamma_s: f64) -> BranchRates {
    let plus = set
        .eigenvalues
        .iter()
        .map(|l| gamma_s * (-1.0 + sigma * l))
        .collect();
    let minus = set
        .eigenvalues
        .iter()
        .map(|l| gamma_s * (-1.0 - sigma * l))
        .collect();
    BranchRates { plus, minus }
}

/// Oscillation threshold `P0 / Λ_0²`.
pub fn spopo_threshold(p0: f64, set: &SupermodeSet) -> Result<f64> {
    if !(p0.is_finite() && p0 > 0.0) {
        return Err(invalid("P0", "must be finite and strictly positive"));
    }
    let l0 = set.lambda0_abs();
    if l0 == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    Ok(p0 / (l0 * l0))
}

pub fn is_below_threshold(r: f64) -> bool {
    r < 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::PumpSpectrum;
    use crate::phase_matching::{DispersionParams, PhaseMatchModel};

    fn exchange(half: usize) -> CouplingMatrix {
        CouplingMatrix::from_upper(ModeWindow::new(half), |m, q| if m == -q { 1.0 } else { 0.0 })
    }

    /// Small deterministic generator for test matrices.
    struct Lcg(u64);
    impl Lcg {
        fn next(&mut self) -> f64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((self.0 >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        }
    }

    fn random_symmetric(half: usize, seed: u64) -> CouplingMatrix {
        let mut rng = Lcg(seed);
        CouplingMatrix::from_upper(ModeWindow::new(half), |_, _| rng.next())
    }

    // Brute-force oracle: determinant by elimination, roots by scan + bisection,
    // eigenvectors from the adjugate of (A − λI).
    fn det(a: &[Vec<f64>]) -> f64 {
        let n = a.len();
        let mut m: Vec<Vec<f64>> = a.to_vec();
        let mut d = 1.0;
        for c in 0..n {
            let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
            if m[p][c] == 0.0 {
                return 0.0;
            }
            if p != c {
                m.swap(p, c);
                d = -d;
            }
            d *= m[c][c];
            for r in c + 1..n {
                let f = m[r][c] / m[c][c];
                for k in c..n {
                    m[r][k] -= f * m[c][k];
                }
            }
        }
        d
    }

    fn shifted(a: &CouplingMatrix, x: f64) -> Vec<Vec<f64>> {
        let n = a.dim();
        (0..n)
            .map(|i| (0..n).map(|j| a.at(i, j) - if i == j { x } else { 0.0 }).collect())
            .collect()
    }

    fn brute_force_eigenpairs(a: &CouplingMatrix) -> Vec<(f64, Vec<f64>)> {
        let n = a.dim();
        let bound = (0..n)
            .map(|i| (0..n).map(|j| a.at(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
            + 1e-3;
        let steps = 400_000;
        let f = |x: f64| det(&shifted(a, x));
        let mut roots = Vec::new();
        let mut prev_x = -bound;
        let mut prev = f(prev_x);
        for s in 1..=steps {
            let x = -bound + 2.0 * bound * s as f64 / steps as f64;
            let fx = f(x);
            if prev.signum() != fx.signum() {
                let (mut lo, mut hi, mut flo) = (prev_x, x, prev);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let fm = f(mid);
                    if fm.signum() == flo.signum() {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
            prev_x = x;
            prev = fx;
        }
        roots
            .into_iter()
            .map(|lambda| {
                let m = shifted(a, lambda);
                let mut best = vec![0.0; n];
                let mut best_norm = 0.0;
                for col in 0..n {
                    // column `col` of adj(M): cofactors C(col, i)
                    let v: Vec<f64> = (0..n)
                        .map(|i| {
                            let minor: Vec<Vec<f64>> = (0..n)
                                .filter(|&r| r != col)
                                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c]).collect())
                                .collect();
                            let sign = if (i + col) % 2 == 0 { 1.0 } else { -1.0 };
                            sign * det(&minor)
                        })
                        .collect();
                    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if norm > best_norm {
                        best_norm = norm;
                        best = v;
                    }
                }
                for x in &mut best {
                    *x /= best_norm;
                }
                (lambda, best)
            })
            .collect()
    }

    #[test]
    fn exchange_matrix_spectrum() {
        for half in [0usize, 1, 4, 17, 50] {
            let set = decompose(&exchange(half)).unwrap();
            let n = 2 * half + 1;
            assert_eq!(set.len(), n);
            for (k, l) in set.eigenvalues().iter().enumerate() {
                let expected = if k <= half { 1.0 } else { -1.0 };
                assert!((l - expected).abs() < 1e-12, "half {half} k {k}: {l}");
            }
            assert!((set.lambda0_abs() - 1.0).abs() < 1e-12);
            assert_eq!(set.lambda0_sign(), 1.0);
        }
    }

    #[test]
    fn optimized_rank_one_case() {
        let delta_p = 20.0;
        let beta2p = 1e-3;
        let eta = 1.0 / (beta2p * delta_p * delta_p);
        let window = ModeWindow::new(120);
        let pump = PumpSpectrum::gaussian(delta_p, ModeWindow::new(240)).unwrap();
        let l = CouplingMatrix::build(
            &pump,
            &DispersionParams::matched(beta2p).unwrap(),
            PhaseMatchModel::exponential(eta).unwrap(),
            window,
        )
        .unwrap();
        let set = decompose(&l).unwrap();
        // π^{1/4} √10
        let expected = 4.210_052_079_138_115;
        assert!((set.lambda0_abs() / expected - 1.0).abs() < 0.01);
        for l in &set.eigenvalues()[1..] {
            assert!(l.abs() < 1e-8 * set.lambda0_abs());
        }
        assert_eq!(set.lambda0_sign(), 1.0);
    }

    #[test]
    fn matches_brute_force_oracle() {
        for seed in 1..=6u64 {
            let a = random_symmetric(2, seed);
            let set = decompose(&a).unwrap();
            let mut oracle = brute_force_eigenpairs(&a);
            assert_eq!(oracle.len(), 5, "seed {seed}: oracle missed a root");
            oracle.sort_by(|x, y| y.0.abs().total_cmp(&x.0.abs()));
            for (k, (lambda, v)) in oracle.iter().enumerate() {
                assert!((set.eigenvalue(k) - lambda).abs() < 1e-9, "seed {seed} k {k}");
                let dot: f64 = set.eigenvector(k).iter().zip(v).map(|(a, b)| a * b).sum();
                assert!((dot.abs() - 1.0).abs() < 1e-9, "seed {seed} k {k}: {dot}");
            }
        }
    }

    #[test]
    fn decomposition_invariants_and_reconstruction() {
        for seed in 10..20u64 {
            let a = random_symmetric(7, seed);
            let set = decompose(&a).unwrap();
            let n = a.dim();
            assert!(set.max_residual(&a) < 1e-10 * a.frobenius_norm());
            assert!(set.orthonormality_error() < 1e-12);
            for k in 1..n {
                assert!(set.eigenvalue(k - 1).abs() >= set.eigenvalue(k).abs());
            }
            let mut err = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let rebuilt: f64 = (0..n)
                        .map(|k| set.eigenvalue(k) * set.eigenvector(k)[i] * set.eigenvector(k)[j])
                        .sum();
                    err += (rebuilt - a.at(i, j)).powi(2);
                }
            }
            assert!(err.sqrt() < 1e-9 * a.frobenius_norm());
        }
    }

    #[test]
    fn negative_dominant_eigenvalue_is_reported() {
        let a = CouplingMatrix::from_upper(ModeWindow::new(1), |m, q| {
            if m == q {
                [-3.0, 1.0, 0.5][(m + 1) as usize]
            } else {
                0.0
            }
        });
        let set = decompose(&a).unwrap();
        assert_eq!(set.eigenvalues(), &[-3.0, 1.0, 0.5]);
        assert_eq!(set.lambda0_sign(), -1.0);
        assert_eq!(set.lambda0_abs(), 3.0);
        assert!((set.ratio(1).unwrap() - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn zero_kernel() {
        let set = decompose(&CouplingMatrix::from_upper(ModeWindow::new(2), |_, _| 0.0)).unwrap();
        assert_eq!(set.lambda0_abs(), 0.0);
        assert_eq!(spopo_threshold(1.0, &set), Err(Error::ZeroCoupling));
        assert_eq!(set.pumping_rate(0.1), Err(Error::ZeroCoupling));
    }

    #[test]
    fn branch_rate_examples() {
        let set = decompose(&random_symmetric(3, 99)).unwrap();
        let gamma = 2.5;
        let rates = branch_rates(&set, 0.0, gamma);
        assert!(rates.plus.iter().chain(&rates.minus).all(|r| *r == -gamma));

        let sigma = 1.0 / set.eigenvalue(0);
        let rates = branch_rates(&set, sigma, gamma);
        assert!(rates.plus[0].abs() < 1e-15);
        assert!((rates.minus[0] + 2.0 * gamma).abs() < 1e-14);

        let sigma = 0.5 / set.lambda0_abs();
        let rates = branch_rates(&set, sigma, gamma);
        for r in rates.plus.iter().chain(&rates.minus) {
            assert!(*r >= -1.5 * gamma - 1e-14 && *r <= -0.5 * gamma + 1e-14);
        }
    }

    #[test]
    fn threshold_examples() {
        let cw = decompose(&exchange(3)).unwrap();
        assert!((spopo_threshold(2.0, &cw).unwrap() / 2.0 - 1.0).abs() < 1e-12);
        // Λ_0² = √π Δp / 2 at Δp = 100 gives P0 / 88.62...
        let l = CouplingMatrix::from_upper(ModeWindow::new(0), |_, _| (core::f64::consts::PI.sqrt() * 50.0).sqrt());
        let set = decompose(&l).unwrap();
        let pthr = spopo_threshold(1.0, &set).unwrap();
        assert!((1.0 / pthr - 88.622_692_545_275_8).abs() < 1e-9);
        assert!(spopo_threshold(0.0, &set).is_err());
    }

    #[test]
    fn below_threshold_predicate() {
        assert!(is_below_threshold(0.99));
        assert!(!is_below_threshold(1.0));
        assert!(is_below_threshold(0.0));
    }

    #[test]
    fn ties_prefer_positive_then_solver_order() {
        let order = sort_order(&[-1.0, 0.5, 1.0, -1.0 + 1e-14, 1.0]);
        assert_eq!(order, vec![2, 4, 0, 3, 1]);
    }
}
