//! Small dense kernels used by the oracles. Kept separate from the eigensolver
//! backing the supermode route.

use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

/// Solve `A x = b` for a row-major complex `n × n` matrix by Gaussian
/// elimination with partial pivoting. `None` if a pivot vanishes relative to
/// the matrix scale.
pub(crate) fn solve_complex(mut a: Vec<Complex64>, n: usize, b: &[Complex64]) -> Option<Vec<Complex64>> {
    debug_assert_eq!(a.len(), n * n);
    let scale = a.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if scale == 0.0 {
        return None;
    }
    let tiny = 1e-14 * scale;
    let mut x: Vec<Complex64> = b.to_vec();
    for c in 0..n {
        let mut p = c;
        for r in c + 1..n {
            if a[r * n + c].norm() > a[p * n + c].norm() {
                p = r;
            }
        }
        if !(a[p * n + c].norm() > tiny) {
            return None;
        }
        if p != c {
            for k in 0..n {
                a.swap(p * n + k, c * n + k);
            }
            x.swap(p, c);
        }
        let pivot = a[c * n + c];
        for r in c + 1..n {
            let f = a[r * n + c] / pivot;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in c..n {
                let v = a[c * n + k];
                a[r * n + k] -= f * v;
            }
            let v = x[c];
            x[r] -= f * v;
        }
    }
    for c in (0..n).rev() {
        let mut acc = x[c];
        for k in c + 1..n {
            acc -= a[c * n + k] * x[k];
        }
        x[c] = acc / a[c * n + c];
    }
    Some(x)
}

/// Lower Cholesky factor of a symmetric positive-definite row-major matrix;
/// `None` if the matrix is not positive definite.
pub(crate) fn cholesky(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = alloc::vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if !(s > 0.0) {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Some(l)
}

/// Inverse of a symmetric positive-definite matrix from its Cholesky factor.
pub(crate) fn spd_inverse(chol: &[f64], n: usize) -> Vec<f64> {
    let mut inv = alloc::vec![0.0; n * n];
    let mut col = alloc::vec![0.0; n];
    for j in 0..n {
        // forward: L y = e_j
        for i in 0..n {
            let mut s = if i == j { 1.0 } else { 0.0 };
            for k in 0..i {
                s -= chol[i * n + k] * col[k];
            }
            col[i] = s / chol[i * n + i];
        }
        // backward: Lᵀ x = y
        for i in (0..n).rev() {
            let mut s = col[i];
            for k in i + 1..n {
                s -= chol[k * n + i] * col[k];
            }
            col[i] = s / chol[i * n + i];
        }
        for i in 0..n {
            inv[i * n + j] = col[i];
        }
    }
    // exact symmetry
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (inv[i * n + j] + inv[j * n + i]);
            inv[i * n + j] = v;
            inv[j * n + i] = v;
        }
    }
    inv
}
