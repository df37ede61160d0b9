//! Dense real symmetric coupling matrix between signal modes.

use alloc::vec;
use alloc::vec::Vec;

use crate::comb::{ModeWindow, PumpSpectrum};
use crate::error::{Error, Result};
use crate::phase_matching::{mismatch_angle, pm_factor, DispersionParams, PhaseMatchModel};

/// `L(m, q) = f(phi(m, q)) * alpha(m + q)` over a mode window, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    window: ModeWindow,
    entries: Vec<f64>,
}

impl CouplingMatrix {
    /// Assemble the coupling kernel. Pump indices `m + q` outside the pump's
    /// own window contribute zero.
    pub fn build(
        pump: &PumpSpectrum,
        dispersion: &DispersionParams,
        model: PhaseMatchModel,
        window: ModeWindow,
    ) -> Result<Self> {
        model.validate()?;
        let reach = 2 * window.half_width() as i64;
        let overlaps = pump
            .window()
            .indices()
            .zip(pump.alpha())
            .any(|(m, a)| m.abs() <= reach && *a != 0.0);
        if !overlaps {
            return Err(Error::NoPumpOverlap { reach });
        }
        Ok(Self::from_upper(window, |m, q| {
            pm_factor(mismatch_angle(m, q, dispersion), model) * pump.amplitude(m + q)
        }))
    }

    /// Fill the upper triangle (`q >= m`, by mode index) from `f` and mirror it.
    pub fn from_upper(window: ModeWindow, mut f: impl FnMut(i64, i64) -> f64) -> Self {
        let n = window.len();
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(window.index_at(i), window.index_at(j));
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        Self { window, entries }
    }

    /// From a full row-major matrix; only the upper triangle is read.
    pub fn from_row_major(window: ModeWindow, values: &[f64]) -> Result<Self> {
        let n = window.len();
        if values.len() != n * n {
            return Err(Error::WindowMismatch {
                expected: n * n,
                found: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(crate::error::invalid("entries", "must be finite"));
        }
        let lo = window.min_index();
        Ok(Self::from_upper(window, |m, q| {
            values[(m - lo) as usize * n + (q - lo) as usize]
        }))
    }

    pub fn window(&self) -> ModeWindow {
        self.window
    }

    pub fn dim(&self) -> usize {
        self.window.len()
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    /// Entry by storage position.
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim() + j]
    }

    /// Entry by mode index; `None` outside the window.
    pub fn get(&self, m: i64, q: i64) -> Option<f64> {
        let i = self.window.position(m)?;
        let j = self.window.position(q)?;
        Some(self.at(i, j))
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.dim();
        &self.entries[i * n..(i + 1) * n]
    }

    pub fn frobenius_norm(&self) -> f64 {
        crate::comb::l2_norm(&self.entries)
    }

    /// `y = L x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    pub(crate) fn to_dmatrix(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.dim(), self.dim(), &self.entries)
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self.to_dmatrix().singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Count of singular values above `rel_tol` times the largest.
    pub fn numerical_rank(&self, rel_tol: f64) -> usize {
        let sv = self.singular_values();
        match sv.first() {
            Some(&top) if top > 0.0 => sv.iter().filter(|s| **s > rel_tol * top).count(),
            _ => 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_mode_pump() -> PumpSpectrum {
        PumpSpectrum::custom(vec![1.0]).unwrap()
    }

    #[test]
    fn single_mode_pump_gives_exchange_matrix() {
        let window = ModeWindow::new(6);
        let l = CouplingMatrix::build(
            &single_mode_pump(),
            &DispersionParams::default(),
            PhaseMatchModel::Sinc,
            window,
        )
        .unwrap();
        for m in window.indices() {
            for q in window.indices() {
                let expected = if q == -m { 1.0 } else { 0.0 };
                assert_eq!(l.get(m, q).unwrap(), expected);
            }
        }
    }

    #[test]
    fn optimized_case_is_separable_rank_one() {
        let delta_p = 6.0;
        let beta2p = 0.01;
        let eta = 1.0 / (beta2p * delta_p * delta_p);
        let window = ModeWindow::new(36);
        let pump = PumpSpectrum::gaussian(delta_p, ModeWindow::new(72)).unwrap();
        let l = CouplingMatrix::build(
            &pump,
            &DispersionParams::matched(beta2p).unwrap(),
            PhaseMatchModel::exponential(eta).unwrap(),
            window,
        )
        .unwrap();
        let peak = l.get(0, 0).unwrap();
        for m in window.indices() {
            for q in window.indices() {
                let expected = peak * (-((m * m + q * q) as f64) / (delta_p * delta_p)).exp();
                assert!((l.get(m, q).unwrap() - expected).abs() < 1e-14);
            }
        }
        let sv = l.singular_values();
        assert!(sv[1] < 1e-10 * sv[0]);
        assert_eq!(l.numerical_rank(1e-10), 1);
    }

    #[test]
    fn mismatched_width_is_not_rank_one() {
        let delta_p = 6.0;
        let beta2p = 0.01;
        let eta = 2.0 / (beta2p * delta_p * delta_p);
        let pump = PumpSpectrum::gaussian(delta_p, ModeWindow::new(72)).unwrap();
        let l = CouplingMatrix::build(
            &pump,
            &DispersionParams::matched(beta2p).unwrap(),
            PhaseMatchModel::exponential(eta).unwrap(),
            ModeWindow::new(36),
        )
        .unwrap();
        assert!(l.numerical_rank(1e-10) > 1);
    }

    #[test]
    fn pump_outside_reach_rejected() {
        let mut coeffs = vec![0.0; 41];
        coeffs[0] = 1.0; // m = -20
        let pump = PumpSpectrum::custom(coeffs).unwrap();
        let err = CouplingMatrix::build(
            &pump,
            &DispersionParams::default(),
            PhaseMatchModel::Sinc,
            ModeWindow::new(3),
        );
        assert_eq!(err, Err(Error::NoPumpOverlap { reach: 6 }));
        // Reachable once the window grows.
        assert!(CouplingMatrix::build(
            &pump,
            &DispersionParams::default(),
            PhaseMatchModel::Sinc,
            ModeWindow::new(10),
        )
        .is_ok());
    }

    #[test]
    fn from_row_major_reads_upper_triangle() {
        let l = CouplingMatrix::from_row_major(ModeWindow::new(1), &[1., 2., 3., 9., 4., 5., 9., 9., 6.])
            .unwrap();
        assert_eq!(l.as_slice(), &[1., 2., 3., 2., 4., 5., 3., 5., 6.]);
        assert!(CouplingMatrix::from_row_major(ModeWindow::new(1), &[1.0; 4]).is_err());
    }

    proptest::proptest! {
        #[test]
        fn symmetric_and_bounded(
            coeffs in proptest::collection::vec(-1.0f64..1.0, 1..15usize),
            b1 in -0.5f64..0.5, b2p in -0.05f64..0.05, b2s in -0.05f64..0.05,
            half in 0usize..8, use_sinc in proptest::bool::ANY, eta in 0.1f64..5.0,
        ) {
            let mut coeffs = coeffs;
            if coeffs.len() % 2 == 0 { coeffs.push(0.3); }
            let mid = coeffs.len() / 2;
            coeffs[mid] = 1.0;
            let pump = PumpSpectrum::custom(coeffs).unwrap();
            let model = if use_sinc { PhaseMatchModel::Sinc } else { PhaseMatchModel::exponential(eta).unwrap() };
            let d = DispersionParams::new(b1, b2p, b2s).unwrap();
            let l = CouplingMatrix::build(&pump, &d, model, ModeWindow::new(half)).unwrap();
            let n = l.dim();
            for i in 0..n {
                for j in 0..n {
                    proptest::prop_assert_eq!(l.at(i, j).to_bits(), l.at(j, i).to_bits());
                    proptest::prop_assert!(l.at(i, j).is_finite());
                }
            }
            proptest::prop_assert!(l.frobenius_norm() <= (n as f64).sqrt() + 1e-12);
        }
    }
}
