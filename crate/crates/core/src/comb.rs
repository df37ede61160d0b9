//! Truncated longitudinal-mode window and the normalized pump comb.

use alloc::vec::Vec;
use num_traits::Float;

use crate::error::{invalid, Result};

/// Symmetric range of mode indices `-M..=M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeWindow {
    half_width: usize,
}

impl ModeWindow {
    pub const fn new(half_width: usize) -> Self {
        Self { half_width }
    }

    /// `ceil(6 * delta_p)`: the Gaussian tail is below 1e-7 of the peak there.
    pub fn default_for_width(delta_p: f64) -> Self {
        Self::new((6.0 * delta_p).ceil().max(1.0) as usize)
    }

    /// Window of the given (odd) number of modes.
    pub fn from_len(len: usize) -> Result<Self> {
        if len % 2 == 0 {
            return Err(invalid("window", "number of modes must be odd"));
        }
        Ok(Self::new(len / 2))
    }

    pub const fn half_width(&self) -> usize {
        self.half_width
    }

    pub const fn len(&self) -> usize {
        2 * self.half_width + 1
    }

    pub const fn is_empty(&self) -> bool {
        false
    }

    pub fn min_index(&self) -> i64 {
        -(self.half_width as i64)
    }

    pub fn max_index(&self) -> i64 {
        self.half_width as i64
    }

    pub fn indices(&self) -> impl DoubleEndedIterator<Item = i64> {
        self.min_index()..=self.max_index()
    }

    /// Storage position of mode `m`.
    pub fn position(&self, m: i64) -> Option<usize> {
        if m.unsigned_abs() as usize <= self.half_width {
            Some((m + self.half_width as i64) as usize)
        } else {
            None
        }
    }

    /// Mode index stored at position `i`.
    pub fn index_at(&self, i: usize) -> i64 {
        i as i64 - self.half_width as i64
    }
}

/// Real pump amplitudes `alpha_m` normalized to unit sum of squares.
#[derive(Debug, Clone, PartialEq)]
pub struct PumpSpectrum {
    window: ModeWindow,
    alpha: Vec<f64>,
    delta_p: Option<f64>,
}

impl PumpSpectrum {
    /// Gaussian comb `alpha_m ∝ exp(-m² / (2 delta_p²))`, renormalized on the
    /// truncated window.
    pub fn gaussian(delta_p: f64, window: ModeWindow) -> Result<Self> {
        if !(delta_p.is_finite() && delta_p > 0.0) {
            return Err(invalid("delta_p", "must be finite and strictly positive"));
        }
        if window.half_width() < 1 {
            return Err(invalid("window", "half-width must be at least 1"));
        }
        let inv = 1.0 / (2.0 * delta_p * delta_p);
        let raw: Vec<f64> = window
            .indices()
            .map(|m| (-((m * m) as f64) * inv).exp())
            .collect();
        let mut spectrum = Self::normalize(window, raw)?;
        spectrum.delta_p = Some(delta_p);
        Ok(spectrum)
    }

    /// Arbitrary real spectrum over a window inferred from the (odd) length.
    pub fn custom(coefficients: Vec<f64>) -> Result<Self> {
        let window = ModeWindow::from_len(coefficients.len())?;
        Self::normalize(window, coefficients)
    }

    fn normalize(window: ModeWindow, mut alpha: Vec<f64>) -> Result<Self> {
        if alpha.iter().any(|a| !a.is_finite()) {
            return Err(invalid("alpha", "coefficients must be finite"));
        }
        let norm = l2_norm(&alpha);
        if norm == 0.0 {
            return Err(invalid("alpha", "at least one coefficient must be nonzero"));
        }
        for a in &mut alpha {
            *a /= norm;
        }
        Ok(Self {
            window,
            alpha,
            delta_p: None,
        })
    }

    pub fn window(&self) -> ModeWindow {
        self.window
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn delta_p(&self) -> Option<f64> {
        self.delta_p
    }

    /// `alpha_m`, zero outside the window.
    pub fn amplitude(&self, m: i64) -> f64 {
        self.window.position(m).map_or(0.0, |i| self.alpha[i])
    }
}

/// Euclidean norm, scaled to avoid overflow.
pub(crate) fn l2_norm(v: &[f64]) -> f64 {
    let scale = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let sum: f64 = v.iter().map(|x| (x / scale) * (x / scale)).sum();
    scale * sum.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sum_sq(v: &[f64]) -> f64 {
        v.iter().map(|x| x * x).sum()
    }

    #[test]
    fn window_layout() {
        let w = ModeWindow::new(3);
        assert_eq!(w.len(), 7);
        assert_eq!(w.indices().collect::<Vec<_>>(), vec![-3, -2, -1, 0, 1, 2, 3]);
        assert_eq!(w.position(-3), Some(0));
        assert_eq!(w.position(4), None);
        assert_eq!(w.index_at(6), 3);
        assert!(ModeWindow::from_len(4).is_err());
        assert_eq!(ModeWindow::default_for_width(20.0).half_width(), 120);
    }

    #[test]
    fn gaussian_width_ratio() {
        let pump = PumpSpectrum::gaussian(4.0, ModeWindow::new(30)).unwrap();
        let ratio = pump.amplitude(4) / pump.amplitude(0);
        assert!((ratio - (-0.5f64).exp()).abs() < 1e-15);
        assert!((ratio - 0.60653).abs() < 1e-5);
        assert!((sum_sq(pump.alpha()) - 1.0).abs() < 1e-12);
        assert_eq!(pump.delta_p(), Some(4.0));
    }

    #[test]
    fn narrow_gaussian_is_single_mode() {
        let pump = PumpSpectrum::gaussian(0.3, ModeWindow::new(20)).unwrap();
        // exp(-1/0.18) ≈ 3.9e-3 for m = ±1, so alpha_0 = 1/sqrt(1 + 2·3.9e-3²·…)
        let side = (-1.0f64 / 0.18).exp();
        let expected = 1.0 / (1.0 + 2.0 * side * side).sqrt();
        assert!((pump.amplitude(0) - expected).abs() < 1e-12);
        assert!(pump.amplitude(0) >= 0.99);
    }

    #[test]
    fn gaussian_rejects_bad_inputs() {
        assert!(PumpSpectrum::gaussian(0.0, ModeWindow::new(5)).is_err());
        assert!(PumpSpectrum::gaussian(-1.0, ModeWindow::new(5)).is_err());
        assert!(PumpSpectrum::gaussian(1.0, ModeWindow::new(0)).is_err());
    }

    #[test]
    fn custom_examples() {
        let delta = PumpSpectrum::custom(vec![0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(delta.alpha(), &[0.0, 0.0, 1.0, 0.0, 0.0]);
        let uniform = PumpSpectrum::custom(vec![2.0; 5]).unwrap();
        for a in uniform.alpha() {
            assert!((a - 1.0 / 5.0f64.sqrt()).abs() < 1e-15);
        }
        assert!(PumpSpectrum::custom(vec![0.0; 5]).is_err());
        assert!(PumpSpectrum::custom(vec![1.0; 4]).is_err());
        assert!(PumpSpectrum::custom(vec![1.0, f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn truncation_barely_moves_center() {
        for delta_p in [1.0, 3.5, 10.0] {
            let m = (5.0 * delta_p).ceil() as usize;
            let narrow = PumpSpectrum::gaussian(delta_p, ModeWindow::new(m)).unwrap();
            let wide = PumpSpectrum::gaussian(delta_p, ModeWindow::new(4 * m)).unwrap();
            let rel = (narrow.amplitude(0) - wide.amplitude(0)).abs() / wide.amplitude(0);
            assert!(rel < 1e-10, "{delta_p}: {rel}");
        }
    }

    proptest::proptest! {
        #[test]
        fn custom_is_v_over_norm(v in proptest::collection::vec(-1e3f64..1e3, 1..20usize)) {
            let mut v = v;
            if v.len() % 2 == 0 { v.push(1.0); }
            proptest::prop_assume!(v.iter().any(|x| *x != 0.0));
            let mut norm_sq = 0.0;
            for x in &v { norm_sq += x * x; }
            let norm = norm_sq.sqrt();
            let pump = PumpSpectrum::custom(v.clone()).unwrap();
            for (a, x) in pump.alpha().iter().zip(&v) {
                proptest::prop_assert!((a - x / norm).abs() < 1e-14);
            }
            proptest::prop_assert!((sum_sq(pump.alpha()) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn gaussian_even_and_normalized(delta_p in 0.05f64..30.0, m in 1usize..200) {
            let pump = PumpSpectrum::gaussian(delta_p, ModeWindow::new(m)).unwrap();
            proptest::prop_assert!((sum_sq(pump.alpha()) - 1.0).abs() < 1e-12);
            for k in 0..=m as i64 {
                proptest::prop_assert_eq!(pump.amplitude(k), pump.amplitude(-k));
            }
        }
    }
}
