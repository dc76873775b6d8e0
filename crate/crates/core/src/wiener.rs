//! Elements of the Wiener algebra as finitely supported coefficient sequences,
//! and the pairing of bounded signals against them.
//!
//! A [`WienerFunction`] stores `f_k` for `k` in a contiguous index range and
//! represents `f(w) = sum_k f_k exp(i w k)`. The pairing convention is anchored
//! by `<X, exp(i . t)> = x(t)`: the coefficient of `exp(i w t)` multiplies
//! `x(t)`.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::signal::SignalSource;

#[derive(Debug, Clone, PartialEq)]
pub struct WienerFunction {
    offset: i64,
    coeffs: Vec<Complex64>,
    norm_a: f64,
}

impl WienerFunction {
    /// Builds from `(k, f_k)` pairs. Indices not listed are zero; repeated
    /// indices are rejected.
    pub fn new<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let pairs: Vec<(i64, Complex64)> = pairs.into_iter().collect();
        if pairs.is_empty() {
            return Ok(Self::zero());
        }
        let lo = pairs.iter().map(|p| p.0).min().unwrap();
        let hi = pairs.iter().map(|p| p.0).max().unwrap();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        let mut seen = vec![false; coeffs.len()];
        for (k, v) in pairs {
            let pos = (k - lo) as usize;
            if seen[pos] {
                return Err(Error::InvalidParameter(format!(
                    "coefficient index {k} given twice"
                )));
            }
            seen[pos] = true;
            coeffs[pos] = v;
        }
        Self::from_dense(lo, coeffs)
    }

    /// Builds from a dense run of coefficients starting at index `offset`.
    pub fn from_dense(offset: i64, coeffs: Vec<Complex64>) -> Result<Self> {
        if let Some(pos) = coeffs
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::NonFiniteCoefficient {
                index: offset + pos as i64,
            });
        }
        let norm_a = coeffs.iter().map(|c| c.norm()).sum();
        Ok(WienerFunction {
            offset,
            coeffs,
            norm_a,
        })
    }

    pub fn zero() -> Self {
        WienerFunction {
            offset: 0,
            coeffs: Vec::new(),
            norm_a: 0.0,
        }
    }

    /// exp(i w t), the element dual to evaluation at time t.
    pub fn basis(t: i64) -> Self {
        WienerFunction {
            offset: t,
            coeffs: vec![Complex64::new(1.0, 0.0)],
            norm_a: 1.0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index range of the stored coefficients, `None` when empty.
    pub fn support(&self) -> Option<RangeInclusive<i64>> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.offset..=self.offset + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        let pos = k - self.offset;
        if pos < 0 || pos >= self.coeffs.len() as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[pos as usize]
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Iterates over stored `(k, f_k)` pairs, zeros included.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.offset + i as i64, *c))
    }

    /// The Wiener norm sum_k |f_k|.
    pub fn norm_a(&self) -> f64 {
        self.norm_a
    }

    /// f(w) = sum_k f_k exp(i w k).
    pub fn evaluate(&self, omega: f64) -> Complex64 {
        self.iter()
            .map(|(k, c)| c * Complex64::from_polar(1.0, omega * k as f64))
            .sum()
    }

    /// f on the N-point grid w_j = -pi + 2 pi j / N, via one FFT.
    pub fn evaluate_on_grid(&self, n: usize) -> Result<Vec<Complex64>> {
        crate::quadrature::check_size(n)?;
        // exp(i w_j k) = (-1)^k exp(2 pi i j k / N); fold k mod N.
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (k, c) in self.iter() {
            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            buf[k.rem_euclid(n as i64) as usize] += c * sign;
        }
        rustfft::FftPlanner::new()
            .plan_fft_inverse(n)
            .process(&mut buf);
        Ok(buf)
    }

    /// Pointwise product, i.e. the full discrete convolution of coefficients.
    pub fn product(&self, other: &WienerFunction) -> WienerFunction {
        if self.is_empty() || other.is_empty() {
            return Self::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        let norm_a = out.iter().map(|c| c.norm()).sum();
        WienerFunction {
            offset: self.offset + other.offset,
            coeffs: out,
            norm_a,
        }
    }

    /// (sum_k (1 + k^2) |f_k|^2)^(1/2).
    pub fn sobolev_norm(&self) -> f64 {
        self.iter()
            .map(|(k, c)| (1.0 + (k as f64).powi(2)) * c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Upper bound on the Wiener norm from the periodic W^1_2 norm:
    /// C * sobolev_norm with C^2 = sum_k (1 + k^2)^-1.
    pub fn embedding_bound(&self) -> f64 {
        sobolev_embedding_constant() * self.sobolev_norm()
    }
}

/// C = (sum_{k in Z} (1 + k^2)^-1)^(1/2) = (pi coth pi)^(1/2) ~ 1.775745.
pub fn sobolev_embedding_constant() -> f64 {
    (PI / PI.tanh()).sqrt()
}

/// Result of pairing a signal against a Wiener function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingValue {
    pub value: Complex64,
    /// Bound on |value - exact pairing|; 0 when exact.
    pub truncation_bound: f64,
}

impl PairingValue {
    pub fn is_exact(&self) -> bool {
        self.truncation_bound == 0.0
    }
}

/// <X, f> = sum_k x(k) f_k over the (finite) support of f.
pub fn pairing(x: &SignalSource, f: &WienerFunction) -> Result<PairingValue> {
    let Some(support) = f.support() else {
        return Ok(PairingValue {
            value: Complex64::new(0.0, 0.0),
            truncation_bound: 0.0,
        });
    };
    x.require_range(*support.start(), *support.end())?;
    let mut value = Complex64::new(0.0, 0.0);
    for (k, c) in f.iter() {
        if c.re != 0.0 || c.im != 0.0 {
            value += x.sample(k)? * c;
        }
    }
    Ok(PairingValue {
        value,
        truncation_bound: x.sample_error() * f.norm_a(),
    })
}

/// X_m(w) = sum_{t=-m}^{m} exp(-i w t) x(t) on each grid point.
pub fn partial_spectrum(x: &SignalSource, m: u64, grid: &[f64]) -> Result<Vec<Complex64>> {
    let m = m as i64;
    x.require_range(-m, m)?;
    let samples = (-m..=m)
        .map(|t| x.sample(t).map(|v| (t, v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(grid
        .iter()
        .map(|&w| {
            samples
                .iter()
                .map(|&(t, v)| v * Complex64::from_polar(1.0, -w * t as f64))
                .sum()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::Tone;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn norms_of_simple_elements() {
        let one = WienerFunction::new([(0, c(1.0, 0.0))]).unwrap();
        assert_eq!(one.norm_a(), 1.0);
        let cos = WienerFunction::new([(1, c(0.5, 0.0)), (-1, c(0.5, 0.0))]).unwrap();
        assert_eq!(cos.norm_a(), 1.0);
        assert_eq!(cos.support(), Some(-1..=1));
        assert_eq!(cos.coeff(0), c(0.0, 0.0));
    }

    #[test]
    fn rejects_non_finite_with_index() {
        let err = WienerFunction::new([(3, c(1.0, 0.0)), (-2, c(f64::INFINITY, 0.0))]).unwrap_err();
        assert_eq!(err, Error::NonFiniteCoefficient { index: -2 });
    }

    #[test]
    fn evaluate_basics() {
        let one = WienerFunction::new([(0, c(1.0, 0.0))]).unwrap();
        assert_eq!(one.evaluate(0.3), c(1.0, 0.0));
        let e1 = WienerFunction::basis(1);
        let v = e1.evaluate(PI / 2.0);
        assert!((v - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn grid_evaluation_matches_direct_sum() {
        let f = WienerFunction::new([(-5, c(0.5, 0.1)), (0, c(1.0, 0.0)), (9, c(-0.2, 0.3))]).unwrap();
        let n = 16;
        let vals = f.evaluate_on_grid(n).unwrap();
        for (j, v) in vals.iter().enumerate() {
            let w = crate::quadrature::node(j, n);
            assert!((v - f.evaluate(w)).norm() < 1e-14);
        }
    }

    #[test]
    fn product_identity_and_shift() {
        let g = WienerFunction::new([(-2, c(0.3, -1.0)), (4, c(2.0, 0.5))]).unwrap();
        let one = WienerFunction::basis(0);
        assert_eq!(one.product(&g), g);
        let h = WienerFunction::basis(1).product(&WienerFunction::basis(2));
        assert_eq!(h, WienerFunction::basis(3));
        assert!(WienerFunction::zero().product(&g).is_empty());
    }

    #[test]
    fn embedding_examples() {
        let cos = WienerFunction::new([(1, c(0.5, 0.0)), (-1, c(0.5, 0.0))]).unwrap();
        // (1+1)*0.25 * 2 = 1
        assert!((cos.sobolev_norm() - 1.0).abs() < 1e-15);
        assert!(cos.embedding_bound() >= cos.norm_a());
        let one = WienerFunction::basis(0);
        assert_eq!(one.embedding_bound(), sobolev_embedding_constant());
    }

    #[test]
    fn pairing_examples() {
        let ones = SignalSource::tone(1.0, 0.0).unwrap();
        let p = pairing(&ones, &WienerFunction::basis(0)).unwrap();
        assert_eq!(p.value, c(1.0, 0.0));
        assert!(p.is_exact());

        let tone = SignalSource::tone(1.0, PI / 2.0).unwrap();
        let p = pairing(&tone, &WienerFunction::basis(1)).unwrap();
        assert!((p.value - c(0.0, 1.0)).norm() < 1e-15);

        let mut vals = vec![c(0.0, 0.0); 11];
        vals[5] = c(1.0, 0.0);
        let delta5 = SignalSource::samples(0, vals).unwrap();
        let f = WienerFunction::new((0..=10).map(|k| (k, c(k as f64, -1.0)))).unwrap();
        assert_eq!(pairing(&delta5, &f).unwrap().value, c(5.0, -1.0));
    }

    #[test]
    fn pairing_outside_window_reports_index() {
        let x = SignalSource::samples(0, vec![c(1.0, 0.0); 5]).unwrap();
        let f = WienerFunction::new([(2, c(1.0, 0.0)), (7, c(1.0, 0.0))]).unwrap();
        assert_eq!(
            pairing(&x, &f).unwrap_err(),
            Error::OutsideWindow {
                index: 7,
                t_min: 0,
                t_max: 4
            }
        );
    }

    #[test]
    fn pairing_with_tone_is_point_evaluation() {
        let w0 = 0.77;
        let x = SignalSource::exp_sum(vec![Tone::real(1.0, w0)]).unwrap();
        let f = WienerFunction::new((-6..=9).map(|k| (k, c((k as f64).sin(), 0.1 * k as f64))))
            .unwrap();
        let p = pairing(&x, &f).unwrap();
        assert!((p.value - f.evaluate(w0)).norm() < 1e-13);
    }

    #[test]
    fn partial_spectrum_simple_cases() {
        let mut vals = vec![c(0.0, 0.0); 21];
        vals[10] = c(1.0, 0.0);
        let delta0 = SignalSource::samples(-10, vals).unwrap();
        let grid = [-3.0, -1.0, 0.0, 0.5, 2.0];
        for m in [0, 3, 10] {
            for v in partial_spectrum(&delta0, m, &grid).unwrap() {
                assert!((v - c(1.0, 0.0)).norm() < 1e-15);
            }
        }
        let x = SignalSource::samples(-10, (0..21).map(|i| c(i as f64, 1.0)).collect()).unwrap();
        for v in partial_spectrum(&x, 0, &grid).unwrap() {
            assert_eq!(v, c(10.0, 1.0));
        }
        assert!(partial_spectrum(&x, 11, &grid).is_err());
    }
}
