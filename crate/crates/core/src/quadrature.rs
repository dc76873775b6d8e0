//! Uniform N-point rule on [-pi, pi) and the FFT plumbing behind it.
//!
//! All Fourier coefficients in the crate come out of one formula,
//!
//! ```text
//! c_k = (1/N) * sum_j F(w_j) * exp(i w_j k),   w_j = -pi + 2 pi j / N,
//! ```
//!
//! for k in [-N/2, N/2). It is exact for trigonometric polynomials of degree
//! below N/2 and spectrally accurate for smooth periodic F.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

pub const DEFAULT_QUADRATURE_SIZE: usize = 1 << 14;

/// Checks that `n` is a usable quadrature size (power of two, at least 4).
pub fn check_size(n: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::QuadratureSize {
            n,
            reason: "must be at least 4",
        });
    }
    if !n.is_power_of_two() {
        return Err(Error::QuadratureSize {
            n,
            reason: "must be a power of two",
        });
    }
    Ok(())
}

/// The grid node w_j.
#[inline]
pub fn node(j: usize, n: usize) -> f64 {
    -PI + 2.0 * PI * (j as f64) / (n as f64)
}

pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| node(j, n)).collect()
}

/// Samples `f` on the grid, rejecting non-finite values.
pub fn sample<F>(f: F, n: usize) -> Result<Vec<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    (0..n)
        .map(|j| {
            let w = node(j, n);
            let v = f(w);
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFiniteSpectrum { omega: w })
            }
        })
        .collect()
}

/// Applies the rule to grid samples. Returns c_k for k = -N/2 .. N/2-1,
/// stored at position k + N/2.
pub fn coefficients(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    let half = n / 2;
    (0..n)
        .map(|pos| {
            let k = pos as i64 - half as i64;
            let c = buf[k.rem_euclid(n as i64) as usize] * scale;
            // exp(i w_j k) = (-1)^k exp(2 pi i j k / N)
            if k.rem_euclid(2) == 0 {
                c
            } else {
                -c
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_checks() {
        assert!(check_size(1024).is_ok());
        assert!(check_size(1000).is_err());
        assert!(check_size(2).is_err());
    }

    #[test]
    fn recovers_trigonometric_polynomial() {
        let n = 64;
        let f = |w: f64| {
            Complex64::new(0.5, 0.0)
                + Complex64::from_polar(2.0, 3.0 * w)
                + Complex64::from_polar(0.25, -7.0 * w) * Complex64::i()
        };
        let c = coefficients(&sample(f, n).unwrap());
        let at = |k: i64| c[(k + n as i64 / 2) as usize];
        assert!((at(0) - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        // c_k multiplies exp(-i w k)
        assert!((at(-3) - Complex64::new(2.0, 0.0)).norm() < 1e-14);
        assert!((at(7) - Complex64::new(0.0, 0.25)).norm() < 1e-14);
        let rest: f64 = (-32..32)
            .filter(|k| ![0, -3, 7].contains(k))
            .map(|k| at(k).norm())
            .sum();
        assert!(rest < 1e-13);
    }

    #[test]
    fn rejects_non_finite_samples() {
        let err = sample(|w| Complex64::new(1.0 / (w + PI), 0.0), 8).unwrap_err();
        assert!(matches!(err, Error::NonFiniteSpectrum { .. }));
    }
}
