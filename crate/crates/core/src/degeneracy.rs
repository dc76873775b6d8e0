//! The weight G(w, w_hat, nu) = exp(c / (|e^{iw} - e^{i w_hat}|^q + nu)) and
//! the sup-norm of the weighted signal along a nu sweep.
//!
//! For exponential sums and densities the weight is applied on the spectral
//! side, where it is exact: G peaks at exp(c / nu), and routing it through a
//! truncated kernel loses every digit once that peak is large. Windowed
//! samples have no spectral form and go through the kernel; its rounding
//! bound is reported alongside.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature;
use crate::signal::SignalSource;
use crate::transfer::{apply_transfer, kernel_from_spectrum};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegeneracyWeight {
    pub omega_hat: f64,
    pub c: f64,
    pub q_exp: f64,
    pub nu: f64,
}

impl DegeneracyWeight {
    pub fn new(omega_hat: f64, c: f64, q_exp: f64, nu: f64) -> Result<Self> {
        if !(omega_hat > -PI && omega_hat <= PI) {
            return Err(Error::FrequencyOutOfRange { omega: omega_hat });
        }
        if !(c > 0.0) || !(q_exp > 1.0) || !(nu > 0.0 && nu < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "weight needs c > 0, q > 1, 0 < nu < 1; got c = {c}, q = {q_exp}, nu = {nu}"
            )));
        }
        Ok(DegeneracyWeight {
            omega_hat,
            c,
            q_exp,
            nu,
        })
    }

    pub fn with_nu(&self, nu: f64) -> Result<Self> {
        Self::new(self.omega_hat, self.c, self.q_exp, nu)
    }

    /// log G(w).
    pub fn log_value(&self, omega: f64) -> f64 {
        let d = (Complex64::from_polar(1.0, omega) - Complex64::from_polar(1.0, self.omega_hat)).norm();
        self.c / (d.powf(self.q_exp) + self.nu)
    }

    pub fn value(&self, omega: f64) -> f64 {
        self.log_value(omega).exp()
    }

    /// log max_w G = c / nu, attained at w_hat.
    pub fn log_peak(&self) -> f64 {
        self.c / self.nu
    }
}

/// How the weighted signal is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Spectral multiplication where the source allows it, kernel otherwise.
    Auto,
    /// Always through a truncated kernel of G.
    Kernel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegeneracyPoint {
    pub nu: f64,
    /// max over the evaluated times of |(G x)(t)|.
    pub value: f64,
    /// Error bound on `value` (rounding, quadrature and kernel tail).
    pub error: f64,
    pub log_peak: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The weighted norm does not track the growth of max G.
    Bounded,
    /// The weighted norm grows with max G along the sweep.
    Diverging,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyReport {
    /// One point per nu, in decreasing order of nu.
    pub points: Vec<DegeneracyPoint>,
    pub verdict: Verdict,
    /// Whether `value` increases strictly along the sweep.
    pub monotone: bool,
}

impl DegeneracyReport {
    /// max over the sweep: a lower estimate of sup_nu ||X G||.
    pub fn max_value(&self) -> f64 {
        self.points.iter().map(|p| p.value).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSettings {
    pub half_width: usize,
    pub n: usize,
}

impl Default for KernelSettings {
    fn default() -> Self {
        KernelSettings {
            half_width: 256,
            n: quadrature::DEFAULT_QUADRATURE_SIZE,
        }
    }
}

fn weighted_sup(
    x: &SignalSource,
    w: &DegeneracyWeight,
    times: &RangeInclusive<i64>,
    route: Route,
    kernel: KernelSettings,
) -> Result<(f64, f64)> {
    let (t0, t1) = (*times.start(), *times.end());
    match (x, route) {
        (SignalSource::ExpSum(e), Route::Auto) => {
            let weighted: Vec<(f64, Complex64)> = e
                .tones()
                .iter()
                .map(|tone| (tone.omega, tone.amplitude * w.value(tone.omega)))
                .collect();
            let scale: f64 = weighted.iter().map(|(_, a)| a.norm()).sum();
            if !scale.is_finite() {
                return Err(Error::OverflowGuard {
                    exponent: w.log_peak(),
                    limit: f64::MAX.ln(),
                });
            }
            let sup = (t0..=t1)
                .map(|t| {
                    weighted
                        .iter()
                        .map(|(om, a)| a * Complex64::from_polar(1.0, om * t as f64))
                        .sum::<Complex64>()
                        .norm()
                })
                .fold(0.0, f64::max);
            let terms = weighted.len() as f64;
            Ok((sup, 4.0 * terms * f64::EPSILON * scale))
        }
        (SignalSource::QuadDensity(q), Route::Auto) => {
            let n = q.n();
            let weights: Vec<Complex64> = (0..n)
                .map(|j| Complex64::new(w.value(quadrature::node(j, n)), 0.0))
                .collect();
            let (values, quad_error, rounding) = q.weighted_samples(&weights, t0, t1)?;
            let sup = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
            Ok((sup, quad_error + rounding))
        }
        _ => {
            let h = kernel_from_spectrum(
                |om| Complex64::new(w.value(om), 0.0),
                kernel.half_width,
                kernel.n,
            )?;
            let out = apply_transfer(&h, x, times.clone())?;
            let error = out.error_bound().unwrap_or(f64::INFINITY);
            Ok((out.sup(), error))
        }
    }
}

/// Sweeps `nus` (sorted into decreasing order) and classifies the growth of
/// max_t |(G x)(t)| over `times` against the growth of max G = exp(c / nu).
///
/// The verdict is `Diverging` when, across the sweep, log of the value grows
/// by at least half as much as log max G; `Bounded` otherwise.
pub fn degeneracy_norm(
    x: &SignalSource,
    template: &DegeneracyWeight,
    nus: &[f64],
    times: RangeInclusive<i64>,
    route: Route,
    kernel: KernelSettings,
) -> Result<DegeneracyReport> {
    if nus.is_empty() {
        return Err(Error::InvalidParameter("empty nu sweep".into()));
    }
    if times.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let mut sorted = nus.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut points = Vec::with_capacity(sorted.len());
    for nu in sorted {
        let w = template.with_nu(nu)?;
        let (value, error) = weighted_sup(x, &w, &times, route, kernel)?;
        points.push(DegeneracyPoint {
            nu,
            value,
            error,
            log_peak: w.log_peak(),
        });
    }
    let monotone = points.windows(2).all(|p| p[1].value > p[0].value);
    let first = points[0];
    let last = points[points.len() - 1];
    let peak_growth = last.log_peak - first.log_peak;
    let verdict = if first.value == 0.0 && last.value == 0.0 {
        Verdict::Bounded
    } else if first.value == 0.0 {
        Verdict::Diverging
    } else {
        let growth = (last.value / first.value).ln();
        if peak_growth > 0.0 && growth >= 0.5 * peak_growth {
            Verdict::Diverging
        } else {
            Verdict::Bounded
        }
    };
    Ok(DegeneracyReport {
        points,
        verdict,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const NUS: [f64; 3] = [0.5, 0.1, 0.02];

    fn template() -> DegeneracyWeight {
        DegeneracyWeight::new(PI, 1.0, 2.0, 0.5).unwrap()
    }

    #[test]
    fn weight_values() {
        let w = template();
        // |1 - (-1)|^2 = 4
        assert!((w.value(0.0) - (1.0f64 / 4.5).exp()).abs() < 1e-15);
        assert!((w.value(PI) - 2f64.exp()).abs() < 1e-14);
        assert!(DegeneracyWeight::new(PI, 1.0, 1.0, 0.5).is_err());
        assert!(DegeneracyWeight::new(PI, 1.0, 2.0, 1.0).is_err());
        assert!(DegeneracyWeight::new(-PI, 1.0, 2.0, 0.5).is_err());
    }

    #[test]
    fn zero_signal() {
        let x = SignalSource::samples(-300, vec![Complex64::new(0.0, 0.0); 601]).unwrap();
        let r = degeneracy_norm(&x, &template(), &[0.5], 0..=0, Route::Auto, KernelSettings::default())
            .unwrap();
        assert_eq!(r.max_value(), 0.0);
        assert_eq!(r.verdict, Verdict::Bounded);
    }

    #[test]
    fn tone_away_from_singularity_is_bounded() {
        let x = SignalSource::tone(1.0, 0.0).unwrap();
        let r = degeneracy_norm(&x, &template(), &NUS, -8..=8, Route::Auto, KernelSettings::default())
            .unwrap();
        for p in &r.points {
            assert!((p.value - (1.0 / (4.0 + p.nu)).exp()).abs() < 1e-14);
        }
        assert!(r.max_value() <= 0.25f64.exp());
        assert_eq!(r.verdict, Verdict::Bounded);
    }

    #[test]
    fn tone_at_singularity_diverges() {
        let x = SignalSource::tone(1.0, PI).unwrap();
        let r = degeneracy_norm(&x, &template(), &NUS, -8..=8, Route::Auto, KernelSettings::default())
            .unwrap();
        for p in &r.points {
            assert!((p.value / (1.0 / p.nu).exp() - 1.0).abs() < 1e-12);
        }
        assert!(r.monotone);
        assert_eq!(r.verdict, Verdict::Diverging);
    }

    #[test]
    fn kernel_route_agrees_at_moderate_nu() {
        let x = SignalSource::tone(1.0, 0.7).unwrap();
        let w = template();
        let settings = KernelSettings {
            half_width: 256,
            n: 1 << 12,
        };
        let spectral = degeneracy_norm(&x, &w, &[0.5], -4..=4, Route::Auto, settings).unwrap();
        let kernel = degeneracy_norm(&x, &w, &[0.5], -4..=4, Route::Kernel, settings).unwrap();
        let (a, b) = (spectral.points[0], kernel.points[0]);
        assert!((a.value - b.value).abs() <= b.error + 1e-12, "{a:?} {b:?}");
    }

    #[test]
    fn density_route_matches_kernel_route() {
        let x = SignalSource::quad_density(|w| Complex64::new((-(w * w)).exp(), 0.0), 1 << 12).unwrap();
        let settings = KernelSettings {
            half_width: 256,
            n: 1 << 12,
        };
        let spectral = degeneracy_norm(&x, &template(), &[0.5], -8..=8, Route::Auto, settings).unwrap();
        let samples = SignalSource::Samples(x.to_samples(-300, 300).unwrap());
        let kernel = degeneracy_norm(&samples, &template(), &[0.5], -8..=8, Route::Kernel, settings).unwrap();
        let (a, b) = (spectral.points[0], kernel.points[0]);
        assert!((a.value - b.value).abs() <= a.error + b.error + 1e-10, "{a:?} {b:?}");
    }
}
