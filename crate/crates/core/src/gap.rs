//! Spectral gaps and the test-function banks that certify them.
//!
//! A gap `D` is a finite union of open intervals in [-pi, pi]. Its bank is a
//! family of raised-cosine bumps
//! `f(w) = 1/2 (1 + cos(2 pi (w - c) / width))` on `|w - c| <= width / 2`,
//! each tiling part of an interval. The bumps are C^1 with coefficients
//! decaying like k^-3; the stored Wiener functions are truncated at `|k| <= K`
//! and the truncation is tracked both as an l1 tail and as a measured
//! leakage outside `D`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::signal::SignalSource;
use crate::wiener::{pairing, WienerFunction};

/// One raised-cosine bump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: f64,
    pub width: f64,
}

impl Bump {
    pub fn new(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) || center - width / 2.0 < -PI - 1e-12 || center + width / 2.0 > PI + 1e-12
        {
            return Err(Error::InvalidParameter(format!(
                "bump at {center} with width {width} does not fit in [-pi, pi]"
            )));
        }
        Ok(Bump { center, width })
    }

    /// Exact profile value.
    pub fn profile(&self, omega: f64) -> f64 {
        let u = omega - self.center;
        if u.abs() >= self.width / 2.0 {
            0.0
        } else {
            0.5 * (1.0 + (2.0 * PI * u / self.width).cos())
        }
    }

    /// Exact Fourier coefficient
    /// f_k = (1/2pi) * integral f(w) exp(-i w k) dw
    ///     = exp(-i c k) * (a pi / 2) * sin(ka) / (ka (pi^2 - (ka)^2)),  a = width/2.
    pub fn coefficient(&self, k: i64) -> Complex64 {
        let a = self.width / 2.0;
        let x = (k as f64 * a).abs();
        let shape = a * PI / 2.0 * sinc_ratio(x);
        Complex64::from_polar(shape, -self.center * k as f64)
    }

    /// sum_{|k| > K} |f_k|: exact partial sum to K + 2^16, then an analytic
    /// bound on the remainder.
    pub fn coefficient_tail(&self, half_width: usize) -> f64 {
        let a = self.width / 2.0;
        let k0 = half_width as i64;
        let m = k0 + (1 << 16);
        let partial: f64 = (k0 + 1..=m)
            .map(|k| 2.0 * a * PI / 2.0 * sinc_ratio(k as f64 * a).abs())
            .sum();
        let ma = m as f64 * a;
        let remainder = if ma > 2.0 * PI {
            PI / (2.0 * a * a * (m as f64).powi(2) * (1.0 - (PI / ma).powi(2)))
        } else {
            // |f_k| <= a / (2 pi) for every k; nothing better without decay.
            f64::INFINITY
        };
        partial + remainder
    }

    /// Coefficients for |k| <= K as a Wiener function.
    pub fn truncated(&self, half_width: usize) -> WienerFunction {
        let k = half_width as i64;
        WienerFunction::from_dense(-k, (-k..=k).map(|j| self.coefficient(j)).collect())
            .expect("bump coefficients are finite")
    }
}

/// sin(x) / (x (pi^2 - x^2)) for x >= 0, with both removable points handled.
fn sinc_ratio(x: f64) -> f64 {
    let pi2 = PI * PI;
    if x < 1e-4 {
        (1.0 - x * x / 6.0) / (pi2 - x * x)
    } else if (x - PI).abs() < 1e-6 {
        // sin(x) / (pi - x) = sin(pi - x) / (pi - x)
        let d = PI - x;
        (1.0 - d * d / 6.0) / (x * (PI + x))
    } else {
        x.sin() / (x * (pi2 - x * x))
    }
}

/// A bank member: the truncated Wiener function plus, when known, the exact
/// profile it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct BankMember {
    pub function: WienerFunction,
    pub bump: Option<Bump>,
    /// sum of |f_k| dropped by truncation (infinite if unknown).
    pub tail: f64,
}

impl BankMember {
    /// Exact value where the profile is known, truncated series otherwise.
    pub fn value(&self, omega: f64) -> Complex64 {
        match &self.bump {
            Some(b) => Complex64::new(b.profile(omega), 0.0),
            None => self.function.evaluate(omega),
        }
    }

    /// Coefficient f_k; exact where the profile is known.
    pub fn coefficient(&self, k: i64) -> Complex64 {
        match &self.bump {
            Some(b) => b.coefficient(k),
            None => self.function.coeff(k),
        }
    }

    /// Whether f(w) is real for real w.
    pub fn is_real_valued(&self) -> bool {
        self.bump.is_some()
    }
}

pub const DEFAULT_AUDIT_GRID: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGap {
    intervals: Vec<(f64, f64)>,
    bank: Vec<BankMember>,
    bank_leakage: f64,
}

fn check_intervals(intervals: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    if intervals.is_empty() {
        return Err(Error::InvalidParameter("a gap needs at least one interval".into()));
    }
    let mut sorted = intervals.to_vec();
    for &(a, b) in &sorted {
        if !(a >= -PI && a < b && b <= PI) {
            return Err(Error::InvalidParameter(format!(
                "interval ({a}, {b}) must satisfy -pi <= a < b <= pi"
            )));
        }
    }
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
    for pair in sorted.windows(2) {
        if pair[1].0 < pair[0].1 {
            return Err(Error::InvalidParameter(format!(
                "intervals ({}, {}) and ({}, {}) overlap",
                pair[0].0, pair[0].1, pair[1].0, pair[1].1
            )));
        }
    }
    Ok(sorted)
}

impl SpectralGap {
    /// Tiles the intervals with `bank_size` raised-cosine bumps in total
    /// (shared out by interval length, at least one each), truncated at
    /// `|k| <= half_width`.
    pub fn with_bumps(intervals: &[(f64, f64)], bank_size: usize, half_width: usize) -> Result<Self> {
        let intervals = check_intervals(intervals)?;
        if bank_size < intervals.len() {
            return Err(Error::InvalidParameter(format!(
                "bank size {bank_size} is smaller than the number of intervals"
            )));
        }
        let total: f64 = intervals.iter().map(|(a, b)| b - a).sum();
        let mut counts: Vec<usize> = intervals
            .iter()
            .map(|(a, b)| (((b - a) / total) * bank_size as f64).floor().max(1.0) as usize)
            .collect();
        // Hand out the remainder to the longest intervals first.
        let mut order: Vec<usize> = (0..intervals.len()).collect();
        order.sort_by(|&i, &j| {
            let li = intervals[i].1 - intervals[i].0;
            let lj = intervals[j].1 - intervals[j].0;
            lj.total_cmp(&li)
        });
        let mut assigned: usize = counts.iter().sum();
        let mut idx = 0;
        while assigned < bank_size {
            counts[order[idx % order.len()]] += 1;
            assigned += 1;
            idx += 1;
        }
        while assigned > bank_size {
            let i = order
                .iter()
                .copied()
                .find(|&i| counts[i] > 1)
                .expect("bank_size >= intervals");
            counts[i] -= 1;
            assigned -= 1;
        }
        let mut bank = Vec::with_capacity(bank_size);
        for (&(a, b), &m) in intervals.iter().zip(&counts) {
            let width = (b - a) / m as f64;
            for j in 0..m {
                let bump = Bump::new(a + (j as f64 + 0.5) * width, width)?;
                bank.push(BankMember {
                    function: bump.truncated(half_width),
                    bump: Some(bump),
                    tail: bump.coefficient_tail(half_width),
                });
            }
        }
        Self::assemble(intervals, bank, DEFAULT_AUDIT_GRID)
    }

    /// A gap with a caller-supplied bank of truncated test functions. Their
    /// exact profiles are unknown, so the tails are recorded as unknown.
    pub fn with_bank(intervals: &[(f64, f64)], bank: Vec<WienerFunction>) -> Result<Self> {
        let intervals = check_intervals(intervals)?;
        let bank = bank
            .into_iter()
            .map(|function| BankMember {
                function,
                bump: None,
                tail: f64::INFINITY,
            })
            .collect();
        Self::assemble(intervals, bank, DEFAULT_AUDIT_GRID)
    }

    fn assemble(intervals: Vec<(f64, f64)>, bank: Vec<BankMember>, audit: usize) -> Result<Self> {
        if bank.is_empty() {
            return Err(Error::InvalidParameter("empty test-function bank".into()));
        }
        let mut gap = SpectralGap {
            intervals,
            bank,
            bank_leakage: 0.0,
        };
        gap.bank_leakage = gap.measure_leakage(audit)?;
        Ok(gap)
    }

    fn measure_leakage(&self, audit: usize) -> Result<f64> {
        let n = audit.max(
            self.bank
                .iter()
                .filter_map(|m| m.function.support())
                .map(|s| ((s.end() - s.start() + 1) as usize).next_power_of_two() * 2)
                .max()
                .unwrap_or(0),
        );
        let outside: Vec<usize> = (0..n)
            .filter(|&j| !self.contains(crate::quadrature::node(j, n)))
            .collect();
        let mut leak = 0.0f64;
        for member in &self.bank {
            let values = member.function.evaluate_on_grid(n)?;
            for &j in &outside {
                leak = leak.max(values[j].norm());
            }
        }
        Ok(leak)
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn bank(&self) -> &[BankMember] {
        &self.bank
    }

    /// max over the bank of sup |f_j| outside D on the audit grid.
    pub fn bank_leakage(&self) -> f64 {
        self.bank_leakage
    }

    /// max over the bank of the l1 truncation tail.
    pub fn max_tail(&self) -> f64 {
        self.bank.iter().map(|m| m.tail).fold(0.0, f64::max)
    }

    /// Open-interval membership.
    pub fn contains(&self, omega: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| omega > a && omega < b)
    }

    /// Total length of D.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }
}

/// Outcome of [`gap_residual`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapResidual {
    /// max_j |<X, f_j>| with the truncated bank.
    pub residual: f64,
    /// sup|x| * max_j tail_j: how far a true gap can push the residual.
    pub leakage_slack: f64,
    /// Largest pairing truncation bound (nonzero for inexact sources).
    pub pairing_error: f64,
}

impl GapResidual {
    /// A gap is certified at level `eps` when the residual is within `eps`
    /// plus the slack explained by truncation.
    pub fn certified(&self, eps: f64) -> bool {
        self.residual <= eps + self.leakage_slack + self.pairing_error
    }
}

pub fn gap_residual(x: &SignalSource, gap: &SpectralGap) -> Result<GapResidual> {
    let mut residual = 0.0f64;
    let mut pairing_error = 0.0f64;
    for member in gap.bank() {
        let p = pairing(x, &member.function)?;
        residual = residual.max(p.value.norm());
        pairing_error = pairing_error.max(p.truncation_bound);
    }
    Ok(GapResidual {
        residual,
        leakage_slack: x.sup_bound() * gap.max_tail(),
        pairing_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature;

    #[test]
    fn bump_coefficients_match_quadrature() {
        let bump = Bump::new(1.3, 0.4).unwrap();
        let n = 1 << 14;
        let samples = quadrature::sample(|w| Complex64::new(bump.profile(w), 0.0), n).unwrap();
        // quadrature gives (1/N) sum f(w) exp(i w k), the coefficient of exp(-iwk)
        let table = quadrature::coefficients(&samples);
        for k in -40i64..=40 {
            let quad = table[(-k + (n / 2) as i64) as usize];
            // the rule aliases the k^-3 tail: error ~ |f_N| ~ 1e-11 here
            assert!((quad - bump.coefficient(k)).norm() < 5e-11, "k = {k}");
        }
    }

    #[test]
    fn bump_coefficient_special_points() {
        let bump = Bump::new(0.0, 2.0 * PI / 10.0).unwrap();
        let a = bump.width / 2.0;
        assert!((bump.coefficient(0).re - a / (2.0 * PI)).abs() < 1e-16);
        // ka = pi at k = 10
        let expected = a / (4.0 * PI);
        assert!((bump.coefficient(10).re - expected).abs() < 1e-15);
        // zeros at ka = n pi, n >= 2
        assert!(bump.coefficient(20).norm() < 1e-17);
    }

    #[test]
    fn truncated_bump_sums_to_profile() {
        let bump = Bump::new(-0.5, 0.6).unwrap();
        let f = bump.truncated(2048);
        let tail = bump.coefficient_tail(2048);
        for w in [-0.5, -0.4, -0.21, 0.0, 1.0, -2.0] {
            let err = (f.evaluate(w).re - bump.profile(w)).abs();
            assert!(err <= tail, "w = {w}: {err} > {tail}");
        }
    }

    #[test]
    fn tiling_and_leakage() {
        let gap = SpectralGap::with_bumps(&[(1.0, 2.5)], 12, 256).unwrap();
        assert_eq!(gap.bank().len(), 12);
        assert!((gap.measure() - 1.5).abs() < 1e-15);
        let first = gap.bank()[0].bump.unwrap();
        assert!((first.center - (1.0 + 0.0625)).abs() < 1e-15);
        assert!(gap.bank_leakage() > 0.0);
        assert!(gap.bank_leakage() <= gap.max_tail());
    }

    #[test]
    fn bank_shared_by_length() {
        let gap = SpectralGap::with_bumps(&[(-3.0, -2.0), (0.5, 2.5)], 9, 64).unwrap();
        let left = gap.bank().iter().filter(|m| m.bump.unwrap().center < 0.0).count();
        assert_eq!(left, 3);
        assert_eq!(gap.bank().len(), 9);
    }

    #[test]
    fn rejects_bad_intervals() {
        assert!(SpectralGap::with_bumps(&[], 4, 16).is_err());
        assert!(SpectralGap::with_bumps(&[(1.0, 0.5)], 4, 16).is_err());
        assert!(SpectralGap::with_bumps(&[(0.0, 1.0), (0.5, 2.0)], 4, 16).is_err());
        assert!(SpectralGap::with_bumps(&[(0.0, 4.0)], 4, 16).is_err());
    }

    #[test]
    fn residual_of_zero_and_of_outside_tone() {
        let gap = SpectralGap::with_bumps(&[(1.0, 2.0)], 8, 512).unwrap();
        let zero = SignalSource::samples(-600, vec![Complex64::new(0.0, 0.0); 1201]).unwrap();
        assert_eq!(gap_residual(&zero, &gap).unwrap().residual, 0.0);
        let tone = SignalSource::tone(1.0, 0.2).unwrap();
        let r = gap_residual(&tone, &gap).unwrap();
        assert!(r.certified(0.0));
        assert!(r.residual < 1e-3);
    }

    #[test]
    fn residual_at_bump_center_is_peak() {
        let gap = SpectralGap::with_bumps(&[(1.0, 2.0)], 4, 512).unwrap();
        let c = gap.bank()[1].bump.unwrap().center;
        let r = gap_residual(&SignalSource::tone(1.0, c).unwrap(), &gap).unwrap();
        assert!((r.residual - 1.0).abs() <= r.leakage_slack + 1e-12);
    }
}
