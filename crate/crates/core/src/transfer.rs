//! Transfer functions realised as l1 kernels.
//!
//! Sign convention: a kernel `{h_k}` has spectrum
//! `H(e^{iw}) = sum_k h_k exp(-i w k)` and acts in time as
//! `xhat(t) = sum_q h_{t-q} x(q)`. With this choice `h_k = 0` for `k < 0` is
//! exactly causality, and a pure tone is an eigenfunction:
//! `exp(i w0 t) -> H(e^{i w0}) exp(i w0 t)`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::RangeInclusive;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::quadrature;
use crate::signal::{QuadDensity, SignalSource};

/// Causality status of a stored kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Causality {
    /// Every stored coefficient with negative index is exactly zero.
    Proven,
    /// Negative-index coefficients are bounded by the given tolerance.
    Numeric(f64),
    /// Not causal, or not checked.
    No,
}

impl fmt::Display for Causality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Causality::Proven => write!(f, "proven"),
            Causality::Numeric(tol) => write!(f, "numeric:{tol:e}"),
            Causality::No => write!(f, "no"),
        }
    }
}

impl std::str::FromStr for Causality {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "proven" => Ok(Causality::Proven),
            "no" => Ok(Causality::No),
            _ => s
                .strip_prefix("numeric:")
                .and_then(|v| v.parse::<f64>().ok())
                .filter(|v| *v >= 0.0)
                .map(Causality::Numeric)
                .ok_or_else(|| Error::InvalidParameter(format!("bad causality status {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    offset: i64,
    coeffs: Vec<Complex64>,
    tail_bound: Option<f64>,
    causal: Causality,
}

impl Kernel {
    /// Builds a kernel from a dense run of coefficients starting at `offset`.
    /// Causality is `Proven` when no negative index carries a nonzero value.
    pub fn new(offset: i64, coeffs: Vec<Complex64>, tail_bound: Option<f64>) -> Result<Self> {
        if let Some(pos) = coeffs
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::NonFiniteCoefficient {
                index: offset + pos as i64,
            });
        }
        if let Some(t) = tail_bound {
            if !(t >= 0.0) {
                return Err(Error::InvalidParameter(format!("tail bound {t} must be >= 0")));
            }
        }
        let mut kernel = Kernel {
            offset,
            coeffs,
            tail_bound,
            causal: Causality::No,
        };
        if kernel.negative_mass_max() == 0.0 {
            kernel.causal = Causality::Proven;
        }
        Ok(kernel)
    }

    /// From sparse `(k, h_k)` pairs with a known zero tail.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let w = crate::wiener::WienerFunction::new(pairs)?;
        Kernel::new(w.offset(), w.coeffs().to_vec(), Some(0.0))
    }

    pub fn identity() -> Self {
        Kernel::new(0, vec![Complex64::new(1.0, 0.0)], Some(0.0)).unwrap()
    }

    pub fn delay(d: i64) -> Self {
        Kernel::new(d, vec![Complex64::new(1.0, 0.0)], Some(0.0)).unwrap()
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

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

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.offset + i as i64, *c))
    }

    /// Bound on the l1 mass dropped by truncation, `None` when unknown.
    pub fn tail_bound(&self) -> Option<f64> {
        self.tail_bound
    }

    pub fn causality(&self) -> Causality {
        self.causal
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// max_{k<0} |h_k| over the stored coefficients.
    pub fn negative_mass_max(&self) -> f64 {
        self.iter()
            .filter(|(k, _)| *k < 0)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }

    /// H(e^{iw}) = sum_k h_k exp(-i w k).
    pub fn spectrum(&self, omega: f64) -> Complex64 {
        self.iter()
            .map(|(k, c)| c * Complex64::from_polar(1.0, -omega * k as f64))
            .sum()
    }

    /// The spectrum on the N-point grid, via one FFT.
    pub fn spectrum_on_grid(&self, n: usize) -> Result<Vec<Complex64>> {
        quadrature::check_size(n)?;
        // exp(-i w_j k) = (-1)^k exp(-2 pi i j k / N); fold k mod N.
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (k, c) in self.iter() {
            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            buf[k.rem_euclid(n as i64) as usize] += c * sign;
        }
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        Ok(buf)
    }

    /// True iff max_{k<0} |h_k| <= tol.
    pub fn is_causal(&self, tol: f64) -> bool {
        self.negative_mass_max() <= tol
    }

    /// Re-checks causality at `tol` and records the outcome.
    pub fn with_causality_check(mut self, tol: f64) -> Self {
        let residual = self.negative_mass_max();
        self.causal = if residual == 0.0 {
            Causality::Proven
        } else if residual <= tol {
            Causality::Numeric(tol)
        } else {
            Causality::No
        };
        self
    }

    /// Drops the negative-index coefficients, moving their mass into the tail
    /// bound. The result is causal by construction.
    pub fn into_causal(self) -> Self {
        let dropped: f64 = self
            .iter()
            .filter(|(k, _)| *k < 0)
            .map(|(_, c)| c.norm())
            .sum();
        let start = self.offset.max(0);
        let coeffs: Vec<Complex64> = self.iter().filter(|(k, _)| *k >= 0).map(|(_, c)| c).collect();
        let tail_bound = self.tail_bound.map(|t| t + dropped);
        Kernel {
            offset: if coeffs.is_empty() { 0 } else { start },
            coeffs,
            tail_bound,
            causal: Causality::Proven,
        }
    }

    /// Multiplies h_k by exp(i phase k).
    pub fn modulated(&self, phase: f64) -> Self {
        Kernel {
            offset: self.offset,
            coeffs: self
                .iter()
                .map(|(k, c)| c * Complex64::from_polar(1.0, phase * k as f64))
                .collect(),
            tail_bound: self.tail_bound,
            causal: self.causal,
        }
    }

    pub(crate) fn from_parts(
        offset: i64,
        coeffs: Vec<Complex64>,
        tail_bound: Option<f64>,
        causal: Causality,
    ) -> Self {
        Kernel {
            offset,
            coeffs,
            tail_bound,
            causal,
        }
    }
}

/// Keeps `|k| <= half_width` from a full quadrature coefficient table and
/// measures the l1 mass left outside.
pub(crate) fn truncate_table(table: &[Complex64], half_width: usize) -> (Vec<Complex64>, f64) {
    let n = table.len();
    let half = n / 2;
    let keep = half_width.min(half - 1);
    let lo = half - keep;
    let hi = half + keep;
    let coeffs = table[lo..=hi].to_vec();
    let tail = table[..lo].iter().chain(&table[hi + 1..]).map(|c| c.norm()).sum();
    (coeffs, tail)
}

/// Kernel of a function-type spectrum by the N-point rule,
/// h_k = (1/2pi) * integral H(w) exp(i w k) dw, kept for |k| <= K.
///
/// The recorded tail is the l1 mass of the computed coefficients with
/// K < |k| < N/2.
pub fn kernel_from_spectrum<F>(spectrum: F, half_width: usize, n: usize) -> Result<Kernel>
where
    F: Fn(f64) -> Complex64,
{
    quadrature::check_size(n)?;
    if n < 4 * half_width {
        return Err(Error::QuadratureSize {
            n,
            reason: "must be at least 4 * half-width",
        });
    }
    let samples = quadrature::sample(spectrum, n)?;
    let table = quadrature::coefficients(&samples);
    let (coeffs, tail) = truncate_table(&table, half_width);
    Kernel::new(-(half_width as i64), coeffs, Some(tail))
}

/// The trapezoid profile: 1 on [-p, p], linear to 0 on p < |w| <= q, 0 beyond.
pub fn trapezoid_profile(p: f64, q: f64, omega: f64) -> f64 {
    let a = omega.abs();
    if a <= p {
        1.0
    } else if a <= q {
        (q - a) / (q - p)
    } else {
        0.0
    }
}

fn trapezoid_coeff(p: f64, q: f64, k: i64) -> f64 {
    if k == 0 {
        (p + q) / (2.0 * PI)
    } else {
        let kf = k as f64;
        ((p * kf).cos() - (q * kf).cos()) / (PI * (q - p) * kf * kf)
    }
}

/// Closed-form kernel of the trapezoid low-pass profile, truncated at |k| <= K.
pub fn trapezoid_kernel(p: f64, q: f64, half_width: usize) -> Result<Kernel> {
    if !(p > 0.0 && p < q && q < PI) {
        return Err(Error::InvalidParameter(format!(
            "trapezoid needs 0 < p < q < pi, got p = {p}, q = {q}"
        )));
    }
    let k_max = half_width as i64;
    let coeffs = (-k_max..=k_max)
        .map(|k| Complex64::new(trapezoid_coeff(p, q, k), 0.0))
        .collect();
    // Exact partial tail up to M, then |h_k| <= 2 / (pi (q-p) k^2) beyond.
    let m = k_max + (1 << 16);
    let partial: f64 = (k_max + 1..=m)
        .map(|k| 2.0 * trapezoid_coeff(p, q, k).abs())
        .sum();
    let remainder = 4.0 / (PI * (q - p) * m as f64);
    Kernel::new(-k_max, coeffs, Some(partial + remainder))
}

/// Output of [`apply_transfer`].
#[derive(Debug, Clone, PartialEq)]
pub struct Filtered {
    pub times: RangeInclusive<i64>,
    pub values: Vec<Complex64>,
    /// sup|x| * tail(h); `None` when the kernel tail is unknown.
    pub tail_error: Option<f64>,
    /// Floating-point accumulation bound.
    pub rounding_error: f64,
    /// Error inherited from inexact input samples or quadrature.
    pub sample_error: f64,
}

impl Filtered {
    /// Total error bound, `None` when the tail is unknown.
    pub fn error_bound(&self) -> Option<f64> {
        self.tail_error
            .map(|t| t + self.rounding_error + self.sample_error)
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn get(&self, t: i64) -> Option<Complex64> {
        if self.times.contains(&t) {
            Some(self.values[(t - self.times.start()) as usize])
        } else {
            None
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.times.clone().zip(self.values.iter().copied())
    }
}

/// xhat(t) = sum_q h_{t-q} x(q) for t in `times`.
///
/// Windowed and exponential-sum inputs are convolved directly. Density
/// inputs are filtered in the frequency domain (the density times the
/// kernel spectrum, synthesised by the same quadrature rule), which avoids
/// amplifying sample rounding by the kernel norm.
pub fn apply_transfer(h: &Kernel, x: &SignalSource, times: RangeInclusive<i64>) -> Result<Filtered> {
    if times.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let (t0, t1) = (*times.start(), *times.end());
    let sup = x.sup_bound();
    let tail_error = h.tail_bound().map(|t| t * sup);
    let Some(support) = h.support() else {
        return Ok(Filtered {
            values: vec![Complex64::new(0.0, 0.0); (t1 - t0 + 1) as usize],
            times,
            tail_error,
            rounding_error: 0.0,
            sample_error: 0.0,
        });
    };
    let eps = f64::EPSILON;
    let norm = h.l1_norm();
    let terms = h.coeffs.len() as f64;

    if let SignalSource::QuadDensity(q) = x {
        return filter_density(h, q, times, tail_error);
    }

    x.require_range(t0 - support.end(), t1 - support.start())?;
    let lo = t0 - support.end();
    let input: Vec<Complex64> = (lo..=t1 - support.start())
        .map(|t| x.sample(t))
        .collect::<Result<_>>()?;
    let values = (t0..=t1)
        .map(|t| {
            h.iter()
                .map(|(k, c)| c * input[(t - k - lo) as usize])
                .sum()
        })
        .collect();
    Ok(Filtered {
        times,
        values,
        tail_error,
        rounding_error: (terms + 1.0) * eps * norm * sup,
        sample_error: x.sample_error() * norm,
    })
}

fn filter_density(
    h: &Kernel,
    q: &QuadDensity,
    times: RangeInclusive<i64>,
    tail_error: Option<f64>,
) -> Result<Filtered> {
    let spectrum = h.spectrum_on_grid(q.n())?;
    let (values, quad_error, rounding) =
        q.weighted_samples(&spectrum, *times.start(), *times.end())?;
    Ok(Filtered {
        times,
        values,
        tail_error,
        rounding_error: rounding + h.coeffs.len() as f64 * f64::EPSILON * h.l1_norm() * q.sup_bound(),
        sample_error: quad_error,
    })
}
