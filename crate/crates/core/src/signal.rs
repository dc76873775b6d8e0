//! Two-sided bounded signals x: Z -> C.
//!
//! A signal is either an explicit window of samples, a finite exponential sum
//! (whose spectrum is a finite sum of point masses), or a spectral density
//! synthesised by the uniform quadrature rule.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tone {
    pub amplitude: Complex64,
    pub omega: f64,
}

impl Tone {
    pub fn new(amplitude: Complex64, omega: f64) -> Self {
        Tone { amplitude, omega }
    }

    pub fn real(amplitude: f64, omega: f64) -> Self {
        Tone::new(Complex64::new(amplitude, 0.0), omega)
    }

    #[inline]
    pub fn at(&self, t: i64) -> Complex64 {
        self.amplitude * Complex64::from_polar(1.0, self.omega * t as f64)
    }
}

/// Samples on the window `[t_min, t_min + len - 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    t_min: i64,
    values: Vec<Complex64>,
    sup: f64,
}

impl Samples {
    pub fn new(t_min: i64, values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyWindow);
        }
        if let Some(pos) = values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::NonFiniteSample {
                t: t_min + pos as i64,
            });
        }
        let sup = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        Ok(Samples { t_min, values, sup })
    }

    pub fn t_min(&self) -> i64 {
        self.t_min
    }

    pub fn t_max(&self) -> i64 {
        self.t_min + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, t: i64) -> Option<Complex64> {
        if t < self.t_min || t > self.t_max() {
            None
        } else {
            Some(self.values[(t - self.t_min) as usize])
        }
    }

    /// Iterates over `(t, x(t))` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.t_min + i as i64, *v))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpSum {
    tones: Vec<Tone>,
}

impl ExpSum {
    /// Every frequency must lie in (-pi, pi].
    pub fn new(tones: Vec<Tone>) -> Result<Self> {
        for tone in &tones {
            if !(tone.omega > -PI && tone.omega <= PI) {
                return Err(Error::FrequencyOutOfRange { omega: tone.omega });
            }
            if !(tone.amplitude.re.is_finite() && tone.amplitude.im.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "non-finite amplitude for tone at {}",
                    tone.omega
                )));
            }
        }
        Ok(ExpSum { tones })
    }

    pub fn tones(&self) -> &[Tone] {
        &self.tones
    }

    /// Sum of amplitude magnitudes, an upper bound on sup |x|.
    pub fn l1_amplitude(&self) -> f64 {
        self.tones.iter().map(|t| t.amplitude.norm()).sum()
    }

    pub fn at(&self, t: i64) -> Complex64 {
        self.tones.iter().map(|tone| tone.at(t)).sum()
    }
}

/// A signal given through its spectral density X on [-pi, pi),
/// x(t) = (1/2pi) * integral X(w) exp(iwt) dw, evaluated with the uniform
/// N-point rule.
///
/// The rule is periodic in t with period N, so samples are only served for
/// |t| <= N/4 (the "reach").
#[derive(Debug, Clone, PartialEq)]
pub struct QuadDensity {
    density: Vec<Complex64>,
    table: Vec<Complex64>,
    reach: i64,
    sup: f64,
    quad_error: f64,
}

impl QuadDensity {
    pub fn new<F>(density: F, n: usize) -> Result<Self>
    where
        F: Fn(f64) -> Complex64,
    {
        quadrature::check_size(n)?;
        if n < 16 {
            return Err(Error::QuadratureSize {
                n,
                reason: "density synthesis needs at least 16 nodes",
            });
        }
        let density = quadrature::sample(density, n)?;
        Ok(Self::from_grid(density))
    }

    /// From density values already sampled on the N-point grid.
    pub fn from_grid_values(density: Vec<Complex64>) -> Result<Self> {
        let n = density.len();
        quadrature::check_size(n)?;
        if n < 16 {
            return Err(Error::QuadratureSize {
                n,
                reason: "density synthesis needs at least 16 nodes",
            });
        }
        if let Some(j) = density.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFiniteSpectrum {
                omega: quadrature::node(j, n),
            });
        }
        Ok(Self::from_grid(density))
    }

    fn from_grid(density: Vec<Complex64>) -> Self {
        let n = density.len();
        let table = quadrature::coefficients(&density);
        // Same rule on every other node: a free N/2-point estimate.
        let coarse: Vec<Complex64> = density.iter().step_by(2).copied().collect();
        let coarse_table = quadrature::coefficients(&coarse);
        let half = (n / 2) as i64;
        let reach = (n / 4) as i64;
        let coarse_reach = (n / 8) as i64;
        let fine_at = |t: i64| table[(t + half) as usize];
        let coarse_at = |t: i64| coarse_table[(t + half / 2) as usize];
        let quad_error = (-coarse_reach..=coarse_reach)
            .map(|t| (fine_at(t) - coarse_at(t)).norm())
            .fold(0.0, f64::max);
        let sup = (-reach..=reach)
            .map(|t| fine_at(t).norm())
            .fold(0.0, f64::max);
        QuadDensity {
            density,
            table,
            reach,
            sup,
            quad_error,
        }
    }

    pub fn n(&self) -> usize {
        self.density.len()
    }

    /// sup |x| over the reach plus the quadrature error estimate.
    pub fn sup_bound(&self) -> f64 {
        self.sup + self.quad_error
    }

    /// Largest |t| for which samples are served.
    pub fn reach(&self) -> i64 {
        self.reach
    }

    /// Density values on the quadrature grid.
    pub fn density(&self) -> &[Complex64] {
        &self.density
    }

    /// Max deviation between the N-point and N/2-point rules; a conservative
    /// estimate of the sample error.
    pub fn quad_error(&self) -> f64 {
        self.quad_error
    }

    pub fn get(&self, t: i64) -> Option<Complex64> {
        if t.abs() > self.reach {
            None
        } else {
            Some(self.table[(t + (self.n() / 2) as i64) as usize])
        }
    }

    /// Samples of the signal whose density is `X(w_j) * weights[j]`, for t in
    /// `[t0, t1]` (within the reach). Also returns the embedded-rule error
    /// estimate and a rounding bound.
    pub fn weighted_samples(
        &self,
        weights: &[Complex64],
        t0: i64,
        t1: i64,
    ) -> Result<(Vec<Complex64>, f64, f64)> {
        let n = self.n();
        if weights.len() != n {
            return Err(Error::QuadratureSize {
                n: weights.len(),
                reason: "weights must match the density grid",
            });
        }
        let reach = self.reach;
        if t0 < -reach || t1 > reach {
            return Err(Error::OutsideWindow {
                index: if t0 < -reach { t0 } else { t1 },
                t_min: -reach,
                t_max: reach,
            });
        }
        let product: Vec<Complex64> = self
            .density
            .iter()
            .zip(weights)
            .map(|(a, b)| a * b)
            .collect();
        if product.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFiniteSpectrum { omega: f64::NAN });
        }
        let table = quadrature::coefficients(&product);
        let coarse: Vec<Complex64> = product.iter().step_by(2).copied().collect();
        let coarse_table = quadrature::coefficients(&coarse);
        let half = (n / 2) as i64;
        let check = (n / 8) as i64;
        let quad_error = (-check..=check)
            .map(|t| (table[(t + half) as usize] - coarse_table[(t + half / 2) as usize]).norm())
            .fold(0.0, f64::max);
        let max_term = product.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let rounding = ((n as f64).log2() + 1.0) * f64::EPSILON * max_term;
        let values = (t0..=t1).map(|t| table[(t + half) as usize]).collect();
        Ok((values, quad_error, rounding))
    }

    /// (1/2pi) * integral X(w) g(w) dw by the same rule, and its distance to
    /// the N/2-point rule as an error estimate.
    pub fn integrate_against<G>(&self, g: G) -> (Complex64, f64)
    where
        G: Fn(f64) -> Complex64,
    {
        let n = self.n();
        let (mut even, mut odd) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for (j, x) in self.density.iter().enumerate() {
            let v = x * g(quadrature::node(j, n));
            if j % 2 == 0 {
                even += v;
            } else {
                odd += v;
            }
        }
        let full = (even + odd) / n as f64;
        // every other node is the N/2 rule
        let half = even * 2.0 / n as f64;
        (full, (full - half).norm())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SignalSource {
    Samples(Samples),
    ExpSum(ExpSum),
    QuadDensity(QuadDensity),
}

impl SignalSource {
    pub fn samples(t_min: i64, values: Vec<Complex64>) -> Result<Self> {
        Samples::new(t_min, values).map(SignalSource::Samples)
    }

    pub fn exp_sum(tones: Vec<Tone>) -> Result<Self> {
        ExpSum::new(tones).map(SignalSource::ExpSum)
    }

    pub fn tone(amplitude: f64, omega: f64) -> Result<Self> {
        Self::exp_sum(vec![Tone::real(amplitude, omega)])
    }

    pub fn quad_density<F>(density: F, n: usize) -> Result<Self>
    where
        F: Fn(f64) -> Complex64,
    {
        QuadDensity::new(density, n).map(SignalSource::QuadDensity)
    }

    /// x(t). Fails outside the representable range.
    pub fn sample(&self, t: i64) -> Result<Complex64> {
        match self {
            SignalSource::Samples(s) => s.get(t).ok_or(Error::OutsideWindow {
                index: t,
                t_min: s.t_min(),
                t_max: s.t_max(),
            }),
            SignalSource::ExpSum(e) => Ok(e.at(t)),
            SignalSource::QuadDensity(q) => q.get(t).ok_or(Error::OutsideWindow {
                index: t,
                t_min: -q.reach(),
                t_max: q.reach(),
            }),
        }
    }

    /// Representable range, `None` for unbounded (exponential sums).
    pub fn window(&self) -> Option<(i64, i64)> {
        match self {
            SignalSource::Samples(s) => Some((s.t_min(), s.t_max())),
            SignalSource::ExpSum(_) => None,
            SignalSource::QuadDensity(q) => Some((-q.reach(), q.reach())),
        }
    }

    /// Checks that `[lo, hi]` lies inside the representable range.
    pub fn require_range(&self, lo: i64, hi: i64) -> Result<()> {
        if let Some((t_min, t_max)) = self.window() {
            if lo < t_min {
                return Err(Error::OutsideWindow {
                    index: lo,
                    t_min,
                    t_max,
                });
            }
            if hi > t_max {
                return Err(Error::OutsideWindow {
                    index: hi,
                    t_min,
                    t_max,
                });
            }
        }
        Ok(())
    }

    /// sup |x| over the representable range (an upper bound for sums).
    pub fn sup_bound(&self) -> f64 {
        match self {
            SignalSource::Samples(s) => s.sup,
            SignalSource::ExpSum(e) => e.l1_amplitude(),
            SignalSource::QuadDensity(q) => q.sup_bound(),
        }
    }

    /// Error carried by each sample (0 for exact variants).
    pub fn sample_error(&self) -> f64 {
        match self {
            SignalSource::QuadDensity(q) => q.quad_error,
            _ => 0.0,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, SignalSource::QuadDensity(_))
    }

    /// Samples on `[lo, hi]` as an explicit window.
    pub fn to_samples(&self, lo: i64, hi: i64) -> Result<Samples> {
        if hi < lo {
            return Err(Error::EmptyWindow);
        }
        let values = (lo..=hi)
            .map(|t| self.sample(t))
            .collect::<Result<Vec<_>>>()?;
        Samples::new(lo, values)
    }
}
