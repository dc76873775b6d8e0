//! The causal one-step predictor family
//! `H_g(z) = z (1 - exp(-g / (z + 1 - g^{-r})))`.
//!
//! `H_g(e^{iw})` approximates the unit advance `e^{iw}` away from `w = pi`,
//! where it blows up like `exp(g^{1+r})`. Signals whose spectrum degenerates
//! at some other `w_hat` are shifted so that `w_hat` lands on `pi`, filtered,
//! and shifted back.
//!
//! Kernel coefficients come from the uniform quadrature rule applied to the
//! closed-form spectrum. When the spectrum peak is large, the f64 rule leaves
//! an absolute noise floor of about `eps * max|H|` on every coefficient, so the
//! large samples and the transform are then carried in extended precision.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hp::{self, HpComplex, HpContext};
use crate::quadrature;
use crate::signal::SignalSource;
use crate::transfer::{apply_transfer, truncate_table, Causality, Kernel};

/// Largest admissible `g^{1+r}`; `exp` of it must stay far from overflow.
pub const EXPONENT_LIMIT: f64 = 700.0;

/// Default causality tolerance for predictor kernels.
pub const DEFAULT_CAUSAL_TOL: f64 = 1e-8;

fn default_r() -> f64 {
    0.5
}
fn default_omega_hat() -> f64 {
    PI
}
fn default_half_width() -> usize {
    512
}
fn default_n() -> usize {
    1 << 16
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictorConfig {
    pub gamma: f64,
    #[serde(default = "default_r")]
    pub r: f64,
    #[serde(default = "default_omega_hat")]
    pub omega_hat: f64,
    #[serde(rename = "K", default = "default_half_width")]
    pub half_width: usize,
    #[serde(rename = "N", default = "default_n")]
    pub n: usize,
}

impl PredictorConfig {
    pub fn new(gamma: f64, r: f64, omega_hat: f64, half_width: usize, n: usize) -> Result<Self> {
        let cfg = PredictorConfig {
            gamma,
            r,
            omega_hat,
            half_width,
            n,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// r = 0.5, w_hat = pi, K = 512, N = 2^16.
    pub fn with_gamma(gamma: f64) -> Result<Self> {
        Self::new(gamma, default_r(), default_omega_hat(), default_half_width(), default_n())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("gamma = {} must be > 0", self.gamma)));
        }
        if !(self.r > 0.0 && self.r < 1.0) {
            return Err(Error::InvalidParameter(format!("r = {} must lie in (0, 1)", self.r)));
        }
        if !(self.omega_hat > -PI && self.omega_hat <= PI) {
            return Err(Error::FrequencyOutOfRange {
                omega: self.omega_hat,
            });
        }
        quadrature::check_size(self.n)?;
        if self.n < 4 * self.half_width {
            return Err(Error::QuadratureSize {
                n: self.n,
                reason: "must be at least 4 * half-width",
            });
        }
        Ok(())
    }

    /// g^{1+r}, the log of the spectrum peak at w = pi.
    pub fn peak_exponent(&self) -> f64 {
        self.gamma.powf(1.0 + self.r)
    }
}

/// H_g(z) together with U_g(z) = 1 - exp(-g / (z - z0)), z0 = g^{-r} - 1.
/// On the unit circle `h` is V_g(w) = e^{iw} U_g(e^{iw}).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HgammaValue {
    pub h: Complex64,
    pub u: Complex64,
    /// ln|H| + i arg H; finite even when `h` is not representable.
    pub log_h: Complex64,
    /// exp overflowed; `h` and `u` are infinite, only `log_h` is meaningful.
    pub saturated: bool,
}

/// Evaluates H_g at `z`.
pub fn hgamma_value(gamma: f64, r: f64, z: Complex64) -> Result<HgammaValue> {
    let z0 = gamma.powf(-r) - 1.0;
    let d = z - z0;
    if d.norm() == 0.0 {
        return Err(Error::Singularity {
            z_re: z.re,
            z_im: z.im,
        });
    }
    let w = -gamma / d;
    if w.re > EXPONENT_LIMIT {
        // 1 - e^w = -e^w (1 - e^{-w}); the second factor is 1 to working precision.
        let log_u = w + Complex64::new(0.0, PI);
        let inf = Complex64::new(f64::INFINITY, f64::INFINITY);
        return Ok(HgammaValue {
            h: inf,
            u: inf,
            log_h: z.ln() + log_u,
            saturated: true,
        });
    }
    let u = Complex64::new(1.0, 0.0) - w.exp();
    let h = z * u;
    Ok(HgammaValue {
        h,
        u,
        log_h: h.ln(),
        saturated: false,
    })
}

/// H_g(e^{iw}).
pub fn hgamma_on_circle(gamma: f64, r: f64, omega: f64) -> Result<HgammaValue> {
    hgamma_value(gamma, r, Complex64::from_polar(1.0, omega))
}

/// Wraps an angle into (-pi, pi].
pub fn wrap(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// |x(t+1) - xhat(t)| for x(t) = exp(i w0 t):
/// exp(-g Re(1 / (e^{i th} + 1 - g^{-r}))), th = w0 + pi - w_hat wrapped.
pub fn sinusoid_error_oracle(omega0: f64, cfg: &PredictorConfig) -> f64 {
    let theta = wrap(omega0 + PI - cfg.omega_hat);
    let d = Complex64::from_polar(1.0, theta) + 1.0 - cfg.gamma.powf(-cfg.r);
    (-cfg.gamma * (1.0 / d).re).exp()
}

/// A predictor kernel and its quality diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct HgammaKernel {
    pub kernel: Kernel,
    /// max_{k<0} |h_k| as computed; exactly zero in exact arithmetic.
    pub causality_residual: f64,
    /// l1 mass of computed coefficients with K < |k| < N/2.
    pub truncation_tail: f64,
    /// Bound on the error of the stored coefficients with |k| <= K.
    pub coefficient_error: f64,
    /// max_j |H_K(e^{i w_j}) - H(e^{i w_j})| over the grid.
    pub reconstruction_error: f64,
    /// max |H| on the grid.
    pub peak: f64,
    pub extended_precision: bool,
}

impl HgammaKernel {
    /// Fails with `NotCausal` when the residual exceeds `tol`.
    pub fn require_causal(&self, tol: f64) -> Result<()> {
        if self.causality_residual > tol {
            Err(Error::NotCausal {
                residual: self.causality_residual,
                tol,
            })
        } else {
            Ok(())
        }
    }
}

fn grid_spectrum(cfg: &PredictorConfig) -> Result<Vec<Complex64>> {
    (0..cfg.n)
        .map(|j| {
            let w = quadrature::node(j, cfg.n);
            let v = hgamma_on_circle(cfg.gamma, cfg.r, w)?;
            if v.saturated || !(v.h.re.is_finite() && v.h.im.is_finite()) {
                Err(Error::NonFiniteSpectrum { omega: w })
            } else {
                Ok(v.h)
            }
        })
        .collect()
}

fn extended_table(cfg: &PredictorConfig, samples: &[Complex64]) -> Vec<Complex64> {
    let n = cfg.n;
    let mut ctx = HpContext::new(hp::DEFAULT_PRECISION_BITS);
    let roots = ctx.roots_of_unity(n);
    let nodes = hp::unit_circle_nodes(&roots);
    let minus_gamma = ctx.complex(Complex64::new(-cfg.gamma, 0.0));
    let gamma_pow = ctx.powf(cfg.gamma, -cfg.r);
    let z0 = HpComplex {
        re: gamma_pow.sub(&ctx.num(1.0), ctx.p, astro_float::RoundingMode::ToEven),
        im: ctx.num(0.0),
    };
    let one = ctx.complex(Complex64::new(1.0, 0.0));
    let data: Vec<HpComplex> = samples
        .iter()
        .zip(&nodes)
        .map(|(s, z)| {
            // Small samples contribute at most eps to any coefficient.
            if s.norm() <= 1.0 {
                return ctx.complex(*s);
            }
            let d = ctx.sub(z, &z0);
            let w = ctx.mul(&minus_gamma, &ctx.recip(&d));
            let e = ctx.exp(&w);
            let u = ctx.sub(&one, &e);
            ctx.mul(z, &u)
        })
        .collect();
    ctx.coefficients(data, &roots)
}

/// Kernel of H_g by the N-point rule, kept for |k| <= K.
///
/// The causality residual is measured, recorded in the kernel as
/// `Numeric(residual)`, and returned; it is not compared to any tolerance
/// here (see [`HgammaKernel::require_causal`]). The kernel tail bound is the
/// truncation tail plus the coefficient error.
pub fn hgamma_kernel(cfg: &PredictorConfig) -> Result<HgammaKernel> {
    cfg.validate()?;
    let exponent = cfg.peak_exponent();
    if exponent > EXPONENT_LIMIT {
        return Err(Error::OverflowGuard {
            exponent,
            limit: EXPONENT_LIMIT,
        });
    }
    let samples = grid_spectrum(cfg)?;
    let peak = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let extended = peak * f64::EPSILON > 1e-12;
    let table = if extended {
        extended_table(cfg, &samples)
    } else {
        quadrature::coefficients(&samples)
    };
    let (coeffs, truncation_tail) = truncate_table(&table, cfg.half_width);
    let k = cfg.half_width as i64;
    let causality_residual = coeffs[..cfg.half_width]
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    let l1: f64 = coeffs.iter().map(|c| c.norm()).sum();
    // Noise level seen on the (exactly zero) negative side, on every kept
    // coefficient, plus rounding of the stored values.
    let coefficient_error = coeffs.len() as f64 * causality_residual + f64::EPSILON * l1;
    let tail = truncation_tail + coefficient_error;
    let kernel = Kernel::from_parts(
        -k,
        coeffs,
        Some(tail),
        if causality_residual == 0.0 {
            Causality::Proven
        } else {
            Causality::Numeric(causality_residual)
        },
    );
    let rebuilt = kernel.spectrum_on_grid(cfg.n)?;
    let reconstruction_error = rebuilt
        .iter()
        .zip(&samples)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(HgammaKernel {
        kernel,
        causality_residual,
        truncation_tail,
        coefficient_error,
        reconstruction_error,
        peak,
        extended_precision: extended,
    })
}

/// Output of a prediction over a time range.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRun {
    pub times: RangeInclusive<i64>,
    /// xhat(t), the prediction of x(t + 1) from x(s), s <= t.
    pub predicted: Vec<Complex64>,
    /// x(t + 1) where available.
    pub truth: Vec<Option<Complex64>>,
    /// |x(t + 1) - xhat(t)| where the truth is available.
    pub per_step_error: Vec<Option<f64>>,
    /// Tail bound of the (causal) predictor kernel.
    pub kernel_tail: f64,
    /// sup|x| * kernel_tail, the error carried by the kernel.
    pub tail_error: f64,
    /// Floating-point accumulation bound of the convolution.
    pub rounding_error: f64,
}

impl PredictionRun {
    pub fn max_error(&self) -> Option<f64> {
        self.per_step_error
            .iter()
            .flatten()
            .copied()
            .fold(None, |m, e| Some(m.map_or(e, |m: f64| m.max(e))))
    }

    pub fn min_error(&self) -> Option<f64> {
        self.per_step_error
            .iter()
            .flatten()
            .copied()
            .fold(None, |m, e| Some(m.map_or(e, |m: f64| m.min(e))))
    }
}

/// A built predictor: the causal H_g kernel, shifted for `w_hat`.
#[derive(Debug, Clone, PartialEq)]
pub struct Predictor {
    pub config: PredictorConfig,
    pub kernel: HgammaKernel,
    filter: Kernel,
}

impl Predictor {
    pub fn new(cfg: PredictorConfig) -> Result<Self> {
        Self::with_tolerance(cfg, DEFAULT_CAUSAL_TOL)
    }

    /// Builds the kernel and refuses it when its causality residual exceeds
    /// `tol`. The residual coefficients are then dropped (their mass moves
    /// into the tail), so the applied filter is exactly causal.
    pub fn with_tolerance(cfg: PredictorConfig, tol: f64) -> Result<Self> {
        Self::from_kernel(cfg, hgamma_kernel(&cfg)?, tol)
    }

    /// As `with_tolerance`, reusing a kernel already built for `cfg`.
    pub fn from_kernel(cfg: PredictorConfig, kernel: HgammaKernel, tol: f64) -> Result<Self> {
        kernel.require_causal(tol)?;
        let causal = kernel.kernel.clone().into_causal();
        // xhat(t) = sum_k h_k exp(i (w_hat - pi)(k + 1)) x(t - k)
        let shift = cfg.omega_hat - PI;
        let filter = if shift == 0.0 {
            causal
        } else {
            let m = causal.modulated(shift);
            let phase = Complex64::from_polar(1.0, shift);
            Kernel::from_parts(
                m.offset(),
                m.coeffs().iter().map(|c| c * phase).collect(),
                m.tail_bound(),
                m.causality(),
            )
        };
        Ok(Predictor {
            config: cfg,
            kernel,
            filter,
        })
    }

    /// The applied causal filter, x(t) -> xhat(t).
    pub fn filter(&self) -> &Kernel {
        &self.filter
    }

    pub fn predict(&self, x: &SignalSource, times: RangeInclusive<i64>) -> Result<PredictionRun> {
        let out = apply_transfer(&self.filter, x, times.clone())?;
        let truth: Vec<Option<Complex64>> = times.clone().map(|t| x.sample(t + 1).ok()).collect();
        let per_step_error = truth
            .iter()
            .zip(&out.values)
            .map(|(tr, p)| tr.map(|v| (v - p).norm()))
            .collect();
        let kernel_tail = self.filter.tail_bound().unwrap_or(f64::INFINITY);
        Ok(PredictionRun {
            times,
            predicted: out.values,
            truth,
            per_step_error,
            kernel_tail,
            tail_error: out.tail_error.unwrap_or(f64::INFINITY),
            rounding_error: out.rounding_error + out.sample_error,
        })
    }
}

/// Builds the predictor for `cfg` (causality tolerance 1e-8) and runs it.
pub fn predict_one_step(
    x: &SignalSource,
    cfg: &PredictorConfig,
    times: RangeInclusive<i64>,
) -> Result<PredictionRun> {
    Predictor::new(*cfg)?.predict(x, times)
}
