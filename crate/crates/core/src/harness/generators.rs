//! Signal generators with known spectral structure.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::quadrature;
use crate::signal::{QuadDensity, SignalSource, Tone};
use crate::transfer::{apply_transfer, trapezoid_kernel, trapezoid_profile};

/// sum_k a_k exp(i w_k t).
pub fn gen_exp_sum(tones: &[Tone]) -> Result<SignalSource> {
    SignalSource::exp_sum(tones.to_vec())
}

/// A low-pass filtered signal and how far it may be from exact band limits.
#[derive(Debug, Clone, PartialEq)]
pub struct BandLimited {
    pub signal: SignalSource,
    /// Bound on sup |xhat - (exactly filtered x)|; 0 when exact.
    pub tail_bound: f64,
}

/// Filters `base` with the trapezoid profile H_{p,q}.
///
/// Exponential sums and densities are filtered exactly on the spectral side
/// (amplitudes or density times the profile), so the stop band
/// (-pi, -q) u (q, pi) carries no spectrum at all. Windowed samples are
/// convolved with the kernel truncated at `half_width`; the output window
/// shrinks by `half_width` on both sides and carries sup|x| * tail.
pub fn gen_band_limited(base: &SignalSource, p: f64, q: f64, half_width: usize) -> Result<BandLimited> {
    let kernel = trapezoid_kernel(p, q, half_width)?;
    match base {
        SignalSource::ExpSum(e) => {
            let tones = e
                .tones()
                .iter()
                .map(|t| Tone::new(t.amplitude * trapezoid_profile(p, q, t.omega), t.omega))
                .collect();
            Ok(BandLimited {
                signal: SignalSource::exp_sum(tones)?,
                tail_bound: 0.0,
            })
        }
        SignalSource::QuadDensity(d) => {
            let n = d.n();
            let density = d
                .density()
                .iter()
                .enumerate()
                .map(|(j, v)| v * trapezoid_profile(p, q, quadrature::node(j, n)))
                .collect();
            Ok(BandLimited {
                signal: SignalSource::QuadDensity(QuadDensity::from_grid_values(density)?),
                tail_bound: 0.0,
            })
        }
        SignalSource::Samples(s) => {
            let k = half_width as i64;
            let (lo, hi) = (s.t_min() + k, s.t_max() - k);
            if hi < lo {
                return Err(Error::InvalidParameter(format!(
                    "window [{}, {}] is too short for half-width {half_width}",
                    s.t_min(),
                    s.t_max()
                )));
            }
            let out = apply_transfer(&kernel, base, lo..=hi)?;
            let tail_bound = out.error_bound().unwrap_or(f64::INFINITY);
            Ok(BandLimited {
                signal: SignalSource::samples(lo, out.values)?,
                tail_bound,
            })
        }
    }
}

/// Real noise, uniform on [-amplitude, amplitude], on `[t_min, t_min + len)`,
/// from a ChaCha8 stream seeded with `seed`.
pub fn gen_noise(seed: u64, t_min: i64, len: usize, amplitude: f64) -> Result<SignalSource> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..len)
        .map(|_| Complex64::new(rng.gen_range(-amplitude..=amplitude), 0.0))
        .collect();
    SignalSource::samples(t_min, values)
}

/// Seeded noise on `[lo - K, hi + K]` pushed through the trapezoid filter,
/// leaving a band-limited window on `[lo, hi]`.
pub fn gen_filtered_noise(
    seed: u64,
    lo: i64,
    hi: i64,
    p: f64,
    q: f64,
    half_width: usize,
) -> Result<BandLimited> {
    if hi < lo {
        return Err(Error::EmptyWindow);
    }
    let k = half_width as i64;
    let noise = gen_noise(seed, lo - k, (hi - lo + 2 * k + 1) as usize, 1.0)?;
    gen_band_limited(&noise, p, q, half_width)
}

/// A smooth periodic spectral profile.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Constant(f64),
    /// sum of c_k exp(i w k).
    Trig(Vec<(i64, Complex64)>),
}

impl Profile {
    pub fn at(&self, omega: f64) -> Complex64 {
        match self {
            Profile::Constant(c) => Complex64::new(*c, 0.0),
            Profile::Trig(terms) => terms
                .iter()
                .map(|(k, c)| c * Complex64::from_polar(1.0, omega * *k as f64))
                .sum(),
        }
    }
}

pub const STABILITY_LIMIT: f64 = 1e-10;

/// A degenerate signal and the stability check that accepted it.
#[derive(Debug, Clone, PartialEq)]
pub struct Degenerate {
    pub signal: SignalSource,
    /// max |x_N(t) - x_{2N}(t)| over |t| <= N/4.
    pub doubling_change: f64,
}

/// Density exp(-c / |e^{iw} - e^{i w_hat}|^q) * profile(w), synthesised with
/// N nodes. The density vanishes to all orders at w_hat.
///
/// Fails with `QuadratureTooCoarse` when doubling N moves any served sample by
/// more than 1e-10.
pub fn gen_degenerate(omega_hat: f64, c: f64, q_exp: f64, profile: &Profile, n: usize) -> Result<Degenerate> {
    if !(omega_hat > -PI && omega_hat <= PI) {
        return Err(Error::FrequencyOutOfRange { omega: omega_hat });
    }
    if !(c > 0.0 && q_exp > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "degenerate density needs c > 0 and q > 0, got c = {c}, q = {q_exp}"
        )));
    }
    let e_hat = Complex64::from_polar(1.0, omega_hat);
    let density = |w: f64| {
        let d = (Complex64::from_polar(1.0, w) - e_hat).norm();
        profile.at(w) * (-c / d.powf(q_exp)).exp()
    };
    let coarse = QuadDensity::new(density, n)?;
    let fine = QuadDensity::new(density, 2 * n)?;
    let change = (-coarse.reach()..=coarse.reach())
        .map(|t| (coarse.get(t).unwrap() - fine.get(t).unwrap()).norm())
        .fold(0.0, f64::max);
    if !(change <= STABILITY_LIMIT) {
        return Err(Error::QuadratureTooCoarse {
            change,
            limit: STABILITY_LIMIT,
        });
    }
    Ok(Degenerate {
        signal: SignalSource::QuadDensity(coarse),
        doubling_change: change,
    })
}

/// C-infinity step: 0 for s <= 0, 1 for s >= 1.
fn smooth_step(s: f64) -> f64 {
    let g = |u: f64| if u <= 0.0 { 0.0 } else { (-1.0 / u).exp() };
    let (a, b) = (g(s), g(1.0 - s));
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

/// Two signals that agree off `missing` and have disjoint gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct GapPair {
    /// Has a gap on `zero_arc` (and so on `d1`).
    pub first: SignalSource,
    /// `first + y`; has a gap on `one_arc` (and so on `d2`).
    pub second: SignalSource,
    /// The difference y on `missing`.
    pub difference: Vec<(i64, Complex64)>,
}

/// Builds X1 = -phi Y and X2 = (1 - phi) Y, where Y is the spectrum of the
/// finitely supported `y` and phi is a smooth periodic switch equal to 0 on
/// `zero_arc` and 1 on `one_arc` (arcs given as (start, length), disjoint).
/// Then x2 - x1 = y vanishes off the support of y, X1 vanishes on
/// `zero_arc` and X2 on `one_arc`.
pub fn gen_gap_pair(
    y: &[(i64, Complex64)],
    zero_arc: (f64, f64),
    one_arc: (f64, f64),
    n: usize,
) -> Result<GapPair> {
    let two_pi = 2.0 * PI;
    let (z0, zl) = zero_arc;
    let (o0, ol) = one_arc;
    // Going around from the end of the zero arc: rise, one arc, fall.
    let rise = (o0 - (z0 + zl)).rem_euclid(two_pi);
    let fall = (z0 - (o0 + ol)).rem_euclid(two_pi);
    if !(zl > 0.0 && ol > 0.0 && rise > 0.0 && fall > 0.0 && zl + ol + rise + fall <= two_pi + 1e-9) {
        return Err(Error::InvalidParameter("arcs must be disjoint with room between them".into()));
    }
    let phi = |w: f64| {
        let u = (w - (z0 + zl)).rem_euclid(two_pi);
        if u < rise {
            smooth_step(u / rise)
        } else if u <= rise + ol {
            1.0
        } else if u < rise + ol + fall {
            1.0 - smooth_step((u - rise - ol) / fall)
        } else {
            0.0
        }
    };
    let spectrum = |w: f64| -> Complex64 {
        y.iter()
            .map(|(t, v)| v * Complex64::from_polar(1.0, -w * *t as f64))
            .sum()
    };
    let first = SignalSource::quad_density(|w| -phi(w) * spectrum(w), n)?;
    let second = SignalSource::quad_density(|w| (1.0 - phi(w)) * spectrum(w), n)?;
    Ok(GapPair {
        first,
        second,
        difference: y.to_vec(),
    })
}
