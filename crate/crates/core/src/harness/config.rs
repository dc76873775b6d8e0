//! JSON configuration for the CLI subcommands.
//!
//! Every config names a `signal` (see [`SignalSpec`]) plus the parameters of
//! its subcommand. Unknown fields are rejected so typos surface as config
//! errors rather than silently taking defaults.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::csvio;
use crate::harness::generators::{self, Profile};
use crate::predictor::PredictorConfig;
use crate::quadrature;
use crate::recovery::{Mode, VariantsConfig, DEFAULT_RIDGE};
use crate::signal::{SignalSource, Tone};

pub const DEFAULT_SEED: u64 = 0;

/// A real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Amplitude {
    Real(f64),
    Complex([f64; 2]),
}

impl Amplitude {
    pub fn value(self) -> Complex64 {
        match self {
            Amplitude::Real(re) => Complex64::new(re, 0.0),
            Amplitude::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToneSpec {
    pub amplitude: Amplitude,
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    Constant { value: f64 },
    /// sum of c_k exp(i w k), given as [k, re, im] triples.
    Trig { terms: Vec<(i64, f64, f64)> },
}

impl Default for ProfileSpec {
    fn default() -> Self {
        ProfileSpec::Constant { value: 1.0 }
    }
}

impl ProfileSpec {
    fn profile(&self) -> Profile {
        match self {
            ProfileSpec::Constant { value } => Profile::Constant(*value),
            ProfileSpec::Trig { terms } => Profile::Trig(
                terms
                    .iter()
                    .map(|&(k, re, im)| (k, Complex64::new(re, im)))
                    .collect(),
            ),
        }
    }
}

fn default_n() -> usize {
    quadrature::DEFAULT_QUADRATURE_SIZE
}

fn default_half_width() -> usize {
    256
}

/// Signal sources the harness can build.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalSpec {
    ExpSum {
        tones: Vec<ToneSpec>,
    },
    /// Seeded uniform noise through the trapezoid filter, served on [lo, hi].
    FilteredNoise {
        #[serde(default)]
        seed: Option<u64>,
        lo: i64,
        hi: i64,
        p: f64,
        q: f64,
        #[serde(rename = "K", default = "default_half_width")]
        half_width: usize,
    },
    /// Any other spec through the trapezoid filter.
    BandLimited {
        base: Box<SignalSpec>,
        p: f64,
        q: f64,
        #[serde(rename = "K", default = "default_half_width")]
        half_width: usize,
    },
    DegenerateDensity {
        omega_hat: f64,
        c: f64,
        q_exp: f64,
        #[serde(default)]
        profile: ProfileSpec,
        #[serde(rename = "N", default = "default_n")]
        n: usize,
    },
    /// One side of a pair of signals with disjoint gaps that agree off the
    /// support of `y` (arcs as [start, length]).
    GapPair {
        y: Vec<(i64, f64, f64)>,
        zero_arc: (f64, f64),
        one_arc: (f64, f64),
        #[serde(default)]
        second: bool,
        #[serde(rename = "N", default = "default_n")]
        n: usize,
    },
    CsvFile {
        path: PathBuf,
    },
}

/// A built signal plus what went into it.
#[derive(Debug, Clone, PartialEq)]
pub struct BuiltSignal {
    pub signal: SignalSource,
    /// Seed actually used, when the spec is randomized.
    pub seed: Option<u64>,
    /// Bound on the distance to the exactly specified signal.
    pub tail_bound: f64,
    /// Zero-filled times of a CSV input.
    pub zero_filled: Vec<i64>,
    /// Whether the samples are the exact specified signal (not read from file).
    pub has_truth: bool,
}

impl SignalSpec {
    /// Builds the signal. Relative CSV paths resolve against `base_dir`; a
    /// `seed_override` replaces any seed in the spec.
    pub fn build(&self, base_dir: &Path, seed_override: Option<u64>) -> Result<BuiltSignal> {
        let plain = |signal| BuiltSignal {
            signal,
            seed: None,
            tail_bound: 0.0,
            zero_filled: Vec::new(),
            has_truth: true,
        };
        match self {
            SignalSpec::ExpSum { tones } => {
                let tones = tones.iter().map(|t| Tone::new(t.amplitude.value(), t.omega)).collect();
                Ok(plain(SignalSource::exp_sum(tones)?))
            }
            SignalSpec::FilteredNoise {
                seed,
                lo,
                hi,
                p,
                q,
                half_width,
            } => {
                let seed = seed_override.or(*seed).unwrap_or(DEFAULT_SEED);
                let bl = generators::gen_filtered_noise(seed, *lo, *hi, *p, *q, *half_width)?;
                Ok(BuiltSignal {
                    signal: bl.signal,
                    seed: Some(seed),
                    tail_bound: bl.tail_bound,
                    zero_filled: Vec::new(),
                    has_truth: true,
                })
            }
            SignalSpec::BandLimited {
                base,
                p,
                q,
                half_width,
            } => {
                let inner = base.build(base_dir, seed_override)?;
                let bl = generators::gen_band_limited(&inner.signal, *p, *q, *half_width)?;
                Ok(BuiltSignal {
                    signal: bl.signal,
                    tail_bound: bl.tail_bound + inner.tail_bound,
                    ..inner
                })
            }
            SignalSpec::DegenerateDensity {
                omega_hat,
                c,
                q_exp,
                profile,
                n,
            } => {
                let d = generators::gen_degenerate(*omega_hat, *c, *q_exp, &profile.profile(), *n)?;
                Ok(plain(d.signal))
            }
            SignalSpec::GapPair {
                y,
                zero_arc,
                one_arc,
                second,
                n,
            } => {
                let y: Vec<(i64, Complex64)> = y.iter().map(|&(t, re, im)| (t, Complex64::new(re, im))).collect();
                let pair = generators::gen_gap_pair(&y, *zero_arc, *one_arc, *n)?;
                Ok(plain(if *second { pair.second } else { pair.first }))
            }
            SignalSpec::CsvFile { path } => {
                let path = if path.is_absolute() {
                    path.clone()
                } else {
                    base_dir.join(path)
                };
                let read = csvio::read_series(&path)?;
                let seed = read
                    .meta
                    .iter()
                    .find(|(k, _)| k == "seed")
                    .and_then(|(_, v)| v.parse().ok());
                let tail_bound = read
                    .meta
                    .iter()
                    .find(|(k, _)| k == "tail_bound")
                    .and_then(|(_, v)| v.parse().ok())
                    .unwrap_or(0.0);
                Ok(BuiltSignal {
                    signal: read.signal,
                    seed,
                    tail_bound,
                    zero_filled: read.zero_filled,
                    has_truth: false,
                })
            }
        }
    }
}

/// A scalar or a list; either way a nonempty grid after validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    One(f64),
    Many(Vec<f64>),
}

impl Grid {
    pub fn values(&self, name: &str) -> Result<Vec<f64>> {
        let v = match self {
            Grid::One(x) => vec![*x],
            Grid::Many(v) => v.clone(),
        };
        if v.is_empty() {
            return Err(Error::Config(format!("'{name}' grid is empty")));
        }
        Ok(v)
    }
}

fn default_r_grid() -> Grid {
    Grid::One(0.5)
}

fn default_pi() -> f64 {
    std::f64::consts::PI
}

fn default_predict_half_width() -> usize {
    512
}

fn default_predict_n() -> usize {
    1 << 16
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapSpec {
    /// Open intervals (a, b) inside (-pi, pi].
    pub intervals: Vec<(f64, f64)>,
    #[serde(default = "default_bank_size")]
    pub bank_size: usize,
    #[serde(rename = "K", default = "default_half_width")]
    pub half_width: usize,
}

fn default_bank_size() -> usize {
    12
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegeneracySpec {
    pub omega_hat: f64,
    pub c: f64,
    pub q_exp: f64,
    pub nus: Vec<f64>,
}

/// `gen`: write a signal window, certified against a gap and/or a
/// degeneracy sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenConfig {
    pub signal: SignalSpec,
    pub window: (i64, i64),
    #[serde(default)]
    pub gap: Option<GapSpec>,
    #[serde(default)]
    pub degeneracy: Option<DegeneracySpec>,
    #[serde(default)]
    pub svg: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelSpec {
    Trapezoid {
        p: f64,
        q: f64,
        #[serde(rename = "K", default = "default_half_width")]
        half_width: usize,
    },
    Hgamma(PredictorConfig),
    CsvFile {
        path: PathBuf,
    },
}

/// `filter`: apply a kernel over a window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    pub signal: SignalSpec,
    pub kernel: KernelSpec,
    pub window: (i64, i64),
    #[serde(default)]
    pub svg: bool,
}

/// `predict`: a (gamma x r) sweep of one-step predictions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictConfig {
    pub signal: SignalSpec,
    pub gamma: Grid,
    #[serde(default = "default_r_grid")]
    pub r: Grid,
    #[serde(default = "default_pi")]
    pub omega_hat: f64,
    #[serde(rename = "K", default = "default_predict_half_width")]
    pub half_width: usize,
    #[serde(rename = "N", default = "default_predict_n")]
    pub n: usize,
    /// Tone frequency for the oracle column; inferred for single-tone sums.
    #[serde(default)]
    pub omega0: Option<f64>,
    pub window: (i64, i64),
    #[serde(default)]
    pub svg: bool,
}

impl PredictConfig {
    /// Grid cells in sweep order (gamma outer, r inner), validated.
    pub fn cells(&self) -> Result<Vec<PredictorConfig>> {
        let gammas = self.gamma.values("gamma")?;
        let rs = self.r.values("r")?;
        let mut out = Vec::with_capacity(gammas.len() * rs.len());
        for &gamma in &gammas {
            for &r in &rs {
                out.push(
                    PredictorConfig::new(gamma, r, self.omega_hat, self.half_width, self.n)
                        .map_err(|e| Error::Config(e.to_string()))?,
                );
            }
        }
        Ok(out)
    }
}

fn default_mode() -> Mode {
    Mode::Full
}

fn default_ridge() -> f64 {
    DEFAULT_RIDGE
}

/// `recover`: fill the samples in `missing` from a known gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecoverConfig {
    pub signal: SignalSpec,
    pub missing: Vec<i64>,
    pub gap: GapSpec,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default = "default_ridge")]
    pub ridge: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CandidateSpec {
    /// `count` arcs of length Omega with equally spaced starts.
    Grid { grid: usize },
    Explicit(Vec<Vec<(f64, f64)>>),
}

/// `recover-variants`: solve against every candidate gap of measure Omega.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariantsSpec {
    pub signal: SignalSpec,
    pub missing: Vec<i64>,
    pub omega: f64,
    pub candidates: CandidateSpec,
    #[serde(default = "default_bank_size")]
    pub bank_size: usize,
    #[serde(rename = "K", default = "default_half_width")]
    pub half_width: usize,
    #[serde(default = "default_ridge")]
    pub ridge: f64,
    #[serde(default)]
    pub cluster_tol: Option<f64>,
    #[serde(default)]
    pub accept_tol: Option<f64>,
}

impl VariantsSpec {
    pub fn variants_config(&self) -> VariantsConfig {
        let d = VariantsConfig::default();
        VariantsConfig {
            bank_size: self.bank_size,
            half_width: self.half_width,
            ridge: self.ridge,
            cluster_tol: self.cluster_tol.unwrap_or(d.cluster_tol),
            accept_tol: self.accept_tol.unwrap_or(d.accept_tol),
        }
    }
}

/// `spectrum`: partial sums X_m on a frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub signal: SignalSpec,
    pub m: Vec<u64>,
    /// Number of equally spaced frequencies in (-pi, pi].
    pub points: usize,
    #[serde(default)]
    pub svg: bool,
}

/// Reads and parses a JSON config; every failure is a config error.
pub fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}
