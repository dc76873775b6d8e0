//! Recovery of finitely many missing samples from a spectral gap.
//!
//! For every test function `f` supported in the gap `D`,
//! `sum_{t in M} x(t) f_t = -sum_{t not in M} x(t) f_t`. Each bank member gives
//! one such linear constraint on the unknowns `x(t), t in M`; the system is
//! solved by a Tikhonov-filtered SVD.
//!
//! When only `Re X` (or `Im X`) has the gap, only the real (imaginary) part of
//! each constraint holds, and the unknowns are split into real and imaginary
//! parts. With real test functions those constraints cannot see a
//! perturbation `y` with `y(-t) = -conj(y(t))` (resp. `+conj`), in particular
//! an imaginary (real) change of `x(0)`; such missing sets are flagged
//! ambiguous.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gap::SpectralGap;
use crate::signal::SignalSource;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MissingSet {
    indices: Vec<i64>,
}

impl MissingSet {
    pub fn new<I: IntoIterator<Item = i64>>(indices: I) -> Self {
        let set: BTreeSet<i64> = indices.into_iter().collect();
        MissingSet {
            indices: set.into_iter().collect(),
        }
    }

    pub fn indices(&self) -> &[i64] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, t: i64) -> bool {
        self.indices.binary_search(&t).is_ok()
    }

    /// Whether the set contains 0 or a pair {t, -t}.
    pub fn has_mirror(&self) -> bool {
        self.indices.iter().any(|&t| self.contains(-t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// D is a gap of X.
    #[serde(rename = "full")]
    Full,
    /// D is a gap of Re X.
    #[serde(rename = "real")]
    RealPart,
    /// D is a gap of Im X.
    #[serde(rename = "imag")]
    ImagPart,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Full => "full",
            Mode::RealPart => "real",
            Mode::ImagPart => "imag",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Mode::Full),
            "real" => Ok(Mode::RealPart),
            "imag" => Ok(Mode::ImagPart),
            other => Err(Error::Config(format!(
                "unknown recovery mode '{other}' (expected full, real or imag)"
            ))),
        }
    }
}

/// Floor of the relative Tikhonov parameter. Exact right-hand sides need
/// essentially none; inexact ones raise it (see [`solve_constraints`]).
pub const DEFAULT_RIDGE: f64 = 1e-24;

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryProblem {
    /// The signal; its values on `missing` are never read by the solver
    /// itself (see [`assemble_constraints`] for generator sources).
    pub observed: SignalSource,
    pub missing: MissingSet,
    pub gap: SpectralGap,
    pub mode: Mode,
    /// Floor of the relative Tikhonov parameter.
    pub ridge: f64,
}

impl RecoveryProblem {
    pub fn new(observed: SignalSource, missing: MissingSet, gap: SpectralGap, mode: Mode) -> Self {
        RecoveryProblem {
            observed,
            missing,
            gap,
            mode,
            ridge: DEFAULT_RIDGE,
        }
    }

    pub fn with_ridge(mut self, ridge: f64) -> Self {
        self.ridge = ridge;
        self
    }
}

/// One complex row per bank member: `sum_t a[j][t] z_t = b[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraints {
    pub times: Vec<i64>,
    pub a: Vec<Vec<Complex64>>,
    pub b: Vec<Complex64>,
    /// Bound on the error of each b[j] (window truncation, quadrature).
    pub rhs_bound: f64,
    pub mode: Mode,
}

impl Constraints {
    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Real unknowns (Re z, Im z) and the real rows kept by the mode.
    pub fn real_system(&self) -> (DMatrix<f64>, DVector<f64>) {
        let n = self.times.len();
        let m = self.a.len();
        let blocks: &[bool] = match self.mode {
            Mode::Full => &[true, false],
            Mode::RealPart => &[true],
            Mode::ImagPart => &[false],
        };
        let rows = m * blocks.len();
        let mut mat = DMatrix::zeros(rows, 2 * n);
        let mut rhs = DVector::zeros(rows);
        let mut r = 0;
        for &real_row in blocks {
            for j in 0..m {
                for (i, a) in self.a[j].iter().enumerate() {
                    // (ar + i ai)(zr + i zi) = (ar zr - ai zi) + i (ai zr + ar zi)
                    if real_row {
                        mat[(r, i)] = a.re;
                        mat[(r, n + i)] = -a.im;
                    } else {
                        mat[(r, i)] = a.im;
                        mat[(r, n + i)] = a.re;
                    }
                }
                rhs[r] = if real_row { self.b[j].re } else { self.b[j].im };
                r += 1;
            }
        }
        (mat, rhs)
    }

    /// Max violation of the kept rows at `z`.
    pub fn residual(&self, z: &[Complex64]) -> f64 {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(row, b)| {
                let lhs: Complex64 = row.iter().zip(z).map(|(a, v)| a * v).sum();
                let d = lhs - b;
                match self.mode {
                    Mode::Full => d.norm(),
                    Mode::RealPart => d.re.abs(),
                    Mode::ImagPart => d.im.abs(),
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Builds `A[j][t] = f_{j,t}` for t in M and `b[j] = -<X_{Z \ M}, f_j>`.
///
/// Exponential sums and densities evaluate the off-M pairing in closed form,
/// as the full pairing (weighted point values of the exact bump profiles, or
/// the density integrated against them) minus the M terms; no window
/// truncation enters. Windowed samples sum over the window and carry
/// `sup|x| * (bump mass outside the window)` as `rhs_bound`.
pub fn assemble_constraints(problem: &RecoveryProblem) -> Result<Constraints> {
    let times = problem.missing.indices().to_vec();
    let bank = problem.gap.bank();
    let real_rows = match problem.mode {
        Mode::Full => 2 * bank.len(),
        _ => bank.len(),
    };
    if !times.is_empty() && real_rows < 2 * times.len() {
        return Err(Error::BankTooSmall {
            constraints: real_rows,
            unknowns: 2 * times.len(),
        });
    }
    let a: Vec<Vec<Complex64>> = bank
        .iter()
        .map(|m| times.iter().map(|&t| m.coefficient(t)).collect())
        .collect();
    let x = &problem.observed;
    let mut rhs_bound = 0.0f64;
    let mut b = Vec::with_capacity(bank.len());
    for (member, row) in bank.iter().zip(&a) {
        let value = match (x, member.bump) {
            (SignalSource::ExpSum(e), Some(bump)) => {
                let full: Complex64 = e
                    .tones()
                    .iter()
                    .map(|tone| tone.amplitude * bump.profile(tone.omega))
                    .sum();
                let on_m: Complex64 = times
                    .iter()
                    .zip(row)
                    .map(|(&t, f)| e.at(t) * f)
                    .sum();
                -(full - on_m)
            }
            (SignalSource::QuadDensity(q), Some(bump)) => {
                let (full, integration_error) = q.integrate_against(|w| Complex64::new(bump.profile(w), 0.0));
                let mut on_m = Complex64::new(0.0, 0.0);
                for (&t, f) in times.iter().zip(row) {
                    on_m += x.sample(t)? * f;
                }
                rhs_bound = rhs_bound.max(integration_error + q.quad_error() * member.function.norm_a().max(1.0));
                -(full - on_m)
            }
            _ => {
                let (lo, hi) = match x.window() {
                    Some(w) => w,
                    None => {
                        let s = member.function.support().ok_or(Error::EmptyWindow)?;
                        (*s.start(), *s.end())
                    }
                };
                let mut sum = Complex64::new(0.0, 0.0);
                for t in lo..=hi {
                    if problem.missing.contains(t) {
                        continue;
                    }
                    let f = member.coefficient(t);
                    if f.re != 0.0 || f.im != 0.0 {
                        sum += x.sample(t)? * f;
                    }
                }
                // Mass of f outside [lo, hi].
                let outside = match member.bump {
                    Some(bump) => {
                        let k = lo.unsigned_abs().min(hi.unsigned_abs()) as usize;
                        if lo <= 0 && hi >= 0 {
                            bump.coefficient_tail(k)
                        } else {
                            f64::INFINITY
                        }
                    }
                    None => {
                        let inside: f64 = (lo..=hi).map(|t| member.function.coeff(t).norm()).sum();
                        (member.function.norm_a() - inside).max(0.0)
                    }
                };
                rhs_bound = rhs_bound.max(x.sup_bound() * outside);
                -sum
            }
        };
        b.push(value);
    }
    Ok(Constraints {
        times,
        a,
        b,
        rhs_bound,
        mode: problem.mode,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    pub times: Vec<i64>,
    pub values: Vec<Complex64>,
    /// Max constraint violation at the solution.
    pub residual: f64,
    /// sigma_max / sigma_min of the real system.
    pub condition: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// Error bound carried by the right-hand side.
    pub rhs_bound: f64,
    pub ambiguous: bool,
    pub notes: Vec<String>,
}

impl RecoveryResult {
    fn empty() -> Self {
        RecoveryResult {
            times: Vec::new(),
            values: Vec::new(),
            residual: 0.0,
            condition: 1.0,
            sigma_min: 0.0,
            sigma_max: 0.0,
            rhs_bound: 0.0,
            ambiguous: false,
            notes: Vec::new(),
        }
    }

    pub fn get(&self, t: i64) -> Option<Complex64> {
        self.times.iter().position(|&s| s == t).map(|i| self.values[i])
    }
}

/// Solves the constraint system with the SVD filter
/// `z = sum_i sigma_i / (sigma_i^2 + lambda) (u_i . b) v_i`, where
/// `lambda = max(ridge, (rhs_bound / max|b|)^2) * sigma_max^2`. The system is
/// flagged ambiguous when sigma_min / sigma_max falls below the square root
/// of that factor (or below rounding level).
pub fn solve_constraints(c: &Constraints, ridge: f64) -> Result<RecoveryResult> {
    if c.is_empty() {
        return Ok(RecoveryResult::empty());
    }
    if !(ridge >= 0.0) {
        return Err(Error::InvalidParameter(format!("ridge {ridge} must be >= 0")));
    }
    let (mat, rhs) = c.real_system();
    let n = c.times.len();
    let svd = mat.svd(true, true);
    let u = svd.u.as_ref().ok_or_else(|| Error::Solve("SVD without U".into()))?;
    let vt = svd.v_t.as_ref().ok_or_else(|| Error::Solve("SVD without V".into()))?;
    let sigma = &svd.singular_values;
    let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
    let sigma_min = sigma.iter().copied().fold(f64::INFINITY, f64::min);
    if !(sigma_max > 0.0) {
        return Err(Error::Solve("constraint matrix is zero".into()));
    }
    // Directions below the relative accuracy of b carry no information.
    let b_scale = c.b.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let data_rel = if b_scale > 0.0 { c.rhs_bound / b_scale } else { 0.0 };
    let ridge = ridge.max(data_rel * data_rel);
    let lambda = ridge * sigma_max * sigma_max;
    let mut sol = DVector::<f64>::zeros(2 * n);
    for i in 0..sigma.len() {
        let s = sigma[i];
        let filter = s / (s * s + lambda);
        if !filter.is_finite() || s == 0.0 {
            continue;
        }
        let coef = u.column(i).dot(&rhs) * filter;
        sol += vt.row(i).transpose() * coef;
    }
    let values: Vec<Complex64> = (0..n).map(|i| Complex64::new(sol[i], sol[n + i])).collect();
    if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::Solve("non-finite solution".into()));
    }
    let mut notes = Vec::new();
    let tol = (ridge.sqrt()).max(1e-13 * (2 * n) as f64);
    let mut ambiguous = false;
    if sigma_min <= tol * sigma_max {
        ambiguous = true;
        notes.push(format!(
            "smallest singular value {sigma_min:e} is below the rank tolerance {:e}",
            tol * sigma_max
        ));
    }
    Ok(RecoveryResult {
        times: c.times.clone(),
        residual: c.residual(&values),
        values,
        condition: if sigma_min > 0.0 { sigma_max / sigma_min } else { f64::INFINITY },
        sigma_min,
        sigma_max,
        rhs_bound: c.rhs_bound,
        ambiguous,
        notes,
    })
}

/// Assembles and solves. Real- and imaginary-part problems whose missing set
/// contains 0 or a mirrored pair are always flagged ambiguous.
pub fn recover_missing(problem: &RecoveryProblem) -> Result<RecoveryResult> {
    let c = assemble_constraints(problem)?;
    let mut result = solve_constraints(&c, problem.ridge)?;
    let real_gap_bank = problem.gap.bank().iter().all(|m| m.is_real_valued());
    if problem.mode != Mode::Full && real_gap_bank && problem.missing.has_mirror() {
        result.ambiguous = true;
        result.notes.push(format!(
            "{} mode cannot separate x(t) from x(-t) (or fix x(0)) with real test functions",
            problem.mode
        ));
    }
    Ok(result)
}

/// Splits the arc (start, start + length) of the circle into intervals of
/// [-pi, pi].
pub fn arc_intervals(start: f64, length: f64) -> Result<Vec<(f64, f64)>> {
    if !(length > 0.0 && length <= 2.0 * PI) {
        return Err(Error::InvalidParameter(format!("arc length {length} must lie in (0, 2 pi]")));
    }
    let a = crate::predictor::wrap(start);
    let b = a + length;
    if b <= PI {
        Ok(vec![(a, b)])
    } else {
        let mut v = vec![(-PI, b - 2.0 * PI), (a, PI)];
        v.retain(|(x, y)| y > x);
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariantsConfig {
    pub bank_size: usize,
    pub half_width: usize,
    pub ridge: f64,
    /// Relative max-norm distance under which two solutions are the same.
    pub cluster_tol: f64,
    /// A candidate is accepted when its residual is at most this (relative
    /// to the scale of the right-hand side, plus the rhs bound).
    pub accept_tol: f64,
}

impl Default for VariantsConfig {
    fn default() -> Self {
        VariantsConfig {
            bank_size: 12,
            half_width: 256,
            ridge: DEFAULT_RIDGE,
            cluster_tol: 1e-4,
            accept_tol: 1e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateOutcome {
    pub intervals: Vec<(f64, f64)>,
    pub result: Option<RecoveryResult>,
    pub accepted: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub values: Vec<Complex64>,
    /// Indices into `VariantsReport::candidates`.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariantsReport {
    pub times: Vec<i64>,
    pub candidates: Vec<CandidateOutcome>,
    pub clusters: Vec<Cluster>,
    /// floor(2 pi / Omega).
    pub bound: usize,
}

impl VariantsReport {
    pub fn distinct(&self) -> usize {
        self.clusters.len()
    }

    pub fn within_bound(&self) -> bool {
        self.clusters.len() <= self.bound
    }
}

pub fn ambiguity_bound(omega: f64) -> Result<usize> {
    if !(omega > 0.0 && omega <= 2.0 * PI) {
        return Err(Error::InvalidParameter(format!("Omega = {omega} must lie in (0, 2 pi]")));
    }
    Ok((2.0 * PI / omega + 1e-12).floor() as usize)
}

fn max_dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn max_abs(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Solves the full-mode problem for every candidate gap (each of measure at
/// least `omega`), keeps the candidates whose constraints are met, and
/// clusters the accepted solutions.
pub fn recover_variants(
    observed: &SignalSource,
    missing: &MissingSet,
    omega: f64,
    candidates: &[Vec<(f64, f64)>],
    cfg: &VariantsConfig,
) -> Result<VariantsReport> {
    let bound = ambiguity_bound(omega)?;
    let mut outcomes = Vec::with_capacity(candidates.len());
    for intervals in candidates {
        let measure: f64 = intervals.iter().map(|(a, b)| b - a).sum();
        if measure < omega - 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "candidate gap of measure {measure} is smaller than Omega = {omega}"
            )));
        }
        let gap = SpectralGap::with_bumps(intervals, cfg.bank_size, cfg.half_width)?;
        let problem = RecoveryProblem::new(observed.clone(), missing.clone(), gap, Mode::Full)
            .with_ridge(cfg.ridge);
        let outcome = match assemble_constraints(&problem)
            .and_then(|c| solve_constraints(&c, cfg.ridge).map(|r| (c, r)))
        {
            Ok((c, r)) => {
                let scale = c.b.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
                let ok = !r.ambiguous && r.residual <= cfg.accept_tol * scale + r.rhs_bound;
                let note = if r.ambiguous {
                    Some("rank deficient".to_string())
                } else if !ok {
                    Some(format!("residual {:e} too large", r.residual))
                } else {
                    None
                };
                CandidateOutcome {
                    intervals: intervals.clone(),
                    result: Some(r),
                    accepted: ok,
                    note,
                }
            }
            Err(e) => CandidateOutcome {
                intervals: intervals.clone(),
                result: None,
                accepted: false,
                note: Some(e.to_string()),
            },
        };
        outcomes.push(outcome);
    }
    let mut clusters: Vec<Cluster> = Vec::new();
    for (i, o) in outcomes.iter().enumerate() {
        if !o.accepted {
            continue;
        }
        let values = &o.result.as_ref().expect("accepted has a result").values;
        let home = clusters.iter_mut().find(|c| {
            let scale = max_abs(&c.values).max(max_abs(values)).max(f64::MIN_POSITIVE);
            max_dist(&c.values, values) <= cfg.cluster_tol * scale
        });
        match home {
            Some(c) => c.members.push(i),
            None => clusters.push(Cluster {
                values: values.clone(),
                members: vec![i],
            }),
        }
    }
    Ok(VariantsReport {
        times: missing.indices().to_vec(),
        candidates: outcomes,
        clusters,
        bound,
    })
}

/// Candidate arcs of length `omega` starting at `count` equally spaced points.
pub fn arc_grid(omega: f64, count: usize) -> Result<Vec<Vec<(f64, f64)>>> {
    (0..count)
        .map(|j| arc_intervals(-PI + 2.0 * PI * j as f64 / count as f64, omega))
        .collect()
}
