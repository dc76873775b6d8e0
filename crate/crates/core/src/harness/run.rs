//! Subcommand drivers. Each reads its JSON config, writes CSV (and optional
//! SVG / JSON) reports into the output directory and returns the written
//! paths. Reports carry no timestamps or absolute paths, so identical configs
//! and seeds give byte-identical files.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::degeneracy::{degeneracy_norm, DegeneracyReport, DegeneracyWeight, KernelSettings, Route, Verdict};
use crate::error::{Error, Result};
use crate::gap::{gap_residual, SpectralGap};
use crate::harness::config::{
    self, BuiltSignal, CandidateSpec, DegeneracySpec, FilterConfig, GapSpec, GenConfig, KernelSpec, PredictConfig, RecoverConfig,
    SignalSpec, SpectrumConfig, VariantsSpec, DEFAULT_SEED,
};
use crate::harness::csvio::{self, Meta};
use crate::harness::svg::{line_chart, Series};
use crate::predictor::{sinusoid_error_oracle, Predictor, PredictorConfig};
use crate::recovery::{arc_grid, recover_missing, recover_variants, MissingSet, RecoveryProblem};
use crate::signal::SignalSource;
use crate::transfer::{apply_transfer, trapezoid_kernel, Kernel};
use crate::wiener::partial_spectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Gen,
    Filter,
    Predict,
    Recover,
    RecoverVariants,
    Spectrum,
}

/// Runs `command` with the config at `config_path`, writing into `out`.
pub fn run(command: Command, config_path: &Path, out: &Path, seed: Option<u64>) -> Result<Vec<PathBuf>> {
    let base = config_path.parent().unwrap_or(Path::new("."));
    let mut ctx = Context::new(out, base, seed)?;
    match command {
        Command::Gen => gen(&mut ctx, &config::load(config_path)?)?,
        Command::Filter => filter(&mut ctx, &config::load(config_path)?)?,
        Command::Predict => predict(&mut ctx, &config::load(config_path)?)?,
        Command::Recover => recover(&mut ctx, &config::load(config_path)?)?,
        Command::RecoverVariants => variants(&mut ctx, &config::load(config_path)?)?,
        Command::Spectrum => spectrum(&mut ctx, &config::load(config_path)?)?,
    }
    Ok(ctx.written)
}

struct Context<'a> {
    out: &'a Path,
    base: &'a Path,
    seed: Option<u64>,
    written: Vec<PathBuf>,
}

impl<'a> Context<'a> {
    fn new(out: &'a Path, base: &'a Path, seed: Option<u64>) -> Result<Self> {
        fs::create_dir_all(out)?;
        Ok(Context {
            out,
            base,
            seed,
            written: Vec::new(),
        })
    }

    fn build(&self, spec: &SignalSpec) -> Result<BuiltSignal> {
        spec.build(self.base, self.seed)
    }

    fn path(&mut self, name: &str) -> PathBuf {
        let p = self.out.join(name);
        self.written.push(p.clone());
        p
    }

    fn json(&mut self, name: &str, value: &Value) -> Result<()> {
        let path = self.path(name);
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    fn svg(&mut self, name: &str, title: &str, x_label: &str, series: &[Series]) -> Result<()> {
        let path = self.path(name);
        fs::write(path, line_chart(title, x_label, series))?;
        Ok(())
    }

    fn base_meta(&self, built: &BuiltSignal) -> Meta {
        let seed = built.seed.or(self.seed).unwrap_or(DEFAULT_SEED);
        let mut meta = vec![("seed".to_string(), seed.to_string())];
        if built.tail_bound > 0.0 {
            meta.push(("tail_bound".into(), csvio::num(built.tail_bound)));
        }
        if !built.zero_filled.is_empty() {
            meta.push(("zero_filled".into(), join(&built.zero_filled)));
        }
        meta
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn finite_or_null(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

fn window(w: (i64, i64)) -> Result<(i64, i64)> {
    if w.1 < w.0 {
        return Err(Error::Config(format!("window [{}, {}] is empty", w.0, w.1)));
    }
    Ok(w)
}

fn build_gap(spec: &GapSpec) -> Result<SpectralGap> {
    SpectralGap::with_bumps(&spec.intervals, spec.bank_size, spec.half_width)
}

fn degeneracy_json(r: &DegeneracyReport) -> Value {
    json!({
        "verdict": match r.verdict { Verdict::Bounded => "bounded", Verdict::Diverging => "diverging" },
        "monotone": r.monotone,
        "points": r.points.iter().map(|p| json!({
            "nu": p.nu,
            "value": finite_or_null(p.value),
            "error": finite_or_null(p.error),
            "log_peak": p.log_peak,
        })).collect::<Vec<_>>(),
    })
}

/// Filtered signals are certified against their stop band by default.
fn default_gap(spec: &SignalSpec) -> Option<GapSpec> {
    let q = match spec {
        SignalSpec::FilteredNoise { q, .. } | SignalSpec::BandLimited { q, .. } => *q,
        _ => return None,
    };
    (q < PI).then(|| GapSpec {
        intervals: vec![(-PI, -q), (q, PI)],
        bank_size: 8,
        half_width: 128,
    })
}

/// Degenerate densities are certified with their own weight by default.
fn default_degeneracy(spec: &SignalSpec) -> Option<DegeneracySpec> {
    match spec {
        SignalSpec::DegenerateDensity {
            omega_hat, c, q_exp, ..
        } if *q_exp > 1.0 => Some(DegeneracySpec {
            omega_hat: *omega_hat,
            c: *c,
            q_exp: *q_exp,
            nus: vec![0.5, 0.1, 0.02],
        }),
        _ => None,
    }
}

fn gen(ctx: &mut Context, cfg: &GenConfig) -> Result<()> {
    let built = ctx.build(&cfg.signal)?;
    let (lo, hi) = window(cfg.window)?;
    let samples = built.signal.to_samples(lo, hi)?;
    let meta = ctx.base_meta(&built);
    let path = ctx.path("signal.csv");
    csvio::write_series(&path, &meta, samples.iter())?;

    let mut report = serde_json::Map::new();
    report.insert("seed".into(), json!(built.seed.or(ctx.seed).unwrap_or(DEFAULT_SEED)));
    report.insert("tail_bound".into(), json!(built.tail_bound));
    if let Some(g) = cfg.gap.clone().or_else(|| default_gap(&cfg.signal)) {
        let gap = build_gap(&g)?;
        let r = gap_residual(&built.signal, &gap)?;
        report.insert(
            "gap".into(),
            json!({
                "intervals": g.intervals,
                "residual": r.residual,
                "leakage_slack": r.leakage_slack,
                "pairing_error": r.pairing_error,
            }),
        );
    }
    if let Some(d) = cfg.degeneracy.clone().or_else(|| default_degeneracy(&cfg.signal)) {
        let nu0 = d.nus.first().copied().unwrap_or(0.5);
        let template = DegeneracyWeight::new(d.omega_hat, d.c, d.q_exp, nu0)?;
        let r = degeneracy_norm(&built.signal, &template, &d.nus, lo..=hi, Route::Auto, KernelSettings::default())?;
        report.insert("degeneracy".into(), degeneracy_json(&r));
    }
    ctx.json("meta.json", &Value::Object(report))?;

    if cfg.svg {
        let re = samples.iter().map(|(t, v)| (t as f64, v.re)).collect();
        let im = samples.iter().map(|(t, v)| (t as f64, v.im)).collect();
        ctx.svg(
            "signal.svg",
            "signal",
            "t",
            &[Series { label: "re", points: re }, Series { label: "im", points: im }],
        )?;
    }
    Ok(())
}

fn build_kernel(ctx: &Context, spec: &KernelSpec) -> Result<Kernel> {
    match spec {
        KernelSpec::Trapezoid { p, q, half_width } => trapezoid_kernel(*p, *q, *half_width),
        KernelSpec::Hgamma(cfg) => {
            cfg.validate()?;
            Ok(Predictor::new(*cfg)?.filter().clone())
        }
        KernelSpec::CsvFile { path } => {
            let path = if path.is_absolute() {
                path.clone()
            } else {
                ctx.base.join(path)
            };
            csvio::read_kernel(&path)
        }
    }
}

fn filter(ctx: &mut Context, cfg: &FilterConfig) -> Result<()> {
    let built = ctx.build(&cfg.signal)?;
    let (lo, hi) = window(cfg.window)?;
    let h = build_kernel(ctx, &cfg.kernel)?;
    let out = apply_transfer(&h, &built.signal, lo..=hi)?;
    let mut meta = ctx.base_meta(&built);
    meta.push((
        "filter_tail_error".into(),
        out.tail_error.map_or("unknown".into(), csvio::num),
    ));
    meta.push(("filter_rounding_error".into(), csvio::num(out.rounding_error)));
    let rows = (lo..=hi)
        .zip(&out.values)
        .map(|(t, y)| {
            let x = built.signal.sample(t)?;
            Ok(vec![
                t.to_string(),
                csvio::num(x.re),
                csvio::num(x.im),
                csvio::num(y.re),
                csvio::num(y.im),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let path = ctx.path("filtered.csv");
    csvio::write_rows(&path, &meta, &["t", "re_x", "im_x", "re_y", "im_y"], rows)?;
    let path = ctx.path("kernel.csv");
    csvio::write_kernel(&path, &ctx.base_meta(&built), &h)?;
    if cfg.svg {
        let x = (lo..=hi)
            .map(|t| (t as f64, built.signal.sample(t).map_or(f64::NAN, |v| v.re)))
            .collect();
        let y = (lo..=hi).zip(&out.values).map(|(t, v)| (t as f64, v.re)).collect();
        ctx.svg(
            "filtered.svg",
            "filter",
            "t",
            &[Series { label: "re x", points: x }, Series { label: "re y", points: y }],
        )?;
    }
    Ok(())
}

/// Builds the predictors of all cells, several at a time; results come back
/// in cell order whatever the completion order.
fn build_predictors(cells: &[PredictorConfig]) -> Vec<Result<Predictor>> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).max(1);
    let mut out = Vec::with_capacity(cells.len());
    for chunk in cells.chunks(workers) {
        let built: Vec<Result<Predictor>> = thread::scope(|s| {
            let handles: Vec<_> = chunk.iter().map(|c| s.spawn(move || Predictor::new(*c))).collect();
            handles
                .into_iter()
                .map(|h| h.join().unwrap_or_else(|_| Err(Error::Solve("predictor build panicked".into()))))
                .collect()
        });
        out.extend(built);
    }
    out
}

/// The tone the oracle applies to: explicit `omega0`, or the only tone of a
/// one-term sum. Returns (omega0, |amplitude|).
fn oracle_tone(cfg: &PredictConfig, x: &SignalSource) -> Option<(f64, f64)> {
    match (cfg.omega0, x) {
        (Some(w), SignalSource::ExpSum(e)) if e.tones().len() == 1 => Some((w, e.tones()[0].amplitude.norm())),
        (Some(w), _) => Some((w, 1.0)),
        (None, SignalSource::ExpSum(e)) if e.tones().len() == 1 => {
            Some((e.tones()[0].omega, e.tones()[0].amplitude.norm()))
        }
        _ => None,
    }
}

fn predict(ctx: &mut Context, cfg: &PredictConfig) -> Result<()> {
    let cells = cfg.cells()?;
    let (lo, hi) = window(cfg.window)?;
    let built = ctx.build(&cfg.signal)?;
    let tone = oracle_tone(cfg, &built.signal);
    let meta = ctx.base_meta(&built);
    let predictors = build_predictors(&cells);

    let mut sweep_rows = Vec::new();
    let mut diagnostics = Vec::new();
    let mut measured_pts = Vec::new();
    let mut oracle_pts = Vec::new();
    for (cell, predictor) in cells.iter().zip(predictors) {
        let predictor = predictor?;
        // prediction of x(t) uses x(s), s <= t - 1
        let run = predictor.predict(&built.signal, lo - 1..=hi - 1)?;
        let measured = run.max_error().unwrap_or(f64::NAN);
        let oracle = tone.map(|(w, a)| a * sinusoid_error_oracle(w, cell));
        sweep_rows.push(vec![
            csvio::num(cell.gamma),
            csvio::num(cell.r),
            tone.map_or(String::new(), |(w, _)| csvio::num(w)),
            csvio::num(measured),
            oracle.map_or(String::new(), csvio::num),
            csvio::num(run.kernel_tail),
        ]);
        let within = oracle.map(|o| (measured - o).abs() <= 10.0 * run.tail_error + run.rounding_error);
        diagnostics.push(json!({
            "gamma": cell.gamma,
            "r": cell.r,
            "causality_residual": predictor.kernel.causality_residual,
            "truncation_tail": finite_or_null(predictor.kernel.truncation_tail),
            "extended_precision": predictor.kernel.extended_precision,
            "tail_error": finite_or_null(run.tail_error),
            "rounding_error": run.rounding_error,
            "oracle_within_10x_tail": within,
        }));
        measured_pts.push((cell.gamma, measured.log10()));
        if let Some(o) = oracle {
            oracle_pts.push((cell.gamma, o.log10()));
        }

        let rows = run
            .times
            .clone()
            .zip(&run.predicted)
            .zip(&run.truth)
            .map(|((t, p), truth)| {
                let x = truth.unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                let err = truth.map_or(f64::NAN, |v| (v - p).norm());
                vec![
                    (t + 1).to_string(),
                    csvio::num(x.re),
                    csvio::num(x.im),
                    csvio::num(p.re),
                    csvio::num(p.im),
                    csvio::num(err),
                ]
            })
            .collect();
        let mut run_meta = meta.clone();
        run_meta.push(("gamma".into(), csvio::num(cell.gamma)));
        run_meta.push(("r".into(), csvio::num(cell.r)));
        run_meta.push(("kernel_tail".into(), csvio::num(run.kernel_tail)));
        let path = ctx.path(&format!("run_g{}_r{}.csv", cell.gamma, cell.r));
        csvio::write_rows(&path, &run_meta, &["t", "re_x", "im_x", "re_xhat", "im_xhat", "err"], rows)?;
    }
    let path = ctx.path("sweep.csv");
    csvio::write_rows(
        &path,
        &meta,
        &["gamma", "r", "omega0", "measured_err", "oracle_err", "kernel_tail"],
        sweep_rows,
    )?;
    ctx.json("predict.json", &json!({ "cells": diagnostics }))?;
    if cfg.svg {
        ctx.svg(
            "sweep.svg",
            "log10 one-step error",
            "gamma",
            &[
                Series { label: "measured", points: measured_pts },
                Series { label: "oracle", points: oracle_pts },
            ],
        )?;
    }
    Ok(())
}

fn recover(ctx: &mut Context, cfg: &RecoverConfig) -> Result<()> {
    let built = ctx.build(&cfg.signal)?;
    let gap = build_gap(&cfg.gap)?;
    let missing = MissingSet::new(cfg.missing.iter().copied());
    let problem = RecoveryProblem::new(built.signal.clone(), missing, gap, cfg.mode).with_ridge(cfg.ridge);
    let result = recover_missing(&problem)?;
    // Against the ground truth when the source has one, else the constraints.
    let residuals: Vec<f64> = result
        .times
        .iter()
        .zip(&result.values)
        .map(|(&t, z)| {
            if built.has_truth {
                built.signal.sample(t).map_or(f64::NAN, |x| (z - x).norm())
            } else {
                result.residual
            }
        })
        .collect();
    let mut meta = ctx.base_meta(&built);
    meta.push((
        "residual".into(),
        if built.has_truth { "ground_truth" } else { "constraint" }.into(),
    ));
    let rows = result
        .times
        .iter()
        .zip(&result.values)
        .zip(&residuals)
        .map(|((t, z), r)| vec![t.to_string(), csvio::num(z.re), csvio::num(z.im), csvio::num(*r)])
        .collect();
    let path = ctx.path("recovered.csv");
    csvio::write_rows(&path, &meta, &["t", "re", "im", "residual"], rows)?;
    ctx.json(
        "diagnostics.json",
        &json!({
            "mode": cfg.mode.to_string(),
            "condition": finite_or_null(result.condition),
            "sigma_min": result.sigma_min,
            "sigma_max": result.sigma_max,
            "constraint_residual": result.residual,
            "rhs_bound": result.rhs_bound,
            "ambiguous": result.ambiguous,
            "max_truth_error": if built.has_truth {
                finite_or_null(residuals.iter().copied().fold(0.0, f64::max))
            } else {
                Value::Null
            },
            "notes": result.notes,
        }),
    )?;
    Ok(())
}

fn intervals_text(v: &[(f64, f64)]) -> String {
    v.iter().map(|(a, b)| format!("{a}:{b}")).collect::<Vec<_>>().join(";")
}

fn variants(ctx: &mut Context, cfg: &VariantsSpec) -> Result<()> {
    let built = ctx.build(&cfg.signal)?;
    let missing = MissingSet::new(cfg.missing.iter().copied());
    let candidates = match &cfg.candidates {
        CandidateSpec::Grid { grid } => {
            if *grid == 0 {
                return Err(Error::Config("candidate grid is empty".into()));
            }
            arc_grid(cfg.omega, *grid)?
        }
        CandidateSpec::Explicit(v) => {
            if v.is_empty() {
                return Err(Error::Config("candidate list is empty".into()));
            }
            v.clone()
        }
    };
    let report = recover_variants(&built.signal, &missing, cfg.omega, &candidates, &cfg.variants_config())?;
    let meta = ctx.base_meta(&built);

    let mut rows = Vec::new();
    for (i, c) in report.clusters.iter().enumerate() {
        for (t, z) in report.times.iter().zip(&c.values) {
            rows.push(vec![i.to_string(), t.to_string(), csvio::num(z.re), csvio::num(z.im)]);
        }
    }
    let path = ctx.path("variants.csv");
    csvio::write_rows(&path, &meta, &["cluster", "t", "re", "im"], rows)?;

    let rows = report
        .candidates
        .iter()
        .enumerate()
        .map(|(i, c)| {
            vec![
                i.to_string(),
                intervals_text(&c.intervals),
                c.accepted.to_string(),
                c.result.as_ref().map_or(String::new(), |r| csvio::num(r.residual)),
                c.note.clone().unwrap_or_default(),
            ]
        })
        .collect();
    let path = ctx.path("candidates.csv");
    csvio::write_rows(&path, &meta, &["candidate", "intervals", "accepted", "residual", "note"], rows)?;
    ctx.json(
        "diagnostics.json",
        &json!({
            "omega": cfg.omega,
            "bound": report.bound,
            "distinct": report.distinct(),
            "within_bound": report.within_bound(),
            "accepted": report.candidates.iter().filter(|c| c.accepted).count(),
            "candidates": report.candidates.len(),
        }),
    )?;
    Ok(())
}

fn spectrum(ctx: &mut Context, cfg: &SpectrumConfig) -> Result<()> {
    if cfg.m.is_empty() {
        return Err(Error::Config("'m' grid is empty".into()));
    }
    if cfg.points == 0 {
        return Err(Error::Config("'points' must be positive".into()));
    }
    let built = ctx.build(&cfg.signal)?;
    let grid: Vec<f64> = (0..cfg.points)
        .map(|j| -PI + 2.0 * PI * (j + 1) as f64 / cfg.points as f64)
        .collect();
    let mut rows = Vec::new();
    let mut series = Vec::new();
    for &m in &cfg.m {
        let xm = partial_spectrum(&built.signal, m, &grid)?;
        for (w, v) in grid.iter().zip(&xm) {
            rows.push(vec![
                m.to_string(),
                csvio::num(*w),
                csvio::num(v.re),
                csvio::num(v.im),
                csvio::num(v.norm()),
            ]);
        }
        series.push((m, grid.iter().copied().zip(xm.iter().map(|v| v.norm())).collect()));
    }
    let meta = ctx.base_meta(&built);
    let path = ctx.path("spectrum.csv");
    csvio::write_rows(&path, &meta, &["m", "omega", "re", "im", "abs"], rows)?;
    if cfg.svg {
        let labels: Vec<String> = series.iter().map(|(m, _)| format!("m = {m}")).collect();
        let s: Vec<Series> = series
            .into_iter()
            .zip(&labels)
            .map(|((_, points), label)| Series { label, points })
            .collect();
        ctx.svg("spectrum.svg", "|X_m|", "omega", &s)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_config(dir: &Path, text: &str) -> PathBuf {
        let p = dir.join("config.json");
        fs::write(&p, text).unwrap();
        p
    }

    fn read(p: &Path) -> String {
        fs::read_to_string(p).unwrap()
    }

    #[test]
    fn recover_demo_two_tone() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write_config(
            dir.path(),
            r#"{"signal": {"kind": "exp_sum", "tones": [{"amplitude": 1, "omega": 0.2},
                                                          {"amplitude": 0.5, "omega": -0.4}]},
                "missing": [-1, 3],
                "gap": {"intervals": [[1.0, 2.5]], "bank_size": 12}}"#,
        );
        let out = dir.path().join("out");
        run(Command::Recover, &cfg, &out, None).unwrap();
        let diag: Value = serde_json::from_str(&read(&out.join("diagnostics.json"))).unwrap();
        assert!(diag["max_truth_error"].as_f64().unwrap() < 1e-6, "{diag}");
        assert!(read(&out.join("recovered.csv")).contains("# residual = ground_truth"));
    }

    #[test]
    fn gen_then_spectrum_from_csv() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write_config(
            dir.path(),
            r#"{"signal": {"kind": "filtered_noise", "seed": 7, "lo": -40, "hi": 40,
                           "p": 0.785, "q": 1.57, "K": 64},
                "window": [-40, 40], "gap": {"intervals": [[2.0, 3.0]], "bank_size": 4, "K": 32},
                "svg": true}"#,
        );
        let out = dir.path().join("gen");
        let files = run(Command::Gen, &cfg, &out, None).unwrap();
        assert_eq!(files.len(), 3);
        let csv = read(&out.join("signal.csv"));
        assert!(csv.starts_with("# seed = 7\n"));

        let cfg = write_config(
            dir.path(),
            r#"{"signal": {"kind": "csv_file", "path": "gen/signal.csv"}, "m": [4, 16], "points": 32}"#,
        );
        let out = dir.path().join("spec");
        run(Command::Spectrum, &cfg, &out, None).unwrap();
        let text = read(&out.join("spectrum.csv"));
        assert!(text.starts_with("# seed = 7\n"));
        assert!(text.contains("# tail_bound = "));
        assert_eq!(text.lines().count(), 3 + 64);
    }

    #[test]
    fn empty_gamma_grid_fails_as_config() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write_config(
            dir.path(),
            r#"{"signal": {"kind": "exp_sum", "tones": [{"amplitude": 1, "omega": 0}]},
                "gamma": [], "window": [0, 3]}"#,
        );
        let e = run(Command::Predict, &cfg, &dir.path().join("o"), None).unwrap_err();
        assert!(matches!(e, Error::Config(_)));
    }

    #[test]
    fn predict_small_sweep_is_reproducible() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write_config(
            dir.path(),
            r#"{"signal": {"kind": "exp_sum", "tones": [{"amplitude": 1, "omega": 0}]},
                "gamma": [1, 2], "K": 128, "N": 4096, "window": [200, 205], "svg": true}"#,
        );
        let a = dir.path().join("a");
        let b = dir.path().join("b");
        run(Command::Predict, &cfg, &a, None).unwrap();
        run(Command::Predict, &cfg, &b, None).unwrap();
        for f in ["sweep.csv", "run_g1_r0.5.csv", "run_g2_r0.5.csv", "predict.json", "sweep.svg"] {
            assert_eq!(read(&a.join(f)), read(&b.join(f)), "{f}");
        }
        let sweep = read(&a.join("sweep.csv"));
        let row: Vec<f64> = sweep.lines().nth(2).unwrap().split(',').map(|s| s.parse().unwrap()).collect();
        // gamma, r, omega0, measured, oracle, tail
        assert!((row[3] - row[4]).abs() <= 10.0 * row[5]);
        assert!((row[4] - (-1.0f64).exp()).abs() < 1e-12);
    }
}
