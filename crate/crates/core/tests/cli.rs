use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn nvsig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nvsig")).args(args).output().unwrap()
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(sub: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![sub, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    nvsig(&args)
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn empty_gamma_grid_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"signal": {"kind": "exp_sum", "tones": [{"amplitude": 1, "omega": 0}]},
            "gamma": [], "window": [0, 4]}"#,
    );
    let out = run("predict", &cfg, &dir.path().join("o"), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gamma"));
}

#[test]
fn malformed_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", "{ not json");
    assert_eq!(run("gen", &cfg, &dir.path().join("o"), &[]).status.code(), Some(2));
    let missing = dir.path().join("absent.json");
    assert_eq!(run("gen", &missing, &dir.path().join("o"), &[]).status.code(), Some(2));
    assert_eq!(nvsig(&["predict"]).status.code(), Some(2));
}

#[test]
fn tripped_guard_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    // g^(1 + r) = 1000 is beyond the overflow guard
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"signal": {"kind": "exp_sum", "tones": [{"amplitude": 1, "omega": 0}]},
            "gamma": 100, "r": 0.5, "K": 64, "N": 1024, "window": [100, 101]}"#,
    );
    assert_eq!(run("predict", &cfg, &dir.path().join("o"), &[]).status.code(), Some(1));
    // a density too sharp for 64 nodes fails the doubling check
    let cfg = write(
        dir.path(),
        "d.json",
        r#"{"signal": {"kind": "degenerate_density", "omega_hat": 3.141592653589793,
                       "c": 1.0, "q_exp": 2.0, "N": 64},
            "window": [-4, 4]}"#,
    );
    assert_eq!(run("gen", &cfg, &dir.path().join("o2"), &[]).status.code(), Some(1));
}

#[test]
fn reruns_are_byte_identical_and_seed_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("gen_filtered_noise.json");
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    assert!(run("gen", &cfg, &a, &[]).status.success());
    assert!(run("gen", &cfg, &b, &[]).status.success());
    assert!(run("gen", &cfg, &c, &["--seed", "7"]).status.success());
    for f in ["signal.csv", "meta.json", "signal.svg"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let seeded = fs::read_to_string(c.join("signal.csv")).unwrap();
    assert!(seeded.starts_with("# seed = 7\n"));
    assert_ne!(seeded, fs::read_to_string(a.join("signal.csv")).unwrap());
}

#[test]
fn recover_demo_meets_residual() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r");
    assert!(run("recover", &configs().join("recover_two_tone.json"), &out, &[]).status.success());
    let text = fs::read_to_string(out.join("recovered.csv")).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let residual: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
        assert!(residual < 1e-6, "{row}");
    }
}

#[test]
fn every_example_config_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("gen", "gen_filtered_noise.json"),
        ("gen", "gen_degenerate.json"),
        ("filter", "filter_trapezoid.json"),
        ("predict", "predict_quick.json"),
        ("recover", "recover_two_tone.json"),
        ("recover-variants", "recover_variants.json"),
        ("spectrum", "spectrum.json"),
    ];
    for (i, (sub, file)) in cases.iter().enumerate() {
        let out = run(sub, &configs().join(file), &dir.path().join(i.to_string()), &[]);
        assert!(out.status.success(), "{file}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let diag = fs::read_to_string(dir.path().join("5/diagnostics.json")).unwrap();
    assert!(diag.contains("\"distinct\": 2"), "{diag}");
}
