use std::path::{Path, PathBuf};
use std::process::Command;

fn find_staticlib() -> Option<PathBuf> {
    // target/<profile>/deps/<this test> -> target/<profile>
    let exe = std::env::current_exe().ok()?;
    let profile = exe.parent()?.parent()?;
    [profile.join("libnvsig_ffi.a"), profile.join("deps/libnvsig_ffi.a")]
        .into_iter()
        .find(|p| p.exists())
}

fn have_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok_and(|o| o.status.success())
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/nvsig.h")).unwrap();
    for name in [
        "nv_last_error",
        "nv_wiener_new",
        "nv_pairing",
        "nv_kernel_trapezoid",
        "nv_apply_transfer",
        "nv_predictor_new",
        "nv_predict",
        "nv_recover",
        "typedef struct NvSignal NvSignal",
        "NV_STATUS_NUMERICAL = 4",
    ] {
        assert!(header.contains(name), "{name} missing from nvsig.h");
    }
}

#[test]
fn c_program_links_and_runs() {
    if !have_cc() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let lib = find_staticlib().expect("libnvsig_ffi.a next to the test binary");
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let tmp = tempfile::tempdir().unwrap();
    let bin = tmp.path().join("smoke");
    let out = Command::new("cc")
        .args(["-std=c11", "-D_DEFAULT_SOURCE", "-Wall", "-Werror", "-I"])
        .arg(dir.join("include"))
        .arg(dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("oracle 0.367879"));
}
