use std::path::{Path, PathBuf};
use std::process::Command;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// Runs a shipped config and compares its CSV table against a golden table.
fn check(config: &str, golden: &str, tolerances: &[&str]) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = root().join("configs").join(format!("{config}.json"));
    let run = Command::new(env!("CARGO_BIN_EXE_optrr"))
        .args(["sweep", "--config"])
        .arg(&cfg)
        .args(["--out", ".", "--stem", config, "--format", "csv"])
        .current_dir(dir.path())
        .env_remove("OPTRR_PRECISION")
        .output()
        .unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let mut cmp = Command::new(env!("CARGO_BIN_EXE_optrr"));
    cmp.arg("compare")
        .arg(dir.path().join(format!("{config}.csv")))
        .arg(root().join("golden").join(format!("{golden}.csv")));
    for t in tolerances {
        cmp.args(["--tol", t]);
    }
    let out = cmp.args(["--default-tol", "rel:1e-13"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn quartic_frequencies() {
    check("quartic", "quartic-frequencies", &["sqrt_omega_opt=rel:1e-14"]);
}

#[test]
fn sextic_rows() {
    let tols = [
        "E0=abs:1e-13",
        "E8=abs:1e-13",
        "x2_0=rel:1e-12",
        "x6_0=rel:1e-12",
        "x10_0=rel:1e-12",
        "x2_8=rel:1e-11",
        "x6_8=rel:1e-11",
        "x10_8=rel:1e-11",
    ];
    check("sextic", "sextic-rows", &tols);
}

#[test]
fn radial_sextic_rows() {
    let tols = [
        "E0=abs:1e-13",
        "E8=abs:1e-13",
        "r2_0=rel:1e-12",
        "r6_0=rel:1e-12",
        "r10_0=rel:1e-12",
        "r2_8=rel:1e-11",
        "r6_8=rel:1e-11",
        "r10_8=rel:1e-11",
    ];
    check("radial-sextic", "radial-sextic-rows", &tols);
}

#[test]
fn spiked_sweeps() {
    let tols = ["gamma_opt=abs:5e-3", "E0=abs:1e-9"];
    check("spiked", "spiked-strong", &tols);
    check("spiked-weak", "spiked-weak", &tols);
}
