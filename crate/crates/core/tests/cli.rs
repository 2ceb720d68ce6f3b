use std::fs;
use std::process::Command;

use solenoidal::cli::report::read_diagnostics;
use solenoidal::cli::vtk::read_fields;
use solenoidal::diffops::divergence;

fn solenoidal(args: &str) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_solenoidal"))
        .args(args.split_whitespace())
        .output()
        .unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(solenoidal("--help").status.code(), Some(0));
    assert_eq!(solenoidal("run --case cube --backend fd").status.code(), Some(2));
    assert_eq!(solenoidal("run --case square --backend fd --frobnicate").status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let out = solenoidal(&format!(
        "run --case square --backend fd --n 33 --sor-max-iters 3 --out-dir {}",
        dir.path().display()
    ));
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("did not converge"));

    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = solenoidal(&format!("run --case taylor_green --backend spectral --n 16 --out-dir {}/sub", blocker.display()));
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn volume_file_reproduces_reported_divergence() {
    let dir = tempfile::tempdir().unwrap();
    let out = solenoidal(&format!(
        "run --case square --backend fd --n 48 --half-width 0.5 --out-dir {}",
        dir.path().display()
    ));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let file = read_fields(&dir.path().join("fields.vtk")).unwrap();
    let solved = read_diagnostics(&dir.path().join("diagnostics.csv"))
        .unwrap()
        .into_iter()
        .find(|r| r.stage == "solved" && r.method == "fd")
        .unwrap();
    let recomputed = divergence(&file.velocity).max_abs();
    assert!((recomputed - solved.linf).abs() <= 1e-15, "{recomputed} vs {}", solved.linf);

    let header = fs::read_to_string(dir.path().join("boundary_error.csv")).unwrap();
    assert!(header.starts_with("edge,s,du1,du2\n"));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("sor component 1"));
}

#[test]
fn cube_boundary_table_has_three_components() {
    let dir = tempfile::tempdir().unwrap();
    let out = solenoidal(&format!(
        "run --case cube --backend spectral --n 16 --half-width 0.9 --u-solid 0,0,1 --formats csv --out-dir {}",
        dir.path().display()
    ));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!dir.path().join("fields.vtk").exists());
    let table = fs::read_to_string(dir.path().join("boundary_error.csv")).unwrap();
    assert!(table.starts_with("edge,s,t,du1,du2,du3\n"));
    for face in ["x-", "x+", "y-", "y+", "z-", "z+"] {
        assert!(table.lines().any(|l| l.starts_with(&format!("{face},"))), "{face}");
    }
    let rows = read_diagnostics(&dir.path().join("diagnostics.csv")).unwrap();
    assert_eq!(rows.len(), 8);
}
