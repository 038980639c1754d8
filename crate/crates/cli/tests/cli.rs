//! End-to-end tests of the `tfcalc` binary over temporary CSV fixtures.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tfcalc_core::grid::{inner, make_grid, random_test_signal};
use tfcalc_core::io;
use tfcalc_core::modspaces::{modulation_norm, Exponent};
use tfcalc_core::operators::Symbol;
use tfcalc_core::tf_transforms::stft;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tfcalc"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tfcalc-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn s(p: &Path) -> String {
    p.display().to_string()
}

#[test]
fn transform_stft_matches_library() {
    let dir = workdir("stft");
    let g = make_grid(1, 16, 4.0).unwrap();
    let f = random_test_signal(1, &g);
    let w = random_test_signal(2, &g);
    let fp = dir.join("f.csv");
    let wp = dir.join("w.csv");
    let op = dir.join("v.csv");
    io::write_signal(&fp, &f).unwrap();
    io::write_signal(&wp, &w).unwrap();
    let out = run(&[
        "transform", "--kind", "stft", "--in", &s(&fp), "--window", &s(&wp), "--out", &s(&op),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = io::read_phasefn(&op).unwrap();
    let want = stft(&f, &w).unwrap();
    assert_eq!(v.values, want.values);
}

#[test]
fn weyl_identity_symbol_reproduces_input() {
    let dir = workdir("weyl");
    let g = make_grid(1, 16, 4.0).unwrap();
    let f = random_test_signal(3, &g);
    let sigma = Symbol::one(&g, 1);
    let fp = dir.join("f.csv");
    let sp = dir.join("sigma.csv");
    let op = dir.join("lf.csv");
    io::write_signal(&fp, &f).unwrap();
    io::write_phasefn(&sp, &sigma.phase).unwrap();
    let out = run(&["weyl", "--symbol", &s(&sp), "--in", &s(&fp), "--out", &s(&op)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let lf = io::read_signal(&op).unwrap();
    for (a, b) in lf.values.iter().zip(&f.values) {
        assert!((a - b).norm() < 1e-10);
    }
}

#[test]
fn localize_constant_symbol_is_stft_inversion() {
    // a ≡ 1 with matched Gaussian windows reproduces ⟨f, φ⟩-complete
    // synthesis: A f = f up to quadrature error.
    let dir = workdir("loc");
    let g = make_grid(1, 16, 4.0).unwrap();
    let f = random_test_signal(4, &g);
    let phi = tfcalc_core::tf_transforms::gaussian_window(&g);
    let sym = Symbol::one(&g, 1);
    let fp = dir.join("f.csv");
    let pp = dir.join("phi.csv");
    let sp = dir.join("a.csv");
    let op = dir.join("af.csv");
    io::write_signal(&fp, &f).unwrap();
    io::write_signal(&pp, &phi).unwrap();
    io::write_phasefn(&sp, &sym.phase).unwrap();
    let out = run(&[
        "localize", "--symbol", &s(&sp), "--analysis", &s(&pp), "--synthesis", &s(&pp),
        "--in", &s(&fp), "--out", &s(&op),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let af = io::read_signal(&op).unwrap();
    // ⟨Af, f⟩ ≈ ‖φ‖²⟨f, f⟩ = ⟨f, f⟩ for the normalized window.
    let lhs = inner(&af, &f).unwrap();
    let rhs = inner(&f, &f).unwrap();
    assert!((lhs - rhs).norm() < 1e-6, "{lhs} vs {rhs}");
}

#[test]
fn norm_prints_value_and_json_record() {
    let dir = workdir("norm");
    let g = make_grid(1, 32, 8.0).unwrap();
    let f = random_test_signal(5, &g);
    let fp = dir.join("f.csv");
    io::write_signal(&fp, &f).unwrap();
    let out = run(&[
        "norm", "--kind", "modulation", "--p", "inf", "--q", "1", "--in", &s(&fp),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let value: f64 = lines.next().unwrap().trim().parse().unwrap();
    let want = modulation_norm(&f, Exponent::Inf, Exponent::finite(1.0).unwrap(), 0.0, 0.0, None)
        .unwrap();
    assert!((value - want).abs() < 1e-12 * want);
    let record: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(record["kind"], "modulation");
    assert_eq!(record["p"], "inf");
    assert!((record["value"].as_f64().unwrap() - want).abs() < 1e-12 * want);
}

#[test]
fn admissible_prints_verdict() {
    let dir = workdir("adm");
    let pp = dir.join("params.json");
    std::fs::write(
        &pp,
        r#"{"p1":"2","q1":"2","p2":"2","q2":"2","p":"1","q":"inf"}"#,
    )
    .unwrap();
    let out = run(&["admissible", "--theorem", "wigner", "--params", &s(&pp)]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"pass\": true"));
    assert!(text.contains("PASS"));

    // A failing tuple still exits 0: the verdict is the output.
    std::fs::write(
        &pp,
        r#"{"p1":"1","q1":"2","p2":"2","q2":"2","p":"2","q":"2"}"#,
    )
    .unwrap();
    let out = run(&["admissible", "--theorem", "wigner", "--params", &s(&pp)]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"pass\": false"));
    assert!(text.contains("violated"));
}

#[test]
fn verify_exits_zero_and_emits_report() {
    let dir = workdir("verify");
    let cfgp = dir.join("cfg.json");
    std::fs::write(&cfgp, r#"{"seeds": 2, "grid_n": 16, "dilation_steps": 2}"#).unwrap();
    let outdir = dir.join("report");
    let out = run(&[
        "verify", "--suite", "wigner", "--config", &s(&cfgp), "--out", &s(&outdir),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[PASS]"));
    assert!(outdir.join("report.json").exists());
    assert!(outdir.join("records.csv").exists());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(outdir.join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["pass"], true);
}

#[test]
fn bad_arguments_exit_nonzero() {
    let out = run(&["transform", "--kind", "nope", "--in", "x", "--window", "y", "--out", "z"]);
    assert!(!out.status.success());
}
