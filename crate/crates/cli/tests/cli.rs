use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_nvm-levy");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("LEVY_SEED").output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect()
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let out = out.to_str().unwrap();
    assert_eq!(code(&["check-condition", "--family", "gamma", "--nu", "2", "--expect", "non_gaussian", "--out", out]), 0);
    assert_eq!(code(&["check-condition", "--family", "gamma", "--nu", "2", "--expect", "gaussian_limit", "--out", out]), 1);
    assert_eq!(code(&["check-condition", "--family", "tempered_stable", "--expect", "gaussian_limit", "--out", out]), 0);
    assert_eq!(code(&["simulate", "subordinator", "--preset", "fig1", "--seed", "1", "--replicas", "0", "--out", out]), 2);
    assert_eq!(code(&["simulate", "nvm", "--preset", "fig1", "--out", out]), 2);
    assert_eq!(code(&["simulate", "nvm", "--preset", "fig12", "--seed", "1", "--out", out]), 2);
    assert_eq!(code(&["bound-curve", "--family", "gamma", "--nu", "-1", "--out", out]), 2);
    assert_eq!(code(&["verify-marginal", "--family", "gig", "--lambda", "0", "--seed", "1", "--out", out]), 2);
    assert_eq!(code(&["residual-hist"]), 2);

    let blocker = tmp.path().join("file");
    fs::write(&blocker, b"x").unwrap();
    let nested = blocker.join("sub");
    assert_eq!(code(&["bound-curve", "--preset", "fig8", "--out", nested.to_str().unwrap()]), 3);
}

#[test]
fn seed_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let st = Command::new(BIN)
        .args(["simulate", "nvm", "--preset", "fig2", "--epsilon", "1e-3", "--out", a.to_str().unwrap()])
        .env("LEVY_SEED", "42")
        .status()
        .unwrap();
    assert!(st.success());
    let st = run(&["simulate", "nvm", "--preset", "fig2", "--epsilon", "1e-3", "--seed", "42", "--out", b.to_str().unwrap()]);
    assert!(st.status.success());
    assert_eq!(fs::read(a.join("path_0003.csv")).unwrap(), fs::read(b.join("path_0003.csv")).unwrap());
}

#[test]
fn fig1_simulation_writes_ten_paths() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    assert!(run(&["simulate", "subordinator", "--preset", "fig1", "--seed", "9", "--out", out]).status.success());
    let files = snapshot(tmp.path());
    assert_eq!(files.keys().filter(|k| k.starts_with("path_")).count(), 10);
    let csv = String::from_utf8(files["path_0000.csv"].clone()).unwrap();
    assert!(csv.starts_with("v,z\n"));
    assert!(!csv.contains('\r'));
}

#[test]
fn verify_marginal_fig1() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["verify-marginal", "--preset", "fig1", "--samples", "10000", "--seed", "5", "--out", tmp.path().to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["ks"]["p_value"].as_f64().unwrap() > 0.01);
}

#[test]
fn manifest_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("first");
    let args = ["simulate", "sde", "--preset", "fig6", "--epsilon", "1e-2", "--residual-mode", "gaussian", "--steps", "20"];
    let mut a = args.to_vec();
    a.extend(["--seed", "3", "--out", out.to_str().unwrap()]);
    assert!(run(&a).status.success());
    let first = snapshot(&out);
    // rerun purely from the manifest, into the same directory
    let manifest = tmp.path().join("manifest.json");
    fs::copy(out.join("manifest.json"), &manifest).unwrap();
    fs::remove_dir_all(&out).unwrap();
    assert!(run(&["simulate", "sde", "--config", manifest.to_str().unwrap()]).status.success());
    assert_eq!(snapshot(&out), first);
}

#[test]
fn every_preset_resolves() {
    let tmp = tempfile::tempdir().unwrap();
    for k in 1..=11 {
        let p = format!("fig{k}");
        let out = tmp.path().join(&p);
        let o = run(&["check-condition", "--preset", &p, "--eps-to", "1e-4", "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{p}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn outputs_independent_of_worker_count() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let base = ["residual-hist", "--preset", "fig6", "--epsilon", "1e-3", "--floor-ratio", "1e-4", "--samples", "500", "--seed", "8"];
    let mut x = base.to_vec();
    x.extend(["--jobs", "1", "--out", a.to_str().unwrap()]);
    let mut y = base.to_vec();
    y.extend(["--jobs", "3", "--out", b.to_str().unwrap()]);
    assert!(run(&x).status.success() && run(&y).status.success());
    let (sa, sb) = (snapshot(&a), snapshot(&b));
    for name in ["residuals.csv", "qq.csv", "summary.json"] {
        assert_eq!(sa[name], sb[name], "{name}");
    }
}
