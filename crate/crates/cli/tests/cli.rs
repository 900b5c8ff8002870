use std::path::Path;
use std::process::{Command, Stdio};

use spinfactor::{build_projection, build_spin_factor, ChainConfig, Tolerances};
use spinfactor_cli::report::Verdict;
use spinfactor_cli::{emit, run, Analysis, Report, RunConfig, SWEEP_HEADER};

fn config(n: usize, analyses: &[Analysis]) -> RunConfig {
    RunConfig {
        n_sites: n,
        analyses: analyses.to_vec(),
        ..RunConfig::default()
    }
}

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spinfactor"));
    cmd.stdout(Stdio::null());
    cmd
}

fn read_report(dir: &Path) -> Report {
    let text = std::fs::read_to_string(dir.join("report.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn classify_without_grid_targets_the_projection() {
    let out = run(&config(3, &[Analysis::Classify])).unwrap();
    let r = &out.report;
    let cp = r.check("classify/cp").unwrap();
    assert_eq!(cp.outcome, "not_cp");
    assert!((cp.values["min_eig"].as_f64().unwrap() + 0.625).abs() < 1e-10);
    assert!(cp.values["t"].is_null());
    assert_eq!(r.check("classify/decomposability").unwrap().outcome, "non_decomposable");
    assert_eq!(r.check("classify/positivity").unwrap().outcome, "no_violation_found");
    assert!(!r.any_failed());
}

#[test]
fn classify_with_grid_labels_each_time() {
    let mut cfg = config(2, &[Analysis::Classify]);
    cfg.time_grid = Some(vec![0.0, 0.5]);
    let out = run(&cfg).unwrap();
    assert!(out.report.check("classify/cp@t=0").is_some());
    let c = out.report.check("classify/cocp@t=0.5").unwrap();
    assert_eq!(c.values["t"].as_f64(), Some(0.5));
}

#[test]
fn default_sweep_has_eleven_negative_rows() {
    let out = run(&config(3, &[Analysis::Sweep])).unwrap();
    assert_eq!(out.sweep.len(), 11);
    assert!(out.sweep.iter().all(|r| r.choi_min_eig < 0.0));
    assert!(out.sweep.iter().all(|r| r.positivity_probe_min >= -1e-9));
    assert!(out.sweep.iter().all(|r| r.witness_objective.is_some()));
    let csv = spinfactor_cli::sweep_csv(&out.sweep);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(SWEEP_HEADER));
    assert_eq!(lines.count(), 11);
}

#[test]
fn witness_survives_a_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&config(3, &[Analysis::Witness])).unwrap();
    assert_eq!(out.report.check("witness").unwrap().verdict, Verdict::Pass);
    emit(&out.report, &out.sweep, dir.path()).unwrap();

    let back = read_report(dir.path());
    let w = back.certificates.witness.expect("witness certificate");
    assert_eq!(w.dim, 64);
    assert!(w.t.is_none());
    let cfg = ChainConfig::new(3).unwrap();
    let p = build_projection(build_spin_factor(&cfg).unwrap()).unwrap();
    let choi = p.to_superop().choi();
    assert!(w.reverify(&choi, &Tolerances::default()));

    let mut tampered = w.clone();
    tampered.rho[0][0] += 0.5;
    assert!(!tampered.reverify(&choi, &Tolerances::default()));
}

#[test]
fn decomposable_target_needs_no_witness() {
    let out = run(&config(1, &[Analysis::Witness])).unwrap();
    let c = out.report.check("witness").unwrap();
    assert_eq!(c.outcome, "not_needed");
    assert!(out.report.certificates.witness.is_none());
}

#[test]
fn reversibility_reports_word() {
    let out = run(&config(3, &[Analysis::Reversibility])).unwrap();
    let c = out.report.check("reversibility").unwrap();
    assert_eq!(c.outcome, "non_reversible");
    assert!(c.values["residual_norm"].as_f64().unwrap() > 0.9);
    assert!(!c.values["violating_word"].as_array().unwrap().is_empty());
}

#[test]
fn binary_verify_succeeds_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["verify", "--n-sites", "4", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let report = read_report(dir.path());
    assert_eq!(report.model.n_sites, 4);
    assert!(report.checks.iter().all(|c| c.verdict == Verdict::Pass));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.trim_end(), SWEEP_HEADER);
}

#[test]
fn binary_config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec!["verify".into(), "--n-sites".into(), "9".into()],
        vec!["verify".into(), "--potential".into(), "ising_longitudinal".into()],
        vec!["sweep".into(), "--t-grid".into(), "0:1".into()],
        vec!["run".into(), "--config".into(), dir.path().join("missing.toml").display().to_string()],
        vec!["run".into()],
    ];
    for args in cases {
        let out = bin().args(&args).arg("--out").arg(dir.path()).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn binary_failed_check_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.toml");
    std::fs::write(
        &cfg,
        "n_sites = 2\nanalyses = [\"witness\"]\n[tolerances]\nwitness_margin = 1.0\n",
    )
    .unwrap();
    let status = bin()
        .arg("run")
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
    let report = read_report(dir.path());
    assert_eq!(report.check("witness").unwrap().outcome, "search_failed");
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        r#"
n_sites = 2
seed = 5
analyses = ["verify_algebra", "reversibility", "sweep"]
time_grid = [0.0, 0.3]

[potential]
kind = "custom"
J = 0.0
h = 0.0
terms = [{ sites = [0, 1], paulis = [3, 3], coeff = 0.8 }, { sites = [1], paulis = [1] }]
"#,
    )
    .unwrap();
    let status = bin()
        .arg("run")
        .arg("--config")
        .arg(&cfg)
        .args(["--seed", "7", "--t-grid", "0,0.25,0.5", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let report = read_report(dir.path());
    assert_eq!(report.meta.seed, 7);
    assert_eq!(report.model.potential.kind, "custom");
    assert_eq!(report.model.potential.params.terms.len(), 2);
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn runs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, jobs) in [(&a, "1"), (&b, "3")] {
        let status = bin()
            .args(["sweep", "--n-sites", "2", "--t-grid", "0:0.4:0.2", "--seed", "3", "--jobs", jobs, "--out"])
            .arg(dir.path())
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
    }
    let csv_a = std::fs::read(a.path().join("sweep.csv")).unwrap();
    let csv_b = std::fs::read(b.path().join("sweep.csv")).unwrap();
    assert_eq!(csv_a, csv_b);
    let mut ra = read_report(a.path());
    let mut rb = read_report(b.path());
    for r in [&mut ra, &mut rb] {
        r.checks.iter_mut().for_each(|c| c.runtime_ms = 0.0);
    }
    assert_eq!(ra, rb);
}
