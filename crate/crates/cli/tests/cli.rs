use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sinked-fp"));
    c.env_remove("SINKED_FP_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn text(b: &[u8]) -> String {
    String::from_utf8(b.to_vec()).unwrap()
}

const FIG2: &[&str] = &[
    "eval", "--model", "romanovski", "--sigma1", "-2.7", "--sigma2", "2.1", "--gamma", "-0.6", "--y", "0", "--t",
    "0.1,0.2,0.3,0.5", "--x", "-10:10:400",
];

#[test]
fn classify_bessel_example() {
    let o = run(&["classify", "--model", "bessel", "--sigma", "-4", "--gamma", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(text(&o.stdout), "category=II Lambda=2.25 discrete=2\n");
}

#[test]
fn classify_json_lists_levels() {
    let o = run(&["classify", "--model", "bessel", "--sigma", "-4", "--gamma", "0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["category"], "II");
    assert_eq!(v["threshold"], 2.25);
    assert_eq!(v["discrete"].as_array().unwrap().len(), 2);
}

#[test]
fn validate_reports_first_violation() {
    let o = run(&["validate", "--model", "laguerre", "--gamma", "-0.1", "--sigma", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(text(&o.stderr), "ERROR:INVALID_PARAM: gamma >= 0 required\n");
    let ok = run(&["validate", "--model", "romanovski", "--gamma", "-0.6", "--sigma1", "-2.7", "--sigma2", "2.1"]);
    assert_eq!((ok.status.code(), text(&ok.stdout)), (Some(0), "valid\n".to_string()));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["eval", "--bogus"][..],
        &["eval", "--model", "bessel", "--gamma", "0"],
        &["eval", "--model", "nope", "--gamma", "0"],
        &["classify"],
        &["eval", "--model", "bessel", "--gamma", "0", "--sigma", "-4", "--y", "1", "--t", "0.1", "--x", "3:1:5"],
        &[],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(text(&o.stderr).starts_with("ERROR:USAGE: "), "{args:?}: {}", text(&o.stderr));
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn short_times_are_refused() {
    let o = run(&[
        "eval", "--model", "romanovski", "--sigma1", "-2.7", "--sigma2", "2.1", "--gamma", "-0.6", "--y", "0", "--t",
        "0.005", "--x", "-1:1:5",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = text(&o.stderr);
    assert!(err.starts_with("ERROR:TIME_TOO_SMALL: ") && err.contains("finite-difference"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn figure2_csv_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let oa = bin().args(FIG2).args(["--threads", "1", "--out"]).arg(&a).arg("--plot").output().unwrap();
    assert_eq!(oa.status.code(), Some(0), "{}", text(&oa.stderr));
    let ob = bin().args(FIG2).arg("--out").arg(&b).env("SINKED_FP_THREADS", "3").output().unwrap();
    assert_eq!(ob.status.code(), Some(0));
    let (ca, cb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ca, cb);
    let csv = text(&ca);
    assert!(csv.starts_with("x,t,density\n-10.0,0.1,"));
    assert_eq!(csv.lines().count(), 1 + 4 * 400);
    assert!(!csv.contains('\r'));
    // masses of the four curves decrease
    let masses: Vec<f64> =
        text(&oa.stdout).lines().filter_map(|l| l.split("mass=").nth(1)).map(|m| m.parse().unwrap()).collect();
    assert_eq!(masses.len(), 4);
    assert!(masses.windows(2).all(|w| w[1] < w[0]), "{masses:?}");
    let script = std::fs::read_to_string(a.with_extension("gp")).unwrap();
    assert!(script.contains("'a.csv'") && script.contains("t=0.5"));
}

#[test]
fn values_round_trip_through_csv() {
    let o = run(&[
        "eval", "--model", "laguerre", "--gamma", "0.5", "--sigma", "1", "--y", "1", "--t", "0.3", "--x", "0.5:2:4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = text(&o.stdout);
    for line in csv.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let want =
            sinked_fp::density::laguerre_closed_form(&sinked_fp::ModelSpec::laguerre(0.5, 1.0), f[0], 0.3, 1.0).unwrap();
        assert_eq!(f[2], want);
    }
}

#[test]
fn config_file_sits_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# Laguerre run\nmodel=laguerre\ngamma=0.5\nsigma=1\ny=1\nt=0.3\nx=0.5:2:4\n\nformat = json\n",
    )
    .unwrap();
    let from_file = bin().arg("eval").arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(from_file.status.code(), Some(0), "{}", text(&from_file.stderr));
    let v: serde_json::Value = serde_json::from_slice(&from_file.stdout).unwrap();
    assert_eq!(v[0]["t"], 0.3);
    let overridden = bin().arg("eval").arg("--config").arg(&cfg).args(["--t", "0.6", "--format", "csv"]).output().unwrap();
    assert!(text(&overridden.stdout).starts_with("x,t,density\n0.5,0.6,"));

    std::fs::write(&cfg, "model=laguerre\nnonsense\n").unwrap();
    let bad = bin().arg("eval").arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(text(&bad.stderr).starts_with("ERROR:INVALID_CONFIG: "));
}

#[test]
fn mass_of_sink_free_laguerre_is_one() {
    let o = run(&["mass", "--model", "laguerre", "--gamma", "0", "--sigma", "0.5", "--y", "1", "--t", "0.1,1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for row in v.as_array().unwrap() {
        assert!((row["mass"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn compare_fd_example_passes() {
    let o = run(&[
        "compare", "--oracle", "fd", "--model", "fisher-snedecor", "--gamma", "-1.2", "--sigma1", "-2", "--sigma2", "2.5",
        "--y", "1", "--t", "0.3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
    let out = text(&o.stdout);
    assert!(out.starts_with("t=0.3 L2=") && out.trim_end().ends_with("PASS"), "{out}");
}

#[test]
fn simulate_is_reproducible_and_compare_mc_fails_honestly() {
    let dir = tempfile::tempdir().unwrap();
    let sim = |name: &str, threads: &str| {
        let p = dir.path().join(name);
        let o = bin()
            .args(["simulate", "--model", "br", "--a", "1", "--beta", "0.5", "--zeta", "1.5", "--y", "1", "--t", "0.3"])
            .args(["--paths", "20000", "--dt", "1e-3", "--seed", "9", "--threads", threads, "--out"])
            .arg(&p)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
        std::fs::read(Path::new(&p)).unwrap()
    };
    assert_eq!(sim("one.csv", "1"), sim("two.csv", "2"));

    let o = run(&[
        "compare", "--oracle", "mc", "--model", "br", "--a", "4.2", "--alpha", "0.9", "--beta", "0.4", "--zeta", "3.2",
        "--y", "1", "--t", "0.2", "--paths", "2000", "--dt", "2e-4", "--tol", "0.01",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o.stdout).contains("FAIL"));
    assert!(text(&o.stderr).starts_with("ERROR:ORACLE_MISMATCH: "));
}
