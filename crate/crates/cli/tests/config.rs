use sinked_fp_cli::{parse_args, RunConfig};

fn argv(args: &[&str]) -> Vec<String> {
    std::iter::once("sinked-fp").chain(args.iter().copied()).map(String::from).collect()
}

fn parsed(args: &[&str]) -> RunConfig {
    parse_args(&argv(args)).unwrap().config
}

fn samples() -> Vec<Vec<&'static str>> {
    vec![
        vec!["eval", "--model", "romanovski", "--sigma1", "-2.7", "--sigma2", "2.1", "--gamma", "-0.6", "--y", "0", "--t",
             "0.1,0.2,0.3,0.5", "--x", "-10:10:400", "--out", "fig2.csv", "--plot"],
        vec!["classify", "--model", "bessel", "--sigma", "-4", "--gamma", "0", "--format", "json"],
        vec!["compare", "--oracle", "fd", "--model", "fisher-snedecor", "--gamma", "-1.2", "--sigma1", "-2", "--sigma2",
             "2.5", "--y", "1", "--t", "0.3", "--fd-x", "1e-8:2e4:1200", "--fd-nt", "300", "--fd-stretch", "log",
             "--t0", "0.02", "--tol", "0.005", "--mu-max", "70.5", "--panels", "8", "--quad-tol", "1e-9"],
        vec!["simulate", "--model", "bertalanffy", "--a", "4.2", "--alpha", "0.9", "--beta", "0.4", "--zeta", "3.2",
             "--y", "1", "--t", "0.2", "--paths", "1000", "--dt", "0.0001", "--seed", "5", "--crossing", "absorb",
             "--threads", "2"],
        vec!["mass", "--model", "laguerre", "--gamma", "0.3", "--sigma", "0.1", "--y", "0.7", "--t",
             "0.30000000000000004,1e-3"],
    ]
}

#[test]
fn printed_config_reproduces_the_invocation() {
    let dir = tempfile::tempdir().unwrap();
    for args in samples() {
        let cfg = parsed(&args);
        let path = dir.path().join("echo.cfg");
        std::fs::write(&path, cfg.to_config_string()).unwrap();
        let again = parsed(&[args[0], "--config", path.to_str().unwrap()]);
        assert_eq!(again, cfg, "{args:?}");
    }
}

#[test]
fn print_config_flag_echoes() {
    let args = samples()[0].clone();
    let mut a = args.clone();
    a.push("--print-config");
    let mut out = Vec::new();
    let mut err = Vec::new();
    assert_eq!(sinked_fp_cli::run_with(&argv(&a), &mut out, &mut err), 0);
    assert_eq!(String::from_utf8(out).unwrap(), parsed(&args).to_config_string());
}

#[test]
fn json_round_trip() {
    for args in samples() {
        let cfg = parsed(&args);
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }
}

#[test]
fn later_flags_win() {
    let cfg = parsed(&["mass", "--y", "1", "--y", "2"]);
    assert_eq!(cfg.y, Some(2.0));
}

#[test]
fn grid_points_hit_both_ends() {
    let g = sinked_fp_cli::GridSpec::parse("-10:10:400").unwrap();
    let p = g.points();
    assert_eq!((p.len(), p[0], p[399]), (400, -10.0, 10.0));
    assert!(sinked_fp_cli::GridSpec::parse("1:2").is_err());
    assert!(sinked_fp_cli::GridSpec::parse("1:2:1").is_err());
}
