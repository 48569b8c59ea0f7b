use std::path::Path;
use std::process::{Command, Output};

use mapcalc_cli::{cmd_converge, cmd_demo, cmd_verify, order_label, CliError, Format, Overrides};

fn mapcalc(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mapcalc")).args(args).current_dir(cwd).output().expect("binary runs")
}

fn small_config(dir: &Path, extra: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, format!(r#"{{"nodes": 32, "trials": 3, "fd_trials": 2{extra}}}"#)).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn verify_passes_and_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path(), "");
    let out = mapcalc(&["verify", "--config", &config, "--suite", "boundary", "--out", "r.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["config"]["nodes"], 32);
    assert!(report["environment"]["conventions"].as_array().is_some_and(|c| !c.is_empty()));
}

#[test]
fn verify_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = Overrides { config: Some(small_config(dir.path(), "").into()), ..Default::default() };
    let report = cmd_verify(&["boundary".into()], &o, &out, Format::Csv).unwrap();
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.starts_with("id,suite,domain"));
    assert_eq!(text.lines().count(), report.records.len() + 1);
    assert!(text.contains(",pass,"));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = Overrides { config: Some(small_config(dir.path(), r#", "seed": 5"#).into()), seed: Some(9), nodes: None };
    let report = cmd_verify(&["boundary".into()], &o, &dir.path().join("r.json"), Format::Json).unwrap();
    assert_eq!(report.config.seed, 9);
    assert_eq!(report.config.nodes, 32);
}

#[test]
fn missing_suite_selection_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = mapcalc(&["verify"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no suite selected"));
}

#[test]
fn empty_suite_list_in_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path(), r#", "suites": []"#);
    assert_eq!(mapcalc(&["verify", "--config", &config], dir.path()).status.code(), Some(2));
}

#[test]
fn unknown_suite_lists_the_known_ones() {
    let dir = tempfile::tempdir().unwrap();
    let out = mapcalc(&["verify", "--suite", "nonsense"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hat-calculus"));
}

#[test]
fn bad_config_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path(), r#", "colour": "blue""#);
    let out = mapcalc(&["verify", "--config", &config, "--suite", "boundary"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let o = Overrides { config: Some(dir.path().join("absent.json")), ..Default::default() };
    assert!(matches!(cmd_verify(&["boundary".into()], &o, &dir.path().join("r.json"), Format::Json), Err(CliError::Io { .. })));
}

#[test]
fn bad_flag_values_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(mapcalc(&["verify", "--suite", "boundary", "--format", "xml"], dir.path()).status.code(), Some(2));
    assert_eq!(mapcalc(&["verify", "--suite", "boundary", "--nodes", "4"], dir.path()).status.code(), Some(2));
}

#[test]
fn converge_prints_a_table_and_an_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = mapcalc(&["converge", "--identity", "two-route", "--levels", "16,32"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("nodes,step,residual"));
    assert!(text.contains("fitted order"));
}

#[test]
fn converge_with_one_level_reports_no_order() {
    let study = cmd_converge(Some("derivation"), &[32], &Overrides::default(), None, Format::Csv).unwrap();
    assert_eq!(order_label(&study), "n/a");
    assert!(matches!(cmd_converge(Some("nonsense"), &[32], &Overrides::default(), None, Format::Csv), Err(CliError::Usage(_))));
}

#[test]
fn unknown_demo_lists_the_available_ones() {
    let dir = tempfile::tempdir().unwrap();
    let out = mapcalc(&["demo", "nonsense"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mw-links"));
}

#[test]
fn demos_write_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = Overrides { nodes: Some(64), ..Default::default() };
    for name in mapcalc_cli::DEMOS {
        let demo = cmd_demo(name, &o, &dir.path().join(name)).unwrap();
        assert!(demo.passed, "{name}");
        let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&demo.summary).unwrap()).unwrap();
        assert_eq!(summary["passed"], true, "{name}");
        assert!(std::fs::read_to_string(&demo.csv).unwrap().lines().count() > 1, "{name}");
    }
}

#[test]
fn mw_links_demo_reports_two_pi() {
    let dir = tempfile::tempdir().unwrap();
    let demo = cmd_demo("mw-links", &Overrides::default(), dir.path()).unwrap();
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(demo.summary).unwrap()).unwrap();
    assert!((summary["circle_value"].as_f64().unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-8);
    assert!(summary["max_reversal_gap"].as_f64().unwrap() < 1e-10);
}
