use std::path::PathBuf;

use jetbracket::frontend::ProblemConfig;
use jetbracket_cli::{run, EXIT_INPUT, EXIT_OK, EXIT_OVERFLOW};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("jetbracket").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_tmp(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("cli-{name}"));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn oscillator_preset_in_every_format() {
    let (code, text, _) = call(&["preset", "oscillator"]);
    assert_eq!((code, text.trim_end()), (EXIT_OK, "u^1_{11} + u^1 = 0"));
    let (_, latex, _) = call(&["preset", "oscillator", "--format", "latex"]);
    assert_eq!(latex.trim_end(), "u^{1}_{11} + u^{1} = 0");
    let (_, json, _) = call(&["preset", "oscillator", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["schema"], "jetbracket/pde_system/v1");
    assert_eq!(doc["equations"][0]["dx_monomial"], serde_json::json!([1]));
}

#[test]
fn emitted_config_derives_the_preset() {
    for name in ["oscillator", "maxwell"] {
        let (_, config, _) = call(&["preset", name, "--emit-config"]);
        let path = write_tmp(&format!("{name}.json"), &config);
        let (code, derived, err) = call(&["derive", "--config", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK, "{err}");
        assert_eq!(derived, call(&["preset", name]).1);
    }
}

#[test]
fn format_flag_overrides_config_and_out_writes_file() {
    let mut cfg = ProblemConfig::oscillator();
    cfg.format = Some("latex".into());
    let path = write_tmp("latex.json", &cfg.to_json());
    let (_, latex, _) = call(&["derive", "--config", path.to_str().unwrap()]);
    assert!(latex.contains("u^{1}_{11}"));
    let (_, text, _) = call(&["derive", "--config", path.to_str().unwrap(), "--format", "text"]);
    assert_eq!(text.trim_end(), "u^1_{11} + u^1 = 0");

    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-out.txt");
    let (code, stdout, _) = call(&["derive", "--config", path.to_str().unwrap(), "--format", "text", "--out", out.to_str().unwrap()]);
    assert_eq!((code, stdout.as_str()), (EXIT_OK, ""));
    assert_eq!(std::fs::read_to_string(out).unwrap().trim_end(), "u^1_{11} + u^1 = 0");
}

#[test]
fn bracket_uses_configured_metric() {
    let path = write_tmp("bracket.json", &ProblemConfig::oscillator().to_json());
    let p = path.to_str().unwrap();
    let (code, out, _) = call(&["bracket", "--lhs", "u[1]", "--rhs", "u[1;1]", "--config", p]);
    assert_eq!((code, out.trim_end()), (EXIT_OK, "-dx1"));
    let (_, zero, _) = call(&["bracket", "--lhs", "u[1]", "--rhs", "u[1]", "--config", p]);
    assert_eq!(zero.trim_end(), "0");
}

#[test]
fn input_errors_exit_with_2() {
    let path = write_tmp("parse.json", &ProblemConfig::oscillator().to_json());
    let (code, _, err) = call(&["bracket", "--lhs", "u[1 + ", "--rhs", "u[1]", "--config", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("offset 5"), "{err}");

    let unknown = write_tmp("unknown.json", r#"{"n": 1, "m": 1, "chi": "0", "phi": "0", "colour": "red"}"#);
    assert_eq!(call(&["derive", "--config", unknown.to_str().unwrap()]).0, EXIT_INPUT);
    let range = write_tmp("range.json", r#"{"n": 1, "m": 1, "chi": "u[2]", "phi": "0"}"#);
    assert_eq!(call(&["derive", "--config", range.to_str().unwrap()]).0, EXIT_INPUT);
    assert_eq!(call(&["check", "--suite", "everything"]).0, EXIT_INPUT);
    assert_eq!(call(&[]).0, EXIT_INPUT);
}

#[test]
fn overflow_exits_with_3() {
    let path = write_tmp("cap.json", r#"{"n": 1, "m": 1, "order_cap": 2, "chi": "0", "phi": "u[1]"}"#);
    let p = path.to_str().unwrap();
    assert_eq!(call(&["derive", "--config", p]).0, EXIT_OK);
    assert_eq!(call(&["bracket", "--lhs", "u[1;1,1,1]", "--rhs", "u[1]", "--config", p]).0, EXIT_OVERFLOW);
}

#[test]
fn help_and_version_succeed() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("derive") && out.contains("preset"));
    assert_eq!(call(&["--version"]).0, EXIT_OK);
}

#[test]
fn check_reports_are_reproducible() {
    let a = call(&["check", "--suite", "poisson", "--seed", "3", "--cases", "4"]);
    let b = call(&["check", "--suite", "poisson", "--seed", "3", "--cases", "4"]);
    assert_eq!(a, b);
    assert_eq!(a.0, EXIT_OK);
    assert!(a.1.contains("suite poisson seed=3 cases=4") && a.1.trim_end().ends_with("result: pass"));
}
