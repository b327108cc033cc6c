//! Command-line behavior: exit codes, error reporting, flag selection.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_contextlab"))
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("contextlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn scenario_writes_to_stdout_without_out_flag() {
    let out = bin().args(["scenario", "specker"]).output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("content M1 values 0 1\n"), "{text}");
    assert!(text.contains("bunch M2,M3"));
}

#[test]
fn check_reports_verdicts_with_exit_zero() {
    let path = temp_path("specker-check.system");
    let out = bin().args(["scenario", "specker", "--out"]).arg(&path).output().unwrap();
    assert!(out.status.success());

    let out = bin()
        .arg("check")
        .arg(&path)
        .env("CONTEXTLAB_COLOR", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "verdicts are data, not errors");
    let text = stdout(&out);
    assert!(text.contains("consistently connected: yes"), "{text}");
    assert!(text.contains("contextual (no maximally connected coupling): yes"), "{text}");
    assert!(!text.contains('\x1b'), "CONTEXTLAB_COLOR=0 must disable ANSI color");
}

#[test]
fn malformed_block_exits_two() {
    let path = temp_path("bad-sum.system");
    std::fs::write(
        &path,
        "content M1 values 0 1\ncontent M2 values 0 1\ncontext c = M1 M2\nbunch c\n  0 1 = 1/2\n  1 0 = 1/4\nend\n",
    )
    .unwrap();
    let out = bin().arg("check").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("malformed distribution"), "{err}");
}

#[test]
fn parse_error_carries_line_and_column() {
    let path = temp_path("bad-directive.system");
    std::fs::write(&path, "content M1 values 0 1\nbunches c\n").unwrap();
    let out = bin().arg("check").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("2:1"), "{err}");
    assert!(err.contains("unknown directive"), "{err}");
}

#[test]
fn missing_file_exits_two() {
    let out = bin().args(["check", "/nonexistent/nowhere.system"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_scenario_exits_two() {
    let out = bin().args(["scenario", "ghz"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown scenario"), "{}", stderr(&out));
}

#[test]
fn wrong_parameter_count_exits_two() {
    let out = bin()
        .args(["scenario", "bell", "--params", "1/4", "1/4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("16"), "{}", stderr(&out));
}

#[test]
fn selected_flags_limit_the_report() {
    let path = temp_path("flags.system");
    bin().args(["scenario", "specker", "--out"]).arg(&path).output().unwrap();
    let out = bin()
        .arg("check")
        .arg(&path)
        .args(["--cbd", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let json = stdout(&out);
    assert!(json.contains("\"cbd\""), "{json}");
    assert!(!json.contains("\"fine\""), "{json}");
    assert!(!json.contains("\"octuple\""), "{json}");
    assert!(!json.contains("\"nonsignaling\""), "{json}");
}

#[test]
fn scenario_params_build_custom_systems() {
    // Rank-2 with opposite correlations: contextual.
    let path = temp_path("rank2-opposite.system");
    let out = bin()
        .args([
            "scenario", "rank2", "--params", "1/2", "0", "0", "1/2", "0", "1/2", "1/2", "0",
            "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let out = bin().arg("check").arg(&path).args(["--cbd", "--json"]).output().unwrap();
    let report = contextlab::Report::from_json(&stdout(&out)).unwrap();
    assert!(report.cbd.unwrap().contextual);

    // Identical tables: noncontextual.
    let path = temp_path("rank2-identical.system");
    bin().args([
        "scenario", "rank2", "--params", "1/2", "0", "0", "1/2", "1/2", "0", "0", "1/2", "--out",
    ])
    .arg(&path)
    .output()
    .unwrap();
    let out = bin().arg("check").arg(&path).args(["--cbd", "--json"]).output().unwrap();
    let report = contextlab::Report::from_json(&stdout(&out)).unwrap();
    assert!(!report.cbd.unwrap().contextual);
}

#[test]
fn leggett_garg_preset_is_contextual() {
    let path = temp_path("lg-frustrated.system");
    let out = bin()
        .args(["scenario", "leggett-garg", "--preset", "frustrated", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let out = bin().arg("check").arg(&path).args(["--cbd", "--octuple", "--json"]).output().unwrap();
    let report = contextlab::Report::from_json(&stdout(&out)).unwrap();
    assert!(report.cbd.unwrap().contextual);
    assert!(!report.octuple.unwrap().feasible);
}
