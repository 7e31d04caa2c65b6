use std::path::PathBuf;
use std::process::Command;

fn qclock() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qclock"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qclock-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn run_by_name_exits_zero_and_reports() {
    let out = qclock()
        .args(["run", "--scenario", "two-qubit"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS"), "{text}");
    assert!(text.contains("constraint_residual"), "{text}");
}

#[test]
fn json_flag_emits_a_parseable_report() {
    let out = qclock()
        .args(["run", "--scenario", "two-qubit", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["scenario"], "two-qubit");
    assert_eq!(report["passed"], true);
    assert!(report["checks"].as_array().unwrap().len() >= 4);
    assert_eq!(report["timeseries"]["columns"][0], "t");
}

#[test]
fn unknown_scenario_exits_two() {
    let out = qclock()
        .args(["run", "--scenario", "warp-drive"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warp-drive"));
}

#[test]
fn missing_config_file_exits_two() {
    let out = qclock()
        .args(["run", "/no/such/config.toml"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("config.toml"));
}

#[test]
fn failing_check_exits_one() {
    let dir = temp_dir("fail");
    let path = dir.join("impossible.toml");
    std::fs::write(
        &path,
        "scenario = \"two-qubit\"\n\n[tolerances]\nshift_fidelity = 2.0\n",
    )
    .unwrap();
    let out = qclock().args(["run"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn list_scenarios_names_every_builtin() {
    let out = qclock().args(["list-scenarios"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for name in [
        "two-qubit",
        "history-state",
        "ambiguity",
        "gaussian-clock",
        "observer-records",
        "arrow",
    ] {
        assert!(text.contains(name), "missing {name} in {text}");
    }
    let out = qclock()
        .args(["list-scenarios", "--json"])
        .output()
        .unwrap();
    let listed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(listed.as_array().unwrap().len(), 6);
}

#[test]
fn out_dir_receives_report_and_timeseries() {
    let dir = temp_dir("out");
    let out = qclock()
        .args(["run", "--scenario", "two-qubit", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["scenario"], "two-qubit");
    let csv = std::fs::read_to_string(dir.join("timeseries.csv")).unwrap();
    assert!(csv.starts_with("t,fidelity,purity,residual,entropy\n"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn config_output_section_writes_files() {
    let dir = temp_dir("cfg-out");
    let out_dir = dir.join("results");
    let path = dir.join("run.toml");
    std::fs::write(
        &path,
        format!(
            "scenario = \"gaussian-clock\"\nseed = 6\n\n[output]\ndir = \"{}\"\n",
            out_dir.display()
        ),
    )
    .unwrap();
    let out = qclock().args(["run"]).arg(&path).output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out_dir.join("report.json").exists());
    assert!(out_dir.join("timeseries.csv").exists());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn seed_flag_overrides_the_config_seed() {
    let out = qclock()
        .args(["run", "--scenario", "arrow", "--seed", "77", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["seed"], 77);
}
