use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_apsflow");

fn apsflow(args: &[&str], cwd: &Path) -> Output {
    Command::new(BIN).args(args).current_dir(cwd).env_remove("REPORT_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const RAMP: &str = r#"
name = "ramp"
task = "aps-index"

[family]
builtin = "linear-diagonal"
offsets = [-1.0, 5.0]
slopes = [2.0, 0.0]

[expect]
sfl = 1
index = 1
"#;

#[test]
fn list_shows_bundled_scenarios_with_tags() {
    let dir = tempfile::tempdir().unwrap();
    let o = apsflow(&["list"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() >= 8);
    for line in lines {
        assert!(line.split_whitespace().count() >= 3, "untagged entry: {line}");
    }
}

#[test]
fn run_writes_report_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r");
    let o = apsflow(&["run", "constant-baseline", "--out", out.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("constant-baseline: pass"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("constant-baseline.report.json")).unwrap()).unwrap();
    assert_eq!(report["schema_version"], "1");
    assert_eq!(report["passed"], true);
}

#[test]
fn report_dir_defaults_and_env_override() {
    let dir = tempfile::tempdir().unwrap();
    let scn = dir.path().join("ramp.toml");
    std::fs::write(&scn, RAMP).unwrap();

    let o = apsflow(&["run", "ramp.toml"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("reports/ramp.report.json").exists());

    let env_dir = dir.path().join("env");
    let o = Command::new(BIN).args(["run", "ramp.toml"]).current_dir(dir.path()).env("REPORT_DIR", &env_dir).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(env_dir.join("ramp.report.json").exists());
}

#[test]
fn expectation_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.toml"), RAMP.replace("sfl = 1", "sfl = 2")).unwrap();
    let o = apsflow(&["run", "bad.toml", "--out", "r"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAIL"));
    assert!(dir.path().join("r/ramp.report.json").exists());
}

#[test]
fn malformed_config_exits_1_with_location() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("broken.toml"), RAMP.replace("slopes = [2.0, 0.0]", "slopes = [2.0, ")).unwrap();
    let o = apsflow(&["run", "broken.toml"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));

    std::fs::write(dir.path().join("unknown.toml"), RAMP.replace("[expect]", "[params]\nbogus = 1\n[expect]")).unwrap();
    let o = apsflow(&["run", "unknown.toml"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bogus"));
}

#[test]
fn usage_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = apsflow(&["frobnicate"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Usage"));
    let o = apsflow(&["run", "no-such-scenario"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let o = apsflow(&["--help"], dir.path());
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn eigenpaths_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = apsflow(&["eigenpaths", "crossing-ramp", "--samples", "5", "--out", "e"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("e/crossing-ramp.eigenpaths.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,lambda_1,lambda_2");
    assert_eq!(lines.len(), 6);
    assert!(lines[3].starts_with("0.5,0,5"), "{}", lines[3]);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a", "b"] {
        let o = apsflow(&["run", "gluing-ramp", "--out", out], dir.path());
        assert_eq!(o.status.code(), Some(0));
    }
    let a = std::fs::read(dir.path().join("a/gluing-ramp.report.json")).unwrap();
    let b = std::fs::read(dir.path().join("b/gluing-ramp.report.json")).unwrap();
    assert_eq!(a, b);
}
