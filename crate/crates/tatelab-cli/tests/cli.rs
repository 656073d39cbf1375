use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn tatelab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tatelab"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tatelab-cli-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    dir
}

#[test]
fn completion_writes_a_passing_report() {
    let dir = scratch("completion");
    let out = tatelab().args(["completion", "--out"]).arg(&dir).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("completion.json")).unwrap()).unwrap();
    assert_eq!(json["schema"], "tatelab-report/1");
    assert_eq!(json["summary"]["fail"], 0);
    assert!(dir.join("completion.txt").exists());
    assert!(dir.join("completion.timing.json").exists());
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn failing_checks_set_the_exit_code() {
    let dir = scratch("relations");
    let out = tatelab().args(["relations", "--out"]).arg(&dir).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL  relations.f2*f5"));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn malformed_config_exits_with_usage_error() {
    let dir = scratch("config");
    fs::create_dir_all(&dir).unwrap();
    let config = dir.join("bad.toml");
    fs::write(&config, "[windows]\nno_such_field = 1\n").unwrap();
    let out = tatelab().args(["fgl", "--config"]).arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    fs::remove_dir_all(&dir).unwrap();
}
