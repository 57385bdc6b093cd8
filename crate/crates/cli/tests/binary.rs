use std::fs;
use std::process::Command;

fn zafa() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_zafa"));
    c.env_remove("ZAFA_CACHE_DIR");
    c
}

#[test]
fn am_csv_to_stdout() {
    let out = zafa()
        .args([
            "run",
            "--task",
            "am",
            "--catalog",
            "Z6,S3",
            "--format",
            "csv",
            "--no-cache",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("Z6,ok,Z6,6,6,"));
    assert!(lines[2].starts_with("S3,ok,S3,6,3,2.333333333333333"));
}

#[test]
fn table_twice_is_served_from_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| {
            let out = zafa()
                .args(["run", "--task", "table", "--catalog", "S3"])
                .env("ZAFA_CACHE_DIR", &cache)
                .output()
                .unwrap();
            assert_eq!(out.status.code(), Some(0));
            out.stdout
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 1);

    let flag = dir.path().join("flag-cache");
    let out = zafa()
        .args(["run", "--task", "table", "--catalog", "S3", "--cache-dir"])
        .arg(&flag)
        .output()
        .unwrap();
    assert_eq!(out.stdout, runs[0]);
    assert!(flag.exists());
}

#[test]
fn malformed_spec_exits_2_without_report() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.json");
    fs::write(&spec, "{ not json").unwrap();
    let report = dir.path().join("out.json");
    let out = zafa()
        .args(["run", "--task", "am", "--no-cache", "--spec"])
        .arg(&spec)
        .arg("--out")
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!report.exists());
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed spec"));
}

#[test]
fn unknown_task_is_rejected() {
    let out = zafa()
        .args(["run", "--task", "nope", "--catalog", "S3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_group_exits_1_with_full_report() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("groups.json");
    fs::write(
        &spec,
        r#"[{"permutation": {"degree": 8, "generators": [[1,0,2,3,4,5,6,7],[1,2,3,4,5,6,7,0]]}}, {"catalog": "Q8"}]"#,
    )
    .unwrap();
    let report = dir.path().join("out.json");
    let out = zafa()
        .args(["run", "--task", "am", "--no-cache", "--spec"])
        .arg(&spec)
        .arg("--out")
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["rows"][0]["status"], "error");
    assert_eq!(v["rows"][1]["status"], "ok");
}

#[test]
fn verify_subcommand() {
    let out = zafa()
        .args(["verify", "--catalog", "S3,Q8", "--format", "csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("check,subject,residual,tolerance,passed,note"));
    assert!(!text.contains(",false,"));

    let out = zafa().args(["verify", "--catalog", ""]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"].as_array().unwrap().len(), 0);
}
