use std::path::Path;
use std::process::{Command, Output};

const TWIST: &str = r#"{"model": "disc", "segments": [{"kind": "twist",
    "chart": {"kind": "disc", "cx": 0, "cy": 0, "radius": 0.8},
    "profile": {"kind": "plateau", "turns": 1, "inner": 0, "outer": 0.25}}]}"#;

fn ggqm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ggqm")).args(args).output().unwrap()
}

fn record(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_twist(dir: &Path) -> String {
    let p = dir.join("twist.json");
    std::fs::write(&p, TWIST).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    write_twist(dir.path());
    let out = dir.path().join("out");
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        format!("isotopy = \"twist.json\"\nqm = [\"lk:1,2\"]\nsamples = 200\nseed = 3\noutput_dir = {:?}\n", out.to_str().unwrap()),
    )
    .unwrap();
    let a = record(&ggqm(&["estimate", "--config", cfg.to_str().unwrap()]));
    assert_eq!(a["operation"], "estimate");
    assert_eq!(a["tag"], "Phi-n");
    let v = a["payload"][0]["value"].as_f64().unwrap();
    assert!(v > 0.0, "{v}");
    let lines = std::fs::read_to_string(out.join("results.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), 1);

    // a flag overrides the file and changes the hash
    let b = record(&ggqm(&["estimate", "--config", cfg.to_str().unwrap(), "--seed", "4"]));
    assert_ne!(a["config_hash"], b["config_hash"]);
    assert_eq!(std::fs::read_to_string(out.join("results.jsonl")).unwrap().lines().count(), 2);
}

#[test]
fn trace_given_points() {
    let dir = tempfile::tempdir().unwrap();
    let iso = write_twist(dir.path());
    let cfg = dir.path().join("trace.toml");
    std::fs::write(&cfg, format!("isotopy = {iso:?}\npoints = [[-0.2, 0.0], [0.2, 0.0]]\n")).unwrap();
    let dump = dir.path().join("loops.json");
    let r = record(&ggqm(&["trace", "--config", cfg.to_str().unwrap(), "--dump-trace", dump.to_str().unwrap()]));
    assert_eq!(r["payload"]["length"], 2);
    assert!(dump.exists());
}

#[test]
fn bad_input_fails_cleanly() {
    let out = ggqm(&["estimate", "--isotopy", "/nonexistent/iso.json"]);
    assert!(!out.status.success());
    assert!(!out.stderr.is_empty());
    let out = ggqm(&["estimate", "--model", "disc", "--qm", "nonsense"]);
    assert!(!out.status.success());
}

#[test]
fn selftest_passes() {
    let out = ggqm(&["selftest"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}
