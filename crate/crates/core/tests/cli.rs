use std::path::Path;
use std::process::Command;

fn bnls() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_bnls"));
    c.env_remove("BNLS_OUT");
    c
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn plan_subcommand_writes_report_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("plan");
    let status = bnls().args(["plan-globalization", "--out"]).arg(&out).status().unwrap();
    assert!(status.success());
    let report = std::fs::read_to_string(out.join("plan.txt")).unwrap();
    assert!(report.contains("262144"));
    let manifest: toml::Table = std::fs::read_to_string(out.join("manifest.toml")).unwrap().parse().unwrap();
    assert_eq!(manifest["scenario"].as_str(), Some("plan-globalization"));
    assert_eq!(manifest["passed"].as_bool(), Some(true));
    let listed = manifest["files"].as_array().unwrap();
    assert!(listed.iter().any(|f| f.as_str() == Some("plan.csv")));
    let count = std::fs::read_dir(&out).unwrap().filter(|e| e.as_ref().unwrap().file_name() == "manifest.toml").count();
    assert_eq!(count, 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", "[run]\nscenario = \"evolve\"\n[grid]\npointz = 3\n");
    assert_eq!(bnls().arg("run").arg("--config").arg(&bad).status().unwrap().code(), Some(2));

    let unknown = write(dir.path(), "unknown.toml", "[run]\nscenario = \"teleport\"\n");
    assert_eq!(bnls().arg("run").arg("--config").arg(&unknown).status().unwrap().code(), Some(2));

    let big = write(dir.path(), "big.toml", "[run]\nscenario = \"evolve\"\n[grid]\npoints = 4096\n");
    assert_eq!(bnls().arg("run").arg("--config").arg(&big).status().unwrap().code(), Some(3));

    let capped = bnls().args(["bernstein", "--max-grid", "128", "--out"]).arg(dir.path().join("b")).status().unwrap();
    assert_eq!(capped.code(), Some(3));

    let strict = write(
        dir.path(),
        "strict.toml",
        "[run]\nscenario = \"multiplier-bound\"\n[multiplier]\nsamples = 1000\nbound = 0.01\n",
    );
    let st = bnls().arg("run").arg("--config").arg(&strict).arg("--out").arg(dir.path().join("m")).status().unwrap();
    assert_eq!(st.code(), Some(5));
    assert!(dir.path().join("m/multiplier.csv").exists());
}

#[test]
fn env_overrides_out_and_seed_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "m.toml", "[run]\nscenario = \"multiplier-bound\"\nseed = 3\n[multiplier]\nsamples = 1000\n");
    let env_out = dir.path().join("from-env");
    let st = bnls()
        .env("BNLS_OUT", &env_out)
        .args(["run", "--seed", "11", "--threads", "2", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("from-flag"))
        .status()
        .unwrap();
    assert!(st.success());
    assert!(!dir.path().join("from-flag").exists());
    let manifest: toml::Table = std::fs::read_to_string(env_out.join("manifest.toml")).unwrap().parse().unwrap();
    assert_eq!(manifest["seed"].as_integer(), Some(11));
    let csv = std::fs::read_to_string(env_out.join("multiplier.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().contains(",11,"));
}

#[test]
fn reordered_config_has_the_same_digest_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.toml", "[run]\nscenario = \"plan-globalization\"\nseed = 1\n[plan]\nt0 = 4096.0\nc1 = 1.0\n");
    let b = write(dir.path(), "b.toml", "[plan]\nc1 = 1.0\nt0 = 4096.0\n\n[run]\nseed = 1\nscenario = \"plan-globalization\"\n");
    for (cfg, out) in [(&a, "ra"), (&b, "rb")] {
        assert!(bnls().arg("run").arg("--config").arg(cfg).arg("--out").arg(dir.path().join(out)).status().unwrap().success());
    }
    let digest = |d: &str| {
        let m: toml::Table = std::fs::read_to_string(dir.path().join(d).join("manifest.toml")).unwrap().parse().unwrap();
        m["config_digest"].as_str().unwrap().to_string()
    };
    assert_eq!(digest("ra"), digest("rb"));
    let csv = |d: &str| std::fs::read(dir.path().join(d).join("plan.csv")).unwrap();
    assert_eq!(csv("ra"), csv("rb"));
}
