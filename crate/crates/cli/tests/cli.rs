use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_levy-chaos"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("exp.toml");
    std::fs::write(&p, body).unwrap();
    p
}

const GAUSS: &str = r#"
seed = 5
samples = 100000
[lattice]
volumes = [0.5, 1.0, 1.5]
[measure]
zero_weight = 1.0
"#;

#[test]
fn empty_check_list_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), GAUSS);
    let out = dir.path().join("out");
    let o = run(&["report", "--config", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(!out.exists());
}

#[test]
fn gaussian_cf_passes() {
    let cfg = configs().join("gaussian.toml");
    let o = run(&["verify", "cf", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("quantity,target,estimate,stderr,pass"));
    assert_eq!(lines.filter(|l| l.ends_with(",pass")).count(), 13);
}

#[test]
fn reruns_are_byte_identical_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let body = format!("checks = [\"cf\", \"moments\", \"isometry\"]\n{GAUSS}");
    let cfg = write_config(dir.path(), &body);
    let mut outputs = Vec::new();
    for (name, threads) in [("a", "1"), ("b", "3"), ("c", "1")] {
        let out = dir.path().join(name);
        let o = run(&[
            "report",
            "--config",
            cfg.to_str().unwrap(),
            "--out-dir",
            out.to_str().unwrap(),
            "--threads",
            threads,
            "--samples",
            "20000",
        ]);
        assert!(o.status.code() == Some(0) || o.status.code() == Some(1));
        let files: Vec<Vec<u8>> = ["cf.csv", "moments.csv", "isometry.csv", "report.csv"]
            .iter()
            .map(|f| std::fs::read(out.join(f)).unwrap())
            .collect();
        outputs.push(files);
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("mixed.toml");
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = run(&["simulate", "--config", cfg.to_str().unwrap(), "--samples", "50", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("sample_index,cell,gaussian,jump_0,jump_1,jump_2"));
    assert_eq!(lines.count(), 50 * 5);
}

#[test]
fn recurrence_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[lattice]\nvolumes = [1.0]\n[measure]\nzero_weight = 0.5\natoms = [[-1.0, 0.25], [1.0, 0.25]]\n",
    );
    let o = run(&["recurrence", "--config", cfg.to_str().unwrap(), "--order", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "n,b_n,a_n,gamma_n\n0,0,,1\n1,0,0.5,0.5\n2,,0.5,0.25\n");
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), &format!("checks = [\"nope\"]\n{GAUSS}"));
    let o = run(&["report", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("nope") && err.contains("line 1"), "{err}");

    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["report"]).status.code(), Some(2));

    // moment sequences cannot be sampled
    let ms = write_config(dir.path(), "[lattice]\nvolumes = [1.0]\n[measure]\nmoments = [1.0, 0.0, 1.0]\n");
    let o = run(&["verify", "cf", "--config", ms.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
