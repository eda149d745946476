use std::path::Path;
use std::process::{Command, Output};

fn shellbuck(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shellbuck"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .output()
        .expect("cannot run shellbuck")
}

fn read(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn sweep_writes_csv_and_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = shellbuck(dir.path(), &["korn-sweep", "--h-list", "0.1,0.05,0.02"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("fit K: exponent") && stdout.contains("target 1.5"), "{stdout}");

    let csv = read(dir.path().join("korn-sweep.csv"));
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "h,K,m_star,boundary_flag,residual,k_ax,p_rad,m_max,size,status");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("1.0000000000000001e-1,"));
    assert!(rows.iter().all(|r| r.ends_with(",ok")));

    let record: serde_json::Value = serde_json::from_str(&read(dir.path().join("korn-sweep.json"))).unwrap();
    assert_eq!(record["command"], "korn-sweep");
    assert_eq!(record["input_hash"].as_str().unwrap().len(), 64);
    assert_eq!(record["fits"][0]["target"], 1.5);
    assert!(record["config"].as_str().unwrap().contains("h_list = 1e-1,5e-2,2e-2"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["buckling-sweep", "--h-list", "0.1,0.05,0.02", "--eps", "0.5"];
    assert!(shellbuck(a.path(), &args).status.success());
    assert!(shellbuck(b.path(), &args).status.success());
    assert_eq!(std::fs::read(a.path().join("buckling-sweep.csv")).unwrap(), std::fs::read(b.path().join("buckling-sweep.csv")).unwrap());
    let hash = |d: &Path| {
        let v: serde_json::Value = serde_json::from_str(&read(d.join("buckling-sweep.json"))).unwrap();
        v["input_hash"].as_str().unwrap().to_string()
    };
    assert_eq!(hash(a.path()), hash(b.path()));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# twisted branch\nh_list = 0.1, 0.05\neps = 0.25\nseed = 3\n").unwrap();
    let out = shellbuck(dir.path(), &["trivial-branch", "--config", cfg.to_str().unwrap(), "--nu", "0.2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(dir.path().join("trivial-branch.csv"));
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().nth(1).unwrap().starts_with("1.0000000000000001e-1,2.5000000000000000e-1,"));
    let record = read(dir.path().join("trivial-branch.json"));
    assert!(record.contains("nu = 2e-1") && record.contains("seed = 3"));
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = shellbuck(dir.path(), &["korn-sweep", "--set", "foo=1", "--set", "bar=2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("foo") && err.contains("bar"), "{err}");
    assert_eq!(shellbuck(dir.path(), &["korn-sweep", "--nu", "0.7"]).status.code(), Some(1));
    assert_eq!(shellbuck(dir.path(), &["korn-sweep", "--bogus"]).status.code(), Some(1));
    assert_eq!(shellbuck(dir.path(), &["component-sweep", "--components", "xy"]).status.code(), Some(1));
    assert_eq!(shellbuck(dir.path(), &["dent-solve", "--curvature", "5"]).status.code(), Some(1));
}

#[test]
fn unconverged_dent_exits_with_two_and_still_writes() {
    let dir = tempfile::tempdir().unwrap();
    let out = shellbuck(dir.path(), &["dent-solve", "--curvature", "1.5", "--max-iter", "5", "--nodes", "41"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("did not converge"));
    assert!(dir.path().join("dent-solve.csv").exists());
}

#[test]
fn dent_solve_reports_compressive_center() {
    let dir = tempfile::tempdir().unwrap();
    let out = shellbuck(dir.path(), &["dent-solve", "--nodes", "41"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let center: f64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("hoop_center: "))
        .and_then(|v| v.trim().parse().ok())
        .unwrap();
    assert!(center < 0.0);
    assert_eq!(read(dir.path().join("dent-solve.csv")).lines().count(), 41 * 41 + 1);
}
