use std::path::Path;
use std::process::{Command, Output};

use wedge_stark_cli::density::DensitySidecar;
use wedge_stark_cli::oracle::OracleSummary;
use wedge_stark_cli::sweep::read_sweep_csv;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wedge-stark")).args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn explicit_sweep_writes_rows_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = run(&[
        "sweep",
        "--d",
        "1,2",
        "--theta0",
        "pi/2,3pi/2",
        "--f",
        "0,1",
        "--direction",
        "tip",
        "--out",
        path(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read_sweep_csv(std::fs::File::open(&out).unwrap()).unwrap();
    let keys: Vec<_> = rows.iter().map(|r| (r.d, r.theta0.as_str(), r.f)).collect();
    assert_eq!(
        keys,
        [
            (1.0, "pi/2", 0.0),
            (1.0, "pi/2", 1.0),
            (1.0, "3pi/2", 0.0),
            (1.0, "3pi/2", 1.0),
            (2.0, "pi/2", 0.0),
            (2.0, "pi/2", 1.0),
            (2.0, "3pi/2", 0.0),
            (2.0, "3pi/2", 1.0),
        ]
    );
    for r in &rows {
        assert_eq!(r.direction, "tip");
        if r.f == 0.0 {
            assert_eq!(r.shift, Some(0.0));
        } else {
            assert!(r.shift.unwrap() < 0.0);
        }
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let one = run(&["--threads", "1", "sweep", "--preset", "fig4"]);
    let many = Command::new(env!("CARGO_BIN_EXE_wedge-stark"))
        .env("WEDGE_STARK_THREADS", "3")
        .args(["sweep", "--preset", "fig4"])
        .output()
        .unwrap();
    assert!(one.status.success() && many.status.success());
    assert_eq!(one.stdout, many.stdout);
    assert!(one.stdout.ends_with(b"\n") && !one.stdout.contains(&b'\r'));
}

#[test]
fn sweep_without_lists_is_rejected() {
    let o = run(&["sweep", "--d", "1"]);
    assert!(!o.status.success());
    let o = run(&["sweep", "--preset", "fig7"]);
    assert!(!o.status.success());
    let o = run(&["sweep", "--d", "1", "--theta0", "2pi", "--f", "1"]);
    assert!(!o.status.success());
}

#[test]
fn density_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("packman.csv");
    let o = run(&["density", "--d", "2", "--theta0", "3pi/2", "--f", "10", "--resolution", "64", "--out", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("x,y,density\n"));
    assert_eq!(text.lines().count(), 1 + 64 * 65);
    let sidecar: DensitySidecar =
        serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap()).unwrap();
    assert_eq!(sidecar.theta0, "3pi/2");
    assert_eq!(sidecar.peaks.len(), 2);
    assert!(sidecar.beta_star > 0.0);

    let o = run(&["density", "--d", "2", "--theta0", "pi", "--resolution", "16", "--out", path(&out)]);
    assert!(!o.status.success());
}

#[test]
fn oracle_empty_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.json");
    std::fs::write(&cfg, r#"{"configurations": []}"#).unwrap();
    let o = run(&["oracle", path(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no configurations"));
}

#[test]
fn oracle_coarse_mesh_reports_unreliable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("coarse.json");
    let out = dir.path().join("report.json");
    std::fs::write(
        &cfg,
        r#"{"mesh": 16, "configurations": [
            {"d": 1, "theta0": "pi/2", "f": 0, "direction": "wide"},
            {"d": 5, "theta0": "3pi/2", "f": 1, "direction": "tip"}]}"#,
    )
    .unwrap();
    let o = run(&["oracle", path(&cfg), "--out", path(&out)]);
    let report: OracleSummary = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.results.len(), 2);
    assert!(report.results.iter().all(|r| !r.reliable && r.mesh == 16));
    assert_eq!(o.status.success(), report.all_bounds_hold);
}

#[test]
fn table1_and_zeros_examples() {
    let o = run(&["table1"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("d,L,theta0_label,energy,energy_sig6"));
    assert_eq!(text.lines().count(), 91);
    assert!(text.contains("\n1,1,pi/20,655.90,"));
    assert!(text.contains("\n10,100,3pi/2,0.11,"));

    let o = run(&["zeros", "--min", "pi/2", "--max", "pi", "--steps", "2"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.ends_with("3.141592654,1,3.83170597\n"), "{text}");
    let o = run(&["zeros", "--min", "pi", "--max", "pi/2"]);
    assert!(!o.status.success());
}
