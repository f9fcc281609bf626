use std::path::Path;
use std::process::{Command, Output};

use semimirror::decay::relative_decay_rate;
use semimirror_cli::SweepConfig;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semimirror"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn text(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn table(out: &Output) -> (Vec<String>, Vec<Vec<f64>>) {
    let s = text(out);
    let mut lines = s.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn xi_map_full_resolution() {
    let out = run(&["xi-map"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = table(&out);
    assert_eq!(header, ["r_a", "r_b", "xi"]);
    assert_eq!(rows.len(), 10201);
    let max = rows.iter().max_by(|a, b| a[2].total_cmp(&b[2])).unwrap();
    assert_eq!(max, &vec![1.0, 1.0, 1.5]);
    assert!(rows
        .iter()
        .any(|r| r[0] == 0.6 && r[1] == 0.8 && r[2] == 1.152));
}

#[test]
fn xi_map_resolution_two_is_corners() {
    let out = run(&["xi-map", "--resolution", "2"]);
    let (_, rows) = table(&out);
    let xi: Vec<f64> = rows.iter().map(|r| r[2]).collect();
    assert_eq!(xi, [0.0, 0.0, 0.0, 1.5]);
}

#[test]
fn decay_sweep_contact_and_tail() {
    let out = run(&[
        "decay-sweep",
        "--xi",
        "1.5",
        "--mu",
        "0",
        "--start",
        "0",
        "--stop",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = table(&out);
    assert_eq!(header, ["xi", "mu", "kx", "u", "ratio"]);
    assert_eq!(rows[0][4], 0.0);
    assert!((rows.last().unwrap()[4] - 1.0).abs() < 0.1);
}

#[test]
fn zero_xi_gives_unit_ratios() {
    let out = run(&["decay-sweep", "--xi", "0", "--mu", "0,0.5,1"]);
    let (_, rows) = table(&out);
    assert!(rows.iter().all(|r| r[4] == 1.0));
}

#[test]
fn sweep_rows_reproduce_through_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sweep.toml",
        "mode = \"decay-sweep\"\nmu = [0.0, 0.3, 1.0]\n[mirror]\npairs = [[0.6, 0.8]]\nxi = [0.2]\n[grid]\nstart = 0.01\nstop = 40.0\ncount = 300\nspacing = \"log\"\n",
    );
    let out = run(&["decay-sweep", "--config", &cfg]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (_, rows) = table(&out);
    assert_eq!(rows.len(), 2 * 3 * 300);
    for r in &rows {
        let (xi, mu, kx, u, ratio) = (r[0], r[1], r[2], r[3], r[4]);
        assert!((u - 2.0 * kx).abs() <= 1e-11 * u.max(1.0));
        let expected = relative_decay_rate(u, mu, xi).unwrap();
        assert!((expected - ratio).abs() <= 1e-10, "{r:?} vs {expected}");
    }
}

#[test]
fn json_matches_csv() {
    let csv = run(&["decay-sweep", "--xi", "1.2", "--count", "7"]);
    let json = run(&[
        "decay-sweep",
        "--xi",
        "1.2",
        "--count",
        "7",
        "--format",
        "json",
    ]);
    let (_, rows) = table(&csv);
    let parsed: Vec<serde_json::Value> = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(parsed.len(), rows.len());
    for (row, obj) in rows.iter().zip(&parsed) {
        let ratio = obj["ratio"].as_f64().unwrap();
        assert!((ratio - row[4]).abs() <= 1e-11);
    }
}

#[test]
fn oracle_check_default_passes_and_strict_tolerance_fails() {
    let out = run(&["oracle-check"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (header, rows) = table(&out);
    assert_eq!(
        header,
        ["u", "mu", "xi", "closed_form", "oracle", "abs_diff"]
    );
    assert_eq!(rows.len(), 40 * 3 * 2);
    assert!(rows.iter().all(|r| r[5] <= 1e-8));

    let strict = run(&["oracle-check", "--tolerance", "1e-16"]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn oracle_check_free_space_is_exact() {
    let out = run(&["oracle-check", "--xi", "0", "--count", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = table(&out);
    assert!(rows.iter().all(|r| r[5] == 0.0));
}

#[test]
fn coarse_quadrature_reports_failing_rows() {
    let out = run(&[
        "oracle-check",
        "--nodes",
        "4",
        "--count",
        "4",
        "--xi",
        "1.5",
        "--mu",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out).contains("nan"));
}

#[test]
fn validate_exit_codes() {
    let ok = run(&["validate", "--ra", "0.5", "--rb", "0.5"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = run(&[
        "validate", "--ra", "0.5", "--rb", "0.5", "--phases", "0,0,0,0",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(text(&bad).contains("phase-condition,3.14159265359,1e-9,false"));
    let energy = run(&["validate", "--ra", "0.5", "--rb", "0.5", "--t-a", "0.5"]);
    assert_eq!(energy.status.code(), Some(1));
    assert!(text(&energy).contains("energy-side-a"));
}

#[test]
fn scatter_single_packet_splits_energy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "scatter.toml",
        "mode = \"scatter-demo\"\n[mirror]\npairs = [[0.6, 0.6]]\n[scatter]\nfinal_time = 30.0\n[[scatter.packets]]\nside = \"a\"\ncenter = 15.0\n",
    );
    let out = run(&["scatter-demo", "--config", &cfg]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (header, rows) = table(&out);
    assert_eq!(
        header,
        [
            "input_a",
            "input_b",
            "output_a",
            "output_b",
            "balance",
            "relative_imbalance"
        ]
    );
    let r = &rows[0];
    assert!((r[2] - 0.36).abs() < 1e-11);
    assert!((r[3] - 0.64).abs() < 1e-11);
    assert!(r[5] <= 1e-12);
}

#[test]
fn scatter_refuses_invalid_mirror_without_force() {
    let args = [
        "scatter-demo",
        "--ra",
        "0.5",
        "--rb",
        "0.5",
        "--phases",
        "0,0,0,0",
    ];
    let refused = run(&args);
    assert_eq!(refused.status.code(), Some(1));
    assert!(refused.stdout.is_empty());

    let forced = bin().args(args).arg("--force").output().unwrap();
    assert_eq!(forced.status.code(), Some(0));
    let (_, rows) = table(&forced);
    assert!(rows[0][5] > 1e-3);
}

#[test]
fn scatter_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let snaps = dir.path().join("snaps");
    let out = bin()
        .args(["scatter-demo", "--ra", "1", "--rb", "1", "--snapshot-dir"])
        .arg(&snaps)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let last = std::fs::read_to_string(snaps.join("snapshot_002.csv")).unwrap();
    let mut lines = last.lines();
    assert_eq!(lines.next(), Some("x,re,im,intensity"));
    assert_eq!(lines.count(), 2048);
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(run(&["decay-sweep", "--xi", "2"]).status.code(), Some(2));
    assert_eq!(run(&["decay-sweep", "--count", "1"]).status.code(), Some(2));
    assert_eq!(
        run(&["decay-sweep", "--config", "/nonexistent/sweep.toml"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["validate", "--phases", "1,2"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let typo = write(
        dir.path(),
        "typo.toml",
        "mode = \"decay-sweep\"\nmuu = [0.0]\n",
    );
    assert_eq!(
        run(&["decay-sweep", "--config", &typo]).status.code(),
        Some(2)
    );
    let wrong_mode = write(dir.path(), "mode.toml", "mode = \"xi-map\"\n");
    assert_eq!(
        run(&["decay-sweep", "--config", &wrong_mode]).status.code(),
        Some(2)
    );
    let out = dir.path().join("missing").join("out.csv");
    let status = bin()
        .args(["xi-map", "--out"])
        .arg(&out)
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(2));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sweep.toml",
        "mode = \"decay-sweep\"\nmu = [0.5]\n[mirror]\nxi = [0.3]\n[grid]\nstart = 0.0\nstop = 1.0\ncount = 3\n",
    );
    let (_, rows) = table(&run(&[
        "decay-sweep",
        "--config",
        &cfg,
        "--mu",
        "1",
        "--count",
        "5",
    ]));
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r[0] == 0.3 && r[1] == 1.0));
}

#[test]
fn written_config_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "c.toml",
        "mode = \"oracle-check\"\nmu = [0.0, 1.0]\ntolerance = 1e-9\n[mirror]\nxi = [1.5]\n[quadrature]\nnodes = 96\n",
    );
    let cfg = SweepConfig::from_file(Path::new(&path)).unwrap();
    let again = SweepConfig::from_toml_str(&cfg.to_toml_string().unwrap()).unwrap();
    assert_eq!(cfg, again);
}
