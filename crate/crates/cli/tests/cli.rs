use std::path::Path;
use std::process::{Command, Output};

use geohull::io::{read_json, read_points, read_summaries, ScalingReport};

fn geohull(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geohull"))
        .args(args)
        .env_remove("GEOHULL_THREADS")
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config(dir: &Path, name: &str, body: &str, extra: &str) -> String {
    let text = format!(
        r#"{{
  "schema_version": 1,
  "body": {body},
  "model": "inscribed",
  "n_grid": [8, 16],
  "replications": 4,
  "master_seed": 42,
  "statistics": ["missed_volume", "f0"]{extra}
}}"#
    );
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const BALL: &str = r#"{"shape": "geodesic_ball", "geometry": "spherical", "dim": 2, "radius": 0.8}"#;

#[test]
fn simulate_writes_summaries_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", BALL, "");
    let out = dir.path().join("out");
    let o = geohull(&["simulate", "-c", &cfg, "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = read_summaries(&out.join("summaries.csv")).unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows.iter().filter(|r| r.statistic.name() == "f0").count(), 2);
    let manifest: serde_json::Value = read_json(&out.join("manifest.json")).unwrap();
    assert_eq!(manifest["config"]["master_seed"], 42);
    assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn simulate_is_reproducible_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", BALL, "");
    let run = |name: &str, threads: &str, env: bool| {
        let out = dir.path().join(name);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_geohull"));
        cmd.args(["simulate", "-c", &cfg, "-o", out.to_str().unwrap()]);
        if env {
            cmd.env("GEOHULL_THREADS", threads);
        } else {
            cmd.env_remove("GEOHULL_THREADS").args(["--threads", threads]);
        }
        assert!(cmd.output().unwrap().status.success());
        std::fs::read(out.join("summaries.csv")).unwrap()
    };
    let a = run("a", "1", false);
    assert_eq!(a, run("b", "1", false));
    assert_eq!(a, run("c", "3", false));
    assert_eq!(a, run("d", "2", true));
}

#[test]
fn seed_override_changes_results_and_hash() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", BALL, "");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(geohull(&["simulate", "-c", &cfg, "-o", a.to_str().unwrap()]).status.success());
    assert!(geohull(&["simulate", "-c", &cfg, "-o", b.to_str().unwrap(), "--seed", "7"]).status.success());
    let ma: serde_json::Value = read_json(&a.join("manifest.json")).unwrap();
    let mb: serde_json::Value = read_json(&b.join("manifest.json")).unwrap();
    assert_ne!(ma["config_hash"], mb["config_hash"]);
    assert_eq!(mb["config"]["master_seed"], 7);
    assert_ne!(
        std::fs::read(a.join("summaries.csv")).unwrap(),
        std::fs::read(b.join("summaries.csv")).unwrap()
    );
}

#[test]
fn invalid_configs_exit_1_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", BALL, "").replace("c.json", "bad.json");
    std::fs::write(&cfg, std::fs::read_to_string(dir.path().join("c.json")).unwrap().replace("\"replications\": 4", "\"replications\": 1")).unwrap();
    let o = geohull(&["simulate", "-c", &cfg, "-o", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("replications"), "{}", stderr(&o));

    let cfg = write_config(dir.path(), "u.json", BALL, ",\n  \"colour\": 3");
    let o = geohull(&["simulate", "-c", &cfg, "-o", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("colour"));

    let o = geohull(&["simulate", "-o", "x"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn failing_replication_exits_2_with_its_stream() {
    // a sliver triangle accepts far fewer than 1e-4 of the bounding-cap proposals
    let dir = tempfile::tempdir().unwrap();
    let sliver = r#"{"shape": "chart_polytope", "geometry": "spherical", "vertices": [[-0.5, 0.0], [0.5, 0.0], [0.0, 0.00001]]}"#;
    let cfg = write_config(dir.path(), "c.json", sliver, "");
    let o = geohull(&["simulate", "-c", &cfg, "-o", dir.path().join("o").to_str().unwrap(), "--threads", "1"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("stream 0x"), "{}", stderr(&o));
}

fn synthetic_summaries(dir: &Path, rows: &[(usize, f64)]) -> String {
    let mut text = String::from("model,statistic,n,mean,var,stderr_mean,stderr_var,replications,seed\n");
    for (n, v) in rows {
        text += &format!("inscribed,missed_volume,{n},{v},{},0,0,10,1\n", v * v);
    }
    let p = dir.join("summaries.csv");
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn scaling_recovers_exact_power_laws() {
    let dir = tempfile::tempdir().unwrap();
    let rows: Vec<(usize, f64)> = (4..9).map(|k| 1usize << k).map(|n| (n, 3.0 * (n as f64).powf(-0.75))).collect();
    let s = synthetic_summaries(dir.path(), &rows);
    let o = geohull(&["scaling", &s, "--stat", "missed_volume", "--target", "mean"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r: ScalingReport = read_json(&dir.path().join("scaling.json")).unwrap();
    assert!((r.slope + 0.75).abs() < 1e-12);
    assert_eq!(r.points.len(), 5);
    let o = geohull(&["scaling", &s, "--stat", "missed_volume", "--target", "variance", "--expected", "-1.5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = geohull(&["scaling", &s, "--stat", "missed_volume", "--expected", "-0.5", "--slack", "0.1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn scaling_with_two_rows_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let s = synthetic_summaries(dir.path(), &[(8, 0.1), (16, 0.05)]);
    let o = geohull(&["scaling", &s, "--stat", "missed_volume", "--target", "mean"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn end_to_end_variance_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"schema_version": 1, "body": {BALL}, "model": "inscribed", "n_grid": [128, 256, 512, 1024, 2048],
               "replications": 400, "master_seed": 3, "statistics": ["missed_volume"]}}"#
        ),
    )
    .unwrap();
    let out = dir.path().join("out");
    assert!(geohull(&["simulate", "-c", cfg.to_str().unwrap(), "-o", out.to_str().unwrap()]).status.success());
    let s = out.join("summaries.csv");
    let o = geohull(&[
        "scaling",
        s.to_str().unwrap(),
        "--stat",
        "missed_volume",
        "--target",
        "variance",
        "--expected",
        "-1.6667",
        "--slack",
        "0.2",
    ]);
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
}

#[test]
fn floating_reports_empty_body_at_full_volume() {
    let dir = tempfile::tempdir().unwrap();
    let o = geohull(&["floating", "--ball", "0.8", "--t-fraction", "1", "-o", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("empty"));
    let (_, rows) = read_points(&dir.path().join("floating.csv")).unwrap();
    assert!(rows.is_empty());
}

#[test]
fn floating_polygon_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = geohull(&[
        "floating", "--geometry", "hyperbolic", "--ball", "0.8", "--t-fraction", "0.01", "--directions", "256", "-o",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = read_points(&dir.path().join("floating.csv")).unwrap();
    assert_eq!(header, ["x", "y"]);
    assert!(rows.len() > 100);
    let report: serde_json::Value = read_json(&dir.path().join("floating.json")).unwrap();
    assert_eq!(report["vertices"].as_u64().unwrap() as usize, rows.len());
    assert!(report["wet_part_volume"].as_f64().unwrap() > 0.0);
}

#[test]
fn capcover_writes_verified_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = geohull(&["capcover", "--square", "0.5", "--t-fraction", "0.001", "-o", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value = read_json(&dir.path().join("capcover.json")).unwrap();
    assert_eq!(report["passed"], true);
    let (_, caps) = read_points(&dir.path().join("caps.csv")).unwrap();
    assert_eq!(caps.len() as u64, report["m"].as_u64().unwrap());
    let (_, inner) = read_points(&dir.path().join("inner_sets.csv")).unwrap();
    let sets = inner.iter().map(|r| r[0] as u64).max().unwrap() + 1;
    assert_eq!(sets, report["m_prime"].as_u64().unwrap());
}

#[test]
fn capcover_rejects_large_t() {
    let dir = tempfile::tempdir().unwrap();
    let o = geohull(&["capcover", "--ball", "0.8", "--t-fraction", "0.5", "-o", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn meanwidth_of_a_ball() {
    let o = geohull(&["meanwidth", "--ball", "0.5", "--samples", "1000000", "--seed", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let nums: Vec<f64> = text
        .trim()
        .trim_start_matches("U1 = ")
        .split(" ± ")
        .map(|s| s.parse().unwrap())
        .collect();
    let exact = 0.5f64.sin() / 2.0;
    assert!((nums[0] - exact).abs() < 3.0 * nums[1], "{text}");
    let o = geohull(&["meanwidth", "--geometry", "hyperbolic", "--ball", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn polar_of_a_ball_and_a_square() {
    let dir = tempfile::tempdir().unwrap();
    let o = geohull(&["polar", "--ball", "0.3", "-o", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let p: serde_json::Value = read_json(&dir.path().join("polar.json")).unwrap();
    assert!((p["radius"].as_f64().unwrap() - (std::f64::consts::FRAC_PI_2 - 0.3)).abs() < 1e-15);
    let c: Vec<f64> = serde_json::from_value(p["center"].clone()).unwrap();
    assert!((c[2] + 1.0).abs() < 1e-15);

    let o = geohull(&["polar", "--square", "0.5", "-o", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, verts) = read_points(&dir.path().join("polar.csv")).unwrap();
    assert_eq!(header, ["x1", "x2", "x3"]);
    assert_eq!(verts.len(), 4);
    for v in verts {
        assert!((v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn body_can_come_from_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", BALL, "");
    let o = geohull(&["meanwidth", "--body", &cfg, "--samples", "1000"]);
    assert!(o.status.success(), "{}", stderr(&o));
}
