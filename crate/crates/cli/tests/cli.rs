use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
}

fn shiproute(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiproute"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn solve(name: &str, out: &Path, extra: &[&str]) -> Output {
    let sc = scenario(name);
    let mut args = vec!["solve", "--scenario", path(&sc), "--out", path(out)];
    args.extend_from_slice(extra);
    shiproute(&args)
}

#[test]
fn straight_scenario_solves() {
    let dir = tempfile::tempdir().unwrap();
    let out = solve("straight.json", dir.path(), &[]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    assert!(text(&out.stdout).contains("feasible, cost"));
    for file in ["route.geojson", "result.json", "convergence.csv", "summary.json"] {
        assert!(dir.path().join(file).is_file(), "{file}");
    }
}

#[test]
fn alpha_out_of_bounds_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let original = std::fs::read_to_string(scenario("straight.json")).unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, original.replace("\"alpha\": 1.0", "\"alpha\": 1.5")).unwrap();
    let out = shiproute(&[
        "solve",
        "--scenario",
        path(&bad),
        "--out",
        path(&dir.path().join("out")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = text(&out.stderr);
    assert!(err.contains("alpha = 1.5 must lie in [0, 1]"), "{err}");
    assert!(err.contains("line"), "{err}");
}

#[test]
fn bypass_refuses_past_the_cap() {
    let dir = tempfile::tempdir().unwrap();
    let sc = scenario("aegean20.json");
    let out = shiproute(&["baseline", "bypass", "--scenario", path(&sc), "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("14"), "{}", text(&out.stderr));
}

#[test]
fn brute_force_on_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let sc = scenario("oracle.json");
    let out = shiproute(&["baseline", "brute", "--scenario", path(&sc), "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    assert!(text(&out.stdout).contains("cost 16.821952"), "{}", text(&out.stdout));
}

#[test]
fn shortest_path_baselines() {
    let dir = tempfile::tempdir().unwrap();
    let sc = scenario("straight.json");
    let out = shiproute(&[
        "baseline",
        "shortest",
        "--scenario",
        path(&sc),
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(text(&out.stdout).contains("cost 100.000000"), "{}", text(&out.stdout));

    let original = std::fs::read_to_string(scenario("straight.json")).unwrap();
    let walled = dir.path().join("walled.json");
    std::fs::write(
        &walled,
        original.replace("\"alpha\"", "\"obstacles\": \"wall.geojson\",\n  \"alpha\""),
    )
    .unwrap();
    let rect = |x0: i32, y0: i32, x1: i32, y1: i32| {
        format!(
            r#"{{"type": "Feature", "properties": {{}}, "geometry": {{"type": "Polygon",
                "coordinates": [[[{x0}, {y0}], [{x1}, {y0}], [{x1}, {y1}], [{x0}, {y1}], [{x0}, {y0}]]]}}}}"#
        )
    };
    let walls = [
        rect(-5, -5, -4, 5),
        rect(4, -5, 5, 5),
        rect(-5, 4, 5, 5),
        rect(-5, -5, 5, -4),
    ]
    .join(",");
    std::fs::write(
        dir.path().join("wall.geojson"),
        format!(r#"{{"type": "FeatureCollection", "features": [{walls}]}}"#),
    )
    .unwrap();
    let out = shiproute(&[
        "baseline",
        "shortest",
        "--scenario",
        path(&walled),
        "--out",
        path(&dir.path().join("w")),
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", text(&out.stderr));
}

#[test]
fn seeded_routes_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<u8>> = [("a", "1"), ("b", "1"), ("c", "4")]
        .iter()
        .map(|(sub, workers)| {
            let out_dir = dir.path().join(sub);
            let out = solve(
                "aegean20.json",
                &out_dir,
                &["--seed", "11", "--deterministic", "--workers", workers],
            );
            assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
            std::fs::read(out_dir.join("route.geojson")).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
}

#[test]
fn validate_reports_counts() {
    let sc = scenario("aegean20.json");
    let out = shiproute(&["validate", "--scenario", path(&sc)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(
        text(&out.stdout).contains("aegean20: ok (20 obstacles"),
        "{}",
        text(&out.stdout)
    );
}

#[test]
fn bench_with_one_worker_has_unit_speedup() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scaling.csv");
    let sc = scenario("aegean20_bench.json");
    let out = shiproute(&[
        "bench",
        "--scenario",
        path(&sc),
        "--workers",
        "1",
        "--repeats",
        "1",
        "--out",
        path(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let body = std::fs::read_to_string(&csv).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("workers,wall_ms,speedup"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "1");
    assert_eq!(row[2].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn result_json_parses() {
    let dir = tempfile::tempdir().unwrap();
    let out = solve("single_square.json", dir.path(), &[]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let result: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("result.json")).unwrap()).unwrap();
    assert_eq!(result["feasible"], true);
    assert_eq!(result["meta"]["solver"], "ga-eda");
}
