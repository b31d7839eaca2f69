use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use radius_cluster::cli::formats::{frames_to_csv, parse_points_csv};
use radius_cluster::trajectory::synthetic_motorcade;
use radius_cluster::{build_adjacency, connected_components_oracle, ClusteringConfig};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radius-cluster"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn motorcade_fixture_is_current() {
    let expected = frames_to_csv(&synthetic_motorcade());
    let path = fixture("motorcade.csv");
    if std::env::var_os("UPDATE_FIXTURES").is_some() {
        fs::write(&path, &expected).unwrap();
    }
    assert_eq!(fs::read_to_string(&path).unwrap(), expected);
}

#[test]
fn cluster_chain_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("labels.json");
    let svg = dir.path().join("plot.svg");
    run_ok(&[
        "cluster",
        "--input",
        s(&fixture("chain7.csv")),
        "--radius",
        "1.5",
        "--out",
        s(&out),
        "--svg",
        s(&svg),
    ]);
    let v = json(&out);
    assert_eq!(v["radius"], 1.5);
    assert_eq!(v["n"], 7);
    assert_eq!(v["labels"], serde_json::json!([1, 1, 1, 1, 1, 1, 1]));
    assert_eq!(
        v["clusters"],
        serde_json::json!([{"label": 1, "size": 7, "rank": 1, "color": "red"}])
    );
    let plot = fs::read_to_string(&svg).unwrap();
    assert_eq!(plot.matches("<circle").count(), 7);
}

#[test]
fn cluster_json_key_order() {
    let out = run_ok(&[
        "cluster",
        "--input",
        s(&fixture("single.csv")),
        "--radius",
        "2",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let keys: Vec<usize> = ["\"radius\"", "\"n\"", "\"labels\"", "\"clusters\""]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]), "{text}");
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["clusters"][0]["size"], 1);
    assert_eq!(v["labels"], serde_json::json!([1]));
}

#[test]
fn cluster_dense_core_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("core.csv");
    run_ok(&[
        "generate",
        "--preset",
        "dense-core",
        "--seed",
        "3",
        "--out",
        s(&csv),
    ]);
    let out = dir.path().join("labels.json");
    run_ok(&[
        "cluster",
        "--input",
        s(&csv),
        "--radius",
        "1",
        "--out",
        s(&out),
    ]);
    let v = json(&out);

    let ps = parse_points_csv(fs::read(&csv).unwrap().as_slice(), "core.csv").unwrap();
    let oracle =
        connected_components_oracle(&build_adjacency(&ps, &ClusteringConfig::new(1.0).unwrap()))
            .unwrap();
    let labels: Vec<u64> = v["labels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l.as_u64().unwrap())
        .collect();
    assert_eq!(
        labels,
        oracle
            .as_slice()
            .iter()
            .map(|&l| l as u64)
            .collect::<Vec<_>>()
    );

    let rank1 = v["clusters"][0]["label"].as_u64().unwrap();
    assert_eq!(v["clusters"][0]["color"], "red");
    assert!(labels[..40].iter().all(|&l| l == rank1));
}

#[test]
fn cluster_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "id,x,y\n1,0,0\n2,oops,1\n").unwrap();
    let out = run(&["cluster", "--input", s(&bad), "--radius", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(
        err.starts_with("error: ") && err.contains("line 3"),
        "{err}"
    );

    fs::write(&bad, "id,x,y\n1,0,0\n1,1,1\n").unwrap();
    let out = run(&["cluster", "--input", s(&bad), "--radius", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate id 1"));

    let out = run(&[
        "cluster",
        "--input",
        s(&fixture("chain7.csv")),
        "--radius",
        "-1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["cluster", "--input", s(&fixture("chain7.csv"))]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 1);
}

#[test]
fn generate_ring_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("ring.json");
    fs::write(
        &spec,
        r#"{"radius": 2.0, "kind": "ring", "n": 30, "ring_radius": 4.0}"#,
    )
    .unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    run_ok(&["generate", "--spec", s(&spec), "--out", s(&a)]);
    run_ok(&["generate", "--spec", s(&spec), "--out", s(&b)]);
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().count(), 31);
    let ps = parse_points_csv(text.as_bytes(), "a").unwrap();
    for p in ps.points() {
        let r = (p.coords()[0].powi(2) + p.coords()[1].powi(2)).sqrt();
        assert!((r - 8.0).abs() < 1e-9);
    }
}

#[test]
fn generate_seeds_differ() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    run_ok(&[
        "generate",
        "--preset",
        "low-density",
        "--seed",
        "1",
        "--out",
        s(&a),
    ]);
    run_ok(&[
        "generate",
        "--preset",
        "low-density",
        "--seed",
        "2",
        "--out",
        s(&b),
    ]);
    let (ta, tb) = (
        fs::read_to_string(&a).unwrap(),
        fs::read_to_string(&b).unwrap(),
    );
    assert_ne!(ta, tb);
    assert_eq!(ta.lines().count(), tb.lines().count());
}

#[test]
fn generate_errors() {
    assert_eq!(
        run(&["generate", "--preset", "nope"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["generate"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.json");
    fs::write(
        &spec,
        r#"{"radius": 1.0, "kind": "ring", "n": 24, "ring_radius": 10.0}"#,
    )
    .unwrap();
    let out = run(&["generate", "--spec", s(&spec)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid scenario"));
}

#[test]
fn trajectory_motorcade() {
    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("frames.json");
    let svgs = dir.path().join("svg");
    run_ok(&[
        "trajectory",
        "--input",
        s(&fixture("motorcade.csv")),
        "--radius",
        "50",
        "--out",
        s(&frames),
        "--svg",
        s(&svgs),
    ]);
    let events = json(&dir.path().join("events.json"));
    assert_eq!(
        events,
        serde_json::json!([
            {"t": 35.0, "kind": "split", "parents": [1], "children": [1, 2], "member_ids": [1, 2, 3, 4, 5, 6, 7]},
            {"t": 139.0, "kind": "merge", "parents": [1, 2], "children": [1], "member_ids": [1, 2, 3, 4, 5, 6, 7]}
        ])
    );
    let report = json(&frames);
    let per_frame = report["frames"].as_array().unwrap();
    assert_eq!(per_frame.len(), 181);
    assert_eq!(per_frame[35]["clusters"].as_array().unwrap().len(), 2);
    assert_eq!(per_frame[35]["clusters"][1]["size"], 2);
    assert_eq!(fs::read_dir(&svgs).unwrap().count(), 181);
}

#[test]
fn trajectory_single_frame_and_static_groups() {
    let dir = tempfile::tempdir().unwrap();
    let single = dir.path().join("single.csv");
    fs::write(&single, "t,id,x,y\n0,1,0,0\n0,2,0.5,0\n").unwrap();
    let out = dir.path().join("f.json");
    let events = dir.path().join("e.json");
    run_ok(&[
        "trajectory",
        "--input",
        s(&single),
        "--radius",
        "1",
        "--out",
        s(&out),
        "--events",
        s(&events),
    ]);
    assert_eq!(json(&events), serde_json::json!([]));

    let mut text = String::from("t,id,x,y\n");
    for t in 0..10 {
        text.push_str(&format!(
            "{t},1,0,0\n{t},2,0.5,0\n{t},3,20,0\n{t},4,20.5,0\n"
        ));
    }
    let stat = dir.path().join("static.csv");
    fs::write(&stat, text).unwrap();
    run_ok(&[
        "trajectory",
        "--input",
        s(&stat),
        "--radius",
        "1",
        "--out",
        s(&out),
        "--events",
        s(&events),
    ]);
    assert_eq!(json(&events), serde_json::json!([]));
    for f in json(&out)["frames"].as_array().unwrap() {
        assert_eq!(f["clusters"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn trajectory_missing_id_names_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "t,id,x,y\n0,1,0,0\n0,2,1,0\n7.5,1,0,0\n").unwrap();
    let out = run(&[
        "trajectory",
        "--input",
        s(&bad),
        "--radius",
        "1",
        "--out",
        s(&dir.path().join("f.json")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("t=7.5"), "{err}");
}

#[test]
fn trajectory_equirect_projection() {
    // two cars ~11 m apart in latitude, a third ~1.1 km away
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("gps.csv");
    fs::write(
        &csv,
        "t,id,x,y\n0,1,46.0,21.0\n0,2,46.0,21.0001\n0,3,46.0,21.01\n",
    )
    .unwrap();
    let out = dir.path().join("f.json");
    run_ok(&[
        "trajectory",
        "--input",
        s(&csv),
        "--radius",
        "50",
        "--out",
        s(&out),
        "--project",
        "equirect",
    ]);
    let sizes: Vec<u64> = json(&out)["frames"][0]["clusters"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["size"].as_u64().unwrap())
        .collect();
    assert_eq!(sizes, vec![2, 1]);
}

#[test]
fn bench_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.json");
    run_ok(&["bench", "--bench-n", "2,64,1000", "--out", s(&out)]);
    let v = json(&out);
    let e = &v["entries"];
    assert_eq!(e[0]["k"], 1);
    assert_eq!(e[0]["m"], 0);
    assert_eq!(e[0]["naive_mults"], 0);
    assert_eq!(e[0]["fast_mults"], 0);
    assert_eq!(e[1]["fast_mults"], 5);
    assert_eq!(e[1]["naive_mults"], 31);
    assert_eq!(e[1]["naive_executed"], true);
    assert_eq!(e[1]["partitions_equal"], true);
    assert_eq!(e[2]["k"], 500);
    assert_eq!(e[2]["m"], 9);
    assert_eq!(e[2]["naive_mults"], 499);
    assert_eq!(e[2]["fast_mults"], 9);
    assert_eq!(e[2]["naive_executed"], false);
    assert!(e[2].get("wall_seconds").is_none());

    let timed = run_ok(&["bench", "--bench-n", "100", "--timing"]);
    let v: Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(v["entries"][0]["wall_seconds"].as_f64().unwrap() >= 0.0);

    assert_eq!(run(&["bench", "--bench-n", "0"]).status.code(), Some(1));
}
