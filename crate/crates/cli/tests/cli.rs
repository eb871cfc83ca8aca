use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hlskit::{
    gh_exact, validate_metric, FiniteMetricSpace, FoliatedComplex, GhEstimate, HlsSpace, MetricMode,
};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn hlskit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hlskit"))
        .args(args)
        .output()
        .expect("spawn hlskit")
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn hls_output_is_a_strict_metric_with_dot_sibling() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.json");
    let o = hlskit(&[
        "hls",
        "--input",
        arg(&fixture("bundle.json")),
        "--output",
        arg(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let h: HlsSpace = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(h.space.len(), 5);
    assert!(validate_metric(&h.space, MetricMode::Strict, h.space.default_tol()).is_valid());
    let dot = std::fs::read_to_string(dir.path().join("h.dot")).unwrap();
    assert!(dot.starts_with("graph space {"));

    let v = hlskit(&["validate", "--input", arg(&out)]);
    assert_eq!(v.status.code(), Some(2), "an HLS file is not a bare space");
    let o = hlskit(&["gh", "--input", arg(&out), "--input2", arg(&out)]);
    let est: GhEstimate = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(est.upper, 0.0);
}

#[test]
fn gh_matches_exact_search() {
    let (a, b) = (fixture("triangle.json"), fixture("path3.json"));
    let o = hlskit(&["gh", "--input", arg(&a), "--input2", arg(&b)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let est: GhEstimate = serde_json::from_str(&stdout(&o)).unwrap();
    let load = |p: &Path| -> FiniteMetricSpace {
        serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
    };
    let want = gh_exact(&load(&a), &load(&b)).unwrap();
    assert!((est.upper - want).abs() < 1e-12);
    assert!((est.lower - want).abs() < 1e-12);
    assert_eq!(want, 0.5);
}

#[test]
fn converge_csv_upper_column_is_non_increasing() {
    let o = hlskit(&[
        "converge",
        "--input",
        arg(&fixture("bundle_seq.json")),
        "--ns",
        "1,2,4,8",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,gh_lower,gh_upper,method,density_radius,condition_holds"
    );
    let uppers: Vec<f64> = lines
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(uppers.len(), 4);
    for w in uppers.windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "{uppers:?}");
    }
    assert!(stderr(&o).contains("Converged"));
}

#[test]
fn exit_codes() {
    let o = hlskit(&["validate", "--input", arg(&fixture("triangle.json"))]);
    assert_eq!(o.status.code(), Some(0));

    let o = hlskit(&["validate", "--input", arg(&fixture("broken.json"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("triangle"));

    let o = hlskit(&["validate", "--input", "does-not-exist.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("does-not-exist.json"));

    let o = hlskit(&[
        "validate",
        "--input",
        arg(&fixture("triangle.json")),
        "--tol",
        "-1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("tol"));

    let o = hlskit(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));

    let o = hlskit(&["sample", "--input", arg(&fixture("star.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--step"));

    let o = hlskit(&["measure-check", "--input", arg(&fixture("star.json"))]);
    assert_eq!(o.status.code(), Some(0));

    let o = hlskit(&["audit", "--input", arg(&fixture("bundle_seq.json"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    // too short a run for the condition to set in before the last n
    let o = hlskit(&[
        "audit",
        "--input",
        arg(&fixture("bundle_seq.json")),
        "--ns",
        "1,2,4,8",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("condition fails"));
    let o = hlskit(&[
        "audit",
        "--input",
        arg(&fixture("bundle_unit_seq.json")),
        "--ns",
        "1,2,4,8",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"seed": 3, "colour": "red"}"#).unwrap();
    let o = hlskit(&["gh", "--config", arg(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"));

    let input = fixture("triangle.json");
    std::fs::write(
        &cfg,
        format!(r#"{{"command": "validate", "input": {:?}}}"#, arg(&input)),
    )
    .unwrap();
    assert_eq!(
        hlskit(&["validate", "--config", arg(&cfg)]).status.code(),
        Some(0)
    );
    assert_eq!(
        hlskit(&["gh", "--config", arg(&cfg)]).status.code(),
        Some(2)
    );
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let input = fixture("bundle_seq.json");
    let args = [
        "converge",
        "--input",
        arg(&input),
        "--ns",
        "1,3,5",
        "--format",
        "json",
    ];
    let run = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_hlskit"))
            .args(args)
            .env("HLSKIT_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        o.stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("1"));
}

#[test]
fn generate_and_reload_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let o = hlskit(&[
        "generate",
        "--input",
        arg(&fixture("bundle_gen.json")),
        "--output",
        arg(&a),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let k: FoliatedComplex = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    std::fs::write(&b, serde_json::to_string_pretty(&k).unwrap() + "\n").unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(
        std::fs::read(&a).unwrap(),
        std::fs::read(fixture("bundle.json")).unwrap()
    );
}

#[test]
fn glue_and_collapse_spaces() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("map.json");
    std::fs::write(&map, r#"[["c", "p"]]"#).unwrap();
    let o = hlskit(&[
        "glue",
        "--input",
        arg(&fixture("triangle.json")),
        "--input2",
        arg(&fixture("path3.json")),
        "--map",
        arg(&map),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["space"]["points"].as_array().unwrap().len(), 5);

    let o = hlskit(&[
        "collapse",
        "--input",
        arg(&fixture("path3.json")),
        "--subset",
        "p,r",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["space"]["points"].as_array().unwrap().len(), 2);

    std::fs::write(&map, r#"[["c", "nowhere"]]"#).unwrap();
    let o = hlskit(&[
        "glue",
        "--input",
        arg(&fixture("triangle.json")),
        "--input2",
        arg(&fixture("path3.json")),
        "--map",
        arg(&map),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nowhere"), "{}", stderr(&o));
}
