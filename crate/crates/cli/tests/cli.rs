use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use grpf_cli::report::{read_results_json, ResultsDocument};

const DEMO: &str = "expr:(z-1)*(z-i)^2*(z+1)^3/(z+i)";

fn grpf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grpf")).args(args).env_remove("GRPF_THREADS").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn demo_run(dir: &Path, tag: &str, extra: &[&str]) -> (Output, PathBuf, PathBuf, PathBuf) {
    let (json, csv, svg) = (path(dir, &format!("{tag}.json")), path(dir, &format!("{tag}.csv")), path(dir, &format!("{tag}.svg")));
    let mut args = vec![
        "run",
        "--function",
        DEMO,
        "--domain",
        "rect:-2,2,-2,2",
        "--dr",
        "0.3",
        "--tol",
        "1e-9",
        "--no-timing",
        "-q",
        "--out",
        json.to_str().unwrap(),
        "--nodes-csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    (grpf(&args), json, csv, svg)
}

#[test]
fn demo_run_writes_consistent_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let (o, json, csv, _) = demo_run(dir.path(), "a", &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = read_results_json(&json).unwrap();
    assert_eq!(doc.schema, "grpf-results/1");
    let mut qs: Vec<i32> = doc.results.iter().map(|r| r.q).collect();
    qs.sort();
    assert_eq!(qs, vec![-1, 1, 2, 3]);
    assert_eq!(doc.region_sum, 5);
    assert_eq!(doc.global_winding, Some(5));
    assert!(doc.timings.is_none());

    let text = std::fs::read_to_string(&json).unwrap();
    assert!(!text.contains("NaN") && !text.contains("Infinity"));
    let again: ResultsDocument = serde_json::from_str(&doc.to_json().unwrap()).unwrap();
    assert_eq!(again, doc);
    assert_eq!(doc.to_json().unwrap(), text);

    let rows = std::fs::read_to_string(&csv).unwrap();
    let mut lines = rows.lines();
    assert_eq!(lines.next(), Some("re,im,f_re,f_im,quadrant"));
    assert_eq!(lines.count(), doc.mesh.evaluations);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (_, j1, c1, s1) = demo_run(dir.path(), "a", &["--threads", "1"]);
    let (_, j2, c2, s2) = demo_run(dir.path(), "b", &["--threads", "3"]);
    for (a, b) in [(j1, j2), (c1, c2), (s1, s2)] {
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{}", a.display());
    }
}

#[test]
fn thread_count_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "r.json");
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_grpf"))
            .args(["run", "--function", "demo", "--domain", "rect:-2,2,-2,2", "--dr", "0.3", "--tol", "1e-6"])
            .args(["--no-timing", "-q", "--out", out.to_str().unwrap()])
            .env("GRPF_THREADS", threads)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("2")), 0);
    let a = std::fs::read(&out).unwrap();
    assert_eq!(code(&run("1")), 0);
    assert_eq!(std::fs::read(&out).unwrap(), a);
    assert_eq!(code(&run("0")), 2);
    assert_eq!(code(&run("many")), 2);
}

#[test]
fn preliminary_portrait_shows_four_loops() {
    let dir = tempfile::tempdir().unwrap();
    let (o, json, _, svg) = demo_run(dir.path(), "p", &["--max-iters", "0"]);
    assert_eq!(code(&o), 0);
    let svg = std::fs::read_to_string(svg).unwrap();
    let regions = svg.split(r#"<g id="regions""#).nth(1).unwrap();
    let regions = &regions[..regions.find("</g>").unwrap()];
    assert_eq!(regions.matches("<path ").count(), 4);
    let edges = svg.split(r#"<g id="candidate-edges""#).nth(1).unwrap();
    assert!(edges[..edges.find("</g>").unwrap()].contains("<line "));
    for colour in ["red", "yellow", "green", "blue"] {
        assert!(svg.contains(&format!(r#"fill="{colour}""#)), "{colour}");
    }
    let doc = read_results_json(&json).unwrap();
    assert_eq!(doc.mesh.iterations, 0);
    let mut qs: Vec<i32> = doc.results.iter().map(|r| r.q).collect();
    qs.sort();
    assert_eq!(qs, vec![-1, 1, 2, 3]);
}

#[test]
fn empty_result_document() {
    let dir = tempfile::tempdir().unwrap();
    let json = path(dir.path(), "e.json");
    let svg = path(dir.path(), "e.svg");
    let o = grpf(&[
        "run", "--function", "expr:z", "--domain", "rect:2,3,2,3", "--dr", "0.3", "--tol", "1e-6", "-q",
        "--out", json.to_str().unwrap(), "--svg", svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let doc = read_results_json(&json).unwrap();
    assert!(doc.results.is_empty());
    assert_eq!(doc.region_sum, 0);
    assert_eq!(doc.global_winding, Some(0));
    let svg = std::fs::read_to_string(svg).unwrap();
    let edges = svg.split(r#"<g id="candidate-edges""#).nth(1).unwrap();
    assert!(!edges[..edges.find("</g>").unwrap()].contains("<line "));
}

#[test]
fn results_go_to_stdout_without_out() {
    let o = grpf(&["run", "--function", "expr:z-0.25i", "--domain", "disk:0,0,1", "--dr", "0.3", "--tol", "1e-6", "-q"]);
    assert_eq!(code(&o), 0);
    let doc: ResultsDocument = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc.results.len(), 1);
    assert!((doc.results[0].location.im.0 - 0.25).abs() < 1e-6);
    assert!(doc.timings.is_some());
}

#[test]
fn configuration_errors_exit_two_with_usage() {
    let base = ["run", "--function", "demo", "--domain", "rect:-2,2,-2,2", "--dr", "0.3", "--tol", "1e-6", "-q"];
    let with = |i: usize, v: &str| {
        let mut a = base.to_vec();
        a[i] = v;
        grpf(&a)
    };
    for o in [
        with(2, "nope"),
        with(2, "expr:z +* 2"),
        with(4, "rect:2,1,0,1"),
        with(4, "circle:0,0,1"),
        with(4, "poly:0,0;1,0"),
        with(6, "-0.3"),
        with(6, "0"),
        with(8, "nan"),
        grpf(&["run", "--function", "demo"]),
        grpf(&["run", "--bogus"]),
        grpf(&["frobnicate"]),
    ] {
        assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stderr).to_lowercase().contains("usage"));
    }
    let e = with(2, "expr:z +* 2");
    assert!(String::from_utf8_lossy(&e.stderr).contains("byte 3"));
}

#[test]
fn runtime_diagnostics_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let json = path(dir.path(), "o.json");
    // a root on the domain edge leaves only an open region
    let o = grpf(&[
        "run", "--function", "expr:z-(1+0.05i)", "--domain", "rect:-1,1,-1,1", "--dr", "0.3", "--tol", "1e-6", "-q",
        "--out", json.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    let doc = read_results_json(&json).unwrap();
    assert!(doc.results.is_empty());
    assert!(!doc.open_regions.is_empty());
    assert!(doc.warnings.iter().any(|w| w.contains("open")));

    let o = grpf(&[
        "run", "--function", "demo", "--domain", "rect:-2,2,-2,2", "--dr", "0.3", "--tol", "1e-6", "-q",
        "--out", "/nonexistent-dir/r.json",
    ]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent-dir/r.json"));
}

#[test]
fn extend_policy_recovers_edge_root() {
    let o = grpf(&[
        "run", "--function", "expr:z-(1+0.05i)", "--domain", "rect:-1,1,-1,1", "--dr", "0.3", "--tol", "1e-6", "-q",
        "--on-open-region", "extend",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: ResultsDocument = serde_json::from_slice(&o.stdout).unwrap();
    assert!(doc.warnings.iter().any(|w| w.contains("grown")));
}

#[test]
fn winding_check_passes_on_closed_run() {
    let o = grpf(&[
        "run", "--function", "demo", "--domain", "rect:-2,2,-2,2", "--dr", "0.3", "--tol", "1e-6", "-q",
        "--global-winding-check",
    ]);
    assert_eq!(code(&o), 0);
}

#[test]
fn waveguide_reports_physical_locations() {
    let o = grpf(&["run", "--function", "cwg", "--domain", "disk:0,0,1", "--dr", "0.15", "--tol", "1e-6", "-q"]);
    assert_eq!(code(&o), 0);
    let doc: ResultsDocument = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc.results.len(), 14);
    for r in &doc.results {
        let p = r.physical_location.unwrap();
        assert_eq!(p.re.0, 10.0 * r.location.re.0);
        assert_eq!(p.im.0, 10.0 * r.location.im.0);
    }
}

#[test]
fn functions_are_listed() {
    let o = grpf(&["functions"]);
    assert_eq!(code(&o), 0);
    let s = String::from_utf8(o.stdout).unwrap();
    for name in ["demo", "cwg", "mlwg", "gtl"] {
        assert!(s.lines().any(|l| l.starts_with(name)), "{name}");
    }
}
