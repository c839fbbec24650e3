use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn syzygy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syzygy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const R1: &str = "# three variables\nvars x,y,z;\nrels x^3, y^3, z^3, x*y, x*z^2;\n";

#[test]
fn missing_file_is_an_input_error() {
    let o = syzygy(&["report", "/definitely/not/here.ring", "--golod"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not/here.ring"));
}

#[test]
fn malformed_ring_and_flags_are_input_errors() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.ring", "vars x; rels x^;");
    assert_eq!(syzygy(&["report", s(&bad)]).status.code(), Some(1));
    let ok = write(&dir, "ok.ring", "vars x; rels x^2;");
    assert_eq!(syzygy(&["report", s(&ok), "--field", "F 100"]).status.code(), Some(1));
    assert_eq!(syzygy(&["report", s(&ok), "--expect", "nonsense=1"]).status.code(), Some(1));
    assert_eq!(syzygy(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(syzygy(&["--help"]).status.code(), Some(0));
}

#[test]
fn report_detects_non_golod_ring() {
    let dir = TempDir::new().unwrap();
    let r1 = write(&dir, "r1.ring", R1);
    let o = syzygy(&["report", s(&r1), "--betti", "6", "--golod", "--precision", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("NotGolod"), "{text}");
    assert!(text.contains("1     3     8    21    55   144   377"), "{text}");
}

#[test]
fn report_hypersurface_is_golod_to_precision() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "hyper.ring", "vars x; rels x^5;");
    let o = syzygy(&["report", s(&h), "--golod", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["golod"]["verdict"], "GolodToPrecision");
    assert_eq!(v["precision"], 7);
}

#[test]
fn expectation_mismatch_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let ci = write(&dir, "ci.ring", "vars x,y; rels x^2, y^2;");
    let base = ["report", s(&ci), "--precision", "5", "--field", "F 101"];
    let run = |extra: &[&str]| {
        let mut args = base.to_vec();
        args.extend_from_slice(extra);
        syzygy(&args).status.code()
    };
    assert_eq!(run(&["--expect", "golod=false", "--expect", "gorenstein=true", "--expect", "dim=4"]), Some(0));
    assert_eq!(run(&["--expect", "golod=true"]), Some(2));
    assert_eq!(run(&["--expect", "betti=1,2,3,4,5"]), Some(0));
    assert_eq!(run(&["--expect", "betti=1,2,4"]), Some(2));
}

#[test]
fn report_json_round_trips() {
    let dir = TempDir::new().unwrap();
    let sq = write(&dir, "sq.ring", "field F 101; vars x,y; rels x^2, x*y, y^2;");
    let o = syzygy(&["report", s(&sq), "--all", "--precision", "4", "--json", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
    assert_eq!(v["seed"], 9);
    assert_eq!(v["burch"], true);
    for key in ["betti", "koszul", "golod", "star", "exceptional", "tachikawa", "decomposition"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn reproduce_paper_passes() {
    let o = syzygy(&["reproduce-paper"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    for id in ["r1", "r2", "r3", "r4"] {
        assert!(text.lines().any(|l| l.starts_with(id) && l.contains("PASS")), "{id}");
    }
    assert!(!text.contains("FAIL"));
    let o = syzygy(&["reproduce-paper", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 10);
}

const SCAN: &str = "e = 2\nmax_degree = 3\nmax_socle_degree = 3\nsamples = 100\nseed = 17\nprecision = 4\n";

fn scan_lines(config: &Path, extra: &[&str]) -> Vec<String> {
    let mut args = vec!["scan", s(config)];
    args.extend_from_slice(extra);
    let o = syzygy(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    stdout(&o).lines().map(String::from).collect()
}

#[test]
fn scan_emits_one_record_per_sample_deterministically() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "scan.toml", SCAN);
    let a = scan_lines(&cfg, &["--ordered"]);
    assert_eq!(a.len(), 100);
    let b = scan_lines(&cfg, &["--ordered", "--jobs", "3"]);
    assert_eq!(a.join("\n"), b.join("\n"));
    let mut c = scan_lines(&cfg, &["--jobs", "2"]);
    c.sort_by_key(|l| serde_json::from_str::<Value>(l).unwrap()["index"].as_u64());
    assert_eq!(a, c);
    for (i, line) in a.iter().enumerate() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["index"], i);
        assert_eq!(v["seed"], 17);
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(again, v);
        assert_eq!(v["verdicts"].as_object().unwrap().len(), 7);
    }
    let other = scan_lines(&cfg, &["--ordered", "--seed", "18"]);
    assert_ne!(a, other);
}

#[test]
fn scan_rejects_bad_configs_and_filters() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.toml", "e = 0\nmax_degree = 3\nsamples = 1\n");
    assert_eq!(syzygy(&["scan", s(&bad)]).status.code(), Some(1));
    let unknown = write(&dir, "unknown.toml", "e = 2\nmax_degree = 3\nsamples = 1\ncolour = 1\n");
    assert_eq!(syzygy(&["scan", s(&unknown)]).status.code(), Some(1));
    let cfg = write(&dir, "ok.toml", "e = 2\nmax_degree = 3\nsamples = 1\n");
    assert_eq!(syzygy(&["scan", s(&cfg), "--where", "star &&"]).status.code(), Some(1));
    assert_eq!(syzygy(&["scan", s(&cfg), "--where", "shiny"]).status.code(), Some(1));
}

/// Every record kept by the filter is re-checked with `report`.
#[test]
fn scan_filter_subset_is_reverified() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "scan.toml",
        "e = 3\nmax_degree = 3\ngenerators = [1, 4]\nsamples = 12\nseed = 3\nmax_dim = 16\nprecision = 5\nchecks = [\"golod\"]\n",
    );
    let all = scan_lines(&cfg, &["--ordered", "--star-bound", "3"]);
    assert_eq!(all.len(), 12);
    let kept = scan_lines(&cfg, &["--ordered", "--star-bound", "3", "--where", "star && !golod && !fibre"]);
    assert!(!kept.is_empty() && kept.len() < all.len());
    for line in &kept {
        let v: Value = serde_json::from_str(line).unwrap();
        let ring = write(&dir, "hit.ring", v["ring"].as_str().unwrap());
        let seed = (3 + v["index"].as_u64().unwrap()).to_string();
        let o = syzygy(&[
            "report", s(&ring), "--precision", "5", "--star-bound", "3", "--seed", &seed,
            "--expect", "star=true", "--expect", "golod=false", "--expect", "fibre=false",
        ]);
        assert_eq!(o.status.code(), Some(0), "{line}\n{}", stdout(&o));
    }
}

#[test]
fn summand_and_decompose() {
    let dir = TempDir::new().unwrap();
    let sq = write(&dir, "sq.ring", "field F 101; vars x,y; rels x^2, x*y, y^2;");
    let o = syzygy(&["summand", s(&sq), "--syzygy", "1", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["is_summand"], true);
    assert_eq!(v["verified"], true);
    assert!(v["f"]["entries"].is_array());
    let o = syzygy(&["decompose", s(&sq), "--syzygy", "2", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summands"][0]["multiplicity"], 4);
    assert_eq!(v["verified"], true);
    let ci = write(&dir, "ci.ring", "vars x,y; rels x^2, y^2;");
    let o = syzygy(&["decompose", s(&ci), "--module", "k"]);
    assert_eq!(o.status.code(), Some(1), "decomposition needs a prime field");
    let o = syzygy(&["decompose", s(&ci), "--module", "m", "--field", "F 7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("proven"));
}

#[test]
fn fibre_product_writes_a_ring() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.ring", "field F 101; vars x,y; rels x^2, y^2;");
    let b = write(&dir, "b.ring", "field F 101; vars x; rels x^3;");
    let out = dir.path().join("out.ring");
    let o = syzygy(&["fibre-product", s(&a), s(&b), "-o", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("factor checks passed"));
    let o = syzygy(&["report", s(&out), "--precision", "4", "--expect", "dim=6", "--expect", "fibre=true", "--expect", "e=3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let q = write(&dir, "q.ring", "vars x; rels x^2;");
    assert_eq!(syzygy(&["fibre-product", s(&a), s(&q)]).status.code(), Some(1));
}
