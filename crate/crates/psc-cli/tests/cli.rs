use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const CONFIGS: &str = "psc-disks 1\ndim 2\n@id = [(0, 0) 1]\n@pair = [(-0.5, 0) 0.4; (0.5, 0) 0.4]\n";

const TRIPLE: &str =
    "psc-disks 1\ndim 2\n@triple = [(-0.55, 0) 0.3; (0.1, 0.45) 0.3; (0.2, -0.4) 0.25]\n";

fn psc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psc"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("d.cfg"), CONFIGS).unwrap();
    fs::write(dir.path().join("c.cfg"), TRIPLE).unwrap();
    dir
}

fn put(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn normalize_merges_a_unary_identity() {
    let dir = workspace();
    put(
        &dir,
        "t.tree",
        "(vertex @pair -[0.5]-> (vertex @id -[0.5]-> (vertex @pair -[1]-> leaf 1 -[1]-> leaf 2)) -[1]-> leaf 3)",
    );
    let o = psc(dir.path(), &["tree", "normalize", "--in", "t.tree", "--configs", "d.cfg"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("-[0.75]->"), "{text}");
    assert!(!text.contains("@id"));
    assert_eq!(text.matches("-[").count(), 4);
}

#[test]
fn normalized_output_reparses() {
    let dir = workspace();
    put(&dir, "t.tree", "(vertex @pair -[0.25]-> (vertex @id -[1]-> leaf 2) -[1]-> leaf 1)");
    let o = psc(
        dir.path(),
        &["tree", "normalize", "--in", "t.tree", "--configs", "d.cfg", "--configs-out", "n.cfg"],
    );
    assert_eq!(code(&o), 0);
    put(&dir, "n.tree", &stdout(&o));
    let again = psc(dir.path(), &["tree", "normalize", "--in", "n.tree", "--configs", "n.cfg"]);
    assert_eq!(code(&again), 0);
    assert_eq!(stdout(&again), stdout(&o));
}

#[test]
fn compose_grafts_at_each_input() {
    let dir = workspace();
    put(&dir, "t.tree", "(vertex @pair -[1]-> leaf 1 -[1]-> leaf 2)");
    put(&dir, "u.tree", "(vertex @pair -[1]-> leaf 2 -[1]-> leaf 1)");
    put(&dir, "v.tree", "leaf 1");
    let o = psc(
        dir.path(),
        &["tree", "compose", "--in", "t.tree", "--configs", "d.cfg", "--with", "u.tree", "--with", "v.tree"],
    );
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("leaf 3"));
    assert_eq!(text.matches("vertex").count(), 2);
}

#[test]
fn omega_report_lists_every_edge() {
    let dir = workspace();
    put(
        &dir,
        "t.tree",
        "(vertex @pair -[0.5]-> (vertex @pair -[1]-> leaf 1 -[1]-> leaf 2) -[1]-> leaf 3)",
    );
    let o = psc(
        dir.path(),
        &["tree", "omega", "--in", "t.tree", "--configs", "d.cfg", "--report", "o.json"],
    );
    assert_eq!(code(&o), 0);
    let r = json(&dir.path().join("o.json"));
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["total"], 1);
    assert_eq!(r["rows"][0]["data"]["weight"], 0.5);
    assert_eq!(r["rows"][0]["data"]["class"], "regular");
}

#[test]
fn torpedo_curvature_report() {
    let dir = workspace();
    let o = psc(
        dir.path(),
        &[
            "metric", "curvature", "--profile", "torpedo", "--delta", "1", "--dim", "3", "--step", "1e-3",
            "--report", "c.json",
        ],
    );
    assert_eq!(code(&o), 0);
    let r = json(&dir.path().join("c.json"));
    let data = &r["rows"][0]["data"];
    assert!(data["min_r"].as_f64().unwrap() > 0.0);
    assert!(data["argmin"].is_number());
    assert!(data["samples"].as_u64().unwrap() > 1000);
    assert_eq!(r["passed"], true);
}

#[test]
fn surface_torpedo_is_flat_somewhere_and_not_strictly_positive() {
    let dir = workspace();
    let o = psc(dir.path(), &["metric", "curvature", "--profile", "torpedo", "--dim", "2"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn profile_csv_has_a_header_and_rows() {
    let dir = workspace();
    let o = psc(
        dir.path(),
        &["metric", "profile", "--profile", "round", "--lambda", "2", "--step", "0.1", "--out", "p.csv"],
    );
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(dir.path().join("p.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().contains(','));
    assert!(lines.count() > 50);
}

#[test]
fn built_descriptor_feeds_curvature_and_apply() {
    let dir = workspace();
    for shape in ["round", "double-torpedo", "bulb"] {
        let o = psc(
            dir.path(),
            &["metric", "build", "--shape", shape, "--r", "1.2", "--out", "g.desc"],
        );
        assert_eq!(code(&o), 0, "{shape}");
    }
    let o = psc(dir.path(), &["metric", "build", "--shape", "round", "--out", "g.desc"]);
    assert_eq!(code(&o), 0);
    let c = psc(dir.path(), &["metric", "curvature", "--desc", "g.desc"]);
    assert_eq!(code(&c), 0, "{}", String::from_utf8_lossy(&c.stderr));
    put(&dir, "t.tree", "(vertex @pair -[0.5]-> (vertex @pair -[1]-> leaf 1 -[1]-> leaf 3) -[1]-> leaf 2)");
    let a = psc(
        dir.path(),
        &["action", "apply", "--tree", "t.tree", "--configs", "d.cfg", "--input", "g.desc", "--input", "g.desc", "--input", "g.desc"],
    );
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    let arity = psc(
        dir.path(),
        &["action", "apply", "--tree", "t.tree", "--configs", "d.cfg", "--input", "g.desc"],
    );
    assert_eq!(code(&arity), 1);
}

#[test]
fn render_draws_three_labeled_circles() {
    let dir = workspace();
    let o = psc(dir.path(), &["disks", "render", "--in", "c.cfg", "--out", "c.svg"]);
    assert_eq!(code(&o), 0);
    let svg = fs::read_to_string(dir.path().join("c.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains(r#"version="1.1""#));
    // the unit disk plus one circle per little disk
    assert_eq!(svg.matches("<circle").count(), 4);
    for label in [">1</text>", ">2</text>", ">3</text>"] {
        assert!(svg.contains(label));
    }
}

#[test]
fn render_needs_a_name_for_several_configs() {
    let dir = workspace();
    let o = psc(dir.path(), &["disks", "render", "--in", "d.cfg", "--out", "x.svg"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn validate_flags_overlaps() {
    let dir = workspace();
    put(&dir, "bad.cfg", "psc-disks 1\ndim 2\n@ok = [(0, 0) 0.5]\n@bad = [(0, 0) 0.5; (0.2, 0) 0.5]\n");
    let o = psc(dir.path(), &["disks", "validate", "--in", "bad.cfg", "--report", "v.json"]);
    assert_eq!(code(&o), 1);
    let r = json(&dir.path().join("v.json"));
    assert_eq!(r["failures"], 1);
    let ok = psc(dir.path(), &["disks", "validate", "--in", "d.cfg"]);
    assert_eq!(code(&ok), 0);
}

#[test]
fn empty_table_gives_an_empty_report() {
    let dir = workspace();
    put(&dir, "empty.cfg", "psc-disks 1\ndim 2\n");
    let o = psc(dir.path(), &["disks", "validate", "--in", "empty.cfg", "--report", "e.json"]);
    assert_eq!(code(&o), 0);
    let r = json(&dir.path().join("e.json"));
    assert_eq!(r["total"], 0);
    assert_eq!(r["rows"], Value::Array(vec![]));
    assert_eq!(r["passed"], true);
}

#[test]
fn disks_compose_prints_a_config_file() {
    let dir = workspace();
    let o = psc(
        dir.path(),
        &["disks", "compose", "--in", "d.cfg", "--outer", "pair", "--inner", "pair,id", "--name", "out"],
    );
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("psc-disks 1"));
    assert_eq!(text.matches(';').count(), 2);
    let missing = psc(
        dir.path(),
        &["disks", "compose", "--in", "d.cfg", "--outer", "pair", "--inner", "pair,nope"],
    );
    assert_eq!(code(&missing), 2);
}

#[test]
fn exit_codes() {
    let dir = workspace();
    assert_eq!(code(&psc(dir.path(), &["nonsense"])), 2);
    assert_eq!(code(&psc(dir.path(), &["tree", "normalize", "--in", "t.tree"])), 2);
    assert_eq!(
        code(&psc(dir.path(), &["metric", "curvature", "--profile", "round", "--step", "0"])),
        2
    );
    assert_eq!(code(&psc(dir.path(), &["--help"])), 0);
    // missing file and malformed input are failures, not usage errors
    let missing = psc(dir.path(), &["tree", "normalize", "--in", "nope.tree", "--configs", "d.cfg"]);
    assert_eq!(code(&missing), 1);
    assert!(String::from_utf8_lossy(&missing.stderr).contains("nope.tree"));
    put(&dir, "bad.tree", "(vertex @pair -[1.5]-> leaf 1 -[1]-> leaf 2)");
    let bad = psc(dir.path(), &["tree", "normalize", "--in", "bad.tree", "--configs", "d.cfg"]);
    assert_eq!(code(&bad), 1);
}

#[test]
fn reports_are_deterministic() {
    let dir = workspace();
    for name in ["a.json", "b.json"] {
        let o = psc(
            dir.path(),
            &["action", "verify", "--seed", "3", "--cases", "10", "--report", name],
        );
        assert_eq!(code(&o), 0);
    }
    let a = fs::read(dir.path().join("a.json")).unwrap();
    let b = fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b);
    assert_eq!(json(&dir.path().join("a.json"))["seed"], 3);
}

#[test]
fn check_all_passes_on_a_small_run() {
    let dir = workspace();
    let o = psc(dir.path(), &["check", "all", "--seed", "1", "--cases", "20", "--report", "all.json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let r = json(&dir.path().join("all.json"));
    assert_eq!(r["failures"], 0);
    assert!(r["total"].as_u64().unwrap() >= 8);
}
