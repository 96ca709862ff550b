use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use wts_core::generators::permanent_wts;
use wts_core::graph::boolean_grid;
use wts_core::io::{render_graph, render_wts};

fn wts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wts"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn eval(wts_file: &str, graph: &str, method: &str) -> String {
    let o = wts(&["eval", "--wts", wts_file, "--graph", graph, "--method", method]);
    assert!(o.status.success(), "{method}: {}", stderr(&o));
    stdout(&o)
}

const ONE_VERTEX: &str = r#"{"sigma": ["a"], "gamma": ["e"], "vertices": [{"id": 0, "label": "a"}], "edges": []}"#;
const ONE_TILE: &str = r#"{"semiring": "natural", "sigma": ["a"], "gamma": ["e"], "states": ["q", "r"],
  "tiles": [{"state": "q", "label": "a", "weight": "5"}]}"#;

/// The all-ones 3x3 permanent instance, with its files.
fn all_ones(dir: &Path) -> (String, String) {
    let g = boolean_grid(&vec![vec![true; 3]; 3]).unwrap();
    (
        write(dir, "perm.wts.json", &render_wts(&permanent_wts())),
        write(dir, "perm.graph.json", &render_graph(&g)),
    )
}

#[test]
fn single_tile_weight_is_printed() {
    let dir = TempDir::new().unwrap();
    let t = write(dir.path(), "t.json", ONE_TILE);
    let g = write(dir.path(), "g.json", ONE_VERTEX);
    for method in ["brute", "pathwidth", "treewidth"] {
        assert_eq!(eval(&t, &g, method), "5\n");
    }
}

#[test]
fn all_ones_permanent_is_six() {
    let dir = TempDir::new().unwrap();
    let (t, g) = all_ones(dir.path());
    assert_eq!(eval(&t, &g, "treewidth"), "6\n");
    assert_eq!(eval(&t, &g, "brute"), "6\n");
}

#[test]
fn methods_print_identical_lines() {
    let dir = TempDir::new().unwrap();
    for (family, size) in [
        ("permanent", "3"),
        ("permanent-nat", "2"),
        ("clique", "4"),
        ("sat", "3"),
        ("binary", "6"),
    ] {
        let prefix = dir.path().join(family);
        let p = prefix.to_str().unwrap();
        let o = wts(&["generate", family, "--size", size, "--seed", "3", "-o", p]);
        assert!(o.status.success(), "{family}: {}", stderr(&o));
        let (t, g) = (format!("{p}.wts.json"), format!("{p}.graph.json"));
        let brute = eval(&t, &g, "brute");
        assert_eq!(brute, eval(&t, &g, "treewidth"), "{family}");
        assert_eq!(brute, eval(&t, &g, "pathwidth"), "{family}");
    }
}

#[test]
fn stats_go_to_stderr() {
    let dir = TempDir::new().unwrap();
    let (t, g) = all_ones(dir.path());
    let o = wts(&["eval", "--wts", &t, "--graph", &g, "--stats"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1);
    let stats: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    for key in ["method", "width_used", "term_size", "reachable_states", "wall_time_ms"] {
        assert!(stats.get(key).is_some(), "{key}");
    }
}

#[test]
fn check_reports_degree_violations() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"sigma": ["a"], "gamma": ["e"],
            "vertices": [{"id": 0, "label": "a"}, {"id": 1, "label": "a"}, {"id": 2, "label": "a"}],
            "edges": [{"name": "e", "src": 0, "dst": 1}, {"name": "e", "src": 0, "dst": 2}]}"#,
    );
    let o = wts(&["check", "--graph", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("vertex 0"), "{}", stderr(&o));

    let good = write(dir.path(), "good.json", ONE_VERTEX);
    let o = wts(&["check", "--graph", &good]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("graph: ok"));
}

#[test]
fn generation_is_deterministic() {
    for family in ["permanent", "clique", "sat", "gap", "binary", "permanent-nat"] {
        let a = wts(&["generate", family, "--size", "3", "--seed", "42"]);
        let b = wts(&["generate", family, "--size", "3", "--seed", "42"]);
        assert!(a.status.success(), "{family}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{family}");
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let (t, g) = all_ones(dir.path());
    let missing = dir.path().join("missing.json");
    let o = wts(&["eval", "--wts", &t, "--graph", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let garbage = write(dir.path(), "garbage.json", "{ not json");
    assert_eq!(wts(&["eval", "--wts", &t, "--graph", &garbage]).status.code(), Some(2));
    let o = wts(&["eval", "--wts", &t, "--graph", &g, "--max-width", "1"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let o = wts(&["eval", "--wts", &t, "--graph", &g, "--method", "brute", "--budget", "3"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let other = write(dir.path(), "t.json", ONE_TILE);
    assert_eq!(wts(&["eval", "--wts", &other, "--graph", &g]).status.code(), Some(2));
}

#[test]
fn emitted_files_are_accepted_back() {
    let dir = TempDir::new().unwrap();
    let (t, g) = all_ones(dir.path());
    let out = |name: &str| -> PathBuf { dir.path().join(name) };
    for (kind, file) in [("path", "d.path.json"), ("tree", "d.tree.json")] {
        let o = wts(&["decompose", &g, "--as", kind, "-o", out(file).to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        let d = out(file);
        let o = wts(&["check", "--graph", &g, "--decomposition", d.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        let method = if kind == "path" { "pathwidth" } else { "treewidth" };
        let o = wts(&[
            "eval",
            "--wts",
            &t,
            "--graph",
            &g,
            "--method",
            method,
            "--decomposition",
            d.to_str().unwrap(),
        ]);
        assert_eq!(stdout(&o), "6\n");
    }
    for (kind, decomposition) in [("kword", "d.path.json"), ("ktt", "d.tree.json")] {
        let d = out(decomposition);
        let first = out(&format!("{kind}.1.json"));
        let second = out(&format!("{kind}.2.json"));
        for target in [&first, &second] {
            let o = wts(&[
                "decompose",
                &g,
                "--as",
                kind,
                "--decomposition",
                d.to_str().unwrap(),
                "-o",
                target.to_str().unwrap(),
            ]);
            assert!(o.status.success(), "{}", stderr(&o));
        }
        assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
        let o = wts(&["check", "--graph", &g, "--term", first.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(stdout(&o).contains("term: ok"));
    }
    let o = wts(&["generate", "sat", "--size", "3", "-o", out("sat").to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(out("sat.wts.json")).unwrap();
    let reparsed = render_wts(&wts_core::io::parse_wts(&text).unwrap());
    assert_eq!(reparsed, text);
}

#[test]
fn bench_sizes_are_monotone() {
    let o = wts(&["bench", "--family", "grid3xN", "--n", "10..200", "--repeats", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("size,vertices,time_ms,value_digest"));
    let sizes: Vec<usize> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(sizes, vec![10, 20, 40, 80, 160]);
}
