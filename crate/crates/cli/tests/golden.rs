//! Byte-exact reports for the canonical corpus. Set `UPDATE_GOLDEN=1` to
//! rewrite the files under `tests/golden/`.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

const SPECS: [&str; 7] = [
    "polygon:5",
    "grid:2,3",
    "torus",
    "cylinder:3",
    "heptadisk",
    "tetrahedron",
    "presentation:a,b|a.b.a^-1.b^-2",
];

fn angled(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_angled")).args(args).output().unwrap()
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn file_name(spec: &str) -> String {
    spec.replace([':', ',', '|', '^', '.'], "_")
}

fn built(dir: &Path, spec: &str) -> PathBuf {
    let path = dir.join(format!("{}.a2c", file_name(spec)));
    let out = angled(&["build", spec, "-o", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn transcript(dir: &Path, spec: &str) -> String {
    let input = built(dir, spec);
    let input = input.to_str().unwrap();
    let mut s = String::new();
    s.push_str(&std::fs::read_to_string(input).unwrap());
    let runs: Vec<Vec<&str>> = vec![
        vec!["check", input, "--mode", "nonpositive"],
        vec!["check", input, "--mode", "negative", "--json"],
        vec!["curvature", input],
        vec!["collapse", input, "--decide-pi1"],
        vec!["homology", input, "--json"],
        vec!["presentation", input],
        vec!["solve-angles", input, "--mode", "negative"],
    ];
    for args in runs {
        let start = Instant::now();
        let out = angled(&args);
        assert!(start.elapsed() < Duration::from_secs(5), "{spec}: {args:?} too slow");
        s.push_str(&format!("$ {} [exit {}]\n", args[0], out.status.code().unwrap()));
        s.push_str(&String::from_utf8(out.stdout).unwrap());
    }
    s
}

#[test]
fn reports_match_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for spec in SPECS {
        let got = transcript(dir.path(), spec);
        // paths in the transcript are never printed, so runs are comparable
        assert_eq!(got, transcript(dir.path(), spec), "{spec}: output not deterministic");
        let path = golden_dir().join(format!("{}.txt", file_name(spec)));
        if update {
            std::fs::create_dir_all(golden_dir()).unwrap();
            std::fs::write(&path, &got).unwrap();
        } else {
            let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
            assert_eq!(got, want, "{spec} differs from {}", path.display());
        }
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let torus = built(dir.path(), "torus");
    let torus = torus.to_str().unwrap();
    assert_eq!(angled(&["check", torus, "--mode", "nonpositive"]).status.code(), Some(0));
    assert_eq!(angled(&["check", torus, "--mode", "negative"]).status.code(), Some(1));
    let tet = built(dir.path(), "tetrahedron");
    assert_eq!(angled(&["check", tet.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(angled(&["solve-angles", tet.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(angled(&["check", "/nonexistent.a2c"]).status.code(), Some(2));
    assert_eq!(angled(&["check", torus, "--mode", "sideways"]).status.code(), Some(2));
    assert_eq!(angled(&["nonsense"]).status.code(), Some(2));
    assert_eq!(angled(&["build", "polygon:x"]).status.code(), Some(2));
    let broken = dir.path().join("broken.a2c");
    std::fs::write(&broken, "vertex v\nedge a v w\n").unwrap();
    let out = angled(&["curvature", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn grid_is_decided_simply_connected() {
    let dir = tempfile::tempdir().unwrap();
    let grid = built(dir.path(), "grid:3,3");
    let out = angled(&["collapse", grid.to_str().unwrap(), "--decide-pi1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("simply connected: Yes (terminal = Point)"));
}

#[test]
fn collapse_writes_terminal_complex() {
    let dir = tempfile::tempdir().unwrap();
    let cyl = built(dir.path(), "cylinder:4");
    let out_path = dir.path().join("terminal.a2c");
    let out = angled(&["collapse", cyl.to_str().unwrap(), "-o", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    let terminal = angled::a2c::parse_a2c(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert!(terminal.faces().is_empty());
    assert_eq!(terminal.edges().len(), 4);
}

#[test]
fn solve_angles_accepts_unangled_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bare.a2c");
    std::fs::write(&input, "vertex v\nedge a v v\nedge b v v\nface f : a+ b+ a- b-\n").unwrap();
    let output = dir.path().join("angled.a2c");
    let out = angled(&["solve-angles", input.to_str().unwrap(), "-o", output.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let x = angled::a2c::parse_a2c(&std::fs::read_to_string(&output).unwrap()).unwrap();
    let check = angled(&["check", output.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(0));
    assert_eq!(x.faces().len(), 1);
}

#[test]
fn trace_writes_svg_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let torus = built(dir.path(), "torus");
    let svg = dir.path().join("t.svg");
    let json = dir.path().join("t.json");
    let out = angled(&[
        "trace",
        torus.to_str().unwrap(),
        "--face",
        "f",
        "--point",
        "0.3,0.4",
        "--dir",
        "1,0.5",
        "--svg",
        svg.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["trace"]["termination"]["reason"], "EdgeRevisit");
    assert_eq!(v["verdict"]["verdict"], "straight");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("verdict: straight"));
}

#[test]
fn fuzz_builds_follow_the_seed() {
    let a = angled(&["build", "fuzz:wheel", "--seed", "4"]).stdout;
    let b = angled(&["build", "fuzz:wheel", "--seed", "4"]).stdout;
    let c = angled(&["build", "fuzz:wheel", "--seed", "5"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn link_exports() {
    let dir = tempfile::tempdir().unwrap();
    let torus = built(dir.path(), "torus");
    let out = angled(&["link", torus.to_str().unwrap(), "--vertex", "v"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 4);
    assert_eq!(v["arcs"][0]["length"], "1/2");
    let dot = angled(&["link", torus.to_str().unwrap(), "--edge", "a", "--dot"]);
    assert!(String::from_utf8_lossy(&dot.stdout).starts_with("graph \"a\""));
}
