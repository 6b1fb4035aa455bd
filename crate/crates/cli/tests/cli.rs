use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "tests", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nchodge"))
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

#[test]
fn hrr_on_p2() {
    let o = run(&["hrr", "--ring", "builtin:p2", "--e", "O", "--f", "O(1)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "chi = 3\n");
}

#[test]
fn todd_variants() {
    assert_eq!(stdout(&run(&["todd", "--ring", "builtin:p1"])), "1 + 1 h\n");
    assert_eq!(stdout(&run(&["todd", "--ring", "builtin:p1", "--modified"])), "1\n");
    assert_eq!(stdout(&run(&["todd", "--ring", "builtin:k3", "--sqrt"])), "1 + 1 pt\n");
}

#[test]
fn pairings() {
    let o = run(&["pair", "--ring", "builtin:e", "--kind", "hres", "--a", "1", "--b", "pt"]);
    assert_eq!(stdout(&o), "hres = 1\n");
    let o = run(&[
        "pair",
        "--ring",
        "builtin:k3",
        "--kind",
        "mukai",
        "--a",
        "O",
        "--b",
        "O",
    ]);
    assert_eq!(stdout(&o), "mukai = 2\n");
    let o = run(&[
        "pair",
        "--ring",
        "builtin:e",
        "--kind",
        "hres",
        "--a",
        "1 + dz",
        "--b",
        "pt",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("mixed parity"));
}

#[test]
fn ring_validation() {
    let o = run(&["ring", "validate", "--ring", &fixture("p1.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("result: valid\n"));
    for (file, invariant) in [
        ("p1_grading.json", "grading"),
        ("elliptic_commutativity.json", "graded-commutativity"),
        ("missing_top.json", "top"),
        ("nonassociative.json", "associativity"),
        ("chern_off_diagonal.json", "chern-degrees"),
    ] {
        let o = run(&["ring", "validate", "--ring", &fixture(file)]);
        assert_eq!(o.status.code(), Some(2), "{file}");
        assert!(
            stderr(&o).contains(&format!("validation failed: {invariant}:")),
            "{file}: {}",
            stderr(&o)
        );
    }
}

#[test]
fn export_round_trips_through_validate() {
    let dir = std::env::temp_dir().join(format!("nchodge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("k3.json");
    let o = run(&["ring", "export", "--ring", "builtin:k3"]);
    std::fs::write(&path, o.stdout).unwrap();
    let o = run(&["hrr", "--ring", path.to_str().unwrap(), "--e", "O", "--f", "O"]);
    assert_eq!(stdout(&o), "chi = 2\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn symmetry() {
    let o = run(&["symmetry", "--ring", "builtin:k3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("nonzero defects = 0"));
    let o = run(&["symmetry", "--ring", "builtin:p2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("not Calabi-Yau"));
}

#[test]
fn family_checks() {
    let o = run(&["family", "check", "--family", "builtin:k3-2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("maurer-cartan: pass"));
    let o = run(&["family", "check", "--family", &fixture("k3_family.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["family", "check", "--family", &fixture("noncommuting_family.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("maurer-cartan: FAIL"));
    for (file, invariant) in [
        ("kappa_bad_degree.json", "kappa-degree"),
        ("kappa_not_derivation.json", "kappa-derivation"),
    ] {
        let o = run(&["family", "check", "--family", &fixture(file)]);
        assert_eq!(o.status.code(), Some(2), "{file}");
        assert!(stderr(&o).contains(invariant), "{file}");
    }
}

#[test]
fn graph_weight_is_deterministic() {
    let args = [
        "graph",
        "weight",
        "--graph",
        "builtin:wedge",
        "--samples",
        "20000",
        "--seed",
        "42",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let f = run(&[
        "graph",
        "weight",
        "--graph",
        &fixture("wedge.json"),
        "--samples",
        "20000",
        "--seed",
        "42",
    ]);
    assert_eq!(a.stdout, f.stdout);
    assert!(stdout(&a).contains("samples = 20000\nseed = 42\n"));
}

#[test]
fn graph_forced_zero_and_invalid() {
    let o = run(&[
        "graph",
        "weight",
        "--graph",
        &fixture("doubled_edge.json"),
        "--samples",
        "10",
    ]);
    assert!(stdout(&o).contains("forced_zero = doubled-edge\nmean = 0\n"));
    let o = run(&[
        "graph",
        "weight",
        "--graph",
        &fixture("boundary_source.json"),
        "--samples",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["graph", "weight", "--graph", "builtin:wedge", "--samples", "0"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn graph_enumeration() {
    let o = run(&["graph", "enum", "--aerial", "1", "--boundary", "0", "--max-edges", "0"]);
    assert_eq!(stdout(&o), "disk k=1 m=0 []\ncount = 1\n");
    let o = run(&[
        "graph",
        "enum",
        "--aerial",
        "1",
        "--boundary",
        "2",
        "--max-edges",
        "2",
        "--nonvanishing",
    ]);
    assert_eq!(stdout(&o), "disk k=1 m=2 [(0,1),(0,2)]\ncount = 1\n");
    let o = run(&[
        "graph",
        "enum",
        "--aerial",
        "3",
        "--boundary",
        "3",
        "--max-edges",
        "9",
        "--cap",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("cap of 5"));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["todd"]).status.code(), Some(64));
    assert_eq!(run(&["todd", "--ring", "builtin:nope"]).status.code(), Some(64));
    assert_eq!(run(&["todd", "--ring", "/no/such/file.json"]).status.code(), Some(64));
    assert_eq!(
        run(&["hrr", "--ring", "builtin:p1", "--e", "O", "--f", "Q(2)"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
