use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use ghzw::SymbolicState;
use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
}

fn ghzw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghzw"))
        .args(args)
        .env_remove("GHZW_MAX_QUBITS")
        .output()
        .expect("binary runs")
}

fn ghzw_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ghzw"))
        .args(args)
        .env_remove("GHZW_MAX_QUBITS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path(name: &str) -> String {
    corpus(name).to_string_lossy().into_owned()
}

#[test]
fn check_reports_full_entanglement() {
    let o = ghzw(&["check", &path("three_excitation.state")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "fully-entangled: true\n");
    let o = ghzw(&["check", &path("three_excitation_product.state")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("fully-entangled: false\n"));
}

#[test]
fn six_qubit_ghz_shells() {
    let o = ghzw(&["enum-partitions", "6", "--ghz-only", "--multi-group"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "G:4+2 | W:-\nG:3+3 | W:-\nG:2+2+2 | W:-\n");
}

#[test]
fn canonical_output_ignores_group_order_and_flips() {
    let a = ghzw(&["canon", "--ghz", &path("psi1.state")]);
    let b = ghzw(&["canon", "--ghz", &path("psi1_shuffled.state")]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = ghzw(&["canon", "--ghz", &path("psi2.state")]);
    assert_ne!(a.stdout, c.stdout);

    // reversed group order, fed through stdin
    let s = SymbolicState::parse(&std::fs::read_to_string(corpus("w_open_chain.state")).unwrap()).unwrap();
    let mut text = "groups: W:2 W:2 W:2 W:2\n".to_string();
    for t in s.terms() {
        let syms: Vec<String> = t.symbols.iter().rev().map(|x| x.to_string()).collect();
        text.push_str(&format!("term: {} {}\n", t.coeff, syms.join(" ")));
    }
    let d = ghzw_stdin(&["canon", "--w", "-"], &text);
    assert_eq!(
        d.stdout,
        ghzw(&["canon", "--w", &path("w_open_chain.state")]).stdout
    );
    assert_ne!(
        d.stdout,
        ghzw(&["canon", "--w", &path("w_disjoint_pairs.state")]).stdout
    );
}

#[test]
fn simplify_merges_three_w_groups() {
    let o = ghzw(&["--format", "json", "simplify", &path("w_mergeable.state")]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["steps"].as_array().unwrap().len(), 1);
    let got = SymbolicState::from_json(&v["result"].to_string()).unwrap();
    let want =
        SymbolicState::parse(&std::fs::read_to_string(corpus("w_merged.state")).unwrap()).unwrap();
    assert_eq!(got, want);
    let o = ghzw(&["simplify", &path("ghz_w_fixed_point.state")]);
    assert!(stdout(&o).starts_with("already simplest\n"));
}

#[test]
fn classification_labels() {
    let o = ghzw(&["classify", &path("mixed_bracket.state")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("label: (2,1,0)\n"));
    let o = ghzw(&["classify", &path("w_triangle_lower.state")]);
    assert!(stdout(&o).contains("W-main(p=3,q=2)\n"));
    assert!(stdout(&o).contains("uneliminated-terms: 0\n"));
    let o = ghzw(&["classify", &path("w_mergeable.state")]);
    assert_eq!(code(&o), 1);
}

#[test]
fn json_state_input_is_accepted() {
    let s = SymbolicState::parse(&std::fs::read_to_string(corpus("ghz_w_ladder.state")).unwrap()).unwrap();
    let o = ghzw_stdin(&["check", "-"], &s.to_json().to_string());
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "fully-entangled: true\n");
}

#[test]
fn oracle_cross_checks_pass() {
    for f in [
        "ghz_w_pair.state",
        "three_excitation.state",
        "ghz_w_ladder.state",
        "w_two_groups.state",
        "psi1.state",
    ] {
        let o = ghzw(&["oracle", "verify", &path(f), "--seed", "3"]);
        assert_eq!(code(&o), 0, "{f}");
        let text = stdout(&o);
        assert_eq!(text.matches(": pass\n").count(), 3, "{f}\n{text}");
    }
    let o = ghzw(&["oracle", "verify", &path("ghz_w_pair.state")]);
    assert!(stdout(&o).contains("range-class: neither\n"));
    let o = ghzw(&["oracle", "verify", &path("ghz4.state")]);
    assert!(stdout(&o).contains("range-class: GHZ\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&ghzw(&["--help"])), 0);
    assert_eq!(code(&ghzw(&["--version"])), 0);
    assert_eq!(
        code(&ghzw(&["check", &path("three_excitation.state"), "--no-such-flag"])),
        64
    );
    assert_eq!(code(&ghzw(&["frobnicate"])), 64);
    assert_eq!(code(&ghzw(&[])), 64);
    assert_eq!(code(&ghzw(&["canon", &path("psi1.state")])), 64);
    assert_eq!(code(&ghzw(&["check", "/no/such/file.state"])), 2);
    assert_eq!(
        code(&ghzw_stdin(&["check", "-"], "groups: G:2\nterm: 1 W\n")),
        2
    );
    assert_eq!(
        code(&ghzw_stdin(&["check", "-"], "groups: G:1\nterm: 1 0\n")),
        2
    );
    assert_eq!(
        code(&ghzw_stdin(
            &["check", "-"],
            "groups: G:2 G:2\nterm: 1 0 1\nterm: -1 0 1\n"
        )),
        2
    );
    assert_eq!(code(&ghzw(&["canon", "--ghz", &path("w_mergeable.state")])), 1);
    assert_eq!(
        code(&ghzw(&["enum-w", "--n", "3", "--q", "1", "--p", "1"])),
        1
    );
    assert_eq!(
        code(&ghzw(&["enum-ghz", "--p", "2", "--q", "30", "--n", "3"])),
        3
    );
    assert_eq!(
        code(&ghzw(&[
            "enum-ghz", "--p", "2", "--q", "2", "--n", "4", "--max-t", "4"
        ])),
        3
    );
    assert_eq!(
        code(&ghzw(&[
            "oracle",
            "verify",
            &path("ghz_w_fixed_point.state"),
            "--max-qubits",
            "8"
        ])),
        3
    );
    let o = Command::new(env!("CARGO_BIN_EXE_ghzw"))
        .args(["oracle", "verify", &path("ghz_w_fixed_point.state")])
        .env("GHZW_MAX_QUBITS", "8")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}

/// Every subcommand with the corpus files it is run on.
fn invocations() -> Vec<Vec<String>> {
    let mut out: Vec<Vec<&str>> = vec![
        vec!["enum-partitions", "6", "--ghz-only", "--multi-group"],
        vec!["enum-partitions", "8"],
        vec!["enum-ghz", "--p", "2", "--q", "2", "--n", "4"],
        vec!["enum-ghz", "--p", "1", "--q", "3", "--n", "4"],
        vec!["enum-w", "--n", "4", "--q", "2", "--p", "3"],
    ];
    let mut owned: Vec<Vec<String>> = out
        .drain(..)
        .map(|v| v.iter().map(|s| s.to_string()).collect())
        .collect();
    let files = |names: &[&str], cmd: &[&str]| -> Vec<Vec<String>> {
        names
            .iter()
            .map(|n| cmd.iter().map(|s| s.to_string()).chain([path(n)]).collect())
            .collect()
    };
    let all = [
        "ghz4.state",
        "ghz_w_pair.state",
        "three_excitation.state",
        "three_excitation_product.state",
        "ghz_w_ladder.state",
        "w_mergeable.state",
        "ghz_w_fixed_point.state",
        "w_two_groups.state",
        "w_triangle_lower.state",
        "mixed_bracket.state",
        "psi1.state",
    ];
    owned.extend(files(&all, &["check"]));
    owned.extend(files(&all, &["simplify"]));
    owned.extend(files(
        &["psi0.state", "psi1.state", "psi2.state"],
        &["canon", "--ghz"],
    ));
    owned.extend(files(
        &["psi1.state"],
        &["canon", "--ghz", "--ignore-sizes"],
    ));
    owned.extend(files(
        &["w_disjoint_pairs.state", "w_open_chain.state", "w_triangle.state"],
        &["canon", "--w"],
    ));
    owned.extend(files(
        &[
            "psi1.state",
            "w_two_groups.state",
            "w_triangle_lower.state",
            "mixed_bracket.state",
            "ghz_w_fixed_point.state",
        ],
        &["classify"],
    ));
    owned.extend(files(
        &["ghz_w_pair.state", "three_excitation.state", "w_two_groups.state"],
        &["oracle", "verify"],
    ));
    owned.push(vec![
        "compose".into(),
        path("mixed_ghz_part.state"),
        path("mixed_w_part.state"),
    ]);
    owned
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in invocations() {
        for format in ["text", "json"] {
            let mut full: Vec<&str> = vec!["--format", format, "--seed", "11"];
            full.extend(args.iter().map(String::as_str));
            let a = ghzw(&full);
            let b = ghzw(&full);
            assert_eq!(
                code(&a),
                0,
                "{full:?}\n{}",
                String::from_utf8_lossy(&a.stderr)
            );
            assert_eq!(a.stdout, b.stdout, "{full:?}");
        }
    }
}

#[test]
fn json_output_matches_schema() {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    let validator = jsonschema::draft202012::new(&schema).expect("schema compiles");
    for args in invocations() {
        let mut full: Vec<&str> = vec!["--format", "json"];
        full.extend(args.iter().map(String::as_str));
        let o = ghzw(&full);
        assert_eq!(code(&o), 0, "{full:?}");
        let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
        let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{full:?}: {errors:?}");
    }
    // the schema rejects a report of the wrong shape
    assert!(
        !validator.is_valid(&serde_json::json!({ "command": "check", "fully_entangled": "yes" }))
    );
}

#[test]
fn every_corpus_state_passes_the_oracle() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples");
    let mut names: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    names.sort();
    assert!(names.len() >= 20);
    for f in names {
        let o = ghzw(&["oracle", "verify", &f.to_string_lossy()]);
        assert_eq!(code(&o), 0, "{}\n{}", f.display(), stdout(&o));
    }
}
