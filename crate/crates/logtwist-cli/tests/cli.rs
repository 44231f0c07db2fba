use logtwist_cli::{run, Outcome};

fn call(args: &[&str], input: &str) -> Outcome {
    let argv: Vec<String> = std::iter::once("logtwist")
        .chain(args.iter().copied())
        .map(String::from)
        .collect();
    let text = input.to_string();
    run(argv, move || Ok(text))
}

const WARNING: &str = r#"{
  "kind": "document",
  "monoid": {"kind": "monoid", "rank": 2, "generators": [["1/2", "0"], ["0", "1/2"]]},
  "query": {"kind": "query", "indices": [1]}
}"#;

#[test]
fn schema_errors_carry_path_and_line() {
    let bad = "{\n  \"kind\": \"document\",\n  \"monoid\": {\n    \"kind\": \"monoid\",\n    \"rank\": 2,\n    \"generators\": [[\"1/2\", \"x\"]]\n  }\n}\n";
    let out = call(&["monoid", "envelope"], bad);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("monoid.generators[0][1]"), "{}", out.stderr);
    assert!(out.stderr.contains("line 6"), "{}", out.stderr);
}

#[test]
fn wrong_section_kind_is_rejected() {
    let out = call(
        &["monoid", "envelope"],
        r#"{"kind": "document", "monoid": {"kind": "graph", "rank": 1}}"#,
    );
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("monoid.kind"), "{}", out.stderr);
}

#[test]
fn unknown_fields_are_rejected() {
    let out = call(
        &["monoid", "envelope"],
        r#"{"kind": "document", "monoid": {"rank": 1, "gens": []}}"#,
    );
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("gens"), "{}", out.stderr);
}

#[test]
fn missing_section_is_an_input_error() {
    let out = call(&["local", "decide"], r#"{"kind": "document"}"#);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("local-monoid"), "{}", out.stderr);
}

#[test]
fn dangling_reference_fails_validation_with_exit_1() {
    let doc = r#"{"kind": "document", "graph": {"kind": "graph", "vertices": [{"id": "A"}],
        "edges": [{"id": "e", "ends": ["A", "B"]}]}}"#;
    let out = call(&["curve", "validate"], doc);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("\"valid\": false"));
    let out = call(&["curve", "genus"], doc);
    assert_eq!(out.code, 2);
}

#[test]
fn plan_must_name_known_vertices() {
    let doc = r#"{"kind": "document", "graph": {"kind": "graph", "vertices": [{"id": "A", "genus": 1}]},
        "plan": {"kind": "plan", "collapsed": ["Q"]}}"#;
    let out = call(&["contract", "apply"], doc);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("plan"), "{}", out.stderr);
}

#[test]
fn indices_are_one_based() {
    let doc = WARNING.replace("[1]", "[0]");
    let out = call(&["monoid", "quotient"], &doc);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("query.indices"), "{}", out.stderr);
}

#[test]
fn output_keys_are_sorted_and_stable() {
    let a = call(&["monoid", "pushout"], WARNING);
    let b = call(&["monoid", "pushout"], WARNING);
    assert_eq!(a, b);
    let keys: Vec<&str> = a
        .stdout
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).expect("key"))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort_unstable();
    assert_eq!(keys, sorted);
    assert!(a.stdout.ends_with("}\n"));
}

#[test]
fn output_flag_writes_the_file() {
    let dir = std::env::temp_dir().join(format!("logtwist-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let out = call(&["--output", path.to_str().unwrap(), "monoid", "quotient"], WARNING);
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("(1/2)N"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn input_flag_reads_the_file() {
    let dir = std::env::temp_dir().join(format!("logtwist-cli-input-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("in.json");
    std::fs::write(&path, WARNING).unwrap();
    let argv = ["logtwist", "--input", path.to_str().unwrap(), "monoid", "pushout"];
    let out = run(argv, || panic!("stdin must not be read"));
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("Z ⊕ Z/2"));
    let missing = run(["logtwist", "--input", "/nonexistent/doc.json", "count"], || {
        Ok(String::new())
    });
    assert_eq!(missing.code, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn flag_validation() {
    assert_eq!(call(&["--jobs", "0", "count"], "{}").code, 2);
    assert_eq!(call(&["--max-denominator", "0", "count"], "{}").code, 2);
    assert_eq!(call(&["monoid", "frobnicate"], "{}").code, 2);
    assert_eq!(call(&["--help"], "").code, 0);
}

#[test]
fn membership_decision_exit_codes() {
    let doc = |v: &str| {
        format!(
            r#"{{"kind": "document", "monoid": {{"kind": "monoid", "rank": 2, "generators": [["1/2", "1/2"]]}},
            "query": {{"kind": "query", "vector": {v}}}}}"#
        )
    };
    assert_eq!(call(&["monoid", "contains"], &doc(r#"["3/2", "1/2"]"#)).code, 0);
    assert_eq!(call(&["monoid", "contains"], &doc(r#"["1/2", "0"]"#)).code, 1);
    assert_eq!(call(&["monoid", "contains"], &doc(r#"["-1/2", "1/2"]"#)).code, 1);
}

#[test]
fn local_build_respects_the_bound() {
    let doc = r#"{"kind": "document", "submonoid": {"kind": "submonoid", "torsion": [2],
        "generators": [[1, [0]], [1, [1]]], "unit": [2, [1]]}}"#;
    let out = call(&["local", "build"], doc);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("\"bound\": 64"));
    let out = call(&["--max-denominator", "1", "local", "build"], doc);
    assert_eq!(out.code, 2, "{}", out.stdout);
}

#[test]
fn selftest_corpus_only_is_green() {
    let out = call(&["selftest"], "");
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(!out.stdout.contains("\"checks\""));
}
