//! The bundled example corpus and the `selftest` driver.
//!
//! Each example names a command, an input document, the expected exit status, and
//! expected values at JSON pointers into the output.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::checks;
use crate::commands::{run, Cli, SelftestArgs, Verdict};
use crate::document::{parse_document, serialize_document, to_canonical_json};

pub const FILES: &[(&str, &str)] = &[
    ("bridge-apply", include_str!("../examples/bridge-apply.json")),
    ("bridge-chart", include_str!("../examples/bridge-chart.json")),
    ("contains-diagonal", include_str!("../examples/contains-diagonal.json")),
    (
        "contains-off-diagonal",
        include_str!("../examples/contains-off-diagonal.json"),
    ),
    (
        "contract-check-invalid",
        include_str!("../examples/contract-check-invalid.json"),
    ),
    (
        "contract-check-valid",
        include_str!("../examples/contract-check-valid.json"),
    ),
    ("count-two-to-one", include_str!("../examples/count-two-to-one.json")),
    ("envelope-diagonal", include_str!("../examples/envelope-diagonal.json")),
    ("factor-tail-chain", include_str!("../examples/factor-tail-chain.json")),
    ("genus-loop", include_str!("../examples/genus-loop.json")),
    (
        "initial-bridge-gcd",
        include_str!("../examples/initial-bridge-gcd.json"),
    ),
    (
        "initial-tail-stalk",
        include_str!("../examples/initial-tail-stalk.json"),
    ),
    (
        "monoid-stabilizer-full",
        include_str!("../examples/monoid-stabilizer-full.json"),
    ),
    ("mu2-add", include_str!("../examples/mu2-add.json")),
    ("mu2-decide", include_str!("../examples/mu2-decide.json")),
    (
        "mu2-from-admissible",
        include_str!("../examples/mu2-from-admissible.json"),
    ),
    ("mu2-validate", include_str!("../examples/mu2-validate.json")),
    ("mu3-decide", include_str!("../examples/mu3-decide.json")),
    ("mu4-decide", include_str!("../examples/mu4-decide.json")),
    ("node-chart", include_str!("../examples/node-chart.json")),
    ("not-build", include_str!("../examples/not-build.json")),
    ("numerics-unstable", include_str!("../examples/numerics-unstable.json")),
    (
        "picard-single-vertex",
        include_str!("../examples/picard-single-vertex.json"),
    ),
    ("rel-coarse-loop", include_str!("../examples/rel-coarse-loop.json")),
    ("stabilize-tail", include_str!("../examples/stabilize-tail.json")),
    ("tail-apply", include_str!("../examples/tail-apply.json")),
    ("tail-chart", include_str!("../examples/tail-chart.json")),
    (
        "two-to-one-curve-stabilizer-first",
        include_str!("../examples/two-to-one-curve-stabilizer-first.json"),
    ),
    (
        "two-to-one-curve-stabilizer-second",
        include_str!("../examples/two-to-one-curve-stabilizer-second.json"),
    ),
    (
        "two-to-one-not-equal",
        include_str!("../examples/two-to-one-not-equal.json"),
    ),
    (
        "two-to-one-not-isomorphic",
        include_str!("../examples/two-to-one-not-isomorphic.json"),
    ),
    (
        "two-to-one-stabilizer-first",
        include_str!("../examples/two-to-one-stabilizer-first.json"),
    ),
    (
        "two-to-one-stabilizer-second",
        include_str!("../examples/two-to-one-stabilizer-second.json"),
    ),
    (
        "validate-not-sharp",
        include_str!("../examples/validate-not-sharp.json"),
    ),
    ("warning-pushout", include_str!("../examples/warning-pushout.json")),
    ("warning-quotient", include_str!("../examples/warning-quotient.json")),
];

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Example {
    pub name: String,
    pub command: Vec<String>,
    pub document: Value,
    pub exit: i32,
    pub expect: BTreeMap<String, Value>,
}

impl Example {
    /// The document as the CLI reads it.
    pub fn input(&self) -> String {
        to_canonical_json(&self.document)
    }

    pub fn argv(&self) -> Vec<String> {
        std::iter::once("logtwist".to_string())
            .chain(self.command.iter().cloned())
            .collect()
    }
}

pub fn examples() -> Vec<Example> {
    FILES
        .iter()
        .map(|(name, text)| {
            let e: Example = serde_json::from_str(text).unwrap_or_else(|err| panic!("example {name}: {err}"));
            assert_eq!(&e.name, name, "example file and name disagree");
            e
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExampleResult {
    pub name: String,
    pub problems: Vec<String>,
}

impl ExampleResult {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Runs one example twice, checking exit status, expected values, byte-identical output
/// and the parse/serialize round trip of its document.
pub fn check_example(e: &Example) -> ExampleResult {
    let mut problems = Vec::new();
    let input = e.input();
    let first = run(e.argv(), || Ok(input.clone()));
    let second = run(e.argv(), || Ok(input.clone()));
    if first.code != e.exit {
        problems.push(format!(
            "exit {} expected {}; stderr {}",
            first.code,
            e.exit,
            first.stderr.trim()
        ));
    }
    if first != second {
        problems.push("repeated runs differ".into());
    }
    match serde_json::from_str::<Value>(&first.stdout) {
        Ok(out) => {
            for (pointer, want) in &e.expect {
                match out.pointer(pointer) {
                    Some(got) if got == want => {}
                    got => problems.push(format!("{pointer}: got {got:?}, expected {want}")),
                }
            }
        }
        Err(err) if e.exit != 2 => problems.push(format!("output is not JSON: {err}")),
        Err(_) => {}
    }
    match parse_document(&input) {
        Ok(doc) => {
            let text = serialize_document(&doc);
            match parse_document(&text) {
                Ok(again) if again == doc && serialize_document(&again) == text => {}
                Ok(_) => problems.push("parse after serialize changes the document".into()),
                Err(err) => problems.push(format!("serialized document does not parse: {err}")),
            }
        }
        Err(err) => problems.push(format!("document does not parse: {err}")),
    }
    ExampleResult {
        name: e.name.clone(),
        problems,
    }
}

/// The corpus, then the randomized checks when `--random-cases` is positive.
pub fn selftest(cli: &Cli, args: &SelftestArgs) -> Verdict {
    let results: Vec<ExampleResult> = examples().iter().map(check_example).collect();
    let mut positive = results.iter().all(ExampleResult::passed);
    let corpus: Vec<Value> = results
        .iter()
        .map(|r| json!({ "name": r.name, "passed": r.passed(), "problems": r.problems }))
        .collect();
    let mut out = json!({ "corpus": corpus, "seed": cli.seed });
    if args.random_cases > 0 {
        let reports = checks::all(cli.seed, args.random_cases);
        positive &= reports.iter().all(checks::CheckReport::passed);
        out["checks"] = Value::from(reports.iter().map(checks::CheckReport::to_json).collect::<Vec<_>>());
    }
    out["passed"] = Value::from(positive);
    Verdict { value: out, positive }
}
