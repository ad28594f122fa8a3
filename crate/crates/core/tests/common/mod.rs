//! Shared helpers for the integration tests: fixtures, independent
//! oracles, random instance generators and a LUBM-shaped data generator.

#![allow(dead_code)]

pub mod checks;
pub mod lubm;

use std::path::PathBuf;

use kg_reform::rdf::{compute_closure, parse_ntriples_str, Graph, Triple};

pub const EX: &str = "http://example.org/";
pub const DBO: &str = "http://dbpedia.org/ontology/";
pub const DBR: &str = "http://dbpedia.org/resource/";

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn fixture_triples(name: &str) -> Vec<Triple> {
    parse_ntriples_str(&fixture_text(name)).unwrap()
}

/// Closed graph of an N-Triples fixture.
pub fn fixture_graph(name: &str) -> Graph {
    compute_closure(Graph::build(fixture_triples(name)))
}

pub const FIXTURES: [&str; 3] = ["directors.nt", "scorsese.nt", "coppola.nt"];

/// Runs the built binary with `args`.
pub fn cli(args: &[&str]) -> std::process::Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_kg-reform"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Replaces every `"time_ms": <n>` in JSON output by a fixed value.
pub fn mask_times(json: &str) -> String {
    regex::Regex::new(r#""time_ms": \d+"#)
        .unwrap()
        .replace_all(json, r#""time_ms": 0"#)
        .into_owned()
}

pub fn path_str(name: &str) -> String {
    fixture_path(name).to_string_lossy().into_owned()
}
