#![allow(dead_code)]

use std::path::PathBuf;

use growthfn::cli;
use growthfn::grammar::{parse_grammar, Grammar};
use growthfn::groebner::CancelToken;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
}

pub fn grammar_at(path: &PathBuf) -> Grammar {
    let text = std::fs::read_to_string(path).unwrap();
    parse_grammar(&text).unwrap()
}

pub const CORPUS: [&str; 3] = ["dyck.grm", "charney_b3.grm", "charney_b3_braidweighted.grm"];

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_cli(args: &[&str]) -> Run {
    run_cli_with(args, &CancelToken::new())
}

pub fn run_cli_with(args: &[&str], cancel: &CancelToken) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("growthfn").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err, cancel);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

/// Integer coefficients of a `series` / `check` JSON report.
pub fn json_series(report: &serde_json::Value) -> Vec<String> {
    report["series"]["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.to_string())
        .collect()
}
