//! Replays the fuzz corpus and throws random text at the parsers on the
//! stable toolchain.

use std::fs;
use std::path::PathBuf;

use bcov_core::exact::{parse_ratfunc, parse_rational};
use bcov_core::models::ModelSpec;
use proptest::prelude::*;

fn corpus(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

fn ratfunc_round_trip(text: &str) {
    if let Ok(f) = parse_ratfunc(text) {
        let printed = f.to_string();
        assert_eq!(parse_ratfunc(&printed).unwrap(), f, "{text} -> {printed}");
    }
}

#[test]
fn ratfunc_corpus() {
    let seeds = corpus("ratfunc");
    assert!(!seeds.is_empty());
    for (name, bytes) in seeds {
        let text = String::from_utf8(bytes).unwrap();
        assert!(parse_ratfunc(&text).is_ok(), "{name}");
        ratfunc_round_trip(&text);
    }
}

#[test]
fn rational_corpus() {
    for (name, bytes) in corpus("rational") {
        let text = String::from_utf8(bytes).unwrap();
        match parse_rational(&text) {
            Ok(r) => assert_eq!(parse_rational(&r.to_string()).unwrap(), r),
            Err(_) => assert_eq!(name, "zero_den"),
        }
    }
}

#[test]
fn model_corpus_parses() {
    for (name, bytes) in corpus("model_toml") {
        let text = String::from_utf8(bytes).unwrap();
        ModelSpec::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

proptest! {
    #[test]
    fn ratfunc_never_panics(text in "[x0-9+*/^() .-]{0,40}") {
        ratfunc_round_trip(&text);
    }

    #[test]
    fn rational_never_panics(text in "[0-9/ -]{0,20}") {
        if let Ok(r) = parse_rational(&text) {
            prop_assert_eq!(parse_rational(&r.to_string()).unwrap(), r);
        }
    }

    #[test]
    fn model_schema_never_panics(text in "(name|kind|chi|yukawa|\\[pf\\]|\\[lift\\]|theta_coeffs|=|\"|x|1|-|\\[|\\]|,|\n| ){0,60}") {
        let _ = ModelSpec::parse_schema(&text);
    }
}
