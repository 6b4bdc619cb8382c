//! Replays the fuzz corpus through the parsers, with the same round-trip
//! assertions the fuzz targets make.

use std::fs;
use std::path::{Path, PathBuf};

use schroeter::io::{
    format_rational, format_run, format_seed, parse_curve_json, parse_point_list, parse_points, parse_rational,
    parse_run, parse_seed,
};

fn corpus(target: &str) -> Vec<(PathBuf, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut files: Vec<(PathBuf, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            let text = fs::read_to_string(&path).unwrap();
            (path, text)
        })
        .collect();
    files.sort();
    assert!(!files.is_empty(), "empty corpus for {target}");
    files
}

fn accepted(target: &str, parse: impl Fn(&str) -> bool) -> usize {
    corpus(target).iter().filter(|(_, text)| parse(text)).count()
}

#[test]
fn rationals() {
    let ok = accepted("parse_rational", |t| match parse_rational(t) {
        Ok(r) => {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
            true
        }
        Err(_) => false,
    });
    assert_eq!(ok, 6);
}

#[test]
fn point_lists() {
    assert_eq!(accepted("parse_points", |t| parse_points(t).is_ok()), 3);
    assert_eq!(accepted("parse_point_list", |t| parse_point_list(t).is_ok()), 3);
}

#[test]
fn curves() {
    assert_eq!(accepted("parse_curve_json", |t| parse_curve_json(t).is_ok()), 2);
}

#[test]
fn seeds() {
    let ok = accepted("parse_seed", |t| match parse_seed(t) {
        Ok(seed) => {
            assert_eq!(parse_seed(&format_seed(&seed)).unwrap(), seed);
            true
        }
        Err(_) => false,
    });
    assert_eq!(ok, 4);
}

#[test]
fn runs() {
    let ok = accepted("parse_run", |t| match parse_run(t) {
        Ok(run) => {
            assert_eq!(format_run(&run.state, run.weierstrass.as_ref()), t);
            true
        }
        Err(_) => false,
    });
    assert_eq!(ok, 3);
}
