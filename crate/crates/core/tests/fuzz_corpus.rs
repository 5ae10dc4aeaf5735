use std::path::PathBuf;

use ultrafine::format::{report_from_json, report_to_json, AlgebraFile};
use ultrafine::lie::Functional;
use ultrafine::scalar::{format_rational, parse_rational, parse_rational_list};

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| std::fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn rational_seeds() {
    for s in seeds("parse_rational") {
        if let Ok(q) = parse_rational(&s) {
            assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }
        let _ = parse_rational_list(&s);
    }
}

#[test]
fn functional_seeds() {
    for s in seeds("functional") {
        if let Ok(xi) = Functional::parse(&s) {
            assert_eq!(Functional::parse(&xi.to_string()).unwrap(), xi);
        }
    }
}

#[test]
fn algebra_seeds() {
    let mut valid = 0;
    for s in seeds("algebra_json") {
        if let Ok(file) = AlgebraFile::from_json_str(&s) {
            if let Ok(alg) = file.to_algebra() {
                valid += file.to_flag(&alg).is_ok() as usize;
            }
        }
    }
    for s in seeds("algebra_toml") {
        if let Ok(file) = AlgebraFile::from_toml_str(&s) {
            if let Ok(alg) = file.to_algebra() {
                valid += file.to_flag(&alg).is_ok() as usize;
            }
        }
    }
    assert_eq!(valid, 5);
}

#[test]
fn report_seeds() {
    let mut valid = 0;
    for s in seeds("report_json") {
        if let Ok(doc) = report_from_json(&s) {
            assert_eq!(report_to_json(&doc), s);
            valid += 1;
        }
    }
    assert_eq!(valid, 2);
}
