use std::io::Write;

use interpnorm::acceptance::{known_unattainable, run_all, KNOWN_UNATTAINABLE};

// Written to the stdout handle directly so the lines survive libtest capture.
fn emit(line: String) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").unwrap();
}

#[test]
fn acceptance() {
    let results = run_all();
    assert_eq!(results.len(), 11);
    let mut unexpected = Vec::new();
    for c in &results {
        emit(c.summary());
        for check in c.checks.iter().filter(|k| !k.passed) {
            match known_unattainable(c.id, check) {
                Some(why) => emit(format!("    known unattainable: {} ({why})", check.name)),
                None => unexpected.push(format!("criterion {}: {} ({})", c.id, check.name, check.detail)),
            }
        }
    }
    for (id, name, _) in KNOWN_UNATTAINABLE {
        let c = &results[*id as usize - 1];
        assert!(c.checks.iter().any(|k| k.name == *name), "criterion {id} has no check named {name}");
    }
    assert!(unexpected.is_empty(), "{unexpected:#?}");
}
