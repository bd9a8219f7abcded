//! Acceptance suite: one line per criterion. The process fails on any
//! failing check except the known mismatch listed in `KNOWN_FAILURES`.

use flatcover::reproduce;

/// Checks that fail against the published values and are left failing.
const KNOWN_FAILURES: &[(u8, &str)] = &[(2, "D(h) in direction (1, 0)")];

fn main() {
    let verbose = std::env::var_os("ACCEPTANCE_VERBOSE").is_some();
    let results = reproduce::all();
    let mut unexpected = Vec::new();
    for r in &results {
        println!("{}", r.line());
        for c in r.checks.iter().filter(|c| verbose && c.passed) {
            println!("    ok {}: {}", c.name, c.detail);
        }
        for c in r.checks.iter().filter(|c| !c.passed) {
            println!("    {}: {}", c.name, c.detail);
            if !KNOWN_FAILURES.iter().any(|(id, name)| *id == r.id && c.name.starts_with(name)) {
                unexpected.push(format!("criterion {}: {}", r.id, c.name));
            }
        }
    }
    let passed = results.iter().filter(|r| r.passed).count();
    println!("{passed}/{} criteria pass", results.len());
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {}", unexpected.join(", "));
        std::process::exit(1);
    }
}
