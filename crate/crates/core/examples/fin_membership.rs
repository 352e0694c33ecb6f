//! Deciding membership in the iterated Frechet ideals from finite descriptions.

use std::fmt::Write;

use idealab::ordinal::Ordinal;
use idealab::tree::{fin_member, TreeDesc};

pub fn run_example() -> idealab::Result<String> {
    let mut out = String::new();
    let cases = [
        ("2", r#"{"explicit":[[0,1],[4,4]]}"#),
        ("2", r#"{"node":{"tail":"full"}}"#),
        ("2", r#"{"node":{"exceptional":{"3":{"node":{"tail":"full"}}},"tail":"empty"}}"#),
        ("2", r#"{"node":{"tail":{"periodic":[{"explicit":[[0],[1]]}]}}}"#),
        ("w", r#"{"node":{"tail":{"periodic":[{"node":{"tail":"empty"}},{"node":{"tail":"full"}}]}}}"#),
        ("w+1", r#"{"node":{"tail":{"periodic":[{"node":{"tail":{"periodic":[{"explicit":[]}]}}}]}}}"#),
    ];
    for (a, text) in cases {
        let alpha: Ordinal = a.parse()?;
        let desc: TreeDesc = serde_json::from_str(text).expect("valid description");
        writeln!(out, "Fin^{alpha} contains {text}: {}", fin_member(&alpha, &desc)?).unwrap();
    }
    // a sequence outside S_2 is rejected, not silently ignored
    let bad: TreeDesc = serde_json::from_str(r#"{"explicit":[[0]]}"#).expect("valid JSON");
    let err = fin_member(&Ordinal::nat(2), &bad).unwrap_err();
    writeln!(out, "malformed: {err} (exit {})", err.exit_code()).unwrap();
    Ok(out)
}

#[allow(dead_code)]
fn main() -> idealab::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
