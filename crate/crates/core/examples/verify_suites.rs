//! The property suites and the command line, driven in-process.

use std::fmt::Write;

use idealab::cli;
use idealab::verify;

pub fn run_example() -> idealab::Result<String> {
    let mut out = String::new();
    for r in verify::run_all(0)? {
        let cases: u64 = r.checks.iter().map(|c| c.checked).sum();
        writeln!(out, "{:<15} {} ({cases} cases)", r.suite, if r.passed { "pass" } else { "FAIL" }).unwrap();
    }
    let (code, stdout, _) = cli::run_captured(&["pi", "2,0,1"]);
    writeln!(out, "idealab pi 2,0,1 -> exit {code}: {}", String::from_utf8_lossy(&stdout).replace('\n', " ")).unwrap();
    let (code, _, stderr) = cli::run_captured(&["verify", "no-such-suite"]);
    writeln!(out, "unknown suite -> exit {code}: {}", String::from_utf8_lossy(&stderr).trim()).unwrap();
    Ok(out)
}

#[allow(dead_code)]
fn main() -> idealab::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
