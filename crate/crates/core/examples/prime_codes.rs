//! Prime-power codes and the ranking bijection on sequences of length at least 2.

use std::fmt::Write;

use idealab::seqcode::{pi, pi_at_least, pi_inverse, prime_code};
use idealab::tree::fmt_seq;

pub fn run_example() -> idealab::Result<String> {
    let mut out = String::new();
    for k in 0..8 {
        let s = pi_inverse(k)?;
        writeln!(out, "pi^-1({k}) = {} with code {}", fmt_seq(&s), prime_code(&s)?).unwrap();
    }
    let s = [3, 1, 4, 1];
    writeln!(out, "pi({}) = {}", fmt_seq(&s), pi(&s)?).unwrap();
    writeln!(out, "pi(<7>) = {} (length one)", pi(&[7])?).unwrap();
    writeln!(out, "500 <= pi(<500,0>): {}", pi_at_least(&[500, 0], 500)?).unwrap();
    let err = pi_inverse(u64::MAX).unwrap_err();
    writeln!(out, "far ranks: {err} (exit {})", err.exit_code()).unwrap();
    Ok(out)
}

#[allow(dead_code)]
fn main() -> idealab::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
