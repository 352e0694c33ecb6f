//! Fusion of homogeneous tails for sets whose membership depends on the first
//! few elements through residues.

use std::fmt::Write;

use idealab::vitali::{self, TableHomogenizer, TableSet};

pub fn run_example() -> idealab::Result<String> {
    let mut out = String::new();
    let sets = vec![
        // x(0) even
        TableSet { depth: 1, modulus: 2, table: vec![1, 0] },
        // x(0) + x(1) divisible by 3
        TableSet { depth: 2, modulus: 3, table: (0..9).map(|i| ((i / 3 + i % 3) % 3 == 0) as u8).collect() },
    ];
    let h = TableHomogenizer::new(sets)?;
    let t = vitali::fuse(&h, 2, 4)?;
    writeln!(out, "fused sequence c = {:?}", t.c).unwrap();
    for r in &t.rounds {
        writeln!(out, "round {}: B = {:?}, next domain {}", r.k, r.before, serde_json::to_string(&r.domain).expect("serializable")).unwrap();
    }
    writeln!(out, "{} homogenizer calls", t.calls.len()).unwrap();
    let err = vitali::fuse(&h, 2, 21).unwrap_err();
    writeln!(out, "too many rounds: {err} (exit {})", err.exit_code()).unwrap();
    Ok(out)
}

#[allow(dead_code)]
fn main() -> idealab::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
