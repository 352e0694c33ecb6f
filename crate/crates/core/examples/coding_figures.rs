//! The three coding maps on small inputs, with block provenance.

use std::fmt::Write;
use std::sync::Arc;

use idealab::coding::{self, FinFamily, MadFamily};
use idealab::ed::spiral_delta_family;
use idealab::ordinal::Ordinal;
use idealab::sets::{Prefix, Source, StreamSet};
use idealab::tree::fmt_seq;

pub fn run_example() -> idealab::Result<String> {
    let mut out = String::new();
    let mad = MadFamily::spiral();
    let x = Prefix(vec![0, 2, 3, 4, 5, 6]);
    out.push_str(&coding::render_mad(&coding::phi_mad_blocks(&mad, &x, 2)?));

    let ed = spiral_delta_family();
    let x = Prefix(vec![0, 2, 5, 7, 8, 10, 11]);
    out.push_str(&coding::render_ed(&coding::phi_ed_blocks(&ed, &x, 2)?));

    let fin = FinFamily::spiral_full(&Ordinal::omega());
    let nat: Source = Arc::new(StreamSet::naturals());
    let recs = coding::phi_fin_records(&fin, nat.clone(), 1, 3, 2)?;
    for r in recs.iter().take(4) {
        writeln!(out, "block {} root {} index {} -> {}", r.block, r.root, fmt_seq(&r.t), fmt_seq(&r.element)).unwrap();
    }
    // membership reads only a finite part of x
    let p = coding::phi_mad_block(&mad, &*nat, 3)?.value;
    let (member, reads) = coding::phi_mad_member(&mad, nat, p)?;
    writeln!(out, "{p} in Phi(N): {member}, decided after reading {reads} entries").unwrap();
    Ok(out)
}

#[allow(dead_code)]
fn main() -> idealab::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
