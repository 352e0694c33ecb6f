//! Hiding a coded set inside a target and splitting it across one, for the
//! almost disjoint and eventually different families.

use std::fmt::Write;
use std::sync::Arc;

use idealab::coding::MadFamily;
use idealab::constructions::{self as cons, synthetic};
use idealab::ed::spiral_delta_family;
use idealab::sets::{Source, StreamSet};

pub fn run_example() -> idealab::Result<String> {
    let mut out = String::new();
    let h: Source = Arc::new(StreamSet::naturals());
    let fam = MadFamily::spiral();

    let a = synthetic::mad_blocks(&fam, h.clone(), synthetic::even());
    let hide = cons::mad_hide(&fam, h.clone(), a.clone(), 1 << 20);
    writeln!(out, "mad hide y = {:?}", hide.prefix(10)?).unwrap();
    let audit = cons::audit_mad(&fam, &*hide.y(), &a, 6)?;
    writeln!(out, "blocks inside A: {}/{}", audit.iter().filter(|r| r.all_inside()).count(), audit.len()).unwrap();
    for step in hide.trace().iter().take(3) {
        writeln!(out, "  y({}) = {} by {} after {} candidates", step.index, step.value, step.rule, step.inspected).unwrap();
    }

    let a = synthetic::mad_blocks(&fam, h.clone(), synthetic::all());
    let bound = synthetic::mad_bounds(&fam, h.clone(), synthetic::all());
    let split = cons::mad_split(&fam, h.clone(), a.clone(), bound, 1 << 20);
    let pattern: String = cons::audit_mad(&fam, &*split.y(), &a, 10)?
        .iter()
        .map(|r| if r.all_inside() { 'I' } else { 'o' })
        .collect();
    writeln!(out, "mad split blocks: {pattern}").unwrap();

    let efam = spiral_delta_family();
    let a = synthetic::ed_columns(&efam, h.clone(), synthetic::even());
    let hide = cons::ed_hide(&efam, h, a.clone(), 1 << 20);
    for r in cons::audit_ed(&efam, &*hide.y(), &a, 4)? {
        writeln!(out, "ed block {}: {}/{} points inside", r.block, r.inside, r.checked).unwrap();
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> idealab::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
