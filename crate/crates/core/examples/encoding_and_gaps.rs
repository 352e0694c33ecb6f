//! Binary encodings of sets, periodicity, and a set with ever-growing gaps.

use std::fmt::Write;
use std::sync::Arc;

use idealab::sets::{Enumerate, Source, StreamSet, UPSet};
use idealab::vitali;

pub fn run_example() -> idealab::Result<String> {
    let mut out = String::new();
    let evens = StreamSet::evens();
    let e = vitali::encode(&evens, 16)?;
    writeln!(out, "e(evens) ~ {e} = {} (limit 2/3)", e.value()).unwrap();
    let x = UPSet::from_bits(&[1, 1, 0], &[0, 1, 1])?;
    writeln!(out, "e({x:?}) = {}", vitali::upset_value(&x)).unwrap();

    let nat: Source = Arc::new(StreamSet::naturals());
    let gaps = vitali::gap_construction(nat, 1 << 20);
    let w = gaps.witness.prefix(8)?;
    writeln!(out, "witness {w:?}; y starts {:?}", gaps.y.prefix(8)?).unwrap();
    let verdict = vitali::rationality(&*gaps.witness, 20, 20, 400)?;
    writeln!(out, "witness rational at this horizon? {}", verdict.is_rational()).unwrap();

    let a: Source = Arc::new(StreamSet::odds());
    let b: Source = Arc::new(StreamSet::arithmetic(3, 2));
    let d = vitali::rational_difference(&*a, &*b, 200)?;
    writeln!(out, "e(odds) - e(odds above 1): {}", serde_json::to_string(&d).expect("serializable")).unwrap();

    // a stub that reads only the first element cannot respect rational differences
    let f = |x: &dyn Enumerate| -> idealab::Result<u64> { Ok(x.get(0)?.unwrap_or(0) % 2) };
    let r = vitali::splice_test(&f, Arc::new(StreamSet::odds()), Arc::new(StreamSet::evens()), 1, 200)?;
    writeln!(out, "splice z = {:?}..., refuted: {}", &r.z_prefix[..4], r.refuted).unwrap();
    Ok(out)
}

#[allow(dead_code)]
fn main() -> idealab::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
