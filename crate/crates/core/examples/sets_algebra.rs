//! Eventually periodic sets and lazily enumerated ones.

use std::fmt::Write;

use idealab::sets::{relative_embed, Source, StreamSet, UPSet};
use std::sync::Arc;

pub fn run_example() -> idealab::Result<String> {
    let mut out = String::new();
    let evens = UPSet::residue(0, 2);
    let thirds = UPSet::residue(0, 3);
    let both = evens.intersect(&thirds);
    writeln!(out, "evens & multiples of 3 = {both:?}, first {:?}", both.elements_below(30)).unwrap();
    let odd_tail = evens.complement().diff(&UPSet::finite(&[1, 3]));
    writeln!(out, "odds without 1,3: {:?}", odd_tail.elements_below(12)).unwrap();
    writeln!(out, "finite? {} cofinite? {}", UPSet::finite(&[4, 9]).is_finite(), evens.complement().union(&evens).is_cofinite()).unwrap();

    let tri: Source = Arc::new(StreamSet::triangular());
    let pow: Source = Arc::new(StreamSet::powers(2));
    // the triangular numbers at power-of-two positions
    let z = relative_embed(tri.clone(), pow);
    writeln!(out, "triangular: {:?}", tri.prefix(8)?).unwrap();
    writeln!(out, "at 2^k: {:?}", z.prefix(6)?).unwrap();
    writeln!(out, "36 triangular? {}; successor of 36: {:?}", tri.contains(36)?, tri.successor(Some(36))?).unwrap();
    let desc = serde_json::to_string(&both).expect("serializable");
    writeln!(out, "as JSON: {desc}").unwrap();
    Ok(out)
}

#[allow(dead_code)]
fn main() -> idealab::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
