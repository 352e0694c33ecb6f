//! Ideals built from an independent family and an open pair, and a one-point
//! split that flips membership.

use std::fmt::Write;

use idealab::mid::{self, IdealPredicate, IndepFamilySample, OpenPair, Side};
use idealab::sets::UPSet;

pub fn run_example() -> idealab::Result<String> {
    let mut out = String::new();
    let members = mid::binary_digit_family(4);
    let report = mid::independent_check(&members)?;
    writeln!(out, "independent: {} ({} pairs)", report.independent(), report.pairs_checked).unwrap();
    let sample = IndepFamilySample::certify(members)?;
    let pair = OpenPair { u: vec![vec![1], vec![2]], v: vec![vec![4], vec![8]], depth: 1 };

    let x = UPSet::residue(3, 16);
    let f = mid::fi_uv_member(&x, &pair, &sample, Side::F)?;
    let i = mid::fi_uv_member(&x, &pair, &sample, Side::I)?;
    writeln!(out, "{x:?}: in F? {} in I? {} witness {:?}", f.member, i.member, f.witness).unwrap();

    let probes = mid::probes(1, 40, &pair, &sample);
    let suite = mid::ideal_axiom_suite(&pair, &sample, &probes)?;
    for c in &suite.checks {
        writeln!(out, "  {}: {} over {} cases", c.name, c.passed, c.checked).unwrap();
    }

    let evens = UPSet::residue(0, 2);
    let ideal = IdealPredicate::GeneratedBy { generators: vec![evens.clone()] };
    let (x1, x2, r) = mid::e_split_witness(&UPSet::naturals(), &evens, &ideal)?;
    writeln!(out, "x1 = {:?}, x2 = {:?}", x1.elements_below(12), x2.elements_below(12)).unwrap();
    writeln!(out, "x1 in E: {}, x2 in E: {}", r.x1_in_e, r.x2_in_e).unwrap();
    Ok(out)
}

#[allow(dead_code)]
fn main() -> idealab::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
