//! Grids in N x N: certificates for the eventually different ideal, the `++`
//! refinement and the square-spiral family.

use std::fmt::Write;
use std::sync::Arc;

use idealab::ed::{self, EDCertificate, GridSet, WidthRule};
use idealab::sets::StreamSet;

pub fn run_example() -> idealab::Result<String> {
    let mut out = String::new();
    let half = GridSet::width_fn(WidthRule::CeilHalf);
    // column 2k+1 has k+1 points, so the odd columns witness positivity
    let odd = EDCertificate::Positive { witness: Arc::new(StreamSet::odds()) };
    writeln!(out, "{}: {:?}", half.name(), ed::ed_member(&half, &odd, 30)?).unwrap();
    let narrow = GridSet::width_fn(WidthRule::Const { c: 2 });
    writeln!(out, "{}: {:?}", narrow.name(), ed::ed_member(&narrow, &EDCertificate::Small { n: 2 }, 30)?).unwrap();
    let wrong = ed::ed_member(&half, &EDCertificate::Small { n: 3 }, 30).unwrap_err();
    writeln!(out, "false certificate: {wrong} (exit {})", wrong.exit_code()).unwrap();

    let refined = ed::plusplus_refine(&GridSet::full(), 1 << 12);
    refined.check_plusplus(20)?;
    for n in 0..4 {
        let m = refined.col_index(n)?;
        writeln!(out, "++ column {m}: {:?}", refined.column_unchecked(m)?.prefix(n as usize + 1)?).unwrap();
    }

    let order: Vec<(u64, u64)> = (0..9).map(ed::spiral_pair).collect();
    writeln!(out, "spiral order {order:?}").unwrap();
    let fam = ed::spiral_delta_family();
    for n in 0..3 {
        writeln!(out, "A_{n} uses columns {:?}", fam.get(n)?.dom().prefix(4)?).unwrap();
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> idealab::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
