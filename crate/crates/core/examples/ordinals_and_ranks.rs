//! Ordinal notations, paths through `S_alpha`, and ranks of finite tree sets.

use std::fmt::Write;

use idealab::ordinal::Ordinal;
use idealab::tree::{fmt_seq, s_alpha_contains, ExplicitTreeSet};

pub fn run_example() -> idealab::Result<String> {
    let mut out = String::new();
    let alpha: Ordinal = "w^2+w*3+1".parse()?;
    writeln!(out, "alpha = {alpha}; limit? {}", alpha.is_limit()).unwrap();
    let beta: Ordinal = "w^2+w*3".parse()?;
    let fs: Vec<String> = (0..4).map(|n| beta.fund_seq(n).map(|o| o.to_string())).collect::<Result<_, _>>()?;
    writeln!(out, "({beta})[n] for n < 4: {}", fs.join(", ")).unwrap();

    let w: Ordinal = "w".parse()?;
    for s in [vec![2, 0, 1, 0], vec![2, 0, 1], vec![0, 5]] {
        writeln!(out, "{} in S_w: {}", fmt_seq(&s), s_alpha_contains(&w, &s)).unwrap();
    }
    writeln!(out, "gamma(w, <3>) = {}", w.path(&[3])?).unwrap();

    let x = ExplicitTreeSet::new(w.clone(), vec![vec![0, 0], vec![2, 0, 1, 0], vec![2, 1, 0, 0]])?;
    for s in x.initial_tree() {
        writeln!(out, "rank {} = {}", fmt_seq(&s), x.rank(&s)?).unwrap();
    }
    writeln!(out, "tree rank {}", x.tree_rank()).unwrap();
    Ok(out)
}

#[allow(dead_code)]
fn main() -> idealab::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
