//! Seeded random `TreeDesc`s, the fixture corpus for the membership tests.
//!
//! `cargo run --example tree_corpus -- [per-alpha] [seed] > corpus.json`

use idealab::ordinal::Ordinal;
use idealab::tree::{fin_member, TreeDesc};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const ALPHAS: [&str; 6] = ["1", "2", "3", "w", "w+1", "w*2"];

#[derive(Serialize)]
pub struct Entry {
    pub alpha: Ordinal,
    pub depth: usize,
    pub member: bool,
    pub desc: TreeDesc,
}

pub fn corpus(per_alpha: usize, seed: u64) -> idealab::Result<Vec<Entry>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for a in ALPHAS {
        let alpha: Ordinal = a.parse()?;
        for i in 0..per_alpha {
            let desc = TreeDesc::random(&mut rng, &alpha, 1 + i % 3);
            let member = fin_member(&alpha, &desc)?;
            out.push(Entry { alpha: alpha.clone(), depth: desc.depth(), member, desc });
        }
    }
    Ok(out)
}

pub fn run_example() -> idealab::Result<String> {
    let c = corpus(2, 7)?;
    let members = c.iter().filter(|e| e.member).count();
    Ok(format!("{} descriptions, {members} in Fin^alpha\n", c.len()))
}

#[allow(dead_code)]
fn main() -> idealab::Result<()> {
    let mut args = std::env::args().skip(1);
    let per_alpha = args.next().map_or(Ok(40), |a| a.parse()).expect("per-alpha count");
    let seed = args.next().map_or(Ok(7), |a| a.parse()).expect("seed");
    let c = corpus(per_alpha, seed)?;
    println!("{}", serde_json::to_string_pretty(&c).expect("serializable"));
    Ok(())
}
