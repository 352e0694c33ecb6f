//! Named property suites, one per module, with machine-readable reports.
//!
//! A suite fails by reporting a counterexample, never by panicking. Horizon
//! errors still propagate: they mean a budget was too small, not that a law failed.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coding::{
    phi_ed_block, phi_ed_member, phi_fin_member, phi_fin_records, phi_mad_block, phi_mad_member, FinFamily, MadFamily,
};
use crate::constructions::{self as cons, synthetic};
use crate::ed::{plusplus_refine, spiral_delta_family, GridSet, WidthRule};
use crate::error::{Error, Result};
use crate::mid;
use crate::ordinal::Ordinal;
use crate::seqcode::{pi, pi_at_least, pi_inverse};
use crate::sets::{Source, StreamSet, UPSet};
use crate::tree::{fin_member, s_alpha_contains, ExplicitTreeSet, Seq, Tail, TreeDesc};
use crate::vitali;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub checked: u64,
    pub passed: bool,
    pub counterexample: Option<String>,
}

impl Check {
    pub fn new(name: &str) -> Self {
        Check { name: name.into(), checked: 0, passed: true, counterexample: None }
    }

    /// Count one case; the first failure is kept as the counterexample.
    pub fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.passed {
            self.passed = false;
            self.counterexample = Some(what());
        }
    }

    /// Like [`record`](Self::record), with violations and failed preconditions
    /// counted as failures. Other errors propagate.
    pub fn record_result(&mut self, r: Result<bool>, what: impl FnOnce() -> String) -> Result<()> {
        match r {
            Ok(ok) => self.record(ok, what),
            Err(e @ (Error::Violation { .. } | Error::Precondition(_))) => self.record(false, || format!("{}: {e}", what())),
            Err(e) => return Err(e),
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteResult {
    fn new(suite: &str, checks: Vec<Check>) -> Self {
        SuiteResult { suite: suite.into(), passed: checks.iter().all(|c| c.passed), checks }
    }
}

pub const SUITES: [&str; 11] = [
    "sets",
    "ordinals",
    "s-alpha",
    "fin-member",
    "pi-monotone",
    "ed-plusplus",
    "phi-continuity",
    "constructions",
    "encoding",
    "fusion",
    "mid",
];

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = match name {
        "sets" => sets(&mut rng),
        "ordinals" => ordinals(),
        "s-alpha" => s_alpha(&mut rng)?,
        "fin-member" => fin(&mut rng)?,
        "pi-monotone" => pi_laws(&mut rng)?,
        "ed-plusplus" => ed_plusplus()?,
        "phi-continuity" => continuity(&mut rng)?,
        "constructions" => constructions()?,
        "encoding" => encoding()?,
        "fusion" => fusion()?,
        "mid" => mid_suite(seed)?,
        other => {
            return Err(Error::parse("suite", format!("unknown suite {other:?}; known: all, {}", SUITES.join(", "))))
        }
    };
    Ok(SuiteResult::new(name, checks))
}

pub fn run_all(seed: u64) -> Result<Vec<SuiteResult>> {
    SUITES.iter().map(|s| run_suite(s, seed)).collect()
}

fn random_upset(rng: &mut ChaCha8Rng) -> UPSet {
    let p = rng.gen_range(0..10);
    let l = rng.gen_range(1..10);
    let pre = (0..p).map(|_| rng.gen_bool(0.5)).collect();
    let per = (0..l).map(|_| rng.gen_bool(0.5)).collect();
    UPSet::new(pre, per).expect("nonempty period")
}

fn sets(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut ops = Check::new("boolean-ops-pointwise");
    let mut index = Check::new("nth-count-consistent");
    let mut intervals = Check::new("interval-union-parity");
    for _ in 0..200 {
        let (a, b) = (random_upset(rng), random_upset(rng));
        let (u, i, d) = (a.union(&b), a.intersect(&b), a.diff(&b));
        for n in 0..2 * (a.window() + b.window()) {
            let (x, y) = (a.contains(n), b.contains(n));
            let ok = u.contains(n) == (x || y) && i.contains(n) == (x && y) && d.contains(n) == (x && !y);
            ops.record(ok, || format!("{a:?} {b:?} at {n}"));
            if x {
                index.record(a.nth(a.count_below(n)) == Some(n), || format!("{a:?} at {n}"));
            }
            intervals.record(a.interval_union().contains(n) == (a.count_below(n + 1) % 2 == 1), || format!("{a:?} at {n}"));
        }
    }
    vec![ops, index, intervals]
}

fn ordinals() -> Vec<Check> {
    let texts = ["0", "1", "7", "w", "w+1", "w*2", "w*2+3", "w^2", "w^2*3+w+1", "w^w", "w^(w+1)*2+w^3+5", "w^(w^w)"];
    let mut round = Check::new("text-round-trip");
    let mut fund = Check::new("fundamental-sequence-below");
    for t in texts {
        let parsed = t.parse::<Ordinal>();
        round.record(parsed.as_ref().is_ok_and(|o| o.to_string() == t), || t.to_string());
        let Ok(a) = parsed else { continue };
        if a.is_zero() {
            continue;
        }
        let mut prev: Option<Ordinal> = None;
        for n in 0..6 {
            let f = a.fund_seq(n).expect("nonzero");
            let increasing = a.is_successor() || prev.as_ref().is_none_or(|p| *p < f);
            fund.record(f < a && increasing, || format!("{t}[{n}] = {f}"));
            prev = Some(f);
        }
    }
    vec![round, fund]
}

fn test_alphas() -> Vec<Ordinal> {
    ["1", "2", "3", "w", "w+1", "w*2"].iter().map(|t| t.parse().expect("valid")).collect()
}

// every element of S_alpha with entries below `cap`
fn enumerate_s_alpha(alpha: &Ordinal, cap: u64) -> BTreeSet<Seq> {
    fn go(g: &Ordinal, cap: u64, s: &mut Seq, out: &mut BTreeSet<Seq>) {
        if g.is_zero() {
            out.insert(s.clone());
            return;
        }
        for n in 0..cap {
            s.push(n);
            go(&g.fund_seq(n).expect("nonzero"), cap, s, out);
            s.pop();
        }
    }
    let mut out = BTreeSet::new();
    go(alpha, cap, &mut vec![], &mut out);
    out
}

fn naive_rank(x: &BTreeSet<Seq>, s: &Seq) -> u64 {
    if x.contains(s) {
        return 0;
    }
    let mut best = 0;
    for t in x.iter().filter(|t| t.len() > s.len() && t.starts_with(s)) {
        let mut c = s.clone();
        c.push(t[s.len()]);
        best = best.max(naive_rank(x, &c) + 1);
    }
    best
}

fn s_alpha(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let mut contains = Check::new("s-alpha-membership");
    let mut ranks = Check::new("rank-recursion");
    for alpha in test_alphas() {
        let all = enumerate_s_alpha(&alpha, 4);
        for _ in 0..300 {
            let len = rng.gen_range(0..5);
            let s: Seq = (0..len).map(|_| rng.gen_range(0..4)).collect();
            contains.record(s_alpha_contains(&alpha, &s) == all.contains(&s), || format!("{alpha} {s:?}"));
        }
        let pool: Vec<&Seq> = all.iter().collect();
        for _ in 0..20 {
            // random antichain: keep picks that are not comparable with earlier ones
            let mut pick: Vec<Seq> = Vec::new();
            for _ in 0..rng.gen_range(1..12) {
                let s = pool[rng.gen_range(0..pool.len())].clone();
                if pick.iter().all(|t| !t.starts_with(&s) && !s.starts_with(t)) {
                    pick.push(s);
                }
            }
            let x = ExplicitTreeSet::new(alpha.clone(), pick.clone())?;
            let set: BTreeSet<Seq> = pick.into_iter().collect();
            for s in x.initial_tree() {
                ranks.record(x.rank(&s)? == naive_rank(&set, &s), || format!("{alpha} {set:?} at {s:?}"));
            }
        }
    }
    Ok(vec![contains, ranks])
}

fn fin(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let mut full = Check::new("full-tail-is-positive");
    let mut empty = Check::new("finitely-many-small-children-are-small");
    for alpha in test_alphas().into_iter().filter(|a| *a > Ordinal::nat(1)) {
        for _ in 0..40 {
            let TreeDesc::Node { exceptional, .. } = TreeDesc::random(rng, &alpha, 3) else { continue };
            let with = |tail| TreeDesc::Node { exceptional: exceptional.clone(), tail };
            full.record_result(fin_member(&alpha, &with(Tail::Full)).map(|m| !m), || format!("{alpha} {exceptional:?}"))?;
            let small = exceptional.iter().all(|(&n, c)| fin_member(&alpha.fund_seq(n).expect("nonzero"), c).unwrap_or(false));
            if small {
                empty.record_result(fin_member(&alpha, &with(Tail::Empty)), || format!("{alpha} {exceptional:?}"))?;
            }
        }
    }
    Ok(vec![full, empty])
}

fn pi_laws(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let n = 2000;
    let mut bij = Check::new("bijective-on-initial-segment");
    for k in 0..n {
        let s = pi_inverse(k)?;
        bij.record(pi(&s)? == k as i64, || format!("pi(pi_inverse({k})) for {s:?}"));
    }
    let mut prefix = Check::new("strict-prefix-increases");
    let mut coord = Check::new("coordinatewise-increases");
    for _ in 0..2000 {
        let len = rng.gen_range(2..5);
        let s: Seq = (0..len).map(|_| rng.gen_range(0..4)).collect();
        let mut t = s.clone();
        t.extend((0..rng.gen_range(1..3)).map(|_| rng.gen_range(0..4)));
        prefix.record(pi(&s)? < pi(&t)?, || format!("{s:?} < {t:?}"));
        let mut u = s.clone();
        let i = rng.gen_range(0..len);
        u[i] += rng.gen_range(1..3);
        coord.record(pi(&s)? < pi(&u)?, || format!("{s:?} < {u:?}"));
    }
    let mut diag = Check::new("n-below-pi-n-0");
    for k in 0..200 {
        diag.record(pi_at_least(&[k, 0], k)?, || format!("n = {k}"));
    }
    Ok(vec![bij, prefix, coord, diag])
}

fn ed_plusplus() -> Result<Vec<Check>> {
    let mut fam = Check::new("spiral-delta-members-plusplus");
    let f = spiral_delta_family();
    for n in 0..5 {
        fam.record_result(f.get(n)?.check_plusplus(50).map(|_| true), || format!("A_{n}"))?;
    }
    let mut refine = Check::new("refinement-plusplus");
    for g in [GridSet::full(), GridSet::delta(), GridSet::width_fn(WidthRule::CeilHalf)] {
        let r = plusplus_refine(&g, 1 << 12);
        refine.record_result(r.check_plusplus(50).map(|_| true), || g.name().to_string())?;
    }
    Ok(vec![fam, refine])
}

/// `3k + jitter(k)`, strictly increasing; `salt` picks the jitter.
pub fn jittered(salt: u64) -> StreamSet {
    StreamSet::from_fn(format!("jittered({salt})"), move |k| {
        let h = k.wrapping_add(salt).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 61;
        k.checked_mul(3)?.checked_add(h % 3)
    })
}

/// `x` up to index `n`, then a differently jittered tail.
pub fn mutate_after(x: Source, n: u64, salt: u64) -> Source {
    let tail = jittered(salt);
    Arc::new(StreamSet::from_fn(format!("mutated({n},{salt})"), move |k| {
        if k < n {
            x.get(k).ok().flatten()
        } else {
            tail.at(k)
        }
    }))
}

fn continuity(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let mut mad = Check::new("phi-mad-modulus");
    let mut ed = Check::new("phi-ed-modulus");
    let mut fin = Check::new("phi-fin-modulus");
    let mfam = MadFamily::spiral();
    let efam = spiral_delta_family();
    let ffam = FinFamily::spiral_full(&Ordinal::nat(2));
    let mut hits = Check::new("members-found");
    for i in 0..100 {
        let x: Source = Arc::new(jittered(rng.gen()));
        let salt = rng.gen();
        // every other probe is a genuine element of Phi(x)
        let genuine = i % 2 == 0;
        let p = if genuine { phi_mad_block(&mfam, &*x, rng.gen_range(0..4))?.value } else { rng.gen_range(0..200) };
        let (v, n) = phi_mad_member(&mfam, x.clone(), p)?;
        let (w, _) = phi_mad_member(&mfam, mutate_after(x.clone(), n, salt), p)?;
        mad.record(v == w, || format!("p = {p}, modulus {n}"));
        hits.record(v || !genuine, || format!("mad {p}"));

        let (a, b) = if genuine {
            let blk = phi_ed_block(&efam, &*x, rng.gen_range(0..4))?;
            blk.points[rng.gen_range(0..blk.points.len())]
        } else {
            (rng.gen_range(0..60), rng.gen_range(0..8))
        };
        let (v, n) = phi_ed_member(&efam, x.clone(), a, b)?;
        let (w, _) = phi_ed_member(&efam, mutate_after(x.clone(), n, salt), a, b)?;
        ed.record(v == w, || format!("({a},{b}), modulus {n}"));
        hits.record(v || !genuine, || format!("ed ({a},{b})"));

        let p: Seq = if genuine {
            let recs = phi_fin_records(&ffam, x.clone(), 2, 2, 2)?;
            recs[rng.gen_range(0..recs.len())].element.clone()
        } else {
            (0..rng.gen_range(1..4)).map(|_| rng.gen_range(0..40)).collect()
        };
        let (v, n) = phi_fin_member(&ffam, x.clone(), &p)?;
        let (w, _) = phi_fin_member(&ffam, mutate_after(x, n, salt), &p)?;
        fin.record(v == w, || format!("{p:?}, modulus {n}"));
        hits.record(v || !genuine, || format!("fin {p:?}"));
    }
    Ok(vec![mad, ed, fin, hits])
}

fn constructions() -> Result<Vec<Check>> {
    let nat: Source = Arc::new(StreamSet::naturals());
    let budget = 1 << 16;

    let mfam = MadFamily::spiral();
    let mut mad_hide = Check::new("mad-hide-inside");
    let a = synthetic::mad_blocks(&mfam, nat.clone(), synthetic::even());
    let c = cons::mad_hide(&mfam, nat.clone(), a.clone(), budget);
    for r in cons::audit_mad(&mfam, &*c.y(), &a, 20)? {
        mad_hide.record(r.all_inside(), || format!("{r:?}"));
    }
    let mut mad_split = Check::new("mad-split-parity");
    let a = synthetic::mad_blocks(&mfam, nat.clone(), synthetic::all());
    let bound = synthetic::mad_bounds(&mfam, nat.clone(), synthetic::all());
    let c = cons::mad_split(&mfam, nat.clone(), a.clone(), bound, budget);
    for r in cons::audit_mad(&mfam, &*c.y(), &a, 20)? {
        mad_split.record(r.inside == r.block % 2, || format!("{r:?}"));
    }

    let efam = spiral_delta_family();
    let mut ed_hide = Check::new("ed-hide-inside");
    let a = synthetic::ed_columns(&efam, nat.clone(), synthetic::even());
    let c = cons::ed_hide(&efam, nat.clone(), a.clone(), budget);
    for r in cons::audit_ed(&efam, &*c.y(), &a, 8)? {
        ed_hide.record(r.all_inside() && r.checked == r.block + 1, || format!("{r:?}"));
    }
    let mut ed_split = Check::new("ed-split-parity");
    let a = synthetic::ed_columns(&efam, nat.clone(), synthetic::all());
    let hide = cons::ed_hide(&efam, nat.clone(), a.clone(), budget);
    let c = cons::ed_split(&efam, hide.y(), a.clone(), synthetic::ed_bounds(nat.clone(), synthetic::all()), 1 << 20);
    for r in cons::audit_ed(&efam, &*c.y(), &a, 8)? {
        let ok = if r.block % 2 == 0 { r.all_inside() } else { r.all_outside() };
        ed_split.record(ok && r.checked == r.block + 1, || format!("{r:?}"));
    }

    let ffam = FinFamily::spiral_full(&Ordinal::nat(2));
    let mut fin_hide = Check::new("fin-hide-inside");
    let b = crate::coding::phi_fin(&ffam, nat.clone())?;
    let c = cons::fin_hide(&ffam, nat.clone(), b.clone(), budget);
    for r in cons::audit_fin(&ffam, c.y(), &|s| b.in_tree(s), 4, 3, 2)? {
        fin_hide.record(r.all_inside(), || format!("{r:?}"));
    }
    let mut fin_split = Check::new("fin-split-parity");
    let b = synthetic::fin_blocks(&ffam, nat.clone(), synthetic::even())?;
    let small = synthetic::fin_small(&ffam, nat.clone(), b.clone(), synthetic::even());
    let target = synthetic::fin_target(&ffam, nat.clone(), b.clone(), synthetic::even());
    let c = cons::fin_split(&ffam, nat, b, small, budget);
    for r in cons::audit_fin(&ffam, c.y(), &target, 6, 2, 2)? {
        let ok = if r.block % 2 == 0 { r.all_inside() } else { r.all_outside() };
        fin_split.record(ok, || format!("{r:?}"));
    }
    Ok(vec![mad_hide, mad_split, ed_hide, ed_split, fin_hide, fin_split])
}

fn encoding() -> Result<Vec<Check>> {
    let mut bits = Check::new("digit-is-membership");
    let sets: Vec<Source> = vec![
        Arc::new(StreamSet::evens()),
        Arc::new(StreamSet::triangular()),
        Arc::new(StreamSet::powers(2)),
        Arc::new(UPSet::from_window(3, 5, |n| n % 5 == 1 || n == 0)),
    ];
    for x in &sets {
        let e = vitali::encode(&**x, 300)?;
        for j in 0..300 {
            bits.record(e.bits[j as usize] == x.contains(j)?, || format!("digit {j}"));
        }
    }
    let mut closed = Check::new("closed-form-matches-partial-sums");
    for (x, want) in [(UPSet::residue(0, 2), BigRational::new(2.into(), 3.into())), (UPSet::naturals(), BigRational::one())] {
        let got = vitali::upset_value(&x);
        let part = vitali::encode(&x, 200)?.value();
        closed.record(got == want && &got - &part <= vitali::dyadic(200) && part <= got, || format!("{x:?}"));
    }
    let mut gaps = Check::new("witness-gaps-increase");
    let mut aperiodic = Check::new("witness-not-periodic");
    for h in [Arc::new(StreamSet::naturals()) as Source, Arc::new(StreamSet::evens())] {
        let g = vitali::gap_construction(h, 1 << 20);
        let w = g.witness.prefix(200)?;
        let d: Vec<u64> = w.windows(2).map(|p| p[1] - p[0]).collect();
        gaps.record(d.windows(2).all(|p| p[0] < p[1]), || format!("{w:?}"));
        let r = vitali::rationality(&*g.witness, 30, 30, 3000)?;
        aperiodic.record(!r.is_rational(), || format!("{r:?}"));
    }
    Ok(vec![bits, closed, gaps, aperiodic])
}

fn fusion() -> Result<Vec<Check>> {
    let parity = vitali::TableSet { depth: 1, modulus: 2, table: vec![1, 0] };
    let pairs = vitali::TableSet { depth: 2, modulus: 3, table: (0..9).map(|i| (i % 4 == 1) as u8).collect() };
    let h = vitali::TableHomogenizer::new(vec![parity.clone(), pairs.clone(), parity])?;
    let t = vitali::fuse(&h, 3, 3)?;
    let mut calls = Check::new("call-count");
    calls.record(t.calls.len() == 7 && t.failure.is_none(), || format!("{} calls", t.calls.len()));
    let mut growth = Check::new("b-grows-a-shrinks");
    let mut homog = Check::new("stems-homogeneous");
    let mut a_prev = UPSet::naturals();
    for r in &t.rounds {
        let a = r.domain.to_upset()?;
        let top = r.before.last().map_or(0, |&m| m + 1);
        let cut = a_prev.diff(&UPSet::from_window(top, 1, |n| n < top));
        growth.record(a.is_subset(&cut) && a.nth(0) == Some(r.chosen), || format!("round {}", r.k));
        let set = &h.sets[r.k as usize];
        let elems = a.elements_below(a.window() + 40);
        for mask in 0u32..1 << r.before.len() {
            let b: Vec<u64> = r.before.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
            let mut colors = BTreeSet::new();
            for i in 0..elems.len().min(6) {
                for j in i + 1..elems.len().min(8) {
                    let mut x = b.clone();
                    x.extend([elems[i], elems[j]]);
                    colors.insert(set.contains_prefix(&x)?);
                }
            }
            homog.record(colors.len() <= 1, || format!("round {} stem {b:?}", r.k));
        }
        a_prev = a;
    }
    Ok(vec![calls, growth, homog])
}

fn mid_suite(seed: u64) -> Result<Vec<Check>> {
    let sample = mid::IndepFamilySample::certify(mid::binary_digit_family(4))?;
    let pair = mid::OpenPair { u: vec![vec![1], vec![2]], v: vec![vec![4], vec![8]], depth: 1 };
    let probes = mid::probes(seed, 100, &pair, &sample);
    let mut checks = mid::ideal_axiom_suite(&pair, &sample, &probes)?.checks;
    let mut split = Check::new("e-split-opposite-verdicts");
    let ideal = mid::IdealPredicate::GeneratedBy { generators: vec![UPSet::residue(0, 2)] };
    let (x1, x2, r) = mid::e_split_witness(&UPSet::naturals(), &UPSet::residue(0, 2), &ideal)?;
    split.record(r.opposite() && r.covering && x1.sym_diff(&x2).count_below(x1.window() + x2.window()) == 1, || format!("{r:?}"));
    checks.push(split);
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        for r in run_all(1).unwrap() {
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn unknown_suite_is_a_parse_error() {
        assert_eq!(run_suite("nope", 0).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn failures_are_recorded_not_raised() {
        let mut c = Check::new("x");
        c.record_result(Err(Error::violation("here", "broken")), || "case".into()).unwrap();
        assert!(!c.passed);
        assert!(c.record_result(Err(Error::horizon("out")), || "case".into()).is_err());
    }
}
