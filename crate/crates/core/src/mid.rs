//! Boolean combinations of independent sets, the ideals `I(U,V)` and filters
//! `F(U,V)`, and the one-element split that separates `E(I)`.
//!
//! Everything here works on ultimately periodic sets, so every "is finite" is decidable.

use num_integer::Integer;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sets::UPSet;
use crate::verify::Check;

/// `⋂F ∖ ⋃G`, with the empty intersection equal to ℕ.
pub fn sigma(f: &[UPSet], g: &[UPSet]) -> UPSet {
    let inter = f.iter().fold(UPSet::naturals(), |acc, a| acc.intersect(a));
    g.iter().fold(inter, |acc, b| acc.diff(b))
}

/// Index sets `(F, G)` into a list of members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pair {
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

impl Pair {
    pub fn sigma(&self, members: &[UPSet]) -> UPSet {
        let pick = |ix: &[usize]| ix.iter().map(|&i| members[i].clone()).collect::<Vec<_>>();
        sigma(&pick(&self.f), &pick(&self.g))
    }

    pub fn join(&self, other: &Pair) -> Pair {
        let merge = |a: &[usize], b: &[usize]| {
            let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        Pair { f: merge(&self.f, &other.f), g: merge(&self.g, &other.g) }
    }
}

/// Every `F ⊆ only_f` with every `G ⊆ only_g`.
fn disjoint_pairs(only_f: &[usize], only_g: &[usize]) -> Vec<Pair> {
    let mut out = Vec::new();
    for fm in 0u64..1 << only_f.len() {
        for gm in 0u64..1 << only_g.len() {
            let f = only_f.iter().enumerate().filter(|(i, _)| fm >> i & 1 == 1).map(|(_, &v)| v).collect();
            let g = only_g.iter().enumerate().filter(|(i, _)| gm >> i & 1 == 1).map(|(_, &v)| v).collect();
            out.push(Pair { f, g });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependenceReport {
    pub members: usize,
    pub pairs_checked: u64,
    pub finite_pairs: u64,
    /// The first pair, in ternary order, with a finite combination.
    pub first_failure: Option<Pair>,
}

impl IndependenceReport {
    pub fn independent(&self) -> bool {
        self.finite_pairs == 0
    }
}

/// Check every disjoint `(F, G)` for an infinite `σ(F,G)`.
pub fn independent_check(sample: &[UPSet]) -> Result<IndependenceReport> {
    let n = sample.len();
    if n > 16 {
        return Err(Error::horizon(format!("3^{n} pairs is too many to enumerate")));
    }
    let mut report = IndependenceReport { members: n, pairs_checked: 0, finite_pairs: 0, first_failure: None };
    for code in 0..3u64.pow(n as u32) {
        let (mut f, mut g, mut c) = (vec![], vec![], code);
        for i in 0..n {
            match c % 3 {
                1 => f.push(i),
                2 => g.push(i),
                _ => {}
            }
            c /= 3;
        }
        let pair = Pair { f, g };
        report.pairs_checked += 1;
        if pair.sigma(sample).is_finite() {
            report.finite_pairs += 1;
            report.first_failure.get_or_insert(pair);
        }
    }
    Ok(report)
}

/// A finite independent family, checked on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndepFamilySample {
    members: Vec<UPSet>,
    pairs_certified: u64,
}

impl IndepFamilySample {
    pub fn certify(members: Vec<UPSet>) -> Result<Self> {
        let r = independent_check(&members)?;
        match r.first_failure {
            Some(p) => Err(Error::violation(
                format!("F={:?} G={:?}", p.f, p.g),
                "finite Boolean combination in a family offered as independent",
            )),
            None => Ok(IndepFamilySample { members, pairs_certified: r.pairs_checked }),
        }
    }

    pub fn members(&self) -> &[UPSet] {
        &self.members
    }

    pub fn pairs_certified(&self) -> u64 {
        self.pairs_certified
    }
}

/// `{n : bit i of n is 1}` for `i < k`.
pub fn binary_digit_family(k: u32) -> Vec<UPSet> {
    (0..k).map(|i| UPSet::from_window(0, 1 << (i + 1), move |n| n >> i & 1 == 1)).collect()
}

/// Two disjoint finite unions of basic open sets, each given by its stems.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenPair {
    pub u: Vec<Vec<u64>>,
    pub v: Vec<Vec<u64>>,
    /// Stems are at most this long.
    pub depth: usize,
}

fn comparable(s: &[u64], t: &[u64]) -> bool {
    let n = s.len().min(t.len());
    s[..n] == t[..n]
}

impl OpenPair {
    pub fn validate(&self) -> Result<()> {
        for s in self.u.iter().chain(&self.v) {
            if s.len() > self.depth {
                return Err(Error::Malformed(format!("stem {s:?} is longer than depth {}", self.depth)));
            }
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Malformed(format!("stem {s:?} is not increasing")));
            }
        }
        for s in &self.u {
            for t in &self.v {
                if comparable(s, t) {
                    return Err(Error::Malformed(format!("stems {s:?} and {t:?} make U and V overlap")));
                }
            }
        }
        Ok(())
    }

    fn covers(stems: &[Vec<u64>], depth: usize, a: &UPSet) -> bool {
        let head: Vec<u64> = (0..depth as u64).map_while(|k| a.nth(k)).collect();
        stems.iter().any(|s| head.len() >= s.len() && head[..s.len()] == s[..])
    }

    pub fn in_u(&self, a: &UPSet) -> bool {
        Self::covers(&self.u, self.depth, a)
    }

    pub fn in_v(&self, a: &UPSet) -> bool {
        Self::covers(&self.v, self.depth, a)
    }

    /// Members lying in `U` and in `V`, by index.
    pub fn classify(&self, members: &[UPSet]) -> (Vec<usize>, Vec<usize>) {
        let pick = |inside: &dyn Fn(&UPSet) -> bool| (0..members.len()).filter(|&i| inside(&members[i])).collect();
        (pick(&|a| self.in_u(a)), pick(&|a| self.in_v(a)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// `F(U,V)`: some `σ(F,G) ∖ x` is finite.
    F,
    /// `I(U,V)`: some `σ(F,G) ∩ x` is finite, or `x` is finite.
    I,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    /// `None` when membership needs no pair (a finite set on side I) or fails.
    pub witness: Option<Pair>,
}

pub fn fi_uv_member(x: &UPSet, pair: &OpenPair, sample: &IndepFamilySample, side: Side) -> Result<Membership> {
    pair.validate()?;
    if side == Side::I && x.is_finite() {
        return Ok(Membership { member: true, witness: None });
    }
    let members = sample.members();
    let (in_u, in_v) = pair.classify(members);
    for p in disjoint_pairs(&in_u, &in_v) {
        let s = p.sigma(members);
        let small = match side {
            Side::F => s.diff(x),
            Side::I => s.intersect(x),
        };
        if small.is_finite() {
            return Ok(Membership { member: true, witness: Some(p) });
        }
    }
    Ok(Membership { member: false, witness: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub probes: usize,
    pub in_ideal: usize,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Seeded probes: half are random periodic sets, half are complements of
/// admissible `σ(F,G)` cut by a random set, which land in `I(U,V)`.
pub fn probes(seed: u64, n: usize, pair: &OpenPair, sample: &IndepFamilySample) -> Vec<UPSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (in_u, in_v) = pair.classify(sample.members());
    let admissible = disjoint_pairs(&in_u, &in_v);
    let random = |rng: &mut ChaCha8Rng| {
        let p = rng.gen_range(0..8);
        let l = rng.gen_range(1..9);
        let bits = |rng: &mut ChaCha8Rng, k| (0..k).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>();
        let (pre, per) = (bits(rng, p), bits(rng, l));
        UPSet::new(pre, per).expect("nonempty period")
    };
    (0..n)
        .map(|i| {
            if i % 2 == 0 {
                random(&mut rng)
            } else {
                let p = &admissible[rng.gen_range(0..admissible.len())];
                p.sigma(sample.members()).complement().intersect(&random(&mut rng))
            }
        })
        .collect()
}

fn show(x: &UPSet) -> String {
    format!("{x:?}")
}

/// Ideal laws for `I(U,V)` and its duality with `F(U,V)` over `probes`.
pub fn ideal_axiom_suite(pair: &OpenPair, sample: &IndepFamilySample, probes: &[UPSet]) -> Result<SuiteReport> {
    let member = |x: &UPSet, side| fi_uv_member(x, pair, sample, side);
    let mut down = Check::new("downward-closure");
    let mut union = Check::new("union-closure");
    let mut proper = Check::new("properness");
    let mut dual = Check::new("duality");

    let verdicts: Vec<Membership> = probes.iter().map(|x| member(x, Side::I)).collect::<Result<_>>()?;
    let ideal: Vec<usize> = (0..probes.len()).filter(|&i| verdicts[i].member).collect();

    for &i in &ideal {
        for y in probes {
            let sub = probes[i].intersect(y);
            down.record(member(&sub, Side::I)?.member, || format!("{} below {}", show(&sub), show(&probes[i])));
        }
    }
    for (a, &i) in ideal.iter().enumerate() {
        for &j in &ideal[a + 1..] {
            let u = probes[i].union(&probes[j]);
            let ok = match (&verdicts[i].witness, &verdicts[j].witness) {
                // the combined pair must work on its own
                (Some(p), Some(q)) => p.join(q).sigma(sample.members()).intersect(&u).is_finite(),
                _ => member(&u, Side::I)?.member,
            };
            union.record(ok, || format!("{} and {}", show(&probes[i]), show(&probes[j])));
        }
    }
    proper.record(!member(&UPSet::naturals(), Side::I)?.member, || "N is in I".into());
    proper.record(!member(&UPSet::empty(), Side::F)?.member, || "the empty set is in F".into());
    for x in probes {
        let f = member(x, Side::F)?.member;
        let i = member(&x.complement(), Side::I)?.member;
        dual.record(f == i, || format!("{}: in F {f}, complement in I {i}", show(x)));
    }
    Ok(SuiteReport { probes: probes.len(), in_ideal: ideal.len(), checks: vec![down, union, proper, dual] })
}

/// Decidable ideals on ultimately periodic sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum IdealPredicate {
    Finite,
    /// Zero asymptotic density; on periodic sets the same as finite.
    DensityZeroPeriodic,
    /// Sets covered by finitely many generators up to a finite set.
    GeneratedBy { generators: Vec<UPSet> },
    /// Every set. Not proper.
    Powerset,
}

impl IdealPredicate {
    pub fn contains(&self, x: &UPSet) -> bool {
        match self {
            IdealPredicate::Finite => x.is_finite(),
            IdealPredicate::DensityZeroPeriodic => density(x) == Ratio::from_integer(0),
            IdealPredicate::GeneratedBy { generators } => {
                generators.iter().fold(x.clone(), |acc, g| acc.diff(g)).is_finite()
            }
            IdealPredicate::Powerset => true,
        }
    }

    pub fn is_proper(&self) -> bool {
        !self.contains(&UPSet::naturals())
    }
}

/// Asymptotic density, `ones / period`.
pub fn density(x: &UPSet) -> Ratio<u64> {
    let ones = x.period_bits().iter().filter(|&&b| b).count() as u64;
    Ratio::new(ones, x.period_len())
}

/// Is `⋃[x(2i), x(2i+1))` in the ideal?
pub fn e_ideal_member(x: &UPSet, ideal: &IdealPredicate) -> Result<bool> {
    if x.is_finite() {
        return Err(Error::Precondition("E(I) is defined on infinite sets".into()));
    }
    if !ideal.is_proper() {
        return Err(Error::Precondition(format!("{ideal:?} is not proper")));
    }
    Ok(ideal.contains(&x.interval_union()))
}

/// `{x(i) : i ∈ idx}`.
pub fn select(x: &UPSet, idx: &UPSet) -> UPSet {
    let ones = x.period_bits().iter().filter(|&&b| b).count() as u64;
    if ones == 0 {
        let picked: Vec<u64> = (0..x.count_below(x.window())).filter(|&i| idx.contains(i)).filter_map(|i| x.nth(i)).collect();
        return UPSet::finite(&picked);
    }
    let head = x.count_below(x.prefix_len());
    let start_ix = head.max(idx.prefix_len());
    let turn = idx.period_len().lcm(&ones);
    let start = x.nth(start_ix).expect("x is infinite");
    let period = x.period_len() * (turn / ones);
    UPSet::from_window(start, period, |v| x.contains(v) && idx.contains(x.count_below(v)))
}

/// `{n + 1 : n ∈ x}`.
pub fn shift(x: &UPSet) -> UPSet {
    UPSet::from_window(x.prefix_len() + 1, x.period_len(), |n| n >= 1 && x.contains(n - 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    /// `{i : [x(i), x(i+1)) ⊆ A}`.
    pub trap: String,
    pub x1: String,
    pub x2: String,
    pub removed: u64,
    pub x1_in_e: bool,
    pub x2_in_e: bool,
    pub x1_union_inside_a: bool,
    /// The two interval unions are disjoint and cover all but finitely many points.
    pub covering: bool,
    /// Length of the window on which the covering was decided.
    pub window: u64,
}

impl SplitReport {
    pub fn opposite(&self) -> bool {
        self.x1_in_e != self.x2_in_e
    }
}

/// Build `x1 ⊆ x` inside `E(I)` and `x2 = x1 ∖ {x1(0)}` outside it.
pub fn e_split_witness(x: &UPSet, a: &UPSet, ideal: &IdealPredicate) -> Result<(UPSet, UPSet, SplitReport)> {
    if !ideal.is_proper() {
        return Err(Error::Precondition(format!("{ideal:?} is not proper")));
    }
    if !ideal.contains(a) {
        return Err(Error::Precondition(format!("{a:?} is not in the ideal")));
    }
    if x.is_finite() {
        return Err(Error::Precondition("x must be infinite".into()));
    }
    // gaps of x repeat once both x and A are periodic
    let ones = x.period_bits().iter().filter(|&&b| b).count() as u64;
    let start_ix = x.count_below(x.prefix_len().max(a.prefix_len())) + 1;
    let turn = a.period_len().lcm(&x.period_len()) / x.period_len() * ones;
    let trapped = |i: u64| {
        let (lo, hi) = (x.nth(i).unwrap(), x.nth(i + 1).unwrap());
        (lo..hi).all(|n| a.contains(n))
    };
    let trap = UPSet::from_window(start_ix, turn, trapped);
    if trap.is_finite() {
        return Err(Error::Precondition(format!("only finitely many intervals of x lie in A: {trap:?}")));
    }
    let even_trap = select(&trap, &UPSet::residue(0, 2));
    let idx = even_trap.union(&shift(&even_trap));
    let x1 = select(x, &idx);
    let removed = x1.nth(0).expect("x1 is infinite");
    let x2 = x1.diff(&UPSet::finite(&[removed]));
    let (u1, u2) = (x1.interval_union(), x2.interval_union());
    let covering = u1.intersect(&u2).is_empty() && u1.union(&u2).is_cofinite();
    let report = SplitReport {
        trap: format!("{trap:?}"),
        x1: format!("{x1:?}"),
        x2: format!("{x2:?}"),
        removed,
        x1_in_e: ideal.contains(&u1),
        x2_in_e: ideal.contains(&u2),
        x1_union_inside_a: u1.is_subset(a),
        covering,
        window: u1.window().max(u2.window()),
    };
    Ok((x1, x2, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn evens() -> UPSet {
        UPSet::residue(0, 2)
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(&[UPSet::naturals()], &[]), UPSet::naturals());
        assert_eq!(sigma(&[evens()], &[UPSet::residue(0, 4)]), UPSet::residue(2, 4));
        assert!(sigma(&[evens()], &[evens()]).is_empty());
    }

    #[test]
    fn independence() {
        assert!(independent_check(&[evens()]).unwrap().independent());
        let r = independent_check(&[evens(), UPSet::residue(1, 2)]).unwrap();
        assert_eq!(r.first_failure, Some(Pair { f: vec![0, 1], g: vec![] }));
        assert!(independent_check(&binary_digit_family(4)).unwrap().independent());
    }

    fn fixture() -> (OpenPair, IndepFamilySample) {
        let sample = IndepFamilySample::certify(binary_digit_family(4)).unwrap();
        // members start 1, 2, 4, 8: two go to U, two to V
        let pair = OpenPair { u: vec![vec![1], vec![2]], v: vec![vec![4], vec![8]], depth: 1 };
        (pair, sample)
    }

    #[test]
    fn membership_examples() {
        let (pair, sample) = fixture();
        assert!(fi_uv_member(&UPSet::naturals(), &pair, &sample, Side::F).unwrap().member);
        assert!(fi_uv_member(&UPSet::finite(&[3, 9]), &pair, &sample, Side::I).unwrap().member);
        let p0 = Pair { f: vec![0], g: vec![2] };
        let x = p0.sigma(sample.members()).complement();
        let m = fi_uv_member(&x, &pair, &sample, Side::I).unwrap();
        assert!(m.member);
        assert!(!fi_uv_member(&UPSet::naturals(), &pair, &sample, Side::I).unwrap().member);
    }

    #[test]
    fn overlapping_pair_is_malformed() {
        let (_, sample) = fixture();
        let bad = OpenPair { u: vec![vec![1]], v: vec![vec![1, 3]], depth: 2 };
        assert!(matches!(fi_uv_member(&UPSet::naturals(), &bad, &sample, Side::F), Err(Error::Malformed(_))));
    }

    #[test]
    fn axioms_hold_on_seeded_probes() {
        let (pair, sample) = fixture();
        let ps = probes(7, 40, &pair, &sample);
        let r = ideal_axiom_suite(&pair, &sample, &ps).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.in_ideal > 5);
    }

    #[test]
    fn interval_union_examples() {
        let fin = IdealPredicate::Finite;
        assert!(!e_ideal_member(&UPSet::naturals(), &fin).unwrap());
        assert_eq!(evens().interval_union(), UPSet::from_window(0, 4, |n| n % 4 < 2));
        assert!(e_ideal_member(&evens(), &IdealPredicate::Powerset).is_err());
    }

    #[test]
    fn select_and_shift() {
        let x = UPSet::residue(1, 3);
        assert_eq!(select(&x, &evens()), UPSet::residue(1, 6));
        assert_eq!(shift(&evens()), UPSet::residue(1, 2));
        let odd_sq = UPSet::finite(&[2, 5]).union(&UPSet::from_window(10, 7, |n| n >= 10 && n % 7 < 3));
        let idx = UPSet::from_window(1, 3, |n| n >= 1 && n % 3 != 2);
        let got = select(&odd_sq, &idx);
        let want: Vec<u64> = (0..200).filter(|i| idx.contains(*i)).map(|i| odd_sq.nth(i).unwrap()).collect();
        assert_eq!(got.elements_below(want.last().unwrap() + 1), want);
    }

    #[test]
    fn split_naturals_over_evens() {
        let ideal = IdealPredicate::GeneratedBy { generators: vec![evens()] };
        let (x1, x2, r) = e_split_witness(&UPSet::naturals(), &evens(), &ideal).unwrap();
        assert_eq!(x1.elements_below(10), vec![0, 1, 4, 5, 8, 9]);
        assert_eq!(x2.elements_below(10), vec![1, 4, 5, 8, 9]);
        assert!(r.x1_in_e && !r.x2_in_e && r.covering && r.x1_union_inside_a);
        let all = IdealPredicate::Powerset;
        assert!(e_split_witness(&UPSet::naturals(), &UPSet::naturals(), &all).is_err());
    }
}
