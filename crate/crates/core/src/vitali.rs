//! The binary encoding `e(x) = sum 2^-(x(i)+1)`, periodicity, the gap
//! construction, rational differences and fusion against a homogenizer.
//!
//! All arithmetic is exact.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::sets::{nth, Enumerate, Filtered, Recurrent, SetDesc, Source, UPSet};

fn ser_ratio<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn ser_bits<S: Serializer>(bits: &[bool], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&bits_string(bits))
}

fn bits_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// `2^-n`.
pub fn dyadic(n: u64) -> BigRational {
    let n = u32::try_from(n).expect("dyadic exponent fits in 32 bits");
    BigRational::new(BigInt::one(), BigInt::one() << n)
}

/// The first binary digits of `e(x)`. Digit `j` is 1 iff `j` is in `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DyadicPrefix {
    #[serde(serialize_with = "ser_bits")]
    pub bits: Vec<bool>,
    /// The digits are all of `e(x)`: no element lies at or past the precision.
    pub exact: bool,
}

impl DyadicPrefix {
    /// The partial sum carried by the digits.
    pub fn value(&self) -> BigRational {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .fold(BigRational::zero(), |acc, (j, _)| acc + dyadic(j as u64 + 1))
    }
}

impl fmt::Display for DyadicPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0.{}", bits_string(&self.bits))?;
        if !self.exact {
            write!(f, "...")?;
        }
        Ok(())
    }
}

pub fn encode(x: &dyn Enumerate, precision: u64) -> Result<DyadicPrefix> {
    let mut bits = vec![false; precision as usize];
    let mut k = 0;
    let exact = loop {
        match x.get(k)? {
            None => break true,
            Some(v) if v >= precision => break false,
            Some(v) => bits[v as usize] = true,
        }
        k += 1;
    };
    Ok(DyadicPrefix { bits, exact })
}

/// `e(x)` of an ultimately periodic set, by summing the geometric series.
pub fn upset_value(x: &UPSet) -> BigRational {
    let sum = |bits: &[bool]| {
        bits.iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .fold(BigRational::zero(), |acc, (j, _)| acc + dyadic(j as u64 + 1))
    };
    let p = x.prefix_len();
    let l = x.period_len();
    let tail = sum(x.period_bits()) / (BigRational::one() - dyadic(l));
    sum(x.prefix_bits()) + dyadic(p) * tail
}

/// Every ultimately periodic set has a periodic expansion.
pub fn is_periodic(_x: &UPSet) -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum PeriodVerdict {
    /// Digits `x_(i+l) = x_i` for all `k < i` with `i + l <= horizon` (digits counted from 1).
    Found { k: u64, l: u64, horizon: u64 },
    RefutedAtHorizon { k_max: u64, l_max: u64, horizon: u64 },
}

/// Search for a period `l <= l_max` with preperiod `k <= k_max` among the first
/// `horizon` digits. Smallest `l` first, then smallest `k`.
pub fn is_periodic_horizon(x: &dyn Enumerate, k_max: u64, l_max: u64, horizon: u64) -> Result<PeriodVerdict> {
    if l_max == 0 || horizon <= k_max + l_max {
        return Err(Error::Precondition(format!(
            "horizon {horizon} must exceed k_max + l_max = {} with l_max > 0",
            k_max + l_max
        )));
    }
    let digits = encode(x, horizon)?.bits;
    // digit i (1-based) is digits[i-1]
    for l in 1..=l_max {
        let last_bad = (1..=horizon - l).rev().find(|&i| digits[(i - 1) as usize] != digits[(i + l - 1) as usize]);
        let k = last_bad.unwrap_or(0);
        if k <= k_max {
            return Ok(PeriodVerdict::Found { k, l, horizon });
        }
    }
    Ok(PeriodVerdict::RefutedAtHorizon { k_max, l_max, horizon })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Rationality {
    Rational {
        #[serde(serialize_with = "ser_ratio")]
        value: BigRational,
    },
    /// A period was seen up to the horizon; `value` is what it would give if it persisted.
    PeriodicAtHorizon {
        k: u64,
        l: u64,
        horizon: u64,
        #[serde(serialize_with = "ser_ratio")]
        value: BigRational,
    },
    IrrationalAtHorizon { k_max: u64, l_max: u64, horizon: u64 },
}

impl Rationality {
    pub fn is_rational(&self) -> bool {
        !matches!(self, Rationality::IrrationalAtHorizon { .. })
    }
}

pub fn rationality_upset(x: &UPSet) -> Rationality {
    Rationality::Rational { value: upset_value(x) }
}

pub fn rationality(x: &dyn Enumerate, k_max: u64, l_max: u64, horizon: u64) -> Result<Rationality> {
    Ok(match is_periodic_horizon(x, k_max, l_max, horizon)? {
        PeriodVerdict::Found { k, l, horizon } => {
            let digits = encode(x, k + l)?.bits;
            let (pre, per) = digits.split_at(k as usize);
            let value = upset_value(&UPSet::new(pre.to_vec(), per.to_vec())?);
            Rationality::PeriodicAtHorizon { k, l, horizon, value }
        }
        PeriodVerdict::RefutedAtHorizon { k_max, l_max, horizon } => {
            Rationality::IrrationalAtHorizon { k_max, l_max, horizon }
        }
    })
}

/// A subset `y` of `H` and the witness `H \ y`, whose gaps strictly increase.
#[derive(Clone)]
pub struct GapConstruction {
    pub y: Source,
    pub witness: Source,
}

/// Greedy witness: `W(0), W(1)` are the first two elements of `H`, and `W(i+1)`
/// is the least `h` in `H` with `h - W(i) > W(i) - W(i-1)`, also passing over
/// the successor of `W(i)` in `H` when `i` is odd so that `y` stays infinite.
///
/// `budget` bounds the candidates scanned per witness element.
pub fn gap_construction(h: Source, budget: u64) -> GapConstruction {
    let hh = h.clone();
    let witness: Source = Arc::new(Recurrent::new(move |w: &[u64]| {
        let i = w.len();
        if i < 2 {
            return nth(&*hh, i as u64).map(Some);
        }
        let (prev, last) = (w[i - 2], w[i - 1]);
        let gap = last - prev;
        let odd = (i - 1) % 2 == 1;
        let (k_last, _) = hh
            .successor(Some(last - 1))?
            .filter(|&(_, v)| v == last)
            .ok_or_else(|| Error::violation(format!("W({})", i - 1), "witness left H"))?;
        let succ = nth(&*hh, k_last + 1)?;
        for k in k_last + 1..=k_last + 1 + budget {
            let c = nth(&*hh, k)?;
            if c - last > gap && (!odd || c > succ) {
                return Ok(Some(c));
            }
        }
        Err(Error::horizon(format!("no witness element within {budget} candidates after {last}")))
    }));
    let w = witness.clone();
    let y: Source = Arc::new(Filtered::new(h, move |v| Ok(!w.contains(v)?), budget));
    GapConstruction { y, witness }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Difference {
    /// `x` and `z` agree from `agree_from` up to the horizon; `value = e(x) - e(z)`
    /// assuming they keep agreeing.
    Exact {
        agree_from: u64,
        #[serde(serialize_with = "ser_ratio")]
        value: BigRational,
    },
    UnknownAtHorizon { horizon: u64 },
}

/// `e(x) - e(z)` when the two sets agree on the upper half of `[0, horizon)`.
pub fn rational_difference(x: &dyn Enumerate, z: &dyn Enumerate, horizon: u64) -> Result<Difference> {
    let a = encode(x, horizon)?.bits;
    let b = encode(z, horizon)?.bits;
    let last = (0..horizon as usize).rev().find(|&j| a[j] != b[j]);
    let agree_from = last.map_or(0, |j| j as u64 + 1);
    if agree_from > horizon / 2 {
        return Ok(Difference::UnknownAtHorizon { horizon });
    }
    let mut value = BigRational::zero();
    for j in 0..agree_from as usize {
        match (a[j], b[j]) {
            (true, false) => value += dyadic(j as u64 + 1),
            (false, true) => value -= dyadic(j as u64 + 1),
            _ => {}
        }
    }
    Ok(Difference::Exact { agree_from, value })
}

/// `e(x) - e(z)` for ultimately periodic sets, always exact.
pub fn rational_difference_upset(x: &UPSet, z: &UPSet) -> BigRational {
    upset_value(x) - upset_value(z)
}

/// `s1` followed by the elements of `x2` above its last entry.
pub fn splice(s1: &[u64], x2: Source) -> Result<Source> {
    let Some(&top) = s1.last() else { return Ok(x2) };
    if s1.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Malformed(format!("stem {s1:?} is not increasing")));
    }
    let (start, _) = x2
        .successor(Some(top))?
        .ok_or_else(|| Error::Precondition(format!("x2 has nothing above {top}")))?;
    let stem = s1.to_vec();
    Ok(Arc::new(Recurrent::new(move |found: &[u64]| {
        let i = found.len();
        if i < stem.len() {
            return Ok(Some(stem[i]));
        }
        x2.get(start + (i - stem.len()) as u64)
    })))
}

/// Outcome of the two-witness test on a function stub.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpliceReport {
    pub stem: Vec<u64>,
    pub z_prefix: Vec<u64>,
    pub f_x1: u64,
    pub f_x2: u64,
    pub f_z: u64,
    pub difference: Difference,
    /// `f(z)` agrees with `f(x1)` (same stem), `z` differs from `x2` by a
    /// rational, and still `f(x1) != f(x2)`: the stub does not respect
    /// rational differences.
    pub refuted: bool,
}

/// Splice the first `stem_len` elements of `x1` onto `x2` and compare `f`.
pub fn splice_test(
    f: &dyn Fn(&dyn Enumerate) -> Result<u64>,
    x1: Source,
    x2: Source,
    stem_len: usize,
    horizon: u64,
) -> Result<SpliceReport> {
    let stem = x1.prefix(stem_len)?;
    let z = splice(&stem, x2.clone())?;
    let (f_x1, f_x2, f_z) = (f(&*x1)?, f(&*x2)?, f(&*z)?);
    let difference = rational_difference(&*z, &*x2, horizon)?;
    let rational = matches!(difference, Difference::Exact { .. });
    Ok(SpliceReport {
        z_prefix: z.prefix(stem_len + 8)?,
        stem,
        f_x1,
        f_x2,
        f_z,
        refuted: rational && f_z == f_x1 && f_x1 != f_x2,
        difference,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Inside,
    Outside,
}

/// Oracle for sets with the Ramsey property.
///
/// `homogenize(set, b, A)` returns `H ⊆ A`, all above `max b`, such that
/// `[b, H]` lies inside the set or misses it.
pub trait Homogenizer {
    fn homogenize(&self, set: usize, stem: &[u64], domain: &UPSet) -> Result<(UPSet, Side)>;
}

/// A set whose membership depends on the residues of `x(0..depth)`.
///
/// `table[r]` is 1 when the residue tuple with mixed-radix index
/// `r = sum (x(i) mod m) m^i` is in the set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSet {
    pub depth: usize,
    #[serde(default = "two")]
    pub modulus: u64,
    pub table: Vec<u8>,
}

fn two() -> u64 {
    2
}

impl TableSet {
    pub fn validate(&self) -> Result<()> {
        if self.modulus == 0 {
            return Err(Error::Malformed("modulus must be positive".into()));
        }
        let want = u32::try_from(self.depth)
            .ok()
            .and_then(|d| self.modulus.checked_pow(d))
            .ok_or_else(|| Error::Malformed("table too large".into()))?;
        if self.table.len() as u64 != want {
            return Err(Error::Malformed(format!(
                "table has {} entries, depth {} modulus {} needs {want}",
                self.table.len(),
                self.depth,
                self.modulus
            )));
        }
        if let Some(b) = self.table.iter().find(|&&b| b > 1) {
            return Err(Error::Malformed(format!("table entry {b} is not 0 or 1")));
        }
        Ok(())
    }

    fn color(&self, residues: &[u64]) -> bool {
        let idx = residues.iter().rev().fold(0u64, |acc, &r| acc * self.modulus + r);
        self.table[idx as usize] == 1
    }

    /// Membership of an infinite set given by enough of its prefix.
    pub fn contains_prefix(&self, x: &[u64]) -> Result<bool> {
        if x.len() < self.depth {
            return Err(Error::Precondition(format!("need {} elements, got {}", self.depth, x.len())));
        }
        let r: Vec<u64> = x[..self.depth].iter().map(|v| v % self.modulus).collect();
        Ok(self.color(&r))
    }
}

/// Homogenizes [`TableSet`]s by passing to a single residue class.
///
/// Inside one class mod `m` every tuple has the same residues, so the color is
/// constant. When the color is already constant on the domain nothing is removed.
pub struct TableHomogenizer {
    pub sets: Vec<TableSet>,
}

impl TableHomogenizer {
    pub fn new(sets: Vec<TableSet>) -> Result<Self> {
        for s in &sets {
            s.validate()?;
        }
        Ok(TableHomogenizer { sets })
    }
}

impl Homogenizer for TableHomogenizer {
    fn homogenize(&self, set: usize, stem: &[u64], domain: &UPSet) -> Result<(UPSet, Side)> {
        let ts = self.sets.get(set).ok_or_else(|| Error::Precondition(format!("no set with index {set}")))?;
        let above = stem.last().map_or(0, |&m| m + 1);
        let mut dom = domain.diff(&UPSet::from_window(above, 1, |n| n < above));
        if dom.is_finite() {
            return Err(Error::Precondition(format!("domain is finite above {above}")));
        }
        let m = ts.modulus;
        let fixed: Vec<u64> = stem.iter().take(ts.depth).map(|v| v % m).collect();
        let free = ts.depth - fixed.len();
        // residues that actually occur infinitely often in the domain
        let live: Vec<u64> = (0..m).filter(|&r| !dom.intersect(&UPSet::residue(r, m)).is_finite()).collect();
        let side = |c: bool| if c { Side::Inside } else { Side::Outside };
        let colors: Vec<bool> = tuples(&live, free)
            .into_iter()
            .map(|t| {
                let mut r = fixed.clone();
                r.extend(t);
                ts.color(&r)
            })
            .collect();
        if colors.iter().all(|&c| c == colors[0]) {
            // drop the finitely many elements in dead classes too, keeping H inside a tail of A
            return Ok((dom, side(colors[0])));
        }
        let r = live[0];
        dom = dom.intersect(&UPSet::residue(r, m));
        let mut res = fixed;
        res.extend(std::iter::repeat(r).take(free));
        Ok((dom, side(ts.color(&res))))
    }
}

// all increasing-index tuples would do; residues repeat, so take all words
fn tuples(alphabet: &[u64], len: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                alphabet.iter().map(move |&a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogenizerCall {
    pub round: u64,
    pub set: usize,
    pub stem: Vec<u64>,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuseRound {
    pub k: u64,
    /// `B_k`.
    pub before: Vec<u64>,
    /// `A_(k+1)`.
    pub domain: SetDesc,
    /// `n_(k+1) = min A_(k+1)`.
    pub chosen: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuseFailure {
    pub round: u64,
    pub call: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuseTrace {
    pub c: Vec<u64>,
    pub rounds: Vec<FuseRound>,
    pub calls: Vec<HomogenizerCall>,
    pub failure: Option<FuseFailure>,
}

/// Run `steps` rounds of fusion. Round `k` homogenizes set `k mod sets` for
/// every `b ⊆ B_k`, shrinking `A` each time. A refusal ends the run with a
/// partial trace.
pub fn fuse(h: &dyn Homogenizer, sets: usize, steps: u64) -> Result<FuseTrace> {
    if sets == 0 {
        return Err(Error::Precondition("fusion needs at least one set".into()));
    }
    if steps > 20 {
        return Err(Error::horizon(format!("{steps} rounds would need 2^{steps} homogenizer calls")));
    }
    let mut trace = FuseTrace { c: vec![], rounds: vec![], calls: vec![], failure: None };
    let mut a = UPSet::naturals();
    let mut b: Vec<u64> = vec![];
    for k in 0..steps {
        let set = (k % sets as u64) as usize;
        let top = b.last().map_or(0, |&m| m + 1);
        a = a.diff(&UPSet::from_window(top, 1, |n| n < top));
        for mask in 0u64..1 << b.len() {
            let stem: Vec<u64> = b.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
            match h.homogenize(set, &stem, &a) {
                Ok((next, side)) => {
                    if !next.is_subset(&a) {
                        return Err(Error::violation(format!("round {k}"), "homogenizer left its domain"));
                    }
                    a = next;
                    trace.calls.push(HomogenizerCall { round: k, set, stem, side });
                }
                Err(e) => {
                    trace.failure = Some(FuseFailure { round: k, call: trace.calls.len(), message: e.to_string() });
                    return Ok(trace);
                }
            }
        }
        let n = a.nth(0).ok_or_else(|| Error::violation(format!("round {k}"), "domain became empty"))?;
        trace.rounds.push(FuseRound { k, before: b.clone(), domain: a.to_desc(), chosen: n });
        b.push(n);
        trace.c.push(n);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::StreamSet;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn encode_examples() {
        let n = encode(&UPSet::naturals(), 10).unwrap();
        assert!(n.bits.iter().all(|&b| b));
        assert_eq!(n.value(), BigRational::one() - dyadic(10));
        let ev = encode(&StreamSet::evens(), 6).unwrap();
        assert_eq!(ev.to_string(), "0.101010...");
        let s = UPSet::finite(&[0, 40]);
        let p = encode(&s, 8).unwrap();
        assert_eq!(p.to_string(), "0.10000000...");
        assert!(encode(&s, 41).unwrap().exact);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(upset_value(&UPSet::naturals()), BigRational::one());
        assert_eq!(upset_value(&UPSet::residue(0, 2)), ratio(2, 3));
        assert_eq!(upset_value(&UPSet::empty()), BigRational::zero());
        assert_eq!(upset_value(&UPSet::finite(&[1, 3])), ratio(5, 16));
    }

    #[test]
    fn periods() {
        let v = is_periodic_horizon(&StreamSet::evens(), 50, 50, 400).unwrap();
        assert_eq!(v, PeriodVerdict::Found { k: 0, l: 2, horizon: 400 });
        let t = is_periodic_horizon(&StreamSet::triangular(), 50, 50, 2000).unwrap();
        assert!(matches!(t, PeriodVerdict::RefutedAtHorizon { .. }));
        let r = rationality(&StreamSet::naturals(), 10, 10, 100).unwrap();
        assert!(matches!(r, Rationality::PeriodicAtHorizon { ref value, .. } if value.is_one()));
    }

    #[test]
    fn gap_witness_for_naturals_and_evens() {
        let g = gap_construction(Arc::new(StreamSet::naturals()), 1 << 20);
        assert_eq!(g.witness.prefix(6).unwrap(), vec![0, 1, 3, 6, 10, 15]);
        assert_eq!(g.y.prefix(4).unwrap(), vec![2, 4, 5, 7]);
        let g = gap_construction(Arc::new(StreamSet::evens()), 1 << 20);
        let w = g.witness.prefix(5).unwrap();
        let gaps: Vec<u64> = w.windows(2).map(|p| p[1] - p[0]).collect();
        assert_eq!(gaps, vec![2, 4, 6, 8]);
    }

    #[test]
    fn differences() {
        let x = UPSet::finite(&[1, 3, 9]).union(&UPSet::from_window(20, 3, |n| n >= 20 && n % 3 == 0));
        let z = x.diff(&UPSet::finite(&[3])).union(&UPSet::finite(&[4]));
        let d = rational_difference(&x, &z, 200).unwrap();
        assert_eq!(d, Difference::Exact { agree_from: 5, value: dyadic(4) - dyadic(5) });
        assert_eq!(rational_difference_upset(&x, &z), dyadic(4) - dyadic(5));
        let d = rational_difference(&StreamSet::evens(), &StreamSet::odds(), 100).unwrap();
        assert_eq!(d, Difference::UnknownAtHorizon { horizon: 100 });
    }

    #[test]
    fn splice_joins_stem_and_tail() {
        let z = splice(&[0, 5], Arc::new(StreamSet::evens())).unwrap();
        assert_eq!(z.prefix(4).unwrap(), vec![0, 5, 6, 8]);
        // f reads x(0) mod 2: constant on stems but blind to rational differences
        let f = |x: &dyn Enumerate| Ok(nth(x, 0)? % 2);
        let r = splice_test(&f, Arc::new(StreamSet::odds()), Arc::new(StreamSet::evens()), 1, 200).unwrap();
        assert!(r.refuted);
    }

    #[test]
    fn fuse_counts_calls() {
        let parity = TableSet { depth: 1, modulus: 2, table: vec![1, 0] };
        let h = TableHomogenizer::new(vec![parity.clone(), parity.clone(), parity]).unwrap();
        let t = fuse(&h, 3, 3).unwrap();
        assert_eq!(t.calls.len(), 1 + 2 + 4);
        assert_eq!(t.c.len(), 3);
        assert!(t.failure.is_none());
        let empty = TableHomogenizer::new(vec![TableSet { depth: 0, modulus: 2, table: vec![0] }]).unwrap();
        let t = fuse(&empty, 1, 5).unwrap();
        assert_eq!(t.c, vec![0, 1, 2, 3, 4]);
        assert!(t.calls.iter().all(|c| c.side == Side::Outside));
    }

    struct Refuses;
    impl Homogenizer for Refuses {
        fn homogenize(&self, _: usize, stem: &[u64], d: &UPSet) -> Result<(UPSet, Side)> {
            if stem.len() >= 2 {
                return Err(Error::horizon("no homogeneous tail found"));
            }
            Ok((d.clone(), Side::Inside))
        }
    }

    #[test]
    fn refusal_keeps_partial_trace() {
        let t = fuse(&Refuses, 1, 4).unwrap();
        let f = t.failure.unwrap();
        assert_eq!(f.round, 2);
        assert_eq!(f.call, 1 + 2 + 3);
        assert_eq!(t.c.len(), 2);
    }
}
