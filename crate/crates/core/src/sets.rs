//! Subsets of the naturals: lazy increasing enumerations and ultimately periodic sets.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An increasing enumeration of a subset of the naturals.
///
/// `get(k)` is the k-th element. `Ok(None)` means the set is finite and has
/// fewer than `k+1` elements; `Err(Horizon)` means the value is not available
/// (a finite prefix of an infinite set ran out, or a value overflowed).
pub trait Enumerate: Send + Sync {
    fn get(&self, k: u64) -> Result<Option<u64>>;

    /// Index of `v`, if `v` is an element.
    fn position(&self, v: u64) -> Result<Option<u64>> {
        // get(k) >= k, so the index of v is at most v
        match self.successor_index(v.checked_sub(1), v)? {
            Some((k, w)) if w == v => Ok(Some(k)),
            _ => Ok(None),
        }
    }

    fn contains(&self, v: u64) -> Result<bool> {
        Ok(self.position(v)?.is_some())
    }

    /// Least element strictly above `v` (or the first element for `None`), with its index.
    fn successor(&self, v: Option<u64>) -> Result<Option<(u64, u64)>> {
        let hi = v.map_or(0, |v| v.saturating_add(1));
        self.successor_index(v, hi)
    }

    #[doc(hidden)]
    fn successor_index(&self, v: Option<u64>, hi: u64) -> Result<Option<(u64, u64)>> {
        // smallest k with get(k) > v; k <= hi because get(hi) >= hi > v
        let above = |k: u64| -> Result<bool> {
            Ok(match self.get(k)? {
                None => true,
                Some(w) => v.map_or(true, |v| w > v),
            })
        };
        // gallop first so that sparse sets do not force long enumerations
        let cap = hi;
        let mut lo = 0u64;
        let mut probe = 1u64;
        let mut hi = loop {
            if probe >= cap {
                break cap;
            }
            if above(probe)? {
                break probe;
            }
            lo = probe + 1;
            probe = probe.saturating_mul(2);
        };
        if lo > hi {
            hi = lo;
        }
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if above(mid)? {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(self.get(lo)?.map(|w| (lo, w)))
    }

    fn prefix(&self, n: usize) -> Result<Vec<u64>> {
        let mut out = Vec::with_capacity(n);
        for k in 0..n as u64 {
            match self.get(k)? {
                Some(v) => out.push(v),
                None => break,
            }
        }
        Ok(out)
    }

    /// All elements `<= bound`.
    fn elements_upto(&self, bound: u64) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        let mut k = 0;
        while let Some(v) = self.get(k)? {
            if v > bound {
                break;
            }
            out.push(v);
            k += 1;
        }
        Ok(out)
    }
}

pub type Source = Arc<dyn Enumerate>;

/// `x(k)`; a missing element is reported as a horizon error.
pub fn nth(x: &dyn Enumerate, k: u64) -> Result<u64> {
    x.get(k)?.ok_or_else(|| Error::horizon(format!("set has no element with index {k}")))
}

type IndexFn = dyn Fn(u64) -> Option<u64> + Send + Sync;
type MemberFn = dyn Fn(u64) -> bool + Send + Sync;

/// An infinite subset of the naturals given by its increasing enumeration.
///
/// The enumeration must be pure. A `None` from the closure signals arithmetic
/// overflow and surfaces as a horizon error.
#[derive(Clone)]
pub struct StreamSet {
    name: String,
    at: Arc<IndexFn>,
    member: Option<Arc<MemberFn>>,
}

impl fmt::Debug for StreamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StreamSet({})", self.name)
    }
}

impl StreamSet {
    pub fn from_fn(name: impl Into<String>, at: impl Fn(u64) -> Option<u64> + Send + Sync + 'static) -> Self {
        StreamSet { name: name.into(), at: Arc::new(at), member: None }
    }

    pub fn with_member(mut self, member: impl Fn(u64) -> bool + Send + Sync + 'static) -> Self {
        self.member = Some(Arc::new(member));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn at(&self, k: u64) -> Option<u64> {
        (self.at)(k)
    }

    pub fn naturals() -> Self {
        Self::from_fn("naturals", Some).with_member(|_| true)
    }

    pub fn evens() -> Self {
        Self::arithmetic(0, 2)
    }

    pub fn odds() -> Self {
        Self::arithmetic(1, 2)
    }

    pub fn multiples(m: u64) -> Self {
        Self::arithmetic(0, m)
    }

    /// `{start + step*k}`; `step` must be positive.
    pub fn arithmetic(start: u64, step: u64) -> Self {
        assert!(step > 0, "arithmetic progression needs a positive step");
        Self::from_fn(format!("arithmetic({start},{step})"), move |k| k.checked_mul(step)?.checked_add(start))
            .with_member(move |v| v >= start && (v - start) % step == 0)
    }

    /// `{base^k}`; `base >= 2`.
    pub fn powers(base: u64) -> Self {
        assert!(base >= 2, "powers need base >= 2");
        Self::from_fn(format!("powers({base})"), move |k| base.checked_pow(u32::try_from(k).ok()?)).with_member(
            move |mut v| {
                if v == 0 {
                    return false;
                }
                while v % base == 0 {
                    v /= base;
                }
                v == 1
            },
        )
    }

    /// `{0, 1, 3, 6, 10, ...}`.
    pub fn triangular() -> Self {
        Self::from_fn("triangular", |k| k.checked_mul(k + 1).map(|p| p / 2)).with_member(|v| {
            let k = ((8 * v as u128 + 1).isqrt() - 1) / 2;
            k * (k + 1) / 2 == v as u128
        })
    }

    /// Union of the blocks `[4^i, 2*4^i)`.
    pub fn dyadic_blocks() -> Self {
        Self::from_fn("dyadic-blocks", |mut k| {
            let mut len: u64 = 1;
            loop {
                if k < len {
                    return len.checked_add(k);
                }
                k -= len;
                len = len.checked_mul(4)?;
            }
        })
        .with_member(|v| v != 0 && v.ilog2() % 2 == 0)
    }

    /// Elements of `base` accepted by `keep`, enumerated lazily and memoized.
    ///
    /// The caller promises the result is infinite. `budget` bounds the number of
    /// consecutive rejected candidates before a horizon error is reported.
    pub fn filtered(
        name: impl Into<String>,
        base: StreamSet,
        keep: impl Fn(u64) -> bool + Send + Sync + 'static,
        budget: u64,
    ) -> Self {
        let keep = Arc::new(keep);
        let base_member = base.member.clone();
        let keep2 = keep.clone();
        let memo = Arc::new(Mutex::new((Vec::<u64>::new(), 0u64)));
        let set = Self::from_fn(name, move |k| {
            let mut guard = memo.lock().unwrap();
            let (found, next) = &mut *guard;
            while found.len() as u64 <= k {
                let mut misses = 0;
                loop {
                    let v = base.at(*next)?;
                    *next += 1;
                    if keep(v) {
                        found.push(v);
                        break;
                    }
                    misses += 1;
                    if misses > budget {
                        return None;
                    }
                }
            }
            Some(found[k as usize])
        });
        match base_member {
            Some(m) => set.with_member(move |v| m(v) && keep2(v)),
            None => set,
        }
    }

    /// `{A(z(0)), A(z(1)), ...}`.
    pub fn relative_embed(a: &StreamSet, z: &StreamSet) -> StreamSet {
        let (a, z) = (a.clone(), z.clone());
        Self::from_fn(format!("{}[{}]", a.name, z.name), move |k| a.at(z.at(k)?))
    }

    pub fn has_member_predicate(&self) -> bool {
        self.member.is_some()
    }
}

impl Enumerate for StreamSet {
    fn get(&self, k: u64) -> Result<Option<u64>> {
        match self.at(k) {
            Some(v) => Ok(Some(v)),
            None => Err(Error::horizon(format!("{}: element {k} overflows", self.name))),
        }
    }

    fn position(&self, v: u64) -> Result<Option<u64>> {
        if let Some(m) = &self.member {
            if !m(v) {
                return Ok(None);
            }
        }
        match self.successor_index(v.checked_sub(1), v)? {
            Some((k, w)) if w == v => Ok(Some(k)),
            _ => Ok(None),
        }
    }
}

/// Composition of two enumerations, for sources that are not plain streams.
pub struct Embedded {
    pub outer: Source,
    pub inner: Source,
}

impl Enumerate for Embedded {
    fn get(&self, k: u64) -> Result<Option<u64>> {
        match self.inner.get(k)? {
            Some(j) => self.outer.get(j),
            None => Ok(None),
        }
    }
}

pub fn relative_embed(a: Source, z: Source) -> Source {
    Arc::new(Embedded { outer: a, inner: z })
}

/// A finite strictly increasing list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct FiniteSeq(Vec<u64>);

impl FiniteSeq {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Malformed(format!("sequence {entries:?} is not strictly increasing")));
        }
        Ok(FiniteSeq(entries))
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<u64>> for FiniteSeq {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        FiniteSeq::new(v)
    }
}

impl From<FiniteSeq> for Vec<u64> {
    fn from(s: FiniteSeq) -> Vec<u64> {
        s.0
    }
}

impl Enumerate for FiniteSeq {
    fn get(&self, k: u64) -> Result<Option<u64>> {
        Ok(self.0.get(k as usize).copied())
    }

    fn position(&self, v: u64) -> Result<Option<u64>> {
        Ok(self.0.binary_search(&v).ok().map(|i| i as u64))
    }
}

/// `{0, 1, ..., len-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Below(pub u64);

impl Enumerate for Below {
    fn get(&self, k: u64) -> Result<Option<u64>> {
        Ok((k < self.0).then_some(k))
    }

    fn position(&self, v: u64) -> Result<Option<u64>> {
        Ok((v < self.0).then_some(v))
    }
}

/// The first `len` elements of `inner`.
pub struct Truncated {
    pub inner: Source,
    pub len: u64,
}

impl Enumerate for Truncated {
    fn get(&self, k: u64) -> Result<Option<u64>> {
        if k < self.len {
            self.inner.get(k)
        } else {
            Ok(None)
        }
    }

    fn position(&self, v: u64) -> Result<Option<u64>> {
        Ok(self.inner.position(v)?.filter(|&k| k < self.len))
    }
}

/// The known prefix of an infinite set; reading past it is a horizon error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prefix(pub Vec<u64>);

impl Enumerate for Prefix {
    fn get(&self, k: u64) -> Result<Option<u64>> {
        match self.0.get(k as usize) {
            Some(v) => Ok(Some(*v)),
            None => Err(Error::horizon(format!("prefix of length {} has no index {k}", self.0.len()))),
        }
    }

    fn position(&self, v: u64) -> Result<Option<u64>> {
        match self.0.binary_search(&v) {
            Ok(i) => Ok(Some(i as u64)),
            Err(i) if i < self.0.len() => Ok(None),
            Err(_) => Err(Error::horizon(format!("{v} lies beyond the known prefix"))),
        }
    }
}

/// An enumeration defined by a recurrence on all earlier elements, memoized.
pub struct Recurrent {
    memo: Mutex<(Vec<u64>, bool)>,
    #[allow(clippy::type_complexity)]
    step: Box<dyn Fn(&[u64]) -> Result<Option<u64>> + Send + Sync>,
}

impl Recurrent {
    /// `step(prev)` returns the next element, or `None` once the set is exhausted.
    pub fn new(step: impl Fn(&[u64]) -> Result<Option<u64>> + Send + Sync + 'static) -> Self {
        Recurrent { memo: Mutex::new((Vec::new(), false)), step: Box::new(step) }
    }

    pub fn known(&self) -> Vec<u64> {
        self.memo.lock().unwrap().0.clone()
    }
}

impl Enumerate for Recurrent {
    fn get(&self, k: u64) -> Result<Option<u64>> {
        let mut guard = self.memo.lock().unwrap();
        let (found, done) = &mut *guard;
        while found.len() as u64 <= k {
            if *done {
                return Ok(None);
            }
            match (self.step)(found)? {
                Some(v) => {
                    if let Some(&last) = found.last() {
                        if v <= last {
                            return Err(Error::violation(
                                format!("index {}", found.len()),
                                format!("recurrence produced {v} after {last}"),
                            ));
                        }
                    }
                    found.push(v)
                }
                None => *done = true,
            }
        }
        Ok(Some(found[k as usize]))
    }
}

/// The elements of `base` accepted by `keep`, memoized.
///
/// `budget` bounds the consecutive rejections in one step; running past it is
/// a horizon error.
pub struct Filtered {
    base: Source,
    #[allow(clippy::type_complexity)]
    keep: Box<dyn Fn(u64) -> Result<bool> + Send + Sync>,
    budget: u64,
    memo: Mutex<(Vec<u64>, u64)>,
}

impl Filtered {
    pub fn new(base: Source, keep: impl Fn(u64) -> Result<bool> + Send + Sync + 'static, budget: u64) -> Self {
        Filtered { base, keep: Box::new(keep), budget, memo: Mutex::new((Vec::new(), 0)) }
    }
}

impl Enumerate for Filtered {
    fn get(&self, k: u64) -> Result<Option<u64>> {
        let mut guard = self.memo.lock().unwrap();
        let (found, next) = &mut *guard;
        while found.len() as u64 <= k {
            let mut misses = 0;
            loop {
                let Some(v) = self.base.get(*next)? else { return Ok(None) };
                *next += 1;
                if (self.keep)(v)? {
                    found.push(v);
                    break;
                }
                misses += 1;
                if misses > self.budget {
                    return Err(Error::horizon(format!("filter rejected {misses} candidates in a row")));
                }
            }
        }
        Ok(Some(found[k as usize]))
    }

    fn position(&self, v: u64) -> Result<Option<u64>> {
        if !self.base.contains(v)? || !(self.keep)(v)? {
            return Ok(None);
        }
        match self.successor_index(v.checked_sub(1), v)? {
            Some((k, w)) if w == v => Ok(Some(k)),
            _ => Ok(None),
        }
    }
}

/// `x(0..|s|) == s`.
pub fn basic_open_contains(s: &[u64], x: &dyn Enumerate) -> Result<bool> {
    for (k, &v) in s.iter().enumerate() {
        if x.get(k as u64)? != Some(v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Ultimately periodic subset of the naturals, kept in canonical form.
///
/// Serialized as a [`SetDesc`]; any description with a periodic reading is accepted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "SetDesc", try_from = "SetDesc")]
pub struct UPSet {
    prefix: Vec<bool>,
    period: Vec<bool>,
}

impl fmt::Debug for UPSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = |v: &[bool]| v.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
        write!(f, "UPSet({}|{})", bits(&self.prefix), bits(&self.period))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoolOp {
    Union,
    Intersect,
    Diff,
    Complement,
}

impl UPSet {
    pub fn new(prefix: Vec<bool>, period: Vec<bool>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Malformed("ultimately periodic set needs a nonempty period".into()));
        }
        let mut s = UPSet { prefix, period };
        s.normalize();
        Ok(s)
    }

    pub fn from_bits(prefix: &[u8], period: &[u8]) -> Result<Self> {
        let conv = |v: &[u8]| -> Result<Vec<bool>> {
            v.iter()
                .map(|&b| match b {
                    0 => Ok(false),
                    1 => Ok(true),
                    _ => Err(Error::Malformed(format!("bit {b} is not 0 or 1"))),
                })
                .collect()
        };
        UPSet::new(conv(prefix)?, conv(period)?)
    }

    pub fn empty() -> Self {
        UPSet { prefix: vec![], period: vec![false] }
    }

    pub fn naturals() -> Self {
        UPSet { prefix: vec![], period: vec![true] }
    }

    /// `{n : n ≡ r mod m}`.
    pub fn residue(r: u64, m: u64) -> Self {
        assert!(m > 0 && r < m);
        let period = (0..m).map(|i| i == r).collect();
        UPSet::new(vec![], period).unwrap()
    }

    pub fn finite(elements: &[u64]) -> Self {
        let len = elements.iter().max().map_or(0, |m| m + 1) as usize;
        let mut prefix = vec![false; len];
        for &e in elements {
            prefix[e as usize] = true;
        }
        UPSet::new(prefix, vec![false]).unwrap()
    }

    /// The set whose membership on `[0, start)` and on the period window
    /// `[start, start+period)` is given by `member`.
    pub fn from_window(start: u64, period: u64, member: impl Fn(u64) -> bool) -> Self {
        let prefix = (0..start).map(&member).collect();
        let per = (start..start + period.max(1)).map(&member).collect();
        UPSet::new(prefix, per).unwrap()
    }

    fn normalize(&mut self) {
        let l = self.period.len();
        for d in 1..=l {
            if l % d == 0 && (d..l).all(|i| self.period[i] == self.period[i - d]) {
                self.period.truncate(d);
                break;
            }
        }
        while let Some(&last) = self.prefix.last() {
            if last != *self.period.last().unwrap() {
                break;
            }
            self.prefix.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn prefix_bits(&self) -> &[bool] {
        &self.prefix
    }

    pub fn period_bits(&self) -> &[bool] {
        &self.period
    }

    pub fn prefix_len(&self) -> u64 {
        self.prefix.len() as u64
    }

    pub fn period_len(&self) -> u64 {
        self.period.len() as u64
    }

    /// Length of a window that determines everything about the set.
    pub fn window(&self) -> u64 {
        self.prefix_len() + self.period_len()
    }

    pub fn contains(&self, n: u64) -> bool {
        let p = self.prefix.len() as u64;
        if n < p {
            self.prefix[n as usize]
        } else {
            self.period[((n - p) % self.period.len() as u64) as usize]
        }
    }

    pub fn is_finite(&self) -> bool {
        self.period.iter().all(|b| !b)
    }

    pub fn is_cofinite(&self) -> bool {
        self.period.iter().all(|&b| b)
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.prefix.iter().all(|b| !b)
    }

    fn combine(&self, other: &UPSet, f: impl Fn(bool, bool) -> bool) -> UPSet {
        let start = self.prefix_len().max(other.prefix_len());
        let period = self.period_len().lcm(&other.period_len());
        UPSet::from_window(start, period, |n| f(self.contains(n), other.contains(n)))
    }

    pub fn union(&self, other: &UPSet) -> UPSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &UPSet) -> UPSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn diff(&self, other: &UPSet) -> UPSet {
        self.combine(other, |a, b| a && !b)
    }

    pub fn sym_diff(&self, other: &UPSet) -> UPSet {
        self.combine(other, |a, b| a != b)
    }

    pub fn complement(&self) -> UPSet {
        UPSet {
            prefix: self.prefix.iter().map(|b| !b).collect(),
            period: self.period.iter().map(|b| !b).collect(),
        }
    }

    pub fn is_subset(&self, other: &UPSet) -> bool {
        self.diff(other).is_empty()
    }

    /// Number of elements below `n`.
    pub fn count_below(&self, n: u64) -> u64 {
        let p = self.prefix_len();
        let head = self.prefix.iter().take(n.min(p) as usize).filter(|&&b| b).count() as u64;
        if n <= p {
            return head;
        }
        let rest = n - p;
        let l = self.period_len();
        let ones = self.period.iter().filter(|&&b| b).count() as u64;
        let partial = self.period.iter().take((rest % l) as usize).filter(|&&b| b).count() as u64;
        head + (rest / l) * ones + partial
    }

    pub fn elements_below(&self, n: u64) -> Vec<u64> {
        (0..n).filter(|&i| self.contains(i)).collect()
    }

    /// The k-th element, or `None` when the set has at most k elements.
    pub fn nth(&self, k: u64) -> Option<u64> {
        let p = self.prefix_len();
        let head: Vec<u64> = (0..p).filter(|&i| self.prefix[i as usize]).collect();
        if (k as usize) < head.len() {
            return Some(head[k as usize]);
        }
        let ones: Vec<u64> = (0..self.period_len()).filter(|&i| self.period[i as usize]).collect();
        if ones.is_empty() {
            return None;
        }
        let r = k - head.len() as u64;
        let (q, m) = (r / ones.len() as u64, r % ones.len() as u64);
        Some(p + q * self.period_len() + ones[m as usize])
    }

    /// `⋃ [x(2i), x(2i+1))`, i.e. the points with an odd number of elements of `x` at or below them.
    pub fn interval_union(&self) -> UPSet {
        let start = self.prefix_len();
        let l = self.period_len();
        let before = self.count_below(start);
        let mut parity = before % 2 == 1;
        let mut prefix = Vec::with_capacity(start as usize);
        // parity flips at each element, so recompute along the window
        let mut odd = false;
        for n in 0..start {
            if self.contains(n) {
                odd = !odd;
            }
            prefix.push(odd);
        }
        debug_assert_eq!(odd, parity);
        let mut period = Vec::with_capacity(2 * l as usize);
        for n in start..start + 2 * l {
            if self.contains(n) {
                parity = !parity;
            }
            period.push(parity);
        }
        UPSet::new(prefix, period).unwrap()
    }

    pub fn boolean(op: BoolOp, a: &UPSet, b: Option<&UPSet>) -> Result<UPSet> {
        match (op, b) {
            (BoolOp::Complement, _) => Ok(a.complement()),
            (_, None) => Err(Error::Malformed(format!("{op:?} needs two operands"))),
            (BoolOp::Union, Some(b)) => Ok(a.union(b)),
            (BoolOp::Intersect, Some(b)) => Ok(a.intersect(b)),
            (BoolOp::Diff, Some(b)) => Ok(a.diff(b)),
        }
    }

    pub fn to_desc(&self) -> SetDesc {
        let bits = |v: &[bool]| v.iter().map(|&b| b as u8).collect();
        SetDesc::Upset { prefix: bits(&self.prefix), period: bits(&self.period) }
    }
}

impl Enumerate for UPSet {
    fn get(&self, k: u64) -> Result<Option<u64>> {
        Ok(self.nth(k))
    }

    fn position(&self, v: u64) -> Result<Option<u64>> {
        Ok(self.contains(v).then(|| self.count_below(v)))
    }
}

impl From<UPSet> for SetDesc {
    fn from(x: UPSet) -> SetDesc {
        x.to_desc()
    }
}

impl TryFrom<SetDesc> for UPSet {
    type Error = Error;

    fn try_from(d: SetDesc) -> Result<UPSet> {
        d.to_upset()
    }
}

/// JSON description of a set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SetDesc {
    Upset {
        prefix: Vec<u8>,
        period: Vec<u8>,
    },
    Builtin {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, u64>,
    },
    /// A finite set.
    Finite { elements: Vec<u64> },
    /// The known prefix of an infinite set.
    Prefix { elements: Vec<u64> },
}

impl SetDesc {
    pub fn builtin(name: &str) -> Self {
        SetDesc::Builtin { name: name.into(), params: BTreeMap::new() }
    }

    pub fn to_source(&self) -> Result<Source> {
        Ok(match self {
            SetDesc::Upset { prefix, period } => Arc::new(UPSet::from_bits(prefix, period)?),
            SetDesc::Builtin { name, params } => Arc::new(builtin_stream(name, params)?),
            SetDesc::Finite { elements } => Arc::new(FiniteSeq::new(elements.clone())?),
            SetDesc::Prefix { elements } => {
                FiniteSeq::new(elements.clone())?;
                Arc::new(Prefix(elements.clone()))
            }
        })
    }

    pub fn to_upset(&self) -> Result<UPSet> {
        match self {
            SetDesc::Upset { prefix, period } => UPSet::from_bits(prefix, period),
            SetDesc::Finite { elements } => Ok(UPSet::finite(&FiniteSeq::new(elements.clone())?.0)),
            SetDesc::Builtin { name, params } => match name.as_str() {
                "naturals" => Ok(UPSet::naturals()),
                "evens" => Ok(UPSet::residue(0, 2)),
                "odds" => Ok(UPSet::residue(1, 2)),
                "multiples" => {
                    let m = param(params, "m")?;
                    if m == 0 {
                        return Err(Error::Malformed("multiples needs m > 0".into()));
                    }
                    Ok(UPSet::residue(0, m))
                }
                "arithmetic" => {
                    let (a, d) = (param(params, "start")?, param(params, "step")?);
                    if d == 0 {
                        return Err(Error::Malformed("arithmetic needs step > 0".into()));
                    }
                    Ok(UPSet::from_window(a, d, |n| n >= a && (n - a) % d == 0))
                }
                other => Err(Error::Malformed(format!("builtin {other} is not ultimately periodic"))),
            },
            SetDesc::Prefix { .. } => Err(Error::Malformed("a prefix does not determine an ultimately periodic set".into())),
        }
    }
}

fn param(params: &BTreeMap<String, u64>, key: &str) -> Result<u64> {
    params.get(key).copied().ok_or_else(|| Error::Malformed(format!("missing parameter {key}")))
}

pub fn builtin_stream(name: &str, params: &BTreeMap<String, u64>) -> Result<StreamSet> {
    Ok(match name {
        "naturals" => StreamSet::naturals(),
        "evens" => StreamSet::evens(),
        "odds" => StreamSet::odds(),
        "multiples" => match param(params, "m")? {
            0 => return Err(Error::Malformed("multiples needs m > 0".into())),
            m => StreamSet::multiples(m),
        },
        "arithmetic" => match (param(params, "start")?, param(params, "step")?) {
            (_, 0) => return Err(Error::Malformed("arithmetic needs step > 0".into())),
            (a, d) => StreamSet::arithmetic(a, d),
        },
        "powers" => match param(params, "base")? {
            b if b < 2 => return Err(Error::Malformed("powers needs base >= 2".into())),
            b => StreamSet::powers(b),
        },
        "triangular" => StreamSet::triangular(),
        "dyadic-blocks" => StreamSet::dyadic_blocks(),
        other => return Err(Error::Malformed(format!("unknown builtin set {other}"))),
    })
}

/// Names accepted by [`builtin_stream`].
pub const BUILTIN_SETS: &[&str] =
    &["naturals", "evens", "odds", "multiples", "arithmetic", "powers", "triangular", "dyadic-blocks"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nth_examples() {
        assert_eq!(nth(&StreamSet::naturals(), 17).unwrap(), 17);
        assert_eq!(nth(&StreamSet::evens(), 3).unwrap(), 6);
        assert_eq!(nth(&StreamSet::powers(2), 2).unwrap(), 4);
        assert!(nth(&StreamSet::powers(2), 64).unwrap_err().is_horizon());
    }

    #[test]
    fn relative_embed_examples() {
        let z = StreamSet::relative_embed(&StreamSet::odds(), &StreamSet::evens());
        assert_eq!(z.prefix(4).unwrap(), vec![1, 5, 9, 13]);
        let id = StreamSet::relative_embed(&StreamSet::naturals(), &StreamSet::triangular());
        assert_eq!(id.prefix(5).unwrap(), StreamSet::triangular().prefix(5).unwrap());
    }

    #[test]
    fn dyadic_blocks_layout() {
        let d = StreamSet::dyadic_blocks();
        assert_eq!(d.prefix(8).unwrap(), vec![1, 4, 5, 6, 7, 16, 17, 18]);
        for v in 0..300 {
            assert_eq!(d.position(v).unwrap().is_some(), d.elements_upto(300).unwrap().contains(&v));
        }
    }

    #[test]
    fn normalization_is_canonical() {
        let a = UPSet::from_bits(&[1, 0, 1, 0], &[1, 0, 1, 0]).unwrap();
        assert_eq!(a, UPSet::residue(0, 2));
        let b = UPSet::from_bits(&[0, 1, 1], &[1]).unwrap();
        assert_eq!(b.prefix_bits(), &[false]);
    }

    #[test]
    fn boolean_examples() {
        let evens = UPSet::residue(0, 2);
        let mult4 = UPSet::residue(0, 4);
        assert_eq!(evens.intersect(&mult4), mult4);
        assert_eq!(evens.diff(&mult4), UPSet::residue(2, 4));
        assert_eq!(evens.union(&evens.complement()), UPSet::naturals());
        assert!(evens.diff(&evens).is_finite());
        assert!(UPSet::finite(&[0, 1, 2]).is_finite());
        assert!(!evens.is_finite());
    }

    #[test]
    fn basic_open_examples() {
        let evens = StreamSet::evens();
        assert!(basic_open_contains(&[], &evens).unwrap());
        assert!(basic_open_contains(&[0, 2], &evens).unwrap());
        assert!(!basic_open_contains(&[1], &evens).unwrap());
    }

    #[test]
    fn interval_union_of_naturals_is_evens() {
        assert_eq!(UPSet::naturals().interval_union(), UPSet::residue(0, 2));
        let u = UPSet::residue(0, 2).interval_union();
        assert_eq!(u, UPSet::residue(0, 4).union(&UPSet::residue(1, 4)));
    }

    #[test]
    fn recurrent_memoizes() {
        let r = Recurrent::new(|prev| Ok(Some(prev.last().map_or(1, |v| v * 3))));
        assert_eq!(r.prefix(4).unwrap(), vec![1, 3, 9, 27]);
        assert_eq!(r.position(27).unwrap(), Some(3));
        assert_eq!(r.position(26).unwrap(), None);
    }

    #[test]
    fn prefix_reports_horizon() {
        let p = Prefix(vec![1, 4, 9]);
        assert_eq!(p.position(4).unwrap(), Some(1));
        assert_eq!(p.position(5).unwrap(), None);
        assert!(p.position(10).unwrap_err().is_horizon());
    }
}
