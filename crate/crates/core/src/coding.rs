//! The three coding maps `Phi` from infinite sets `x` to positive sets, with
//! block provenance and membership tests that read only a finite part of `x`.
//!
//! * mad: `Phi(x) = {A_{x(2n)}(x(2n+1))}`
//! * ed: block `n` puts `n+1` points of family member `x(b_n)`, `b_n = n(n+5)/2`, into one column
//! * fin: block `n` grows a subtree below `k_{x,n} = A_{x(3n)}[x(3n+1)]` whose
//!   branching at index path `s` is steered by `x(3 pi(n^s^l) + 2)`

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::ed::{spiral_delta_family, spiral_pair, spiral_position, GridFamily, GridSet};
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::sets::{nth, Enumerate, FiniteSeq, Recurrent, Source, StreamSet};
use crate::seqcode::{pi, pi_inverse};
use crate::tree::{fmt_seq, LazyTree, Seq};

type Owner = dyn Fn(u64) -> Option<(u64, u64)> + Send + Sync;

/// A countable family of infinite subsets of `N`, `n -> A_n`.
#[derive(Clone)]
pub struct MadFamily {
    name: String,
    member: Arc<dyn Fn(u64) -> Result<Source> + Send + Sync>,
    owner: Option<Arc<Owner>>,
    prepared: bool,
    cache: Arc<Mutex<HashMap<u64, Source>>>,
}

impl MadFamily {
    /// `prepared` promises pairwise disjoint members with increasing minima.
    pub fn new(name: impl Into<String>, prepared: bool, member: impl Fn(u64) -> Result<Source> + Send + Sync + 'static) -> Self {
        MadFamily { name: name.into(), member: Arc::new(member), owner: None, prepared, cache: Arc::default() }
    }

    /// A fast inverse `v -> (n, j)` with `A_n(j) = v`.
    pub fn with_owner(mut self, owner: impl Fn(u64) -> Option<(u64, u64)> + Send + Sync + 'static) -> Self {
        self.owner = Some(Arc::new(owner));
        self
    }

    /// `A_n = {spiral_position(n, j)}`, a partition of `N`.
    pub fn spiral() -> Self {
        Self::new("spiral", true, |n| Ok(Arc::new(spiral_column(n)) as Source)).with_owner(|v| Some(spiral_pair(v)))
    }

    /// `A_n = {2^n (2k+1)}`. Members past `n = 62` overflow.
    pub fn dyadic_odd() -> Self {
        Self::new("dyadic-odd", true, |n| {
            if n >= 63 {
                return Err(Error::horizon(format!("member {n} of dyadic-odd overflows 64 bits")));
            }
            Ok(Arc::new(
                StreamSet::from_fn(format!("2^{n}*odd"), move |k| k.checked_mul(2)?.checked_add(1)?.checked_mul(1 << n))
                    .with_member(move |v| v != 0 && v.trailing_zeros() as u64 == n),
            ) as Source)
        })
        .with_owner(|v| (v != 0).then(|| (v.trailing_zeros() as u64, ((v >> v.trailing_zeros()) - 1) / 2)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_prepared(&self) -> bool {
        self.prepared
    }

    pub fn get(&self, n: u64) -> Result<Source> {
        if let Some(a) = self.cache.lock().unwrap().get(&n) {
            return Ok(a.clone());
        }
        let a = (self.member)(n)?;
        self.cache.lock().unwrap().insert(n, a.clone());
        Ok(a)
    }

    /// `A_n(j)`.
    pub fn at(&self, n: u64, j: u64) -> Result<u64> {
        nth(&*self.get(n)?, j)
    }

    /// `(n, j)` with `A_n(j) = v`, if `v` is covered.
    pub fn owner(&self, v: u64) -> Result<Option<(u64, u64)>> {
        if let Some(o) = &self.owner {
            return Ok(o(v));
        }
        let mut n = 0;
        while self.at(n, 0)? <= v {
            if let Some(j) = self.get(n)?.position(v)? {
                return Ok(Some((n, j)));
            }
            n += 1;
        }
        Ok(None)
    }

    fn require_prepared(&self) -> Result<()> {
        if self.prepared {
            Ok(())
        } else {
            Err(Error::Precondition(format!("family {} is not prepared", self.name)))
        }
    }
}

/// `{spiral_position(n, j) : j}`.
pub fn spiral_column(n: u64) -> StreamSet {
    StreamSet::from_fn(format!("Q_{n}"), move |j| Some(spiral_position(n, j))).with_member(move |v| spiral_pair(v).0 == n)
}

/// Records the largest index read from the wrapped set.
pub struct Recorded {
    inner: Source,
    reads: AtomicU64,
}

impl Recorded {
    pub fn new(inner: Source) -> Arc<Self> {
        Arc::new(Recorded { inner, reads: AtomicU64::new(0) })
    }

    /// One more than the largest index read so far.
    pub fn reads(&self) -> u64 {
        self.reads.load(Ordering::SeqCst)
    }
}

impl Enumerate for Recorded {
    fn get(&self, k: u64) -> Result<Option<u64>> {
        self.reads.fetch_max(k + 1, Ordering::SeqCst);
        self.inner.get(k)
    }
}

// the increasing enumeration of {value(n)} when value(n) > lower(n) and lower increases
fn sorted_blocks(
    lower: impl Fn(u64) -> Result<u64> + Send + Sync + 'static,
    value: impl Fn(u64) -> Result<u64> + Send + Sync + 'static,
) -> Recurrent {
    Recurrent::new(move |prev: &[u64]| {
        let last = prev.last().copied();
        let mut best: Option<u64> = None;
        let mut n = 0;
        loop {
            if let Some(b) = best {
                if lower(n)? >= b {
                    return Ok(Some(b));
                }
            }
            let v = value(n)?;
            if last.map_or(true, |l| v > l) && best.map_or(true, |b| v < b) {
                best = Some(v);
            }
            n += 1;
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MadRecord {
    pub block: u64,
    pub member: u64,
    pub index: u64,
    pub value: u64,
}

/// Block `n` of the mad coding.
pub fn phi_mad_block(fam: &MadFamily, x: &dyn Enumerate, n: u64) -> Result<MadRecord> {
    let member = nth(x, 2 * n)?;
    let index = nth(x, 2 * n + 1)?;
    Ok(MadRecord { block: n, member, index, value: fam.at(member, index)? })
}

pub fn phi_mad_blocks(fam: &MadFamily, x: &dyn Enumerate, count: u64) -> Result<Vec<MadRecord>> {
    fam.require_prepared()?;
    (0..count).map(|n| phi_mad_block(fam, x, n)).collect()
}

/// `Phi(x)` in increasing order.
pub fn phi_mad(fam: &MadFamily, x: Source) -> Result<Source> {
    fam.require_prepared()?;
    let (f1, f2) = (fam.clone(), fam.clone());
    Ok(Arc::new(sorted_blocks(move |n| f1.at(2 * n, 0), move |n| Ok(phi_mad_block(&f2, &*x, n)?.value))))
}

/// Whether `p` is in `Phi(x)`, with the number of entries of `x` consulted.
///
/// Only blocks `n` with `A_{2n}(0) <= p` can produce `p`.
pub fn phi_mad_member(fam: &MadFamily, x: Source, p: u64) -> Result<(bool, u64)> {
    fam.require_prepared()?;
    let rec = Recorded::new(x);
    let mut n = 0;
    let mut found = false;
    while fam.at(2 * n, 0)? <= p {
        if phi_mad_block(fam, &*rec, n)?.value == p {
            found = true;
            break;
        }
        n += 1;
    }
    Ok((found, rec.reads()))
}

/// `b_n = n(n+5)/2`, the first index of ed block `n`.
pub fn ed_block_base(n: u64) -> u64 {
    n * (n + 5) / 2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdRecord {
    pub block: u64,
    pub member: u64,
    /// `x(b_n + n + 2)`: which column of the member.
    pub col_index: u64,
    /// `x(b_n + 1 + i)` for `i <= n`.
    pub rows: Vec<u64>,
    pub points: Vec<(u64, u64)>,
}

pub fn phi_ed_block(fam: &GridFamily, x: &dyn Enumerate, n: u64) -> Result<EdRecord> {
    let b = ed_block_base(n);
    let member = nth(x, b)?;
    let col_index = nth(x, b + n + 2)?;
    let rows = (0..=n).map(|i| nth(x, b + 1 + i)).collect::<Result<Vec<_>>>()?;
    let a = fam.get(member)?;
    let points = rows.iter().map(|&k| a.at(col_index, k)).collect::<Result<Vec<_>>>()?;
    Ok(EdRecord { block: n, member, col_index, rows, points })
}

pub fn phi_ed_blocks(fam: &GridFamily, x: &dyn Enumerate, count: u64) -> Result<Vec<EdRecord>> {
    (0..count).map(|n| phi_ed_block(fam, x, n)).collect()
}

fn first_column(fam: &GridFamily, n: u64) -> Result<u64> {
    fam.get(n)?.col_index(0)
}

/// `Phi(x)` as a grid; column widths run `1, 2, 3, ...` along the blocks.
pub fn phi_ed(fam: &GridFamily, x: Source) -> Result<GridSet> {
    let (f1, f2, x2) = (fam.clone(), fam.clone(), x.clone());
    let dom: Arc<Recurrent> = Arc::new(sorted_blocks(
        move |n| first_column(&f1, ed_block_base(n)),
        move |n| {
            let b = phi_ed_block(&f2, &*x2, n)?;
            Ok(b.points[0].0)
        },
    ));
    let f3 = fam.clone();
    let universe = fam.get(0)?.universe();
    Ok(GridSet::new(
        "phi-ed",
        dom,
        move |m| {
            // the column comes from the block whose member owns it
            let mut n = 0;
            loop {
                if first_column(&f3, ed_block_base(n))? > m {
                    return Err(Error::Precondition(format!("column {m} is not in Phi(x)")));
                }
                let b = phi_ed_block(&f3, &*x, n)?;
                if b.points[0].0 == m {
                    let mut ks: Vec<u64> = b.points.iter().map(|p| p.1).collect();
                    ks.sort_unstable();
                    return Ok(Arc::new(FiniteSeq::new(ks)?) as Source);
                }
                n += 1;
            }
        },
        universe,
    ))
}

/// Whether the point `(a, b)` is in `Phi(x)`, with the entries of `x` consulted.
pub fn phi_ed_member(fam: &GridFamily, x: Source, a: u64, b: u64) -> Result<(bool, u64)> {
    let rec = Recorded::new(x);
    let mut n = 0;
    let mut found = false;
    while first_column(fam, ed_block_base(n))? <= a {
        let blk = phi_ed_block(fam, &*rec, n)?;
        if blk.points[0].0 == a {
            found = blk.points.iter().any(|p| p.1 == b);
            break;
        }
        n += 1;
    }
    Ok((found, rec.reads()))
}

/// A family `n -> A_n` of `++` subsets of `S_alpha`.
#[derive(Clone)]
pub struct FinFamily {
    name: String,
    alpha: Ordinal,
    member: Arc<dyn Fn(u64) -> Result<LazyTree> + Send + Sync>,
    cache: Arc<Mutex<HashMap<u64, LazyTree>>>,
}

impl FinFamily {
    pub fn new(name: impl Into<String>, alpha: Ordinal, member: impl Fn(u64) -> Result<LazyTree> + Send + Sync + 'static) -> Self {
        FinFamily { name: name.into(), alpha, member: Arc::new(member), cache: Arc::default() }
    }

    /// `A_n` is all of `S_alpha` with first entries in the spiral column `Q_n`.
    pub fn spiral_full(alpha: &Ordinal) -> Self {
        let a = alpha.clone();
        Self::new("spiral-full", alpha.clone(), move |n| {
            Ok(LazyTree::full(&a).with_root_dom(Arc::new(spiral_column(n))))
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alpha(&self) -> &Ordinal {
        &self.alpha
    }

    pub fn get(&self, n: u64) -> Result<LazyTree> {
        if let Some(a) = self.cache.lock().unwrap().get(&n) {
            return Ok(a.clone());
        }
        let a = (self.member)(n)?;
        self.cache.lock().unwrap().insert(n, a.clone());
        Ok(a)
    }

    /// `A_n[0]`, the least first entry of `A_n`.
    pub fn first(&self, n: u64) -> Result<u64> {
        let a = self.get(n)?;
        let dom = a.dom().ok_or_else(|| Error::Precondition(format!("A_{n} is a leaf")))?;
        nth(&**dom, 0)
    }
}

/// `m(x, n, t)`: entry `i` is `x(3 pi(n^t|(i+1)) + 2)`.
pub fn m_seq(x: &dyn Enumerate, n: u64, t: &[u64]) -> Result<Seq> {
    let mut s = vec![n];
    let mut out = Vec::with_capacity(t.len());
    for &v in t {
        s.push(v);
        out.push(nth(x, 3 * pi(&s)? as u64 + 2)?);
    }
    Ok(out)
}

/// `(k_{x,n}, K_{x,n})`.
pub fn fin_block_root(fam: &FinFamily, x: &dyn Enumerate, n: u64) -> Result<(u64, LazyTree)> {
    let a = fam.get(nth(x, 3 * n)?)?;
    let dom = a.dom().ok_or_else(|| Error::Precondition("family member is a leaf".into()))?;
    let k = nth(&**dom, nth(x, 3 * n + 1)?)?;
    Ok((k, a.child_unchecked(k)?))
}

// the block owning root entry k
fn fin_block_of(fam: &FinFamily, x: &dyn Enumerate, k: u64) -> Result<Option<(u64, LazyTree)>> {
    let mut n = 0;
    while fam.first(3 * n)? <= k {
        let (kn, kk) = fin_block_root(fam, x, n)?;
        if kn == k {
            return Ok(Some((n, kk)));
        }
        n += 1;
    }
    Ok(None)
}

struct PhiFinDom {
    x: Source,
    n: u64,
    s: Seq,
    kdom: Source,
}

impl Enumerate for PhiFinDom {
    fn get(&self, l: u64) -> Result<Option<u64>> {
        let mut seq = Vec::with_capacity(self.s.len() + 2);
        seq.push(self.n);
        seq.extend_from_slice(&self.s);
        seq.push(l);
        let idx = nth(&*self.x, 3 * pi(&seq)? as u64 + 2)?;
        Ok(Some(nth(&*self.kdom, idx)?))
    }

    fn position(&self, v: u64) -> Result<Option<u64>> {
        let Some(i) = self.kdom.position(v)? else { return Ok(None) };
        let Some(j) = self.x.position(i)? else { return Ok(None) };
        if j % 3 != 2 {
            return Ok(None);
        }
        let seq = pi_inverse((j - 2) / 3)?;
        let ok = seq.len() == self.s.len() + 2 && seq[0] == self.n && seq[1..=self.s.len()] == self.s[..];
        Ok(ok.then(|| *seq.last().unwrap()))
    }
}

fn phi_fin_node(x: Source, n: u64, s: Seq, k: LazyTree) -> LazyTree {
    let LazyTree::Node(_) = &k else { return LazyTree::Leaf };
    let kdom = k.dom().unwrap().clone();
    let dom = Arc::new(PhiFinDom { x: x.clone(), n, s: s.clone(), kdom });
    LazyTree::node(k.alpha(), dom, move |v| {
        let mut s2 = s.clone();
        // the index l is recovered from the domain itself
        let d = PhiFinDom { x: x.clone(), n, s: s.clone(), kdom: k.dom().unwrap().clone() };
        let l = d.position(v)?.ok_or_else(|| Error::Precondition(format!("{v} is not in the domain at {}", fmt_seq(&s))))?;
        s2.push(l);
        Ok(phi_fin_node(x.clone(), n, s2, k.child_unchecked(v)?))
    })
}

/// The block whose root is `k`, if any.
pub fn fin_block_owner(fam: &FinFamily, x: &dyn Enumerate, k: u64) -> Result<Option<u64>> {
    Ok(fin_block_of(fam, x, k)?.map(|(n, _)| n))
}

/// Block `n` of `Phi(x)`: its root and the subtree below it.
pub fn phi_fin_block(fam: &FinFamily, x: Source, n: u64) -> Result<(u64, LazyTree)> {
    let (k, kk) = fin_block_root(fam, &*x, n)?;
    Ok((k, phi_fin_node(x, n, vec![], kk)))
}

/// `Phi(x)` as a lazy subset of `S_alpha`.
pub fn phi_fin(fam: &FinFamily, x: Source) -> Result<LazyTree> {
    let (f1, f2, x1, x2) = (fam.clone(), fam.clone(), x.clone(), x.clone());
    let root_dom = Arc::new(sorted_blocks(move |n| f1.first(3 * n), move |n| Ok(fin_block_root(&f2, &*x1, n)?.0)));
    let f3 = fam.clone();
    Ok(LazyTree::node(fam.alpha.clone(), root_dom, move |k| {
        let (n, kk) = fin_block_of(&f3, &*x2, k)?.ok_or_else(|| Error::Precondition(format!("{k} is no block root")))?;
        Ok(phi_fin_node(x2.clone(), n, vec![], kk))
    }))
}

/// The element `k_{x,n}^K[m(x,n,t)_K]` picked by the index stream `t`.
///
/// Computed straight from the definition through a terminal cut in `K`.
pub fn phi_fin_element(fam: &FinFamily, x: &dyn Enumerate, n: u64, t: &[u64]) -> Result<Seq> {
    let (k, kk) = fin_block_root(fam, x, n)?;
    let mut out = vec![k];
    if kk.is_leaf() {
        return Ok(out);
    }
    let m = m_seq(x, n, t)?;
    let cut = kk.terminal_cut(&crate::sets::Prefix(m), t.len())?;
    out.extend(kk.evaluate(&cut)?);
    Ok(out)
}

/// Whether `p` is in `Phi(x)`, with the entries of `x` consulted.
///
/// Only blocks with `A_{3n}[0] <= p(0)` are tried, and at depth `i` only
/// `l` with `3 pi(n^s^l) + 2 <= p(i)`.
pub fn phi_fin_member(fam: &FinFamily, x: Source, p: &[u64]) -> Result<(bool, u64)> {
    let rec = Recorded::new(x);
    let verdict = phi_fin_member_inner(fam, &*rec, p)?;
    Ok((verdict, rec.reads()))
}

fn phi_fin_member_inner(fam: &FinFamily, x: &dyn Enumerate, p: &[u64]) -> Result<bool> {
    let Some(&p0) = p.first() else { return Ok(false) };
    let mut n = 0;
    let mut block = None;
    while fam.first(3 * n)? <= p0 {
        let (k, kk) = fin_block_root(fam, x, n)?;
        if k == p0 {
            block = Some(kk);
            break;
        }
        n += 1;
    }
    let Some(mut node) = block else { return Ok(false) };
    let mut seq = vec![n];
    for &target in &p[1..] {
        let Some(dom) = node.dom().cloned() else { return Ok(false) };
        let mut hit = None;
        for l in 0.. {
            seq.push(l);
            let j = 3 * pi(&seq)? as u64 + 2;
            seq.pop();
            if j > target {
                break;
            }
            let idx = nth(x, j)?;
            if idx > target {
                break;
            }
            let v = nth(&*dom, idx)?;
            if v >= target {
                if v == target {
                    hit = Some(l);
                }
                break;
            }
        }
        let Some(l) = hit else { return Ok(false) };
        seq.push(l);
        node = node.child_unchecked(target)?;
    }
    Ok(node.is_leaf())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinRecord {
    pub block: u64,
    pub root: u64,
    /// index path below the root
    pub t: Seq,
    /// `m(x, n, t)`: positions used in the member's domains
    pub m: Seq,
    pub element: Seq,
}

/// Elements of `Phi(x)` from the first `blocks` blocks, `width` branches per node.
pub fn phi_fin_records(fam: &FinFamily, x: Source, blocks: u64, depth: usize, width: usize) -> Result<Vec<FinRecord>> {
    let mut out = Vec::new();
    for n in 0..blocks {
        let (k, kk) = fin_block_root(fam, &*x, n)?;
        let node = phi_fin_node(x.clone(), n, vec![], kk);
        let mut path = vec![];
        let mut idx = vec![];
        collect_fin(&node, depth, width, &mut path, &mut idx, &mut |t, e| {
            let m = m_seq(&*x, n, t)?;
            let mut element = vec![k];
            element.extend_from_slice(e);
            out.push(FinRecord { block: n, root: k, t: t.to_vec(), m, element });
            Ok(())
        })?;
    }
    Ok(out)
}

fn collect_fin(
    node: &LazyTree,
    depth: usize,
    width: usize,
    path: &mut Seq,
    idx: &mut Seq,
    emit: &mut dyn FnMut(&[u64], &[u64]) -> Result<()>,
) -> Result<()> {
    match node {
        LazyTree::Leaf => emit(idx, path),
        LazyTree::Node(_) if depth == 0 => Ok(()),
        LazyTree::Node(_) => {
            let dom = node.dom().unwrap().clone();
            for l in 0..width as u64 {
                let Some(v) = dom.get(l)? else { break };
                path.push(v);
                idx.push(l);
                collect_fin(&node.child_unchecked(v)?, depth - 1, width, path, idx, emit)?;
                path.pop();
                idx.pop();
            }
            Ok(())
        }
    }
}

/// Three-valued answer for `Phi(z) subset A` against a finite slice of the family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum PVerdict {
    /// Some slice member contains the first `checked` elements of `Phi(z)`.
    HoldsSoFar { member: usize, checked: u64 },
    /// Every slice member misses one of the first `checked` elements.
    Refuted { checked: u64 },
    Unknown { reason: String },
}

/// Tests `exists A in slice: Phi(z) subset A` on the first `horizon` elements.
pub fn p_set_member(fam: &MadFamily, z: Source, slice: &[Source], horizon: u64) -> PVerdict {
    let elems = match phi_mad(fam, z).and_then(|p| p.prefix(horizon as usize)) {
        Ok(e) => e,
        Err(e) => return PVerdict::Unknown { reason: e.to_string() },
    };
    for (i, a) in slice.iter().enumerate() {
        let mut all = true;
        for &v in &elems {
            match a.contains(v) {
                Ok(true) => {}
                Ok(false) => {
                    all = false;
                    break;
                }
                Err(e) => return PVerdict::Unknown { reason: e.to_string() },
            }
        }
        if all {
            return PVerdict::HoldsSoFar { member: i, checked: horizon };
        }
    }
    PVerdict::Refuted { checked: horizon }
}

/// Names accepted in family descriptors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FamilyDesc {
    Mad { name: String },
    Ed { name: String },
    Fin { name: String, alpha: Ordinal },
}

pub enum FamilySpec {
    Mad(MadFamily),
    Ed(GridFamily),
    Fin(FinFamily),
}

impl FamilyDesc {
    pub fn build(&self) -> Result<FamilySpec> {
        match self {
            FamilyDesc::Mad { name } => match name.as_str() {
                "spiral" => Ok(FamilySpec::Mad(MadFamily::spiral())),
                "dyadic-odd" => Ok(FamilySpec::Mad(MadFamily::dyadic_odd())),
                _ => Err(Error::parse("family.name", format!("unknown mad family {name:?}"))),
            },
            FamilyDesc::Ed { name } => match name.as_str() {
                "spiral-delta" => Ok(FamilySpec::Ed(spiral_delta_family())),
                _ => Err(Error::parse("family.name", format!("unknown ed family {name:?}"))),
            },
            FamilyDesc::Fin { name, alpha } => match name.as_str() {
                "spiral-full" if !alpha.is_zero() => Ok(FamilySpec::Fin(FinFamily::spiral_full(alpha))),
                "spiral-full" => Err(Error::parse("family.alpha", "alpha must be at least 1")),
                _ => Err(Error::parse("family.name", format!("unknown fin family {name:?}"))),
            },
        }
    }
}

pub fn render_mad(records: &[MadRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let _ = writeln!(out, "block {:>3}: A_{}({}) = {}", r.block, r.member, r.index, r.value);
    }
    out
}

/// Columns left to right, rows bottom to top; a point shows its block number.
pub fn render_ed(records: &[EdRecord]) -> String {
    let mut cols: Vec<(u64, u64, &EdRecord)> = records.iter().map(|r| (r.points[0].0, r.block, r)).collect();
    cols.sort_by_key(|c| (c.0, c.1));
    let top = records.iter().flat_map(|r| r.points.iter().map(|p| p.1)).max().unwrap_or(0);
    let mut out = String::new();
    for row in (0..=top).rev() {
        let _ = write!(out, "{row:>4} |");
        for (_, b, r) in &cols {
            if r.points.iter().any(|p| p.1 == row) {
                let _ = write!(out, " {b:>3}");
            } else {
                out.push_str("   .");
            }
        }
        out.push('\n');
    }
    out.push_str("     +");
    out.push_str(&"----".repeat(cols.len()));
    out.push('\n');
    out.push_str("      ");
    for (m, _, _) in &cols {
        let _ = write!(out, "{m:>4}");
    }
    out.push('\n');
    for r in records {
        let labels: Vec<String> = r.rows.iter().map(|k| format!("A_{}[{},{}]", r.member, r.col_index, k)).collect();
        let _ = writeln!(out, "block {}: {}", r.block, labels.join(" "));
    }
    out
}

/// One line per element: block, the steering positions `m`, and the element.
pub fn render_fin(records: &[FinRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let _ = writeln!(
            out,
            "block {} root {} t={} rows x(3pi(n,t|i)+2)={} -> {}",
            r.block,
            r.root,
            fmt_seq(&r.t),
            fmt_seq(&r.m),
            fmt_seq(&r.element)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::Prefix;

    #[test]
    fn figure_one() {
        let x: Source = Arc::new(Prefix(vec![0, 2, 3, 4, 5, 6]));
        let r = phi_mad_blocks(&MadFamily::spiral(), &*x, 2).unwrap();
        assert_eq!((r[0].member, r[0].index), (0, 2));
        assert_eq!((r[1].member, r[1].index), (3, 4));
    }

    #[test]
    fn dyadic_first() {
        let x: Source = Arc::new(StreamSet::naturals());
        let p = phi_mad(&MadFamily::dyadic_odd(), x).unwrap();
        assert_eq!(p.get(0).unwrap(), Some(3));
    }

    #[test]
    fn figure_two() {
        let x: Source = Arc::new(Prefix(vec![0, 2, 5, 7, 8, 10, 11]));
        let r = phi_ed_blocks(&spiral_delta_family(), &*x, 2).unwrap();
        assert_eq!((r[0].member, r[0].col_index, r[0].rows.clone()), (0, 5, vec![2]));
        assert_eq!((r[1].member, r[1].col_index, r[1].rows.clone()), (7, 11, vec![8, 10]));
    }

    #[test]
    fn fin_tree_is_plusplus() {
        for a in ["2", "3", "w"] {
            let alpha: Ordinal = a.parse().unwrap();
            let fam = FinFamily::spiral_full(&alpha);
            let x: Source = Arc::new(StreamSet::naturals());
            let t = phi_fin(&fam, x.clone()).unwrap();
            t.plusplus_certify(&alpha, 3, 4).unwrap();
            for e in t.window_elements(3, 3).unwrap() {
                assert!(phi_fin_member(&fam, x.clone(), &e).unwrap().0, "{a} {e:?}");
            }
        }
    }
}
