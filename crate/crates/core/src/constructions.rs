//! The hide and split recursions behind the dichotomous codings.
//!
//! Each construction produces `y` lazily, a batch of entries at a time (two
//! for mad hide, four for mad split, `k+3` for ed block `k`, three for fin step
//! `i`). Every `min` search is bounded by a step budget and logged in the trace.
//!
//! The target sets `A` and `B` are supplied as predicates. [`synthetic`] builds
//! ones that satisfy the preconditions for the shipped families.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::coding::{
    ed_block_base, fin_block_root, m_seq, phi_ed_block, phi_fin_block, phi_mad_block, FinFamily, MadFamily,
};
use crate::ed::GridFamily;
use crate::error::{Error, Result};
use crate::sets::{nth, Enumerate, Source};
use crate::seqcode::{pi, pi_inverse};
use crate::tree::{fmt_seq, LazyTree, Seq};

/// One `min` search: which entry of `y` it fixed and how many candidates it looked at.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub index: u64,
    pub rule: String,
    pub inspected: u64,
    pub value: u64,
}

type StepFn = dyn Fn(&[u64], &mut Vec<TraceStep>) -> Result<Vec<u64>> + Send + Sync;

struct Batched {
    memo: Mutex<Vec<u64>>,
    trace: Mutex<Vec<TraceStep>>,
    step: Box<StepFn>,
}

impl Enumerate for Batched {
    fn get(&self, k: u64) -> Result<Option<u64>> {
        let mut memo = self.memo.lock().unwrap();
        while memo.len() as u64 <= k {
            let mut trace = self.trace.lock().unwrap();
            let batch = (self.step)(&memo, &mut trace)?;
            if batch.is_empty() {
                return Err(Error::Precondition("construction step produced nothing".into()));
            }
            for v in batch {
                if let Some(&last) = memo.last() {
                    if v <= last {
                        return Err(Error::violation(
                            format!("y({})", memo.len()),
                            format!("{v} does not exceed the previous entry {last}"),
                        ));
                    }
                }
                memo.push(v);
            }
        }
        Ok(Some(memo[k as usize]))
    }
}

/// A lazily built `y` with the record of how each entry was chosen.
#[derive(Clone)]
pub struct Construction {
    inner: Arc<Batched>,
}

impl Construction {
    fn new(step: impl Fn(&[u64], &mut Vec<TraceStep>) -> Result<Vec<u64>> + Send + Sync + 'static) -> Self {
        Construction {
            inner: Arc::new(Batched { memo: Mutex::default(), trace: Mutex::default(), step: Box::new(step) }),
        }
    }

    pub fn y(&self) -> Source {
        self.inner.clone()
    }

    /// Forces and returns `y(0..n)`.
    pub fn prefix(&self, n: usize) -> Result<Vec<u64>> {
        self.inner.prefix(n)
    }

    /// Entries of `y` forced so far.
    pub fn known(&self) -> Vec<u64> {
        self.inner.memo.lock().unwrap().clone()
    }

    /// Steps taken so far, in order.
    pub fn trace(&self) -> Vec<TraceStep> {
        self.inner.trace.lock().unwrap().clone()
    }
}

// the already defined part of y, as a set
struct Known<'a>(&'a [u64]);

impl Enumerate for Known<'_> {
    fn get(&self, k: u64) -> Result<Option<u64>> {
        match self.0.get(k as usize) {
            Some(&v) => Ok(Some(v)),
            None => Err(Error::Precondition(format!("y({k}) is read before it is defined"))),
        }
    }

    fn position(&self, v: u64) -> Result<Option<u64>> {
        Ok(self.0.binary_search(&v).ok().map(|i| i as u64))
    }
}

// s followed by 0, 1, 2, ...
struct ThenIdentity<'a>(&'a [u64]);

impl Enumerate for ThenIdentity<'_> {
    fn get(&self, k: u64) -> Result<Option<u64>> {
        let n = self.0.len() as u64;
        Ok(Some(if k < n { self.0[k as usize] } else { k - n }))
    }
}

/// `min{c >= start : accept(c)}`, giving up after `budget` candidates.
fn search<T>(
    start: u64,
    budget: u64,
    what: impl FnOnce() -> String,
    mut accept: impl FnMut(u64) -> Result<Option<T>>,
) -> Result<(u64, T, u64)> {
    for inspected in 1..=budget {
        let c = start + inspected - 1;
        if let Some(t) = accept(c)? {
            return Ok((c, t, inspected));
        }
    }
    Err(Error::horizon(format!("{} found nothing within {budget} candidates", what())))
}

/// Index of the least element of `x` above `v` (`0` for `None`).
fn index_above(x: &dyn Enumerate, v: Option<u64>) -> Result<u64> {
    match x.successor(v)? {
        Some((k, _)) => Ok(k),
        None => Err(Error::horizon(format!("set ends below {v:?}"))),
    }
}

fn push(trace: &mut Vec<TraceStep>, index: usize, rule: impl Into<String>, inspected: u64, value: u64) {
    trace.push(TraceStep { index: index as u64, rule: rule.into(), inspected, value });
}

/// Replaces `A_n` by `A_n minus the union of A_i, i < n`, then orders members by minimum.
///
/// Each difference is filtered lazily; `budget` bounds the candidates scanned
/// for one element, so a member whose tail dies is reported as a horizon error.
pub fn disjointify_mad(raw: Vec<Source>, budget: u64) -> Result<MadFamily> {
    let raw = Arc::new(raw);
    let mut diffs: Vec<Source> = Vec::with_capacity(raw.len());
    for n in 0..raw.len() {
        let r = raw.clone();
        let keep = move |v: u64| -> Result<bool> {
            for a in &r[..n] {
                if a.contains(v)? {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        diffs.push(Arc::new(crate::sets::Filtered::new(raw[n].clone(), keep, budget)));
    }
    let mut order: Vec<(u64, usize)> = Vec::with_capacity(diffs.len());
    for (n, d) in diffs.iter().enumerate() {
        let first = d
            .get(0)?
            .ok_or_else(|| Error::violation(format!("A_{n}"), "nothing is left after removing earlier members"))?;
        order.push((first, n));
    }
    order.sort_unstable();
    let members: Vec<Source> = order.iter().map(|&(_, n)| diffs[n].clone()).collect();
    let len = members.len() as u64;
    Ok(MadFamily::new("disjointified", true, move |n| {
        members.get(n as usize).cloned().ok_or_else(|| Error::Precondition(format!("family has {len} members, not {}", n + 1)))
    }))
}

/// `y = {x(2n_k), x(2n_k+1)}` where `n_k` runs over the blocks of `Phi(x)` that land in `A`.
pub fn mad_hide(
    fam: &MadFamily,
    x: Source,
    in_a: impl Fn(u64) -> Result<bool> + Send + Sync + 'static,
    budget: u64,
) -> Construction {
    let fam = fam.clone();
    Construction::new(move |prev, trace| {
        let start = match prev.last() {
            None => 0,
            Some(&v) => x.position(v)?.ok_or_else(|| Error::Precondition("y left x".into()))? / 2 + 1,
        };
        let k = prev.len() / 2;
        let (n, _, inspected) = search(start, budget, || format!("n_{k}"), |n| {
            Ok(in_a(phi_mad_block(&fam, &*x, n)?.value)?.then_some(()))
        })?;
        let pair = vec![nth(&*x, 2 * n)?, nth(&*x, 2 * n + 1)?];
        push(trace, prev.len(), format!("n_{k}: block value in A"), inspected, pair[0]);
        Ok(pair)
    })
}

/// Alternates escaping from `A` and landing in it, four entries at a time.
///
/// 1. `y(i)`: the least even-indexed element of `x` above `y(i-1)`
/// 2. `y(i+1)`: the least `u` in `x` above `y(i)` with `A_{y(i)}(u)` outside `A`
/// 3. `y(i+2)`: the least even-indexed element of `x` above `y(i+1)`
/// 4. `y(i+3)`: the element of `x` right after `y(i+2)`
///
/// `bound(n)` promises `A_n intersect A` lies below `bound(n)`; a point of `A`
/// at or above it is reported as a violation naming `n`.
pub fn mad_split(
    fam: &MadFamily,
    x: Source,
    in_a: impl Fn(u64) -> Result<bool> + Send + Sync + 'static,
    bound: impl Fn(u64) -> Result<u64> + Send + Sync + 'static,
    budget: u64,
) -> Construction {
    let fam = fam.clone();
    Construction::new(move |prev, trace| {
        let i = prev.len();
        let even_above = |v: Option<u64>| -> Result<(u64, u64)> {
            let k = index_above(&*x, v)?;
            let k = k + k % 2;
            Ok((nth(&*x, k)?, k))
        };
        let (y0, k0) = even_above(prev.last().copied())?;
        push(trace, i, "least even-indexed element of x", 1, y0);
        let member = fam.get(y0)?;
        let b = bound(y0)?;
        let (_, y1, inspected) = search(k0 + 1, budget, || format!("escape from A at y({})", i + 1), |k| {
            let u = nth(&*x, k)?;
            let v = nth(&*member, u)?;
            if !in_a(v)? {
                return Ok(Some(u));
            }
            if v >= b {
                return Err(Error::violation(format!("A_{y0}"), format!("{v} is in A but the bound is {b}")));
            }
            Ok(None)
        })?;
        push(trace, i + 1, format!("least u in x above y({i}) with A_{y0}(u) outside A"), inspected, y1);
        let (y2, k2) = even_above(Some(y1))?;
        push(trace, i + 2, "least even-indexed element of x", 1, y2);
        let y3 = nth(&*x, k2 + 1)?;
        push(trace, i + 3, "next element of x", 1, y3);
        Ok(vec![y0, y1, y2, y3])
    })
}

// one hiding block: (entries, n_k, candidates inspected)
fn ed_hide_block(
    fam: &GridFamily,
    h: &dyn Enumerate,
    in_a: &dyn Fn(u64, u64) -> Result<bool>,
    k: u64,
    prev_last: Option<u64>,
    budget: u64,
) -> Result<(Vec<u64>, u64, u64)> {
    // H(b_n) increases with n, so start at the first n with H(b_n) above y(b_k - 1)
    let mut start = 0;
    if let Some(v) = prev_last {
        while nth(h, ed_block_base(start))? <= v {
            start += 1;
        }
    }
    let (n, rows, inspected) = search(start, budget, || format!("n_{k}"), |n| {
        if n < k {
            return Ok(None);
        }
        let blk = phi_ed_block(fam, h, n)?;
        let mut hits = Vec::new();
        for (&r, &(a, b)) in blk.rows.iter().zip(&blk.points) {
            if in_a(a, b)? {
                hits.push(r);
                if hits.len() as u64 == k + 1 {
                    return Ok(Some(hits));
                }
            }
        }
        Ok(None)
    })?;
    let b = ed_block_base(n);
    let mut out = vec![nth(h, b)?];
    out.extend(rows);
    out.push(nth(h, b + n + 2)?);
    Ok((out, n, inspected))
}

/// Block `k` of `y` copies the member and column of the least usable block of
/// `H`, keeping `k+1` rows whose points lie in `A`.
pub fn ed_hide(
    fam: &GridFamily,
    h: Source,
    in_a: impl Fn(u64, u64) -> Result<bool> + Send + Sync + 'static,
    budget: u64,
) -> Construction {
    let fam = fam.clone();
    Construction::new(move |prev, trace| {
        let k = ed_block_index(prev.len())?;
        let (out, n, inspected) = ed_hide_block(&fam, &*h, &in_a, k, prev.last().copied(), budget)?;
        push(trace, prev.len(), format!("n_{k} = {n}: k+1 rows in A"), inspected, out[0]);
        Ok(out)
    })
}

fn ed_block_index(len: usize) -> Result<u64> {
    let len = len as u64;
    let mut k = 0;
    while ed_block_base(k) < len {
        k += 1;
    }
    if ed_block_base(k) != len {
        return Err(Error::Precondition(format!("{len} is not a block boundary")));
    }
    Ok(k)
}

/// Even blocks hide in `A` as in [`ed_hide`]; odd blocks pick a column past
/// `l_{y_k}` with enough room and keep `k+1` rows outside `A`.
///
/// `l(n)` promises fewer than `l(n)` points of `A_n intersect A` in every column past `l(n)`.
pub fn ed_split(
    fam: &GridFamily,
    x: Source,
    in_a: impl Fn(u64, u64) -> Result<bool> + Send + Sync + 'static,
    l: impl Fn(u64) -> Result<u64> + Send + Sync + 'static,
    budget: u64,
) -> Construction {
    let fam = fam.clone();
    Construction::new(move |prev, trace| {
        let i = prev.len();
        let k = ed_block_index(i)?;
        let last = prev.last().copied();
        if k % 2 == 0 {
            let (out, n, inspected) = ed_hide_block(&fam, &*x, &in_a, k, last, budget)?;
            push(trace, i, format!("k={k} even, n_k = {n}: k+1 rows in A"), inspected, out[0]);
            return Ok(out);
        }
        let mut n = 0;
        if let Some(v) = last {
            while nth(&*x, ed_block_base(n))? <= v {
                n += 1;
            }
        }
        let yk = nth(&*x, ed_block_base(n))?;
        push(trace, i, format!("k={k} odd, n_k = {n}"), n + 1, yk);
        let pk = x.position(yk)?.unwrap();
        let lk = l(yk)?;
        let a = fam.get(yk)?;
        // |(y_k, m) cap x| = pos(m) - pos(y_k) - 1
        let first = pk + k + 3 + lk;
        let (pm, m, inspected) = search(first, budget, || format!("escape column for block {k}"), |p| {
            let m = nth(&*x, p)?;
            Ok((a.col_index(m)? > lk).then_some(m))
        })?;
        let c = a.col_index(m)?;
        let column = a.column_unchecked(c)?;
        let mut rows = Vec::with_capacity(k as usize + 1);
        let mut in_count = 0;
        for p in pk + 1..pm {
            let q = nth(&*x, p)?;
            let r = nth(&*column, q)?;
            if in_a(c, r)? {
                in_count += 1;
                if in_count >= lk {
                    return Err(Error::violation(
                        format!("A_{yk}"),
                        format!("column {c} has {in_count} points in A, bound l = {lk} (block k = {k})"),
                    ));
                }
            } else if rows.len() as u64 <= k {
                rows.push(q);
            }
        }
        if rows.len() as u64 <= k {
            return Err(Error::violation(format!("A_{yk}"), format!("only {} rows escape A in block k = {k}", rows.len())));
        }
        for (j, &q) in rows.iter().enumerate() {
            push(trace, i + 1 + j, format!("q_{j}: row outside A"), 0, q);
        }
        push(trace, i + k as usize + 2, format!("column past l = {lk} with room"), inspected, m);
        let mut out = vec![yk];
        out.extend(rows);
        out.push(m);
        Ok(out)
    })
}

/// Smallness oracle for fin splits: `small(f, s)` says whether the section of
/// `A_f intersect A` at `s` is small, or `None` when no certificate is available.
pub type SmallOracle = dyn Fn(u64, &[u64]) -> Result<Option<bool>> + Send + Sync;

struct FinCtx {
    fam: FinFamily,
    h: Source,
    b: LazyTree,
    small: Option<Arc<SmallOracle>>,
    budget: u64,
    state: Mutex<FinState>,
}

#[derive(Default)]
struct FinState {
    m: Vec<u64>,
    u: HashMap<u64, u64>,
}

impl FinCtx {
    fn is_small(&self, f: u64, s: &[u64]) -> Result<bool> {
        let small = self.small.as_ref().expect("split has an oracle");
        small(f, s)?.ok_or_else(|| {
            Error::Precondition(format!("no smallness certificate for the section of A_{f} and A at {}", fmt_seq(s)))
        })
    }

    fn step(&self, prev: &[u64], trace: &mut Vec<TraceStep>) -> Result<Vec<u64>> {
        let split = self.small.is_some();
        let h = &*self.h;
        let i = (prev.len() / 3) as u64;
        let seq = pi_inverse(i)?;
        let (n_i, t) = (seq[0], &seq[1..]);
        let tstar = &t[..t.len() - 1];
        let base = prev.len();

        // y(3i), y(3i+1)
        let start = match prev.last() {
            None => 0,
            Some(&v) => h.position(v)?.ok_or_else(|| Error::Precondition("y left H".into()))? / 3 + 1,
        };
        let hide_root = !split || i % 2 == 0;
        let (m_i, _, inspected) = search(start, self.budget, || format!("m_{i}"), |m| {
            if !hide_root {
                return Ok(Some(()));
            }
            let (k, _) = fin_block_root(&self.fam, h, m)?;
            let Some(dom) = self.b.dom() else { return Ok(None) };
            Ok(dom.contains(k)?.then_some(()))
        })?;
        let y0 = nth(h, 3 * m_i)?;
        push(trace, base, if hide_root { "m_i: root of H-block in dom(B)" } else { "m_i: first H-block above" }, inspected, y0);
        let y1 = if hide_root {
            let v = nth(h, 3 * m_i + 1)?;
            push(trace, base + 1, "H(3m_i+1)", 1, v);
            v
        } else {
            let a = self.fam.get(y0)?;
            let dom = a.dom().ok_or_else(|| Error::Precondition(format!("A_{y0} is a leaf")))?.clone();
            let (_, u, inspected) = search(3 * m_i + 1, self.budget, || format!("y({})", base + 1), |j| {
                let u = nth(h, j)?;
                let root = nth(&*dom, u)?;
                Ok(self.is_small(y0, &[root])?.then_some(u))
            })?;
            push(trace, base + 1, "least u in H with a small root section", inspected, u);
            u
        };
        self.state.lock().unwrap().m.push(m_i);

        // y(3i+2)
        let mut cur = prev.to_vec();
        cur.push(y0);
        cur.push(y1);
        let ys = Known(&cur);
        let (_, kk) = fin_block_root(&self.fam, &ys, n_i)?;
        let mstar = m_seq(&ys, n_i, tstar)?;
        let cut_len = if kk.is_leaf() {
            0
        } else {
            kk.terminal_cut(&ThenIdentity(&mstar), mstar.len() + self.budget as usize)?.len()
        };
        let f = cur[3 * n_i as usize];
        let root_idx = cur[3 * n_i as usize + 1];
        let node_at = |last: u64| -> Result<Seq> {
            let mut path = Vec::with_capacity(mstar.len() + 2);
            path.push(root_idx);
            path.extend_from_slice(&mstar);
            path.push(last);
            self.fam.get(f)?.evaluate(&path)
        };
        let y2 = if cut_len <= tstar.len() {
            let mut v = nth(h, 3 * m_i + 2)?;
            if v <= y1 {
                v = nth(h, index_above(h, Some(y1))?)?;
            }
            push(trace, base + 2, format!("T_{i} = {cut_len} <= |t_i|-1: H(3m_i+2)"), 1, v);
            v
        } else if !split || n_i % 2 == 0 {
            let mut prefix = vec![self.state.lock().unwrap().m[n_i as usize]];
            let mut s = vec![n_i];
            for &tj in tstar {
                s.push(tj);
                let key = pi(&s)? as u64;
                let u = *self.state.lock().unwrap().u.get(&key).ok_or_else(|| {
                    Error::Precondition(format!("u_{key} is needed at step {i} but was never set"))
                })?;
                prefix.push(u);
            }
            let (l, hl, inspected) = search(0, self.budget, || format!("u_{i}"), |l| {
                prefix.push(l);
                let idx = pi(&prefix);
                prefix.pop();
                let hl = nth(h, 3 * idx? as u64 + 2)?;
                if hl <= y1 {
                    return Ok(None);
                }
                Ok(self.b.in_tree(&node_at(hl)?)?.then_some(hl))
            })?;
            self.state.lock().unwrap().u.insert(i, l);
            push(trace, base + 2, format!("T_{i} = {cut_len}: u_{i} = {l}, node stays in T(B)"), inspected, hl);
            hl
        } else {
            let (_, u, inspected) = search(index_above(h, Some(y1))?, self.budget, || format!("y({})", base + 2), |j| {
                let u = nth(h, j)?;
                Ok(self.is_small(f, &node_at(u)?)?.then_some(u))
            })?;
            push(trace, base + 2, format!("T_{i} = {cut_len}: least u in H with a small section"), inspected, u);
            u
        };
        Ok(vec![y0, y1, y2])
    }
}

/// Builds `y` in triples so that `Phi(y)` stays inside `B`.
///
/// `B` must be a `++` subset of `Phi(H)`; the searches read it through `dom`
/// and `in_tree` only.
pub fn fin_hide(fam: &FinFamily, h: Source, b: LazyTree, budget: u64) -> Construction {
    let ctx = FinCtx { fam: fam.clone(), h, b, small: None, budget, state: Mutex::default() };
    Construction::new(move |prev, trace| ctx.step(prev, trace))
}

/// Even blocks of `Phi(y)` trace into `B`, odd blocks into small sections of `A`.
///
/// The root of an odd block is picked with a small section of `A_{y(3i)}
/// intersect A`; every later choice follows the parity of the block it extends.
pub fn fin_split(
    fam: &FinFamily,
    h: Source,
    b: LazyTree,
    small: impl Fn(u64, &[u64]) -> Result<Option<bool>> + Send + Sync + 'static,
    budget: u64,
) -> Construction {
    let ctx = FinCtx { fam: fam.clone(), h, b, small: Some(Arc::new(small)), budget, state: Mutex::default() };
    Construction::new(move |prev, trace| ctx.step(prev, trace))
}

/// How one block of `Phi(y)` sits relative to the target set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockAudit {
    pub block: u64,
    /// elements (mad, ed) or tree nodes (fin) examined
    pub checked: u64,
    pub inside: u64,
}

impl BlockAudit {
    pub fn all_inside(&self) -> bool {
        self.inside == self.checked
    }

    pub fn all_outside(&self) -> bool {
        self.inside == 0
    }
}

pub fn audit_mad(
    fam: &MadFamily,
    y: &dyn Enumerate,
    in_a: &dyn Fn(u64) -> Result<bool>,
    blocks: u64,
) -> Result<Vec<BlockAudit>> {
    (0..blocks)
        .map(|n| {
            let v = phi_mad_block(fam, y, n)?.value;
            Ok(BlockAudit { block: n, checked: 1, inside: in_a(v)? as u64 })
        })
        .collect()
}

pub fn audit_ed(
    fam: &GridFamily,
    y: &dyn Enumerate,
    in_a: &dyn Fn(u64, u64) -> Result<bool>,
    blocks: u64,
) -> Result<Vec<BlockAudit>> {
    (0..blocks)
        .map(|n| {
            let blk = phi_ed_block(fam, y, n)?;
            let mut inside = 0;
            for &(a, b) in &blk.points {
                inside += in_a(a, b)? as u64;
            }
            Ok(BlockAudit { block: n, checked: blk.points.len() as u64, inside })
        })
        .collect()
}

/// Nodes of block `n` of `Phi(y)` of length at most `depth`, `width` branches
/// per node, counted against `in_target` (membership in `T(A)` or `T(B)`).
pub fn audit_fin(
    fam: &FinFamily,
    y: Source,
    in_target: &dyn Fn(&[u64]) -> Result<bool>,
    blocks: u64,
    depth: usize,
    width: usize,
) -> Result<Vec<BlockAudit>> {
    let mut out = Vec::new();
    for n in 0..blocks {
        let (k, node) = phi_fin_block(fam, y.clone(), n)?;
        let mut audit = BlockAudit { block: n, checked: 0, inside: 0 };
        let mut path = vec![k];
        walk_nodes(&node, depth.saturating_sub(1), width, &mut path, &mut |p| {
            audit.checked += 1;
            audit.inside += in_target(p)? as u64;
            Ok(())
        })?;
        out.push(audit);
    }
    Ok(out)
}

fn walk_nodes(
    node: &LazyTree,
    depth: usize,
    width: usize,
    path: &mut Seq,
    visit: &mut dyn FnMut(&[u64]) -> Result<()>,
) -> Result<()> {
    visit(path)?;
    if depth == 0 {
        return Ok(());
    }
    let Some(dom) = node.dom().cloned() else { return Ok(()) };
    for l in 0..width as u64 {
        let Some(v) = dom.get(l)? else { break };
        path.push(v);
        walk_nodes(&node.child_unchecked(v)?, depth - 1, width, path, visit)?;
        path.pop();
    }
    Ok(())
}

/// Target sets meeting the preconditions, built from the blocks of `Phi(H)`.
///
/// `select(n)` decides which blocks of `Phi(H)` go into `A`.
pub mod synthetic {
    use super::*;
    use crate::coding::{fin_block_owner, phi_fin};
    use crate::sets::Filtered;

    pub type Select = Arc<dyn Fn(u64) -> bool + Send + Sync>;

    pub fn all() -> Select {
        Arc::new(|_| true)
    }

    pub fn even() -> Select {
        Arc::new(|n| n % 2 == 0)
    }

    /// `A = {A_{x(2n)}(x(2n+1)) : select(n)}`.
    pub fn mad_blocks(fam: &MadFamily, x: Source, select: Select) -> impl Fn(u64) -> Result<bool> + Send + Sync + Clone {
        let fam = fam.clone();
        move |v| {
            let Some((f, j)) = fam.owner(v)? else { return Ok(false) };
            let Some(p) = x.position(f)? else { return Ok(false) };
            Ok(p % 2 == 0 && nth(&*x, p + 1)? == j && select(p / 2))
        }
    }

    /// For `A = mad_blocks(x, select)`: `A_n intersect A` lies below the returned bound.
    pub fn mad_bounds(fam: &MadFamily, x: Source, select: Select) -> impl Fn(u64) -> Result<u64> + Send + Sync + Clone {
        let fam = fam.clone();
        move |n| match x.position(n)? {
            Some(p) if p % 2 == 0 && select(p / 2) => Ok(fam.at(n, nth(&*x, p + 1)?)? + 1),
            _ => Ok(0),
        }
    }

    /// `A` = the full columns that the selected blocks of `Phi(H)` use.
    pub fn ed_columns(fam: &GridFamily, h: Source, select: Select) -> impl Fn(u64, u64) -> Result<bool> + Send + Sync + Clone {
        let fam = fam.clone();
        move |a, _| {
            let mut n = 0;
            while fam.get(ed_block_base(n))?.col_index(0)? <= a {
                let b = ed_block_base(n);
                let member = fam.get(nth(&*h, b)?)?;
                if member.col_index(nth(&*h, b + n + 2)?)? == a {
                    return Ok(select(n));
                }
                n += 1;
            }
            Ok(false)
        }
    }

    /// Bounds `l_n` for `A = ed_columns(H, select)`.
    ///
    /// `A_f intersect A` is one column of `A_f` (of width `j+1`) or empty, so
    /// the small witness is `j+1` or `0`, and the bounds follow the usual recurrence.
    pub fn ed_bounds(h: Source, select: Select) -> impl Fn(u64) -> Result<u64> + Send + Sync + Clone {
        let memo: Arc<Mutex<Vec<u64>>> = Arc::default();
        move |f| {
            let mut l = memo.lock().unwrap();
            while l.len() as u64 <= f {
                let g = l.len() as u64;
                let w = match h.position(g)? {
                    Some(p) => match block_of_base(p) {
                        Some(n) if select(n) => nth(&*h, p + n + 2)? + 1,
                        _ => 0,
                    },
                    None => 0,
                };
                let prev = l.last().copied().unwrap_or(0);
                l.push((w + 1).max(prev + 1));
            }
            Ok(l[f as usize])
        }
    }

    fn block_of_base(p: u64) -> Option<u64> {
        let mut n = ((8 * p + 25) as f64).sqrt() as u64 / 2;
        n = n.saturating_sub(3);
        while ed_block_base(n) < p {
            n += 1;
        }
        (ed_block_base(n) == p).then_some(n)
    }

    /// The selected blocks of `Phi(H)`, a `++` subset of it.
    pub fn fin_blocks(fam: &FinFamily, h: Source, select: Select) -> Result<LazyTree> {
        let phi = phi_fin(fam, h.clone())?;
        let dom = phi.dom().expect("alpha >= 1").clone();
        let f2 = fam.clone();
        let keep = move |k: u64| -> Result<bool> {
            Ok(fin_block_owner(&f2, &*h, k)?.is_some_and(|n| select(n)))
        };
        Ok(phi.with_root_dom(Arc::new(Filtered::new(dom, keep, 1 << 16))))
    }

    /// `T(A)` for `A = B` plus, for each unselected block `m` of `Phi(H)`, the
    /// whole subtree of `A_{H(3m)}` at the root next to the block's own.
    pub fn fin_target(fam: &FinFamily, h: Source, b: LazyTree, select: Select) -> impl Fn(&[u64]) -> Result<bool> + Send + Sync + Clone {
        let fam = fam.clone();
        move |s| {
            if b.in_tree(s)? {
                return Ok(true);
            }
            let Some(&k) = s.first() else { return Ok(true) };
            let mut m = 0;
            while fam.first(3 * m)? <= k {
                if !select(m) {
                    let a = fam.get(nth(&*h, 3 * m)?)?;
                    let junk = nth(&**a.dom().unwrap(), nth(&*h, 3 * m + 1)? + 1)?;
                    if junk == k {
                        return a.in_tree(s);
                    }
                }
                m += 1;
            }
            Ok(false)
        }
    }

    /// Smallness for the set of [`fin_target`]: a section of `A_f intersect A`
    /// at a node of `A_f` is small exactly when the node misses `T(A)`.
    pub fn fin_small(
        fam: &FinFamily,
        h: Source,
        b: LazyTree,
        select: Select,
    ) -> impl Fn(u64, &[u64]) -> Result<Option<bool>> + Send + Sync + Clone {
        let target = fin_target(fam, h, b, select);
        move |_, s| Ok(Some(!target(s)?))
    }
}
