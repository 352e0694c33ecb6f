//! The tree domains `S_alpha` and subsets of them.
//!
//! Two tiers: [`ExplicitTreeSet`] holds finitely many sequences and supports
//! exact ranks; [`LazyTree`] describes an infinite set node by node and is
//! checked on finite windows only. [`TreeDesc`] is a small decidable class used
//! for `Fin^alpha` membership.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::sets::{nth, Enumerate, FiniteSeq, Source, StreamSet};

pub type Seq = Vec<u64>;

/// `<0,1,2>`; the empty sequence prints as `<>`.
pub fn fmt_seq(s: &[u64]) -> String {
    let parts: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    format!("<{}>", parts.join(","))
}

/// `s` is in `S_alpha`: the path ordinal hits 0 exactly at the end of `s`.
pub fn s_alpha_contains(alpha: &Ordinal, s: &[u64]) -> bool {
    let mut g = alpha.clone();
    for &n in s {
        match g.fund_seq(n) {
            Ok(next) => g = next,
            Err(_) => return false,
        }
    }
    g.is_zero()
}

/// A finite subset of `S_alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawExplicit")]
pub struct ExplicitTreeSet {
    alpha: Ordinal,
    elements: BTreeSet<Seq>,
}

#[derive(Deserialize)]
struct RawExplicit {
    alpha: Ordinal,
    elements: Vec<Seq>,
}

impl TryFrom<RawExplicit> for ExplicitTreeSet {
    type Error = Error;
    fn try_from(raw: RawExplicit) -> Result<Self> {
        ExplicitTreeSet::new(raw.alpha, raw.elements)
    }
}

impl ExplicitTreeSet {
    pub fn new(alpha: Ordinal, elements: impl IntoIterator<Item = Seq>) -> Result<Self> {
        let elements: BTreeSet<Seq> = elements.into_iter().collect();
        for s in &elements {
            if !s_alpha_contains(&alpha, s) {
                return Err(Error::Malformed(format!("{} is not in S_{alpha}", fmt_seq(s))));
            }
        }
        // an antichain: in sorted order a prefix sits right before some extension
        let mut prev: Option<&Seq> = None;
        for s in &elements {
            if let Some(p) = prev {
                if s.starts_with(p) {
                    return Err(Error::Malformed(format!("{} extends {}", fmt_seq(s), fmt_seq(p))));
                }
            }
            prev = Some(s);
        }
        Ok(ExplicitTreeSet { alpha, elements })
    }

    pub fn alpha(&self) -> &Ordinal {
        &self.alpha
    }

    pub fn elements(&self) -> &BTreeSet<Seq> {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `X(s)`, a subset of `S_gamma(alpha, s)`.
    ///
    /// When `s` leaves `T(S_alpha)` the section is empty and is given ordinal 0.
    pub fn section(&self, s: &[u64]) -> ExplicitTreeSet {
        let alpha = self.alpha.path(s).unwrap_or_default();
        let elements = self
            .elements
            .range(s.to_vec()..)
            .take_while(|t| t.starts_with(s))
            .map(|t| t[s.len()..].to_vec())
            .collect();
        ExplicitTreeSet { alpha, elements }
    }

    pub fn domain(&self) -> BTreeSet<u64> {
        self.elements.iter().filter_map(|s| s.first().copied()).collect()
    }

    /// `T(X)`.
    pub fn initial_tree(&self) -> BTreeSet<Seq> {
        let mut tree = BTreeSet::new();
        for s in &self.elements {
            for i in 0..=s.len() {
                tree.insert(s[..i].to_vec());
            }
        }
        tree
    }

    fn all_ranks(&self) -> HashMap<Seq, u64> {
        let tree = self.initial_tree();
        let mut best: HashMap<Seq, u64> = HashMap::new();
        let mut ranks = HashMap::with_capacity(tree.len());
        // extensions sort after their prefixes
        for s in tree.iter().rev() {
            let r = if self.elements.contains(s) { 0 } else { best[s] };
            if let Some((_, parent)) = s.split_last() {
                let e = best.entry(parent.to_vec()).or_insert(0);
                *e = (*e).max(r + 1);
            }
            ranks.insert(s.clone(), r);
        }
        ranks
    }

    /// `rho_X(s)`.
    pub fn rank(&self, s: &[u64]) -> Result<u64> {
        self.all_ranks()
            .get(s)
            .copied()
            .ok_or_else(|| Error::Precondition(format!("{} is not in T(X)", fmt_seq(s))))
    }

    pub fn to_lazy(&self) -> LazyTree {
        explicit_to_lazy(&self.alpha, self.elements.iter().cloned().collect())
    }

    /// `rho(X)`, the sup of `rho_X(s)+1`; 0 for the empty set.
    pub fn tree_rank(&self) -> u64 {
        self.all_ranks().values().map(|r| r + 1).max().unwrap_or(0)
    }
}

type ChildFn = dyn Fn(u64) -> Result<LazyTree> + Send + Sync;

/// A subset of `S_alpha` given by a domain enumeration and a child factory.
///
/// `Leaf` is `{<>}`. A node with an empty domain is the empty set.
#[derive(Clone)]
pub enum LazyTree {
    Leaf,
    Node(Arc<LazyNode>),
}

pub struct LazyNode {
    alpha: Ordinal,
    dom: Source,
    child: Box<ChildFn>,
}

impl fmt::Debug for LazyTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LazyTree::Leaf => write!(f, "Leaf"),
            LazyTree::Node(n) => write!(f, "Node({})", n.alpha),
        }
    }
}

/// What a `++` check covered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlusPlusCertificate {
    pub alpha: Ordinal,
    pub depth: usize,
    pub width: usize,
    pub nodes: u64,
    pub leaves: u64,
}

impl LazyTree {
    pub fn node(
        alpha: Ordinal,
        dom: Source,
        child: impl Fn(u64) -> Result<LazyTree> + Send + Sync + 'static,
    ) -> LazyTree {
        LazyTree::Node(Arc::new(LazyNode { alpha, dom, child: Box::new(child) }))
    }

    pub fn empty(alpha: Ordinal) -> LazyTree {
        Self::node(alpha, Arc::new(FiniteSeq::new(vec![]).unwrap()), |_| {
            Err(Error::Precondition("the empty set has no children".into()))
        })
    }

    /// All of `S_alpha`.
    pub fn full(alpha: &Ordinal) -> LazyTree {
        if alpha.is_zero() {
            return LazyTree::Leaf;
        }
        let a = alpha.clone();
        Self::node(alpha.clone(), Arc::new(StreamSet::naturals()), move |n| Ok(Self::full(&a.fund_seq(n)?)))
    }

    /// Same children, smaller root domain. The caller keeps `dom` inside the old one.
    pub fn with_root_dom(&self, dom: Source) -> LazyTree {
        match self {
            LazyTree::Leaf => LazyTree::Leaf,
            LazyTree::Node(_) => {
                let inner = self.clone();
                Self::node(self.alpha(), dom, move |v| inner.child_unchecked(v))
            }
        }
    }

    pub fn alpha(&self) -> Ordinal {
        match self {
            LazyTree::Leaf => Ordinal::zero(),
            LazyTree::Node(n) => n.alpha.clone(),
        }
    }

    pub fn dom(&self) -> Option<&Source> {
        match self {
            LazyTree::Leaf => None,
            LazyTree::Node(n) => Some(&n.dom),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, LazyTree::Leaf)
    }

    /// `X(v)` for `v` already known to be in the domain.
    pub fn child_unchecked(&self, v: u64) -> Result<LazyTree> {
        match self {
            LazyTree::Leaf => Err(Error::Precondition("a leaf has no children".into())),
            LazyTree::Node(n) => (n.child)(v),
        }
    }

    /// `X(v)`, or `None` when `v` is outside the domain.
    pub fn child(&self, v: u64) -> Result<Option<LazyTree>> {
        match self {
            LazyTree::Leaf => Ok(None),
            LazyTree::Node(n) => {
                if n.dom.contains(v)? {
                    Ok(Some((n.child)(v)?))
                } else {
                    Ok(None)
                }
            }
        }
    }

    /// `X(s)`, or `None` when `s` is not in `T(X)`.
    pub fn section(&self, s: &[u64]) -> Result<Option<LazyTree>> {
        let mut node = self.clone();
        for &v in s {
            match node.child(v)? {
                Some(c) => node = c,
                None => return Ok(None),
            }
        }
        Ok(Some(node))
    }

    pub fn in_tree(&self, s: &[u64]) -> Result<bool> {
        Ok(self.section(s)?.is_some())
    }

    /// `s` is an element of the set.
    pub fn contains(&self, s: &[u64]) -> Result<bool> {
        Ok(matches!(self.section(s)?, Some(LazyTree::Leaf)))
    }

    /// The index of `s`: positions of its entries in the successive domains.
    pub fn x_index(&self, s: &[u64]) -> Result<Seq> {
        if s.is_empty() {
            return Err(Error::Precondition("the empty sequence has no index".into()));
        }
        let mut node = self.clone();
        let mut t = Vec::with_capacity(s.len());
        for (i, &v) in s.iter().enumerate() {
            let dom = node.dom().ok_or_else(|| not_in_tree(s, i))?;
            let k = dom.position(v)?.ok_or_else(|| not_in_tree(s, i))?;
            t.push(k);
            node = node.child_unchecked(v)?;
        }
        Ok(t)
    }

    /// `X[t]`.
    pub fn evaluate(&self, t: &[u64]) -> Result<Seq> {
        Ok(self.walk_index(t)?.0)
    }

    /// `X[[t]] = X(X[t])`.
    pub fn section_at_index(&self, t: &[u64]) -> Result<LazyTree> {
        Ok(self.walk_index(t)?.1)
    }

    fn walk_index(&self, t: &[u64]) -> Result<(Seq, LazyTree)> {
        let mut node = self.clone();
        let mut s = Vec::with_capacity(t.len());
        for &k in t {
            let dom = node
                .dom()
                .ok_or_else(|| Error::Precondition(format!("{} passes a leaf", fmt_seq(t))))?;
            let v = dom.get(k)?.ok_or_else(|| {
                Error::Precondition(format!("index {k} is outside the domain at {}", fmt_seq(&s)))
            })?;
            s.push(v);
            node = node.child_unchecked(v)?;
        }
        Ok((s, node))
    }

    /// The unique prefix `t|i` whose evaluation is an element.
    ///
    /// Only the first `max_len` entries of `t` are consulted; needing more is a
    /// horizon error. A domain too short for the requested index is a
    /// violation of the `++` property.
    pub fn terminal_cut(&self, t: &dyn Enumerate, max_len: usize) -> Result<Seq> {
        let mut node = self.clone();
        let mut out = Vec::new();
        let mut path = Vec::new();
        while let LazyTree::Node(n) = &node {
            if out.len() >= max_len {
                return Err(Error::horizon(format!(
                    "no terminal prefix within {max_len} entries of the index sequence"
                )));
            }
            let k = nth(t, out.len() as u64)?;
            let v = n.dom.get(k)?.ok_or_else(|| {
                Error::violation(fmt_seq(&path), format!("domain has no element with index {k}"))
            })?;
            out.push(k);
            path.push(v);
            let next = (n.child)(v)?;
            node = next;
        }
        Ok(out)
    }

    /// Checks the `++` shape on a finite window: `width` domain values per
    /// node, `depth` levels down, ordinals matching the path.
    pub fn plusplus_certify(&self, alpha: &Ordinal, depth: usize, width: usize) -> Result<PlusPlusCertificate> {
        let mut cert =
            PlusPlusCertificate { alpha: alpha.clone(), depth, width, nodes: 0, leaves: 0 };
        let mut path = Vec::new();
        certify_node(self, alpha, &mut path, depth, width, &mut cert)?;
        Ok(cert)
    }

    /// Elements reachable through the first `width` domain values at each node,
    /// at most `depth` levels deep.
    pub fn window_elements(&self, depth: usize, width: usize) -> Result<Vec<Seq>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        collect_window(self, depth, width, &mut path, &mut out)?;
        Ok(out)
    }
}

fn not_in_tree(s: &[u64], i: usize) -> Error {
    Error::Precondition(format!("{} leaves the tree at entry {i}", fmt_seq(s)))
}

fn certify_node(
    node: &LazyTree,
    expected: &Ordinal,
    path: &mut Seq,
    depth: usize,
    width: usize,
    cert: &mut PlusPlusCertificate,
) -> Result<()> {
    let at = fmt_seq(path);
    let n = match node {
        LazyTree::Leaf if expected.is_zero() => {
            cert.leaves += 1;
            return Ok(());
        }
        LazyTree::Leaf => {
            return Err(Error::violation(at, format!("leaf where ordinal {expected} is expected")));
        }
        LazyTree::Node(_) if expected.is_zero() => {
            return Err(Error::violation(at, "node below a complete element"));
        }
        LazyTree::Node(n) => n,
    };
    if &n.alpha != expected {
        return Err(Error::violation(at, format!("node carries {} but the path gives {expected}", n.alpha)));
    }
    cert.nodes += 1;
    if depth == 0 {
        return Ok(());
    }
    let mut last = None;
    for k in 0..width as u64 {
        let v = match n.dom.get(k)? {
            Some(v) => v,
            None => return Err(Error::violation(at, format!("domain has only {k} elements"))),
        };
        if last.is_some_and(|l| v <= l) {
            return Err(Error::violation(at, "domain is not increasing"));
        }
        last = Some(v);
        let c = (n.child)(v)?;
        let g = expected.fund_seq(v)?;
        path.push(v);
        certify_node(&c, &g, path, depth - 1, width, cert)?;
        path.pop();
    }
    Ok(())
}

fn collect_window(node: &LazyTree, depth: usize, width: usize, path: &mut Seq, out: &mut Vec<Seq>) -> Result<()> {
    match node {
        LazyTree::Leaf => out.push(path.clone()),
        LazyTree::Node(n) => {
            if depth == 0 {
                return Ok(());
            }
            for k in 0..width as u64 {
                let Some(v) = n.dom.get(k)? else { break };
                path.push(v);
                collect_window(&(n.child)(v)?, depth - 1, width, path, out)?;
                path.pop();
            }
        }
    }
    Ok(())
}

/// A finite description of a subset of `S_alpha`.
///
/// A `Node` lists finitely many exceptional children and a tail rule for the
/// rest: no children, all of `S_gamma`, or templates repeating with period
/// equal to their number.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TreeDesc {
    Explicit(Vec<Seq>),
    Node {
        #[serde(default)]
        exceptional: BTreeMap<u64, TreeDesc>,
        tail: Tail,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    Empty,
    Full,
    Periodic(Vec<TreeDesc>),
}

impl TreeDesc {
    /// Nesting depth: an explicit list counts 1, a node one more than its children.
    pub fn depth(&self) -> usize {
        match self {
            TreeDesc::Explicit(_) => 1,
            TreeDesc::Node { exceptional, tail } => {
                let t = match tail {
                    Tail::Periodic(ts) => ts.iter().map(|t| t.depth()).max().unwrap_or(0),
                    _ => 0,
                };
                1 + exceptional.values().map(|c| c.depth()).max().unwrap_or(0).max(t)
            }
        }
    }

    // membership only changes below this ordinal
    fn stable_depth(&self) -> u64 {
        match self {
            TreeDesc::Explicit(list) => list.iter().map(|s| s.len() as u64).max().unwrap_or(0).max(1),
            TreeDesc::Node { tail: Tail::Periodic(ts), .. } => {
                1 + ts.iter().map(|t| t.stable_depth()).max().unwrap_or(0)
            }
            TreeDesc::Node { .. } => 1,
        }
    }

    /// A random well-formed description for `alpha` with entries below 8.
    pub fn random<R: Rng>(rng: &mut R, alpha: &Ordinal, depth: usize) -> TreeDesc {
        random_desc(rng, Some(alpha), depth.max(1))
    }
}

fn random_seq_in<R: Rng>(rng: &mut R, alpha: &Ordinal) -> Seq {
    let mut s = Vec::new();
    let mut g = alpha.clone();
    while !g.is_zero() {
        let n = rng.gen_range(0..8);
        g = g.fund_seq(n).unwrap();
        s.push(n);
    }
    s
}

// `alpha = None` builds a template read under several ordinals
fn random_desc<R: Rng>(rng: &mut R, alpha: Option<&Ordinal>, depth: usize) -> TreeDesc {
    let at_zero = alpha.is_some_and(|a| a.is_zero());
    if at_zero || rng.gen_bool(0.3) {
        let k = rng.gen_range(0..4);
        let list = (0..k)
            .map(|_| match alpha {
                Some(a) => random_seq_in(rng, a),
                None => (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..8)).collect(),
            })
            .collect::<BTreeSet<_>>();
        let mut list: Vec<Seq> = list.into_iter().collect();
        if at_zero && list.len() > 1 {
            list.truncate(1);
        }
        return TreeDesc::Explicit(list);
    }
    let mut exceptional = BTreeMap::new();
    if depth >= 2 {
        for _ in 0..rng.gen_range(0..3) {
            let n = rng.gen_range(0..8);
            let g = alpha.map(|a| a.fund_seq(n).unwrap());
            exceptional.insert(n, random_desc(rng, g.as_ref(), depth - 1));
        }
    }
    let tail = match rng.gen_range(0..3) {
        0 => Tail::Empty,
        1 => Tail::Full,
        _ if depth < 2 => Tail::Empty,
        _ => {
            let below = match alpha {
                Some(a) if a.is_successor() => a.pred(),
                _ => None,
            };
            let m = rng.gen_range(1..=3);
            Tail::Periodic((0..m).map(|_| random_desc(rng, below.as_ref(), depth - 1)).collect())
        }
    };
    TreeDesc::Node { exceptional, tail }
}

/// Decides `X in Fin^alpha` for the set described by `desc`.
///
/// The top level and every child whose ordinal is fixed are checked strictly:
/// explicit sequences must lie in `S_gamma`. Templates repeating below a limit
/// ordinal meet a different ordinal for each child, so there an explicit list
/// means its intersection with `S_gamma` and a node at ordinal 0 is empty.
pub fn fin_member(alpha: &Ordinal, desc: &TreeDesc) -> Result<bool> {
    member(alpha, desc, true)
}

fn member(beta: &Ordinal, desc: &TreeDesc, strict: bool) -> Result<bool> {
    match desc {
        TreeDesc::Explicit(list) => {
            if strict {
                if let Some(s) = list.iter().find(|s| !s_alpha_contains(beta, s)) {
                    return Err(Error::Malformed(format!("{} is not in S_{beta}", fmt_seq(s))));
                }
            }
            // Fin^0 = {empty}; any finite set is small above 0
            Ok(!beta.is_zero() || !list.iter().any(|s| s.is_empty()))
        }
        TreeDesc::Node { exceptional, tail } => {
            if beta.is_zero() {
                return if strict {
                    Err(Error::Malformed("node description where a complete element is expected".into()))
                } else {
                    Ok(true)
                };
            }
            for (&n, c) in exceptional {
                member(&beta.fund_seq(n)?, c, strict)?;
            }
            match tail {
                Tail::Empty => Ok(true),
                Tail::Full => Ok(false),
                Tail::Periodic(ts) if ts.is_empty() => Err(Error::Malformed("periodic tail with no templates".into())),
                Tail::Periodic(ts) => {
                    let mut all = true;
                    for t in ts {
                        let ok = match beta.pred() {
                            Some(p) => member(&p, t, strict)?,
                            None => member(&Ordinal::nat(t.stable_depth()), t, false)?,
                        };
                        all &= ok;
                    }
                    Ok(all)
                }
            }
        }
    }
}

fn explicit_to_lazy(alpha: &Ordinal, list: Vec<Seq>) -> LazyTree {
    if list.iter().any(|s| s.is_empty()) {
        return LazyTree::Leaf;
    }
    let firsts: BTreeSet<u64> = list.iter().map(|s| s[0]).collect();
    let a = alpha.clone();
    let list = Arc::new(list);
    let dom = FiniteSeq::new(firsts.into_iter().collect()).expect("sorted and distinct");
    LazyTree::node(alpha.clone(), Arc::new(dom), move |n| {
        let rest = list.iter().filter(|s| s[0] == n).map(|s| s[1..].to_vec()).collect();
        Ok(explicit_to_lazy(&a.fund_seq(n)?, rest))
    })
}
