//! Subsets of `N x N` measured by column widths.
//!
//! `A` is small (in ED) when from some column `n` on every column has at most
//! `n` points. Positivity is never inferred; it is carried by a certificate.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sets::{nth, Below, Enumerate, FiniteSeq, Recurrent, Source, StreamSet, Truncated};

type ColumnFn = dyn Fn(u64) -> Result<Source> + Send + Sync;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Universe {
    Full,
    Delta,
}

/// `A` with `dom(A)` and the columns `A(m)`, `m` in the domain.
#[derive(Clone)]
pub struct GridSet {
    name: String,
    dom: Source,
    column: Arc<ColumnFn>,
    universe: Universe,
    dom_is_naturals: bool,
}

impl fmt::Debug for GridSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GridSet({})", self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum WidthRule {
    CeilHalf,
    Const { c: u64 },
    Linear { a: u64, b: u64 },
}

impl WidthRule {
    pub fn width(&self, m: u64) -> u64 {
        match self {
            WidthRule::CeilHalf => m.div_ceil(2),
            WidthRule::Const { c } => *c,
            WidthRule::Linear { a, b } => a.saturating_mul(m).saturating_add(*b),
        }
    }
}

/// JSON form of the shipped grids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "builtin", rename_all = "kebab-case")]
pub enum GridDesc {
    Delta,
    Full,
    WidthFn {
        #[serde(flatten)]
        rule: WidthRule,
    },
    Explicit {
        columns: BTreeMap<u64, Vec<u64>>,
    },
}

impl GridDesc {
    pub fn build(&self) -> Result<GridSet> {
        match self {
            GridDesc::Delta => Ok(GridSet::delta()),
            GridDesc::Full => Ok(GridSet::full()),
            GridDesc::WidthFn { rule } => Ok(GridSet::width_fn(rule.clone())),
            GridDesc::Explicit { columns } => GridSet::explicit(columns.clone(), Universe::Full),
        }
    }
}

impl GridSet {
    pub fn new(
        name: impl Into<String>,
        dom: Source,
        column: impl Fn(u64) -> Result<Source> + Send + Sync + 'static,
        universe: Universe,
    ) -> GridSet {
        GridSet { name: name.into(), dom, column: Arc::new(column), universe, dom_is_naturals: false }
    }

    /// Column `n` is `{0..n}`.
    pub fn delta() -> GridSet {
        let mut g = GridSet::new(
            "delta",
            Arc::new(StreamSet::naturals()),
            |n| Ok(Arc::new(Below(n + 1)) as Source),
            Universe::Delta,
        );
        g.dom_is_naturals = true;
        g
    }

    pub fn full() -> GridSet {
        let mut g = GridSet::new("full", Arc::new(StreamSet::naturals()), |_| Ok(Arc::new(StreamSet::naturals()) as Source), Universe::Full);
        g.dom_is_naturals = true;
        g
    }

    /// Column `m` is `{0..w(m)}`; columns of width 0 leave the domain.
    pub fn width_fn(rule: WidthRule) -> GridSet {
        let r = rule.clone();
        let dom: Source = if (0..4).all(|m| rule.width(m) > 0) {
            Arc::new(StreamSet::naturals())
        } else {
            let r2 = rule.clone();
            Arc::new(StreamSet::filtered("width-dom", StreamSet::naturals(), move |m| r2.width(m) > 0, 1 << 20))
        };
        GridSet::new(
            format!("width-fn:{rule:?}"),
            dom,
            move |m| Ok(Arc::new(Below(r.width(m))) as Source),
            Universe::Full,
        )
    }

    /// A finite grid. Empty columns are dropped.
    pub fn explicit(columns: BTreeMap<u64, Vec<u64>>, universe: Universe) -> Result<GridSet> {
        let mut cols = BTreeMap::new();
        for (m, c) in columns {
            if universe == Universe::Delta && c.iter().any(|&k| k > m) {
                return Err(Error::Malformed(format!("column {m} leaves the lower triangle")));
            }
            if !c.is_empty() {
                cols.insert(m, FiniteSeq::new(c)?);
            }
        }
        let dom = FiniteSeq::new(cols.keys().copied().collect())?;
        let cols = Arc::new(cols);
        Ok(GridSet::new(
            "explicit",
            Arc::new(dom),
            move |m| {
                cols.get(&m)
                    .map(|c| Arc::new(c.clone()) as Source)
                    .ok_or_else(|| Error::Precondition(format!("column {m} is empty")))
            },
            universe,
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn dom(&self) -> &Source {
        &self.dom
    }

    /// `A(m)` for `m` in the domain.
    pub fn column_unchecked(&self, m: u64) -> Result<Source> {
        (self.column)(m)
    }

    pub fn column(&self, m: u64) -> Result<Option<Source>> {
        if self.dom.contains(m)? {
            Ok(Some((self.column)(m)?))
        } else {
            Ok(None)
        }
    }

    pub fn contains(&self, m: u64, k: u64) -> Result<bool> {
        match self.column(m)? {
            Some(c) => c.contains(k),
            None => Ok(false),
        }
    }

    /// `min(|A(m)|, cap)`.
    pub fn width_capped(&self, m: u64, cap: u64) -> Result<u64> {
        let Some(c) = self.column(m)? else { return Ok(0) };
        width_of(&c, cap)
    }

    /// `m_n`, the n-th column of a `++` grid.
    pub fn col_index(&self, n: u64) -> Result<u64> {
        nth(&*self.dom, n)
    }

    /// `X[n,k]`: the k-th point of column `m_n`.
    pub fn at(&self, n: u64, k: u64) -> Result<(u64, u64)> {
        if k > n {
            return Err(Error::Precondition(format!("X[{n},{k}] needs k <= n")));
        }
        let m = self.col_index(n)?;
        let col = (self.column)(m)?;
        let v = col
            .get(k)?
            .ok_or_else(|| Error::violation(format!("column {m}"), format!("fewer than {} points", k + 1)))?;
        Ok((m, v))
    }

    /// `|X(m_n)| = n+1` for every `n <= upto`.
    pub fn check_plusplus(&self, upto: u64) -> Result<()> {
        for n in 0..=upto {
            let m = self.col_index(n)?;
            let w = width_of(&(self.column)(m)?, n + 2)?;
            if w != n + 1 {
                return Err(Error::violation(format!("column {m}"), format!("width {w}, expected {}", n + 1)));
            }
        }
        Ok(())
    }
}

fn width_of(col: &Source, cap: u64) -> Result<u64> {
    let mut w = 0;
    while w < cap && col.get(w)?.is_some() {
        w += 1;
    }
    Ok(w)
}

/// How a grid's ED status is witnessed.
#[derive(Clone)]
pub enum EDCertificate {
    /// Every column from `n` on has at most `n` points.
    Small { n: u64 },
    /// `witness(k)` is a column with more than `k` points.
    Positive { witness: Source },
    /// The grid is in `++` form.
    PlusPlus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum EdVerdict {
    Small { witness: u64, checked_to: u64 },
    Positive { checked_to: u64 },
}

/// Checks a certificate against the columns up to `horizon`.
///
/// A contradicted certificate is a violation naming the offending column.
pub fn ed_member(a: &GridSet, cert: &EDCertificate, horizon: u64) -> Result<EdVerdict> {
    match cert {
        EDCertificate::Small { n } => {
            let (mut k, _) = match a.dom.successor(n.checked_sub(1))? {
                Some(p) => p,
                None => return Ok(EdVerdict::Small { witness: *n, checked_to: horizon }),
            };
            while let Some(m) = a.dom.get(k)? {
                if m > horizon {
                    break;
                }
                let w = width_of(&(a.column)(m)?, n + 1)?;
                if w > *n {
                    return Err(Error::violation(format!("column {m}"), format!("more than {n} points")));
                }
                k += 1;
            }
            Ok(EdVerdict::Small { witness: *n, checked_to: horizon })
        }
        EDCertificate::Positive { witness } => {
            for k in 0..=horizon {
                let m = nth(&**witness, k)?;
                if a.width_capped(m, k + 1)? <= k {
                    return Err(Error::violation(format!("column {m}"), format!("at most {k} points")));
                }
            }
            Ok(EdVerdict::Positive { checked_to: horizon })
        }
        EDCertificate::PlusPlus => {
            a.check_plusplus(horizon)?;
            Ok(EdVerdict::Positive { checked_to: horizon })
        }
    }
}

/// A `++` subset: the n-th kept column is the first one past the previous with
/// at least `n+1` points, cut down to its first `n+1` points.
///
/// `budget` bounds how many columns one step may skip.
pub fn plusplus_refine(x: &GridSet, budget: u64) -> GridSet {
    let src = x.clone();
    let dom = Arc::new(Recurrent::new(move |prev: &[u64]| {
        let n = prev.len() as u64;
        let mut cur = src.dom.successor(prev.last().copied())?;
        let mut skipped = 0;
        while let Some((k, m)) = cur {
            if width_of(&(src.column)(m)?, n + 1)? > n {
                return Ok(Some(m));
            }
            skipped += 1;
            if skipped > budget {
                return Err(Error::horizon(format!("no column of width {} within {budget} columns", n + 1)));
            }
            cur = src.dom.get(k + 1)?.map(|v| (k + 1, v));
        }
        Err(Error::horizon(format!("the domain ends before a column of width {}", n + 1)))
    }));
    let src = x.clone();
    let d2: Source = dom.clone();
    let mut g = GridSet::new(
        format!("{}++", x.name),
        dom,
        move |m| {
            let n = d2.position(m)?.ok_or_else(|| Error::Precondition(format!("{m} is not a kept column")))?;
            let col = (src.column)(m)?;
            Ok(Arc::new(Truncated { inner: col, len: n + 1 }) as Source)
        },
        x.universe,
    );
    g.dom_is_naturals = false;
    g
}

/// A countable family `n -> A_n`, possibly finite.
#[derive(Clone)]
pub struct GridFamily {
    len: Option<u64>,
    member: Arc<dyn Fn(u64) -> Result<GridSet> + Send + Sync>,
    cache: Arc<Mutex<HashMap<u64, GridSet>>>,
}

impl GridFamily {
    pub fn new(len: Option<u64>, member: impl Fn(u64) -> Result<GridSet> + Send + Sync + 'static) -> Self {
        GridFamily { len, member: Arc::new(member), cache: Arc::default() }
    }

    pub fn from_list(list: Vec<GridSet>) -> Self {
        let list = Arc::new(list);
        let l2 = list.clone();
        Self::new(Some(list.len() as u64), move |n| {
            l2.get(n as usize).cloned().ok_or_else(|| Error::Precondition(format!("family has no member {n}")))
        })
    }

    pub fn constant(g: GridSet) -> Self {
        Self::new(None, move |_| Ok(g.clone()))
    }

    pub fn len(&self) -> Option<u64> {
        self.len
    }

    pub fn get(&self, n: u64) -> Result<GridSet> {
        if let Some(g) = self.cache.lock().unwrap().get(&n) {
            return Ok(g.clone());
        }
        let g = (self.member)(n)?;
        self.cache.lock().unwrap().insert(n, g.clone());
        Ok(g)
    }
}

/// Position of `(n, j)` in the square spiral
/// `(0,0),(1,0),(1,1),(0,1),(2,0),(2,1),(2,2),(1,2),(0,2),...`.
pub fn spiral_position(n: u64, j: u64) -> u64 {
    let s = n.max(j);
    if n == s {
        s * s + j
    } else {
        s * s + 2 * s - n
    }
}

pub fn spiral_pair(p: u64) -> (u64, u64) {
    let s = p.isqrt();
    let r = p - s * s;
    if r <= s {
        (s, r)
    } else {
        (2 * s - r, s)
    }
}

// picks q by spiral position, for families whose domains are not all of N
struct SpiralPicks {
    family: GridFamily,
    picks: Mutex<Vec<Option<u64>>>,
}

impl SpiralPicks {
    fn at(&self, pos: u64) -> Result<Option<u64>> {
        let mut picks = self.picks.lock().unwrap();
        while picks.len() as u64 <= pos {
            let p = picks.len() as u64;
            let (n, _) = spiral_pair(p);
            if self.family.len.is_some_and(|l| n >= l) {
                picks.push(None);
                continue;
            }
            let last = picks.iter().rev().flatten().next().copied();
            let a = self.family.get(n)?;
            let (_, q) = a
                .dom
                .successor(last)?
                .ok_or_else(|| Error::horizon(format!("dom(A_{n}) has nothing above {last:?}")))?;
            picks.push(Some(q));
        }
        Ok(picks[pos as usize])
    }

    fn pick(&self, n: u64, j: u64) -> Result<u64> {
        Ok(self.at(spiral_position(n, j))?.expect("member exists"))
    }
}

struct SpiralDom {
    n: u64,
    picks: Option<Arc<SpiralPicks>>,
}

impl Enumerate for SpiralDom {
    fn get(&self, j: u64) -> Result<Option<u64>> {
        match &self.picks {
            None => Ok(Some(spiral_position(self.n, j))),
            Some(p) => p.pick(self.n, j).map(Some),
        }
    }

    fn position(&self, v: u64) -> Result<Option<u64>> {
        match &self.picks {
            None => {
                let (n, j) = spiral_pair(v);
                Ok((n == self.n).then_some(j))
            }
            Some(_) => match self.successor_index(v.checked_sub(1), v)? {
                Some((k, w)) if w == v => Ok(Some(k)),
                _ => Ok(None),
            },
        }
    }
}

/// Makes the domains pairwise disjoint along the square spiral.
///
/// `q_{n,j}` is the least element of `dom(A_n)` above every earlier pick; the
/// new `A_n` has domain `{q_{n,j}}` and keeps the first `j+1` points of column
/// `q_{n,j}`. Members must already be `++`. When every domain is all of `N`
/// and the family is infinite, the picks are the spiral positions themselves.
pub fn spiral_disjointify(family: &GridFamily, all_doms_naturals: bool) -> GridFamily {
    let closed = all_doms_naturals && family.len.is_none();
    let picks = (!closed)
        .then(|| Arc::new(SpiralPicks { family: family.clone(), picks: Mutex::new(Vec::new()) }));
    let fam = family.clone();
    GridFamily::new(family.len, move |n| {
        let a = fam.get(n)?;
        let dom: Arc<SpiralDom> = Arc::new(SpiralDom { n, picks: picks.clone() });
        let d2 = dom.clone();
        let mut g = GridSet::new(
            format!("spiral[{n}]:{}", a.name),
            dom,
            move |m| {
                let j = d2.position(m)?.ok_or_else(|| Error::Precondition(format!("{m} is not picked for {n}")))?;
                let col = a.column_unchecked(m)?;
                Ok(Arc::new(Truncated { inner: col, len: j + 1 }) as Source)
            },
            fam.get(n)?.universe,
        );
        g.dom_is_naturals = false;
        Ok(g)
    })
}

/// Whether every member's domain is all of `N` (enables the closed form).
pub fn doms_are_naturals(g: &GridSet) -> bool {
    g.dom_is_naturals
}

/// `l_n = max(w_n + 1, l_{n-1} + 1)` from small-witnesses `w_n`.
pub fn intersection_bounds(witnesses: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(witnesses.len());
    for &w in witnesses {
        let prev = out.last().copied().unwrap_or(0);
        out.push((w + 1).max(prev + 1));
    }
    out
}

/// The same bounds read from certificates; anything but `Small` is rejected.
pub fn intersection_bounds_from(certs: &[EDCertificate]) -> Result<Vec<u64>> {
    let ws = certs
        .iter()
        .enumerate()
        .map(|(i, c)| match c {
            EDCertificate::Small { n } => Ok(*n),
            _ => Err(Error::Precondition(format!("intersection {i} has no small certificate"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(intersection_bounds(&ws))
}

/// The ED family used by the coding examples: the spiral-disjointified copies
/// of the lower triangle, so `A_n` lives on columns `{spiral_position(n, j)}`.
pub fn spiral_delta_family() -> GridFamily {
    spiral_disjointify(&GridFamily::constant(GridSet::delta()), true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spiral_order() {
        let first: Vec<(u64, u64)> = (0..9).map(spiral_pair).collect();
        assert_eq!(first, vec![(0, 0), (1, 0), (1, 1), (0, 1), (2, 0), (2, 1), (2, 2), (1, 2), (0, 2)]);
        for p in 0..10_000 {
            let (n, j) = spiral_pair(p);
            assert_eq!(spiral_position(n, j), p);
        }
    }

    #[test]
    fn widths_and_certificates() {
        let d = GridSet::delta();
        assert_eq!(d.at(3, 1).unwrap(), (3, 1));
        assert_eq!(d.at(5, 0).unwrap(), (5, 0));
        assert!(d.at(1, 2).is_err());
        assert!(matches!(ed_member(&d, &EDCertificate::PlusPlus, 50).unwrap(), EdVerdict::Positive { .. }));
        assert!(ed_member(&d, &EDCertificate::Small { n: 5 }, 50).is_err());
        let five = GridSet::width_fn(WidthRule::Const { c: 5 });
        assert!(ed_member(&five, &EDCertificate::Small { n: 5 }, 200).is_ok());
    }

    #[test]
    fn refine_examples() {
        let y = plusplus_refine(&GridSet::full(), 100);
        y.check_plusplus(30).unwrap();
        assert_eq!(y.dom().prefix(5).unwrap(), vec![0, 1, 2, 3, 4]);
        let h = plusplus_refine(&GridSet::width_fn(WidthRule::CeilHalf), 100);
        assert_eq!(h.dom().prefix(5).unwrap(), vec![1, 3, 5, 7, 9]);
        h.check_plusplus(30).unwrap();
    }

    #[test]
    fn bounds() {
        assert_eq!(intersection_bounds(&[2, 7, 3]), vec![3, 8, 9]);
        assert_eq!(intersection_bounds(&[0, 0, 0]), vec![1, 2, 3]);
        assert_eq!(intersection_bounds(&[4])[0], 5);
    }

    #[test]
    fn spiral_general_matches_closed_form() {
        let fam = GridFamily::constant(GridSet::delta());
        let a = spiral_disjointify(&fam, true);
        let b = spiral_disjointify(&fam, false);
        for n in 0..6 {
            let (ga, gb) = (a.get(n).unwrap(), b.get(n).unwrap());
            assert_eq!(ga.dom().prefix(8).unwrap(), gb.dom().prefix(8).unwrap());
            gb.check_plusplus(7).unwrap();
        }
    }
}
