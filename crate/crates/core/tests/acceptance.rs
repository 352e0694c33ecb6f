//! The twelve acceptance criteria, run in order with their time limits.
//!
//! Each criterion prints one `PASS`/`FAIL` line on stderr (written directly, so
//! it shows even when the harness captures output). Oracles here are written
//! from the definitions and do not call the routine under test.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::hash::{DefaultHasher, Hash, Hasher};
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use idealab::coding::{self, FinFamily, MadFamily};
use idealab::constructions::{self as cons, synthetic};
use idealab::ed::{self, GridSet, WidthRule};
use idealab::mid;
use idealab::ordinal::Ordinal;
use idealab::seqcode::{pi, pi_at_least, pi_inverse, PRIMES};
use idealab::sets::{Enumerate, Prefix, Source, StreamSet, UPSet};
use idealab::tree::{fin_member, s_alpha_contains, ExplicitTreeSet, Seq, Tail, TreeDesc};
use idealab::vitali::{self, PeriodVerdict, TableHomogenizer, TableSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn lib<T>(r: idealab::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("library error: {e}"))
}

// ordinals below w^2 as (a, b) = w*a + b
type Small = (u64, u64);

fn small(text: &str) -> Small {
    match text {
        "w" => (1, 0),
        "w+1" => (1, 1),
        "w*2" => (2, 0),
        n => (0, n.parse().expect("finite ordinal")),
    }
}

fn fund((a, b): Small, n: u64) -> Small {
    if b > 0 {
        (a, b - 1)
    } else {
        (a - 1, n + 1)
    }
}

fn in_s(mut g: Small, s: &[u64]) -> bool {
    for &n in s {
        if g == (0, 0) {
            return false;
        }
        g = fund(g, n);
    }
    g == (0, 0)
}

fn walk(rng: &mut ChaCha8Rng, mut g: Small) -> Seq {
    let mut s = vec![];
    while g != (0, 0) {
        let n = rng.gen_range(0..8);
        g = fund(g, n);
        s.push(n);
    }
    s
}

const ALPHAS: [&str; 6] = ["1", "2", "3", "w", "w+1", "w*2"];

fn c1_pi() -> Outcome {
    const N: usize = 10_000;
    // all codes up to a bound by direct multiplication, doubling until N are found
    let mut bound: u128 = 1 << 16;
    let codes = loop {
        let mut found = vec![];
        fn grow(i: usize, c: u128, bound: u128, s: &mut Seq, out: &mut Vec<(u128, Seq)>) {
            if s.len() >= 2 {
                out.push((c, s.clone()));
            }
            let Some(&p) = PRIMES.get(i) else { return };
            let mut next = c * p as u128;
            let mut e = 0;
            while next <= bound {
                s.push(e);
                grow(i + 1, next, bound, s, out);
                s.pop();
                e += 1;
                next *= p as u128;
            }
        }
        grow(0, 1, bound, &mut vec![], &mut found);
        if found.len() >= N {
            found.sort();
            break found;
        }
        bound *= 2;
    };
    for (k, (_, s)) in codes.iter().take(N).enumerate() {
        ensure!(lib(pi(s))? == k as i64, "pi({s:?}) != {k}");
        ensure!(&lib(pi_inverse(k as u64))? == s, "pi_inverse({k}) != {s:?}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..N {
        let len = rng.gen_range(2..6);
        let s: Seq = (0..len).map(|_| rng.gen_range(0..4)).collect();
        let mut t = s.clone();
        t.extend((0..rng.gen_range(1..3)).map(|_| rng.gen_range(0..4)));
        ensure!(lib(pi(&s))? < lib(pi(&t))?, "prefix {s:?} of {t:?}");
        let mut u = s.clone();
        u[rng.gen_range(0..len)] += rng.gen_range(1..3);
        ensure!(lib(pi(&s))? < lib(pi(&u))?, "coordinate {s:?} < {u:?}");
    }
    for n in 0..1000 {
        ensure!(lib(pi_at_least(&[n, 0], n))?, "{n} > pi(<{n},0>)");
    }
    Ok(format!("{N} codes up to {}, {N} random pairs, diagonal to 1000", codes[N - 1].0))
}

fn naive_rank(x: &BTreeSet<Seq>, tree: &BTreeSet<Seq>, s: &Seq) -> u64 {
    if x.contains(s) {
        return 0;
    }
    tree.iter()
        .filter(|t| t.len() == s.len() + 1 && t.starts_with(s))
        .map(|t| naive_rank(x, tree, t) + 1)
        .max()
        .unwrap_or(0)
}

fn c2_s_alpha_rank() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut seqs, mut trees) = (0, 0);
    for a in ALPHAS {
        let (alpha, g): (Ordinal, Small) = (a.parse().unwrap(), small(a));
        let mut probe: Vec<Seq> = vec![vec![]];
        for x in 0..8 {
            probe.push(vec![x]);
            for y in 0..8 {
                probe.push(vec![x, y]);
                probe.extend((0..8).map(|z| vec![x, y, z]));
            }
        }
        for _ in 0..300 {
            let s = walk(&mut rng, g);
            let mut longer = s.clone();
            longer.push(rng.gen_range(0..8));
            let mut changed = s.clone();
            let i = rng.gen_range(0..s.len());
            changed[i] = rng.gen_range(0..8);
            probe.extend([s.clone(), s[..s.len() - 1].to_vec(), longer, changed]);
        }
        for s in &probe {
            ensure!(s_alpha_contains(&alpha, s) == in_s(g, s), "S_{a} membership of {s:?}");
        }
        seqs += probe.len();
        for _ in 0..40 {
            let size = rng.gen_range(1..=50);
            let x: BTreeSet<Seq> = (0..size).map(|_| walk(&mut rng, g)).collect();
            let mut tree = BTreeSet::new();
            for s in &x {
                for i in 0..=s.len() {
                    tree.insert(s[..i].to_vec());
                }
            }
            let set = lib(ExplicitTreeSet::new(alpha.clone(), x.iter().cloned()))?;
            ensure!(set.initial_tree() == tree, "T(X) for {a}");
            for s in &tree {
                ensure!(lib(set.rank(s))? == naive_rank(&x, &tree, s), "rank of {s:?} in a tree for {a}");
            }
            ensure!(set.tree_rank() == naive_rank(&x, &tree, &vec![]) + 1, "tree rank for {a}");
            trees += 1;
        }
    }
    Ok(format!("{seqs} sequences, {trees} trees"))
}

#[derive(Deserialize)]
struct CorpusEntry {
    alpha: String,
    member: bool,
    desc: TreeDesc,
}

const W1: u64 = 16;
const W2: u64 = 40;

struct Brute {
    full: HashMap<Small, bool>,
}

impl Brute {
    // the set is small when no bad child appears between the two windows
    fn by_window(mut child_small: impl FnMut(u64) -> Option<bool>) -> Option<bool> {
        let mut bad = [0, 0];
        for n in 0..W2 {
            if !child_small(n)? {
                bad[1] += 1;
                if n < W1 {
                    bad[0] += 1;
                }
            }
        }
        Some(bad[0] == bad[1])
    }

    fn full_small(&mut self, g: Small) -> bool {
        if g == (0, 0) {
            return false;
        }
        if let Some(&v) = self.full.get(&g) {
            return v;
        }
        let v = Self::by_window(|n| Some(self.full_small(fund(g, n)))).unwrap();
        self.full.insert(g, v);
        v
    }

    fn explicit_small(g: Small, xs: &BTreeSet<Seq>) -> bool {
        if xs.is_empty() {
            return true;
        }
        if g == (0, 0) {
            return !xs.contains(&vec![]);
        }
        Self::by_window(|n| {
            let sub: BTreeSet<Seq> = xs.iter().filter(|s| s.first() == Some(&n)).map(|s| s[1..].to_vec()).collect();
            Some(Self::explicit_small(fund(g, n), &sub))
        })
        .unwrap()
    }

    // None: the description is malformed at this ordinal
    fn small(&mut self, g: Small, d: &TreeDesc, strict: bool) -> Option<bool> {
        match d {
            TreeDesc::Explicit(list) => {
                if strict && list.iter().any(|s| !in_s(g, s)) {
                    return None;
                }
                let xs = list.iter().filter(|s| in_s(g, s)).cloned().collect();
                Some(Self::explicit_small(g, &xs))
            }
            TreeDesc::Node { .. } if g == (0, 0) => (!strict).then_some(true),
            TreeDesc::Node { exceptional, tail } => {
                if exceptional.keys().any(|&n| n >= W1) {
                    return None;
                }
                let successor = g.1 > 0;
                Self::by_window(|n| match (exceptional.get(&n), tail) {
                    (Some(c), _) => self.small(fund(g, n), c, strict),
                    (None, Tail::Empty) => Some(true),
                    (None, Tail::Full) => Some(self.full_small(fund(g, n))),
                    (None, Tail::Periodic(ts)) if ts.is_empty() => None,
                    (None, Tail::Periodic(ts)) => {
                        self.small(fund(g, n), &ts[n as usize % ts.len()], strict && successor)
                    }
                })
            }
        }
    }
}

fn c3_fin_member() -> Outcome {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/treedescs.json"))
        .map_err(|e| e.to_string())?;
    let corpus: Vec<CorpusEntry> = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    ensure!(corpus.len() >= 200, "corpus has only {} entries", corpus.len());
    let mut brute = Brute { full: HashMap::new() };
    let (mut checked, mut members) = (0, 0);
    for (i, e) in corpus.iter().filter(|e| e.desc.depth() <= 3).enumerate() {
        let alpha: Ordinal = e.alpha.parse().map_err(|err| format!("{err}"))?;
        let expect = brute.small(small(&e.alpha), &e.desc, true);
        let got = fin_member(&alpha, &e.desc).ok();
        ensure!(got == expect, "entry {i} (alpha {}): library {got:?}, brute force {expect:?}", e.alpha);
        ensure!(got == Some(e.member), "entry {i} disagrees with its recorded verdict");
        checked += 1;
        members += e.member as usize;
    }
    ensure!(checked >= 200, "only {checked} descriptions of depth <= 3");
    Ok(format!("{checked} descriptions, {members} in the ideal"))
}

fn c4_figures() -> Outcome {
    let fam = MadFamily::spiral();
    let x1 = Prefix(vec![0, 2, 3, 4, 5, 6]);
    let r = lib(coding::phi_mad_blocks(&fam, &x1, 2))?;
    let got: Vec<(u64, u64)> = r.iter().map(|r| (r.member, r.index)).collect();
    ensure!(got == [(0, 2), (3, 4)], "mad provenance {got:?}");
    let efam = ed::spiral_delta_family();
    let x2 = Prefix(vec![0, 2, 5, 7, 8, 10, 11]);
    let r = lib(coding::phi_ed_blocks(&efam, &x2, 2))?;
    let got: Vec<(u64, u64, Vec<u64>)> = r.iter().map(|r| (r.member, r.col_index, r.rows.clone())).collect();
    ensure!(got == [(0, 5, vec![2]), (7, 11, vec![8, 10])], "ed provenance {got:?}");
    Ok("A_0(2), A_3(4); A_0[5,2], A_7[11,8], A_7[11,10]".into())
}

fn mix(v: u64) -> u64 {
    let mut z = v.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn random_set(salt: u64) -> Source {
    Arc::new(StreamSet::from_fn("random", move |k| Some(4 * k + mix(k ^ salt) % 4)))
}

// agrees with x below index n, arbitrary (increasing) afterwards
fn mutated(x: Source, n: u64, salt: u64) -> Source {
    let step = 1 + salt % 7;
    Arc::new(StreamSet::from_fn("mutated", move |k| {
        if k < n {
            x.get(k).ok().flatten()
        } else if salt % 2 == 0 {
            Some(4 * k + mix(k ^ salt) % 4)
        } else {
            let base = if n == 0 { 0 } else { x.get(n - 1).ok().flatten()? + 1 };
            Some(base + (k - n) * step)
        }
    }))
}

fn c5_continuity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mfam = MadFamily::spiral();
    let efam = ed::spiral_delta_family();
    let ffam = FinFamily::spiral_full(&Ordinal::nat(2));
    let mut found = [0; 3];
    for i in 0..1000 {
        let x = random_set(rng.gen());
        let salt: u64 = rng.gen();
        let genuine = i % 2 == 0;

        let p = if genuine { lib(coding::phi_mad_block(&mfam, &*x, rng.gen_range(0..6)))?.value } else { rng.gen_range(0..300) };
        let (v, n) = lib(coding::phi_mad_member(&mfam, x.clone(), p))?;
        let (w, _) = lib(coding::phi_mad_member(&mfam, mutated(x.clone(), n, salt), p))?;
        ensure!(v == w, "mad: {p} with modulus {n}");
        found[0] += v as u32;

        let (a, b) = if genuine {
            let blk = lib(coding::phi_ed_block(&efam, &*x, rng.gen_range(0..4)))?;
            blk.points[rng.gen_range(0..blk.points.len())]
        } else {
            (rng.gen_range(0..100), rng.gen_range(0..10))
        };
        let (v, n) = lib(coding::phi_ed_member(&efam, x.clone(), a, b))?;
        let (w, _) = lib(coding::phi_ed_member(&efam, mutated(x.clone(), n, salt), a, b))?;
        ensure!(v == w, "ed: ({a},{b}) with modulus {n}");
        found[1] += v as u32;

        let p: Seq = if genuine {
            let recs = lib(coding::phi_fin_records(&ffam, x.clone(), 2, 2, 2))?;
            recs[rng.gen_range(0..recs.len())].element.clone()
        } else {
            (0..rng.gen_range(1..4)).map(|_| rng.gen_range(0..60)).collect()
        };
        let (v, n) = lib(coding::phi_fin_member(&ffam, x.clone(), &p))?;
        let (w, _) = lib(coding::phi_fin_member(&ffam, mutated(x, n, salt), &p))?;
        ensure!(v == w, "fin: {p:?} with modulus {n}");
        found[2] += v as u32;
    }
    ensure!(found.iter().all(|&f| f >= 500), "genuine elements not recognized: {found:?}");
    Ok(format!("1000 probes per map, members found {found:?}"))
}

fn nat() -> Source {
    Arc::new(StreamSet::naturals())
}

fn ed_points(fam: &ed::GridFamily, y: &dyn Enumerate, n: u64) -> Result<Vec<(u64, u64)>, String> {
    // block n reads y(b), rows y(b+1..=b+n+1), column index y(b+n+2), b = n(n+5)/2
    let b = n * (n + 5) / 2;
    let at = |i: u64| lib(y.get(i)).and_then(|v| v.ok_or_else(|| format!("y({i}) missing")));
    let member = lib(fam.get(at(b)?))?;
    let col = at(b + n + 2)?;
    (0..=n).map(|i| lib(member.at(col, at(b + 1 + i)?))).collect()
}

fn c6_hide() -> Outcome {
    let budget = 1 << 20;
    let mfam = MadFamily::spiral();
    let a = synthetic::mad_blocks(&mfam, nat(), synthetic::even());
    let y = cons::mad_hide(&mfam, nat(), a.clone(), budget).y();
    for n in 0..100 {
        let v = lib(mfam.at(lib(y.get(2 * n))?.unwrap(), lib(y.get(2 * n + 1))?.unwrap()))?;
        ensure!(lib(a(v))?, "mad block {n}: {v} not in A");
    }
    let efam = ed::spiral_delta_family();
    let a = synthetic::ed_columns(&efam, nat(), synthetic::even());
    let y = cons::ed_hide(&efam, nat(), a.clone(), budget).y();
    let mut points = 0;
    let mut n = 0;
    while points < 100 {
        for (c, r) in ed_points(&efam, &*y, n)? {
            ensure!(lib(a(c, r))?, "ed block {n}: ({c},{r}) not in A");
            points += 1;
        }
        n += 1;
    }
    let mut nodes = 0;
    for al in ["2", "3", "w"] {
        let ffam = FinFamily::spiral_full(&al.parse().unwrap());
        let b = lib(coding::phi_fin(&ffam, nat()))?;
        let y = cons::fin_hide(&ffam, nat(), b.clone(), budget).y();
        for r in lib(coding::phi_fin_records(&ffam, y.clone(), 10, 3, 2))? {
            ensure!(lib(b.contains(&r.element))?, "fin {al}: {:?} not in B", r.element);
        }
        for r in lib(cons::audit_fin(&ffam, y, &|s| b.in_tree(s), 10, 3, 2))? {
            ensure!(r.all_inside(), "fin {al}: {r:?}");
            nodes += r.checked;
        }
    }
    Ok(format!("100 mad blocks, {points} ed points in {n} blocks, {nodes} fin nodes"))
}

fn c7_split() -> Outcome {
    const K: u64 = 10;
    let budget = 1 << 20;
    let tally = |flags: Vec<Option<bool>>| {
        let inside = flags.iter().filter(|f| **f == Some(true)).count() as u64;
        let outside = flags.iter().filter(|f| **f == Some(false)).count() as u64;
        (inside, outside)
    };

    let mfam = MadFamily::spiral();
    let a = synthetic::mad_blocks(&mfam, nat(), synthetic::all());
    let bound = synthetic::mad_bounds(&mfam, nat(), synthetic::all());
    let y = cons::mad_split(&mfam, nat(), a.clone(), bound, budget).y();
    let mut flags = vec![];
    for n in 0..2 * K {
        let v = lib(mfam.at(lib(y.get(2 * n))?.unwrap(), lib(y.get(2 * n + 1))?.unwrap()))?;
        flags.push(Some(lib(a(v))?));
    }
    ensure!(tally(flags) == (K, K), "mad split blocks");

    let efam = ed::spiral_delta_family();
    let a = synthetic::ed_columns(&efam, nat(), synthetic::all());
    let x = cons::ed_hide(&efam, nat(), a.clone(), budget).y();
    let y = cons::ed_split(&efam, x, a.clone(), synthetic::ed_bounds(nat(), synthetic::all()), budget).y();
    let mut flags = vec![];
    for n in 0..2 * K {
        let pts = ed_points(&efam, &*y, n)?;
        let inside = pts.iter().map(|&(c, r)| lib(a(c, r))).collect::<Result<Vec<_>, _>>()?;
        let all = inside.iter().all(|&b| b);
        flags.push(if all { Some(true) } else if inside.iter().any(|&b| b) { None } else { Some(false) });
        if n % 2 == 0 {
            ensure!(all && pts.len() as u64 == n + 1, "ed even block {n}: width {} inside {inside:?}", pts.len());
        }
    }
    ensure!(tally(flags) == (K, K), "ed split blocks");

    let ffam = FinFamily::spiral_full(&Ordinal::nat(2));
    let b = lib(synthetic::fin_blocks(&ffam, nat(), synthetic::even()))?;
    let small = synthetic::fin_small(&ffam, nat(), b.clone(), synthetic::even());
    let target = synthetic::fin_target(&ffam, nat(), b.clone(), synthetic::even());
    let y = cons::fin_split(&ffam, nat(), b, small, budget).y();
    let audit = lib(cons::audit_fin(&ffam, y, &target, 2 * K, 2, 2))?;
    let flags = audit.iter().map(|r| if r.all_inside() { Some(true) } else if r.all_outside() { Some(false) } else { None });
    ensure!(tally(flags.collect()) == (K, K), "fin split blocks {audit:?}");
    Ok(format!("{K} inside and {K} outside for mad, ed and fin"))
}

fn column_width(g: &GridSet, n: u64) -> Result<u64, String> {
    let m = lib(g.col_index(n))?;
    let col = lib(g.column_unchecked(m))?;
    let mut w = 0;
    while let Some(k) = lib(col.get(w))? {
        ensure!(lib(g.contains(m, k))?, "({m},{k}) listed but not contained");
        w += 1;
        if w > n + 5 {
            break;
        }
    }
    Ok(w)
}

fn c8_plusplus() -> Outcome {
    let efam = ed::spiral_delta_family();
    let mut grids = vec![];
    for salt in 0..3 {
        grids.push(lib(coding::phi_ed(&efam, random_set(salt)))?);
    }
    grids.push(lib(coding::phi_ed(&efam, nat()))?);
    for g in [GridSet::full(), GridSet::delta(), GridSet::width_fn(WidthRule::CeilHalf)] {
        grids.push(ed::plusplus_refine(&g, 1 << 16));
    }
    for (i, g) in grids.iter().enumerate() {
        for n in 0..=50 {
            let w = column_width(g, n)?;
            ensure!(w == n + 1, "grid {i}: column {n} has width {w}");
        }
    }
    Ok(format!("{} grids, n <= 50", grids.len()))
}

fn c9_encoding() -> Outcome {
    const P: u64 = 1000;
    let tri: HashSet<u64> = (0..100).map(|k| k * (k + 1) / 2).collect();
    let sets: Vec<(&str, Source, Box<dyn Fn(u64) -> bool>)> = vec![
        ("evens", Arc::new(StreamSet::evens()), Box::new(|n| n % 2 == 0)),
        ("naturals", nat(), Box::new(|_| true)),
        ("triangular", Arc::new(StreamSet::triangular()), Box::new(move |n| tri.contains(&n))),
        ("powers", Arc::new(StreamSet::powers(2)), Box::new(|n: u64| n.is_power_of_two())),
    ];
    for (name, x, member) in &sets {
        let e = lib(vitali::encode(&**x, P))?;
        ensure!(e.bits.len() as u64 == P, "{name}: {} digits", e.bits.len());
        for (i, &b) in e.bits.iter().enumerate() {
            ensure!(b == member(i as u64), "{name}: digit {i}");
        }
    }
    let tol = BigRational::new(BigInt::one(), BigInt::one() << P as usize);
    for (x, target) in [(StreamSet::evens(), BigRational::new(2.into(), 3.into())), (StreamSet::naturals(), BigRational::one())] {
        let v = lib(vitali::encode(&x, P))?.value();
        let gap = &target - &v;
        ensure!(!gap.is_negative() && gap <= tol, "partial sum {v} too far from {target}");
    }

    let gc = vitali::gap_construction(nat(), 1 << 24);
    let w: Vec<u64> = (0..1000).map(|k| lib(gc.witness.get(k)).map(|v| v.unwrap())).collect::<Result<_, _>>()?;
    for k in 2..w.len() {
        ensure!(w[k] - w[k - 1] > w[k - 1] - w[k - 2], "gap at {k}");
    }
    let horizon = 4000;
    let bits: HashSet<u64> = w.iter().copied().filter(|&v| v < horizon).collect();
    for k in 0..=100 {
        for l in 1..=100 {
            let refuted = (k..horizon - l).any(|i| bits.contains(&i) != bits.contains(&(i + l)));
            ensure!(refuted, "witness looks periodic with ({k},{l})");
        }
    }
    let v = lib(vitali::is_periodic_horizon(&*gc.witness, 100, 100, horizon))?;
    ensure!(matches!(v, PeriodVerdict::RefutedAtHorizon { .. }), "library verdict {v:?}");
    Ok(format!("digits to {P}, e(evens) and e(N) within 2^-{P}, 1000 gaps, (k,l) <= (100,100) refuted"))
}

fn c10_mid() -> Outcome {
    let members = mid::binary_digit_family(4);
    let sample = lib(mid::IndepFamilySample::certify(members.clone()))?;
    let pair = mid::OpenPair { u: vec![vec![1], vec![2]], v: vec![vec![4], vec![8]], depth: 1 };
    let probes = mid::probes(10, 100, &pair, &sample);
    ensure!(probes.len() == 100, "{} probes", probes.len());
    let r = lib(mid::ideal_axiom_suite(&pair, &sample, &probes))?;
    for c in &r.checks {
        ensure!(c.passed, "{}: {:?}", c.name, c.counterexample);
    }
    // each Boolean combination of the four digit sets is infinite
    for mask in 0u32..81 {
        let (mut f, mut g) = (vec![], vec![]);
        let mut m = mask;
        for i in 0..4 {
            match m % 3 {
                1 => f.push(i),
                2 => g.push(i),
                _ => {}
            }
            m /= 3;
        }
        let hits = (0..4096u64).filter(|&n| f.iter().all(|&i| members[i].contains(n)) && g.iter().all(|&i| !members[i].contains(n))).count();
        ensure!(hits >= 16, "combination {f:?} minus {g:?} looks finite");
    }

    let evens = UPSet::residue(0, 2);
    let ideal = mid::IdealPredicate::GeneratedBy { generators: vec![evens.clone()] };
    let (x1, x2, rep) = lib(mid::e_split_witness(&UPSet::naturals(), &evens, &ideal))?;
    let window = 4 * (x1.window() + x2.window()) + 64;
    let diff: Vec<u64> = (0..window).filter(|&n| x1.contains(n) != x2.contains(n)).collect();
    ensure!(diff.len() == 1, "x1 and x2 differ at {diff:?}");
    ensure!(rep.opposite(), "verdicts {} and {}", rep.x1_in_e, rep.x2_in_e);
    ensure!(lib(mid::e_ideal_member(&x1, &ideal))? == rep.x1_in_e, "x1 verdict not reproducible");
    ensure!(lib(mid::e_ideal_member(&x2, &ideal))? == rep.x2_in_e, "x2 verdict not reproducible");
    Ok(format!("{} checks over 100 probes; x1, x2 differ at {}", r.checks.len(), diff[0]))
}

fn c11_fusion() -> Outcome {
    let sets = vec![
        TableSet { depth: 1, modulus: 2, table: vec![1, 0] },
        TableSet { depth: 1, modulus: 3, table: vec![0, 1, 1] },
        TableSet { depth: 1, modulus: 2, table: vec![1, 1] },
    ];
    let h = lib(TableHomogenizer::new(sets))?;
    let t = lib(vitali::fuse(&h, 3, 3))?;
    ensure!(t.failure.is_none(), "refused: {:?}", t.failure);
    ensure!(t.calls.len() == 1 + 2 + 4, "{} homogenizer calls", t.calls.len());
    let window = 600;
    let mut prev: Vec<bool> = vec![true; window];
    let mut prev_b: Option<&Vec<u64>> = None;
    for r in &t.rounds {
        if let Some(pb) = prev_b {
            ensure!(pb.len() < r.before.len() && r.before.starts_with(pb), "B does not grow at round {}", r.k);
        }
        let a = lib(r.domain.to_upset())?;
        let cut = r.before.iter().max().map_or(0, |&m| m + 1);
        for n in 0..window as u64 {
            if a.contains(n) {
                ensure!(prev[n as usize] && n >= cut, "round {}: {n} in A_(k+1)", r.k);
            }
        }
        prev = (0..window as u64).map(|n| a.contains(n)).collect();
        prev_b = Some(&r.before);
    }
    Ok(format!("{} calls, c = {:?}", t.calls.len(), t.c))
}

fn c12_determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("idealab-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let trace = |name: &str| dir.join(name).display().to_string();
    let fig1 = r#"{"kind":"prefix","elements":[0,2,3,4,5,6]}"#;
    let fig2 = r#"{"kind":"prefix","elements":[0,2,5,7,8,10,11]}"#;
    let tables = r#"[{"depth":1,"table":[1,0]},{"depth":2,"modulus":3,"table":[1,0,1,0,1,1,0,0,1]}]"#;
    let commands: Vec<Vec<String>> = [
        vec!["phi", "mad", "--x", fig1, "--horizon", "2", "--trace", &trace("phi-mad")],
        vec!["phi", "ed", "--x", fig2, "--horizon", "2", "--ascii"],
        vec!["phi", "fin", "--alpha", "w", "--horizon", "3", "--depth", "3", "--width", "2"],
        vec!["construct", "mad-hide", "--horizon", "8", "--trace", &trace("mad-hide")],
        vec!["construct", "mad-split", "--horizon", "8", "--trace", &trace("mad-split")],
        vec!["construct", "ed-hide", "--horizon", "5", "--trace", &trace("ed-hide")],
        vec!["construct", "ed-split", "--horizon", "6", "--trace", &trace("ed-split")],
        vec!["construct", "fin-hide", "--horizon", "4", "--alpha", "3", "--trace", &trace("fin-hide")],
        vec!["construct", "fin-split", "--horizon", "6", "--trace", &trace("fin-split")],
        vec!["rank", "--tree", r#"{"alpha":"w","elements":[[0,0],[2,0,1,0],[2,1,0,0]]}"#],
        vec!["salpha-check", "2,0,1,0", "--alpha", "w"],
        vec!["fin-member", "--tree", r#"{"node":{"tail":{"periodic":[{"explicit":[[0]]}]}}}"#, "--alpha", "2"],
        vec!["ed", "check", "--grid", r#"{"builtin":"delta"}"#, "--cert", "plusplus"],
        vec!["ed", "refine", "--grid", r#"{"builtin":"full"}"#],
        vec!["ed", "spiral"],
        vec!["pi", "3,1,4"],
        vec!["pi", "--inverse", "12345"],
        vec!["encode", "--set", r#"{"kind":"builtin","name":"evens"}"#, "--horizon", "40"],
        vec!["gaps", "--horizon", "12", "--trace", &trace("gaps")],
        vec!["fuse", "--sets", tables, "--steps", "4", "--trace", &trace("fuse")],
        vec!["mid", "sigma", "--f", "0,1", "--g", "2"],
        vec!["mid", "check"],
        vec!["mid", "member", "--x", r#"{"kind":"upset","prefix":[],"period":[0,1,0,0]}"#, "--side", "i"],
        vec!["mid", "suite", "--seed", "4", "--trace", &trace("mid-suite")],
        vec![
            "mid",
            "split",
            "--x",
            r#"{"kind":"builtin","name":"naturals"}"#,
            "--a",
            r#"{"kind":"upset","prefix":[],"period":[1,0]}"#,
            "--ideal",
            r#"{"name":"generated-by","generators":[{"kind":"upset","prefix":[],"period":[1,0]}]}"#,
        ],
        vec!["verify", "all", "--seed", "12", "--trace", &trace("verify")],
    ]
    .iter()
    .map(|c| c.iter().map(|s| s.to_string()).collect())
    .collect();
    let mut digests = vec![];
    let mut codes = BTreeMap::new();
    for _ in 0..3 {
        let mut h = DefaultHasher::new();
        for c in &commands {
            let mut args = vec!["idealab".to_string()];
            args.extend(c.iter().cloned());
            let (mut out, mut err) = (Vec::new(), Vec::new());
            let code = idealab::cli::run(&args, &mut out, &mut err);
            codes.insert(c.join(" "), (code, String::from_utf8_lossy(&err).to_string()));
            (code, out, err).hash(&mut h);
            if let Some(i) = c.iter().position(|a| a == "--trace") {
                std::fs::read(&c[i + 1]).map_err(|e| format!("{}: {e}", c[i + 1]))?.hash(&mut h);
            }
        }
        digests.push(h.finish());
    }
    let _ = std::fs::remove_dir_all(&dir);
    let failing: Vec<_> = codes.iter().filter(|(_, (c, _))| *c != 0).collect();
    ensure!(failing.is_empty(), "commands exited nonzero: {failing:?}");
    ensure!(digests.windows(2).all(|d| d[0] == d[1]), "digests differ: {digests:x?}");
    Ok(format!("{} commands, 3 runs, digest {:016x}", commands.len(), digests[0]))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome, u64); 12] = [
        ("pi laws", c1_pi, 10),
        ("S_alpha and rank oracles", c2_s_alpha_rank, 10),
        ("Fin^alpha membership corpus", c3_fin_member, 30),
        ("coding figures", c4_figures, 1),
        ("continuity modulus", c5_continuity, 60),
        ("hide postconditions", c6_hide, 60),
        ("split postconditions", c7_split, 60),
        ("ED ++ widths", c8_plusplus, 5),
        ("encoding", c9_encoding, 10),
        ("MID ideals", c10_mid, 10),
        ("fusion bookkeeping", c11_fusion, 1),
        ("CLI determinism", c12_determinism, 600),
    ];
    let mut failed = vec![];
    let mut stderr = std::io::stderr();
    for (i, (name, f, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(d) if took > Duration::from_secs(limit) => Err(format!("took {took:.2?}, limit {limit} s ({d})")),
            o => o,
        };
        let line = match &outcome {
            Ok(d) => format!("criterion {:>2} {name}: PASS in {took:.2?} ({d})", i + 1),
            Err(e) => format!("criterion {:>2} {name}: FAIL in {took:.2?}: {e}", i + 1),
        };
        let _ = writeln!(stderr, "{line}");
        if outcome.is_err() {
            failed.push(line);
        }
    }
    assert!(failed.is_empty(), "{}", failed.join("\n"));
}
