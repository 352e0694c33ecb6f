//! Randomized invariants, one block per module.

use std::collections::BTreeMap;
use std::sync::Arc;

use idealab::coding::{self, MadFamily};
use idealab::constructions::{self as cons, synthetic};
use idealab::ed::{self, EDCertificate, GridSet, Universe};
use idealab::mid;
use idealab::ordinal::Ordinal;
use idealab::seqcode::{pi, prime_code_big};
use idealab::sets::{relative_embed, Source, StreamSet, UPSet};
use idealab::tree::{s_alpha_contains, ExplicitTreeSet, Seq};
use idealab::vitali::{self, TableHomogenizer, TableSet};
use num_traits::Zero;
use proptest::prelude::*;

fn upset() -> impl Strategy<Value = UPSet> {
    (prop::collection::vec(0u8..2, 0..8), prop::collection::vec(0u8..2, 1..6))
        .prop_map(|(p, q)| UPSet::from_bits(&p, &q).unwrap())
}

// ordinals below w^3
fn ordinal() -> impl Strategy<Value = Ordinal> {
    (0u64..3, 0u64..3, 0u64..4).prop_map(|(c2, c1, c0)| {
        let terms = [(2, c2), (1, c1), (0, c0)]
            .into_iter()
            .filter(|&(_, c)| c > 0)
            .map(|(e, c)| (Ordinal::nat(e), c))
            .collect();
        Ordinal::from_terms(terms).unwrap()
    })
}

fn window(a: &UPSet, b: &UPSet, c: &UPSet) -> u64 {
    [a, b, c].iter().map(|x| x.prefix_len()).max().unwrap()
        + [a, b, c].iter().map(|x| x.period_len()).product::<u64>()
}

proptest! {
    #[test]
    fn boolean_ring(a in upset(), b in upset(), c in upset()) {
        let n = window(&a, &b, &c);
        let (ab, bc) = (a.intersect(&b), b.intersect(&c));
        for i in 0..n {
            let (x, y) = (a.contains(i), b.contains(i));
            prop_assert_eq!(a.sym_diff(&b).contains(i), x ^ y);
            prop_assert_eq!(ab.intersect(&c).contains(i), a.intersect(&bc).contains(i));
            prop_assert_eq!(a.intersect(&b.sym_diff(&c)).contains(i), ab.sym_diff(&a.intersect(&c)).contains(i));
            prop_assert_eq!(a.union(&b).contains(i), x || y);
            prop_assert_eq!(a.complement().contains(i), !x);
            prop_assert!(!a.sym_diff(&a).contains(i));
        }
        prop_assert_eq!(a.union(&b), b.union(&a));
    }

    #[test]
    fn finiteness_by_scan(a in upset()) {
        let tail_empty = (a.prefix_len()..a.window()).all(|i| !a.contains(i));
        prop_assert_eq!(a.is_finite(), tail_empty);
    }

    #[test]
    fn embedding_composes(da in 1u64..5, db in 1u64..5, dz in 1u64..5, k in 0u64..1000) {
        let s = |d: u64| -> Source { Arc::new(StreamSet::arithmetic(d, d)) };
        let (a, b, z) = (s(da), s(db), s(dz));
        let left = relative_embed(a.clone(), relative_embed(b.clone(), z.clone()));
        let right = relative_embed(relative_embed(a, b), z);
        prop_assert_eq!(left.get(k).unwrap(), right.get(k).unwrap());
    }

    #[test]
    fn fund_seq_laws(a in ordinal(), n in 0u64..100) {
        prop_assume!(!a.is_zero());
        let f = a.fund_seq(n).unwrap();
        prop_assert!(f < a);
        let g = a.fund_seq(n + 1).unwrap();
        if a.is_limit() {
            prop_assert!(f < g);
            prop_assert!(f >= Ordinal::nat(1));
        } else {
            prop_assert!(f <= g);
        }
    }

    #[test]
    fn fund_seq_is_cofinal(a in ordinal(), b in ordinal()) {
        if !a.is_limit() || b >= a {
            return Ok(());
        }
        prop_assert!((0..1000).any(|n| a.fund_seq(n).unwrap() >= b));
    }

    #[test]
    fn path_composes(s in prop::collection::vec(0u64..6, 0..4), t in prop::collection::vec(0u64..6, 0..3),
                     c in 0u64..3, d in 0u64..3) {
        let terms: Vec<_> = [(1, c), (0, d)].into_iter().filter(|&(_, k)| k > 0).map(|(e, k)| (Ordinal::nat(e), k)).collect();
        let a = Ordinal::from_terms(terms).unwrap();
        let st: Seq = s.iter().chain(&t).copied().collect();
        match (a.path(&s), a.path(&st)) {
            (Ok(mid), Ok(end)) => prop_assert_eq!(mid.path(&t).unwrap(), end),
            (Ok(mid), Err(_)) => prop_assert!(mid.path(&t).is_err()),
            (Err(_), r) => prop_assert!(r.is_err()),
        }
    }

    #[test]
    fn elements_end_at_one_then_zero(a in ordinal(), picks in prop::collection::vec(0u64..5, 40)) {
        prop_assume!(!a.is_zero());
        let mut s = vec![];
        let mut g = a.clone();
        let mut i = 0;
        while !g.is_zero() {
            let n = picks[i % picks.len()];
            g = g.fund_seq(n).unwrap();
            s.push(n);
            i += 1;
        }
        prop_assert!(s_alpha_contains(&a, &s));
        prop_assert!(a.path(&s).unwrap().is_zero());
        prop_assert_eq!(a.path(&s[..s.len() - 1]).unwrap(), Ordinal::nat(1));
    }

    #[test]
    fn index_and_evaluate_invert(picks in prop::collection::vec(prop::collection::vec(0u64..6, 3), 1..20)) {
        let alpha = Ordinal::nat(3);
        let x = ExplicitTreeSet::new(alpha, picks.clone()).unwrap();
        let lazy = x.to_lazy();
        for s in &picks {
            let t = lazy.x_index(s).unwrap();
            prop_assert_eq!(&lazy.evaluate(&t).unwrap(), s);
            prop_assert!(lazy.contains(s).unwrap());
        }
    }

    #[test]
    fn terminal_cut_is_minimal(alpha in ordinal(), idx in prop::collection::vec(0u64..4, 60)) {
        prop_assume!(!alpha.is_zero());
        let full = idealab::tree::LazyTree::full(&alpha);
        let t = idealab::sets::Prefix(idx.clone());
        let cut = full.terminal_cut(&t, 60).unwrap();
        prop_assert!(full.contains(&full.evaluate(&cut).unwrap()).unwrap());
        for i in 0..cut.len() {
            prop_assert!(!full.contains(&full.evaluate(&cut[..i]).unwrap()).unwrap());
        }
    }

    #[test]
    fn pi_prefix_and_coordinates(s in prop::collection::vec(0u64..5, 2..5), ext in prop::collection::vec(0u64..5, 1..3),
                                 n in 0u64..5, m in 0u64..5) {
        let mut t = s.clone();
        t.extend(&ext);
        prop_assert!(pi(&s).unwrap() < pi(&t).unwrap());
        prop_assert!((prime_code_big(&t).unwrap() % prime_code_big(&s).unwrap()).is_zero());
        prop_assume!(n < m);
        let with = |v: u64, first: bool| -> Seq {
            if first { std::iter::once(v).chain(s.iter().copied()).collect() } else { s.iter().copied().chain([v]).collect() }
        };
        prop_assert!(pi(&with(n, false)).unwrap() < pi(&with(m, false)).unwrap());
        prop_assert!(pi(&with(n, true)).unwrap() < pi(&with(m, true)).unwrap());
    }

    #[test]
    fn small_certificates_match_width_scan(cols in prop::collection::btree_map(0u64..40, prop::collection::btree_set(0u64..40, 0..6), 0..20),
                                           n in 0u64..6) {
        let columns: BTreeMap<u64, Vec<u64>> = cols.iter().map(|(&m, c)| (m, c.iter().copied().collect())).collect();
        let g = GridSet::explicit(columns.clone(), Universe::Full).unwrap();
        let expect = columns.iter().filter(|(&m, _)| m >= n).all(|(_, c)| c.len() as u64 <= n);
        let got = ed::ed_member(&g, &EDCertificate::Small { n }, 40);
        prop_assert_eq!(got.is_ok(), expect);
        if let Err(e) = got {
            prop_assert_eq!(e.exit_code(), 1);
        }
    }

    #[test]
    fn mad_blocks_sit_above_their_floor(salt in any::<u64>(), n in 0u64..20) {
        let fam = MadFamily::spiral();
        let x: Source = Arc::new(idealab::verify::jittered(salt));
        let r = coding::phi_mad_block(&fam, &*x, n).unwrap();
        prop_assert!(r.value >= fam.at(2 * n, 0).unwrap());
        prop_assert_eq!(fam.owner(r.value).unwrap(), Some((r.member, r.index)));
    }

    #[test]
    fn encoding_adds_on_disjoint_sets(a in upset(), b in upset(), p in 1u64..200) {
        let b = b.diff(&a);
        let sum = vitali::encode(&a.union(&b), p).unwrap().value();
        let parts = vitali::encode(&a, p).unwrap().value() + vitali::encode(&b, p).unwrap().value();
        prop_assert_eq!(sum, parts);
        let e = vitali::encode(&a, p).unwrap();
        for (j, &bit) in e.bits.iter().enumerate() {
            prop_assert_eq!(bit, a.contains(j as u64));
        }
    }

    #[test]
    fn sigma_is_monotone(f in prop::collection::btree_set(0usize..4, 0..3), g in prop::collection::btree_set(0usize..4, 0..3), extra in 0usize..4) {
        let members = mid::binary_digit_family(4);
        let pick = |ix: &std::collections::BTreeSet<usize>| ix.iter().map(|&i| members[i].clone()).collect::<Vec<_>>();
        let base = mid::sigma(&pick(&f), &pick(&g));
        let mut f2 = f.clone();
        f2.insert(extra);
        let mut g2 = g.clone();
        g2.insert(extra);
        prop_assert!(mid::sigma(&pick(&f2), &pick(&g)).is_subset(&base));
        prop_assert!(mid::sigma(&pick(&f), &pick(&g2)).is_subset(&base));
    }

    #[test]
    fn fusion_shrinks_and_picks_minimum(tables in prop::collection::vec((2u64..4, prop::collection::vec(0u8..2, 9)), 1..4),
                                        steps in 1u64..5) {
        let sets: Vec<TableSet> = tables.into_iter().map(|(m, t)| TableSet { depth: 1, modulus: m, table: t[..m as usize].to_vec() }).collect();
        let h = TableHomogenizer::new(sets.clone()).unwrap();
        let t = vitali::fuse(&h, sets.len(), steps).unwrap();
        let mut prev = UPSet::naturals();
        for r in &t.rounds {
            let a = r.domain.to_upset().unwrap();
            prop_assert_eq!(a.nth(0), Some(r.chosen));
            let top = r.before.last().map_or(0, |&v| v + 1);
            prop_assert!(a.is_subset(&prev.diff(&UPSet::from_window(top, 1, |n| n < top))));
            prev = a;
        }
        prop_assert_eq!(t.calls.len() as u64, (1u64 << t.rounds.len()) - 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constructions_stay_inside_their_input(salt in any::<u64>()) {
        let h: Source = Arc::new(idealab::verify::jittered(salt));
        let fam = MadFamily::spiral();
        let a = synthetic::mad_blocks(&fam, h.clone(), synthetic::even());
        let c = cons::mad_hide(&fam, h.clone(), a.clone(), 1 << 20);
        let y = c.prefix(30).unwrap();
        prop_assert!(y.windows(2).all(|w| w[0] < w[1]));
        for &v in &y {
            prop_assert!(h.contains(v).unwrap());
        }
        for r in cons::audit_mad(&fam, &*c.y(), &a, 15).unwrap() {
            prop_assert!(r.all_inside());
        }
        let again = cons::mad_hide(&fam, h, a, 1 << 20).prefix(30).unwrap();
        prop_assert_eq!(y, again);
    }

    #[test]
    fn garbage_input_is_a_parse_error(junk in "[a-z{}\\[\\]:,0-9 ]{0,12}") {
        let (code, _, _) = idealab::cli::run_captured(&["encode", "--set", &format!("{{{junk}")]);
        prop_assert_eq!(code, 2);
    }
}
