use finlab::rewrite::{case1_normalize, rewrite_into_tree, s_close, synth_tree, verify_certificate};
use finlab::span::{all_combos, combine, decompose, enum_span, enum_span_tuples, is_block_subsequence, Mode};
use finlab::{BlockSeq, FinVec};
use proptest::prelude::*;

fn vec_strategy(max_k: u32, max_window: u32) -> impl Strategy<Value = FinVec> {
    (1..=max_k, 1..=max_window).prop_flat_map(|(k, w)| {
        let k = k as i32;
        prop::collection::vec(-k..=k, w as usize).prop_map(move |vals| FinVec::from_dense(&vals, k as u32).unwrap())
    })
}

/// Two vectors sharing a kBound and window.
fn pair_strategy(max_k: u32, max_window: u32) -> impl Strategy<Value = (FinVec, FinVec)> {
    (1..=max_k, 1..=max_window).prop_flat_map(|(k, w)| {
        let k = k as i32;
        let one = prop::collection::vec(-k..=k, w as usize);
        (one.clone(), one).prop_map(move |(a, b)| {
            (FinVec::from_dense(&a, k as u32).unwrap(), FinVec::from_dense(&b, k as u32).unwrap())
        })
    })
}

/// Block sequences attaining `k` built from per-block widths and values.
fn seq_strategy(k: u32, max_len: usize) -> impl Strategy<Value = BlockSeq> {
    let kk = k as i32;
    let block = (1usize..=3, 0u32..=1)
        .prop_flat_map(move |(w, gap)| (prop::collection::vec(-kk..=kk, w), 0..w, any::<bool>(), Just(gap)));
    prop::collection::vec(block, 1..=max_len).prop_map(move |blocks| {
        let mut start = 0u32;
        let mut out = Vec::new();
        for (mut vals, at, neg, gap) in blocks {
            vals[at] = if neg { -kk } else { kk };
            start += gap;
            let entries =
                vals.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (start + i as u32, v)).collect();
            start += vals.len() as u32;
            out.push(FinVec::new(entries, k).unwrap());
        }
        BlockSeq::new(k, out).unwrap()
    })
}

proptest! {
    #[test]
    fn literal_round_trip(v in vec_strategy(4, 12)) {
        let back: FinVec = v.to_string().parse().unwrap();
        prop_assert_eq!(back.entries(), v.entries());
    }

    #[test]
    fn dist_is_a_metric((u, v) in pair_strategy(4, 10), w in vec_strategy(4, 10)) {
        prop_assert_eq!(u.dist(&v), v.dist(&u));
        prop_assert_eq!(u.dist(&v) == 0, u.same_values(&v));
        prop_assert!(u.dist(&w) <= u.dist(&v) + v.dist(&w));
    }

    #[test]
    fn weak_tetris_laws((u, v) in pair_strategy(4, 10)) {
        let s = v.weak_tetris();
        prop_assert!(v.dist(&s) <= 1);
        prop_assert_eq!(s.weak_tetris(), s);
        if u.dist(&v) <= 1 {
            let su = u.weak_tetris();
            prop_assert!(su.support_within(&v));
            prop_assert!(su.dist(&v) <= 2);
        }
    }

    #[test]
    fn tetris_shrinks_support(v in vec_strategy(4, 12)) {
        let t = v.tetris();
        prop_assert!(t.support_within(&v));
        prop_assert!(v.neg_tetris().support_within(&v));
        if v.k() >= 2 && v.attains() {
            prop_assert!(t.attains());
            prop_assert_eq!(t.k(), v.k() - 1);
        }
    }

    #[test]
    fn neg_tetris_parity(v in vec_strategy(4, 8), j in 0u32..6) {
        let expect = if j % 2 == 0 { v.tetris_pow(j) } else { v.tetris_pow(j).neg() };
        prop_assert!(v.neg_tetris_pow(j).same_values(&expect));
    }

    #[test]
    fn phi_is_a_homomorphism(p in seq_strategy(4, 2)) {
        prop_assume!(p.len() == 2);
        let m = 2;
        let (u, v) = (&p.blocks()[0], &p.blocks()[1]);
        let lhs = u.add(v).unwrap().phi(m).unwrap();
        let rhs = FinVec::sum_ordered(m, [&u.phi(m).unwrap(), &v.phi(m).unwrap()]).unwrap();
        prop_assert!(lhs.same_values(&rhs));
        prop_assert_eq!(u.neg().phi(m).unwrap(), u.phi(m).unwrap().neg());
    }

    #[test]
    fn psi_is_one_lipschitz_at_scale_four((u, v) in pair_strategy(8, 8)) {
        prop_assume!(u.dist(&v) <= 4);
        let (a, b) = (u.with_k(8).unwrap(), v.with_k(8).unwrap());
        prop_assert!(a.psi(2).unwrap().dist(&b.psi(2).unwrap()) <= 1);
    }

    #[test]
    fn pm_round_trip(p in seq_strategy(2, 3)) {
        for c in all_combos(p.len(), p.k(), Mode::Pm) {
            let v = combine(&p, &c).unwrap();
            prop_assert_eq!(decompose(&v, &p, Mode::Pm), Some(c));
        }
    }

    #[test]
    fn span_is_monotone(p in seq_strategy(2, 3)) {
        let span: std::collections::BTreeSet<FinVec> = enum_span(&p, Mode::Pm).unwrap().into_iter().collect();
        for q in enum_span_tuples(&p, 2.min(p.len())).unwrap() {
            prop_assert!(is_block_subsequence(&q, &p).is_some());
            for x in enum_span(&q, Mode::Pm).unwrap() {
                prop_assert!(span.contains(&x));
            }
        }
    }

    #[test]
    fn synth_tree_certifies(p in seq_strategy(2, 3)) {
        let (u, cert) = synth_tree(&p, p.len()).unwrap();
        prop_assert!(verify_certificate(&u, &cert).passed());
        prop_assert!(u.is_s_closed());
        let (closed, proj) = s_close(&u).unwrap();
        prop_assert_eq!(closed.len(), u.len());
        prop_assert!(proj.iter().enumerate().all(|(i, &j)| i == j));
    }

    #[test]
    fn rewriting_stays_within_three(p in seq_strategy(2, 3), pick in any::<prop::sample::Index>()) {
        let (u, cert) = synth_tree(&p, p.len()).unwrap();
        let tuples = enum_span_tuples(&p, 1 + pick.index(p.len())).unwrap();
        let q = &tuples[pick.index(tuples.len())];
        let trace = rewrite_into_tree(q, &p, &u, &cert).unwrap();
        prop_assert!(trace.max_dist() <= 3);
        prop_assert!(u.find(&trace.output).is_some());
        for (a, b) in q.iter().zip(&trace.output) {
            prop_assert!(b.support_within(a));
        }
    }
}

/// Case 1 normalisation over every PM combo with a `+T^0` term.
#[test]
fn case1_exhaustive() {
    for m in 1..=3 {
        for k in 1..=3 {
            for p in finlab::selftest::sample_sequences(m, k) {
                let nt: std::collections::BTreeSet<FinVec> = enum_span(&p, Mode::Nt).unwrap().into_iter().collect();
                for c in all_combos(m, k, Mode::Pm).into_iter().filter(|c| c.has_positive_base_term()) {
                    let n = case1_normalize(&c).unwrap();
                    let (before, after) = (combine(&p, &c).unwrap(), combine(&p, &n).unwrap());
                    assert!(nt.contains(&after), "{c} -> {n}");
                    assert!(before.dist(&after) <= 1, "{c} -> {n}");
                    assert!(after.support_within(&before), "{c} -> {n}");
                    assert!(n.terms().iter().any(|t| t.level == 0));
                }
            }
        }
    }
}
