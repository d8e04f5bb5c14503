//! Invariant suites over the finite constructions, shared by the CLI
//! `selftest` command and the acceptance tests.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coloring::{Coloring, Rule};
use crate::lift::{lift_block, lift_combo, pushforward_coloring, scale4};
use crate::rewrite::{rewrite_into_tree, s_close, synth_tree, verify_certificate, Certificate, Violation};
use crate::seq::BlockSeq;
use crate::span::{self, all_combos, combine, decompose, enum_span, enum_span_tuples, span_size, Mode};
use crate::tree::FiniteBlockTree;
use crate::vector::FinVec;

/// Random instances per randomized law.
pub const RANDOM_CASES: usize = 10_000;

const MAX_SAMPLES: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: u64,
    pub violations: u64,
    /// The first few violations, described.
    pub samples: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport { name, cases: 0, violations: 0, samples: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations += 1;
            if self.samples.len() < MAX_SAMPLES {
                self.samples.push(describe());
            }
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} cases, {} violations",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.violations
        )?;
        for s in &self.samples {
            write!(f, "\n  {s}")?;
        }
        Ok(())
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Values in `[lo, hi]` over coordinates `start..start + width`, one of them
/// forced to `±k` when `attain` is set.
pub fn random_vec(rng: &mut impl Rng, k: u32, start: u32, width: u32, attain: bool) -> FinVec {
    let k = k as i32;
    let mut values: Vec<i32> = (0..width).map(|_| rng.gen_range(-k..=k)).collect();
    if attain {
        let at = rng.gen_range(0..width as usize);
        values[at] = if rng.gen_bool(0.5) { k } else { -k };
    }
    let entries = values.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (start + i as u32, v)).collect();
    FinVec::new(entries, k as u32).expect("values within bound")
}

/// Length-`len` block sequence attaining `k` inside `[0, window)`.
pub fn random_blockseq(rng: &mut impl Rng, k: u32, len: usize, window: u32) -> BlockSeq {
    assert!(window as usize >= len && len > 0);
    // Random cut points split the window into `len` nonempty segments, each
    // of which is trimmed to a random sub-interval.
    let mut cuts: BTreeSet<u32> = BTreeSet::new();
    while cuts.len() < len - 1 {
        cuts.insert(rng.gen_range(1..window));
    }
    let bounds: Vec<u32> = std::iter::once(0).chain(cuts).chain(std::iter::once(window)).collect();
    let blocks = bounds
        .windows(2)
        .map(|w| {
            let a = rng.gen_range(w[0]..w[1]);
            let b = rng.gen_range(a + 1..=w[1]);
            random_vec(rng, k, a, b - a, true)
        })
        .collect();
    BlockSeq::new(k, blocks).expect("segments are ordered")
}

/// Every vector with support in `[0, window)` and values in `[−k, k]`,
/// the zero vector included.
pub fn all_vecs(k: u32, window: u32) -> Vec<FinVec> {
    let k = k as i32;
    let mut out = vec![Vec::new()];
    for n in 0..window {
        let mut next = Vec::with_capacity(out.len() * (2 * k as usize + 1));
        for e in &out {
            for v in -k..=k {
                let mut e: Vec<(u32, i32)> = e.clone();
                if v != 0 {
                    e.push((n, v));
                }
                next.push(e);
            }
        }
        out = next;
    }
    out.into_iter().map(|e| FinVec::new(e, k as u32).expect("bounded")).collect()
}

/// `v` perturbed by at most `eps` per coordinate of `[0, window)`, staying
/// within `[−bound, bound]`.
fn perturb(rng: &mut impl Rng, v: &FinVec, eps: u32, bound: u32, window: u32) -> FinVec {
    let (eps, bound) = (eps as i32, bound as i32);
    let entries = (0..window)
        .filter_map(|n| {
            let x = (v.get(n) + rng.gen_range(-eps..=eps)).clamp(-bound, bound);
            (x != 0).then_some((n, x))
        })
        .collect();
    FinVec::new(entries, bound as u32).expect("clamped")
}

fn window_of(v: &FinVec) -> u32 {
    v.max_support().map_or(0, |n| n + 1)
}

/// `u + v` for `u < v`, either possibly zero.
fn sum(k: u32, parts: &[&FinVec]) -> FinVec {
    FinVec::sum_ordered(k, parts.iter().copied()).expect("ordered parts")
}

/// `dist(v, S v) ≤ 1`, idempotence, and for `dist(u, v) ≤ 1`:
/// `supp S(u) ⊆ supp v`, `dist(S u, v) ≤ 2`.
pub fn s_laws(seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("S-laws");
    let check_pair = |rep: &mut SuiteReport, u: &FinVec, v: &FinVec| {
        let s = u.weak_tetris();
        rep.check(s.support_within(v) && s.dist(v) <= 2, || format!("pair u={u} v={v}: S(u)={s}"));
    };
    let check_one = |rep: &mut SuiteReport, v: &FinVec| {
        let s = v.weak_tetris();
        rep.check(v.dist(&s) <= 1, || format!("dist({v}, S)={}", v.dist(&s)));
        rep.check(s.weak_tetris() == s, || format!("S not idempotent at {v}"));
    };
    let mut r = rng(seed);
    for _ in 0..RANDOM_CASES {
        let k = r.gen_range(1..=4);
        let w = r.gen_range(1..=12);
        let v = random_vec(&mut r, k, 0, w, false);
        check_one(&mut rep, &v);
        let u = perturb(&mut r, &v, 1, k, w);
        check_pair(&mut rep, &u, &v);
    }
    for k in 1..=2 {
        let all = all_vecs(k, 4);
        for v in &all {
            check_one(&mut rep, v);
            for u in all.iter().filter(|u| u.dist(v) <= 1) {
                check_pair(&mut rep, u, v);
            }
        }
    }
    rep
}

/// One instance of every Φ_m / Ψ_k law for the block pair `u < v` and the
/// perturbed pair `(u, u2)`.
fn phi_laws(rep: &mut SuiteReport, m: u32, u: &FinVec, v: &FinVec, u2: &FinVec, j: (u32, u32)) {
    let phi = |x: &FinVec| x.phi(m).expect("amplitude within 2m");
    let k2 = 2 * m;
    // Additivity and negation.
    if !u.is_zero() && !v.is_zero() {
        let lhs = phi(&u.add(v).expect("u < v"));
        let rhs = sum(m, &[&phi(u), &phi(v)]);
        rep.check(lhs.same_values(&rhs), || format!("phi{m} not additive at {u} + {v}"));
    }
    rep.check(phi(&u.neg()) == phi(u).neg(), || format!("phi{m} does not commute with neg at {u}"));
    // Even tetris levels pass through.
    let lhs = phi(&sum(k2, &[&u.tetris_pow(2 * j.0), &v.tetris_pow(2 * j.1)]));
    let rhs = sum(m, &[&phi(u).tetris_pow(j.0), &phi(v).tetris_pow(j.1)]);
    rep.check(lhs.same_values(&rhs), || format!("phi{m} tetris law fails at {u}, {v}, j={j:?}"));
    phi_lipschitz(rep, m, u, u2);
}

/// `dist(u, u2) ≤ 2l ⟹ dist(Φ u, Φ u2) ≤ l`, with the least `l` admitted by the hypothesis.
fn phi_lipschitz(rep: &mut SuiteReport, m: u32, u: &FinVec, u2: &FinVec) {
    let l = u.dist(u2).div_ceil(2);
    let got = u.phi(m).expect("amplitude within 2m").dist(&u2.phi(m).expect("amplitude within 2m"));
    rep.check(got <= l, || format!("phi{m} not l-Lipschitz at {u}, {u2}"));
}

fn psi_near(rep: &mut SuiteReport, k: u32, u: &FinVec, u2: &FinVec) {
    if u.dist(u2) <= 4 {
        let got = u.psi(k).expect("amplitude within 4k").dist(&u2.psi(k).expect("amplitude within 4k"));
        rep.check(got <= 1, || format!("psi{k} moves {u}, {u2} apart"));
    }
}

fn psi_laws(rep: &mut SuiteReport, k: u32, u: &FinVec, v: &FinVec, u2: &FinVec, j: (u32, u32)) {
    let psi = |x: &FinVec| x.psi(k).expect("amplitude within 4k");
    // Levels that are multiples of 4 pass through.
    let lhs = psi(&sum(4 * k, &[&u.tetris_pow(4 * j.0), &v.tetris_pow(4 * j.1)]));
    let rhs = sum(k, &[&psi(u).tetris_pow(j.0), &psi(v).tetris_pow(j.1)]);
    rep.check(lhs.same_values(&rhs), || format!("psi{k} tetris law fails at {u}, {v}, j={j:?}"));
    psi_near(rep, k, u, u2);
}

fn level_pair(rng: &mut impl Rng, top: u32) -> (u32, u32) {
    let j = rng.gen_range(0..=top);
    if rng.gen_bool(0.5) {
        (0, j)
    } else {
        (j, 0)
    }
}

fn level_pairs(top: u32) -> Vec<(u32, u32)> {
    (0..=top).flat_map(|j| [(0, j), (j, 0)]).collect::<BTreeSet<_>>().into_iter().collect()
}

/// Φ_m additivity, tetris and Lipschitz laws; Ψ_k tetris law and
/// 4-to-1 contraction.
pub fn homomorphism(seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("homomorphism");
    let mut r = rng(seed);
    for _ in 0..RANDOM_CASES {
        let m = r.gen_range(1..=4);
        let w = r.gen_range(2..=12);
        let p = random_blockseq(&mut r, 2 * m, 2, w);
        let (u, v) = (&p.blocks()[0], &p.blocks()[1]);
        let eps = r.gen_range(0..=4 * m);
        let u2 = perturb(&mut r, u, eps, 2 * m, window_of(&p.union()));
        phi_laws(&mut rep, m, u, v, &u2, level_pair(&mut r, m));

        let k = r.gen_range(1..=3);
        let w = r.gen_range(2..=12);
        let p = random_blockseq(&mut r, 4 * k, 2, w);
        let (u, v) = (&p.blocks()[0], &p.blocks()[1]);
        let eps = r.gen_range(0..=4);
        let u2 = perturb(&mut r, u, eps, 4 * k, window_of(&p.union()));
        psi_laws(&mut rep, k, u, v, &u2, level_pair(&mut r, k));
    }
    // Exhaustive over window 3 at k = 1: Φ_1 on FIN_±2 and Ψ_1 on FIN_±4.
    for (bound, is_phi) in [(2u32, true), (4, false)] {
        let all = all_vecs(bound, 3);
        let js = level_pairs(1);
        for u in &all {
            for v in all.iter().filter(|v| u.is_zero() || v.is_zero() || u.precedes(v)) {
                for &j in &js {
                    if is_phi {
                        phi_laws(&mut rep, 1, u, v, u, j);
                    } else {
                        psi_laws(&mut rep, 1, u, v, u, j);
                    }
                }
            }
            for u2 in &all {
                if is_phi {
                    phi_lipschitz(&mut rep, 1, u, u2);
                } else {
                    psi_near(&mut rep, 1, u, u2);
                }
            }
        }
    }
    rep
}

/// Fixed block-sequence shapes of length `m` attaining `k`.
pub fn sample_sequences(m: usize, k: u32) -> Vec<BlockSeq> {
    let k = k as i32;
    let unit: Vec<FinVec> = (0..m).map(|i| FinVec::from_raw(vec![(i as u32, k)], k as u32)).collect();
    let pairs: Vec<FinVec> = (0..m)
        .map(|i| {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let second = -sign * ((i as i32 % k) + 1);
            FinVec::from_raw(vec![(2 * i as u32, sign * k), (2 * i as u32 + 1, second)], k as u32)
        })
        .collect();
    let wide: Vec<FinVec> = (0..m)
        .map(|i| {
            let base = 3 * i as u32;
            let mut e = vec![(base, 1), (base + 1, -k)];
            if k > 1 {
                e.push((base + 2, k - 1));
            }
            FinVec::from_raw(e, k as u32)
        })
        .collect();
    [unit, pairs, wide].into_iter().map(|b| BlockSeq::new(k as u32, b).expect("ordered")).collect()
}

/// decompose ∘ combine = id and `|enum_span| = span_size`, both modes.
pub fn span_integrity() -> SuiteReport {
    let mut rep = SuiteReport::new("span-integrity");
    for m in 1..=4 {
        for k in 1..=3 {
            for p in sample_sequences(m, k) {
                for mode in [Mode::Pm, Mode::Nt] {
                    let mut values = BTreeSet::new();
                    for c in all_combos(m, k, mode) {
                        let v = combine(&p, &c).expect("valid combo");
                        let expect = c.reduced(k);
                        let back = decompose(&v, &p, mode);
                        rep.check(back.as_ref() == Some(&expect), || {
                            format!("{mode} round trip at P=({p}) c={c}: got {back:?}")
                        });
                        if mode == Mode::Pm {
                            rep.check(v.attains(), || format!("{v} from {c} does not attain {k}"));
                        }
                        values.insert(v);
                    }
                    let span = enum_span(&p, mode).expect("small span");
                    let size = span_size(m, k, mode).expect("fits") as usize;
                    rep.check(span.len() == size, || {
                        format!("{mode} |span({p})| = {} but span_size = {size}", span.len())
                    });
                    rep.check(span.iter().cloned().collect::<BTreeSet<_>>() == values, || {
                        format!("{mode} span({p}) differs from the combo images")
                    });
                }
            }
        }
    }
    rep
}

/// Random tree of the given depth: every node below full depth gets
/// `1..=max_succ` random successors.
pub fn random_tree(rng: &mut impl Rng, k: u32, depth: usize, max_succ: usize) -> FiniteBlockTree {
    let mut t = FiniteBlockTree::new(k, depth);
    let mut frontier = vec![FiniteBlockTree::ROOT];
    while let Some(id) = frontier.pop() {
        if t.level(id) == depth {
            continue;
        }
        let start = t.block(id).and_then(FinVec::max_support).map_or(0, |n| n + 1);
        let count = rng.gen_range(1..=max_succ);
        for _ in 0..count {
            let offset = rng.gen_range(0..2);
            let width = rng.gen_range(1..=3);
            let b = random_vec(rng, k, start + offset, width, true);
            let before = t.len();
            let child = t.add_child(id, b).expect("extends the parent");
            if t.len() > before {
                frontier.push(child);
            }
        }
    }
    t
}

/// S-closure: closed output, projections nodewise within 1, full branches
/// within 1 of an input branch.
pub fn s_closure(seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("s-closure");
    let mut r = rng(seed);
    for i in 0..100 {
        let k = r.gen_range(2..=3);
        let depth = 1 + i % 3;
        let v = random_tree(&mut r, k, depth, 8);
        let (u, proj) = match s_close(&v) {
            Ok(x) => x,
            Err(e) => {
                rep.check(false, || format!("tree {i}: {e}"));
                continue;
            }
        };
        rep.check(u.is_s_closed(), || format!("tree {i}: output not S-closed at {:?}", u.s_closure_gap()));
        for id in u.node_ids().skip(1) {
            let pv = proj[id];
            let same_parent = v.parent(pv) == u.parent(id).map(|p| proj[p]);
            let near = u.block(id).unwrap().dist(v.block(pv).unwrap()) <= 1;
            rep.check(same_parent && near && u.level(id) == v.level(pv), || {
                format!("tree {i}: node ({}) projects to ({})", u.path(id), v.path(pv))
            });
        }
        let v_branches: Vec<BlockSeq> = v.nodes_at_level(depth).into_iter().map(|id| v.path(id)).collect();
        for id in u.nodes_at_level(depth) {
            let b = u.path(id);
            rep.check(v_branches.iter().any(|w| b.dist(w).is_ok_and(|d| d <= 1)), || {
                format!("tree {i}: branch ({b}) is not within 1 of V")
            });
        }
        for id in v.node_ids() {
            rep.check(u.find(&v.path(id)).is_some(), || format!("tree {i}: V node ({}) lost", v.path(id)));
        }
    }
    rep
}

/// The three-block sequence used for the exhaustive rewriting check.
pub fn rewriting_sequence() -> BlockSeq {
    "0:2;1:2;2:2".parse().expect("literal")
}

/// Every block subsequence of length ≤ 3 rewrites into the synthesized tree
/// within distance 3, with support containment.
pub fn rewriting() -> SuiteReport {
    let mut rep = SuiteReport::new("rewriting");
    let p = rewriting_sequence();
    let (u, cert) = synth_tree(&p, 3).expect("small tree");
    for d in 1..=3 {
        for q in enum_span_tuples(&p, d).expect("small span") {
            match rewrite_into_tree(&q, &p, &u, &cert) {
                Ok(trace) => {
                    let out = &trace.output;
                    let ok = out.len() == q.len()
                        && q.iter().zip(out).all(|(a, b)| a.dist(b) <= 3 && b.support_within(a))
                        && u.find(out).is_some();
                    rep.check(ok, || format!("Q=({q}) rewrote to ({out})"));
                }
                Err(e) => rep.check(false, || format!("Q=({q}): {e}")),
            }
        }
    }
    rep
}

/// The hand-built tree that must fail: `P = ({0:2})`, `A_0 = {p_0}`, and
/// the root offers only `p_0`, so `−p_0 = {0:-2}` has no successor within 1.
pub fn broken_certificate() -> (FiniteBlockTree, Certificate, Violation) {
    let p: BlockSeq = "0:2".parse().expect("literal");
    let cert = Certificate::tail_spans(&p).expect("small span");
    let mut u = FiniteBlockTree::new(2, 1);
    u.add_child(FiniteBlockTree::ROOT, p.blocks()[0].clone()).expect("root child");
    let expected = Violation::NoNegatedNeighbour { n: 0, node: BlockSeq::empty(2), element: p.blocks()[0].clone() };
    (u, cert, expected)
}

/// synth_tree output verifies for random P; the broken tree is rejected.
pub fn certificate(seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("certificate");
    let mut r = rng(seed);
    for _ in 0..50 {
        let len = r.gen_range(1..=4);
        let window = r.gen_range(len as u32..=12);
        let p = random_blockseq(&mut r, 2, len, window);
        match synth_tree(&p, len) {
            Ok((u, cert)) => {
                let report = verify_certificate(&u, &cert);
                rep.check(report.passed(), || {
                    format!("P=({p}): {}", report.violations.first().map(|v| v.to_string()).unwrap_or_default())
                });
                rep.check(u.is_s_closed(), || format!("P=({p}): tree not S-closed"));
            }
            Err(e) => rep.check(false, || format!("P=({p}): {e}")),
        }
    }
    let (u, cert, expected) = broken_certificate();
    let report = verify_certificate(&u, &cert);
    rep.check(report.violations == vec![expected.clone()], || {
        format!("broken tree gave {:?}, expected [{expected}]", report.violations)
    });
    rep
}

/// `Ψ ∘ scale4 = id` and `Q = Ψ(Q̃)` for the termwise lift of every `Q ≤ P`.
pub fn lifting(seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("lifting");
    for k in 1..=2 {
        for v in all_vecs(k, 4) {
            let back = scale4(&v).psi(k).expect("amplitude 4k");
            rep.check(back.same_values(&v), || format!("psi{k}(scale4({v})) = {back}"));
        }
    }
    let mut r = rng(seed);
    let base = Coloring::rule(Rule::Hash { seed, r: 3 }, 1).expect("arity 1");
    for _ in 0..RANDOM_CASES {
        let k = r.gen_range(1..=4);
        let w = r.gen_range(1..=12);
        let v = random_vec(&mut r, k, 0, w, false);
        let back = scale4(&v).psi(k).expect("amplitude 4k");
        rep.check(back.same_values(&v), || format!("psi{k}(scale4({v})) = {back}"));
        let lifted = pushforward_coloring(base.clone(), k);
        rep.check(lifted.color(&[scale4(&v)]).ok() == base.color(std::slice::from_ref(&v)).ok(), || {
            format!("pushforward disagrees at {v}")
        });
    }
    for m in 1..=3 {
        for k in 1..=2 {
            for p in sample_sequences(m, k) {
                let lp = lift_block(&p);
                for d in 1..=m {
                    for q in enum_span_tuples(&p, d).expect("small span") {
                        let combos = span::is_block_subsequence(&q, &p).expect("Q ≤ P");
                        let lifted: Option<Vec<FinVec>> =
                            combos.iter().map(|c| lift_combo(c, k).and_then(|lc| combine(&lp, &lc)).ok()).collect();
                        let ok = lifted.and_then(|b| BlockSeq::new(4 * k, b).ok()).is_some_and(|lq| {
                            span::is_block_subsequence(&lq, &lp).is_some()
                                && lq.iter().zip(&q).all(|(a, b)| a.psi(k).is_ok_and(|x| x.same_values(b)))
                        });
                        rep.check(ok, || format!("lift of Q=({q}) under P=({p}) fails"));
                    }
                }
            }
        }
    }
    rep
}

/// Every suite, in a fixed order.
pub fn all_suites(seed: u64) -> Vec<SuiteReport> {
    vec![s_laws(seed), homomorphism(seed), span_integrity(), s_closure(seed), rewriting(), certificate(seed), lifting(seed)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_blockseq_shapes() {
        let mut r = rng(1);
        for _ in 0..200 {
            let len = r.gen_range(1..=4);
            let w = r.gen_range(len as u32..=12);
            let p = random_blockseq(&mut r, 2, len, w);
            assert_eq!(p.len(), len);
            assert!(p.iter().all(|b| b.attains() && b.max_support().unwrap() < w));
        }
    }

    #[test]
    fn all_vecs_count() {
        assert_eq!(all_vecs(2, 3).len(), 125);
        assert_eq!(all_vecs(1, 4).len(), 81);
    }

    #[test]
    fn broken_tree_record() {
        let (u, cert, expected) = broken_certificate();
        assert_eq!(verify_certificate(&u, &cert).violations, vec![expected]);
    }
}
