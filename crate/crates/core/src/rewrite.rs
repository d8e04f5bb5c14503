//! S-closure of finite trees, certificates of tail-span containment, and the
//! rewriting of block subsequences into tree branches.
//!
//! The three constructions fit together as follows. [`synth_tree`] builds,
//! for a block sequence `P`, a tree whose successor sets contain every
//! `(−T)`-span of a tail of `P` together with its negation and weak
//! tetris images, plus the [`Certificate`] chain `A_0 ⊇ A_1 ⊇ …` of those
//! tail spans. [`verify_certificate`] checks the two containment properties
//! the rewriting consumes. [`rewrite_into_tree`] then maps any block
//! subsequence `Q ≤ P` to a branch `Q'` with `||q_n − q'_n|| ≤ 3` and
//! `supp q'_n ⊆ supp q_n`. [`s_close`] is the independent closure step that
//! makes an arbitrary tree S-closed at the cost of distance 1.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use rayon::prelude::*;

use crate::error::{FinError, Result};
use crate::seq::BlockSeq;
use crate::span::{self, combine, decompose, Combo, Mode, Sign, Term};
use crate::tree::{FiniteBlockTree, NodeId};
use crate::vector::FinVec;

/// Default cap on the number of nodes [`synth_tree`] may create.
pub const DEFAULT_NODE_BUDGET: usize = 2_000_000;

/// Turns a `Pm` combo with a `+T^0` term into an `Nt` combo within
/// distance 1.
///
/// A term `ε T^j` is kept at level `j` when `ε = +1, j` even or `ε = −1, j`
/// odd (there `ε T^j = (−T)^j`); otherwise it moves to level `j + 1`, where
/// `T(ε T^j) = (−T)^{j+1}`. A level may reach `k`, in which case the term
/// annihilates.
pub fn case1_normalize(c: &Combo) -> Result<Combo> {
    if c.mode() != Mode::Pm {
        return Err(FinError::InvalidCombo("case1_normalize expects a PM combo".into()));
    }
    if !c.has_positive_base_term() {
        return Err(FinError::Case1PreconditionFailed(format!("{c} has no +T^0 term")));
    }
    let terms = c
        .terms()
        .iter()
        .map(|t| {
            let keep = (t.sign == Sign::Plus) == (t.level % 2 == 0);
            Term::new(t.index, Sign::Plus, if keep { t.level } else { t.level + 1 })
        })
        .collect();
    Combo::new(Mode::Nt, terms)
}

/// Makes `v` S-closed. Returns the new tree and, for every node of it, the
/// node of `v` it projects to.
///
/// Level by level, a node `t` projecting to `π(t)` receives the successor
/// set `V_π(t) ∪ S[V_π(t)]` (zero discarded). A successor `p` already in
/// `V_π(t)` projects to `(π(t), p)`; otherwise to `(π(t), q)` for the
/// canonically least `q ∈ V_π(t)` with `S(q) = p`. Projections stay within
/// distance 1 nodewise.
pub fn s_close(v: &FiniteBlockTree) -> Result<(FiniteBlockTree, Vec<NodeId>)> {
    if v.is_empty() {
        return Err(FinError::EmptyTree("the root of the input tree has no successors".into()));
    }
    let mut u = FiniteBlockTree::new(v.k(), v.depth());
    let mut proj = vec![FiniteBlockTree::ROOT];
    let mut queue = VecDeque::from([(FiniteBlockTree::ROOT, FiniteBlockTree::ROOT)]);
    while let Some((uid, vid)) = queue.pop_front() {
        let mut added: Vec<(NodeId, NodeId)> = Vec::new();
        for (p, vc) in v.children(vid) {
            added.push((u.add_child(uid, p.clone())?, vc));
        }
        // Canonical iteration order makes the first preimage the least one.
        for (p, vc) in v.children(vid) {
            let s = p.weak_tetris();
            if s.is_zero() || u.child(uid, &s).is_some() {
                continue;
            }
            added.push((u.add_child(uid, s)?, vc));
        }
        for (uc, vc) in added {
            if uc == proj.len() {
                proj.push(vc);
                queue.push_back((uc, vc));
            }
        }
    }
    Ok((u, proj))
}

/// The chain `A_0 ⊇ A_1 ⊇ … ⊇ A_N` attached to a block sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub blocks: BlockSeq,
    pub chain: Vec<BTreeSet<FinVec>>,
}

impl Certificate {
    /// `A_n := ⟨p_i : i ≥ n⟩_(−T)` for `n < N`, and `A_N := ∅`.
    pub fn tail_spans(p: &BlockSeq) -> Result<Self> {
        let mut chain = Vec::with_capacity(p.len() + 1);
        for n in 0..p.len() {
            chain.push(span::enum_span(&p.tail(n), Mode::Nt)?.into_iter().collect());
        }
        chain.push(BTreeSet::new());
        Ok(Certificate { blocks: p.clone(), chain })
    }

    /// `P:<blocks>` followed by one `A<n>:` line per chain set, elements
    /// separated by `;`.
    pub fn to_text(&self) -> String {
        let mut out = format!("P:{}\n", self.blocks);
        for (n, set) in self.chain.iter().enumerate() {
            let lits: Vec<String> = set.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("A{n}:{}\n", lits.join(";")));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut blocks = None;
        let mut chain = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(rest) = line.strip_prefix("P:") {
                blocks = Some(rest.parse::<BlockSeq>()?);
            } else if let Some(rest) = line.strip_prefix('A') {
                let (n, body) = rest
                    .split_once(':')
                    .ok_or_else(|| FinError::ParseError(format!("bad certificate line `{line}`")))?;
                let n: usize = n.parse().map_err(|_| FinError::ParseError(format!("bad set index in `{line}`")))?;
                if n != chain.len() {
                    return Err(FinError::ParseError(format!("chain set A{n} out of order")));
                }
                let set: BTreeSet<FinVec> = if body.trim().is_empty() {
                    BTreeSet::new()
                } else {
                    body.split(';').map(str::parse).collect::<Result<_>>()?
                };
                chain.push(set);
            } else {
                return Err(FinError::ParseError(format!("bad certificate line `{line}`")));
            }
        }
        let blocks = blocks.ok_or_else(|| FinError::ParseError("certificate lacks a P: line".into()))?;
        let k = blocks.k();
        let chain = chain
            .into_iter()
            .map(|set| set.into_iter().map(|x| x.with_k(k)).collect::<Result<BTreeSet<_>>>())
            .collect::<Result<_>>()?;
        Ok(Certificate { blocks, chain })
    }
}

/// Index of the first block of `p` lying strictly after coordinate `after`.
fn first_block_after(p: &BlockSeq, after: Option<u32>) -> usize {
    match after {
        None => 0,
        Some(n) => p.iter().position(|b| b.min_support().unwrap() > n).unwrap_or(p.len()),
    }
}

/// `B ∪ −B ∪ S[B] ∪ S[−B]` without the zero vector.
fn closed_successors(b: &[FinVec]) -> BTreeSet<FinVec> {
    let mut out = BTreeSet::new();
    for x in b {
        let nx = x.neg();
        for y in [x.weak_tetris(), nx.weak_tetris()] {
            if !y.is_zero() {
                out.insert(y);
            }
        }
        out.insert(x.clone());
        out.insert(nx);
    }
    out
}

/// A finite tree and certificate for `p`: each node `t` gets the successor
/// set `B ∪ −B ∪ S[B] ∪ S[−B]` with `B` the `(−T)`-span of the blocks of `p`
/// lying after `t`, and the chain is [`Certificate::tail_spans`].
pub fn synth_tree(p: &BlockSeq, depth: usize) -> Result<(FiniteBlockTree, Certificate)> {
    synth_tree_with_budget(p, depth, DEFAULT_NODE_BUDGET)
}

pub fn synth_tree_with_budget(
    p: &BlockSeq,
    depth: usize,
    node_budget: usize,
) -> Result<(FiniteBlockTree, Certificate)> {
    if p.is_empty() {
        return Err(FinError::EmptyTree("synth_tree needs a nonempty block sequence".into()));
    }
    let cert = Certificate::tail_spans(p)?;
    let successors: Vec<BTreeSet<FinVec>> =
        (0..p.len()).map(|n| closed_successors(&cert.chain[n].iter().cloned().collect::<Vec<_>>())).collect();
    let mut tree = FiniteBlockTree::new(p.k(), depth);
    let mut queue = VecDeque::from([FiniteBlockTree::ROOT]);
    while let Some(id) = queue.pop_front() {
        if tree.level(id) >= depth {
            continue;
        }
        let tail = first_block_after(p, tree.block(id).and_then(FinVec::max_support));
        if tail == p.len() {
            continue;
        }
        for x in &successors[tail] {
            if tree.len() >= node_budget {
                return Err(FinError::BudgetExceeded(format!("synth_tree exceeded {node_budget} nodes")));
            }
            queue.push_back(tree.add_child(id, x.clone())?);
        }
    }
    Ok((tree, cert))
}

/// One failed containment found by [`verify_certificate`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// `A_{n+1} ⊄ A_n`.
    ChainNotDecreasing { n: usize, element: FinVec },
    /// Property (1): `a ∈ A_n` but `a ∉ U_t`.
    MissingSuccessor { n: usize, node: BlockSeq, element: FinVec },
    /// Property (1): `a ∈ A_n` but no `u ∈ U_t` has `||−a − u|| ≤ 1`.
    NoNegatedNeighbour { n: usize, node: BlockSeq, element: FinVec },
    /// Property (2): an element of `⟨p_m,…,p_n⟩_(−T)` outside `A_m`.
    SpanEscapes { m: usize, n: usize, element: FinVec },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ChainNotDecreasing { n, element } => {
                write!(f, "chain: {element} in A{} but not in A{n}", n + 1)
            }
            Violation::MissingSuccessor { n, node, element } => {
                write!(f, "property1: A{n} element {element} not in U_t for t=({node})")
            }
            Violation::NoNegatedNeighbour { n, node, element } => {
                write!(f, "property1: A{n} element {element} not in -(U_t)_1 for t=({node})")
            }
            Violation::SpanEscapes { m, n, element } => {
                write!(f, "property2: {element} in <p{m}..p{n}>_(-T) but not in A{m}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CertificateReport {
    /// Sorted canonically.
    pub violations: Vec<Violation>,
    pub nodes_checked: usize,
    pub memberships_checked: usize,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustively checks a certificate against a tree:
///
/// 1. `A_n ⊆ U_t ∩ −(U_t)_1` for every node `t` below full depth with
///    `supp ∪t ⊆ ∪_{i<n} supp p_i`;
/// 2. `⟨p_m,…,p_n⟩_(−T) ⊆ A_m` for all `m ≤ n < N`;
///
/// and that the chain decreases. Violations are data, not errors.
pub fn verify_certificate(u: &FiniteBlockTree, cert: &Certificate) -> CertificateReport {
    let p = &cert.blocks;
    let mut violations = Vec::new();
    let mut memberships = 0usize;

    for n in 0..cert.chain.len().saturating_sub(1) {
        for x in cert.chain[n + 1].difference(&cert.chain[n]) {
            violations.push(Violation::ChainNotDecreasing { n, element: x.clone() });
        }
    }

    // Property (2).
    for m in 0..p.len().min(cert.chain.len()) {
        for n in m..p.len() {
            let blocks = BlockSeq::new(p.k(), p.blocks()[m..=n].to_vec()).expect("sub-block of a block sequence");
            let Ok(span) = span::enum_span(&blocks, Mode::Nt) else {
                continue;
            };
            for x in span {
                memberships += 1;
                if !cert.chain[m].contains(&x) {
                    violations.push(Violation::SpanEscapes { m, n, element: x });
                }
            }
        }
    }

    // Property (1). Coordinates covered by the first n blocks, per n.
    let mut covered: Vec<BTreeSet<u32>> = vec![BTreeSet::new()];
    for b in p {
        let mut next = covered.last().unwrap().clone();
        next.extend(b.support());
        covered.push(next);
    }
    let nodes: Vec<NodeId> = u.node_ids().filter(|&id| u.level(id) < u.depth()).collect();
    let per_node: Vec<(Vec<Violation>, usize)> = nodes
        .par_iter()
        .map(|&id| {
            let mut found = Vec::new();
            let mut checks = 0usize;
            let support = u.path(id).union().support();
            let succ: Vec<&FinVec> = u.succ(id).collect();
            for (n, set) in cert.chain.iter().enumerate() {
                let within = covered
                    .get(n)
                    .map(|c| support.iter().all(|x| c.contains(x)))
                    .unwrap_or_else(|| support.iter().all(|x| covered.last().unwrap().contains(x)));
                if !within {
                    continue;
                }
                for a in set {
                    checks += 1;
                    if u.child(id, a).is_none() {
                        found.push(Violation::MissingSuccessor { n, node: u.path(id), element: a.clone() });
                    }
                    let na = a.neg();
                    let near = u.child(id, &na).is_some() || succ.iter().any(|x| x.dist(&na) <= 1);
                    if !near {
                        found.push(Violation::NoNegatedNeighbour { n, node: u.path(id), element: a.clone() });
                    }
                }
            }
            (found, checks)
        })
        .collect();
    for (found, checks) in per_node {
        violations.extend(found);
        memberships += checks;
    }
    violations.sort();
    CertificateReport { violations, nodes_checked: nodes.len(), memberships_checked: memberships }
}

/// Which branch of the rewriting a block took.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteCase {
    /// Some term is `+T^0`: normalise directly, distance ≤ 1.
    PositiveBase,
    /// Every level-0 term is negative: go through `−q`, distance ≤ 3.
    NegativeBase,
}

impl fmt::Display for RewriteCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RewriteCase::PositiveBase => "1",
            RewriteCase::NegativeBase => "2",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub input: FinVec,
    pub combo: Combo,
    pub case: RewriteCase,
    pub normalized: Combo,
    /// Case 2 only: the normalised value `r` of `−q` and the chosen `r'`.
    pub r: Option<FinVec>,
    pub r_prime: Option<FinVec>,
    pub output: FinVec,
    pub dist: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteTrace {
    pub steps: Vec<RewriteStep>,
    pub output: BlockSeq,
}

impl RewriteTrace {
    pub fn max_dist(&self) -> u32 {
        self.steps.iter().map(|s| s.dist).max().unwrap_or(0)
    }
}

impl fmt::Display for RewriteTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, s) in self.steps.iter().enumerate() {
            write!(f, "step {n}: q={} combo={} case={} normalized={}", s.input, s.combo, s.case, s.normalized)?;
            if let (Some(r), Some(rp)) = (&s.r, &s.r_prime) {
                write!(f, " r={r} r'={rp}")?;
            }
            writeln!(f, " q'={} dist={}", s.output, s.dist)?;
        }
        writeln!(f, "Q'={}", self.output)
    }
}

/// Rewrites a block subsequence `Q ≤ P` into a branch prefix of the S-closed
/// tree `u`, following the two-case induction.
///
/// Case 1 (`q_n` has a `+T^0` term): `q'_n` is the value of
/// [`case1_normalize`]. Case 2: normalise `−q_n` to `r`, take the successor
/// `r'` nearest to `−r` (ties canonical), require `||−r − r'|| ≤ 1`, and set
/// `q'_n := S(r')`.
pub fn rewrite_into_tree(q: &BlockSeq, p: &BlockSeq, u: &FiniteBlockTree, cert: &Certificate) -> Result<RewriteTrace> {
    if q.len() > u.depth() {
        return Err(FinError::DepthExceeded(format!(
            "length-{} subsequence does not fit a depth-{} tree",
            q.len(),
            u.depth()
        )));
    }
    if cert.blocks.blocks() != p.blocks() {
        return Err(FinError::CertificateInsufficient("certificate was issued for a different P".into()));
    }
    let mut node = FiniteBlockTree::ROOT;
    let mut steps = Vec::with_capacity(q.len());
    let mut out = Vec::with_capacity(q.len());
    for (n, qn) in q.iter().enumerate() {
        let combo = decompose(qn, p, Mode::Pm)
            .ok_or_else(|| FinError::NotASubsequence(format!("q{n} = {qn} is not in the span of P")))?;
        let step = if combo.has_positive_base_term() {
            let normalized = case1_normalize(&combo)?;
            let output = combine(p, &normalized)?;
            RewriteStep {
                input: qn.clone(),
                dist: qn.dist(&output),
                combo,
                case: RewriteCase::PositiveBase,
                normalized,
                r: None,
                r_prime: None,
                output,
            }
        } else {
            let normalized = case1_normalize(&combo.negated())?;
            let r = combine(p, &normalized)?;
            let target = r.neg();
            let mut best: Option<(&FinVec, u32)> = None;
            for x in u.succ(node) {
                let d = x.dist(&target);
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((x, d));
                }
            }
            let r_prime = match best {
                Some((x, d)) if d <= 1 => x.clone(),
                _ => {
                    return Err(FinError::CertificateInsufficient(format!(
                        "no successor of ({}) within 1 of {target}",
                        u.path(node)
                    )))
                }
            };
            let output = r_prime.weak_tetris();
            if output.is_zero() {
                return Err(FinError::DegenerateBlock(format!("S({r_prime}) is zero")));
            }
            RewriteStep {
                input: qn.clone(),
                dist: qn.dist(&output),
                combo,
                case: RewriteCase::NegativeBase,
                normalized,
                r: Some(r),
                r_prime: Some(r_prime),
                output,
            }
        };
        node = u.child(node, &step.output).ok_or_else(|| {
            FinError::CertificateInsufficient(format!(
                "{} is not a successor of ({}) in the tree",
                step.output,
                u.path(node)
            ))
        })?;
        out.push(step.output.clone());
        steps.push(step);
    }
    Ok(RewriteTrace { steps, output: BlockSeq::new(p.k(), out)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> BlockSeq {
        s.parse().unwrap()
    }

    fn v2(s: &str) -> FinVec {
        s.parse::<FinVec>().unwrap().with_k(2).unwrap()
    }

    #[test]
    fn case1_examples() {
        let p = seq("0:2;1:2");
        let c = Combo::pm(&[(0, 1, 0), (1, -1, 1)]).unwrap();
        let n = case1_normalize(&c).unwrap();
        assert_eq!(n.to_string(), "NT|0:+:0,1:+:1");
        assert_eq!(combine(&p, &c).unwrap().dist(&combine(&p, &n).unwrap()), 0);

        let c = Combo::pm(&[(0, 1, 0), (1, 1, 1)]).unwrap();
        let n = case1_normalize(&c).unwrap();
        assert_eq!(n.to_string(), "NT|0:+:0,1:+:2");
        let before = combine(&p, &c).unwrap();
        let after = combine(&p, &n).unwrap();
        assert_eq!(before.to_string(), "0:2,1:1");
        assert_eq!(after.to_string(), "0:2");
        assert_eq!(before.dist(&after), 1);

        let err = case1_normalize(&Combo::pm(&[(0, -1, 0)]).unwrap()).unwrap_err();
        assert_eq!(err.name(), "Case1PreconditionFailed");
    }

    #[test]
    fn s_close_single_child() {
        let mut v = FiniteBlockTree::new(2, 1);
        v.add_child(FiniteBlockTree::ROOT, v2("0:2,1:1")).unwrap();
        let (u, proj) = s_close(&v).unwrap();
        let succ: Vec<String> = u.succ(FiniteBlockTree::ROOT).map(|x| x.to_string()).collect();
        assert_eq!(succ, ["0:2", "0:2,1:1"]);
        for id in u.node_ids().skip(1) {
            assert_eq!(v.path(proj[id]).to_string(), "0:2,1:1");
            assert!(u.path(id).dist(&v.path(proj[id])).unwrap() <= 1);
        }
        assert!(u.is_s_closed());
    }

    #[test]
    fn s_close_fixes_s_stable_trees() {
        let mut v = FiniteBlockTree::new(2, 2);
        let a = v.add_child(FiniteBlockTree::ROOT, v2("0:2")).unwrap();
        v.add_child(FiniteBlockTree::ROOT, v2("0:-2,1:2")).unwrap();
        v.add_child(a, v2("2:-2")).unwrap();
        let (u, proj) = s_close(&v).unwrap();
        assert_eq!(u.to_text(), v.to_text());
        for id in u.node_ids() {
            assert_eq!(u.path(id), v.path(proj[id]));
        }
    }

    #[test]
    fn s_close_depth_two_branches_stay_close() {
        let mut v = FiniteBlockTree::new(2, 2);
        let a = v.add_child(FiniteBlockTree::ROOT, v2("0:2,1:-1")).unwrap();
        v.add_child(a, v2("2:1,3:-2")).unwrap();
        v.add_child(a, v2("3:2")).unwrap();
        let (u, _) = s_close(&v).unwrap();
        assert!(u.is_s_closed());
        let v_branches: Vec<BlockSeq> = v.nodes_at_level(2).into_iter().map(|id| v.path(id)).collect();
        for id in u.nodes_at_level(2) {
            let b = u.path(id);
            assert!(v_branches.iter().any(|w| b.dist(w).unwrap() <= 1), "{b}");
        }
        // 2 level-1 nodes × 3 successors each
        assert_eq!(u.nodes_at_level(2).len(), 6);
    }

    #[test]
    fn s_close_empty() {
        let v = FiniteBlockTree::new(2, 1);
        assert_eq!(s_close(&v).unwrap_err().name(), "EmptyTree");
    }

    #[test]
    fn synth_tree_example() {
        let p = seq("0:2;1:2;2:2");
        let (u, cert) = synth_tree(&p, 2).unwrap();
        assert!(verify_certificate(&u, &cert).passed());
        assert!(u.is_s_closed());
        assert!(cert.chain[0].contains(&v2("0:2,1:-1")));
        assert!(u.child(FiniteBlockTree::ROOT, &v2("0:-2")).is_some());
        assert_eq!(cert.chain.len(), 4);
        assert!(cert.chain[3].is_empty());
    }

    #[test]
    fn broken_tree_is_rejected() {
        // U_∅ = {p_0} only: −p_0 = 0:-2 has no successor within 1.
        let p = seq("0:2");
        let cert = Certificate::tail_spans(&p).unwrap();
        let mut u = FiniteBlockTree::new(2, 1);
        u.add_child(FiniteBlockTree::ROOT, v2("0:2")).unwrap();
        let report = verify_certificate(&u, &cert);
        assert_eq!(
            report.violations,
            vec![Violation::NoNegatedNeighbour { n: 0, node: BlockSeq::empty(2), element: v2("0:2") }]
        );
        assert_eq!(report.violations[0].to_string(), "property1: A0 element 0:2 not in -(U_t)_1 for t=()");
    }

    #[test]
    fn empty_chain_passes() {
        let p = seq("0:2");
        let cert = Certificate { blocks: p, chain: Vec::new() };
        let u = FiniteBlockTree::new(2, 1);
        assert!(verify_certificate(&u, &cert).passed());
    }

    #[test]
    fn rewrite_examples() {
        let p = seq("0:2;1:2;2:2");
        let (u, cert) = synth_tree(&p, 3).unwrap();

        let t = rewrite_into_tree(&seq("0:-2"), &p, &u, &cert).unwrap();
        assert_eq!(t.steps[0].case, RewriteCase::NegativeBase);
        assert_eq!(t.steps[0].r.as_ref().unwrap().to_string(), "0:2");
        assert_eq!(t.output.to_string(), "0:-2");
        assert_eq!(t.max_dist(), 0);

        let t = rewrite_into_tree(&seq("0:2,1:1"), &p, &u, &cert).unwrap();
        assert_eq!(t.steps[0].case, RewriteCase::PositiveBase);
        assert_eq!(t.output.to_string(), "0:2");
        assert_eq!(t.max_dist(), 1);

        let t = rewrite_into_tree(&p, &p, &u, &cert).unwrap();
        assert_eq!(t.output, p);
        assert_eq!(t.max_dist(), 0);
    }

    #[test]
    fn rewrite_errors() {
        let p = seq("0:2;1:2;2:2");
        let (u, cert) = synth_tree(&p, 1).unwrap();
        let err = rewrite_into_tree(&seq("0:2;1:2"), &p, &u, &cert).unwrap_err();
        assert_eq!(err.name(), "DepthExceeded");
        let q = BlockSeq::new(2, vec![v2("0:1")]).unwrap();
        assert_eq!(rewrite_into_tree(&q, &p, &u, &cert).unwrap_err().name(), "NotASubsequence");
        let other = Certificate::tail_spans(&seq("0:2")).unwrap();
        assert_eq!(rewrite_into_tree(&seq("0:2"), &p, &u, &other).unwrap_err().name(), "CertificateInsufficient");
    }

    #[test]
    fn certificate_text_round_trip() {
        let cert = Certificate::tail_spans(&seq("0:2;1:2")).unwrap();
        let text = cert.to_text();
        assert!(text.contains("A1:1:2\nA2:\n"));
        assert_eq!(Certificate::from_text(&text).unwrap(), cert);
    }
}
