//! The partial subsemigroups generated by a finite block sequence.
//!
//! Two spans are supported, selected by [`Mode`]:
//!
//! * `Pm`, the signed span `⟨P⟩_±k` of all sums `Σ ε_i T^{j_i}(p_{n_i})`
//!   with `n_0 < n_1 < …`, `ε_i = ±1`, `j_i < k` and `min j_i = 0`;
//! * `Nt`, the `(−T)`-span of all sums `Σ (−T)^{j_i}(p_{n_i})`.
//!
//! A [`Combo`] is the descriptor `(n_i, ε_i, j_i)` of one such sum. In `Nt`
//! mode a level may equal `k`; such a term evaluates to zero and is dropped
//! from the sum but kept in the descriptor.
//!
//! The signless span used by the exact FIN_k search is exposed separately
//! through [`enum_span_unsigned`].

use std::fmt;
use std::str::FromStr;

use crate::error::{FinError, Result};
use crate::seq::BlockSeq;
use crate::vector::FinVec;

/// Default cap on the number of sums a span enumeration may visit.
pub const DEFAULT_SPAN_BUDGET: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// Signed span `⟨P⟩_±k`.
    Pm,
    /// `(−T)`-span `⟨P⟩_(−T)`.
    Nt,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Pm => "PM",
            Mode::Nt => "NT",
        })
    }
}

impl FromStr for Mode {
    type Err = FinError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pm" => Ok(Mode::Pm),
            "nt" => Ok(Mode::Nt),
            other => Err(FinError::ParseError(format!("unknown span mode `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn apply(self, v: FinVec) -> FinVec {
        match self {
            Sign::Plus => v,
            Sign::Minus => v.neg(),
        }
    }
}

/// One summand `ε T^j(p_n)` (or `(−T)^j(p_n)` in `Nt` mode).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub index: usize,
    pub sign: Sign,
    pub level: u32,
}

impl Term {
    pub fn new(index: usize, sign: Sign, level: u32) -> Self {
        Term { index, sign, level }
    }
}

/// A span descriptor. Structural invariants (nonempty, strictly increasing
/// block indices, a level-0 term, `+` signs in `Nt` mode) are checked on
/// construction; bounds against a host sequence by [`Combo::check_against`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Combo {
    mode: Mode,
    terms: Vec<Term>,
}

impl Combo {
    pub fn new(mode: Mode, terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(FinError::InvalidCombo("a combo needs at least one term".into()));
        }
        if terms.windows(2).any(|w| w[0].index >= w[1].index) {
            return Err(FinError::InvalidCombo("block indices must strictly increase".into()));
        }
        if terms.iter().all(|t| t.level > 0) {
            return Err(FinError::InvalidCombo("some term must have level 0".into()));
        }
        if mode == Mode::Nt && terms.iter().any(|t| t.sign == Sign::Minus) {
            return Err(FinError::InvalidCombo("NT combos carry no signs".into()));
        }
        Ok(Combo { mode, terms })
    }

    /// Convenience constructor for `Nt` combos from `(index, level)` pairs.
    pub fn nt(terms: &[(usize, u32)]) -> Result<Self> {
        Combo::new(Mode::Nt, terms.iter().map(|&(n, j)| Term::new(n, Sign::Plus, j)).collect())
    }

    /// Convenience constructor for `Pm` combos from `(index, sign, level)`.
    pub fn pm(terms: &[(usize, i32, u32)]) -> Result<Self> {
        Combo::new(
            Mode::Pm,
            terms.iter().map(|&(n, s, j)| Term::new(n, if s < 0 { Sign::Minus } else { Sign::Plus }, j)).collect(),
        )
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Validates block indices and levels against a sequence of length `m`
    /// with bound `k`.
    pub fn check_against(&self, m: usize, k: u32) -> Result<()> {
        for t in &self.terms {
            if t.index >= m {
                return Err(FinError::InvalidCombo(format!("block index {} out of range for length {m}", t.index)));
            }
            let ok = match self.mode {
                Mode::Pm => t.level < k,
                Mode::Nt => t.level <= k,
            };
            if !ok {
                return Err(FinError::InvalidCombo(format!(
                    "level {} out of range for {} mode with k = {k}",
                    t.level, self.mode
                )));
            }
        }
        Ok(())
    }

    /// The `Pm` combo with every sign flipped, describing `−combine(P, c)`.
    pub fn negated(&self) -> Combo {
        Combo { mode: self.mode, terms: self.terms.iter().map(|t| Term { sign: t.sign.flip(), ..*t }).collect() }
    }

    /// Drops `Nt` terms of level `k` (they evaluate to zero).
    pub fn reduced(&self, k: u32) -> Combo {
        match self.mode {
            Mode::Pm => self.clone(),
            Mode::Nt => Combo { mode: Mode::Nt, terms: self.terms.iter().copied().filter(|t| t.level < k).collect() },
        }
    }

    /// Lowest block index `min I`.
    pub fn first_index(&self) -> usize {
        self.terms[0].index
    }

    /// Whether some term is `+T^0`, the Case 1 condition of the rewriting.
    pub fn has_positive_base_term(&self) -> bool {
        self.terms.iter().any(|t| t.sign == Sign::Plus && t.level == 0)
    }
}

impl fmt::Display for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|", self.mode)?;
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            let s = match t.sign {
                Sign::Plus => '+',
                Sign::Minus => '-',
            };
            write!(f, "{}:{s}:{}", t.index, t.level)?;
        }
        Ok(())
    }
}

/// `PM|n:sign:level,…` or `NT|n:+:level,…`; `NT` terms may also omit the
/// sign as `n:level`.
impl FromStr for Combo {
    type Err = FinError;

    fn from_str(s: &str) -> Result<Self> {
        let (mode, body) = s
            .trim()
            .split_once('|')
            .ok_or_else(|| FinError::ParseError(format!("combo `{s}` lacks a PM| or NT| prefix")))?;
        let mode: Mode = mode.parse()?;
        let mut terms = Vec::new();
        for part in body.split(',') {
            let fields: Vec<&str> = part.trim().split(':').map(str::trim).collect();
            let bad = || FinError::ParseError(format!("bad combo term `{part}`"));
            let (n, sign, level) = match (mode, fields.as_slice()) {
                (_, [n, s, j]) => {
                    let sign = match *s {
                        "+" | "+1" => Sign::Plus,
                        "-" | "-1" => Sign::Minus,
                        _ => return Err(bad()),
                    };
                    (n.parse().map_err(|_| bad())?, sign, j.parse().map_err(|_| bad())?)
                }
                (Mode::Nt, [n, j]) => (n.parse().map_err(|_| bad())?, Sign::Plus, j.parse().map_err(|_| bad())?),
                _ => return Err(bad()),
            };
            terms.push(Term::new(n, sign, level));
        }
        Combo::new(mode, terms)
    }
}

fn term_value(p: &FinVec, t: &Term, mode: Mode) -> FinVec {
    match mode {
        Mode::Pm => t.sign.apply(p.tetris_pow(t.level)),
        Mode::Nt => p.neg_tetris_pow(t.level),
    }
}

/// Evaluates `Σ ε_i T^{j_i}(p_{n_i})` (`Pm`) or `Σ (−T)^{j_i}(p_{n_i})` (`Nt`).
/// The result carries the host bound `k`.
pub fn combine(p: &BlockSeq, c: &Combo) -> Result<FinVec> {
    c.check_against(p.len(), p.k())?;
    let parts: Vec<FinVec> = c.terms.iter().map(|t| term_value(&p.blocks()[t.index], t, c.mode)).collect();
    FinVec::sum_ordered(p.k(), &parts)
}

/// Inverse of [`combine`]: the unique combo without zero-valued terms whose
/// value is `q`, or `None` if `q` is not in the span.
pub fn decompose(q: &FinVec, p: &BlockSeq, mode: Mode) -> Option<Combo> {
    if q.is_zero() || p.is_empty() {
        return None;
    }
    let blocks = p.blocks();
    // Group q's entries by the block whose support contains them.
    let mut parts: Vec<Vec<(u32, i32)>> = vec![Vec::new(); blocks.len()];
    for &(n, v) in q.entries() {
        let i = match blocks.binary_search_by(|b| {
            if b.max_support().unwrap() < n {
                std::cmp::Ordering::Less
            } else if b.min_support().unwrap() > n {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        }) {
            Ok(i) => i,
            Err(_) => return None,
        };
        if blocks[i].get(n) == 0 {
            return None;
        }
        parts[i].push((n, v));
    }
    let mut terms = Vec::new();
    for (i, part) in parts.into_iter().enumerate() {
        if part.is_empty() {
            continue;
        }
        let block = &blocks[i];
        let amp = part.iter().map(|&(_, v)| v.unsigned_abs()).max().unwrap();
        let level = block.amplitude().checked_sub(amp)?;
        let base = block.tetris_pow(level);
        let sign = if base.entries() == part.as_slice() {
            Sign::Plus
        } else if base.neg().entries() == part.as_slice() {
            Sign::Minus
        } else {
            return None;
        };
        match mode {
            Mode::Pm => terms.push(Term::new(i, sign, level)),
            Mode::Nt => {
                let expected = if level % 2 == 0 { Sign::Plus } else { Sign::Minus };
                if sign != expected {
                    return None;
                }
                terms.push(Term::new(i, Sign::Plus, level));
            }
        }
    }
    let c = Combo::new(mode, terms).ok()?;
    c.check_against(p.len(), p.k()).ok()?;
    Some(c)
}

/// `Σ_{s=1..m} C(m,s)·(c^s − (c − c0)^s)`: the number of selections with
/// `c` choices per chosen block, `c0` of which are level 0.
fn selection_count(m: usize, choices: u128, base_choices: u128) -> Option<u128> {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for s in 1..=m as u32 {
        binom = binom.checked_mul((m as u128) - (s as u128) + 1)? / (s as u128);
        let all = choices.checked_pow(s)?;
        let without = (choices - base_choices).checked_pow(s)?;
        total = total.checked_add(binom.checked_mul(all - without)?)?;
    }
    Some(total)
}

/// Closed-form span size for a length-`m` sequence of blocks attaining `k`.
/// `None` if the count does not fit in a `u128`.
///
/// `Pm`: `Σ C(m,s)((2k)^s − (2k−2)^s)`; `Nt`: `Σ C(m,s)(k^s − (k−1)^s)`.
pub fn span_size(m: usize, k: u32, mode: Mode) -> Option<u128> {
    let k = k as u128;
    match mode {
        Mode::Pm => selection_count(m, 2 * k, 2),
        Mode::Nt => selection_count(m, k, 1),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum SpanKind {
    Signed,
    NegTetris,
    Unsigned,
}

/// Per-block candidate summands: `(value, is_level_0)`, zero values skipped.
fn term_choices(block: &FinVec, k: u32, kind: SpanKind) -> Vec<(FinVec, bool)> {
    let mut out = Vec::new();
    for level in 0..k {
        let t = block.tetris_pow(level);
        if t.is_zero() {
            break;
        }
        match kind {
            SpanKind::Signed => {
                out.push((t.clone(), level == 0));
                out.push((t.neg(), level == 0));
            }
            SpanKind::NegTetris => out.push((block.neg_tetris_pow(level), level == 0)),
            SpanKind::Unsigned => out.push((t, level == 0)),
        }
    }
    out
}

fn enumerate(p: &BlockSeq, kind: SpanKind, budget: u128) -> Result<Vec<FinVec>> {
    let (choices, base) = match kind {
        SpanKind::Signed => (2 * p.k() as u128, 2),
        SpanKind::NegTetris | SpanKind::Unsigned => (p.k() as u128, 1),
    };
    match selection_count(p.len(), choices, base) {
        Some(n) if n <= budget => {}
        _ => {
            return Err(FinError::BudgetExceeded(format!(
                "span of a length-{} sequence with k = {} exceeds the budget of {budget}",
                p.len(),
                p.k()
            )))
        }
    }
    let per_block: Vec<Vec<(FinVec, bool)>> = p.iter().map(|b| term_choices(b, p.k(), kind)).collect();
    let mut out = Vec::new();
    let mut acc: Vec<(u32, i32)> = Vec::new();
    walk(&per_block, 0, false, false, &mut acc, p.k(), &mut out);
    out.sort();
    out.dedup();
    Ok(out)
}

fn walk(
    per_block: &[Vec<(FinVec, bool)>],
    i: usize,
    any: bool,
    has_base: bool,
    acc: &mut Vec<(u32, i32)>,
    k: u32,
    out: &mut Vec<FinVec>,
) {
    if i == per_block.len() {
        if any && has_base {
            out.push(FinVec::from_raw(acc.clone(), k));
        }
        return;
    }
    walk(per_block, i + 1, any, has_base, acc, k, out);
    for (value, base) in &per_block[i] {
        let mark = acc.len();
        acc.extend_from_slice(value.entries());
        walk(per_block, i + 1, true, has_base || *base, acc, k, out);
        acc.truncate(mark);
    }
}

/// `⟨P⟩` in the given mode, deduplicated and sorted canonically.
pub fn enum_span(p: &BlockSeq, mode: Mode) -> Result<Vec<FinVec>> {
    enum_span_with_budget(p, mode, DEFAULT_SPAN_BUDGET)
}

pub fn enum_span_with_budget(p: &BlockSeq, mode: Mode, budget: u128) -> Result<Vec<FinVec>> {
    // Level-k terms of Nt combos vanish, so the set is already covered by
    // levels below k over all index subsets.
    let kind = match mode {
        Mode::Pm => SpanKind::Signed,
        Mode::Nt => SpanKind::NegTetris,
    };
    enumerate(p, kind, budget)
}

/// The signless span `⟨P⟩_k` of sums `Σ T^{j_i}(p_{n_i})`, `j_i < k`,
/// `min j_i = 0`, used for the exact FIN_k variant.
pub fn enum_span_unsigned(p: &BlockSeq, budget: u128) -> Result<Vec<FinVec>> {
    enumerate(p, SpanKind::Unsigned, budget)
}

/// All length-`d` block sequences drawn from `elements`, in canonical order.
/// `elements` need not be sorted.
pub fn block_tuples(elements: &[FinVec], k: u32, d: usize, budget: u128) -> Result<Vec<BlockSeq>> {
    if d == 0 {
        return Err(FinError::InvalidParams("tuple arity must be at least 1".into()));
    }
    let mut sorted: Vec<&FinVec> = elements.iter().filter(|e| !e.is_zero()).collect();
    sorted.sort();
    sorted.dedup();
    let mut out = Vec::new();
    let mut stack: Vec<&FinVec> = Vec::with_capacity(d);
    fn rec<'a>(
        sorted: &[&'a FinVec],
        d: usize,
        k: u32,
        budget: u128,
        stack: &mut Vec<&'a FinVec>,
        out: &mut Vec<BlockSeq>,
    ) -> Result<()> {
        if stack.len() == d {
            if out.len() as u128 >= budget {
                return Err(FinError::BudgetExceeded(format!("more than {budget} span tuples")));
            }
            let blocks = stack.iter().map(|b| (*b).clone()).collect();
            out.push(BlockSeq::new(k, blocks)?);
            return Ok(());
        }
        for e in sorted {
            if let Some(last) = stack.last() {
                if !last.precedes(e) {
                    continue;
                }
            }
            stack.push(e);
            rec(sorted, d, k, budget, stack, out)?;
            stack.pop();
        }
        Ok(())
    }
    rec(&sorted, d, k, budget, &mut stack, &mut out)?;
    Ok(out)
}

/// `⟨P⟩_±k^[d]`: length-`d` block sequences with every element in the
/// signed span.
pub fn enum_span_tuples(p: &BlockSeq, d: usize) -> Result<Vec<BlockSeq>> {
    let span = enum_span(p, Mode::Pm)?;
    block_tuples(&span, p.k(), d, DEFAULT_SPAN_BUDGET)
}

/// `Q ≤ P`, returning the witnessing combos when it holds.
pub fn is_block_subsequence(q: &BlockSeq, p: &BlockSeq) -> Option<Vec<Combo>> {
    q.iter().map(|qn| decompose(qn, p, Mode::Pm)).collect()
}

/// Every valid combo over a length-`m` sequence with bound `k`, including
/// `Nt` terms of level `k`.
pub fn all_combos(m: usize, k: u32, mode: Mode) -> Vec<Combo> {
    let choices: Vec<(Sign, u32)> = match mode {
        Mode::Pm => (0..k).flat_map(|j| [(Sign::Plus, j), (Sign::Minus, j)]).collect(),
        Mode::Nt => (0..=k).map(|j| (Sign::Plus, j)).collect(),
    };
    let mut out = Vec::new();
    let mut terms = Vec::new();
    fn rec(i: usize, m: usize, mode: Mode, choices: &[(Sign, u32)], terms: &mut Vec<Term>, out: &mut Vec<Combo>) {
        if i == m {
            if let Ok(c) = Combo::new(mode, terms.clone()) {
                out.push(c);
            }
            return;
        }
        rec(i + 1, m, mode, choices, terms, out);
        for &(sign, level) in choices {
            terms.push(Term::new(i, sign, level));
            rec(i + 1, m, mode, choices, terms, out);
            terms.pop();
        }
    }
    rec(0, m, mode, &choices, &mut terms, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn seq(s: &str) -> BlockSeq {
        s.parse().unwrap()
    }

    fn v(s: &str) -> FinVec {
        s.parse().unwrap()
    }

    // Brute-force oracle: every valid combo, evaluated term by term without
    // going through `combine`.
    fn brute_span(p: &BlockSeq, mode: Mode) -> BTreeSet<Vec<(u32, i32)>> {
        let mut out = BTreeSet::new();
        for c in all_combos(p.len(), p.k(), mode) {
            let mut entries = Vec::new();
            for t in c.terms() {
                let mut x = p.blocks()[t.index].clone();
                for _ in 0..t.level {
                    x = x.tetris();
                    if mode == Mode::Nt {
                        x = x.neg();
                    }
                }
                if t.sign == Sign::Minus {
                    x = x.neg();
                }
                entries.extend_from_slice(x.entries());
            }
            out.insert(entries);
        }
        out
    }

    #[test]
    fn combine_examples() {
        let p = seq("0:2;1:2");
        let c = Combo::pm(&[(0, 1, 0), (1, -1, 1)]).unwrap();
        assert_eq!(combine(&p, &c).unwrap(), v("0:2,1:-1"));
        assert_eq!(combine(&seq("0:2"), &"PM|0:+:0".parse().unwrap()).unwrap(), v("0:2"));
        let nt = Combo::nt(&[(0, 0), (1, 1)]).unwrap();
        assert_eq!(combine(&p, &nt).unwrap(), v("0:2,1:-1"));
        // level-k NT terms vanish
        let drop = Combo::nt(&[(0, 0), (1, 2)]).unwrap();
        assert_eq!(combine(&p, &drop).unwrap(), v("0:2"));
    }

    #[test]
    fn combine_rejects_invalid() {
        let p = seq("0:2;1:2");
        let too_high = Combo::pm(&[(0, 1, 0), (1, 1, 2)]).unwrap();
        assert_eq!(combine(&p, &too_high).unwrap_err().name(), "InvalidCombo");
        let out_of_range = Combo::pm(&[(2, 1, 0)]).unwrap();
        assert!(combine(&p, &out_of_range).is_err());
        assert!(Combo::pm(&[(0, 1, 1)]).is_err());
        assert!(Combo::pm(&[(1, 1, 0), (0, 1, 0)]).is_err());
        assert!(Combo::new(Mode::Nt, vec![Term::new(0, Sign::Minus, 0)]).is_err());
    }

    #[test]
    fn decompose_examples() {
        let p = seq("0:2;1:2");
        let q = v("0:2,1:-1");
        let got = decompose(&q, &p, Mode::Pm).unwrap();
        assert_eq!(got.to_string(), "PM|0:+:0,1:-:1");
        let brute: Vec<Combo> =
            all_combos(2, 2, Mode::Pm).into_iter().filter(|c| combine(&p, c).unwrap() == q).collect();
        assert_eq!(brute, vec![got]);

        assert_eq!(decompose(&v("0:1").with_k(2).unwrap(), &seq("0:2"), Mode::Pm), None);
        let p3 = seq("0:2;1:-2,2:1;4:2");
        for i in 0..3 {
            let c = decompose(&p3.blocks()[i], &p3, Mode::Pm).unwrap();
            assert_eq!(c.terms(), &[Term::new(i, Sign::Plus, 0)]);
        }
        // off-support and partial-block vectors are rejected
        assert_eq!(decompose(&v("3:2"), &p3, Mode::Pm), None);
        assert_eq!(decompose(&v("1:-2"), &p3, Mode::Pm), None);
        assert_eq!(decompose(&FinVec::zero(2), &p3, Mode::Pm), None);
    }

    #[test]
    fn decompose_nt_parity() {
        let p = seq("0:2;1:2");
        assert_eq!(decompose(&v("0:2,1:-1"), &p, Mode::Nt).unwrap().to_string(), "NT|0:+:0,1:+:1");
        assert_eq!(decompose(&v("0:2,1:1"), &p, Mode::Nt), None);
    }

    #[test]
    fn enum_span_examples() {
        let one = enum_span(&seq("0:1"), Mode::Pm).unwrap();
        assert_eq!(one, vec![v("0:-1"), v("0:1")]);
        let p = seq("0:2;1:2");
        assert_eq!(enum_span(&p, Mode::Pm).unwrap().len(), 16);
        let nt = enum_span(&p, Mode::Nt).unwrap();
        let expect: BTreeSet<FinVec> =
            ["0:2", "1:2", "0:2,1:2", "0:2,1:-1", "0:-1,1:2"].iter().map(|s| v(s).with_k(2).unwrap()).collect();
        assert_eq!(nt.into_iter().collect::<BTreeSet<_>>(), expect);
    }

    #[test]
    fn enum_span_matches_brute_force() {
        for lit in ["0:2;1:2", "0:3,1:1;2:-2;3:1,4:-3", "0:1;1:-1;2:1", "0:2,1:-1;3:2;4:-2,5:1"] {
            let p = seq(lit);
            for mode in [Mode::Pm, Mode::Nt] {
                let got: BTreeSet<Vec<(u32, i32)>> =
                    enum_span(&p, mode).unwrap().iter().map(|x| x.entries().to_vec()).collect();
                assert_eq!(got, brute_span(&p, mode), "{lit} {mode}");
            }
        }
    }

    #[test]
    fn span_size_examples() {
        assert_eq!(span_size(1, 2, Mode::Pm), Some(2));
        assert_eq!(span_size(2, 2, Mode::Pm), Some(16));
        assert_eq!(span_size(2, 1, Mode::Pm), Some(8));
        assert_eq!(span_size(2, 2, Mode::Nt), Some(5));
        assert_eq!(span_size(200, 1000, Mode::Pm), None);
    }

    #[test]
    fn span_budget() {
        let p = seq("0:3;1:3;2:3;3:3");
        let err = enum_span_with_budget(&p, Mode::Pm, 10).unwrap_err();
        assert_eq!(err.name(), "BudgetExceeded");
    }

    #[test]
    fn span_tuples_examples() {
        let t1 = enum_span_tuples(&seq("0:1"), 1).unwrap();
        assert_eq!(t1, vec![seq("0:-1"), seq("0:1")]);
        assert!(enum_span_tuples(&seq("0:1"), 2).unwrap().is_empty());
        let t2 = enum_span_tuples(&seq("0:1;1:1"), 2).unwrap();
        let lits: Vec<String> = t2.iter().map(|t| t.to_string()).collect();
        assert_eq!(lits, ["0:-1;1:-1", "0:-1;1:1", "0:1;1:-1", "0:1;1:1"]);
    }

    #[test]
    fn block_subsequence_examples() {
        let p = seq("0:2;1:2");
        assert!(is_block_subsequence(&p, &p).is_some());
        let w = is_block_subsequence(&seq("0:2,1:-1"), &p).unwrap();
        assert_eq!(w[0].to_string(), "PM|0:+:0,1:-:1");
        let q = BlockSeq::new(2, vec![v("0:1")]).unwrap();
        assert!(is_block_subsequence(&q, &seq("0:2")).is_none());
    }

    #[test]
    fn combo_literals() {
        let c: Combo = "PM|0:+:0,1:-:1".parse().unwrap();
        assert_eq!(c.to_string(), "PM|0:+:0,1:-:1");
        let n: Combo = "NT|0:0,1:1".parse().unwrap();
        assert_eq!(n.to_string(), "NT|0:+:0,1:+:1");
        assert!("XX|0:+:0".parse::<Combo>().is_err());
        assert!("PM|0:0".parse::<Combo>().is_err());
    }

    #[test]
    fn all_combos_counts() {
        // PM combos are in bijection with span elements for attaining blocks
        for m in 1..=3 {
            for k in 1..=3u32 {
                assert_eq!(all_combos(m, k, Mode::Pm).len() as u128, span_size(m, k, Mode::Pm).unwrap());
            }
        }
        // NT combos include level-k drops: Σ C(m,s)((k+1)^s − k^s)
        let by_size = |c: usize, s: u32| c * (3usize.pow(s) - 2usize.pow(s));
        assert_eq!(all_combos(2, 2, Mode::Nt).len(), by_size(2, 1) + by_size(1, 2));
    }
}
