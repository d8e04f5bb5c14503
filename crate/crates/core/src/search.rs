//! Finite monochromatic witness search.
//!
//! A witness for a colouring `c` is a length-`m` block sequence `P` inside
//! the window `[0, W)` and a colour `i` such that every d-tuple of the span
//! of `P` is coloured `i` (exact mode) or lies within distance 1 of a tuple
//! coloured `i` (approximate mode).
//!
//! The search is a depth-first walk over block sequences whose blocks are
//! drawn from the canonically sorted candidate list. Each node carries the
//! span of its prefix and a bitmask of colours not yet ruled out. Tuples of
//! a prefix are tuples of every extension, so a node whose mask is empty
//! has no witness below it. Top-level subtrees run in parallel; results are
//! merged in candidate order so the outcome and counters equal those of the
//! sequential walk.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::coloring::{Coloring, MAX_COLORS};
use crate::error::{FinError, Result};
use crate::seq::BlockSeq;
use crate::span::{self, DEFAULT_SPAN_BUDGET};
use crate::vector::FinVec;

/// Candidate lists longer than this are refused.
pub const MAX_CANDIDATES: usize = 5_000_000;

/// Top-level subtrees searched per parallel round. Fixed so that the work
/// schedule does not depend on the thread count.
const PAR_CHUNK: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchMode {
    /// FIN_±k with distance-1 neighbourhoods.
    Approx,
    /// FIN_k: nonnegative blocks, unsigned span, exact colour classes.
    Exact,
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchMode::Approx => "approx",
            SearchMode::Exact => "exact",
        })
    }
}

impl FromStr for SearchMode {
    type Err = FinError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "approx" => Ok(SearchMode::Approx),
            "exact" => Ok(SearchMode::Exact),
            _ => Err(FinError::ParseError(format!("unknown search mode `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Neighborhood {
    /// `supp q' ⊆ supp q`, coordinatewise difference at most 1.
    SupportConfined,
    /// Any window vector at distance at most 1.
    Windowed,
}

impl fmt::Display for Neighborhood {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Neighborhood::SupportConfined => "support-confined",
            Neighborhood::Windowed => "windowed",
        })
    }
}

impl FromStr for Neighborhood {
    type Err = FinError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "support-confined" | "confined" => Ok(Neighborhood::SupportConfined),
            "windowed" => Ok(Neighborhood::Windowed),
            _ => Err(FinError::ParseError(format!("unknown neighborhood `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchParams {
    pub k: u32,
    pub d: usize,
    pub r: u32,
    pub window: u32,
    pub m: usize,
    pub mode: SearchMode,
    pub neighborhood: Neighborhood,
    /// Maximum number of DFS nodes examined.
    pub candidate_budget: u64,
    /// Maximum number of span tuples enumerated by [`check_witness`].
    pub span_budget: u128,
}

impl SearchParams {
    pub fn new(k: u32, d: usize, r: u32, window: u32, m: usize, mode: SearchMode) -> Self {
        SearchParams {
            k,
            d,
            r,
            window,
            m,
            mode,
            neighborhood: Neighborhood::SupportConfined,
            candidate_budget: u64::MAX,
            span_budget: DEFAULT_SPAN_BUDGET,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(FinError::InvalidParams(msg));
        if self.k == 0 || self.d == 0 || self.m == 0 {
            return bad("k, d and m must be positive".into());
        }
        if self.d > self.m {
            return bad(format!("tuple arity d = {} exceeds sequence length m = {}", self.d, self.m));
        }
        if self.r == 0 || self.r > MAX_COLORS {
            return bad(format!("colour count r = {} outside 1..={MAX_COLORS}", self.r));
        }
        if self.window > 32 {
            return bad(format!("window {} exceeds 32", self.window));
        }
        if self.candidate_budget == 0 || self.span_budget == 0 {
            return bad("budgets must be positive".into());
        }
        Ok(())
    }

    fn check_coloring(&self, c: &Coloring) -> Result<()> {
        if c.arity() != self.d {
            return Err(FinError::InvalidParams(format!("colouring arity {} differs from d = {}", c.arity(), self.d)));
        }
        if c.colors() > self.r {
            return Err(FinError::InvalidParams(format!("colouring uses {} colours but r = {}", c.colors(), self.r)));
        }
        Ok(())
    }

    fn full_mask(&self) -> u64 {
        if self.r == 64 {
            u64::MAX
        } else {
            (1u64 << self.r) - 1
        }
    }

    fn value_range(&self) -> std::ops::RangeInclusive<i32> {
        let k = self.k as i32;
        match self.mode {
            SearchMode::Approx => -k..=k,
            SearchMode::Exact => 0..=k,
        }
    }
}

impl fmt::Display for SearchParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={} d={} r={} window={} m={} mode={} neighborhood={}",
            self.k, self.d, self.r, self.window, self.m, self.mode, self.neighborhood
        )
    }
}

/// Window vectors attaining `k`, with values in the mode's range, sorted
/// canonically.
pub fn candidate_blocks(params: &SearchParams) -> Result<Vec<FinVec>> {
    let w = params.window as usize;
    let range = params.value_range();
    let per_coord = (range.end() - range.start() + 1) as f64;
    if per_coord.powi(w as i32) > 2.0 * MAX_CANDIDATES as f64 {
        return Err(FinError::BudgetExceeded(format!(
            "window {} at k = {} gives more than {MAX_CANDIDATES} candidate blocks",
            params.window, params.k
        )));
    }
    let mut out = Vec::new();
    let mut acc = Vec::with_capacity(w);
    fn rec(
        n: u32,
        w: u32,
        k: u32,
        range: &std::ops::RangeInclusive<i32>,
        acc: &mut Vec<(u32, i32)>,
        out: &mut Vec<FinVec>,
    ) {
        if n == w {
            if acc.iter().any(|&(_, v)| v.unsigned_abs() == k) {
                out.push(FinVec::from_raw(acc.clone(), k));
            }
            return;
        }
        for v in range.clone() {
            if v != 0 {
                acc.push((n, v));
            }
            rec(n + 1, w, k, range, acc, out);
            if v != 0 {
                acc.pop();
            }
        }
    }
    rec(0, params.window, params.k, &range, &mut acc, &mut out);
    if out.len() > MAX_CANDIDATES {
        return Err(FinError::BudgetExceeded(format!("more than {MAX_CANDIDATES} candidate blocks")));
    }
    out.sort();
    Ok(out)
}

/// Concatenation of block-ordered vectors; either side may be zero.
fn concat(x: &FinVec, y: &FinVec, k: u32) -> FinVec {
    let mut entries = Vec::with_capacity(x.len() + y.len());
    entries.extend_from_slice(x.entries());
    entries.extend_from_slice(y.entries());
    FinVec::from_raw(entries, k)
}

/// Vectors attaining `k` within distance 1 of `q` under the neighbourhood.
pub(crate) fn neighbours(q: &FinVec, params: &SearchParams) -> Vec<FinVec> {
    let k = params.k as i32;
    let coords: Vec<(u32, i32)> = match params.neighborhood {
        Neighborhood::SupportConfined => q.entries().to_vec(),
        Neighborhood::Windowed => {
            (0..params.window.max(q.max_support().map_or(0, |n| n + 1))).map(|n| (n, q.get(n))).collect()
        }
    };
    let mut out = Vec::new();
    let mut acc = Vec::with_capacity(coords.len());
    fn rec(coords: &[(u32, i32)], i: usize, k: i32, acc: &mut Vec<(u32, i32)>, out: &mut Vec<FinVec>) {
        if i == coords.len() {
            if acc.iter().any(|&(_, v)| v.abs() == k) {
                out.push(FinVec::from_raw(acc.clone(), k as u32));
            }
            return;
        }
        let (n, v) = coords[i];
        for y in (v - 1).max(-k)..=(v + 1).min(k) {
            if y != 0 {
                acc.push((n, y));
            }
            rec(coords, i + 1, k, acc, out);
            if y != 0 {
                acc.pop();
            }
        }
    }
    rec(&coords, 0, k, &mut acc, &mut out);
    out
}

/// Colours reachable from `tuple`: its own colour in exact mode, the
/// colours of its neighbour tuples otherwise. Stops early once every colour
/// in `want` is reachable.
fn reachable(tuple: &[FinVec], c: &Coloring, params: &SearchParams, want: u64) -> Result<u64> {
    if params.mode == SearchMode::Exact {
        return Ok(1u64 << c.color(tuple)?);
    }
    let lists: Vec<Vec<FinVec>> = tuple.iter().map(|q| neighbours(q, params)).collect();
    let mut mask = 0u64;
    let mut pick: Vec<FinVec> = Vec::with_capacity(tuple.len());
    fn rec(lists: &[Vec<FinVec>], pick: &mut Vec<FinVec>, c: &Coloring, want: u64, mask: &mut u64) -> Result<()> {
        if (*mask & want) == want && want != 0 {
            return Ok(());
        }
        let i = pick.len();
        if i == lists.len() {
            *mask |= 1u64 << c.color(pick)?;
            return Ok(());
        }
        for x in &lists[i] {
            if pick.last().is_some_and(|l| !l.precedes(x)) {
                continue;
            }
            pick.push(x.clone());
            rec(lists, pick, c, want, mask)?;
            pick.pop();
        }
        Ok(())
    }
    rec(&lists, &mut pick, c, want, &mut mask)?;
    Ok(mask)
}

/// The tuple at which the last surviving colour was ruled out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailureTuple {
    pub tuple: BlockSeq,
    /// Smallest colour eliminated by `tuple`.
    pub color: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessCheck {
    Color(u32),
    Failure(FailureTuple),
}

/// Checks `P` directly, enumerating span tuples in canonical order. The
/// returned colour is the least one covering every tuple.
pub fn check_witness(p: &BlockSeq, c: &Coloring, params: &SearchParams) -> Result<WitnessCheck> {
    params.validate()?;
    params.check_coloring(c)?;
    if p.k() != params.k {
        return Err(FinError::AmplitudeMismatch(format!("P has kBound {} but k = {}", p.k(), params.k)));
    }
    if let Some(n) = p.last().and_then(FinVec::max_support) {
        if n >= params.window {
            return Err(FinError::InvalidParams(format!("P reaches coordinate {n} outside window {}", params.window)));
        }
    }
    let elements = match params.mode {
        SearchMode::Approx => span::enum_span_with_budget(p, span::Mode::Pm, params.span_budget)?,
        SearchMode::Exact => span::enum_span_unsigned(p, params.span_budget)?,
    };
    let tuples = span::block_tuples(&elements, params.k, params.d, params.span_budget)?;
    let mut alive = params.full_mask();
    for t in tuples {
        let got = reachable(t.blocks(), c, params, alive)?;
        let next = alive & got;
        if next == 0 {
            return Ok(WitnessCheck::Failure(FailureTuple { color: alive.trailing_zeros(), tuple: t }));
        }
        alive = next;
    }
    Ok(WitnessCheck::Color(alive.trailing_zeros()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Witness {
        p: BlockSeq,
        color: u32,
    },
    Exhausted,
    /// The candidate budget ran out; `cursor` is the next node to examine.
    BudgetExceeded {
        cursor: BlockSeq,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub params: SearchParams,
    pub coloring: String,
    pub resumed_from: Option<BlockSeq>,
    pub verdict: Verdict,
    pub candidates_examined: u64,
    pub tuples_checked: u64,
}

impl SearchReport {
    /// The structured text report; stable across thread counts.
    pub fn to_text(&self) -> String {
        let mut out = String::from("finlab-report v1\ncommand=search\n");
        out.push_str(&format!("params: {}\n", self.params));
        out.push_str(&format!("coloring={}\n", self.coloring));
        if let Some(c) = &self.resumed_from {
            out.push_str(&format!("resumed_from={c}\n"));
        }
        match &self.verdict {
            Verdict::Witness { p, color } => {
                out.push_str(&format!("verdict=witness\nwitness={p}\ncolor={color}\n"));
            }
            Verdict::Exhausted => out.push_str("verdict=exhausted\n"),
            Verdict::BudgetExceeded { cursor } => {
                out.push_str(&format!(
                    "verdict=budget-exceeded\nnotice=stopped after {} candidates (candidate budget); resume with --resume \"{cursor}\"\ncursor={cursor}\n",
                    self.candidates_examined
                ));
            }
        }
        out.push_str(&format!(
            "candidates_examined={}\ntuples_checked={}\n",
            self.candidates_examined, self.tuples_checked
        ));
        out
    }
}

/// Span data of a DFS node.
#[derive(Clone)]
struct NodeState {
    /// `⟨P⟩` of the prefix.
    span: Vec<FinVec>,
    /// All partial combination values, including zero.
    partial: Vec<FinVec>,
    /// `chains[L − 2]`: span tuples of length `L`, for `2 ≤ L < d`.
    chains: Vec<Vec<Vec<FinVec>>>,
    alive: u64,
}

struct Engine<'a> {
    params: &'a SearchParams,
    coloring: &'a Coloring,
    candidates: &'a [FinVec],
}

#[derive(Default)]
struct Counters {
    examined: u64,
    tuples: u64,
}

enum Flow {
    Found(Vec<FinVec>, u32),
    Continue,
    Stop(Vec<FinVec>),
}

struct SubResult {
    flow: Result<Flow>,
    counters: Counters,
}

impl Engine<'_> {
    fn root(&self) -> NodeState {
        NodeState {
            span: Vec::new(),
            partial: vec![FinVec::zero(self.params.k)],
            chains: vec![Vec::new(); self.params.d.saturating_sub(2)],
            alive: self.params.full_mask(),
        }
    }

    /// Terms `ε T^j(p)` with `j < k`, flagged when `j = 0`.
    fn terms(&self, p: &FinVec) -> Vec<(FinVec, bool)> {
        let mut out = Vec::new();
        for j in 0..self.params.k {
            let t = p.tetris_pow(j).with_k(self.params.k).expect("tetris lowers amplitude");
            if self.params.mode == SearchMode::Approx {
                out.push((t.neg(), j == 0));
            }
            out.push((t, j == 0));
        }
        out
    }

    /// The state after appending `p`. Tuples are colour-checked only when
    /// `count` is set; otherwise the mask is rebuilt silently.
    fn extend(&self, s: &NodeState, p: &FinVec, counters: &mut Counters, count: bool) -> Result<NodeState> {
        let k = self.params.k;
        let terms = self.terms(p);
        let mut fresh = Vec::new();
        for x in &s.span {
            for (t, _) in &terms {
                fresh.push(concat(x, t, k));
            }
        }
        let mut partial = Vec::with_capacity(s.partial.len() * (terms.len() + 1));
        for g in &s.partial {
            for (t, base) in &terms {
                let v = concat(g, t, k);
                if *base {
                    fresh.push(v.clone());
                }
                partial.push(v);
            }
        }
        fresh.sort_unstable();
        fresh.dedup();
        partial.sort_unstable();
        partial.dedup();

        let d = self.params.d;
        let mut alive = s.alive;
        let mut chains = s.chains.clone();
        // Every new span element meets supp p, so it can only end a tuple.
        let mut check = |tuple: &[FinVec], alive: &mut u64| -> Result<()> {
            if *alive == 0 {
                return Ok(());
            }
            let got = reachable(tuple, self.coloring, self.params, *alive)?;
            if count {
                counters.tuples += 1;
            }
            *alive &= got;
            Ok(())
        };
        if d == 1 {
            for x in &fresh {
                check(std::slice::from_ref(x), &mut alive)?;
            }
        } else {
            for len in 2..=d {
                let prefixes: Vec<Vec<FinVec>> =
                    if len == 2 { s.span.iter().map(|x| vec![x.clone()]).collect() } else { s.chains[len - 3].clone() };
                for pre in &prefixes {
                    for x in &fresh {
                        if !pre.last().expect("nonempty prefix").precedes(x) {
                            continue;
                        }
                        let mut t = pre.clone();
                        t.push(x.clone());
                        if len == d {
                            check(&t, &mut alive)?;
                        } else {
                            chains[len - 2].push(t);
                        }
                    }
                }
            }
        }
        let mut span = s.span.clone();
        span.extend(fresh);
        let mut all_partial = s.partial.clone();
        all_partial.extend(partial);
        Ok(NodeState { span, partial: all_partial, chains, alive })
    }

    fn first_child(&self, path: &[FinVec]) -> usize {
        match path.last().and_then(FinVec::max_support) {
            None => 0,
            Some(n) => self.candidates.partition_point(|c| c.min_support().unwrap() <= n),
        }
    }

    fn fits(&self, depth: usize, p: &FinVec) -> bool {
        let after = self.params.window - 1 - p.max_support().unwrap();
        after as usize >= self.params.m - depth - 1
    }

    /// Visits the children of `path` (whose state is `s`) from candidate
    /// index `from`, honouring `resume` below this node.
    fn dfs(
        &self,
        s: &NodeState,
        path: &mut Vec<FinVec>,
        from: usize,
        resume: Option<&[FinVec]>,
        counters: &mut Counters,
        cap: u64,
    ) -> Result<Flow> {
        let depth = path.len();
        let mut start = from.max(self.first_child(path));
        if let Some(rest) = resume {
            let head = &rest[0];
            let Ok(idx) = self.candidates[start..].binary_search(head).map(|i| i + start) else {
                return Err(FinError::InvalidParams(format!("cursor block {head} is not a candidate here")));
            };
            if rest.len() > 1 {
                let child = self.extend(s, head, counters, false)?;
                path.push(head.clone());
                let flow = if child.alive != 0 {
                    self.dfs(&child, path, 0, Some(&rest[1..]), counters, cap)?
                } else {
                    Flow::Continue
                };
                path.pop();
                if !matches!(flow, Flow::Continue) {
                    return Ok(flow);
                }
                start = idx + 1;
            } else {
                start = idx;
            }
        }
        for p in &self.candidates[start..] {
            if !self.fits(depth, p) {
                continue;
            }
            path.push(p.clone());
            if counters.examined >= cap {
                return Ok(Flow::Stop(path.clone()));
            }
            counters.examined += 1;
            let child = self.extend(s, p, counters, true)?;
            if child.alive != 0 {
                if depth + 1 == self.params.m {
                    return Ok(Flow::Found(path.clone(), child.alive.trailing_zeros()));
                }
                match self.dfs(&child, path, 0, None, counters, cap)? {
                    Flow::Continue => {}
                    other => return Ok(other),
                }
            }
            path.pop();
        }
        Ok(Flow::Continue)
    }

    /// The subtree rooted at top-level candidate `idx`; `resume` starts with
    /// that candidate.
    fn subtree(&self, idx: usize, resume: Option<&[FinVec]>, cap: u64) -> SubResult {
        let mut counters = Counters::default();
        let flow = self.subtree_flow(idx, resume, cap, &mut counters);
        SubResult { flow, counters }
    }

    fn subtree_flow(&self, idx: usize, resume: Option<&[FinVec]>, cap: u64, counters: &mut Counters) -> Result<Flow> {
        let p = &self.candidates[idx];
        let mut path = vec![p.clone()];
        let root = self.root();
        if let Some(rest) = resume.filter(|r| r.len() > 1) {
            let child = self.extend(&root, p, counters, false)?;
            if child.alive == 0 {
                return Ok(Flow::Continue);
            }
            return self.dfs(&child, &mut path, 0, Some(&rest[1..]), counters, cap);
        }
        if counters.examined >= cap {
            return Ok(Flow::Stop(path));
        }
        counters.examined += 1;
        let child = self.extend(&root, p, counters, true)?;
        if child.alive == 0 {
            return Ok(Flow::Continue);
        }
        if self.params.m == 1 {
            return Ok(Flow::Found(path, child.alive.trailing_zeros()));
        }
        self.dfs(&child, &mut path, 0, None, counters, cap)
    }
}

/// Finds the least witness in DFS order, or proves there is none.
///
/// `resume` is a cursor from an earlier budget stop; the walk restarts at
/// that node. Counters cover this run only. Outcome and counters do not
/// depend on the rayon thread count.
pub fn find_witness(c: &Coloring, params: &SearchParams, resume: Option<&BlockSeq>) -> Result<SearchReport> {
    params.validate()?;
    params.check_coloring(c)?;
    let candidates = candidate_blocks(params)?;
    let engine = Engine { params, coloring: c, candidates: &candidates };
    let report = |verdict, counters: &Counters| SearchReport {
        params: params.clone(),
        coloring: c.to_string(),
        resumed_from: resume.cloned(),
        verdict,
        candidates_examined: counters.examined,
        tuples_checked: counters.tuples,
    };

    let mut total = Counters::default();
    if (params.window as usize) < params.m {
        return Ok(report(Verdict::Exhausted, &total));
    }

    // Top-level subtrees exclusive to this run: one restricted subtree holds
    // the resume path, the rest are whole.
    let mut start = 0usize;
    let mut first_resume: Option<Vec<FinVec>> = None;
    if let Some(cur) = resume {
        if cur.is_empty() || cur.len() > params.m || cur.k() != params.k {
            return Err(FinError::InvalidParams(format!("cursor ({cur}) does not fit these parameters")));
        }
        start = candidates
            .binary_search(&cur.blocks()[0])
            .map_err(|_| FinError::InvalidParams(format!("cursor block {} is not a candidate", cur.blocks()[0])))?;
        first_resume = Some(cur.blocks().to_vec());
    }

    let tops: Vec<usize> = (start..candidates.len()).filter(|&i| engine.fits(0, &candidates[i])).collect();
    let mut pos = 0usize;
    while pos < tops.len() {
        let chunk = &tops[pos..(pos + PAR_CHUNK).min(tops.len())];
        let remaining = params.candidate_budget - total.examined;
        let resume_for =
            |i: usize| -> Option<Vec<FinVec>> { first_resume.as_ref().filter(|r| candidates[i] == r[0]).cloned() };
        let results: Vec<SubResult> =
            chunk.par_iter().map(|&i| engine.subtree(i, resume_for(i).as_deref(), remaining)).collect();
        let mut used = 0u64;
        for (&i, res) in chunk.iter().zip(results) {
            let left = remaining - used;
            let res =
                if res.counters.examined > left { engine.subtree(i, resume_for(i).as_deref(), left) } else { res };
            used += res.counters.examined;
            total.examined += res.counters.examined;
            total.tuples += res.counters.tuples;
            match res.flow? {
                Flow::Continue => {}
                Flow::Found(p, color) => {
                    let p = BlockSeq::new(params.k, p)?;
                    return Ok(report(Verdict::Witness { p, color }, &total));
                }
                Flow::Stop(cursor) => {
                    let cursor = BlockSeq::new(params.k, cursor)?;
                    return Ok(report(Verdict::BudgetExceeded { cursor }, &total));
                }
            }
        }
        pos += chunk.len();
    }
    Ok(report(Verdict::Exhausted, &total))
}
