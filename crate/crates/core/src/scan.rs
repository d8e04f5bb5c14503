//! Exhaustive scans over all colourings of a window.
//!
//! For each window `n`, a colouring of the domain (all d-tuples of window
//! vectors) is *forced* when some length-`m` block sequence in the window is
//! a witness for it. The scan reports, per window, whether every colouring
//! is forced, and the least counterexample otherwise.
//!
//! Colourings are ordered lexicographically by their colour lists, with the
//! domain in canonical order. The least colouring of each colour-permutation
//! orbit is the one whose colours first appear in the order `0, 1, 2, …`, so
//! scanning only those gives the same verdict and the same least
//! counterexample.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::coloring::Coloring;
use crate::error::{FinError, Result};
use crate::search::{candidate_blocks, neighbours, Neighborhood, SearchMode, SearchParams};
use crate::seq::BlockSeq;
use crate::span::{self, DEFAULT_SPAN_BUDGET};
use crate::vector::FinVec;

pub const DEFAULT_COLORING_BUDGET: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanParams {
    pub k: u32,
    pub d: usize,
    pub r: u32,
    pub m: usize,
    pub mode: SearchMode,
    pub neighborhood: Neighborhood,
    pub max_window: u32,
    /// Cap on `r^|domain|` per window.
    pub coloring_budget: u64,
    pub symmetry: bool,
    /// Approximate scans are refused unless set.
    pub allow_approx: bool,
}

impl ScanParams {
    pub fn exact_fin1(r: u32, m: usize, max_window: u32) -> Self {
        ScanParams {
            k: 1,
            d: 1,
            r,
            m,
            mode: SearchMode::Exact,
            neighborhood: Neighborhood::SupportConfined,
            max_window,
            coloring_budget: DEFAULT_COLORING_BUDGET,
            symmetry: true,
            allow_approx: false,
        }
    }

    fn search_params(&self, window: u32) -> SearchParams {
        let mut p = SearchParams::new(self.k, self.d, self.r, window, self.m, self.mode);
        p.neighborhood = self.neighborhood;
        p
    }
}

impl fmt::Display for ScanParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={} d={} r={} m={} mode={} neighborhood={} max_window={} symmetry={}",
            self.k,
            self.d,
            self.r,
            self.m,
            self.mode,
            self.neighborhood,
            self.max_window,
            if self.symmetry { "colour-permutations" } else { "none" }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowResult {
    pub window: u32,
    /// Canonically sorted.
    pub domain: Vec<BlockSeq>,
    pub colorings_checked: u64,
    /// Least colouring without a witness, as colours of `domain`.
    pub counterexample: Option<Vec<u32>>,
}

impl WindowResult {
    pub fn forced(&self) -> bool {
        self.counterexample.is_none()
    }

    /// The counterexample as a table colouring.
    pub fn counterexample_coloring(&self) -> Option<Coloring> {
        let colors = self.counterexample.as_ref()?;
        let arity = self.domain.first().map_or(1, BlockSeq::len);
        let entries = self.domain.iter().cloned().zip(colors.iter().copied()).collect();
        Coloring::table(arity, entries, None).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub params: ScanParams,
    pub windows: Vec<WindowResult>,
    /// Least window where every colouring is forced.
    pub minimal_window: Option<u32>,
    /// Window skipped because `r^|domain|` exceeded the budget.
    pub stopped_by_budget: Option<u32>,
}

impl ScanReport {
    pub fn to_text(&self) -> String {
        let mut out = String::from("finlab-report v1\ncommand=scan\n");
        out.push_str(&format!("params: {}\n", self.params));
        for w in &self.windows {
            out.push_str(&format!(
                "window={} domain={} colorings_checked={} verdict={}",
                w.window,
                w.domain.len(),
                w.colorings_checked,
                if w.forced() { "forced" } else { "not-forced" }
            ));
            if let Some(cols) = &w.counterexample {
                let parts: Vec<String> = w.domain.iter().zip(cols).map(|(t, c)| format!("{t}->{c}")).collect();
                out.push_str(&format!(" counterexample={}", parts.join(" ")));
            }
            out.push('\n');
        }
        match self.minimal_window {
            Some(n) => out.push_str(&format!("minimal_window={n}\n")),
            None => out.push_str("minimal_window=none\n"),
        }
        if let Some(n) = self.stopped_by_budget {
            out.push_str(&format!(
                "notice=window {n} skipped: colouring count exceeds budget {}\n",
                self.params.coloring_budget
            ));
        }
        out
    }
}

/// For one window: the domain, and per candidate sequence the list of
/// requirements. A requirement is the set of domain indices whose colours
/// may cover one span tuple.
pub(crate) struct WindowModel {
    pub domain: Vec<BlockSeq>,
    pub sequences: Vec<Vec<Vec<usize>>>,
}

fn all_sequences(cands: &[FinVec], k: u32, m: usize) -> Result<Vec<BlockSeq>> {
    span::block_tuples(cands, k, m, DEFAULT_SPAN_BUDGET)
}

pub(crate) fn window_model(params: &ScanParams, window: u32) -> Result<WindowModel> {
    let sp = params.search_params(window);
    let cands = candidate_blocks(&sp)?;
    let domain = if cands.is_empty() {
        Vec::new()
    } else {
        span::block_tuples(&cands, params.k, params.d, DEFAULT_SPAN_BUDGET)?
    };
    let index: HashMap<&[FinVec], usize> = domain.iter().enumerate().map(|(i, t)| (t.blocks(), i)).collect();
    let lookup = |t: &[FinVec]| -> Result<usize> {
        index.get(t).copied().ok_or_else(|| {
            FinError::UncoveredTuple(format!(
                "{} outside the scan domain",
                BlockSeq::new(params.k, t.to_vec()).map(|s| s.to_string()).unwrap_or_default()
            ))
        })
    };

    let mut sequences = Vec::new();
    if (window as usize) >= params.m && !cands.is_empty() {
        for p in all_sequences(&cands, params.k, params.m)? {
            let elements = match params.mode {
                SearchMode::Approx => span::enum_span(&p, span::Mode::Pm)?,
                SearchMode::Exact => span::enum_span_unsigned(&p, DEFAULT_SPAN_BUDGET)?,
            };
            let mut reqs = Vec::new();
            for t in span::block_tuples(&elements, params.k, params.d, DEFAULT_SPAN_BUDGET)? {
                let mut req = match params.mode {
                    SearchMode::Exact => vec![lookup(t.blocks())?],
                    SearchMode::Approx => {
                        let lists: Vec<Vec<FinVec>> = t.iter().map(|q| neighbours(q, &sp)).collect();
                        let mut found = Vec::new();
                        for combo in span::block_tuples(&lists.concat(), params.k, params.d, DEFAULT_SPAN_BUDGET)? {
                            let ok = combo.iter().zip(&lists).all(|(x, l)| l.contains(x));
                            if ok {
                                found.push(lookup(combo.blocks())?);
                            }
                        }
                        found
                    }
                };
                req.sort_unstable();
                req.dedup();
                reqs.push(req);
            }
            sequences.push(reqs);
        }
    }
    Ok(WindowModel { domain, sequences })
}

impl WindowModel {
    /// Some sequence has every requirement meeting a common colour.
    pub fn has_witness(&self, colors: &[u32], full: u64) -> bool {
        self.sequences.iter().any(|reqs| {
            let mut alive = full;
            for req in reqs {
                alive &= req.iter().fold(0u64, |m, &i| m | (1u64 << colors[i]));
                if alive == 0 {
                    return false;
                }
            }
            true
        })
    }
}

/// Colours of colouring number `x`, domain element 0 most significant.
fn decode(mut x: u64, r: u32, n: usize) -> Vec<u32> {
    let mut out = vec![0u32; n];
    for slot in out.iter_mut().rev() {
        *slot = (x % u64::from(r)) as u32;
        x /= u64::from(r);
    }
    out
}

/// Colours appear for the first time in increasing order.
fn first_occurrence_ordered(colors: &[u32]) -> bool {
    let mut next = 0u32;
    for &c in colors {
        if c > next {
            return false;
        }
        if c == next {
            next += 1;
        }
    }
    true
}

pub fn scan_colorings(params: &ScanParams) -> Result<ScanReport> {
    if params.r == 0 || params.r > 64 || params.k == 0 || params.d == 0 || params.m == 0 {
        return Err(FinError::InvalidParams("k, d, m and r must be positive with r <= 64".into()));
    }
    if params.mode == SearchMode::Approx && !params.allow_approx {
        return Err(FinError::InvalidParams("approximate scans require an explicit budget override".into()));
    }
    if params.coloring_budget == 0 {
        return Err(FinError::InvalidParams("colouring budget must be positive".into()));
    }
    let full = if params.r == 64 { u64::MAX } else { (1u64 << params.r) - 1 };
    let mut windows = Vec::new();
    let mut minimal_window = None;
    let mut stopped_by_budget = None;
    for n in 1..=params.max_window {
        let sp = params.search_params(n);
        let cands = match candidate_blocks(&sp) {
            Ok(c) => c,
            Err(FinError::BudgetExceeded(_)) => {
                stopped_by_budget = Some(n);
                break;
            }
            Err(e) => return Err(e),
        };
        let domain_size =
            span::block_tuples(&cands, params.k, params.d, DEFAULT_SPAN_BUDGET).map(|t| t.len()).unwrap_or(usize::MAX);
        let count = u64::from(params.r).checked_pow(domain_size.try_into().unwrap_or(u32::MAX));
        let Some(count) = count.filter(|&c| c <= params.coloring_budget) else {
            stopped_by_budget = Some(n);
            break;
        };
        let model = window_model(params, n)?;
        let len = model.domain.len();
        let wanted = |x: u64| -> Option<Vec<u32>> {
            let colors = decode(x, params.r, len);
            if params.symmetry && !first_occurrence_ordered(&colors) {
                return None;
            }
            Some(colors)
        };
        let bad = (0..count).into_par_iter().find_first(|&x| match wanted(x) {
            Some(colors) => !model.has_witness(&colors, full),
            None => false,
        });
        let scanned_to = bad.map_or(count, |x| x + 1);
        let colorings_checked = if params.symmetry {
            (0..scanned_to).into_par_iter().filter(|&x| wanted(x).is_some()).count() as u64
        } else {
            scanned_to
        };
        let result = WindowResult {
            window: n,
            domain: model.domain,
            colorings_checked,
            counterexample: bad.map(|x| decode(x, params.r, len)),
        };
        let forced = result.forced();
        windows.push(result);
        if forced {
            minimal_window = Some(n);
            break;
        }
    }
    Ok(ScanReport { params: params.clone(), windows, minimal_window, stopped_by_budget })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{find_witness, Verdict};

    #[test]
    fn window_two_not_forced() {
        let mut params = ScanParams::exact_fin1(2, 2, 2);
        params.symmetry = false;
        let report = scan_colorings(&params).unwrap();
        let w2 = &report.windows[1];
        assert_eq!(w2.domain.len(), 3);
        assert!(!w2.forced());
        // all-zero is forced; (0, 0, 1) on ({0}, {0,1}, {1}) is not.
        assert_eq!(w2.colorings_checked, 2);
        assert_eq!(w2.counterexample.as_deref(), Some(&[0, 0, 1][..]));
        assert_eq!(report.minimal_window, None);
    }

    #[test]
    fn single_colour_forces_at_m() {
        for m in 1..=3 {
            let report = scan_colorings(&ScanParams::exact_fin1(1, m, 5)).unwrap();
            assert_eq!(report.minimal_window, Some(m as u32));
        }
    }

    #[test]
    fn symmetry_keeps_verdicts() {
        for r in 2..=3 {
            let mut a = ScanParams::exact_fin1(r, 2, 3);
            let with = scan_colorings(&a).unwrap();
            a.symmetry = false;
            let without = scan_colorings(&a).unwrap();
            assert_eq!(with.minimal_window, without.minimal_window);
            for (x, y) in with.windows.iter().zip(&without.windows) {
                assert_eq!(x.counterexample, y.counterexample);
            }
        }
    }

    #[test]
    fn counterexamples_have_no_witness() {
        let report = scan_colorings(&ScanParams::exact_fin1(2, 2, 3)).unwrap();
        for w in &report.windows {
            if let Some(c) = w.counterexample_coloring() {
                let sp = SearchParams::new(1, 1, 2, w.window, 2, SearchMode::Exact);
                assert_eq!(find_witness(&c, &sp, None).unwrap().verdict, Verdict::Exhausted);
            }
        }
    }

    #[test]
    fn approx_needs_override() {
        let mut p = ScanParams::exact_fin1(2, 1, 1);
        p.mode = SearchMode::Approx;
        assert_eq!(scan_colorings(&p).unwrap_err().name(), "InvalidParams");
        p.allow_approx = true;
        p.k = 1;
        // ({0:1}) spans {0:1} and {0:-1}, which sit at distance 2.
        let report = scan_colorings(&p).unwrap();
        assert!(!report.windows[0].forced());
    }

    #[test]
    fn budget_notice() {
        let mut p = ScanParams::exact_fin1(2, 2, 6);
        p.coloring_budget = 1 << 10;
        let report = scan_colorings(&p).unwrap();
        assert_eq!(report.stopped_by_budget, Some(4));
        assert!(report.to_text().contains("notice=window 4 skipped"));
    }
}
