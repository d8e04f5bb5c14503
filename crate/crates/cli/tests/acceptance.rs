//! Acceptance run: one PASS/FAIL line per criterion, each within its time
//! limit. Exits nonzero if any criterion fails.

use finlab::coloring::Coloring;
use finlab::rewrite::verify_certificate;
use finlab::scan::{scan_colorings, ScanParams};
use finlab::search::{check_witness, find_witness, SearchMode, SearchParams, Verdict, WitnessCheck};
use finlab::selftest::{self, SuiteReport};
use finlab::{BlockSeq, FinVec};
use rand::Rng;
use std::process::Command;
use std::time::{Duration, Instant};

const SEED: u64 = 7;

/// Naive FIN_1 oracle. A block is a nonzero bitmask over the window; the
/// exact span of `(a, b)` with `max a < min b` is `{a, b, a | b}`.
mod oracle {
    pub fn blocks(w: u32) -> Vec<u32> {
        (1..1u32 << w).collect()
    }

    fn before(a: u32, b: u32) -> bool {
        (31 - a.leading_zeros()) < b.trailing_zeros()
    }

    /// Some length-2 block sequence has a one-colour span.
    pub fn has_witness(w: u32, color: &dyn Fn(u32) -> u32) -> bool {
        for a in blocks(w) {
            for b in blocks(w) {
                if before(a, b) && color(a) == color(b) && color(b) == color(a | b) {
                    return true;
                }
            }
        }
        false
    }

    /// Support indices of a mask, ascending.
    pub fn indices(a: u32) -> Vec<u32> {
        (0..32).filter(|i| a >> i & 1 == 1).collect()
    }

    /// Blocks sorted like vector literals: lexicographically by index list.
    pub fn domain(w: u32) -> Vec<u32> {
        let mut d = blocks(w);
        d.sort_by_key(|&a| indices(a));
        d
    }

    /// Scans all `r^|domain|` colourings with domain element 0 most
    /// significant. Returns the first colouring without a witness.
    pub fn first_counterexample(w: u32, r: u32) -> Option<Vec<u32>> {
        let dom = domain(w);
        let n = dom.len() as u32;
        for code in 0..r.pow(n) {
            let mut colors = vec![0u32; dom.len()];
            let mut rest = code;
            for i in (0..dom.len()).rev() {
                colors[i] = rest % r;
                rest /= r;
            }
            let lookup = |a: u32| colors[dom.iter().position(|&x| x == a).unwrap()];
            if !has_witness(w, &lookup) {
                return Some(colors);
            }
        }
        None
    }
}

fn mask_literal(a: u32) -> FinVec {
    FinVec::new(oracle::indices(a).into_iter().map(|i| (i, 1)).collect(), 1).unwrap()
}

struct Line {
    ok: bool,
    text: String,
}

fn criterion(n: u32, name: &str, limit_s: u64, body: impl FnOnce() -> (bool, String)) -> Line {
    let t = Instant::now();
    let (passed, detail) = body();
    let elapsed = t.elapsed();
    let in_time = elapsed < Duration::from_secs(limit_s);
    let ok = passed && in_time;
    let text = format!(
        "{} criterion {n} {name}: {detail} ({:.2} s, limit {limit_s} s{})",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        if in_time { "" } else { ", too slow" }
    );
    Line { ok, text }
}

fn suite(rep: SuiteReport) -> (bool, String) {
    let mut detail = format!("{} cases, {} violations", rep.cases, rep.violations);
    for s in &rep.samples {
        detail.push_str(&format!("; {s}"));
    }
    (rep.passed(), detail)
}

fn oracle_search() -> (bool, String) {
    let mut rng = selftest::rng(SEED);
    let mut instances = 0;
    let mut mismatches = Vec::new();
    let mut witnesses = 0;
    for t in 0..200 {
        let colors: Vec<u32> = (0..16).map(|_| rng.gen_range(0..2)).collect();
        let entries = oracle::blocks(4)
            .into_iter()
            .map(|a| (BlockSeq::from_blocks(vec![mask_literal(a)]).unwrap(), colors[a as usize]))
            .collect();
        let c = Coloring::table(1, entries, None).unwrap();
        for w in 1..=4 {
            instances += 1;
            let expect = oracle::has_witness(w, &|a| colors[a as usize]);
            let params = SearchParams::new(1, 1, 2, w, 2, SearchMode::Exact);
            let got = match find_witness(&c, &params, None) {
                Ok(rep) => match rep.verdict {
                    Verdict::Witness { p, color } => {
                        witnesses += 1;
                        // The reported witness must itself check out.
                        if check_witness(&p, &c, &params).ok() != Some(WitnessCheck::Color(color)) {
                            mismatches.push(format!("colouring {t} W={w}: witness {p} does not verify"));
                        }
                        true
                    }
                    Verdict::Exhausted => false,
                    Verdict::BudgetExceeded { .. } => {
                        mismatches.push(format!("colouring {t} W={w}: budget hit"));
                        continue;
                    }
                },
                Err(e) => {
                    mismatches.push(format!("colouring {t} W={w}: {e}"));
                    continue;
                }
            };
            if got != expect {
                mismatches.push(format!("colouring {t} W={w}: find_witness {got}, oracle {expect}"));
            }
        }
    }

    let mut scans = 0;
    for symmetry in [true, false] {
        let mut params = ScanParams::exact_fin1(2, 2, 4);
        params.symmetry = symmetry;
        let report = scan_colorings(&params).unwrap();
        for w in 1..=4 {
            scans += 1;
            let expect = oracle::first_counterexample(w, 2);
            let Some(res) = report.windows.iter().find(|x| x.window == w) else {
                mismatches.push(format!("scan symmetry={symmetry}: window {w} missing"));
                continue;
            };
            let domain: Vec<String> = oracle::domain(w).into_iter().map(|a| mask_literal(a).to_string()).collect();
            let got_domain: Vec<String> = res.domain.iter().map(|s| s.to_string()).collect();
            if domain != got_domain {
                mismatches.push(format!("scan W={w}: domain order differs"));
            }
            if res.forced() != expect.is_none() || res.counterexample != expect {
                mismatches.push(format!(
                    "scan symmetry={symmetry} W={w}: scan {:?}, oracle {:?}",
                    res.counterexample, expect
                ));
            }
        }
        let forced = (1..=4).find(|&w| oracle::first_counterexample(w, 2).is_none());
        if report.minimal_window != forced {
            mismatches.push(format!("scan minimal window {:?}, oracle {forced:?}", report.minimal_window));
        }
    }
    let mut detail = format!(
        "{instances} search instances ({witnesses} witnesses), {scans} window scans, {} mismatches",
        mismatches.len()
    );
    for m in mismatches.iter().take(5) {
        detail.push_str(&format!("; {m}"));
    }
    (mismatches.is_empty(), detail)
}

fn determinism() -> (bool, String) {
    let scenarios: [&[&str]; 3] = [
        &["--k", "2", "--r", "4", "--window", "5", "--m", "3", "--coloring", "hash:1:4"],
        &[
            "--k",
            "1",
            "--r",
            "3",
            "--window",
            "8",
            "--m",
            "3",
            "--mode",
            "exact",
            "--coloring",
            "hash:5:3",
            "--budget",
            "300",
        ],
        &["--k", "1", "--d", "2", "--r", "2", "--window", "6", "--m", "3", "--mode", "exact", "--coloring", "hash:2"],
    ];
    let mut bad = Vec::new();
    for (i, args) in scenarios.iter().enumerate() {
        let outputs: Vec<Vec<u8>> = ["1", "4", "8"]
            .iter()
            .map(|n| {
                Command::new(env!("CARGO_BIN_EXE_finlab"))
                    .arg("search")
                    .args(*args)
                    .args(["--threads", n])
                    .env_remove("FINLAB_BUDGET_CANDIDATES")
                    .env_remove("FINLAB_BUDGET_SPAN")
                    .output()
                    .expect("binary runs")
                    .stdout
            })
            .collect();
        if outputs.iter().any(|o| o.is_empty() || *o != outputs[0]) {
            bad.push(i);
        }
    }
    (bad.is_empty(), format!("3 scenarios x threads 1,4,8, {} differing", bad.len()))
}

fn main() {
    let lines = vec![
        criterion(1, "S-laws", 10, || suite(selftest::s_laws(SEED))),
        criterion(2, "homomorphism", 30, || suite(selftest::homomorphism(SEED))),
        criterion(3, "span integrity", 60, || suite(selftest::span_integrity())),
        criterion(4, "S-closure", 30, || suite(selftest::s_closure(SEED))),
        criterion(5, "rewriting", 60, || suite(selftest::rewriting())),
        criterion(6, "certificate verifier", 30, || {
            let (ok, mut detail) = suite(selftest::certificate(SEED));
            let (u, cert, expected) = selftest::broken_certificate();
            let got = verify_certificate(&u, &cert).violations;
            detail.push_str(&format!(
                "; broken tree rejected with [{}]",
                got.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
            ));
            (ok && got == vec![expected], detail)
        }),
        criterion(7, "lifting", 30, || suite(selftest::lifting(SEED))),
        criterion(8, "oracle equivalence", 600, oracle_search),
        criterion(9, "determinism", 300, determinism),
    ];
    for l in &lines {
        println!("{}", l.text);
    }
    let failed = lines.iter().filter(|l| !l.ok).count();
    println!("{} of {} criteria passed", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
