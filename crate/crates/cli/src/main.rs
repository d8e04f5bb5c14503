mod config;
mod eval;

use clap::{Parser, Subcommand};
use config::RunConfig;
use finlab::coloring::{builtin_colorings, Coloring};
use finlab::rewrite::{rewrite_into_tree, synth_tree};
use finlab::scan::{scan_colorings, ScanParams};
use finlab::search::{find_witness, Neighborhood, SearchMode, SearchParams, Verdict};
use finlab::span::{self, Mode};
use finlab::{selftest, BlockSeq, FinError};
use rand::Rng;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_USAGE: u8 = 3;

/// Finite FIN_±k experiments: evaluation, spans, rewriting and witness search.
#[derive(Parser, Debug)]
#[command(name = "finlab", version)]
struct Cli {
    /// Seed for every randomised choice.
    #[arg(long, global = true, default_value_t = config::DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for search and verification (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an expression such as `S(0:2,2:-1)` or `psi1(0:4,1:3)`.
    Eval { expr: String },
    /// Enumerate the span of a block sequence, or its length-d tuples.
    Span {
        #[arg(long, default_value = "pm")]
        mode: Mode,
        /// List block sequences of this length drawn from the span.
        #[arg(long)]
        tuples: Option<usize>,
        /// Cap on the number of listed items.
        #[arg(long, env = config::ENV_SPAN)]
        budget: Option<u128>,
        p: BlockSeq,
    },
    /// Search for the least window witness of a colouring.
    Search {
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        r: u32,
        #[arg(long, default_value_t = 4)]
        window: u32,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value = "approx")]
        mode: SearchMode,
        #[arg(long, default_value = "support-confined")]
        neighborhood: Neighborhood,
        /// A rule (`hash:<r>` uses the run seed) or `@file` table.
        #[arg(long)]
        coloring: String,
        /// Cap on examined DFS nodes.
        #[arg(long, env = config::ENV_CANDIDATES)]
        budget: Option<u64>,
        /// Cap on span tuples enumerated while verifying a witness.
        #[arg(long, env = config::ENV_SPAN)]
        span_budget: Option<u128>,
        /// Cursor printed by an earlier budget-exceeded report.
        #[arg(long)]
        resume: Option<BlockSeq>,
    },
    /// Scan every colouring of growing windows for the least forced window.
    Scan {
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        r: u32,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 4)]
        max_window: u32,
        #[arg(long, default_value = "exact")]
        mode: SearchMode,
        #[arg(long, default_value = "support-confined")]
        neighborhood: Neighborhood,
        /// Scan all colourings instead of one per colour permutation.
        #[arg(long)]
        no_symmetry: bool,
        #[arg(long)]
        allow_approx: bool,
        /// Cap on colourings per window.
        #[arg(long, env = config::ENV_SCAN)]
        budget: Option<u64>,
    },
    /// Rewrite a subsequence Q of P into a synthesised S-closed tree.
    RewriteDemo {
        #[arg(long = "P")]
        p: BlockSeq,
        /// Defaults to a seeded choice among the block subsequences of P.
        #[arg(long = "Q")]
        q: Option<BlockSeq>,
        /// Tree depth; defaults to the length of Q.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Run every invariant suite.
    Selftest,
    /// List the built-in colouring rules.
    Colorings,
}

enum Failure {
    Usage(String),
    Fin(FinError),
}

impl From<FinError> for Failure {
    fn from(e: FinError) -> Self {
        Failure::Fin(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Fin(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                FinError::BudgetExceeded(_) => EXIT_BUDGET,
                FinError::ParseError(_) => EXIT_USAGE,
                _ => EXIT_NEGATIVE,
            })
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    // Flags take precedence; clap already folds the env variables into them.
    let mut cfg = RunConfig::default().with_env(|k| std::env::var(k).ok()).map_err(Failure::Usage)?;
    cfg.seed = cli.seed;
    cfg.threads = cli.threads;
    cfg.output = cli.output;
    match &cli.command {
        Command::Span { budget: Some(b), .. } => cfg.span_budget = *b,
        Command::Search { budget, span_budget, .. } => {
            cfg.candidate_budget = budget.unwrap_or(cfg.candidate_budget);
            cfg.span_budget = span_budget.unwrap_or(cfg.span_budget);
        }
        Command::Scan { budget: Some(b), .. } => cfg.scan_budget = *b,
        _ => {}
    }
    cfg.validate().map_err(Failure::Usage)?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(format!("cannot start {n} threads: {e}")))?;
    }

    let (text, code) = match cli.command {
        Command::Eval { expr } => (format!("{}\n", eval::eval(&expr)?), EXIT_OK),
        Command::Span { mode, tuples, p, .. } => (cmd_span(&p, mode, tuples, cfg.span_budget)?, EXIT_OK),
        Command::Search { k, d, r, window, m, mode, neighborhood, coloring, resume, .. } => {
            let mut params = SearchParams::new(k, d, r, window, m, mode);
            params.neighborhood = neighborhood;
            params.candidate_budget = cfg.candidate_budget;
            params.span_budget = cfg.span_budget;
            let c = parse_coloring(&coloring, d, cfg.seed)?;
            let report = find_witness(&c, &params, resume.as_ref())?;
            let code = match report.verdict {
                Verdict::Witness { .. } => EXIT_OK,
                Verdict::Exhausted => EXIT_NEGATIVE,
                Verdict::BudgetExceeded { .. } => EXIT_BUDGET,
            };
            (report.to_text(), code)
        }
        Command::Scan { k, d, r, m, max_window, mode, neighborhood, no_symmetry, allow_approx, .. } => {
            let params = ScanParams {
                k,
                d,
                r,
                m,
                mode,
                neighborhood,
                max_window,
                coloring_budget: cfg.scan_budget,
                symmetry: !no_symmetry,
                allow_approx,
            };
            let report = scan_colorings(&params)?;
            // A complete scan is a result either way; only a budget stop is not.
            let code = if report.minimal_window.is_none() && report.stopped_by_budget.is_some() {
                EXIT_BUDGET
            } else {
                EXIT_OK
            };
            (report.to_text(), code)
        }
        Command::RewriteDemo { p, q, depth } => cmd_rewrite_demo(&p, q, depth, cfg.seed)?,
        Command::Selftest => {
            let mut text = String::new();
            let mut code = EXIT_OK;
            for suite in selftest::all_suites(cfg.seed) {
                text.push_str(&format!("{suite}\n"));
                for s in &suite.samples {
                    text.push_str(&format!("  violation: {s}\n"));
                }
                if !suite.passed() {
                    code = EXIT_NEGATIVE;
                }
            }
            (text, code)
        }
        Command::Colorings => {
            let text = builtin_colorings().iter().map(|(name, about)| format!("{name:<18} {about}\n")).collect();
            (text, EXIT_OK)
        }
    };
    emit(&text, cfg.output.as_deref())?;
    Ok(code)
}

fn emit(text: &str, output: Option<&std::path::Path>) -> Result<(), Failure> {
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `hash:<r>` is shorthand for `hash:<seed>:<r>` with the run seed.
fn parse_coloring(spec: &str, arity: usize, seed: u64) -> Result<Coloring, FinError> {
    match spec.strip_prefix("hash:") {
        Some(r) if !r.contains(':') => Coloring::parse_spec(&format!("hash:{seed}:{r}"), arity),
        _ => Coloring::parse_spec(spec, arity),
    }
}

fn cmd_span(p: &BlockSeq, mode: Mode, tuples: Option<usize>, budget: u128) -> Result<String, FinError> {
    let lines: Vec<String> = match tuples {
        None => span::enum_span_with_budget(p, mode, budget)?.iter().map(|v| v.to_string()).collect(),
        Some(d) => {
            let elements = span::enum_span_with_budget(p, mode, budget)?;
            span::block_tuples(&elements, p.k(), d, budget)?.iter().map(|t| t.to_string()).collect()
        }
    };
    let mut out = String::new();
    for line in &lines {
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&format!("count={}\n", lines.len()));
    Ok(out)
}

fn cmd_rewrite_demo(
    p: &BlockSeq,
    q: Option<BlockSeq>,
    depth: Option<usize>,
    seed: u64,
) -> Result<(String, u8), FinError> {
    let q = match q {
        Some(q) => q,
        None => {
            let mut rng = selftest::rng(seed);
            let len = rng.gen_range(1..=p.len().max(1));
            let pool = span::enum_span_tuples(p, len)?;
            pool[rng.gen_range(0..pool.len())].clone()
        }
    };
    // Literals infer their bound from the largest value; Q lives in P's span.
    let q = BlockSeq::new(p.k(), q.iter().map(|b| b.with_k(p.k())).collect::<Result<_, _>>()?)?;
    let depth = depth.unwrap_or(q.len());
    let (u, cert) = synth_tree(p, depth)?;
    let trace = rewrite_into_tree(&q, p, &u, &cert)?;
    let max = trace.max_dist();
    let mut out = format!("P={p}\nQ={q}\ntree: depth={depth} nodes={}\n{trace}", u.len());
    let code = if max <= 3 {
        out.push_str(&format!("max_dist={max} ≤ 3\n"));
        EXIT_OK
    } else {
        out.push_str(&format!("max_dist={max} > 3\n"));
        EXIT_NEGATIVE
    };
    Ok((out, code))
}
