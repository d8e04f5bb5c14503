//! Colourings of d-tuples of FIN_±k vectors.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{FinError, Result};
use crate::seq::BlockSeq;
use crate::vector::FinVec;

/// Largest supported colour count; surviving colours are tracked as a `u64` mask.
pub const MAX_COLORS: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Const(u32),
    /// 0 when the value at `min supp` is positive, 1 when negative.
    SignAtMin,
    SuppParity(u32),
    MaxElem(u32),
    Hash {
        seed: u64,
        r: u32,
    },
}

impl Rule {
    fn colors(&self) -> u32 {
        match *self {
            Rule::Const(i) => i + 1,
            Rule::SignAtMin => 2,
            Rule::SuppParity(r) | Rule::MaxElem(r) | Rule::Hash { r, .. } => r,
        }
    }

    fn eval(&self, tuple: &[FinVec]) -> u32 {
        match *self {
            Rule::Const(i) => i,
            Rule::SignAtMin => {
                let first = tuple.iter().find_map(|b| b.entries().first());
                u32::from(matches!(first, Some(&(_, v)) if v < 0))
            }
            Rule::SuppParity(r) => {
                let n: usize = tuple.iter().map(FinVec::len).sum();
                (n as u64 % u64::from(r)) as u32
            }
            Rule::MaxElem(r) => {
                let max = tuple.iter().rev().find_map(FinVec::max_support).unwrap_or(0);
                max % r
            }
            Rule::Hash { seed, r } => hash_color(seed, r, &tuple_literal(tuple)),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Const(i) => write!(f, "const:{i}"),
            Rule::SignAtMin => f.write_str("sign_at_min"),
            Rule::SuppParity(r) => write!(f, "supp_parity:{r}"),
            Rule::MaxElem(r) => write!(f, "maxelem:{r}"),
            Rule::Hash { seed, r } => write!(f, "hash:{seed}:{r}"),
        }
    }
}

impl FromStr for Rule {
    type Err = FinError;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || FinError::UnknownRule(format!("`{s}`"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |x: &str| x.parse::<u64>().map_err(|_| unknown());
        let colors = |x: &str| -> Result<u32> {
            let r = num(x)?;
            if r == 0 || r > u64::from(MAX_COLORS) {
                return Err(FinError::InvalidParams(format!("colour count {r} outside 1..={MAX_COLORS}")));
            }
            Ok(r as u32)
        };
        match parts.as_slice() {
            ["const", i] => {
                let i = num(i)?;
                if i >= u64::from(MAX_COLORS) {
                    return Err(FinError::InvalidParams(format!("colour {i} outside 0..{MAX_COLORS}")));
                }
                Ok(Rule::Const(i as u32))
            }
            ["sign_at_min"] => Ok(Rule::SignAtMin),
            ["supp_parity", r] => Ok(Rule::SuppParity(colors(r)?)),
            ["maxelem", r] => Ok(Rule::MaxElem(colors(r)?)),
            ["hash", seed, r] => Ok(Rule::Hash { seed: num(seed)?, r: colors(r)? }),
            _ => Err(unknown()),
        }
    }
}

/// SHA-256 of the little-endian seed followed by the literal; the first
/// eight digest bytes as a little-endian integer, reduced mod `r`.
pub fn hash_color(seed: u64, r: u32, literal: &str) -> u32 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(literal.as_bytes());
    let digest = h.finalize();
    let word = u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"));
    (word % u64::from(r)) as u32
}

fn tuple_literal(tuple: &[FinVec]) -> String {
    let parts: Vec<String> = tuple.iter().map(|b| b.to_string()).collect();
    parts.join(";")
}

type TableKey = Vec<Vec<(u32, i32)>>;

fn table_key(tuple: &[FinVec]) -> TableKey {
    tuple.iter().map(|b| b.entries().to_vec()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    Rule(Rule),
    /// Keys ignore kBounds.
    Table {
        entries: HashMap<TableKey, u32>,
        default: Option<u32>,
    },
    /// `v ↦ inner(Ψ_k(v))`, element-wise on tuples.
    Pushforward {
        inner: Box<Coloring>,
        k: u32,
    },
}

/// A deterministic map from d-tuples of vectors to colours `0..r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    arity: usize,
    colors: u32,
    kind: Kind,
}

impl Coloring {
    pub fn rule(rule: Rule, arity: usize) -> Result<Self> {
        if arity == 0 {
            return Err(FinError::InvalidParams("colouring arity must be positive".into()));
        }
        Ok(Coloring { arity, colors: rule.colors(), kind: Kind::Rule(rule) })
    }

    /// Builds a table colouring. The colour count is one more than the
    /// largest colour mentioned.
    pub fn table(arity: usize, entries: Vec<(BlockSeq, u32)>, default: Option<u32>) -> Result<Self> {
        if arity == 0 {
            return Err(FinError::InvalidParams("colouring arity must be positive".into()));
        }
        let mut map = HashMap::with_capacity(entries.len());
        let mut top = default.unwrap_or(0);
        for (tuple, c) in entries {
            if tuple.len() != arity {
                return Err(FinError::LengthMismatch(format!(
                    "table tuple ({tuple}) has length {}, expected {arity}",
                    tuple.len()
                )));
            }
            top = top.max(c);
            map.insert(table_key(tuple.blocks()), c);
        }
        if top >= MAX_COLORS {
            return Err(FinError::InvalidParams(format!("colour {top} outside 0..{MAX_COLORS}")));
        }
        Ok(Coloring { arity, colors: top + 1, kind: Kind::Table { entries: map, default } })
    }

    /// Parses the table file format: one `tuple-literal -> color` per line,
    /// `* -> color` for a default, `#` starting a comment.
    pub fn from_table_text(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut default = None;
        let mut arity = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| FinError::ParseError(format!("line {}: expected `tuple -> color`", lineno + 1)))?;
            let color: u32 = rhs
                .trim()
                .parse()
                .map_err(|_| FinError::ParseError(format!("line {}: bad colour `{}`", lineno + 1, rhs.trim())))?;
            if lhs.trim() == "*" {
                default = Some(color);
                continue;
            }
            let tuple: BlockSeq = lhs.parse()?;
            if *arity.get_or_insert(tuple.len()) != tuple.len() {
                return Err(FinError::LengthMismatch(format!("line {}: tuple arity differs", lineno + 1)));
            }
            entries.push((tuple, color));
        }
        Coloring::table(arity.unwrap_or(1), entries, default)
    }

    /// Parses `rule` or `@path` (a table file).
    pub fn parse_spec(spec: &str, arity: usize) -> Result<Self> {
        if let Some(path) = spec.strip_prefix('@') {
            let text = std::fs::read_to_string(path)
                .map_err(|e| FinError::ParseError(format!("cannot read colouring table {path}: {e}")))?;
            let c = Coloring::from_table_text(&text)?;
            if c.arity != arity && !matches!(&c.kind, Kind::Table { entries, .. } if entries.is_empty()) {
                return Err(FinError::LengthMismatch(format!(
                    "table arity {} differs from requested {arity}",
                    c.arity
                )));
            }
            return Ok(Coloring { arity, ..c });
        }
        Coloring::rule(spec.parse()?, arity)
    }

    pub fn pushforward(inner: Coloring, k: u32) -> Self {
        Coloring { arity: inner.arity, colors: inner.colors, kind: Kind::Pushforward { inner: Box::new(inner), k } }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn colors(&self) -> u32 {
        self.colors
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    /// Colour of a tuple of `arity` blocks.
    pub fn color(&self, tuple: &[FinVec]) -> Result<u32> {
        if tuple.len() != self.arity {
            return Err(FinError::LengthMismatch(format!(
                "colouring of arity {} queried with {} blocks",
                self.arity,
                tuple.len()
            )));
        }
        match &self.kind {
            Kind::Rule(rule) => Ok(rule.eval(tuple)),
            Kind::Table { entries, default } => entries.get(&table_key(tuple)).copied().or(*default).ok_or_else(|| {
                FinError::UncoveredTuple(format!("({}) not in the colouring table", tuple_literal(tuple)))
            }),
            Kind::Pushforward { inner, k } => {
                let images = tuple.iter().map(|b| b.psi(*k)).collect::<Result<Vec<_>>>()?;
                inner.color(&images)
            }
        }
    }

    pub fn color_seq(&self, tuple: &BlockSeq) -> Result<u32> {
        self.color(tuple.blocks())
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Rule(rule) => write!(f, "{rule}"),
            Kind::Table { entries, default } => {
                write!(f, "table[{} entries", entries.len())?;
                if let Some(c) = default {
                    write!(f, ", default {c}")?;
                }
                f.write_str("]")
            }
            Kind::Pushforward { inner, k } => write!(f, "pushforward[k={k}]({inner})"),
        }
    }
}

/// Names and one-line descriptions of the built-in rules.
pub fn builtin_colorings() -> Vec<(&'static str, &'static str)> {
    vec![
        ("const:<i>", "every tuple gets colour i"),
        ("sign_at_min", "0 if the leading value is positive, 1 if negative"),
        ("supp_parity:<r>", "support size mod r"),
        ("maxelem:<r>", "largest support index mod r"),
        ("hash:<seed>:<r>", "SHA-256 of seed and tuple literal, mod r"),
    ]
}
