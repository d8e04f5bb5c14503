//! The `eval` expression language.
//!
//! ```text
//! expr  := call | literal
//! call  := T(expr) | S(expr) | neg(expr) | phi<m>(expr) | psi<k>(expr)
//!        | add(expr, expr) | dist(expr, expr) | combine(expr; combo)
//! ```
//!
//! Unary operations act blockwise on sequences. Commas separate both vector
//! entries and call arguments, so a binary call splits at the first rule
//! that singles out one top-level comma: a comma touching whitespace, a
//! comma next to a nested call, or a comma where indices stop increasing.

use finlab::{BlockSeq, Combo, FinError, FinVec, Result};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Vec(FinVec),
    Seq(BlockSeq),
    Int(u32),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Vec(v) => write!(f, "{v}"),
            Value::Seq(s) => write!(f, "{s}"),
            Value::Int(n) => write!(f, "{n}"),
        }
    }
}

fn parse_err(msg: impl Into<String>) -> FinError {
    FinError::ParseError(msg.into())
}

pub fn eval(expr: &str) -> Result<Value> {
    let s = expr.trim();
    let Some((name, inner)) = split_call(s)? else {
        return literal(s);
    };
    match name {
        "T" => unary(inner, |v| Ok(v.tetris())),
        "S" => unary(inner, |v| Ok(v.weak_tetris())),
        "neg" => unary(inner, |v| Ok(v.neg())),
        "add" => {
            let (a, b) = split_args(inner, true)?;
            Ok(Value::Vec(as_vec(eval(a)?)?.add(&as_vec(eval(b)?)?)?))
        }
        "dist" => {
            let (a, b) = split_args(inner, false)?;
            match (eval(a)?, eval(b)?) {
                (Value::Vec(u), Value::Vec(v)) => Ok(Value::Int(u.dist(&v))),
                (Value::Seq(p), Value::Seq(q)) => Ok(Value::Int(p.dist(&q)?)),
                _ => Err(parse_err("dist needs two vectors or two sequences")),
            }
        }
        "combine" => {
            let cut = top_level(inner, ';').pop().ok_or_else(|| parse_err("combine expects `P; combo`"))?;
            let p = match eval(&inner[..cut])? {
                Value::Seq(p) => p,
                Value::Vec(v) => BlockSeq::from_blocks(vec![v])?,
                Value::Int(_) => return Err(parse_err("combine needs a block sequence")),
            };
            let combo: Combo = inner[cut + 1..].parse()?;
            Ok(Value::Vec(finlab::span::combine(&p, &combo)?))
        }
        _ => {
            if let Some(m) = name.strip_prefix("phi") {
                let m = index_suffix(name, m)?;
                unary(inner, |v| v.phi(m))
            } else if let Some(k) = name.strip_prefix("psi") {
                let k = index_suffix(name, k)?;
                unary(inner, |v| v.psi(k))
            } else {
                Err(parse_err(format!("unknown function `{name}`")))
            }
        }
    }
}

fn index_suffix(name: &str, digits: &str) -> Result<u32> {
    digits.parse().map_err(|_| parse_err(format!("`{name}` needs a numeric suffix, e.g. {}2", &name[..3])))
}

fn literal(s: &str) -> Result<Value> {
    if s.contains(';') {
        Ok(Value::Seq(s.parse()?))
    } else {
        Ok(Value::Vec(s.parse()?))
    }
}

fn as_vec(v: Value) -> Result<FinVec> {
    match v {
        Value::Vec(v) => Ok(v),
        other => Err(parse_err(format!("expected a vector, got `{other}`"))),
    }
}

fn unary(inner: &str, op: impl Fn(&FinVec) -> Result<FinVec>) -> Result<Value> {
    match eval(inner)? {
        Value::Vec(v) => Ok(Value::Vec(op(&v)?)),
        Value::Seq(p) => Ok(Value::Seq(p.map(op)?)),
        Value::Int(n) => Err(parse_err(format!("cannot apply a vector operation to the integer {n}"))),
    }
}

/// `name(inner)` when `s` is a single call spanning the whole string.
fn split_call(s: &str) -> Result<Option<(&str, &str)>> {
    let name_len = s.find(|c: char| !c.is_ascii_alphanumeric()).unwrap_or(s.len());
    if name_len == 0 || !s.as_bytes()[0].is_ascii_alphabetic() || !s[name_len..].starts_with('(') {
        return Ok(None);
    }
    let mut depth = 0usize;
    for (i, c) in s.char_indices().skip(name_len) {
        match c {
            '(' => depth += 1,
            ')' => {
                depth = depth.checked_sub(1).ok_or_else(|| parse_err(format!("unbalanced `)` in `{s}`")))?;
                if depth == 0 {
                    if i + 1 != s.len() {
                        return Err(parse_err(format!("trailing input after `{}`", &s[..=i])));
                    }
                    return Ok(Some((&s[..name_len], &s[name_len + 1..i])));
                }
            }
            _ => {}
        }
    }
    Err(parse_err(format!("unclosed `(` in `{s}`")))
}

/// Byte offsets of `sep` at parenthesis depth zero.
fn top_level(s: &str, sep: char) -> Vec<usize> {
    let mut depth = 0i32;
    let mut out = Vec::new();
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => out.push(i),
            _ => {}
        }
    }
    out
}

fn is_call(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_alphabetic()) || s.ends_with(')')
}

fn entry_index(pair: &str) -> Option<u32> {
    pair.split(':').next()?.trim().parse().ok()
}

/// Splits binary-call arguments. With `concat`, an otherwise ambiguous split
/// of plain vector literals is harmless: every valid split has the same sum.
fn split_args(inner: &str, concat: bool) -> Result<(&str, &str)> {
    let commas = top_level(inner, ',');
    let at = |i: usize| (inner[..i].trim(), inner[i + 1..].trim());
    let pick = |cands: Vec<usize>| -> Option<usize> { (cands.len() == 1).then(|| cands[0]) };

    let spaced: Vec<usize> = commas
        .iter()
        .copied()
        .filter(|&i| {
            let b = inner.as_bytes();
            (i > 0 && b[i - 1].is_ascii_whitespace()) || b.get(i + 1).is_some_and(|c| c.is_ascii_whitespace())
        })
        .collect();
    let nested: Vec<usize> = commas
        .iter()
        .copied()
        .filter(|&i| {
            let (l, r) = at(i);
            l.ends_with(')') || r.starts_with(|c: char| c.is_ascii_alphabetic())
        })
        .collect();
    let descents: Vec<usize> = commas
        .iter()
        .copied()
        .filter(|&i| {
            let (l, r) = at(i);
            if is_call(l) || is_call(r) {
                return false;
            }
            let last = l.rsplit([',', ';']).next().and_then(entry_index);
            let first = r.split([',', ';']).next().and_then(entry_index);
            matches!((last, first), (Some(a), Some(b)) if b <= a)
        })
        .collect();

    let chosen = if !spaced.is_empty() {
        pick(spaced)
    } else if !nested.is_empty() {
        pick(nested)
    } else if !descents.is_empty() {
        pick(descents)
    } else if concat {
        commas.first().copied()
    } else {
        None
    };
    let i = chosen.ok_or_else(|| {
        parse_err(format!(
            "cannot tell where the arguments of `({inner})` split; put spaces around the separating comma"
        ))
    })?;
    Ok(at(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(s: &str) -> String {
        eval(s).unwrap().to_string()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(show("S(0:2,2:-1)"), "0:2");
        assert_eq!(show("psi1(0:4,1:3,2:-2)"), "0:1");
        assert_eq!(show("dist(0:2 , 0:2,2:-1)"), "1");
    }

    #[test]
    fn argument_splitting() {
        assert_eq!(show("dist(0:2,1:1,0:1)"), "1");
        assert_eq!(show("dist(T(0:2),0:1)"), "0");
        assert_eq!(show("add(0:2,1:-1,3:1)"), "0:2,1:-1,3:1");
        assert_eq!(show("add(neg(0:1), S(1:2,2:1))"), "0:-1,1:2");
        assert_eq!(eval("dist(0:1,1:1,2:1)").unwrap_err().name(), "ParseError");
    }

    #[test]
    fn sequences_map_blockwise() {
        assert_eq!(show("T(0:2;1:-2,2:1)"), "0:1;1:-1");
        assert_eq!(show("phi1(0:2;1:-2)"), "0:1;1:-1");
        assert_eq!(eval("T(0:1;1:2)").unwrap_err().name(), "DegenerateBlock");
        assert_eq!(show("dist(0:2;1:2 , 0:1;1:2)"), "1");
    }

    #[test]
    fn combine_splits_at_last_semicolon() {
        assert_eq!(show("combine(0:2;1:2; PM|0:+:0,1:-:1)"), "0:2,1:-1");
        assert_eq!(show("combine(0:2;1:2; NT|0:1,1:0)"), "0:-1,1:2");
    }

    #[test]
    fn errors_keep_module_names() {
        assert_eq!(eval("add(1:1 , 0:1)").unwrap_err().name(), "BlockOrderViolation");
        assert_eq!(eval("phi1(0:3)").unwrap_err().name(), "AmplitudeMismatch");
        assert_eq!(eval("foo(0:1)").unwrap_err().name(), "ParseError");
        assert_eq!(eval("T(0:1").unwrap_err().name(), "ParseError");
        assert_eq!(eval("phix(0:1)").unwrap_err().name(), "ParseError");
    }
}
