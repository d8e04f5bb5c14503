//! Finite block sequences in FIN_±k.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{FinError, Result};
use crate::vector::FinVec;

/// A finite block sequence `P = (p_0, …, p_{m−1})`: nonzero blocks with
/// `max supp p_i < min supp p_{i+1}`, all carrying the same kBound.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockSeq {
    k: u32,
    blocks: Vec<FinVec>,
}

impl BlockSeq {
    /// Validates order and nonzero blocks; every block is rebased to `k`.
    pub fn new(k: u32, blocks: Vec<FinVec>) -> Result<Self> {
        if k == 0 {
            return Err(FinError::AmplitudeMismatch("kBound must be positive".into()));
        }
        let mut rebased = Vec::with_capacity(blocks.len());
        for (i, b) in blocks.into_iter().enumerate() {
            if b.is_zero() {
                return Err(FinError::DegenerateBlock(format!("block {i} is the zero vector")));
            }
            if let Some(prev) = rebased.last() {
                let prev: &FinVec = prev;
                if !prev.precedes(&b) {
                    return Err(FinError::BlockOrderViolation(format!(
                        "block {} ({prev}) does not precede block {i} ({b})",
                        i - 1
                    )));
                }
            }
            rebased.push(if b.k() == k { b } else { b.with_k(k)? });
        }
        Ok(BlockSeq { k, blocks: rebased })
    }

    /// kBound taken as the largest block bound.
    pub fn from_blocks(blocks: Vec<FinVec>) -> Result<Self> {
        let k = blocks.iter().map(FinVec::k).max().unwrap_or(1);
        BlockSeq::new(k, blocks)
    }

    pub fn empty(k: u32) -> Self {
        BlockSeq { k: k.max(1), blocks: Vec::new() }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn blocks(&self) -> &[FinVec] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<FinVec> {
        self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&FinVec> {
        self.blocks.get(i)
    }

    pub fn last(&self) -> Option<&FinVec> {
        self.blocks.last()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, FinVec> {
        self.blocks.iter()
    }

    /// Appends a block, checking that it extends the sequence.
    pub fn push(&mut self, block: FinVec) -> Result<()> {
        if block.is_zero() {
            return Err(FinError::DegenerateBlock("cannot append the zero vector".into()));
        }
        if let Some(last) = self.blocks.last() {
            if !last.precedes(&block) {
                return Err(FinError::BlockOrderViolation(format!(
                    "{block} does not extend a sequence ending in {last}"
                )));
            }
        }
        let block = if block.k() == self.k { block } else { block.with_k(self.k)? };
        self.blocks.push(block);
        Ok(())
    }

    /// `r_n(P)`: the first `n` blocks.
    pub fn restrict(&self, n: usize) -> Result<BlockSeq> {
        if n > self.len() {
            return Err(FinError::LengthMismatch(format!(
                "cannot restrict a length-{} sequence to {n} blocks",
                self.len()
            )));
        }
        Ok(BlockSeq { k: self.k, blocks: self.blocks[..n].to_vec() })
    }

    /// The blocks from index `start` on, as a sequence.
    pub fn tail(&self, start: usize) -> BlockSeq {
        let start = start.min(self.len());
        BlockSeq { k: self.k, blocks: self.blocks[start..].to_vec() }
    }

    /// `||P − Q|| = max_n ||p_n − q_n||`.
    pub fn dist(&self, other: &BlockSeq) -> Result<u32> {
        if self.len() != other.len() {
            return Err(FinError::LengthMismatch(format!("lengths {} and {} differ", self.len(), other.len())));
        }
        Ok(self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.dist(b)).max().unwrap_or(0))
    }

    /// Element-wise image under `op`. The result is revalidated; a block
    /// that vanishes raises `DegenerateBlock`.
    pub fn map<F>(&self, op: F) -> Result<BlockSeq>
    where
        F: Fn(&FinVec) -> Result<FinVec>,
    {
        let mut out = Vec::with_capacity(self.len());
        for (i, b) in self.blocks.iter().enumerate() {
            let image = op(b)?;
            if image.is_zero() {
                return Err(FinError::DegenerateBlock(format!("block {i} ({b}) maps to zero")));
            }
            out.push(image);
        }
        BlockSeq::from_blocks(out)
    }

    /// `T^(j)(P)`.
    pub fn tetris_pow(&self, j: u32) -> Result<BlockSeq> {
        self.map(|b| Ok(b.tetris_pow(j)))
    }

    /// `S` applied blockwise.
    pub fn weak_tetris(&self) -> Result<BlockSeq> {
        self.map(|b| Ok(b.weak_tetris()))
    }

    /// `Ψ(P) = (Ψ(p_n))`.
    pub fn psi(&self, k: u32) -> Result<BlockSeq> {
        self.map(|b| b.psi(k))
    }

    /// `∪t`: the sum of all blocks.
    pub fn union(&self) -> FinVec {
        FinVec::sum_ordered(self.k, &self.blocks).expect("blocks of a BlockSeq are ordered")
    }
}

impl Ord for BlockSeq {
    fn cmp(&self, other: &Self) -> Ordering {
        self.blocks.cmp(&other.blocks).then(self.k.cmp(&other.k))
    }
}

impl PartialOrd for BlockSeq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BlockSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Vector literals joined by `;`. kBound is the largest magnitude over all
/// blocks. The empty string (or `()`) is the empty sequence.
impl FromStr for BlockSeq {
    type Err = FinError;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim();
        if body.is_empty() || body == "()" {
            return Ok(BlockSeq::empty(1));
        }
        let blocks = body.split(';').map(str::parse).collect::<Result<Vec<FinVec>>>()?;
        let k = blocks.iter().map(FinVec::amplitude).max().unwrap_or(1).max(1);
        BlockSeq::new(k, blocks)
    }
}

impl<'a> IntoIterator for &'a BlockSeq {
    type Item = &'a FinVec;
    type IntoIter = std::slice::Iter<'a, FinVec>;

    fn into_iter(self) -> Self::IntoIter {
        self.blocks.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> BlockSeq {
        s.parse().unwrap()
    }

    #[test]
    fn restrict_prefix() {
        let p = seq("0:2;1:2;2:2");
        assert_eq!(p.restrict(2).unwrap(), seq("0:2;1:2"));
        assert_eq!(p.restrict(0).unwrap().len(), 0);
        assert_eq!(p.restrict(4).unwrap_err().name(), "LengthMismatch");
    }

    #[test]
    fn seq_dist() {
        let p = seq("0:2;1:2");
        assert_eq!(p.dist(&p).unwrap(), 0);
        assert_eq!(p.dist(&seq("0:2;1:1")).unwrap(), 1);
        assert_eq!(p.dist(&seq("0:2")).unwrap_err().name(), "LengthMismatch");
    }

    #[test]
    fn map_degenerate() {
        let p = seq("0:1;2:1");
        assert_eq!(p.tetris_pow(1).unwrap_err().name(), "DegenerateBlock");
        let q = seq("0:2,1:1;2:-2").tetris_pow(1).unwrap();
        assert_eq!(q, seq("0:1;2:-1"));
        assert_eq!(q.k(), 1);
    }

    #[test]
    fn construction_checks() {
        assert_eq!("1:1;0:1".parse::<BlockSeq>().unwrap_err().name(), "BlockOrderViolation");
        assert_eq!("0:1;{}".parse::<BlockSeq>().unwrap_err().name(), "DegenerateBlock");
        let p = seq("0:1;1:-2");
        assert_eq!(p.k(), 2);
        assert!(p.blocks().iter().all(|b| b.k() == 2));
        assert_eq!(p.to_string(), "0:1;1:-2");
        assert_eq!(p.union().to_string(), "0:1,1:-2");
    }

    #[test]
    fn push_extends() {
        let mut p = seq("0:2");
        p.push("2:1".parse().unwrap()).unwrap();
        assert_eq!(p.to_string(), "0:2;2:1");
        assert!(p.push("1:1".parse().unwrap()).is_err());
    }
}
