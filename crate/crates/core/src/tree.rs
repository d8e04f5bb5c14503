//! Finite-depth trees of block sequences.
//!
//! A [`FiniteBlockTree`] is a downward closed set of finite block sequences
//! rooted at the empty sequence. Each node `t` has a successor set `U_t` of
//! blocks `p` with `(t, p)` in the tree; every successor lies strictly after
//! the last block of `t`. Nodes are stored in an arena and addressed by
//! [`NodeId`]; the root is [`FiniteBlockTree::ROOT`].

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{FinError, Result};
use crate::seq::BlockSeq;
use crate::vector::FinVec;

pub type NodeId = usize;

#[derive(Clone, Debug)]
struct Node {
    parent: Option<NodeId>,
    block: Option<FinVec>,
    level: usize,
    children: BTreeMap<FinVec, NodeId>,
}

#[derive(Clone, Debug)]
pub struct FiniteBlockTree {
    k: u32,
    depth: usize,
    nodes: Vec<Node>,
}

impl FiniteBlockTree {
    pub const ROOT: NodeId = 0;

    /// A tree holding only the empty sequence.
    pub fn new(k: u32, depth: usize) -> Self {
        FiniteBlockTree {
            k: k.max(1),
            depth,
            nodes: vec![Node { parent: None, block: None, level: 0, children: BTreeMap::new() }],
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Number of nodes, the root included.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes[Self::ROOT].children.is_empty()
    }

    pub fn node_ids(&self) -> std::ops::Range<NodeId> {
        0..self.nodes.len()
    }

    pub fn level(&self, id: NodeId) -> usize {
        self.nodes[id].level
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id].parent
    }

    /// The last block of the node, `None` for the root.
    pub fn block(&self, id: NodeId) -> Option<&FinVec> {
        self.nodes[id].block.as_ref()
    }

    /// `U_t` in canonical order.
    pub fn succ(&self, id: NodeId) -> impl Iterator<Item = &FinVec> {
        self.nodes[id].children.keys()
    }

    pub fn succ_len(&self, id: NodeId) -> usize {
        self.nodes[id].children.len()
    }

    pub fn children(&self, id: NodeId) -> impl Iterator<Item = (&FinVec, NodeId)> {
        self.nodes[id].children.iter().map(|(b, &c)| (b, c))
    }

    /// The child `(t, block)` of `id`, if present. kBounds are ignored.
    pub fn child(&self, id: NodeId, block: &FinVec) -> Option<NodeId> {
        let children = &self.nodes[id].children;
        if block.k() == self.k {
            return children.get(block).copied();
        }
        block.with_k(self.k).ok().and_then(|b| children.get(&b).copied())
    }

    /// Adds `(t, block)` below `parent`, returning the existing node if it is
    /// already present.
    pub fn add_child(&mut self, parent: NodeId, block: FinVec) -> Result<NodeId> {
        let level = self.nodes[parent].level;
        if level >= self.depth {
            return Err(FinError::DepthExceeded(format!(
                "cannot extend a level-{level} node in a depth-{} tree",
                self.depth
            )));
        }
        if block.is_zero() {
            return Err(FinError::DegenerateBlock("tree blocks must be nonzero".into()));
        }
        if let Some(last) = &self.nodes[parent].block {
            if !last.precedes(&block) {
                return Err(FinError::BlockOrderViolation(format!("{block} does not extend a node ending in {last}")));
            }
        }
        let block = if block.k() == self.k { block } else { block.with_k(self.k)? };
        if let Some(&id) = self.nodes[parent].children.get(&block) {
            return Ok(id);
        }
        let id = self.nodes.len();
        self.nodes[parent].children.insert(block.clone(), id);
        self.nodes.push(Node { parent: Some(parent), block: Some(block), level: level + 1, children: BTreeMap::new() });
        Ok(id)
    }

    /// Inserts every prefix of `path`.
    pub fn insert_path(&mut self, path: &BlockSeq) -> Result<NodeId> {
        let mut id = Self::ROOT;
        for b in path {
            id = self.add_child(id, b.clone())?;
        }
        Ok(id)
    }

    /// The node spelling out `path`, if it is in the tree.
    pub fn find(&self, path: &BlockSeq) -> Option<NodeId> {
        let mut id = Self::ROOT;
        for b in path {
            id = self.child(id, b)?;
        }
        Some(id)
    }

    /// The block sequence from the root to `id`.
    pub fn path(&self, id: NodeId) -> BlockSeq {
        let mut blocks = Vec::with_capacity(self.nodes[id].level);
        let mut cur = id;
        while let Some(b) = &self.nodes[cur].block {
            blocks.push(b.clone());
            cur = self.nodes[cur].parent.expect("non-root nodes have parents");
        }
        blocks.reverse();
        BlockSeq::new(self.k, blocks).expect("tree paths are block sequences")
    }

    pub fn nodes_at_level(&self, level: usize) -> Vec<NodeId> {
        self.node_ids().filter(|&id| self.nodes[id].level == level).collect()
    }

    /// `stem(U)`: the longest node comparable with every other node.
    pub fn stem(&self) -> BlockSeq {
        let mut id = Self::ROOT;
        while self.nodes[id].children.len() == 1 {
            id = *self.nodes[id].children.values().next().unwrap();
        }
        self.path(id)
    }

    /// Checks structural invariants: a nonempty root successor set, levels
    /// within depth, and blockwise extension along every edge. Nodes below
    /// the full depth may be leaves.
    pub fn validate(&self) -> Result<()> {
        if self.is_empty() && self.depth > 0 {
            return Err(FinError::EmptyTree("the root has no successors".into()));
        }
        for id in self.node_ids() {
            let node = &self.nodes[id];
            if node.level > self.depth {
                return Err(FinError::DepthExceeded(format!("node at level {}", node.level)));
            }
            for (b, &c) in &node.children {
                if let Some(last) = &node.block {
                    if !last.precedes(b) {
                        return Err(FinError::BlockOrderViolation(format!("{b} after {last}")));
                    }
                }
                if self.nodes[c].parent != Some(id) || self.nodes[c].level != node.level + 1 {
                    return Err(FinError::InvalidParams("inconsistent tree arena".into()));
                }
            }
        }
        Ok(())
    }

    /// The first `(t, p)` in the tree whose weak tetris `(t, S(p))` is
    /// missing, or `None` if the tree is S-closed.
    pub fn s_closure_gap(&self) -> Option<(BlockSeq, FinVec)> {
        for id in self.node_ids() {
            for b in self.succ(id) {
                let s = b.weak_tetris();
                if !s.is_zero() && self.child(id, &s).is_none() {
                    return Some((self.path(id), b.clone()));
                }
            }
        }
        None
    }

    pub fn is_s_closed(&self) -> bool {
        self.s_closure_gap().is_none()
    }

    fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![Self::ROOT];
        while let Some(id) = stack.pop() {
            out.push(id);
            stack.extend(self.nodes[id].children.values().rev().copied());
        }
        out
    }

    /// Line-oriented form: a `depth=<d> k=<k>` header, then one
    /// `level|parent-path|block` line per non-root node in canonical
    /// preorder. The parent path is a block-sequence literal (empty for
    /// children of the root).
    pub fn to_text(&self) -> String {
        let mut out = format!("depth={} k={}\n", self.depth, self.k);
        for id in self.preorder().into_iter().skip(1) {
            let node = &self.nodes[id];
            let parent = self.path(node.parent.unwrap());
            out.push_str(&format!("{}|{}|{}\n", node.level, parent, node.block.as_ref().unwrap()));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| FinError::ParseError("empty tree text".into()))?;
        let mut depth = None;
        let mut k = None;
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("depth", d)) => depth = d.parse().ok(),
                Some(("k", x)) => k = x.parse().ok(),
                _ => return Err(FinError::ParseError(format!("bad tree header `{header}`"))),
            }
        }
        let (Some(depth), Some(k)) = (depth, k) else {
            return Err(FinError::ParseError(format!("bad tree header `{header}`")));
        };
        let mut tree = FiniteBlockTree::new(k, depth);
        for line in lines {
            let mut parts = line.splitn(3, '|');
            let (Some(level), Some(parent), Some(block)) = (parts.next(), parts.next(), parts.next()) else {
                return Err(FinError::ParseError(format!("bad tree line `{line}`")));
            };
            let level: usize =
                level.trim().parse().map_err(|_| FinError::ParseError(format!("bad level in `{line}`")))?;
            let parent: BlockSeq = parent.parse()?;
            if parent.len() + 1 != level {
                return Err(FinError::ParseError(format!("level does not match parent path in `{line}`")));
            }
            let pid = tree
                .find(&parent)
                .ok_or_else(|| FinError::ParseError(format!("parent of `{line}` not declared earlier")))?;
            let block: FinVec = block.parse()?;
            tree.add_child(pid, block.with_k(k)?)?;
        }
        Ok(tree)
    }
}

impl fmt::Display for FiniteBlockTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
