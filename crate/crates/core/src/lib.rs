//! Finite combinatorics of the spaces FIN_±k.
//!
//! The crate covers the partial semigroup algebra of finitely supported
//! integer vectors ([`vector`], [`seq`]), the spans generated by block
//! sequences ([`span`]), the S-closure and rewriting constructions on finite
//! trees ([`tree`], [`rewrite`]), the amplitude-reducing map Ψ and its
//! sections ([`lift`]), and a witness search for colourings ([`coloring`],
//! [`search`], [`scan`]). [`selftest`] bundles the invariant suites.

pub mod coloring;
pub mod error;
pub mod lift;
pub mod rewrite;
pub mod scan;
pub mod search;
pub mod selftest;
pub mod seq;
pub mod span;
pub mod tree;
pub mod vector;

pub use error::{FinError, Result};
pub use seq::BlockSeq;
pub use span::{Combo, Mode, Sign, Term};
pub use vector::FinVec;
