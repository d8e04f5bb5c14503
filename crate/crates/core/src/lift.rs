//! Lifting from amplitude `k` to `4k` along the section `×4` of `Ψ`.

use crate::coloring::Coloring;
use crate::error::{FinError, Result};
use crate::seq::BlockSeq;
use crate::span::{Combo, Mode, Term};
use crate::vector::FinVec;

/// Every value times 4; kBound times 4. `Ψ_k(scale4(v)) = v`.
pub fn scale4(v: &FinVec) -> FinVec {
    FinVec::from_raw(v.entries().iter().map(|&(n, x)| (n, 4 * x)).collect(), 4 * v.k())
}

/// Element-wise [`scale4`]; supports, and hence block order, are unchanged.
pub fn lift_block(p: &BlockSeq) -> BlockSeq {
    let blocks = p.iter().map(scale4).collect();
    BlockSeq::new(4 * p.k(), blocks).expect("scaling preserves block order")
}

/// Levels `j ↦ 4j`, so that `Ψ_k ∘ combine(lift_block(P), ·)` agrees with
/// `combine(P, ·)`.
pub fn lift_combo(c: &Combo, k: u32) -> Result<Combo> {
    if c.mode() != Mode::Pm {
        return Err(FinError::InvalidCombo("lift_combo expects a PM combo".into()));
    }
    if let Some(t) = c.terms().iter().find(|t| t.level >= k) {
        return Err(FinError::InvalidCombo(format!("level {} is not below k = {k}", t.level)));
    }
    Combo::new(Mode::Pm, c.terms().iter().map(|t| Term::new(t.index, t.sign, 4 * t.level)).collect())
}

/// `c̃ := c ∘ Ψ_k` on amplitude-`4k` tuples.
pub fn pushforward_coloring(c: Coloring, k: u32) -> Coloring {
    Coloring::pushforward(c, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::Rule;
    use crate::span::combine;

    #[test]
    fn scale4_examples() {
        let v: FinVec = "0:1".parse().unwrap();
        assert_eq!(scale4(&v).to_string(), "0:4");
        assert!(scale4(&v).psi(1).unwrap().same_values(&v));
        assert!(scale4(&FinVec::zero(1)).is_zero());
        let v: FinVec = "0:2,3:-1".parse().unwrap();
        let s = scale4(&v);
        assert_eq!(s.to_string(), "0:8,3:-4");
        assert_eq!(s.k(), 8);
        assert!(s.psi(2).unwrap().same_values(&v));
    }

    #[test]
    fn lift_examples() {
        let p: BlockSeq = "0:1;1:1".parse().unwrap();
        assert_eq!(lift_block(&p).to_string(), "0:4;1:4");

        let c = Combo::pm(&[(0, 1, 0)]).unwrap();
        assert_eq!(lift_combo(&c, 2).unwrap(), c);

        let p: BlockSeq = "0:2;1:2".parse().unwrap();
        let c = Combo::pm(&[(0, 1, 0), (1, -1, 1)]).unwrap();
        let lc = lift_combo(&c, 2).unwrap();
        assert_eq!(lc.terms().iter().map(|t| t.level).collect::<Vec<_>>(), [0, 4]);
        let lhs = combine(&lift_block(&p), &lc).unwrap().psi(2).unwrap();
        assert!(lhs.same_values(&combine(&p, &c).unwrap()));

        assert_eq!(lift_combo(&Combo::pm(&[(0, 1, 0), (1, 1, 2)]).unwrap(), 2).unwrap_err().name(), "InvalidCombo");
    }

    #[test]
    fn pushforward_examples() {
        let c = pushforward_coloring(Coloring::rule(Rule::Const(0), 1).unwrap(), 2);
        assert_eq!(c.color(&["0:7".parse().unwrap()]).unwrap(), 0);
        assert_eq!(c.colors(), 1);
        let base = Coloring::rule(Rule::SuppParity(2), 1).unwrap();
        let c = pushforward_coloring(base.clone(), 2);
        let v: FinVec = "0:2,2:-1".parse().unwrap();
        assert_eq!(c.color(&[scale4(&v)]).unwrap(), base.color(&[v]).unwrap());
    }
}
