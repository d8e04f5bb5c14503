//! Finitely supported integer vectors with an amplitude bound.
//!
//! A [`FinVec`] stores its nonzero coordinates as `(index, value)` pairs in
//! strictly ascending index order, together with the bound `k` on `|value|`.
//! Membership in FIN_±k additionally requires that some coordinate reaches
//! `±k`; that is reported by [`FinVec::attains`] rather than enforced, since
//! the tetris-type maps legitimately produce non-attaining or zero vectors.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{FinError, Result};

/// An element `p` of FIN_±k (or a zero / non-attaining vector, flagged by
/// [`FinVec::is_zero`] and [`FinVec::attains`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinVec {
    entries: Vec<(u32, i32)>,
    k: u32,
}

impl FinVec {
    /// Builds a vector from `(index, value)` pairs.
    ///
    /// Entries must be strictly ascending by index, values nonzero and
    /// bounded by `k` in absolute value.
    pub fn new(entries: Vec<(u32, i32)>, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(FinError::AmplitudeMismatch("kBound must be positive".into()));
        }
        for w in entries.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(FinError::ParseError(format!("entries not strictly ascending at index {}", w[1].0)));
            }
        }
        for &(n, v) in &entries {
            if v == 0 {
                return Err(FinError::ParseError(format!("stored value at index {n} is 0")));
            }
            if v.unsigned_abs() > k {
                return Err(FinError::AmplitudeMismatch(format!("|{v}| at index {n} exceeds kBound {k}")));
            }
        }
        Ok(FinVec { entries, k })
    }

    /// Like [`FinVec::new`] with `k` set to the largest magnitude present
    /// (1 for the zero vector).
    pub fn from_entries(entries: Vec<(u32, i32)>) -> Result<Self> {
        let k = entries.iter().map(|&(_, v)| v.unsigned_abs()).max().unwrap_or(1).max(1);
        FinVec::new(entries, k)
    }

    /// Dense constructor: coordinate `n` takes `values[n]`; zeros are skipped.
    pub fn from_dense(values: &[i32], k: u32) -> Result<Self> {
        let entries = values.iter().enumerate().filter(|(_, &v)| v != 0).map(|(n, &v)| (n as u32, v)).collect();
        FinVec::new(entries, k)
    }

    pub fn zero(k: u32) -> Self {
        FinVec { entries: Vec::new(), k: k.max(1) }
    }

    // Internal constructor for entry lists already known to be valid.
    pub(crate) fn from_raw(entries: Vec<(u32, i32)>, k: u32) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|&(_, v)| v != 0 && v.unsigned_abs() <= k));
        FinVec { entries, k }
    }

    pub fn entries(&self) -> &[(u32, i32)] {
        &self.entries
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of nonzero coordinates.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Value at coordinate `n`.
    pub fn get(&self, n: u32) -> i32 {
        match self.entries.binary_search_by_key(&n, |&(i, _)| i) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0,
        }
    }

    /// `supp v`, in ascending order.
    pub fn support(&self) -> Vec<u32> {
        self.entries.iter().map(|&(n, _)| n).collect()
    }

    pub fn min_support(&self) -> Option<u32> {
        self.entries.first().map(|&(n, _)| n)
    }

    pub fn max_support(&self) -> Option<u32> {
        self.entries.last().map(|&(n, _)| n)
    }

    /// `||v||`, the largest magnitude (0 for the zero vector).
    pub fn amplitude(&self) -> u32 {
        self.entries.iter().map(|&(_, v)| v.unsigned_abs()).max().unwrap_or(0)
    }

    /// Whether some coordinate reaches `±k`, i.e. strict FIN_±k membership.
    pub fn attains(&self) -> bool {
        self.amplitude() == self.k
    }

    /// Whether every value is nonnegative (the signless FIN_k setting).
    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|&(_, v)| v > 0)
    }

    /// Same values, different bound. Fails if some value exceeds `k`.
    pub fn with_k(&self, k: u32) -> Result<Self> {
        FinVec::new(self.entries.clone(), k)
    }

    /// Whether `supp self ⊆ supp other`.
    pub fn support_within(&self, other: &FinVec) -> bool {
        let mut it = other.entries.iter().map(|&(n, _)| n).peekable();
        'outer: for &(n, _) in &self.entries {
            while let Some(&m) = it.peek() {
                match m.cmp(&n) {
                    Ordering::Less => {
                        it.next();
                    }
                    Ordering::Equal => {
                        it.next();
                        continue 'outer;
                    }
                    Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    /// `p < q`: `max supp p < min supp q`. False if either side is zero.
    pub fn precedes(&self, other: &FinVec) -> bool {
        match (self.max_support(), other.min_support()) {
            (Some(a), Some(b)) => a < b,
            _ => false,
        }
    }

    /// ℓ∞ distance `||u − v||` as integer vectors; kBounds are ignored.
    pub fn dist(&self, other: &FinVec) -> u32 {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        let mut best = 0u32;
        while i < a.len() || j < b.len() {
            let d = match (a.get(i), b.get(j)) {
                (Some(&(n, x)), Some(&(m, y))) => match n.cmp(&m) {
                    Ordering::Less => {
                        i += 1;
                        x.unsigned_abs()
                    }
                    Ordering::Greater => {
                        j += 1;
                        y.unsigned_abs()
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (x - y).unsigned_abs()
                    }
                },
                (Some(&(_, x)), None) => {
                    i += 1;
                    x.unsigned_abs()
                }
                (None, Some(&(_, y))) => {
                    j += 1;
                    y.unsigned_abs()
                }
                (None, None) => unreachable!(),
            };
            best = best.max(d);
        }
        best
    }

    /// `u + v`, defined only for `u < v`. The result's bound is the larger
    /// of the two bounds.
    pub fn add(&self, other: &FinVec) -> Result<FinVec> {
        if !self.precedes(other) {
            return Err(FinError::BlockOrderViolation(format!("add requires max supp({self}) < min supp({other})")));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(FinVec::from_raw(entries, self.k.max(other.k)))
    }

    /// Sum of block-ordered parts, skipping zero parts. Nonzero parts must
    /// be pairwise `<` in the order given.
    pub fn sum_ordered<'a, I>(k: u32, parts: I) -> Result<FinVec>
    where
        I: IntoIterator<Item = &'a FinVec>,
    {
        let mut entries: Vec<(u32, i32)> = Vec::new();
        for part in parts {
            if part.is_zero() {
                continue;
            }
            if let (Some(&(last, _)), Some(first)) = (entries.last(), part.min_support()) {
                if last >= first {
                    return Err(FinError::BlockOrderViolation(format!("summand {part} does not follow index {last}")));
                }
            }
            if part.amplitude() > k {
                return Err(FinError::AmplitudeMismatch(format!("summand {part} exceeds kBound {k}")));
            }
            entries.extend_from_slice(&part.entries);
        }
        Ok(FinVec::from_raw(entries, k.max(1)))
    }

    fn map_values(&self, k: u32, f: impl Fn(i32) -> i32) -> FinVec {
        let entries = self
            .entries
            .iter()
            .filter_map(|&(n, v)| {
                let w = f(v);
                (w != 0).then_some((n, w))
            })
            .collect();
        FinVec::from_raw(entries, k)
    }

    /// The tetris operation `T`: every value moves one step toward 0.
    pub fn tetris(&self) -> FinVec {
        self.tetris_pow(1)
    }

    /// `T^j`; `j = 0` is the identity.
    pub fn tetris_pow(&self, j: u32) -> FinVec {
        if j == 0 {
            return self.clone();
        }
        let j = j.min(i32::MAX as u32) as i32;
        let k = self.k.saturating_sub(j as u32).max(1);
        self.map_values(k, |v| if v > 0 { (v - j).max(0) } else { (v + j).min(0) })
    }

    /// `−v`.
    pub fn neg(&self) -> FinVec {
        self.map_values(self.k, |v| -v)
    }

    /// `−T(v)`.
    pub fn neg_tetris(&self) -> FinVec {
        self.tetris().neg()
    }

    /// `(−T)^j(v)`, which is `T^j(v)` for even `j` and `−T^j(v)` for odd `j`.
    pub fn neg_tetris_pow(&self, j: u32) -> FinVec {
        let t = self.tetris_pow(j);
        if j.is_multiple_of(2) {
            t
        } else {
            t.neg()
        }
    }

    /// The weak tetris operation `S`: values of magnitude 1 are zeroed.
    pub fn weak_tetris(&self) -> FinVec {
        self.map_values(self.k, |v| if v.abs() == 1 { 0 } else { v })
    }

    /// `Φ_m : FIN_±2m → FIN_±m`, halving with truncation toward zero.
    pub fn phi(&self, m: u32) -> Result<FinVec> {
        if m == 0 {
            return Err(FinError::AmplitudeMismatch("phi requires m ≥ 1".into()));
        }
        if self.amplitude() > 2 * m {
            return Err(FinError::AmplitudeMismatch(format!(
                "phi{m} needs |values| ≤ {}, got {}",
                2 * m,
                self.amplitude()
            )));
        }
        // Rust's `/` truncates toward zero, which is exactly the three-case
        // rule: v/2 for even v, (v−1)/2 for odd v > 0, (v+1)/2 for odd v < 0.
        Ok(self.map_values(m, |v| v / 2))
    }

    /// `Ψ = Φ_k ∘ Φ_2k : FIN_±4k → FIN_±k`.
    pub fn psi(&self, k: u32) -> Result<FinVec> {
        if k == 0 {
            return Err(FinError::AmplitudeMismatch("psi requires k ≥ 1".into()));
        }
        if self.amplitude() > 4 * k {
            return Err(FinError::AmplitudeMismatch(format!(
                "psi{k} needs |values| ≤ {}, got {}",
                4 * k,
                self.amplitude()
            )));
        }
        self.phi(2 * k)?.phi(k)
    }

    /// Restriction of `self` to the coordinates of `supp mask`.
    pub fn restrict_to_support(&self, mask: &FinVec) -> FinVec {
        let entries = self.entries.iter().filter(|&&(n, _)| mask.get(n) != 0).copied().collect();
        FinVec::from_raw(entries, self.k)
    }

    /// Whether the two vectors agree as integer vectors, regardless of kBound.
    pub fn same_values(&self, other: &FinVec) -> bool {
        self.entries == other.entries
    }
}

/// Canonical total order: entry lists compared lexicographically by
/// `(index, value)`, then kBound.
impl Ord for FinVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.entries.cmp(&other.entries).then(self.k.cmp(&other.k))
    }
}

impl PartialOrd for FinVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FinVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("{}");
        }
        for (i, (n, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}:{v}")?;
        }
        Ok(())
    }
}

/// Parses `index:value` pairs separated by commas; `{}` or the empty string
/// is the zero vector. Surrounding braces are accepted. kBound is inferred
/// as the largest magnitude.
impl FromStr for FinVec {
    type Err = FinError;

    fn from_str(s: &str) -> Result<Self> {
        let mut body = s.trim();
        if let Some(inner) = body.strip_prefix('{').and_then(|b| b.strip_suffix('}')) {
            body = inner.trim();
        }
        if body.is_empty() {
            return Ok(FinVec::zero(1));
        }
        let mut entries = Vec::new();
        for pair in body.split(',') {
            let pair = pair.trim();
            let (n, v) = pair
                .split_once(':')
                .ok_or_else(|| FinError::ParseError(format!("expected index:value, got `{pair}`")))?;
            let n: u32 = n.trim().parse().map_err(|_| FinError::ParseError(format!("bad index in `{pair}`")))?;
            let v: i32 = v.trim().parse().map_err(|_| FinError::ParseError(format!("bad value in `{pair}`")))?;
            entries.push((n, v));
        }
        FinVec::from_entries(entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> FinVec {
        s.parse().unwrap()
    }

    #[test]
    fn support_examples() {
        assert!(v("{}").support().is_empty());
        assert_eq!(v("0:2,2:-1").support(), vec![0, 2]);
        assert_eq!(v("5:-3").support(), vec![5]);
    }

    #[test]
    fn dist_examples() {
        assert_eq!(v("0:2").dist(&v("0:2")), 0);
        assert_eq!(v("0:2,2:-1").dist(&v("0:2")), 1);
        // |4 − 0| at 0, |3 − (−1)| at 1
        assert_eq!(v("0:4,1:3").dist(&v("1:-1")), 4);
    }

    #[test]
    fn add_examples() {
        assert_eq!(v("0:2").add(&v("3:-2")).unwrap(), v("0:2,3:-2"));
        assert_eq!(v("{}").add(&v("1:1")).unwrap_err().name(), "BlockOrderViolation");
        assert_eq!(v("1:1").add(&v("0:2")).unwrap_err().name(), "BlockOrderViolation");
        // interleaved supports are rejected too
        assert!(v("0:1,2:1").add(&v("1:1")).is_err());
    }

    #[test]
    fn tetris_examples() {
        assert!(v("0:2,2:-1").tetris().same_values(&v("0:1")));
        assert!(v("0:1,1:-1").tetris().is_zero());
        let t = v("0:4,1:-3,2:1").tetris();
        assert!(t.same_values(&v("0:3,1:-2")));
        assert_eq!(t.k(), 3);
        assert_eq!(v("0:1").tetris().k(), 1);
    }

    #[test]
    fn neg_and_powers() {
        assert_eq!(v("0:2,1:-1").neg(), v("0:-2,1:1"));
        assert!(v("0:3").tetris_pow(3).is_zero());
        assert!(v("0:2").neg_tetris().neg_tetris().is_zero());
        assert_eq!(v("0:3").neg_tetris().neg_tetris(), v("0:3").tetris_pow(2));
        assert_eq!(v("0:3,1:1").tetris_pow(0), v("0:3,1:1"));
    }

    #[test]
    fn weak_tetris_examples() {
        assert!(v("0:2,2:-1").weak_tetris().same_values(&v("0:2")));
        assert!(v("0:1,1:-1").weak_tetris().is_zero());
        let x = v("0:3,1:1,2:-2");
        let s = x.weak_tetris();
        assert!(s.same_values(&v("0:3,2:-2")));
        assert_eq!(s.weak_tetris(), s);
    }

    #[test]
    fn phi_examples() {
        assert!(v("0:2,1:1,3:-2").phi(1).unwrap().same_values(&v("0:1,3:-1")));
        assert!(v("{}").phi(3).unwrap().is_zero());
        let r = v("0:4,1:3,2:-2").phi(2).unwrap();
        assert!(r.same_values(&v("0:2,1:1,2:-1")));
        assert_eq!(r.k(), 2);
        assert_eq!(v("0:5").phi(2).unwrap_err().name(), "AmplitudeMismatch");
        // odd negatives round toward zero
        assert!(v("0:-3").phi(2).unwrap().same_values(&v("0:-1")));
    }

    #[test]
    fn psi_examples() {
        assert!(v("0:4,1:3,2:-2").psi(1).unwrap().same_values(&v("0:1")));
        assert!(v("0:4,1:4").psi(1).unwrap().same_values(&v("0:1,1:1")));
        assert!(v("0:1,3:-1,4:1").with_k(4).unwrap().psi(1).unwrap().is_zero());
        assert_eq!(v("0:5").psi(1).unwrap_err().name(), "AmplitudeMismatch");
    }

    #[test]
    fn attains_flags() {
        assert!(v("0:2,1:1").attains());
        assert!(!v("0:1").with_k(2).unwrap().attains());
        assert!(!FinVec::zero(2).attains());
        let t = v("0:3,1:-1").tetris();
        assert!(t.attains() && t.k() == 2);
    }

    #[test]
    fn literal_parsing() {
        assert_eq!(v(" 0:2 , 2:-1 "), v("0:2,2:-1"));
        assert_eq!(v("{0:2,2:-1}"), v("0:2,2:-1"));
        assert!(v("").is_zero());
        assert!("2:1,0:1".parse::<FinVec>().is_err());
        assert!("0:0".parse::<FinVec>().is_err());
        assert!("0".parse::<FinVec>().is_err());
        assert_eq!(v("0:2,2:-1").to_string(), "0:2,2:-1");
        assert_eq!(FinVec::zero(3).to_string(), "{}");
    }

    #[test]
    fn canonical_order() {
        let mut xs = [v("1:1"), v("0:1,1:1"), v("0:-1"), v("0:1")];
        xs.sort();
        let lits: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
        assert_eq!(lits, ["0:-1", "0:1", "0:1,1:1", "1:1"]);
    }

    #[test]
    fn support_containment() {
        assert!(v("1:2").support_within(&v("0:1,1:1,3:1")));
        assert!(!v("2:2").support_within(&v("0:1,1:1,3:1")));
        assert!(FinVec::zero(1).support_within(&v("0:1")));
    }
}
