//! Monotone Boolean maps `{0,1}ⁿ → {0,1}ⁿ` as shared-structure circuits.

mod circuit;
mod simplify;

use std::fmt;

pub use circuit::{BoolCircuit, BoolMap, CircuitParseError, Gate, GateArena, GateRef};

/// Indicator vector `e_J` of a subset `J ⊆ [n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec(Vec<bool>);

impl BitVec {
    pub fn zeros(n: usize) -> Self {
        BitVec(vec![false; n])
    }

    pub fn ones(n: usize) -> Self {
        BitVec(vec![true; n])
    }

    pub fn from_bools(bits: impl IntoIterator<Item = bool>) -> Self {
        BitVec(bits.into_iter().collect())
    }

    /// Bit `i` of `mask` becomes entry `i` (zero-based).
    pub fn from_mask(mask: u64, n: usize) -> Self {
        BitVec((0..n).map(|i| mask >> i & 1 == 1).collect())
    }

    /// Builds `e_J` from one-based indices.
    pub fn from_indices(n: usize, one_based: &[usize]) -> Self {
        let mut bits = vec![false; n];
        for &i in one_based {
            bits[i - 1] = true;
        }
        BitVec(bits)
    }

    pub fn to_mask(&self) -> u64 {
        assert!(self.0.len() <= 64, "mask conversion needs n <= 64");
        self.0
            .iter()
            .enumerate()
            .fold(0, |m, (i, &b)| if b { m | 1 << i } else { m })
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.0[i] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|b| !b)
    }

    pub fn is_all_ones(&self) -> bool {
        self.0.iter().all(|b| *b)
    }

    /// Neither `0` nor `1`.
    pub fn is_nontrivial(&self) -> bool {
        !self.is_zero() && !self.is_all_ones()
    }

    /// Entrywise `self ≤ other`.
    pub fn le(&self, other: &BitVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| !a || *b)
    }

    pub fn complement(&self) -> BitVec {
        BitVec(self.0.iter().map(|b| !b).collect())
    }

    /// One-based indices of the set bits.
    pub fn indices(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Renders as a tuple, e.g. `(1,0,1)`.
    pub fn tuple(&self) -> String {
        let parts: Vec<&str> = self.0.iter().map(|b| if *b { "1" } else { "0" }).collect();
        format!("({})", parts.join(","))
    }
}

/// Set notation with one-based indices, e.g. `{1,3}`.
impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mask_round_trip_and_rendering() {
        let b = BitVec::from_mask(0b101, 3);
        assert_eq!(b.as_slice(), &[true, false, true]);
        assert_eq!(b.to_mask(), 0b101);
        assert_eq!(b.to_string(), "{1,3}");
        assert_eq!(b.tuple(), "(1,0,1)");
        assert_eq!(BitVec::from_indices(3, &[2]).to_string(), "{2}");
        assert!(BitVec::from_indices(3, &[2]).le(&b.complement()));
        assert!(!BitVec::ones(2).is_nontrivial());
    }
}
