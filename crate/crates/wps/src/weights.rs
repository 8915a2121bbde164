//! Weight vectors, subset gcds, and support classification.
//!
//! Every counting formula is driven by the numbers `k_S = gcd{w_i : i in S}`
//! for nonempty subsets `S` of the coordinate set `{0, …, n}`. Subsets are
//! bitmasks with index `i` on bit `i`; iteration is in ascending mask order
//! so that all derived data is deterministic.

use std::fmt;
use std::str::FromStr;

use crate::arith;
use crate::error::{Error, Result};

/// Subset enumeration is intrinsically `O(2^n)`; cap the dimension.
pub const MAX_SUBSET_DIM: usize = 24;

/// Weights are factored by trial division and summed in words; cap their
/// magnitude well inside both assumptions.
pub const MAX_WEIGHT: u64 = 1_000_000_000;

/// An ordered vector of positive integer weights `(w_0, …, w_n)`, `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector {
    weights: Vec<u64>,
}

/// One nonempty coordinate subset together with its weight gcd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetGcd {
    /// Bitmask over indices `{0, …, n}`; bit `i` selects `w_i`.
    pub mask: u32,
    /// Number of selected indices.
    pub size: u32,
    /// `gcd` of the selected weights.
    pub k: u64,
}

impl WeightVector {
    /// Validates length >= 2 and positivity. Zero weights are rejected:
    /// every formula divides or gcds them.
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::Invalid(format!(
                "a weight vector needs at least two entries, got {}",
                weights.len()
            )));
        }
        if let Some(i) = weights.iter().position(|w| *w == 0) {
            return Err(Error::Invalid(format!("weight w_{i} must be positive")));
        }
        if let Some(i) = weights.iter().position(|w| *w > MAX_WEIGHT) {
            return Err(Error::Invalid(format!(
                "weight w_{i} exceeds the supported maximum {MAX_WEIGHT}"
            )));
        }
        Ok(Self { weights })
    }

    /// Dimension index `n`; the vector has `n + 1` entries.
    pub fn n(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight_sum(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// `d = gcd(w_0, …, w_n)`.
    pub fn gcd(&self) -> u64 {
        self.weights.iter().fold(0, |g, w| arith::gcd(g, *w))
    }

    /// Returns `(w / d, d)`; the returned vector has gcd 1.
    pub fn normalize(&self) -> (WeightVector, u64) {
        let d = self.gcd();
        let reduced = self.weights.iter().map(|w| w / d).collect();
        (
            WeightVector { weights: reduced },
            d,
        )
    }

    /// All `2^{n+1} - 1` nonempty subsets with their gcds, ascending mask order.
    pub fn subset_gcds(&self) -> Result<impl Iterator<Item = SubsetGcd> + '_> {
        if self.n() > MAX_SUBSET_DIM {
            return Err(Error::DimensionTooLarge(self.n()));
        }
        let count = 1u32 << self.weights.len();
        Ok((1..count).map(move |mask| SubsetGcd {
            mask,
            size: mask.count_ones(),
            k: self.mask_gcd(mask),
        }))
    }

    /// `k_S` for the support mask of a point; classifies it as singular
    /// (`k > d`) or smooth (`k = d`).
    pub fn support_gcd(&self, nonzero_mask: u32) -> Result<u64> {
        if nonzero_mask == 0 {
            return Err(Error::EmptySupport);
        }
        if (nonzero_mask >> self.weights.len()) != 0 {
            return Err(Error::Invalid(format!(
                "support mask {nonzero_mask:#b} selects indices beyond n = {}",
                self.n()
            )));
        }
        Ok(self.mask_gcd(nonzero_mask))
    }

    fn mask_gcd(&self, mask: u32) -> u64 {
        let mut g = 0u64;
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            g = arith::gcd(g, self.weights[i]);
            if g == 1 {
                break;
            }
            bits &= bits - 1;
        }
        g
    }
}

impl FromStr for WeightVector {
    type Err = Error;

    /// Parses comma-separated positive integers, e.g. `"1,2,3,5"`.
    fn from_str(s: &str) -> Result<Self> {
        let weights = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Invalid(format!("bad weight {:?}", part.trim())))
            })
            .collect::<Result<Vec<u64>>>()?;
        WeightVector::new(weights)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}
