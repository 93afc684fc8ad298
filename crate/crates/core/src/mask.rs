//! Binary feature masks.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

/// A binary vector over the feature columns; bit `j` set means feature `j`
/// is selected.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FeatureMask(Vec<bool>);

impl FeatureMask {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![false; len])
    }

    pub fn ones(len: usize) -> Self {
        Self(vec![true; len])
    }

    /// Mask with exactly the given indices set.
    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut bits = vec![false; len];
        for &i in indices {
            bits[i] = true;
        }
        Self(bits)
    }

    /// Fair-coin bits.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self((0..len).map(|_| rng.gen_bool(0.5)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn bits_mut(&mut self) -> &mut [bool] {
        &mut self.0
    }

    pub fn get(&self, j: usize) -> bool {
        self.0[j]
    }

    pub fn popcount(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// True when no feature is selected.
    pub fn is_all_zero(&self) -> bool {
        !self.0.iter().any(|&b| b)
    }

    /// Set-bit positions in ascending order.
    pub fn selected(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(j, &b)| b.then_some(j))
            .collect()
    }

    /// Bits as reals (1.0 / 0.0), the position vector of a particle.
    pub fn as_reals(&self) -> Vec<f64> {
        self.0.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()
    }

    /// If the mask is all zero, set one uniformly chosen bit. Returns whether
    /// a repair happened.
    pub fn repair<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        if self.is_all_zero() && !self.0.is_empty() {
            let j = rng.gen_range(0..self.0.len());
            self.0[j] = true;
            true
        } else {
            false
        }
    }
}

impl fmt::Display for FeatureMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid mask character {0:?}, expected '0' or '1'")]
pub struct ParseMaskError(pub char);

impl FromStr for FeatureMask {
    type Err = ParseMaskError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(ParseMaskError(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}
