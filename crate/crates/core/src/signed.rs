//! Vectors over `Z_r ∪ {0}`, with `ω^j` stored as the exponent `j` and zero
//! as `None`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedVector {
    modulus: u8,
    entries: Vec<Option<u8>>,
}

impl SignedVector {
    pub fn new(modulus: usize, entries: Vec<Option<u8>>) -> Result<Self> {
        if !(2..=u8::MAX as usize).contains(&modulus) {
            return Err(Error::invalid(format!("modulus must be in 2..=255, got {modulus}")));
        }
        if let Some(bad) = entries.iter().flatten().find(|&&e| e as usize >= modulus) {
            return Err(Error::invalid(format!("exponent {bad} out of range for Z_{modulus}")));
        }
        Ok(SignedVector {
            modulus: modulus as u8,
            entries,
        })
    }

    pub fn zero(modulus: usize, n: usize) -> Result<Self> {
        SignedVector::new(modulus, vec![None; n])
    }

    pub(crate) fn from_raw(modulus: u8, entries: Vec<Option<u8>>) -> Self {
        SignedVector { modulus, entries }
    }

    pub fn modulus(&self) -> usize {
        self.modulus as usize
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Option<u8>] {
        &self.entries
    }

    /// `|x|`, the number of nonzero entries.
    pub fn norm(&self) -> usize {
        self.entries.iter().filter(|e| e.is_some()).count()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_none())
    }

    /// `supp_j(x)` as 1-based positions.
    pub fn support(&self, j: u8) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &e)| e == Some(j))
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// `supp_j(x)` as a bitmask, bit `i` for position `i + 1`.
    pub fn support_mask(&self, j: u8) -> u64 {
        debug_assert!(self.len() <= 64);
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &e)| e == Some(j))
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn first_nonzero(&self) -> Option<u8> {
        self.entries.iter().flatten().next().copied()
    }

    /// `ω^i · x`.
    pub fn rotate_by(&self, i: usize) -> SignedVector {
        let r = self.modulus as usize;
        let shift = (i % r) as u8;
        SignedVector {
            modulus: self.modulus,
            entries: self
                .entries
                .iter()
                .map(|e| e.map(|j| ((j as usize + shift as usize) % r) as u8))
                .collect(),
        }
    }

    /// `ω · x`.
    pub fn rotate(&self) -> SignedVector {
        self.rotate_by(1)
    }

    /// `self ⊆ other`: every nonzero entry of `self` agrees with `other`.
    pub fn is_subvector_of(&self, other: &SignedVector) -> bool {
        self.len() == other.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.is_none() || a == b)
    }

    /// Entries `range` as a vector of the same modulus.
    pub fn slice(&self, range: std::ops::Range<usize>) -> SignedVector {
        SignedVector {
            modulus: self.modulus,
            entries: self.entries[range].to_vec(),
        }
    }
}

impl fmt::Debug for SignedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match e {
                None => write!(f, "0")?,
                Some(j) => write!(f, "w{j}")?,
            }
        }
        write!(f, ")")
    }
}
