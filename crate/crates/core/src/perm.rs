//! Permutations of tensor legs and Koszul signs.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{sign, Scalar};

/// A bijection of `{0..k}`; leg `a` is sent to position `image[a]`.
///
/// Displayed and serialized 1-based, as in `[2,1,3]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation {
            image: (0..k).collect(),
        }
    }

    /// From a 0-based image table.
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &x in &image {
            if x >= image.len() || seen[x] {
                return Err(Error::NotAPermutation(image));
            }
            seen[x] = true;
        }
        Ok(Permutation { image })
    }

    /// From a 1-based image table.
    pub fn from_one_based(image: &[usize]) -> Result<Self> {
        if image.iter().any(|&x| x == 0) {
            return Err(Error::NotAPermutation(image.to_vec()));
        }
        Self::new(image.iter().map(|&x| x - 1).collect())
    }

    pub fn transposition(k: usize, a: usize, b: usize) -> Self {
        let mut image: Vec<usize> = (0..k).collect();
        image.swap(a, b);
        Permutation { image }
    }

    pub fn size(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, a: usize) -> usize {
        self.image[a]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(a, &x)| a == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.image.len()];
        for (a, &x) in self.image.iter().enumerate() {
            inv[x] = a;
        }
        Permutation { image: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn then_after(&self, other: &Permutation) -> Self {
        assert_eq!(self.size(), other.size());
        Permutation {
            image: other.image.iter().map(|&x| self.image[x]).collect(),
        }
    }

    /// Replaces leg `leg` by a block of `inner.size()` legs permuted internally by `inner`.
    ///
    /// This is the permutation carried by a composite when a `k`-legged operation is
    /// grafted at leg `leg` of an operation already permuted by `self`.
    pub fn substitute_block(&self, leg: usize, inner: &Permutation) -> Self {
        let n = self.size();
        let k = inner.size();
        let p0 = self.image[leg];
        let outer = |a: usize| {
            let p = self.image[a];
            if p < p0 {
                p
            } else {
                p + k - 1
            }
        };
        let image = (0..n + k - 1)
            .map(|c| {
                if c < leg {
                    outer(c)
                } else if c < leg + k {
                    p0 + inner.image[c - leg]
                } else {
                    outer(c + 1 - k)
                }
            })
            .collect();
        Permutation { image }
    }

    /// All permutations of `{0..k}` in lexicographic order.
    pub fn all(k: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..k).collect();
        loop {
            out.push(Permutation { image: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }

    pub fn random<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Self {
        let mut image: Vec<usize> = (0..k).collect();
        image.shuffle(rng);
        Permutation { image }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.image.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<usize> = self.image.iter().map(|x| x + 1).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Permutation::from_one_based(&v).map_err(serde::de::Error::custom)
    }
}

/// Sign picked up when items of the given degrees are reordered by `p`:
/// `(-1)` to the number of inverted pairs of odd-degree items.
pub fn koszul_sign(p: &Permutation, degrees: &[i64]) -> Result<Scalar> {
    if p.size() != degrees.len() {
        return Err(Error::ArityMismatch {
            left: format!("permutation of {}", p.size()),
            right: format!("{} degrees", degrees.len()),
            detail: "lengths differ".into(),
        });
    }
    let odd: Vec<bool> = degrees.iter().map(|d| d.rem_euclid(2) == 1).collect();
    let mut inversions = 0;
    for a in 0..p.size() {
        for b in a + 1..p.size() {
            if odd[a] && odd[b] && p.apply(a) > p.apply(b) {
                inversions += 1;
            }
        }
    }
    Ok(sign(inversions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn koszul_examples() {
        let id = Permutation::identity(3);
        assert_eq!(koszul_sign(&id, &[1, 1, 1]).unwrap(), int(1));
        let sw = Permutation::transposition(2, 0, 1);
        assert_eq!(koszul_sign(&sw, &[1, 1]).unwrap(), int(-1));
        assert_eq!(koszul_sign(&sw, &[1, 2]).unwrap(), int(1));
        assert!(koszul_sign(&sw, &[1]).is_err());
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(Permutation::all(0).len(), 1);
        assert_eq!(Permutation::all(4).len(), 24);
    }

    #[test]
    fn block_substitution_of_identities_is_identity() {
        let id = Permutation::identity(3);
        let s = id.substitute_block(1, &Permutation::identity(2));
        assert!(s.is_identity());
        assert_eq!(s.size(), 4);
    }

    #[test]
    fn block_substitution_moves_block() {
        // swap two legs, then expand the leg that landed at position 0
        let sw = Permutation::transposition(2, 0, 1);
        let s = sw.substitute_block(1, &Permutation::identity(2));
        assert_eq!(s.images(), &[2, 0, 1]);
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
    }
}
