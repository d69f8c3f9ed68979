//! Permutations of Ω, stabilizer chains, and the Mathieu group M24 realized
//! as the automorphism group of the Golay code.

mod chain;
pub mod m24;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use chain::{bsgs, GroupChain, SubsetOrbit};

pub const DEGREE: usize = 24;

/// A permutation of Ω; `images[i]` is the image of point `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Perm(pub [u8; DEGREE]);

impl TryFrom<Vec<u8>> for Perm {
    type Error = String;
    fn try_from(v: Vec<u8>) -> Result<Self, String> {
        if v.len() != DEGREE {
            return Err(format!("expected {DEGREE} images, got {}", v.len()));
        }
        let mut a = [0u8; DEGREE];
        a.copy_from_slice(&v);
        Perm::new(a).ok_or_else(|| "not a bijection".to_string())
    }
}

impl From<Perm> for Vec<u8> {
    fn from(p: Perm) -> Self {
        p.0.to_vec()
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.cycles().into_iter().filter(|c| c.len() > 1).collect::<Vec<_>>())
    }
}

impl Perm {
    pub fn identity() -> Self {
        let mut a = [0u8; DEGREE];
        for (i, x) in a.iter_mut().enumerate() {
            *x = i as u8;
        }
        Perm(a)
    }

    pub fn new(images: [u8; DEGREE]) -> Option<Self> {
        let mut seen = 0u32;
        for &x in &images {
            if x as usize >= DEGREE || seen >> x & 1 == 1 {
                return None;
            }
            seen |= 1 << x;
        }
        Some(Perm(images))
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        let mut a = [0u8; DEGREE];
        for i in 0..DEGREE {
            a[i] = other.0[self.0[i] as usize];
        }
        Perm(a)
    }

    pub fn inverse(&self) -> Perm {
        let mut a = [0u8; DEGREE];
        for i in 0..DEGREE {
            a[self.0[i] as usize] = i as u8;
        }
        Perm(a)
    }

    pub fn pow(&self, k: u32) -> Perm {
        let mut r = Perm::identity();
        for _ in 0..k {
            r = r.then(self);
        }
        r
    }

    /// Image of a subset.
    #[inline]
    pub fn apply_mask(&self, mask: u32) -> u32 {
        let mut m = mask;
        let mut out = 0u32;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            out |= 1 << self.0[i];
            m &= m - 1;
        }
        out
    }

    /// Image of a subset and the parity (1 = odd) of the induced map from
    /// the ascending ordering of `mask` to the ascending ordering of its image.
    pub fn image_with_sign(&self, mask: u32) -> (u32, u8) {
        let mut seen = 0u32;
        let mut inv = 0u32;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            let y = self.0[i];
            inv += (seen >> y).count_ones();
            seen |= 1 << y;
        }
        (seen, (inv & 1) as u8)
    }

    pub fn first_moved(&self) -> Option<usize> {
        (0..DEGREE).find(|&i| self.0[i] as usize != i)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = 0u32;
        let mut out = Vec::new();
        for s in 0..DEGREE {
            if seen >> s & 1 == 1 {
                continue;
            }
            let mut c = vec![s];
            seen |= 1 << s;
            let mut x = self.apply(s);
            while x != s {
                c.push(x);
                seen |= 1 << x;
                x = self.apply(x);
            }
            out.push(c);
        }
        out
    }

    pub fn cycle_masks(&self) -> Vec<u32> {
        self.cycles()
            .into_iter()
            .map(|c| c.iter().fold(0u32, |m, &i| m | 1 << i))
            .collect()
    }

    pub fn shape(&self) -> CycleShape {
        CycleShape::from_lengths(self.cycles().iter().map(|c| c.len()))
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |l, c| num_integer::lcm(l, c.len() as u64))
    }

    /// Sign of the permutation induced on an invariant subset.
    pub fn parity_on(&self, mask: u32) -> bool {
        let mut seen = 0u32;
        let mut transpositions = 0;
        let mut m = mask;
        while m != 0 {
            let s = m.trailing_zeros() as usize;
            m &= m - 1;
            if seen >> s & 1 == 1 {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            loop {
                seen |= 1 << x;
                len += 1;
                x = self.apply(x);
                if x == s {
                    break;
                }
            }
            transpositions += len - 1;
        }
        transpositions % 2 == 0
    }
}

/// Cycle lengths with multiplicities, ascending by length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleShape(pub Vec<(usize, usize)>);

impl CycleShape {
    pub fn from_lengths(lengths: impl Iterator<Item = usize>) -> Self {
        let mut counts = std::collections::BTreeMap::new();
        for l in lengths {
            *counts.entry(l).or_insert(0) += 1;
        }
        CycleShape(counts.into_iter().collect())
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|(l, m)| l * m).sum()
    }

    /// Parses the notation `1^8 2^8` (exponent 1 may be omitted).
    pub fn parse(s: &str) -> Option<Self> {
        let mut parts: Vec<(usize, usize)> = Vec::new();
        for tok in s.split_whitespace() {
            let (l, m) = match tok.split_once('^') {
                Some((l, m)) => (l.parse().ok()?, m.parse().ok()?),
                None => (tok.parse().ok()?, 1),
            };
            parts.push((l, m));
        }
        let mut lengths = Vec::new();
        for (l, m) in parts {
            lengths.extend(std::iter::repeat_n(l, m));
        }
        Some(CycleShape::from_lengths(lengths.into_iter()))
    }
}

impl fmt::Display for CycleShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(l, m)| if m == 1 { l.to_string() } else { format!("{l}^{m}") })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// A permutation followed by sign changes on a subset of coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedPerm {
    pub perm: Perm,
    pub signs: u32,
}

impl SignedPerm {
    /// Acts on ambient coordinates: negate the coordinates in `signs`, then
    /// move coordinate `i` to position `perm(i)`.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        crate::lattice::apply_signed_perm(&self.perm.0, self.signs, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_and_inverse() {
        let mut a = [0u8; 24];
        for i in 0..24 {
            a[i] = ((i + 1) % 24) as u8;
        }
        let p = Perm(a);
        assert!(p.then(&p.inverse()).is_identity());
        assert_eq!(p.order(), 24);
        assert_eq!(p.pow(24), Perm::identity());
        assert_eq!(p.apply_mask(0b11), 0b110);
        assert_eq!(p.shape().to_string(), "24");
    }

    #[test]
    fn shape_parse_round_trip() {
        for s in ["1^8 2^8", "1^2 2 4 8^2", "1 23", "2 4 6 12"] {
            let c = CycleShape::parse(s).unwrap();
            assert_eq!(c.to_string(), s);
            assert_eq!(c.degree(), 24);
        }
    }

    #[test]
    fn image_sign_counts_inversions() {
        let mut a = Perm::identity().0;
        a.swap(0, 1);
        let p = Perm(a);
        assert_eq!(p.image_with_sign(0b11), (0b11, 1));
        assert_eq!(p.image_with_sign(0b101), (0b110, 0));
    }

    #[test]
    fn parity_on_subset() {
        let mut a = [0u8; 24];
        for i in 0..24 {
            a[i] = i as u8;
        }
        a.swap(0, 1);
        let p = Perm(a);
        assert!(!p.parity_on(0b111));
        assert!(p.parity_on(0b1100));
    }
}
