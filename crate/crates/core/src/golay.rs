//! The extended binary Golay code on `Ω = {0, …, 23}`.
//!
//! Built from the cyclic code of length 23 with generator polynomial
//! `x¹¹ + x⁹ + x⁷ + x⁶ + x⁵ + x + 1`, extended by an overall parity bit at
//! point 23.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const OMEGA: u32 = (1 << 24) - 1;

/// A subset of Ω as a 24-bit mask (bit `i` is point `i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Codeword(pub u32);

impl Codeword {
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, other: u32) -> bool {
        self.0 & other == other
    }

    pub fn to_hex(self) -> String {
        format!("{:06x}", self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let v = u32::from_str_radix(s, 16).map_err(|e| Error::Invalid(e.to_string()))?;
        if s.len() != 6 || v > OMEGA {
            return Err(Error::Invalid(format!("bad codeword {s}")));
        }
        Ok(Codeword(v))
    }

    pub fn points(self) -> Vec<usize> {
        (0..24).filter(|&i| self.0 >> i & 1 == 1).collect()
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for Codeword {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Codeword {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Codeword::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

pub fn mask_of(points: &[usize]) -> u32 {
    points.iter().fold(0, |m, &p| m | 1 << p)
}

#[derive(Clone, Debug)]
pub struct GolayCode {
    /// All 4096 codewords, ascending.
    pub codewords: Vec<Codeword>,
    pub octads: Vec<Codeword>,
    pub dodecads: Vec<Codeword>,
    /// A basis of 12 generators.
    pub generators: Vec<Codeword>,
    members: HashSet<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HexadKind {
    Special,
    Umbral,
}

const GENERATOR_POLY: u32 = 0b1010_1110_0011;

pub fn build_golay() -> Result<GolayCode> {
    let mut generators = Vec::with_capacity(12);
    for shift in 0..12 {
        let w = GENERATOR_POLY << shift;
        let parity = w.count_ones() & 1;
        generators.push(Codeword(w | parity << 23));
    }
    let mut codewords = Vec::with_capacity(4096);
    for m in 0u32..4096 {
        let mut w = 0;
        for (i, g) in generators.iter().enumerate() {
            if m >> i & 1 == 1 {
                w ^= g.0;
            }
        }
        codewords.push(Codeword(w));
    }
    codewords.sort();
    codewords.dedup();
    if codewords.len() != 4096 {
        return Err(Error::Construction("generators are dependent".into()));
    }
    if codewords.iter().any(|c| c.0 != 0 && c.weight() < 8) {
        return Err(Error::Construction("minimum weight below 8".into()));
    }
    let octads = codewords.iter().copied().filter(|c| c.weight() == 8).collect();
    let dodecads = codewords.iter().copied().filter(|c| c.weight() == 12).collect();
    let members = codewords.iter().map(|c| c.0).collect();
    let code = GolayCode { codewords, octads, dodecads, generators, members };
    if !code.steiner_property() {
        return Err(Error::Construction("octads do not form a Steiner system".into()));
    }
    Ok(code)
}

impl GolayCode {
    pub fn is_codeword(&self, mask: u32) -> bool {
        self.members.contains(&mask)
    }

    pub fn weight_distribution(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for c in &self.codewords {
            *m.entry(c.weight()).or_insert(0) += 1;
        }
        m
    }

    /// Every 5-subset of Ω lies in exactly one octad.
    fn steiner_property(&self) -> bool {
        let mut seen = HashSet::with_capacity(42504);
        for o in &self.octads {
            let pts = o.points();
            for sub in subsets(&pts, 5) {
                if !seen.insert(sub) {
                    return false;
                }
            }
        }
        seen.len() == binomial(24, 5) as usize
    }

    pub fn octads_containing(&self, s: u32) -> Vec<Codeword> {
        self.octads.iter().copied().filter(|o| o.contains(s)).collect()
    }

    pub fn dodecads_containing(&self, s: u32) -> Vec<Codeword> {
        self.dodecads.iter().copied().filter(|o| o.contains(s)).collect()
    }

    /// The octad through a 5-subset.
    pub fn octad_through(&self, five: u32) -> Option<Codeword> {
        self.octads.iter().copied().find(|o| o.contains(five))
    }

    pub fn classify_hexad(&self, h: u32) -> (HexadKind, usize) {
        let kind = if self.octads.iter().any(|o| o.contains(h)) {
            HexadKind::Special
        } else {
            HexadKind::Umbral
        };
        (kind, self.dodecads_containing(h).len())
    }

    /// Counts over all C(24,6) hexads: (special, umbral, dodecad counts seen
    /// among umbral hexads).
    pub fn hexad_census(&self) -> HexadCensus {
        let mut special = HashSet::with_capacity(21252);
        for o in &self.octads {
            for s in subsets(&o.points(), 6) {
                special.insert(s);
            }
        }
        let mut in_dodecads: std::collections::HashMap<u32, u32> =
            std::collections::HashMap::with_capacity(140_000);
        for d in &self.dodecads {
            for s in subsets(&d.points(), 6) {
                *in_dodecads.entry(s).or_insert(0) += 1;
            }
        }
        let mut umbral = 0usize;
        let mut umbral_dodecad_counts = BTreeMap::new();
        let mut special_dodecad_counts = BTreeMap::new();
        for h in subsets(&(0..24).collect::<Vec<_>>(), 6) {
            let c = in_dodecads.get(&h).copied().unwrap_or(0);
            if special.contains(&h) {
                *special_dodecad_counts.entry(c).or_insert(0usize) += 1;
            } else {
                umbral += 1;
                *umbral_dodecad_counts.entry(c).or_insert(0usize) += 1;
            }
        }
        HexadCensus {
            special: special.len(),
            umbral,
            umbral_dodecad_counts,
            special_dodecad_counts,
        }
    }

    /// Export as the list of hex codewords.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.codewords).expect("codewords serialize")
    }
}

#[derive(Clone, Debug)]
pub struct HexadCensus {
    pub special: usize,
    pub umbral: usize,
    pub umbral_dodecad_counts: BTreeMap<u32, usize>,
    pub special_dodecad_counts: BTreeMap<u32, usize>,
}

/// All `k`-subsets of the given points as masks, in lexicographic order of
/// positions.
pub fn subsets(points: &[usize], k: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let n = points.len();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(0u32, |m, &i| m | 1 << points[i]));
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_count() {
        let pts: Vec<usize> = (0..8).collect();
        assert_eq!(subsets(&pts, 4).len(), 70);
        assert_eq!(subsets(&pts, 0), vec![0]);
        assert_eq!(subsets(&pts, 8).len(), 1);
        assert_eq!(subsets(&pts, 9).len(), 0);
    }

    #[test]
    fn code_basics() {
        let code = build_golay().unwrap();
        assert_eq!(code.codewords.len(), 4096);
        assert_eq!(code.octads.len(), 759);
        assert!(code.is_codeword(0) && code.is_codeword(OMEGA));
        let wd = code.weight_distribution();
        assert_eq!(wd.into_iter().collect::<Vec<_>>(), vec![(0, 1), (8, 759), (12, 2576), (16, 759), (24, 1)]);
    }

    #[test]
    fn hex_round_trip() {
        let c = Codeword(0x00ff0f);
        assert_eq!(c.to_hex(), "00ff0f");
        assert_eq!(Codeword::from_hex("00ff0f").unwrap(), c);
        assert!(Codeword::from_hex("1000000").is_err());
    }

    #[test]
    fn octad_is_its_own_container() {
        let code = build_golay().unwrap();
        let o = code.octads[17];
        assert_eq!(code.octads_containing(o.0), vec![o]);
    }
}
