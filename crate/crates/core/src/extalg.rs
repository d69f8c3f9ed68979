//! Sparse exterior algebra `Λ QΩ` over the rationals, with basis wedges
//! `e_S` indexed by 24-bit masks (points in ascending order).

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::golay::GolayCode;
use crate::intmat;
use crate::permgrp::{GroupChain, Perm};

/// An ordered tuple of distinct points of Ω; only its class modulo even
/// permutations matters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedSubset {
    elements: Vec<usize>,
}

impl OrientedSubset {
    pub fn new(elements: Vec<usize>) -> Result<Self> {
        let mut seen = 0u32;
        for &x in &elements {
            if x >= 24 || seen >> x & 1 == 1 {
                return Err(Error::Invalid(format!("not a tuple of distinct points: {elements:?}")));
            }
            seen |= 1 << x;
        }
        Ok(OrientedSubset { elements })
    }

    /// The subset in ascending order.
    pub fn ascending(mask: u32) -> Self {
        OrientedSubset { elements: (0..24).filter(|&i| mask >> i & 1 == 1).collect() }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn mask(&self) -> u32 {
        self.elements.iter().fold(0, |m, &x| m | 1 << x)
    }

    /// `+1` or `-1`: the sign of the permutation sorting the tuple.
    pub fn sign(&self) -> i32 {
        let e = &self.elements;
        let mut inv = 0;
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                if e[i] > e[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Lexicographic order on ascending point tuples of equal size.
fn lex_key(mask: u32) -> std::cmp::Reverse<u32> {
    std::cmp::Reverse(mask.reverse_bits())
}

/// Sign of `e_s ∧ e_t` relative to `e_{s ∪ t}`, for disjoint masks.
fn shuffle_sign(s: u32, t: u32) -> bool {
    let mut inv = 0u32;
    let mut m = t;
    while m != 0 {
        let j = m.trailing_zeros();
        m &= m - 1;
        inv += (s >> j).count_ones();
    }
    inv & 1 == 1
}

/// A homogeneous element of `Λ^grade QΩ`. No zero coefficient is stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multivector {
    grade: usize,
    terms: BTreeMap<u32, BigRational>,
}

impl Multivector {
    pub fn zero(grade: usize) -> Self {
        Multivector { grade, terms: BTreeMap::new() }
    }

    pub fn basis(mask: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(mask, BigRational::one());
        Multivector { grade: mask.count_ones() as usize, terms }
    }

    /// `β_s = e_{s₁} ∧ … ∧ e_{s_g}`.
    pub fn beta(s: &OrientedSubset) -> Self {
        Multivector::basis(s.mask()).scaled(&BigRational::from_integer(s.sign().into()))
    }

    /// Builds from `(mask, coefficient)` pairs, summing repeats.
    pub fn from_terms(grade: usize, terms: impl IntoIterator<Item = (u32, BigRational)>) -> Result<Self> {
        let mut m = Multivector::zero(grade);
        for (mask, c) in terms {
            if mask >> 24 != 0 || mask.count_ones() as usize != grade {
                return Err(Error::GradeMismatch { expected: grade, found: mask.count_ones() as usize });
            }
            m.add_term(mask, c);
        }
        Ok(m)
    }

    fn add_term(&mut self, mask: u32, c: BigRational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(mask) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn coefficient(&self, mask: u32) -> BigRational {
        self.terms.get(&mask).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scaled(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Multivector::zero(self.grade);
        }
        Multivector {
            grade: self.grade,
            terms: self.terms.iter().map(|(&m, c)| (m, c * k)).collect(),
        }
    }

    pub fn negated(&self) -> Self {
        self.scaled(&-BigRational::one())
    }

    pub fn add(&self, other: &Multivector) -> Result<Self> {
        if self.grade != other.grade {
            return Err(Error::GradeMismatch { expected: self.grade, found: other.grade });
        }
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    /// Exterior product; parallel over the terms of `self`.
    pub fn wedge(&self, other: &Multivector) -> Multivector {
        let grade = self.grade + other.grade;
        if grade > 24 {
            return Multivector::zero(grade);
        }
        let left: Vec<(&u32, &BigRational)> = self.terms.iter().collect();
        let partial = left
            .par_chunks(64)
            .map(|chunk| {
                let mut acc: HashMap<u32, BigRational> = HashMap::new();
                for &(&s, a) in chunk {
                    for (&t, b) in &other.terms {
                        if s & t != 0 {
                            continue;
                        }
                        let mut c = a * b;
                        if shuffle_sign(s, t) {
                            c = -c;
                        }
                        *acc.entry(s | t).or_insert_with(BigRational::zero) += c;
                    }
                }
                acc
            })
            .reduce(HashMap::new, |mut x, y| {
                for (m, c) in y {
                    *x.entry(m).or_insert_with(BigRational::zero) += c;
                }
                x
            });
        let terms = partial.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Multivector { grade, terms }
    }

    /// Image under the linear map `e_i ↦ e_{γ(i)}`.
    pub fn permuted(&self, gamma: &Perm) -> Multivector {
        let terms = self
            .terms
            .iter()
            .map(|(&m, c)| {
                let (im, odd) = gamma.image_with_sign(m);
                (im, if odd == 1 { -c.clone() } else { c.clone() })
            })
            .collect();
        Multivector { grade: self.grade, terms }
    }

    /// Image under `e_i ↦ -e_i` for `i` in `signs`.
    pub fn sign_changed(&self, signs: u32) -> Multivector {
        let terms = self
            .terms
            .iter()
            .map(|(&m, c)| (m, if (m & signs).count_ones() % 2 == 1 { -c.clone() } else { c.clone() }))
            .collect();
        Multivector { grade: self.grade, terms }
    }

    /// `Some(k)` with `self = k·other`, when `other` is nonzero and such `k` exists.
    pub fn ratio_to(&self, other: &Multivector) -> Option<BigRational> {
        if self.grade != other.grade || other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.len() != other.len() {
            return None;
        }
        let (&m0, c0) = other.terms.iter().next()?;
        let k = self.terms.get(&m0)? / c0;
        other
            .terms
            .iter()
            .all(|(m, c)| self.terms.get(m) == Some(&(c * &k)))
            .then_some(k)
    }

    /// List of `[hex-mask, numerator, denominator]`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(&m, c)| json!([format!("{m:06x}"), c.numer().to_string(), c.denom().to_string()]))
                .collect(),
        )
    }

    pub fn from_json(grade: usize, v: &Value) -> Result<Self> {
        let bad = || Error::Invalid("malformed multivector JSON".into());
        let arr = v.as_array().ok_or_else(bad)?;
        let mut terms = Vec::with_capacity(arr.len());
        for t in arr {
            let t = t.as_array().ok_or_else(bad)?;
            let [m, n, d] = t.as_slice() else { return Err(bad()) };
            let mask = u32::from_str_radix(m.as_str().ok_or_else(bad)?, 16).map_err(|_| bad())?;
            let n: BigInt = n.as_str().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let d: BigInt = d.as_str().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            terms.push((mask, BigRational::new(n, d)));
        }
        Multivector::from_terms(grade, terms)
    }
}

/// `σ_s = Σ γ β_s` over `G/G_S`, normalized so that the lexicographically
/// least subset of the orbit has coefficient `+1`.
///
/// The orbit is walked along the strong generators; a sign clash on any
/// edge of the orbit graph means some stabilizer element acts oddly on `S`,
/// which is exactly non-orientability.
pub fn sigma_of(group: &GroupChain, s: &OrientedSubset) -> Result<Multivector> {
    let gens = &group.strong_generators;
    let root = s.mask();
    let mut sign: HashMap<u32, bool> = HashMap::from([(root, s.sign() < 0)]);
    let mut queue = VecDeque::from([root]);
    while let Some(m) = queue.pop_front() {
        let neg = sign[&m];
        for g in gens {
            let (im, odd) = g.image_with_sign(m);
            let want = neg ^ (odd == 1);
            match sign.get(&im) {
                Some(&have) if have != want => return Err(Error::NotOrientable),
                Some(_) => {}
                None => {
                    sign.insert(im, want);
                    queue.push_back(im);
                }
            }
        }
    }
    let least = *sign.keys().min_by_key(|&&m| lex_key(m)).expect("orbit is nonempty");
    let flip = sign[&least];
    let terms = sign
        .into_iter()
        .map(|(m, neg)| {
            let c = if neg ^ flip { -BigRational::one() } else { BigRational::one() };
            (m, c)
        })
        .collect();
    Ok(Multivector { grade: s.elements.len(), terms })
}

/// `ω_g = σ_C` for the lexicographically least codeword `C` of weight `g`.
pub fn omega(code: &GolayCode, group: &GroupChain, g: usize) -> Result<Multivector> {
    let c = code
        .codewords
        .iter()
        .filter(|c| c.weight() as usize == g)
        .min_by_key(|c| lex_key(c.0))
        .ok_or_else(|| Error::Invalid(format!("no codeword of weight {g}")))?;
    sigma_of(group, &OrientedSubset::ascending(c.0))
}

/// `m(v₁, …, v_g) = Σ_C coeff(C)·det(ν_{cᵢ}·v_j)` for vectors given in
/// scaled ambient coordinates (true vector = row/√scale_sq).
pub fn pair_form(m: &Multivector, vectors: &[Vec<i64>], scale_sq: i64) -> Result<BigRational> {
    let g = m.grade();
    if vectors.len() != g {
        return Err(Error::GradeMismatch { expected: g, found: vectors.len() });
    }
    let denom = if g.is_multiple_of(2) {
        BigInt::from(scale_sq).pow(g as u32 / 2)
    } else {
        let r = intmat::isqrt(&BigInt::from(scale_sq));
        if &r * &r != BigInt::from(scale_sq) {
            return Err(Error::Invalid("odd grade needs a square scale".into()));
        }
        r.pow(g as u32)
    };
    let terms: Vec<(u32, &BigRational)> = m.terms().collect();
    let total = terms
        .par_iter()
        .map(|&(mask, c)| {
            let cols: Vec<usize> = (0..24).filter(|&i| mask >> i & 1 == 1).collect();
            let sub: Vec<Vec<i64>> = vectors.iter().map(|v| cols.iter().map(|&i| v[i]).collect()).collect();
            c * BigRational::from_integer(intmat::det_i64(&sub))
        })
        .reduce(BigRational::zero, |a, b| a + b);
    Ok(total / BigRational::from_integer(denom))
}

/// Characteristic polynomial `det(t − A)`, ascending coefficients, by
/// Faddeev–LeVerrier (exact since every division is by the step index).
pub fn charpoly(a: &[Vec<i64>]) -> Vec<BigInt> {
    let n = a.len();
    let a = intmat::to_big(a);
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = intmat::identity(n);
    for k in 1..=n {
        let am = intmat::mul(&a, &m);
        let tr: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        let c = -tr / BigInt::from(k);
        coeffs[n - k] = c.clone();
        m = am;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += &c;
        }
    }
    coeffs
}

pub const INVARIANT_BUDGET: usize = 10_000_000;

/// `dim (Λ^g V)^G` for a fully enumerated group of matrices, by Burnside:
/// the trace on `Λ^g` is the elementary symmetric function `e_g` of the
/// eigenvalues, read off the characteristic polynomial.
pub fn invariant_dim(group_elements: &[Vec<Vec<i64>>], g: usize) -> Result<u64> {
    if group_elements.len() > INVARIANT_BUDGET {
        return Err(Error::GroupTooLarge { limit: INVARIANT_BUDGET });
    }
    let Some(first) = group_elements.first() else {
        return Err(Error::Invalid("empty group".into()));
    };
    let n = first.len();
    if g > n {
        return Ok(0);
    }
    let total: BigInt = group_elements
        .par_iter()
        .map(|a| {
            let c = charpoly(a);
            let e = c[n - g].clone();
            if g % 2 == 1 {
                -e
            } else {
                e
            }
        })
        .reduce(BigInt::zero, |x, y| x + y);
    let order = BigInt::from(group_elements.len());
    if !(&total % &order).is_zero() || total.is_negative() {
        return Err(Error::Invalid("Burnside average is not a natural number; list is not a group".into()));
    }
    (total / order).to_u64().ok_or_else(|| Error::TooLarge("invariant dimension".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golay::build_golay;
    use crate::permgrp::m24::M24;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn wedge_signs() {
        let e12 = Multivector::beta(&OrientedSubset::new(vec![1, 2]).unwrap());
        let e21 = Multivector::beta(&OrientedSubset::new(vec![2, 1]).unwrap());
        let e3 = Multivector::basis(1 << 3);
        assert_eq!(e12.wedge(&e3), Multivector::basis(0b1110));
        assert_eq!(e21.wedge(&e3), Multivector::basis(0b1110).negated());
        assert_eq!(e3.wedge(&e12), Multivector::basis(0b1110));
        assert!(e12.wedge(&Multivector::basis(1 << 2)).is_zero());
    }

    #[test]
    fn bilinear_and_graded_commutative() {
        let a = Multivector::from_terms(1, [(1, r(2)), (4, r(-1))]).unwrap();
        let b = Multivector::from_terms(1, [(2, r(3)), (1, r(1))]).unwrap();
        assert_eq!(a.wedge(&b), b.wedge(&a).negated());
        let ab = a.wedge(&b);
        assert_eq!(ab.coefficient(0b011), r(6) - r(0));
        assert_eq!(ab.coefficient(0b101), r(1));
        assert_eq!(ab.coefficient(0b110), r(3));
    }

    #[test]
    fn json_round_trip() {
        let a = Multivector::from_terms(2, [(3, BigRational::new(1.into(), 3.into())), (5, r(-2))]).unwrap();
        let v = a.to_json();
        assert_eq!(v[0][0], "000003");
        assert_eq!(Multivector::from_json(2, &v).unwrap(), a);
    }

    #[test]
    fn sigma_examples_in_m24() {
        let code = build_golay().unwrap();
        let m = M24::build(&code, 1).unwrap();
        let omega24 = sigma_of(&m.chain, &OrientedSubset::ascending(crate::golay::OMEGA)).unwrap();
        assert_eq!(omega24, Multivector::basis(crate::golay::OMEGA));
        let s8 = omega(&code, &m.chain, 8).unwrap();
        assert_eq!(s8.len(), 759);
        assert!(s8.terms().all(|(_, c)| c.abs().is_one()));
        for g in &m.chain.strong_generators {
            assert_eq!(s8.permuted(g), s8);
        }
        let s12 = omega(&code, &m.chain, 12).unwrap();
        assert_eq!(s12.len(), 2576);
        // a pair of points is not orientable
        assert!(matches!(
            sigma_of(&m.chain, &OrientedSubset::new(vec![0, 1]).unwrap()),
            Err(Error::NotOrientable)
        ));
    }

    #[test]
    fn sigma_is_normalized_on_least_subset() {
        let code = build_golay().unwrap();
        let m = M24::build(&code, 1).unwrap();
        let o = code.octads[5];
        let mut pts = o.points();
        pts.swap(0, 1);
        let s = sigma_of(&m.chain, &OrientedSubset::new(pts).unwrap()).unwrap();
        let least = s.terms().map(|(m, _)| m).min_by_key(|&m| lex_key(m)).unwrap();
        assert!(s.coefficient(least).is_one());
    }

    #[test]
    fn pair_form_on_coordinate_frame() {
        let m = Multivector::basis(0b011);
        let v = vec![vec![0, 2, 0], vec![2, 0, 0]];
        // det [[0,2],[2,0]] / 4
        assert_eq!(pair_form(&m, &v, 4).unwrap(), r(-1));
        assert!(matches!(pair_form(&m, &v[..1], 4), Err(Error::GradeMismatch { .. })));
    }

    #[test]
    fn charpoly_and_burnside() {
        assert_eq!(charpoly(&[vec![0, -1], vec![1, 0]]), vec![BigInt::one(), BigInt::zero(), BigInt::one()]);
        let id: Vec<Vec<i64>> = (0..24).map(|i| (0..24).map(|j| i64::from(i == j)).collect()).collect();
        assert_eq!(invariant_dim(&[id], 8).unwrap(), crate::golay::binomial(24, 8));
    }

    #[test]
    fn a2_has_no_invariant_area_form() {
        let l = crate::lattice::IntLattice::from_basis(vec![vec![1, -1, 0], vec![0, 1, -1]], 1).unwrap();
        let aut = crate::lattice::automorphism_group(&l, Default::default()).unwrap();
        let all = crate::lattice::enumerate_group(&aut.generators, 100).unwrap();
        assert_eq!(invariant_dim(&all, 2).unwrap(), 0);
        assert_eq!(invariant_dim(&all, 0).unwrap(), 1);
    }
}
