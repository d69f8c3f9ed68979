//! Even lattices in a scaled integer coordinate model.
//!
//! A lattice is stored as integer basis rows together with `scale_sq`; the
//! actual vectors are `row / √scale_sq`. Gram entries are exact integers.

mod autom;
mod enumerate;
pub mod reduce;
mod residue;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::golay::GolayCode;
use crate::intmat::{self, IntMat};

pub use autom::{
    automorphism_group, enumerate_group, fp_orthogonal_group, isometry_test, preserves_gram, AutGroup,
    SearchLimits,
};
pub use residue::{residue_form, residue_with_lifts};

/// Default node limit for enumeration trees.
pub const DEFAULT_BUDGET: u64 = 2_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntLattice {
    pub rank: usize,
    pub scale_sq: i64,
    pub basis: Vec<Vec<i64>>,
    pub gram: Vec<Vec<i64>>,
}

impl IntLattice {
    /// Builds the lattice spanned by independent rows `basis / √scale_sq`.
    pub fn from_basis(basis: Vec<Vec<i64>>, scale_sq: i64) -> Result<Self> {
        if scale_sq <= 0 {
            return Err(Error::Invalid("scale must be positive".into()));
        }
        let rank = basis.len();
        let mut gram = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            for j in 0..=i {
                let ip: i128 = basis[i]
                    .iter()
                    .zip(&basis[j])
                    .map(|(&a, &b)| a as i128 * b as i128)
                    .sum();
                if ip % scale_sq as i128 != 0 {
                    return Err(Error::Invalid(format!(
                        "inner product of rows {i},{j} not divisible by the scale"
                    )));
                }
                let v = i64::try_from(ip / scale_sq as i128)
                    .map_err(|_| Error::TooLarge("Gram entry".into()))?;
                gram[i][j] = v;
                gram[j][i] = v;
            }
        }
        let lat = IntLattice { rank, scale_sq, basis, gram };
        lat.validate()?;
        Ok(lat)
    }

    /// Builds a lattice from rational ambient rows by clearing denominators
    /// into the scale, then trimming any common factor back out.
    pub fn from_rational_basis(rows: &[Vec<BigRational>], scale_sq: i64) -> Result<Self> {
        let mut den = BigInt::one();
        for r in rows {
            for x in r {
                den = den.lcm(x.denom());
            }
        }
        let int_rows: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        (x * BigRational::from_integer(den.clone()))
                            .to_integer()
                            .to_i64()
                            .ok_or_else(|| Error::TooLarge("ambient coordinate".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let den = den.to_i64().ok_or_else(|| Error::TooLarge("denominator".into()))?;
        let mut lat = IntLattice::from_basis(int_rows, scale_sq * den * den)?;
        lat.trim_scale();
        Ok(lat)
    }

    /// Divides out common factors `k` of the coordinates when `k²` divides
    /// the scale, keeping the model small.
    fn trim_scale(&mut self) {
        let mut g = 0i64;
        for r in &self.basis {
            for &x in r {
                g = g.gcd(&x);
            }
        }
        if g <= 1 {
            return;
        }
        let mut k = g;
        while k > 1 {
            if g % k == 0 && self.scale_sq % (k * k) == 0 {
                for r in self.basis.iter_mut() {
                    for x in r.iter_mut() {
                        *x /= k;
                    }
                }
                self.scale_sq /= k * k;
                return;
            }
            k -= 1;
        }
    }

    fn validate(&self) -> Result<()> {
        if self.rank == 0 {
            return Ok(());
        }
        let dim = self.basis[0].len();
        if self.basis.iter().any(|r| r.len() != dim) {
            return Err(Error::Invalid("ragged basis".into()));
        }
        if self.gram.iter().enumerate().any(|(i, r)| r[i] % 2 != 0) {
            return Err(Error::Invalid("lattice is not even".into()));
        }
        if reduce::gram_schmidt(&self.gram_big()).is_none() {
            return Err(Error::Invalid("Gram matrix is not positive definite".into()));
        }
        Ok(())
    }

    /// The zero lattice inside an ambient space of dimension `dim`.
    pub fn zero(scale_sq: i64) -> Self {
        IntLattice { rank: 0, scale_sq, basis: Vec::new(), gram: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.first().map_or(0, |r| r.len())
    }

    pub fn gram_big(&self) -> IntMat {
        intmat::to_big(&self.gram)
    }

    pub fn det(&self) -> BigInt {
        intmat::det(&self.gram_big())
    }

    /// `xᵀ G y` for coordinate vectors.
    pub fn ip(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0i64;
        for i in 0..self.rank {
            if x[i] == 0 {
                continue;
            }
            let mut t = 0i64;
            for j in 0..self.rank {
                t += self.gram[i][j] * y[j];
            }
            s += x[i] * t;
        }
        s
    }

    pub fn norm(&self, x: &[i64]) -> i64 {
        self.ip(x, x)
    }

    /// Ambient scaled coordinates of `Σ xᵢ bᵢ`.
    pub fn ambient(&self, x: &[i64]) -> Vec<i64> {
        let mut v = vec![0i64; self.dim()];
        for (c, row) in x.iter().zip(&self.basis) {
            if *c != 0 {
                for (a, b) in v.iter_mut().zip(row) {
                    *a += c * b;
                }
            }
        }
        v
    }

    /// Coordinates of an ambient vector given at scale `scale_sq`, when the
    /// two scales differ by a square factor.
    pub fn coords_of_scaled(&self, v: &[i64], scale_sq: i64) -> Option<Vec<i64>> {
        if scale_sq == self.scale_sq {
            return self.coords_of(v);
        }
        if self.scale_sq % scale_sq == 0 {
            let k = square_root_exact(self.scale_sq / scale_sq)?;
            let w: Vec<i64> = v.iter().map(|x| x * k).collect();
            return self.coords_of(&w);
        }
        if scale_sq % self.scale_sq == 0 {
            let k = square_root_exact(scale_sq / self.scale_sq)?;
            if v.iter().any(|x| x % k != 0) {
                return None;
            }
            let w: Vec<i64> = v.iter().map(|x| x / k).collect();
            return self.coords_of(&w);
        }
        None
    }

    /// Coordinates of an ambient vector (same scale) if it lies in the lattice.
    pub fn coords_of(&self, v: &[i64]) -> Option<Vec<i64>> {
        let b = intmat::to_big(&self.basis);
        let y: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        let x = intmat::solve_left(&b, &y)?;
        x.into_iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect()
    }

    /// The lattice spanned by integer combinations of the basis; rows of
    /// `coeffs` may be dependent and are reduced to a Hermite basis first.
    pub fn sublattice(&self, coeffs: &[Vec<i64>]) -> Result<Self> {
        let h = intmat::hnf_rows(intmat::to_big(coeffs));
        let h = intmat::to_i64(&h).ok_or_else(|| Error::TooLarge("sublattice basis".into()))?;
        let rows: Vec<Vec<i64>> = h.iter().map(|c| self.ambient(c)).collect();
        if rows.is_empty() {
            return Ok(IntLattice::zero(self.scale_sq));
        }
        IntLattice::from_basis(rows, self.scale_sq)
    }

    /// The lattice generated by rational combinations of the basis, e.g. an
    /// overlattice obtained by adjoining dual vectors.
    pub fn rational_span(&self, coeffs: &[Vec<BigRational>]) -> Result<Self> {
        let mut den = BigInt::one();
        for r in coeffs {
            for x in r {
                den = den.lcm(x.denom());
            }
        }
        let scaled: IntMat = coeffs
            .iter()
            .map(|r| r.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect())
            .collect();
        let h = intmat::hnf_rows(scaled);
        let b = intmat::to_big(&self.basis);
        let amb = intmat::mul(&h, &b);
        let rows: Vec<Vec<BigRational>> = amb
            .into_iter()
            .map(|r| r.into_iter().map(|x| BigRational::new(x, den.clone())).collect())
            .collect();
        IntLattice::from_rational_basis(&rows, self.scale_sq)
    }

    /// Rescales the inner product by `1/factor` (vectors divided by √factor).
    pub fn rescaled(&self, factor: i64) -> Result<Self> {
        IntLattice::from_basis(self.basis.clone(), self.scale_sq * factor)
    }

    /// Orthogonal direct sum in the concatenated ambient space.
    pub fn direct_sum(&self, other: &IntLattice) -> Result<Self> {
        let l = self.scale_sq.lcm(&other.scale_sq);
        let fa = square_root_exact(l / self.scale_sq)
            .ok_or_else(|| Error::Invalid("incompatible scales".into()))?;
        let fb = square_root_exact(l / other.scale_sq)
            .ok_or_else(|| Error::Invalid("incompatible scales".into()))?;
        let (da, db) = (self.dim(), other.dim());
        let mut rows = Vec::new();
        for r in &self.basis {
            let mut v: Vec<i64> = r.iter().map(|x| x * fa).collect();
            v.extend(std::iter::repeat_n(0, db));
            rows.push(v);
        }
        for r in &other.basis {
            let mut v = vec![0i64; da];
            v.extend(r.iter().map(|x| x * fb));
            rows.push(v);
        }
        IntLattice::from_basis(rows, l)
    }

    /// Hermite normal form of the basis in ambient coordinates.
    pub fn hermite(&self) -> Result<Self> {
        let h = intmat::hnf_rows(intmat::to_big(&self.basis));
        let h = intmat::to_i64(&h).ok_or_else(|| Error::TooLarge("basis".into()))?;
        IntLattice::from_basis(h, self.scale_sq)
    }

    /// LLL-reduced basis of the same lattice.
    pub fn reduced(&self) -> Result<Self> {
        let r = reduce::lll(&self.gram_big());
        let t = intmat::to_i64(&r.transform).ok_or_else(|| Error::TooLarge("transform".into()))?;
        let rows: Vec<Vec<i64>> = t.iter().map(|c| self.ambient(c)).collect();
        IntLattice::from_basis(rows, self.scale_sq)
    }

    /// Nonzero vectors of norm at most `bound`, one of each `±` pair, as
    /// coordinates in this basis, sorted by norm then lexicographically.
    pub fn short_vectors(&self, bound: i64) -> Result<Vec<Vec<i64>>> {
        self.short_vectors_with_budget(bound, DEFAULT_BUDGET)
    }

    pub fn short_vectors_with_budget(&self, bound: i64, budget: u64) -> Result<Vec<Vec<i64>>> {
        if bound < 2 {
            return Err(Error::Invalid("bound must be at least 2".into()));
        }
        if self.rank == 0 {
            return Ok(Vec::new());
        }
        let red = reduce::lll(&self.gram_big());
        let gs = reduce::gram_schmidt(&red.gram)
            .ok_or_else(|| Error::Invalid("Gram matrix is not positive definite".into()))?;
        let found = enumerate::enumerate(&gs, bound, budget)?;
        let t = intmat::to_i64(&red.transform).ok_or_else(|| Error::TooLarge("transform".into()))?;
        let mut out: Vec<(i64, Vec<i64>)> = found
            .into_iter()
            .map(|y| {
                let mut x = vec![0i64; self.rank];
                for (k, &c) in y.iter().enumerate() {
                    if c != 0 {
                        for j in 0..self.rank {
                            x[j] += c * t[k][j];
                        }
                    }
                }
                if x.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
                    for c in x.iter_mut() {
                        *c = -*c;
                    }
                }
                (self.norm(&x), x)
            })
            .collect();
        out.sort();
        Ok(out.into_iter().map(|(_, x)| x).collect())
    }

    /// Number of vectors (counting both signs) at each even norm up to `bound`.
    pub fn norm_census(&self, bound: i64) -> Result<BTreeMap<i64, usize>> {
        let mut m = BTreeMap::new();
        for v in self.short_vectors(bound)? {
            *m.entry(self.norm(&v)).or_insert(0) += 2;
        }
        Ok(m)
    }

    /// Roots (norm-2 vectors), both signs.
    pub fn roots(&self) -> Result<Vec<Vec<i64>>> {
        if self.rank == 0 {
            return Ok(Vec::new());
        }
        let half = self.short_vectors(2)?;
        let mut all = Vec::with_capacity(2 * half.len());
        for v in half {
            all.push(v.iter().map(|c| -c).collect());
            all.push(v);
        }
        all.sort();
        Ok(all)
    }

    pub fn is_rootless(&self) -> Result<bool> {
        Ok(self.rank == 0 || self.short_vectors(2)?.is_empty())
    }

    pub fn min_norm(&self) -> Result<Option<i64>> {
        let mut bound = 2;
        while bound <= 64 {
            if let Some(v) = self.short_vectors(bound)?.first() {
                return Ok(Some(self.norm(v)));
            }
            bound += 2;
        }
        Ok(None)
    }

    /// Matrix (column convention) of the ambient map `f` restricted to the
    /// lattice: column `j` holds the coordinates of `f(b_j)`.
    pub fn matrix_of(&self, f: impl Fn(&[i64]) -> Vec<i64>) -> Result<Vec<Vec<i64>>> {
        let cols: Vec<Vec<i64>> = self
            .basis
            .iter()
            .map(|b| {
                self.coords_of(&f(b))
                    .ok_or_else(|| Error::Invalid("map does not preserve the lattice".into()))
            })
            .collect::<Result<_>>()?;
        Ok(intmat::transpose(&cols))
    }

    /// `Q = {v : g v = v}` and `Q⊥ = {v ∈ L : v·Q = 0}` for `g` in column
    /// convention, both with Hermite-form bases.
    pub fn fixed_point_sublattice(&self, g: &[Vec<i64>]) -> Result<(Self, Self)> {
        let n = self.rank;
        // x ↦ (g − 1)x = 0 becomes xᵀ (g − 1)ᵀ = 0 for row vectors
        let m: IntMat = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigInt::from(g[j][i] - if i == j { 1 } else { 0 }))
                    .collect()
            })
            .collect();
        let k = intmat::left_kernel(&m);
        let k64 = intmat::to_i64(&k).ok_or_else(|| Error::TooLarge("kernel".into()))?;
        let q = self.sublattice(&k64)?.hermite()?;
        let perp = self.orthogonal_complement(&k64)?;
        Ok((q, perp))
    }

    /// Orthogonal complement of the span of the given coordinate vectors.
    pub fn orthogonal_complement(&self, vecs: &[Vec<i64>]) -> Result<Self> {
        if vecs.is_empty() {
            return Ok(self.clone());
        }
        let n = self.rank;
        // columns: G·kᵀ
        let m: IntMat = (0..n)
            .map(|i| {
                vecs.iter()
                    .map(|k| BigInt::from((0..n).map(|j| self.gram[i][j] * k[j]).sum::<i64>()))
                    .collect()
            })
            .collect();
        let ker = intmat::left_kernel(&m);
        let ker = intmat::to_i64(&ker).ok_or_else(|| Error::TooLarge("complement".into()))?;
        let l = self.sublattice(&ker)?;
        if l.rank == 0 {
            return Ok(l);
        }
        l.hermite()
    }

    /// Orthogonal complement of a sublattice given in the same ambient model.
    pub fn complement_of(&self, sub: &IntLattice) -> Result<Self> {
        let coords: Vec<Vec<i64>> = sub
            .basis
            .iter()
            .map(|r| {
                self.coords_of(r)
                    .ok_or_else(|| Error::Invalid("not a sublattice".into()))
            })
            .collect::<Result<_>>()?;
        self.orthogonal_complement(&coords)
    }

    /// Index of the sublattice spanned by ambient rows inside `self`.
    pub fn index_of(&self, sub: &IntLattice) -> Result<BigInt> {
        if sub.scale_sq != self.scale_sq {
            return Err(Error::Invalid("different scales".into()));
        }
        let coords: Vec<Vec<i64>> = sub
            .basis
            .iter()
            .map(|r| self.coords_of(r).ok_or_else(|| Error::Invalid("not a sublattice".into())))
            .collect::<Result<_>>()?;
        let h = intmat::hnf_rows(intmat::to_big(&coords));
        if h.len() != self.rank {
            return Err(Error::Invalid("sublattice of lower rank".into()));
        }
        Ok(intmat::det(&h).abs())
    }

    /// The kernel of `x ↦ Σ fᵢ xᵢ mod p`.
    pub fn kernel_of_form(&self, form: &[i64], p: i64) -> Result<Self> {
        let m: IntMat = form.iter().map(|&f| vec![BigInt::from(f)]).collect();
        let k = intmat::kernel_mod(&m, &[BigInt::from(p)]);
        let k = intmat::to_i64(&k).ok_or_else(|| Error::TooLarge("kernel".into()))?;
        self.sublattice(&k)
    }
}

fn square_root_exact(n: i64) -> Option<i64> {
    let r = (n as f64).sqrt().round() as i64;
    (r * r == n).then_some(r)
}

/// The Leech lattice generated by `2ν_O / √8` for octads `O` and
/// `(ν_Ω − 4ν_i) / √8`, given in Hermite form.
pub fn build_leech(code: &GolayCode) -> Result<IntLattice> {
    let mut gens: IntMat = Vec::with_capacity(783);
    for o in &code.octads {
        gens.push((0..24).map(|i| BigInt::from(if o.0 >> i & 1 == 1 { 2 } else { 0 })).collect());
    }
    for i in 0..24 {
        gens.push((0..24).map(|j| BigInt::from(if i == j { -3 } else { 1 })).collect());
    }
    let h = intmat::hnf_rows(gens);
    if h.len() != 24 {
        return Err(Error::Construction("Leech generators have rank below 24".into()));
    }
    let h = intmat::to_i64(&h).ok_or_else(|| Error::TooLarge("Leech basis".into()))?;
    IntLattice::from_basis(h, 8)
}

/// Ambient map of a signed permutation: coordinate `i` goes to `σ(i)` with
/// the sign flipped on the points of `signs`.
pub fn apply_signed_perm(images: &[u8; 24], signs: u32, v: &[i64]) -> Vec<i64> {
    let mut w = vec![0i64; 24];
    for i in 0..24 {
        let s = if signs >> i & 1 == 1 { -v[i] } else { v[i] };
        w[images[i] as usize] = s;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> IntLattice {
        IntLattice::from_basis(vec![vec![1, -1, 0], vec![0, 1, -1]], 1).unwrap()
    }

    #[test]
    fn a2_roots_and_census() {
        let l = a2();
        assert_eq!(l.gram, vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(l.short_vectors(2).unwrap().len(), 3);
        let c = l.norm_census(8).unwrap();
        assert_eq!(c.get(&2), Some(&6));
        assert_eq!(c.get(&6), Some(&6));
        assert_eq!(c.get(&8), Some(&6));
    }

    #[test]
    fn rejects_odd_and_degenerate() {
        assert!(IntLattice::from_basis(vec![vec![1, 0]], 1).is_err());
        assert!(IntLattice::from_basis(vec![vec![1, 1], vec![2, 2]], 1).is_err());
    }

    #[test]
    fn overlattice_from_rational_span() {
        let l = IntLattice::from_basis(vec![vec![4]], 1).unwrap();
        let rows = vec![vec![BigRational::one()], vec![BigRational::new(1.into(), 2.into())]];
        let m = l.rational_span(&rows).unwrap();
        assert_eq!(m.gram, vec![vec![4]]);
    }
}
