//! Finite quadratic modules `(A, q)` with `q: A → Q/Z`.
//!
//! Elements are coordinate vectors over cyclic generators; the form is
//! recorded by `q` on generators and the bilinear form `b` on pairs, both
//! reduced into `[0, 1)`.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gauss sums are exact histograms evaluated in floating point; this is the
/// comparison tolerance for the resulting roots of unity.
pub const GAUSS_TOLERANCE: f64 = 1e-9;
const MAX_GAUSS_SIZE: u64 = 10_000_000;
const MAX_ISOTROPIC_SIZE: u64 = 1_000_000;

pub fn frac(x: Rational64) -> Rational64 {
    x - x.floor()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingSpace {
    pub orders: Vec<u64>,
    pub q: Vec<Rational64>,
    pub b: Vec<Vec<Rational64>>,
}

#[derive(Serialize, Deserialize)]
struct LinkingSpaceJson {
    orders: Vec<u64>,
    q: Vec<(i64, i64)>,
}

impl Serialize for LinkingSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LinkingSpaceJson {
            orders: self.orders.clone(),
            q: self.q.iter().map(|r| (*r.numer(), *r.denom())).collect(),
        }
        .serialize(s)
    }
}

impl LinkingSpace {
    /// Validates `q(order·x) = 0`, `b(x,x) = 2q(x)` and `order·b ∈ Z`.
    pub fn new(orders: Vec<u64>, q: Vec<Rational64>, b: Vec<Vec<Rational64>>) -> Result<Self> {
        let n = orders.len();
        if q.len() != n || b.len() != n || b.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("linking space data".into()));
        }
        let q: Vec<Rational64> = q.into_iter().map(frac).collect();
        let b: Vec<Vec<Rational64>> = b.into_iter().map(|r| r.into_iter().map(frac).collect()).collect();
        for i in 0..n {
            let o = Rational64::from_integer(orders[i] as i64);
            if orders[i] < 2 {
                return Err(Error::Invalid("generator of order below 2".into()));
            }
            if !(q[i] * o * o).is_integer() || frac(q[i] * 2) != b[i][i] {
                return Err(Error::Invalid(format!("inconsistent form on generator {i}")));
            }
            for j in 0..n {
                if b[i][j] != b[j][i] || !(b[i][j] * o).is_integer() {
                    return Err(Error::Invalid(format!("inconsistent pairing ({i},{j})")));
                }
            }
        }
        Ok(LinkingSpace { orders, q, b })
    }

    pub fn trivial() -> Self {
        LinkingSpace { orders: Vec::new(), q: Vec::new(), b: Vec::new() }
    }

    /// `(Z/p)^n` with `q(x) = (1/p) Σ dᵢ xᵢ²`.
    pub fn diagonal(p: u64, diag: &[i64]) -> Self {
        let n = diag.len();
        let pp = p as i64;
        let q = diag.iter().map(|&d| frac(Rational64::new(d, pp))).collect();
        let b = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { frac(Rational64::new(2 * diag[i], pp)) } else { Rational64::zero() })
                    .collect()
            })
            .collect();
        LinkingSpace { orders: vec![p; n], q, b }
    }

    /// `I_n ⊗ Z/p`.
    pub fn identity_form(n: usize, p: u64) -> Self {
        LinkingSpace::diagonal(p, &vec![1; n])
    }

    /// `H(Z/n) = Z/n ⊕ Hom(Z/n, Q/Z)` with `q(x, φ) = φ(x)`.
    pub fn hyperbolic(n: u64) -> Self {
        let z = Rational64::zero();
        let h = Rational64::new(1, n as i64);
        LinkingSpace { orders: vec![n, n], q: vec![z, z], b: vec![vec![z, h], vec![h, z]] }
    }

    pub fn negate(&self) -> Self {
        LinkingSpace {
            orders: self.orders.clone(),
            q: self.q.iter().map(|&x| frac(-x)).collect(),
            b: self.b.iter().map(|r| r.iter().map(|&x| frac(-x)).collect()).collect(),
        }
    }

    pub fn direct_sum(&self, other: &LinkingSpace) -> Self {
        let (n, m) = (self.rank(), other.rank());
        let mut b = vec![vec![Rational64::zero(); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                b[i][j] = self.b[i][j];
            }
        }
        for i in 0..m {
            for j in 0..m {
                b[n + i][n + j] = other.b[i][j];
            }
        }
        let mut orders = self.orders.clone();
        orders.extend(&other.orders);
        let mut q = self.q.clone();
        q.extend(&other.q);
        LinkingSpace { orders, q, b }
    }

    /// Number of cyclic generators.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> BigUint {
        self.orders.iter().fold(BigUint::one(), |a, &o| a * BigUint::from(o))
    }

    fn size_u64(&self) -> Option<u64> {
        self.orders.iter().try_fold(1u64, |a, &o| a.checked_mul(o))
    }

    /// The prime `p` if the space is a nonzero `F_p`-vector space.
    pub fn elementary_prime(&self) -> Option<u64> {
        let p = *self.orders.first()?;
        let is_prime = p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0);
        (is_prime && self.orders.iter().all(|&o| o == p)).then_some(p)
    }

    pub fn q_of(&self, x: &[u64]) -> Rational64 {
        let n = self.rank();
        let mut s = Rational64::zero();
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let xi = x[i] as i64;
            s += self.q[i] * xi * xi;
            for j in i + 1..n {
                s += self.b[i][j] * xi * x[j] as i64;
            }
        }
        frac(s)
    }

    pub fn b_of(&self, x: &[u64], y: &[u64]) -> Rational64 {
        let n = self.rank();
        let mut s = Rational64::zero();
        for i in 0..n {
            for j in 0..n {
                if x[i] != 0 && y[j] != 0 {
                    s += self.b[i][j] * (x[i] as i64) * (y[j] as i64);
                }
            }
        }
        frac(s)
    }

    /// Common denominator of all form values.
    fn denominator(&self) -> i64 {
        let mut d = 1i64;
        for &x in &self.q {
            d = d.lcm(x.denom());
        }
        for r in &self.b {
            for &x in r {
                d = d.lcm(x.denom());
            }
        }
        d
    }

    /// Histogram of `N·q(v) mod N` over all elements.
    fn q_histogram(&self) -> Result<(i64, Vec<u64>)> {
        let size = self.size_u64().filter(|&s| s <= MAX_GAUSS_SIZE).ok_or_else(|| {
            Error::TooLarge(format!("linking space of order {}", self.size()))
        })?;
        let nden = self.denominator();
        let n = self.rank();
        let qi: Vec<i64> = self.q.iter().map(|x| (x * nden).to_integer()).collect();
        let bij: Vec<Vec<i64>> =
            self.b.iter().map(|r| r.iter().map(|x| (x * nden).to_integer()).collect()).collect();
        if n == 0 {
            let mut h = vec![0u64; nden as usize];
            h[0] = 1;
            return Ok((nden, h));
        }
        let first = self.orders[0];
        let rest: u64 = size / first;
        let parts: Vec<Vec<u64>> = (0..first)
            .into_par_iter()
            .map(|x0| {
                let mut h = vec![0u64; nden as usize];
                let mut x = vec![0u64; n];
                x[0] = x0;
                for idx in 0..rest {
                    let mut r = idx;
                    for k in 1..n {
                        x[k] = r % self.orders[k];
                        r /= self.orders[k];
                    }
                    let mut s: i64 = 0;
                    for i in 0..n {
                        if x[i] == 0 {
                            continue;
                        }
                        let xi = x[i] as i64;
                        s = (s + qi[i] * xi % nden * xi) % nden;
                        for j in i + 1..n {
                            s = (s + bij[i][j] * xi % nden * x[j] as i64) % nden;
                        }
                    }
                    h[s.rem_euclid(nden) as usize] += 1;
                }
                h
            })
            .collect();
        let mut h = vec![0u64; nden as usize];
        for p in parts {
            for (a, b) in h.iter_mut().zip(p) {
                *a += b;
            }
        }
        Ok((nden, h))
    }

    /// `|V|^{-1/2} Σ_v e^{2πi q(v)}`.
    pub fn gauss_sum(&self) -> Result<Complex64> {
        let (nden, h) = self.q_histogram()?;
        let total: u64 = h.iter().sum();
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        for (k, &c) in h.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let theta = 2.0 * PI * k as f64 / nden as f64;
            re += c as f64 * theta.cos();
            im += c as f64 * theta.sin();
        }
        let s = (total as f64).sqrt();
        Ok(Complex64::new(re / s, im / s))
    }

    /// Totally isotropic `F_p`-subspaces of dimension `dim`, each given by
    /// a reduced echelon basis.
    pub fn isotropic_subspaces(&self, dim: usize) -> Result<Vec<Vec<Vec<u64>>>> {
        if dim == 0 {
            return Ok(vec![Vec::new()]);
        }
        if self.rank() == 0 {
            return Ok(Vec::new());
        }
        let p = self
            .elementary_prime()
            .ok_or_else(|| Error::NotElementary(self.orders.iter().copied().max().unwrap_or(1)))?;
        if self.size_u64().is_none_or(|s| s > MAX_ISOTROPIC_SIZE) {
            return Err(Error::TooLarge("isotropic subspace enumeration".into()));
        }
        let lines: Vec<Vec<u64>> = self
            .vectors()
            .filter(|x| leading(x) == Some(1) && self.q_of(x).is_zero())
            .collect();
        if dim == 1 {
            let mut out: Vec<Vec<Vec<u64>>> = lines.into_iter().map(|l| vec![l]).collect();
            out.sort();
            return Ok(out);
        }
        let mut frontier: Vec<Vec<Vec<u64>>> = lines.iter().map(|l| vec![l.clone()]).collect();
        for _ in 1..dim {
            let mut next = BTreeSet::new();
            for sub in &frontier {
                for l in &lines {
                    if sub.iter().all(|v| self.b_of(v, l).is_zero()) {
                        let mut rows = sub.clone();
                        rows.push(l.clone());
                        let e = echelon(rows, p);
                        if e.len() == sub.len() + 1 {
                            next.insert(e);
                        }
                    }
                }
            }
            frontier = next.into_iter().collect();
        }
        Ok(frontier)
    }

    /// All elements in mixed-radix order.
    pub fn vectors(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let size = self.size_u64().unwrap_or(0);
        (0..size).map(move |mut idx| {
            self.orders
                .iter()
                .map(|&o| {
                    let c = idx % o;
                    idx /= o;
                    c
                })
                .collect()
        })
    }

    /// `I⊥/I` for a totally isotropic subspace of an elementary space,
    /// realized on a complement of `I` inside `I⊥`.
    pub fn orthogonal_quotient(&self, sub: &[Vec<u64>]) -> Result<LinkingSpace> {
        let p = self.elementary_prime().ok_or(Error::NotElementary(0))?;
        let n = self.rank();
        let pi = p as i64;
        // I⊥ = kernel of x ↦ (b(x, s))_s as an F_p-linear map
        let cols: Vec<Vec<i64>> = sub
            .iter()
            .map(|s| (0..n).map(|i| (self.b_of(&unit(n, i), s) * pi).to_integer()).collect())
            .collect();
        let perp: Vec<Vec<u64>> = self.vectors().filter(|x| {
            cols.iter().all(|c| (0..n).map(|i| c[i] * x[i] as i64).sum::<i64>().rem_euclid(pi) == 0)
        }).collect();
        let mut basis = echelon(sub.to_vec(), p);
        let mut comp = Vec::new();
        for v in &perp {
            let mut trial = basis.clone();
            trial.push(v.clone());
            let e = echelon(trial, p);
            if e.len() > basis.len() {
                basis = e;
                comp.push(v.clone());
            }
        }
        let k = comp.len();
        let q = comp.iter().map(|v| self.q_of(v)).collect();
        let b = (0..k).map(|i| (0..k).map(|j| self.b_of(&comp[i], &comp[j])).collect()).collect();
        LinkingSpace::new(vec![p; k], q, b)
    }

    /// Orders of the orthogonal group together with generator matrices.
    pub fn orthogonal_group(&self) -> Result<(BigUint, Vec<Vec<Vec<i64>>>)> {
        let p = self.elementary_prime().ok_or(Error::NotElementary(0))?;
        if self.rank() > 6 || !(p == 3 || p == 5 || p == 2 || p == 7) {
            return Err(Error::TooLarge("orthogonal group of a large space".into()));
        }
        crate::lattice::fp_orthogonal_group(self, p)
    }

    pub fn orthogonal_group_order(&self) -> Result<BigUint> {
        Ok(self.orthogonal_group()?.0)
    }
}

/// `e^{2πi·r/8}`.
pub fn milgram_target(rank: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (rank % 8) as f64 / 8.0)
}

pub fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < GAUSS_TOLERANCE
}

/// Isomorphism of elementary spaces of odd `p` via the classifying
/// invariants: prime, dimension and Gauss sum.
pub fn same_elementary_class(a: &LinkingSpace, b: &LinkingSpace) -> Result<bool> {
    match (a.elementary_prime(), b.elementary_prime()) {
        (None, None) => Ok(a.rank() == 0 && b.rank() == 0),
        (Some(p), Some(q)) if p == q && p % 2 == 1 && a.rank() == b.rank() => {
            Ok(close(a.gauss_sum()?, b.gauss_sum()?))
        }
        _ => Ok(false),
    }
}

fn unit(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn leading(x: &[u64]) -> Option<u64> {
    x.iter().copied().find(|&c| c != 0)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut e = p - 2;
    let mut b = a % p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Reduced row echelon form over `F_p`, zero rows dropped.
pub fn echelon(mut rows: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let n = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..n {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for k in 0..n {
                    rows[i][k] = (rows[i][k] + p * p - f * rows[r][k] % p) % p;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn a2_residue_gauss_sum_is_i() {
        // res A₂ = Z/3 with q(1) = 1/3
        let v = LinkingSpace::diagonal(3, &[1]);
        let direct = (Complex64::new(1.0, 0.0) + Complex64::from_polar(2.0, 2.0 * PI / 3.0)) / 3f64.sqrt();
        assert!(close(v.gauss_sum().unwrap(), direct));
        assert!(close(direct, Complex64::new(0.0, 1.0)));
        assert!(close(v.gauss_sum().unwrap(), milgram_target(2)));
    }

    #[test]
    fn trivial_and_hyperbolic() {
        assert!(close(LinkingSpace::trivial().gauss_sum().unwrap(), Complex64::new(1.0, 0.0)));
        for n in [2, 3, 5, 6] {
            assert!(close(LinkingSpace::hyperbolic(n).gauss_sum().unwrap(), Complex64::new(1.0, 0.0)));
        }
        assert_eq!(LinkingSpace::trivial().isotropic_subspaces(0).unwrap().len(), 1);
        assert!(LinkingSpace::trivial().isotropic_subspaces(1).unwrap().is_empty());
    }

    #[test]
    fn hyperbolic_plane_over_f3_has_two_isotropic_lines() {
        let lines = LinkingSpace::hyperbolic(3).isotropic_subspaces(1).unwrap();
        assert_eq!(lines, vec![vec![vec![0, 1]], vec![vec![1, 0]]]);
    }

    #[test]
    fn identity_forms_match_milgram() {
        assert!(close(LinkingSpace::identity_form(4, 5).gauss_sum().unwrap(), milgram_target(8)));
        assert!(close(LinkingSpace::identity_form(6, 3).gauss_sum().unwrap(), milgram_target(12)));
    }

    #[test]
    fn quotient_by_isotropic_line() {
        // H(Z/3) ⊕ I₁⊗Z/3: quotient by an isotropic line of H is I₁⊗Z/3
        let v = LinkingSpace::hyperbolic(3).direct_sum(&LinkingSpace::identity_form(1, 3));
        let w = v.orthogonal_quotient(&[vec![1, 0, 0]]).unwrap();
        assert_eq!(w.rank(), 1);
        assert!(same_elementary_class(&w, &LinkingSpace::identity_form(1, 3)).unwrap());
    }

    #[test]
    fn rejects_inconsistent_data() {
        let h = Rational64::new(1, 3);
        assert!(LinkingSpace::new(vec![3], vec![h], vec![vec![h]]).is_err());
    }
}
