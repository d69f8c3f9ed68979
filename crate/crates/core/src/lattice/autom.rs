//! Automorphism groups and isometry tests by backtracking over images of a
//! basis among short vectors, in the style of Plesken and Souvignier.
//!
//! The same engine runs over any finite "geometry": a point set closed
//! under the group, an integer-valued pairing, and coordinates relative to
//! a basis whose images determine a group element.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};

use super::{reduce, IntLattice};
use crate::error::{Error, Result};
use crate::intmat;
use crate::linkform::LinkingSpace;

#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    /// Maximum number of backtracking nodes.
    pub nodes: u64,
    /// Refuse lattices of larger rank unless raised explicitly.
    pub max_rank: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { nodes: 2_000_000_000, max_rank: 12 }
    }
}

/// Generators (column convention, `Aᵀ·G·A = G`) and exact order.
#[derive(Clone, Debug)]
pub struct AutGroup {
    pub generators: Vec<Vec<Vec<i64>>>,
    pub order: BigUint,
    /// Orbit lengths along the basis, whose product is the order.
    pub orbit_lengths: Vec<usize>,
}

impl AutGroup {
    pub fn determinants(&self) -> Vec<BigInt> {
        self.generators.iter().map(|g| intmat::det_i64(g)).collect()
    }

    /// Every element has determinant +1 (the determinant is a homomorphism,
    /// so generators suffice).
    pub fn is_orientable(&self) -> bool {
        self.determinants().iter().all(|d| d.is_one())
    }

    /// A generator of determinant −1, if any.
    pub fn orientation_reversing(&self) -> Option<&Vec<Vec<i64>>> {
        self.generators.iter().find(|g| intmat::det_i64(g).is_negative())
    }
}

trait Geometry {
    fn rank(&self) -> usize;
    fn len(&self) -> usize;
    fn ip(&self, a: usize, b: usize) -> i64;
    fn coords(&self, a: usize) -> &[i64];
    fn lookup(&self, c: &[i64]) -> Option<usize>;
    fn reduce(&self, _c: &mut [i64]) {}
    /// Index of the `i`-th basis vector.
    fn basis_point(&self, i: usize) -> usize;
    /// Points against which fingerprints are taken.
    fn fingerprint_set(&self) -> Vec<usize>;
}

type Fingerprint = Vec<(i64, u32)>;

fn fingerprints<G: Geometry>(geo: &G) -> Vec<Fingerprint> {
    let set = geo.fingerprint_set();
    (0..geo.len())
        .map(|a| {
            let mut h: BTreeMap<i64, u32> = BTreeMap::new();
            for &c in &set {
                *h.entry(geo.ip(a, c)).or_insert(0) += 1;
            }
            h.into_iter().collect()
        })
        .collect()
}

struct LatticeGeometry {
    gram: Vec<Vec<i64>>,
    points: Vec<Vec<i64>>,
    gx: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    basis: Vec<usize>,
    min_norm: i64,
}

impl LatticeGeometry {
    /// All vectors of norm at most `bound` of the lattice with Gram `gram`.
    fn new(gram: Vec<Vec<i64>>, bound: i64, budget: u64) -> Result<Self> {
        let rank = gram.len();
        let lat = IntLattice { rank, scale_sq: 1, basis: intmat::to_i64(&intmat::identity(rank)).expect("small"), gram };
        let half = lat.short_vectors_with_budget(bound, budget)?;
        let mut points = Vec::with_capacity(2 * half.len());
        for v in half {
            points.push(v.iter().map(|c| -c).collect::<Vec<i64>>());
            points.push(v);
        }
        let gx: Vec<Vec<i64>> = points
            .iter()
            .map(|x| (0..rank).map(|i| (0..rank).map(|j| lat.gram[i][j] * x[j]).sum()).collect())
            .collect();
        let index: HashMap<Vec<i64>, usize> = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let basis = (0..rank)
            .map(|i| {
                let mut e = vec![0i64; rank];
                e[i] = 1;
                index.get(&e).copied().ok_or_else(|| Error::Invalid("basis vector above the bound".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let min_norm = points.iter().zip(&gx).map(|(x, g)| dot(x, g)).min().unwrap_or(0);
        Ok(LatticeGeometry { gram: lat.gram, points, gx, index, basis, min_norm })
    }

    fn census(&self) -> BTreeMap<i64, usize> {
        let mut m = BTreeMap::new();
        for a in 0..self.points.len() {
            *m.entry(self.ip(a, a)).or_insert(0) += 1;
        }
        m
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Geometry for LatticeGeometry {
    fn rank(&self) -> usize {
        self.gram.len()
    }
    fn len(&self) -> usize {
        self.points.len()
    }
    fn ip(&self, a: usize, b: usize) -> i64 {
        dot(&self.points[a], &self.gx[b])
    }
    fn coords(&self, a: usize) -> &[i64] {
        &self.points[a]
    }
    fn lookup(&self, c: &[i64]) -> Option<usize> {
        self.index.get(c).copied()
    }
    fn basis_point(&self, i: usize) -> usize {
        self.basis[i]
    }
    fn fingerprint_set(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.ip(a, a) == self.min_norm).collect()
    }
}

/// Nonzero vectors of an elementary linking space, pairing `p·b` and
/// norm `p·q`.
struct FpGeometry {
    p: i64,
    rank: usize,
    points: Vec<Vec<i64>>,
    bp: Vec<Vec<i64>>,
    qp: Vec<i64>,
}

impl FpGeometry {
    fn new(v: &LinkingSpace, p: u64) -> Self {
        let rank = v.rank();
        let pi = p as i64;
        let points: Vec<Vec<i64>> = v
            .vectors()
            .filter(|x| x.iter().any(|&c| c != 0))
            .map(|x| x.into_iter().map(|c| c as i64).collect())
            .collect();
        let bp = v.b.iter().map(|r| r.iter().map(|x| (x * pi).to_integer()).collect()).collect();
        let qp = points
            .iter()
            .map(|x| {
                let u: Vec<u64> = x.iter().map(|&c| c as u64).collect();
                (v.q_of(&u) * pi).to_integer()
            })
            .collect();
        FpGeometry { p: pi, rank, points, bp, qp }
    }

    fn encode(&self, c: &[i64]) -> usize {
        // mixed radix, matching LinkingSpace::vectors, minus the zero vector
        let mut idx = 0i64;
        for &x in c.iter().rev() {
            idx = idx * self.p + x;
        }
        idx as usize
    }
}

impl Geometry for FpGeometry {
    fn rank(&self) -> usize {
        self.rank
    }
    fn len(&self) -> usize {
        self.points.len()
    }
    fn ip(&self, a: usize, b: usize) -> i64 {
        if a == b {
            // distinguish norms by q, and pair by b otherwise
            return self.p + self.qp[a];
        }
        let (x, y) = (&self.points[a], &self.points[b]);
        let mut s = 0i64;
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += self.bp[i][j] * x[i] * y[j];
            }
        }
        s.rem_euclid(self.p)
    }
    fn coords(&self, a: usize) -> &[i64] {
        &self.points[a]
    }
    fn lookup(&self, c: &[i64]) -> Option<usize> {
        let i = self.encode(c);
        (i > 0).then(|| i - 1)
    }
    fn reduce(&self, c: &mut [i64]) {
        for x in c.iter_mut() {
            *x = x.rem_euclid(self.p);
        }
    }
    fn basis_point(&self, i: usize) -> usize {
        let mut e = vec![0i64; self.rank];
        e[i] = 1;
        self.lookup(&e).expect("unit vector")
    }
    fn fingerprint_set(&self) -> Vec<usize> {
        Vec::new()
    }
}

struct Search<'a, G: Geometry> {
    geo: &'a G,
    target: Vec<Vec<i64>>,
    candidates: Vec<Vec<usize>>,
    nodes: u64,
    limit: u64,
}

impl<'a, G: Geometry> Search<'a, G> {
    fn new(geo: &'a G, target: Vec<Vec<i64>>, target_fp: &[Fingerprint], point_fp: &[Fingerprint], limit: u64) -> Self {
        let candidates = (0..target.len())
            .map(|i| {
                (0..geo.len())
                    .filter(|&c| geo.ip(c, c) == target[i][i] && point_fp[c] == target_fp[i])
                    .collect()
            })
            .collect();
        Search { geo, target, candidates, nodes: 0, limit }
    }

    fn fits(&self, level: usize, c: usize, images: &[usize]) -> bool {
        images.iter().enumerate().all(|(j, &y)| self.geo.ip(c, y) == self.target[level][j])
    }

    /// Completes `images` (already holding levels `0..images.len()`).
    fn extend(&mut self, images: &mut Vec<usize>) -> Result<bool> {
        let level = images.len();
        if level == self.target.len() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::BudgetExceeded(self.limit));
        }
        for k in 0..self.candidates[level].len() {
            let c = self.candidates[level][k];
            if !self.fits(level, c, images) {
                continue;
            }
            images.push(c);
            if self.extend(images)? {
                return Ok(true);
            }
            images.pop();
        }
        Ok(false)
    }
}

/// Point permutation induced by the linear map with the given basis images.
fn induced_permutation<G: Geometry>(geo: &G, images: &[usize]) -> Result<Vec<u32>> {
    let n = geo.rank();
    let cols: Vec<&[i64]> = images.iter().map(|&i| geo.coords(i)).collect();
    (0..geo.len())
        .map(|a| {
            let x = geo.coords(a);
            let mut y = vec![0i64; n];
            for (j, &xj) in x.iter().enumerate() {
                if xj != 0 {
                    for k in 0..n {
                        y[k] += xj * cols[j][k];
                    }
                }
            }
            geo.reduce(&mut y);
            geo.lookup(&y)
                .map(|i| i as u32)
                .ok_or_else(|| Error::Invalid("map does not preserve the point set".into()))
        })
        .collect()
}

fn orbit(start: usize, perms: &[Vec<u32>], len: usize) -> Vec<bool> {
    let mut seen = vec![false; len];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(a) = queue.pop_front() {
        for p in perms {
            let b = p[a] as usize;
            if !seen[b] {
                seen[b] = true;
                queue.push_back(b);
            }
        }
    }
    seen
}

/// Orbit lengths along the basis and generators as basis-image lists.
fn group_of<G: Geometry>(geo: &G, limit: u64) -> Result<(Vec<usize>, Vec<Vec<usize>>)> {
    let n = geo.rank();
    let fp = fingerprints(geo);
    let basis: Vec<usize> = (0..n).map(|i| geo.basis_point(i)).collect();
    let target: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| geo.ip(basis[i], basis[j])).collect()).collect();
    let target_fp: Vec<Fingerprint> = basis.iter().map(|&b| fp[b].clone()).collect();
    let mut search = Search::new(geo, target, &target_fp, &fp, limit);
    let mut gens: Vec<Vec<usize>> = Vec::new();
    let mut perms: Vec<Vec<u32>> = Vec::new();
    let mut lengths = vec![0usize; n];
    for i in (0..n).rev() {
        let mut orb = orbit(basis[i], &perms, geo.len());
        let mut bad = vec![false; geo.len()];
        let cands = search.candidates[i].clone();
        for c in cands {
            if orb[c] || bad[c] || !search.fits(i, c, &basis[..i]) {
                continue;
            }
            let mut images: Vec<usize> = basis[..i].to_vec();
            images.push(c);
            if search.extend(&mut images)? {
                perms.push(induced_permutation(geo, &images)?);
                gens.push(images);
                orb = orbit(basis[i], &perms, geo.len());
            } else {
                for (k, &s) in orbit(c, &perms, geo.len()).iter().enumerate() {
                    bad[k] |= s;
                }
            }
        }
        lengths[i] = orb.iter().filter(|&&s| s).count();
    }
    Ok((lengths, gens))
}

fn images_to_matrix<G: Geometry>(geo: &G, images: &[usize]) -> Vec<Vec<i64>> {
    let cols: Vec<Vec<i64>> = images.iter().map(|&i| geo.coords(i).to_vec()).collect();
    intmat::transpose(&cols)
}

/// Reduced Gram, the reduction transform `T` (rows are the reduced basis in
/// old coordinates) and its inverse.
fn reduced_frame(l: &IntLattice) -> Result<(Vec<Vec<i64>>, intmat::IntMat, intmat::IntMat)> {
    let r = reduce::lll(&l.gram_big());
    let gram = intmat::to_i64(&r.gram).ok_or_else(|| Error::TooLarge("reduced Gram".into()))?;
    let tinv = intmat::inverse_unimodular(&r.transform)
        .ok_or_else(|| Error::Invalid("reduction transform is not unimodular".into()))?;
    Ok((gram, r.transform, tinv))
}

/// `Tᵀ·M·T⁻ᵀ`-style change of frame: `left · m · right`.
fn conjugate(m: &[Vec<i64>], left: &intmat::IntMat, right: &intmat::IntMat) -> Result<Vec<Vec<i64>>> {
    let r = intmat::mul(&intmat::mul(left, &intmat::to_big(m)), right);
    intmat::to_i64(&r).ok_or_else(|| Error::TooLarge("automorphism matrix".into()))
}

fn max_diag(g: &[Vec<i64>]) -> i64 {
    (0..g.len()).map(|i| g[i][i]).max().unwrap_or(2)
}

/// `O(L)` with exact order and generators in the basis of `L`.
pub fn automorphism_group(l: &IntLattice, limits: SearchLimits) -> Result<AutGroup> {
    if l.rank > limits.max_rank {
        return Err(Error::TooLarge(format!("automorphism search in rank {}", l.rank)));
    }
    if l.rank == 0 {
        return Ok(AutGroup { generators: Vec::new(), order: BigUint::one(), orbit_lengths: Vec::new() });
    }
    let (gram, t, tinv) = reduced_frame(l)?;
    let geo = LatticeGeometry::new(gram.clone(), max_diag(&gram), limits.nodes)?;
    let (lengths, gens) = group_of(&geo, limits.nodes)?;
    let tt = intmat::transpose(&t);
    let tinv_t = intmat::transpose(&tinv);
    let generators = gens
        .iter()
        .map(|im| conjugate(&images_to_matrix(&geo, im), &tt, &tinv_t))
        .collect::<Result<Vec<_>>>()?;
    for a in &generators {
        if !preserves_gram(a, &l.gram) {
            return Err(Error::Construction("automorphism check failed".into()));
        }
    }
    let order = lengths.iter().fold(BigUint::one(), |acc, &k| acc * BigUint::from(k));
    Ok(AutGroup { generators, order, orbit_lengths: lengths })
}

pub fn preserves_gram(a: &[Vec<i64>], gram: &[Vec<i64>]) -> bool {
    let at = intmat::transpose(a);
    intmat::mul_i64(&intmat::mul_i64(&at, gram), a) == gram
}

/// `O(V)` for an elementary linking space of odd characteristic, with
/// generator matrices over `F_p` (column `j` is the image of `e_j`).
pub fn fp_orthogonal_group(v: &LinkingSpace, p: u64) -> Result<(BigUint, Vec<Vec<Vec<i64>>>)> {
    if p.is_multiple_of(2) {
        return Err(Error::NotElementary(p));
    }
    if v.rank() == 0 {
        return Ok((BigUint::one(), Vec::new()));
    }
    let geo = FpGeometry::new(v, p);
    let (lengths, gens) = group_of(&geo, u64::MAX)?;
    let mats = gens.iter().map(|im| images_to_matrix(&geo, im)).collect();
    Ok((lengths.iter().fold(BigUint::one(), |acc, &k| acc * BigUint::from(k)), mats))
}

/// An integer matrix `T` with `Tᵀ·G₁·T = G₂` (columns are coordinates in
/// `L1` of the images of the basis of `L2`), or `None` if not isometric.
pub fn isometry_test(l1: &IntLattice, l2: &IntLattice, limits: SearchLimits) -> Result<Option<Vec<Vec<i64>>>> {
    if l1.rank != l2.rank || l1.det() != l2.det() {
        return Ok(None);
    }
    if l1.rank == 0 {
        return Ok(Some(Vec::new()));
    }
    let (g1, t1, _) = reduced_frame(l1)?;
    let (g2, _, t2inv) = reduced_frame(l2)?;
    let bound = max_diag(&g2).max(max_diag(&g1));
    let geo1 = LatticeGeometry::new(g1, bound, limits.nodes)?;
    let geo2 = LatticeGeometry::new(g2.clone(), bound, limits.nodes)?;
    if geo1.census() != geo2.census() {
        return Ok(None);
    }
    let fp1 = fingerprints(&geo1);
    let fp2 = fingerprints(&geo2);
    let target_fp: Vec<Fingerprint> = (0..l2.rank).map(|i| fp2[geo2.basis_point(i)].clone()).collect();
    let mut search = Search::new(&geo1, g2, &target_fp, &fp1, limits.nodes);
    let mut images = Vec::new();
    if !search.extend(&mut images)? {
        return Ok(None);
    }
    let m = images_to_matrix(&geo1, &images);
    let t = conjugate(&m, &intmat::transpose(&t1), &intmat::transpose(&t2inv))?;
    let tt = intmat::transpose(&t);
    if intmat::mul_i64(&intmat::mul_i64(&tt, &l1.gram), &t) != l2.gram {
        return Err(Error::Construction("isometry check failed".into()));
    }
    Ok(Some(t))
}

/// All elements of the matrix group generated by `gens`.
pub fn enumerate_group(gens: &[Vec<Vec<i64>>], limit: usize) -> Result<Vec<Vec<Vec<i64>>>> {
    let n = gens.first().map_or(0, |g| g.len());
    let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut seen: HashSet<Vec<Vec<i64>>> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(a) = queue.pop_front() {
        for g in gens {
            let b = intmat::mul_i64(&a, g);
            if seen.insert(b.clone()) {
                if out.len() >= limit {
                    return Err(Error::GroupTooLarge { limit });
                }
                out.push(b.clone());
                queue.push_back(b);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> IntLattice {
        IntLattice::from_basis(vec![vec![1, -1, 0], vec![0, 1, -1]], 1).unwrap()
    }

    #[test]
    fn a2_has_dihedral_group_of_order_12() {
        let g = automorphism_group(&a2(), SearchLimits::default()).unwrap();
        assert_eq!(g.order, BigUint::from(12u32));
        assert!(!g.is_orientable());
        let all = enumerate_group(&g.generators, 100).unwrap();
        assert_eq!(all.len(), 12);
    }

    #[test]
    fn self_isometry_is_found() {
        let l = a2();
        let t = isometry_test(&l, &l, SearchLimits::default()).unwrap().unwrap();
        assert!(preserves_gram(&t, &l.gram));
    }

    #[test]
    fn a2_sum_is_not_a4() {
        let a4 = IntLattice::from_basis(
            (0..4).map(|i| (0..5).map(|j| if j == i { 1 } else if j == i + 1 { -1 } else { 0 }).collect()).collect(),
            1,
        )
        .unwrap();
        let a2a2 = a2().direct_sum(&a2()).unwrap();
        assert!(isometry_test(&a4, &a2a2, SearchLimits::default()).unwrap().is_none());
    }

    #[test]
    fn small_orthogonal_groups() {
        let (o, _) = fp_orthogonal_group(&LinkingSpace::identity_form(1, 5), 5).unwrap();
        assert_eq!(o, BigUint::from(2u32));
        // O(2, 3) of the form x² + y² (anisotropic): dihedral of order 8
        let (o, _) = fp_orthogonal_group(&LinkingSpace::identity_form(2, 3), 3).unwrap();
        assert_eq!(o, BigUint::from(8u32));
    }
}
