//! Invariant alternating forms on even lattices: the reflection argument
//! for lattices spanned by roots, and the dimensions of `Alt_24^g`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extalg::{invariant_dim, pair_form, Multivector};
use crate::golay::{subsets, GolayCode};
use crate::intmat;
use crate::lattice::{automorphism_group, enumerate_group, preserves_gram, IntLattice, SearchLimits};
use crate::permgrp::m24::{avg_charpoly_n, invariant_dims_from_charpoly, ClassTable};
use crate::permgrp::Perm;

/// Groups up to this order are enumerated and averaged over.
pub const ENUMERATION_LIMIT: usize = 200_000;

#[derive(Clone, Debug, Serialize)]
pub struct ReflectionKill {
    pub g: usize,
    /// `dim (Λ^g)^{O(L)}` when `O(L)` was enumerated.
    pub invariant_dim: Option<u64>,
    pub sampled_tuples: usize,
    /// Every sampled tuple satisfied `s(x₁) = −x₁`, `s(xᵢ) ∈ xᵢ + Z x₁` and
    /// `ω(s x) = −ω(x)` for a random alternating `ω`.
    pub reflection_identity: bool,
}

impl ReflectionKill {
    pub fn killed(&self) -> bool {
        self.reflection_identity && self.invariant_dim.is_none_or(|d| d == 0)
    }
}

/// `v ↦ v − (v·α) α` for a root `α`, column convention on the basis.
fn reflection_matrix(l: &IntLattice, alpha: &[i64]) -> Vec<Vec<i64>> {
    let n = l.rank;
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<i64> = (0..n).map(|i| i64::from(i == j)).collect();
        let c = l.ip(&e, alpha);
        cols.push((0..n).map(|i| e[i] - c * alpha[i]).collect::<Vec<i64>>());
    }
    intmat::transpose(&cols)
}

fn apply(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Checks that no nonzero `O(L)`-invariant alternating `g`-form exists on a
/// lattice whose roots span it.
pub fn reflection_kill_check(l: &IntLattice, g: usize, samples: usize) -> Result<ReflectionKill> {
    let roots = l.roots()?;
    let span = intmat::rank(&intmat::to_big(&roots));
    if l.rank == 0 || span < l.rank {
        return Err(Error::RootsDoNotSpan);
    }
    if g == 0 || g > l.rank || l.rank > 24 {
        return Err(Error::Invalid(format!("grade {g} out of range for rank {}", l.rank)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (g as u64) << 8 ^ l.rank as u64);
    let masks = subsets(&(0..l.rank).collect::<Vec<_>>(), g);
    let form = Multivector::from_terms(
        g,
        masks.iter().map(|&m| (m, BigRational::from_integer(BigInt::from(rng.gen_range(-9i64..=9))))),
    )?;
    let mut identity = true;
    for _ in 0..samples {
        let tuple: Vec<&Vec<i64>> = (0..g).map(|_| &roots[rng.gen_range(0..roots.len())]).collect();
        let s = reflection_matrix(l, tuple[0]);
        let x1 = tuple[0];
        let ok_s = preserves_gram(&s, &l.gram) && apply(&s, x1) == x1.iter().map(|c| -c).collect::<Vec<_>>();
        let ok_shift = tuple.iter().all(|x| {
            let d: Vec<i64> = apply(&s, x).iter().zip(x.iter()).map(|(a, b)| a - b).collect();
            let k = l.ip(x, x1);
            d.iter().zip(x1).all(|(a, b)| *a == -k * b)
        });
        let moved: Vec<Vec<i64>> = tuple.iter().map(|x| apply(&s, x)).collect();
        let orig: Vec<Vec<i64>> = tuple.iter().map(|x| x.to_vec()).collect();
        let flips = pair_form(&form, &moved, 1)? == -pair_form(&form, &orig, 1)?;
        identity &= ok_s && ok_shift && flips;
    }
    let invariant = match automorphism_group(l, SearchLimits::default()) {
        Ok(aut) if aut.order <= ENUMERATION_LIMIT.into() => {
            let elements = enumerate_group(&aut.generators, ENUMERATION_LIMIT)?;
            Some(invariant_dim(&elements, g)?)
        }
        Ok(_) | Err(Error::TooLarge(_)) | Err(Error::BudgetExceeded(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(ReflectionKill { g, invariant_dim: invariant, sampled_tuples: samples, reflection_identity: identity })
}

/// `dim Alt_24^g` for `g = 0..24`, from the average characteristic
/// polynomial over `2¹²:M24`.
pub fn alt24_dims(code: &GolayCode, class_reps: &[Perm]) -> Result<BTreeMap<usize, i64>> {
    let p = avg_charpoly_n(code, class_reps, &ClassTable::m24())?;
    let dims = invariant_dims_from_charpoly(&p);
    if dims.iter().any(|d| *d < 0) {
        return Err(Error::Invalid("negative invariant dimension".into()));
    }
    Ok(dims.into_iter().enumerate().collect())
}

/// Degrees `g` with a nonzero invariant.
pub fn support(dims: &BTreeMap<usize, i64>) -> Vec<usize> {
    dims.iter().filter(|(_, d)| !d.is_zero()).map(|(g, _)| *g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootlat::RootDatum;

    #[test]
    fn a2_and_d4_have_no_invariant_forms() {
        let a2 = RootDatum::from_label("A2").unwrap();
        let r = reflection_kill_check(&a2.lattice, 2, 20).unwrap();
        assert_eq!(r.invariant_dim, Some(0));
        assert!(r.killed());
        let d4 = RootDatum::from_label("D4").unwrap();
        for g in 1..=4 {
            let r = reflection_kill_check(&d4.lattice, g, 20).unwrap();
            assert_eq!(r.invariant_dim, Some(0), "g = {g}");
            assert!(r.killed());
        }
    }

    #[test]
    fn rootless_lattice_is_rejected() {
        let l = IntLattice::from_basis(vec![vec![2, 0], vec![0, 2]], 1).unwrap();
        assert!(matches!(reflection_kill_check(&l, 1, 5), Err(Error::RootsDoNotSpan)));
    }
}
