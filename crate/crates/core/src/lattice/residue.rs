//! The residue `L♯/L` with `q(x) = x·x/2 mod Z`, via Smith normal form.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive};

use super::IntLattice;
use crate::error::{Error, Result};
use crate::intmat;
use crate::linkform::LinkingSpace;

/// The residue together with, for each cyclic generator, a lift in `L♯`
/// given by rational coordinates in the basis of `L`.
pub fn residue_with_lifts(l: &IntLattice) -> Result<(LinkingSpace, Vec<Vec<BigRational>>)> {
    if l.rank == 0 {
        return Ok((LinkingSpace::trivial(), Vec::new()));
    }
    let g = l.gram_big();
    let (d, v) = intmat::smith(&g);
    let n = l.rank;
    let keep: Vec<usize> = (0..n).filter(|&i| !d[i].is_one()).collect();
    // VᵀGV
    let vt = intmat::transpose(&v);
    let w = intmat::mul(&intmat::mul(&vt, &g), &v);
    let to_i64 = |x: &BigInt| x.to_i64().ok_or_else(|| Error::TooLarge("residue".into()));
    let mut orders = Vec::with_capacity(keep.len());
    let mut q = Vec::with_capacity(keep.len());
    let mut b = Vec::with_capacity(keep.len());
    for &i in &keep {
        let di = to_i64(&d[i])?;
        orders.push(di as u64);
        q.push(Rational64::new(to_i64(&w[i][i])?, 2 * di * di));
        let mut row = Vec::with_capacity(keep.len());
        for &j in &keep {
            let dj = to_i64(&d[j])?;
            row.push(Rational64::new(to_i64(&w[i][j])?, di * dj));
        }
        b.push(row);
    }
    let space = LinkingSpace::new(orders, q, b)?;
    let lifts = keep
        .iter()
        .map(|&i| {
            (0..n)
                .map(|k| BigRational::new(v[k][i].clone(), d[i].clone()))
                .collect()
        })
        .collect();
    Ok((space, lifts))
}

pub fn residue_form(l: &IntLattice) -> Result<LinkingSpace> {
    Ok(residue_with_lifts(l)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_of_a_n() {
        for n in 1..=6usize {
            let basis: Vec<Vec<i64>> = (0..n)
                .map(|i| (0..=n).map(|j| if j == i { 1 } else if j == i + 1 { -1 } else { 0 }).collect())
                .collect();
            let l = IntLattice::from_basis(basis, 1).unwrap();
            let r = residue_form(&l).unwrap();
            assert_eq!(r.orders, vec![n as u64 + 1]);
            // the generator may be any unit multiple of 1̄; compare u²·q(1̄)
            let target = Rational64::new(n as i64, 2 * (n as i64 + 1));
            let ok = (1..=n as i64).any(|u| crate::linkform::frac(target * u * u) == r.q[0]);
            assert!(ok, "n = {n}: q = {}", r.q[0]);
        }
    }
}
