//! Integral LLL reduction driven by the Gram matrix, and the integral
//! Gram–Schmidt data used by the enumeration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::intmat::{identity, IntMat};

/// Integral Gram–Schmidt data: `d[0] = 1`, `d[k]` the leading principal
/// minors, and `lam[k][j] = d[j+1]·μ(k, j)` for `j < k` (0-based vectors).
#[derive(Clone, Debug)]
pub struct GramSchmidt {
    pub d: Vec<BigInt>,
    pub lam: Vec<Vec<BigInt>>,
}

pub fn gram_schmidt(gram: &[Vec<BigInt>]) -> Option<GramSchmidt> {
    let n = gram.len();
    let mut d = vec![BigInt::one(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    for k in 0..n {
        for j in 0..=k {
            let mut u = gram[k][j].clone();
            for i in 0..j {
                u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
            }
            if j < k {
                lam[k][j] = u;
            } else {
                if !u.is_positive() {
                    return None;
                }
                d[k + 1] = u;
            }
        }
    }
    Some(GramSchmidt { d, lam })
}

/// Result of reduction: `transform` rows are the new basis vectors expressed
/// in the old basis, and `gram` is the Gram matrix of the new basis.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub gram: IntMat,
    pub transform: IntMat,
}

struct Lll {
    g: IntMat,
    h: IntMat,
    d: Vec<BigInt>,
    lam: Vec<Vec<BigInt>>,
}

impl Lll {
    // 1-based indices throughout, following the classical presentation.
    fn red(&mut self, k: usize, l: usize) {
        let two_lam: BigInt = BigInt::from(2) * &self.lam[k][l];
        if two_lam.abs() <= self.d[l] {
            return;
        }
        let q = (&two_lam + &self.d[l]).div_floor(&(BigInt::from(2) * &self.d[l]));
        let n = self.g.len();
        for j in 0..n {
            let t = &q * &self.h[l - 1][j];
            self.h[k - 1][j] -= t;
        }
        for j in 0..n {
            let t = &q * &self.g[l - 1][j];
            self.g[k - 1][j] -= t;
        }
        for i in 0..n {
            let t = &q * &self.g[i][l - 1];
            self.g[i][k - 1] -= t;
        }
        let t = &q * &self.d[l];
        self.lam[k][l] -= t;
        for i in 1..l {
            let t = &q * &self.lam[l][i];
            self.lam[k][i] -= t;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.h.swap(k - 1, k - 2);
        self.g.swap(k - 1, k - 2);
        for row in self.g.iter_mut() {
            row.swap(k - 1, k - 2);
        }
        for j in 1..k - 1 {
            let a = self.lam[k][j].clone();
            self.lam[k][j] = std::mem::replace(&mut self.lam[k - 1][j], a);
        }
        let lambda = self.lam[k][k - 1].clone();
        let b = (&self.d[k - 2] * &self.d[k] + &lambda * &lambda) / &self.d[k - 1];
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            let new_ik = (&self.d[k] * &self.lam[i][k - 1] - &lambda * &t) / &self.d[k - 1];
            self.lam[i][k] = new_ik;
            let new_ik1 = (&b * &t + &lambda * &self.lam[i][k]) / &self.d[k];
            self.lam[i][k - 1] = new_ik1;
        }
        self.d[k - 1] = b;
    }
}

/// LLL with parameter 99/100 on a positive definite integer Gram matrix.
pub fn lll(gram: &[Vec<BigInt>]) -> Reduction {
    let n = gram.len();
    if n <= 1 {
        return Reduction { gram: gram.to_vec(), transform: identity(n) };
    }
    let mut s = Lll {
        g: gram.to_vec(),
        h: identity(n),
        d: vec![BigInt::one(); n + 1],
        lam: vec![vec![BigInt::zero(); n + 1]; n + 1],
    };
    let (dn, dd) = (BigInt::from(99), BigInt::from(100));
    s.d[1] = s.g[0][0].clone();
    let mut k = 2;
    let mut kmax = 1;
    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = s.g[k - 1][j - 1].clone();
                for i in 1..j {
                    u = (&s.d[i] * &u - &s.lam[k][i] * &s.lam[j][i]) / &s.d[i - 1];
                }
                if j < k {
                    s.lam[k][j] = u;
                } else {
                    assert!(u.is_positive(), "Gram matrix is not positive definite");
                    s.d[k] = u;
                }
            }
        }
        s.red(k, k - 1);
        let lhs = &dd * &s.d[k] * &s.d[k - 2];
        let rhs = &dn * &s.d[k - 1] * &s.d[k - 1] - &dd * &s.lam[k][k - 1] * &s.lam[k][k - 1];
        if lhs < rhs {
            s.swap(k, kmax);
            if k > 2 {
                k -= 1;
            }
        } else {
            for l in (1..k - 1).rev() {
                s.red(k, l);
            }
            k += 1;
        }
    }
    Reduction { gram: s.g, transform: s.h }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::{mul, transpose};

    #[test]
    fn reduces_skewed_a2() {
        // basis (α, 5α+β) of A2
        let g: IntMat = vec![
            vec![2.into(), 9.into()],
            vec![9.into(), 42.into()],
        ];
        let r = lll(&g);
        assert!(r.gram[0][0] == BigInt::from(2) && r.gram[1][1] == BigInt::from(2));
        let back = mul(&mul(&r.transform, &g), &transpose(&r.transform));
        assert_eq!(back, r.gram);
    }

    #[test]
    fn gram_schmidt_minors() {
        let g: IntMat = vec![
            vec![2.into(), (-1).into(), 0.into()],
            vec![(-1).into(), 2.into(), (-1).into()],
            vec![0.into(), (-1).into(), 2.into()],
        ];
        let gs = gram_schmidt(&g).unwrap();
        assert_eq!(gs.d, vec![1, 2, 3, 4].into_iter().map(BigInt::from).collect::<Vec<_>>());
    }
}
