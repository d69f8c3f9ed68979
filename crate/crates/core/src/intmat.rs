//! Dense integer and rational matrix routines: Hermite and Smith normal
//! forms, kernels modulo a list of moduli, determinants and inverses.
//!
//! Matrices are `Vec<Vec<_>>` in row-major order. Everything is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type IntMat = Vec<Vec<BigInt>>;
pub type RatMat = Vec<Vec<BigRational>>;

pub fn to_big(m: &[Vec<i64>]) -> IntMat {
    m.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// Converts back to machine integers, failing if an entry does not fit.
pub fn to_i64(m: &[Vec<BigInt>]) -> Option<Vec<Vec<i64>>> {
    m.iter()
        .map(|r| r.iter().map(|x| x.to_i64()).collect())
        .collect()
}

pub fn identity(n: usize) -> IntMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMat {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mul_i64(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn sub_mul_row(a: &mut [Vec<BigInt>], target: usize, src: usize, q: &BigInt, from: usize) {
    if q.is_zero() {
        return;
    }
    let (t, s) = if target < src {
        let (lo, hi) = a.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for j in from..t.len() {
        if !s[j].is_zero() {
            t[j] -= q * &s[j];
        }
    }
}

/// Row Hermite normal form. Returns the nonzero rows: echelon shape with
/// positive pivots and entries above each pivot reduced into `[0, pivot)`.
pub fn hnf_rows(mut a: IntMat) -> IntMat {
    let rows = a.len();
    if rows == 0 {
        return a;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !a[i][c].is_zero()
                    && best.is_none_or(|b| a[i][c].abs() < a[b][c].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap(r, b);
            let mut clean = true;
            for i in r + 1..rows {
                if !a[i][c].is_zero() {
                    let q = a[i][c].div_floor(&a[r][c]);
                    sub_mul_row(&mut a, i, r, &q, c);
                    if !a[i][c].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if r < rows && !a[r][c].is_zero() {
            if a[r][c].is_negative() {
                for x in a[r].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..r {
                let q = a[i][c].div_floor(&a[r][c]);
                sub_mul_row(&mut a, i, r, &q, c);
            }
            r += 1;
        }
    }
    a.truncate(r);
    a
}

/// Basis, in Hermite form, of `{x ∈ Z^n : x·M ≡ 0 (mod moduli)}` where `M` is
/// `n × k` and column `j` is read modulo `moduli[j]` (zero means exact).
pub fn kernel_mod(m: &[Vec<BigInt>], moduli: &[BigInt]) -> IntMat {
    let n = m.len();
    let k = moduli.len();
    let mut aug: IntMat = Vec::with_capacity(n + k);
    for (i, row) in m.iter().enumerate() {
        let mut r: Vec<BigInt> = row.clone();
        r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
        aug.push(r);
    }
    for (j, d) in moduli.iter().enumerate() {
        if d.is_zero() {
            continue;
        }
        let mut r = vec![BigInt::zero(); k + n];
        r[j] = d.clone();
        aug.push(r);
    }
    let h = hnf_rows(aug);
    let ker: IntMat = h
        .into_iter()
        .filter(|r| r[..k].iter().all(|x| x.is_zero()))
        .map(|r| r[k..].to_vec())
        .collect();
    hnf_rows(ker)
}

/// Integer kernel `{x : x·M = 0}`.
pub fn left_kernel(m: &[Vec<BigInt>]) -> IntMat {
    let k = if m.is_empty() { 0 } else { m[0].len() };
    kernel_mod(m, &vec![BigInt::zero(); k])
}

/// Fraction-free Gaussian elimination determinant.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IntMat = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn det_i64(m: &[Vec<i64>]) -> BigInt {
    det(&to_big(m))
}

/// Inverse over the rationals; `None` if singular.
pub fn inverse(m: &[Vec<BigInt>]) -> Option<RatMat> {
    let n = m.len();
    let mut a: RatMat = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> =
                r.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(p, c);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..2 * n {
                    let d = &f * &a[c][j];
                    a[i][j] -= d;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Integer inverse of a unimodular matrix.
pub fn inverse_unimodular(m: &[Vec<BigInt>]) -> Option<IntMat> {
    let inv = inverse(m)?;
    inv.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| if x.is_integer() { Some(x.to_integer()) } else { None })
                .collect()
        })
        .collect()
}

pub fn rank(m: &[Vec<BigInt>]) -> usize {
    hnf_rows(m.to_vec()).len()
}

/// Smith normal form `U·M·V = diag(d)` of a square matrix. Returns the
/// diagonal (nonnegative, each dividing the next) and the column transform `V`.
pub fn smith(m: &[Vec<BigInt>]) -> (Vec<BigInt>, IntMat) {
    let n = m.len();
    let mut a: IntMat = m.to_vec();
    let mut v = identity(n);
    let swap_cols = |a: &mut IntMat, v: &mut IntMat, i: usize, j: usize| {
        for r in a.iter_mut() {
            r.swap(i, j);
        }
        for r in v.iter_mut() {
            r.swap(i, j);
        }
    };
    let col_sub = |a: &mut IntMat, v: &mut IntMat, target: usize, src: usize, q: &BigInt| {
        for r in a.iter_mut() {
            let d = q * &r[src];
            r[target] -= d;
        }
        for r in v.iter_mut() {
            let d = q * &r[src];
            r[target] -= d;
        }
    };
    for t in 0..n {
        // move the smallest nonzero entry of the trailing block to (t, t)
        let mut best: Option<(usize, usize)> = None;
        for i in t..n {
            for j in t..n {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        swap_cols(&mut a, &mut v, t, bj);
        loop {
            let mut dirty = false;
            for i in t + 1..n {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    sub_mul_row(&mut a, i, t, &q, 0);
                    if !a[i][t].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    col_sub(&mut a, &mut v, j, t, &q);
                    if !a[t][j].is_zero() {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                // divisibility of the trailing block
                let mut bad = None;
                'outer: for i in t + 1..n {
                    for j in t + 1..n {
                        if !(&a[i][j] % &a[t][t]).is_zero() {
                            bad = Some(i);
                            break 'outer;
                        }
                    }
                }
                match bad {
                    Some(i) => {
                        let minus_one = -BigInt::one();
                        sub_mul_row(&mut a, t, i, &minus_one, 0);
                        continue;
                    }
                    None => break,
                }
            }
            // bring the smallest entry of row/column t to the pivot
            let mut best: (usize, usize) = (t, t);
            for i in t..n {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..n {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.1 == t {
                a.swap(t, best.0);
            } else {
                swap_cols(&mut a, &mut v, t, best.1);
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    let d = (0..n).map(|i| a[i][i].clone()).collect();
    (d, v)
}

/// Solves `x·B = y` for a row vector `x` over the rationals, where `B` has
/// independent rows. Returns `None` if `y` is outside the row space.
pub fn solve_left(b: &[Vec<BigInt>], y: &[BigInt]) -> Option<Vec<BigRational>> {
    let r = b.len();
    let n = y.len();
    // columns of the system: unknown x (r entries), equations per coordinate
    let mut a: RatMat = (0..n)
        .map(|j| {
            let mut row: Vec<BigRational> = (0..r)
                .map(|i| BigRational::from_integer(b[i][j].clone()))
                .collect();
            row.push(BigRational::from_integer(y[j].clone()));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..r {
        let Some(p) = (row..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][c].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != row && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=r {
                    let d = &f * &a[row][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    if a[row..].iter().any(|rw| !rw[r].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); r];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][r].clone();
    }
    Some(x)
}

pub fn isqrt(n: &BigInt) -> BigInt {
    if n.is_negative() {
        return BigInt::zero();
    }
    n.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMat {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn hnf_of_small_matrix() {
        let h = hnf_rows(m(&[&[2, 4], &[3, 5], &[1, 1]]));
        assert_eq!(h, m(&[&[1, 1], &[0, 2]]));
        let h = hnf_rows(m(&[&[4, 6], &[6, 9]]));
        assert_eq!(h, m(&[&[2, 3]]));
    }

    #[test]
    fn kernel_and_congruences() {
        // x + y ≡ 0 mod 3
        let k = kernel_mod(&m(&[&[1], &[1]]), &[BigInt::from(3)]);
        assert_eq!(k, m(&[&[1, 2], &[0, 3]]));
        let k = left_kernel(&m(&[&[1, 2], &[2, 4]]));
        assert_eq!(k, m(&[&[2, -1]]));
    }

    #[test]
    fn det_and_inverse() {
        let a = m(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]]);
        assert_eq!(det(&a), BigInt::from(4));
        let inv = inverse(&a).unwrap();
        let back: Vec<Vec<BigRational>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        (0..3)
                            .map(|k| BigRational::from_integer(a[i][k].clone()) * &inv[k][j])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(back[i][j], BigRational::from_integer(BigInt::from((i == j) as i64)));
            }
        }
    }

    #[test]
    fn smith_of_a2_gram() {
        let (d, v) = smith(&m(&[&[2, -1], &[-1, 2]]));
        assert_eq!(d, vec![BigInt::one(), BigInt::from(3)]);
        assert_eq!(det(&v).abs(), BigInt::one());
    }

    #[test]
    fn solve_left_recovers_coordinates() {
        let b = m(&[&[1, 1, 0], &[0, 1, 1]]);
        let y: Vec<BigInt> = [2, 5, 3].iter().map(|&x| BigInt::from(x)).collect();
        let x = solve_left(&b, &y).unwrap();
        assert_eq!(x, vec![BigRational::from_integer(2.into()), BigRational::from_integer(3.into())]);
        let y: Vec<BigInt> = [1, 0, 0].iter().map(|&x| BigInt::from(x)).collect();
        assert!(solve_left(&b, &y).is_none());
    }
}
