//! Exact Fincke–Pohst enumeration over an LLL-reduced Gram matrix.
//!
//! The norm of `x` is written as `Σ_i y_i² / (d_{i+1} d_i)` with integral
//! `y_i = d_{i+1} x_i + Σ_{j>i} λ_{j,i} x_j`, so every pruning decision is an
//! integer comparison against an exact rational budget.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::reduce::GramSchmidt;
use crate::error::{Error, Result};

struct Walker<'a> {
    d: Vec<i128>,
    lam: Vec<Vec<i128>>,
    dd: Vec<BigInt>,
    budget: u64,
    nodes: &'a AtomicU64,
    bound: BigRational,
}

impl Walker<'_> {
    fn range(&self, i: usize, x: &[i64], rem: &BigRational) -> (i64, i64, i128) {
        let n = self.d.len() - 1;
        let mut s: i128 = 0;
        for j in i + 1..n {
            s += self.lam[j][i] * x[j] as i128;
        }
        let t = (rem * BigRational::from_integer(self.dd[i].clone())).floor().to_integer();
        let m = crate::intmat::isqrt(&t).to_i128().expect("enumeration radius overflow");
        let dk = self.d[i + 1];
        let lo = div_ceil(-m - s, dk);
        let hi = div_floor(m - s, dk);
        (lo as i64, hi as i64, s)
    }

    fn walk(
        &self,
        i: usize,
        x: &mut Vec<i64>,
        rem: BigRational,
        positive_only: bool,
        out: &mut Vec<Vec<i64>>,
    ) -> Result<()> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        let (mut lo, hi, s) = self.range(i, x, &rem);
        if positive_only {
            lo = lo.max(0);
        }
        let dk = self.d[i + 1];
        for v in lo..=hi {
            let y = dk * v as i128 + s;
            let contrib = BigRational::new(BigInt::from(y * y), self.dd[i].clone());
            let next = &rem - contrib;
            x[i] = v;
            if i == 0 {
                if x.iter().any(|&c| c != 0) {
                    out.push(x.clone());
                }
            } else {
                self.walk(i - 1, x, next, positive_only && v == 0, out)?;
            }
        }
        x[i] = 0;
        Ok(())
    }
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

/// All nonzero `x` with `xᵀ G x ≤ bound`, one of each `±` pair (the last
/// nonzero coordinate is positive), in the coordinates of the given Gram.
pub fn enumerate(gs: &GramSchmidt, bound: i64, budget: u64) -> Result<Vec<Vec<i64>>> {
    let n = gs.d.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let d: Vec<i128> = gs
        .d
        .iter()
        .map(|v| v.to_i128().ok_or_else(|| Error::TooLarge("Gram minors".into())))
        .collect::<Result<_>>()?;
    let lam: Vec<Vec<i128>> = gs
        .lam
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| v.to_i128().ok_or_else(|| Error::TooLarge("Gram–Schmidt data".into())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let dd: Vec<BigInt> = (0..n).map(|i| &gs.d[i + 1] * &gs.d[i]).collect();
    let nodes = AtomicU64::new(0);
    let w = Walker {
        d,
        lam,
        dd,
        budget,
        nodes: &nodes,
        bound: BigRational::from_integer(bound.into()),
    };
    // split at the top level so subtrees can run in parallel
    let top = n - 1;
    let x0 = vec![0i64; n];
    let (lo, hi, _) = w.range(top, &x0, &w.bound);
    let branches: Vec<i64> = (lo.max(0)..=hi).collect();
    let parts: Vec<Result<Vec<Vec<i64>>>> = branches
        .par_iter()
        .map(|&v| {
            let mut x = vec![0i64; n];
            x[top] = v;
            let y = w.d[top + 1] * v as i128;
            let rem = &w.bound - BigRational::new(BigInt::from(y * y), w.dd[top].clone());
            let mut out = Vec::new();
            if top == 0 {
                if v != 0 {
                    out.push(x.clone());
                }
            } else {
                w.walk(top - 1, &mut x, rem, v == 0, &mut out)?;
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for p in parts {
        all.extend(p?);
    }
    debug_assert!(all.iter().all(|x| !x.iter().all(|c| c.is_zero())));
    Ok(all)
}
