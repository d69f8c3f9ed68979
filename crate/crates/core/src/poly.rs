//! Dense polynomials with big-integer or rational coefficients, index = degree.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntPoly = Vec<BigInt>;

pub fn trim<T: Zero>(p: &mut Vec<T>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return vec![BigInt::zero()];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

pub fn add_assign_scaled(acc: &mut IntPoly, p: &[BigInt], k: &BigInt) {
    if acc.len() < p.len() {
        acc.resize(p.len(), BigInt::zero());
    }
    for (a, c) in acc.iter_mut().zip(p) {
        *a += c * k;
    }
}

/// `t^k − s` for `s = ±1`.
pub fn binomial_factor(k: usize, s: i64) -> IntPoly {
    let mut p = vec![BigInt::zero(); k + 1];
    p[0] = BigInt::from(-s);
    p[k] += BigInt::one();
    p
}

pub fn from_i64(c: &[i64]) -> IntPoly {
    let mut p: IntPoly = c.iter().map(|&x| BigInt::from(x)).collect();
    trim(&mut p);
    p
}

/// Human-readable form in descending powers of `var`.
pub fn format_int(p: &[BigInt], var: &str) -> String {
    let mut s = String::new();
    for (d, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mono = match d {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{d}"),
        };
        if mono.is_empty() {
            s.push_str(&mag.to_string());
        } else if mag.is_one() {
            s.push_str(&mono);
        } else {
            s.push_str(&format!("{mag}{mono}"));
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

pub fn format_rat(p: &[BigRational], var: &str) -> String {
    let mut s = String::new();
    for (d, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let coeff = if mag.is_integer() { mag.to_integer().to_string() } else { format!("({mag})") };
        match d {
            0 => s.push_str(&coeff),
            _ => {
                if !mag.is_one() {
                    s.push_str(&coeff);
                }
                s.push_str(var);
                if d > 1 {
                    s.push_str(&format!("^{d}"));
                }
            }
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_signs_and_powers() {
        let p = from_i64(&[1, -1, 0, 2]);
        assert_eq!(format_int(&p, "t"), "2t^3 - t + 1");
        assert_eq!(format_int(&from_i64(&[0]), "t"), "0");
    }

    #[test]
    fn binomial_factor_product() {
        let p = mul(&binomial_factor(1, 1), &binomial_factor(1, -1));
        assert_eq!(p, from_i64(&[-1, 0, 1]));
    }
}
