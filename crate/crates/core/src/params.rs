//! Standard parameters: infinitesimal characters and local Satake data,
//! the operations `⊕` and `·[d]`, the forms `Δ_w` from q-expansions, and
//! Euler factors.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly;
use crate::report::Check;

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// A normalized eigenform by its q-expansion: `coeffs[n] = a(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigenform {
    pub weight: u32,
    pub coeffs: Vec<BigInt>,
}

impl Eigenform {
    pub fn coefficient(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn len(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `a(mn) = a(m)a(n)` for coprime `m, n` with `mn ≤ N`.
    pub fn is_multiplicative(&self) -> bool {
        let n = self.len();
        (2..=n).all(|m| (2..=n / m).all(|k| m.gcd(&k) != 1 || self.coeffs[m * k] == &self.coeffs[m] * &self.coeffs[k]))
    }

    /// `a(p^{k+1}) = a(p)a(p^k) − p^{w−1}a(p^{k−1})` wherever defined.
    pub fn satisfies_hecke_recursion(&self, p: usize) -> bool {
        let n = self.len();
        let pw = BigInt::from(p).pow(self.weight - 1);
        let mut prev = 1usize;
        let mut cur = p;
        while cur * p <= n {
            let next = cur * p;
            if self.coeffs[next] != &self.coeffs[p] * &self.coeffs[cur] - &pw * &self.coeffs[prev] {
                return false;
            }
            prev = cur;
            cur = next;
        }
        true
    }
}

fn mul_trunc(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `q·Π(1 − qⁿ)^24` through `q^N`, via the pentagonal series and repeated
/// squaring.
pub fn delta_qexp(n: usize) -> Eigenform {
    let len = n;
    let mut euler = vec![BigInt::zero(); len];
    // Σ (−1)^k q^{k(3k∓1)/2}
    for k in 0i64.. {
        let a = (k * (3 * k - 1) / 2) as usize;
        let b = (k * (3 * k + 1) / 2) as usize;
        if a >= len {
            break;
        }
        let s = BigInt::from(if k % 2 == 0 { 1 } else { -1 });
        euler[a] += &s;
        if k > 0 && b < len {
            euler[b] += &s;
        }
    }
    let p2 = mul_trunc(&euler, &euler, len);
    let p4 = mul_trunc(&p2, &p2, len);
    let p8 = mul_trunc(&p4, &p4, len);
    let p16 = mul_trunc(&p8, &p8, len);
    let p24 = mul_trunc(&p16, &p8, len);
    let mut coeffs = vec![BigInt::zero()];
    coeffs.extend(p24);
    Eigenform { weight: 12, coeffs }
}

fn sigma(k: u32, n: usize) -> BigInt {
    (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| BigInt::from(d).pow(k)).sum()
}

/// `1 − 504 Σ σ₅(n) qⁿ` through `q^N`.
pub fn e6_qexp(n: usize) -> Vec<BigInt> {
    (0..=n).map(|i| if i == 0 { BigInt::one() } else { BigInt::from(-504) * sigma(5, i) }).collect()
}

/// The weight-18 cusp form `Δ·E₆` through `q^N`.
pub fn delta17_qexp(n: usize) -> Eigenform {
    let d = delta_qexp(n);
    let coeffs = mul_trunc(&d.coeffs, &e6_qexp(n), n + 1);
    Eigenform { weight: 18, coeffs }
}

/// Local data of one constituent at a prime: either an explicit monic
/// polynomial (ascending coefficients) whose roots are the eigenvalues times
/// `p^shift`, or a named placeholder.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LocalBlock {
    Explicit { poly: Vec<BigInt>, shift: Rational64 },
    Symbolic { name: String, degree: usize },
}

impl LocalBlock {
    pub fn degree(&self) -> usize {
        match self {
            LocalBlock::Explicit { poly, .. } => poly.len() - 1,
            LocalBlock::Symbolic { degree, .. } => *degree,
        }
    }
}

fn power_sums(poly: &[BigInt], upto: usize) -> Vec<BigRational> {
    // Newton: p_k + e_1 p_{k−1} − … + (−1)^{k} k e_k = 0 with e via the monic coefficients
    let m = poly.len() - 1;
    let e: Vec<BigRational> = (0..=m)
        .map(|k| {
            let c = BigRational::from_integer(poly[m - k].clone());
            if k % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    let mut p = vec![BigRational::from_integer(BigInt::from(m))];
    for k in 1..=upto {
        let mut s = BigRational::zero();
        for i in 1..k {
            if i <= m {
                let term = &e[i] * &p[k - i];
                if i % 2 == 1 {
                    s += term;
                } else {
                    s -= term;
                }
            }
        }
        if k <= m {
            let term = &e[k] * BigRational::from_integer(BigInt::from(k));
            if k % 2 == 1 {
                s += term;
            } else {
                s -= term;
            }
        }
        p.push(s);
    }
    p
}

fn from_power_sums(p: &[BigRational], m: usize) -> Result<Vec<BigInt>> {
    let mut e = vec![BigRational::one()];
    for k in 1..=m {
        let mut s = BigRational::zero();
        for i in 1..=k {
            let term = &e[k - i] * &p[i];
            if i % 2 == 1 {
                s += term;
            } else {
                s -= term;
            }
        }
        e.push(s / BigRational::from_integer(BigInt::from(k)));
    }
    let mut poly = vec![BigInt::zero(); m + 1];
    for k in 0..=m {
        if !e[k].is_integer() {
            return Err(Error::Invalid("tensor product polynomial is not integral".into()));
        }
        let v = e[k].to_integer();
        poly[m - k] = if k % 2 == 0 { v } else { -v };
    }
    Ok(poly)
}

fn tensor_blocks(a: &LocalBlock, b: &LocalBlock) -> Result<LocalBlock> {
    match (a, b) {
        (LocalBlock::Explicit { poly: pa, shift: sa }, LocalBlock::Explicit { poly: pb, shift: sb }) => {
            let m = (pa.len() - 1) * (pb.len() - 1);
            let qa = power_sums(pa, m);
            let qb = power_sums(pb, m);
            let prod: Vec<BigRational> = qa.iter().zip(&qb).map(|(x, y)| x * y).collect();
            Ok(LocalBlock::Explicit { poly: from_power_sums(&prod, m)?, shift: sa + sb })
        }
        _ => Ok(LocalBlock::Symbolic { name: format!("{}⊗{}", block_name(a), block_name(b)), degree: a.degree() * b.degree() }),
    }
}

fn block_name(b: &LocalBlock) -> String {
    match b {
        LocalBlock::Explicit { poly, shift } => format!("explicit(deg {}, shift {shift})", poly.len() - 1),
        LocalBlock::Symbolic { name, .. } => name.clone(),
    }
}

/// An element of `X_n` restricted to sums of tensor products of the named
/// constituents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parameter {
    pub n: usize,
    /// Eigenvalues of the infinitesimal character, descending.
    pub inf_char: Vec<Rational64>,
    /// Blocks at each prime, sorted.
    pub local: BTreeMap<u64, Vec<LocalBlock>>,
    /// Formal constituents, sorted.
    pub pieces: Vec<String>,
}

impl Parameter {
    fn normalize(mut self) -> Self {
        self.inf_char.sort_by(|a, b| b.cmp(a));
        self.pieces.sort();
        for blocks in self.local.values_mut() {
            blocks.sort();
        }
        self
    }

    pub fn primes(&self) -> Vec<u64> {
        self.local.keys().copied().collect()
    }

    pub fn is_self_dual(&self) -> bool {
        let mut neg: Vec<Rational64> = self.inf_char.iter().map(|x| -x).collect();
        neg.sort_by(|a, b| b.cmp(a));
        neg == self.inf_char
    }

    /// Every eigenvalue is in `½Z`.
    pub fn is_half_integral(&self) -> bool {
        self.inf_char.iter().all(|x| (x * 2).is_integer())
    }

    pub fn oplus(&self, other: &Parameter) -> Result<Parameter> {
        if self.primes() != other.primes() {
            return Err(Error::DimensionMismatch("parameters carry different primes".into()));
        }
        let local = self
            .local
            .iter()
            .map(|(p, a)| (*p, a.iter().chain(&other.local[p]).cloned().collect()))
            .collect();
        Ok(Parameter {
            n: self.n + other.n,
            inf_char: self.inf_char.iter().chain(&other.inf_char).copied().collect(),
            local,
            pieces: self.pieces.iter().chain(&other.pieces).cloned().collect(),
        }
        .normalize())
    }

    /// `c·[d]`.
    pub fn twisted(&self, d: usize) -> Result<Parameter> {
        if d == 0 {
            return Err(Error::DimensionMismatch("[0] has dimension 0".into()));
        }
        let b = bracket(d, &self.primes());
        let mut local = BTreeMap::new();
        for (p, blocks) in &self.local {
            let bb = &b.local[p][0];
            let twisted = blocks
                .iter()
                .map(|x| match x {
                    LocalBlock::Symbolic { name, degree } => {
                        Ok(LocalBlock::Symbolic { name: format!("{name}[{d}]"), degree: degree * d })
                    }
                    _ => tensor_blocks(x, bb),
                })
                .collect::<Result<Vec<_>>>()?;
            local.insert(*p, twisted);
        }
        let mut inf_char = Vec::new();
        for x in &self.inf_char {
            for y in &b.inf_char {
                inf_char.push(x + y);
            }
        }
        let pieces = self.pieces.iter().map(|s| format!("{s}[{d}]")).collect();
        Ok(Parameter { n: self.n * d, inf_char, local, pieces }.normalize())
    }

    /// `det(1 − c_p T)` in the unitary normalization.
    pub fn euler_factor(&self, p: u64) -> Result<Vec<BigRational>> {
        let blocks = self
            .local
            .get(&p)
            .ok_or_else(|| Error::Invalid(format!("no local data recorded at {p}")))?;
        let mut acc = vec![BigRational::one()];
        for b in blocks {
            match b {
                LocalBlock::Symbolic { name, .. } => return Err(Error::SymbolicPiece(format!("{name} at {p}"))),
                LocalBlock::Explicit { poly, shift } => {
                    if !shift.is_integer() {
                        return Err(Error::Invalid(format!("block with half-integral shift {shift} has irrational factor")));
                    }
                    let t = shift.to_integer();
                    let m = poly.len() - 1;
                    let pt = BigRational::from_integer(BigInt::from(p)).pow(t as i32);
                    // Π(1 − r p^{−t} T) = Σ c_{m−k} p^{−kt} T^k
                    let mut f = Vec::with_capacity(m + 1);
                    let mut scale = BigRational::one();
                    for k in 0..=m {
                        f.push(BigRational::from_integer(poly[m - k].clone()) / &scale);
                        scale *= &pt;
                    }
                    acc = rat_mul(&acc, &f);
                }
            }
        }
        Ok(acc)
    }

    pub fn notation(&self) -> String {
        self.pieces.join(" ⊕ ")
    }
}

fn rat_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `[n]`: eigenvalues `p^{(n−1)/2 − i}` and `(n−1)/2 − i`.
pub fn bracket(n: usize, primes: &[u64]) -> Parameter {
    let half = Rational64::new(n as i64 - 1, 2);
    let inf_char = (0..n).map(|i| half - Rational64::from_integer(i as i64)).collect();
    let local = primes
        .iter()
        .map(|&p| {
            let mut f = vec![BigInt::one()];
            for i in 0..n {
                // X − p^{n−1−i}
                f = poly::mul(&f, &[-BigInt::from(p).pow((n - 1 - i) as u32), BigInt::one()]);
            }
            (p, vec![LocalBlock::Explicit { poly: f, shift: half }])
        })
        .collect();
    Parameter { n, inf_char, local, pieces: vec![format!("[{n}]")] }.normalize()
}

/// Explicit q-expansions of `Δ₁₁` and `Δ₁₇` and the primes carried by all
/// parameters built from them.
#[derive(Clone, Debug)]
pub struct ParamContext {
    pub primes: Vec<u64>,
    pub delta11: Eigenform,
    pub delta17: Eigenform,
}

impl ParamContext {
    pub fn new(prime_bound: u64) -> Result<Self> {
        if !(2..=10_000).contains(&prime_bound) {
            return Err(Error::Invalid("prime bound must lie in 2..=10000".into()));
        }
        let n = prime_bound as usize;
        Ok(ParamContext { primes: primes_up_to(prime_bound), delta11: delta_qexp(n), delta17: delta17_qexp(n) })
    }

    pub fn bracket(&self, n: usize) -> Parameter {
        bracket(n, &self.primes)
    }

    /// `Δ_w` for `w ∈ {11, 17}`.
    pub fn delta(&self, w: u32) -> Result<Parameter> {
        let form = match w {
            11 => &self.delta11,
            17 => &self.delta17,
            _ => return Err(Error::Invalid(format!("no explicit Δ_{w}"))),
        };
        let half = Rational64::new(w as i64, 2);
        let local = self
            .primes
            .iter()
            .map(|&p| {
                let poly = vec![BigInt::from(p).pow(w), -form.coefficient(p as usize).clone(), BigInt::one()];
                (p, vec![LocalBlock::Explicit { poly, shift: half }])
            })
            .collect();
        Ok(Parameter { n: 2, inf_char: vec![half, -half], local, pieces: vec![format!("Δ{w}")] }.normalize())
    }

    /// `Δ_{w,v}` with symbolic local data.
    pub fn delta_wv(&self, w: u32, v: u32) -> Result<Parameter> {
        if !matches!((w, v), (19, 7) | (21, 13)) {
            return Err(Error::Invalid(format!("no Δ_{w},{v}")));
        }
        let name = format!("Δ{w},{v}");
        let (hw, hv) = (Rational64::new(w as i64, 2), Rational64::new(v as i64, 2));
        let local = self
            .primes
            .iter()
            .map(|&p| (p, vec![LocalBlock::Symbolic { name: name.clone(), degree: 4 }]))
            .collect();
        Ok(Parameter { n: 4, inf_char: vec![hw, hv, -hv, -hw], local, pieces: vec![name] }.normalize())
    }

    pub fn combine(&self, e: &ParamExpr) -> Result<Parameter> {
        match e {
            ParamExpr::Bracket(n) => {
                if *n == 0 {
                    return Err(Error::DimensionMismatch("[0] has dimension 0".into()));
                }
                Ok(self.bracket(*n))
            }
            ParamExpr::Delta(w) => self.delta(*w),
            ParamExpr::DeltaWV(w, v) => self.delta_wv(*w, *v),
            ParamExpr::Twist(inner, d) => self.combine(inner)?.twisted(*d),
            ParamExpr::Sum(parts) => {
                let mut it = parts.iter();
                let first = it.next().ok_or_else(|| Error::Invalid("empty sum".into()))?;
                let mut acc = self.combine(first)?;
                for p in it {
                    acc = acc.oplus(&self.combine(p)?)?;
                }
                Ok(acc)
            }
        }
    }

    pub fn parse(&self, s: &str) -> Result<Parameter> {
        self.combine(&ParamExpr::parse(s)?)
    }
}

/// Expressions in `⊕` and `·[d]` over `[n]`, `Δ_w`, `Δ_{w,v}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamExpr {
    Bracket(usize),
    Delta(u32),
    DeltaWV(u32, u32),
    Twist(Box<ParamExpr>, usize),
    Sum(Vec<ParamExpr>),
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        s.parse().map_err(|_| Error::Invalid("expected a number".into()))
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.chars.next() {
            Some(c) if c == want => Ok(()),
            other => Err(Error::Invalid(format!("expected '{want}', found {other:?}"))),
        }
    }

    fn sum(&mut self) -> Result<ParamExpr> {
        let mut parts = vec![self.term()?];
        loop {
            self.skip_ws();
            match self.chars.peek() {
                Some('⊕') | Some('+') => {
                    self.chars.next();
                    parts.push(self.term()?);
                }
                _ => break,
            }
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { ParamExpr::Sum(parts) })
    }

    fn term(&mut self) -> Result<ParamExpr> {
        self.skip_ws();
        let mut atom = match self.chars.peek().copied() {
            Some('[') => {
                self.chars.next();
                let n = self.number()? as usize;
                self.expect(']')?;
                ParamExpr::Bracket(n)
            }
            Some('Δ') | Some('D') => {
                self.chars.next();
                let w = self.number()? as u32;
                self.skip_ws();
                if self.chars.peek() == Some(&',') {
                    self.chars.next();
                    ParamExpr::DeltaWV(w, self.number()? as u32)
                } else {
                    ParamExpr::Delta(w)
                }
            }
            Some('(') => {
                self.chars.next();
                let e = self.sum()?;
                self.expect(')')?;
                e
            }
            other => return Err(Error::Invalid(format!("unexpected {other:?} in parameter expression"))),
        };
        loop {
            self.skip_ws();
            if self.chars.peek() != Some(&'[') {
                break;
            }
            self.chars.next();
            let d = self.number()? as usize;
            self.expect(']')?;
            atom = ParamExpr::Twist(Box::new(atom), d);
        }
        Ok(atom)
    }
}

impl ParamExpr {
    /// Parses e.g. `Δ11[12] ⊕ [25]`, `D19,7[6] + [1]`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut p = Parser { chars: s.chars().peekable() };
        let e = p.sum()?;
        p.skip_ws();
        if p.chars.next().is_some() {
            return Err(Error::Invalid(format!("trailing input in {s:?}")));
        }
        Ok(e)
    }
}

impl fmt::Display for ParamExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamExpr::Bracket(n) => write!(f, "[{n}]"),
            ParamExpr::Delta(w) => write!(f, "Δ{w}"),
            ParamExpr::DeltaWV(w, v) => write!(f, "Δ{w},{v}"),
            ParamExpr::Twist(e, d) => match **e {
                ParamExpr::Sum(_) => write!(f, "({e})[{d}]"),
                _ => write!(f, "{e}[{d}]"),
            },
            ParamExpr::Sum(parts) => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                f.write_str(&s.join(" ⊕ "))
            }
        }
    }
}

/// The table of `ψ_g` and `ψ′_g`.
pub fn psi_table(g: usize) -> Option<(&'static str, &'static str)> {
    match g {
        8 => Some(("Δ21,13[4] ⊕ [1]", "Δ21,13[4] ⊕ [7] ⊕ [1]")),
        12 => Some(("Δ19,7[6] ⊕ [1]", "Δ19,7[6]")),
        16 => Some(("Δ17[8] ⊕ [9] ⊕ [7] ⊕ [1]", "Δ17[8] ⊕ [7] ⊕ [1]")),
        24 => Some(("Δ11[12] ⊕ [25]", "Δ11[12]")),
        _ => None,
    }
}

pub fn psi(ctx: &ParamContext, g: usize) -> Result<(Parameter, Parameter)> {
    let (a, b) = psi_table(g).ok_or_else(|| Error::Invalid(format!("no standard parameter for g = {g}")))?;
    Ok((ctx.parse(a)?, ctx.parse(b)?))
}

fn multiset_string(v: &[Rational64]) -> String {
    let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", s.join(", "))
}

/// `{±i : 1 ≤ i ≤ 12, i ≠ skip} ∪ {0, 0}` (descending), or without the
/// zeros.
fn symmetric_range(skip: Option<i64>, zeros: usize) -> Vec<Rational64> {
    let mut v: Vec<Rational64> = Vec::new();
    for i in 1..=12 {
        if Some(i) != skip {
            v.push(Rational64::from_integer(i));
            v.push(Rational64::from_integer(-i));
        }
    }
    v.extend(std::iter::repeat_n(Rational64::zero(), zeros));
    v.sort_by(|a, b| b.cmp(a));
    v
}

/// Dimension checks, the two relations between `ψ_g` and `ψ′_g`, and the
/// infinitesimal characters used to identify them.
pub fn verify_table_and_rallis(ctx: &ParamContext) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for g in [8usize, 12, 16, 24] {
        let (p, pp) = psi(ctx, g)?;
        checks.push(Check::equal(&format!("dim-psi-{g}"), "table row", 2 * g + 1, || Ok(p.n.to_string()))?);
        checks.push(Check::equal(&format!("dim-psi-prime-{g}"), "table row", 24, || Ok(pp.n.to_string()))?);
        checks.push(Check::equal(&format!("self-dual-{g}"), "negation symmetry", true, || {
            Ok((p.is_self_dual() && pp.is_self_dual() && p.is_half_integral()).to_string())
        })?);
        let (lhs, rhs, relation) = if g == 8 {
            (pp.clone(), p.oplus(&ctx.bracket(7))?, "ψ'_8 = ψ_8 ⊕ [7]".to_string())
        } else {
            (p.clone(), pp.oplus(&ctx.bracket(2 * g - 23))?, format!("ψ_{g} = ψ'_{g} ⊕ [{}]", 2 * g - 23))
        };
        checks.push(Check::judged(&format!("rallis-{g}"), "relation between ψ and ψ'", &relation, || {
            Ok((format!("{} vs {}", lhs.notation(), rhs.notation()), lhs == rhs))
        })?);
    }
    let s = ctx.parse("Δ19,7[6]")?;
    checks.push(Check::equal("inf-char-delta-19-7-6", "eigenvalues ±1..±12", multiset_string(&symmetric_range(None, 0)), || {
        Ok(multiset_string(&s.inf_char))
    })?);
    let target = multiset_string(&symmetric_range(Some(4), 2));
    for (id, expr) in [("inf-char-psi-prime-8", "Δ21,13[4] ⊕ [7] ⊕ [1]"), ("inf-char-psi-prime-16", "Δ17[8] ⊕ [7] ⊕ [1]")] {
        let q = ctx.parse(expr)?;
        checks.push(Check::equal(id, "eigenvalues ±i, i ≠ 4", &target, || Ok(multiset_string(&q.inf_char)))?);
    }
    Ok(checks)
}

/// Euler factor of `ψ_g` at `p` as JSON, or the symbolic decomposition when
/// a constituent has no explicit local data.
pub fn lfunction_json(ctx: &ParamContext, g: usize, p: u64) -> Result<serde_json::Value> {
    if !ctx.primes.contains(&p) {
        return Err(Error::Invalid(format!("{p} is not a prime within the recorded bound")));
    }
    let (param, _) = psi(ctx, g)?;
    match param.euler_factor(p) {
        Ok(f) => Ok(serde_json::json!({
            "g": g,
            "p": p,
            "parameter": param.notation(),
            "degree": f.len() - 1,
            "euler_factor": poly::format_rat(&f, "T"),
            "coefficients": f.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })),
        Err(Error::SymbolicPiece(piece)) => Ok(serde_json::json!({
            "g": g,
            "p": p,
            "parameter": param.notation(),
            "blocked_by": piece,
            "decomposition": param.local[&p].iter().map(|b| match b {
                LocalBlock::Symbolic { name, degree } => serde_json::json!({"symbolic": name, "degree": degree}),
                LocalBlock::Explicit { poly, shift } => serde_json::json!({
                    "explicit": poly::format_int(poly, "X"),
                    "shift": shift.to_string(),
                }),
            }).collect::<Vec<_>>(),
        })),
        Err(e) => Err(e),
    }
}

/// `τ(n)` for small `n` as `i64`, for reports.
pub fn tau(ctx: &ParamContext, n: usize) -> Option<i64> {
    ctx.delta11.coeffs.get(n)?.to_i64()
}

/// `det(1 − cT)` is `(−1)^n`-palindromic when `c` has determinant one and
/// is closed under inversion.
pub fn is_palindromic(f: &[BigRational]) -> bool {
    let n = f.len() - 1;
    (0..=n).all(|k| if n.is_multiple_of(2) { f[k] == f[n - k] } else { f[k] == -&f[n - k] })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> ParamContext {
        ParamContext::new(30).unwrap()
    }

    fn naive_delta(n: usize) -> Vec<BigInt> {
        // q·Π(1 − q^k)^24 by multiplying one factor at a time
        let mut f = vec![BigInt::zero(); n];
        f[0] = BigInt::one();
        for k in 1..n {
            for _ in 0..24 {
                for i in (k..n).rev() {
                    let t = f[i - k].clone();
                    f[i] -= t;
                }
            }
        }
        let mut out = vec![BigInt::zero()];
        out.extend(f);
        out
    }

    #[test]
    fn tau_matches_product_oracle() {
        let d = delta_qexp(40);
        assert_eq!(d.coeffs, naive_delta(40));
        let t: Vec<i64> = [1, 2, 3, 5].iter().map(|&n| d.coeffs[n].to_i64().unwrap()).collect();
        assert_eq!(t, [1, -24, 252, 4830]);
        assert!(d.is_multiplicative());
        assert!(d.satisfies_hecke_recursion(2) && d.satisfies_hecke_recursion(3));
    }

    #[test]
    fn delta17_is_an_eigenform() {
        let d = delta17_qexp(40);
        assert_eq!(d.coeffs[1], BigInt::one());
        assert!(d.is_multiplicative());
        for p in [2, 3, 5] {
            assert!(d.satisfies_hecke_recursion(p));
        }
    }

    #[test]
    fn brackets() {
        let c = ctx();
        let one = c.bracket(1);
        assert_eq!(one.inf_char, vec![Rational64::zero()]);
        assert_eq!(one.euler_factor(7).unwrap(), vec![BigRational::one(), -BigRational::one()]);
        let seven = c.bracket(7);
        assert_eq!(seven.inf_char, (-3..=3).rev().map(Rational64::from_integer).collect::<Vec<_>>());
        let b25 = c.bracket(25);
        assert_eq!(b25.inf_char.first(), Some(&Rational64::from_integer(12)));
        assert_eq!(b25.inf_char.last(), Some(&Rational64::from_integer(-12)));
    }

    #[test]
    fn delta_data() {
        let c = ctx();
        let d = c.delta(11).unwrap();
        assert_eq!(d.inf_char, vec![Rational64::new(11, 2), Rational64::new(-11, 2)]);
        for (&p, blocks) in &d.local {
            let LocalBlock::Explicit { poly, .. } = &blocks[0] else { panic!() };
            // determinant one after removing p^{11/2} from each root
            assert_eq!(poly[0], BigInt::from(p).pow(11));
        }
        let d = c.delta_wv(21, 13).unwrap();
        let h = |a, b| Rational64::new(a, b);
        assert_eq!(d.inf_char, vec![h(21, 2), h(13, 2), h(-13, 2), h(-21, 2)]);
        assert!(d.euler_factor(2).is_err());
    }

    #[test]
    fn psi_24_at_two() {
        let c = ctx();
        let (p, _) = psi(&c, 24).unwrap();
        assert_eq!(p.n, 49);
        assert_eq!(p.inf_char.len(), 49);
        assert!(p.is_self_dual());
        let f = p.euler_factor(2).unwrap();
        assert_eq!(f.len(), 50);
        assert!(is_palindromic(&f));
        // −trace: τ(2)·Σ_{i<12} 2^{−i} from Δ11[12], Σ_{j<25} 2^{12−j} from [25]
        let two = BigRational::from_integer(2.into());
        let mut trace = BigRational::zero();
        for i in 0..12 {
            trace += BigRational::from_integer((-24).into()) / two.pow(i);
        }
        for j in 0..25 {
            trace += two.pow(12 - j);
        }
        assert_eq!(f[1], -trace);
    }

    #[test]
    fn psi_prime_16_degree() {
        let c = ctx();
        let (_, pp) = psi(&c, 16).unwrap();
        let f = pp.euler_factor(2).unwrap();
        assert_eq!(f.len() - 1, 24);
        assert!(is_palindromic(&f));
    }

    #[test]
    fn table_checks_pass() {
        let checks = verify_table_and_rallis(&ctx()).unwrap();
        for ch in &checks {
            assert!(ch.pass, "{ch:?}");
        }
    }

    #[test]
    fn parse_round_trip() {
        for s in ["Δ11[12] ⊕ [25]", "Δ19,7[6]", "(Δ17 ⊕ [1])[2]"] {
            assert_eq!(ParamExpr::parse(s).unwrap().to_string(), s);
        }
        assert_eq!(ParamExpr::parse("D11[12] + [25]").unwrap().to_string(), "Δ11[12] ⊕ [25]");
        assert!(ParamExpr::parse("Δ11[").is_err());
    }

    #[test]
    fn symbolic_factor_is_reported() {
        let c = ctx();
        let j = lfunction_json(&c, 8, 2).unwrap();
        assert!(j.get("blocked_by").is_some());
        let j = lfunction_json(&c, 24, 3).unwrap();
        assert_eq!(j["degree"], 49);
    }
}
