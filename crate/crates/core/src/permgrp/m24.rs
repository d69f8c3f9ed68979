//! M24 as the automorphism group of the Golay code: generator discovery,
//! cached class representatives, and the average characteristic polynomials.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{bsgs, CycleShape, GroupChain, Perm, DEGREE};
use crate::error::{Error, Result};
use crate::golay::{subsets, GolayCode, OMEGA};
use crate::poly::{self, IntPoly};

pub const M24_ORDER: u64 = 244_823_040;
const CACHE_VERSION: u32 = 1;
/// Consecutive already-contained random automorphisms required before the
/// generator search stops.
const SATURATION_RUN: usize = 8;

/// One row of a cycle-shape class table: `cent = |G| / card` per class and
/// the number of classes sharing the shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRow {
    pub shape: CycleShape,
    pub cent: u64,
    pub classes: u32,
}

impl ClassRow {
    /// Number of elements with this shape.
    pub fn card(&self, order: u64) -> u64 {
        self.classes as u64 * (order / self.cent)
    }
}

/// Shapes of the nontrivial elements of a permutation group with their
/// centralizer orders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTable {
    pub order: u64,
    pub rows: Vec<ClassRow>,
}

impl ClassTable {
    /// The Frobenius table for M24 on 24 points. Entries written `n/2`
    /// (two classes of `|G|/n` elements each) are stored as `cent = n`,
    /// `classes = 2`.
    pub fn m24() -> Self {
        const ROWS: [(&str, u64, u32); 20] = [
            ("1^8 2^8", 21504, 1),
            ("2^12", 7680, 1),
            ("1^6 3^6", 1080, 1),
            ("3^8", 504, 1),
            ("2^4 4^4", 384, 1),
            ("1^4 2^2 4^4", 128, 1),
            ("4^6", 96, 1),
            ("1^4 5^4", 60, 1),
            ("1^2 2^2 3^2 6^2", 24, 1),
            ("6^4", 24, 1),
            ("1^3 7^3", 42, 2),
            ("1^2 2 4 8^2", 16, 1),
            ("2^2 10^2", 20, 1),
            ("1^2 11^2", 11, 1),
            ("2 4 6 12", 12, 1),
            ("12^2", 12, 1),
            ("1 2 7 14", 14, 2),
            ("1 3 5 15", 15, 2),
            ("3 21", 21, 2),
            ("1 23", 23, 2),
        ];
        ClassTable {
            order: M24_ORDER,
            rows: ROWS
                .iter()
                .map(|&(s, cent, classes)| ClassRow {
                    shape: CycleShape::parse(s).expect("table shape parses"),
                    cent,
                    classes,
                })
                .collect(),
        }
    }

    pub fn trivial() -> Self {
        ClassTable { order: 1, rows: Vec::new() }
    }

    pub fn validate(&self) -> Result<()> {
        let mut total = 0u64;
        for r in &self.rows {
            if r.shape.degree() != DEGREE {
                return Err(Error::InvalidTable(format!("shape {} is not a partition of 24", r.shape)));
            }
            if r.cent == 0 || !self.order.is_multiple_of(r.cent) {
                return Err(Error::InvalidTable(format!("cent {} does not divide the order", r.cent)));
            }
            total += r.card(self.order);
        }
        if total + 1 != self.order {
            return Err(Error::InvalidTable(format!(
                "class sizes sum to {total}, expected {}",
                self.order - 1
            )));
        }
        Ok(())
    }

    pub fn row_of(&self, shape: &CycleShape) -> Option<&ClassRow> {
        self.rows.iter().find(|r| &r.shape == shape)
    }
}

/// `(1/|G|) Σ_γ det(t − γ)` from cycle shapes alone.
pub fn avg_charpoly_m24(table: &ClassTable) -> Result<IntPoly> {
    table.validate()?;
    let mut acc = shape_charpoly(&CycleShape(vec![(1, DEGREE)]));
    for r in &table.rows {
        poly::add_assign_scaled(&mut acc, &shape_charpoly(&r.shape), &BigInt::from(r.card(table.order)));
    }
    divide_exact(acc, &BigInt::from(table.order))
}

fn shape_charpoly(shape: &CycleShape) -> IntPoly {
    let mut p = poly::from_i64(&[1]);
    for &(len, mult) in &shape.0 {
        for _ in 0..mult {
            p = poly::mul(&p, &poly::binomial_factor(len, 1));
        }
    }
    p
}

fn divide_exact(mut p: IntPoly, d: &BigInt) -> Result<IntPoly> {
    for c in p.iter_mut() {
        if !(&*c % d).is_zero() {
            return Err(Error::InvalidTable("average is not integral".into()));
        }
        *c /= d;
    }
    poly::trim(&mut p);
    Ok(p)
}

/// `(1/(|code|·W)) Σ_{c, γ} w_γ det(t − cγ)` where the code acts by sign
/// changes and `reps` carries weighted permutations with total weight `W`.
pub fn avg_signed_charpoly(codewords: &[u32], reps: &[(Perm, u64)]) -> Result<IntPoly> {
    let total_weight: u128 = reps.iter().map(|&(_, w)| w as u128).sum();
    let per_rep: Vec<Vec<i128>> = reps
        .par_iter()
        .map(|(p, w)| {
            let cycles = p.cycle_masks();
            let mut patterns: HashMap<u32, u64> = HashMap::new();
            for &c in codewords {
                let mut pat = 0u32;
                for (k, &z) in cycles.iter().enumerate() {
                    pat |= ((c & z).count_ones() & 1) << k;
                }
                *patterns.entry(pat).or_insert(0) += 1;
            }
            let mut acc = vec![0i128; DEGREE + 1];
            for (pat, count) in patterns {
                let mut f = vec![0i128; DEGREE + 1];
                f[0] = 1;
                let mut deg = 0;
                for (k, &z) in cycles.iter().enumerate() {
                    let len = z.count_ones() as usize;
                    let s: i128 = if pat >> k & 1 == 1 { -1 } else { 1 };
                    // multiply by t^len − s
                    for d in (0..=deg).rev() {
                        let c = f[d];
                        f[d + len] += c;
                        f[d] = -s * c;
                    }
                    deg += len;
                }
                for (a, b) in acc.iter_mut().zip(&f) {
                    *a += b * count as i128 * *w as i128;
                }
            }
            acc
        })
        .collect();
    let mut sum = vec![0i128; DEGREE + 1];
    for r in per_rep {
        for (a, b) in sum.iter_mut().zip(r) {
            *a += b;
        }
    }
    let denom = total_weight * codewords.len() as u128;
    let mut out = Vec::with_capacity(DEGREE + 1);
    for c in sum {
        if c % denom as i128 != 0 {
            return Err(Error::InvalidTable("signed average is not integral".into()));
        }
        out.push(BigInt::from(c / denom as i128));
    }
    poly::trim(&mut out);
    Ok(out)
}

/// The average over `N = 2¹²:M24` of `det(t − cγ)`, from one representative
/// per conjugacy class (the identity is added implicitly).
pub fn avg_charpoly_n(code: &GolayCode, class_reps: &[Perm], table: &ClassTable) -> Result<IntPoly> {
    table.validate()?;
    let mut per_shape: BTreeMap<CycleShape, u32> = BTreeMap::new();
    let mut weighted = vec![(Perm::identity(), 1u64)];
    for p in class_reps {
        let shape = p.shape();
        let row = table.row_of(&shape).ok_or_else(|| Error::ShapeMismatch {
            expected: "a shape listed in the table".into(),
            found: shape.to_string(),
        })?;
        *per_shape.entry(shape).or_insert(0) += 1;
        weighted.push((*p, table.order / row.cent));
    }
    for r in &table.rows {
        let n = per_shape.get(&r.shape).copied().unwrap_or(0);
        if n != r.classes {
            return Err(Error::ShapeMismatch {
                expected: format!("{} representative(s) of shape {}", r.classes, r.shape),
                found: format!("{n}"),
            });
        }
    }
    let words: Vec<u32> = code.codewords.iter().map(|c| c.0).collect();
    avg_signed_charpoly(&words, &weighted)
}

/// Extends partial maps of Ω octad-consistently.
struct Extender {
    through: HashMap<u32, u32>,
    octads_of: Vec<Vec<u32>>,
}

impl Extender {
    fn new(code: &GolayCode) -> Self {
        let mut through = HashMap::with_capacity(42504);
        let mut octads_of = vec![Vec::new(); DEGREE];
        for o in &code.octads {
            for s in subsets(&o.points(), 5) {
                through.insert(s, o.0);
            }
            for p in o.points() {
                octads_of[p].push(o.0);
            }
        }
        Extender { through, octads_of }
    }

    fn consistent(&self, img: &[u8; DEGREE], assigned: u32, x: usize) -> bool {
        for &o in &self.octads_of[x] {
            let a = o & assigned;
            if a.count_ones() < 5 {
                continue;
            }
            let mut five = 0u32;
            let mut image = 0u32;
            let mut m = a;
            let mut k = 0;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                if k < 5 {
                    five |= 1 << img[i];
                }
                image |= 1 << img[i];
                k += 1;
            }
            match self.through.get(&five) {
                Some(&target) if target & image == image => {}
                _ => return false,
            }
        }
        true
    }

    fn extend<R: Rng>(&self, img: &mut [u8; DEGREE], assigned: u32, used: u32, x: usize, rng: &mut R) -> bool {
        if x == DEGREE {
            return true;
        }
        let mut cands: Vec<u8> = (0..DEGREE as u8).filter(|&y| used >> y & 1 == 0).collect();
        cands.shuffle(rng);
        for y in cands {
            img[x] = y;
            let a = assigned | 1 << x;
            if self.consistent(img, a, x) && self.extend(img, a, used | 1 << y, x + 1, rng) {
                return true;
            }
        }
        false
    }

    /// A code automorphism sending `0, …, 4` to a random 5-tuple.
    fn random_automorphism<R: Rng>(&self, code: &GolayCode, rng: &mut R) -> Result<Perm> {
        let mut pts: Vec<u8> = (0..DEGREE as u8).collect();
        pts.shuffle(rng);
        let mut img = [0u8; DEGREE];
        let mut used = 0u32;
        for i in 0..5 {
            img[i] = pts[i];
            used |= 1 << pts[i];
        }
        if !self.extend(&mut img, 0b11111, used, 5, rng) {
            return Err(Error::Construction("partial map admits no extension".into()));
        }
        let p = Perm::new(img).ok_or_else(|| Error::Construction("extension is not a bijection".into()))?;
        if !preserves_code(code, &p) {
            return Err(Error::Construction("extension does not preserve the code".into()));
        }
        Ok(p)
    }
}

pub fn preserves_code(code: &GolayCode, p: &Perm) -> bool {
    code.generators.iter().all(|g| code.is_codeword(p.apply_mask(g.0)))
}

/// Random code automorphisms are added until `SATURATION_RUN` consecutive
/// samples already lie in the generated group.
pub fn discover_generators(code: &GolayCode, seed: u64) -> Result<Vec<Perm>> {
    let ext = Extender::new(code);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens: Vec<Perm> = Vec::new();
    let mut chain = bsgs(&gens);
    let mut run = 0;
    let mut draws = 0;
    while run < SATURATION_RUN {
        draws += 1;
        if draws > 10_000 {
            return Err(Error::Construction("generator search did not saturate".into()));
        }
        let p = ext.random_automorphism(code, &mut rng)?;
        if chain.contains(&p) {
            run += 1;
        } else {
            run = 0;
            gens.push(p);
            chain = bsgs(&gens);
        }
    }
    Ok(gens)
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    seed: u64,
    generators: Vec<Perm>,
    class_reps: Vec<Perm>,
}

/// M24 with its stabilizer chain and one representative per class.
#[derive(Clone, Debug)]
pub struct M24 {
    pub seed: u64,
    pub generators: Vec<Perm>,
    pub chain: GroupChain,
    /// Ordered by table row; the second class of a split shape is
    /// represented by the inverse of the first.
    pub class_reps: Vec<Perm>,
}

impl M24 {
    pub fn build(code: &GolayCode, seed: u64) -> Result<Self> {
        let generators = discover_generators(code, seed)?;
        let chain = bsgs(&generators);
        let class_reps = find_class_reps(&chain, &ClassTable::m24(), seed)?;
        Ok(M24 { seed, generators, chain, class_reps })
    }

    fn cache_path(dir: &Path, seed: u64) -> PathBuf {
        dir.join(format!("m24-v{CACHE_VERSION}-seed{seed}.json"))
    }

    /// Loads from `dir` when a matching cache exists and still checks out,
    /// otherwise builds and writes the cache.
    pub fn load_or_build(code: &GolayCode, dir: Option<&Path>, seed: u64) -> Result<Self> {
        let Some(dir) = dir else {
            return M24::build(code, seed);
        };
        let path = M24::cache_path(dir, seed);
        if let Ok(text) = std::fs::read_to_string(&path) {
            if let Ok(c) = serde_json::from_str::<CacheFile>(&text) {
                if let Some(m) = M24::from_cache(code, c, seed) {
                    return Ok(m);
                }
            }
        }
        let m = M24::build(code, seed)?;
        std::fs::create_dir_all(dir)?;
        let c = CacheFile {
            version: CACHE_VERSION,
            seed,
            generators: m.generators.clone(),
            class_reps: m.class_reps.clone(),
        };
        std::fs::write(&path, serde_json::to_string_pretty(&c)?)?;
        Ok(m)
    }

    fn from_cache(code: &GolayCode, c: CacheFile, seed: u64) -> Option<Self> {
        if c.version != CACHE_VERSION || c.seed != seed {
            return None;
        }
        if !c.generators.iter().all(|g| preserves_code(code, g)) {
            return None;
        }
        let chain = bsgs(&c.generators);
        if !c.class_reps.iter().all(|p| chain.contains(p)) {
            return None;
        }
        Some(M24 { seed, generators: c.generators, chain, class_reps: c.class_reps })
    }

    pub fn order(&self) -> u64 {
        self.chain.order_u64()
    }

    pub fn class_rep(&self, shape: &str) -> Option<Perm> {
        let s = CycleShape::parse(shape)?;
        self.class_reps.iter().copied().find(|p| p.shape() == s)
    }
}

/// Samples uniform elements (and their powers) until every table shape has
/// appeared.
pub fn find_class_reps(chain: &GroupChain, table: &ClassTable, seed: u64) -> Result<Vec<Perm>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc1a55);
    let mut found: HashMap<CycleShape, Perm> = HashMap::new();
    let mut draws = 0u32;
    while found.len() < table.rows.len() {
        draws += 1;
        if draws > 200_000 {
            return Err(Error::Construction("class representative search did not cover the table".into()));
        }
        let g = chain.random_element(&mut rng);
        let ord = g.order();
        for k in 1..ord {
            if ord.is_multiple_of(k) {
                let h = g.pow(k as u32);
                let s = h.shape();
                if table.row_of(&s).is_none() {
                    return Err(Error::ShapeMismatch { expected: "a tabulated shape".into(), found: s.to_string() });
                }
                found.entry(s).or_insert(h);
            }
        }
    }
    let mut reps = Vec::new();
    for r in &table.rows {
        let p = found[&r.shape];
        reps.push(p);
        if r.classes == 2 {
            reps.push(p.inverse());
        }
    }
    Ok(reps)
}

/// A representative of each of the sixteen orientable types `C + P`.
pub fn orientable_type_reps(code: &GolayCode) -> Vec<(String, u32)> {
    let octad = code.octads[0].0;
    let dodecad = code.dodecads[0].0;
    let cs = [("0", 0u32), ("octad", octad), ("dodecad", dodecad), ("16-set", OMEGA ^ octad), ("Ω", OMEGA)];
    let mut out = Vec::new();
    for &(name, c) in &cs {
        out.push((name.to_string(), c));
        let inside = if c == 0 { None } else { Some(c.trailing_zeros()) };
        let outside = if c == OMEGA { None } else { Some((!c & OMEGA).trailing_zeros()) };
        if let Some(i) = inside {
            out.push((format!("{name} − point"), c & !(1 << i)));
        }
        if let Some(o) = outside {
            out.push((format!("{name} + point"), c | 1 << o));
        }
        if let (Some(i), Some(o)) = (inside, outside) {
            out.push((format!("{name} − point + point"), (c & !(1 << i)) | 1 << o));
        }
    }
    out
}

/// Orbit census of all 2²⁴ subsets with orientability, by size: entry `g`
/// is `(orbits, orientable orbits)`.
pub fn subset_orbit_census(gens: &[Perm]) -> Vec<(u64, u64)> {
    let n = 1usize << DEGREE;
    let mut parent: Vec<u32> = (0..n as u32).collect();
    // parity of the orientation relative to the parent
    let mut rel: Vec<u8> = vec![0; n];
    let mut bad: Vec<bool> = vec![false; n];

    fn find(parent: &mut [u32], rel: &mut [u8], x: u32) -> (u32, u8) {
        let mut path = Vec::new();
        let mut cur = x;
        let mut acc = 0u8;
        while parent[cur as usize] != cur {
            path.push(cur);
            acc ^= rel[cur as usize];
            cur = parent[cur as usize];
        }
        let root = cur;
        // compress: each node's parity to root is the suffix xor
        let mut to_root = acc;
        for &p in &path {
            let r = rel[p as usize];
            parent[p as usize] = root;
            rel[p as usize] = to_root;
            to_root ^= r;
        }
        (root, acc)
    }

    for s in 0..n as u32 {
        for g in gens {
            let (t, sign) = g.image_with_sign(s);
            let (rs, ps) = find(&mut parent, &mut rel, s);
            let (rt, pt) = find(&mut parent, &mut rel, t);
            if rs == rt {
                if ps ^ pt != sign {
                    bad[rs as usize] = true;
                }
            } else {
                parent[rt as usize] = rs;
                rel[rt as usize] = ps ^ pt ^ sign;
                if bad[rt as usize] {
                    bad[rs as usize] = true;
                }
            }
        }
    }
    let mut out = vec![(0u64, 0u64); DEGREE + 1];
    for s in 0..n as u32 {
        if parent[s as usize] == s {
            let k = s.count_ones() as usize;
            out[k].0 += 1;
            if !bad[s as usize] {
                out[k].1 += 1;
            }
        }
    }
    out
}

/// Coefficient of `t^{24−g}` times `(−1)^g`, as a signed integer per `g`.
pub fn invariant_dims_from_charpoly(p: &[BigInt]) -> Vec<i64> {
    (0..=DEGREE)
        .map(|g| {
            let c = p.get(DEGREE - g).cloned().unwrap_or_default();
            let c = c.to_i64().expect("small coefficient");
            if g % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m24_table_is_consistent() {
        let t = ClassTable::m24();
        t.validate().unwrap();
        assert_eq!(t.rows.len(), 20);
        assert_eq!(t.rows.iter().map(|r| r.classes).sum::<u32>(), 25);
    }

    #[test]
    fn broken_table_is_rejected() {
        let mut t = ClassTable::m24();
        t.rows[0].cent = 7680;
        assert!(matches!(avg_charpoly_m24(&t), Err(Error::InvalidTable(_))));
    }

    #[test]
    fn trivial_table_gives_power_of_linear_factor() {
        let p = avg_charpoly_m24(&ClassTable::trivial()).unwrap();
        let mut expected = poly::from_i64(&[1]);
        for _ in 0..24 {
            expected = poly::mul(&expected, &poly::from_i64(&[-1, 1]));
        }
        assert_eq!(p, expected);
    }

    #[test]
    fn trivial_code_signed_average() {
        let p = avg_signed_charpoly(&[0, OMEGA], &[(Perm::identity(), 1)]).unwrap();
        let mut a = poly::from_i64(&[1]);
        let mut b = poly::from_i64(&[1]);
        for _ in 0..24 {
            a = poly::mul(&a, &poly::from_i64(&[-1, 1]));
            b = poly::mul(&b, &poly::from_i64(&[1, 1]));
        }
        let half: IntPoly = a.iter().zip(&b).map(|(x, y)| (x + y) / 2).collect();
        assert_eq!(p, half);
    }

}
