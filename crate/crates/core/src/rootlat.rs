//! Simply-laced root systems (Bourbaki numbering), Borel–de Siebenthal
//! sublattices, rootless linear forms, and the lattices `Q_g`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intmat;
use crate::lattice::{isometry_test, SearchLimits};
use crate::lattice::{residue_with_lifts, IntLattice};
use crate::linkform::LinkingSpace;

/// Irreducible simply-laced type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    A,
    D,
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Component {
    pub family: Family,
    pub rank: usize,
}

impl Component {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
        };
        if !ok {
            return Err(Error::InvalidType(format!("{family:?}{rank}")));
        }
        // D₃ is A₃; keep one name
        if family == Family::D && rank == 3 {
            return Ok(Component { family: Family::A, rank: 3 });
        }
        Ok(Component { family, rank })
    }

    pub fn root_count(self) -> usize {
        let l = self.rank;
        match (self.family, l) {
            (Family::A, _) => l * (l + 1),
            (Family::D, _) => 2 * l * (l - 1),
            (Family::E, 6) => 72,
            (Family::E, 7) => 126,
            _ => 240,
        }
    }

    pub fn coxeter_number(self) -> usize {
        self.root_count() / self.rank
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

/// A root system type as a sorted multiset of components.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RootSystemType(pub Vec<Component>);

impl RootSystemType {
    pub fn new(mut comps: Vec<Component>) -> Self {
        comps.sort();
        RootSystemType(comps)
    }

    /// Parses strings like `"2A4"`, `"E8"`, `"A2 + 2D4"`, or `"0"` for empty.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidType(s.to_string());
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(RootSystemType::default());
        }
        let mut comps = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            let pos = part.find(|c: char| c.is_ascii_alphabetic()).ok_or_else(bad)?;
            let mult: usize = if pos == 0 { 1 } else { part[..pos].parse().map_err(|_| bad())? };
            let family = match &part[pos..pos + 1] {
                "A" => Family::A,
                "D" => Family::D,
                "E" => Family::E,
                _ => return Err(bad()),
            };
            let rank: usize = part[pos + 1..].parse().map_err(|_| bad())?;
            let c = Component::new(family, rank)?;
            comps.extend(std::iter::repeat_n(c, mult));
        }
        Ok(RootSystemType::new(comps))
    }

    pub fn rank(&self) -> usize {
        self.0.iter().map(|c| c.rank).sum()
    }

    pub fn root_count(&self) -> usize {
        self.0.iter().map(|c| c.root_count()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for RootSystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let mut counts: BTreeMap<Component, usize> = BTreeMap::new();
        for &c in &self.0 {
            *counts.entry(c).or_default() += 1;
        }
        let parts: Vec<String> = counts
            .iter()
            .map(|(c, &m)| if m == 1 { c.to_string() } else { format!("{m}{c}") })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Root datum of an irreducible type; the lattice basis is the ordered
/// list of simple roots, so lattice coordinates are simple-root coordinates.
#[derive(Clone, Debug)]
pub struct RootDatum {
    pub component: Component,
    pub lattice: IntLattice,
    /// All roots, in simple-root coordinates.
    pub roots: Vec<Vec<i64>>,
    pub positive_roots: Vec<Vec<i64>>,
    pub highest_root: Vec<i64>,
    pub marks: Vec<i64>,
    pub coxeter_number: i64,
    /// `ϖᵢ` in simple-root coordinates (rows of the inverse Cartan matrix).
    pub fundamental_weights: Vec<Vec<BigRational>>,
    pub weyl_vector: Vec<BigRational>,
}

fn unit(n: usize, i: usize, v: i64) -> Vec<i64> {
    let mut e = vec![0; n];
    e[i] = v;
    e
}

/// Simple roots in an ambient model, with the scale.
fn simple_roots(c: Component) -> (Vec<Vec<i64>>, i64) {
    let l = c.rank;
    match c.family {
        Family::A => {
            let rows = (0..l)
                .map(|i| {
                    let mut v = unit(l + 1, i, 1);
                    v[i + 1] = -1;
                    v
                })
                .collect();
            (rows, 1)
        }
        Family::D => {
            let mut rows: Vec<Vec<i64>> = (0..l - 1)
                .map(|i| {
                    let mut v = unit(l, i, 1);
                    v[i + 1] = -1;
                    v
                })
                .collect();
            let mut last = unit(l, l - 2, 1);
            last[l - 1] = 1;
            rows.push(last);
            (rows, 1)
        }
        Family::E => {
            // E₈ in the even coordinate system, doubled (scale 4):
            // α₁ = ½(1,−1,…,−1,1), α₂ = e₁+e₂, α_k = e_{k−2} − e_{k−3}.
            let mut rows = vec![vec![1, -1, -1, -1, -1, -1, -1, 1], {
                let mut v = unit(8, 0, 2);
                v[1] = 2;
                v
            }];
            for k in 3..=8 {
                let mut v = unit(8, k - 2, 2);
                v[k - 3] = -2;
                rows.push(v);
            }
            rows.truncate(l);
            (rows, 4)
        }
    }
}

impl RootDatum {
    pub fn build(family: Family, rank: usize) -> Result<Self> {
        let component = Component::new(family, rank)?;
        let (rows, scale) = simple_roots(component);
        let lattice = IntLattice::from_basis(rows, scale)?;
        let l = component.rank;
        if lattice.gram.iter().enumerate().any(|(i, r)| r[i] != 2) {
            return Err(Error::Construction("simple roots must have norm 2".into()));
        }
        let roots = all_roots(&lattice.gram);
        let positive_roots: Vec<Vec<i64>> =
            roots.iter().filter(|r| r.iter().all(|&x| x >= 0)).cloned().collect();
        let highest_root = positive_roots
            .iter()
            .max_by_key(|r| r.iter().sum::<i64>())
            .cloned()
            .ok_or_else(|| Error::Construction("no positive roots".into()))?;
        let marks = highest_root.clone();
        let coxeter_number = marks.iter().sum::<i64>() + 1;
        let cartan = intmat::to_big(&lattice.gram);
        let inv = intmat::inverse(&cartan).ok_or_else(|| Error::Construction("singular Cartan".into()))?;
        let weyl_vector = (0..l)
            .map(|j| (0..l).map(|i| inv[i][j].clone()).sum())
            .collect();
        Ok(RootDatum {
            component,
            lattice,
            roots,
            positive_roots,
            highest_root,
            marks,
            coxeter_number,
            fundamental_weights: inv,
            weyl_vector,
        })
    }

    /// Parses labels like `"E8"` or `"D16"`.
    pub fn from_label(label: &str) -> Result<Self> {
        let t = RootSystemType::parse(label)?;
        match t.0.as_slice() {
            [c] => RootDatum::build(c.family, c.rank),
            _ => Err(Error::InvalidType(label.to_string())),
        }
    }

    pub fn rank(&self) -> usize {
        self.component.rank
    }

    pub fn label(&self) -> String {
        self.component.to_string()
    }

    /// `x·y` for simple-root coordinates with rational entries.
    pub fn ip_rational(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let g = &self.lattice.gram;
        let mut s = BigRational::zero();
        for i in 0..x.len() {
            for j in 0..y.len() {
                if g[i][j] != 0 {
                    s += &x[i] * &y[j] * BigRational::from_integer(g[i][j].into());
                }
            }
        }
        s
    }

    pub fn rho_norm(&self) -> BigRational {
        self.ip_rational(&self.weyl_vector, &self.weyl_vector)
    }

    /// Checks `|R| = lh`, `Σnᵢ = h−1`, `ρ·ρ = lh(h+1)/12`, `ϖᵢ·αⱼ = δᵢⱼ`,
    /// and that `ρ` is the half sum of positive roots.
    pub fn check_identities(&self) -> Vec<(String, bool)> {
        let l = self.rank() as i64;
        let h = self.coxeter_number;
        let mut out: Vec<(String, bool)> = vec![
            ("|R| = l h".into(), self.roots.len() as i64 == l * h),
            ("sum of marks = h - 1".into(), self.marks.iter().sum::<i64>() == h - 1),
            (
                "rho.rho = l h (h+1) / 12".into(),
                self.rho_norm() == BigRational::new((l * h * (h + 1)).into(), 12.into()),
            ),
            ("h matches the classical value".into(), h as usize == self.component.coxeter_number()),
        ];
        let n = self.rank();
        let duality = (0..n).all(|i| {
            (0..n).all(|j| {
                let a: Vec<BigRational> =
                    (0..n).map(|k| BigRational::from_integer(i64::from(k == j).into())).collect();
                self.ip_rational(&self.fundamental_weights[i], &a) == BigRational::from_integer(i64::from(i == j).into())
            })
        });
        out.push(("fundamental weights dual to simple roots".into(), duality));
        let half_sum: Vec<BigRational> = (0..n)
            .map(|k| {
                BigRational::new(self.positive_roots.iter().map(|r| r[k]).sum::<i64>().into(), 2.into())
            })
            .collect();
        out.push(("rho is the half sum of positive roots".into(), half_sum == self.weyl_vector));
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rat = |v: &[BigRational]| -> Vec<String> { v.iter().map(|x| x.to_string()).collect() };
        serde_json::json!({
            "type": self.label(),
            "coxeter_number": self.coxeter_number,
            "marks": self.marks,
            "weyl_vector": rat(&self.weyl_vector),
            "roots": self.roots,
        })
    }
}

/// Roots of the root lattice with Cartan matrix `gram`, generated from the
/// simple roots by reflections, in simple-root coordinates.
fn all_roots(gram: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = gram.len();
    let mut seen: std::collections::BTreeSet<Vec<i64>> = (0..n).map(|i| unit(n, i, 1)).collect();
    let mut frontier: Vec<Vec<i64>> = seen.iter().cloned().collect();
    while let Some(r) = frontier.pop() {
        for j in 0..n {
            let ip: i64 = (0..n).map(|k| r[k] * gram[k][j]).sum();
            if ip == 0 {
                continue;
            }
            let mut s = r.clone();
            s[j] -= ip;
            if seen.insert(s.clone()) {
                frontier.push(s);
            }
        }
    }
    seen.into_iter().collect()
}

/// Root lattice of a (possibly reducible) type, basis = concatenated simple roots.
pub fn root_lattice(t: &RootSystemType) -> Result<IntLattice> {
    let mut acc: Option<IntLattice> = None;
    for c in &t.0 {
        let d = RootDatum::build(c.family, c.rank)?;
        acc = Some(match acc {
            None => d.lattice,
            Some(a) => a.direct_sum(&d.lattice)?,
        });
    }
    acc.ok_or_else(|| Error::InvalidType("empty".into()))
}

/// Type of the root system formed by `roots` (coordinates in `l`, both
/// signs or one of each pair): components of the `|x·y| = 1` graph,
/// identified by rank and root count.
pub fn classify_roots(l: &IntLattice, roots: &[Vec<i64>]) -> Result<RootSystemType> {
    let mut all: Vec<Vec<i64>> = Vec::with_capacity(2 * roots.len());
    let mut seen = std::collections::HashSet::new();
    for r in roots {
        let neg: Vec<i64> = r.iter().map(|x| -x).collect();
        for v in [r.clone(), neg] {
            if seen.insert(v.clone()) {
                all.push(v);
            }
        }
    }
    let n = all.len();
    let gram_rows: Vec<Vec<i64>> = all
        .iter()
        .map(|v| (0..l.rank).map(|j| (0..l.rank).map(|k| v[k] * l.gram[k][j]).sum()).collect())
        .collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    // `all` holds ± pairs at positions 2k, 2k+1
    for k in 0..n / 2 {
        parent[2 * k] = 2 * k + 1;
    }
    for i in 0..n {
        for j in i + 1..n {
            let ip: i64 = gram_rows[i].iter().zip(&all[j]).map(|(a, b)| a * b).sum();
            if ip.abs() == 1 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        comps.entry(r).or_default().push(i);
    }
    let mut out = Vec::new();
    for members in comps.values() {
        let vecs: Vec<Vec<BigInt>> =
            members.iter().map(|&i| all[i].iter().map(|&x| BigInt::from(x)).collect()).collect();
        let rank = intmat::rank(&vecs);
        let count = members.len();
        let candidates = [Family::A, Family::D, Family::E];
        let c = candidates
            .iter()
            .filter_map(|&f| Component::new(f, rank).ok())
            .find(|c| c.rank == rank && c.root_count() == count)
            .ok_or_else(|| Error::Construction(format!("unrecognized root component: rank {rank}, {count} roots")))?;
        out.push(c);
    }
    Ok(RootSystemType::new(out))
}

/// Root type of a lattice, from its norm-2 vectors.
pub fn root_system_of(l: &IntLattice) -> Result<RootSystemType> {
    classify_roots(l, &l.roots()?)
}

/// Dynkin type of a set of simple roots given by their Gram matrix.
pub fn dynkin_type(gram: &[Vec<i64>]) -> Result<RootSystemType> {
    let n = gram.len();
    let adj: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).filter(|&j| j != i && gram[i][j] != 0).collect()).collect();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut nodes = vec![s];
        comp[s] = s;
        let mut i = 0;
        while i < nodes.len() {
            for &y in &adj[nodes[i]] {
                if comp[y] == usize::MAX {
                    comp[y] = s;
                    nodes.push(y);
                }
            }
            i += 1;
        }
        let k = nodes.len();
        let edges: usize = nodes.iter().map(|&x| adj[x].len()).sum::<usize>() / 2;
        if edges != k - 1 || nodes.iter().any(|&x| gram[x][x] != 2 || adj[x].iter().any(|&y| gram[x][y] != -1)) {
            return Err(Error::InvalidType("not a simply-laced Dynkin diagram".into()));
        }
        let branch: Vec<usize> = nodes.iter().copied().filter(|&x| adj[x].len() >= 3).collect();
        let c = match branch.as_slice() {
            [] => Component::new(Family::A, k)?,
            [b] if adj[*b].len() == 3 => {
                let mut arms: Vec<usize> = adj[*b]
                    .iter()
                    .map(|&start| {
                        let (mut prev, mut cur, mut len) = (*b, start, 1);
                        while let Some(&nx) = adj[cur].iter().find(|&&y| y != prev) {
                            prev = cur;
                            cur = nx;
                            len += 1;
                        }
                        len
                    })
                    .collect();
                arms.sort();
                match (arms[0], arms[1]) {
                    (1, 1) => Component::new(Family::D, k)?,
                    (1, 2) if arms[2] <= 4 => Component::new(Family::E, k)?,
                    _ => return Err(Error::InvalidType("not of finite type".into())),
                }
            }
            _ => return Err(Error::InvalidType("not of finite type".into())),
        };
        out.push(c);
    }
    Ok(RootSystemType::new(out))
}

/// `BS_i(R) = {x : x·ϖᵢ ≡ 0 mod nᵢ}` (node `i` is 1-based).
#[derive(Clone, Debug)]
pub struct BorelDeSiebenthal {
    pub node: usize,
    pub mark: i64,
    pub lattice: IntLattice,
    pub root_type: RootSystemType,
    /// Type predicted by removing node `i` from the extended diagram.
    pub diagram_type: RootSystemType,
}

pub fn borel_de_siebenthal(r: &RootDatum, node: usize) -> Result<BorelDeSiebenthal> {
    let l = r.rank();
    if node == 0 || node > l {
        return Err(Error::Invalid(format!("node {node} out of range 1..={l}")));
    }
    let i = node - 1;
    let mark = r.marks[i];
    let lattice = r.lattice.kernel_of_form(&unit(l, i, 1), mark)?;
    // x·ϖᵢ is the i-th simple-root coordinate
    let kept: Vec<Vec<i64>> = r.roots.iter().filter(|x| x[i] % mark == 0).cloned().collect();
    let root_type = classify_roots(&r.lattice, &kept)?;
    // simple system {−α̃} ∪ {αⱼ : j ≠ i}
    let mut simple: Vec<Vec<i64>> = vec![r.highest_root.iter().map(|x| -x).collect()];
    simple.extend((0..l).filter(|&j| j != i).map(|j| unit(l, j, 1)));
    let g = &r.lattice.gram;
    let ip = |x: &[i64], y: &[i64]| -> i64 {
        (0..l).map(|a| (0..l).map(|b| x[a] * g[a][b] * y[b]).sum::<i64>()).sum()
    };
    let sg: Vec<Vec<i64>> = simple.iter().map(|x| simple.iter().map(|y| ip(x, y)).collect()).collect();
    let diagram_type = dynkin_type(&sg)?;
    Ok(BorelDeSiebenthal { node, mark, lattice, root_type, diagram_type })
}

/// Linear forms `Q(R) → Z/p` (given by values on simple roots) classified by
/// whether their kernel contains a root.
#[derive(Clone, Debug, Serialize)]
pub struct RootlessFormReport {
    pub root_type: String,
    pub p: u64,
    pub total: u64,
    pub rootless: u64,
    /// Sizes of the W-orbits on rootless forms.
    pub rootless_orbits: Vec<u64>,
    /// W-orbit of `x ↦ ρ·x mod p`, which is `(1, …, 1)` on simple roots.
    pub rho_form_rootless: bool,
    pub rho_orbit_size: u64,
    /// Every rootless form lies in the orbit of the ρ-form.
    pub all_rootless_in_rho_orbit: bool,
}

pub const FORM_BUDGET: u64 = 10_000_000;

pub fn rootless_forms_mod_p(r: &RootDatum, p: u64) -> Result<RootlessFormReport> {
    let l = r.rank();
    let total = (p as u128).checked_pow(l as u32).filter(|&t| t <= FORM_BUDGET as u128).ok_or(Error::BudgetExceeded(FORM_BUDGET))? as u64;
    let decode = |mut idx: u64| -> Vec<u64> {
        (0..l)
            .map(|_| {
                let d = idx % p;
                idx /= p;
                d
            })
            .collect()
    };
    let encode = |f: &[u64]| -> u64 { f.iter().rev().fold(0, |acc, &d| acc * p + d) };
    let pos = &r.positive_roots;
    let rootless: Vec<bool> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let f = decode(idx);
            pos.iter().all(|root| {
                let v: u64 = root.iter().zip(&f).map(|(&c, &x)| c as u64 * x).sum();
                !v.is_multiple_of(p)
            })
        })
        .collect();
    let cartan = &r.lattice.gram;
    // (f ∘ s_j)_i = f_i − C_{ij} f_j
    let reflect = |f: &[u64], j: usize| -> Vec<u64> {
        (0..l)
            .map(|i| ((f[i] as i64 - cartan[i][j] * f[j] as i64).rem_euclid(p as i64)) as u64)
            .collect()
    };
    let mut orbit_id = vec![u32::MAX; total as usize];
    let mut orbit_sizes: Vec<u64> = Vec::new();
    let closure = |start: u64, orbit_id: &mut Vec<u32>, orbit_sizes: &mut Vec<u64>| -> u32 {
        if orbit_id[start as usize] != u32::MAX {
            return orbit_id[start as usize];
        }
        let id = orbit_sizes.len() as u32;
        orbit_id[start as usize] = id;
        let mut stack = vec![start];
        let mut size = 0u64;
        while let Some(x) = stack.pop() {
            size += 1;
            let f = decode(x);
            for j in 0..l {
                let y = encode(&reflect(&f, j));
                if orbit_id[y as usize] == u32::MAX {
                    orbit_id[y as usize] = id;
                    stack.push(y);
                }
            }
        }
        orbit_sizes.push(size);
        id
    };
    let rho = encode(&vec![1 % p; l]);
    let rho_id = closure(rho, &mut orbit_id, &mut orbit_sizes);
    let mut rootless_orbit_ids = Vec::new();
    for idx in 0..total {
        if rootless[idx as usize] {
            let id = closure(idx, &mut orbit_id, &mut orbit_sizes);
            if !rootless_orbit_ids.contains(&id) {
                rootless_orbit_ids.push(id);
            }
        }
    }
    let count = rootless.iter().filter(|&&b| b).count() as u64;
    Ok(RootlessFormReport {
        root_type: r.label(),
        p,
        total,
        rootless: count,
        rootless_orbits: rootless_orbit_ids.iter().map(|&i| orbit_sizes[i as usize]).collect(),
        rho_form_rootless: rootless[rho as usize],
        rho_orbit_size: orbit_sizes[rho_id as usize],
        all_rootless_in_rho_orbit: rootless_orbit_ids.iter().all(|&i| i == rho_id),
    })
}

/// The chain `Q_g ⊂ Q(R) ⊂ E_g` for `(g, p, R) = (6, 3, 3A₂)` or `(8, 5, 2A₄)`.
#[derive(Clone, Debug)]
pub struct QChain {
    pub g: usize,
    pub p: i64,
    pub root_type: RootSystemType,
    pub root_lattice: IntLattice,
    /// `{x ∈ Q(R) : x·ρ ≡ 0 mod p}`.
    pub q: IntLattice,
    /// Even overlattice of `Q(R)` from the least isotropic line of its residue.
    pub e: IntLattice,
}

pub fn q_chain(g: usize) -> Result<QChain> {
    let (p, t) = match g {
        6 => (3, "3A2"),
        8 => (5, "2A4"),
        _ => return Err(Error::Invalid(format!("no base chain for g = {g}"))),
    };
    let root_type = RootSystemType::parse(t)?;
    let root_lattice = root_lattice(&root_type)?;
    // ρ·αᵢ = 1 on every simple root
    let q = root_lattice.kernel_of_form(&vec![1; g], p)?;
    let e = least_isotropic_overlattice(&root_lattice, 1)?;
    Ok(QChain { g, p, root_type, root_lattice, q, e })
}

/// Preimage in `L♯` of a subspace of `res L`, given by residue coordinates.
pub fn preimage(l: &IntLattice, res_lifts: &[Vec<BigRational>], sub: &[Vec<u64>]) -> Result<IntLattice> {
    let n = l.rank;
    let mut rows: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| BigRational::from_integer(i64::from(i == j).into())).collect()).collect();
    for v in sub {
        let mut row = vec![BigRational::zero(); n];
        for (k, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let c = BigRational::from_integer(c.into());
            for j in 0..n {
                row[j] += &c * &res_lifts[k][j];
            }
        }
        rows.push(row);
    }
    l.rational_span(&rows)
}

/// The even overlattice attached to the first totally isotropic subspace of
/// dimension `dim` (in the canonical sorted order) of `res L`.
pub fn least_isotropic_overlattice(l: &IntLattice, dim: usize) -> Result<IntLattice> {
    let (res, lifts) = residue_with_lifts(l)?;
    let subs = res.isotropic_subspaces(dim)?;
    let first = subs.first().ok_or_else(|| Error::Construction("no isotropic subspace".into()))?;
    preimage(l, &lifts, first)
}

/// `Q_{2g} = {(x, y) ∈ E ⊕ E : x + y ∈ Q}`, generated by `Q ⊕ Q` and the
/// antidiagonal `(e, −e)`.
pub fn double(q: &IntLattice, e: &IntLattice) -> Result<IntLattice> {
    let f = e.direct_sum(e)?;
    let n = e.rank;
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for b in &q.basis {
        let c = e.coords_of_scaled(b, q.scale_sq).ok_or_else(|| Error::Construction("Q is not inside E".into()))?;
        let mut left = c.clone();
        left.extend(std::iter::repeat_n(0, n));
        let mut right = vec![0; n];
        right.extend(c);
        gens.push(left);
        gens.push(right);
    }
    for i in 0..n {
        let mut v = vec![0; 2 * n];
        v[i] = 1;
        v[n + i] = -1;
        gens.push(v);
    }
    f.sublattice(&gens)
}

/// `Q_g` for `g ∈ {6, 8, 12, 16}`.
pub fn build_q(g: usize) -> Result<IntLattice> {
    match g {
        6 | 8 => Ok(q_chain(g)?.q),
        12 | 16 => {
            let c = q_chain(g / 2)?;
            double(&c.q, &c.e)
        }
        _ => Err(Error::Invalid(format!("Q_g is defined for g in 6, 8, 12, 16, not {g}"))),
    }
}

/// One entry of a sublattice census: the kernel of a form mod `p`.
#[derive(Clone, Debug)]
pub struct CensusEntry {
    /// Values on the basis of the parent lattice.
    pub form: Vec<i64>,
    pub root_type: RootSystemType,
}

impl CensusEntry {
    pub fn lattice(&self, parent: &IntLattice, p: i64) -> Result<IntLattice> {
        parent.kernel_of_form(&self.form, p)
    }
}

/// Projective representatives of nonzero vectors of `(Z/p)^n`: first
/// nonzero coordinate equal to 1.
pub fn projective_points(n: usize, p: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let total = (p as u64).pow(n as u32);
    for idx in 1..total {
        let mut x = idx;
        let v: Vec<i64> = (0..n)
            .map(|_| {
                let d = (x % p as u64) as i64;
                x /= p as u64;
                d
            })
            .collect();
        if v.iter().find(|&&d| d != 0) == Some(&1) {
            out.push(v);
        }
    }
    out
}

fn in_kernel(r: &[i64], f: &[i64], p: i64) -> bool {
    r.iter().zip(f).map(|(a, b)| a * b).sum::<i64>().rem_euclid(p) == 0
}

/// Index-`p` sublattices of `L` (one per hyperplane of `L/pL`), each with
/// the root type of its kernel.
pub fn sublattice_census(l: &IntLattice, p: i64) -> Result<Vec<CensusEntry>> {
    let roots = l.roots()?;
    let forms = projective_points(l.rank, p);
    if forms.len() as u64 > FORM_BUDGET {
        return Err(Error::BudgetExceeded(FORM_BUDGET));
    }
    forms
        .into_par_iter()
        .map(|form| {
            let kept: Vec<Vec<i64>> = roots.iter().filter(|r| in_kernel(r, &form, p)).cloned().collect();
            let root_type = classify_roots(l, &kept)?;
            Ok(CensusEntry { form, root_type })
        })
        .collect()
}

/// Number of index-`p` sublattices of `L` without roots.
pub fn count_rootless_hyperplanes(l: &IntLattice, p: i64) -> Result<usize> {
    let roots = l.roots()?;
    let forms = projective_points(l.rank, p);
    Ok(forms.par_iter().filter(|f| roots.iter().all(|r| !in_kernel(r, f, p))).count())
}

/// A middle lattice `B` of a chain `A ⊂ B ⊂ L` (index `p` each) with
/// rootless bottoms.
#[derive(Clone, Debug)]
pub struct Chain {
    pub middle: CensusEntry,
    pub middle_lattice: IntLattice,
    /// All rootless bottoms, or just the first one found.
    pub bottoms: Vec<IntLattice>,
}

/// Chains `A ⊂ B ⊂ L` with `A` rootless. Middles whose root system has a
/// component of Coxeter number above `p` are skipped: such a component
/// meets every index-`p` kernel in a root.
pub fn rootless_chains(l: &IntLattice, p: i64, exhaustive: bool) -> Result<Vec<Chain>> {
    let census = sublattice_census(l, p)?;
    let forms = projective_points(l.rank, p);
    let found: Vec<Option<Chain>> = census
        .into_par_iter()
        .filter(|b| b.root_type.0.iter().all(|c| c.coxeter_number() as i64 <= p))
        .map(|middle| {
            let b = middle.lattice(l, p)?;
            let roots = b.roots()?;
            let rootless = |f: &&Vec<i64>| roots.iter().all(|r| !in_kernel(r, f, p));
            let chosen: Vec<&Vec<i64>> = if exhaustive {
                forms.iter().filter(rootless).collect()
            } else {
                forms.iter().find(rootless).into_iter().collect()
            };
            if chosen.is_empty() {
                return Ok(None);
            }
            let bottoms = chosen.iter().map(|f| b.kernel_of_form(f, p)).collect::<Result<_>>()?;
            Ok(Some(Chain { middle, middle_lattice: b, bottoms }))
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Splits lattices into isometry classes; returns one representative per
/// class with its multiplicity.
pub fn isometry_classes(lattices: &[IntLattice], limits: SearchLimits) -> Result<Vec<(IntLattice, usize)>> {
    let mut classes: Vec<(IntLattice, usize)> = Vec::new();
    'next: for l in lattices {
        for (rep, n) in classes.iter_mut() {
            if rep.det() == l.det() && isometry_test(rep, l, limits)?.is_some() {
                *n += 1;
                continue 'next;
            }
        }
        classes.push((l.clone(), 1));
    }
    Ok(classes)
}

/// Root types of the preimages in `L♯` of all totally isotropic subspaces
/// of dimension `dim` of `res L`.
pub fn isotropic_preimage_census(l: &IntLattice, dim: usize) -> Result<BTreeMap<RootSystemType, usize>> {
    let (res, lifts): (LinkingSpace, _) = residue_with_lifts(l)?;
    let subs = res.isotropic_subspaces(dim)?;
    let types: Vec<RootSystemType> = subs
        .par_iter()
        .map(|s| root_system_of(&preimage(l, &lifts, s)?))
        .collect::<Result<_>>()?;
    let mut out = BTreeMap::new();
    for t in types {
        *out.entry(t).or_insert(0) += 1;
    }
    Ok(out)
}

/// `x·ρ mod h` as an integer form, for checks on reducible equi-Coxeter types.
pub fn rho_form(t: &RootSystemType) -> Vec<i64> {
    vec![1; t.rank()]
}

/// Exact `ρ·ρ` for a reducible type.
pub fn rho_norm(t: &RootSystemType) -> Result<BigRational> {
    let mut s = BigRational::zero();
    for c in &t.0 {
        s += RootDatum::build(c.family, c.rank)?.rho_norm();
    }
    Ok(s)
}

/// Helper for reports: `p`-rank of an elementary residue, if elementary.
pub fn elementary_rank(res: &LinkingSpace, p: u64) -> Option<usize> {
    (res.elementary_prime() == Some(p) || res.rank() == 0).then_some(res.rank())
}

/// Minimum norm of `L` rescaled by `1/k`, as an exact rational.
pub fn rescaled_min_norm(l: &IntLattice, k: i64) -> Result<Option<BigRational>> {
    Ok(l.min_norm()?.map(|m| BigRational::new(m.into(), k.into())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e8_datum() {
        let r = RootDatum::from_label("E8").unwrap();
        assert_eq!(r.coxeter_number, 30);
        assert_eq!(r.roots.len(), 240);
        assert_eq!(r.rho_norm(), BigRational::from_integer(620.into()));
        assert_eq!(r.marks, vec![2, 3, 4, 6, 5, 4, 3, 2]);
        assert!(r.check_identities().iter().all(|(_, ok)| *ok));
    }

    #[test]
    fn small_data() {
        let a1 = RootDatum::from_label("A1").unwrap();
        assert_eq!(a1.coxeter_number, 2);
        assert_eq!(a1.roots, vec![vec![-1], vec![1]]);
        let d16 = RootDatum::from_label("D16").unwrap();
        let mut expect = vec![1];
        expect.extend(std::iter::repeat_n(2, 13));
        expect.extend([1, 1]);
        assert_eq!(d16.marks, expect);
        let e6 = RootDatum::from_label("E6").unwrap();
        assert_eq!(e6.marks, vec![1, 2, 2, 3, 2, 1]);
        assert!(RootDatum::from_label("E9").is_err());
        assert!(RootDatum::from_label("D2").is_err());
    }

    #[test]
    fn type_strings_round_trip() {
        for s in ["2A4", "3A2", "E8", "A1 + D4", "0"] {
            assert_eq!(RootSystemType::parse(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn borel_de_siebenthal_examples() {
        let e8 = RootDatum::from_label("E8").unwrap();
        let bs = borel_de_siebenthal(&e8, 5).unwrap();
        assert_eq!(bs.root_type.to_string(), "2A4");
        assert_eq!(bs.diagram_type, bs.root_type);
        let e6 = RootDatum::from_label("E6").unwrap();
        let bs = borel_de_siebenthal(&e6, 4).unwrap();
        assert_eq!(bs.mark, 3);
        assert_eq!(bs.root_type.to_string(), "3A2");
        let bs = borel_de_siebenthal(&e6, 1).unwrap();
        assert_eq!(bs.lattice.det(), e6.lattice.det());
        assert_eq!(bs.root_type.to_string(), "E6");
    }

    #[test]
    fn rootless_forms_a2_mod_3() {
        let a2 = RootDatum::from_label("A2").unwrap();
        let rep = rootless_forms_mod_p(&a2, 3).unwrap();
        assert_eq!(rep.total, 9);
        assert_eq!(rep.rootless, 2);
        assert_eq!(rep.rootless_orbits, vec![2]);
        assert!(rep.all_rootless_in_rho_orbit);
        let e6 = RootDatum::from_label("E6").unwrap();
        assert_eq!(rootless_forms_mod_p(&e6, 3).unwrap().rootless, 0);
    }

    #[test]
    fn q8_basics() {
        let q8 = build_q(8).unwrap();
        assert_eq!(q8.rank, 8);
        assert!(q8.is_rootless().unwrap());
        assert_eq!(q8.det(), BigInt::from(625));
        let c = q_chain(8).unwrap();
        assert_eq!(c.e.det(), BigInt::from(1));
        assert_eq!(root_system_of(&c.e).unwrap().to_string(), "E8");
    }

    #[test]
    fn hyperplane_count() {
        let a2 = RootDatum::from_label("A2").unwrap();
        let c = sublattice_census(&a2.lattice, 3).unwrap();
        assert_eq!(c.len(), 4);
    }
}
