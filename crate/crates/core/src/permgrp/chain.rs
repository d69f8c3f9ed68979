//! Deterministic Schreier–Sims on 24 points.

use std::collections::HashMap;
use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Perm, DEGREE};

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    /// `transversal[x]` maps the level's base point to `x`.
    transversal: Vec<Option<Perm>>,
    orbit: Vec<usize>,
}

/// Base and strong generating set with explicit transversals.
#[derive(Clone, Debug)]
pub struct GroupChain {
    pub base: Vec<usize>,
    pub strong_generators: Vec<Perm>,
    levels: Vec<Level>,
}

/// Orbit of a subset under a group together with how each image was reached.
pub struct SubsetOrbit {
    pub root: u32,
    /// image → (predecessor, generator index); the root maps to itself.
    parents: HashMap<u32, (u32, u8)>,
    /// Images in breadth-first order.
    pub order: Vec<u32>,
}

impl SubsetOrbit {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn contains(&self, m: u32) -> bool {
        self.parents.contains_key(&m)
    }

    /// A group element sending the root to `m`.
    pub fn transversal(&self, gens: &[Perm], m: u32) -> Option<Perm> {
        let mut word = Vec::new();
        let mut cur = m;
        while cur != self.root {
            let &(prev, g) = self.parents.get(&cur)?;
            word.push(g);
            cur = prev;
        }
        let mut p = Perm::identity();
        for &g in word.iter().rev() {
            p = p.then(&gens[g as usize]);
        }
        Some(p)
    }
}

fn build_level(point: usize, gens: &[&Perm]) -> Level {
    let mut transversal = vec![None; DEGREE];
    transversal[point] = Some(Perm::identity());
    let mut orbit = vec![point];
    let mut i = 0;
    while i < orbit.len() {
        let x = orbit[i];
        let ux = transversal[x].expect("orbit point has a transversal");
        for g in gens {
            let y = g.apply(x);
            if transversal[y].is_none() {
                transversal[y] = Some(ux.then(g));
                orbit.push(y);
            }
        }
        i += 1;
    }
    Level { point, transversal, orbit }
}

impl GroupChain {
    fn rebuild_levels(&mut self) {
        self.levels = (0..self.base.len())
            .map(|i| {
                let fixing: Vec<&Perm> = self
                    .strong_generators
                    .iter()
                    .filter(|g| self.base[..i].iter().all(|&b| g.apply(b) == b))
                    .collect();
                build_level(self.base[i], &fixing)
            })
            .collect();
    }

    /// Sifts `g` starting at level `from`; returns the residue and the level
    /// at which sifting stopped (`levels.len()` if it passed every level).
    fn strip(&self, mut g: Perm, from: usize) -> (Perm, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let x = g.apply(level.point);
            match &level.transversal[x] {
                Some(u) => g = g.then(&u.inverse()),
                None => return (g, l),
            }
        }
        (g, self.levels.len())
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn order_u64(&self) -> u64 {
        self.order().to_u64().expect("group order fits in u64")
    }

    pub fn transversal_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        let (r, _) = self.strip(*g, 0);
        r.is_identity()
    }

    /// Uniformly random element, as a product of random transversal elements.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Perm {
        let mut g = Perm::identity();
        for level in self.levels.iter().rev() {
            let x = level.orbit[rng.gen_range(0..level.orbit.len())];
            g = g.then(level.transversal[x].as_ref().expect("orbit point"));
        }
        g
    }

    /// Chain of the pointwise stabilizer of the first `k` base points.
    pub fn stabilizer_tail(&self, k: usize) -> GroupChain {
        let gens: Vec<Perm> = self
            .strong_generators
            .iter()
            .copied()
            .filter(|g| self.base[..k].iter().all(|&b| g.apply(b) == b))
            .collect();
        bsgs(&gens)
    }

    /// Orbit of a subset under the strong generators.
    pub fn subset_orbit(&self, s: u32) -> SubsetOrbit {
        let gens = &self.strong_generators;
        let mut parents = HashMap::new();
        parents.insert(s, (s, 0u8));
        let mut order = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(m) = queue.pop_front() {
            for (gi, g) in gens.iter().enumerate() {
                let im = g.apply_mask(m);
                if let std::collections::hash_map::Entry::Vacant(e) = parents.entry(im) {
                    e.insert((m, gi as u8));
                    order.push(im);
                    queue.push_back(im);
                }
            }
        }
        SubsetOrbit { root: s, parents, order }
    }

    /// Generators and chain of the setwise stabilizer of `s`, built from
    /// Schreier generators until the order reaches `|G| / |orbit(s)|`.
    pub fn subset_stabilizer(&self, s: u32) -> (GroupChain, usize) {
        let orbit = self.subset_orbit(s);
        let target = self.order() / BigUint::from(orbit.len());
        let gens = &self.strong_generators;
        let mut stab_gens: Vec<Perm> = Vec::new();
        let mut chain = bsgs(&stab_gens);
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ s as u64);
        let try_add = |h: Perm, stab_gens: &mut Vec<Perm>, chain: &mut GroupChain| {
            if !h.is_identity() && !chain.contains(&h) {
                stab_gens.push(h);
                *chain = bsgs(stab_gens);
            }
        };
        // random Schreier generators first, then an exhaustive sweep
        let mut tries = 0;
        while chain.order() < target && tries < 4000 {
            tries += 1;
            let m = orbit.order[rng.gen_range(0..orbit.len())];
            let gi = rng.gen_range(0..gens.len());
            let h = schreier(&orbit, gens, m, gi);
            try_add(h, &mut stab_gens, &mut chain);
        }
        if chain.order() < target {
            'sweep: for &m in &orbit.order {
                for gi in 0..gens.len() {
                    let h = schreier(&orbit, gens, m, gi);
                    try_add(h, &mut stab_gens, &mut chain);
                    if chain.order() >= target {
                        break 'sweep;
                    }
                }
            }
        }
        (chain, orbit.len())
    }

    /// True iff the setwise stabilizer acts on `s` by even permutations.
    pub fn is_orientable_subset(&self, s: u32) -> bool {
        let (stab, _) = self.subset_stabilizer(s);
        stab.strong_generators.iter().all(|g| g.parity_on(s))
    }
}

fn schreier(orbit: &SubsetOrbit, gens: &[Perm], m: u32, gi: usize) -> Perm {
    let g = &gens[gi];
    let tm = orbit.transversal(gens, m).expect("orbit element");
    let img = g.apply_mask(m);
    let ti = orbit.transversal(gens, img).expect("orbit closed under generators");
    tm.then(g).then(&ti.inverse())
}

/// Schreier–Sims with the smallest-moved-point base rule.
pub fn bsgs(generators: &[Perm]) -> GroupChain {
    let mut chain = GroupChain {
        base: Vec::new(),
        strong_generators: generators.iter().copied().filter(|g| !g.is_identity()).collect(),
        levels: Vec::new(),
    };
    for g in chain.strong_generators.clone() {
        if chain.base.iter().all(|&b| g.apply(b) == b) {
            chain.base.push(g.first_moved().expect("non-identity"));
        }
    }
    chain.rebuild_levels();
    let mut i = chain.levels.len() as isize - 1;
    while i >= 0 {
        let lv = i as usize;
        let mut grew = None;
        let fixing: Vec<Perm> = chain
            .strong_generators
            .iter()
            .copied()
            .filter(|g| chain.base[..lv].iter().all(|&b| g.apply(b) == b))
            .collect();
        'scan: for &x in &chain.levels[lv].orbit.clone() {
            let ux = chain.levels[lv].transversal[x].expect("orbit point");
            for &s in &fixing {
                let y = s.apply(x);
                let uy = chain.levels[lv].transversal[y].expect("orbit closed");
                let h = ux.then(&s).then(&uy.inverse());
                if h.is_identity() {
                    continue;
                }
                let (r, j) = chain.strip(h, lv + 1);
                if !r.is_identity() {
                    if j == chain.levels.len() {
                        chain.base.push(r.first_moved().expect("non-identity"));
                    }
                    chain.strong_generators.push(r);
                    chain.rebuild_levels();
                    grew = Some(j);
                    break 'scan;
                }
            }
        }
        match grew {
            Some(j) => i = j as isize,
            None => i -= 1,
        }
    }
    chain
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle24() -> Perm {
        let mut a = [0u8; 24];
        for i in 0..24 {
            a[i] = ((i + 1) % 24) as u8;
        }
        Perm(a)
    }

    #[test]
    fn cyclic_group_order() {
        let c = bsgs(&[cycle24()]);
        assert_eq!(c.order_u64(), 24);
        assert!(c.contains(&cycle24().pow(5)));
    }

    #[test]
    fn symmetric_group_on_five_points() {
        let mut a = Perm::identity().0;
        a.swap(0, 1);
        let t = Perm(a);
        let mut b = Perm::identity().0;
        for i in 0..5 {
            b[i] = ((i + 1) % 5) as u8;
        }
        let c = bsgs(&[t, Perm(b)]);
        assert_eq!(c.order_u64(), 120);
        let (stab, orbit_len) = c.subset_stabilizer(0b11);
        assert_eq!(orbit_len, 10);
        assert_eq!(stab.order_u64(), 12);
        assert!(!c.is_orientable_subset(0b11));
    }

    #[test]
    fn trivial_group() {
        let c = bsgs(&[]);
        assert_eq!(c.order_u64(), 1);
        assert!(c.contains(&Perm::identity()));
    }
}
