//! Named verification suites. Each suite runs a list of checks and returns a
//! [`Report`]; the command-line driver only parses options and prints.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extalg::{invariant_dim, Multivector};
use crate::golay::{binomial, subsets, HexadKind};
use crate::intmat;
use crate::lattice::{automorphism_group, enumerate_group, isometry_test, residue_form, IntLattice, SearchLimits};
use crate::linkform::{close, milgram_target, same_elementary_class, LinkingSpace};
use crate::niemeier_alt::{alt24_dims, reflection_kill_check, support};
use crate::params::{psi, verify_table_and_rallis, ParamContext};
use crate::permgrp::m24::{avg_charpoly_m24, avg_charpoly_n, orientable_type_reps, ClassTable};
use crate::poly::{self, IntPoly};
use crate::report::{Check, Report};
use crate::rootlat::{
    borel_de_siebenthal, build_q, isometry_classes, isotropic_preimage_census, root_lattice, rootless_chains,
    rootless_forms_mod_p, RootDatum, RootSystemType,
};
use crate::theta::{
    fourier_coefficient, main_theorem_report, omega_on_embedded_basis, transform_gram, volume_form, FourierQuery,
    LeechContext,
};

/// How much of the budget-heavy work to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Level {
    Fast,
    Full,
    Stretch,
}

impl FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Level::Fast),
            "full" => Ok(Level::Full),
            "stretch" => Ok(Level::Stretch),
            _ => Err(Error::Invalid(format!("unknown level {s}; expected fast, full or stretch"))),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Fast => "fast",
            Level::Full => "full",
            Level::Stretch => "stretch",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub cache_dir: Option<PathBuf>,
    /// Node limit for automorphism and theta searches.
    pub budget: u64,
    pub level: Level,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 1, cache_dir: None, budget: SearchLimits::default().nodes, level: Level::Full }
    }
}

pub const SUITES: [&str; 8] = ["golay", "m24", "invariants", "leech", "roots", "qlattices", "fourier", "params"];

/// Runs suites sharing one lazily built Leech context.
pub struct Runner {
    pub opts: Options,
    ctx: OnceCell<LeechContext>,
    ctx_ms: std::cell::Cell<u64>,
}

fn ms_since(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

fn pm(x: &BigRational) -> String {
    format!("±{}", x.abs())
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn map_string<K: fmt::Display, V: fmt::Display>(m: &BTreeMap<K, V>) -> String {
    let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Ascending coefficients of the printed M24 average.
const M24_AVERAGE: [i64; 25] = [1, -1, 0, 0, 0, 0, 0, -1, 2, -1, 0, -1, 2, -1, 0, -1, 2, -1, 0, 0, 0, 0, 0, -1, 1];

pub fn m24_average_expected() -> IntPoly {
    poly::from_i64(&M24_AVERAGE)
}

/// `t²⁴ + t¹⁶ + t¹² + t⁸ + 1`.
pub fn n_average_expected() -> IntPoly {
    let mut c = [0i64; 25];
    for g in [0, 8, 12, 16, 24] {
        c[g] = 1;
    }
    poly::from_i64(&c)
}

impl Runner {
    pub fn new(opts: Options) -> Self {
        Runner { opts, ctx: OnceCell::new(), ctx_ms: std::cell::Cell::new(0) }
    }

    fn limits(&self) -> SearchLimits {
        SearchLimits { nodes: self.opts.budget, ..SearchLimits::default() }
    }

    fn wide_limits(&self) -> SearchLimits {
        SearchLimits { nodes: self.opts.budget, max_rank: 24 }
    }

    pub fn context(&self) -> Result<&LeechContext> {
        if let Some(c) = self.ctx.get() {
            return Ok(c);
        }
        let t = Instant::now();
        let c = LeechContext::build(self.opts.seed, self.opts.cache_dir.as_deref())?;
        self.ctx_ms.set(ms_since(t));
        Ok(self.ctx.get_or_init(|| c))
    }

    pub fn run(&self, suite: &str) -> Result<Report> {
        let checks = match suite {
            "golay" => self.golay()?,
            "m24" => self.m24()?,
            "invariants" => self.invariants()?,
            "leech" => self.leech()?,
            "roots" => self.roots()?,
            "qlattices" => self.qlattices()?,
            "fourier" => self.fourier()?,
            "params" => self.params()?,
            "all" => {
                let mut all = Vec::new();
                for s in SUITES {
                    for mut c in self.run(s)?.checks {
                        c.id = format!("{s}/{}", c.id);
                        all.push(c);
                    }
                }
                all
            }
            other => return Err(Error::UnknownSuite(other.into())),
        };
        Ok(Report::new(suite, self.opts.seed, checks))
    }

    fn golay(&self) -> Result<Vec<Check>> {
        let t = Instant::now();
        let code = crate::golay::build_golay()?;
        let build_ms = ms_since(t);
        let mut out = Vec::new();
        let mut c = Check::equal("weight-distribution", "Golay weight enumerator", "{0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}", || {
            Ok(map_string(&code.weight_distribution()))
        })?;
        c.ms += build_ms;
        out.push(c);
        out.push(Check::equal("steiner-5-8-24", "each 5-set in one octad", binomial(24, 5), || {
            let n = subsets(&(0..24).collect::<Vec<_>>(), 5)
                .into_iter()
                .filter(|&s| code.octads.iter().filter(|o| o.contains(s)).count() == 1)
                .count();
            Ok(n.to_string())
        })?);
        out.push(Check::equal("tetrads-in-5-octads", "tetrad lemma", binomial(24, 4), || {
            let n = subsets(&(0..24).collect::<Vec<_>>(), 4)
                .into_iter()
                .filter(|&s| code.octads_containing(s).len() == 5)
                .count();
            Ok(n.to_string())
        })?);
        let census = code.hexad_census();
        out.push(Check::equal("hexad-census", "special and umbral hexads", "21252 special, 113344 umbral", || {
            Ok(format!("{} special, {} umbral", census.special, census.umbral))
        })?);
        out.push(Check::equal("umbral-in-18-dodecads", "umbral hexad lemma", "{18: 113344}", || {
            Ok(map_string(&census.umbral_dodecad_counts))
        })?);
        Ok(out)
    }

    fn m24(&self) -> Result<Vec<Check>> {
        let ctx = self.context()?;
        let mut out = Vec::new();
        let mut c = Check::equal("order", "order of M24", 244_823_040u64, || Ok(ctx.m24.order().to_string()))?;
        c.ms += self.ctx_ms.get();
        out.push(c);
        let octad = ctx.code.octads[0].0;
        out.push(Check::equal("octad-stabilizer", "octad stabilizer 2^4:A8", 322_560u64, || {
            Ok(ctx.m24.chain.subset_stabilizer(octad).0.order().to_string())
        })?);
        let umbral = subsets(&(0..24).collect::<Vec<_>>(), 6)
            .into_iter()
            .find(|&h| code_kind(ctx, h) == HexadKind::Umbral)
            .ok_or_else(|| Error::Construction("no umbral hexad".into()))?;
        out.push(Check::equal("umbral-hexad-stabilizer", "umbral hexad stabilizer", 2160u64, || {
            Ok(ctx.m24.chain.subset_stabilizer(umbral).0.order().to_string())
        })?);
        out.push(Check::equal("class-representatives", "one element per class", 26, || {
            Ok((ctx.m24.class_reps.len() + 1).to_string())
        })?);
        out.push(Check::equal("average-charpoly-m24", "class-table average", poly::format_int(&m24_average_expected(), "t"), || {
            Ok(poly::format_int(&avg_charpoly_m24(&ClassTable::m24())?, "t"))
        })?);
        out.push(Check::equal("average-charpoly-n", "signed average over 2^12:M24", poly::format_int(&n_average_expected(), "t"), || {
            Ok(poly::format_int(&avg_charpoly_n(&ctx.code, &ctx.m24.class_reps, &ClassTable::m24())?, "t"))
        })?);
        Ok(out)
    }

    fn invariants(&self) -> Result<Vec<Check>> {
        let ctx = self.context()?;
        let mut out = Vec::new();
        out.push(Check::equal("orientable-types", "sixteen orientable types", 16, || {
            let reps = orientable_type_reps(&ctx.code);
            Ok(reps.iter().filter(|(_, m)| ctx.m24.chain.is_orientable_subset(*m)).count().to_string())
        })?);
        // Built inside the first wedge check so its time is reported.
        let sigma: OnceCell<BTreeMap<usize, Multivector>> = OnceCell::new();
        let wedge_checks: [(&str, Vec<usize>, usize, i64); 4] = [
            ("s8^s8", vec![8, 8], 16, 30),
            ("s8^s16", vec![8, 16], 24, 759),
            ("s12^s12", vec![12, 12], 24, 2576),
            ("s8^s8^s8", vec![8, 8, 8], 24, 22770),
        ];
        for (id, factors, target, k) in wedge_checks {
            out.push(Check::judged(&format!("wedge-{id}"), "ring of invariants", format!("±{k}"), || {
                if sigma.get().is_none() {
                    let built = [8, 12, 16, 24].into_iter().map(|g| Ok((g, ctx.omega(g)?))).collect::<Result<_>>()?;
                    let _ = sigma.set(built);
                }
                let sigma = sigma.get().expect("set above");
                let mut acc = sigma[&factors[0]].clone();
                for f in &factors[1..] {
                    acc = acc.wedge(&sigma[f]);
                }
                match acc.ratio_to(&sigma[&target]) {
                    Some(r) => Ok((r.to_string(), r.abs() == rat(k))),
                    None => Ok(("not proportional".into(), false)),
                }
            })?);
        }
        out.push(Check::equal("alt24-support", "dimension of Alt_24^g", "[0, 8, 12, 16, 24] all 1", || {
            let dims = alt24_dims(&ctx.code, &ctx.m24.class_reps)?;
            let ok = support(&dims).iter().all(|g| dims[g] == 1);
            Ok(format!("{:?}{}", support(&dims), if ok { " all 1" } else { " with other values" }))
        })?);
        let a2 = RootDatum::from_label("A2")?;
        out.push(Check::equal("invariant-dim-a2", "no invariant forms on A2", 0, || {
            let aut = automorphism_group(&a2.lattice, self.limits())?;
            Ok(invariant_dim(&enumerate_group(&aut.generators, 1 << 20)?, 2)?.to_string())
        })?);
        let d4 = RootDatum::from_label("D4")?;
        out.push(Check::equal("invariant-dim-d4", "no invariant forms on D4", "[0, 0, 0, 0]", || {
            let aut = automorphism_group(&d4.lattice, self.limits())?;
            let all = enumerate_group(&aut.generators, 1 << 20)?;
            let dims = (1..=4).map(|g| invariant_dim(&all, g)).collect::<Result<Vec<_>>>()?;
            Ok(format!("{dims:?}"))
        })?);
        out.push(Check::equal("reflection-kill-d4", "reflection argument", true, || {
            Ok((1..=4)
                .map(|g| reflection_kill_check(&d4.lattice, g, 32).map(|r| r.killed()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .all(|b| b)
                .to_string())
        })?);
        out.push(Check::equal("reflection-kill-leech", "Leech has no roots", "precondition fails", || {
            Ok(match reflection_kill_check(&ctx.leech, 8, 1) {
                Err(Error::RootsDoNotSpan) => "precondition fails".into(),
                Ok(_) => "ran".into(),
                Err(e) => return Err(e),
            })
        })?);
        Ok(out)
    }

    fn leech(&self) -> Result<Vec<Check>> {
        let ctx = self.context()?;
        let l = &ctx.leech;
        let mut out = Vec::new();
        out.push(Check::equal("det", "unimodular", 1, || Ok(l.det().to_string()))?);
        out.push(Check::equal("min-norm", "Leech is rootless", 4, || {
            Ok(l.min_norm()?.map_or("none".into(), |m| m.to_string()))
        })?);
        out.push(Check::equal("norm-4-count", "kissing number", 196_560, || {
            Ok((2 * l.short_vectors(4)?.len()).to_string())
        })?);
        for (shape, rank, p, r) in [("1^4 5^4", 8usize, 5u64, 4usize), ("1^6 3^6", 12, 3, 6)] {
            let (q, perp) = ctx.fixed_point_pair(shape)?;
            out.push(Check::equal(&format!("fixed-ranks-{shape}"), "fixed-point lattice", format!("{rank}/{}", 24 - rank), || {
                Ok(format!("{}/{}", q.rank, perp.rank))
            })?);
            out.push(Check::equal(&format!("fixed-rootless-{shape}"), "fixed-point lattice", true, || {
                Ok((q.is_rootless()? && perp.is_rootless()?).to_string())
            })?);
            out.push(Check::equal(&format!("fixed-residue-{shape}"), "residue of the fixed-point lattice", format!("I{r}⊗Z/{p}"), || {
                let res = residue_form(&q)?;
                let same = same_elementary_class(&res, &LinkingSpace::identity_form(r, p))?;
                Ok(if same { format!("I{r}⊗Z/{p}") } else { format!("orders {:?}", res.orders) })
            })?);
        }
        Ok(out)
    }

    fn roots(&self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        out.push(Check::equal("root-identities", "|R| = lh, Σn = h − 1, ρ·ρ = lh(h+1)/12", "all hold", || {
            let mut failed = Vec::new();
            for label in identity_labels() {
                let d = RootDatum::from_label(&label)?;
                if !d.check_identities().iter().all(|(_, ok)| *ok) {
                    failed.push(label);
                }
            }
            Ok(if failed.is_empty() { "all hold".into() } else { format!("fail for {failed:?}") })
        })?);
        out.push(Check::equal("bs5-e8", "Borel–de Siebenthal", "2A4", || {
            Ok(borel_de_siebenthal(&RootDatum::from_label("E8")?, 5)?.root_type.to_string())
        })?);
        out.push(Check::equal("bs-mark3-e6", "Borel–de Siebenthal", "3A2", || {
            Ok(borel_de_siebenthal(&RootDatum::from_label("E6")?, 4)?.root_type.to_string())
        })?);
        for (label, p) in [("A2", 3u64), ("A4", 5)] {
            out.push(Check::equal(&format!("rootless-forms-{label}-mod-{p}"), "rootless forms mod p", "one orbit, the ρ-orbit", || {
                let r = rootless_forms_mod_p(&RootDatum::from_label(label)?, p)?;
                let ok = r.rootless_orbits.len() == 1 && r.rho_form_rootless && r.all_rootless_in_rho_orbit;
                Ok(if ok { "one orbit, the ρ-orbit".into() } else { format!("orbits {:?}", r.rootless_orbits) })
            })?);
        }
        for (label, p) in [("E6", 3u64), ("A4", 3)] {
            out.push(Check::equal(&format!("rootless-forms-{label}-mod-{p}"), "p below the Coxeter number", 0, || {
                Ok(rootless_forms_mod_p(&RootDatum::from_label(label)?, p)?.rootless.to_string())
            })?);
        }
        if self.opts.level == Level::Stretch {
            let e6 = RootDatum::from_label("E6")?;
            out.push(Check::equal("e6-chain-classes", "unique rootless bottom", 1, || {
                let chains = rootless_chains(&e6.lattice, 3, true)?;
                let bottoms: Vec<IntLattice> = chains.iter().flat_map(|c| c.bottoms.clone()).collect();
                Ok(isometry_classes(&bottoms, self.limits())?.len().to_string())
            })?);
            let e8 = RootDatum::from_label("E8")?;
            out.push(Check::equal("e8-chain-middles", "index-5 chains in E8", "{2A4}", || {
                let chains = rootless_chains(&e8.lattice, 5, false)?;
                let types: std::collections::BTreeSet<String> =
                    chains.iter().map(|c| c.middle.root_type.to_string()).collect();
                Ok(format!("{{{}}}", types.into_iter().collect::<Vec<_>>().join(", ")))
            })?);
        }
        Ok(out)
    }

    fn qlattices(&self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        let mut q = BTreeMap::new();
        for g in [6usize, 8, 12, 16] {
            let t = Instant::now();
            let l = build_q(g)?;
            let (p, r) = match g {
                6 => (3, 5),
                8 | 16 => (5, 4),
                _ => (3, 6),
            };
            let mut c = Check::equal(&format!("q{g}"), "rootless with elementary residue", format!("min 4, (Z/{p})^{r}"), || {
                let res = residue_form(&l)?;
                let min = l.min_norm()?.unwrap_or(0);
                let elem = res.elementary_prime() == Some(p) && res.rank() == r;
                Ok(format!("min {min}, {}", if elem { format!("(Z/{p})^{r}") } else { format!("orders {:?}", res.orders) }))
            })?;
            c.ms += ms_since(t);
            out.push(c);
            q.insert(g, l);
        }
        if self.opts.level >= Level::Full {
            let ctx = self.context()?;
            for (g, shape) in [(8usize, "1^4 5^4"), (12, "1^6 3^6")] {
                let fixed = ctx.fixed_point_pair(shape)?.0;
                out.push(Check::equal(&format!("q{g}-is-fixed-{shape}"), "uniqueness of Q_g", "isometric, matrix verified", || {
                    verified_isometry(&q[&g], &fixed, self.limits())
                })?);
            }
        }
        out.push(Check::equal("q8-orientable", "O(Q8) has determinant +1", "orientable, |O(Q8)| = |O(res)|", || {
            let aut = automorphism_group(&q[&8], self.limits())?;
            let res = residue_form(&q[&8])?.orthogonal_group_order()?;
            Ok(format!(
                "{}, |O(Q8)| {} |O(res)|",
                if aut.is_orientable() { "orientable" } else { "not orientable" },
                if aut.order == res { "=" } else { "≠" }
            ))
        })?);
        out.push(Check::equal("q6-not-orientable", "O(Q6) contains det −1", true, || {
            Ok(automorphism_group(&q[&6], self.limits())?.orientation_reversing().is_some().to_string())
        })?);
        if self.opts.level == Level::Stretch {
            for (g, k) in [(12usize, 3u64), (16, 10)] {
                out.push(Check::equal(&format!("q{g}-kernel-ratio"), "|O(Q)| over |O(res Q)|", format!("orientable, ratio {k}"), || {
                    let aut = automorphism_group(&q[&g], self.wide_limits())?;
                    let res = residue_form(&q[&g])?.orthogonal_group_order()?;
                    let ratio = if (&aut.order % &res) == BigUint::from(0u8) {
                        (&aut.order / &res).to_string()
                    } else {
                        format!("{}/{}", aut.order, res)
                    };
                    Ok(format!("{}, ratio {ratio}", if aut.is_orientable() { "orientable" } else { "not orientable" }))
                })?);
            }
            let ctx = self.context()?;
            let perp = ctx.fixed_point_pair("1^4 5^4")?.1;
            out.push(Check::equal("q16-is-fixed-complement", "uniqueness of Q16", "isometric, matrix verified", || {
                verified_isometry(&q[&16], &perp, self.wide_limits())
            })?);
        }
        out.push(Check::equal("milgram-catalog", "Milgram formula", "all hold on ≥ 15 lattices", || {
            let catalog = self.milgram_catalog()?;
            let bad: Vec<&String> = catalog.iter().filter(|(_, ok)| !ok).map(|(n, _)| n).collect();
            Ok(if bad.is_empty() && catalog.len() >= 15 {
                "all hold on ≥ 15 lattices".into()
            } else {
                format!("{} lattices, failures {bad:?}", catalog.len())
            })
        })?);
        for (dim, expected) in [(1usize, "{6A2: 112}"), (2, "{2E6: 280}")] {
            out.push(Check::equal(&format!("q12-isotropic-{dim}"), "preimages of isotropic subspaces", expected, || {
                let census = isotropic_preimage_census(&q[&12], dim)?;
                Ok(map_string(&census))
            })?);
        }
        Ok(out)
    }

    /// The lattices on which the Milgram formula is checked, by name.
    pub fn milgram_catalog(&self) -> Result<Vec<(String, bool)>> {
        let mut lattices: Vec<(String, IntLattice)> = Vec::new();
        for label in ["A1", "A2", "A3", "A4", "A5", "A6", "D4", "D5", "D6", "D7", "D8", "E6", "E7", "E8"] {
            lattices.push((label.into(), RootDatum::from_label(label)?.lattice));
        }
        for t in ["2A4", "3A2", "A1 + A2", "6A2"] {
            lattices.push((t.into(), root_lattice(&RootSystemType::parse(t)?)?));
        }
        for g in [6, 8, 12, 16] {
            lattices.push((format!("Q{g}"), build_q(g)?));
        }
        lattices.push(("binary [[6,2],[2,8]]".into(), rank_two_orientable()));
        if self.opts.level >= Level::Full {
            let ctx = self.context()?;
            lattices.push(("Leech".into(), ctx.leech.clone()));
            for shape in ["1^4 5^4", "1^6 3^6", "3^8"] {
                let (q, perp) = ctx.fixed_point_pair(shape)?;
                lattices.push((format!("fix {shape}"), q));
                lattices.push((format!("fix⊥ {shape}"), perp));
            }
        }
        lattices
            .into_iter()
            .map(|(name, l)| {
                let res = residue_form(&l)?;
                Ok((name, close(res.gauss_sum()?, milgram_target(l.rank))))
            })
            .collect()
    }

    fn fourier(&self) -> Result<Vec<Check>> {
        let ctx = self.context()?;
        let mut out = Vec::new();
        for (g, e) in [(8usize, 5i64), (12, 18), (16, 5), (24, 1)] {
            out.push(Check::judged(&format!("omega-{g}"), "ω_g on an embedded basis", format!("±{e}"), || {
                let v = omega_on_embedded_basis(ctx, g)?;
                Ok((pm(&v), v.abs() == rat(e)))
            })?);
        }
        for g in [8usize, 12, 16, 24] {
            let limits = match (self.opts.level, g) {
                (Level::Fast, _) => None,
                (Level::Full, 12) => None,
                _ => Some(self.limits()),
            };
            let r = main_theorem_report(ctx, g, limits)?;
            for mut c in r.checks {
                c.id = format!("main-{g}/{}", c.id);
                out.push(c);
            }
        }
        let e8 = RootDatum::from_label("E8")?;
        out.push(Check::equal("theta-e8-norm-2", "roots of E8", 240, || {
            let q = FourierQuery { lattice: &e8.lattice, harmonic: None, target_gram: vec![vec![2]], budget: self.opts.budget };
            Ok(fourier_coefficient(&q)?.to_string())
        })?);
        out.push(Check::equal("theta-leech-norm-2", "Leech is rootless", 0, || {
            let q = FourierQuery { lattice: &ctx.leech, harmonic: None, target_gram: vec![vec![2]], budget: self.opts.budget };
            Ok(fourier_coefficient(&q)?.to_string())
        })?);
        let d4 = RootDatum::from_label("D4")?;
        out.push(Check::equal("theta-d4-volume", "non-orientable lattices give zero", 0, || {
            let vol = volume_form(4);
            let q = FourierQuery { lattice: &d4.lattice, harmonic: Some(&vol), target_gram: d4.lattice.gram.clone(), budget: self.opts.budget };
            Ok(fourier_coefficient(&q)?.to_string())
        })?);
        let b = rank_two_orientable();
        out.push(Check::equal("theta-det-sign", "a_{TᵀNT} = det(T)·a_N", true, || {
            let area = area_form(&b);
            let coef = |t: Vec<Vec<i64>>| {
                fourier_coefficient(&FourierQuery { lattice: &b, harmonic: Some(&area), target_gram: t, budget: self.opts.budget })
            };
            let base = coef(b.gram.clone())?;
            let t = vec![vec![1, 1], vec![0, -1]];
            let moved = coef(transform_gram(&b.gram, &t))?;
            Ok((!base.is_zero_rat() && moved == -base).to_string())
        })?);
        Ok(out)
    }

    fn params(&self) -> Result<Vec<Check>> {
        let t = Instant::now();
        let ctx = ParamContext::new(50)?;
        let build_ms = ms_since(t);
        let mut out = Vec::new();
        let mut c = Check::equal("tau", "τ(2), τ(3), τ(5)", "[-24, 252, 4830]", || {
            let v: Vec<i64> = [2usize, 3, 5].iter().map(|&n| ctx.delta11.coeffs[n].to_i64().unwrap_or(0)).collect();
            Ok(format!("{v:?}"))
        })?;
        c.ms += build_ms;
        out.push(c);
        out.push(Check::equal("eigenforms", "multiplicativity and Hecke recursion", true, || {
            let ok = [&ctx.delta11, &ctx.delta17]
                .iter()
                .all(|f| f.is_multiplicative() && [2, 3, 5, 7].iter().all(|&p| f.satisfies_hecke_recursion(p)));
            Ok(ok.to_string())
        })?);
        out.extend(verify_table_and_rallis(&ctx)?);
        out.push(Check::equal("euler-psi-prime-16", "degree of the Euler factor", 24, || {
            Ok((psi(&ctx, 16)?.1.euler_factor(2)?.len() - 1).to_string())
        })?);
        out.push(Check::equal("euler-psi-24", "degree of the Euler factor", 49, || {
            Ok((psi(&ctx, 24)?.0.euler_factor(2)?.len() - 1).to_string())
        })?);
        Ok(out)
    }
}

trait IsZeroRat {
    fn is_zero_rat(&self) -> bool;
}

impl IsZeroRat for BigRational {
    fn is_zero_rat(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

fn code_kind(ctx: &LeechContext, h: u32) -> HexadKind {
    ctx.code.classify_hexad(h).0
}

/// A1..A24, D3..D16, E6..E8.
pub fn identity_labels() -> Vec<String> {
    let mut v: Vec<String> = (1..=24).map(|n| format!("A{n}")).collect();
    v.extend((3..=16).map(|n| format!("D{n}")));
    v.extend((6..=8).map(|n| format!("E{n}")));
    v
}

/// Runs the isometry search and re-checks `Tᵀ G₁ T = G₂`, `det T = ±1`.
pub fn verified_isometry(a: &IntLattice, b: &IntLattice, limits: SearchLimits) -> Result<String> {
    match isometry_test(a, b, limits)? {
        None => Ok("not isometric".into()),
        Some(t) => {
            let ok = transform_gram(&a.gram, &t) == b.gram && intmat::det_i64(&t).abs() == BigInt::from(1);
            Ok(if ok { "isometric, matrix verified".into() } else { "isometry matrix failed verification".into() })
        }
    }
}

/// The binary lattice with Gram `[[6, 2], [2, 8]]` in the plane of `R³`
/// spanned by `(−2, −1, −1)` and `(−2, 0, 2)`; all its isometries have
/// determinant one.
pub fn rank_two_orientable() -> IntLattice {
    IntLattice::from_basis(vec![vec![-2, -1, -1], vec![-2, 0, 2]], 1).expect("independent rows")
}

/// `(u, v) ↦ det(u, v, n)` for the normal `n` of a rank-2 lattice in `R³`.
pub fn area_form(l: &IntLattice) -> Multivector {
    let (a, b) = (&l.basis[0], &l.basis[1]);
    let n = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    // det(u, v, n) = n₀(u∧v)₁₂ − n₁(u∧v)₀₂ + n₂(u∧v)₀₁
    Multivector::from_terms(2, [(0b110, rat(n[0])), (0b101, rat(-n[1])), (0b011, rat(n[2]))]).expect("grade 2 terms")
}

/// Lattices available to `lattice export`.
pub fn named_lattice(runner: &Runner, name: &str) -> Result<IntLattice> {
    let lower = name.to_ascii_lowercase();
    match lower.as_str() {
        "leech" => Ok(runner.context()?.leech.clone()),
        "q6" => build_q(6),
        "q8" => build_q(8),
        "q12" => build_q(12),
        "q16" => build_q(16),
        _ => {
            if let Some(shape) = lower.strip_prefix("fix:") {
                return Ok(runner.context()?.fixed_point_pair(shape)?.0);
            }
            if let Some(shape) = lower.strip_prefix("fixperp:") {
                return Ok(runner.context()?.fixed_point_pair(shape)?.1);
            }
            root_lattice(&RootSystemType::parse(name)?)
        }
    }
}

/// Invariants printed by `lattice import`.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeSummary {
    pub rank: usize,
    pub det: String,
    pub even: bool,
    pub min_norm: Option<i64>,
    pub root_type: Option<String>,
    pub residue_orders: Vec<u64>,
    pub gauss_sum: Option<(f64, f64)>,
    pub milgram: Option<bool>,
}

pub fn summarize(l: &IntLattice) -> Result<LatticeSummary> {
    let even = (0..l.rank).all(|i| l.gram[i][i] % 2 == 0);
    let (residue_orders, gauss_sum, milgram) = if even {
        let res = residue_form(l)?;
        let gs = res.gauss_sum().ok();
        (res.orders.clone(), gs.map(|z| (z.re, z.im)), gs.map(|z| close(z, milgram_target(l.rank))))
    } else {
        (Vec::new(), None, None)
    };
    Ok(LatticeSummary {
        rank: l.rank,
        det: l.det().to_string(),
        even,
        min_norm: l.min_norm()?,
        root_type: if even { Some(crate::rootlat::root_system_of(l)?.to_string()) } else { None },
        residue_orders,
        gauss_sum,
        milgram,
    })
}
