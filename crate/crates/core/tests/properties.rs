use std::sync::OnceLock;

use leechforms::extalg::{pair_form, Multivector};
use leechforms::golay::{build_golay, Codeword, GolayCode};
use leechforms::intmat;
use leechforms::lattice::{isometry_test, IntLattice, SearchLimits};
use leechforms::params::{ParamContext, Parameter};
use leechforms::permgrp::m24::M24;
use leechforms::permgrp::Perm;
use leechforms::rootlat::RootDatum;
use leechforms::theta::{fourier_coefficient, transform_gram, FourierQuery};
use leechforms::verify::{area_form, rank_two_orientable};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn masks_of_grade(n: usize, k: usize) -> Vec<u32> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).collect()
}

fn multivector(n: usize, k: usize) -> impl Strategy<Value = Multivector> {
    let masks = masks_of_grade(n, k);
    proptest::collection::vec(-3i64..=3, masks.len()).prop_map(move |cs| {
        Multivector::from_terms(k, masks.iter().copied().zip(cs.into_iter().map(rat))).unwrap()
    })
}

struct Fixture {
    code: GolayCode,
    m24: M24,
    omegas: Vec<(usize, Multivector)>,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let code = build_golay().unwrap();
        let m24 = M24::build(&code, 1).unwrap();
        let omegas = [8, 12].iter().map(|&g| (g, leechforms::extalg::omega(&code, &m24.chain, g).unwrap())).collect();
        Fixture { code, m24, omegas }
    })
}

fn word(m24: &M24, letters: &[usize]) -> Perm {
    letters.iter().fold(Perm::identity(), |acc, &i| acc.then(&m24.generators[i % m24.generators.len()]))
}

/// Random products of elementary matrices.
fn unimodular(n: usize, steps: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec((0..n, 0..n, -2i64..=2, any::<bool>()), steps).prop_map(move |ops| {
        let mut t: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        for (i, j, k, neg) in ops {
            if i != j {
                for row in t.iter_mut() {
                    row[j] += k * row[i];
                }
            } else if neg {
                for row in t.iter_mut() {
                    row[i] = -row[i];
                }
            }
        }
        t
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pair_form_is_alternating(
        m in multivector(5, 3),
        vs in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 5), 3),
        i in 0usize..3, j in 0usize..3,
    ) {
        let base = pair_form(&m, &vs, 1).unwrap();
        let mut swapped = vs.clone();
        swapped.swap(i, j);
        let expect = if i == j { base.clone() } else { -base.clone() };
        prop_assert_eq!(pair_form(&m, &swapped, 1).unwrap(), expect);
        let mut repeated = vs.clone();
        repeated[(i + 1) % 3] = vs[i].clone();
        prop_assert_eq!(pair_form(&m, &repeated, 1).unwrap(), rat(0));
    }

    #[test]
    fn wedge_is_graded_commutative(a in multivector(6, 2), b in multivector(6, 3), c in multivector(6, 1)) {
        prop_assert_eq!(a.wedge(&b), b.wedge(&a));
        prop_assert_eq!(b.wedge(&c), c.wedge(&b).negated());
        prop_assert_eq!(c.wedge(&c), Multivector::zero(2));
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
    }

    #[test]
    fn omega_is_invariant_under_signed_golay_group(
        letters in proptest::collection::vec(0usize..64, 1..12),
        codeword in 0usize..4096,
    ) {
        let f = fixture();
        let gamma = word(&f.m24, &letters);
        let Codeword(signs) = f.code.codewords[codeword];
        for (g, w) in &f.omegas {
            prop_assert_eq!(&w.permuted(&gamma), w, "grade {}", g);
            prop_assert_eq!(&w.sign_changed(signs), w, "grade {}", g);
        }
    }

    #[test]
    fn fourier_coefficient_transforms_by_determinant(t in unimodular(2, 6)) {
        let l = rank_two_orientable();
        let area = area_form(&l);
        let coef = |target: Vec<Vec<i64>>| {
            fourier_coefficient(&FourierQuery { lattice: &l, harmonic: Some(&area), target_gram: target, budget: 1 << 24 }).unwrap()
        };
        let base = coef(l.gram.clone());
        let det = intmat::det_i64(&t);
        prop_assert_eq!(coef(transform_gram(&l.gram, &t)), base * BigRational::from_integer(det));
    }

    #[test]
    fn isometry_test_recovers_change_of_basis(label in prop::sample::select(vec!["A3", "D4", "A2", "E6"]), t in unimodular(6, 10)) {
        let d = RootDatum::from_label(label).unwrap();
        let n = d.lattice.rank;
        let t: Vec<Vec<i64>> = t.into_iter().take(n).map(|r| r.into_iter().take(n).collect()).collect();
        prop_assume!(intmat::det_i64(&t).magnitude() == &num_bigint::BigUint::from(1u8));
        let rows = intmat::mul_i64(&intmat::transpose(&t), &d.lattice.basis);
        let moved = IntLattice::from_basis(rows, d.lattice.scale_sq).unwrap();
        let found = isometry_test(&d.lattice, &moved, SearchLimits::default()).unwrap();
        prop_assert!(found.is_some());
        let m = found.unwrap();
        prop_assert_eq!(transform_gram(&d.lattice.gram, &m), moved.gram);
    }
}

fn pieces() -> &'static Vec<Parameter> {
    static P: OnceLock<Vec<Parameter>> = OnceLock::new();
    P.get_or_init(|| {
        let ctx = ParamContext::new(20).unwrap();
        vec![
            ctx.bracket(1),
            ctx.bracket(7),
            ctx.bracket(9),
            ctx.delta(11).unwrap().twisted(12).unwrap(),
            ctx.delta(17).unwrap().twisted(2).unwrap(),
            ctx.delta_wv(19, 7).unwrap().twisted(6).unwrap(),
        ]
    })
}

proptest! {
    #[test]
    fn oplus_is_commutative_and_associative(i in 0usize..6, j in 0usize..6, k in 0usize..6) {
        let p = pieces();
        let (a, b, c) = (&p[i], &p[j], &p[k]);
        prop_assert_eq!(a.oplus(b).unwrap(), b.oplus(a).unwrap());
        prop_assert_eq!(a.oplus(b).unwrap().oplus(c).unwrap(), a.oplus(&b.oplus(c).unwrap()).unwrap());
        prop_assert_eq!(a.oplus(b).unwrap().n, a.n + b.n);
    }
}
