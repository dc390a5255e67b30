mod common;

use std::sync::Arc;

use fmb_core::ffield::Field;
use fmb_core::modalg::{GroupAlgebra, Structure};
use fmb_core::pgroup::{catalog, Group};
use fmb_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn prime_field_instances(max_order: usize) -> Vec<Arc<Group>> {
    catalog::standard_instances()
        .into_iter()
        .map(|(spec, params)| Arc::new(catalog::group(&spec, &params).unwrap()))
        .filter(|g| g.order() <= max_order)
        .collect()
}

#[test]
fn ideal_powers_and_dimension_subgroups_match_oracle() {
    for g in prime_field_instances(64) {
        let p = g.p();
        let s = Structure::for_group(g.clone(), Field::new(p, 1).unwrap()).unwrap();
        let oracle = common::ideal_powers(&g, p);
        let ranks: Vec<usize> = oracle.iter().map(common::Span::rank).collect();
        assert_eq!(s.ideal_ranks(), ranks, "{}", g.label());
        for (n, span) in oracle.iter().enumerate().map(|(i, sp)| (i + 1, sp)) {
            // Jennings: elements of weight >= n count rank I^n
            assert_eq!(s.regular().weights.iter().filter(|&&w| w >= n).count(), span.rank(), "{} n={n}", g.label());
            let by_membership: Vec<usize> = g.elements().filter(|&x| span.contains(&common::g_minus_one(&g, p, x))).collect();
            let recursion = g.jennings_series().get(n - 1).map(|h| h.members().to_vec()).unwrap_or_else(|| vec![0]);
            assert_eq!(by_membership, recursion, "{} D_{n}", g.label());
        }
    }
}

#[test]
fn regular_elements_have_their_weight_as_depth() {
    for spec in ["D8", "Q16", "G5(m=4)", "M27", "G1(p=3,m=3)"] {
        let g = Arc::new(catalog::group(spec, &catalog::Params::new()).unwrap());
        let p = g.p();
        let s = Structure::for_group(g.clone(), Field::new(p, 1).unwrap()).unwrap();
        let powers = common::ideal_powers(&g, p);
        for (x, &w) in s.regular().elements.iter().zip(&s.regular().weights) {
            assert_eq!(s.depth(x), if w == 0 { Some(0) } else { Some(w) }, "{spec}");
            let r = common::residues(x);
            if w >= 1 {
                assert!(powers[w - 1].contains(&r), "{spec}: weight {w} element outside I^{w}");
            }
            assert!(!powers.get(w).is_some_and(|sp| sp.contains(&r)), "{spec}: weight {w} element inside I^{}", w + 1);
        }
    }
}

#[test]
fn multiplication_matches_convolution() {
    let g = Arc::new(catalog::group("G13(m=5)", &catalog::Params::new()).unwrap());
    let f = Field::new(2, 1).unwrap();
    let alg = GroupAlgebra::new(g.clone(), f.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let x: Vec<u32> = (0..g.order()).map(|_| rng.gen_range(0..2)).collect();
        let y: Vec<u32> = (0..g.order()).map(|_| rng.gen_range(0..2)).collect();
        let ax = alg.from_terms(&x.iter().enumerate().map(|(i, &c)| (i, f.from_int(c as i64))).collect::<Vec<_>>());
        let ay = alg.from_terms(&y.iter().enumerate().map(|(i, &c)| (i, f.from_int(c as i64))).collect::<Vec<_>>());
        assert_eq!(common::residues(&alg.mul(&ax, &ay)), common::convolve(&g, 2, &x, &y));
    }
}

#[test]
fn mixing_algebras_is_an_error() {
    let a = common::structure("D8", &[], 2, 1);
    let x = a.algebra().g_minus_one(1);
    let c = common::structure("D16", &[], 2, 1);
    assert!(matches!(c.algebra().try_mul(&x, &x), Err(Error::AlgebraMismatch)));
    assert!(matches!(a.class_in_quotient(&x, 2), Err(Error::NotInIdealPower(2))));
}

/// `(y−1)(x−1) = [(x−1)(y−1)+(x−1)+(y−1)](z−1) + (x−1)(y−1) + (z−1)` with `z = y⁻¹x⁻¹yx`.
fn identity_one_holds(s: &Structure, x: usize, y: usize) -> bool {
    let g = s.group();
    let alg = s.algebra();
    let z = g.mul(g.inv(g.mul(x, y)), g.mul(y, x));
    let (xm, ym, zm) = (alg.g_minus_one(x), alg.g_minus_one(y), alg.g_minus_one(z));
    let xy = alg.mul(&xm, &ym);
    let lhs = alg.mul(&ym, &xm);
    let bracket = alg.add(&alg.add(&xy, &xm), &ym);
    let rhs = alg.add(&alg.add(&alg.mul(&bracket, &zm), &xy), &zm);
    lhs == rhs
}

#[test]
fn commutator_identity_exhaustive_to_order_32() {
    for g in prime_field_instances(32) {
        let s = Structure::for_group(g.clone(), Field::new(g.p(), 1).unwrap()).unwrap();
        for x in g.elements() {
            for y in g.elements() {
                assert!(identity_one_holds(&s, x, y), "{} at ({x}, {y})", g.label());
            }
        }
    }
}

#[test]
fn commutator_identity_sampled_at_order_64() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for g in prime_field_instances(64).into_iter().filter(|g| g.order() == 64) {
        let s = Structure::for_group(g.clone(), Field::new(2, 1).unwrap()).unwrap();
        for _ in 0..1000 {
            let (x, y) = (rng.gen_range(0..64), rng.gen_range(0..64));
            assert!(identity_one_holds(&s, x, y), "{} at ({x}, {y})", g.label());
        }
    }
}

#[test]
fn weight_one_commutators_are_degree_two_corrections() {
    for spec in ["G5(m=4)", "G13(m=5)", "D16", "G22(m=6)", "M27"] {
        let g = Arc::new(catalog::group(spec, &catalog::Params::new()).unwrap());
        let s = Structure::for_group(g.clone(), Field::new(g.p(), 1).unwrap()).unwrap();
        let alg = s.algebra();
        let ones: Vec<usize> = s.jennings().representatives.iter().filter(|(w, _)| *w == 1).map(|&(_, x)| x).collect();
        for (i, &ui) in ones.iter().enumerate() {
            for &uj in &ones[i + 1..] {
                let z = g.commutator(uj, ui);
                let (a, b) = (alg.g_minus_one(ui), alg.g_minus_one(uj));
                let diff = alg.sub(&alg.sub(&alg.mul(&b, &a), &alg.mul(&a, &b)), &alg.g_minus_one(z));
                assert!(s.in_ideal_power(&diff, 3), "{spec}");
            }
        }
    }
}

#[test]
fn type_b_relation_mod_cube() {
    for (spec, m) in [("G13", 5), ("G14", 5), ("G18", 5), ("G23", 6), ("G24", 6), ("G25", 6)] {
        let s = common::structure(spec, &[("m", m)], 2, 1);
        let g = s.group();
        let alg = s.algebra();
        let one_plus = |n: &str| alg.one_plus(g.generator(n).unwrap());
        let (a, c, d) = (one_plus("a"), one_plus("c"), one_plus("d"));
        let lhs = alg.mul(&c, &a);
        let rhs = alg.add(&alg.add(&alg.mul(&a, &c), &alg.mul(&a, &a)), &d);
        assert!(s.in_ideal_power(&alg.sub(&lhs, &rhs), 3), "{spec}(m={m})");
    }
}

#[test]
fn commutator_class_of_g5() {
    let s = common::structure("G5", &[("m", 4)], 2, 1);
    let g = s.group();
    let alg = s.algebra();
    let a = alg.g_minus_one(g.generator("a").unwrap());
    let c = alg.g_minus_one(g.generator("c").unwrap());
    let d = alg.g_minus_one(g.generator("d").unwrap());
    let comm = alg.sub(&alg.mul(&c, &a), &alg.mul(&a, &c));
    assert_eq!(s.class_in_quotient(&comm, 2).unwrap(), s.class_in_quotient(&d, 2).unwrap());
    assert!(s.class_in_quotient(&d, 2).unwrap().iter().any(|x| !x.is_zero()));
}

#[test]
fn extension_fields_keep_prime_field_ranks() {
    for spec in ["Q8", "D8", "M27"] {
        let g = Arc::new(catalog::group(spec, &catalog::Params::new()).unwrap());
        let p = g.p();
        let base = Structure::for_group(g.clone(), Field::new(p, 1).unwrap()).unwrap();
        let ext = Structure::for_group(g, Field::new(p, 2).unwrap()).unwrap();
        assert_eq!(base.ideal_ranks(), ext.ideal_ranks(), "{spec}");
    }
}
