mod common;

use fmb_core::cli;
use fmb_core::construct::{self, Family};
use fmb_core::ffield::Field;
use fmb_core::modalg::Structure;
use fmb_core::pgroup::catalog;
use fmb_core::Error;

#[test]
fn abelian_bases_verify() {
    for (p, max_exp) in [(2, 5), (3, 3)] {
        let specs = common::abelian_specs(p, max_exp);
        assert_eq!(specs.len(), if p == 2 { 18 } else { 6 });
        for spec in specs {
            let g = std::sync::Arc::new(catalog::group(&spec, &catalog::Params::new()).unwrap());
            let s = Structure::for_group(g, Field::new(p, 1).unwrap()).unwrap();
            let (b, _) = cli::build(&s, &spec, Family::Abelian, None).unwrap();
            let v = fmb_core::fmb::verify(&s, &b).unwrap();
            assert!(v.pass, "{spec}");
            if s.dim() <= 16 {
                assert!(common::oracle_is_fmb(&s, &b), "{spec}");
            }
        }
    }
}

#[test]
fn product_bases_verify() {
    for (spec, k) in [("D8xC2", 1), ("Q8xC2", 2), ("D8xC2xC2", 1)] {
        let s = common::structure(spec, &[], 2, k);
        let (b, _) = cli::build(&s, spec, Family::Product, None).unwrap();
        assert!(fmb_core::fmb::verify(&s, &b).unwrap().pass, "{spec}");
    }
    let s = common::structure("D8xC2", &[], 2, 1);
    let (b, _) = cli::build(&s, "D8xC2", Family::Product, None).unwrap();
    assert!(common::oracle_is_fmb(&s, &b));
}

#[test]
fn product_of_a_factor_without_basis_fails() {
    let s = common::structure("Q8xC2", &[], 2, 1);
    assert!(matches!(cli::build(&s, "Q8xC2", Family::Product, None), Err(Error::NotApplicable(_))));
}

#[test]
fn g5_type_a_verifies_for_every_mu() {
    let s = common::structure("G5", &[("m", 4)], 2, 1);
    let trials = construct::try_all_mu(&s, Family::TypeA).unwrap();
    assert_eq!(trials.len(), 2);
    for t in &trials {
        let b = t.basis.as_ref().unwrap();
        assert!(t.pass, "mu={:?}: {:?}", t.mu, t.reason);
        assert!(common::oracle_is_fmb(&s, b));
    }
    let mu = Field::new(2, 1).unwrap().from_int(1);
    let checks = construct::type_a_independence(&s, mu).unwrap();
    assert!(checks.iter().all(|c| c.independent));
}

/// The literal word families close up only for the smallest
/// type-A group; elsewhere the oracle confirms the products leave the set.
#[test]
fn word_families_agree_with_oracle() {
    let cases: &[(&str, i64, Family, bool)] = &[
        ("G5", 4, Family::TypeA, true),
        ("G17", 5, Family::TypeA, false),
        ("G22", 6, Family::TypeA, false),
        ("G25", 5, Family::TypeA, false),
        ("G13", 5, Family::TypeB, false),
        ("G14", 5, Family::TypeB, false),
        ("G23", 6, Family::TypeB, false),
        ("G24", 6, Family::TypeB, false),
        ("G25", 6, Family::TypeB, false),
    ];
    for &(spec, m, family, expected) in cases {
        let s = common::structure(spec, &[("m", m)], 2, 1);
        let trials = construct::try_all_mu(&s, family).unwrap();
        assert_eq!(trials.iter().any(|t| t.pass), expected, "{spec}(m={m}) {family}");
        for t in &trials {
            let b = t.basis.as_ref().expect("word count matches |G|");
            assert_eq!(t.pass, common::oracle_is_fmb(&s, b), "{spec}(m={m}) mu={:?}", t.mu);
            let v = t.verdict.as_ref().unwrap();
            assert!(v.is_linear_basis, "{spec}(m={m}) words are linearly independent");
        }
    }
}

#[test]
fn g18_word_counts_fall_short() {
    let s = common::structure("G18", &[("m", 5)], 2, 1);
    let trials = construct::try_all_mu(&s, Family::TypeB).unwrap();
    assert!(trials.iter().all(|t| t.basis.is_none() && t.words < 32));
    let f = s.field();
    assert!(matches!(construct::type_b_basis(&s, f.from_int(0)), Err(Error::MuUnsuitable(_))));
}

#[test]
fn g4_literal_words_are_not_closed() {
    let s = common::structure("G4", &[("m", 4)], 2, 1);
    let b = construct::g4_basis(&s).unwrap();
    let v = fmb_core::fmb::verify(&s, &b).unwrap();
    assert!(v.is_linear_basis && !v.closure_ok);
    assert!(!common::oracle_is_fmb(&s, &b));
}

#[test]
fn families_are_guarded() {
    assert!(construct::applicable(Family::TypeA, "G5", Some(4)));
    assert!(!construct::applicable(Family::TypeA, "G25", Some(6)));
    assert!(construct::applicable(Family::TypeB, "G25", Some(6)));
    assert!(!construct::applicable(Family::G4, "G4", Some(5)));
    let s = common::structure("G5", &[("m", 4)], 2, 1);
    assert!(matches!(construct::try_all_mu(&s, Family::TypeB), Err(Error::NotApplicable(_))));
    let odd = common::structure("M27", &[], 3, 1);
    assert!(matches!(construct::g4_basis(&odd), Err(Error::NotApplicable(_))));
    assert!(construct::generator_decomposition(odd.group()).is_err());
    assert_eq!("typeB".parse::<Family>().unwrap(), Family::TypeB);
    assert!("typeC".parse::<Family>().is_err());
}

#[test]
fn type_b_independence_is_reported() {
    let s = common::structure("G13", &[("m", 5)], 2, 1);
    let checks = construct::type_b_independence(&s, s.field().from_int(0)).unwrap();
    assert!(!checks.is_empty());
    for (name, c) in &checks {
        assert!(name.starts_with("odd") || name.starts_with("even"));
        let k: usize = name.rsplit('=').next().unwrap().parse().unwrap();
        assert!(c.modulus == 2 * k + 1 || c.modulus == 2 * k + 2);
    }
}
