mod common;

use fmb_core::construct;
use fmb_core::fmb::{self, BasisCandidate, BasisFile};
use fmb_core::modalg::Structure;
use fmb_core::obstruct::search;
use fmb_core::Error;

fn agree(s: &Structure, b: &BasisCandidate) -> bool {
    let v = fmb::verify(s, b).unwrap();
    assert_eq!(v.pass, common::oracle_is_fmb(s, b), "{}: {v:?}", s.group().label());
    v.pass
}

#[test]
fn searched_bases_agree_with_oracle() {
    for spec in ["D8", "D16", "C4xC2", "C8"] {
        let s = common::structure(spec, &[], 2, 1);
        let r = search::full_search(&s, search::DEFAULT_BUDGET).unwrap();
        let b = r.basis.expect("a basis exists");
        assert!(agree(&s, &b), "{spec}");
    }
}

#[test]
fn abelian_bases_agree_with_oracle() {
    for (spec, p) in [("C8xC2", 2), ("C4xC4", 2), ("C9xC3", 3), ("C5", 5)] {
        let s = common::structure(spec, &[], p, 1);
        let dec = construct::generator_decomposition(s.group()).unwrap();
        assert!(agree(&s, &construct::abelian_basis(&s, &dec).unwrap()), "{spec}");
    }
}

#[test]
fn near_misses_are_rejected() {
    let s = common::structure("D8", &[], 2, 1);
    let alg = s.algebra();
    // group elements: closed, but not filtered
    let group_basis = BasisCandidate::new(s.group().elements().map(|x| alg.basis(x)).collect());
    assert!(!agree(&s, &group_basis));
    // regular elements: filtered, but not closed
    let regular = BasisCandidate::new(s.regular().elements.clone());
    assert!(!agree(&s, &regular));
    // a searched basis with one member replaced by a sum
    let mut b = search::full_search(&s, search::DEFAULT_BUDGET).unwrap().basis.unwrap();
    let last = b.elements.len() - 1;
    b.elements[last] = alg.add(&b.elements[last], &b.elements[1]);
    assert!(!agree(&s, &b));
    // a repeated member
    let mut dup = search::full_search(&s, search::DEFAULT_BUDGET).unwrap().basis.unwrap();
    dup.elements[2] = dup.elements[1].clone();
    let v = fmb::verify(&s, &dup).unwrap();
    assert!(!v.is_linear_basis && !v.pass);
}

#[test]
fn verdict_is_invariant_under_reordering() {
    let s = common::structure("D16", &[], 2, 1);
    let b = search::full_search(&s, search::DEFAULT_BUDGET).unwrap().basis.unwrap();
    let mut rev = b.clone();
    rev.elements.reverse();
    let (v1, v2) = (fmb::verify(&s, &b).unwrap(), fmb::verify(&s, &rev).unwrap());
    assert!(v1.pass && v2.pass);
    assert_eq!(v1.rank, v2.rank);
}

#[test]
fn basis_files_round_trip_and_reject_mismatches() {
    let s = common::structure("Q8", &[], 2, 2);
    let b = search::full_search(&s, search::DEFAULT_BUDGET).unwrap().basis.unwrap();
    let text = BasisFile::from_candidate(&s, &b).to_json().unwrap();
    assert!(text.ends_with('\n'));
    let back = BasisFile::from_json(&text).unwrap().to_candidate(&s).unwrap();
    assert_eq!(back, b);
    assert!(fmb::verify(&s, &back).unwrap().pass);

    let other = common::structure("Q8", &[], 2, 1);
    assert!(matches!(BasisFile::from_json(&text).unwrap().to_candidate(&other), Err(Error::AlgebraMismatch)));
    assert!(matches!(BasisFile::from_json("{\"group\": 3}"), Err(Error::Malformed(_))));
}
