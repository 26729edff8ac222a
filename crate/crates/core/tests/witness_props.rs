mod common;

use proptest::prelude::*;

use pog_core::search::Budget;
use pog_core::witness::{
    find_connection_terms, find_semidegeneracy_witnesses, identity_valid_bounded, WitnessBounds, WitnessSet,
};

const CONNECTED: [&str; 3] = ["bsl", "semilattice", "slat0"];

fn bounds(depth: usize, size: usize) -> WitnessBounds {
    WitnessBounds {
        max_depth: depth,
        size_bound: size,
        ..WitnessBounds::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn found_connection_terms_reverify(which in 0..3usize, depth in 1..=2usize, size in 2..=4usize) {
        let p = common::preset(CONNECTED[which]);
        let found = find_connection_terms(&p, 3, depth, size, Budget::unlimited()).unwrap().expect("connected preset");
        for id in found.terms.identities(&p.signature) {
            let v = identity_valid_bounded(&p, &id, size, Budget::unlimited()).unwrap();
            prop_assert!(!v.is_refuted());
        }
        // larger bounds still find a witness; while the old one survives
        // the larger bound, the new one is no longer
        let wider = find_connection_terms(&p, 3, depth + 1, size + 1, Budget::unlimited()).unwrap().expect("monotone");
        if found.terms.identities(&p.signature).iter().all(|id| {
            !identity_valid_bounded(&p, id, size + 1, Budget::unlimited()).unwrap().is_refuted()
        }) {
            prop_assert!(wider.terms.n() <= found.terms.n());
        }
    }

    #[test]
    fn found_semidegeneracy_terms_reverify(depth in 1..=2usize, size in 2..=4usize) {
        let p = common::preset("bsl");
        let found = find_semidegeneracy_witnesses(&p, bounds(depth, size), 2, Budget::unlimited()).unwrap().expect("bsl is semidegenerate");
        for id in found.terms.identities() {
            prop_assert!(!identity_valid_bounded(&p, &id, size, Budget::unlimited()).unwrap().is_refuted());
        }
        let wider = find_semidegeneracy_witnesses(&p, bounds(depth, size + 1), 2, Budget::unlimited()).unwrap();
        prop_assert!(wider.is_some());
    }
}

#[test]
fn declared_bsl_witnesses_are_the_least() {
    let p = common::preset("bsl");
    let declared: WitnessSet = p.witness.clone().unwrap();
    for id in declared.identities(&p.signature) {
        assert!(!identity_valid_bounded(&p, &id, 4, Budget::unlimited()).unwrap().is_refuted());
    }
    let c = find_connection_terms(&p, 3, 2, 4, Budget::unlimited()).unwrap().unwrap();
    assert_eq!(Some(&c.terms), declared.connection.as_ref());
    let s = find_semidegeneracy_witnesses(&p, WitnessBounds::default(), 2, Budget::unlimited()).unwrap().unwrap();
    let d = declared.semidegeneracy.as_ref().unwrap();
    assert_eq!((s.terms.zero(), s.terms.one()), (d.zero(), d.one()));
    assert!(s.terms.k() <= d.k());
    assert_eq!(s.terms.chain(), d.chain());
}

#[test]
fn right_zero_has_no_connection_within_bounds() {
    let p = common::preset("rightzero");
    assert!(find_connection_terms(&p, 3, 2, 4, Budget::unlimited()).unwrap().is_none());
}
