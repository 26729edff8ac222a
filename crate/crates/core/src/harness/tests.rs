use super::*;
use crate::algebra::FiniteAlgebra;
use crate::formula::{Orientation, PhiVariant};
use crate::search::{collect_models_up_to, Filters};

fn bsl() -> Presentation {
    preset("bsl").unwrap().presentation()
}

#[test]
fn suite_names_round_trip() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    assert!(matches!("nope".parse::<Suite>(), Err(HarnessError::UnknownSuite(_))));
}

#[test]
fn bsl_main_and_zeta_pass_to_four() {
    let p = bsl();
    let v = Verifier::new(&p);
    for suite in [Suite::Main, Suite::Zeta, Suite::Phi, Suite::Psi, Suite::Pi] {
        let r = v.run(suite, 4).unwrap();
        assert!(r.passed(), "{}", r.summary());
        assert!(r.checks > 0);
        assert_eq!(r.schema_version, SCHEMA_VERSION);
    }
}

#[test]
fn bsl_r_variant_passes() {
    let p = bsl();
    let v = Verifier::new(&p).with_variant(PhiVariant::R);
    for suite in [Suite::Main, Suite::Zeta, Suite::Phi, Suite::Factorable] {
        let r = v.run(suite, 3).unwrap();
        assert!(r.passed(), "{}", r.summary());
    }
}

#[test]
fn printed_orientation_counterexamples_replay() {
    let p = bsl();
    let g = GeneralPhi {
        orientation: Orientation::Printed,
        ..GeneralPhi::default()
    };
    let v = Verifier::new(&p).with_variant(PhiVariant::General(g));
    for suite in [Suite::Zeta, Suite::Phi] {
        let r = v.run(suite, 3).unwrap();
        assert_eq!(r.exit_code(), 1);
        assert!(!r.counterexamples.is_empty());
        for cex in &r.counterexamples {
            assert_eq!(v.replay(cex).unwrap(), cex.verdict);
        }
    }
}

#[test]
fn adjudication_selects_mirrored_k_minus_one() {
    let p = bsl();
    let w = p.witness.clone().unwrap();
    let r = adjudicate_phi_variants(&p, &w, 3, Budget::unlimited()).unwrap();
    assert_eq!(r.variants.len(), 9);
    assert_eq!(r.selected.as_deref(), Some("general(k-1/w-param/mirrored)"));
    assert!(r.variants.iter().find(|v| v.variant == "r").unwrap().passed);
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn order_suites_pass_on_their_presets() {
    let run = |name: &str, suite: Suite, bound: usize| {
        let p = preset(name).unwrap().presentation();
        let r = Verifier::new(&p).run(suite, bound).unwrap();
        assert!(r.passed(), "{name}: {}", r.summary());
        assert!(r.checks > 0, "{name}: {}", r.summary());
        r
    };
    let psi = run("posemigroup", Suite::Psi, 4);
    assert_eq!(psi.notes.len(), 1);
    run("posemigroup", Suite::Pi, 4);
    run("band", Suite::Claim, 4);
    run("band", Suite::RelSemilatt, 4);
    run("rvariety", Suite::RelSemilatt, 4);
    let g = run("groupoid", Suite::RelSemilatt, 3);
    assert_eq!(g.notes.len(), 1);
    run("rvariety", Suite::CotaInf, 4);
    run("semilattice", Suite::Factorable, 3);
}

#[test]
fn relsemilatt_verdicts_replay() {
    let p = preset("groupoid").unwrap().presentation();
    let v = Verifier::new(&p);
    let r = v.run(Suite::RelSemilatt, 2).unwrap();
    for cex in &r.counterexamples {
        assert_eq!(v.replay(cex).unwrap(), cex.verdict);
    }
}

#[test]
fn budget_yields_partial_report() {
    let p = bsl();
    let past = std::time::Instant::now();
    let v = Verifier::new(&p).with_budget(Budget {
        max_assignments: None,
        deadline: Some(past),
    });
    let r = v.run(Suite::Main, 4).unwrap();
    assert!(r.budget_exceeded);
    assert_eq!(r.exit_code(), 2);
}

#[test]
fn missing_semidegeneracy_is_refused() {
    let p = preset("semilattice").unwrap().presentation();
    let err = Verifier::new(&p).run(Suite::Zeta, 2).unwrap_err();
    assert!(matches!(err, HarnessError::MissingWitness(_)));
}

#[test]
fn boolean_square_decomposes() {
    let p = bsl();
    let models = collect_models_up_to(&p, 4, true, Filters::NONE, Budget::unlimited()).unwrap();
    let square = models
        .iter()
        .find(|a| a.size() == 4 && !is_directly_indecomposable(a).unwrap())
        .unwrap();
    let r = decompose(&p, square).unwrap();
    assert!(!r.directly_indecomposable);
    assert_eq!(r.decompositions.len(), 2);
    assert!(r.decompositions.iter().all(|d| d.verified));
    assert_eq!(r.central_pairs.as_ref().unwrap().len(), 4);
    let chain = models.iter().find(|a| a.size() == 4 && is_directly_indecomposable(a).unwrap()).unwrap();
    assert!(decompose(&p, chain).unwrap().decompositions.is_empty());
}

#[test]
fn decompose_rejects_non_models() {
    let p = bsl();
    // 2-element algebra with 0 and 1 swapped
    let a = FiniteAlgebra::new(2, vec![2, 0, 0], vec![vec![0, 0, 0, 1], vec![1], vec![0]]).unwrap();
    assert!(matches!(decompose(&p, &a), Err(HarnessError::NotAModel { .. })));
}
