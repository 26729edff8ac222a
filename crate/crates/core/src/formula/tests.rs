use super::*;

#[test]
fn free_variables_respect_binders() {
    let f = Formula::forall(vec![0], Formula::eq(Term::Var(0), Term::Var(1)));
    assert_eq!(f.free_vars(), BTreeSet::from([1]));
    assert_eq!(Formula::forall(vec![], Formula::True), Formula::True);
}

#[test]
fn unscoped_variable_rejected() {
    let sig = Signature::from_pairs(&[("mul", 2)]).unwrap();
    let book = FormulaBook {
        signature: sig,
        defs: vec![Definition {
            name: "bad".into(),
            params: vec![0],
            var_names: vec!["x".into(), "y".into()],
            body: Formula::eq(Term::Var(0), Term::Var(1)),
        }],
        root: 0,
    };
    assert!(matches!(book.check(), Err(FormulaError::FreeVariable { .. })));
}

use crate::algebra::{parse_presentation, FiniteAlgebra, Presentation};
use crate::witness::WitnessSet;

const BSL: &str = "sig mul/2 0/0 1/0
id x * y * z = x * (y * z)
id x * y = y * x
id x * x = x
id x * 0 = 0
id x * 1 = x
witness m 1 = x * y
witness zero 1 = 0
witness one 1 = 1
witness U 1 = x
witness U 2 = x * z
witness U 3 = y * z
";

fn bsl() -> (Presentation, WitnessSet) {
    let p = parse_presentation(BSL).unwrap();
    let w = p.witness.clone().unwrap();
    (p, w)
}

/// `w` with the connection terms padded to length two.
fn padded(w: &WitnessSet) -> WitnessSet {
    WitnessSet {
        connection: Some(w.connection.as_ref().unwrap().padded(2)),
        semidegeneracy: w.semidegeneracy.clone(),
    }
}

fn chain(n: usize) -> FiniteAlgebra {
    let meet = (0..n * n).map(|i| (i / n).min(i % n)).collect();
    FiniteAlgebra::new(n, vec![2, 0, 0], vec![meet, vec![0], vec![n - 1]]).unwrap()
}

fn both(book: &FormulaBook) -> (PrenexClass, PrenexClass) {
    (classify_prenex(book), classify_prenex_constructive(book))
}

#[test]
fn psi_degenerate_and_two_step_text() {
    let (p, _) = bsl();
    let one = build_psi_schema(&p.signature, 1).unwrap();
    assert_eq!(one.root().display(&one).to_string(), "psi(x, y, z) := ∀u (u * x = u * y → u * x = u * z)");
    let two = build_psi_schema(&p.signature, 2).unwrap();
    assert_eq!(
        two.root().display(&two).to_string(),
        "psi(x, y, z) := ∀u1 u2 u3 (u1 * x = u1 * u2 ∧ u3 * u2 = u3 * y → ∃v1 (u1 * x = u1 * v1 ∧ u3 * v1 = u3 * z))"
    );
}

#[test]
fn prenex_classes_general() {
    let (p, w) = bsl();
    let w = padded(&w);
    let v = PhiVariant::default();
    let cases = [
        (build_psi(&p.signature, &w).unwrap(), PrenexClass::Pi(2)),
        (build_pi(&p.signature, &w).unwrap(), PrenexClass::Pi(3)),
        (build_phi(&p, &w, v).unwrap(), PrenexClass::Sigma(4)),
        (build_zeta(&p, &w, v).unwrap(), PrenexClass::Pi(5)),
        (build_main_sentence(&p, &w, v).unwrap(), PrenexClass::Pi(6)),
    ];
    for (book, class) in cases {
        assert_eq!(both(&book), (class, class), "{}", book.root().name);
    }
}

#[test]
fn prenex_classes_r_variant() {
    let (p, w) = bsl();
    let cases = [
        (build_phi(&p, &w, PhiVariant::R).unwrap(), PrenexClass::Pi(1)),
        (build_zeta(&p, &w, PhiVariant::R).unwrap(), PrenexClass::Pi(3)),
        (build_main_sentence(&p, &w, PhiVariant::R).unwrap(), PrenexClass::Pi(4)),
    ];
    for (book, class) in cases {
        assert_eq!(both(&book), (class, class), "{}", book.root().name);
    }
}

#[test]
fn prenex_of_small_formulas() {
    let sig = Signature::from_pairs(&[("mul", 2)]).unwrap();
    let atom = Formula::eq(Term::Var(0), Term::Var(2));
    let book = |body: Formula| FormulaBook {
        signature: sig.clone(),
        defs: vec![Definition {
            name: "f".into(),
            params: vec![],
            var_names: vec!["x".into(), "y".into(), "z".into()],
            body,
        }],
        root: 0,
    };
    let aea = Formula::forall(vec![0], Formula::exists(vec![1], Formula::forall(vec![2], atom.clone())));
    assert_eq!(both(&book(aea)), (PrenexClass::Pi(3), PrenexClass::Pi(3)));
    let open = book(Formula::not(Formula::eq(Term::Var(0), Term::Var(0))));
    assert_eq!(classify_prenex(&open), PrenexClass::Open);
    // ∀x A ∧ ∃z B: either order is two blocks; universals come first
    let mix = Formula::And(vec![
        Formula::forall(vec![0], Formula::eq(Term::Var(0), Term::Var(0))),
        Formula::exists(vec![2], Formula::eq(Term::Var(2), Term::Var(2))),
    ]);
    assert_eq!(both(&book(mix)), (PrenexClass::Pi(2), PrenexClass::Pi(2)));
    let neg = Formula::not(Formula::forall(vec![0], Formula::exists(vec![2], atom)));
    assert_eq!(both(&book(neg)), (PrenexClass::Sigma(2), PrenexClass::Sigma(2)));
}

#[test]
fn r_variant_phi_text_for_bsl() {
    let (p, w) = bsl();
    let book = build_phi(&p, &w, PhiVariant::R).unwrap();
    assert_eq!(
        book.root().display(&book).to_string(),
        "Phi(x, y, z) := ∀u (u * x = u * x ∧ u * (x * 0) = u * (x * z) ∧ u * (y * 0) = u * (y * z) → u * x = u * y)"
    );
}

#[test]
fn suite_has_one_pres_per_symbol_and_twin() {
    let (p, w) = bsl();
    let book = build_zeta(&p, &w, PhiVariant::R).unwrap();
    let names: Vec<&str> = book.defs.iter().map(|d| d.name.as_str()).collect();
    for n in SUITE_NAMES {
        assert!(names.contains(&n), "{n}");
    }
    let pres: Vec<&&str> = names.iter().filter(|n| n.starts_with("PRES_")).collect();
    assert_eq!(pres, [&"PRES_mul", &"PRES_c0", &"PRES_c1", &"PRES_mul'", &"PRES_c0'", &"PRES_c1'"]);
    assert_eq!(book.check(), Ok(()));
}

#[test]
fn zeta_on_two_chain() {
    let (p, w) = bsl();
    let a = chain(2);
    for v in [PhiVariant::R, PhiVariant::default()] {
        let book = build_zeta(&p, &w, v).unwrap();
        let ev = Evaluator::new(&book, &a).unwrap();
        assert!(ev.eval_root(&[0, 1]).unwrap());
        assert!(ev.eval_root(&[1, 0]).unwrap());
        assert!(!ev.eval_root(&[1, 1]).unwrap());
        assert!(!ev.eval_root(&[0, 0]).unwrap());
    }
}

#[test]
fn main_sentence_on_chains_and_trivial() {
    let (p, w) = bsl();
    let book = build_main_sentence(&p, &w, PhiVariant::R).unwrap();
    assert!(!eval_formula(&book, &FiniteAlgebra::trivial(&p.signature), &[]).unwrap());
    for n in 2..=4 {
        assert!(eval_formula(&book, &chain(n), &[]).unwrap(), "{n}-chain");
    }
}

#[test]
fn psi_items_on_chains() {
    let (p, _) = bsl();
    let book = build_psi_schema(&p.signature, 2).unwrap();
    let a = chain(3);
    let ev = Evaluator::new(&book, &a).unwrap();
    for x in 0..3 {
        for y in 0..3 {
            assert!(ev.eval_root(&[x, y, x]).unwrap());
            assert!(ev.eval_root(&[x, y, y]).unwrap());
            assert!(!ev.eval_root(&[x, x, y]).unwrap() || x <= y);
        }
    }
}

#[test]
fn naive_and_memoized_agree() {
    let (p, w) = bsl();
    let book = build_zeta(&p, &w, PhiVariant::default()).unwrap();
    let a = chain(3);
    let memo = Evaluator::new(&book, &a).unwrap();
    let naive = Evaluator::new(&book, &a).unwrap().naive();
    for e in 0..3 {
        for f in 0..3 {
            assert_eq!(memo.eval_root(&[e, f]), naive.eval_root(&[e, f]));
        }
    }
    assert!(naive.steps() > memo.steps());
}

#[test]
fn prenex_form_is_equivalent() {
    let (p, w) = bsl();
    for book in [build_pi(&p.signature, &w).unwrap(), build_phi(&p, &w, PhiVariant::R).unwrap()] {
        prenex_agrees(&book);
    }
}

fn prenex_agrees(book: &FormulaBook) {
    let pf = prenex_form(book);
    let flat = FormulaBook {
        signature: book.signature.clone(),
        defs: vec![Definition {
            name: "prenex".into(),
            params: book.root().params.clone(),
            var_names: pf.var_names.clone(),
            body: pf.to_formula(),
        }],
        root: 0,
    };
    assert_eq!(flat.check(), Ok(()));
    assert_eq!(pf.class(), classify_prenex(book));
    let a = chain(3);
    let arity = book.root().arity();
    crate::algebra::for_each_assignment(3, arity, |args| {
        assert_eq!(eval_formula(book, &a, args), eval_formula(&flat, &a, args), "{args:?}");
        true
    });
}

#[test]
fn budget_is_enforced() {
    let (p, w) = bsl();
    let book = build_main_sentence(&p, &w, PhiVariant::R).unwrap();
    let a = chain(3);
    let ev = Evaluator::new(&book, &a).unwrap().with_budget(100);
    assert_eq!(ev.eval_root(&[]), Err(EvalError::Budget(100)));
}

#[test]
fn refusals() {
    let (p, w) = bsl();
    let no_conn = WitnessSet {
        connection: None,
        semidegeneracy: w.semidegeneracy.clone(),
    };
    assert_eq!(build_psi(&p.signature, &no_conn), Err(FormulaError::MissingConnection("psi")));
    assert!(build_phi(&p, &no_conn, PhiVariant::default()).is_err());
    assert!(build_phi(&p, &no_conn, PhiVariant::R).is_ok());
    let band = parse_presentation("sig mul/2 0/0 1/0\nid x * y * z = x * (y * z)\nid x * x = x\n").unwrap();
    assert!(matches!(build_phi(&band, &w, PhiVariant::R), Err(FormulaError::NotRVariety(_))));
}

#[test]
fn tptp_psi_golden() {
    let (p, _) = bsl();
    let book = build_psi_schema(&p.signature, 1).unwrap();
    let items = export_tptp(&book, TptpRole::Axiom);
    assert_eq!(
        tptp_text(&items),
        "fof(psi, axiom, ! [X,Y,Z,U] : ((mul(U,X) = mul(U,Y)) => (mul(U,X) = mul(U,Z)))).\n"
    );
    assert_eq!(tptp_text(&[]), "");
}

#[test]
fn tptp_names() {
    assert_eq!(tptp_name("*"), "mul");
    assert_eq!(tptp_name("0"), "c0");
    assert_eq!(tptp_name("CAN'"), "can_p");
    assert_eq!(tptp_name("Phi"), "phi");
    assert_eq!(tptp_name("_x"), "f__x");
}

#[test]
fn json_tree_names_definitions() {
    let (p, w) = bsl();
    let book = build_pi(&p.signature, &w).unwrap();
    let v: serde_json::Value = serde_json::from_str(&book.to_json()).unwrap();
    assert_eq!(v["root"], "pi");
    assert_eq!(v["class"], "Π2");
    assert_eq!(v["definitions"][0]["name"], "psi");
    assert!(v["definitions"][1]["body"]["forall"].is_object());
}
