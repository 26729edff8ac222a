mod common;

use proptest::prelude::*;

use pog_core::algebra::{direct_product, FiniteAlgebra};
use pog_core::congruence::{
    central_pairs, congruence_generated, factor_pairs, is_directly_indecomposable, Partition,
};
use pog_core::order::{related_order, OrderRelation};
use pog_core::search::{collect_models_up_to, Budget, Filters};

/// Reflexive-transitive closure of a random relation that only points
/// upwards in `0..n`, hence a partial order.
fn order(max: usize) -> impl Strategy<Value = Vec<Vec<bool>>> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let mut m: Vec<Vec<bool>> = (0..n).map(|x| (0..n).map(|y| x == y || (x < y && bits[x * n + y])).collect()).collect();
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if m[i][k] && m[k][j] {
                            m[i][j] = true;
                        }
                    }
                }
            }
            m
        })
    })
}

fn bsl_like_models(max: usize) -> Vec<FiniteAlgebra> {
    collect_models_up_to(&common::preset("bsl"), max, true, Filters::NONE, Budget::unlimited()).unwrap()
}

proptest! {
    #[test]
    fn connectivity_matches_union_find(m in order(6)) {
        let n = m.len();
        let o = OrderRelation::new(n, m.iter().flatten().copied().collect()).unwrap();
        prop_assert_eq!(o.is_connected(), common::connected(&m));
        for x in 0..n {
            for y in 0..n {
                match o.zigzag_between(x, y) {
                    Some(z) => {
                        prop_assert!(z.is_valid(&o));
                        prop_assert_eq!((z.x, z.y), (x, y));
                    }
                    None => prop_assert!(!o.is_connected()),
                }
            }
        }
    }

    #[test]
    fn generated_congruences_are_monotone_and_idempotent(
        which in 0..3usize,
        pairs in proptest::collection::vec((0..6usize, 0..6usize), 0..4),
        extra in (0..6usize, 0..6usize),
    ) {
        let models = collect_models_up_to(&common::preset(["bsl", "semilattice", "band"][which]), 4, true, Filters::NONE, Budget::unlimited()).unwrap();
        for a in &models {
            let n = a.size();
            let ps: Vec<_> = pairs.iter().map(|&(x, y)| (x % n, y % n)).collect();
            let cg = congruence_generated(a, &ps).unwrap();
            prop_assert!(common::is_congruence(a, cg.labels()));
            // least: every brute-force congruence containing the pairs is coarser
            for c in common::congruences(a) {
                if ps.iter().all(|&(x, y)| c[x] == c[y]) {
                    prop_assert!((0..n).all(|x| (0..n).all(|y| !cg.related(x, y) || c[x] == c[y])));
                }
            }
            let mut more = ps.clone();
            more.push((extra.0 % n, extra.1 % n));
            prop_assert!(cg.refines(&congruence_generated(a, &more).unwrap()));
            let all_pairs: Vec<_> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| cg.related(x, y)).collect();
            prop_assert_eq!(congruence_generated(a, &all_pairs).unwrap(), cg);
        }
    }
}

#[test]
fn po_presets_have_related_orders() {
    for (name, p) in common::presets() {
        let pre = pog_core::harness::preset(name).unwrap();
        let max = if name == "groupoid" { 3 } else { 4 };
        for a in collect_models_up_to(&p, max, true, Filters::NONE, Budget::unlimited()).unwrap() {
            let m = common::leq_matrix(&a);
            let ours = related_order(&a, &p.signature);
            assert_eq!(ours.is_ok(), common::is_partial_order(&m), "{name}");
            if let Ok(o) = ours {
                assert_eq!(o.matrix(), m);
                assert_eq!(o.is_connected(), common::connected(&m));
                if pre.connected {
                    assert!(o.is_connected(), "{name}");
                }
            }
        }
    }
    let rz = common::preset("rightzero");
    for a in collect_models_up_to(&rz, 5, true, Filters::NONE, Budget::unlimited()).unwrap() {
        let o = related_order(&a, &rz.signature).unwrap();
        assert_eq!(o.is_connected(), a.size() == 1);
    }
}

#[test]
fn congruences_match_brute_force() {
    for (name, p) in common::presets() {
        let max = if name == "groupoid" { 2 } else { 4 };
        for a in collect_models_up_to(&p, max, true, Filters::NONE, Budget::unlimited()).unwrap() {
            let mut ours: Vec<Vec<usize>> = pog_core::congruence::all_congruences(&a)
                .unwrap()
                .iter()
                .map(|c| c.labels().to_vec())
                .collect();
            ours.sort();
            let mut oracle = common::congruences(&a);
            oracle.sort();
            assert_eq!(ours, oracle, "{name}");
            let mut fp: Vec<_> = factor_pairs(&a)
                .unwrap()
                .iter()
                .map(|f| (f.theta.labels().to_vec(), f.theta_prime.labels().to_vec()))
                .collect();
            fp.sort();
            let mut ofp = common::factor_pairs(&a);
            ofp.sort();
            assert_eq!(fp, ofp, "{name}");
            assert_eq!(is_directly_indecomposable(&a).unwrap(), common::indecomposable(&a), "{name}");
        }
    }
}

#[test]
fn factor_pairs_induce_bijections_up_to_six() {
    for name in ["bsl", "semilattice", "slat0"] {
        for a in collect_models_up_to(&common::preset(name), 6, true, Filters::NONE, Budget::unlimited()).unwrap() {
            for fp in factor_pairs(&a).unwrap() {
                let map = fp.decomposition_map();
                let (p, q) = (fp.theta.num_blocks(), fp.theta_prime.num_blocks());
                let mut hit = vec![false; p * q];
                for &(x, y) in &map {
                    assert!(!hit[x * q + y], "not injective");
                    hit[x * q + y] = true;
                }
                assert!(hit.iter().all(|&h| h), "not surjective");
            }
        }
    }
}

#[test]
fn central_pairs_follow_factor_pairs() {
    for a in bsl_like_models(5) {
        let (zero, one) = (vec![a.op(1, &[])], vec![a.op(2, &[])]);
        let cps = central_pairs(&a, &zero, &one).unwrap();
        let mut ours: Vec<_> = cps.iter().map(|c| (c.e.clone(), c.f.clone())).collect();
        ours.sort();
        let mut oracle = common::central_pairs(&a, &zero, &one);
        oracle.sort();
        assert_eq!(ours, oracle);
        // swapping θ and θ′ swaps e⃗ and f⃗
        for c in &cps {
            assert!(ours.contains(&(c.f.clone(), c.e.clone())));
        }
        let fps = factor_pairs(&a).unwrap();
        for fp in &fps {
            assert!(cps.iter().any(|c| {
                c.e.iter().zip(&zero).all(|(&e, &z)| fp.theta.related(e, z))
                    && c.e.iter().zip(&one).all(|(&e, &o)| fp.theta_prime.related(e, o))
            }));
        }
    }
}

#[test]
fn products_of_nontrivial_algebras_decompose() {
    let models = bsl_like_models(3);
    let band = collect_models_up_to(&common::preset("band"), 3, true, Filters::NONE, Budget::unlimited()).unwrap();
    for set in [&models, &band] {
        for a in set.iter().filter(|a| a.size() >= 2) {
            // products within the default congruence bound
            for b in set.iter().filter(|b| b.size() >= 2 && a.size() * b.size() <= 7) {
                let prod = direct_product(a, b, 9).unwrap();
                assert!(!is_directly_indecomposable(&prod.algebra).unwrap());
            }
        }
    }
}

#[test]
fn partitions_are_canonical() {
    for labels in common::partitions(5) {
        let p = Partition::from_keys(&labels);
        assert_eq!(p.labels(), &labels[..]);
        let shuffled: Vec<usize> = labels.iter().map(|&l| 7 - l).collect();
        assert_eq!(Partition::from_keys(&shuffled), p);
    }
    assert_eq!(common::partitions(5).len(), 52);
}
