use beyondcp::consistency;
use beyondcp::dynmap::{self, SubsystemMap};
use beyondcp::operator::{self, partial_trace, tensor, trace_bath, Operator};
use beyondcp::{dilation, random, OperatorSubspace, ToleranceConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn partial_trace_of_product_is_scaled_factor(seed in any::<u64>(), ds in 1usize..4, db in 1usize..4) {
        let mut r = rng(seed);
        let a = random::ginibre(&mut r, ds);
        let b = random::ginibre(&mut r, db);
        let reduced = trace_bath(&tensor(&a, &b)).unwrap();
        let expected = a.scale(b.trace());
        prop_assert!(reduced.max_abs_diff(&expected) <= 1e-12 * (1.0 + expected.hs_norm()));
        let kept_bath = partial_trace(&tensor(&a, &b), &[1]).unwrap();
        prop_assert!(kept_bath.max_abs_diff(&b.scale(a.trace())) <= 1e-12 * (1.0 + b.hs_norm() * a.hs_norm()));
    }

    #[test]
    fn span_is_idempotent_and_contains_generators(seed in any::<u64>(), d in 1usize..4, k in 1usize..6) {
        let mut r = rng(seed);
        let gens: Vec<Operator> = (0..k).map(|_| random::ginibre(&mut r, d)).collect();
        let v = OperatorSubspace::span_from_generators(&gens, tol()).unwrap();
        prop_assert_eq!(v.dim(), k.min(d * d));
        for g in &gens {
            prop_assert!(v.residual(g).unwrap() <= 1e-9 * g.hs_norm());
        }
        let again = OperatorSubspace::span_from_generators(v.basis(), tol()).unwrap();
        prop_assert!(again.same_as(&v).unwrap());
    }

    #[test]
    fn intersection_is_contained_in_both(seed in any::<u64>(), shared in 0usize..3) {
        let mut r = rng(seed);
        let common: Vec<Operator> = (0..shared).map(|_| random::ginibre(&mut r, 3)).collect();
        let mut a = common.clone();
        a.extend((0..2).map(|_| random::ginibre(&mut r, 3)));
        let mut b = common;
        b.extend((0..2).map(|_| random::ginibre(&mut r, 3)));
        let va = OperatorSubspace::span_from_generators(&a, tol()).unwrap();
        let vb = OperatorSubspace::span_from_generators(&b, tol()).unwrap();
        let both = va.intersect(&vb).unwrap();
        prop_assert_eq!(both.dim(), shared);
        prop_assert!(va.contains_subspace(&both).unwrap());
        prop_assert!(vb.contains_subspace(&both).unwrap());
    }

    #[test]
    fn product_subspaces_are_consistent_for_any_unitary(seed in any::<u64>()) {
        let mut r = rng(seed);
        let tau = random::mixed_state(&mut r, 2);
        let v = OperatorSubspace::full(operator::SpaceLayout::single(2), tol()).tensor_with(&tau).unwrap();
        let u = random::haar_unitary(&mut r, 4).with_layout(operator::SpaceLayout::bipartite(2, 2)).unwrap();
        let verdict = consistency::is_u_consistent(&v, &u).unwrap();
        prop_assert!(verdict.consistent, "residual {}", verdict.worst_residual);
        let phi = dynmap::derive_map(&v, &u).unwrap();
        prop_assert!(phi.trace_preservation_residual() <= 1e-9);
        prop_assert!(dynmap::is_cp(&phi).unwrap().completely_positive);
    }

    #[test]
    fn cptp_maps_contract_trace_distance(seed in any::<u64>(), d in 2usize..4, k in 1usize..4) {
        let mut r = rng(seed);
        let phi = random::cptp_map(&mut r, d, k);
        let a = random::mixed_state(&mut r, d);
        let b = random::mixed_state(&mut r, d);
        let before = operator::schatten_distance(&a, &b, 1.0).unwrap();
        let after = operator::schatten_distance(&phi.apply(&a).unwrap(), &phi.apply(&b).unwrap(), 1.0).unwrap();
        prop_assert!(after <= before + 1e-10);
    }

    #[test]
    fn kraus_round_trip_through_choi(seed in any::<u64>(), d in 2usize..4, k in 1usize..4) {
        let mut r = rng(seed);
        let kraus = random::kraus_operators(&mut r, d, k);
        let phi = SubsystemMap::from_kraus(&kraus).unwrap();
        let recovered = dynmap::kraus_from_choi(&phi).unwrap();
        prop_assert!(recovered.len() <= d * d);
        let again = SubsystemMap::from_kraus(&recovered).unwrap();
        prop_assert!(again.deviation(&phi).unwrap() <= 1e-9);
        let rep = dilation::kraus_dilation(&kraus, &tol()).unwrap();
        prop_assert!(dilation::verify_representation(&rep, &phi).unwrap().pass);
    }

    #[test]
    fn emitted_operators_parse_back_exactly(seed in any::<u64>(), d in 1usize..5) {
        let op = random::ginibre(&mut rng(seed), d);
        let text = beyondcp::io::emit_operator(&op).to_string();
        prop_assert_eq!(beyondcp::io::parse_operator(&text).unwrap(), op);
    }
}
