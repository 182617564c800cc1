use hcwork::algebra::FinAlgebra;
use hcwork::complexes::tensor::TensorSpace;
use hcwork::exactla::{q, SparseVec, Q};
use hcwork::symideal::{
    b_prime, bar_contract, first_nonzero, hc0_table, ideal_power, lfloor, principal_generator, s_e_vanishes,
    tfp_witness, BarChain, Hc0Value, Kind, RootMode, SymIdealError, SymbolicIdeal,
};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Q> {
    (-30i64..=30, 1i64..=10).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

fn positive() -> impl Strategy<Value = Q> {
    (1i64..=40, 1i64..=8).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

fn any_ideal() -> impl Strategy<Value = SymbolicIdeal> {
    prop_oneof![
        Just(SymbolicIdeal::c0()),
        Just(SymbolicIdeal::linf_minus()),
        Just(SymbolicIdeal::linf()),
        positive().prop_map(|p| SymbolicIdeal::lp(p).unwrap()),
        positive().prop_map(|p| SymbolicIdeal::lp_minus(p).unwrap()),
        positive().prop_map(|p| SymbolicIdeal::lp_plus(p).unwrap()),
    ]
}

fn sequences() -> impl Strategy<Value = Vec<Vec<Q>>> {
    (1usize..=6).prop_flat_map(|len| prop::collection::vec(prop::collection::vec(rational(), len), 1..=4))
}

proptest! {
    #[test]
    fn powers_compose(s in any_ideal(), a in 1usize..=4, b in 1usize..=4) {
        let lhs = ideal_power(&ideal_power(&s, a).unwrap(), b).unwrap();
        prop_assert_eq!(lhs, ideal_power(&s, a * b).unwrap());
    }

    #[test]
    fn hc0_zero_iff_s_e_vanishes(s in any_ideal()) {
        if let Ok(v) = hc0_table(&s) {
            prop_assert_eq!(v == Hc0Value::Zero, s_e_vanishes(&s));
        }
    }

    #[test]
    fn first_nonzero_degree_is_twice_lfloor(p in positive()) {
        let r = first_nonzero(&SymbolicIdeal::lp(p.clone()).unwrap()).unwrap();
        prop_assert_eq!(r.degree, 2 * lfloor(&p));
        prop_assert!(r.value != Hc0Value::Zero);
    }

    #[test]
    fn display_parse_roundtrip(s in any_ideal()) {
        prop_assert_eq!(s.to_string().parse::<SymbolicIdeal>().unwrap(), s);
    }

    #[test]
    fn principal_generator_factors(gens in sequences()) {
        let g = principal_generator(&gens).unwrap();
        prop_assert!(g.verify(&gens));
    }

    #[test]
    fn certified_tfp_identity_is_exact(seqs in sequences()) {
        let w = tfp_witness(&seqs, RootMode::Certified).unwrap();
        prop_assert!(w.identity_holds(&seqs));
        prop_assert!(w.bound_holds(&seqs));
        prop_assert!(w.annihilators_agree());
    }

    #[test]
    fn bar_contract_bounds_random_cycles(entries in prop::collection::vec((0usize..64, rational()), 0..12)) {
        let j = FinAlgebra::rationals();
        let a = FinAlgebra::matrix_algebra(2, &j);
        let u = SparseVec::from_pairs(entries);
        let z = BarChain::from_vector(&j, 2, 1, &b_prime(&a, 2, &u));
        let w = bar_contract(&z, &z.tfp_factorization(RootMode::Certified).unwrap()).unwrap();
        prop_assert_eq!(b_prime(&a, 2, &w), z.to_vector());
    }
}

#[test]
fn kinds_without_parameter_reject_one() {
    assert!(SymbolicIdeal::new(Kind::C0, Some(q(1))).is_err());
    assert!(SymbolicIdeal::new(Kind::Lp, None).is_err());
}

#[test]
fn non_cycle_is_rejected() {
    let j = FinAlgebra::rationals();
    let sp = TensorSpace::new(vec![4, 4]);
    let z = BarChain::from_vector(&j, 2, 1, &sp.tuple_vec(&[0, 1], q(1)));
    let wit = z.tfp_factorization(RootMode::Exact).unwrap();
    assert!(matches!(bar_contract(&z, &wit), Err(SymIdealError::NotACycle)));
}
