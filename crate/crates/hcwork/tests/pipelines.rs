use hcwork::algebra::{FinAlgebra, SubalgebraEmbedding};
use hcwork::complexes::hochschild::{absolute_cyclic_module, RightModule};
use hcwork::crossed::bicomplex::{hc_crossed_check, hh0_coinvariants, hh_crossed_check};
use hcwork::crossed::morita::morita_check;
use hcwork::crossed::{check_realization, crossed_product, diag_realization, Bundle, CovariantBimodule};
use hcwork::forms::{cgg_check, CommPresentedAlgebra, PresentedJson};

#[test]
fn crossed_q2_is_morita_equivalent_to_q() {
    let b = Bundle::sequence(&FinAlgebra::rationals(), 2).unwrap();
    let c = crossed_product(&b).unwrap();
    let r = diag_realization(&c).unwrap();
    assert_eq!(r.target.dim(), 4);
    let direct = absolute_cyclic_module(&r.target, 4).unwrap().mixed().unwrap().hc_table().unwrap();
    let rep = hc_crossed_check(&b, 3).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.lhs(), direct);
    assert_eq!(direct, vec![1, 0, 1, 0]);
}

#[test]
fn dual_numbers_crossed_hochschild() {
    let b = Bundle::sequence(&FinAlgebra::truncated_poly(2), 2).unwrap();
    let m = CovariantBimodule::regular(&b);
    assert_eq!(hh0_coinvariants(&b, &m).unwrap(), (2, 2));
    assert!(hh_crossed_check(&b, &m, 2).unwrap().passed());
    assert!(check_realization(&FinAlgebra::truncated_poly(2), 2, &[hcwork::exactla::SparseVec::unit(1)])
        .unwrap()
        .passed());
}

#[test]
fn morita_on_diagonal_of_m2() {
    let e = SubalgebraEmbedding::diagonal_in_matrices(2);
    let rep = morita_check(&e, &RightModule::regular(&e.big), 2).unwrap();
    assert!(rep.passed());
}

#[test]
fn cgg_from_json_two_variables() {
    let text = r#"{"vars": ["x", "y"],
        "relations": [[["1", [2, 0]]], [["1", [0, 2]]]],
        "ideal": [[["1", [1, 0]]], [["1", [0, 1]]]]}"#;
    let j: PresentedJson = serde_json::from_str(text).unwrap();
    let (r, s) = CommPresentedAlgebra::from_json(&j).unwrap();
    assert_eq!(r.dim(), 4);
    for p in 0..=1 {
        let rep = cgg_check(&r, &s, p, 2).unwrap();
        assert!(rep.passed(), "p = {p}: {rep:?}");
    }
}
