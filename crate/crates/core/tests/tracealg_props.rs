use proptest::prelude::*;
use trace_hhh::multigrade::{AxisBound, Window};
use trace_hhh::polyalg::{q, Poly};
use trace_hhh::tracealg::rep::{all_perms, partitions};
use trace_hhh::tracealg::{
    free_a_complex, free_module, induced_rep, nilp_y_check, triv_y, wedge_perm_rep, AlgebraTag, SkewAlgebra,
    SkewElement, SkewModule,
};

const N: usize = 3;

fn element() -> impl Strategy<Value = SkewElement> {
    let perms = all_perms(N);
    prop::collection::vec((0usize..perms.len(), 0u32..8, prop::collection::vec(0u32..2, N), -2i64..=2), 0..4)
        .prop_map(move |ts| {
            ts.into_iter().fold(SkewElement::zero(N), |acc, (w, s, m, c)| {
                acc.add(&SkewElement::term(Poly::from_terms(N, [(m, q(c))]), s, perms[w].clone()))
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn skew_product_is_associative(a in element(), b in element(), c in element()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn skew_product_is_bilinear(a in element(), b in element(), c in element()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
    }

    #[test]
    fn one_is_a_unit(a in element()) {
        let one = SkewElement::one(N);
        prop_assert_eq!(one.mul(&a), a.clone());
        prop_assert_eq!(a.mul(&one), a);
    }
}

#[test]
fn characters_agree_on_classes() {
    for n in 1..=5 {
        for a in 0..=n {
            let (i, w) = (induced_rep(a, n).unwrap(), wedge_perm_rep(a, n).unwrap());
            assert!(i.relations_hold() && w.relations_hold());
            assert_eq!(i.dim(), w.dim());
            assert_eq!(i.character().len(), partitions(n).len());
        }
    }
    assert!(induced_rep(3, 2).is_err());
    assert!(wedge_perm_rep(0, 0).is_err());
}

#[test]
fn module_json_round_trip() {
    let m = free_a_complex(2, &[[0, 0], [-2, 0]], &[(0, 1, SkewElement::theta(2, 1))]).unwrap();
    let j = serde_json::to_string(&m.to_json()).unwrap();
    let back = SkewModule::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
    back.check().unwrap();
    assert_eq!(back.to_json(), m.to_json());
}

#[test]
fn free_a_complex_rejects_bad_degrees() {
    let r = free_a_complex(2, &[[0, 0], [0, 0]], &[(0, 1, SkewElement::theta(2, 0))]);
    assert!(r.is_err());
    assert!(free_a_complex(2, &[[0, 0]], &[(0, 3, SkewElement::one(2))]).is_err());
}

#[test]
fn y_nilpotence_of_standard_modules() {
    let w = Window::from_bounds(vec![AxisBound::between(-8, 8), AxisBound::between(-4, 8)]);
    assert!(nilp_y_check(&triv_y(2).unwrap(), &w, 1).unwrap().nilpotent);
    let b = free_module(SkewAlgebra::new(AlgebraTag::B, 2).unwrap()).unwrap();
    let r = nilp_y_check(&b, &w, 4).unwrap();
    assert!(!r.nilpotent && r.failure.is_some());
}
