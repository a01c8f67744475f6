use proptest::prelude::*;
use trace_hhh::multigrade::{
    periodize_vs_shear_degrade, regrade, shear, shift, DimTable, GradingScheme, ShearDirection, Substitution,
};

fn table() -> impl Strategy<Value = DimTable> {
    prop::collection::vec(((-8i64..=8, -4i64..=4, -6i64..=6), 1u64..5), 0..10).prop_map(|es| {
        let mut t = DimTable::new(&GradingScheme::xyc());
        for ((x, y, c), v) in es {
            t.add(vec![x, y, c], v);
        }
        t
    })
}

proptest! {
    #[test]
    fn shift_is_invertible(t in table(), d in prop::array::uniform3(-5i64..=5)) {
        let s = GradingScheme::xyc();
        let deg = trace_hhh::multigrade::MultiDegree::from_exps(&s, d.to_vec()).unwrap();
        let back = shift(&shift(&t, &deg).unwrap(), &deg.neg()).unwrap();
        prop_assert!(back.eq_on_window(&t));
        prop_assert_eq!(back.total(), t.total());
    }

    #[test]
    fn shears_cancel(t in table()) {
        let l = shear(&t, "Y", ShearDirection::Left).unwrap();
        let r = shear(&l, "Y", ShearDirection::Right).unwrap();
        prop_assert!(r.eq_on_window(&t));
    }

    #[test]
    fn tilde_regrading_round_trips(t in table()) {
        let there = regrade(&t, &Substitution::xy_to_tilde()).unwrap();
        let back = regrade(&there, &Substitution::tilde_to_xy()).unwrap();
        prop_assert!(back.eq_on_window(&t));
        prop_assert_eq!(there.total(), t.total());
    }

    #[test]
    fn periodizing_matches_shearing(t in table()) {
        let (l, r) = periodize_vs_shear_degrade(&t, (-10, 10)).unwrap();
        prop_assert!(l.eq_on_window(&r), "{:?}", l.first_difference(&r));
    }

    #[test]
    fn json_round_trip(t in table()) {
        let j = serde_json::to_string(&t.to_json()).unwrap();
        let back = DimTable::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        prop_assert_eq!(back, t);
    }
}

#[test]
fn tilde_and_xy_substitutions_are_inverse() {
    let (a, b) = (Substitution::xy_to_tilde(), Substitution::tilde_to_xy());
    for v in [[1, 0, 0], [0, 1, 0], [0, 0, 1], [3, -2, 5]] {
        assert_eq!(b.apply(&a.apply(&v)), v.to_vec());
    }
}
