use proptest::prelude::*;
use trace_hhh::hochschild::{q_window, HHHTable, HhhOptions};
use trace_hhh::rouquier::{rouquier_complex, rouquier_complex_simplified, simplify, BraidWord, BimoduleComplex};
use trace_hhh::soergel::{bott_samelson, check_bimodule, graded_rank, tensor, Bimodule};

fn word(n: usize, max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1..n, 0..=max)
}

fn braid(n: usize, max: usize) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec((1..n as i32, any::<bool>()), 0..=max)
        .prop_map(move |ls| BraidWord::new(n, ls.into_iter().map(|(i, s)| if s { i } else { -i }).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bott_samelson_is_a_bimodule(w in word(4, 4)) {
        let m = bott_samelson(&w, 4).unwrap();
        prop_assert!(check_bimodule(&m).ok);
        prop_assert_eq!(m.rank(), 1 << w.len());
        // graded rank of BS(w) is (v + v^-1)^len
        let gr = graded_rank(&m);
        let len = w.len();
        for (k, r) in gr {
            let j = (k + len as i64) / 2;
            prop_assert_eq!(r, binomial(len, j as usize));
        }
    }

    #[test]
    fn tensor_concatenates_words(u in word(3, 2), v in word(3, 2)) {
        let t: Bimodule = tensor(&bott_samelson(&u, 3).unwrap(), &bott_samelson(&v, 3).unwrap()).unwrap();
        let uv = bott_samelson(&[u.clone(), v.clone()].concat(), 3).unwrap();
        prop_assert_eq!(t.rho(), uv.rho());
    }

    #[test]
    fn rouquier_complexes_are_complexes(b in braid(3, 3)) {
        let c = rouquier_complex(&b).unwrap();
        prop_assert!(c.check_d_squared().unwrap());
        prop_assert!(c.check_bimodule_maps().unwrap());
        let s = simplify(&c).unwrap();
        prop_assert!(s.check_d_squared().unwrap());
        prop_assert!(s.total_rank() <= c.total_rank());
    }

    #[test]
    fn json_round_trip(b in braid(3, 3)) {
        let c = rouquier_complex_simplified(&b).unwrap();
        let j = serde_json::to_string(&c.to_json()).unwrap();
        let back = BimoduleComplex::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        prop_assert_eq!(back, c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn simplification_preserves_homology(b in braid(3, 3)) {
        let w = q_window(4);
        let fast = HHHTable::compute(&b, &w, &HhhOptions::default()).unwrap();
        let slow = HHHTable::compute(&b, &w, &HhhOptions { simplify: false, ..Default::default() }).unwrap();
        prop_assert_eq!(fast.table, slow.table);
    }

    #[test]
    fn a_crossing_cancels_its_inverse(b in braid(2, 2), i in 0usize..2) {
        let letter = b.letters().get(i).copied().unwrap_or(1);
        let mut with = b.letters().to_vec();
        with.splice(0..0, [letter, -letter]);
        let w = q_window(4);
        let l = HHHTable::compute(&b, &w, &HhhOptions::default()).unwrap();
        let r = HHHTable::compute(&BraidWord::new(2, with).unwrap(), &w, &HhhOptions::default()).unwrap();
        prop_assert_eq!(l.table, r.table);
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn crossing_ranks() {
    let c = rouquier_complex(&BraidWord::new(2, vec![1, -1]).unwrap()).unwrap();
    assert_eq!(c.ranks().iter().map(|(_, r)| r).sum::<usize>(), c.total_rank());
    let s = simplify(&c).unwrap();
    assert_eq!(s.total_rank(), 1, "sigma sigma^-1 reduces to R");
}
