use proptest::prelude::*;
use trace_hhh::hochschild::HhhOptions;
use trace_hhh::polyalg::q;
use trace_hhh::rouquier::BraidWord;
use trace_hhh::supports::{smaller_stratum, stratum_ideal, stratum_point, support_report, Nilpotence};
use trace_hhh::tracealg::rep::partitions;

proptest! {
    #[test]
    fn ideals_vanish_on_their_strata(vals in prop::collection::vec(-5i64..=5, 3)) {
        for n in 2..=3 {
            for ct in partitions(n) {
                let ideal = stratum_ideal(&ct, n).unwrap();
                let v: Vec<_> = vals.iter().map(|&x| q(x)).collect();
                prop_assert!(ideal.vanishes_at(&stratum_point(&ct, &v)), "{:?} {:?}", ct, vals);
            }
        }
    }
}

#[test]
fn ideals_cut_out_no_more_than_the_stratum() {
    // distinct coordinates lie off every nontrivial stratum
    let generic: Vec<_> = [1, 2, 4].iter().map(|&x| q(x)).collect();
    for ct in [vec![2, 1], vec![3]] {
        assert!(!stratum_ideal(&ct, 3).unwrap().vanishes_at(&generic));
    }
    let pair: Vec<_> = [1, 1, 4].iter().map(|&x| q(x)).collect();
    assert!(stratum_ideal(&[2, 1], 3).unwrap().vanishes_at(&pair));
    assert!(!stratum_ideal(&[3], 3).unwrap().vanishes_at(&pair));
}

#[test]
fn smaller_strata() {
    assert_eq!(smaller_stratum(&[1, 1]), Some(vec![2]));
    assert_eq!(smaller_stratum(&[2, 1]), Some(vec![3]));
    assert_eq!(smaller_stratum(&[3]), None);
}

#[test]
fn report_serializes_with_verdicts() {
    let r = support_report(&BraidWord::new(2, vec![1, 1, 1]).unwrap(), 6, 6, &HhhOptions::default()).unwrap();
    let j = serde_json::to_value(&r).unwrap();
    assert_eq!(j["status"], "PASS");
    assert_eq!(j["generators"][0]["verdict"], "PASS");
    assert!(matches!(r.generators[0].result, Nilpotence::Pass { .. }));
}

#[test]
fn three_strand_torus_knot_has_full_cycle_stratum() {
    let b = BraidWord::new(3, vec![1, 2, 1, 2]).unwrap();
    let r = support_report(&b, 2, 3, &HhhOptions::default()).unwrap();
    assert_eq!(r.cycle_type, vec![3]);
    assert_eq!(r.generators.len(), 3);
    assert!(r.control.is_none());
}
