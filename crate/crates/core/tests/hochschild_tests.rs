use trace_hhh::hochschild::{q_window, Convention, HHHTable, HhhOptions};
use trace_hhh::rouquier::BraidWord;

fn hhh(n: usize, w: &[i32], q: i64) -> HHHTable {
    HHHTable::compute(&BraidWord::new(n, w.to_vec()).unwrap(), &q_window(q), &HhhOptions::default()).unwrap()
}

/// Poincare series at `t = -1` per `(a, q2)`: the HOMFLY-PT specialization.
fn euler(t: &HHHTable) -> std::collections::BTreeMap<(i64, i64), i64> {
    let mut out = std::collections::BTreeMap::new();
    for (e, v) in t.render(Convention::Qat).unwrap().entries() {
        let sign = if (e[2] / 2) % 2 == 0 { 1 } else { -1 };
        *out.entry((e[0], e[1])).or_insert(0) += sign * v as i64;
    }
    out.retain(|_, v| *v != 0);
    out
}

#[test]
fn json_round_trip() {
    let t = hhh(3, &[1, -2], 4);
    let j = serde_json::to_string(&t.to_json()).unwrap();
    let back = HHHTable::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
    assert_eq!(back, t);
}

#[test]
fn mirror_braids_share_dimension_totals_only_up_to_regrading() {
    let (p, m) = (hhh(2, &[1, 1, 1], 6), hhh(2, &[-1, -1, -1], 6));
    assert!(p.table.total() > 0 && m.table.total() > 0);
    assert_ne!(p.table, m.table);
}

#[test]
fn renders_cover_every_convention() {
    let t = hhh(2, &[1], 4);
    for c in ["qat", "QAT", "tilde"] {
        let conv: Convention = c.parse().unwrap();
        assert!(t.render(conv).unwrap().total() > 0);
    }
    assert!("nope".parse::<Convention>().is_err());
}

#[test]
fn unknot_diagrams() {
    let unknot = hhh(1, &[], 4).table;
    // positive stabilizations are exact
    assert!(hhh(3, &[1, 2], 4).table.eq_on_window(&unknot));
    // a negative one costs the constant (a, X, C) = (1, 0, 2)
    let neg = hhh(3, &[1, -2], 4);
    let shifted = trace_hhh::multigrade::shift(
        &unknot,
        &trace_hhh::multigrade::MultiDegree::from_exps(unknot.scheme(), vec![1, 0, 2]).unwrap(),
    )
    .unwrap();
    assert!(neg.table.eq_on_window(&shifted), "{:?}", neg.table.first_difference(&shifted));
    assert_eq!(euler(&hhh(3, &[1, 2], 4)), euler(&hhh(1, &[], 4)));
}
