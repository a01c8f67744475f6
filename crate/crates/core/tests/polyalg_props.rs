use proptest::prelude::*;
use trace_hhh::polyalg::linalg::SparseVec;
use trace_hhh::polyalg::{kernel_q, q, rank_q, Poly, Q};

const N: usize = 3;

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..3, N), -4i64..=4), 0..5)
        .prop_map(|ts| Poly::from_terms(N, ts.into_iter().map(|(m, c)| (m, q(c)))))
}

fn columns() -> impl Strategy<Value = Vec<SparseVec<Q>>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, 5), 0..7).prop_map(|cols| {
        cols.into_iter()
            .map(|c| c.into_iter().enumerate().filter(|(_, v)| *v != 0).map(|(i, v)| (i, q(v))).collect())
            .collect()
    })
}

fn apply(cols: &[SparseVec<Q>], v: &[(usize, Q)]) -> Vec<Q> {
    let mut out = vec![q(0); 5];
    for (j, c) in v {
        for (i, x) in &cols[*j] {
            out[*i] += c * x;
        }
    }
    out
}

proptest! {
    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn permuting_variables_is_a_ring_map(a in poly(), b in poly(), k in 0usize..6) {
        let perms = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let p = perms[k];
        prop_assert_eq!((&a * &b).permute(&p), &a.permute(&p) * &b.permute(&p));
    }

    #[test]
    fn evaluation_is_a_ring_map(a in poly(), b in poly(), pt in prop::array::uniform3(-3i64..=3)) {
        let pt: Vec<Q> = pt.iter().map(|&v| q(v)).collect();
        prop_assert_eq!((&a * &b).eval(&pt), a.eval(&pt) * b.eval(&pt));
    }

    #[test]
    fn rank_nullity(cols in columns()) {
        let kernel = kernel_q(&cols);
        prop_assert_eq!(rank_q(&cols) + kernel.len(), cols.len());
        for v in &kernel {
            prop_assert!(apply(&cols, v).iter().all(|x| *x == q(0)));
        }
    }
}
