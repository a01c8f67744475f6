use crate::polyalg::{FreeComplex, GradedFreeModule, Poly, PolyError, PolyMatrix, PolyRing};
use crate::soergel::Bimodule;

/// Size-`a` subsets of `0..n` in lexicographic order, as bitmasks.
pub fn subsets(n: usize, a: usize) -> Vec<u32> {
    let mut out: Vec<u32> = (0u32..(1 << n)).filter(|s| s.count_ones() as usize == a).collect();
    out.sort_by_key(|s| (0..n).map(|i| (s >> i) & 1 == 0).collect::<Vec<_>>());
    out
}

fn position(list: &[u32], s: u32) -> usize {
    list.iter().position(|&t| t == s).expect("subset present")
}

/// `M (x) wedge^a V` as a free left module: generator `(S, b)` sits at index
/// `pos(S) * rank(M) + b` in degree `deg b + 2a`.
pub fn wedge_module(m: &Bimodule, a: usize) -> GradedFreeModule {
    let ring = PolyRing::x_ring(m.n());
    let degs = m.gen_degrees();
    let mut gens = Vec::new();
    for _ in subsets(m.n(), a) {
        for g in &degs {
            gens.push(vec![g + 2 * a as i64, 0]);
        }
    }
    GradedFreeModule::new(&ring, gens).expect("x ring")
}

/// Koszul differential `M (x) wedge^a -> M (x) wedge^{a-1}`,
/// `b (x) theta_S -> sum_i (-1)^{#(j in S, j < i)} (x_i - rho_i) b (x) theta_{S - i}`.
pub fn koszul_differential(m: &Bimodule, a: usize) -> PolyMatrix {
    let n = m.n();
    let r = m.rank();
    let src = wedge_module(m, a);
    let tgt = wedge_module(m, a.saturating_sub(1));
    let mut d = PolyMatrix::zero(&src, &tgt, vec![0, 0]);
    if a == 0 {
        return d;
    }
    let lower = subsets(n, a - 1);
    for (si, s) in subsets(n, a).into_iter().enumerate() {
        for i in 0..n {
            if s & (1 << i) == 0 {
                continue;
            }
            let sign = if (s & ((1 << i) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
            let ti = position(&lower, s & !(1 << i));
            let rho = &m.rho()[i];
            for b in 0..r {
                for b2 in 0..r {
                    let mut e = -rho.get(b2, b);
                    if b == b2 {
                        e = &e + &Poly::var(n, i);
                    }
                    if e.is_zero() {
                        continue;
                    }
                    let e = if sign < 0 { -&e } else { e };
                    d.set(ti * r + b2, si * r + b, e);
                }
            }
        }
    }
    d
}

/// `f (x) id` on `wedge^a` for a map `f: M -> N` of bimodules.
pub fn wedge_map(f: &PolyMatrix, m: &Bimodule, nn: &Bimodule, a: usize) -> PolyMatrix {
    let src = wedge_module(m, a);
    let tgt = wedge_module(nn, a);
    let (rm, rn) = (m.rank(), nn.rank());
    let mut out = PolyMatrix::zero(&src, &tgt, f.degree().to_vec());
    for s in 0..subsets(m.n(), a).len() {
        for l in 0..rn {
            for k in 0..rm {
                let e = f.get(l, k);
                if !e.is_zero() {
                    out.set(s * rn + l, s * rm + k, e.clone());
                }
            }
        }
    }
    out
}

/// The Koszul complex computing `HH_*(R, M)` as one free complex on the
/// `(X, C)` scheme: `M (x) wedge^a` sits in `C = -a`, so `HH_a` is the
/// cohomology at `C = -a`.
pub fn koszul_hh(m: &Bimodule) -> Result<FreeComplex, PolyError> {
    let n = m.n();
    let ring = PolyRing::x_ring(n);
    let mut gens = Vec::new();
    let mut offsets = Vec::new();
    for a in 0..=n {
        offsets.push(gens.len());
        for g in wedge_module(m, a).gens() {
            gens.push(vec![g[0], -(a as i64)]);
        }
    }
    let module = GradedFreeModule::new(&ring, gens)?;
    let mut d = PolyMatrix::zero(&module, &module, vec![0, 1]);
    for a in 1..=n {
        let k = koszul_differential(m, a);
        for l in 0..k.rows() {
            for c in 0..k.cols() {
                let e = k.get(l, c);
                if !e.is_zero() {
                    d.set(offsets[a - 1] + l, offsets[a] + c, e.clone());
                }
            }
        }
    }
    FreeComplex::new(module, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigrade::{AxisBound, Window};
    use crate::soergel::{bott_samelson, regular_bimodule};

    fn window(xmax: i64, n: usize) -> Window {
        Window::from_bounds(vec![AxisBound::at_most(xmax), AxisBound::between(-(n as i64), 0)])
    }

    #[test]
    fn subsets_are_lex() {
        assert_eq!(subsets(3, 2), vec![0b011, 0b101, 0b110]);
        assert_eq!(subsets(3, 0), vec![0]);
    }

    #[test]
    fn unknot_koszul_homology() {
        let k = koszul_hh(&regular_bimodule(1)).unwrap();
        let t = k.homology_dims(&window(10, 1)).unwrap();
        for x in (0..=10).step_by(2) {
            assert_eq!(t.get(&[x, 0]), Some(1));
            assert_eq!(t.get(&[x, -1]), Some(u64::from(x >= 2)));
        }
        assert_eq!(t.get(&[1, 0]), Some(0));
    }

    #[test]
    fn regular_bimodule_two_strands_is_free() {
        let k = koszul_hh(&regular_bimodule(2)).unwrap();
        assert!(k.differential().is_zero());
        let t = k.homology_dims(&window(8, 2)).unwrap();
        // dim Q[x1,x2]_X = X/2 + 1, shifted by 2a, times binom(2, a)
        for x in (0..=8).step_by(2) {
            for a in 0..=2i64 {
                let m = x - 2 * a;
                let free = if m < 0 { 0 } else { m / 2 + 1 };
                let binom = [1, 2, 1][a as usize];
                assert_eq!(t.get(&[x, -a]), Some((free * binom) as u64));
            }
        }
    }

    #[test]
    fn koszul_squares_to_zero_on_bs() {
        for w in [vec![1], vec![1, 2], vec![2, 1, 2]] {
            let m = bott_samelson(&w, 3).unwrap();
            assert!(koszul_hh(&m).is_ok());
        }
    }
}
