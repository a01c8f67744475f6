//! Koszul duality between `A`- and `B`-modules, and the Hom functors out of
//! `Q[x] (x) wedge^a P`.

use num_traits::Zero;
use rayon::prelude::*;

use super::algebra::{AlgebraTag, SkewAlgebra};
use super::module::{SkewModule, THETA_DEGREE, Y_DEGREE};
use super::rep::{act_on_subset, all_perms, inverse, transposition, wedge_perm_rep, wedge_sign, DenseMatrix, Perm};
use super::TraceError;
use crate::hochschild::qat_scheme;
use crate::multigrade::{DimTable, Window};
use crate::polyalg::{rank_q, linalg::SparseVec, FreeComplex, GradedFreeModule, Poly, PolyMatrix, Q};

fn embed_xy(p: &Poly, n: usize) -> Poly {
    if p.nvars() == 2 * n {
        p.clone()
    } else {
        p.embed(2 * n, &(0..n).collect::<Vec<_>>())
    }
}

/// `M (x) Q[y]` with differential `d_M + sum_i theta_i y_i`; `S_n` acts
/// diagonally.
pub fn inv_theta_enh(m: &SkewModule) -> Result<SkewModule, TraceError> {
    if m.algebra().tag != AlgebraTag::A {
        return Err(TraceError::Shape("inv_theta takes a module over A".into()));
    }
    let n = m.n();
    if m.module().ring().nvars() != n {
        return Err(TraceError::Shape("inv_theta needs a module free over Q[x]".into()));
    }
    let alg = SkewAlgebra::new(AlgebraTag::B, n)?;
    let ring = alg.ring(true);
    let module = GradedFreeModule::new(&ring, m.module().gens().to_vec())?;
    let r = m.rank();
    let mut d = PolyMatrix::zero(&module, &module, vec![0, 1]);
    for l in 0..r {
        for k in 0..r {
            let mut e = embed_xy(m.differential().get(l, k), n);
            for (i, th) in m.theta().iter().enumerate() {
                let t = th.get(l, k);
                if !t.is_zero() {
                    e = &e + &(&embed_xy(t, n) * &ring.var(n + i));
                }
            }
            d.set(l, k, e);
        }
    }
    let complex = FreeComplex::new(module.clone(), d)?;
    let even = (0..n).map(|i| PolyMatrix::scalar(&module, &ring.var(n + i), Y_DEGREE.to_vec())).collect();
    Ok(SkewModule::from_parts(alg, complex, Vec::new(), even, m.symmetric().to_vec()))
}

/// `inv_theta` twisted by the sign character and by `(X, C) -> (X - 2n, C - n)`,
/// so that the free module goes to `triv_y`.
pub fn inv_theta_twisted(m: &SkewModule) -> Result<SkewModule, TraceError> {
    let n = m.n() as i64;
    inv_theta_enh(m)?.shifted(-2 * n, -n).map(|x| x.sign_twisted())
}

/// `N (x) wedge(eta)` with `eta` in `(-2, -1)`: the `y`-Koszul resolution of
/// `Q (x)_{Q[y]} N`. Ordering `eta_S (x) n`, the differential is
/// `(-1)^{|S|} eta_S (x) d n + sum_{i in S} (-1)^{#(j in S, j < i)} eta_{S - i} (x) y_i n`
/// and `theta_i` contracts `eta_i` from the left.
pub fn coinv_y_enh(nm: &SkewModule) -> Result<SkewModule, TraceError> {
    if !nm.algebra().tag.has_y() {
        return Err(TraceError::Shape("coinv_y takes a module over B".into()));
    }
    let n = nm.n();
    let r = nm.rank();
    let ring = nm.module().ring().clone();
    let nv = ring.nvars();
    let mut gens = Vec::new();
    for s in 0u32..1 << n {
        let k = i64::from(s.count_ones());
        for g in nm.module().gens() {
            gens.push(vec![g[0] - 2 * k, g[1] - k]);
        }
    }
    let module = GradedFreeModule::new(&ring, gens)?;
    let at = |s: u32, b: usize| s as usize * r + b;
    let mut d = PolyMatrix::zero(&module, &module, vec![0, 1]);
    let dn = nm.differential();
    for s in 0u32..1 << n {
        let flip = s.count_ones() % 2 == 1;
        for l in 0..r {
            for k in 0..r {
                let e = dn.get(l, k);
                if !e.is_zero() {
                    d.set(at(s, l), at(s, k), if flip { -e } else { e.clone() });
                }
            }
        }
        for (i, y) in nm.y().iter().enumerate() {
            let Some(sign) = contraction_sign(s, i) else { continue };
            for l in 0..r {
                for k in 0..r {
                    let e = y.get(l, k);
                    if !e.is_zero() {
                        d.set(at(s & !(1 << i), l), at(s, k), if sign < 0 { -e } else { e.clone() });
                    }
                }
            }
        }
    }
    let complex = FreeComplex::new(module.clone(), d)?;
    let odd = (0..n)
        .map(|i| {
            let mut op = PolyMatrix::zero(&module, &module, THETA_DEGREE.to_vec());
            for s in 0u32..1 << n {
                if let Some(sign) = contraction_sign(s, i) {
                    for b in 0..r {
                        op.set(at(s & !(1 << i), b), at(s, b), Poly::integer(nv, sign));
                    }
                }
            }
            op
        })
        .collect();
    let sym = nm
        .symmetric()
        .iter()
        .enumerate()
        .map(|(k, inner)| {
            let w = transposition(n, k);
            let size = r << n;
            let mut out: DenseMatrix = vec![vec![Q::zero(); size]; size];
            for s in 0u32..1 << n {
                let (e, t) = act_on_subset(&w, s);
                for i in 0..r {
                    for j in 0..r {
                        if !inner[i][j].is_zero() {
                            out[at(t, i)][at(s, j)] = Q::from_integer(e.into()) * &inner[i][j];
                        }
                    }
                }
            }
            out
        })
        .collect();
    let alg = SkewAlgebra::new(AlgebraTag::A, n)?;
    Ok(SkewModule::from_parts(alg, complex, odd, Vec::new(), sym))
}

/// `coinv_y` twisted by the sign character and by `(X, C) -> (X + 2n, C + n)`.
pub fn coinv_y_twisted(nm: &SkewModule) -> Result<SkewModule, TraceError> {
    let n = nm.n() as i64;
    coinv_y_enh(nm)?.shifted(2 * n, n).map(|x| x.sign_twisted())
}

/// `(-1)^{#(j in S, j < i)}` when `i in S`.
fn contraction_sign(s: u32, i: usize) -> Option<i64> {
    if s >> i & 1 == 0 {
        return None;
    }
    wedge_sign(1 << i, s & !(1 << i))
}

/// Graded dimensions of `Hom(Q[x] (x) wedge^a P, M)` over `Q[x] # S_n`.
/// Over `A` the source carries the `Sym^n V[-1]` twist; by Koszul duality
/// this is the same Hom into the twisted `inv_theta(M)`, taken degreewise.
pub fn gamma_a(m: &SkewModule, a: usize, window: &Window) -> Result<DimTable, TraceError> {
    let target = match m.algebra().tag {
        AlgebraTag::A => inv_theta_twisted(m)?,
        _ => m.clone(),
    };
    let n = target.n();
    let wedge = wedge_perm_rep(a, n)?;
    let group: Vec<(Perm, DenseMatrix)> = all_perms(n)
        .into_iter()
        .map(|g| {
            // contragredient: rho(g^-1)^T
            let inv = wedge.matrix(&inverse(&g));
            let dual = (0..inv.len()).map(|i| (0..inv.len()).map(|j| inv[j][i].clone()).collect()).collect();
            (g, dual)
        })
        .collect();
    let cx = target.complex();
    let table = cx.homology_dims(window)?;
    let degrees: Vec<[i64; 2]> = table.entries().filter(|(_, v)| *v > 0).map(|(e, _)| [e[0], e[1]]).collect();
    let dims: Vec<([i64; 2], u64)> = degrees
        .par_iter()
        .map(|&[x, c]| {
            let dim_w = wedge.dim();
            // averaging operator on W* (x) M_{x,c}, applied to each basis vector
            let averaged = |cc: i64| -> Vec<SparseVec<Q>> {
                let basis = cx.module().slice(&[x, cc]);
                let len = basis.len();
                let mut cols = Vec::new();
                for u in 0..dim_w {
                    for b in 0..len {
                        let mut acc = vec![Q::zero(); dim_w * len];
                        for (g, rho) in &group {
                            let gb = target.act_perm_on_slice(g, &[(b, Q::from_integer(1.into()))], &basis);
                            for (u2, row) in rho.iter().enumerate() {
                                let coef = &row[u];
                                if coef.is_zero() {
                                    continue;
                                }
                                for (i, v) in &gb {
                                    acc[u2 * len + i] += coef * v;
                                }
                            }
                        }
                        cols.push(acc.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect());
                    }
                }
                cols
            };
            let apply_d = |cols: &[SparseVec<Q>], cc: i64| -> Vec<SparseVec<Q>> {
                let src = cx.module().slice(&[x, cc]);
                let tgt = cx.module().slice(&[x, cc + 1]);
                let (ls, lt) = (src.len(), tgt.len());
                cols.iter()
                    .map(|col| {
                        let mut out: Vec<(usize, Q)> = Vec::new();
                        for u in 0..dim_w {
                            let part: Vec<(usize, Q)> = col
                                .iter()
                                .filter(|(i, _)| i / ls.max(1) == u)
                                .map(|(i, v)| (i % ls.max(1), v.clone()))
                                .collect();
                            if part.is_empty() {
                                continue;
                            }
                            let img = cx.differential().apply_slice(&part, &src, &tgt);
                            out.extend(img.into_iter().map(|(i, v)| (u * lt + i, v)));
                        }
                        out
                    })
                    .collect()
            };
            let here = averaged(c);
            let prev = averaged(c - 1);
            let dim = rank_q(&here) - rank_q(&apply_d(&here, c)) - rank_q(&apply_d(&prev, c - 1));
            ([x, c], dim as u64)
        })
        .collect();
    let mut out = DimTable::with_window(cx.ring().scheme(), window.clone());
    for (e, v) in dims {
        if v > 0 {
            out.add(e.to_vec(), v);
        }
    }
    Ok(out)
}

/// `tau~_a`: `(X, C)` in Hochschild degree `a` goes to `a^a Q^X T^{C - X}`,
/// written in doubled `(a, q, t)` exponents as `(a, C, C - X)`.
pub fn tau_render(per_a: &[(usize, DimTable)]) -> DimTable {
    let mut out = DimTable::new(&qat_scheme());
    for (a, t) in per_a {
        for (e, v) in t.entries() {
            if v > 0 {
                out.add(vec![*a as i64, e[1], e[1] - e[0]], v);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigrade::AxisBound;
    use crate::tracealg::module::{free_a_complex, free_module, nilp_y_check, triv_theta, triv_y};
    use crate::tracealg::SkewElement;

    fn win() -> Window {
        Window::from_bounds(vec![AxisBound::between(-10, 10), AxisBound::between(-6, 10)])
    }

    fn alg(tag: AlgebraTag, n: usize) -> SkewAlgebra {
        SkewAlgebra::new(tag, n).unwrap()
    }

    #[test]
    fn inv_of_triv_theta_is_free_b() {
        for n in 1..=2 {
            let lhs = inv_theta_enh(&triv_theta(n).unwrap()).unwrap();
            lhs.check().unwrap();
            let rhs = free_module(alg(AlgebraTag::B, n)).unwrap();
            assert!(lhs.homology_dims(&win()).unwrap().eq_on_window(&rhs.homology_dims(&win()).unwrap()));
        }
    }

    #[test]
    fn twisted_inv_kills_theta() {
        for n in 1..=2 {
            let lhs = inv_theta_twisted(&free_module(alg(AlgebraTag::A, n)).unwrap()).unwrap();
            lhs.check().unwrap();
            let rhs = triv_y(n).unwrap();
            assert!(lhs.homology_dims(&win()).unwrap().eq_on_window(&rhs.homology_dims(&win()).unwrap()));
        }
    }

    #[test]
    fn twisted_coinv_of_triv_y_is_free_a() {
        for n in 1..=2 {
            let lhs = coinv_y_twisted(&triv_y(n).unwrap()).unwrap();
            lhs.check().unwrap();
            let rhs = free_module(alg(AlgebraTag::A, n)).unwrap();
            assert!(lhs.homology_dims(&win()).unwrap().eq_on_window(&rhs.homology_dims(&win()).unwrap()));
        }
    }

    #[test]
    fn round_trip_on_a_two_term_complex() {
        let m = free_a_complex(1, &[[0, 0], [-2, 0]], &[(0, 1, SkewElement::theta(1, 0))]).unwrap();
        let back = coinv_y_twisted(&inv_theta_twisted(&m).unwrap()).unwrap();
        back.check().unwrap();
        assert!(back.homology_dims(&win()).unwrap().eq_on_window(&m.homology_dims(&win()).unwrap()));
    }

    #[test]
    fn coinv_of_zero_is_zero() {
        let z = triv_y(2).unwrap();
        let empty = GradedFreeModule::new(z.module().ring(), Vec::new()).unwrap();
        let zero = SkewModule::from_parts(
            z.algebra(),
            FreeComplex::trivial(empty.clone()),
            Vec::new(),
            (0..2).map(|_| PolyMatrix::zero(&empty, &empty, Y_DEGREE.to_vec())).collect(),
            vec![Vec::new()],
        );
        assert_eq!(coinv_y_enh(&zero).unwrap().rank(), 0);
        assert!(gamma_a(&zero, 1, &win()).unwrap().is_empty());
    }

    #[test]
    fn gamma_zero_of_abar_is_polynomials() {
        let w = Window::from_bounds(vec![AxisBound::between(0, 8), AxisBound::between(0, 8)]);
        let t = gamma_a(&free_module(alg(AlgebraTag::Abar, 2)).unwrap(), 0, &w).unwrap();
        for k in 0..=4 {
            assert_eq!(t.get(&[2 * k, 2 * k]), Some(k as u64 + 1));
        }
    }

    #[test]
    fn inv_of_free_a_is_y_nilpotent() {
        let m = inv_theta_enh(&free_module(alg(AlgebraTag::A, 2)).unwrap()).unwrap();
        let r = nilp_y_check(&m, &win(), 3).unwrap();
        assert!(r.nilpotent);
    }
}
