//! Hochschild homology of Soergel bimodules through the Koszul resolution,
//! and the triply graded homology `H(HH(R_beta))` of a braid.
//!
//! Tables live on the `(a, X, C)` scheme: `a` the Hochschild degree, `X` the
//! internal degree (each `theta` contributes 2) and `C = c + a` with `c` the
//! Rouquier chain degree. The unknot sits at `(0, 2k, 0)` and `(1, 2k + 2, 1)`.

mod bicomplex;
mod koszul;

pub use bicomplex::KoszulBicomplex;
pub use koszul::{koszul_differential, koszul_hh, subsets, wedge_map, wedge_module};

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::multigrade::{
    periodize, regrade, AxisBound, Constraint, DimTable, DimTableJson, GradeError, GradingScheme,
    Substitution, Window,
};
use crate::polyalg::{elem_sym, kernel_q, linalg::SparseVec, rank_q, PolyError, PolyMatrix, Q};
use crate::rouquier::{
    rouquier_complex, rouquier_complex_simplified, BimoduleComplex, BraidWord, Normalization, RouquierError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HochschildError {
    #[error("window: {0}")]
    Window(String),
    #[error("unknown convention `{0}` (expected qat, QAT or tilde)")]
    UnknownConvention(String),
    #[error(transparent)]
    Grade(#[from] GradeError),
    #[error(transparent)]
    Rouquier(#[from] RouquierError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `(a, X, C)` with `C` cohomological.
pub fn hhh_scheme() -> Arc<GradingScheme> {
    GradingScheme::new(&["a", "X", "C"], "C").expect("static scheme")
}

/// `(a, q2, t2)`: exponents of `a`, `q`, `t` with `q`, `t` doubled.
pub fn qat_scheme() -> Arc<GradingScheme> {
    GradingScheme::new(&["a", "q2", "t2"], "t2").expect("static scheme")
}

pub fn big_qat_scheme() -> Arc<GradingScheme> {
    GradingScheme::new(&["Q", "A", "T"], "T").expect("static scheme")
}

pub fn tilde_per_scheme() -> Arc<GradingScheme> {
    GradingScheme::new(&["a", "Xt", "Yt", "C"], "C").expect("static scheme")
}

/// The window `q <= q_max` on `(a, X, C)`, where the `q` exponent is
/// `(X + C - 3a) / 2`. Every `a` is known: the raw Hochschild degree never
/// leaves `[0, n]`.
pub fn q_window(q_max: i64) -> Window {
    let mut w = Window::full(3);
    w.push(Constraint { coeffs: vec![-3, 1, 1], bound: AxisBound::at_most(2 * q_max) });
    w
}

/// Raw `H(HH(C))` inside `window`, on the `(a, X, C)` scheme.
pub fn assemble_hhh(c: &BimoduleComplex, window: &Window) -> Result<DimTable, HochschildError> {
    let bc = KoszulBicomplex::new(c)?;
    assemble_from(&bc, window)
}

pub fn assemble_from(bc: &KoszulBicomplex, window: &Window) -> Result<DimTable, HochschildError> {
    let mut tasks = Vec::new();
    for (a, c, x) in degrees_in(bc, window)? {
        tasks.push((a, c, x));
    }
    let dims: Vec<((i64, i64, i64), u64)> =
        tasks.par_iter().map(|&(a, c, x)| ((a, c, x), bc.homology_dim(a, c, x))).collect();
    let mut t = DimTable::with_window(&hhh_scheme(), window.clone());
    for ((a, c, x), d) in dims {
        t.add(vec![a, x, c + a], d);
    }
    Ok(t)
}

/// Every `(a, c, X)` of the bicomplex whose `(a, X, c + a)` lies in `window`.
pub fn degrees_in(bc: &KoszulBicomplex, window: &Window) -> Result<Vec<(i64, i64, i64)>, HochschildError> {
    let mut w = window.clone();
    w.set(1, AxisBound::at_least(bc.min_degree()));
    let mut out = Vec::new();
    for a in 0..=bc.n() as i64 {
        for c in bc.lo()..=bc.hi() {
            let base = [a, 0, c + a];
            match w.line_range(&base, &[0, 1, 0]) {
                Some((lo, hi)) => out.extend((lo..=hi).map(|x| (a, c, x))),
                None => {
                    return Err(HochschildError::Window("internal degree unbounded above".into()));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HhhOptions {
    pub simplify: bool,
    pub normalization: Normalization,
}

impl Default for HhhOptions {
    fn default() -> Self {
        Self { simplify: true, normalization: Normalization::default() }
    }
}

/// Normalized triply graded homology of a braid closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HHHTable {
    pub braid: BraidWord,
    pub normalization: Normalization,
    pub table: DimTable,
}

impl HHHTable {
    pub fn compute(b: &BraidWord, window: &Window, opts: &HhhOptions) -> Result<Self, HochschildError> {
        let cx = if opts.simplify { rouquier_complex_simplified(b)? } else { rouquier_complex(b)? };
        Self::from_complex(b, &cx, window, &opts.normalization)
    }

    pub fn from_complex(
        b: &BraidWord,
        cx: &BimoduleComplex,
        window: &Window,
        normalization: &Normalization,
    ) -> Result<Self, HochschildError> {
        let s = normalization.total(b);
        let raw = assemble_hhh(cx, &window.shifted(&s.map(|v| -v)))?;
        let mut table = DimTable::with_window(&hhh_scheme(), window.clone());
        for (k, v) in raw.entries() {
            let d: Vec<i64> = k.iter().zip(&s).map(|(x, y)| x + y).collect();
            if window.contains(&d) {
                table.add(d, v);
            }
        }
        Ok(Self { braid: b.clone(), normalization: *normalization, table })
    }

    pub fn render(&self, conv: Convention) -> Result<DimTable, HochschildError> {
        render(&self.table, conv)
    }

    pub fn to_json(&self) -> HHHTableJson {
        let renders = [Convention::Qat, Convention::BigQat, Convention::TildePer]
            .into_iter()
            .filter_map(|c| Some((c.to_string(), render(&self.table, c).ok()?.to_json())))
            .collect();
        HHHTableJson {
            braid: self.braid.to_string(),
            strands: self.braid.n(),
            writhe: self.braid.writhe(),
            permutation_cycles: self.braid.cycle_type(),
            normalization: self.normalization,
            table: self.table.to_json(),
            renders,
        }
    }

    pub fn from_json(j: &HHHTableJson) -> Result<Self, HochschildError> {
        let letters = j
            .braid
            .split_whitespace()
            .map(|t| t.parse::<i32>().map_err(|e| HochschildError::Window(format!("braid token `{t}`: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let braid = BraidWord::new(j.strands, letters)?;
        let table = DimTable::from_json(&j.table)?;
        if table.scheme() != &hhh_scheme() {
            return Err(GradeError::AxisMismatch(format!("{} is not (a, X, C)", table.scheme())).into());
        }
        Ok(Self { braid, normalization: j.normalization, table })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HHHTableJson {
    pub braid: String,
    pub strands: usize,
    pub writhe: i64,
    pub permutation_cycles: Vec<usize>,
    pub normalization: Normalization,
    pub table: DimTableJson,
    pub renders: std::collections::BTreeMap<String, DimTableJson>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convention {
    /// `a^a q^k t^l`, exponents of `q` and `t` doubled
    Qat,
    /// `Q^i A^j T^k` with `q = Q^2`, `a = Q^2 A^-1`, `t = T^2 Q^-2`
    BigQat,
    /// `(a, Xt, Yt, C mod 2)` with `Xt = q`, `Yt = sqrt t`, `C = sqrt(qt)`
    TildePer,
}

impl FromStr for Convention {
    type Err = HochschildError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "qat" => Ok(Self::Qat),
            "QAT" => Ok(Self::BigQat),
            "tilde" | "tilde-per" => Ok(Self::TildePer),
            _ => Err(HochschildError::UnknownConvention(s.to_string())),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Qat => "qat",
            Self::BigQat => "QAT",
            Self::TildePer => "tilde",
        })
    }
}

/// `(a, X, C) -> (a, X + C - 3a, C - a)`.
fn to_qat() -> Substitution {
    Substitution::linear(&hhh_scheme(), &qat_scheme(), vec![vec![1, 0, 0], vec![-3, 1, 1], vec![-1, 0, 1]])
        .expect("static")
}

/// `(a, q2, t2) -> (Q, A, T) = (q2 + 2a - t2, -a, t2)`.
fn qat_to_big() -> Substitution {
    Substitution::linear(&qat_scheme(), &big_qat_scheme(), vec![vec![2, 1, -1], vec![-1, 0, 0], vec![0, 0, 1]])
        .expect("static")
}

pub fn render(t: &DimTable, conv: Convention) -> Result<DimTable, HochschildError> {
    let qat = regrade(t, &to_qat())?;
    match conv {
        Convention::Qat => Ok(qat),
        Convention::BigQat => Ok(regrade(&qat, &qat_to_big())?),
        Convention::TildePer => render_tilde(&qat),
    }
}

/// Each `a^a q^(q2/2) t^(t2/2)` written as `Xt^i Yt^j sqrt(qt)^C` with
/// `C = q2 mod 2`, which is the representative of its beta-orbit with
/// `C` in `{0, 1}`.
fn render_tilde(qat: &DimTable) -> Result<DimTable, HochschildError> {
    let scheme = tilde_per_scheme();
    // back substitution (a, Xt, Yt, C) -> (a, 2 Xt + C, Yt + C)
    let back = [[1, 0, 0, 0], [0, 2, 0, 1], [0, 0, 1, 1]];
    let mut w = Window::full(4);
    for c in qat.window().constraints() {
        let coeffs = (0..4).map(|j| (0..3).map(|i| c.coeffs[i] * back[i][j]).sum()).collect();
        w.push(Constraint { coeffs, bound: c.bound });
    }
    w.set(3, AxisBound::between(0, 1));
    let mut lifted = DimTable::with_window(&scheme, Window::full(4));
    for (k, v) in qat.entries() {
        let c = k[1].rem_euclid(2);
        lifted.add(vec![k[0], (k[1] - c) / 2, k[2] - c, c], v);
    }
    // already canonical; periodize only validates and restricts
    let mut per = DimTable::with_window(&scheme, w.clone());
    for (k, v) in lifted.entries() {
        if w.contains(k) {
            per.add(k.clone(), v);
        }
    }
    debug_assert!(periodize(&lifted, &w).map(|p| p.eq_on_window(&per)).unwrap_or(true));
    Ok(per)
}

/// Chain-level operators of `e_k` acting on every chain object: from the
/// left (`e_k * Id`) and from the right (`e_k(rho)`).
#[derive(Debug, Clone)]
pub struct SymfunOperator {
    pub k: usize,
    pub left: Vec<PolyMatrix>,
    pub right: Vec<PolyMatrix>,
}

impl SymfunOperator {
    pub fn agree(&self) -> bool {
        self.left.iter().zip(&self.right).all(|(l, r)| l.entries() == r.entries())
    }
}

pub fn symfun_operator(c: &BimoduleComplex, k: usize) -> Result<SymfunOperator, HochschildError> {
    let n = c.n();
    if k > n {
        return Err(PolyError::OutOfRange(format!("e_{k} with {n} variables")).into());
    }
    let e = elem_sym(k, n)?;
    let mut left = Vec::new();
    let mut right = Vec::new();
    for t in c.lo()..=c.hi() {
        let (m, _) = c.flat_term(t)?;
        left.push(PolyMatrix::scalar(m.module(), &e, vec![2 * k as i64, 0]));
        right.push(m.right_action(&e).map_err(RouquierError::from)?);
    }
    Ok(SymfunOperator { k, left, right })
}

/// Matrix of multiplication by `e_k` from `H^c(HH_a)_x` to degree
/// `x + 2k`, in bases of chosen representatives (columns = sources).
pub fn symfun_on_homology(
    bc: &KoszulBicomplex,
    k: usize,
    a: i64,
    c: i64,
    x: i64,
) -> Result<Vec<Vec<Q>>, HochschildError> {
    let e = elem_sym(k, bc.n())?;
    let dx = 2 * k as i64;
    let src = homology_basis(bc, a, c, x);
    let tgt = homology_basis(bc, a, c, x + dx);
    let Some(mul) = bc.multiply(&e, dx, a, c) else { return Ok(Vec::new()) };
    let (s0, s1) = (bc.slice(a, c, x), bc.slice(a, c, x + dx));
    let bnd = bc.boundaries(a, c, x + dx);
    let mut out = Vec::new();
    for z in &src {
        let img = mul.apply_slice(z, &s0, &s1);
        out.push(coordinates(&img, &bnd, &tgt));
    }
    Ok(out)
}

/// Representatives of a basis of `Z~ / B~` in `K_a(c)_x`.
pub fn homology_basis(bc: &KoszulBicomplex, a: i64, c: i64, x: i64) -> Vec<SparseVec<Q>> {
    let mut span = bc.boundaries(a, c, x);
    let mut r = rank_q(&span);
    let mut out = Vec::new();
    for z in bc.cycles(a, c, x) {
        span.push(z.clone());
        let r2 = rank_q(&span);
        if r2 > r {
            r = r2;
            out.push(z);
        } else {
            span.pop();
        }
    }
    out
}

/// Coordinates of `v` modulo `bnd` in the basis `basis` (which is
/// independent modulo `bnd`); `v` must lie in their span.
fn coordinates(
    v: &[(usize, Q)],
    bnd: &[SparseVec<Q>],
    basis: &[SparseVec<Q>],
) -> Vec<Q> {
    use num_traits::Zero;
    let mut cols: Vec<_> = basis.to_vec();
    cols.extend(bnd.iter().cloned());
    cols.push(v.to_vec());
    let last = cols.len() - 1;
    let mut out = vec![Q::zero(); basis.len()];
    if v.is_empty() {
        return out;
    }
    for rel in kernel_q(&cols) {
        let Some((_, lv)) = rel.iter().find(|(i, _)| *i == last) else { continue };
        let lv = lv.clone();
        for (i, x) in &rel {
            if *i < basis.len() {
                out[*i] = -x / &lv;
            }
        }
        return out;
    }
    panic!("image of a cycle is not a cycle");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(word: Vec<i32>, n: usize, q: i64) -> DimTable {
        let b = BraidWord::new(n, word).unwrap();
        let opts = HhhOptions { simplify: true, normalization: Normalization { positive: [0; 3], negative: [0; 3] } };
        HHHTable::compute(&b, &q_window(q), &opts).unwrap().table
    }

    #[test]
    fn unknot_raw_entries() {
        let t = raw(vec![], 1, 6);
        for k in 0..=6 {
            assert_eq!(t.get(&[0, 2 * k, 0]), Some(1));
            assert_eq!(t.get(&[1, 2 * k + 2, 1]), Some(1));
        }
        assert_eq!(t.total(), 14);
    }

    #[test]
    fn unknot_renders_to_one_plus_a() {
        let t = render(&raw(vec![], 1, 5), Convention::Qat).unwrap();
        let mut expect = DimTable::with_window(&qat_scheme(), t.window().clone());
        for k in 0..=5 {
            expect.add(vec![0, 2 * k, 0], 1);
            expect.add(vec![1, 2 * k, 0], 1);
        }
        assert_eq!(t, expect);
    }

    #[test]
    fn big_qat_is_consistent() {
        let t = render(&raw(vec![], 1, 3), Convention::BigQat).unwrap();
        // 1 -> Q^0, a -> Q^2 A^-1
        assert_eq!(t.get(&[0, 0, 0]), Some(1));
        assert_eq!(t.get(&[2, -1, 0]), Some(1));
    }

    #[test]
    fn tilde_render_has_period_window() {
        let t = render(&raw(vec![], 1, 3), Convention::TildePer).unwrap();
        assert!(t.entries().all(|(k, _)| k[3] == 0 || k[3] == 1));
        assert_eq!(t.total(), 8);
    }

    #[test]
    fn left_and_right_e_agree_on_trefoil_chain() {
        let b = BraidWord::new(2, vec![1, 1, 1]).unwrap();
        let c = rouquier_complex(&b).unwrap();
        for k in 0..=2 {
            assert!(symfun_operator(&c, k).unwrap().agree());
        }
    }

    #[test]
    fn e1_acts_injectively_on_unknot() {
        let c = BimoduleComplex::unit(1);
        let bc = KoszulBicomplex::new(&c).unwrap();
        for x in 0..6 {
            let m = symfun_on_homology(&bc, 1, 0, 0, 2 * x).unwrap();
            assert_eq!(m.len(), 1);
            assert_eq!(m[0], vec![crate::polyalg::q(1)]);
        }
        let e0 = symfun_on_homology(&bc, 0, 1, 0, 4).unwrap();
        assert_eq!(e0, vec![vec![crate::polyalg::q(1)]]);
    }

    #[test]
    fn json_round_trip() {
        let b = BraidWord::new(2, vec![1, 1]).unwrap();
        let h = HHHTable::compute(&b, &q_window(2), &HhhOptions::default()).unwrap();
        let j = serde_json::to_string(&h.to_json()).unwrap();
        assert_eq!(HHHTable::from_json(&serde_json::from_str(&j).unwrap()).unwrap(), h);
    }
}
