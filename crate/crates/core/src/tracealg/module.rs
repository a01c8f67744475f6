use std::collections::HashMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::algebra::{variable_perm, AlgebraTag, SkewAlgebra, SkewElement};
use super::rep::{
    act_on_subset, all_perms, compose, coxeter_relations_hold, perm_index, reduced_word, transposition, wedge_sign,
    DenseMatrix,
};
use super::TraceError;
use crate::multigrade::{DimTable, Window};
use crate::polyalg::{
    kernel_q, linalg::SparseVec, matrix_from_json, matrix_to_json, q_from_str, q_to_string, rank_q, EntryJson,
    FreeComplex, FreeComplexJson, GradedFreeModule, Mono, Poly, PolyMatrix, SliceBasis, Q,
};

pub const THETA_DEGREE: [i64; 2] = [2, 1];
pub const Y_DEGREE: [i64; 2] = [-2, 0];

/// A finite complex of free modules over an even polynomial ring, with the
/// odd `theta_i` (for `A`) or even `y_i` (for `B`) acting by operators and
/// `S_n` acting semilinearly: `s (f e_j) = s(f) sum_i S[i][j] e_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewModule {
    algebra: SkewAlgebra,
    complex: FreeComplex,
    odd: Vec<PolyMatrix>,
    even: Vec<PolyMatrix>,
    sym: Vec<DenseMatrix>,
}

impl SkewModule {
    /// Validated construction; see [`SkewModule::check`].
    pub fn new(
        algebra: SkewAlgebra,
        complex: FreeComplex,
        odd: Vec<PolyMatrix>,
        even: Vec<PolyMatrix>,
        sym: Vec<DenseMatrix>,
    ) -> Result<Self, TraceError> {
        let m = Self::from_parts(algebra, complex, odd, even, sym);
        m.check()?;
        Ok(m)
    }

    pub(crate) fn from_parts(
        algebra: SkewAlgebra,
        complex: FreeComplex,
        odd: Vec<PolyMatrix>,
        even: Vec<PolyMatrix>,
        sym: Vec<DenseMatrix>,
    ) -> Self {
        Self { algebra, complex, odd, even, sym }
    }

    pub fn algebra(&self) -> SkewAlgebra {
        self.algebra
    }

    pub fn n(&self) -> usize {
        self.algebra.n
    }

    pub fn complex(&self) -> &FreeComplex {
        &self.complex
    }

    pub fn module(&self) -> &GradedFreeModule {
        self.complex.module()
    }

    pub fn rank(&self) -> usize {
        self.module().rank()
    }

    pub fn differential(&self) -> &PolyMatrix {
        self.complex.differential()
    }

    pub fn theta(&self) -> &[PolyMatrix] {
        &self.odd
    }

    pub fn y(&self) -> &[PolyMatrix] {
        &self.even
    }

    pub fn symmetric(&self) -> &[DenseMatrix] {
        &self.sym
    }

    /// Every structural relation, checked symbolically.
    pub fn check(&self) -> Result<(), TraceError> {
        let n = self.n();
        let m = self.module();
        let rel = |what: &str| Err(TraceError::Relations(what.into()));
        let want_odd = if self.algebra.tag.has_theta() { n } else { 0 };
        let want_even = if self.algebra.tag.has_y() { n } else { 0 };
        if self.odd.len() != want_odd || self.even.len() != want_even || self.sym.len() != n - 1 {
            return Err(TraceError::Shape(format!(
                "{} needs {want_odd} odd, {want_even} even and {} group operators",
                self.algebra.tag,
                n - 1
            )));
        }
        if m.ring().nvars() != n && m.ring().nvars() != 2 * n {
            return Err(TraceError::Shape("ring must have n or 2n variables".into()));
        }
        for (ops, deg) in [(&self.odd, THETA_DEGREE), (&self.even, Y_DEGREE)] {
            for op in ops.iter() {
                if op.src() != m || op.tgt() != m {
                    return Err(TraceError::Shape("operator on a different module".into()));
                }
                if !op.is_zero() && op.degree() != deg {
                    return Err(TraceError::Shape(format!("operator of degree {:?}, expected {deg:?}", op.degree())));
                }
                op.check_homogeneous()?;
            }
        }
        let d = self.differential();
        for (i, a) in self.odd.iter().enumerate() {
            if !anticommutator(a, d)?.is_zero() {
                return rel("theta must anticommute with d");
            }
            for b in &self.odd[i..] {
                if !anticommutator(a, b)?.is_zero() {
                    return rel("theta operators must square to zero and anticommute");
                }
            }
        }
        for (i, a) in self.even.iter().enumerate() {
            if !commutator(a, d)?.is_zero() {
                return rel("y must commute with d");
            }
            for b in &self.even[i + 1..] {
                if !commutator(a, b)?.is_zero() {
                    return rel("y operators must commute");
                }
            }
        }
        let r = self.rank();
        if self.sym.iter().any(|s| s.len() != r || s.iter().any(|row| row.len() != r)) {
            return Err(TraceError::Shape("group matrices must be rank x rank".into()));
        }
        if !coxeter_relations_hold(&self.sym, r) {
            return rel("group matrices fail s^2 = 1 or the braid relations");
        }
        for (k, s) in self.sym.iter().enumerate() {
            for (i, row) in s.iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    if !c.is_zero() && m.gen(i) != m.gen(j) {
                        return rel("group matrices must preserve degree");
                    }
                }
            }
            let w = transposition(n, k);
            let smat = self.constant_matrix(s);
            let conj = |op: &PolyMatrix| -> Result<PolyMatrix, TraceError> {
                Ok(smat.compose(&permute_entries(op, &w)?)?)
            };
            if conj(d)? != d.compose(&smat)? {
                return rel("group must commute with d");
            }
            for ops in [&self.odd, &self.even] {
                for (i, op) in ops.iter().enumerate() {
                    if conj(op)? != ops[w[i]].compose(&smat)? {
                        return rel("group must permute the variable operators");
                    }
                }
            }
        }
        Ok(())
    }

    fn constant_matrix(&self, s: &DenseMatrix) -> PolyMatrix {
        let m = self.module();
        let nv = m.ring().nvars();
        let mut out = PolyMatrix::zero(m, m, vec![0, 0]);
        for (i, row) in s.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    out.set(i, j, Poly::constant(nv, c.clone()));
                }
            }
        }
        out
    }

    /// Shifts every generator by `(X, C) = (dx, dc)`.
    pub fn shifted(&self, dx: i64, dc: i64) -> Result<Self, TraceError> {
        let m = self.module().shifted(&[dx, dc]);
        let re = |op: &PolyMatrix| PolyMatrix::new_unchecked(&m, &m, op.degree().to_vec(), op.entries().to_vec());
        let complex = FreeComplex::new(m.clone(), re(self.differential())?)?;
        Ok(Self {
            algebra: self.algebra,
            complex,
            odd: self.odd.iter().map(re).collect::<Result<_, _>>()?,
            even: self.even.iter().map(re).collect::<Result<_, _>>()?,
            sym: self.sym.clone(),
        })
    }

    /// The same module with `S_n` twisted by the sign character.
    pub fn sign_twisted(&self) -> Self {
        let mut out = self.clone();
        for s in &mut out.sym {
            for row in s.iter_mut() {
                for c in row.iter_mut() {
                    *c = -c.clone();
                }
            }
        }
        out
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, TraceError> {
        if self.algebra != other.algebra || self.module().ring() != other.module().ring() {
            return Err(TraceError::Shape("direct sum over different algebras".into()));
        }
        let complex = self.complex.direct_sum(&other.complex)?;
        let m = complex.module().clone();
        let (a, b) = (self.rank(), other.rank());
        let block = |x: &PolyMatrix, y: &PolyMatrix| {
            let mut out = PolyMatrix::zero(&m, &m, x.degree().to_vec());
            for l in 0..a {
                for k in 0..a {
                    out.set(l, k, x.get(l, k).clone());
                }
            }
            for l in 0..b {
                for k in 0..b {
                    out.set(a + l, a + k, y.get(l, k).clone());
                }
            }
            out
        };
        let sym = self
            .sym
            .iter()
            .zip(&other.sym)
            .map(|(x, y)| {
                let mut out = vec![vec![Q::zero(); a + b]; a + b];
                for i in 0..a {
                    out[i][..a].clone_from_slice(&x[i]);
                }
                for i in 0..b {
                    out[a + i][a..].clone_from_slice(&y[i]);
                }
                out
            })
            .collect();
        Ok(Self {
            algebra: self.algebra,
            complex,
            odd: self.odd.iter().zip(&other.odd).map(|(x, y)| block(x, y)).collect(),
            even: self.even.iter().zip(&other.even).map(|(x, y)| block(x, y)).collect(),
            sym,
        })
    }

    /// Cohomology dimensions in every `(X, C)` of `window`.
    pub fn homology_dims(&self, window: &Window) -> Result<DimTable, TraceError> {
        Ok(self.complex.homology_dims(window)?)
    }

    /// `s_k` on a vector of the slice with basis `basis`, where the slice is
    /// closed under the group (as every degree slice is).
    pub fn act_on_slice(&self, k: usize, v: &[(usize, Q)], basis: &SliceBasis) -> SparseVec<Q> {
        let w = transposition(self.n(), k);
        let vp = variable_perm(&w, self.module().ring().nvars());
        let s = &self.sym[k];
        let mut acc: HashMap<usize, Q> = HashMap::new();
        for (idx, c) in v {
            let (j, mono) = &basis.elems()[*idx];
            let mut image: Mono = vec![0; mono.len()];
            for (i, e) in mono.iter().enumerate() {
                image[vp[i]] = *e;
            }
            for (i, row) in s.iter().enumerate() {
                if row[*j].is_zero() {
                    continue;
                }
                let pos = basis.position(i, &image).expect("slice closed under the group");
                *acc.entry(pos).or_insert_with(Q::zero) += &row[*j] * c;
            }
        }
        let mut out: Vec<(usize, Q)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.sort_by_key(|e| e.0);
        out
    }

    /// A group element on a slice vector, applied as its reduced word.
    pub fn act_perm_on_slice(&self, p: &[usize], v: &[(usize, Q)], basis: &SliceBasis) -> SparseVec<Q> {
        let mut out = v.to_vec();
        for &k in reduced_word(p).iter().rev() {
            out = self.act_on_slice(k, &out, basis);
        }
        out
    }

    pub fn to_json(&self) -> SkewModuleJson {
        let dense = |m: &DenseMatrix| m.iter().map(|r| r.iter().map(q_to_string).collect()).collect();
        SkewModuleJson {
            algebra: self.algebra.tag.to_string(),
            n: self.n(),
            complex: self.complex.to_json(),
            theta: self.odd.iter().map(matrix_to_json).collect(),
            y: self.even.iter().map(matrix_to_json).collect(),
            symmetric: self.sym.iter().map(dense).collect(),
        }
    }

    pub fn from_json(j: &SkewModuleJson) -> Result<Self, TraceError> {
        let algebra = SkewAlgebra::new(j.algebra.parse()?, j.n)?;
        let complex = FreeComplex::from_json(&j.complex)?;
        let m = complex.module().clone();
        let ops = |list: &[Vec<EntryJson>], deg: [i64; 2]| -> Result<Vec<PolyMatrix>, TraceError> {
            list.iter().map(|e| Ok(matrix_from_json(e, &m, &m, deg.to_vec())?)).collect()
        };
        let sym = j
            .symmetric
            .iter()
            .map(|s| s.iter().map(|r| r.iter().map(|c| q_from_str(c)).collect::<Result<Vec<_>, _>>()).collect())
            .collect::<Result<Vec<DenseMatrix>, _>>()?;
        Self::new(algebra, complex, ops(&j.theta, THETA_DEGREE)?, ops(&j.y, Y_DEGREE)?, sym)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewModuleJson {
    pub algebra: String,
    pub n: usize,
    pub complex: FreeComplexJson,
    pub theta: Vec<Vec<EntryJson>>,
    pub y: Vec<Vec<EntryJson>>,
    /// Rational matrices, one per simple transposition.
    pub symmetric: Vec<Vec<Vec<String>>>,
}

fn commutator(a: &PolyMatrix, b: &PolyMatrix) -> Result<PolyMatrix, TraceError> {
    Ok(a.compose(b)?.sub(&b.compose(a)?)?)
}

fn anticommutator(a: &PolyMatrix, b: &PolyMatrix) -> Result<PolyMatrix, TraceError> {
    Ok(a.compose(b)?.add(&b.compose(a)?)?)
}

/// Applies `w` to every entry.
fn permute_entries(op: &PolyMatrix, w: &[usize]) -> Result<PolyMatrix, TraceError> {
    let vp = variable_perm(w, op.src().ring().nvars());
    let entries = op.entries().iter().map(|p| p.permute(&vp)).collect();
    Ok(PolyMatrix::new_unchecked(op.src(), op.tgt(), op.degree().to_vec(), entries)?)
}

/// Left multiplication by `S_n` on the basis `w` of `Q[S_n]`.
fn regular_sym(n: usize, block: usize, act: impl Fn(&[usize], usize) -> (i64, usize)) -> Vec<DenseMatrix> {
    let perms = all_perms(n);
    let r = perms.len() * block;
    (0..n - 1)
        .map(|k| {
            let s = transposition(n, k);
            let mut m = vec![vec![Q::zero(); r]; r];
            for (wi, w) in perms.iter().enumerate() {
                let sw = perm_index(&compose(&s, w));
                for b in 0..block {
                    let (sign, b2) = act(&s, b);
                    m[sw * block + b2][wi * block + b] = Q::from_integer(sign.into());
                }
            }
            m
        })
        .collect()
}

fn zero_ops(m: &GradedFreeModule, count: usize, deg: [i64; 2]) -> Vec<PolyMatrix> {
    (0..count).map(|_| PolyMatrix::zero(m, m, deg.to_vec())).collect()
}

fn ring_y(m: &GradedFreeModule, n: usize) -> Vec<PolyMatrix> {
    (0..n).map(|i| PolyMatrix::scalar(m, &m.ring().var(n + i), Y_DEGREE.to_vec())).collect()
}

/// `Q[x] (x) Q[S_n]` with generators in degree 0, `theta` acting by zero.
pub fn triv_theta(n: usize) -> Result<SkewModule, TraceError> {
    group_ring(SkewAlgebra::new(AlgebraTag::A, n)?)
}

/// `Q[x] (x) Q[S_n]` with generators in degree 0, `y` acting by zero.
pub fn triv_y(n: usize) -> Result<SkewModule, TraceError> {
    group_ring(SkewAlgebra::new(AlgebraTag::B, n)?)
}

fn group_ring(alg: SkewAlgebra) -> Result<SkewModule, TraceError> {
    let n = alg.n;
    let ring = alg.ring(false);
    let m = GradedFreeModule::new(&ring, vec![vec![0, 0]; all_perms(n).len()])?;
    let odd = zero_ops(&m, if alg.tag.has_theta() { n } else { 0 }, THETA_DEGREE);
    let even = zero_ops(&m, if alg.tag.has_y() { n } else { 0 }, Y_DEGREE);
    let sym = regular_sym(n, 1, |_, b| (1, b));
    Ok(SkewModule::from_parts(alg, FreeComplex::trivial(m), odd, even, sym))
}

/// The algebra as a left module over itself. For `A` the `Q[x]`-basis is
/// `theta_S w` at index `index(w) * 2^n + S`.
pub fn free_module(alg: SkewAlgebra) -> Result<SkewModule, TraceError> {
    let n = alg.n;
    match alg.tag {
        AlgebraTag::Abar => group_ring(alg),
        AlgebraTag::B | AlgebraTag::Btilde => {
            let ring = alg.ring(true);
            let m = GradedFreeModule::new(&ring, vec![vec![0, 0]; all_perms(n).len()])?;
            let even = ring_y(&m, n);
            let sym = regular_sym(n, 1, |_, b| (1, b));
            Ok(SkewModule::from_parts(alg, FreeComplex::trivial(m), Vec::new(), even, sym))
        }
        AlgebraTag::A => free_a_complex(n, &[[0, 0]], &[]),
    }
}

/// A complex of free `A`-modules `A g_1 + .. + A g_r` with
/// `d(a g_j) = (-1)^{|a g_j|} sum a r_{ji} g_i`, entries `(j, i, r_{ji})`.
/// The sign makes `d` anticommute with `theta`; `d^2 = 0` is checked.
pub fn free_a_complex(n: usize, gens: &[[i64; 2]], entries: &[(usize, usize, SkewElement)]) -> Result<SkewModule, TraceError> {
    let alg = SkewAlgebra::new(AlgebraTag::A, n)?;
    let perms = all_perms(n);
    let block = perms.len() << n;
    let ring = alg.ring(false);
    let mut degs = Vec::new();
    for g in gens {
        for _ in &perms {
            for s in 0u32..1 << n {
                let k = i64::from(s.count_ones());
                degs.push(vec![g[0] + 2 * k, g[1] + k]);
            }
        }
    }
    let m = GradedFreeModule::new(&ring, degs)?;
    let index = |g: usize, w: &[usize], s: u32| g * block + (perm_index(w) << n) + s as usize;
    let mut d = PolyMatrix::zero(&m, &m, vec![0, 1]);
    for (j, i, r) in entries {
        if *j >= gens.len() || *i >= gens.len() {
            return Err(TraceError::Shape(format!("entry ({j}, {i}) names a missing generator")));
        }
        let want = [gens[*j][0] - gens[*i][0], gens[*j][1] + 1 - gens[*i][1]];
        if !r.is_zero() && r.degree() != Some(want) {
            return Err(TraceError::Shape(format!("entry ({j}, {i}) must be homogeneous of degree {want:?}")));
        }
        for w in &perms {
            for s in 0u32..1 << n {
                let parity = (gens[*j][1] + i64::from(s.count_ones())).rem_euclid(2);
                for ((t, u), q) in r.terms() {
                    let (e1, wt) = act_on_subset(w, *t);
                    let Some(e2) = wedge_sign(s, wt) else { continue };
                    let sign = e1 * e2 * if parity == 1 { -1 } else { 1 };
                    let p = q.permute(w);
                    let (row, col) = (index(*i, &compose(w, u), s | wt), index(*j, w, s));
                    let old = d.get(row, col).clone();
                    d.set(row, col, if sign < 0 { &old - &p } else { &old + &p });
                }
            }
        }
    }
    let complex = FreeComplex::new(m.clone(), d)?;
    let mut odd = Vec::new();
    for i in 0..n {
        let mut op = PolyMatrix::zero(&m, &m, THETA_DEGREE.to_vec());
        for g in 0..gens.len() {
            for w in &perms {
                for s in 0u32..1 << n {
                    if let Some(e) = wedge_sign(1 << i, s) {
                        op.set(index(g, w, s | 1 << i), index(g, w, s), Poly::integer(n, e));
                    }
                }
            }
        }
        odd.push(op);
    }
    let mut sym = regular_sym(n, 1 << n, |s, b| {
        let (e, t) = act_on_subset(s, b as u32);
        (e, t as usize)
    });
    if gens.len() > 1 && n > 1 {
        let r = sym[0].len();
        for s in &mut sym {
            let mut big = vec![vec![Q::zero(); r * gens.len()]; r * gens.len()];
            for g in 0..gens.len() {
                for i in 0..r {
                    big[g * r + i][g * r..(g + 1) * r].clone_from_slice(&s[i]);
                }
            }
            *s = big;
        }
    }
    Ok(SkewModule::from_parts(alg, complex, odd, Vec::new(), sym))
}

/// Zero differential and every generator at `(X, C) = (k, k)`.
pub fn weight_heart_check(m: &SkewModule) -> bool {
    m.differential().is_zero() && m.module().gens().iter().all(|g| g[0] == g[1])
}

/// Outcome of [`nilp_y_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilpReport {
    pub nilpotent: bool,
    /// Smallest power killing every class in the window, when nilpotent.
    pub power: Option<u32>,
    /// `(i, X, C)` of a class surviving `y_i^bound`.
    pub failure: Option<(usize, i64, i64)>,
}

/// Whether each `y_i` kills every cohomology class in `window` after at most
/// `bound` applications.
pub fn nilp_y_check(m: &SkewModule, window: &Window, bound: u32) -> Result<NilpReport, TraceError> {
    if !m.algebra().tag.has_y() {
        return Err(TraceError::Shape("y acts only on modules over B".into()));
    }
    let cx = m.complex();
    let d = cx.differential();
    let slice = |x: i64, c: i64| cx.module().slice(&[x, c]);
    let cycles = |x: i64, c: i64| kernel_q(&d.slice_columns(&slice(x, c), &slice(x, c + 1), 0));
    let boundaries = |x: i64, c: i64| d.slice_columns(&slice(x, c - 1), &slice(x, c), 0);
    let mut worst = 0;
    let table = cx.homology_dims(window)?;
    for (e, dim) in table.entries() {
        if dim == 0 {
            continue;
        }
        let (x, c) = (e[0], e[1]);
        for (i, y) in m.y().iter().enumerate() {
            let mut vs = cycles(x, c);
            let mut killed = false;
            for p in 1..=bound {
                let (from, to) = (slice(x - 2 * (p as i64 - 1), c), slice(x - 2 * p as i64, c));
                vs = vs.iter().map(|v| y.apply_slice(v, &from, &to)).collect();
                let b = boundaries(x - 2 * p as i64, c);
                let rb = rank_q(&b);
                let mut all = b;
                all.extend(vs.iter().cloned());
                if rank_q(&all) == rb {
                    worst = worst.max(p);
                    killed = true;
                    break;
                }
            }
            if !killed {
                return Ok(NilpReport { nilpotent: false, power: None, failure: Some((i, x, c)) });
            }
        }
    }
    Ok(NilpReport { nilpotent: true, power: Some(worst.max(1)), failure: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigrade::AxisBound;

    fn win(x: (i64, i64), c: (i64, i64)) -> Window {
        Window::from_bounds(vec![AxisBound::between(x.0, x.1), AxisBound::between(c.0, c.1)])
    }

    #[test]
    fn free_a_one_dims() {
        let m = free_module(SkewAlgebra::new(AlgebraTag::A, 1).unwrap()).unwrap();
        m.check().unwrap();
        let t = m.homology_dims(&win((0, 8), (0, 8))).unwrap();
        for k in 0..4 {
            assert_eq!(t.get(&[2 * k, 2 * k]), Some(1));
            assert_eq!(t.get(&[2 * k + 2, 2 * k + 1]), Some(1));
        }
        assert_eq!(t.total(), 9);
    }

    #[test]
    fn standard_modules_satisfy_relations() {
        for n in 1..=3 {
            triv_theta(n).unwrap().check().unwrap();
            triv_y(n).unwrap().check().unwrap();
            for tag in [AlgebraTag::A, AlgebraTag::Abar, AlgebraTag::B] {
                free_module(SkewAlgebra::new(tag, n).unwrap()).unwrap().check().unwrap();
            }
        }
    }

    #[test]
    fn theta_vanishes_on_triv_theta() {
        assert!(triv_theta(2).unwrap().theta().iter().all(PolyMatrix::is_zero));
    }

    #[test]
    fn bad_group_matrix_rejected() {
        let mut m = triv_y(2).unwrap();
        m.sym[0][0][0] = Q::from_integer(2.into());
        assert!(matches!(m.check(), Err(TraceError::Relations(_))));
    }

    #[test]
    fn differential_must_anticommute_with_theta() {
        // d(g) = x_1 g' (no sign) is A-linear for x but not for theta
        let alg = SkewAlgebra::new(AlgebraTag::A, 1).unwrap();
        let good = free_a_complex(1, &[[0, -1], [-2, -2]], &[(0, 1, SkewElement::x(1, 0))]).unwrap();
        good.check().unwrap();
        let d = good.differential();
        let mut flipped = d.clone();
        for row in 0..d.rows() {
            for col in (1..d.cols()).step_by(2) {
                flipped.set(row, col, -d.get(row, col));
            }
        }
        let cx = FreeComplex::new(good.module().clone(), flipped).unwrap();
        let bad = SkewModule::from_parts(alg, cx, good.theta().to_vec(), Vec::new(), Vec::new());
        assert!(bad.check().is_err());
    }

    #[test]
    fn heart_predicate() {
        let abar = free_module(SkewAlgebra::new(AlgebraTag::Abar, 2).unwrap()).unwrap();
        assert!(weight_heart_check(&abar));
        assert!(weight_heart_check(&abar.shifted(1, 1).unwrap()));
        assert!(!weight_heart_check(&abar.shifted(0, 1).unwrap()));
    }

    #[test]
    fn nilpotence_of_y() {
        let w = win((-6, 6), (-4, 4));
        let t = nilp_y_check(&triv_y(2).unwrap(), &w, 3).unwrap();
        assert_eq!((t.nilpotent, t.power), (true, Some(1)));
        let f = nilp_y_check(&free_module(SkewAlgebra::new(AlgebraTag::B, 2).unwrap()).unwrap(), &w, 4).unwrap();
        assert!(!f.nilpotent && f.failure.is_some());
    }

    #[test]
    fn json_round_trip() {
        let m = free_a_complex(2, &[[0, 0], [-2, 0]], &[(0, 1, SkewElement::theta(2, 0))]).unwrap();
        let back = SkewModule::from_json(&m.to_json()).unwrap();
        assert_eq!(back.to_json(), m.to_json());
    }
}
