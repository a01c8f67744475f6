use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::linalg::{self, SparseVec};
use super::poly::{Mono, Poly, PolyRing, Q};
use super::PolyError;

/// Free module over a graded polynomial ring, one degree per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedFreeModule {
    ring: Arc<PolyRing>,
    gens: Vec<Vec<i64>>,
}

impl GradedFreeModule {
    pub fn new(ring: &Arc<PolyRing>, gens: Vec<Vec<i64>>) -> Result<Self, PolyError> {
        if gens.iter().any(|g| g.len() != ring.scheme().rank()) {
            return Err(PolyError::Shape("generator degree length".into()));
        }
        Ok(Self { ring: ring.clone(), gens })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn gens(&self) -> &[Vec<i64>] {
        &self.gens
    }

    pub fn gen(&self, k: usize) -> &[i64] {
        &self.gens[k]
    }

    pub fn shifted(&self, by: &[i64]) -> Self {
        let gens = self.gens.iter().map(|g| g.iter().zip(by).map(|(a, b)| a + b).collect()).collect();
        Self { ring: self.ring.clone(), gens }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Self { ring: self.ring.clone(), gens }
    }

    /// The `(generator, monomial)` basis of the degree-`d` part.
    pub fn slice(&self, d: &[i64]) -> SliceBasis {
        let mut elems = Vec::new();
        for (k, g) in self.gens.iter().enumerate() {
            let rest: Vec<i64> = d.iter().zip(g).map(|(a, b)| a - b).collect();
            for m in self.ring.monomials(&rest).iter() {
                elems.push((k, m.clone()));
            }
        }
        SliceBasis::new(elems)
    }
}

/// Ordered basis of a degree slice, lexicographic in `(generator, monomial)`.
#[derive(Debug, Clone, Default)]
pub struct SliceBasis {
    elems: Vec<(usize, Mono)>,
    index: HashMap<(usize, Mono), usize>,
}

impl SliceBasis {
    pub fn new(elems: Vec<(usize, Mono)>) -> Self {
        let index = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Self { elems, index }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[(usize, Mono)] {
        &self.elems
    }

    pub fn position(&self, gen: usize, m: &Mono) -> Option<usize> {
        self.index.get(&(gen, m.clone())).copied()
    }
}

/// Homogeneous matrix of polynomials; column `k` is the image of source
/// generator `k`. Entry `(l, k)` has degree `src_k + degree - tgt_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    src: GradedFreeModule,
    tgt: GradedFreeModule,
    degree: Vec<i64>,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn new(
        src: &GradedFreeModule,
        tgt: &GradedFreeModule,
        degree: Vec<i64>,
        entries: Vec<Poly>,
    ) -> Result<Self, PolyError> {
        let m = Self::new_unchecked(src, tgt, degree, entries)?;
        m.check_homogeneous()?;
        Ok(m)
    }

    /// Shape checks only; for products of already validated matrices.
    pub fn new_unchecked(
        src: &GradedFreeModule,
        tgt: &GradedFreeModule,
        degree: Vec<i64>,
        entries: Vec<Poly>,
    ) -> Result<Self, PolyError> {
        if src.ring != tgt.ring {
            return Err(PolyError::ModuleMismatch("source and target rings differ".into()));
        }
        if entries.len() != src.rank() * tgt.rank() {
            return Err(PolyError::Shape(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                tgt.rank(),
                src.rank()
            )));
        }
        Ok(Self { src: src.clone(), tgt: tgt.clone(), degree, entries })
    }

    pub fn zero(src: &GradedFreeModule, tgt: &GradedFreeModule, degree: Vec<i64>) -> Self {
        let n = src.ring.nvars();
        Self {
            src: src.clone(),
            tgt: tgt.clone(),
            degree,
            entries: vec![Poly::zero(n); src.rank() * tgt.rank()],
        }
    }

    pub fn identity(m: &GradedFreeModule) -> Self {
        let mut out = Self::zero(m, m, vec![0; m.ring.scheme().rank()]);
        for i in 0..m.rank() {
            out.set(i, i, Poly::one(m.ring.nvars()));
        }
        out
    }

    /// `p * Id` on `m`, of degree `deg p`.
    pub fn scalar(m: &GradedFreeModule, p: &Poly, degree: Vec<i64>) -> Self {
        let mut out = Self::zero(m, m, degree);
        for i in 0..m.rank() {
            out.set(i, i, p.clone());
        }
        out
    }

    pub fn check_homogeneous(&self) -> Result<(), PolyError> {
        let ring = &self.src.ring;
        for l in 0..self.rows() {
            for k in 0..self.cols() {
                let e = self.get(l, k);
                if let Some(d) = ring.degree_of(e)? {
                    let want: Vec<i64> = self.src.gens[k]
                        .iter()
                        .zip(&self.degree)
                        .zip(&self.tgt.gens[l])
                        .map(|((a, b), c)| a + b - c)
                        .collect();
                    if d != want {
                        return Err(PolyError::NotHomogeneous(format!(
                            "entry ({l},{k}) = {e} has degree {d:?}, expected {want:?}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn src(&self) -> &GradedFreeModule {
        &self.src
    }

    pub fn tgt(&self) -> &GradedFreeModule {
        &self.tgt
    }

    pub fn degree(&self) -> &[i64] {
        &self.degree
    }

    pub fn rows(&self) -> usize {
        self.tgt.rank()
    }

    pub fn cols(&self) -> usize {
        self.src.rank()
    }

    pub fn get(&self, l: usize, k: usize) -> &Poly {
        &self.entries[l * self.cols() + k]
    }

    pub fn set(&mut self, l: usize, k: usize, p: Poly) {
        let c = self.cols();
        self.entries[l * c + k] = p;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    /// `self * other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self, PolyError> {
        if other.tgt != self.src {
            return Err(PolyError::ModuleMismatch("composition".into()));
        }
        let n = self.src.ring.nvars();
        let (r, m, c) = (self.rows(), self.cols(), other.cols());
        let mut entries = vec![Poly::zero(n); r * c];
        for i in 0..r {
            for j in 0..m {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..c {
                    let b = other.get(j, k);
                    if !b.is_zero() {
                        let e = &mut entries[i * c + k];
                        *e = &*e + &(a * b);
                    }
                }
            }
        }
        let degree = self.degree.iter().zip(&other.degree).map(|(a, b)| a + b).collect();
        Self::new_unchecked(&other.src, &self.tgt, degree, entries)
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(&Poly, &Poly) -> Poly) -> Result<Self, PolyError> {
        if self.src != other.src || self.tgt != other.tgt {
            return Err(PolyError::ModuleMismatch("sum of maps".into()));
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(PolyError::NotHomogeneous("sum of maps of different degree".into()));
        }
        let degree = if self.is_zero() { other.degree.clone() } else { self.degree.clone() };
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        Ok(Self { src: self.src.clone(), tgt: self.tgt.clone(), degree, entries })
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            degree: self.degree.clone(),
            entries: self.entries.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Same entries viewed between other modules of the same ranks.
    pub fn retarget(&self, src: &GradedFreeModule, tgt: &GradedFreeModule) -> Result<Self, PolyError> {
        Self::new(src, tgt, self.degree.clone(), self.entries.clone())
    }

    /// The submatrix on chosen rows and columns.
    pub fn submatrix(
        &self,
        rows: &[usize],
        cols: &[usize],
        src: &GradedFreeModule,
        tgt: &GradedFreeModule,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &l in rows {
            for &k in cols {
                entries.push(self.get(l, k).clone());
            }
        }
        Self { src: src.clone(), tgt: tgt.clone(), degree: self.degree.clone(), entries }
    }

    /// Whether this is `c * Id` for a nonzero rational `c`.
    pub fn scalar_identity(&self) -> Option<Q> {
        if self.rows() != self.cols() || self.rows() == 0 {
            return None;
        }
        let c = self.get(0, 0).as_constant()?;
        if c.is_zero() {
            return None;
        }
        for l in 0..self.rows() {
            for k in 0..self.cols() {
                let e = self.get(l, k);
                if l == k {
                    if e.as_constant().as_ref() != Some(&c) {
                        return None;
                    }
                } else if !e.is_zero() {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Columns of the induced linear map from the `src` slice into the `tgt`
    /// slice, with row indices shifted by `offset`.
    pub fn slice_columns(&self, src: &SliceBasis, tgt: &SliceBasis, offset: usize) -> Vec<SparseVec<Q>> {
        src.elems()
            .iter()
            .map(|(k, m)| {
                let mut col: Vec<(usize, Q)> = Vec::new();
                for l in 0..self.rows() {
                    for (em, c) in self.get(l, *k).terms() {
                        let t: Mono = em.iter().zip(m).map(|(a, b)| a + b).collect();
                        let i = tgt.position(l, &t).expect("target slice misses an image term");
                        col.push((i + offset, c.clone()));
                    }
                }
                col.sort_by_key(|e| e.0);
                col
            })
            .collect()
    }

    /// Image of a vector given in the `src` slice basis.
    pub fn apply_slice(&self, v: &[(usize, Q)], src: &SliceBasis, tgt: &SliceBasis) -> SparseVec<Q> {
        let mut acc: HashMap<usize, Q> = HashMap::new();
        for (i, x) in v {
            let (k, m) = &src.elems()[*i];
            for l in 0..self.rows() {
                for (em, c) in self.get(l, *k).terms() {
                    let t: Mono = em.iter().zip(m).map(|(a, b)| a + b).collect();
                    let j = tgt.position(l, &t).expect("target slice misses an image term");
                    *acc.entry(j).or_insert_with(Q::zero) += c * x;
                }
            }
        }
        let mut out: Vec<(usize, Q)> = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        out.sort_by_key(|e| e.0);
        out
    }
}

/// Evaluates a polynomial at pairwise commuting square matrices.
pub fn eval_at(p: &Poly, mats: &[PolyMatrix], m: &GradedFreeModule) -> Result<PolyMatrix, PolyError> {
    let scheme_rank = m.ring().scheme().rank();
    let mut acc = PolyMatrix::zero(m, m, vec![0; scheme_rank]);
    let mut powers: HashMap<(usize, u32), PolyMatrix> = HashMap::new();
    for (mono, c) in p.terms() {
        let mut t = PolyMatrix::identity(m).scale(c);
        for (i, e) in mono.iter().enumerate() {
            if *e == 0 {
                continue;
            }
            if let std::collections::hash_map::Entry::Vacant(slot) = powers.entry((i, *e)) {
                let mut pw = mats[i].clone();
                for _ in 1..*e {
                    pw = pw.compose(&mats[i])?;
                }
                slot.insert(pw);
            }
            t = t.compose(&powers[&(i, *e)])?;
        }
        if acc.is_zero() {
            acc = t;
        } else {
            acc = acc.add(&t)?;
        }
    }
    Ok(acc)
}

/// Scales a rational vector to an integer one with the same span.
pub fn to_integer(v: &[(usize, Q)]) -> SparseVec<BigInt> {
    let mut l = BigInt::one();
    for (_, x) in v {
        l = l.lcm(x.denom());
    }
    v.iter().map(|(i, x)| (*i, x.numer() * (&l / x.denom()))).collect()
}

pub fn rank_q(cols: &[SparseVec<Q>]) -> usize {
    let ints: Vec<_> = cols.iter().map(|c| to_integer(c)).collect();
    linalg::rank(&ints)
}

/// Relations among rational vectors, as rational coefficient vectors.
pub fn kernel_q(cols: &[SparseVec<Q>]) -> Vec<SparseVec<Q>> {
    let mut scales = Vec::with_capacity(cols.len());
    let mut ints = Vec::with_capacity(cols.len());
    for c in cols {
        let mut l = BigInt::one();
        for (_, x) in c {
            l = l.lcm(x.denom());
        }
        ints.push(c.iter().map(|(i, x)| (*i, x.numer() * (&l / x.denom()))).collect());
        scales.push(l);
    }
    linalg::kernel(&ints)
        .into_iter()
        .map(|rel| rel.into_iter().map(|(i, c)| (i, Q::from_integer(c * &scales[i]))).collect())
        .collect()
}
