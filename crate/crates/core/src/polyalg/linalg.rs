//! Fraction-free sparse elimination over the integers.
//!
//! Rational vectors are scaled to primitive integer vectors before they get
//! here. Elimination first runs on checked `i128`; the first overflow restarts
//! the whole computation on `BigInt`.

use std::collections::HashMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Sorted `(index, value)` pairs with no zero values.
pub type SparseVec<T> = Vec<(usize, T)>;

pub trait Entry: Clone + Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    /// `a * x - b * y`, `None` on overflow.
    fn combine(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn gcd(&self, other: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
    fn is_unit(&self) -> bool;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Entry for i128 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn combine(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Entry for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn combine(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

#[derive(Debug)]
pub struct Overflow;

/// `a * u - b * v`, entrywise on sparse vectors.
fn axpy<T: Entry>(a: &T, u: &[(usize, T)], b: &T, v: &[(usize, T)]) -> Result<SparseVec<T>, Overflow> {
    let mut out = Vec::with_capacity(u.len() + v.len());
    let (mut i, mut j) = (0, 0);
    let z = T::zero();
    while i < u.len() || j < v.len() {
        let (idx, x, y) = match (u.get(i), v.get(j)) {
            (Some(p), Some(q)) if p.0 == q.0 => {
                i += 1;
                j += 1;
                (p.0, &p.1, &q.1)
            }
            (Some(p), Some(q)) if p.0 < q.0 => {
                i += 1;
                (p.0, &p.1, &z)
            }
            (Some(p), None) => {
                i += 1;
                (p.0, &p.1, &z)
            }
            (_, Some(q)) => {
                j += 1;
                (q.0, &z, &q.1)
            }
            (None, None) => unreachable!(),
        };
        let r = T::combine(a, x, b, y).ok_or(Overflow)?;
        if !r.is_zero() {
            out.push((idx, r));
        }
    }
    Ok(out)
}

fn make_primitive<T: Entry>(v: &mut SparseVec<T>, tag: &mut SparseVec<T>) {
    let mut g = T::zero();
    for (_, x) in v.iter().chain(tag.iter()) {
        g = g.gcd(x);
        if g.is_unit() {
            return;
        }
    }
    if g.is_zero() || g.is_unit() {
        return;
    }
    for (_, x) in v.iter_mut().chain(tag.iter_mut()) {
        *x = x.div_exact(&g);
    }
}

/// Row echelon form built one vector at a time. Every stored row has a
/// distinct leading index. Optional tags record how each row was obtained
/// from the inputs, which is what yields kernels.
#[derive(Debug, Clone)]
pub struct Echelon<T: Entry> {
    rows: HashMap<usize, (SparseVec<T>, SparseVec<T>)>,
    track: bool,
}

impl<T: Entry> Echelon<T> {
    pub fn new(track: bool) -> Self {
        Self { rows: HashMap::new(), track }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_pair(
        &self,
        mut v: SparseVec<T>,
        mut tag: SparseVec<T>,
    ) -> Result<(SparseVec<T>, SparseVec<T>), Overflow> {
        while let Some((lead, lv)) = v.first().cloned() {
            let Some((row, rtag)) = self.rows.get(&lead) else { break };
            let p = &row[0].1;
            let g = p.gcd(&lv);
            let (a, b) = (p.div_exact(&g), lv.div_exact(&g));
            v = axpy(&a, &v, &b, row)?;
            if self.track {
                tag = axpy(&a, &tag, &b, rtag)?;
            }
            make_primitive(&mut v, &mut tag);
        }
        Ok((v, tag))
    }

    /// Inserts `v`; returns the tag of the relation found when `v` reduces
    /// to zero.
    pub fn insert(&mut self, v: SparseVec<T>, tag: SparseVec<T>) -> Result<Option<SparseVec<T>>, Overflow> {
        let (v, tag) = self.reduce_pair(v, tag)?;
        match v.first() {
            None => Ok(Some(tag)),
            Some(&(lead, _)) => {
                self.rows.insert(lead, (v, tag));
                Ok(None)
            }
        }
    }

    pub fn contains(&self, v: SparseVec<T>) -> Result<bool, Overflow> {
        Ok(self.reduce_pair(v, Vec::new())?.0.is_empty())
    }
}

fn convert<T: Entry>(v: &[(usize, BigInt)]) -> Option<SparseVec<T>> {
    v.iter().map(|(i, x)| T::from_big(x).map(|y| (*i, y))).collect()
}

fn rank_with<T: Entry>(vectors: &[SparseVec<BigInt>]) -> Option<usize> {
    let mut order: Vec<usize> = (0..vectors.len()).collect();
    order.sort_by_key(|&i| vectors[i].len());
    let mut e = Echelon::<T>::new(false);
    for i in order {
        let v = convert::<T>(&vectors[i])?;
        e.insert(v, Vec::new()).ok()?;
    }
    Some(e.rank())
}

/// Rank of the span of integer vectors.
pub fn rank(vectors: &[SparseVec<BigInt>]) -> usize {
    rank_with::<i128>(vectors)
        .or_else(|| rank_with::<BigInt>(vectors))
        .expect("bigint elimination cannot overflow")
}

fn kernel_with<T: Entry>(vectors: &[SparseVec<BigInt>]) -> Option<Vec<SparseVec<BigInt>>> {
    let mut e = Echelon::<T>::new(true);
    let mut out = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let v = convert::<T>(v)?;
        let one = T::from_big(&BigInt::one())?;
        if let Some(rel) = e.insert(v, vec![(i, one)]).ok()? {
            out.push(rel.iter().map(|(j, x)| (*j, x.to_big())).collect());
        }
    }
    Some(out)
}

/// Basis of the relations `sum c_i v_i = 0`, as sparse coefficient vectors
/// indexed by position in `vectors`.
pub fn kernel(vectors: &[SparseVec<BigInt>]) -> Vec<SparseVec<BigInt>> {
    kernel_with::<i128>(vectors)
        .or_else(|| kernel_with::<BigInt>(vectors))
        .expect("bigint elimination cannot overflow")
}

/// A span that supports membership queries, on the overflow-safe path.
#[derive(Debug, Clone)]
pub struct Span {
    inner: SpanInner,
    vectors: Vec<SparseVec<BigInt>>,
}

#[derive(Debug, Clone)]
enum SpanInner {
    Small(Echelon<i128>),
    Big(Echelon<BigInt>),
}

impl Span {
    pub fn new(vectors: Vec<SparseVec<BigInt>>) -> Self {
        let small = (|| {
            let mut e = Echelon::<i128>::new(false);
            for v in &vectors {
                e.insert(convert(v)?, Vec::new()).ok()?;
            }
            Some(e)
        })();
        let inner = match small {
            Some(e) => SpanInner::Small(e),
            None => SpanInner::Big(Self::big(&vectors)),
        };
        Self { inner, vectors }
    }

    fn big(vectors: &[SparseVec<BigInt>]) -> Echelon<BigInt> {
        let mut e = Echelon::<BigInt>::new(false);
        for v in vectors {
            e.insert(v.clone(), Vec::new()).expect("bigint");
        }
        e
    }

    pub fn dim(&self) -> usize {
        match &self.inner {
            SpanInner::Small(e) => e.rank(),
            SpanInner::Big(e) => e.rank(),
        }
    }

    pub fn contains(&mut self, v: &[(usize, BigInt)]) -> bool {
        if let SpanInner::Small(e) = &self.inner {
            if let Some(r) = convert::<i128>(v).and_then(|w| e.contains(w).ok()) {
                return r;
            }
            self.inner = SpanInner::Big(Self::big(&self.vectors));
        }
        match &self.inner {
            SpanInner::Big(e) => e.contains(v.to_vec()).expect("bigint"),
            SpanInner::Small(_) => unreachable!(),
        }
    }
}
