use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::PolyError;
use crate::multigrade::GradingScheme;

pub type Q = BigRational;

/// Exponent vector, one entry per ring variable.
pub type Mono = Vec<u32>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Commutative polynomial ring over Q with a degree vector per variable.
#[derive(Debug)]
pub struct PolyRing {
    scheme: Arc<GradingScheme>,
    names: Vec<String>,
    degs: Vec<Vec<i64>>,
    weight: Vec<i64>,
    cache: Mutex<HashMap<Vec<i64>, Arc<Vec<Mono>>>>,
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        self.scheme == other.scheme && self.names == other.names && self.degs == other.degs
    }
}

impl Eq for PolyRing {}

impl PolyRing {
    /// Every degree slice has to be finite, so some integer functional must
    /// be positive on all variable degrees; a small one is searched for.
    pub fn new(
        scheme: &Arc<GradingScheme>,
        names: Vec<String>,
        degs: Vec<Vec<i64>>,
    ) -> Result<Arc<Self>, PolyError> {
        if names.len() != degs.len() || degs.iter().any(|d| d.len() != scheme.rank()) {
            return Err(PolyError::Shape("variable degree table".into()));
        }
        let weight = positive_functional(&degs, scheme.rank())
            .ok_or_else(|| PolyError::Shape("degree slices would be infinite".into()))?;
        Ok(Arc::new(Self {
            scheme: scheme.clone(),
            names,
            degs,
            weight,
            cache: Mutex::new(HashMap::new()),
        }))
    }

    /// `Q[x_1..x_n]` with every `x_i` in degree `(X = 2, C = 0)`.
    /// Shared per `n`, so slice caches are reused across callers.
    pub fn x_ring(n: usize) -> Arc<Self> {
        static RINGS: OnceLock<Mutex<HashMap<usize, Arc<PolyRing>>>> = OnceLock::new();
        let mut rings = RINGS.get_or_init(Default::default).lock().expect("ring cache");
        rings
            .entry(n)
            .or_insert_with(|| {
                let names = (1..=n).map(|i| format!("x{i}")).collect();
                Self::new(&GradingScheme::cx(), names, vec![vec![2, 0]; n]).expect("static ring")
            })
            .clone()
    }

    pub fn scheme(&self) -> &Arc<GradingScheme> {
        &self.scheme
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn var_degree(&self, i: usize) -> &[i64] {
        &self.degs[i]
    }

    pub fn weight(&self) -> &[i64] {
        &self.weight
    }

    pub fn weight_of(&self, d: &[i64]) -> i64 {
        d.iter().zip(&self.weight).map(|(a, b)| a * b).sum()
    }

    pub fn mono_degree(&self, m: &[u32]) -> Vec<i64> {
        let mut d = vec![0; self.scheme.rank()];
        for (e, deg) in m.iter().zip(&self.degs) {
            for (x, y) in d.iter_mut().zip(deg) {
                *x += *e as i64 * y;
            }
        }
        d
    }

    /// Monomials of degree exactly `d`, in lexicographic order.
    pub fn monomials(&self, d: &[i64]) -> Arc<Vec<Mono>> {
        if let Some(v) = self.cache.lock().expect("cache").get(d) {
            return v.clone();
        }
        let target = self.weight_of(d);
        let mut out = Vec::new();
        if target >= 0 {
            let w: Vec<i64> = (0..self.nvars()).map(|i| self.weight_of(&self.degs[i])).collect();
            let mut cur = vec![0u32; self.nvars()];
            enumerate(&w, 0, target, &mut cur, &mut |m| {
                if self.mono_degree(m) == d {
                    out.push(m.to_vec());
                }
            });
        }
        out.sort();
        let out = Arc::new(out);
        self.cache.lock().expect("cache").insert(d.to_vec(), out.clone());
        out
    }

    /// Degrees of all monomials with weight at most `max_weight`.
    pub fn degrees_up_to(&self, max_weight: i64) -> Vec<Vec<i64>> {
        let w: Vec<i64> = (0..self.nvars()).map(|i| self.weight_of(&self.degs[i])).collect();
        let mut seen = std::collections::BTreeSet::new();
        for t in 0..=max_weight.max(-1) {
            let mut cur = vec![0u32; self.nvars()];
            enumerate(&w, 0, t, &mut cur, &mut |m| {
                seen.insert(self.mono_degree(m));
            });
        }
        seen.into_iter().collect()
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(self.nvars(), i)
    }

    /// Degree of a homogeneous polynomial; `None` for zero, error otherwise.
    pub fn degree_of(&self, p: &Poly) -> Result<Option<Vec<i64>>, PolyError> {
        let mut d = None;
        for m in p.terms.keys() {
            let e = self.mono_degree(m);
            match &d {
                None => d = Some(e),
                Some(x) if *x == e => {}
                Some(x) => {
                    return Err(PolyError::NotHomogeneous(format!("{p} has terms in {x:?} and {e:?}")))
                }
            }
        }
        Ok(d)
    }
}

fn enumerate(w: &[i64], i: usize, left: i64, cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if i == w.len() {
        if left == 0 {
            f(cur);
        }
        return;
    }
    let mut e = 0;
    while e as i64 * w[i] <= left {
        cur[i] = e;
        enumerate(w, i + 1, left - e as i64 * w[i], cur, f);
        e += 1;
    }
    cur[i] = 0;
}

fn positive_functional(degs: &[Vec<i64>], rank: usize) -> Option<Vec<i64>> {
    let dot = |l: &[i64], d: &[i64]| l.iter().zip(d).map(|(a, b)| a * b).sum::<i64>();
    let mut best: Option<Vec<i64>> = None;
    let total = 7i64.pow(rank as u32);
    for code in 0..total {
        let mut c = code;
        let l: Vec<i64> = (0..rank)
            .map(|_| {
                let v = c % 7 - 3;
                c /= 7;
                v
            })
            .collect();
        if degs.iter().all(|d| dot(&l, d) > 0) {
            let key = |v: &[i64]| (v.iter().map(|x| x.abs()).sum::<i64>(), v.iter().map(|x| -x).collect::<Vec<_>>());
            if best.as_ref().is_none_or(|b| key(&l) < key(b)) {
                best = Some(l);
            }
        }
    }
    if degs.is_empty() {
        return Some(vec![0; rank]);
    }
    best
}

/// Sparse polynomial with rational coefficients, terms in lex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Mono, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::term(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn integer(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, q(c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Self::term(m, Q::one())
    }

    pub fn term(m: Mono, c: Q) -> Self {
        let nvars = m.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { nvars, terms }
    }

    pub fn from_terms(nvars: usize, it: impl IntoIterator<Item = (Mono, Q)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in it {
            assert_eq!(m.len(), nvars);
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if this is a constant polynomial.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.iter().all(|e| *e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coeff(&self, m: &[u32]) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m);
        match e {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_mono(&self, m: &[u32]) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.iter().zip(m).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Substitutes `x_i -> x_{perm[i]}`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut k = vec![0; self.nvars];
            for (i, e) in m.iter().enumerate() {
                k[perm[i]] += e;
            }
            out.add_term(k, c.clone());
        }
        out
    }

    /// Re-embeds into a ring with more variables, sending `x_i -> x_{map[i]}`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        let mut out = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut k = vec![0; nvars];
            for (i, e) in m.iter().enumerate() {
                k[map[i]] += e;
            }
            out.add_term(k, c.clone());
        }
        out
    }

    /// Evaluates at rational values of the variables.
    pub fn eval(&self, point: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, e) in point.iter().zip(m) {
                for _ in 0..*e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes polynomials for variables.
    pub fn compose(&self, images: &[Poly], nvars: usize) -> Self {
        let mut acc = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut t = Self::constant(nvars, c.clone());
            for (p, e) in images.iter().zip(m) {
                for _ in 0..*e {
                    t = &t * p;
                }
            }
            acc = &acc + &t;
        }
        acc
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars.max(o.nvars));
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                // monomial product adds exponents
                #[allow(clippy::suspicious_arithmetic_impl)]
                out.add_term(a.iter().zip(b).map(|(u, v)| u + v).collect(), x * y);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let a = c.abs();
            let unit = m.iter().all(|e| *e == 0);
            if !a.is_one() || unit {
                write!(f, "{a}")?;
            }
            let mut first = a.is_one();
            for (j, e) in m.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "x{}", j + 1)?;
                if *e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// `e_k(x_1..x_n)`.
pub fn elem_sym(k: usize, n: usize) -> Result<Poly, PolyError> {
    elem_sym_in(k, n, n, 0)
}

/// `e_k` of the `n` variables starting at `offset` inside a ring of `nvars`.
pub fn elem_sym_in(k: usize, n: usize, nvars: usize, offset: usize) -> Result<Poly, PolyError> {
    if k > n || offset + n > nvars {
        return Err(PolyError::OutOfRange(format!("e_{k} in {n} variables")));
    }
    let mut out = Poly::zero(nvars);
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let mut m = vec![0; nvars];
        for &i in &subset {
            m[offset + i] = 1;
        }
        out.add_term(m, Q::one());
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if subset[i] < n - k + i {
                subset[i] += 1;
                for j in i + 1..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Writes `"num/den"` (or `"num"` for integers).
pub fn q_to_string(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn q_from_str(s: &str) -> Result<Q, PolyError> {
    let bad = || PolyError::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        None => Ok(Q::from_integer(s.trim().parse::<BigInt>().map_err(|_| bad())?)),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_symmetric() {
        assert_eq!(elem_sym(1, 2).unwrap(), &Poly::var(2, 0) + &Poly::var(2, 1));
        assert_eq!(elem_sym(2, 2).unwrap(), &Poly::var(2, 0) * &Poly::var(2, 1));
        assert_eq!(elem_sym(0, 3).unwrap(), Poly::one(3));
        assert_eq!(elem_sym(2, 4).unwrap().len(), 6);
        assert!(elem_sym(3, 2).is_err());
    }

    #[test]
    fn slices_of_x_ring() {
        let r1 = PolyRing::x_ring(1);
        assert_eq!(*r1.monomials(&[4, 0]), vec![vec![2]]);
        let r2 = PolyRing::x_ring(2);
        assert_eq!(r2.monomials(&[4, 0]).len(), 3);
        assert!(r2.monomials(&[3, 0]).is_empty());
        assert!(r2.monomials(&[-2, 0]).is_empty());
    }

    #[test]
    fn mixed_sign_ring_has_finite_slices() {
        let s = GradingScheme::cx();
        let r = PolyRing::new(&s, vec!["x".into(), "y".into()], vec![vec![2, 2], vec![-2, 0]]).unwrap();
        // x^a y^b sits at (2a - 2b, 2a)
        assert_eq!(*r.monomials(&[0, 2]), vec![vec![1, 1]]);
        assert_eq!(*r.monomials(&[-4, 0]), vec![vec![0, 2]]);
        assert!(PolyRing::new(&s, vec!["u".into(), "v".into()], vec![vec![2, 0], vec![-2, 0]]).is_err());
    }

    #[test]
    fn rationals_round_trip() {
        for s in ["3", "-7/2", "0"] {
            assert_eq!(q_to_string(&q_from_str(s).unwrap()), s);
        }
        assert!(q_from_str("1/0").is_err());
        assert!(q_from_str("x").is_err());
    }

    #[test]
    fn display_is_readable() {
        let p = &(&Poly::var(2, 0) * &Poly::var(2, 0)) - &Poly::integer(2, 3);
        assert_eq!(p.to_string(), "x1^2 - 3");
    }
}
