use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::rep::{act_on_subset, compose, wedge_sign, Perm};
use super::TraceError;
use crate::multigrade::GradingScheme;
use crate::polyalg::{Poly, PolyRing, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraTag {
    /// `Q[x, theta] # S_n`
    A,
    /// `Q[x] # S_n`
    Abar,
    /// `Q[x, y] # S_n`
    B,
    /// `B` read in the `(X~, Y~)` grading
    Btilde,
}

impl AlgebraTag {
    pub fn has_theta(self) -> bool {
        self == Self::A
    }

    pub fn has_y(self) -> bool {
        matches!(self, Self::B | Self::Btilde)
    }
}

impl fmt::Display for AlgebraTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::A => "A",
            Self::Abar => "Abar",
            Self::B => "B",
            Self::Btilde => "Btilde",
        })
    }
}

impl FromStr for AlgebraTag {
    type Err = TraceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" => Ok(Self::A),
            "Abar" => Ok(Self::Abar),
            "B" => Ok(Self::B),
            "Btilde" => Ok(Self::Btilde),
            _ => Err(TraceError::Shape(format!("unknown algebra `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SkewAlgebra {
    pub tag: AlgebraTag,
    pub n: usize,
}

/// Generator name, scheme axes and degree.
pub type DegreeEntry = (&'static str, &'static [&'static str], [i64; 2]);

impl SkewAlgebra {
    pub fn new(tag: AlgebraTag, n: usize) -> Result<Self, TraceError> {
        if n == 0 || n > 6 {
            return Err(TraceError::Range(format!("n = {n} outside 1..=6")));
        }
        Ok(Self { tag, n })
    }

    /// Degrees of one variable of each alphabet. `A` also lists its sheared
    /// form `(X, C - X)`.
    pub fn degree_table(&self) -> Vec<DegreeEntry> {
        const XC: &[&str] = &["X", "C"];
        const XY: &[&str] = &["Xt", "Yt"];
        match self.tag {
            AlgebraTag::A => vec![
                ("x", XC, [2, 2]),
                ("theta", XC, [2, 1]),
                ("x~", XC, [2, 0]),
                ("theta~", XC, [2, -1]),
            ],
            AlgebraTag::Abar => vec![("x", XC, [2, 2])],
            AlgebraTag::B => vec![("x", XC, [2, 2]), ("y", XC, [-2, 0])],
            AlgebraTag::Btilde => vec![("x~", XY, [2, 1]), ("y~", XY, [-2, 0])],
        }
    }

    /// The even alphabet every module over this algebra is free over.
    pub fn ring(&self, free_in_y: bool) -> Arc<PolyRing> {
        if self.tag.has_y() && free_in_y {
            xy_ring(self.n)
        } else {
            x_ring(self.n)
        }
    }
}

type RingCache = HashMap<(usize, bool), Arc<PolyRing>>;

fn cached(n: usize, with_y: bool) -> Arc<PolyRing> {
    static RINGS: OnceLock<Mutex<RingCache>> = OnceLock::new();
    let mut rings = RINGS.get_or_init(Default::default).lock().expect("ring cache");
    rings
        .entry((n, with_y))
        .or_insert_with(|| {
            let mut names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
            let mut degs = vec![vec![2, 2]; n];
            if with_y {
                names.extend((1..=n).map(|i| format!("y{i}")));
                degs.extend(vec![vec![-2, 0]; n]);
            }
            PolyRing::new(&GradingScheme::cx(), names, degs).expect("static ring")
        })
        .clone()
}

/// `Q[x_1..x_n]`, `x` in `(X, C) = (2, 2)`.
pub fn x_ring(n: usize) -> Arc<PolyRing> {
    cached(n, false)
}

/// `Q[x_1..x_n, y_1..y_n]`, `y` in `(X, C) = (-2, 0)`.
pub fn xy_ring(n: usize) -> Arc<PolyRing> {
    cached(n, true)
}

/// Where `w` sends each ring variable: `x_i -> x_{w(i)}`, `y_i -> y_{w(i)}`.
pub fn variable_perm(w: &[usize], nvars: usize) -> Perm {
    let n = w.len();
    (0..nvars).map(|v| if v < n { w[v] } else { n + w[v - n] }).collect()
}

/// An element of `Q[x, theta] # S_n`: terms `p(x) theta_S w`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SkewElement {
    n: usize,
    terms: BTreeMap<(u32, Perm), Poly>,
}

impl SkewElement {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn term(p: Poly, theta: u32, w: Perm) -> Self {
        let mut e = Self::zero(w.len());
        e.add_term(theta, w, p);
        e
    }

    pub fn one(n: usize) -> Self {
        Self::term(Poly::one(n), 0, (0..n).collect())
    }

    pub fn x(n: usize, i: usize) -> Self {
        Self::term(Poly::var(n, i), 0, (0..n).collect())
    }

    pub fn theta(n: usize, i: usize) -> Self {
        Self::term(Poly::one(n), 1 << i, (0..n).collect())
    }

    pub fn group(w: Perm) -> Self {
        let n = w.len();
        Self::term(Poly::one(n), 0, w)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<(u32, Perm), Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, theta: u32, w: Perm, p: Poly) {
        let key = (theta, w);
        let sum = match self.terms.remove(&key) {
            Some(old) => &old + &p,
            None => p,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((s, w), p) in &other.terms {
            out.add_term(*s, w.clone(), p.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.n);
        for ((s, w), p) in &self.terms {
            out.add_term(*s, w.clone(), p.scale(c));
        }
        out
    }

    /// `(p theta_S v)(q theta_T u) = p v(q) theta_S v(theta_T) (v u)`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for ((s, v), p) in &self.terms {
            for ((t, u), q) in &other.terms {
                let (e1, vt) = act_on_subset(v, *t);
                let Some(e2) = wedge_sign(*s, vt) else { continue };
                let coeff = p * &q.permute(v);
                let c = if e1 * e2 < 0 { -&coeff } else { coeff };
                out.add_term(s | vt, compose(v, u), c);
            }
        }
        out
    }

    /// `(X, C)` when homogeneous.
    pub fn degree(&self) -> Option<[i64; 2]> {
        let ring = x_ring(self.n);
        let mut deg = None;
        for ((s, _), p) in &self.terms {
            let k = i64::from(s.count_ones());
            for m in p.terms().keys() {
                let d = ring.mono_degree(m);
                let d = [d[0] + 2 * k, d[1] + k];
                if deg.is_some_and(|e| e != d) {
                    return None;
                }
                deg = Some(d);
            }
        }
        deg
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::q;

    #[test]
    fn relations_of_the_skew_algebra() {
        let n = 2;
        let (t0, t1) = (SkewElement::theta(n, 0), SkewElement::theta(n, 1));
        assert!(t0.mul(&t0).is_zero());
        assert_eq!(t0.mul(&t1), t1.mul(&t0).scale(&q(-1)));
        let s = SkewElement::group(vec![1, 0]);
        assert_eq!(s.mul(&SkewElement::x(n, 0)), SkewElement::x(n, 1).mul(&s));
        assert_eq!(s.mul(&t0), t1.mul(&s));
        assert_eq!(s.mul(&s), SkewElement::one(n));
    }

    #[test]
    fn associativity_on_samples() {
        let n = 3;
        let a = SkewElement::theta(n, 0).add(&SkewElement::group(vec![1, 2, 0]));
        let b = SkewElement::x(n, 2).mul(&SkewElement::theta(n, 1)).add(&SkewElement::group(vec![0, 2, 1]));
        let c = SkewElement::theta(n, 2).mul(&SkewElement::group(vec![2, 1, 0]));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn degrees() {
        let e = SkewElement::x(2, 0).mul(&SkewElement::theta(2, 1));
        assert_eq!(e.degree(), Some([4, 3]));
        assert_eq!(SkewElement::one(2).degree(), Some([0, 0]));
        assert_eq!(SkewElement::one(2).add(&SkewElement::x(2, 0)).degree(), None);
    }
}
