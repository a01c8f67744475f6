//! Rouquier complexes of braids as complexes of Bott–Samelson bimodules, and
//! their reduction by splitting `B_s B_s` and cancelling isomorphisms.

mod braid;
mod complex;

pub use braid::{cycle_type, BraidWord};
pub use complex::{
    complex_tensor, crossing_complex, rouquier_complex, rouquier_complex_simplified, BimoduleComplex,
    BimoduleComplexJson, BlockJson, Summand,
};

use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyalg::{PolyError, PolyMatrix, Q};
use crate::soergel::SoergelError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RouquierError {
    #[error("a braid needs at least one strand")]
    NoStrands,
    #[error("letter {letter} at position {pos} is not a generator of Br_{n}")]
    BadLetter { pos: usize, letter: i32, n: usize },
    #[error("strand mismatch: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("malformed complex: {0}")]
    Malformed(String),
    #[error(transparent)]
    Soergel(#[from] SoergelError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Per-crossing shifts of `(a, X, C)` applied to raw Hochschild homology so
/// that Markov moves hold on the nose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Normalization {
    pub positive: [i64; 3],
    pub negative: [i64; 3],
}

impl Default for Normalization {
    fn default() -> Self {
        Self { positive: [-1, -1, -2], negative: [1, 1, 2] }
    }
}

impl Normalization {
    pub fn total(&self, b: &BraidWord) -> [i64; 3] {
        let (p, m) = (b.positive() as i64, b.negative() as i64);
        [0, 1, 2].map(|i| p * self.positive[i] + m * self.negative[i])
    }
}

type Blocks = BTreeMap<(usize, usize), PolyMatrix>;

/// `BS(u s v)` index `j` inside `BS(u s s v)` with the left copy of `s` at
/// position `p` carrying bit `k`.
pub fn split_index(j: usize, p: usize, k: usize) -> usize {
    (j & ((1 << p) - 1)) | (k << p) | ((j >> p) << (p + 1))
}

fn first_repeat(w: &[usize]) -> Option<usize> {
    w.windows(2).position(|x| x[0] == x[1])
}

struct Parts {
    n: usize,
    lo: i64,
    terms: Vec<Vec<Summand>>,
    diffs: Vec<Blocks>,
}

impl Parts {
    fn of(c: &BimoduleComplex) -> Result<Self, RouquierError> {
        let mut diffs = Vec::new();
        for k in c.lo()..c.hi() {
            diffs.push(c.diff(k).cloned().unwrap_or_default());
        }
        Ok(Self { n: c.n(), lo: c.lo(), terms: c.terms().to_vec(), diffs })
    }

    /// Replaces every `BS(u s s v)<k>` by `BS(usv)<k-1> + BS(usv)<k+1>` until
    /// no word has an adjacent repeat. Returns whether anything changed.
    fn split_all(&mut self) -> Result<bool, RouquierError> {
        let mut changed = false;
        for t in 0..self.terms.len() {
            while let Some(pos) = self.terms[t].iter().position(|s| first_repeat(&s.word).is_some()) {
                self.split_one(t, pos)?;
                changed = true;
            }
        }
        Ok(changed)
    }

    fn split_one(&mut self, t: usize, pos: usize) -> Result<(), RouquierError> {
        let n = self.n;
        let old = self.terms[t][pos].clone();
        let p = first_repeat(&old.word).expect("caller checked");
        let mut word = old.word.clone();
        word.remove(p);
        let low = Summand { word: word.clone(), shift: old.shift - 1 };
        let high = Summand { word, shift: old.shift + 1 };
        let r = low.rank();
        let rows = |k: usize| (0..r).map(move |j| split_index(j, p, k)).collect::<Vec<_>>();
        // new positions: low at `pos`, high appended
        let hi_pos = self.terms[t].len();
        self.terms[t][pos] = low.clone();
        self.terms[t].push(high.clone());
        let parts = [(pos, low.module(n)?), (hi_pos, high.module(n)?)];
        if t > 0 {
            let d = std::mem::take(&mut self.diffs[t - 1]);
            let mut nd = Blocks::new();
            for ((q, s), b) in d {
                if q != pos {
                    nd.insert((q, s), b);
                    continue;
                }
                let cols: Vec<usize> = (0..b.cols()).collect();
                for (k, (np, m)) in parts.iter().enumerate() {
                    let sub = b.submatrix(&rows(k), &cols, b.src(), m);
                    if !sub.is_zero() {
                        nd.insert((*np, s), sub);
                    }
                }
            }
            self.diffs[t - 1] = nd;
        }
        if t < self.diffs.len() {
            let d = std::mem::take(&mut self.diffs[t]);
            let mut nd = Blocks::new();
            for ((q, s), b) in d {
                if s != pos {
                    nd.insert((q, s), b);
                    continue;
                }
                let all: Vec<usize> = (0..b.rows()).collect();
                for (k, (np, m)) in parts.iter().enumerate() {
                    let sub = b.submatrix(&all, &rows(k), m, b.tgt());
                    if !sub.is_zero() {
                        nd.insert((q, *np), sub);
                    }
                }
            }
            self.diffs[t] = nd;
        }
        Ok(())
    }

    /// A block `lambda * Id` between equal summands, searched in a fixed order.
    fn find_iso(&self) -> Option<(usize, usize, usize, Q)> {
        for (t, d) in self.diffs.iter().enumerate() {
            for ((q, p), b) in d {
                if self.terms[t][*p] != self.terms[t + 1][*q] {
                    continue;
                }
                if let Some(l) = b.scalar_identity() {
                    return Some((t, *p, *q, l));
                }
            }
        }
        None
    }

    /// Gaussian elimination of `lambda * Id: X_p -> Y_q` out of degree `t`.
    fn eliminate(&mut self, t: usize, p: usize, q: usize, lambda: &Q) -> Result<(), RouquierError> {
        let inv = Q::one() / lambda;
        let d = std::mem::take(&mut self.diffs[t]);
        let into_q: Vec<(usize, PolyMatrix)> =
            d.iter().filter(|((qq, pp), _)| *qq == q && *pp != p).map(|((_, pp), b)| (*pp, b.clone())).collect();
        let out_of_p: Vec<(usize, PolyMatrix)> =
            d.iter().filter(|((qq, pp), _)| *pp == p && *qq != q).map(|((qq, _), b)| (*qq, b.clone())).collect();
        let mut nd: Blocks = d.into_iter().filter(|((qq, pp), _)| *qq != q && *pp != p).collect();
        for (p2, delta) in &into_q {
            for (q2, gamma) in &out_of_p {
                let corr = gamma.compose(delta)?.scale(&inv);
                let key = (*q2, *p2);
                let v = match nd.remove(&key) {
                    Some(e) => e.sub(&corr)?,
                    None => corr.scale(&-Q::one()),
                };
                if !v.is_zero() {
                    nd.insert(key, v);
                }
            }
        }
        self.diffs[t] = reindex(nd, |_| true, |x| drop_pos(x, p), |x| drop_pos(x, q));
        if t > 0 {
            let d = std::mem::take(&mut self.diffs[t - 1]);
            self.diffs[t - 1] = reindex(d, |(qq, _)| qq != p, |x| x, |x| drop_pos(x, p));
        }
        if t + 1 < self.diffs.len() {
            let d = std::mem::take(&mut self.diffs[t + 1]);
            self.diffs[t + 1] = reindex(d, |(_, pp)| pp != q, |x| drop_pos(x, q), |x| x);
        }
        self.terms[t].remove(p);
        self.terms[t + 1].remove(q);
        Ok(())
    }
}

fn drop_pos(x: usize, gone: usize) -> usize {
    if x > gone {
        x - 1
    } else {
        x
    }
}

fn reindex(
    d: Blocks,
    keep: impl Fn((usize, usize)) -> bool,
    src: impl Fn(usize) -> usize,
    tgt: impl Fn(usize) -> usize,
) -> Blocks {
    d.into_iter()
        .filter(|(k, _)| keep(*k))
        .map(|((q, p), b)| ((tgt(q), src(p)), b))
        .collect()
}

/// Splits repeated letters and cancels `lambda * Id` components until
/// neither applies. The result is homotopy equivalent to the input.
pub fn simplify(c: &BimoduleComplex) -> Result<BimoduleComplex, RouquierError> {
    let mut parts = Parts::of(c)?;
    loop {
        parts.split_all()?;
        match parts.find_iso() {
            Some((t, p, q, l)) => parts.eliminate(t, p, q, &l)?,
            None => break,
        }
    }
    BimoduleComplex::new(parts.n, parts.lo, parts.terms, parts.diffs)
}
