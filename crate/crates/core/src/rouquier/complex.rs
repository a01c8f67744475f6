use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BraidWord, RouquierError};
use crate::polyalg::{
    matrix_from_json, matrix_to_json, EntryJson, GradedFreeModule, Poly, PolyMatrix, PolyRing,
};
use crate::soergel::{bott_samelson, Bimodule};

/// `BS(word)<shift>` inside a chain object.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Summand {
    pub word: Vec<usize>,
    pub shift: i64,
}

impl Summand {
    pub fn rank(&self) -> usize {
        1 << self.word.len()
    }

    pub fn bimodule(&self, n: usize) -> Result<Bimodule, RouquierError> {
        Ok(bott_samelson(&self.word, n)?.shifted(self.shift))
    }

    pub fn module(&self, n: usize) -> Result<GradedFreeModule, RouquierError> {
        Ok(bott_samelson(&self.word, n)?.module().shifted(&[self.shift, 0]))
    }
}

type Blocks = BTreeMap<(usize, usize), PolyMatrix>;

/// Bounded complex whose chain objects are formal sums of shifted
/// Bott–Samelson bimodules. `diffs[i]` maps `terms[i]` to `terms[i + 1]`,
/// stored blockwise as `(target, source) -> matrix`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimoduleComplex {
    n: usize,
    lo: i64,
    terms: Vec<Vec<Summand>>,
    diffs: Vec<Blocks>,
}

impl BimoduleComplex {
    pub fn new(n: usize, lo: i64, terms: Vec<Vec<Summand>>, diffs: Vec<Blocks>) -> Result<Self, RouquierError> {
        if diffs.len() + 1 != terms.len().max(1) {
            return Err(RouquierError::Malformed("one differential per adjacent pair of terms".into()));
        }
        let c = Self { n, lo, terms, diffs };
        c.check_blocks()?;
        Ok(c.trimmed())
    }

    /// The one-term complex `R` in degree 0.
    pub fn unit(n: usize) -> Self {
        Self { n, lo: 0, terms: vec![vec![Summand { word: Vec::new(), shift: 0 }]], diffs: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn term(&self, c: i64) -> &[Summand] {
        let i = c - self.lo;
        if i < 0 || i as usize >= self.terms.len() {
            return &[];
        }
        &self.terms[i as usize]
    }

    pub fn terms(&self) -> &[Vec<Summand>] {
        &self.terms
    }

    /// Blocks of the differential leaving degree `c`.
    pub fn diff(&self, c: i64) -> Option<&Blocks> {
        let i = c - self.lo;
        if i < 0 {
            return None;
        }
        self.diffs.get(i as usize)
    }

    /// Total left rank in each degree.
    pub fn ranks(&self) -> Vec<(i64, usize)> {
        self.terms
            .iter()
            .enumerate()
            .map(|(i, t)| (self.lo + i as i64, t.iter().map(Summand::rank).sum()))
            .collect()
    }

    pub fn total_rank(&self) -> usize {
        self.ranks().iter().map(|r| r.1).sum()
    }

    /// Applies `<k>` to every summand and `[m]` to the chain degrees.
    pub fn shifted(&self, k: i64, m: i64) -> Result<Self, RouquierError> {
        let terms: Vec<Vec<Summand>> = self
            .terms
            .iter()
            .map(|t| t.iter().map(|s| Summand { word: s.word.clone(), shift: s.shift + k }).collect())
            .collect();
        let mut diffs = Vec::new();
        for (i, d) in self.diffs.iter().enumerate() {
            let mut nd = Blocks::new();
            for ((q, p), b) in d {
                let src = terms[i][*p].module(self.n)?;
                let tgt = terms[i + 1][*q].module(self.n)?;
                nd.insert((*q, *p), b.retarget(&src, &tgt)?);
            }
            diffs.push(nd);
        }
        Ok(Self { n: self.n, lo: self.lo - m, terms, diffs })
    }

    fn check_blocks(&self) -> Result<(), RouquierError> {
        for (i, d) in self.diffs.iter().enumerate() {
            for ((q, p), b) in d {
                let (Some(s), Some(t)) = (self.terms[i].get(*p), self.terms[i + 1].get(*q)) else {
                    return Err(RouquierError::Malformed(format!("block ({q},{p}) out of range")));
                };
                if b.src() != &s.module(self.n)? || b.tgt() != &t.module(self.n)? {
                    return Err(RouquierError::Malformed(format!("block ({q},{p}) has wrong modules")));
                }
                if b.degree() != [0, 0] && !b.is_zero() {
                    return Err(RouquierError::Malformed(format!("block ({q},{p}) is not of degree 0")));
                }
            }
        }
        Ok(())
    }

    /// `d o d = 0`, blockwise and symbolically.
    pub fn check_d_squared(&self) -> Result<bool, RouquierError> {
        for i in 0..self.diffs.len().saturating_sub(1) {
            let mut acc: BTreeMap<(usize, usize), PolyMatrix> = BTreeMap::new();
            for ((q, p), a) in &self.diffs[i] {
                for ((r, q2), b) in &self.diffs[i + 1] {
                    if q2 != q {
                        continue;
                    }
                    let prod = b.compose(a)?;
                    match acc.get_mut(&(*r, *p)) {
                        Some(x) => *x = x.add(&prod)?,
                        None => {
                            acc.insert((*r, *p), prod);
                        }
                    }
                }
            }
            if acc.values().any(|m| !m.is_zero()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks every block against the right actions of its end points.
    pub fn check_bimodule_maps(&self) -> Result<bool, RouquierError> {
        for (i, d) in self.diffs.iter().enumerate() {
            for ((q, p), b) in d {
                let src = self.terms[i][*p].bimodule(self.n)?;
                let tgt = self.terms[i + 1][*q].bimodule(self.n)?;
                for j in 0..self.n {
                    if b.compose(&src.rho()[j])?.entries() != tgt.rho()[j].compose(b)?.entries() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// The chain object in degree `c` as one bimodule (summands stacked in
    /// order) together with the offset of each summand.
    pub fn flat_term(&self, c: i64) -> Result<(Bimodule, Vec<usize>), RouquierError> {
        let t = self.term(c);
        let mut gens = Vec::new();
        let mut offsets = Vec::new();
        let mut blocks = Vec::new();
        for s in t {
            offsets.push(gens.len());
            let b = s.bimodule(self.n)?;
            gens.extend(b.gen_degrees());
            blocks.push(b);
        }
        let ring = PolyRing::x_ring(self.n);
        let module = GradedFreeModule::new(&ring, gens.iter().map(|g| vec![*g, 0]).collect())?;
        let mut rho = Vec::new();
        for j in 0..self.n {
            let mut m = PolyMatrix::zero(&module, &module, vec![2, 0]);
            for (b, off) in blocks.iter().zip(&offsets) {
                let r = &b.rho()[j];
                for a in 0..b.rank() {
                    for c2 in 0..b.rank() {
                        let e = r.get(a, c2);
                        if !e.is_zero() {
                            m.set(off + a, off + c2, e.clone());
                        }
                    }
                }
            }
            rho.push(m);
        }
        Ok((Bimodule::from_parts(self.n, gens, rho)?, offsets))
    }

    /// The differential out of degree `c` between flattened chain objects.
    pub fn flat_diff(&self, c: i64) -> Result<PolyMatrix, RouquierError> {
        let (src, so) = self.flat_term(c)?;
        let (tgt, to) = self.flat_term(c + 1)?;
        let mut m = PolyMatrix::zero(src.module(), tgt.module(), vec![0, 0]);
        if let Some(d) = self.diff(c) {
            for ((q, p), b) in d {
                for a in 0..b.rows() {
                    for k in 0..b.cols() {
                        let e = b.get(a, k);
                        if !e.is_zero() {
                            m.set(to[*q] + a, so[*p] + k, e.clone());
                        }
                    }
                }
            }
        }
        Ok(m)
    }

    fn trimmed(mut self) -> Self {
        while self.terms.len() > 1 && self.terms.last().is_some_and(Vec::is_empty) {
            self.terms.pop();
            self.diffs.pop();
        }
        while self.terms.len() > 1 && self.terms[0].is_empty() {
            self.terms.remove(0);
            self.diffs.remove(0);
            self.lo += 1;
        }
        self
    }

    pub fn to_json(&self) -> BimoduleComplexJson {
        BimoduleComplexJson {
            n: self.n,
            lo: self.lo,
            terms: self.terms.clone(),
            diffs: self
                .diffs
                .iter()
                .map(|d| {
                    d.iter()
                        .map(|((q, p), b)| BlockJson { target: *q, source: *p, entries: matrix_to_json(b) })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_json(j: &BimoduleComplexJson) -> Result<Self, RouquierError> {
        let mut diffs = Vec::new();
        for (i, d) in j.diffs.iter().enumerate() {
            let mut blocks = Blocks::new();
            for b in d {
                let (Some(s), Some(t)) = (
                    j.terms.get(i).and_then(|t| t.get(b.source)),
                    j.terms.get(i + 1).and_then(|t| t.get(b.target)),
                ) else {
                    return Err(RouquierError::Malformed("block index out of range".into()));
                };
                let m = matrix_from_json(&b.entries, &s.module(j.n)?, &t.module(j.n)?, vec![0, 0])?;
                blocks.insert((b.target, b.source), m);
            }
            diffs.push(blocks);
        }
        Self::new(j.n, j.lo, j.terms.clone(), diffs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockJson {
    pub target: usize,
    pub source: usize,
    pub entries: Vec<EntryJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BimoduleComplexJson {
    pub n: usize,
    pub lo: i64,
    pub terms: Vec<Vec<Summand>>,
    pub diffs: Vec<Vec<BlockJson>>,
}

/// `sigma_i`: `B_i -> R<-1>` in degrees 0, 1 (multiplication).
/// `sigma_i^-1`: `R<1> -> B_i` in degrees -1, 0 (`1 -> x_{i+1} e - f`).
pub fn crossing_complex(i: usize, positive: bool, n: usize) -> Result<BimoduleComplex, RouquierError> {
    if i == 0 || i >= n {
        return Err(RouquierError::BadLetter { pos: 0, letter: i as i32, n });
    }
    let b = Summand { word: vec![i], shift: 0 };
    let bm = b.module(n)?;
    let mut blocks = Blocks::new();
    if positive {
        let r = Summand { word: Vec::new(), shift: -1 };
        let rm = r.module(n)?;
        let m = PolyMatrix::new(&bm, &rm, vec![0, 0], vec![Poly::one(n), Poly::var(n, i - 1)])?;
        blocks.insert((0, 0), m);
        BimoduleComplex::new(n, 0, vec![vec![b], vec![r]], vec![blocks])
    } else {
        let r = Summand { word: Vec::new(), shift: 1 };
        let rm = r.module(n)?;
        let m = PolyMatrix::new(&rm, &bm, vec![0, 0], vec![Poly::var(n, i), Poly::integer(n, -1)])?;
        blocks.insert((0, 0), m);
        BimoduleComplex::new(n, -1, vec![vec![r], vec![b]], vec![blocks])
    }
}

/// Places the entries of `f (x) id_N` into a block: `f` repeated along the
/// diagonal, once per basis vector of the right factor.
fn tensor_left_map(f: &PolyMatrix, right_rank: usize, src: &GradedFreeModule, tgt: &GradedFreeModule) -> PolyMatrix {
    let (ra, rs) = (f.rows(), f.cols());
    let mut m = PolyMatrix::zero(src, tgt, vec![0, 0]);
    for l in 0..right_rank {
        for a in 0..ra {
            for b in 0..rs {
                let e = f.get(a, b);
                if !e.is_zero() {
                    m.set(l * ra + a, l * rs + b, e.clone());
                }
            }
        }
    }
    m
}

/// `id_M (x) g`: block `(l', l)` is `g[l', l]` evaluated at `rho^M`.
fn tensor_right_map(
    left: &Bimodule,
    g: &PolyMatrix,
    sign: bool,
    src: &GradedFreeModule,
    tgt: &GradedFreeModule,
) -> Result<PolyMatrix, RouquierError> {
    let r = left.rank();
    let mut m = PolyMatrix::zero(src, tgt, vec![0, 0]);
    for lp in 0..g.rows() {
        for l in 0..g.cols() {
            let p = g.get(lp, l);
            if p.is_zero() {
                continue;
            }
            let p = if sign { -p } else { p.clone() };
            let block = left.right_action(&p)?;
            for a in 0..r {
                for b in 0..r {
                    let e = block.get(a, b);
                    if !e.is_zero() {
                        m.set(lp * r + a, l * r + b, e.clone());
                    }
                }
            }
        }
    }
    Ok(m)
}

/// Total complex of `C (x)_R D` with `d = d_C (x) 1 + (-1)^c 1 (x) d_D`.
/// Summands of a term are ordered by the degree of the `C` factor, then by
/// position in `C`, then in `D`.
pub fn complex_tensor(c: &BimoduleComplex, d: &BimoduleComplex) -> Result<BimoduleComplex, RouquierError> {
    if c.n != d.n {
        return Err(RouquierError::StrandMismatch(c.n, d.n));
    }
    let n = c.n;
    let lo = c.lo + d.lo;
    let hi = c.hi() + d.hi();
    // index[(i, j, p, q)] = position in the total term
    let mut terms: Vec<Vec<Summand>> = vec![Vec::new(); (hi - lo + 1) as usize];
    let mut index: BTreeMap<(i64, i64, usize, usize), usize> = BTreeMap::new();
    for ci in c.lo..=c.hi() {
        for dj in d.lo..=d.hi() {
            let t = &mut terms[(ci + dj - lo) as usize];
            for (p, a) in c.term(ci).iter().enumerate() {
                for (q, b) in d.term(dj).iter().enumerate() {
                    index.insert((ci, dj, p, q), t.len());
                    t.push(Summand {
                        word: a.word.iter().chain(&b.word).copied().collect(),
                        shift: a.shift + b.shift,
                    });
                }
            }
        }
    }
    let mut diffs: Vec<Blocks> = vec![Blocks::new(); terms.len().saturating_sub(1)];
    let module_of = |s: &Summand| s.module(n);
    for (&(ci, dj, p, q), &src_pos) in &index {
        let k = (ci + dj - lo) as usize;
        let s = &terms[k][src_pos];
        let src = module_of(s)?;
        let a = &c.term(ci)[p];
        let b = &d.term(dj)[q];
        if let Some(dc) = c.diff(ci) {
            for ((p2, p1), f) in dc {
                if *p1 != p {
                    continue;
                }
                let tpos = index[&(ci + 1, dj, *p2, q)];
                let tgt = module_of(&terms[k + 1][tpos])?;
                let m = tensor_left_map(f, b.rank(), &src, &tgt);
                add_block(&mut diffs[k], tpos, src_pos, m)?;
            }
        }
        if let Some(dd) = d.diff(dj) {
            let am = a.bimodule(n)?;
            for ((q2, q1), g) in dd {
                if *q1 != q {
                    continue;
                }
                let tpos = index[&(ci, dj + 1, p, *q2)];
                let tgt = module_of(&terms[k + 1][tpos])?;
                let m = tensor_right_map(&am, g, ci.rem_euclid(2) == 1, &src, &tgt)?;
                add_block(&mut diffs[k], tpos, src_pos, m)?;
            }
        }
    }
    BimoduleComplex::new(n, lo, terms, diffs)
}

fn add_block(blocks: &mut Blocks, q: usize, p: usize, m: PolyMatrix) -> Result<(), RouquierError> {
    if m.is_zero() {
        return Ok(());
    }
    match blocks.get_mut(&(q, p)) {
        Some(x) => {
            *x = x.add(&m)?;
            if x.is_zero() {
                blocks.remove(&(q, p));
            }
        }
        None => {
            blocks.insert((q, p), m);
        }
    }
    Ok(())
}

/// Tensor product of the crossing complexes, left to right.
pub fn rouquier_complex(b: &BraidWord) -> Result<BimoduleComplex, RouquierError> {
    let mut acc = BimoduleComplex::unit(b.n());
    for &l in b.letters() {
        let x = crossing_complex(l.unsigned_abs() as usize, l > 0, b.n())?;
        acc = complex_tensor(&acc, &x)?;
    }
    Ok(acc)
}

/// Same homotopy type, simplifying after every crossing.
pub fn rouquier_complex_simplified(b: &BraidWord) -> Result<BimoduleComplex, RouquierError> {
    let mut acc = BimoduleComplex::unit(b.n());
    for &l in b.letters() {
        let x = crossing_complex(l.unsigned_abs() as usize, l > 0, b.n())?;
        acc = super::simplify(&complex_tensor(&acc, &x)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossings_are_complexes_of_bimodule_maps() {
        for pos in [true, false] {
            let c = crossing_complex(1, pos, 2).unwrap();
            assert!(c.check_d_squared().unwrap());
            assert!(c.check_bimodule_maps().unwrap());
            assert_eq!(c.terms().len(), 2);
        }
        assert!(crossing_complex(2, true, 2).is_err());
    }

    #[test]
    fn unit_laws() {
        let x = crossing_complex(1, true, 2).unwrap();
        let u = BimoduleComplex::unit(2);
        assert_eq!(complex_tensor(&u, &x).unwrap(), x);
        assert_eq!(complex_tensor(&x, &u).unwrap(), x);
    }

    #[test]
    fn braid_relation_word_is_a_complex() {
        let b = BraidWord::new(3, vec![1, 2, 1]).unwrap();
        let c = rouquier_complex(&b).unwrap();
        assert!(c.check_d_squared().unwrap());
        assert!(c.check_bimodule_maps().unwrap());
        assert_eq!(c.total_rank(), 27);
    }

    #[test]
    fn ranks_of_cube_are_binomial() {
        let c = rouquier_complex(&BraidWord::new(2, vec![1, 1, 1]).unwrap()).unwrap();
        let counts: Vec<usize> = c.terms().iter().map(Vec::len).collect();
        assert_eq!(counts, vec![1, 3, 3, 1]);
        let ranks: Vec<usize> = c.ranks().iter().map(|r| r.1).collect();
        assert_eq!(ranks, vec![8, 12, 6, 1]);
        assert!(c.check_d_squared().unwrap());
    }

    #[test]
    fn mixed_signs_square_to_zero() {
        let c = rouquier_complex(&BraidWord::new(3, vec![-1, 2, -1]).unwrap()).unwrap();
        assert_eq!((c.lo(), c.hi()), (-2, 1));
        assert!(c.check_d_squared().unwrap());
    }

    #[test]
    fn json_round_trip() {
        let c = rouquier_complex(&BraidWord::new(2, vec![1, -1]).unwrap()).unwrap();
        let j = serde_json::to_string(&c.to_json()).unwrap();
        assert_eq!(BimoduleComplex::from_json(&serde_json::from_str(&j).unwrap()).unwrap(), c);
    }
}
