//! Bott–Samelson bimodules as free left modules over `R = Q[x_1..x_n]` with
//! right multiplication by each `x_j` recorded as a matrix.
//!
//! For `m` in the basis, `m * x_j = rho_j m` (column convention). A tensor
//! product `M (x)_R N` has basis `m_k (x) n_l` at index `l * rank(M) + k`, so
//! building `BS(w)` by a left fold gives `BS(u) (x) BS(v) = BS(uv)` on the nose.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyalg::{
    elem_sym, eval_at, matrix_from_json, matrix_to_json, EntryJson, GradedFreeModule, Poly,
    PolyError, PolyMatrix, PolyRing,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SoergelError {
    #[error("generator s_{0} out of range for {1} strands")]
    IndexOutOfRange(usize, usize),
    #[error("strand mismatch: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("not a bimodule map: {0}")]
    NotBimoduleMap(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A free left `R`-module with commuting right-action operators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bimodule {
    n: usize,
    module: GradedFreeModule,
    rho: Vec<PolyMatrix>,
    word: Option<Vec<usize>>,
    shift: i64,
}

fn x_deg(x: i64) -> Vec<i64> {
    vec![x, 0]
}

impl Bimodule {
    /// Assembles a bimodule from raw parts. Shapes and degrees are checked;
    /// the module relations are left to [`check_bimodule`].
    pub fn from_parts(n: usize, gens: Vec<i64>, rho: Vec<PolyMatrix>) -> Result<Self, SoergelError> {
        let ring = PolyRing::x_ring(n);
        let module = GradedFreeModule::new(&ring, gens.into_iter().map(x_deg).collect())?;
        if rho.len() != n {
            return Err(PolyError::Shape(format!("{} right operators for {n} strands", rho.len())).into());
        }
        let rho = rho
            .into_iter()
            .map(|r| PolyMatrix::new(&module, &module, x_deg(2), r.entries().to_vec()))
            .collect::<Result<_, _>>()?;
        Ok(Self { n, module, rho, word: None, shift: 0 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn module(&self) -> &GradedFreeModule {
        &self.module
    }

    pub fn rho(&self) -> &[PolyMatrix] {
        &self.rho
    }

    /// Internal degrees of the left generators.
    pub fn gen_degrees(&self) -> Vec<i64> {
        self.module.gens().iter().map(|g| g[0]).collect()
    }

    pub fn word(&self) -> Option<&[usize]> {
        self.word.as_deref()
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// The grading shift `<k>`: every generator moves up by `k`.
    pub fn shifted(&self, k: i64) -> Self {
        let module = self.module.shifted(&x_deg(k));
        let rho = self
            .rho
            .iter()
            .map(|r| PolyMatrix::new_unchecked(&module, &module, x_deg(2), r.entries().to_vec()).expect("shape"))
            .collect();
        Self { n: self.n, module, rho, word: self.word.clone(), shift: self.shift + k }
    }

    /// `f(rho_1..rho_n)`: right multiplication by a polynomial.
    pub fn right_action(&self, f: &Poly) -> Result<PolyMatrix, SoergelError> {
        Ok(eval_at(f, &self.rho, &self.module)?)
    }

    pub fn to_json(&self) -> BimoduleJson {
        BimoduleJson {
            n: self.n,
            word: self.word.clone(),
            shift: self.shift,
            generators: self.gen_degrees(),
            rho: self.rho.iter().map(matrix_to_json).collect(),
        }
    }

    pub fn from_json(j: &BimoduleJson) -> Result<Self, SoergelError> {
        let ring = PolyRing::x_ring(j.n);
        let module = GradedFreeModule::new(&ring, j.generators.iter().map(|g| x_deg(*g)).collect())?;
        let rho = j
            .rho
            .iter()
            .map(|e| matrix_from_json(e, &module, &module, x_deg(2)))
            .collect::<Result<Vec<_>, _>>()?;
        let mut b = Self::from_parts(j.n, j.generators.clone(), rho)?;
        b.word = j.word.clone();
        b.shift = j.shift;
        Ok(b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BimoduleJson {
    pub n: usize,
    pub word: Option<Vec<usize>>,
    pub shift: i64,
    pub generators: Vec<i64>,
    pub rho: Vec<Vec<EntryJson>>,
}

/// The monoidal unit `R`: rank one, `rho_i = x_i`.
pub fn regular_bimodule(n: usize) -> Bimodule {
    let ring = PolyRing::x_ring(n);
    let module = GradedFreeModule::new(&ring, vec![x_deg(0)]).expect("rank one");
    let rho = (0..n).map(|i| PolyMatrix::scalar(&module, &Poly::var(n, i), x_deg(2))).collect();
    Bimodule { n, module, rho, word: Some(Vec::new()), shift: 0 }
}

/// `B_{s_i} = R (x)_{R^s} R <1>` on the basis `e = 1 (x) 1` (degree -1),
/// `f = 1 (x) x_i` (degree +1). `i` is 1-based.
pub fn bs_generator(i: usize, n: usize) -> Result<Bimodule, SoergelError> {
    if i == 0 || i >= n {
        return Err(SoergelError::IndexOutOfRange(i, n));
    }
    let ring = PolyRing::x_ring(n);
    let module = GradedFreeModule::new(&ring, vec![x_deg(-1), x_deg(1)])?;
    let (a, b) = (Poly::var(n, i - 1), Poly::var(n, i));
    let sum = &a + &b;
    let prod = &a * &b;
    let mut ri = PolyMatrix::zero(&module, &module, x_deg(2));
    ri.set(0, 1, -&prod);
    ri.set(1, 0, Poly::one(n));
    ri.set(1, 1, sum.clone());
    let rj = PolyMatrix::scalar(&module, &sum, x_deg(2)).sub(&ri)?;
    let rho = (0..n)
        .map(|j| {
            if j == i - 1 {
                Ok(ri.clone())
            } else if j == i {
                Ok(rj.clone())
            } else {
                Ok(PolyMatrix::scalar(&module, &Poly::var(n, j), x_deg(2)))
            }
        })
        .collect::<Result<_, PolyError>>()?;
    Ok(Bimodule { n, module, rho, word: Some(vec![i]), shift: 0 })
}

/// `M (x)_R N`. Block `(l', l)` of the new `rho_j` is `rho^N_j[l', l]`
/// evaluated at the matrices `rho^M`.
pub fn tensor(m: &Bimodule, nn: &Bimodule) -> Result<Bimodule, SoergelError> {
    if m.n != nn.n {
        return Err(SoergelError::StrandMismatch(m.n, nn.n));
    }
    let n = m.n;
    let (rm, rn) = (m.rank(), nn.rank());
    let gm = m.gen_degrees();
    let gn = nn.gen_degrees();
    let mut gens = Vec::with_capacity(rm * rn);
    for b in &gn {
        for a in &gm {
            gens.push(x_deg(a + b));
        }
    }
    let module = GradedFreeModule::new(m.module.ring(), gens)?;
    let mut cache: HashMap<Poly, PolyMatrix> = HashMap::new();
    let mut rho = Vec::with_capacity(n);
    for j in 0..n {
        let mut big = PolyMatrix::zero(&module, &module, x_deg(2));
        for lp in 0..rn {
            for l in 0..rn {
                let p = nn.rho[j].get(lp, l);
                if p.is_zero() {
                    continue;
                }
                if !cache.contains_key(p) {
                    cache.insert(p.clone(), m.right_action(p)?);
                }
                let block = &cache[p];
                for a in 0..rm {
                    for b in 0..rm {
                        let e = block.get(a, b);
                        if !e.is_zero() {
                            big.set(lp * rm + a, l * rm + b, e.clone());
                        }
                    }
                }
            }
        }
        rho.push(big);
    }
    let word = match (&m.word, &nn.word) {
        (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
        _ => None,
    };
    Ok(Bimodule { n, module, rho, word, shift: m.shift + nn.shift })
}

type BsCache = HashMap<(Vec<usize>, usize), Arc<Bimodule>>;

/// `B_{w_1} (x) ... (x) B_{w_k}`, shared through a process-wide cache.
pub fn bott_samelson(word: &[usize], n: usize) -> Result<Arc<Bimodule>, SoergelError> {
    static CACHE: OnceLock<Mutex<BsCache>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.lock().expect("bs cache").get(&(word.to_vec(), n)) {
        return Ok(b.clone());
    }
    let b = match word.split_last() {
        None => regular_bimodule(n),
        Some((last, rest)) => tensor(bott_samelson(rest, n)?.as_ref(), &bs_generator(*last, n)?)?,
    };
    let b = Arc::new(b);
    cache.lock().expect("bs cache").insert((word.to_vec(), n), b.clone());
    Ok(b)
}

/// Outcome of [`check_bimodule`]; `failures` names the first witness of
/// each broken relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BimoduleReport {
    pub ok: bool,
    pub failures: Vec<String>,
}

/// Checks that the `rho_j` commute and that symmetric polynomials act the
/// same way from both sides.
pub fn check_bimodule(m: &Bimodule) -> BimoduleReport {
    let mut failures = Vec::new();
    let n = m.n;
    for i in 0..n {
        for j in i + 1..n {
            let ok = match (m.rho[i].compose(&m.rho[j]), m.rho[j].compose(&m.rho[i])) {
                (Ok(a), Ok(b)) => a == b,
                _ => false,
            };
            if !ok {
                failures.push(format!("rho_{} and rho_{} do not commute", i + 1, j + 1));
            }
        }
    }
    for h in &m.rho {
        if let Err(e) = h.check_homogeneous() {
            failures.push(e.to_string());
        }
    }
    for k in 1..=n {
        match left_right_e(m, k) {
            Ok((l, r)) if l == r => {}
            Ok(_) => failures.push(format!("e_{k} acts differently on the left and on the right")),
            Err(e) => failures.push(e.to_string()),
        }
    }
    BimoduleReport { ok: failures.is_empty(), failures }
}

/// The chain-level matrices of left and right multiplication by `e_k`.
pub fn left_right_e(m: &Bimodule, k: usize) -> Result<(PolyMatrix, PolyMatrix), SoergelError> {
    let e = elem_sym(k, m.n)?;
    let left = PolyMatrix::scalar(&m.module, &e, x_deg(2 * k as i64));
    let mut right = m.right_action(&e)?;
    if right.is_zero() {
        right = PolyMatrix::zero(&m.module, &m.module, x_deg(2 * k as i64));
    }
    let right = PolyMatrix::new_unchecked(&m.module, &m.module, x_deg(2 * k as i64), right.entries().to_vec())?;
    Ok((left, right))
}

/// A left-linear map commuting with the right action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimoduleMap {
    matrix: PolyMatrix,
}

impl BimoduleMap {
    pub fn new(src: &Bimodule, tgt: &Bimodule, matrix: PolyMatrix) -> Result<Self, SoergelError> {
        if src.n != tgt.n {
            return Err(SoergelError::StrandMismatch(src.n, tgt.n));
        }
        let matrix = PolyMatrix::new(src.module(), tgt.module(), matrix.degree().to_vec(), matrix.entries().to_vec())?;
        for j in 0..src.n {
            let a = matrix.compose(&src.rho[j])?;
            let b = tgt.rho[j].compose(&matrix)?;
            if a.entries() != b.entries() {
                return Err(SoergelError::NotBimoduleMap(format!("fails to commute with x_{}", j + 1)));
            }
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }
}

/// Graded left rank as a map from degree to multiplicity.
pub fn graded_rank(m: &Bimodule) -> std::collections::BTreeMap<i64, usize> {
    let mut out = std::collections::BTreeMap::new();
    for g in m.gen_degrees() {
        *out.entry(g).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_is_rank_one() {
        let r = regular_bimodule(1);
        assert_eq!(r.rank(), 1);
        assert_eq!(r.rho()[0].get(0, 0), &Poly::var(1, 0));
        assert!(check_bimodule(&r).ok);
    }

    #[test]
    fn generator_minimal_polynomial() {
        let b = bs_generator(1, 2).unwrap();
        let r = &b.rho()[0];
        let (x1, x2) = (Poly::var(2, 0), Poly::var(2, 1));
        let sq = r.compose(r).unwrap();
        let lin = PolyMatrix::scalar(b.module(), &(&x1 + &x2), vec![2, 0]).compose(r).unwrap();
        let cst = PolyMatrix::scalar(b.module(), &(&x1 * &x2), vec![4, 0]);
        assert!(sq.sub(&lin).unwrap().add(&cst).unwrap().is_zero());
        assert!(check_bimodule(&b).ok);
        assert_eq!(graded_rank(&b), [(-1, 1), (1, 1)].into_iter().collect());
    }

    #[test]
    fn out_of_range_generator() {
        assert_eq!(bs_generator(2, 2), Err(SoergelError::IndexOutOfRange(2, 2)));
        assert_eq!(bs_generator(0, 3), Err(SoergelError::IndexOutOfRange(0, 3)));
    }

    #[test]
    fn unit_laws() {
        let b = bs_generator(1, 2).unwrap();
        let r = regular_bimodule(2);
        let lb = tensor(&r, &b).unwrap();
        let rb = tensor(&b, &r).unwrap();
        assert_eq!(lb.rho(), b.rho());
        assert_eq!(rb.rho(), b.rho());
    }

    #[test]
    fn square_of_generator() {
        let b = bs_generator(1, 2).unwrap();
        let bb = tensor(&b, &b).unwrap();
        assert_eq!(bb.rank(), 4);
        assert_eq!(graded_rank(&bb), [(-2, 1), (0, 2), (2, 1)].into_iter().collect());
        assert!(check_bimodule(&bb).ok);
    }

    #[test]
    fn associativity_on_three_strands() {
        let s = bs_generator(1, 3).unwrap();
        let t = bs_generator(2, 3).unwrap();
        let a = tensor(&tensor(&s, &t).unwrap(), &s).unwrap();
        let b = tensor(&s, &tensor(&t, &s).unwrap()).unwrap();
        assert_eq!(a.rho(), b.rho());
        assert_eq!(a.gen_degrees(), b.gen_degrees());
    }

    #[test]
    fn broken_commutator_is_caught() {
        let b = bs_generator(1, 3).unwrap();
        let mut rho = b.rho().to_vec();
        rho[2].set(1, 0, Poly::one(3));
        let bad = Bimodule::from_parts(3, b.gen_degrees(), rho).unwrap();
        let rep = check_bimodule(&bad);
        assert!(!rep.ok);
        assert!(rep.failures.iter().any(|f| f.contains("commute")));
    }

    #[test]
    fn json_round_trip() {
        let b = bott_samelson(&[1, 2, 1], 3).unwrap();
        let j = serde_json::to_string(&b.to_json()).unwrap();
        let back = Bimodule::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(&back, b.as_ref());
    }

    #[test]
    fn bimodule_map_check() {
        let b = bs_generator(1, 2).unwrap();
        let r = regular_bimodule(2).shifted(-1);
        let mut m = PolyMatrix::zero(b.module(), r.module(), vec![0, 0]);
        m.set(0, 0, Poly::one(2));
        m.set(0, 1, Poly::var(2, 0));
        assert!(BimoduleMap::new(&b, &r, m.clone()).is_ok());
        m.set(0, 1, Poly::var(2, 1));
        assert!(BimoduleMap::new(&b, &r, m).is_err());
    }
}
