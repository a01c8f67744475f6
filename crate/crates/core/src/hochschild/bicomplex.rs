//! The Koszul bicomplex of a Rouquier complex and its iterated homology
//! `H(HH(C))`, degreewise over `Q`.

use crate::polyalg::{kernel_q, rank_q, linalg::SparseVec, GradedFreeModule, PolyMatrix, SliceBasis, Q};
use crate::rouquier::{BimoduleComplex, RouquierError};
use crate::soergel::Bimodule;

use super::koszul::{koszul_differential, wedge_map, wedge_module};

struct Column {
    bimodule: Bimodule,
    /// `K_a` for `a = 0..=n`
    wedge: Vec<GradedFreeModule>,
    /// `dk[a]: K_a -> K_{a-1}` (zero for `a = 0`)
    dk: Vec<PolyMatrix>,
}

/// `K_a(c) = C^c (x) wedge^a` with the Koszul differential lowering `a` and
/// the Rouquier differential raising `c`.
pub struct KoszulBicomplex {
    n: usize,
    lo: i64,
    columns: Vec<Column>,
    /// `dr[i][a]: K_a(lo + i) -> K_a(lo + i + 1)`
    dr: Vec<Vec<PolyMatrix>>,
}

impl KoszulBicomplex {
    pub fn new(c: &BimoduleComplex) -> Result<Self, RouquierError> {
        let n = c.n();
        let mut columns = Vec::new();
        for k in c.lo()..=c.hi() {
            let (m, _) = c.flat_term(k)?;
            let wedge = (0..=n).map(|a| wedge_module(&m, a)).collect();
            let dk = (0..=n).map(|a| koszul_differential(&m, a)).collect();
            columns.push(Column { bimodule: m, wedge, dk });
        }
        let mut dr = Vec::new();
        for (i, k) in (c.lo()..c.hi()).enumerate() {
            let d = c.flat_diff(k)?;
            let (m, nn) = (&columns[i].bimodule, &columns[i + 1].bimodule);
            dr.push((0..=n).map(|a| wedge_map(&d, m, nn, a)).collect());
        }
        Ok(Self { n, lo: c.lo(), columns, dr })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.columns.len() as i64 - 1
    }

    fn column(&self, c: i64) -> Option<&Column> {
        let i = c - self.lo;
        (i >= 0).then(|| self.columns.get(i as usize)).flatten()
    }

    /// Smallest internal degree of any generator.
    pub fn min_degree(&self) -> i64 {
        self.columns
            .iter()
            .flat_map(|col| col.wedge[0].gens().iter().map(|g| g[0]))
            .min()
            .unwrap_or(0)
    }

    pub fn module(&self, a: i64, c: i64) -> Option<&GradedFreeModule> {
        if a < 0 || a as usize > self.n {
            return None;
        }
        self.column(c).map(|col| &col.wedge[a as usize])
    }

    pub fn slice(&self, a: i64, c: i64, x: i64) -> SliceBasis {
        match self.module(a, c) {
            Some(m) => m.slice(&[x, 0]),
            None => SliceBasis::new(Vec::new()),
        }
    }

    /// Columns of `d_K: K_a(c)_x -> K_{a-1}(c)_x`, entries shifted by `offset`.
    fn dk_cols(&self, a: i64, c: i64, x: i64, offset: usize) -> Vec<SparseVec<Q>> {
        let src = self.slice(a, c, x);
        match (self.column(c), a >= 1 && a as usize <= self.n) {
            (Some(col), true) => col.dk[a as usize].slice_columns(&src, &self.slice(a - 1, c, x), offset),
            _ => vec![Vec::new(); src.len()],
        }
    }

    /// Columns of `d_R: K_a(c)_x -> K_a(c+1)_x`.
    fn dr_cols(&self, a: i64, c: i64, x: i64, offset: usize) -> Vec<SparseVec<Q>> {
        let src = self.slice(a, c, x);
        match self.dr_map(a, c) {
            Some(d) => d.slice_columns(&src, &self.slice(a, c + 1, x), offset),
            None => vec![Vec::new(); src.len()],
        }
    }

    fn dr_map(&self, a: i64, c: i64) -> Option<&PolyMatrix> {
        if a < 0 || a as usize > self.n || c < self.lo || c >= self.hi() {
            return None;
        }
        Some(&self.dr[(c - self.lo) as usize][a as usize])
    }

    fn dk_kernel(&self, a: i64, c: i64, x: i64) -> Vec<SparseVec<Q>> {
        kernel_q(&self.dk_cols(a, c, x, 0))
    }

    /// Block columns of `Phi(z, w) = (d_K z, d_R z - d_K w)` with
    /// `z in K_a(c)`, `w in K_{a+1}(c+1)`.
    fn phi(&self, a: i64, c: i64, x: i64) -> (Vec<SparseVec<Q>>, usize) {
        let off = self.slice(a - 1, c, x).len();
        let mut cols: Vec<SparseVec<Q>> = self
            .dk_cols(a, c, x, 0)
            .into_iter()
            .zip(self.dr_cols(a, c, x, off))
            .map(|(mut u, v)| {
                u.extend(v);
                u
            })
            .collect();
        let nz = cols.len();
        cols.extend(self.dk_cols(a + 1, c + 1, x, off));
        (cols, nz)
    }

    /// `dim Z~`: cycles of `HH_a(C^c)` for the induced differential.
    fn dim_cycles(&self, a: i64, c: i64, x: i64) -> usize {
        let (phi, _) = self.phi(a, c, x);
        let ker_phi = phi.len() - rank_q(&phi);
        let w = self.dk_cols(a + 1, c + 1, x, 0);
        ker_phi - (w.len() - rank_q(&w))
    }

    /// Spanning vectors in `K_a(c)_x` of `im d_K + d_R(ker d_K)`.
    pub fn boundaries(&self, a: i64, c: i64, x: i64) -> Vec<SparseVec<Q>> {
        let mut out = self.dk_cols(a + 1, c, x, 0);
        if let Some(d) = self.dr_map(a, c - 1) {
            let src = self.slice(a, c - 1, x);
            let tgt = self.slice(a, c, x);
            for v in self.dk_kernel(a, c - 1, x) {
                out.push(d.apply_slice(&v, &src, &tgt));
            }
        }
        out
    }

    /// Representatives in `K_a(c)_x` spanning `Z~`, the lifts of classes
    /// in `HH_a(C^c)` killed by the induced differential.
    pub fn cycles(&self, a: i64, c: i64, x: i64) -> Vec<SparseVec<Q>> {
        let (phi, nz) = self.phi(a, c, x);
        kernel_q(&phi)
            .into_iter()
            .map(|v| v.into_iter().filter(|(i, _)| *i < nz).collect::<Vec<_>>())
            .filter(|v| !v.is_empty())
            .collect()
    }

    /// `dim H^c(HH_a(C))` in internal degree `x`.
    pub fn homology_dim(&self, a: i64, c: i64, x: i64) -> u64 {
        if self.slice(a, c, x).is_empty() {
            return 0;
        }
        let z = self.dim_cycles(a, c, x);
        let b = rank_q(&self.boundaries(a, c, x));
        (z - b) as u64
    }

    /// Left multiplication by `p` on `K_a(c)`.
    pub fn multiply(&self, p: &crate::polyalg::Poly, deg: i64, a: i64, c: i64) -> Option<PolyMatrix> {
        let m = self.module(a, c)?;
        Some(PolyMatrix::scalar(m, p, vec![deg, 0]))
    }

    pub fn bimodule(&self, c: i64) -> Option<&Bimodule> {
        self.column(c).map(|col| &col.bimodule)
    }
}
