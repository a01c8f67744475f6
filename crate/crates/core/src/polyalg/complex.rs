use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::linalg::SparseVec;
use super::module::{rank_q, GradedFreeModule, PolyMatrix, SliceBasis};
use super::poly::{q_from_str, q_to_string, Mono, Poly, PolyRing, Q};
use super::PolyError;
use crate::multigrade::{DimTable, GradingScheme, Window};

/// A free module with a differential of degree `+1` on the cohomological
/// axis and `0` elsewhere. Chain position is read off the generator degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeComplex {
    module: GradedFreeModule,
    d: PolyMatrix,
}

/// Degreewise linear algebra at one non-cohomological degree.
#[derive(Debug, Clone)]
pub struct DegreeSlice {
    pub bases: BTreeMap<i64, SliceBasis>,
    /// Columns of `d: C -> C + 1`, indexed by source `C`.
    pub maps: BTreeMap<i64, Vec<SparseVec<Q>>>,
}

impl FreeComplex {
    pub fn new(module: GradedFreeModule, d: PolyMatrix) -> Result<Self, PolyError> {
        let scheme = module.ring().scheme().clone();
        let mut unit = vec![0; scheme.rank()];
        unit[scheme.cohomological()] = 1;
        if d.src() != &module || d.tgt() != &module {
            return Err(PolyError::ModuleMismatch("differential must be an endomorphism".into()));
        }
        if !d.is_zero() && d.degree() != unit {
            return Err(PolyError::NotHomogeneous("differential must have degree C = +1".into()));
        }
        d.check_homogeneous()?;
        let d = PolyMatrix::new_unchecked(&module, &module, unit, d.entries().to_vec())?;
        if !d.compose(&d)?.is_zero() {
            return Err(PolyError::NotAComplex);
        }
        Ok(Self { module, d })
    }

    /// Zero differential.
    pub fn trivial(module: GradedFreeModule) -> Self {
        let scheme = module.ring().scheme().clone();
        let mut unit = vec![0; scheme.rank()];
        unit[scheme.cohomological()] = 1;
        let d = PolyMatrix::zero(&module, &module, unit);
        Self { module, d }
    }

    pub fn module(&self) -> &GradedFreeModule {
        &self.module
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.module.ring()
    }

    pub fn differential(&self) -> &PolyMatrix {
        &self.d
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, PolyError> {
        let m = self.module.direct_sum(&other.module);
        let (a, b) = (self.module.rank(), other.module.rank());
        let mut d = PolyMatrix::zero(&m, &m, self.d.degree().to_vec());
        for l in 0..a {
            for k in 0..a {
                d.set(l, k, self.d.get(l, k).clone());
            }
        }
        for l in 0..b {
            for k in 0..b {
                d.set(a + l, a + k, other.d.get(l, k).clone());
            }
        }
        Self::new(m, d)
    }

    /// Bases and matrices of the degree-`d` strand for `C` in `c_range`
    /// (the entry of `d` on the cohomological axis is ignored).
    pub fn degree_slice(&self, d: &[i64], c_range: (i64, i64)) -> DegreeSlice {
        let c_axis = self.ring().scheme().cohomological();
        let at = |c: i64| {
            let mut e = d.to_vec();
            e[c_axis] = c;
            self.module.slice(&e)
        };
        let mut bases = BTreeMap::new();
        for c in c_range.0..=c_range.1 + 1 {
            bases.insert(c, at(c));
        }
        let mut maps = BTreeMap::new();
        for c in c_range.0..=c_range.1 {
            maps.insert(c, self.d.slice_columns(&bases[&c], &bases[&(c + 1)], 0));
        }
        bases.remove(&(c_range.1 + 1));
        DegreeSlice { bases, maps }
    }

    /// Dimension of cohomology in every degree of `window`.
    pub fn homology_dims(&self, window: &Window) -> Result<DimTable, PolyError> {
        let ring = self.ring().clone();
        let scheme = ring.scheme().clone();
        let c_axis = scheme.cohomological();
        let max_w = max_weight(&ring, window)?;
        let mut degrees = BTreeSet::new();
        for g in self.module.gens() {
            let room = max_w - ring.weight_of(g);
            for md in ring.degrees_up_to(room) {
                let e: Vec<i64> = g.iter().zip(&md).map(|(a, b)| a + b).collect();
                if window.contains(&e) {
                    degrees.insert(e);
                }
            }
        }
        let degrees: Vec<Vec<i64>> = degrees.into_iter().collect();
        let dims: Vec<(Vec<i64>, u64)> = degrees
            .par_iter()
            .map(|e| {
                let shifted = |k: i64| {
                    let mut x = e.clone();
                    x[c_axis] += k;
                    x
                };
                let here = self.module.slice(e);
                let next = self.module.slice(&shifted(1));
                let prev = self.module.slice(&shifted(-1));
                let out_rank = rank_q(&self.d.slice_columns(&here, &next, 0));
                let in_rank = rank_q(&self.d.slice_columns(&prev, &here, 0));
                (e.clone(), (here.len() - out_rank - in_rank) as u64)
            })
            .collect();
        let mut t = DimTable::with_window(&scheme, window.clone());
        for (e, v) in dims {
            t.add(e, v);
        }
        Ok(t)
    }

    pub fn to_json(&self) -> FreeComplexJson {
        let ring = self.ring();
        let scheme = ring.scheme();
        let deg = |d: &[i64]| scheme.axes().iter().cloned().zip(d.iter().copied()).collect();
        FreeComplexJson {
            axes: scheme.axes().to_vec(),
            cohomological: scheme.cohomological_name().to_string(),
            variables: (0..ring.nvars())
                .map(|i| VariableJson { name: ring.names()[i].clone(), degree: deg(ring.var_degree(i)) })
                .collect(),
            generators: self.module.gens().iter().map(|g| deg(g)).collect(),
            differential: matrix_to_json(&self.d),
        }
    }

    pub fn from_json(j: &FreeComplexJson) -> Result<Self, PolyError> {
        let axes: Vec<&str> = j.axes.iter().map(String::as_str).collect();
        let scheme = GradingScheme::new(&axes, &j.cohomological).map_err(|e| PolyError::Parse(e.to_string()))?;
        let read = |m: &BTreeMap<String, i64>| -> Result<Vec<i64>, PolyError> {
            let mut v = vec![0; scheme.rank()];
            for (k, x) in m {
                v[scheme.index(k).map_err(|e| PolyError::Parse(e.to_string()))?] = *x;
            }
            Ok(v)
        };
        let names = j.variables.iter().map(|v| v.name.clone()).collect();
        let degs = j.variables.iter().map(|v| read(&v.degree)).collect::<Result<_, _>>()?;
        let ring = PolyRing::new(&scheme, names, degs)?;
        let gens = j.generators.iter().map(read).collect::<Result<_, _>>()?;
        let module = GradedFreeModule::new(&ring, gens)?;
        let mut unit = vec![0; scheme.rank()];
        unit[scheme.cohomological()] = 1;
        let d = matrix_from_json(&j.differential, &module, &module, unit)?;
        Self::new(module, d)
    }
}

fn max_weight(ring: &PolyRing, window: &Window) -> Result<i64, PolyError> {
    let mut total = 0;
    for (i, l) in ring.weight().iter().enumerate() {
        if *l == 0 {
            continue;
        }
        let b = window.bound(i);
        let v = if *l > 0 { b.hi } else { b.lo };
        match v {
            Some(v) => total += l * v,
            None => {
                return Err(PolyError::Window(format!(
                    "axis `{}` needs a bound on the {} side",
                    ring.scheme().axes()[i],
                    if *l > 0 { "upper" } else { "lower" }
                )))
            }
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableJson {
    pub name: String,
    pub degree: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub row: usize,
    pub col: usize,
    /// Exponent vector written `"e1,e2,..."` mapped to `"num/den"`.
    pub terms: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeComplexJson {
    pub axes: Vec<String>,
    pub cohomological: String,
    pub variables: Vec<VariableJson>,
    pub generators: Vec<BTreeMap<String, i64>>,
    pub differential: Vec<EntryJson>,
}

pub fn poly_to_json(p: &Poly) -> BTreeMap<String, String> {
    p.terms()
        .iter()
        .map(|(m, c)| (m.iter().map(u32::to_string).collect::<Vec<_>>().join(","), q_to_string(c)))
        .collect()
}

pub fn poly_from_json(t: &BTreeMap<String, String>, nvars: usize) -> Result<Poly, PolyError> {
    let mut p = Poly::zero(nvars);
    for (k, c) in t {
        let m: Mono = if k.is_empty() {
            Vec::new()
        } else {
            k.split(',')
                .map(|e| e.trim().parse::<u32>().map_err(|_| PolyError::Parse(format!("exponent `{k}`"))))
                .collect::<Result<_, _>>()?
        };
        if m.len() != nvars {
            return Err(PolyError::Parse(format!("exponent `{k}` for {nvars} variables")));
        }
        p.add_term(m, q_from_str(c)?);
    }
    Ok(p)
}

pub fn matrix_to_json(m: &PolyMatrix) -> Vec<EntryJson> {
    let mut out = Vec::new();
    for l in 0..m.rows() {
        for k in 0..m.cols() {
            let e = m.get(l, k);
            if !e.is_zero() {
                out.push(EntryJson { row: l, col: k, terms: poly_to_json(e) });
            }
        }
    }
    out
}

pub fn matrix_from_json(
    entries: &[EntryJson],
    src: &GradedFreeModule,
    tgt: &GradedFreeModule,
    degree: Vec<i64>,
) -> Result<PolyMatrix, PolyError> {
    let n = src.ring().nvars();
    let mut m = PolyMatrix::zero(src, tgt, degree.clone());
    for e in entries {
        if e.row >= tgt.rank() || e.col >= src.rank() {
            return Err(PolyError::Parse(format!("entry ({}, {}) out of range", e.row, e.col)));
        }
        m.set(e.row, e.col, poly_from_json(&e.terms, n)?);
    }
    PolyMatrix::new(src, tgt, degree, m.entries().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigrade::AxisBound;
    use crate::polyalg::poly::q;

    fn koszul_one() -> FreeComplex {
        // Q[x] (C = -1, X = 2) --x--> Q[x] (C = 0)
        let r = PolyRing::x_ring(1);
        let m = GradedFreeModule::new(&r, vec![vec![2, -1], vec![0, 0]]).unwrap();
        let mut d = PolyMatrix::zero(&m, &m, vec![0, 1]);
        d.set(1, 0, Poly::var(1, 0));
        FreeComplex::new(m, d).unwrap()
    }

    fn window(xmax: i64) -> Window {
        Window::from_bounds(vec![AxisBound::at_most(xmax), AxisBound::FULL])
    }

    #[test]
    fn koszul_in_one_variable() {
        let h = koszul_one().homology_dims(&window(12)).unwrap();
        assert_eq!(h.entries().collect::<Vec<_>>(), vec![(&vec![0, 0], 1)]);
    }

    #[test]
    fn zero_differential_gives_chain_dims() {
        let r = PolyRing::x_ring(2);
        let m = GradedFreeModule::new(&r, vec![vec![0, 0]]).unwrap();
        let h = FreeComplex::trivial(m).homology_dims(&window(6)).unwrap();
        assert_eq!(h.get(&[4, 0]), Some(3));
        assert_eq!(h.get(&[6, 0]), Some(4));
        assert_eq!(h.get(&[8, 0]), None);
    }

    #[test]
    fn non_complex_is_rejected() {
        let r = PolyRing::x_ring(1);
        let m = GradedFreeModule::new(&r, vec![vec![0, 0], vec![0, 1]]).unwrap();
        let mut d = PolyMatrix::zero(&m, &m, vec![0, 1]);
        d.set(1, 0, Poly::integer(1, 1));
        d.set(0, 1, Poly::integer(1, 1));
        assert!(FreeComplex::new(m, d).is_err());
    }

    #[test]
    fn inhomogeneous_differential_is_rejected() {
        let r = PolyRing::x_ring(1);
        let m = GradedFreeModule::new(&r, vec![vec![0, -1], vec![0, 0]]).unwrap();
        let mut d = PolyMatrix::zero(&m, &m, vec![0, 1]);
        d.set(1, 0, Poly::var(1, 0));
        assert!(matches!(FreeComplex::new(m, d), Err(PolyError::NotHomogeneous(_))));
    }

    #[test]
    fn json_round_trip() {
        let mut c = koszul_one();
        let j = c.to_json();
        let back = FreeComplex::from_json(&serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap()).unwrap();
        assert_eq!(back, c);
        let mut d = c.differential().clone();
        d.set(1, 0, Poly::var(1, 0).scale(&(q(3) / q(2))));
        c = FreeComplex::new(c.module().clone(), d).unwrap();
        assert!(serde_json::to_string(&c.to_json()).unwrap().contains("3/2"));
    }

    #[test]
    fn slice_strand() {
        let s = koszul_one().degree_slice(&[4, 0], (-1, 0));
        assert_eq!(s.bases[&-1].len(), 1);
        assert_eq!(s.bases[&0].len(), 1);
        assert_eq!(s.maps[&-1].len(), 1);
    }
}
