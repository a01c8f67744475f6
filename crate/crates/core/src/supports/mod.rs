//! Support bounds for triply graded homology: the symmetric functions that
//! cut out the permutation stratum of a braid must act nilpotently.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hochschild::{degrees_in, homology_basis, q_window, HhhOptions, HochschildError, KoszulBicomplex};
use crate::polyalg::{elem_sym, rank_q, Poly, Q};
use crate::rouquier::{
    rouquier_complex, rouquier_complex_simplified, BimoduleComplex, BraidWord, Normalization, RouquierError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SupportError {
    #[error("no stratum library for n = {0}; supply generators")]
    Unsupported(usize),
    #[error("`{0:?}` is not a cycle type of S_{1}")]
    BadCycleType(Vec<usize>, usize),
    #[error("generator {0} does not vanish on its stratum")]
    NotVanishing(String),
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error(transparent)]
    Rouquier(#[from] RouquierError),
}

/// Symmetric functions, written in `e_1..e_n`, vanishing on the image in
/// `A^n // S_n` of `{x : x_i = x_{w(i)}}` for `w` of the given cycle type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumIdeal {
    pub n: usize,
    pub cycle_type: Vec<usize>,
    /// Polynomials in `e_1..e_n` (variable `k - 1` is `e_k`).
    pub generators: Vec<Poly>,
}

fn e_poly(n: usize, terms: &[(i64, &[u32])]) -> Poly {
    let mut p = Poly::zero(n);
    for (c, m) in terms {
        p.add_term(m.to_vec(), Q::from_integer((*c).into()));
    }
    p
}

fn normalize_cycle_type(ct: &[usize], n: usize) -> Result<Vec<usize>, SupportError> {
    let mut v: Vec<usize> = ct.iter().copied().filter(|&k| k > 0).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    if v.iter().sum::<usize>() != n {
        return Err(SupportError::BadCycleType(ct.to_vec(), n));
    }
    Ok(v)
}

/// The shipped library, `n <= 3`.
pub fn stratum_ideal(cycle_type: &[usize], n: usize) -> Result<StratumIdeal, SupportError> {
    let ct = normalize_cycle_type(cycle_type, n)?;
    let generators = match (n, ct.as_slice()) {
        (_, c) if c.iter().all(|&k| k == 1) => Vec::new(),
        (2, [2]) => vec![e_poly(2, &[(1, &[2, 0]), (-4, &[0, 1])])],
        // discriminant of the cubic
        (3, [2, 1]) => vec![e_poly(
            3,
            &[(1, &[2, 2, 0]), (-4, &[0, 3, 0]), (-4, &[3, 0, 1]), (18, &[1, 1, 1]), (-27, &[0, 0, 2])],
        )],
        // x_1 = x_2 = x_3
        (3, [3]) => vec![
            e_poly(3, &[(1, &[2, 0, 0]), (-3, &[0, 1, 0])]),
            e_poly(3, &[(1, &[1, 1, 0]), (-9, &[0, 0, 1])]),
            e_poly(3, &[(1, &[0, 2, 0]), (-3, &[1, 0, 1])]),
        ],
        _ => return Err(SupportError::Unsupported(n)),
    };
    Ok(StratumIdeal { n, cycle_type: ct, generators })
}

impl StratumIdeal {
    /// User-supplied generators, checked on the stratum points built from
    /// `samples` (each sample gives one value per cycle).
    pub fn custom(
        n: usize,
        cycle_type: &[usize],
        generators: Vec<Poly>,
        samples: &[Vec<Q>],
    ) -> Result<Self, SupportError> {
        let ct = normalize_cycle_type(cycle_type, n)?;
        let out = Self { n, cycle_type: ct, generators };
        for s in samples {
            let pt = stratum_point(&out.cycle_type, s);
            if let Some(g) = out.generators.iter().find(|g| !vanishes(g, &pt)) {
                return Err(SupportError::NotVanishing(format_epoly(g)));
            }
        }
        Ok(out)
    }

    /// Generators expanded as polynomials in `x_1..x_n`.
    pub fn in_x(&self) -> Vec<Poly> {
        let images: Vec<Poly> = (1..=self.n).map(|k| elem_sym(k, self.n).expect("k <= n")).collect();
        self.generators.iter().map(|g| g.compose(&images, self.n)).collect()
    }

    pub fn vanishes_at(&self, x: &[Q]) -> bool {
        self.generators.iter().all(|g| vanishes(g, x))
    }

    pub fn describe(&self) -> Vec<String> {
        self.generators.iter().map(format_epoly).collect()
    }
}

fn vanishes(g: &Poly, x: &[Q]) -> bool {
    let n = x.len();
    let e: Vec<Q> = (1..=n).map(|k| elem_sym(k, n).expect("k <= n").eval(x)).collect();
    g.eval(&e).is_zero()
}

/// The point with one value per cycle, repeated along it.
pub fn stratum_point(cycle_type: &[usize], values: &[Q]) -> Vec<Q> {
    cycle_type.iter().zip(values).flat_map(|(&len, v)| std::iter::repeat_n(v.clone(), len)).collect()
}

/// The next smaller stratum: merge the two longest cycles.
pub fn smaller_stratum(cycle_type: &[usize]) -> Option<Vec<usize>> {
    if cycle_type.len() < 2 {
        return None;
    }
    let mut v = cycle_type.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    let merged = v[0] + v[1];
    let mut out = vec![merged];
    out.extend_from_slice(&v[2..]);
    out.sort_unstable_by(|a, b| b.cmp(a));
    Some(out)
}

pub fn format_epoly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    // highest total degree first, then lexicographically
    let mut terms: Vec<_> = p.terms().iter().collect();
    terms.sort_by(|a, b| b.0.iter().sum::<u32>().cmp(&a.0.iter().sum::<u32>()).then(b.0.cmp(a.0)));
    for (i, (m, c)) in terms.into_iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let vars: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(k, e)| if *e == 1 { format!("e{}", k + 1) } else { format!("e{}^{e}", k + 1) })
            .collect();
        if vars.is_empty() {
            let _ = write!(out, "{abs}");
        } else {
            if !abs.is_one() {
                let _ = write!(out, "{abs}*");
            }
            out.push_str(&vars.join("*"));
        }
    }
    out
}

/// Result of testing one operator for nilpotence on a truncation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Nilpotence {
    /// `g^power` kills every class in the window; no smaller power does.
    #[serde(rename = "PASS")]
    Pass { min_power: u32, escaped: bool },
    /// A class at `(a, X, C)` survives `g^checked`.
    #[serde(rename = "NOT_NILPOTENT")]
    NotNilpotent { witness_class: [i64; 3], checked: u32 },
    /// Nothing certified: the window holds no classes, or a generator the
    /// bound predicts nilpotent survived the power bound.
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive { reason: String, witness_class: Option<[i64; 3]> },
}

/// Tests `g^N` on every class of `H(HH(C))` in `window` (raw degrees).
/// `shift` converts raw `(a, X, C)` to reported degrees.
pub fn nilpotence(
    bc: &KoszulBicomplex,
    g: &Poly,
    window: &crate::multigrade::Window,
    shift: [i64; 3],
    power_bound: u32,
) -> Result<Nilpotence, SupportError> {
    let Some(dg) = x_degree(g) else {
        return Ok(Nilpotence::Pass { min_power: 1, escaped: false });
    };
    let degrees = degrees_in(bc, window)?;
    let results: Vec<Option<Result<u32, [i64; 3]>>> = degrees
        .par_iter()
        .map(|&(a, c, x)| {
            let classes = homology_basis(bc, a, c, x);
            if classes.is_empty() {
                return None;
            }
            let mul = bc.multiply(g, dg, a, c).expect("degree inside the bicomplex");
            let mut vs = classes;
            for p in 1..=power_bound {
                let from = x + dg * (p as i64 - 1);
                let (s0, s1) = (bc.slice(a, c, from), bc.slice(a, c, from + dg));
                vs = vs.iter().map(|v| mul.apply_slice(v, &s0, &s1)).collect();
                let b = bc.boundaries(a, c, from + dg);
                let rb = rank_q(&b);
                let mut all = b;
                all.extend(vs.iter().cloned());
                if rank_q(&all) == rb {
                    return Some(Ok(p));
                }
            }
            Some(Err([a + shift[0], x + shift[1], c + a + shift[2]]))
        })
        .collect();
    let mut worst = 0;
    let mut seen = false;
    let mut escaped = false;
    for (r, &(a, c, x)) in results.iter().zip(&degrees) {
        match r {
            None => {}
            Some(Err(w)) => return Ok(Nilpotence::NotNilpotent { witness_class: *w, checked: power_bound }),
            Some(Ok(p)) => {
                seen = true;
                worst = worst.max(*p);
                if !window.contains(&[a, x + dg * i64::from(*p), c + a]) {
                    escaped = true;
                }
            }
        }
    }
    if !seen {
        return Ok(Nilpotence::Inconclusive { reason: "no classes in the window".into(), witness_class: None });
    }
    Ok(Nilpotence::Pass { min_power: worst, escaped })
}

/// Internal degree of a homogeneous polynomial in `x` (every `x_i` in `X = 2`).
fn x_degree(g: &Poly) -> Option<i64> {
    let m = g.terms().keys().next()?;
    Some(2 * m.iter().map(|&e| i64::from(e)).sum::<i64>())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorReport {
    pub generator: String,
    #[serde(flatten)]
    pub result: Nilpotence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlReport {
    pub cycle_type: Vec<usize>,
    pub generators: Vec<GeneratorReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportReport {
    pub braid: String,
    pub strands: usize,
    pub cycle_type: Vec<usize>,
    pub q_max: i64,
    pub power_bound: u32,
    pub generators: Vec<GeneratorReport>,
    /// Generators of the next smaller stratum, expected not nilpotent.
    pub control: Option<ControlReport>,
    /// `PASS` or `INCONCLUSIVE`; a predicted generator that survives the
    /// power bound is never reported as a failure of the bound.
    pub status: String,
}

impl SupportReport {
    pub fn inconclusive(&self) -> bool {
        self.status != "PASS"
    }
}

/// Tests the stratum of `b`'s permutation on normalized `HHH(b)` with
/// `q <= q_max`, plus the negative control.
pub fn support_report(
    b: &BraidWord,
    q_max: i64,
    power_bound: u32,
    opts: &HhhOptions,
) -> Result<SupportReport, SupportError> {
    let cx = if opts.simplify { rouquier_complex_simplified(b)? } else { rouquier_complex(b)? };
    support_report_from(b, &cx, q_max, power_bound, &opts.normalization)
}

/// [`support_report`] for an already built Rouquier complex of `b`.
pub fn support_report_from(
    b: &BraidWord,
    cx: &BimoduleComplex,
    q_max: i64,
    power_bound: u32,
    normalization: &Normalization,
) -> Result<SupportReport, SupportError> {
    let bc = KoszulBicomplex::new(cx)?;
    let shift = normalization.total(b);
    let raw = q_window(q_max).shifted(&shift.map(|v| -v));
    let n = b.n();
    let ct = b.cycle_type();
    let run = |ideal: &StratumIdeal| -> Result<Vec<GeneratorReport>, SupportError> {
        ideal
            .in_x()
            .iter()
            .zip(ideal.describe())
            .map(|(g, name)| Ok(GeneratorReport { generator: name, result: nilpotence(&bc, g, &raw, shift, power_bound)? }))
            .collect()
    };
    let ideal = stratum_ideal(&ct, n)?;
    let mut generators = run(&ideal)?;
    for g in &mut generators {
        if let Nilpotence::NotNilpotent { witness_class, checked } = g.result {
            g.result = Nilpotence::Inconclusive {
                reason: format!("a class survives power {checked}"),
                witness_class: Some(witness_class),
            };
        }
    }
    let control = match smaller_stratum(&ct) {
        Some(small) => {
            let ideal = stratum_ideal(&small, n)?;
            Some(ControlReport { cycle_type: small, generators: run(&ideal)? })
        }
        None => None,
    };
    let ok = generators.iter().all(|g| matches!(g.result, Nilpotence::Pass { .. }));
    Ok(SupportReport {
        braid: b.to_string(),
        strands: n,
        cycle_type: ct,
        q_max,
        power_bound,
        generators,
        control,
        status: if ok { "PASS" } else { "INCONCLUSIVE" }.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::q;

    #[test]
    fn discriminant_two_strands() {
        let ideal = stratum_ideal(&[2], 2).unwrap();
        let x = ideal.in_x();
        let d = &Poly::var(2, 0) - &Poly::var(2, 1);
        assert_eq!(x, vec![&d * &d]);
        assert_eq!(ideal.describe(), vec!["e1^2 - 4*e2"]);
    }

    #[test]
    fn identity_class_is_empty() {
        assert!(stratum_ideal(&[1, 1], 2).unwrap().generators.is_empty());
        assert!(stratum_ideal(&[1, 1, 1], 3).unwrap().generators.is_empty());
    }

    #[test]
    fn vanishing_on_strata() {
        for (ct, n) in [(vec![2], 2), (vec![2, 1], 3), (vec![3], 3)] {
            let ideal = stratum_ideal(&ct, n).unwrap();
            let pt = stratum_point(&ct, &[q(3), q(-5)]);
            assert!(ideal.vanishes_at(&pt), "{ct:?}");
            assert!(!ideal.vanishes_at(&(1..=n as i64).map(q).collect::<Vec<_>>()));
        }
    }

    #[test]
    fn unsupported_and_bad_types() {
        assert!(matches!(stratum_ideal(&[4], 4), Err(SupportError::Unsupported(4))));
        assert!(matches!(stratum_ideal(&[2], 3), Err(SupportError::BadCycleType(..))));
    }

    #[test]
    fn custom_generators_are_checked() {
        let good = e_poly(2, &[(1, &[2, 0]), (-4, &[0, 1])]);
        assert!(StratumIdeal::custom(2, &[2], vec![good], &[vec![q(7)]]).is_ok());
        let bad = e_poly(2, &[(1, &[1, 0])]);
        assert!(StratumIdeal::custom(2, &[2], vec![bad], &[vec![q(7)]]).is_err());
    }

    #[test]
    fn smaller_strata() {
        assert_eq!(smaller_stratum(&[1, 1]), Some(vec![2]));
        assert_eq!(smaller_stratum(&[2, 1]), Some(vec![3]));
        assert_eq!(smaller_stratum(&[3]), None);
    }

    #[test]
    fn formatting() {
        let p = e_poly(3, &[(1, &[1, 1, 0]), (-9, &[0, 0, 1])]);
        assert_eq!(format_epoly(&p), "e1*e2 - 9*e3");
    }

    #[test]
    fn unknot_two_strands_identity_is_not_nilpotent() {
        let b = BraidWord::identity(2);
        let cx = rouquier_complex_simplified(&b).unwrap();
        let bc = KoszulBicomplex::new(&cx).unwrap();
        let g = &stratum_ideal(&[2], 2).unwrap().in_x()[0];
        let r = nilpotence(&bc, g, &q_window(2), [0; 3], 3).unwrap();
        assert!(matches!(r, Nilpotence::NotNilpotent { .. }));
    }
}
