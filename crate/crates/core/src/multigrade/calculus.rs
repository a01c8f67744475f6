//! Shifts, shears, regradings and 2-periodization on dimension tables.

use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{One, Zero};

use super::{DimTable, GradeError, GradingScheme, MultiDegree, Window};

/// Moves every entry by `d`. With the pinned convention, `[k]` is the degree
/// `C = -k` and `<k>` is `+k` on a formal axis.
pub fn shift(t: &DimTable, d: &MultiDegree) -> Result<DimTable, GradeError> {
    if d.scheme() != t.scheme() {
        return Err(GradeError::AxisMismatch(format!("{} vs {}", d.scheme(), t.scheme())));
    }
    let by = d.exps();
    let mut out = DimTable::with_window(t.scheme(), t.window().shifted(by));
    for (k, v) in t.entries() {
        out.add(k.iter().zip(by).map(|(a, b)| a + b).collect(), v);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShearDirection {
    /// `(V_i)_i -> (V_i[2i])_i`
    Left,
    /// `(V_i)_i -> (V_i[-2i])_i`
    Right,
}

/// Cohomological shear along a formal axis: an entry at `(axis = i, C = c)`
/// moves to `C = c - 2i` (left) or `C = c + 2i` (right).
pub fn shear(t: &DimTable, axis: &str, dir: ShearDirection) -> Result<DimTable, GradeError> {
    let s = t.scheme();
    let a = s.index(axis)?;
    let c = s.cohomological();
    if a == c {
        return Err(GradeError::ShearCohomological(axis.to_string()));
    }
    let sign = match dir {
        ShearDirection::Left => -2,
        ShearDirection::Right => 2,
    };
    let r = s.rank();
    let mut m = identity(r);
    m[c][a] = sign;
    let mut inv = identity(r);
    inv[c][a] = -sign;
    Ok(apply_linear(t, s, &m, Some(&inv)))
}

/// An integer-linear relabelling of exponents from one scheme to another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    source: Arc<GradingScheme>,
    target: Arc<GradingScheme>,
    matrix: Vec<Vec<i64>>,
    inverse: Option<Vec<Vec<i64>>>,
}

impl Substitution {
    /// `matrix` has one row per target axis and one column per source axis.
    pub fn linear(
        source: &Arc<GradingScheme>,
        target: &Arc<GradingScheme>,
        matrix: Vec<Vec<i64>>,
    ) -> Result<Self, GradeError> {
        if matrix.len() != target.rank() || matrix.iter().any(|r| r.len() != source.rank()) {
            return Err(GradeError::AxisMismatch(format!(
                "substitution matrix shape does not match {source} -> {target}"
            )));
        }
        let inverse = integer_inverse(&matrix);
        Ok(Self { source: source.clone(), target: target.clone(), matrix, inverse })
    }

    /// `X~ = X^2 Y`, `Y~ = X^-1` read on exponents: `(p, r) -> (r, 2r - p)`.
    pub fn xy_to_tilde() -> Self {
        let m = vec![vec![0, 1, 0], vec![-1, 2, 0], vec![0, 0, 1]];
        Self::linear(&GradingScheme::xyc(), &GradingScheme::tilde(), m).expect("static")
    }

    pub fn tilde_to_xy() -> Self {
        let m = vec![vec![2, -1, 0], vec![1, 0, 0], vec![0, 0, 1]];
        Self::linear(&GradingScheme::tilde(), &GradingScheme::xyc(), m).expect("static")
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse.is_some()
    }

    pub fn source(&self) -> &Arc<GradingScheme> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradingScheme> {
        &self.target
    }

    pub fn apply(&self, exps: &[i64]) -> Vec<i64> {
        self.matrix.iter().map(|row| row.iter().zip(exps).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        self.inverse.as_ref().map(|inv| Self {
            source: self.target.clone(),
            target: self.source.clone(),
            matrix: inv.clone(),
            inverse: Some(self.matrix.clone()),
        })
    }
}

/// Relabels a table along a substitution. Truncated tables need an invertible
/// substitution so the window can be carried over exactly.
pub fn regrade(t: &DimTable, sub: &Substitution) -> Result<DimTable, GradeError> {
    if t.scheme() != &sub.source {
        for a in t.scheme().axes() {
            if !sub.source.has(a) {
                return Err(GradeError::SubstitutionUndefined(a.clone()));
            }
        }
        return Err(GradeError::AxisMismatch(format!("{} vs {}", t.scheme(), sub.source)));
    }
    if sub.inverse.is_none() && !t.window().is_full() {
        return Err(GradeError::WindowTooSmall(
            "non-invertible substitution cannot carry a truncation window".into(),
        ));
    }
    Ok(apply_linear(t, &sub.target, &sub.matrix, sub.inverse.as_deref()))
}

/// `deg(beta) = (C = -2, X = 0, Y = 1)` on the `(X, Y, C)` scheme.
pub fn deg_beta_xy() -> MultiDegree {
    GradingScheme::xyc().degree(&[("C", -2), ("Y", 1)]).expect("static")
}

/// `deg(beta) = (C = -2, X~ = 1, Y~ = 2)` on the tilde scheme.
pub fn deg_beta_tilde() -> MultiDegree {
    GradingScheme::tilde().degree(&[("C", -2), ("Xt", 1), ("Yt", 2)]).expect("static")
}

/// `t (x) Q[beta, beta^-1]` restricted to `window`.
///
/// The window must cut every beta-orbit into a finite piece, and `t` must be
/// complete along beta so no unknown entry feeds the orbit sum.
pub fn periodize(t: &DimTable, window: &Window) -> Result<DimTable, GradeError> {
    let s = t.scheme();
    let beta = if s.has("Y") && s.has("X") {
        GradingScheme::degree(s, &[("C", -2), ("Y", 1)])?
    } else if s.has("Xt") && s.has("Yt") {
        GradingScheme::degree(s, &[("C", -2), ("Xt", 1), ("Yt", 2)])?
    } else {
        return Err(GradeError::AxisMismatch(format!(
            "periodization needs (X, Y) or (Xt, Yt) axes, got {s}"
        )));
    };
    orbit_sum(t, beta.exps(), window)
}

/// Predicted enriched Hom of the sheared category: copies of a `Y = 0`
/// table along the orbit of `u = (Y = 1, C = 2)`.
pub fn hom_shear_check(t: &DimTable, window: &Window) -> Result<DimTable, GradeError> {
    let s = t.scheme();
    let u = GradingScheme::degree(s, &[("Y", 1), ("C", 2)])?;
    orbit_sum(t, u.exps(), window)
}

fn orbit_sum(t: &DimTable, step: &[i64], window: &Window) -> Result<DimTable, GradeError> {
    if !t.window().complete_along(step) {
        return Err(GradeError::TruncatedInput(format!("direction {step:?}")));
    }
    if !window.bounds_direction(step) {
        return Err(GradeError::WindowTooSmall(format!(
            "orbit along {step:?} is infinite in the requested window"
        )));
    }
    let out_window = t.window().intersect(window);
    let mut out = DimTable::with_window(t.scheme(), out_window.clone());
    for (k, v) in t.entries() {
        let (lo, hi) = out_window
            .line_range(k, step)
            .ok_or_else(|| GradeError::WindowTooSmall(format!("orbit through {k:?}")))?;
        for m in lo..=hi {
            let d: Vec<i64> = k.iter().zip(step).map(|(a, b)| a + m * b).collect();
            if out_window.contains(&d) {
                out.add(d, v);
            }
        }
    }
    Ok(out)
}

/// Both sides of the periodization/shear comparison on the `(X, Y, C)`
/// scheme: the `Y = 0` slice of the periodized table, and the table sheared
/// right along `Y` with `Y` then forgotten. Both land on `(X, C)`.
pub fn periodize_vs_shear_degrade(
    t: &DimTable,
    c_window: (i64, i64),
) -> Result<(DimTable, DimTable), GradeError> {
    let s = t.scheme();
    let y = s.index("Y")?;
    let c = s.cohomological();
    let mut w = Window::full(s.rank());
    w.set(y, super::AxisBound::between(0, 0));
    w.set(c, super::AxisBound::between(c_window.0, c_window.1));
    let per = periodize(t, &w)?;
    let xc = GradingScheme::cx();
    let mut lhs = DimTable::with_window(&xc, Window::from_bounds(vec![
        super::AxisBound::FULL,
        super::AxisBound::between(c_window.0, c_window.1),
    ]));
    let x = s.index("X")?;
    for (k, v) in per.entries() {
        lhs.add(vec![k[x], k[c]], v);
    }
    let sheared = shear(t, "Y", ShearDirection::Right)?;
    let rhs = sheared.degrade("Y", &xc)?;
    let mut cw = Window::full(2);
    cw.set(1, super::AxisBound::between(c_window.0, c_window.1));
    Ok((lhs, rhs.restrict(&cw)))
}

fn identity(r: usize) -> Vec<Vec<i64>> {
    (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect()
}

fn apply_linear(
    t: &DimTable,
    target: &Arc<GradingScheme>,
    m: &[Vec<i64>],
    inverse: Option<&[Vec<i64>]>,
) -> DimTable {
    let window = match inverse {
        Some(inv) => t.window().transformed(inv),
        None => Window::full(target.rank()),
    };
    let mut out = DimTable::with_window(target, window);
    for (k, v) in t.entries() {
        let d = m.iter().map(|row| row.iter().zip(k).map(|(a, b)| a * b).sum()).collect();
        out.add(d, v);
    }
    out
}

fn integer_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut a: Vec<Vec<Ratio<i64>>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .map(|&v| Ratio::from_integer(v))
                .chain((0..n).map(|j| if i == j { Ratio::one() } else { Ratio::zero() }))
                .collect()
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        let piv = a[col][col];
        for v in a[col].iter_mut() {
            *v /= piv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                let src = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(src) {
                    *x -= f * y;
                }
            }
        }
    }
    a.into_iter()
        .map(|row| row[n..].iter().map(|v| v.is_integer().then(|| v.to_integer())).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigrade::AxisBound;

    #[test]
    fn grading_shift_moves_formal_axis() {
        let s = GradingScheme::cx();
        let t = DimTable::from_entries(&s, &[(&[("X", 0), ("C", 0)], 1)]).unwrap();
        let d = MultiDegree::grading_shift(&s, "X", 2).unwrap();
        let want = DimTable::from_entries(&s, &[(&[("X", 2), ("C", 0)], 1)]).unwrap();
        assert_eq!(shift(&t, &d).unwrap(), want);
    }

    #[test]
    fn cohomological_shift_subtracts() {
        let s = GradingScheme::cx();
        let t = DimTable::from_entries(&s, &[(&[("X", 0), ("C", 0)], 1)]).unwrap();
        let d = MultiDegree::cohomological_shift(&s, 1);
        let want = DimTable::from_entries(&s, &[(&[("X", 0), ("C", -1)], 1)]).unwrap();
        assert_eq!(shift(&t, &d).unwrap(), want);
    }

    #[test]
    fn shift_rejects_foreign_scheme() {
        let t = DimTable::new(&GradingScheme::cx());
        let d = GradingScheme::xyc().zero();
        assert!(matches!(shift(&t, &d), Err(GradeError::AxisMismatch(_))));
    }

    #[test]
    fn left_shear_of_y_one() {
        let s = GradingScheme::xyc();
        let t = DimTable::from_entries(&s, &[(&[("Y", 1)], 1)]).unwrap();
        let want = DimTable::from_entries(&s, &[(&[("Y", 1), ("C", -2)], 1)]).unwrap();
        assert_eq!(shear(&t, "Y", ShearDirection::Left).unwrap(), want);
        assert!(shear(&DimTable::new(&s), "Y", ShearDirection::Left).unwrap().is_empty());
    }

    #[test]
    fn shear_on_cohomological_axis_is_an_error() {
        let t = DimTable::new(&GradingScheme::xyc());
        assert!(matches!(
            shear(&t, "C", ShearDirection::Left),
            Err(GradeError::ShearCohomological(_))
        ));
    }

    #[test]
    fn tilde_images_of_generators() {
        let sub = Substitution::xy_to_tilde();
        assert!(sub.is_invertible());
        assert_eq!(sub.apply(&[2, 1, 0]), vec![1, 0, 0]);
        assert_eq!(sub.apply(&[-2, 0, 0]), vec![0, 2, 0]);
        assert_eq!(sub.apply(&[0, 1, -2]), vec![1, 2, -2]);
        assert_eq!(sub.inverse().unwrap(), Substitution::tilde_to_xy());
    }

    #[test]
    fn regrade_reports_undefined_axis() {
        let t = DimTable::new(&GradingScheme::tilde());
        assert!(matches!(
            regrade(&t, &Substitution::xy_to_tilde()),
            Err(GradeError::SubstitutionUndefined(a)) if a == "Xt"
        ));
    }

    #[test]
    fn periodize_point_gives_beta_orbit() {
        let s = GradingScheme::xyc();
        let t = DimTable::from_entries(&s, &[(&[], 1)]).unwrap();
        let w = Window::from_bounds(vec![AxisBound::FULL, AxisBound::between(-3, 3), AxisBound::FULL]);
        let p = periodize(&t, &w).unwrap();
        assert_eq!(p.len(), 7);
        for k in -3..=3 {
            assert_eq!(p.get(&[0, k, -2 * k]), Some(1));
        }
        assert!(periodize(&DimTable::new(&s), &w).unwrap().is_empty());
    }

    #[test]
    fn periodize_needs_bounded_orbits() {
        let s = GradingScheme::xyc();
        let t = DimTable::from_entries(&s, &[(&[], 1)]).unwrap();
        let w = Window::from_bounds(vec![AxisBound::between(0, 4), AxisBound::FULL, AxisBound::FULL]);
        assert!(matches!(periodize(&t, &w), Err(GradeError::WindowTooSmall(_))));
    }

    #[test]
    fn hom_shear_of_point() {
        let s = GradingScheme::xyc();
        let t = DimTable::from_entries(&s, &[(&[], 1)]).unwrap();
        let w = Window::from_bounds(vec![AxisBound::FULL, AxisBound::between(-2, 2), AxisBound::FULL]);
        let h = hom_shear_check(&t, &w).unwrap();
        for k in -2..=2 {
            assert_eq!(h.get(&[0, k, 2 * k]), Some(1));
        }
        assert_eq!(h.total(), 5);
    }
}
