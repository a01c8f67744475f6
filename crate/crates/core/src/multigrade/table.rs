use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{GradeError, GradingScheme, MultiDegree};

/// Known range along one axis; `None` on a side means the table is complete
/// in that direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash, Serialize, Deserialize)]
pub struct AxisBound {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl AxisBound {
    pub const FULL: AxisBound = AxisBound { lo: None, hi: None };

    pub fn between(lo: i64, hi: i64) -> Self {
        Self { lo: Some(lo), hi: Some(hi) }
    }

    pub fn at_most(hi: i64) -> Self {
        Self { lo: None, hi: Some(hi) }
    }

    pub fn at_least(lo: i64) -> Self {
        Self { lo: Some(lo), hi: None }
    }

    pub fn contains(&self, v: i64) -> bool {
        self.lo.is_none_or(|lo| v >= lo) && self.hi.is_none_or(|hi| v <= hi)
    }

    pub fn is_full(&self) -> bool {
        self.lo.is_none() && self.hi.is_none()
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let lo = match (self.lo, other.lo) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let hi = match (self.hi, other.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Self { lo, hi }
    }
}

/// One linear inequality `lo <= coeffs . d <= hi` on degrees `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<i64>,
    pub bound: AxisBound,
}

impl Constraint {
    fn value(&self, exps: &[i64]) -> i64 {
        self.coeffs.iter().zip(exps).map(|(a, b)| a * b).sum()
    }

    fn unit_axis(&self) -> Option<usize> {
        let mut nz = self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0);
        match (nz.next(), nz.next()) {
            (Some((i, 1)), None) => Some(i),
            _ => None,
        }
    }
}

/// The region of known degrees: an intersection of linear slabs.
///
/// Slabs stay exact under shifts and unimodular regradings (shears, the
/// tilde change of variables), which boxes would not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    rank: usize,
    constraints: Vec<Constraint>,
}

impl Window {
    pub fn full(rank: usize) -> Self {
        Self { rank, constraints: Vec::new() }
    }

    pub fn from_bounds(bounds: Vec<AxisBound>) -> Self {
        let mut w = Self::full(bounds.len());
        for (i, b) in bounds.into_iter().enumerate() {
            w.set(i, b);
        }
        w
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Adds the bound `b` on a single axis.
    pub fn set(&mut self, axis: usize, b: AxisBound) {
        if b.is_full() {
            return;
        }
        let mut coeffs = vec![0; self.rank];
        coeffs[axis] = 1;
        self.push(Constraint { coeffs, bound: b });
    }

    pub fn push(&mut self, c: Constraint) {
        assert_eq!(c.coeffs.len(), self.rank);
        if c.coeffs.iter().all(|&a| a == 0) || c.bound.is_full() {
            return;
        }
        if let Some(existing) = self.constraints.iter_mut().find(|e| e.coeffs == c.coeffs) {
            existing.bound = existing.bound.intersect(&c.bound);
        } else {
            self.constraints.push(c);
        }
    }

    /// Tightest bound on one axis implied by the single-axis constraints.
    pub fn bound(&self, axis: usize) -> AxisBound {
        self.constraints
            .iter()
            .filter(|c| c.unit_axis() == Some(axis))
            .fold(AxisBound::FULL, |acc, c| acc.intersect(&c.bound))
    }

    pub fn contains(&self, exps: &[i64]) -> bool {
        self.constraints.iter().all(|c| c.bound.contains(c.value(exps)))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut w = self.clone();
        for c in &other.constraints {
            w.push(c.clone());
        }
        w
    }

    /// The window of a table whose entries were all moved by `by`.
    pub fn shifted(&self, by: &[i64]) -> Self {
        let constraints = self
            .constraints
            .iter()
            .map(|c| {
                let off: i64 = c.coeffs.iter().zip(by).map(|(a, b)| a * b).sum();
                Constraint {
                    coeffs: c.coeffs.clone(),
                    bound: AxisBound { lo: c.bound.lo.map(|v| v + off), hi: c.bound.hi.map(|v| v + off) },
                }
            })
            .collect();
        Self { rank: self.rank, constraints }
    }

    /// The window after relabelling degrees by `d -> M d`, given the integer
    /// inverse `inverse` of `M` (target rank x ... as rows of M^-1).
    pub fn transformed(&self, inverse: &[Vec<i64>]) -> Self {
        let rank = inverse.len();
        let mut w = Self::full(rank);
        for c in &self.constraints {
            // coeffs . (M^-1 d') = (coeffs^T M^-1) . d'
            let coeffs = (0..rank)
                .map(|j| c.coeffs.iter().enumerate().map(|(i, a)| a * inverse[i][j]).sum())
                .collect();
            w.push(Constraint { coeffs, bound: c.bound });
        }
        w
    }

    pub fn is_full(&self) -> bool {
        self.constraints.is_empty()
    }

    /// True if some two-sided constraint cuts the line through direction `v`
    /// into a bounded piece.
    pub fn bounds_direction(&self, v: &[i64]) -> bool {
        self.constraints
            .iter()
            .any(|c| c.bound.is_bounded() && c.value(v) != 0)
    }

    /// True if no constraint restricts movement along `v`.
    pub fn complete_along(&self, v: &[i64]) -> bool {
        self.constraints.iter().all(|c| c.value(v) == 0)
    }

    /// Range of `k` with `base + k v` inside the window, when finite.
    pub fn line_range(&self, base: &[i64], v: &[i64]) -> Option<(i64, i64)> {
        let mut lo = i64::MIN;
        let mut hi = i64::MAX;
        for c in &self.constraints {
            let s = c.value(v);
            let b = c.value(base);
            if s == 0 {
                if !c.bound.contains(b) {
                    return Some((1, 0));
                }
                continue;
            }
            // lo_c <= b + k s <= hi_c
            let (l, h) = (c.bound.lo, c.bound.hi);
            let (kl, kh) = if s > 0 {
                (l.map(|l| div_ceil(l - b, s)), h.map(|h| div_floor(h - b, s)))
            } else {
                (h.map(|h| div_ceil(h - b, s)), l.map(|l| div_floor(l - b, s)))
            };
            if let Some(kl) = kl {
                lo = lo.max(kl);
            }
            if let Some(kh) = kh {
                hi = hi.min(kh);
            }
        }
        (lo != i64::MIN && hi != i64::MAX).then_some((lo, hi))
    }
}

fn div_floor(a: i64, b: i64) -> i64 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

/// Nonnegative integer dimensions indexed by degrees of a scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimTable {
    scheme: Arc<GradingScheme>,
    entries: BTreeMap<Vec<i64>, u64>,
    window: Window,
}

impl DimTable {
    pub fn new(scheme: &Arc<GradingScheme>) -> Self {
        Self { scheme: scheme.clone(), entries: BTreeMap::new(), window: Window::full(scheme.rank()) }
    }

    pub fn with_window(scheme: &Arc<GradingScheme>, window: Window) -> Self {
        assert_eq!(window.rank(), scheme.rank(), "window rank must match the scheme");
        Self { scheme: scheme.clone(), entries: BTreeMap::new(), window }
    }

    pub fn scheme(&self) -> &Arc<GradingScheme> {
        &self.scheme
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn set_window(&mut self, window: Window) {
        assert_eq!(window.rank(), self.scheme.rank());
        self.window = window;
    }

    /// Adds `dim` at the given exponent vector (zero adds are ignored).
    pub fn add(&mut self, exps: Vec<i64>, dim: u64) {
        debug_assert_eq!(exps.len(), self.scheme.rank());
        if dim == 0 {
            return;
        }
        *self.entries.entry(exps).or_insert(0) += dim;
    }

    pub fn add_degree(&mut self, d: &MultiDegree, dim: u64) -> Result<(), GradeError> {
        if d.scheme() != &self.scheme {
            return Err(GradeError::AxisMismatch(format!("{} vs {}", d.scheme(), self.scheme)));
        }
        self.add(d.exps().to_vec(), dim);
        Ok(())
    }

    /// Builds a table from `(axis, exponent)` lists.
    pub fn from_entries(
        scheme: &Arc<GradingScheme>,
        entries: &[(&[(&str, i64)], u64)],
    ) -> Result<Self, GradeError> {
        let mut t = Self::new(scheme);
        for (parts, dim) in entries {
            let d = scheme.degree(parts)?;
            t.add_degree(&d, *dim)?;
        }
        Ok(t)
    }

    /// `Some(dim)` inside the window (absent = 0), `None` outside.
    pub fn get(&self, exps: &[i64]) -> Option<u64> {
        if self.window.contains(exps) {
            Some(self.entries.get(exps).copied().unwrap_or(0))
        } else {
            None
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<i64>, u64)> {
        self.entries.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Drops entries outside `window` and narrows the window to it.
    pub fn restrict(&self, window: &Window) -> Self {
        let window = self.window.intersect(window);
        let entries = self
            .entries
            .iter()
            .filter(|(k, _)| window.contains(k))
            .map(|(k, v)| (k.clone(), *v))
            .collect();
        Self { scheme: self.scheme.clone(), entries, window }
    }

    /// Window-aware equality: compares only degrees both tables know.
    pub fn eq_on_window(&self, other: &Self) -> bool {
        if self.scheme != other.scheme {
            return false;
        }
        let common = self.window.intersect(&other.window);
        let keys = self.entries.keys().chain(other.entries.keys());
        for k in keys {
            if !common.contains(k) {
                continue;
            }
            if self.entries.get(k).copied().unwrap_or(0) != other.entries.get(k).copied().unwrap_or(0)
            {
                return false;
            }
        }
        true
    }

    /// The first degree (in the common window) where the tables differ.
    pub fn first_difference(&self, other: &Self) -> Option<(Vec<i64>, u64, u64)> {
        let common = self.window.intersect(&other.window);
        let mut keys: Vec<&Vec<i64>> = self.entries.keys().chain(other.entries.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().filter(|k| common.contains(k)).find_map(|k| {
            let a = self.entries.get(k).copied().unwrap_or(0);
            let b = other.entries.get(k).copied().unwrap_or(0);
            (a != b).then(|| (k.clone(), a, b))
        })
    }

    /// Sum over one axis; the result lives on the scheme without it.
    pub fn degrade(&self, axis: &str, target: &Arc<GradingScheme>) -> Result<Self, GradeError> {
        let drop = self.scheme.index(axis)?;
        let map: Vec<usize> = target
            .axes()
            .iter()
            .map(|a| self.scheme.index(a))
            .collect::<Result<_, _>>()?;
        if map.contains(&drop) || target.rank() + 1 != self.scheme.rank() {
            return Err(GradeError::AxisMismatch(format!(
                "degrading {} along {axis} into {target}",
                self.scheme
            )));
        }
        let mut window = Window::full(target.rank());
        for c in self.window.constraints() {
            if c.coeffs[drop] != 0 {
                return Err(GradeError::TruncatedInput(axis.to_string()));
            }
            window.push(Constraint { coeffs: map.iter().map(|&i| c.coeffs[i]).collect(), bound: c.bound });
        }
        let mut out = Self::with_window(target, window);
        for (k, v) in &self.entries {
            out.add(map.iter().map(|&i| k[i]).collect(), *v);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> DimTableJson {
        let axes = self.scheme.axes().to_vec();
        let window = self
            .window
            .constraints()
            .iter()
            .map(|c| WindowJson {
                coeffs: axes
                    .iter()
                    .cloned()
                    .zip(c.coeffs.iter().copied())
                    .filter(|(_, v)| *v != 0)
                    .collect(),
                lo: c.bound.lo,
                hi: c.bound.hi,
            })
            .collect();
        let entries = self
            .entries
            .iter()
            .map(|(k, v)| EntryJson {
                degree: axes.iter().cloned().zip(k.iter().copied()).collect(),
                dim: *v,
            })
            .collect();
        DimTableJson {
            axes,
            cohomological: self.scheme.cohomological_name().to_string(),
            window,
            entries,
        }
    }

    pub fn from_json(json: &DimTableJson) -> Result<Self, GradeError> {
        let names: Vec<&str> = json.axes.iter().map(String::as_str).collect();
        let scheme = GradingScheme::new(&names, &json.cohomological)?;
        let mut window = Window::full(scheme.rank());
        for w in &json.window {
            let mut coeffs = vec![0; scheme.rank()];
            for (axis, v) in &w.coeffs {
                coeffs[scheme.index(axis)?] = *v;
            }
            window.push(Constraint { coeffs, bound: AxisBound { lo: w.lo, hi: w.hi } });
        }
        let mut t = Self::with_window(&scheme, window);
        for e in &json.entries {
            let mut exps = vec![0; scheme.rank()];
            for (axis, v) in &e.degree {
                exps[scheme.index(axis)?] = *v;
            }
            if e.dim == 0 {
                return Err(GradeError::Malformed("zero entry".into()));
            }
            t.add(exps, e.dim);
        }
        Ok(t)
    }
}

impl fmt::Display for DimTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} [{} entries]", self.scheme, self.entries.len())?;
        for (k, v) in &self.entries {
            writeln!(f, "  {k:?}: {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimTableJson {
    pub axes: Vec<String>,
    pub cohomological: String,
    pub window: Vec<WindowJson>,
    pub entries: Vec<EntryJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowJson {
    pub coeffs: BTreeMap<String, i64>,
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub degree: BTreeMap<String, i64>,
    pub dim: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn absent_inside_window_is_zero_outside_unknown() {
        let s = GradingScheme::cx();
        let mut w = Window::full(2);
        w.set(0, AxisBound::at_most(4));
        let mut t = DimTable::with_window(&s, w);
        t.add(vec![2, 0], 1);
        assert_eq!(t.get(&[2, 0]), Some(1));
        assert_eq!(t.get(&[4, 0]), Some(0));
        assert_eq!(t.get(&[6, 0]), None);
    }

    #[test]
    fn equality_only_on_common_window() {
        let s = GradingScheme::cx();
        let mut a = DimTable::new(&s);
        a.add(vec![0, 0], 1);
        a.add(vec![10, 0], 3);
        let mut w = Window::full(2);
        w.set(0, AxisBound::at_most(4));
        let mut b = DimTable::with_window(&s, w);
        b.add(vec![0, 0], 1);
        assert!(a.eq_on_window(&b));
        b.add(vec![2, 0], 1);
        assert!(!a.eq_on_window(&b));
        assert_eq!(a.first_difference(&b), Some((vec![2, 0], 0, 1)));
    }

    #[test]
    fn json_round_trip_keeps_window() {
        let s = GradingScheme::xyc();
        let mut w = Window::full(3);
        w.set(1, AxisBound::between(-3, 3));
        let mut t = DimTable::with_window(&s, w);
        t.add(vec![1, -2, 0], 2);
        t.add(vec![0, 1, -2], 5);
        let j = serde_json::to_string(&t.to_json()).unwrap();
        let back = DimTable::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, t);
    }
}
