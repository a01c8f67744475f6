//! Degree lattices and multigraded dimension tables.
//!
//! A [`DimTable`] is a finitely supported function from a lattice of degrees to
//! nonnegative integers, together with a [`Window`] that records where the table
//! is known. Inside the window an absent entry means zero; outside it the value
//! is unknown, so equality of tables is only decided on the common window.

mod calculus;
mod table;

pub use calculus::{
    deg_beta_tilde, deg_beta_xy, hom_shear_check, periodize, periodize_vs_shear_degrade, regrade,
    shear, shift, ShearDirection, Substitution,
};
pub use table::{AxisBound, Constraint, DimTable, DimTableJson, Window};

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradeError {
    #[error("axis mismatch: {0}")]
    AxisMismatch(String),
    #[error("unknown axis `{0}`")]
    UnknownAxis(String),
    #[error("invalid grading scheme: {0}")]
    InvalidScheme(String),
    #[error("cannot shear along the cohomological axis `{0}`")]
    ShearCohomological(String),
    #[error("substitution undefined on axis `{0}`")]
    SubstitutionUndefined(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("input table is truncated along `{0}`; the orbit sum would read unknown entries")]
    TruncatedInput(String),
    #[error("malformed table data: {0}")]
    Malformed(String),
}

/// Ordered list of named grading axes, one of which is cohomological.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradingScheme {
    axes: Vec<String>,
    cohomological: usize,
}

impl GradingScheme {
    pub fn new(axes: &[&str], cohomological: &str) -> Result<Arc<Self>, GradeError> {
        let axes: Vec<String> = axes.iter().map(|s| s.to_string()).collect();
        for (i, a) in axes.iter().enumerate() {
            if axes[..i].contains(a) {
                return Err(GradeError::InvalidScheme(format!("duplicate axis `{a}`")));
            }
        }
        let cohomological = axes
            .iter()
            .position(|a| a == cohomological)
            .ok_or_else(|| {
                GradeError::InvalidScheme(format!("cohomological axis `{cohomological}` not listed"))
            })?;
        Ok(Arc::new(Self { axes, cohomological }))
    }

    pub fn axes(&self) -> &[String] {
        &self.axes
    }

    pub fn rank(&self) -> usize {
        self.axes.len()
    }

    pub fn cohomological(&self) -> usize {
        self.cohomological
    }

    pub fn cohomological_name(&self) -> &str {
        &self.axes[self.cohomological]
    }

    pub fn index(&self, axis: &str) -> Result<usize, GradeError> {
        self.axes
            .iter()
            .position(|a| a == axis)
            .ok_or_else(|| GradeError::UnknownAxis(axis.to_string()))
    }

    pub fn has(&self, axis: &str) -> bool {
        self.axes.iter().any(|a| a == axis)
    }

    /// The degree with every exponent zero.
    pub fn zero(self: &Arc<Self>) -> MultiDegree {
        MultiDegree { scheme: self.clone(), exps: vec![0; self.rank()] }
    }

    /// Builds a degree from `(axis, exponent)` pairs; unnamed axes are zero.
    pub fn degree(self: &Arc<Self>, parts: &[(&str, i64)]) -> Result<MultiDegree, GradeError> {
        let mut exps = vec![0; self.rank()];
        for (axis, e) in parts {
            exps[self.index(axis)?] += e;
        }
        Ok(MultiDegree { scheme: self.clone(), exps })
    }

    /// `(C, X)`: the Soergel-side scheme with one formal grading.
    pub fn cx() -> Arc<Self> {
        Self::new(&["X", "C"], "C").expect("static scheme")
    }

    /// `(X, Y, C)`: formal grading plus the extra grading.
    pub fn xyc() -> Arc<Self> {
        Self::new(&["X", "Y", "C"], "C").expect("static scheme")
    }

    /// `(X~, Y~, C)`: the tilde grading.
    pub fn tilde() -> Arc<Self> {
        Self::new(&["Xt", "Yt", "C"], "C").expect("static scheme")
    }
}

impl fmt::Display for GradingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.axes.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if i == self.cohomological {
                write!(f, "*")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// An integer exponent per axis of a fixed scheme.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiDegree {
    scheme: Arc<GradingScheme>,
    exps: Vec<i64>,
}

impl MultiDegree {
    pub fn from_exps(scheme: &Arc<GradingScheme>, exps: Vec<i64>) -> Result<Self, GradeError> {
        if exps.len() != scheme.rank() {
            return Err(GradeError::AxisMismatch(format!(
                "{} exponents for scheme {}",
                exps.len(),
                scheme
            )));
        }
        Ok(Self { scheme: scheme.clone(), exps })
    }

    pub fn scheme(&self) -> &Arc<GradingScheme> {
        &self.scheme
    }

    pub fn exps(&self) -> &[i64] {
        &self.exps
    }

    pub fn get(&self, axis: &str) -> Result<i64, GradeError> {
        Ok(self.exps[self.scheme.index(axis)?])
    }

    pub fn neg(&self) -> Self {
        Self { scheme: self.scheme.clone(), exps: self.exps.iter().map(|e| -e).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self, GradeError> {
        if self.scheme != other.scheme {
            return Err(GradeError::AxisMismatch(format!("{} vs {}", self.scheme, other.scheme)));
        }
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Ok(Self { scheme: self.scheme.clone(), exps })
    }

    pub fn scale(&self, k: i64) -> Self {
        Self { scheme: self.scheme.clone(), exps: self.exps.iter().map(|e| e * k).collect() }
    }

    /// The cohomological shift `[k]`: moves a degree `d` object to `d - k`.
    pub fn cohomological_shift(scheme: &Arc<GradingScheme>, k: i64) -> Self {
        let mut exps = vec![0; scheme.rank()];
        exps[scheme.cohomological()] = -k;
        Self { scheme: scheme.clone(), exps }
    }

    /// The grading shift `<k>` on a formal axis.
    pub fn grading_shift(
        scheme: &Arc<GradingScheme>,
        axis: &str,
        k: i64,
    ) -> Result<Self, GradeError> {
        let i = scheme.index(axis)?;
        if i == scheme.cohomological() {
            return Err(GradeError::AxisMismatch(format!("`{axis}` is cohomological")));
        }
        let mut exps = vec![0; scheme.rank()];
        exps[i] = k;
        Ok(Self { scheme: scheme.clone(), exps })
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (a, e)) in self.scheme.axes().iter().zip(&self.exps).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}={e}")?;
        }
        write!(f, ")")
    }
}
