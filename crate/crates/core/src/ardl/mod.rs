//! ARDL lag selection, bounds cointegration test and error-correction
//! estimation.
//!
//! The levels model for dependent `y` and regressors `x_1..x_k` is
//!
//! ```text
//! y_t = c + Σ_{i=1..p} φ_i y_{t-i} + Σ_j Σ_{i=0..q_j} θ_{j,i} x_{j,t-i} + ε_t
//! ```
//!
//! and its conditional error-correction form is
//!
//! ```text
//! Δy_t = c + π_y y_{t-1} + Σ_j π_j z_{j,t} + Σ_{i=1..p-1} a_i Δy_{t-i}
//!        + Σ_j Σ_{i=0..q_j-1} b_{j,i} Δx_{j,t-i} + ε_t
//! ```
//!
//! where `z_{j,t} = x_{j,t-1}` when `q_j ≥ 1` and `x_{j,t}` when `q_j = 0`.
//! Both forms have identical residuals.

mod bounds;
mod critical;
mod ecm;
mod select;

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linreg::{self, Criterion, RegressionFit};
use crate::timeseries::Dataset;

pub use bounds::{bounds_decision, bounds_f, BoundsDecision, BoundsResult};
pub use critical::{pesaran_cv, BoundsCase, CriticalBounds};
pub use ecm::{fit_ecm, Coefficient, EcmFit};
pub use select::{evaluate_grid, select_ardl, GridPoint};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArdlSpec {
    pub dependent: String,
    pub regressors: Vec<String>,
    pub p: usize,
    pub q: Vec<usize>,
    pub criterion: Option<Criterion>,
    /// Index of the first observation used in estimation.
    pub sample_start: usize,
}

impl ArdlSpec {
    /// Spec on the shortest sample its own lags allow.
    pub fn new(dependent: impl Into<String>, regressors: Vec<String>, p: usize, q: Vec<usize>) -> Result<Self> {
        let sample_start = q.iter().copied().max().unwrap_or(0).max(p);
        Self::with_sample_start(dependent, regressors, p, q, sample_start)
    }

    pub fn with_sample_start(
        dependent: impl Into<String>,
        regressors: Vec<String>,
        p: usize,
        q: Vec<usize>,
        sample_start: usize,
    ) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidArgument("ARDL needs p >= 1".into()));
        }
        if q.len() != regressors.len() {
            return Err(Error::InvalidArgument(format!(
                "{} regressor lags for {} regressors",
                q.len(),
                regressors.len()
            )));
        }
        if regressors.is_empty() {
            return Err(Error::InvalidArgument("ARDL needs at least one regressor".into()));
        }
        let needed = q.iter().copied().max().unwrap_or(0).max(p);
        if sample_start < needed {
            return Err(Error::InvalidArgument(format!(
                "sample start {sample_start} is before maximum lag {needed}"
            )));
        }
        Ok(Self {
            dependent: dependent.into(),
            regressors,
            p,
            q,
            criterion: None,
            sample_start,
        })
    }

    /// `(p, q_1, ..., q_k)`.
    pub fn lags(&self) -> Vec<usize> {
        std::iter::once(self.p).chain(self.q.iter().copied()).collect()
    }

    pub fn k(&self) -> usize {
        self.regressors.len()
    }
}

impl fmt::Display for ArdlSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lags().iter().map(|l| l.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A regression together with its data and column labels.
#[derive(Debug, Clone)]
pub struct LabeledFit {
    pub labels: Vec<String>,
    pub y: Vec<f64>,
    pub x: DMatrix<f64>,
    pub fit: RegressionFit,
    pub first_year: i32,
    pub last_year: i32,
}

impl LabeledFit {
    fn estimate(labels: Vec<String>, y: Vec<f64>, columns: Vec<Vec<f64>>, first_year: i32, last_year: i32) -> Result<Self> {
        let x = linreg::design(&columns)?;
        let fit = linreg::ols(&y, &x)?;
        Ok(Self { labels, y, x, fit, first_year, last_year })
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

struct Columns<'a> {
    spec: &'a ArdlSpec,
    y: &'a [f64],
    xs: Vec<&'a [f64]>,
}

impl<'a> Columns<'a> {
    fn new(spec: &'a ArdlSpec, d: &'a Dataset) -> Result<Self> {
        let y = d.require(&spec.dependent)?.values();
        let xs = spec
            .regressors
            .iter()
            .map(|n| d.require(n).map(|s| s.values()))
            .collect::<Result<Vec<_>>>()?;
        if spec.sample_start >= y.len() {
            return Err(Error::SampleTooShort {
                needed: spec.sample_start + 1,
                available: y.len(),
            });
        }
        Ok(Self { spec, y, xs })
    }

    fn rows(&self) -> std::ops::Range<usize> {
        self.spec.sample_start..self.y.len()
    }

    fn level(&self, v: &[f64], lag: usize) -> Vec<f64> {
        self.rows().map(|t| v[t - lag]).collect()
    }

    fn delta(&self, v: &[f64], lag: usize) -> Vec<f64> {
        self.rows().map(|t| v[t - lag] - v[t - lag - 1]).collect()
    }
}

fn years(spec: &ArdlSpec, d: &Dataset) -> (i32, i32) {
    (d.start_year() + spec.sample_start as i32, d.end_year())
}

pub(crate) fn check_sample(spec: &ArdlSpec, d: &Dataset) -> Result<()> {
    let n_params = 1 + spec.p + spec.q.iter().map(|q| q + 1).sum::<usize>();
    let available = d.len().saturating_sub(spec.sample_start);
    if available <= n_params {
        return Err(Error::SampleTooShort {
            needed: n_params + 1,
            available,
        });
    }
    Ok(())
}

/// Levels ARDL regression: constant, `y` lags, then each regressor's lags.
pub fn levels_regression(spec: &ArdlSpec, d: &Dataset) -> Result<LabeledFit> {
    check_sample(spec, d)?;
    let c = Columns::new(spec, d)?;
    let mut labels = vec!["C".to_string()];
    let mut cols = vec![vec![1.0; c.rows().len()]];
    for i in 1..=spec.p {
        labels.push(format!("{}(-{i})", spec.dependent));
        cols.push(c.level(c.y, i));
    }
    for (j, name) in spec.regressors.iter().enumerate() {
        for i in 0..=spec.q[j] {
            labels.push(lag_label(name, i));
            cols.push(c.level(c.xs[j], i));
        }
    }
    let (a, b) = years(spec, d);
    LabeledFit::estimate(labels, c.level(c.y, 0), cols, a, b)
}

/// Conditional error-correction regression. `with_levels = false` drops the
/// level terms and `with_constant = false` the intercept, which gives the
/// restricted models of the bounds test.
pub fn ecm_regression(spec: &ArdlSpec, d: &Dataset, with_constant: bool, with_levels: bool) -> Result<LabeledFit> {
    check_sample(spec, d)?;
    let c = Columns::new(spec, d)?;
    let n = c.rows().len();
    let mut labels = Vec::new();
    let mut cols = Vec::new();
    if with_constant {
        labels.push("C".to_string());
        cols.push(vec![1.0; n]);
    }
    if with_levels {
        labels.push(format!("{}(-1)", spec.dependent));
        cols.push(c.level(c.y, 1));
        for (j, name) in spec.regressors.iter().enumerate() {
            let lag = usize::from(spec.q[j] > 0);
            labels.push(lag_label(name, lag));
            cols.push(c.level(c.xs[j], lag));
        }
    }
    for i in 1..spec.p {
        labels.push(format!("D({})", lag_label(&spec.dependent, i)));
        cols.push(c.delta(c.y, i));
    }
    for (j, name) in spec.regressors.iter().enumerate() {
        for i in 0..spec.q[j] {
            labels.push(format!("D({})", lag_label(name, i)));
            cols.push(c.delta(c.xs[j], i));
        }
    }
    if cols.is_empty() {
        return Err(Error::InvalidArgument("error-correction regression has no columns".into()));
    }
    let (a, b) = years(spec, d);
    LabeledFit::estimate(labels, c.delta(c.y, 0), cols, a, b)
}

fn lag_label(name: &str, lag: usize) -> String {
    if lag == 0 {
        name.to_string()
    } else {
        format!("{name}(-{lag})")
    }
}
