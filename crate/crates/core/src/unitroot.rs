//! Augmented Dickey-Fuller and Phillips-Perron unit-root tests.
//!
//! Both tests share the Dickey-Fuller regression
//!
//! ```text
//! Δy_t = α [+ β t] + γ y_{t-1} + Σ_{i=1..p} φ_i Δy_{t-i} + ε_t
//! ```
//!
//! ADF reports the t-ratio on γ with `p` augmentation lags. PP runs the
//! unaugmented regression and corrects the t-ratio with the Bartlett long-run
//! variance of the residuals. Critical values come from MacKinnon's (2010)
//! response surfaces for a single series.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linreg::{self, Criterion, HacOptions, RegressionFit};
use crate::significance::Significance;
use crate::timeseries::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeterministicSpec {
    Constant,
    ConstantTrend,
}

impl DeterministicSpec {
    fn n_terms(self) -> usize {
        match self {
            DeterministicSpec::Constant => 1,
            DeterministicSpec::ConstantTrend => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            DeterministicSpec::Constant => "constant",
            DeterministicSpec::ConstantTrend => "constant and trend",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LagPolicy {
    Fixed(usize),
    /// Minimize `criterion` over lags `0..=max_lag`. `None` means
    /// `min(4, floor((T - 1) / 5))`.
    Auto {
        criterion: Criterion,
        max_lag: Option<usize>,
    },
}

impl Default for LagPolicy {
    fn default() -> Self {
        LagPolicy::Auto {
            criterion: Criterion::Aic,
            max_lag: None,
        }
    }
}

pub fn default_max_lag(n: usize) -> usize {
    4.min(n.saturating_sub(1) / 5)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    Adf,
    PhillipsPerron,
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestKind::Adf => "ADF",
            TestKind::PhillipsPerron => "PP",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalValues {
    #[serde(rename = "1%")]
    pub one: f64,
    #[serde(rename = "5%")]
    pub five: f64,
    #[serde(rename = "10%")]
    pub ten: f64,
}

impl CriticalValues {
    pub fn get(&self, level: Significance) -> Result<f64> {
        match level {
            Significance::OnePercent => Ok(self.one),
            Significance::FivePercent => Ok(self.five),
            Significance::TenPercent => Ok(self.ten),
            other => Err(Error::Unsupported(format!(
                "unit-root critical value at {other}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitRootResult {
    pub series: String,
    /// First year of the tested series (before lags are dropped).
    pub first_year: i32,
    pub test: TestKind,
    pub spec: DeterministicSpec,
    pub tau: f64,
    /// Augmentation lag for ADF, Bartlett bandwidth for PP.
    pub lag_or_bandwidth: usize,
    pub n_obs: usize,
    pub critical_values: CriticalValues,
}

impl UnitRootResult {
    /// Left-tailed decision at `level`.
    pub fn rejects(&self, level: Significance) -> bool {
        self.critical_values
            .get(level)
            .map(|cv| self.tau < cv)
            .unwrap_or(false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntegrationOrder {
    I0,
    I1,
    Higher,
}

impl fmt::Display for IntegrationOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntegrationOrder::I0 => "I(0)",
            IntegrationOrder::I1 => "I(1)",
            IntegrationOrder::Higher => "I(2+)",
        })
    }
}

/// The Dickey-Fuller regression with `lags` augmentation terms. Rows start at
/// differenced index `start` so that several lag orders can share a sample.
fn df_regression(
    y: &[f64],
    spec: DeterministicSpec,
    lags: usize,
    start: usize,
) -> Result<RegressionFit> {
    let dy: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    let rows = dy.len().saturating_sub(start);
    let k = spec.n_terms() + 1 + lags;
    if rows < k + 2 {
        return Err(Error::SampleTooShort {
            needed: k + 2,
            available: rows,
        });
    }
    let x = DMatrix::from_fn(rows, k, |r, c| {
        let i = start + r;
        match (spec, c) {
            (_, 0) => 1.0,
            (DeterministicSpec::ConstantTrend, 1) => (i + 1) as f64,
            (_, c) if c == spec.n_terms() => y[i],
            (_, c) => dy[i - (c - spec.n_terms())],
        }
    });
    linreg::ols(&dy[start..], &x)
}

fn tau_of(fit: &RegressionFit, spec: DeterministicSpec) -> f64 {
    let j = spec.n_terms();
    fit.coefficients[j] / fit.covariance[(j, j)].sqrt()
}

pub fn adf(s: &TimeSeries, spec: DeterministicSpec, policy: LagPolicy) -> Result<UnitRootResult> {
    let y = s.values();
    let usable = y.len().saturating_sub(1);
    let lag = match policy {
        LagPolicy::Fixed(p) => p,
        LagPolicy::Auto { criterion, max_lag } => {
            let max = max_lag.unwrap_or_else(|| default_max_lag(y.len()));
            if max >= usable {
                return Err(Error::InvalidArgument(format!(
                    "maximum lag {max} leaves no usable sample of {usable} differences"
                )));
            }
            select_lag(y, spec, criterion, max)?
        }
    };
    let fit = df_regression(y, spec, lag, lag)?;
    Ok(UnitRootResult {
        series: s.name().to_string(),
        first_year: s.start_year(),
        test: TestKind::Adf,
        spec,
        tau: tau_of(&fit, spec),
        lag_or_bandwidth: lag,
        n_obs: fit.n_obs,
        critical_values: critical_values(spec, fit.n_obs)?,
    })
}

/// Lag minimizing `criterion` with every candidate on the sample of `max`.
fn select_lag(y: &[f64], spec: DeterministicSpec, criterion: Criterion, max: usize) -> Result<usize> {
    let mut best: Option<(f64, usize)> = None;
    for p in 0..=max {
        let fit = df_regression(y, spec, p, max)?;
        let value = linreg::info_criteria(&fit).get(criterion);
        if best.is_none_or(|(v, _)| value < v) {
            best = Some((value, p));
        }
    }
    Ok(best.map(|(_, p)| p).unwrap_or(0))
}

/// Phillips-Perron Z(t) test.
pub fn pp(s: &TimeSeries, spec: DeterministicSpec, bandwidth: linreg::Bandwidth) -> Result<UnitRootResult> {
    let fit = df_regression(s.values(), spec, 0, 0)?;
    if fit.exact_fit() {
        return Err(Error::DegenerateFit(format!(
            "Dickey-Fuller regression for `{}` has zero residuals",
            s.name()
        )));
    }
    let t = fit.n_obs;
    let opts = HacOptions {
        bandwidth,
        ..HacOptions::default()
    };
    let l = opts.resolve(t);
    let gamma0 = linreg::newey_west_lrv(&fit.residuals, &HacOptions::fixed(0))?;
    let lrv = linreg::newey_west_lrv(&fit.residuals, &HacOptions::fixed(l))?;
    if !(lrv > 0.0) {
        return Err(Error::DegenerateFit(format!(
            "non-positive long-run variance {lrv} for `{}`",
            s.name()
        )));
    }
    let j = spec.n_terms();
    let se = fit.covariance[(j, j)].sqrt();
    let t_gamma = fit.coefficients[j] / se;
    let s_reg = fit.sigma2_unbiased().sqrt();
    let tau = t_gamma * (gamma0 / lrv).sqrt()
        - t as f64 * (lrv - gamma0) * se / (2.0 * lrv.sqrt() * s_reg);
    Ok(UnitRootResult {
        series: s.name().to_string(),
        first_year: s.start_year(),
        test: TestKind::PhillipsPerron,
        spec,
        tau,
        lag_or_bandwidth: l,
        n_obs: t,
        critical_values: critical_values(spec, t)?,
    })
}

// MacKinnon (2010), single series: beta_inf, beta_1, beta_2, beta_3.
const MACKINNON_C: [[f64; 4]; 3] = [
    [-3.43035, -6.5393, -16.786, -79.433],
    [-2.86154, -2.8903, -4.234, -40.040],
    [-2.56677, -1.5384, -2.809, 0.0],
];
const MACKINNON_CT: [[f64; 4]; 3] = [
    [-3.95877, -9.0531, -28.428, -134.155],
    [-3.41049, -4.3904, -9.036, -45.374],
    [-3.12705, -2.5856, -3.925, -22.380],
];

/// Finite-sample critical value `β∞ + β1/T + β2/T² + β3/T³`.
pub fn mackinnon_cv(spec: DeterministicSpec, t: usize, level: Significance) -> Result<f64> {
    if t < 10 {
        return Err(Error::SampleTooShort {
            needed: 10,
            available: t,
        });
    }
    let row = match level {
        Significance::OnePercent => 0,
        Significance::FivePercent => 1,
        Significance::TenPercent => 2,
        other => {
            return Err(Error::Unsupported(format!(
                "unit-root critical value at {other}"
            )))
        }
    };
    let b = match spec {
        DeterministicSpec::Constant => MACKINNON_C[row],
        DeterministicSpec::ConstantTrend => MACKINNON_CT[row],
    };
    let inv = 1.0 / t as f64;
    Ok(b[0] + inv * (b[1] + inv * (b[2] + inv * b[3])))
}

fn critical_values(spec: DeterministicSpec, t: usize) -> Result<CriticalValues> {
    Ok(CriticalValues {
        one: mackinnon_cv(spec, t, Significance::OnePercent)?,
        five: mackinnon_cv(spec, t, Significance::FivePercent)?,
        ten: mackinnon_cv(spec, t, Significance::TenPercent)?,
    })
}

/// I(0) if the level test rejects, I(1) if only the first-difference test
/// rejects, higher otherwise.
pub fn classify_order(
    level: &UnitRootResult,
    first_diff: &UnitRootResult,
    significance: Significance,
) -> Result<IntegrationOrder> {
    if level.series != first_diff.series
        || level.test != first_diff.test
        || level.spec != first_diff.spec
        || first_diff.first_year != level.first_year + 1
    {
        return Err(Error::InvalidArgument(format!(
            "level result ({} {} {}) and difference result ({} {} {}) do not describe the same series",
            level.series, level.test, level.first_year,
            first_diff.series, first_diff.test, first_diff.first_year,
        )));
    }
    Ok(if level.rejects(significance) {
        IntegrationOrder::I0
    } else if first_diff.rejects(significance) {
        IntegrationOrder::I1
    } else {
        IntegrationOrder::Higher
    })
}
