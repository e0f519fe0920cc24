//! Ordinary least squares with classical covariance, Newey-West long-run
//! variance, information criteria and nested-model F tests.

use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special;

/// Reciprocal condition number (of the column-equilibrated design) below
/// which a design is treated as rank deficient.
pub const RCOND_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct RegressionFit {
    pub coefficients: Vec<f64>,
    /// Classical covariance, `rss / (T - k) * (X'X)^-1`.
    pub covariance: DMatrix<f64>,
    pub xtx_inv: DMatrix<f64>,
    pub residuals: Vec<f64>,
    pub fitted: Vec<f64>,
    pub rss: f64,
    /// `rss / T`, the concentrated-likelihood variance used by the criteria.
    pub sigma2: f64,
    pub n_obs: usize,
    pub n_params: usize,
    /// Centered total sum of squares of the dependent variable.
    pub tss: f64,
    /// Reciprocal condition number of the equilibrated design.
    pub rcond: f64,
}

impl RegressionFit {
    pub fn dof(&self) -> usize {
        self.n_obs - self.n_params
    }

    pub fn sigma2_unbiased(&self) -> f64 {
        self.rss / self.dof() as f64
    }

    pub fn std_errors(&self) -> Vec<f64> {
        (0..self.n_params)
            .map(|i| self.covariance[(i, i)].max(0.0).sqrt())
            .collect()
    }

    pub fn t_stats(&self) -> Vec<f64> {
        self.coefficients
            .iter()
            .zip(self.std_errors())
            .map(|(b, se)| b / se)
            .collect()
    }

    /// Two-sided p-values from Student-t with `T - k` degrees of freedom.
    pub fn p_values(&self) -> Vec<f64> {
        let df = self.dof() as f64;
        self.t_stats()
            .into_iter()
            .map(|t| {
                if t.is_nan() {
                    f64::NAN
                } else {
                    special::t_two_sided(t, df)
                }
            })
            .collect()
    }

    pub fn r_squared(&self) -> f64 {
        if self.tss > 0.0 {
            1.0 - self.rss / self.tss
        } else {
            0.0
        }
    }

    pub fn dependent(&self) -> Vec<f64> {
        self.fitted
            .iter()
            .zip(&self.residuals)
            .map(|(f, e)| f + e)
            .collect()
    }

    /// Residuals vanish to rounding level relative to the dependent variable.
    pub fn exact_fit(&self) -> bool {
        let scale: f64 = self.dependent().iter().map(|v| v * v).sum();
        self.rss <= 1e-20 * scale.max(f64::MIN_POSITIVE)
    }

    /// Standard error of a linear combination `c'b`.
    pub fn combination_se(&self, weights: &[f64]) -> f64 {
        let c = DVector::from_column_slice(weights);
        (c.transpose() * &self.covariance * &c)[(0, 0)].max(0.0).sqrt()
    }
}

/// Builds a design matrix from equally long columns.
pub fn design(columns: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = columns.first().map_or(0, Vec::len);
    if columns.iter().any(|c| c.len() != n) {
        return Err(Error::InvalidArgument("design columns differ in length".into()));
    }
    Ok(DMatrix::from_fn(n, columns.len(), |i, j| columns[j][i]))
}

pub(crate) struct LeastSquares {
    pub coefficients: Vec<f64>,
    pub xtx_inv: DMatrix<f64>,
    pub rcond: f64,
}

/// Minimum-norm least squares through the SVD of the column-equilibrated
/// design. Requires `rows >= cols` and full column rank.
pub(crate) fn least_squares(y: &[f64], x: &DMatrix<f64>) -> Result<LeastSquares> {
    let (n, k) = x.shape();
    if y.len() != n {
        return Err(Error::InvalidArgument(format!(
            "dependent has {} rows, design has {n}",
            y.len()
        )));
    }
    if k == 0 {
        return Ok(LeastSquares {
            coefficients: Vec::new(),
            xtx_inv: DMatrix::zeros(0, 0),
            rcond: 1.0,
        });
    }
    if n < k {
        return Err(Error::SampleTooShort {
            needed: k,
            available: n,
        });
    }
    let norms: Vec<f64> = (0..k).map(|j| x.column(j).norm()).collect();
    if norms.iter().any(|&s| s == 0.0 || !s.is_finite()) {
        return Err(Error::RankDeficient { rcond: 0.0 });
    }
    let scaled = DMatrix::from_fn(n, k, |i, j| x[(i, j)] / norms[j]);
    let svd = scaled.svd(true, true);
    let s = &svd.singular_values;
    let smax = s.max();
    let smin = s.min();
    let rcond = if smax > 0.0 { smin / smax } else { 0.0 };
    if !(rcond >= RCOND_TOLERANCE) {
        return Err(Error::RankDeficient { rcond });
    }
    let u = svd.u.expect("u requested");
    let v = svd.v_t.expect("v_t requested").transpose();
    let uty = u.transpose() * DVector::from_column_slice(y);
    let scaled_coef = &v * DVector::from_fn(k, |i, _| uty[i] / s[i]);
    let coefficients = (0..k).map(|j| scaled_coef[j] / norms[j]).collect();
    let inner = &v * DMatrix::from_diagonal(&s.map(|si| 1.0 / (si * si))) * v.transpose();
    let mut xtx_inv = DMatrix::from_fn(k, k, |i, j| inner[(i, j)] / (norms[i] * norms[j]));
    xtx_inv = (&xtx_inv + xtx_inv.transpose()) * 0.5;
    Ok(LeastSquares {
        coefficients,
        xtx_inv,
        rcond,
    })
}

/// OLS of `y` on the columns of `x`. Intercept or trend columns, if wanted,
/// must be included in `x` by the caller.
pub fn ols(y: &[f64], x: &DMatrix<f64>) -> Result<RegressionFit> {
    let (n, k) = x.shape();
    if n <= k {
        return Err(Error::SampleTooShort {
            needed: k + 1,
            available: n,
        });
    }
    let ls = least_squares(y, x)?;
    let b = DVector::from_column_slice(&ls.coefficients);
    let fitted: Vec<f64> = if k == 0 {
        vec![0.0; n]
    } else {
        (x * &b).iter().copied().collect()
    };
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(y, f)| y - f).collect();
    let rss: f64 = residuals.iter().map(|e| e * e).sum();
    let mean = y.iter().sum::<f64>() / n as f64;
    let tss = y.iter().map(|v| (v - mean).powi(2)).sum();
    let covariance = &ls.xtx_inv * (rss / (n - k) as f64);
    Ok(RegressionFit {
        coefficients: ls.coefficients,
        covariance,
        xtx_inv: ls.xtx_inv,
        residuals,
        fitted,
        rss,
        sigma2: rss / n as f64,
        n_obs: n,
        n_params: k,
        tss,
        rcond: ls.rcond,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    #[default]
    Bartlett,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bandwidth {
    Fixed(usize),
    #[default]
    Automatic,
}

impl FromStr for Bandwidth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "auto" | "automatic" => Ok(Bandwidth::Automatic),
            n => n.parse().map(Bandwidth::Fixed).map_err(|_| {
                Error::InvalidArgument(format!("bandwidth `{n}` is neither `auto` nor an integer"))
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HacOptions {
    pub kernel: Kernel,
    pub bandwidth: Bandwidth,
}

impl HacOptions {
    pub fn fixed(bandwidth: usize) -> Self {
        Self {
            kernel: Kernel::Bartlett,
            bandwidth: Bandwidth::Fixed(bandwidth),
        }
    }

    pub fn automatic() -> Self {
        Self::default()
    }

    /// Bandwidth in use for a sample of `t` observations.
    pub fn resolve(&self, t: usize) -> usize {
        match self.bandwidth {
            Bandwidth::Fixed(l) => l,
            Bandwidth::Automatic => automatic_bandwidth(t),
        }
    }
}

/// Newey-West plug-in, `floor(4 (T/100)^(2/9))`.
pub fn automatic_bandwidth(t: usize) -> usize {
    (4.0 * (t as f64 / 100.0).powf(2.0 / 9.0)).floor() as usize
}

pub(crate) fn bartlett_weight(j: usize, bandwidth: usize) -> f64 {
    1.0 - j as f64 / (bandwidth as f64 + 1.0)
}

/// Scalar Bartlett long-run variance of `u`, not demeaned.
pub fn newey_west_lrv(u: &[f64], opts: &HacOptions) -> Result<f64> {
    let t = u.len();
    if t < 2 {
        return Err(Error::SampleTooShort {
            needed: 2,
            available: t,
        });
    }
    let l = opts.resolve(t);
    if l >= t {
        return Err(Error::InvalidArgument(format!(
            "bandwidth {l} must be below the sample size {t}"
        )));
    }
    let autocov = |j: usize| (j..t).map(|i| u[i] * u[i - j]).sum::<f64>() / t as f64;
    let mut omega = autocov(0);
    for j in 1..=l {
        omega += 2.0 * bartlett_weight(j, l) * autocov(j);
    }
    Ok(omega)
}

/// `(1/T) sum_t u_t u_{t-j}'` for the rows of `u`.
pub(crate) fn autocovariance(u: &DMatrix<f64>, j: usize) -> DMatrix<f64> {
    let (t, m) = u.shape();
    let mut g = DMatrix::zeros(m, m);
    for i in j..t {
        for a in 0..m {
            let ua = u[(i, a)];
            for b in 0..m {
                g[(a, b)] += ua * u[(i - j, b)];
            }
        }
    }
    g / t as f64
}

/// Multivariate Bartlett long-run covariance of the rows of `u` (T x m).
pub fn newey_west_lrv_matrix(u: &DMatrix<f64>, opts: &HacOptions) -> Result<DMatrix<f64>> {
    let t = u.nrows();
    if t < 2 {
        return Err(Error::SampleTooShort {
            needed: 2,
            available: t,
        });
    }
    let l = opts.resolve(t);
    if l >= t {
        return Err(Error::InvalidArgument(format!(
            "bandwidth {l} must be below the sample size {t}"
        )));
    }
    let mut omega = autocovariance(u, 0);
    for j in 1..=l {
        let g = autocovariance(u, j);
        omega += (&g + g.transpose()) * bartlett_weight(j, l);
    }
    Ok(omega)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    #[default]
    Aic,
    Sic,
    Hq,
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "aic" => Ok(Criterion::Aic),
            "sic" | "sc" | "bic" => Ok(Criterion::Sic),
            "hq" | "hqc" => Ok(Criterion::Hq),
            other => Err(Error::InvalidArgument(format!("unknown criterion `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfoCriteria {
    pub aic: f64,
    pub sic: f64,
    pub hq: f64,
    /// Set when `rss = 0`; the criteria are then `-inf`.
    pub exact_fit: bool,
}

impl InfoCriteria {
    pub fn get(&self, c: Criterion) -> f64 {
        match c {
            Criterion::Aic => self.aic,
            Criterion::Sic => self.sic,
            Criterion::Hq => self.hq,
        }
    }
}

/// Concentrated-likelihood criteria `ln(rss/T) + penalty/T`.
pub fn info_criteria(fit: &RegressionFit) -> InfoCriteria {
    let t = fit.n_obs as f64;
    let k = fit.n_params as f64;
    if fit.rss <= 0.0 {
        return InfoCriteria {
            aic: f64::NEG_INFINITY,
            sic: f64::NEG_INFINITY,
            hq: f64::NEG_INFINITY,
            exact_fit: true,
        };
    }
    let base = (fit.rss / t).ln();
    InfoCriteria {
        aic: base + 2.0 * k / t,
        sic: base + k * t.ln() / t,
        hq: base + 2.0 * k * t.ln().ln() / t,
        exact_fit: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FTest {
    pub statistic: f64,
    pub df1: usize,
    pub df2: usize,
    pub p_value: f64,
}

/// F statistic for `q` linear restrictions from unrestricted and restricted
/// fits on the same sample and dependent variable.
pub fn wald_f(unrestricted: &RegressionFit, restricted: &RegressionFit, q: usize) -> Result<FTest> {
    if q == 0 {
        return Err(Error::InvalidArgument("number of restrictions must be positive".into()));
    }
    if unrestricted.n_obs != restricted.n_obs {
        return Err(Error::InvalidArgument(format!(
            "mismatched samples: {} vs {} observations",
            unrestricted.n_obs, restricted.n_obs
        )));
    }
    let yu = unrestricted.dependent();
    let yr = restricted.dependent();
    let scale = yu.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    if yu.iter().zip(&yr).any(|(a, b)| (a - b).abs() > 1e-8 * scale) {
        return Err(Error::InvalidArgument(
            "mismatched samples: dependent variables differ".into(),
        ));
    }
    let (rss_u, rss_r) = (unrestricted.rss, restricted.rss);
    let tol = 1e-10 * rss_r.max(rss_u).max(f64::MIN_POSITIVE);
    if rss_r < rss_u - tol {
        return Err(Error::InvalidArgument(format!(
            "restricted rss {rss_r} is below unrestricted rss {rss_u}"
        )));
    }
    let df2 = unrestricted.dof();
    if df2 == 0 {
        return Err(Error::SampleTooShort {
            needed: unrestricted.n_params + 1,
            available: unrestricted.n_obs,
        });
    }
    let gain = (rss_r - rss_u).max(0.0);
    let statistic = if gain <= tol {
        0.0
    } else if rss_u <= 0.0 {
        f64::INFINITY
    } else {
        (gain / q as f64) / (rss_u / df2 as f64)
    };
    Ok(FTest {
        statistic,
        df1: q,
        df2,
        p_value: special::f_sf(statistic, q as f64, df2 as f64),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distribution {
    /// Two-sided.
    Normal,
    /// Two-sided.
    StudentT { df: f64 },
    /// Upper tail.
    ChiSquared { df: f64 },
    /// Upper tail.
    F { df1: f64, df2: f64 },
}

pub fn pvalue(dist: Distribution, stat: f64) -> Result<f64> {
    let check = |df: f64| {
        if df > 0.0 && df.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("degrees of freedom must be positive, got {df}")))
        }
    };
    if stat.is_nan() {
        return Err(Error::InvalidArgument("statistic is NaN".into()));
    }
    let p = match dist {
        Distribution::Normal => 2.0 * special::normal_sf(stat.abs()),
        Distribution::StudentT { df } => {
            check(df)?;
            special::t_two_sided(stat, df)
        }
        Distribution::ChiSquared { df } => {
            check(df)?;
            special::chi2_sf(stat, df)
        }
        Distribution::F { df1, df2 } => {
            check(df1)?;
            check(df2)?;
            special::f_sf(stat, df1, df2)
        }
    };
    Ok(p.clamp(0.0, 1.0))
}
