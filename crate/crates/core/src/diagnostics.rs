//! Residual diagnostics and recursive-residual stability tests.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linreg::{self, RegressionFit};
use crate::special;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub name: String,
    pub statistic: f64,
    pub df: usize,
    /// Denominator degrees of freedom for F-form tests.
    pub df_denominator: Option<usize>,
    pub p_value: f64,
}

impl TestResult {
    fn chi2(name: &str, statistic: f64, df: usize) -> Self {
        let statistic = statistic.max(0.0);
        Self {
            name: name.into(),
            statistic,
            df,
            df_denominator: None,
            p_value: special::chi2_sf(statistic, df as f64).clamp(0.0, 1.0),
        }
    }

    fn null(name: &str, df: usize, df_denominator: Option<usize>) -> Self {
        Self {
            name: name.into(),
            statistic: 0.0,
            df,
            df_denominator,
            p_value: 1.0,
        }
    }
}

pub const DEFAULT_BG_LAGS: usize = 2;

fn check_rows(x: &DMatrix<f64>, n: usize) -> Result<()> {
    if x.nrows() != n {
        return Err(Error::InvalidArgument(format!(
            "design has {} rows, residuals have {n}",
            x.nrows()
        )));
    }
    Ok(())
}

fn append_columns(x: &DMatrix<f64>, extra: &[Vec<f64>]) -> DMatrix<f64> {
    let (n, k) = x.shape();
    DMatrix::from_fn(n, k + extra.len(), |i, j| {
        if j < k {
            x[(i, j)]
        } else {
            extra[j - k][i]
        }
    })
}

/// Breusch-Godfrey serial-correlation LM test, `T·R²` of the residuals on the
/// regressors and `lags` lagged residuals (pre-sample residuals set to zero).
pub fn bg_lm(fit: &RegressionFit, x: &DMatrix<f64>, lags: usize) -> Result<TestResult> {
    const NAME: &str = "Breusch-Godfrey LM";
    if lags == 0 {
        return Err(Error::InvalidArgument("serial-correlation test needs lags >= 1".into()));
    }
    let e = &fit.residuals;
    let n = e.len();
    check_rows(x, n)?;
    if x.ncols() + lags >= n {
        return Err(Error::SampleTooShort {
            needed: x.ncols() + lags + 1,
            available: n,
        });
    }
    if fit.exact_fit() {
        return Ok(TestResult::null(NAME, lags, None));
    }
    let lagged: Vec<Vec<f64>> = (1..=lags)
        .map(|l| (0..n).map(|t| if t >= l { e[t - l] } else { 0.0 }).collect())
        .collect();
    let aux = linreg::ols(e, &append_columns(x, &lagged))?;
    let ee: f64 = e.iter().map(|v| v * v).sum();
    let r2 = 1.0 - aux.rss / ee;
    Ok(TestResult::chi2(NAME, n as f64 * r2, lags))
}

fn is_constant(col: &[f64]) -> bool {
    col.iter().all(|v| *v == col[0])
}

/// Breusch-Pagan-Godfrey test: `T·R²` of the squared residuals on the
/// regressors, df = number of non-constant regressors.
pub fn het_test(fit: &RegressionFit, x: &DMatrix<f64>) -> Result<TestResult> {
    const NAME: &str = "Breusch-Pagan-Godfrey";
    let n = fit.residuals.len();
    check_rows(x, n)?;
    let cols: Vec<Vec<f64>> = (0..x.ncols()).map(|j| x.column(j).iter().copied().collect()).collect();
    let mut aux_cols = vec![vec![1.0; n]];
    aux_cols.extend(cols.into_iter().filter(|c| !is_constant(c)));
    let df = aux_cols.len() - 1;
    if df == 0 {
        return Err(Error::InvalidArgument("heteroskedasticity test needs a non-constant regressor".into()));
    }
    if aux_cols.len() >= n {
        return Err(Error::SampleTooShort {
            needed: aux_cols.len() + 1,
            available: n,
        });
    }
    let e2: Vec<f64> = fit.residuals.iter().map(|v| v * v).collect();
    if fit.exact_fit() || is_constant(&e2) {
        return Ok(TestResult::null(NAME, df, None));
    }
    let aux = linreg::ols(&e2, &linreg::design(&aux_cols)?)?;
    Ok(TestResult::chi2(NAME, n as f64 * aux.r_squared(), df))
}

/// Moment-based skewness and kurtosis.
pub fn moments(residuals: &[f64]) -> Result<(f64, f64)> {
    let n = residuals.len() as f64;
    let mean = residuals.iter().sum::<f64>() / n;
    let central = |p: i32| residuals.iter().map(|v| (v - mean).powi(p)).sum::<f64>() / n;
    let m2 = central(2);
    let scale = residuals.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    if m2 <= (1e-15 * scale).powi(2) {
        return Err(Error::DegenerateFit("residuals have zero variance".into()));
    }
    Ok((central(3) / m2.powf(1.5), central(4) / (m2 * m2)))
}

pub fn jarque_bera(residuals: &[f64]) -> Result<TestResult> {
    if residuals.len() < 4 {
        return Err(Error::SampleTooShort {
            needed: 4,
            available: residuals.len(),
        });
    }
    let (s, k) = moments(residuals)?;
    let n = residuals.len() as f64;
    let jb = n / 6.0 * (s * s + (k - 3.0).powi(2) / 4.0);
    Ok(TestResult::chi2("Jarque-Bera", jb, 2))
}

/// Ramsey RESET, F form: adds the given powers of the fitted values.
pub fn ramsey_reset(fit: &RegressionFit, x: &DMatrix<f64>, y: &[f64], powers: &[u32]) -> Result<TestResult> {
    const NAME: &str = "Ramsey RESET";
    let n = y.len();
    check_rows(x, n)?;
    if powers.is_empty() || powers.iter().any(|&p| p < 2) {
        return Err(Error::InvalidArgument("RESET powers must be at least 2".into()));
    }
    let m = powers.len();
    let df2 = n.saturating_sub(x.ncols() + m);
    if df2 == 0 {
        return Err(Error::SampleTooShort {
            needed: x.ncols() + m + 1,
            available: n,
        });
    }
    if fit.exact_fit() {
        return Ok(TestResult::null(NAME, m, Some(df2)));
    }
    if is_constant(&fit.fitted) {
        return Err(Error::DegenerateFit("fitted values are constant".into()));
    }
    let extra: Vec<Vec<f64>> = powers
        .iter()
        .map(|&p| fit.fitted.iter().map(|v| v.powi(p as i32)).collect())
        .collect();
    let augmented = linreg::ols(y, &append_columns(x, &extra))?;
    let f = linreg::wald_f(&augmented, fit, m)?;
    Ok(TestResult {
        name: NAME.into(),
        statistic: f.statistic,
        df: m,
        df_denominator: Some(f.df2),
        p_value: f.p_value.clamp(0.0, 1.0),
    })
}

/// Standardized one-step-ahead prediction errors for observations
/// `k+1..T`.
pub fn recursive_residuals(y: &[f64], x: &DMatrix<f64>) -> Result<Vec<f64>> {
    let (n, k) = x.shape();
    check_rows(x, y.len())?;
    if n <= k + 1 {
        return Err(Error::SampleTooShort {
            needed: k + 2,
            available: n,
        });
    }
    (k..n)
        .map(|r| {
            let head = x.rows(0, r).into_owned();
            let ls = linreg::least_squares(&y[..r], &head).map_err(|e| match e {
                Error::RankDeficient { rcond } => Error::Singular(format!(
                    "recursive estimate on the first {r} observations (rcond {rcond:.2e})"
                )),
                other => other,
            })?;
            let xr = x.row(r).transpose();
            let pred = xr.dot(&DVector::from_column_slice(&ls.coefficients));
            let h = (xr.transpose() * &ls.xtx_inv * &xr)[(0, 0)];
            Ok((y[r] - pred) / (1.0 + h).sqrt())
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Stable,
    Unstable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Stable => "Stable",
            Verdict::Unstable => "Unstable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityPath {
    pub name: String,
    /// 1-based observation numbers `k+1..T`.
    pub t: Vec<usize>,
    pub values: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub verdict: Verdict,
}

impl StabilityPath {
    fn new(name: &str, k: usize, values: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        let inside = values
            .iter()
            .zip(lower.iter().zip(&upper))
            .all(|(v, (lo, hi))| lo < v && v < hi);
        Self {
            name: name.into(),
            t: (k + 1..=k + values.len()).collect(),
            values,
            lower,
            upper,
            verdict: if inside { Verdict::Stable } else { Verdict::Unstable },
        }
    }
}

pub const CUSUM_5PCT: f64 = 0.948;

/// Sum of squares at rounding level relative to the data.
fn negligible(ss: f64, y: &[f64]) -> bool {
    let scale: f64 = y.iter().map(|v| v * v).sum();
    ss <= 1e-20 * scale.max(f64::MIN_POSITIVE)
}

pub fn cusum(y: &[f64], x: &DMatrix<f64>) -> Result<StabilityPath> {
    let w = recursive_residuals(y, x)?;
    let m = w.len();
    let ss: f64 = w.iter().map(|v| v * v).sum();
    let sigma = if negligible(ss, y) { 0.0 } else { (ss / m as f64).sqrt() };
    let mut acc = 0.0;
    let values: Vec<f64> = w
        .iter()
        .map(|v| {
            if sigma > 0.0 {
                acc += v / sigma;
            }
            acc
        })
        .collect();
    let root = (m as f64).sqrt();
    let upper: Vec<f64> = (1..=m)
        .map(|r| CUSUM_5PCT * (root + 2.0 * r as f64 / root))
        .collect();
    let lower = upper.iter().map(|u| -u).collect();
    Ok(StabilityPath::new("CUSUM", x.ncols(), values, lower, upper))
}

pub fn cusumsq(y: &[f64], x: &DMatrix<f64>) -> Result<StabilityPath> {
    let w = recursive_residuals(y, x)?;
    let m = w.len();
    let total: f64 = w.iter().map(|v| v * v).sum();
    if negligible(total, y) {
        return Err(Error::DegenerateFit("all recursive residuals are zero".into()));
    }
    let mut acc = 0.0;
    let mut values: Vec<f64> = w
        .iter()
        .map(|v| {
            acc += v * v;
            acc / total
        })
        .collect();
    values[m - 1] = 1.0;
    let c0 = cusumsq_c0(m, 0.025);
    let line: Vec<f64> = (1..=m).map(|r| r as f64 / m as f64).collect();
    let lower = line.iter().map(|l| l - c0).collect();
    let upper = line.iter().map(|l| l + c0).collect();
    Ok(StabilityPath::new("CUSUMSQ", x.ncols(), values, lower, upper))
}

/// Band half-width for `m` recursive residuals at one-sided level `alpha`.
pub fn cusumsq_c0(m: usize, alpha: f64) -> f64 {
    let n = (m as f64 / 2.0 - 1.0).max(1.0);
    let lo = n.floor() as usize;
    let frac = n - lo as f64;
    if frac == 0.0 {
        durbin_c0(lo, alpha)
    } else {
        (1.0 - frac) * durbin_c0(lo, alpha) + frac * durbin_c0(lo + 1, alpha)
    }
}

/// `c` with `P(max_j (j/(n+1) - U_(j)) ≥ c) = alpha` for the order statistics
/// of `n` uniforms.
pub fn durbin_c0(n: usize, alpha: f64) -> f64 {
    assert!(n >= 1 && alpha > 0.0 && alpha < 1.0);
    static CACHE: OnceLock<Mutex<HashMap<(usize, u64), f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (n, alpha.to_bits());
    if let Some(c) = cache.lock().unwrap().get(&key) {
        return *c;
    }
    let ln_fact: Vec<f64> = (0..=n).map(|i| special::ln_gamma(i as f64 + 1.0)).collect();
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if crossing_probability(n, mid, &ln_fact) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let c = 0.5 * (lo + hi);
    cache.lock().unwrap().insert(key, c);
    c
}

/// `P(U_(j) ≤ j/(n+1) - c for some j)`.
fn crossing_probability(n: usize, c: f64, ln_fact: &[f64]) -> f64 {
    // dp[i] = P(i points in [0, b], no crossing so far)
    let mut dp = vec![0.0; n + 1];
    dp[0] = 1.0;
    let mut prev = 0.0;
    for j in 1..=n {
        let b = (j as f64 / (n + 1) as f64 - c).max(0.0);
        if b > prev {
            let p = (b - prev) / (1.0 - prev);
            let (lp, lq) = (p.ln(), (-p).ln_1p());
            let mut next = vec![0.0; n + 1];
            for (have, &mass) in dp.iter().enumerate() {
                if mass == 0.0 {
                    continue;
                }
                let rest = n - have;
                for add in 0..=rest {
                    let ln_pmf = ln_fact[rest] - ln_fact[add] - ln_fact[rest - add]
                        + add as f64 * lp
                        + (rest - add) as f64 * lq;
                    next[have + add] += mass * ln_pmf.exp();
                }
            }
            dp = next;
            prev = b;
        }
        // at most j - 1 points may lie at or below the j-th boundary
        for mass in dp.iter_mut().skip(j) {
            *mass = 0.0;
        }
    }
    (1.0 - dp.iter().sum::<f64>()).clamp(0.0, 1.0)
}
