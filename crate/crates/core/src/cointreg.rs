//! Fully modified OLS (Phillips-Hansen) and canonical cointegrating
//! regression (Park) with a constant.
//!
//! Both estimators start from the static OLS regression of `y_t` on
//! `[1, x_t]` and the stacked innovations `z_t = (û_t, Δx_t)` for
//! `t = 2..T`. With `Γ(j) = T⁻¹ Σ z_t z_{t-j}'` and Bartlett weights `w_j`,
//!
//! ```text
//! Σ = Γ(0),  Λ = Σ_{j=0..L} w_j Γ(j),  Ω = Λ + Λ' - Γ(0)
//! ```

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linreg::{self, autocovariance, bartlett_weight, HacOptions};
use crate::special;

/// Long-run covariance blocks of `(u, Δx)`. Index 0 is `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct LongRunCov {
    pub omega: DMatrix<f64>,
    /// One-sided sum including lag 0.
    pub lambda: DMatrix<f64>,
    /// Contemporaneous covariance.
    pub sigma: DMatrix<f64>,
    pub bandwidth: usize,
}

impl LongRunCov {
    fn m(&self) -> usize {
        self.omega.nrows() - 1
    }

    pub fn omega11(&self) -> f64 {
        self.omega[(0, 0)]
    }

    /// `Ω₁₂` as a row.
    pub fn omega12(&self) -> DMatrix<f64> {
        self.omega.view((0, 1), (1, self.m())).into_owned()
    }

    pub fn omega22(&self) -> DMatrix<f64> {
        self.omega.view((1, 1), (self.m(), self.m())).into_owned()
    }

    /// `Λ₁₂` as a row.
    pub fn lambda12(&self) -> DMatrix<f64> {
        self.lambda.view((0, 1), (1, self.m())).into_owned()
    }

    pub fn lambda22(&self) -> DMatrix<f64> {
        self.lambda.view((1, 1), (self.m(), self.m())).into_owned()
    }

    /// Columns `1..` of `Λ`, an `(m+1) x m` block.
    pub fn lambda2(&self) -> DMatrix<f64> {
        self.lambda.view((0, 1), (self.m() + 1, self.m())).into_owned()
    }
}

/// Bartlett long-run covariance of the stacked `[u, v]`.
pub fn long_run_cov(u: &[f64], v: &DMatrix<f64>, opts: &HacOptions) -> Result<LongRunCov> {
    let t = u.len();
    if v.nrows() != t {
        return Err(Error::InvalidArgument(format!(
            "residuals have {t} rows, regressor innovations {}",
            v.nrows()
        )));
    }
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
    let m = v.ncols();
    let z = DMatrix::from_fn(t, m + 1, |i, j| if j == 0 { u[i] } else { v[(i, j - 1)] });
    let sigma = autocovariance(&z, 0);
    let mut lambda = sigma.clone();
    for j in 1..=l {
        lambda += autocovariance(&z, j) * bartlett_weight(j, l);
    }
    let omega = &lambda + lambda.transpose() - &sigma;
    Ok(LongRunCov {
        omega,
        lambda,
        sigma,
        bandwidth: l,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "FMOLS")]
    Fmols,
    #[serde(rename = "CCR")]
    Ccr,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Fmols => "FMOLS",
            Method::Ccr => "CCR",
        })
    }
}

/// Estimates ordered as the regressors followed by the constant `C`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CointRegFit {
    pub method: Method,
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    pub p_values: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
    pub bandwidth: usize,
    pub n_obs: usize,
    pub long_run_variance: f64,
    /// First-stage residuals were zero; standard errors are reported as zero.
    pub degenerate: bool,
}

impl CointRegFit {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).map(|i| self.coefficients[i])
    }
}

/// Data on the common sample `t = 2..T`.
struct Stage {
    y: Vec<f64>,
    /// `[1, x]`.
    x: DMatrix<f64>,
    dx: DMatrix<f64>,
    first: linreg::RegressionFit,
}

fn stage(y: &[f64], x: &[Vec<f64>], names: &[String]) -> Result<Stage> {
    let n = y.len();
    let m = x.len();
    if m == 0 {
        return Err(Error::InvalidArgument("cointegrating regression needs a regressor".into()));
    }
    if names.len() != m || x.iter().any(|c| c.len() != n) {
        return Err(Error::InvalidArgument("regressor columns and names do not line up".into()));
    }
    if n < m + 4 {
        return Err(Error::SampleTooShort {
            needed: m + 4,
            available: n,
        });
    }
    let t = n - 1;
    let xm = DMatrix::from_fn(t, m + 1, |i, j| if j == 0 { 1.0 } else { x[j - 1][i + 1] });
    let dx = DMatrix::from_fn(t, m, |i, j| x[j][i + 1] - x[j][i]);
    let y = y[1..].to_vec();
    let first = linreg::ols(&y, &xm)?;
    Ok(Stage { y, x: xm, dx, first })
}

fn inverse(a: &DMatrix<f64>, what: &str) -> Result<DMatrix<f64>> {
    let eig = a.clone().symmetric_eigen();
    let max = eig.eigenvalues.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let min = eig.eigenvalues.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    if !(max > 0.0) || min / max < linreg::RCOND_TOLERANCE {
        return Err(Error::Singular(format!("{what} is not invertible")));
    }
    a.clone()
        .try_inverse()
        .ok_or_else(|| Error::Singular(format!("{what} is not invertible")))
}

fn finish(
    method: Method,
    names: &[String],
    beta: DVector<f64>,
    cov: DMatrix<f64>,
    bandwidth: usize,
    long_run_variance: f64,
    degenerate: bool,
) -> CointRegFit {
    let k = beta.len();
    // reorder [C, x...] to [x..., C]
    let order: Vec<usize> = (1..k).chain(std::iter::once(0)).collect();
    let coefficients: Vec<f64> = order.iter().map(|&i| beta[i]).collect();
    let std_errors: Vec<f64> = order.iter().map(|&i| cov[(i, i)].max(0.0).sqrt()).collect();
    let covariance = order
        .iter()
        .map(|&i| order.iter().map(|&j| cov[(i, j)]).collect())
        .collect();
    let mut out_names: Vec<String> = names.to_vec();
    out_names.push("C".into());
    CointRegFit {
        method,
        names: out_names,
        t_stats: Vec::new(),
        p_values: Vec::new(),
        coefficients,
        std_errors,
        covariance,
        bandwidth,
        n_obs: 0,
        long_run_variance,
        degenerate,
    }
}

fn degenerate_fit(method: Method, names: &[String], s: &Stage) -> CointRegFit {
    let k = s.first.coefficients.len();
    let mut fit = finish(
        method,
        names,
        DVector::from_column_slice(&s.first.coefficients),
        DMatrix::zeros(k, k),
        0,
        0.0,
        true,
    );
    fit.n_obs = s.y.len();
    fit.t_stats = vec![f64::NAN; k];
    fit.p_values = vec![f64::NAN; k];
    fit
}

fn complete(mut fit: CointRegFit, n_obs: usize) -> CointRegFit {
    let k = fit.coefficients.len();
    let dof = n_obs.saturating_sub(k).max(1) as f64;
    fit.n_obs = n_obs;
    fit.t_stats = fit
        .coefficients
        .iter()
        .zip(&fit.std_errors)
        .map(|(b, s)| b / s)
        .collect();
    fit.p_values = fit
        .t_stats
        .iter()
        .map(|t| if t.is_nan() { f64::NAN } else { special::t_two_sided(*t, dof) })
        .collect();
    fit
}

/// `ω₁.₂ = ω₁₁ - Ω₁₂ Ω₂₂⁻¹ Ω₂₁` and `Ω₂₂⁻¹`.
fn conditional_variance(cov: &LongRunCov) -> Result<(f64, DMatrix<f64>)> {
    let o22_inv = inverse(&cov.omega22(), "long-run covariance of the regressor innovations")?;
    let o12 = cov.omega12();
    let w = cov.omega11() - (&o12 * &o22_inv * o12.transpose())[(0, 0)];
    Ok((w, o22_inv))
}

pub fn fmols(y: &[f64], x: &[Vec<f64>], names: &[String], opts: &HacOptions) -> Result<CointRegFit> {
    let s = stage(y, x, names)?;
    if s.first.exact_fit() {
        return Ok(degenerate_fit(Method::Fmols, names, &s));
    }
    let cov = long_run_cov(&s.first.residuals, &s.dx, opts)?;
    fmols_stage(&s, names, &cov)
}

/// FMOLS with externally supplied long-run covariance blocks.
pub fn fmols_with_cov(y: &[f64], x: &[Vec<f64>], names: &[String], cov: &LongRunCov) -> Result<CointRegFit> {
    let s = stage(y, x, names)?;
    fmols_stage(&s, names, cov)
}

fn fmols_stage(s: &Stage, names: &[String], cov: &LongRunCov) -> Result<CointRegFit> {
    let t = s.y.len();
    let m = s.dx.ncols();
    let (w12, o22_inv) = conditional_variance(cov)?;
    let a = &cov.omega12() * &o22_inv; // 1 x m
    let y_plus = DVector::from_iterator(
        t,
        (0..t).map(|i| s.y[i] - (0..m).map(|j| a[(0, j)] * s.dx[(i, j)]).sum::<f64>()),
    );
    let lambda_plus = cov.lambda12() - &a * cov.lambda22(); // 1 x m
    let mut xty = s.x.transpose() * &y_plus;
    for j in 0..m {
        xty[j + 1] -= t as f64 * lambda_plus[(0, j)];
    }
    let xtx_inv = &s.first.xtx_inv;
    let beta = xtx_inv * xty;
    let covm = xtx_inv * w12;
    let fit = finish(Method::Fmols, names, beta, covm, cov.bandwidth, w12, false);
    Ok(complete(fit, t))
}

pub fn ccr(y: &[f64], x: &[Vec<f64>], names: &[String], opts: &HacOptions) -> Result<CointRegFit> {
    let s = stage(y, x, names)?;
    if s.first.exact_fit() {
        return Ok(degenerate_fit(Method::Ccr, names, &s));
    }
    let cov = long_run_cov(&s.first.residuals, &s.dx, opts)?;
    ccr_stage(&s, names, &cov)
}

/// CCR with externally supplied long-run covariance blocks.
pub fn ccr_with_cov(y: &[f64], x: &[Vec<f64>], names: &[String], cov: &LongRunCov) -> Result<CointRegFit> {
    let s = stage(y, x, names)?;
    ccr_stage(&s, names, cov)
}

fn ccr_stage(s: &Stage, names: &[String], cov: &LongRunCov) -> Result<CointRegFit> {
    let t = s.y.len();
    let m = s.dx.ncols();
    let (w12, o22_inv) = conditional_variance(cov)?;
    let sigma_inv = inverse(&cov.sigma, "contemporaneous covariance of the innovations")?;
    let a = &sigma_inv * cov.lambda2(); // (m+1) x m
    let beta1 = DVector::from_iterator(m, s.first.coefficients[1..].iter().copied());
    let mut shift = &a * &beta1; // (m+1)
    let o21 = cov.omega12().transpose();
    let tail = &o22_inv * o21; // m x 1
    for j in 0..m {
        shift[j + 1] += tail[(j, 0)];
    }
    let z = |i: usize, c: usize| if c == 0 { s.first.residuals[i] } else { s.dx[(i, c - 1)] };
    let y_star: Vec<f64> = (0..t)
        .map(|i| s.y[i] - (0..=m).map(|c| shift[c] * z(i, c)).sum::<f64>())
        .collect();
    let x_star = DMatrix::from_fn(t, m + 1, |i, j| {
        if j == 0 {
            1.0
        } else {
            s.x[(i, j)] - (0..=m).map(|c| a[(c, j - 1)] * z(i, c)).sum::<f64>()
        }
    });
    let fit = linreg::ols(&y_star, &x_star)?;
    let beta = DVector::from_column_slice(&fit.coefficients);
    let covm = &fit.xtx_inv * w12;
    let out = finish(Method::Ccr, names, beta, covm, cov.bandwidth, w12, false);
    Ok(complete(out, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn scalar_alternating_matches_hand_value() {
        let u = [1.0, -1.0, 1.0, -1.0];
        let v = DMatrix::from_column_slice(4, 1, &[0.5, 0.5, -0.5, -0.5]);
        let c = long_run_cov(&u, &v, &HacOptions::fixed(1)).unwrap();
        assert!((c.omega11() - 0.25).abs() < 1e-12);
        let nw = linreg::newey_west_lrv(&u, &HacOptions::fixed(1)).unwrap();
        assert!((c.omega11() - nw).abs() < 1e-12);
        assert!(long_run_cov(&u, &v, &HacOptions::fixed(4)).is_err());
    }

    #[test]
    fn orthogonal_innovations() {
        let u = [1.0, -1.0, 1.0, -1.0];
        let v = DMatrix::from_column_slice(4, 1, &[1.0, 1.0, -1.0, -1.0]);
        let c = long_run_cov(&u, &v, &HacOptions::fixed(0)).unwrap();
        assert_eq!(c.omega12()[(0, 0)], 0.0);
        assert_eq!(c.lambda12()[(0, 0)], 0.0);
    }

    #[test]
    fn noise_free_is_exact() {
        let x: Vec<f64> = (0..30).map(|i| (i as f64 * 0.37).sin() * 5.0 + i as f64 * 0.2).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        for f in [fmols, ccr] {
            let r = f(&y, std::slice::from_ref(&x), &names(1), &HacOptions::automatic()).unwrap();
            assert!(r.degenerate);
            assert!((r.coefficients[0] - 2.0).abs() < 1e-10);
            assert!(r.coefficients[1].abs() < 1e-9);
            assert!(r.std_errors.iter().all(|s| *s == 0.0));
        }
    }

    #[test]
    fn singular_omega22() {
        let x: Vec<f64> = (0..30).map(|i| i as f64 + (i as f64 * 0.9).cos()).collect();
        let y: Vec<f64> = (0..30).map(|i| 2.0 * i as f64 + (i as f64 * 1.1).sin()).collect();
        let cov = LongRunCov {
            omega: DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]),
            lambda: DMatrix::identity(2, 2),
            sigma: DMatrix::identity(2, 2),
            bandwidth: 0,
        };
        assert!(matches!(fmols_with_cov(&y, std::slice::from_ref(&x), &names(1), &cov), Err(Error::Singular(_))));
        assert!(matches!(ccr_with_cov(&y, &[x], &names(1), &cov), Err(Error::Singular(_))));
    }
}
