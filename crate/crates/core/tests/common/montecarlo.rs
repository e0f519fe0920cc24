//! Seeded Monte Carlo experiments shared by the statistical tests and the
//! acceptance suite. Replication `i` of an experiment with base seed `s`
//! always draws from `rng(s + i)`, so results do not depend on scheduling.

use ardl_core::ardl::{self, BoundsCase, BoundsDecision};
use ardl_core::cointreg;
use ardl_core::diagnostics::{self, Verdict};
use ardl_core::linreg::{self, Criterion, HacOptions};
use ardl_core::significance::Significance;
use ardl_core::timeseries::TimeSeries;
use ardl_core::unitroot::{self, DeterministicSpec, LagPolicy};
use rayon::prelude::*;

use super::{dataset, normals, random_walk, rng};

fn share(hits: usize, reps: usize) -> f64 {
    hits as f64 / reps as f64
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// ADF (constant, lag 0) rejection rate at 5% for an AR(1) with coefficient `ar`.
pub fn adf_rejection_rate(reps: usize, t: usize, ar: f64, seed: u64) -> f64 {
    let hits = (0..reps)
        .into_par_iter()
        .filter(|&i| {
            let e = normals(&mut rng(seed + i as u64), t);
            let mut y = Vec::with_capacity(t);
            let mut prev = 0.0;
            for v in e {
                prev = ar * prev + v;
                y.push(prev);
            }
            let s = TimeSeries::new("y", 1900, y).unwrap();
            unitroot::adf(&s, DeterministicSpec::Constant, LagPolicy::Fixed(0))
                .unwrap()
                .rejects(Significance::FivePercent)
        })
        .count();
    share(hits, reps)
}

/// Bounds decision at 5% for `y` and `k` independent random walks of
/// length `t`, with AIC-selected lags up to 2.
pub fn bounds_decision_rw(t: usize, k: usize, seed: u64) -> BoundsDecision {
    let mut r = rng(seed);
    let names: Vec<String> = (0..k).map(|j| format!("x{j}")).collect();
    let mut cols = vec![("y", random_walk(&mut r, t))];
    for n in &names {
        cols.push((n.as_str(), random_walk(&mut r, t)));
    }
    let regs: Vec<&str> = names.iter().map(String::as_str).collect();
    let d = dataset(&cols, "y", &regs);
    let spec = ardl::select_ardl(&d, 2, 2, Criterion::Aic).unwrap();
    let res = ardl::bounds_f(&spec, &d, BoundsCase::default()).unwrap();
    res.decision_at(Significance::FivePercent).unwrap()
}

/// Shares of (not cointegrated, inconclusive, cointegrated) decisions.
pub fn bounds_null_profile(reps: usize, t: usize, k: usize, seed: u64) -> [f64; 3] {
    let decisions: Vec<BoundsDecision> = (0..reps)
        .into_par_iter()
        .map(|i| bounds_decision_rw(t, k, seed + i as u64))
        .collect();
    let count = |d: BoundsDecision| share(decisions.iter().filter(|&&x| x == d).count(), reps);
    [
        count(BoundsDecision::NotCointegrated),
        count(BoundsDecision::Inconclusive),
        count(BoundsDecision::Cointegrated),
    ]
}

/// `y = 1 + 2 x + u` with `x` a random walk and `u_t = 0.5 Δx_t + 0.3 e_{t-1} + e_t`,
/// so the regression error is both endogenous and serially correlated.
pub fn endogenous_cointegration(seed: u64, t: usize) -> (Vec<f64>, Vec<f64>) {
    let mut r = rng(seed);
    let v = normals(&mut r, t);
    let e = normals(&mut r, t + 1);
    let mut x = Vec::with_capacity(t);
    let mut acc = 0.0;
    for dv in &v {
        acc += dv;
        x.push(acc);
    }
    let y = (0..t)
        .map(|i| 1.0 + 2.0 * x[i] + 0.5 * v[i] + 0.3 * e[i] + e[i + 1])
        .collect();
    (y, x)
}

pub struct CointMc {
    pub fmols_median: f64,
    pub ccr_median: f64,
    pub ols_median: f64,
    /// Median of `|b_fmols - b_ccr|` across replications.
    pub median_gap: f64,
}

pub fn fmols_ccr_medians(reps: usize, t: usize, seed: u64) -> CointMc {
    let names = vec!["x".to_string()];
    let draws: Vec<(f64, f64, f64)> = (0..reps)
        .into_par_iter()
        .map(|i| {
            let (y, x) = endogenous_cointegration(seed + i as u64, t);
            let x = vec![x];
            let hac = HacOptions::automatic();
            let fm = cointreg::fmols(&y, &x, &names, &hac).unwrap();
            let cc = cointreg::ccr(&y, &x, &names, &hac).unwrap();
            let design = linreg::design(&[vec![1.0; t], x[0].clone()]).unwrap();
            let ols = linreg::ols(&y, &design).unwrap();
            (fm.coefficients[0], cc.coefficients[0], ols.coefficients[1])
        })
        .collect();
    CointMc {
        fmols_median: median(draws.iter().map(|d| d.0).collect()),
        ccr_median: median(draws.iter().map(|d| d.1).collect()),
        ols_median: median(draws.iter().map(|d| d.2).collect()),
        median_gap: median(draws.iter().map(|d| (d.0 - d.1).abs()).collect()),
    }
}

fn regression_sample(seed: u64, t: usize, shift: f64) -> (Vec<f64>, nalgebra::DMatrix<f64>) {
    let mut r = rng(seed);
    let x = normals(&mut r, t);
    let e = normals(&mut r, t);
    let y = (0..t)
        .map(|i| 1.0 + if i >= t / 2 { shift } else { 0.0 } + 0.5 * x[i] + e[i])
        .collect();
    (y, linreg::design(&[vec![1.0; t], x]).unwrap())
}

/// Share of replications flagged unstable by CUSUM (`cusumsq = false`) or
/// CUSUMSQ when the intercept shifts by `shift` error standard deviations
/// at mid-sample.
pub fn unstable_rate(reps: usize, t: usize, shift: f64, cusumsq: bool, seed: u64) -> f64 {
    let hits = (0..reps)
        .into_par_iter()
        .filter(|&i| {
            let (y, x) = regression_sample(seed + i as u64, t, shift);
            let path = if cusumsq {
                diagnostics::cusumsq(&y, &x)
            } else {
                diagnostics::cusum(&y, &x)
            };
            path.unwrap().verdict == Verdict::Unstable
        })
        .count();
    share(hits, reps)
}

/// Rejection rates at 5% of Breusch-Godfrey, Breusch-Pagan-Godfrey,
/// Jarque-Bera and RESET on a correctly specified model with i.i.d.
/// Gaussian errors.
pub fn diagnostic_sizes(reps: usize, t: usize, seed: u64) -> [f64; 4] {
    let hits: Vec<[bool; 4]> = (0..reps)
        .into_par_iter()
        .map(|i| {
            let (y, x) = regression_sample(seed + i as u64, t, 0.0);
            let fit = linreg::ols(&y, &x).unwrap();
            [
                diagnostics::bg_lm(&fit, &x, 2).unwrap().p_value < 0.05,
                diagnostics::het_test(&fit, &x).unwrap().p_value < 0.05,
                diagnostics::jarque_bera(&fit.residuals).unwrap().p_value < 0.05,
                diagnostics::ramsey_reset(&fit, &x, &y, &[2]).unwrap().p_value < 0.05,
            ]
        })
        .collect();
    let mut out = [0.0; 4];
    for (j, o) in out.iter_mut().enumerate() {
        *o = share(hits.iter().filter(|h| h[j]).count(), reps);
    }
    out
}
