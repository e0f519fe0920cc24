use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::critical::{pesaran_cv, BoundsCase, CriticalBounds};
use super::{ecm_regression, ArdlSpec};
use crate::error::{Error, Result};
use crate::linreg::{self, FTest};
use crate::significance::Significance;
use crate::timeseries::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundsDecision {
    Cointegrated,
    NotCointegrated,
    Inconclusive,
}

impl fmt::Display for BoundsDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundsDecision::Cointegrated => "cointegrated",
            BoundsDecision::NotCointegrated => "not cointegrated",
            BoundsDecision::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsResult {
    pub f_stat: f64,
    pub k: usize,
    pub case: BoundsCase,
    pub lags: Vec<usize>,
    pub test: FTest,
    pub bounds: BTreeMap<Significance, CriticalBounds>,
    pub decision: BTreeMap<Significance, BoundsDecision>,
}

impl BoundsResult {
    pub fn decision_at(&self, level: Significance) -> Option<BoundsDecision> {
        self.decision.get(&level).copied()
    }

    /// Cointegrated at `level`.
    pub fn rejects(&self, level: Significance) -> bool {
        self.decision_at(level) == Some(BoundsDecision::Cointegrated)
    }
}

/// Strict comparison against both bounds.
pub fn bounds_decision(f: f64, bounds: CriticalBounds) -> BoundsDecision {
    if f > bounds.i1 {
        BoundsDecision::Cointegrated
    } else if f < bounds.i0 {
        BoundsDecision::NotCointegrated
    } else {
        BoundsDecision::Inconclusive
    }
}

/// F test that all lagged levels (and under case II the intercept) are zero in
/// the conditional error-correction regression.
pub fn bounds_f(spec: &ArdlSpec, d: &Dataset, case: BoundsCase) -> Result<BoundsResult> {
    let unrestricted = ecm_regression(spec, d, true, true)?;
    let keep_constant = matches!(case, BoundsCase::UnrestrictedIntercept);
    let q = case.restrictions(spec.k());
    let test = if unrestricted.fit.n_params == q {
        // nothing left after restricting: the restricted residual is Δy itself
        restricted_empty(&unrestricted.fit, q)?
    } else {
        let restricted = ecm_regression(spec, d, keep_constant, false)?;
        if restricted.fit.n_params + q != unrestricted.fit.n_params {
            return Err(Error::InvalidArgument("restricted model is not nested".into()));
        }
        linreg::wald_f(&unrestricted.fit, &restricted.fit, q)?
    };
    let mut bounds = BTreeMap::new();
    let mut decision = BTreeMap::new();
    for level in [
        Significance::OnePercent,
        Significance::TwoAndHalfPercent,
        Significance::FivePercent,
        Significance::TenPercent,
    ] {
        let b = pesaran_cv(spec.k(), level, case)?;
        bounds.insert(level, b);
        decision.insert(level, bounds_decision(test.statistic, b));
    }
    Ok(BoundsResult {
        f_stat: test.statistic,
        k: spec.k(),
        case,
        lags: spec.lags(),
        test,
        bounds,
        decision,
    })
}

fn restricted_empty(unrestricted: &linreg::RegressionFit, q: usize) -> Result<FTest> {
    let y = unrestricted.dependent();
    let rss_r: f64 = y.iter().map(|v| v * v).sum();
    let df2 = unrestricted.dof();
    if df2 == 0 {
        return Err(Error::SampleTooShort {
            needed: unrestricted.n_params + 1,
            available: unrestricted.n_obs,
        });
    }
    let statistic = ((rss_r - unrestricted.rss).max(0.0) / q as f64) / (unrestricted.rss / df2 as f64);
    Ok(FTest {
        statistic,
        df1: q,
        df2,
        p_value: crate::special::f_sf(statistic, q as f64, df2 as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ardl::tests::toy;
    use crate::timeseries::Roles;

    #[test]
    fn decision_rule_is_strict() {
        let b = pesaran_cv(5, Significance::FivePercent, BoundsCase::default()).unwrap();
        assert_eq!(bounds_decision(b.i1, b), BoundsDecision::Inconclusive);
        assert_eq!(bounds_decision(b.i0, b), BoundsDecision::Inconclusive);
        assert_eq!(bounds_decision(1.0, b), BoundsDecision::NotCointegrated);
        assert_eq!(bounds_decision(2.7, b), BoundsDecision::Inconclusive);
        let one = pesaran_cv(5, Significance::OnePercent, BoundsCase::default()).unwrap();
        assert_eq!(bounds_decision(5.557, one), BoundsDecision::Cointegrated);
    }

    #[test]
    fn invariant_to_regressor_order() {
        let d = toy(40);
        let swapped = d.with_roles(Roles::new("y", &["x2", "x1"])).unwrap();
        for case in [BoundsCase::RestrictedIntercept, BoundsCase::UnrestrictedIntercept] {
            let a = ArdlSpec::new("y", vec!["x1".into(), "x2".into()], 2, vec![1, 0]).unwrap();
            let b = ArdlSpec::new("y", vec!["x2".into(), "x1".into()], 2, vec![0, 1]).unwrap();
            let fa = bounds_f(&a, &d, case).unwrap();
            let fb = bounds_f(&b, &swapped, case).unwrap();
            assert!((fa.f_stat - fb.f_stat).abs() < 1e-10);
            assert_eq!(fa.test.df1, case.restrictions(2));
        }
    }

    #[test]
    fn decisions_follow_bounds() {
        let d = toy(40);
        let s = ArdlSpec::new("y", vec!["x1".into(), "x2".into()], 1, vec![1, 1]).unwrap();
        let r = bounds_f(&s, &d, BoundsCase::default()).unwrap();
        for (level, b) in &r.bounds {
            assert_eq!(r.decision[level], bounds_decision(r.f_stat, *b));
        }
        assert!(r.f_stat >= 0.0);
    }

    #[test]
    fn case_ii_with_minimal_model() {
        // ARDL(1, 0): the ECM has only C, y(-1), x so case II restricts everything
        let d = toy(30).with_roles(Roles::new("y", &["x1"])).unwrap();
        let s = ArdlSpec::new("y", vec!["x1".into()], 1, vec![0]).unwrap();
        let r = bounds_f(&s, &d, BoundsCase::RestrictedIntercept).unwrap();
        assert_eq!(r.test.df1, 3);
        assert!(r.f_stat.is_finite());
    }
}
