use serde::{Deserialize, Serialize};

use super::{ecm_regression, levels_regression, ArdlSpec, LabeledFit};
use crate::error::{Error, Result};
use crate::special;
use crate::timeseries::Dataset;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub name: String,
    pub coefficient: f64,
    pub std_error: f64,
    pub t_stat: f64,
    pub p_value: f64,
}

impl Coefficient {
    fn new(name: impl Into<String>, coefficient: f64, std_error: f64, dof: usize) -> Self {
        let t_stat = coefficient / std_error;
        let p_value = if t_stat.is_nan() {
            f64::NAN
        } else {
            special::t_two_sided(t_stat, dof as f64)
        };
        Self {
            name: name.into(),
            coefficient,
            std_error,
            t_stat,
            p_value,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EcmFit {
    pub spec: ArdlSpec,
    /// Coefficient on each regressor's contemporaneous term.
    pub short_run: Vec<Coefficient>,
    pub ect: Coefficient,
    /// Long-run coefficients per regressor, followed by the constant `C`.
    pub long_run: Vec<Coefficient>,
    pub levels: LabeledFit,
    pub ecm: LabeledFit,
    /// `ect ∈ (-2, 0)`.
    pub stable: bool,
    pub warnings: Vec<String>,
}

/// Error-correction form of the levels ARDL with long-run coefficients and
/// delta-method standard errors.
pub fn fit_ecm(spec: &ArdlSpec, d: &Dataset) -> Result<EcmFit> {
    let levels = levels_regression(spec, d)?;
    let ecm = ecm_regression(spec, d, true, true)?;
    let b = &levels.fit.coefficients;
    let dof = levels.fit.dof();
    let n = b.len();

    let phi: f64 = b[1..=spec.p].iter().sum();
    let denom = 1.0 - phi;
    if denom.abs() < 1e-12 {
        return Err(Error::DegenerateFit(
            "lagged dependent coefficients sum to one; long run undefined".into(),
        ));
    }

    let ect_se = ecm.fit.std_errors()[1];
    let ect = Coefficient::new(format!("ECT({}(-1))", spec.dependent), phi - 1.0, ect_se, dof);

    let mut short_run = Vec::with_capacity(spec.k());
    let mut long_run = Vec::with_capacity(spec.k() + 1);
    let levels_se = levels.fit.std_errors();
    let mut col = 1 + spec.p;
    for (j, name) in spec.regressors.iter().enumerate() {
        let width = spec.q[j] + 1;
        short_run.push(Coefficient::new(name.clone(), b[col], levels_se[col], dof));
        let theta: f64 = b[col..col + width].iter().sum();
        let mut grad = vec![0.0; n];
        for g in &mut grad[1..=spec.p] {
            *g = theta / (denom * denom);
        }
        for g in &mut grad[col..col + width] {
            *g = 1.0 / denom;
        }
        long_run.push(Coefficient::new(
            name.clone(),
            theta / denom,
            levels.fit.combination_se(&grad),
            dof,
        ));
        col += width;
    }
    let mut grad = vec![0.0; n];
    grad[0] = 1.0 / denom;
    for g in &mut grad[1..=spec.p] {
        *g = b[0] / (denom * denom);
    }
    long_run.push(Coefficient::new("C", b[0] / denom, levels.fit.combination_se(&grad), dof));

    let stable = ect.coefficient > -2.0 && ect.coefficient < 0.0;
    let mut warnings = Vec::new();
    if !stable {
        warnings.push(format!(
            "error-correction coefficient {:.4} lies outside (-2, 0); adjustment is not stable",
            ect.coefficient
        ));
    }
    Ok(EcmFit {
        spec: spec.clone(),
        short_run,
        ect,
        long_run,
        levels,
        ecm,
        stable,
        warnings,
    })
}
