use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{levels_regression, ArdlSpec};
use crate::error::{Error, Result};
use crate::linreg::{self, Criterion};
use crate::timeseries::Dataset;

/// One evaluated candidate of the lag grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub lags: Vec<usize>,
    pub value: f64,
}

impl GridPoint {
    fn total(&self) -> usize {
        self.lags.iter().sum()
    }

    /// Criterion, then total lag, then lag vector.
    fn rank(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.total().cmp(&other.total()))
            .then(self.lags.cmp(&other.lags))
    }
}

fn decode(mut index: usize, max_p: usize, max_q: usize, k: usize) -> Vec<usize> {
    let mut lags = vec![0; k + 1];
    for slot in lags[1..].iter_mut().rev() {
        *slot = index % (max_q + 1);
        index /= max_q + 1;
    }
    lags[0] = 1 + index % max_p;
    lags
}

/// Every candidate `p ∈ 1..=max_p`, `q_j ∈ 0..=max_q`, each fitted on the
/// sample aligned to `max(max_p, max_q)`, sorted best first.
pub fn evaluate_grid(d: &Dataset, max_p: usize, max_q: usize, criterion: Criterion) -> Result<Vec<GridPoint>> {
    if max_p == 0 {
        return Err(Error::InvalidArgument("max_p must be at least 1".into()));
    }
    let roles = d.roles();
    let k = roles.regressors.len();
    let start = max_p.max(max_q);
    let widest = ArdlSpec::with_sample_start(
        roles.dependent.clone(),
        roles.regressors.clone(),
        max_p,
        vec![max_q; k],
        start,
    )?;
    super::check_sample(&widest, d)?;

    let size = (max_q + 1)
        .checked_pow(k as u32)
        .and_then(|n| n.checked_mul(max_p))
        .ok_or_else(|| Error::InvalidArgument("lag grid is too large".into()))?;

    let mut points: Vec<GridPoint> = (0..size)
        .into_par_iter()
        .filter_map(|i| {
            let lags = decode(i, max_p, max_q, k);
            let spec = ArdlSpec::with_sample_start(
                roles.dependent.clone(),
                roles.regressors.clone(),
                lags[0],
                lags[1..].to_vec(),
                start,
            )
            .ok()?;
            let fit = levels_regression(&spec, d).ok()?;
            let value = linreg::info_criteria(&fit.fit).get(criterion);
            (!value.is_nan()).then_some(GridPoint { lags, value })
        })
        .collect();
    if points.is_empty() {
        return Err(Error::DegenerateFit("no estimable ARDL candidate in the lag grid".into()));
    }
    points.sort_by(GridPoint::rank);
    Ok(points)
}

/// Lag orders minimizing `criterion` over the grid. The returned spec keeps
/// the common grid sample.
pub fn select_ardl(d: &Dataset, max_p: usize, max_q: usize, criterion: Criterion) -> Result<ArdlSpec> {
    let best = evaluate_grid(d, max_p, max_q, criterion)?.swap_remove(0);
    let roles = d.roles();
    let mut spec = ArdlSpec::with_sample_start(
        roles.dependent.clone(),
        roles.regressors.clone(),
        best.lags[0],
        best.lags[1..].to_vec(),
        max_p.max(max_q),
    )?;
    spec.criterion = Some(criterion);
    Ok(spec)
}
