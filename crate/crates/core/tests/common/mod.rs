#![allow(dead_code)]

use ardl_core::timeseries::{Dataset, Roles, TimeSeries};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn random_walk(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut acc = 0.0;
    normals(rng, n)
        .into_iter()
        .map(|e| {
            acc += e;
            acc
        })
        .collect()
}

pub fn dataset(columns: &[(&str, Vec<f64>)], dependent: &str, regressors: &[&str]) -> Dataset {
    let series = columns
        .iter()
        .map(|(n, v)| TimeSeries::new(*n, 1900, v.clone()).unwrap())
        .collect();
    Dataset::new(series, Roles::new(dependent, regressors)).unwrap()
}

/// OLS through the normal equations solved by Gauss-Jordan elimination with
/// partial pivoting. Returns (coefficients, (X'X)^-1, rss).
pub fn normal_equations(y: &[f64], cols: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>, f64) {
    let k = cols.len();
    let n = y.len();
    let mut a = vec![vec![0.0; 2 * k]; k];
    let mut xty = vec![0.0; k];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = (0..n).map(|t| cols[i][t] * cols[j][t]).sum();
        }
        a[i][k + i] = 1.0;
        xty[i] = (0..n).map(|t| cols[i][t] * y[t]).sum();
    }
    for c in 0..k {
        let piv = (c..k)
            .max_by(|&r, &s| a[r][c].abs().total_cmp(&a[s][c].abs()))
            .unwrap();
        a.swap(c, piv);
        let d = a[c][c];
        for v in a[c].iter_mut() {
            *v /= d;
        }
        for r in 0..k {
            if r != c {
                let f = a[r][c];
                if f != 0.0 {
                    for j in 0..2 * k {
                        a[r][j] -= f * a[c][j];
                    }
                }
            }
        }
    }
    let inv: Vec<Vec<f64>> = a.iter().map(|row| row[k..].to_vec()).collect();
    let beta: Vec<f64> = (0..k)
        .map(|i| (0..k).map(|j| inv[i][j] * xty[j]).sum())
        .collect();
    let rss = (0..n)
        .map(|t| {
            let fit: f64 = (0..k).map(|j| beta[j] * cols[j][t]).sum();
            (y[t] - fit).powi(2)
        })
        .sum();
    (beta, inv, rss)
}

pub mod montecarlo;
pub mod oracles;
