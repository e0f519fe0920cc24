mod common;

use ardl_core::ardl::{self, ArdlSpec, BoundsCase};
use ardl_core::linreg::Criterion;
use common::*;

/// Levels regressors for y, x with lags p and q on rows start..n.
fn levels_columns(y: &[f64], x: &[f64], p: usize, q: usize, start: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = y.len();
    let mut cols = vec![vec![1.0; n - start]];
    for i in 1..=p {
        cols.push((start..n).map(|t| y[t - i]).collect());
    }
    for i in 0..=q {
        cols.push((start..n).map(|t| x[t - i]).collect());
    }
    (y[start..].to_vec(), cols)
}

fn ardl11_data(seed: u64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut r = rng(seed);
    let x = random_walk(&mut r, n);
    let e = normals(&mut r, n);
    let mut y = vec![0.0; n];
    for t in 1..n {
        y[t] = 0.5 + 0.6 * y[t - 1] + 0.8 * x[t] - 0.3 * x[t - 1] + e[t];
    }
    (y, x)
}

#[test]
fn exhaustive_grid_matches_selection() {
    let (y, x) = ardl11_data(2024, 60);
    let d = dataset(&[("y", y.clone()), ("x", x.clone())], "y", &["x"]);
    let (max_p, max_q) = (4, 4);
    let start = 4;
    let mut best: Option<(f64, usize, usize)> = None;
    for p in 1..=max_p {
        for q in 0..=max_q {
            let (yy, cols) = levels_columns(&y, &x, p, q, start);
            let (_, _, rss) = normal_equations(&yy, &cols);
            let t = yy.len() as f64;
            let aic = (rss / t).ln() + 2.0 * cols.len() as f64 / t;
            let better = match best {
                None => true,
                Some((v, bp, bq)) => aic < v || (aic == v && (p + q, p) < (bp + bq, bp)),
            };
            if better {
                best = Some((aic, p, q));
            }
        }
    }
    let (_, p, q) = best.unwrap();
    let spec = ardl::select_ardl(&d, max_p, max_q, Criterion::Aic).unwrap();
    assert_eq!(spec.lags(), vec![p, q]);
    assert_eq!(spec.sample_start, start);
}

#[test]
fn long_run_from_levels_oracle() {
    let mut r = rng(40);
    let n = 40;
    let x1 = random_walk(&mut r, n);
    let e = normals(&mut r, n);
    let mut y = vec![0.0; n];
    for t in 2..n {
        y[t] = 1.0 + 0.5 * y[t - 1] + 0.2 * y[t - 2] + 0.7 * x1[t] + 0.1 * x1[t - 1] + e[t];
    }
    let d = dataset(&[("y", y.clone()), ("x", x1.clone())], "y", &["x"]);
    let spec = ArdlSpec::new("y", vec!["x".into()], 2, vec![1]).unwrap();
    let ecm = ardl::fit_ecm(&spec, &d).unwrap();

    let (yy, cols) = levels_columns(&y, &x1, 2, 1, 2);
    let (b, _, _) = normal_equations(&yy, &cols);
    let denom = 1.0 - b[1] - b[2];
    assert!(((b[3] + b[4]) / denom - ecm.long_run[0].coefficient).abs() < 1e-10);
    assert!((b[0] / denom - ecm.long_run[1].coefficient).abs() < 1e-10);
    assert!((-(denom) - ecm.ect.coefficient).abs() < 1e-10);
    assert!((b[3] - ecm.short_run[0].coefficient).abs() < 1e-10);
}

#[test]
fn delta_method_matches_numeric_gradient() {
    let (y, x) = ardl11_data(7, 50);
    let d = dataset(&[("y", y.clone()), ("x", x.clone())], "y", &["x"]);
    let spec = ArdlSpec::new("y", vec!["x".into()], 1, vec![1]).unwrap();
    let ecm = ardl::fit_ecm(&spec, &d).unwrap();

    let (yy, cols) = levels_columns(&y, &x, 1, 1, 1);
    let (b, inv, rss) = normal_equations(&yy, &cols);
    let s2 = rss / (yy.len() - cols.len()) as f64;
    let g = |b: &[f64]| (b[2] + b[3]) / (1.0 - b[1]);
    let h = 1e-6;
    let grad: Vec<f64> = (0..b.len())
        .map(|i| {
            let mut up = b.clone();
            let mut dn = b.clone();
            up[i] += h;
            dn[i] -= h;
            (g(&up) - g(&dn)) / (2.0 * h)
        })
        .collect();
    let var: f64 = (0..b.len())
        .flat_map(|i| (0..b.len()).map(move |j| (i, j)))
        .map(|(i, j)| grad[i] * inv[i][j] * grad[j] * s2)
        .sum();
    assert!((var.sqrt() - ecm.long_run[0].std_error).abs() < 1e-6 * var.sqrt());
}

#[test]
fn bounds_f_from_restricted_oracle() {
    let (y, x) = ardl11_data(99, 45);
    let d = dataset(&[("y", y.clone()), ("x", x.clone())], "y", &["x"]);
    let spec = ArdlSpec::new("y", vec!["x".into()], 2, vec![1]).unwrap();
    let n = y.len();
    let rows = 2..n;
    let dy: Vec<f64> = rows.clone().map(|t| y[t] - y[t - 1]).collect();
    let c: Vec<f64> = vec![1.0; dy.len()];
    let ylag: Vec<f64> = rows.clone().map(|t| y[t - 1]).collect();
    let xlag: Vec<f64> = rows.clone().map(|t| x[t - 1]).collect();
    let dy1: Vec<f64> = rows.clone().map(|t| y[t - 1] - y[t - 2]).collect();
    let dx0: Vec<f64> = rows.clone().map(|t| x[t] - x[t - 1]).collect();
    let (_, _, rss_u) = normal_equations(&dy, &[c.clone(), ylag, xlag, dy1.clone(), dx0.clone()]);
    let df2 = (dy.len() - 5) as f64;
    let (_, _, rss_iii) = normal_equations(&dy, &[c, dy1.clone(), dx0.clone()]);
    let (_, _, rss_ii) = normal_equations(&dy, &[dy1, dx0]);
    let f_iii = ((rss_iii - rss_u) / 2.0) / (rss_u / df2);
    let f_ii = ((rss_ii - rss_u) / 3.0) / (rss_u / df2);
    let r3 = ardl::bounds_f(&spec, &d, BoundsCase::UnrestrictedIntercept).unwrap();
    let r2 = ardl::bounds_f(&spec, &d, BoundsCase::RestrictedIntercept).unwrap();
    assert!((r3.f_stat - f_iii).abs() < 1e-8 * f_iii);
    assert!((r2.f_stat - f_ii).abs() < 1e-8 * f_ii);
}
