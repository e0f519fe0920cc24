use ardl_core::linreg;

use super::{normal_equations, normals, rng};

/// Largest absolute gap between `ols` and the normal-equations oracle
/// (coefficients, `(X'X)^-1`, rss) over `instances` seeded well-conditioned
/// problems with `T <= 50` and at most five regressors plus a constant.
pub fn ols_oracle_gap(instances: u64, seed: u64) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..instances {
        let mut r = rng(seed + i);
        let t = 20 + (i as usize * 7) % 31;
        let k = 1 + i as usize % 5;
        let mut cols = vec![vec![1.0; t]];
        for _ in 0..k {
            cols.push(normals(&mut r, t));
        }
        let noise = normals(&mut r, t);
        let y: Vec<f64> = (0..t)
            .map(|s| cols.iter().enumerate().map(|(j, c)| (j as f64 - 1.5) * c[s]).sum::<f64>() + noise[s])
            .collect();
        let (beta, inv, rss) = normal_equations(&y, &cols);
        let fit = linreg::ols(&y, &linreg::design(&cols).unwrap()).unwrap();
        for j in 0..=k {
            worst = worst.max((fit.coefficients[j] - beta[j]).abs());
            for l in 0..=k {
                worst = worst.max((fit.xtx_inv[(j, l)] - inv[j][l]).abs());
            }
        }
        worst = worst.max((fit.rss - rss).abs());
    }
    worst
}
