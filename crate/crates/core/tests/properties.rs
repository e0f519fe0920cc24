mod common;

use ardl_core::ardl::{self, ArdlSpec, BoundsCase};
use ardl_core::diagnostics;
use ardl_core::linreg::{self, Bandwidth, HacOptions};
use ardl_core::timeseries::{describe, diff, lag, parse_csv, to_csv, TimeSeries};
use ardl_core::unitroot::{adf, pp, DeterministicSpec, LagPolicy};
use common::*;
use proptest::prelude::*;

fn series(seed: u64, n: usize) -> TimeSeries {
    TimeSeries::new("s", 1960, random_walk(&mut rng(seed), n)).unwrap()
}

fn ardl_data(seed: u64, n: usize) -> ardl_core::timeseries::Dataset {
    let mut r = rng(seed);
    let x1 = random_walk(&mut r, n);
    let x2 = random_walk(&mut r, n);
    let e = normals(&mut r, n);
    let mut y = vec![0.0; n];
    for t in 1..n {
        y[t] = 0.5 * y[t - 1] + 0.4 * x1[t] - 0.2 * x2[t] + e[t];
    }
    dataset(&[("y", y), ("x1", x1), ("x2", x2)], "y", &["x1", "x2"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn diff_and_lag_commute(seed in 0u64..10_000, n in 8usize..60, k in 1usize..4) {
        let s = series(seed, n);
        let a = diff(&lag(&s, k).unwrap(), 1).unwrap();
        let b = lag(&diff(&s, 1).unwrap(), k).unwrap();
        let start = a.start_year().max(b.start_year());
        let end = a.end_year().min(b.end_year());
        for year in start..=end {
            prop_assert_eq!(a.at(year), b.at(year));
        }
    }

    #[test]
    fn describe_affine(seed in 0u64..10_000, a in -20.0f64..20.0, b in -100.0f64..100.0) {
        prop_assume!(a.abs() > 1e-3);
        let s = series(seed, 30);
        let d = describe(&s).unwrap();
        let t = describe(&s.affine(a, b)).unwrap();
        prop_assert!((t.mean - (a * d.mean + b)).abs() < 1e-10 * (1.0 + t.mean.abs()));
        prop_assert!((t.std - a.abs() * d.std).abs() < 1e-10 * (1.0 + t.std));
    }

    #[test]
    fn csv_round_trip(seed in 0u64..10_000, n in 2usize..40) {
        let s = series(seed, n);
        let text = to_csv(std::slice::from_ref(&s)).unwrap();
        let back = parse_csv(&text).unwrap();
        prop_assert_eq!(back[0].values(), s.values());
        prop_assert_eq!(to_csv(&back).unwrap(), text);
    }

    #[test]
    fn ols_column_order_invariant(seed in 0u64..10_000, t in 15usize..50) {
        let mut r = rng(seed);
        let cols = vec![vec![1.0; t], normals(&mut r, t), normals(&mut r, t), normals(&mut r, t)];
        let y = normals(&mut r, t);
        let a = linreg::ols(&y, &linreg::design(&cols).unwrap()).unwrap();
        let rev: Vec<Vec<f64>> = cols.iter().rev().cloned().collect();
        let b = linreg::ols(&y, &linreg::design(&rev).unwrap()).unwrap();
        for (u, v) in a.fitted.iter().zip(&b.fitted) {
            prop_assert!((u - v).abs() < 1e-10);
        }
        for j in 0..4 {
            prop_assert!((a.coefficients[j] - b.coefficients[3 - j]).abs() < 1e-10);
        }
    }

    #[test]
    fn scaling_keeps_t_stats(seed in 0u64..10_000, c in 0.01f64..100.0) {
        let mut r = rng(seed);
        let t = 25;
        let x = linreg::design(&[vec![1.0; t], normals(&mut r, t)]).unwrap();
        let y = normals(&mut r, t);
        let ys: Vec<f64> = y.iter().map(|v| v * c).collect();
        let a = linreg::ols(&y, &x).unwrap();
        let b = linreg::ols(&ys, &x).unwrap();
        prop_assert!((b.rss - c * c * a.rss).abs() < 1e-10 * b.rss.max(1.0));
        for (u, v) in a.t_stats().iter().zip(b.t_stats()) {
            prop_assert!((u - v).abs() < 1e-10 * u.abs().max(1.0));
        }
    }

    #[test]
    fn lrv_bandwidth_zero_is_mean_square(seed in 0u64..10_000, n in 2usize..80) {
        let u = normals(&mut rng(seed), n);
        let v = linreg::newey_west_lrv(&u, &HacOptions::fixed(0)).unwrap();
        let ms = u.iter().map(|x| x * x).sum::<f64>() / n as f64;
        prop_assert!((v - ms).abs() < 1e-12 * ms.max(1.0));
    }

    #[test]
    fn wald_f_nonnegative(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let t = 30;
        let x1 = normals(&mut r, t);
        let x2 = normals(&mut r, t);
        let y = normals(&mut r, t);
        let u = linreg::ols(&y, &linreg::design(&[vec![1.0; t], x1.clone(), x2]).unwrap()).unwrap();
        let rr = linreg::ols(&y, &linreg::design(&[vec![1.0; t], x1]).unwrap()).unwrap();
        let f = linreg::wald_f(&u, &rr, 1).unwrap();
        prop_assert!(f.statistic >= 0.0);
        prop_assert!((0.0..=1.0).contains(&f.p_value));
    }

    #[test]
    fn adf_affine_invariant(seed in 0u64..10_000, a in 0.01f64..50.0, b in -50.0f64..50.0) {
        let s = series(seed, 40);
        let x = adf(&s, DeterministicSpec::Constant, LagPolicy::default()).unwrap();
        let y = adf(&s.affine(a, b), DeterministicSpec::Constant, LagPolicy::default()).unwrap();
        prop_assert_eq!(x.lag_or_bandwidth, y.lag_or_bandwidth);
        prop_assert!((x.tau - y.tau).abs() < 1e-10 * x.tau.abs().max(1.0));
    }

    #[test]
    fn pp_bandwidth_zero_is_adf_lag_zero(seed in 0u64..10_000, trend in any::<bool>()) {
        let spec = if trend { DeterministicSpec::ConstantTrend } else { DeterministicSpec::Constant };
        let s = series(seed, 35);
        let a = adf(&s, spec, LagPolicy::Fixed(0)).unwrap();
        let p = pp(&s, spec, Bandwidth::Fixed(0)).unwrap();
        prop_assert!((a.tau - p.tau).abs() < 1e-10);
    }

    #[test]
    fn bounds_f_regressor_order_invariant(seed in 0u64..10_000, case3 in any::<bool>()) {
        let case = if case3 { BoundsCase::UnrestrictedIntercept } else { BoundsCase::RestrictedIntercept };
        let d = ardl_data(seed, 40);
        let s1 = ArdlSpec::new("y", vec!["x1".into(), "x2".into()], 2, vec![1, 0]).unwrap();
        let s2 = ArdlSpec::new("y", vec!["x2".into(), "x1".into()], 2, vec![0, 1]).unwrap();
        let a = ardl::bounds_f(&s1, &d, case).unwrap();
        let b = ardl::bounds_f(&s2, &d, case).unwrap();
        prop_assert!((a.f_stat - b.f_stat).abs() < 1e-10 * a.f_stat.max(1.0));
    }

    #[test]
    fn ecm_identities(seed in 0u64..10_000, p in 1usize..3, q1 in 0usize..3, q2 in 0usize..3) {
        let d = ardl_data(seed, 45);
        let spec = ArdlSpec::new("y", vec!["x1".into(), "x2".into()], p, vec![q1, q2]).unwrap();
        let e = ardl::fit_ecm(&spec, &d).unwrap();
        let b = &e.levels.fit.coefficients;
        let phi: f64 = b[1..=p].iter().sum();
        prop_assert!((e.ect.coefficient - (phi - 1.0)).abs() < 1e-10);
        let mut at = 1 + p;
        for (j, q) in [q1, q2].iter().enumerate() {
            let theta: f64 = b[at..=at + q].iter().sum();
            at += q + 1;
            prop_assert!((e.long_run[j].coefficient - theta / (1.0 - phi)).abs() < 1e-10);
        }
        prop_assert!((e.long_run[2].coefficient - b[0] / (1.0 - phi)).abs() < 1e-10);
        for (u, v) in e.levels.fit.residuals.iter().zip(&e.ecm.fit.residuals) {
            prop_assert!((u - v).abs() < 1e-10);
        }
        prop_assert!((e.levels.fit.rss - e.ecm.fit.rss).abs() < 1e-10 * e.levels.fit.rss.max(1.0));
    }

    #[test]
    fn diagnostics_well_formed(seed in 0u64..10_000, t in 20usize..60) {
        let mut r = rng(seed);
        let x = linreg::design(&[vec![1.0; t], normals(&mut r, t), normals(&mut r, t)]).unwrap();
        let y = normals(&mut r, t);
        let fit = linreg::ols(&y, &x).unwrap();
        for res in [
            diagnostics::bg_lm(&fit, &x, 2).unwrap(),
            diagnostics::het_test(&fit, &x).unwrap(),
            diagnostics::jarque_bera(&fit.residuals).unwrap(),
            diagnostics::ramsey_reset(&fit, &x, &y, &[2, 3]).unwrap(),
        ] {
            prop_assert!((0.0..=1.0).contains(&res.p_value), "{}", res.name);
            prop_assert!(res.statistic >= 0.0, "{}", res.name);
        }
        let c = 3.7;
        let scaled: Vec<f64> = fit.residuals.iter().map(|e| e * c).collect();
        let a = diagnostics::jarque_bera(&fit.residuals).unwrap();
        let b = diagnostics::jarque_bera(&scaled).unwrap();
        prop_assert!((a.statistic - b.statistic).abs() < 1e-10);

        let sq = diagnostics::cusumsq(&y, &x).unwrap();
        prop_assert!(sq.values[0] >= 0.0);
        prop_assert_eq!(*sq.values.last().unwrap(), 1.0);
        prop_assert!(sq.values.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn recursive_residuals_vanish_on_exact_models(seed in 0u64..10_000, t in 8usize..40) {
        let mut r = rng(seed);
        let x1 = normals(&mut r, t);
        let x = linreg::design(&[vec![1.0; t], x1.clone()]).unwrap();
        let y: Vec<f64> = x1.iter().map(|v| 2.0 - 0.7 * v).collect();
        let w = diagnostics::recursive_residuals(&y, &x).unwrap();
        prop_assert_eq!(w.len(), t - 2);
        prop_assert!(w.iter().all(|v| v.abs() < 1e-9));
    }
}

#[test]
fn selection_is_bit_identical_across_runs() {
    let d = ardl_data(3, 50);
    let first = ardl::evaluate_grid(&d, 3, 3, linreg::Criterion::Aic).unwrap();
    for _ in 0..5 {
        let again = ardl::evaluate_grid(&d, 3, 3, linreg::Criterion::Aic).unwrap();
        assert_eq!(again.len(), first.len());
        for (a, b) in first.iter().zip(&again) {
            assert_eq!(a.lags, b.lags);
            assert_eq!(a.value.to_bits(), b.value.to_bits());
        }
    }
}
