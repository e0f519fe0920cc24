mod common;

use common::montecarlo::*;

#[test]
fn adf_size_and_power() {
    let size = adf_rejection_rate(2000, 100, 1.0, 1_000);
    assert!((0.03..=0.07).contains(&size), "size {size}");
    let power = adf_rejection_rate(2000, 100, 0.5, 50_000);
    assert!(power > 0.9, "power {power}");
}

#[test]
fn fmols_and_ccr_are_median_unbiased() {
    let mc = fmols_ccr_medians(500, 200, 7_000);
    assert!((mc.fmols_median - 2.0).abs() <= 0.05, "fmols {}", mc.fmols_median);
    assert!((mc.ccr_median - 2.0).abs() <= 0.05, "ccr {}", mc.ccr_median);
    assert!(mc.median_gap <= 0.1, "gap {}", mc.median_gap);
}

#[test]
fn cusum_detects_mid_sample_break() {
    let rate = unstable_rate(200, 60, 5.0, false, 30_000);
    assert!(rate >= 0.8, "detection {rate}");
}

#[test]
fn cusumsq_stable_under_iid_errors() {
    let rate = unstable_rate(200, 60, 0.0, true, 40_000);
    assert!(rate <= 0.1, "false alarms {rate}");
}

#[test]
fn diagnostic_sizes_near_nominal() {
    let sizes = diagnostic_sizes(1000, 80, 60_000);
    for (name, s) in ["bg", "bpg", "jb", "reset"].iter().zip(sizes) {
        // 1000 draws at 5%: binomial sd is about 0.7%
        assert!((0.015..=0.09).contains(&s), "{name} size {s}");
    }
}

#[test]
fn bounds_false_cointegration_rate_near_nominal() {
    // share of independent walks wrongly called cointegrated at 5%
    let mut wrong = 0;
    for i in 0..200u64 {
        if bounds_decision_rw(500, 2, 90_000 + i) == ardl_core::ardl::BoundsDecision::Cointegrated {
            wrong += 1;
        }
    }
    assert!(wrong as f64 / 200.0 <= 0.08, "{wrong} of 200");
}
