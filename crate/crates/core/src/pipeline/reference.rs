//! Published reference results for the bundled Türkiye 2000-2022 dataset,
//! used to report per-cell deltas.

use crate::unitroot::DeterministicSpec;

pub const VARIABLES: [&str; 6] = ["AGR", "IND", "CON", "SER", "UNP", "INF"];

/// (variable, mean, std, min, max)
pub const DESCRIPTIVE: [(&str, f64, f64, f64, f64); 6] = [
    ("AGR", 7.67, 1.40, 5.50, 10.20),
    ("IND", 20.71, 2.10, 18.40, 27.10),
    ("CON", 6.29, 1.32, 4.50, 8.50),
    ("SER", 53.93, 1.26, 51.20, 57.20),
    ("UNP", 10.68, 1.59, 6.50, 14.03),
    ("INF", 18.71, 18.30, 6.25, 72.31),
];
pub const DESCRIPTIVE_TOLERANCE: f64 = 0.05;

/// (variable, ADF level, ADF diff, PP level, PP diff) with lag/bandwidth.
pub type UnitRootRow = (&'static str, (f64, usize), (f64, usize), (f64, usize), (f64, usize));

pub const UNIT_ROOT_CONSTANT: [UnitRootRow; 6] = [
    ("UNP", (-1.499, 1), (-3.512, 1), (-1.900, 1), (-3.666, 2)),
    ("AGR", (-1.613, 0), (-5.422, 0), (-1.511, 1), (-5.578, 1)),
    ("IND", (-1.167, 2), (-5.465, 1), (-1.120, 2), (-3.485, 1)),
    ("CON", (-2.037, 1), (-3.108, 0), (-1.242, 1), (-3.147, 0)),
    ("SER", (-2.420, 0), (-4.633, 0), (-2.420, 0), (-4.628, 1)),
    ("INF", (-1.276, 0), (-4.242, 1), (-1.436, 1), (-4.231, 2)),
];

pub const UNIT_ROOT_TREND: [UnitRootRow; 6] = [
    ("UNP", (-1.561, 1), (-3.517, 1), (-2.402, 1), (-3.510, 2)),
    ("AGR", (-3.151, 0), (-5.269, 0), (-3.185, 1), (-5.405, 1)),
    ("IND", (-1.666, 2), (-5.552, 1), (-2.450, 2), (-8.396, 1)),
    ("CON", (-0.390, 0), (-3.654, 1), (-0.390, 2), (-3.922, 2)),
    ("SER", (-2.271, 0), (-4.580, 0), (-2.271, 0), (-4.577, 1)),
    ("INF", (-1.118, 0), (-4.677, 1), (-1.201, 1), (-3.316, 2)),
];

pub fn unit_roots(spec: DeterministicSpec) -> &'static [UnitRootRow; 6] {
    match spec {
        DeterministicSpec::Constant => &UNIT_ROOT_CONSTANT,
        DeterministicSpec::ConstantTrend => &UNIT_ROOT_TREND,
    }
}

pub const UNP_ADF_LEVEL_TOLERANCE: f64 = 0.3;

pub const ARDL_LAGS: [usize; 6] = [2, 2, 1, 1, 2, 2];
pub const BOUNDS_F: f64 = 5.557;
pub const BOUNDS_F_TOLERANCE: f64 = 1.0;

/// (name, coefficient, std error, t)
pub type CoefRow = (&'static str, f64, f64, f64);

pub const SHORT_RUN: [CoefRow; 5] = [
    ("AGR", -0.471, 0.081, -5.825),
    ("IND", -0.680, 0.073, -9.348),
    ("CON", -0.899, 0.061, -14.621),
    ("SER", -1.383, 0.206, -2.338),
    ("INF", -0.062, 0.014, -4.369),
];
pub const ECT: CoefRow = ("ECT", -0.118, 0.116, -10.179);

pub const LONG_RUN: [CoefRow; 6] = [
    ("AGR", -2.380, 0.348, -6.839),
    ("IND", -4.057, 0.759, -5.345),
    ("CON", -1.761, 0.252, -6.980),
    ("SER", -3.664, 1.000, -2.377),
    ("INF", -0.548, 0.120, -2.463),
    ("C", 37.253, 7.213, 5.165),
];

/// Serial correlation, heteroskedasticity, normality, functional form.
pub const DIAGNOSTIC_P: [(&str, f64); 4] = [
    ("serial_correlation", 0.28),
    ("heteroskedasticity", 0.17),
    ("normality", 0.36),
    ("functional_form", 0.47),
];

pub const FMOLS: [CoefRow; 6] = [
    ("AGR", -1.470, 0.285, -5.151),
    ("IND", -1.904, 0.593, -3.211),
    ("CON", -1.229, 0.201, -6.108),
    ("SER", -1.830, 0.958, -1.919),
    ("INF", -0.104, 0.023, -4.560),
    ("C", 20.886, 6.309, 3.310),
];

pub const CCR: [CoefRow; 6] = [
    ("AGR", -1.583, 0.296, -5.349),
    ("IND", -2.082, 0.635, -3.279),
    ("CON", -1.300, 0.197, -6.546),
    ("SER", -2.160, 1.025, -2.107),
    ("INF", -0.097, 0.028, -3.418),
    ("C", 23.079, 6.424, 3.593),
];
