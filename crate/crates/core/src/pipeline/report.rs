//! Report model shared by the text and JSON emitters.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ardl::{BoundsCase, BoundsDecision, Coefficient};
use crate::cointreg::{CointRegFit, Method};
use crate::diagnostics::{StabilityPath, TestResult, Verdict};
use crate::linreg::Criterion;
use crate::significance::{stars_for_p, Significance};
use crate::unitroot::{DeterministicSpec, UnitRootResult};

pub const SCHEMA_VERSION: u32 = 1;

/// A numeric cell. Non-finite values survive a JSON round trip: NaN is
/// written as `null` and infinities as the strings `"inf"` and `"-inf"`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Value(pub f64);

impl Value {
    pub fn get(self) -> f64 {
        self.0
    }

    /// Three-decimal rendering used by the text report.
    pub fn fixed3(self) -> String {
        if self.0.is_nan() {
            "NA".to_string()
        } else if self.0.is_infinite() {
            if self.0 > 0.0 { "inf" } else { "-inf" }.to_string()
        } else {
            // avoid "-0.000"
            let s = format!("{:.3}", self.0);
            if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
                s.trim_start_matches('-').to_string()
            } else {
                s
            }
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value(v)
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        (self.0.is_nan() && other.0.is_nan()) || self.0 == other.0
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fixed3())
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = self.0;
        if v.is_nan() {
            s.serialize_none()
        } else if v.is_infinite() {
            s.serialize_str(if v > 0.0 { "inf" } else { "-inf" })
        } else {
            s.serialize_f64(v)
        }
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
            Null(()),
        }
        match Option::<Raw>::deserialize(d)? {
            None | Some(Raw::Null(())) => Ok(Value(f64::NAN)),
            Some(Raw::Number(v)) => Ok(Value(v)),
            Some(Raw::Text(t)) => match t.as_str() {
                "inf" => Ok(Value(f64::INFINITY)),
                "-inf" => Ok(Value(f64::NEG_INFINITY)),
                other => Err(serde::de::Error::custom(format!("invalid number `{other}`"))),
            },
        }
    }
}

fn values(v: &[f64]) -> Vec<Value> {
    v.iter().copied().map(Value).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub metadata: Metadata,
    pub stages: Vec<StageRecord>,
    pub descriptive: Option<Vec<DescriptiveRow>>,
    pub unit_roots: Option<UnitRootBlock>,
    pub bounds: Option<BoundsBlock>,
    pub ecm: Option<EcmBlock>,
    pub robustness: Option<RobustnessBlock>,
    pub reference_deltas: Vec<ReferenceDelta>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(metadata: Metadata) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            metadata,
            stages: Vec::new(),
            descriptive: None,
            unit_roots: None,
            bounds: None,
            ecm: None,
            robustness: None,
            reference_deltas: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn stage(&self, name: &str) -> Option<&StageRecord> {
        self.stages.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// JSON with the generation timestamp blanked.
    pub fn to_json_without_timestamp(&self) -> String {
        let mut r = self.clone();
        r.metadata.generated_at.clear();
        r.to_json()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    /// RFC 3339 time of the run. The only non-deterministic field.
    pub generated_at: String,
    pub tool_version: String,
    pub label: Option<String>,
    pub data_source: String,
    /// Source-reported last update of fetched series, when known.
    pub data_vintage: Option<String>,
    pub sample: Sample,
    pub settings: Settings,
    pub decisions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub first_year: i32,
    pub last_year: i32,
    pub n_obs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub dependent: String,
    pub regressors: Vec<String>,
    pub max_p: usize,
    pub max_q: usize,
    pub criterion: Criterion,
    pub significance: Significance,
    pub bandwidth: String,
    pub bounds_case: BoundsCase,
    pub unitroot_lags: String,
    pub bg_lags: usize,
    pub reset_powers: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageStatus {
    Completed,
    Skipped,
    Failed,
}

impl fmt::Display for StageStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StageStatus::Completed => "completed",
            StageStatus::Skipped => "skipped",
            StageStatus::Failed => "failed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub name: String,
    pub status: StageStatus,
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveRow {
    pub variable: String,
    pub obs: usize,
    pub mean: Value,
    pub std: Value,
    pub min: Value,
    pub max: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitRootCell {
    pub statistic: Value,
    pub lag_or_bandwidth: usize,
    pub n_obs: usize,
    pub stars: String,
    pub critical_5pct: Value,
}

impl From<&UnitRootResult> for UnitRootCell {
    fn from(r: &UnitRootResult) -> Self {
        Self {
            statistic: Value(r.tau),
            lag_or_bandwidth: r.lag_or_bandwidth,
            n_obs: r.n_obs,
            stars: crate::significance::stars(|s| r.rejects(s)).to_string(),
            critical_5pct: Value(r.critical_values.five),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitRootRow {
    pub variable: String,
    pub spec: DeterministicSpec,
    pub adf_level: UnitRootCell,
    pub adf_diff: UnitRootCell,
    pub pp_level: UnitRootCell,
    pub pp_diff: UnitRootCell,
    /// Order from the ADF pair.
    pub status: String,
    /// Order from the PP pair.
    pub pp_status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitRootBlock {
    pub significance: Significance,
    pub rows: Vec<UnitRootRow>,
}

impl UnitRootBlock {
    pub fn rows_for(&self, spec: DeterministicSpec) -> impl Iterator<Item = &UnitRootRow> {
        self.rows.iter().filter(move |r| r.spec == spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub significance: Significance,
    pub i0: Value,
    pub i1: Value,
    pub decision: BoundsDecision,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsBlock {
    /// e.g. `ARDL(2, 2, 1, 1, 2, 2)`.
    pub model: String,
    pub lag_vector: Vec<usize>,
    pub criterion: Criterion,
    pub criterion_value: Value,
    pub case: BoundsCase,
    pub k: usize,
    pub f_stat: Value,
    pub stars: String,
    pub n_obs: usize,
    pub first_year: i32,
    pub last_year: i32,
    pub bounds: Vec<BoundsRow>,
    pub significance: Significance,
    pub decision: BoundsDecision,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefRow {
    pub name: String,
    pub coefficient: Value,
    pub std_error: Value,
    pub t_stat: Value,
    pub p_value: Value,
    pub stars: String,
}

impl From<&Coefficient> for CoefRow {
    fn from(c: &Coefficient) -> Self {
        Self {
            name: c.name.clone(),
            coefficient: Value(c.coefficient),
            std_error: Value(c.std_error),
            t_stat: Value(c.t_stat),
            p_value: Value(c.p_value),
            stars: stars_for_p(c.p_value).to_string(),
        }
    }
}

impl CoefRow {
    fn from_cointreg(fit: &CointRegFit) -> Vec<Self> {
        (0..fit.names.len())
            .map(|i| Self {
                name: fit.names[i].clone(),
                coefficient: Value(fit.coefficients[i]),
                std_error: Value(fit.std_errors[i]),
                t_stat: Value(fit.t_stats[i]),
                p_value: Value(fit.p_values[i]),
                stars: stars_for_p(fit.p_values[i]).to_string(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRow {
    /// `serial_correlation`, `heteroskedasticity`, `normality` or `functional_form`.
    pub check: String,
    pub test: String,
    pub statistic: Value,
    pub df: usize,
    pub df_denominator: Option<usize>,
    pub p_value: Value,
}

impl DiagnosticRow {
    pub fn new(check: &str, t: &TestResult) -> Self {
        Self {
            check: check.to_string(),
            test: t.name.clone(),
            statistic: Value(t.statistic),
            df: t.df,
            df_denominator: t.df_denominator,
            p_value: Value(t.p_value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityBlock {
    pub name: String,
    pub verdict: Verdict,
    pub t: Vec<usize>,
    pub values: Vec<Value>,
    pub lower: Vec<Value>,
    pub upper: Vec<Value>,
}

impl From<&StabilityPath> for StabilityBlock {
    fn from(p: &StabilityPath) -> Self {
        Self {
            name: p.name.clone(),
            verdict: p.verdict,
            t: p.t.clone(),
            values: values(&p.values),
            lower: values(&p.lower),
            upper: values(&p.upper),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcmBlock {
    pub model: String,
    pub n_obs: usize,
    pub r_squared: Value,
    pub short_run: Vec<CoefRow>,
    pub ect: CoefRow,
    pub long_run: Vec<CoefRow>,
    pub ect_stable: bool,
    pub diagnostics: Vec<DiagnosticRow>,
    pub cusum: Option<StabilityBlock>,
    pub cusumsq: Option<StabilityBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CointBlock {
    pub method: Method,
    pub bandwidth: usize,
    pub n_obs: usize,
    pub long_run_variance: Value,
    pub degenerate: bool,
    pub rows: Vec<CoefRow>,
}

impl From<&CointRegFit> for CointBlock {
    fn from(f: &CointRegFit) -> Self {
        Self {
            method: f.method,
            bandwidth: f.bandwidth,
            n_obs: f.n_obs,
            long_run_variance: Value(f.long_run_variance),
            degenerate: f.degenerate,
            rows: CoefRow::from_cointreg(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessBlock {
    pub fmols: CointBlock,
    pub ccr: CointBlock,
}

/// Computed cell against its published counterpart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceDelta {
    pub block: String,
    pub cell: String,
    pub published: Value,
    pub computed: Value,
    pub delta: Value,
    pub tolerance: Option<Value>,
    /// `None` when the cell has no tolerance.
    pub within: Option<bool>,
}

impl ReferenceDelta {
    pub fn new(block: &str, cell: impl Into<String>, published: f64, computed: f64, tolerance: Option<f64>) -> Self {
        let delta = computed - published;
        Self {
            block: block.to_string(),
            cell: cell.into(),
            published: Value(published),
            computed: Value(computed),
            delta: Value(delta),
            tolerance: tolerance.map(Value),
            within: tolerance.map(|t| delta.abs() <= t),
        }
    }
}
