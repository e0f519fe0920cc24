//! End-to-end study: ingest, describe, unit roots, ARDL selection, bounds
//! test, error-correction model, diagnostics and FMOLS/CCR, driven by a
//! [`PipelineConfig`].

pub mod config;
pub mod reference;
pub mod render;
pub mod report;
pub mod wdi;

use std::fs;
use std::path::Path;

use crate::ardl::{self, ArdlSpec, BoundsDecision, BoundsResult, EcmFit};
use crate::cointreg;
use crate::diagnostics;
use crate::error::{Error, Result};
use crate::linreg::{Bandwidth, HacOptions, Kernel};
use crate::significance::{stars, Significance};
use crate::timeseries::{self, diff, Dataset, TimeSeries};
use crate::unitroot::{self, DeterministicSpec, LagPolicy};

pub use config::{DataSource, OutputFormat, PipelineConfig, WdiSource};
pub use render::render_text;
pub use report::*;
pub use wdi::{fetch_wdi, fetch_wdi_with_meta, FixtureTransport, OfflineTransport, WdiRequest, WdiTransport};

/// Stage names in execution order.
pub const STAGES: [&str; 8] = [
    "ingest",
    "describe",
    "unit_roots",
    "ardl_selection",
    "bounds",
    "ecm",
    "diagnostics",
    "robustness",
];

/// A stage failure together with the report built up to that point.
#[derive(Debug, thiserror::Error)]
#[error("stage `{stage}` failed: {source}")]
pub struct PipelineError {
    pub stage: String,
    #[source]
    pub source: Error,
    pub partial: Box<Report>,
}

impl PipelineError {
    pub fn is_validation(&self) -> bool {
        self.source.is_validation()
    }
}

/// Loaded data with a description of where it came from.
#[derive(Debug, Clone)]
pub struct LoadedData {
    pub dataset: Dataset,
    pub source: String,
    pub vintage: Option<String>,
}

pub fn load_data(cfg: &PipelineConfig, transport: &dyn WdiTransport) -> Result<LoadedData> {
    match &cfg.source {
        DataSource::Csv(path) => Ok(LoadedData {
            dataset: timeseries::load_csv(path, cfg.roles.clone())?,
            source: format!("csv {}", path.display()),
            vintage: None,
        }),
        DataSource::Wdi(w) => {
            let mut series = Vec::new();
            let mut vintages = Vec::new();
            for (name, code) in &w.series {
                let req = WdiRequest::new(code.clone(), w.country.clone(), w.from, w.to)?;
                let (s, meta) = fetch_wdi_with_meta(transport, &req, name)?;
                if let Some(v) = meta.last_updated {
                    vintages.push(format!("{code} {v}"));
                }
                series.push(s);
            }
            let mut source = format!(
                "World Bank WDI {} {}-{} ({})",
                w.country,
                w.from,
                w.to,
                w.series.iter().map(|(n, c)| format!("{n}={c}")).collect::<Vec<_>>().join(", ")
            );
            if let Some(extra) = &w.extra_csv {
                series.extend(timeseries::read_csv_series(extra)?);
                source.push_str(&format!(" + csv {}", extra.display()));
            }
            Ok(LoadedData {
                dataset: Dataset::new(series, cfg.roles.clone())?,
                source,
                vintage: (!vintages.is_empty()).then(|| vintages.join("; ")),
            })
        }
    }
}

fn lag_policy_label(p: &LagPolicy) -> String {
    match p {
        LagPolicy::Fixed(k) => format!("fixed {k}"),
        LagPolicy::Auto { criterion, max_lag } => match max_lag {
            Some(m) => format!("auto {} up to {m}", criterion_label(*criterion)),
            None => format!("auto {} up to min(4, floor((T-1)/5))", criterion_label(*criterion)),
        },
    }
}

pub(crate) fn criterion_label(c: crate::linreg::Criterion) -> &'static str {
    match c {
        crate::linreg::Criterion::Aic => "AIC",
        crate::linreg::Criterion::Sic => "SIC",
        crate::linreg::Criterion::Hq => "HQ",
    }
}

fn bandwidth_label(b: Bandwidth) -> String {
    match b {
        Bandwidth::Fixed(l) => format!("fixed {l}"),
        Bandwidth::Automatic => "automatic floor(4 (T/100)^(2/9))".to_string(),
    }
}

fn decisions(cfg: &PipelineConfig) -> Vec<String> {
    let case = match cfg.bounds_case {
        ardl::BoundsCase::RestrictedIntercept => "restricted intercept, no trend",
        ardl::BoundsCase::UnrestrictedIntercept => "unrestricted intercept, no trend",
    };
    vec![
        "Descriptive standard deviation uses the n-1 denominator.".to_string(),
        format!(
            "ADF lag selection: {}; candidates compared on a common sample, chosen lag re-estimated on its full sample.",
            lag_policy_label(&cfg.unitroot_lags)
        ),
        format!("Phillips-Perron: Bartlett kernel, bandwidth {}.", bandwidth_label(cfg.bandwidth)),
        "Unit-root critical values: MacKinnon (2010) response surfaces.".to_string(),
        "Integration status is taken from the ADF level and first-difference pair.".to_string(),
        format!(
            "ARDL grid p in 1..{}, q in 0..{} by {}; all candidates share the sample aligned to the largest lag; ties go to the smallest total lag, then the smallest lag vector.",
            cfg.max_p,
            cfg.max_q,
            criterion_label(cfg.criterion)
        ),
        format!("Bounds test Case {} ({case}); asymptotic Pesaran-Shin-Smith bounds.", cfg.bounds_case),
        "Regressors with zero distributed lags enter the error-correction form in levels.".to_string(),
        "Short-run coefficient: contemporaneous difference term. Long-run standard errors by the delta method.".to_string(),
        format!(
            "Diagnostics on the levels ARDL regression: Breusch-Godfrey LM ({} lags), Breusch-Pagan-Godfrey, Jarque-Bera, Ramsey RESET F (powers {:?}).",
            cfg.bg_lags, cfg.reset_powers
        ),
        "CUSUM 5% bands with a = 0.948; CUSUMSQ bands from the exact Durbin c0 at 5% two-sided.".to_string(),
        format!(
            "FMOLS and CCR: constant only, Bartlett kernel, bandwidth {}, first observation dropped for differencing.",
            bandwidth_label(cfg.bandwidth)
        ),
    ]
}

fn metadata(cfg: &PipelineConfig) -> Metadata {
    Metadata {
        generated_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        label: cfg.label.clone(),
        data_source: String::new(),
        data_vintage: None,
        sample: Sample {
            first_year: 0,
            last_year: 0,
            n_obs: 0,
        },
        settings: Settings {
            dependent: cfg.roles.dependent.clone(),
            regressors: cfg.roles.regressors.clone(),
            max_p: cfg.max_p,
            max_q: cfg.max_q,
            criterion: cfg.criterion,
            significance: cfg.significance,
            bandwidth: bandwidth_label(cfg.bandwidth),
            bounds_case: cfg.bounds_case,
            unitroot_lags: lag_policy_label(&cfg.unitroot_lags),
            bg_lags: cfg.bg_lags,
            reset_powers: cfg.reset_powers.clone(),
        },
        decisions: decisions(cfg),
    }
}

struct Run<'a> {
    cfg: &'a PipelineConfig,
    report: Report,
}

impl Run<'_> {
    fn stage<T>(&mut self, name: &str, f: impl FnOnce(&mut Report) -> Result<T>) -> Result<T, PipelineError> {
        match f(&mut self.report) {
            Ok(v) => {
                self.record(name, StageStatus::Completed, None);
                Ok(v)
            }
            Err(source) => {
                self.record(name, StageStatus::Failed, Some(source.to_string()));
                self.skip_rest(&format!("not run: stage `{name}` failed"));
                Err(PipelineError {
                    stage: name.to_string(),
                    source,
                    partial: Box::new(self.report.clone()),
                })
            }
        }
    }

    fn record(&mut self, name: &str, status: StageStatus, message: Option<String>) {
        self.report.stages.push(StageRecord {
            name: name.to_string(),
            status,
            message,
        });
    }

    fn skip_rest(&mut self, message: &str) {
        for name in STAGES {
            if self.report.stage(name).is_none() {
                self.record(name, StageStatus::Skipped, Some(message.to_string()));
            }
        }
    }

    fn hac(&self) -> HacOptions {
        HacOptions {
            kernel: Kernel::Bartlett,
            bandwidth: self.cfg.bandwidth,
        }
    }
}

/// Runs every stage and returns the report without writing anything.
///
/// Stops after the bounds test when the decision at the configured
/// significance is "not cointegrated"; the remaining stages are then marked
/// skipped.
pub fn compute_report(cfg: &PipelineConfig, transport: &dyn WdiTransport) -> Result<Report, PipelineError> {
    let mut run = Run {
        cfg,
        report: Report::new(metadata(cfg)),
    };

    let data = run.stage("ingest", |r| {
        let data = load_data(cfg, transport)?;
        r.metadata.data_source = data.source.clone();
        r.metadata.data_vintage = data.vintage.clone();
        r.metadata.sample = Sample {
            first_year: data.dataset.start_year(),
            last_year: data.dataset.end_year(),
            n_obs: data.dataset.len(),
        };
        Ok(data)
    })?;
    let d = &data.dataset;

    run.stage("describe", |r| {
        let mut rows = Vec::new();
        for s in d.series() {
            let st = timeseries::describe(s)?;
            rows.push(DescriptiveRow {
                variable: s.name().to_string(),
                obs: st.obs,
                mean: Value(st.mean),
                std: Value(st.std),
                min: Value(st.min),
                max: Value(st.max),
            });
        }
        if cfg.reference {
            descriptive_deltas(r, &rows);
        }
        r.descriptive = Some(rows);
        Ok(())
    })?;

    run.stage("unit_roots", |r| {
        let block = unit_root_block(cfg, d)?;
        for row in &block.rows {
            if row.status == unitroot::IntegrationOrder::Higher.to_string() {
                r.warnings.push(format!(
                    "{} looks integrated of order two or higher ({}); ARDL bounds inference assumes I(0) or I(1)",
                    row.variable,
                    row.spec.label()
                ));
            }
        }
        if cfg.reference {
            unit_root_deltas(r, &block);
        }
        r.unit_roots = Some(block);
        Ok(())
    })?;

    let (spec, criterion_value) = run.stage("ardl_selection", |_| {
        let grid = ardl::evaluate_grid(d, cfg.max_p, cfg.max_q, cfg.criterion)?;
        let best = &grid[0];
        let mut spec = ArdlSpec::with_sample_start(
            d.roles().dependent.clone(),
            d.roles().regressors.clone(),
            best.lags[0],
            best.lags[1..].to_vec(),
            cfg.max_p.max(cfg.max_q),
        )?;
        spec.criterion = Some(cfg.criterion);
        Ok((spec, best.value))
    })?;

    let decision = run.stage("bounds", |r| {
        let res = ardl::bounds_f(&spec, d, cfg.bounds_case)?;
        let block = bounds_block(cfg, d, &spec, criterion_value, &res)?;
        if cfg.reference {
            if spec.lags() != reference::ARDL_LAGS {
                r.warnings.push(format!(
                    "selected lag vector {spec} differs from the published ({})",
                    reference::ARDL_LAGS.map(|l| l.to_string()).join(", ")
                ));
            }
            r.reference_deltas.push(ReferenceDelta::new(
                "bounds",
                "F-statistic",
                reference::BOUNDS_F,
                res.f_stat,
                Some(reference::BOUNDS_F_TOLERANCE),
            ));
        }
        if block.decision == BoundsDecision::Inconclusive {
            r.warnings.push(format!(
                "bounds test is inconclusive at {}: F = {:.3} lies between I(0) and I(1)",
                cfg.significance, res.f_stat
            ));
        }
        let decision = block.decision;
        r.bounds = Some(block);
        Ok(decision)
    })?;

    if decision == BoundsDecision::NotCointegrated {
        run.skip_rest(&format!(
            "bounds test finds no cointegration at {}",
            cfg.significance
        ));
        return Ok(run.report);
    }

    let ecm = run.stage("ecm", |r| {
        let ecm = ardl::fit_ecm(&spec, d)?;
        r.warnings.extend(ecm.warnings.iter().cloned());
        if cfg.reference {
            ecm_deltas(r, &ecm);
        }
        r.ecm = Some(EcmBlock {
            model: format!("ARDL{spec}"),
            n_obs: ecm.levels.fit.n_obs,
            r_squared: Value(ecm.levels.fit.r_squared()),
            short_run: ecm.short_run.iter().map(CoefRow::from).collect(),
            ect: CoefRow::from(&ecm.ect),
            long_run: ecm.long_run.iter().map(CoefRow::from).collect(),
            ect_stable: ecm.stable,
            diagnostics: Vec::new(),
            cusum: None,
            cusumsq: None,
        });
        Ok(ecm)
    })?;

    run.stage("diagnostics", |r| {
        let lv = &ecm.levels;
        let rows = vec![
            DiagnosticRow::new("serial_correlation", &diagnostics::bg_lm(&lv.fit, &lv.x, cfg.bg_lags)?),
            DiagnosticRow::new("heteroskedasticity", &diagnostics::het_test(&lv.fit, &lv.x)?),
            DiagnosticRow::new("normality", &diagnostics::jarque_bera(&lv.fit.residuals)?),
            DiagnosticRow::new(
                "functional_form",
                &diagnostics::ramsey_reset(&lv.fit, &lv.x, &lv.y, &cfg.reset_powers)?,
            ),
        ];
        let cusum = diagnostics::cusum(&lv.y, &lv.x)?;
        let cusumsq = diagnostics::cusumsq(&lv.y, &lv.x)?;
        if cfg.reference {
            for (check, published) in reference::DIAGNOSTIC_P {
                if let Some(row) = rows.iter().find(|d| d.check == check) {
                    r.reference_deltas
                        .push(ReferenceDelta::new("diagnostics", format!("{check} p"), published, row.p_value.0, None));
                }
            }
        }
        for (path, name) in [(&cusum, "CUSUM"), (&cusumsq, "CUSUMSQ")] {
            if path.verdict == diagnostics::Verdict::Unstable {
                r.warnings.push(format!("{name} leaves its 5% band"));
            }
        }
        let block = r.ecm.as_mut().expect("ecm stage completed");
        block.diagnostics = rows;
        block.cusum = Some(StabilityBlock::from(&cusum));
        block.cusumsq = Some(StabilityBlock::from(&cusumsq));
        Ok(())
    })?;

    let hac = run.hac();
    run.stage("robustness", |r| {
        let y = d.dependent().values();
        let x: Vec<Vec<f64>> = d.regressors().map(|s| s.values().to_vec()).collect();
        let names = &d.roles().regressors;
        let fm = cointreg::fmols(y, &x, names, &hac)?;
        let cc = cointreg::ccr(y, &x, names, &hac)?;
        if cfg.reference {
            for (block, published, fit) in [("fmols", &reference::FMOLS, &fm), ("ccr", &reference::CCR, &cc)] {
                for (name, coef, _, _) in published {
                    if let Some(v) = fit.get(name) {
                        r.reference_deltas.push(ReferenceDelta::new(block, *name, *coef, v, None));
                    }
                }
            }
        }
        r.robustness = Some(RobustnessBlock {
            fmols: CointBlock::from(&fm),
            ccr: CointBlock::from(&cc),
        });
        Ok(())
    })?;

    Ok(run.report)
}

fn unit_root_block(cfg: &PipelineConfig, d: &Dataset) -> Result<UnitRootBlock> {
    let names: Vec<&str> = std::iter::once(d.roles().dependent.as_str())
        .chain(d.roles().regressors.iter().map(String::as_str))
        .collect();
    let mut rows = Vec::new();
    for spec in [DeterministicSpec::Constant, DeterministicSpec::ConstantTrend] {
        for name in &names {
            let level = d.require(name)?;
            let first = diff(level, 1)?;
            rows.push(unit_root_row(cfg, level, &first, spec)?);
        }
    }
    Ok(UnitRootBlock {
        significance: cfg.significance,
        rows,
    })
}

fn unit_root_row(cfg: &PipelineConfig, level: &TimeSeries, first: &TimeSeries, spec: DeterministicSpec) -> Result<UnitRootRow> {
    let adf_l = unitroot::adf(level, spec, cfg.unitroot_lags)?;
    let adf_d = unitroot::adf(first, spec, cfg.unitroot_lags)?;
    let pp_l = unitroot::pp(level, spec, cfg.bandwidth)?;
    let pp_d = unitroot::pp(first, spec, cfg.bandwidth)?;
    Ok(UnitRootRow {
        variable: level.name().to_string(),
        spec,
        status: unitroot::classify_order(&adf_l, &adf_d, cfg.significance)?.to_string(),
        pp_status: unitroot::classify_order(&pp_l, &pp_d, cfg.significance)?.to_string(),
        adf_level: UnitRootCell::from(&adf_l),
        adf_diff: UnitRootCell::from(&adf_d),
        pp_level: UnitRootCell::from(&pp_l),
        pp_diff: UnitRootCell::from(&pp_d),
    })
}

fn bounds_block(
    cfg: &PipelineConfig,
    d: &Dataset,
    spec: &ArdlSpec,
    criterion_value: f64,
    res: &BoundsResult,
) -> Result<BoundsBlock> {
    let bounds = Significance::STARRED
        .iter()
        .rev()
        .filter_map(|&s| {
            Some(BoundsRow {
                significance: s,
                i0: Value(res.bounds.get(&s)?.i0),
                i1: Value(res.bounds.get(&s)?.i1),
                decision: res.decision_at(s)?,
            })
        })
        .collect();
    let decision = res
        .decision_at(cfg.significance)
        .ok_or_else(|| Error::Unsupported(format!("bounds at {}", cfg.significance)))?;
    Ok(BoundsBlock {
        model: format!("ARDL{spec}"),
        lag_vector: spec.lags(),
        criterion: cfg.criterion,
        criterion_value: Value(criterion_value),
        case: res.case,
        k: res.k,
        f_stat: Value(res.f_stat),
        stars: stars(|s| res.rejects(s)).to_string(),
        n_obs: d.len() - spec.sample_start,
        first_year: d.start_year() + spec.sample_start as i32,
        last_year: d.end_year(),
        bounds,
        significance: cfg.significance,
        decision,
    })
}

fn descriptive_deltas(r: &mut Report, rows: &[DescriptiveRow]) {
    let tol = Some(reference::DESCRIPTIVE_TOLERANCE);
    for (var, mean, std, min, max) in reference::DESCRIPTIVE {
        let Some(row) = rows.iter().find(|row| row.variable == var) else {
            continue;
        };
        for (stat, published, computed) in [
            ("mean", mean, row.mean),
            ("std", std, row.std),
            ("min", min, row.min),
            ("max", max, row.max),
        ] {
            r.reference_deltas
                .push(ReferenceDelta::new("descriptive", format!("{var} {stat}"), published, computed.0, tol));
        }
    }
}

fn unit_root_deltas(r: &mut Report, block: &UnitRootBlock) {
    for spec in [DeterministicSpec::Constant, DeterministicSpec::ConstantTrend] {
        let tag = match spec {
            DeterministicSpec::Constant => "c",
            DeterministicSpec::ConstantTrend => "ct",
        };
        for (var, adf_l, adf_d, pp_l, pp_d) in reference::unit_roots(spec) {
            let Some(row) = block.rows_for(spec).find(|row| row.variable == *var) else {
                continue;
            };
            for (cell, published, computed) in [
                ("ADF level", adf_l.0, &row.adf_level),
                ("ADF diff", adf_d.0, &row.adf_diff),
                ("PP level", pp_l.0, &row.pp_level),
                ("PP diff", pp_d.0, &row.pp_diff),
            ] {
                let tol = (spec == DeterministicSpec::Constant && *var == "UNP" && cell == "ADF level")
                    .then_some(reference::UNP_ADF_LEVEL_TOLERANCE);
                r.reference_deltas.push(ReferenceDelta::new(
                    "unit_roots",
                    format!("{var} {cell} ({tag})"),
                    published,
                    computed.statistic.0,
                    tol,
                ));
            }
        }
    }
}

fn ecm_deltas(r: &mut Report, ecm: &EcmFit) {
    for (name, coef, _, _) in reference::SHORT_RUN {
        if let Some(c) = ecm.short_run.iter().find(|c| c.name == name) {
            r.reference_deltas
                .push(ReferenceDelta::new("ecm", format!("short-run {name}"), coef, c.coefficient, None));
        }
    }
    r.reference_deltas
        .push(ReferenceDelta::new("ecm", "ECT", reference::ECT.1, ecm.ect.coefficient, None));
    for (name, coef, _, _) in reference::LONG_RUN {
        if let Some(c) = ecm.long_run.iter().find(|c| c.name == name) {
            r.reference_deltas
                .push(ReferenceDelta::new("ecm", format!("long-run {name}"), coef, c.coefficient, None));
        }
    }
}

/// Writes one rendering of `report` to `path`.
pub fn emit_report(report: &Report, format: OutputFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let body = match format {
        OutputFormat::Text => render_text(report),
        OutputFormat::Json => report.to_json() + "\n",
    };
    fs::write(path, body).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn persist(cfg: &PipelineConfig, report: &Report) -> Result<()> {
    fs::create_dir_all(&cfg.output_dir).map_err(|source| Error::Write {
        path: cfg.output_dir.clone(),
        source,
    })?;
    for f in &cfg.formats {
        emit_report(report, *f, cfg.output_dir.join(f.file_name()))?;
    }
    Ok(())
}

/// [`compute_report`] followed by writing every configured format to the
/// output directory. A failed run still writes its partial report.
pub fn run_pipeline(cfg: &PipelineConfig, transport: &dyn WdiTransport) -> Result<Report, PipelineError> {
    let result = compute_report(cfg, transport);
    let report = match &result {
        Ok(r) => r,
        Err(e) => &e.partial,
    };
    if let Err(source) = persist(cfg, report) {
        return Err(PipelineError {
            stage: "persist".to_string(),
            source,
            partial: Box::new(report.clone()),
        });
    }
    result
}
