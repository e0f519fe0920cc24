//! Plain-text rendering laid out like the usual published tables.

use std::fmt::Write;

use super::report::{CoefRow, Report, StabilityBlock, UnitRootCell, Value};
use crate::unitroot::DeterministicSpec;

const RULE: &str = "--------------------------------------------------------------------------";

fn heading(out: &mut String, title: &str) {
    let _ = writeln!(out, "\n{title}\n{RULE}");
}

fn starred(v: Value, stars: &str) -> String {
    format!("{}{stars}", v.fixed3())
}

fn ur_cell(c: &UnitRootCell) -> String {
    format!("{} ({})", starred(c.statistic, &c.stars), c.lag_or_bandwidth)
}

fn coef_table(out: &mut String, rows: &[CoefRow]) {
    let _ = writeln!(out, "{:<14}{:>12}{:>12}{:>12}{:>10}", "Variable", "Coefficient", "Std. Error", "t-Stat", "Prob.");
    for r in rows {
        let _ = writeln!(
            out,
            "{:<14}{:>12}{:>12}{:>12}{:>10}",
            r.name,
            starred(r.coefficient, &r.stars),
            r.std_error.fixed3(),
            r.t_stat.fixed3(),
            r.p_value.fixed3()
        );
    }
}

fn stability(out: &mut String, s: &Option<StabilityBlock>, name: &str) {
    match s {
        Some(s) => {
            let _ = writeln!(out, "{name:<22}{}", s.verdict);
        }
        None => {
            let _ = writeln!(out, "{name:<22}NA");
        }
    }
}

pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let m = &r.metadata;
    let _ = writeln!(out, "ARDL analysis report (schema {})", r.schema_version);
    if let Some(label) = &m.label {
        let _ = writeln!(out, "Study:        {label}");
    }
    let _ = writeln!(out, "Generated:    {}", m.generated_at);
    let _ = writeln!(out, "Data source:  {}", m.data_source);
    if let Some(v) = &m.data_vintage {
        let _ = writeln!(out, "Data vintage: {v}");
    }
    let _ = writeln!(
        out,
        "Sample:       {}-{} ({} obs)",
        m.sample.first_year, m.sample.last_year, m.sample.n_obs
    );
    let s = &m.settings;
    let _ = writeln!(
        out,
        "Model:        {} ~ {}",
        s.dependent,
        s.regressors.join(" + ")
    );

    heading(&mut out, "Pipeline stages");
    for st in &r.stages {
        match &st.message {
            Some(msg) => {
                let _ = writeln!(out, "{:<16}{:<11}{msg}", st.name, st.status.to_string());
            }
            None => {
                let _ = writeln!(out, "{:<16}{}", st.name, st.status);
            }
        }
    }

    if let Some(rows) = &r.descriptive {
        heading(&mut out, "Descriptive statistics");
        let _ = writeln!(out, "{:<10}{:>6}{:>12}{:>12}{:>12}{:>12}", "Variable", "Obs", "Mean", "Std. Dev.", "Min", "Max");
        for d in rows {
            let _ = writeln!(
                out,
                "{:<10}{:>6}{:>12}{:>12}{:>12}{:>12}",
                d.variable,
                d.obs,
                d.mean.fixed3(),
                d.std.fixed3(),
                d.min.fixed3(),
                d.max.fixed3()
            );
        }
    }

    if let Some(u) = &r.unit_roots {
        heading(&mut out, &format!("Unit root tests (status at {})", u.significance));
        for spec in [DeterministicSpec::Constant, DeterministicSpec::ConstantTrend] {
            let _ = writeln!(out, "Deterministic terms: {}", spec.label());
            let _ = writeln!(
                out,
                "{:<10}{:>16}{:>16}{:>16}{:>16}{:>9}",
                "Variable", "ADF level", "ADF diff", "PP level", "PP diff", "Status"
            );
            for row in u.rows_for(spec) {
                let _ = writeln!(
                    out,
                    "{:<10}{:>16}{:>16}{:>16}{:>16}{:>9}",
                    row.variable,
                    ur_cell(&row.adf_level),
                    ur_cell(&row.adf_diff),
                    ur_cell(&row.pp_level),
                    ur_cell(&row.pp_diff),
                    row.status
                );
            }
            out.push('\n');
        }
        let _ = writeln!(out, "Lag length (ADF) or bandwidth (PP) in parentheses.");
    }

    if let Some(b) = &r.bounds {
        heading(&mut out, "ARDL bounds test");
        let _ = writeln!(out, "Model:               {}", b.model);
        let _ = writeln!(
            out,
            "Optimal lag length:  ({})  by {}",
            b.lag_vector.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", "),
            super::criterion_label(b.criterion)
        );
        let _ = writeln!(out, "Sample:              {}-{} ({} obs)", b.first_year, b.last_year, b.n_obs);
        let _ = writeln!(out, "F-statistics:        {}", starred(b.f_stat, &b.stars));
        let _ = writeln!(out, "k:                   {}", b.k);
        let _ = writeln!(out, "Case:                {}", b.case);
        let _ = writeln!(out, "{:<14}{:>10}{:>10}   Decision", "Significance", "I(0)", "I(1)");
        for row in &b.bounds {
            let _ = writeln!(
                out,
                "{:<14}{:>10}{:>10}   {}",
                row.significance.label(),
                row.i0.fixed3(),
                row.i1.fixed3(),
                row.decision
            );
        }
        let _ = writeln!(out, "Decision at {}: {}", b.significance, b.decision);
    }

    if let Some(e) = &r.ecm {
        heading(&mut out, &format!("Error-correction model {}", e.model));
        let _ = writeln!(out, "Short-run coefficients");
        let mut short = e.short_run.clone();
        short.push(e.ect.clone());
        coef_table(&mut out, &short);
        let _ = writeln!(out, "\nLong-run coefficients");
        coef_table(&mut out, &e.long_run);
        let _ = writeln!(out, "\nObservations: {}   R-squared: {}", e.n_obs, e.r_squared.fixed3());
        let _ = writeln!(out, "\nDiagnostics");
        let _ = writeln!(out, "{:<22}{:<28}{:>12}{:>10}", "Check", "Test", "Statistic", "Prob.");
        for d in &e.diagnostics {
            let _ = writeln!(
                out,
                "{:<22}{:<28}{:>12}{:>10}",
                d.check,
                d.test,
                d.statistic.fixed3(),
                d.p_value.fixed3()
            );
        }
        stability(&mut out, &e.cusum, "CUSUM");
        stability(&mut out, &e.cusumsq, "CUSUMSQ");
    }

    if let Some(rb) = &r.robustness {
        heading(&mut out, "Robustness: FMOLS and CCR");
        for block in [&rb.fmols, &rb.ccr] {
            let _ = writeln!(
                out,
                "{} (Bartlett kernel, bandwidth {}, {} obs)",
                block.method, block.bandwidth, block.n_obs
            );
            coef_table(&mut out, &block.rows);
            out.push('\n');
        }
    }

    if !r.reference_deltas.is_empty() {
        heading(&mut out, "Deltas against published reference values");
        let _ = writeln!(
            out,
            "{:<12}{:<26}{:>11}{:>11}{:>10}{:>8}",
            "Block", "Cell", "Published", "Computed", "Delta", "Within"
        );
        for d in &r.reference_deltas {
            let within = match d.within {
                Some(true) => "yes",
                Some(false) => "NO",
                None => "-",
            };
            let _ = writeln!(
                out,
                "{:<12}{:<26}{:>11}{:>11}{:>10}{:>8}",
                d.block,
                d.cell,
                d.published.fixed3(),
                d.computed.fixed3(),
                d.delta.fixed3(),
                within
            );
        }
    }

    if !r.warnings.is_empty() {
        heading(&mut out, "Warnings");
        for w in &r.warnings {
            let _ = writeln!(out, "- {w}");
        }
    }

    heading(&mut out, "Conventions");
    for d in &m.decisions {
        let _ = writeln!(out, "- {d}");
    }
    let _ = writeln!(out, "\n*** p < 0.01, ** p < 0.05, * p < 0.10");
    out
}
