//! Flat `key = value` configuration for a pipeline run.
//!
//! ```text
//! # comment
//! data         = ../data/turkiye_2000_2022.csv
//! dependent    = UNP
//! regressors   = AGR, IND, CON, SER, INF
//! max_p        = 2
//! max_q        = 2
//! ```
//!
//! Relative paths are resolved against the directory holding the file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::wdi::FixtureTransport;
use crate::ardl::BoundsCase;
use crate::error::{Error, Result};
use crate::linreg::{Bandwidth, Criterion};
use crate::significance::Significance;
use crate::timeseries::Roles;
use crate::unitroot::LagPolicy;

pub const KEYS: [&str; 23] = [
    "data",
    "wdi",
    "wdi_country",
    "wdi_from",
    "wdi_to",
    "wdi_fixtures",
    "sector_data",
    "dependent",
    "regressors",
    "max_p",
    "max_q",
    "criterion",
    "significance",
    "bandwidth",
    "bounds_case",
    "unitroot_max_lag",
    "unitroot_criterion",
    "bg_lags",
    "reset_powers",
    "output_dir",
    "formats",
    "reference",
    "label",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WdiSource {
    /// `(series name, indicator code)`.
    pub series: Vec<(String, String)>,
    pub country: String,
    pub from: i32,
    pub to: i32,
    pub fixtures: Option<PathBuf>,
    /// CSV with the series that do not come from the API.
    pub extra_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataSource {
    Csv(PathBuf),
    Wdi(WdiSource),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Text,
    Json,
}

impl OutputFormat {
    pub fn file_name(self) -> &'static str {
        match self {
            OutputFormat::Text => "report.txt",
            OutputFormat::Json => "report.json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "text" | "txt" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidArgument(format!("unknown output format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub label: Option<String>,
    pub source: DataSource,
    pub roles: Roles,
    pub max_p: usize,
    pub max_q: usize,
    pub criterion: Criterion,
    pub significance: Significance,
    pub bandwidth: Bandwidth,
    pub bounds_case: BoundsCase,
    pub unitroot_lags: LagPolicy,
    pub bg_lags: usize,
    pub reset_powers: Vec<u32>,
    pub output_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
    /// Compare against the published reference results.
    pub reference: bool,
}

impl PipelineConfig {
    /// Defaults for a CSV source.
    pub fn for_csv(data: impl Into<PathBuf>, roles: Roles, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            label: None,
            source: DataSource::Csv(data.into()),
            roles,
            max_p: 2,
            max_q: 2,
            criterion: Criterion::Aic,
            significance: Significance::FivePercent,
            bandwidth: Bandwidth::Automatic,
            bounds_case: BoundsCase::default(),
            unitroot_lags: LagPolicy::default(),
            bg_lags: crate::diagnostics::DEFAULT_BG_LAGS,
            reset_powers: vec![2],
            output_dir: output_dir.into(),
            formats: vec![OutputFormat::Text, OutputFormat::Json],
            reference: false,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut entries: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(Error::Config {
                    line: line_no,
                    message: format!("unknown key `{key}`"),
                });
            }
            if entries.insert(key, (line_no, value.trim())).is_some() {
                return Err(Error::Config {
                    line: line_no,
                    message: format!("duplicate key `{key}`"),
                });
            }
        }
        Parser { entries, base }.build()
    }

    pub fn fixture_transport(&self) -> Option<FixtureTransport> {
        match &self.source {
            DataSource::Wdi(w) => w.fixtures.as_ref().map(FixtureTransport::new),
            DataSource::Csv(_) => None,
        }
    }
}

struct Parser<'a> {
    entries: BTreeMap<&'a str, (usize, &'a str)>,
    base: &'a Path,
}

impl Parser<'_> {
    fn raw(&self, key: &str) -> Option<(usize, &str)> {
        self.entries.get(key).copied()
    }

    fn value<T>(&self, key: &str, default: T, parse: impl Fn(&str) -> Result<T>) -> Result<T> {
        match self.raw(key) {
            None => Ok(default),
            Some((line, v)) => parse(v).map_err(|e| Error::Config {
                line,
                message: format!("`{key}`: {e}"),
            }),
        }
    }

    fn required(&self, key: &str) -> Result<(usize, &str)> {
        self.raw(key).ok_or_else(|| Error::Config {
            line: 0,
            message: format!("missing required key `{key}`"),
        })
    }

    fn path(&self, v: &str) -> PathBuf {
        let p = Path::new(v);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    fn int<T: FromStr>(v: &str) -> Result<T> {
        v.parse()
            .map_err(|_| Error::InvalidArgument(format!("`{v}` is not a valid integer")))
    }

    fn list(v: &str) -> Vec<&str> {
        v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
    }

    fn build(self) -> Result<PipelineConfig> {
        let source = self.source()?;
        let (_, dependent) = self.required("dependent")?;
        let (_, regressors) = self.required("regressors")?;
        let roles = Roles::new(dependent, &Self::list(regressors));

        let mut cfg = PipelineConfig::for_csv("", roles, self.base.join("output"));
        cfg.source = source;
        cfg.label = self.raw("label").map(|(_, v)| v.to_string());
        cfg.max_p = self.value("max_p", cfg.max_p, Self::int)?;
        cfg.max_q = self.value("max_q", cfg.max_q, Self::int)?;
        if cfg.max_p == 0 {
            return Err(Error::Config {
                line: self.raw("max_p").map_or(0, |r| r.0),
                message: "`max_p` must be at least 1".into(),
            });
        }
        cfg.criterion = self.value("criterion", cfg.criterion, str::parse)?;
        cfg.significance = self.value("significance", cfg.significance, |v| {
            let s: Significance = v.parse()?;
            if s == Significance::TwoAndHalfPercent {
                return Err(Error::InvalidArgument("significance must be 1%, 5% or 10%".into()));
            }
            Ok(s)
        })?;
        cfg.bandwidth = self.value("bandwidth", cfg.bandwidth, str::parse)?;
        cfg.bounds_case = self.value("bounds_case", cfg.bounds_case, str::parse)?;
        let criterion = self.value("unitroot_criterion", Criterion::Aic, str::parse)?;
        let max_lag = self.value("unitroot_max_lag", None, |v| match v {
            "auto" => Ok(None),
            n => Self::int(n).map(Some),
        })?;
        cfg.unitroot_lags = LagPolicy::Auto { criterion, max_lag };
        cfg.bg_lags = self.value("bg_lags", cfg.bg_lags, Self::int)?;
        cfg.reset_powers = self.value("reset_powers", cfg.reset_powers, |v| {
            Self::list(v).into_iter().map(Self::int).collect()
        })?;
        cfg.output_dir = self.value("output_dir", cfg.output_dir, |v| Ok(self.path(v)))?;
        cfg.formats = self.value("formats", cfg.formats, |v| {
            let f: Vec<OutputFormat> = Self::list(v).into_iter().map(str::parse).collect::<Result<_>>()?;
            if f.is_empty() {
                return Err(Error::InvalidArgument("at least one output format is required".into()));
            }
            Ok(f)
        })?;
        cfg.reference = self.value("reference", cfg.reference, |v| match v {
            "published" | "true" | "yes" => Ok(true),
            "none" | "false" | "no" => Ok(false),
            other => Err(Error::InvalidArgument(format!("`{other}` is neither `published` nor `none`"))),
        })?;
        Ok(cfg)
    }

    fn source(&self) -> Result<DataSource> {
        const WDI_KEYS: [&str; 6] = ["wdi_country", "wdi_from", "wdi_to", "wdi_fixtures", "sector_data", "wdi"];
        match (self.raw("data"), self.raw("wdi")) {
            (Some((line, _)), Some(_)) => Err(Error::Config {
                line,
                message: "give exactly one primary data source: `data` or `wdi`".into(),
            }),
            (None, None) => Err(Error::Config {
                line: 0,
                message: "no data source: set `data` or `wdi`".into(),
            }),
            (Some((_, path)), None) => {
                if let Some(k) = WDI_KEYS.iter().find(|k| self.raw(k).is_some()) {
                    let (line, _) = self.raw(k).unwrap();
                    return Err(Error::Config {
                        line,
                        message: format!("`{k}` only applies to a `wdi` source"),
                    });
                }
                Ok(DataSource::Csv(self.path(path)))
            }
            (None, Some((line, spec))) => {
                let series = Self::list(spec)
                    .into_iter()
                    .map(|item| {
                        item.split_once(':')
                            .map(|(n, c)| (n.trim().to_string(), c.trim().to_string()))
                            .ok_or_else(|| Error::Config {
                                line,
                                message: format!("`wdi` entries are NAME:INDICATOR, got `{item}`"),
                            })
                    })
                    .collect::<Result<Vec<_>>>()?;
                if series.is_empty() {
                    return Err(Error::Config {
                        line,
                        message: "`wdi` lists no indicators".into(),
                    });
                }
                let (_, country) = self.required("wdi_country")?;
                let from = self.value("wdi_from", 0, Self::int)?;
                let to = self.value("wdi_to", 0, Self::int)?;
                self.required("wdi_from")?;
                self.required("wdi_to")?;
                Ok(DataSource::Wdi(WdiSource {
                    series,
                    country: country.to_string(),
                    from,
                    to,
                    fixtures: self.raw("wdi_fixtures").map(|(_, v)| self.path(v)),
                    extra_csv: self.raw("sector_data").map(|(_, v)| self.path(v)),
                }))
            }
        }
    }
}
