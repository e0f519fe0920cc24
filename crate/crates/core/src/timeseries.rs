//! Annual time series, datasets with variable roles, CSV ingestion and
//! descriptive statistics.
//!
//! Series are indexed by calendar year only. Ingestion is strict: every cell
//! must parse, years must be consecutive, and there is no imputation.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    name: String,
    start_year: i32,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(name: impl Into<String>, start_year: i32, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if values.is_empty() {
            return Err(Error::InvalidArgument(format!("series `{name}` is empty")));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "series `{name}` has a non-finite value in {}",
                start_year + i as i32
            )));
        }
        Ok(Self {
            name,
            start_year,
            values,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start_year(&self) -> i32 {
        self.start_year
    }

    pub fn end_year(&self) -> i32 {
        self.start_year + self.values.len() as i32 - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.values.len()).map(move |i| self.start_year + i as i32)
    }

    /// Value at a calendar year, if inside the series span.
    pub fn at(&self, year: i32) -> Option<f64> {
        let offset = year.checked_sub(self.start_year)?;
        usize::try_from(offset)
            .ok()
            .and_then(|i| self.values.get(i).copied())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// `a * s + b`.
    pub fn affine(&self, a: f64, b: f64) -> TimeSeries {
        TimeSeries {
            name: self.name.clone(),
            start_year: self.start_year,
            values: self.values.iter().map(|v| a * v + b).collect(),
        }
    }
}

/// Difference of the given order. The result starts `order` years later.
pub fn diff(s: &TimeSeries, order: usize) -> Result<TimeSeries> {
    if order == 0 {
        return Err(Error::InvalidArgument("difference order must be positive".into()));
    }
    if order >= s.len() {
        return Err(Error::InvalidArgument(format!(
            "difference order {order} needs more than {} observations",
            s.len()
        )));
    }
    let mut values = s.values.clone();
    for _ in 0..order {
        values = values.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(TimeSeries {
        name: s.name.clone(),
        start_year: s.start_year + order as i32,
        values,
    })
}

/// Shift forward by `k` periods: the value observed in year `y` is placed at
/// `y + k`. The usable length shrinks by `k`.
pub fn lag(s: &TimeSeries, k: usize) -> Result<TimeSeries> {
    if k >= s.len() {
        return Err(Error::InvalidArgument(format!(
            "lag {k} needs more than {} observations",
            s.len()
        )));
    }
    Ok(TimeSeries {
        name: s.name.clone(),
        start_year: s.start_year + k as i32,
        values: s.values[..s.len() - k].to_vec(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub obs: usize,
    pub mean: f64,
    /// Sample standard deviation, n-1 denominator.
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

pub fn describe(s: &TimeSeries) -> Result<DescriptiveStats> {
    let n = s.len();
    if n < 2 {
        return Err(Error::SampleTooShort {
            needed: 2,
            available: n,
        });
    }
    let mean = s.values.iter().sum::<f64>() / n as f64;
    let ss: f64 = s.values.iter().map(|v| (v - mean).powi(2)).sum();
    let min = s.values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = s.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(DescriptiveStats {
        obs: n,
        // clamp away last-ulp excursions for constant series
        mean: mean.clamp(min, max),
        std: (ss / (n - 1) as f64).sqrt(),
        min,
        max,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Roles {
    pub dependent: String,
    pub regressors: Vec<String>,
}

impl Roles {
    pub fn new(dependent: impl Into<String>, regressors: &[&str]) -> Self {
        Self {
            dependent: dependent.into(),
            regressors: regressors.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// A set of aligned series plus the dependent/regressor roles.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    series: Vec<TimeSeries>,
    roles: Roles,
}

impl Dataset {
    /// Builds a dataset, trimming every series to the common year span.
    pub fn new(series: Vec<TimeSeries>, roles: Roles) -> Result<Self> {
        if series.is_empty() {
            return Err(Error::NoDataColumns);
        }
        for (i, s) in series.iter().enumerate() {
            if series[..i].iter().any(|o| o.name == s.name) {
                return Err(Error::InvalidArgument(format!("duplicate series `{}`", s.name)));
            }
        }
        let start = series.iter().map(|s| s.start_year).max().unwrap();
        let end = series.iter().map(|s| s.end_year()).min().unwrap();
        if end < start {
            return Err(Error::InvalidArgument("series do not overlap in time".into()));
        }
        let series = series
            .into_iter()
            .map(|s| {
                let from = (start - s.start_year) as usize;
                let to = (end - s.start_year) as usize;
                TimeSeries {
                    name: s.name,
                    start_year: start,
                    values: s.values[from..=to].to_vec(),
                }
            })
            .collect::<Vec<_>>();
        let d = Self { series, roles };
        d.validate_roles()?;
        Ok(d)
    }

    fn validate_roles(&self) -> Result<()> {
        let r = &self.roles;
        if self.get(&r.dependent).is_none() {
            return Err(Error::Roles(format!(
                "dependent variable `{}` not found in data",
                r.dependent
            )));
        }
        if r.regressors.is_empty() {
            return Err(Error::Roles("at least one regressor is required".into()));
        }
        for (i, name) in r.regressors.iter().enumerate() {
            if self.get(name).is_none() {
                return Err(Error::Roles(format!("regressor `{name}` not found in data")));
            }
            if *name == r.dependent {
                return Err(Error::Roles(format!(
                    "`{name}` cannot be both dependent and regressor"
                )));
            }
            if r.regressors[..i].contains(name) {
                return Err(Error::Roles(format!("regressor `{name}` listed twice")));
            }
        }
        Ok(())
    }

    pub fn series(&self) -> &[TimeSeries] {
        &self.series
    }

    pub fn roles(&self) -> &Roles {
        &self.roles
    }

    pub fn with_roles(&self, roles: Roles) -> Result<Self> {
        let d = Self {
            series: self.series.clone(),
            roles,
        };
        d.validate_roles()?;
        Ok(d)
    }

    pub fn get(&self, name: &str) -> Option<&TimeSeries> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn require(&self, name: &str) -> Result<&TimeSeries> {
        self.get(name)
            .ok_or_else(|| Error::UnknownSeries(name.to_string()))
    }

    pub fn dependent(&self) -> &TimeSeries {
        self.get(&self.roles.dependent).expect("validated role")
    }

    pub fn regressors(&self) -> impl Iterator<Item = &TimeSeries> {
        self.roles
            .regressors
            .iter()
            .map(move |n| self.get(n).expect("validated role"))
    }

    pub fn len(&self) -> usize {
        self.series[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start_year(&self) -> i32 {
        self.series[0].start_year
    }

    pub fn end_year(&self) -> i32 {
        self.series[0].end_year()
    }
}

/// Common estimation sample shared by lagged and differenced columns.
///
/// Observation `i` of the sample corresponds to index `start + i` of the
/// underlying series, where `start = max_lag + diff_order`.
#[derive(Debug, Clone, Copy)]
pub struct AlignedSample<'a> {
    data: &'a Dataset,
    start: usize,
}

/// Aligns `d` so that every level lag up to `max_lag + diff_order` and every
/// differenced lag up to `max_lag` is defined on one common sample.
pub fn align(d: &Dataset, max_lag: usize, diff_order: usize) -> Result<AlignedSample<'_>> {
    let start = max_lag + diff_order;
    if start >= d.len() {
        return Err(Error::SampleTooShort {
            needed: start + 1,
            available: d.len(),
        });
    }
    Ok(AlignedSample { data: d, start })
}

impl<'a> AlignedSample<'a> {
    pub fn len(&self) -> usize {
        self.data.len() - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn first_year(&self) -> i32 {
        self.data.start_year() + self.start as i32
    }

    pub fn last_year(&self) -> i32 {
        self.data.end_year()
    }

    /// `x_{t-lag}` over the sample.
    pub fn level(&self, name: &str, lag: usize) -> Result<Vec<f64>> {
        if lag > self.start {
            return Err(Error::InvalidArgument(format!(
                "lag {lag} exceeds the aligned maximum {}",
                self.start
            )));
        }
        let v = self.data.require(name)?.values();
        Ok(v[self.start - lag..v.len() - lag].to_vec())
    }

    /// `x_{t-lag} - x_{t-lag-1}` over the sample.
    pub fn diff(&self, name: &str, lag: usize) -> Result<Vec<f64>> {
        if lag + 1 > self.start {
            return Err(Error::InvalidArgument(format!(
                "differenced lag {lag} exceeds the aligned maximum {}",
                self.start.saturating_sub(1)
            )));
        }
        let v = self.data.require(name)?.values();
        let n = v.len();
        Ok((self.start - lag..n - lag).map(|i| v[i] - v[i - 1]).collect())
    }
}

/// Reads a CSV file whose first column is the year and whose remaining columns
/// are numeric series. Column order is preserved.
pub fn load_csv(path: impl AsRef<Path>, roles: Roles) -> Result<Dataset> {
    let series = read_csv_series(path)?;
    Dataset::new(series, roles)
}

pub fn read_csv_series(path: impl AsRef<Path>) -> Result<Vec<TimeSeries>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(&text)
}

pub fn parse_csv(text: &str) -> Result<Vec<TimeSeries>> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty());

    let (_, header) = lines.next().ok_or(Error::Csv {
        line: 1,
        message: "missing header row".into(),
    })?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    if names.len() < 2 {
        return Err(Error::NoDataColumns);
    }
    for (i, n) in names.iter().enumerate().skip(1) {
        if n.is_empty() {
            return Err(Error::Csv {
                line: 1,
                message: format!("column {} has an empty name", i + 1),
            });
        }
    }

    let mut years: Vec<i32> = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); names.len() - 1];
    for (line, row) in lines {
        let cells: Vec<&str> = row.split(',').map(str::trim).collect();
        if cells.len() != names.len() {
            return Err(Error::Csv {
                line,
                message: format!("expected {} cells, found {}", names.len(), cells.len()),
            });
        }
        let year: i32 = cells[0].parse().map_err(|_| Error::Csv {
            line,
            message: format!("year `{}` is not an integer", cells[0]),
        })?;
        if let Some(&prev) = years.last() {
            if year == prev || years.contains(&year) {
                return Err(Error::DuplicateYear(year));
            }
            if year != prev + 1 {
                return Err(Error::YearGap {
                    previous: prev,
                    found: year,
                });
            }
        }
        years.push(year);
        for (j, cell) in cells[1..].iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::Csv {
                line,
                message: format!("`{cell}` in column `{}` is not numeric", names[j + 1]),
            })?;
            if !v.is_finite() {
                return Err(Error::Csv {
                    line,
                    message: format!("non-finite value in column `{}`", names[j + 1]),
                });
            }
            columns[j].push(v);
        }
    }
    if years.is_empty() {
        return Err(Error::Csv {
            line: 2,
            message: "no data rows".into(),
        });
    }
    names[1..]
        .iter()
        .zip(columns)
        .map(|(n, v)| TimeSeries::new(*n, years[0], v))
        .collect()
}

/// Renders series sharing one year span as CSV. Values use the shortest
/// representation that parses back to the same f64.
pub fn to_csv(series: &[TimeSeries]) -> Result<String> {
    let first = series.first().ok_or(Error::NoDataColumns)?;
    if series
        .iter()
        .any(|s| s.start_year != first.start_year || s.len() != first.len())
    {
        return Err(Error::InvalidArgument("series must share one year span".into()));
    }
    let mut out = String::from("year");
    for s in series {
        out.push(',');
        out.push_str(&s.name);
    }
    out.push('\n');
    for (i, year) in first.years().enumerate() {
        out.push_str(&year.to_string());
        for s in series {
            out.push(',');
            out.push_str(&format!("{:?}", s.values[i]));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_csv(path: impl AsRef<Path>, series: &[TimeSeries]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_csv(series)?).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(v: &[f64]) -> TimeSeries {
        TimeSeries::new("x", 2000, v.to_vec()).unwrap()
    }

    #[test]
    fn diff_examples() {
        assert_eq!(diff(&ts(&[5.0, 5.0, 5.0]), 1).unwrap().values(), &[0.0, 0.0]);
        let d = diff(&ts(&[1.0, 3.0, 6.0]), 1).unwrap();
        assert_eq!(d.values(), &[2.0, 3.0]);
        assert_eq!(d.start_year(), 2001);
        // order 2 equals differencing twice
        let twice = diff(&diff(&ts(&[1.0, 3.0, 6.0]), 1).unwrap(), 1).unwrap();
        let d2 = diff(&ts(&[1.0, 3.0, 6.0]), 2).unwrap();
        assert_eq!(d2, twice);
        assert_eq!(d2.values(), &[1.0]);
        assert!(diff(&ts(&[1.0, 2.0]), 2).is_err());
    }

    #[test]
    fn lag_examples() {
        let s = ts(&[1.0, 2.0, 3.0]);
        assert_eq!(lag(&s, 0).unwrap(), s);
        let l = lag(&s, 1).unwrap();
        assert_eq!(l.values(), &[1.0, 2.0]);
        assert_eq!(l.years().collect::<Vec<_>>(), vec![2001, 2002]);
        assert!(lag(&s, 3).is_err());
    }

    #[test]
    fn describe_examples() {
        let c = describe(&ts(&[4.2; 4])).unwrap();
        assert_eq!((c.mean, c.std, c.min, c.max), (4.2, 0.0, 4.2, 4.2));
        let d = describe(&ts(&[1.0, 2.0, 3.0, 4.0])).unwrap();
        assert_eq!(d.mean, 2.5);
        // sqrt(5/3) from the n-1 denominator
        assert!((d.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((d.std - 1.2910).abs() < 1e-4);
        assert!(matches!(
            describe(&ts(&[1.0])),
            Err(Error::SampleTooShort { .. })
        ));
    }

    #[test]
    fn align_lengths() {
        let s: Vec<TimeSeries> = ["y", "x"]
            .iter()
            .map(|n| TimeSeries::new(*n, 2000, (0..23).map(f64::from).collect()).unwrap())
            .collect();
        let d = Dataset::new(s, Roles::new("y", &["x"])).unwrap();
        assert_eq!(align(&d, 2, 1).unwrap().len(), 20);
        assert_eq!(align(&d, 0, 0).unwrap().len(), 23);
        assert!(align(&d, 23, 0).is_err());
        let a = align(&d, 2, 1).unwrap();
        assert_eq!(a.first_year(), 2003);
        assert_eq!(a.level("x", 3).unwrap()[0], 0.0);
        assert_eq!(a.diff("x", 2).unwrap(), vec![1.0; 20]);
        assert!(a.diff("x", 3).is_err());
    }

    #[test]
    fn csv_errors() {
        assert!(matches!(parse_csv("year\n2000\n2001\n"), Err(Error::NoDataColumns)));
        assert!(matches!(
            parse_csv("year,a\n2000,1\n2001,2\n2003,3\n"),
            Err(Error::YearGap {
                previous: 2001,
                found: 2003
            })
        ));
        assert!(matches!(
            parse_csv("year,a\n2000,1\n2000,2\n"),
            Err(Error::DuplicateYear(2000))
        ));
        assert!(matches!(
            parse_csv("year,a\n2000,1\n2001,x\n"),
            Err(Error::Csv { line: 3, .. })
        ));
        assert!(matches!(parse_csv("year,a\n2000,\n"), Err(Error::Csv { .. })));
    }

    #[test]
    fn unknown_roles_rejected() {
        let s = parse_csv("year,a,b\n2000,1,2\n2001,2,3\n").unwrap();
        assert!(matches!(
            Dataset::new(s.clone(), Roles::new("z", &["a"])),
            Err(Error::Roles(_))
        ));
        assert!(matches!(
            Dataset::new(s.clone(), Roles::new("a", &["a"])),
            Err(Error::Roles(_))
        ));
        assert!(Dataset::new(s, Roles::new("a", &["b"])).is_ok());
    }

    #[test]
    fn load_csv_missing_file() {
        assert!(matches!(
            load_csv("/nonexistent/file.csv", Roles::new("a", &["b"])),
            Err(Error::Io { .. })
        ));
    }
}
