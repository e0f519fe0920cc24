//! World Bank Indicators API (v2, JSON) client.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value as Json;

use crate::error::{Error, Result};
use crate::timeseries::TimeSeries;

pub const WDI_BASE_URL: &str = "https://api.worldbank.org";
const PER_PAGE: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WdiRequest {
    pub indicator: String,
    pub country: String,
    pub from: i32,
    pub to: i32,
    pub page: usize,
}

impl WdiRequest {
    pub fn new(indicator: impl Into<String>, country: impl Into<String>, from: i32, to: i32) -> Result<Self> {
        let r = Self {
            indicator: indicator.into().trim().to_string(),
            country: country.into().trim().to_ascii_uppercase(),
            from,
            to,
            page: 1,
        };
        if r.indicator.is_empty() || r.indicator.contains(['/', '?', '&', ' ']) {
            return Err(Error::InvalidArgument(format!("invalid indicator code `{}`", r.indicator)));
        }
        if r.country.len() != 3 || !r.country.chars().all(|c| c.is_ascii_alphabetic()) {
            return Err(Error::InvalidArgument(format!("country must be an ISO3 code, got `{}`", r.country)));
        }
        if from > to {
            return Err(Error::InvalidArgument(format!("year range {from}..{to} is empty")));
        }
        Ok(r)
    }

    /// Path and query relative to the API host.
    pub fn path(&self) -> String {
        let mut p = format!(
            "/v2/country/{}/indicator/{}?format=json&per_page={PER_PAGE}&date={}:{}",
            self.country, self.indicator, self.from, self.to
        );
        if self.page > 1 {
            p.push_str(&format!("&page={}", self.page));
        }
        p
    }

    /// File name of the recorded response.
    pub fn fixture_name(&self) -> String {
        if self.page > 1 {
            format!("{}_{}_p{}.json", self.country, self.indicator, self.page)
        } else {
            format!("{}_{}.json", self.country, self.indicator)
        }
    }
}

/// Source of raw API response bodies.
pub trait WdiTransport {
    fn get(&self, request: &WdiRequest) -> Result<String>;
}

/// Replays responses recorded under a directory. Never touches the network.
#[derive(Debug, Clone)]
pub struct FixtureTransport {
    dir: PathBuf,
}

impl FixtureTransport {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }
}

impl WdiTransport for FixtureTransport {
    fn get(&self, request: &WdiRequest) -> Result<String> {
        let path = self.dir.join(request.fixture_name());
        if !path.exists() {
            return Err(Error::FixtureMissing(path));
        }
        fs::read_to_string(&path).map_err(|source| Error::Io { path, source })
    }
}

/// Transport that refuses every request.
#[derive(Debug, Clone, Copy, Default)]
pub struct OfflineTransport;

impl WdiTransport for OfflineTransport {
    fn get(&self, request: &WdiRequest) -> Result<String> {
        Err(Error::Http(format!(
            "network access is disabled; cannot fetch {}",
            request.path()
        )))
    }
}

/// Writes `body` as the fixture for `request` under `dir`.
pub fn record_fixture(dir: &Path, request: &WdiRequest, body: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|source| Error::Write {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(request.fixture_name());
    fs::write(&path, body).map_err(|source| Error::Write {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WdiMeta {
    pub last_updated: Option<String>,
    pub source_id: Option<String>,
}

struct Page {
    pages: usize,
    meta: WdiMeta,
    rows: Vec<(i32, Option<f64>)>,
}

fn parse_page(body: &str, indicator: &str) -> Result<Page> {
    let json: Json = serde_json::from_str(body).map_err(|e| Error::Wdi(format!("invalid JSON: {e}")))?;
    let arr = json
        .as_array()
        .ok_or_else(|| Error::Wdi("response is not a JSON array".into()))?;
    let header = arr
        .first()
        .and_then(Json::as_object)
        .ok_or_else(|| Error::Wdi("response has no header object".into()))?;
    if let Some(messages) = header.get("message").and_then(Json::as_array) {
        let text: Vec<String> = messages
            .iter()
            .map(|m| {
                let key = m.get("key").and_then(Json::as_str).unwrap_or("");
                let value = m.get("value").and_then(Json::as_str).unwrap_or("");
                format!("{key}: {value}")
            })
            .collect();
        let invalid = messages
            .iter()
            .any(|m| matches!(m.get("id").and_then(Json::as_str), Some("120") | Some("175")));
        let message = text.join("; ");
        return Err(if invalid {
            Error::UnknownIndicator {
                indicator: indicator.to_string(),
                message,
            }
        } else {
            Error::Wdi(message)
        });
    }
    let pages = header.get("pages").and_then(Json::as_u64).unwrap_or(1) as usize;
    let meta = WdiMeta {
        last_updated: header.get("lastupdated").and_then(Json::as_str).map(str::to_string),
        source_id: header.get("sourceid").and_then(Json::as_str).map(str::to_string),
    };
    let rows = match arr.get(1) {
        None | Some(Json::Null) => Vec::new(),
        Some(Json::Array(rows)) => rows
            .iter()
            .map(|r| {
                let date = r
                    .get("date")
                    .and_then(Json::as_str)
                    .ok_or_else(|| Error::Wdi("row without a date".into()))?;
                let year: i32 = date
                    .parse()
                    .map_err(|_| Error::Wdi(format!("non-annual date `{date}`")))?;
                Ok((year, r.get("value").and_then(Json::as_f64)))
            })
            .collect::<Result<_>>()?,
        Some(_) => return Err(Error::Wdi("data element is not an array".into())),
    };
    Ok(Page { pages, meta, rows })
}

/// Fetches one indicator as a series named `name` covering exactly
/// `request.from..=request.to`.
pub fn fetch_wdi_with_meta(
    transport: &dyn WdiTransport,
    request: &WdiRequest,
    name: &str,
) -> Result<(TimeSeries, WdiMeta)> {
    let mut req = request.clone();
    req.page = 1;
    let mut rows = Vec::new();
    let mut meta = None;
    loop {
        let page = parse_page(&transport.get(&req)?, &req.indicator)?;
        rows.extend(page.rows);
        meta.get_or_insert(page.meta);
        if req.page >= page.pages {
            break;
        }
        req.page += 1;
    }
    let meta = meta.unwrap_or_default();
    let span = (request.to - request.from + 1) as usize;
    let mut values: Vec<Option<f64>> = vec![None; span];
    for (year, value) in rows {
        if year < request.from || year > request.to {
            continue;
        }
        values[(year - request.from) as usize] = value;
    }
    let missing: Vec<String> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_none())
        .map(|(i, _)| (request.from + i as i32).to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::Wdi(format!(
            "{} for {} has no value in {}",
            request.indicator,
            request.country,
            missing.join(", ")
        )));
    }
    let series = TimeSeries::new(name, request.from, values.into_iter().flatten().collect())?;
    Ok((series, meta))
}

pub fn fetch_wdi(transport: &dyn WdiTransport, request: &WdiRequest, name: &str) -> Result<TimeSeries> {
    fetch_wdi_with_meta(transport, request, name).map(|(s, _)| s)
}
