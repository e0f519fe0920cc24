use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use ardl_core::pipeline::wdi::{record_fixture, WDI_BASE_URL};
use ardl_core::pipeline::{self, FixtureTransport, PipelineConfig, WdiRequest, WdiTransport};
use ardl_core::timeseries::{self, describe};
use ardl_core::Error;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "ardl-kit", version, about = "ARDL bounds-testing pipeline for annual macro data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Print the text report to stdout as well.
        #[arg(long)]
        print: bool,
    },
    /// Download one World Bank indicator into a year-indexed CSV.
    Fetch {
        #[arg(long)]
        indicator: String,
        #[arg(long)]
        country: String,
        #[arg(long)]
        from: i32,
        #[arg(long)]
        to: i32,
        #[arg(long)]
        out: PathBuf,
        /// Column name in the CSV; defaults to the indicator code.
        #[arg(long)]
        name: Option<String>,
        /// Replay recorded responses from this directory instead of the network.
        #[arg(long, conflicts_with = "record")]
        fixtures: Option<PathBuf>,
        /// Save every response under this directory.
        #[arg(long)]
        record: Option<PathBuf>,
    },
    /// Print descriptive statistics for every column of a CSV.
    Describe {
        #[arg(long)]
        data: PathBuf,
    },
}

struct HttpTransport {
    client: reqwest::blocking::Client,
    base: String,
}

impl HttpTransport {
    fn new() -> Result<Self, Error> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(30))
            .user_agent(concat!("ardl-kit/", env!("CARGO_PKG_VERSION")))
            .build()
            .map_err(|e| Error::Http(e.to_string()))?;
        Ok(Self {
            client,
            base: WDI_BASE_URL.to_string(),
        })
    }
}

impl WdiTransport for HttpTransport {
    fn get(&self, request: &WdiRequest) -> Result<String, Error> {
        let url = format!("{}{}", self.base, request.path());
        let resp = self
            .client
            .get(&url)
            .send()
            .map_err(|e| Error::Http(format!("GET {url}: {e}")))?;
        let status = resp.status();
        if !status.is_success() {
            return Err(Error::Http(format!("GET {url}: status {status}")));
        }
        resp.text().map_err(|e| Error::Http(format!("GET {url}: {e}")))
    }
}

struct Recording<'a> {
    inner: &'a dyn WdiTransport,
    dir: PathBuf,
}

impl WdiTransport for Recording<'_> {
    fn get(&self, request: &WdiRequest) -> Result<String, Error> {
        let body = self.inner.get(request)?;
        record_fixture(&self.dir, request, &body)?;
        Ok(body)
    }
}

enum Failure {
    Validation(String),
    Computation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Computation(e.to_string())
        }
    }
}

fn run(config: PathBuf, print: bool) -> Result<(), Failure> {
    let cfg = PipelineConfig::load(&config)?;
    let transport: Box<dyn WdiTransport> = match cfg.fixture_transport() {
        Some(t) => Box::new(t),
        None => Box::new(HttpTransport::new()?),
    };
    let report = pipeline::run_pipeline(&cfg, transport.as_ref()).map_err(|e| {
        let msg = format!("{e} (partial report kept in {})", cfg.output_dir.display());
        if e.is_validation() {
            Failure::Validation(msg)
        } else {
            Failure::Computation(msg)
        }
    })?;
    if print {
        print!("{}", pipeline::render_text(&report));
    }
    for f in &cfg.formats {
        println!("wrote {}", cfg.output_dir.join(f.file_name()).display());
    }
    match &report.bounds {
        Some(b) => println!("{}: F = {} -> {} at {}", b.model, b.f_stat, b.decision, b.significance),
        None => println!("bounds test not reached"),
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn fetch(
    indicator: String,
    country: String,
    from: i32,
    to: i32,
    out: PathBuf,
    name: Option<String>,
    fixtures: Option<PathBuf>,
    record: Option<PathBuf>,
) -> Result<(), Failure> {
    let request = WdiRequest::new(indicator.clone(), country, from, to)?;
    let base: Box<dyn WdiTransport> = match fixtures {
        Some(dir) => Box::new(FixtureTransport::new(dir)),
        None => Box::new(HttpTransport::new()?),
    };
    let name = name.unwrap_or(indicator);
    let series = match record {
        Some(dir) => pipeline::fetch_wdi(&Recording { inner: base.as_ref(), dir }, &request, &name)?,
        None => pipeline::fetch_wdi(base.as_ref(), &request, &name)?,
    };
    timeseries::write_csv(&out, std::slice::from_ref(&series))?;
    println!(
        "wrote {} ({} observations, {}-{})",
        out.display(),
        series.len(),
        series.start_year(),
        series.end_year()
    );
    Ok(())
}

fn describe_cmd(data: PathBuf) -> Result<(), Failure> {
    let series = timeseries::read_csv_series(&data)?;
    println!("{:<10}{:>6}{:>12}{:>12}{:>12}{:>12}", "Variable", "Obs", "Mean", "Std. Dev.", "Min", "Max");
    for s in &series {
        let d = describe(s)?;
        println!(
            "{:<10}{:>6}{:>12.3}{:>12.3}{:>12.3}{:>12.3}",
            s.name(),
            d.obs,
            d.mean,
            d.std,
            d.min,
            d.max
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Run { config, print } => run(config, print),
        Command::Fetch {
            indicator,
            country,
            from,
            to,
            out,
            name,
            fixtures,
            record,
        } => fetch(indicator, country, from, to, out, name, fixtures, record),
        Command::Describe { data } => describe_cmd(data),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Computation(msg)) => {
            eprintln!("computation failed: {msg}");
            ExitCode::from(2)
        }
    }
}
