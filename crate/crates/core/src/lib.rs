//! Time-series econometrics toolkit: unit-root tests, ARDL bounds testing,
//! error-correction estimation, FMOLS/CCR cointegrating regressions and
//! post-estimation diagnostics, plus a pipeline that runs them end to end.

pub mod ardl;
pub mod cointreg;
pub mod diagnostics;
pub mod error;
pub mod linreg;
pub mod pipeline;
pub mod significance;
pub mod special;
pub mod timeseries;
pub mod unitroot;

pub use error::{Error, Result};
pub use significance::Significance;
