use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Significance level of a test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Significance {
    #[serde(rename = "1%")]
    OnePercent,
    #[serde(rename = "2.5%")]
    TwoAndHalfPercent,
    #[serde(rename = "5%")]
    FivePercent,
    #[serde(rename = "10%")]
    TenPercent,
}

impl Significance {
    /// The three conventional levels used for stars, in increasing order.
    pub const STARRED: [Significance; 3] = [
        Significance::OnePercent,
        Significance::FivePercent,
        Significance::TenPercent,
    ];

    pub fn alpha(self) -> f64 {
        match self {
            Significance::OnePercent => 0.01,
            Significance::TwoAndHalfPercent => 0.025,
            Significance::FivePercent => 0.05,
            Significance::TenPercent => 0.10,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Significance::OnePercent => "1%",
            Significance::TwoAndHalfPercent => "2.5%",
            Significance::FivePercent => "5%",
            Significance::TenPercent => "10%",
        }
    }
}

impl fmt::Display for Significance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Significance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "1%" | "0.01" => Ok(Significance::OnePercent),
            "2.5%" | "0.025" => Ok(Significance::TwoAndHalfPercent),
            "5%" | "0.05" => Ok(Significance::FivePercent),
            "10%" | "0.1" | "0.10" => Ok(Significance::TenPercent),
            other => Err(Error::InvalidArgument(format!(
                "unsupported significance level `{other}`"
            ))),
        }
    }
}

/// Stars for the strongest of 1%/5%/10% at which `rejects` holds.
pub fn stars(rejects: impl Fn(Significance) -> bool) -> &'static str {
    if rejects(Significance::OnePercent) {
        "***"
    } else if rejects(Significance::FivePercent) {
        "**"
    } else if rejects(Significance::TenPercent) {
        "*"
    } else {
        ""
    }
}

pub fn stars_for_p(p: f64) -> &'static str {
    stars(|s| p < s.alpha())
}
