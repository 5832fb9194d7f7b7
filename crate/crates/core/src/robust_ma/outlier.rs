use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::Period;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutlierKind {
    /// Additive outlier assigned to the irregular.
    Ao,
    /// Additive outlier assigned to the trend-cycle.
    AoTrend,
    /// Level shift.
    Ls,
}

impl OutlierKind {
    /// Whether the shock belongs to the trend-cycle estimate.
    pub fn in_trend(self) -> bool {
        !matches!(self, OutlierKind::Ao)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OutlierKind::Ao => "ao",
            OutlierKind::AoTrend => "ao_trend",
            OutlierKind::Ls => "ls",
        }
    }
}

impl FromStr for OutlierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ao" => Ok(OutlierKind::Ao),
            "ao_trend" | "ao-trend" | "aotrend" => Ok(OutlierKind::AoTrend),
            "ls" => Ok(OutlierKind::Ls),
            other => Err(Error::InvalidArgument(format!(
                "unknown outlier kind '{other}' (expected ao, ao_trend or ls)"
            ))),
        }
    }
}

/// A shock of a given kind at period `date`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OutlierSpec {
    pub kind: OutlierKind,
    pub date: Period,
}

impl OutlierSpec {
    pub fn new(kind: OutlierKind, date: Period) -> Self {
        OutlierSpec { kind, date }
    }
}

impl fmt::Display for OutlierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind.as_str(), self.date)
    }
}

/// Parses `kind:YYYY-MM`.
impl FromStr for OutlierSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, date) = s.split_once(':').ok_or_else(|| {
            Error::InvalidArgument(format!("outlier '{s}' is not of the form kind:YYYY-MM"))
        })?;
        Ok(OutlierSpec { kind: kind.parse()?, date: date.trim().parse()? })
    }
}

/// Rejects repeated `(kind, date)` pairs.
pub fn check_unique(specs: &[OutlierSpec]) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for s in specs {
        if !seen.insert(*s) {
            return Err(Error::InvalidArgument(format!("duplicate outlier {s}")));
        }
    }
    Ok(())
}

/// Parses the JSON list form `[{"kind": "ao", "date": "2022-01"}, …]`.
pub fn parse_outlier_json(text: &str) -> Result<Vec<OutlierSpec>> {
    let specs: Vec<OutlierSpec> = serde_json::from_str(text)?;
    check_unique(&specs)?;
    Ok(specs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_flag_and_json() {
        let s: OutlierSpec = "ls:2022-01".parse().unwrap();
        assert_eq!(s.kind, OutlierKind::Ls);
        assert_eq!(s.to_string(), "ls:2022-01");
        assert!("xx:2022-01".parse::<OutlierSpec>().is_err());
        assert!("ao2022-01".parse::<OutlierSpec>().is_err());
        let v = parse_outlier_json(r#"[{"kind":"ao_trend","date":"2021-03"}]"#).unwrap();
        assert_eq!(v[0].kind, OutlierKind::AoTrend);
        assert!(parse_outlier_json(
            r#"[{"kind":"ao","date":"2021-03"},{"kind":"ao","date":"2021-03"}]"#
        )
        .is_err());
    }
}
