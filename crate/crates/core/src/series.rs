//! Monthly periods and time series.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// A calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Period {
    year: i32,
    month: u32,
}

impl Period {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return invalid(format!("month {month} out of range 1..=12"));
        }
        Ok(Period { year, month })
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn month(&self) -> u32 {
        self.month
    }

    /// Months elapsed since January of year 0.
    fn ordinal(&self) -> i64 {
        self.year as i64 * 12 + (self.month as i64 - 1)
    }

    fn from_ordinal(ord: i64) -> Self {
        Period {
            year: ord.div_euclid(12) as i32,
            month: (ord.rem_euclid(12) + 1) as u32,
        }
    }

    /// Shift by a signed number of months.
    pub fn offset(&self, months: i64) -> Period {
        Period::from_ordinal(self.ordinal() + months)
    }

    /// Signed number of months from `other` to `self`.
    pub fn months_since(&self, other: Period) -> i64 {
        self.ordinal() - other.ordinal()
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for Period {
    type Err = Error;

    /// Parses `YYYY-MM`. A trailing day (`YYYY-MM-DD`) is accepted and ignored.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut parts = s.split('-');
        let (Some(y), Some(m)) = (parts.next(), parts.next()) else {
            return invalid(format!("bad period '{s}', expected YYYY-MM"));
        };
        if let Some(d) = parts.next() {
            if d.is_empty() || !d.chars().all(|c| c.is_ascii_digit()) || parts.next().is_some() {
                return invalid(format!("bad period '{s}', expected YYYY-MM"));
            }
        }
        let year: i32 = y
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad year in period '{s}'")))?;
        let month: u32 = m
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad month in period '{s}'")))?;
        if y.len() != 4 || m.len() != 2 {
            return invalid(format!("bad period '{s}', expected YYYY-MM"));
        }
        Period::new(year, month)
    }
}

impl Serialize for Period {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Period {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A monthly series with consecutive periods.
///
/// Missing observations are stored as `NaN` and may only appear as leading
/// or trailing runs.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    start: Period,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(start: Period, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return invalid("a series needs at least one observation");
        }
        if values.iter().any(|v| v.is_infinite()) {
            return Err(Error::Data("series contains infinite values".into()));
        }
        let first = values.iter().position(|v| !v.is_nan());
        let last = values.iter().rposition(|v| !v.is_nan());
        if let (Some(a), Some(b)) = (first, last) {
            if let Some(k) = values[a..=b].iter().position(|v| v.is_nan()) {
                return Err(Error::Data(format!(
                    "missing value at {} inside the observed span",
                    start.offset((a + k) as i64)
                )));
            }
        }
        Ok(TimeSeries { start, values })
    }

    pub fn start(&self) -> Period {
        self.start
    }

    pub fn end(&self) -> Period {
        self.start.offset(self.values.len() as i64 - 1)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn period(&self, index: usize) -> Period {
        self.start.offset(index as i64)
    }

    /// Position of `period` in the series, if it lies within the span.
    pub fn index_of(&self, period: Period) -> Option<usize> {
        let k = period.months_since(self.start);
        (k >= 0 && (k as usize) < self.values.len()).then_some(k as usize)
    }

    pub fn has_missing(&self) -> bool {
        self.values.iter().any(|v| v.is_nan())
    }

    /// The series with leading and trailing missing runs removed.
    pub fn trimmed(&self) -> Result<TimeSeries> {
        let a = self
            .values
            .iter()
            .position(|v| !v.is_nan())
            .ok_or_else(|| Error::Data("series has no observed values".into()))?;
        let b = self.values.iter().rposition(|v| !v.is_nan()).unwrap_or(a);
        TimeSeries::new(self.start.offset(a as i64), self.values[a..=b].to_vec())
    }

    /// First `len` observations (a real-time vintage ending at `start + len - 1`).
    pub fn truncated(&self, len: usize) -> Result<TimeSeries> {
        if len == 0 || len > self.values.len() {
            return invalid(format!("cannot truncate a series of length {} to {len}", self.len()));
        }
        TimeSeries::new(self.start, self.values[..len].to_vec())
    }

    /// Observations from `from` (inclusive) to `to` (exclusive).
    pub fn slice(&self, from: usize, to: usize) -> Result<TimeSeries> {
        if from >= to || to > self.values.len() {
            return invalid(format!("bad slice {from}..{to} of a series of length {}", self.len()));
        }
        TimeSeries::new(self.start.offset(from as i64), self.values[from..to].to_vec())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<TimeSeries> {
        TimeSeries::new(self.start, self.values.iter().map(|&v| f(v)).collect())
    }

    pub(crate) fn require_complete(&self) -> Result<()> {
        if self.has_missing() {
            return invalid("series contains missing values; trim it first");
        }
        Ok(())
    }
}
