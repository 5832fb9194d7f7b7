//! CSV ingest and the output tables.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::estimate::TrendEstimate;
use crate::evaluation::{RevisionMetrics, TurningPoint, VintageMatrix};
use crate::filters::FilterSet;
use crate::inference::IntervalRow;
use crate::robust_ma::RobustFilterPlan;
use crate::series::{Period, TimeSeries};

/// How to read an input series.
#[derive(Debug, Clone)]
pub struct CsvOptions {
    pub date_col: String,
    pub value_col: String,
    /// Values use `,` as decimal mark; fields are then separated by `;`.
    pub decimal_comma: bool,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions { date_col: "date".into(), value_col: "value".into(), decimal_comma: false }
    }
}

fn is_missing(field: &str) -> bool {
    matches!(field, "" | "NA" | "NaN" | "nan" | "na")
}

/// Reads a monthly series. Rows must be consecutive months; empty or `NA`
/// values are accepted only at either end.
pub fn read_series(reader: impl Read, opts: &CsvOptions) -> Result<TimeSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(if opts.decimal_comma { b';' } else { b',' })
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Data(format!("column '{name}' not found in header")))
    };
    let (dc, vc) = (column(&opts.date_col)?, column(&opts.value_col)?);

    let mut start: Option<Period> = None;
    let mut prev: Option<Period> = None;
    let mut values = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| record.get(i).unwrap_or("");
        let period: Period = field(dc)
            .parse()
            .map_err(|_| Error::Data(format!("line {line}: bad date '{}', expected YYYY-MM", field(dc))))?;
        if let Some(p) = prev {
            if period != p.offset(1) {
                return Err(Error::Data(if period > p.offset(1) {
                    format!("line {line}: gap in series, {} missing", p.offset(1))
                } else {
                    format!("line {line}: {period} does not follow {p}")
                }));
            }
        }
        let raw = field(vc);
        let value = if is_missing(raw) {
            f64::NAN
        } else {
            let text = if opts.decimal_comma { raw.replace(',', ".") } else { raw.to_string() };
            text.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Data(format!("line {line}: non-numeric value '{raw}'")))?
        };
        start.get_or_insert(period);
        prev = Some(period);
        values.push(value);
    }
    let start = start.ok_or_else(|| Error::Data("input has no data rows".into()))?;
    TimeSeries::new(start, values)
}

pub fn read_series_path(path: impl AsRef<Path>, opts: &CsvOptions) -> Result<TimeSeries> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    read_series(file, opts).map_err(|e| match e {
        Error::Data(msg) => Error::Data(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Decimal text with 17 significant digits; `NA` for missing values.
pub fn fmt_value(x: f64) -> String {
    if x.is_nan() {
        return "NA".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (16 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

fn writer(w: impl Write) -> csv::Writer<impl Write> {
    csv::WriterBuilder::new().from_writer(w)
}

pub fn write_series(w: impl Write, series: &TimeSeries) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["date", "value"])?;
    for (i, &v) in series.values().iter().enumerate() {
        out.write_record([series.period(i).to_string(), fmt_value(v)])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_estimates(w: impl Write, est: &TrendEstimate) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["period", "estimate", "source"])?;
    for (i, (&v, s)) in est.values.iter().zip(&est.sources).enumerate() {
        out.write_record([est.period(i).to_string(), fmt_value(v), s.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

/// One row per period: kind of filter, future horizon, fallback flag.
pub fn write_plan(w: impl Write, est: &TrendEstimate) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["period", "filter_kind", "q", "fallback_flag"])?;
    for (i, s) in est.sources.iter().enumerate() {
        let kind = s.to_string();
        let kind = kind.split("_q").next().unwrap_or(&kind).to_string();
        let q = s.horizon().map_or_else(String::new, |q| q.to_string());
        out.write_record([
            est.period(i).to_string(),
            kind,
            q,
            u8::from(s.is_fallback()).to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_intervals(w: impl Write, rows: &[IntervalRow]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["period", "estimate", "lower", "upper", "df", "sigma2", "filter_id"])?;
    for r in rows {
        out.write_record([
            r.period.to_string(),
            fmt_value(r.estimate),
            fmt_value(r.lower),
            fmt_value(r.upper),
            fmt_value(r.df),
            fmt_value(r.sigma2),
            r.filter_id.clone(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_vintages(w: impl Write, vm: &VintageMatrix) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["publication_date", "period", "estimate"])?;
    for (publication, period, v) in vm.long_rows() {
        out.write_record([publication.to_string(), period.to_string(), fmt_value(v)])?;
    }
    out.flush()?;
    Ok(())
}

/// Long format `(period, q, revision)`, skipping unavailable vintages.
pub fn write_revisions(w: impl Write, metrics: &RevisionMetrics) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["period", "q", "revision"])?;
    for (p, revs) in &metrics.per_period {
        for (q, r) in revs.iter().enumerate() {
            if let Some(r) = r {
                out.write_record([p.to_string(), q.to_string(), fmt_value(*r)])?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_turning_points(w: impl Write, points: &[TurningPoint]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["period", "kind"])?;
    for p in points {
        out.write_record([p.period.to_string(), p.kind.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_coefficients(w: impl Write, sets: &[FilterSet]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["filter_id", "q", "j", "weight"])?;
    for fs in sets {
        for (id, q, j, weight) in fs.coefficient_rows() {
            out.write_record([id, q.to_string(), j.to_string(), fmt_value(weight)])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Weights actually used at each period of a robust plan, in the
/// coefficient layout with the period as filter id.
pub fn write_plan_coefficients(w: impl Write, plan: &RobustFilterPlan) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["filter_id", "q", "j", "weight"])?;
    for e in &plan.entries {
        let q = e.source.horizon().unwrap_or(plan.h);
        for (j, weight) in e.filter.iter() {
            out.write_record([e.period.to_string(), q.to_string(), j.to_string(), fmt_value(weight)])?;
        }
    }
    out.flush()?;
    Ok(())
}
