//! Command-line flags, the JSON config file, and their merge.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use trendcycle::evaluation::{ScenarioSpec, ShockKind};
use trendcycle::filters::ClfTable;
use trendcycle::io::CsvOptions;
use trendcycle::nonlinear::Boundary;
use trendcycle::registry::{HalfWidth, SmootherConfig};
use trendcycle::robust_ma::{check_unique, OutlierSpec};
use trendcycle::{Error, Period, Result};

#[derive(Debug, Parser)]
#[command(name = "trendcycle", version, about = "Trend-cycle estimation with linear and robust moving averages")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the trend-cycle of a series.
    Smooth(Opts),
    /// Re-estimate on every real-time truncation of a series.
    Vintages(Opts),
    /// Write a simulated scenario series.
    Simulate(SimOpts),
    /// Export filter weights.
    Coefficients(Opts),
    /// Confidence intervals for linear and robust moving averages.
    Confint(Opts),
}

#[derive(Debug, Args)]
pub struct Opts {
    /// Input CSV with a header row.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub date_col: Option<String>,
    #[arg(long)]
    pub value_col: Option<String>,
    /// Values use a decimal comma and `;` separates fields.
    #[arg(long)]
    pub decimal_comma: bool,
    /// henderson, clf, cut-normalize, med, rm, lms, lts, lqd or dr.
    #[arg(long)]
    pub method: Option<String>,
    /// Half-width of the filter, or `auto` to choose it from the I-C ratio.
    #[arg(long)]
    pub h: Option<String>,
    /// I-C ratio used for the end-point filters.
    #[arg(long)]
    pub ratio: Option<f64>,
    /// Outlier regressor `kind:YYYY-MM`, kind one of ao, ao_trend, ls.
    #[arg(long = "outlier")]
    pub outliers: Vec<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// na_pad or extrapolate.
    #[arg(long)]
    pub boundary: Option<String>,
    #[arg(long)]
    pub degree: Option<usize>,
    /// First publication period of the vintages.
    #[arg(long)]
    pub vintage_start: Option<String>,
    /// Drop observations before this period.
    #[arg(long)]
    pub from: Option<String>,
    /// First period of a new regime; segments are estimated separately.
    #[arg(long)]
    pub break_date: Option<String>,
    /// left, right or both.
    #[arg(long)]
    pub segment_side: Option<String>,
    /// Coefficient table for the clf method.
    #[arg(long)]
    pub clf_table: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Estimate on the log scale and transform back.
    #[arg(long)]
    pub log: bool,
    /// JSON config file; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimOpts {
    #[arg(long)]
    pub trend_degree: Option<usize>,
    /// Shock `kind:YYYY-MM:size`, kind one of ao, ls.
    #[arg(long)]
    pub shock: Option<String>,
    #[arg(long)]
    pub start: Option<String>,
    #[arg(long)]
    pub length: Option<usize>,
    /// Add the shock instead of scaling the trend by it.
    #[arg(long)]
    pub additive: bool,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// JSON scenario file with the fields of a scenario spec.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum HField {
    Number(usize),
    Text(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FileConfig {
    input: Option<PathBuf>,
    date_col: Option<String>,
    value_col: Option<String>,
    decimal_comma: Option<bool>,
    method: Option<String>,
    h: Option<HField>,
    ratio: Option<f64>,
    outliers: Option<Vec<OutlierSpec>>,
    alpha: Option<f64>,
    boundary: Option<String>,
    degree: Option<usize>,
    vintage_start: Option<Period>,
    from: Option<Period>,
    break_date: Option<Period>,
    segment_side: Option<String>,
    clf_table: Option<PathBuf>,
    out_dir: Option<PathBuf>,
    log: Option<bool>,
}

/// Fully resolved options for one run.
#[derive(Debug)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub csv: CsvOptions,
    pub method: String,
    pub smoother: SmootherConfig,
    pub alpha: f64,
    pub vintage_start: Option<Period>,
    pub from: Option<Period>,
    pub break_date: Option<Period>,
    pub segment_side: String,
    pub out_dir: PathBuf,
    pub log: bool,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn parse_period(flag: &str, s: &str) -> Result<Period> {
    s.parse().map_err(|_| usage(format!("--{flag}: bad period '{s}', expected YYYY-MM")))
}

const WINDOW_METHODS: [&str; 6] = ["med", "rm", "lms", "lts", "lqd", "dr"];

impl RunConfig {
    pub fn resolve(opts: &Opts) -> Result<RunConfig> {
        let file: FileConfig = match &opts.config {
            Some(p) => read_json(p)?,
            None => FileConfig::default(),
        };
        let method = opts
            .method
            .clone()
            .or(file.method)
            .unwrap_or_else(|| "henderson".into())
            .to_ascii_lowercase();
        let h = match (&opts.h, file.h) {
            (Some(s), _) => s.parse().map_err(|e: Error| usage(format!("--h: {e}")))?,
            (None, Some(HField::Number(h))) => HalfWidth::Fixed(h),
            (None, Some(HField::Text(s))) => s.parse()?,
            (None, None) => HalfWidth::default(),
        };
        let outliers = if opts.outliers.is_empty() {
            file.outliers.unwrap_or_default()
        } else {
            opts.outliers
                .iter()
                .map(|s| s.parse().map_err(|e: Error| usage(format!("--outlier {s}: {e}"))))
                .collect::<Result<Vec<OutlierSpec>>>()?
        };
        check_unique(&outliers)?;
        let boundary: Option<Boundary> = match opts.boundary.clone().or(file.boundary) {
            Some(s) => Some(s.parse().map_err(|e: Error| usage(format!("boundary: {e}")))?),
            None => None,
        };
        let ratio = opts.ratio.or(file.ratio);
        let degree = opts.degree.or(file.degree);
        let clf_path = opts.clf_table.clone().or(file.clf_table);

        let window = WINDOW_METHODS.contains(&method.as_str());
        if !window && (boundary.is_some() || degree.is_some()) {
            return Err(usage(format!("--boundary and --degree apply to window methods, not {method}")));
        }
        if method != "henderson" && (ratio.is_some() || !outliers.is_empty()) {
            return Err(usage(format!("--ratio and --outlier apply to the henderson method, not {method}")));
        }
        if let Some(r) = ratio {
            if !(r.is_finite() && r > 0.0) {
                return Err(usage(format!("--ratio must be positive, got {r}")));
            }
        }
        if method == "clf" && clf_path.is_none() {
            return Err(usage("the clf method needs --clf-table"));
        }
        if method != "clf" && clf_path.is_some() {
            return Err(usage("--clf-table applies to the clf method only"));
        }
        let clf_table = match clf_path {
            Some(p) => Some(ClfTable::from_path(&p).map_err(|e| Error::Data(format!("{}: {e}", p.display())))?),
            None => None,
        };

        let alpha = opts.alpha.or(file.alpha).unwrap_or(0.05);
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(usage(format!("--alpha must lie in (0, 1), got {alpha}")));
        }
        let period_opt = |flag: &str, cli: &Option<String>, f: Option<Period>| -> Result<Option<Period>> {
            match cli {
                Some(s) => parse_period(flag, s).map(Some),
                None => Ok(f),
            }
        };
        let segment_side = opts.segment_side.clone().or(file.segment_side).unwrap_or_else(|| "left".into());
        segment_side.parse::<trendcycle::evaluation::SegmentSide>()?;

        Ok(RunConfig {
            input: opts.input.clone().or(file.input),
            csv: CsvOptions {
                date_col: opts.date_col.clone().or(file.date_col).unwrap_or_else(|| "date".into()),
                value_col: opts.value_col.clone().or(file.value_col).unwrap_or_else(|| "value".into()),
                decimal_comma: opts.decimal_comma || file.decimal_comma.unwrap_or(false),
            },
            smoother: SmootherConfig {
                h,
                ratio,
                outliers,
                degree,
                boundary: boundary.unwrap_or_default(),
                clf_table,
            },
            method,
            alpha,
            vintage_start: period_opt("vintage-start", &opts.vintage_start, file.vintage_start)?,
            from: period_opt("from", &opts.from, file.from)?,
            break_date: period_opt("break-date", &opts.break_date, file.break_date)?,
            segment_side,
            out_dir: opts.out_dir.clone().or(file.out_dir).unwrap_or_else(|| ".".into()),
            log: opts.log || file.log.unwrap_or(false),
        })
    }
}

fn parse_shock(s: &str) -> Result<(ShockKind, Period, f64)> {
    let bad = || usage(format!("--shock {s}: expected kind:YYYY-MM:size with kind ao or ls"));
    let mut parts = s.split(':');
    let (Some(k), Some(d), Some(z), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
        return Err(bad());
    };
    let kind = match k.trim().to_ascii_lowercase().as_str() {
        "ao" => ShockKind::Ao,
        "ls" => ShockKind::Ls,
        _ => return Err(bad()),
    };
    let date = d.parse().map_err(|_| bad())?;
    let size: f64 = z.trim().parse().map_err(|_| bad())?;
    if !size.is_finite() {
        return Err(bad());
    }
    Ok((kind, date, size))
}

/// Scenario from the JSON file, with flags applied on top.
pub fn scenario(opts: &SimOpts) -> Result<ScenarioSpec> {
    let mut spec: ScenarioSpec = match &opts.config {
        Some(p) => read_json(p)?,
        None => ScenarioSpec::default(),
    };
    if let Some(d) = opts.trend_degree {
        if d != spec.trend_degree {
            spec.coefficients = None;
        }
        spec.trend_degree = d;
    }
    if let Some(s) = &opts.shock {
        let (kind, date, size) = parse_shock(s)?;
        spec.shock_kind = kind;
        spec.shock_date = date;
        spec.shock_size = size;
    }
    if let Some(s) = &opts.start {
        spec.start_date = parse_period("start", s)?;
    }
    if let Some(n) = opts.length {
        spec.length = n;
    }
    if opts.additive {
        spec.multiplicative = false;
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shock_grammar() {
        let (k, d, z) = parse_shock("ls:2022-01:0.10").unwrap();
        assert_eq!((k, d.to_string(), z), (ShockKind::Ls, "2022-01".to_string(), 0.10));
        assert!(parse_shock("ao_trend:2022-01:0.1").is_err());
        assert!(parse_shock("ao:2022-01").is_err());
        assert!(parse_shock("ao:2022-01:x").is_err());
    }
}
