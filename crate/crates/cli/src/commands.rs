use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use log::info;

use trendcycle::evaluation::{revision_metrics, segmented_estimate, simulate, turning_points, vintages};
use trendcycle::inference::{IntervalOptions, IntervalSeries};
use trendcycle::io::{self, fmt_value};
use trendcycle::registry::{Registry, TrendSmoother};
use trendcycle::robust_ma::{RobustFilterPlan, RobustMa};
use trendcycle::{Error, Result, TimeSeries, TrendEstimate};

use crate::config::{scenario, Opts, RunConfig, SimOpts};

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    info!("writing {}", path.display());
    Ok(BufWriter::new(file))
}

fn out_dir(cfg: &RunConfig) -> Result<&Path> {
    fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::Data(format!("{}: {e}", cfg.out_dir.display())))?;
    Ok(&cfg.out_dir)
}

fn load(cfg: &RunConfig) -> Result<TimeSeries> {
    let path = cfg.input.as_ref().ok_or_else(|| Error::InvalidArgument("--input is required".into()))?;
    let mut series = io::read_series_path(path, &cfg.csv)?.trimmed()?;
    if let Some(from) = cfg.from {
        let k = series
            .index_of(from)
            .ok_or_else(|| Error::InvalidArgument(format!("--from {from} outside {}..{}", series.start(), series.end())))?;
        series = series.slice(k, series.len())?;
    }
    if cfg.log {
        if let Some(i) = series.values().iter().position(|&v| v <= 0.0) {
            return Err(Error::Data(format!("--log needs positive values, got {} at {}", series.values()[i], series.period(i))));
        }
        series = series.map(f64::ln)?;
    }
    Ok(series)
}

fn build(cfg: &RunConfig) -> Result<Box<dyn TrendSmoother>> {
    Registry::default().build(&cfg.method, &cfg.smoother)
}

fn back(cfg: &RunConfig, mut est: TrendEstimate) -> TrendEstimate {
    if cfg.log {
        est.values.iter_mut().for_each(|v| *v = v.exp());
    }
    est
}

fn estimate(cfg: &RunConfig, smoother: &dyn TrendSmoother, series: &TimeSeries) -> Result<TrendEstimate> {
    match cfg.break_date {
        None => smoother.smooth(series),
        Some(b) => {
            if !cfg.smoother.outliers.is_empty() {
                return Err(Error::InvalidArgument("--break-date cannot be combined with --outlier".into()));
            }
            let fs = smoother
                .filter_set(Some(series))?
                .ok_or_else(|| Error::InvalidArgument(format!("--break-date needs a linear method, not {}", cfg.method)))?;
            segmented_estimate(series, b, &fs, cfg.segment_side.parse()?)
        }
    }
}

/// Robust filter plan for the henderson method with outliers in the span.
fn robust_plan(cfg: &RunConfig, series: &TimeSeries) -> Result<Option<RobustFilterPlan>> {
    let specs: Vec<_> = cfg
        .smoother
        .outliers
        .iter()
        .filter(|s| series.index_of(s.date).is_some())
        .copied()
        .collect();
    if cfg.method != "henderson" || specs.is_empty() {
        return Ok(None);
    }
    let (h, r) = cfg.smoother.resolve(Some(series))?;
    Ok(Some(RobustMa::new(h, r)?.plan(series.start(), series.len(), &specs)?))
}

fn write_weights(cfg: &RunConfig, smoother: &dyn TrendSmoother, series: Option<&TimeSeries>, dir: &Path) -> Result<()> {
    if let Some(plan) = series.map(|s| robust_plan(cfg, s)).transpose()?.flatten() {
        return io::write_plan_coefficients(create(dir, "coefficients.csv")?, &plan);
    }
    let fs = smoother
        .filter_set(series)?
        .ok_or_else(|| Error::InvalidArgument(format!("method {} has no filter weights", cfg.method)))?;
    io::write_coefficients(create(dir, "coefficients.csv")?, &[fs])
}

pub fn smooth(opts: &Opts) -> Result<()> {
    let cfg = RunConfig::resolve(opts)?;
    let series = load(&cfg)?;
    let smoother = build(&cfg)?;
    let est = estimate(&cfg, smoother.as_ref(), &series)?;
    let dir = out_dir(&cfg)?;
    io::write_turning_points(create(dir, "turning_points.csv")?, &turning_points(est.start, &est.values))?;
    io::write_plan(create(dir, "plan.csv")?, &est)?;
    if cfg.break_date.is_none() && smoother.filter_set(Some(&series))?.is_some() {
        write_weights(&cfg, smoother.as_ref(), Some(&series), dir)?;
    }
    io::write_estimates(create(dir, "estimates.csv")?, &back(&cfg, est))
}

pub fn vintages_cmd(opts: &Opts) -> Result<()> {
    let cfg = RunConfig::resolve(opts)?;
    let series = load(&cfg)?;
    let start = cfg
        .vintage_start
        .ok_or_else(|| Error::InvalidArgument("vintages needs --vintage-start".into()))?;
    let smoother = build(&cfg)?;
    let vm = vintages(&series, |s| estimate(&cfg, smoother.as_ref(), s), start)?;
    let dir = out_dir(&cfg)?;
    io::write_turning_points(create(dir, "turning_points.csv")?, &turning_points(series.start(), vm.final_row()))?;

    let horizon = series.len() - 1 - vm.index_of(start).unwrap_or(0);
    let metrics = revision_metrics(&vm, horizon.min(2 * 12));
    io::write_revisions(create(dir, "revisions.csv")?, &metrics)?;
    println!("mean_abs_revision={}", fmt_value(metrics.mean_abs));
    println!("max_abs_revision={}", fmt_value(metrics.max_abs));

    let mut vm = vm;
    if cfg.log {
        vm.rows.iter_mut().flatten().for_each(|v| *v = v.exp());
    }
    io::write_vintages(create(dir, "vintages.csv")?, &vm)
}

pub fn confint(opts: &Opts) -> Result<()> {
    let cfg = RunConfig::resolve(opts)?;
    if cfg.break_date.is_some() {
        return Err(Error::InvalidArgument("confint does not support --break-date".into()));
    }
    let series = load(&cfg)?;
    let smoother = build(&cfg)?;
    let iopts = IntervalOptions { alpha: cfg.alpha, ..Default::default() };
    let mut rows: IntervalSeries = smoother
        .intervals(&series, &iopts)?
        .ok_or_else(|| Error::InvalidArgument(format!("confint needs a linear method, not {}", cfg.method)))?;
    if cfg.log {
        for r in &mut rows {
            r.estimate = r.estimate.exp();
            r.lower = r.lower.exp();
            r.upper = r.upper.exp();
        }
    }
    io::write_intervals(create(out_dir(&cfg)?, "intervals.csv")?, &rows)
}

pub fn coefficients(opts: &Opts) -> Result<()> {
    let cfg = RunConfig::resolve(opts)?;
    let series = match cfg.input {
        Some(_) => Some(load(&cfg)?),
        None if !cfg.smoother.outliers.is_empty() => {
            return Err(Error::InvalidArgument("coefficients with --outlier needs --input".into()))
        }
        None => None,
    };
    let smoother = build(&cfg)?;
    let dir = out_dir(&cfg)?;
    if let Some(plan) = series.as_ref().map(|s| robust_plan(&cfg, s)).transpose()?.flatten() {
        let est = TrendEstimate::new(
            plan.entries[0].period,
            vec![f64::NAN; plan.entries.len()],
            plan.entries.iter().map(|e| e.source).collect(),
        );
        io::write_plan(create(dir, "plan.csv")?, &est)?;
    }
    write_weights(&cfg, smoother.as_ref(), series.as_ref(), dir)
}

pub fn simulate_cmd(opts: &SimOpts) -> Result<()> {
    let spec = scenario(opts)?;
    let series = simulate(&spec)?;
    let dir = opts.out_dir.clone().unwrap_or_else(|| ".".into());
    fs::create_dir_all(&dir).map_err(|e| Error::Data(format!("{}: {e}", dir.display())))?;
    io::write_series(create(&dir, "series.csv")?, &series)
}
