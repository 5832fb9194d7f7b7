use super::{
    cut_and_normalize, henderson_kernel, local_poly_filter, mmsre_asym_filter,
    slope_ratio_for_icr, ClfTable, MmsreSpec, MovingAverage,
};
use crate::error::{invalid, Error, Result};
use crate::estimate::{Source, TrendEstimate};
use crate::series::TimeSeries;

/// A centred filter plus one end-point member for each horizon `q = 0..h`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterSet {
    id: String,
    symmetric: MovingAverage,
    asymmetric: Vec<MovingAverage>,
    preserved_degree: usize,
}

impl FilterSet {
    /// `asymmetric[q]` must span `-h..=q`.
    pub fn new(
        id: impl Into<String>,
        symmetric: MovingAverage,
        asymmetric: Vec<MovingAverage>,
        preserved_degree: usize,
    ) -> Result<FilterSet> {
        let h = symmetric.lower();
        if symmetric.upper() != h {
            return invalid("symmetric member must be centred");
        }
        if asymmetric.len() != h {
            return invalid(format!("expected {h} asymmetric members, got {}", asymmetric.len()));
        }
        for (q, m) in asymmetric.iter().enumerate() {
            if m.lower() != h || m.upper() != q {
                return invalid(format!("asymmetric member {q} spans -{}..{}", m.lower(), m.upper()));
            }
        }
        Ok(FilterSet { id: id.into(), symmetric, asymmetric, preserved_degree })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn h(&self) -> usize {
        self.symmetric.lower()
    }

    pub fn symmetric(&self) -> &MovingAverage {
        &self.symmetric
    }

    pub fn asymmetric(&self, q: usize) -> &MovingAverage {
        &self.asymmetric[q]
    }

    pub fn asymmetric_members(&self) -> &[MovingAverage] {
        &self.asymmetric
    }

    /// Degree every asymmetric member is built to reproduce.
    pub fn preserved_degree(&self) -> usize {
        self.preserved_degree
    }

    /// Checks the declared polynomial preservation of every asymmetric member.
    pub fn check_preservation(&self, tol: f64) -> bool {
        self.asymmetric.iter().all(|m| m.preserves_polynomial(self.preserved_degree, tol))
    }

    /// Filter used for index `t` in a series of length `n`, with its source tag.
    pub fn member_for(&self, t: usize, n: usize) -> (MovingAverage, Source) {
        let h = self.h();
        if t + h >= n {
            let q = n - 1 - t;
            (self.asymmetric[q].clone(), Source::Trailing { q })
        } else if t < h {
            (self.asymmetric[t].reversed(), Source::Leading { q: t })
        } else {
            (self.symmetric.clone(), Source::Symmetric)
        }
    }

    /// `(filter_id, q, j, weight)` rows; the symmetric member has `q = h`.
    pub fn coefficient_rows(&self) -> Vec<(String, usize, isize, f64)> {
        let mut rows = Vec::new();
        for (q, m) in self.asymmetric.iter().enumerate().chain([(self.h(), &self.symmetric)]) {
            rows.extend(m.iter().map(|(j, w)| (self.id.clone(), q, j, w)));
        }
        rows
    }
}

/// Henderson filter with `2h + 1` terms.
pub fn henderson_filter(h: usize) -> Result<MovingAverage> {
    local_poly_filter(h, 3, &henderson_kernel(h)?)
}

/// Asymmetric members built by [`mmsre_asym_filter`] around `sym`.
pub fn mmsre_filter_set(
    id: impl Into<String>,
    sym: MovingAverage,
    degree: usize,
    preserved_degree: usize,
    slope_ratio: f64,
) -> Result<FilterSet> {
    let asym = (0..sym.lower())
        .map(|q| {
            mmsre_asym_filter(&sym, &MmsreSpec { degree, preserved_degree, slope_ratio, q })
        })
        .collect::<Result<Vec<_>>>()?;
    FilterSet::new(id, sym, asym, preserved_degree)
}

/// Henderson filter with Musgrave end-point members for I-C ratio `r`.
pub fn musgrave_filter_set(h: usize, r: f64) -> Result<FilterSet> {
    let slope = slope_ratio_for_icr(r)?;
    mmsre_filter_set(format!("musgrave_h{h}"), henderson_filter(h)?, 1, 0, slope)
}

/// End-point members obtained by cutting and renormalising `sym`.
pub fn cut_normalize_filter_set(id: impl Into<String>, sym: MovingAverage) -> Result<FilterSet> {
    let asym = (0..sym.lower())
        .map(|q| cut_and_normalize(&sym, q))
        .collect::<Result<Vec<_>>>()?;
    FilterSet::new(id, sym, asym, 0)
}

/// Cascade linear filter from a coefficient table, with cut-and-normalize end points.
pub fn clf_filter_set(table: &ClfTable) -> Result<FilterSet> {
    cut_normalize_filter_set("clf", table.filter()?).map_err(|e| match e {
        Error::DegenerateFilter(m) => Error::Config(m),
        other => other,
    })
}

/// Applies the set: symmetric in the interior, trailing members at the end,
/// time-reversed members at the start.
pub fn apply_filter_set(series: &TimeSeries, fs: &FilterSet) -> Result<TrendEstimate> {
    series.require_complete()?;
    let n = series.len();
    let h = fs.h();
    if n < 2 * h + 1 {
        return invalid(format!("series of length {n} is shorter than the {}-term filter", 2 * h + 1));
    }
    let y = series.values();
    let mut values = Vec::with_capacity(n);
    let mut sources = Vec::with_capacity(n);
    for t in 0..n {
        let (m, src) = fs.member_for(t, n);
        values.push(m.apply_at(y, t).expect("member fits inside the series"));
        sources.push(src);
    }
    Ok(TrendEstimate::new(series.start(), values, sources))
}

/// I-C ratio: mean absolute change of the irregular over that of the trend,
/// both taken where `sym` applies.
pub fn icr(series: &TimeSeries, sym: &MovingAverage) -> Result<f64> {
    series.require_complete()?;
    let y = series.values();
    let (p, f) = (sym.lower(), sym.upper());
    let n = y.len();
    if n <= p + f + 1 {
        return invalid(format!("series of length {n} too short for I-C ratio"));
    }
    let c: Vec<f64> = (p..n - f).map(|t| sym.apply_at(y, t).unwrap()).collect();
    let i: Vec<f64> = (p..n - f).zip(&c).map(|(t, c)| y[t] - c).collect();
    let abs_diff = |v: &[f64]| v.windows(2).map(|w| (w[1] - w[0]).abs()).sum::<f64>();
    let num = abs_diff(&i);
    let den = abs_diff(&c);
    if !(den > 0.0) {
        return Err(Error::DegenerateSeries("trend-cycle has no variation".into()));
    }
    Ok(num / den)
}

/// Henderson half-width for an I-C ratio: 4, 6 or 11.
pub fn select_henderson_length(r: f64) -> usize {
    if r < 1.0 {
        4
    } else if r <= 3.5 {
        6
    } else {
        11
    }
}

/// I-C ratio paired with each selectable half-width, used for the end-point slope.
pub fn default_icr_for_length(h: usize) -> f64 {
    match h {
        4 => 1.0,
        11 => 4.5,
        _ => 3.5,
    }
}
