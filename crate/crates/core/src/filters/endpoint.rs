use std::io::Read;
use std::path::Path;

use super::MovingAverage;
use crate::error::{invalid, Error, Result};

/// Truncates a centred filter to `-h..=q` and rescales the kept weights to sum to one.
pub fn cut_and_normalize(sym: &MovingAverage, q: usize) -> Result<MovingAverage> {
    let h = sym.lower();
    if sym.upper() != h {
        return invalid("cut-and-normalize needs a centred filter");
    }
    if q > h {
        return invalid(format!("horizon q={q} exceeds h={h}"));
    }
    let kept = &sym.weights()[..h + q + 1];
    let total: f64 = kept.iter().sum();
    if !(total > 0.0) {
        return Err(Error::DegenerateFilter(format!(
            "retained weights for q={q} sum to {total}"
        )));
    }
    MovingAverage::new(h, q, kept.iter().map(|w| w / total).collect())
}

/// Symmetric 13-term coefficient table read from a `j,weight` CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ClfTable {
    pub provenance: String,
    pub weights: Vec<f64>,
}

pub const CLF_HALF_WIDTH: usize = 6;
const CLF_SUM_TOL: f64 = 1e-9;

impl ClfTable {
    pub fn from_path(path: impl AsRef<Path>) -> Result<ClfTable> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        ClfTable::from_reader(file)
    }

    /// Expects a `# provenance: …` comment line, a header, then rows
    /// `j,weight` for `j = -6..=6` in any order.
    pub fn from_reader(mut reader: impl Read) -> Result<ClfTable> {
        let mut text = String::new();
        reader.read_to_string(&mut text)?;
        let provenance = text
            .lines()
            .filter_map(|l| l.trim().strip_prefix('#'))
            .find_map(|l| l.trim().strip_prefix("provenance:").map(|p| p.trim().to_string()))
            .ok_or_else(|| Error::Config("coefficient table lacks a '# provenance:' line".into()))?;

        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let h = CLF_HALF_WIDTH as i64;
        let mut weights = vec![None; 2 * CLF_HALF_WIDTH + 1];
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let bad = || Error::Config(format!("coefficient table row {}: {:?}", line + 1, rec));
            if rec.len() != 2 {
                return Err(bad());
            }
            let j: i64 = rec[0].parse().map_err(|_| bad())?;
            let w: f64 = rec[1].parse().map_err(|_| bad())?;
            if !(-h..=h).contains(&j) || !w.is_finite() {
                return Err(bad());
            }
            let slot = &mut weights[(j + h) as usize];
            if slot.is_some() {
                return Err(Error::Config(format!("coefficient table repeats j={j}")));
            }
            *slot = Some(w);
        }
        let weights: Vec<f64> = weights
            .into_iter()
            .enumerate()
            .map(|(k, w)| {
                w.ok_or_else(|| {
                    Error::Config(format!("coefficient table misses j={}", k as i64 - h))
                })
            })
            .collect::<Result<_>>()?;
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > CLF_SUM_TOL {
            return Err(Error::Config(format!("coefficient table sums to {sum}, not 1")));
        }
        Ok(ClfTable { provenance, weights })
    }

    pub fn filter(&self) -> Result<MovingAverage> {
        MovingAverage::new(CLF_HALF_WIDTH, CLF_HALF_WIDTH, self.weights.clone())
    }
}
