use std::fmt;

use crate::error::{invalid, Result};

/// A finite moving average with weights indexed `-lower..=upper`.
///
/// The weight at offset `j` multiplies the observation `y[t + j]` when the
/// filter estimates period `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct MovingAverage {
    lower: usize,
    upper: usize,
    weights: Vec<f64>,
}

impl MovingAverage {
    pub fn new(lower: usize, upper: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != lower + upper + 1 {
            return invalid(format!(
                "expected {} weights for span -{lower}..{upper}, got {}",
                lower + upper + 1,
                weights.len()
            ));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return invalid("moving-average weights must be finite");
        }
        Ok(MovingAverage { lower, upper, weights })
    }

    /// Past span `p`.
    pub fn lower(&self) -> usize {
        self.lower
    }

    /// Future span `f`.
    pub fn upper(&self) -> usize {
        self.upper
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Weights in offset order `-lower..=upper`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weight at offset `j`; zero outside the support.
    pub fn weight(&self, j: isize) -> f64 {
        let k = j + self.lower as isize;
        if k < 0 || k as usize >= self.weights.len() {
            0.0
        } else {
            self.weights[k as usize]
        }
    }

    /// Iterator over `(offset, weight)`.
    pub fn iter(&self) -> impl Iterator<Item = (isize, f64)> + '_ {
        let lo = self.lower as isize;
        self.weights.iter().enumerate().map(move |(k, &w)| (k as isize - lo, w))
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn sum_squares(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.lower == self.upper
            && (1..=self.lower as isize).all(|i| (self.weight(i) - self.weight(-i)).abs() <= tol)
    }

    /// Time reversal: offset `j` becomes `-j`.
    pub fn reversed(&self) -> MovingAverage {
        let mut weights = self.weights.clone();
        weights.reverse();
        MovingAverage { lower: self.upper, upper: self.lower, weights }
    }

    /// `Σ_j θ_j j^k = 1{k = 0}` for every `k <= degree`, to `tol`.
    pub fn preserves_polynomial(&self, degree: usize, tol: f64) -> bool {
        (0..=degree).all(|k| {
            let m: f64 = self.iter().map(|(j, w)| w * (j as f64).powi(k as i32)).sum();
            let target = if k == 0 { 1.0 } else { 0.0 };
            (m - target).abs() <= tol
        })
    }

    /// Estimate at index `t` of `values`; `None` if the window leaves the data.
    pub fn apply_at(&self, values: &[f64], t: usize) -> Option<f64> {
        if t < self.lower || t + self.upper >= values.len() {
            return None;
        }
        let base = t - self.lower;
        Some(self.weights.iter().zip(&values[base..]).map(|(w, y)| w * y).sum())
    }
}

impl fmt::Display for MovingAverage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MA[-{}..{}](", self.lower, self.upper)?;
        for (k, w) in self.weights.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w:.6}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_and_reverse() {
        let m = MovingAverage::new(2, 1, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(m.weight(-2), 0.1);
        assert_eq!(m.weight(1), 0.4);
        assert_eq!(m.weight(2), 0.0);
        let r = m.reversed();
        assert_eq!((r.lower(), r.upper()), (1, 2));
        assert_eq!(r.weight(-1), 0.4);
        assert_eq!(r.weight(2), 0.1);
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(MovingAverage::new(1, 1, vec![1.0]).is_err());
    }

    #[test]
    fn apply_respects_support() {
        let m = MovingAverage::new(1, 1, vec![0.25, 0.5, 0.25]).unwrap();
        let y = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(m.apply_at(&y, 0), None);
        assert_eq!(m.apply_at(&y, 1), Some(2.0));
        assert_eq!(m.apply_at(&y, 3), None);
        assert!(m.is_symmetric(0.0));
        assert!(m.preserves_polynomial(1, 1e-15));
        assert!(!m.preserves_polynomial(2, 1e-15));
    }
}
