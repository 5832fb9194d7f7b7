use nalgebra::{DMatrix, DVector};

use super::MovingAverage;
use crate::error::{invalid, Error, Result};
use crate::linalg;

/// Reference model for an asymmetric filter that minimises the expected
/// squared revision against a symmetric target.
///
/// The local trend is a degree-`degree` polynomial; the filter reproduces
/// polynomials up to `preserved_degree` exactly and pays for the remaining
/// terms through the bias penalty scaled by `slope_ratio`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmsreSpec {
    pub degree: usize,
    pub preserved_degree: usize,
    /// `δ/σ`, applied to the first non-preserved power.
    pub slope_ratio: f64,
    /// Number of future observations available.
    pub q: usize,
}

impl MmsreSpec {
    /// Musgrave model: local line, constants preserved.
    pub fn musgrave(slope_ratio: f64, q: usize) -> Self {
        MmsreSpec { degree: 1, preserved_degree: 0, slope_ratio, q }
    }

    fn validate(&self, h: usize) -> Result<()> {
        if self.preserved_degree > self.degree {
            return invalid("preserved degree exceeds model degree");
        }
        if !(self.slope_ratio >= 0.0) || !self.slope_ratio.is_finite() {
            return invalid("slope ratio must be finite and non-negative");
        }
        if self.q >= h {
            return invalid(format!("horizon q={} must be below h={h}", self.q));
        }
        Ok(())
    }
}

/// Slope-to-noise ratio implied by an I-C ratio `R`.
pub fn slope_ratio_for_icr(r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return invalid(format!("I-C ratio must be positive, got {r}"));
    }
    Ok(2.0 / (r * std::f64::consts::PI.sqrt()))
}

/// Asymmetric member with `q` future points that minimises the expected
/// squared revision to `sym` under `spec`.
pub fn mmsre_asym_filter(sym: &MovingAverage, spec: &MmsreSpec) -> Result<MovingAverage> {
    if sym.lower() != sym.upper() {
        return invalid("target filter must be centred");
    }
    let h = sym.lower();
    spec.validate(h)?;
    let hi = h as isize;
    let pos = linalg::positions(-hi, hi);
    let u = linalg::poly_design(&pos, spec.preserved_degree);
    let bias = (spec.degree > spec.preserved_degree && spec.slope_ratio > 0.0).then(|| {
        let k = spec.preserved_degree as i32 + 1;
        DVector::from_iterator(pos.len(), pos.iter().map(|j| spec.slope_ratio * j.powi(k)))
    });
    let v = revision_filter(sym, spec.q, &u, bias.as_ref()).ok_or_else(|| {
        Error::InvalidSpec(format!("KKT system singular for h={h}, q={}", spec.q))
    })?;
    MovingAverage::new(h, spec.q, v)
}

/// Solves
///   min ‖v − θ_p‖² + (a'v − b)²   s.t.   C_p' v = C' θ
/// where `θ` is a centred target of half-width `h`, `C` the constraint
/// columns over the full window, `a` the observed part of `bias` and
/// `b = bias' θ`. Returns `None` when the KKT matrix is singular.
pub(crate) fn revision_filter(
    target: &MovingAverage,
    q: usize,
    constraints: &DMatrix<f64>,
    bias: Option<&DVector<f64>>,
) -> Option<Vec<f64>> {
    let h = target.lower();
    let m = h + q + 1;
    let c = constraints.ncols();
    let theta = DVector::from_column_slice(target.weights());
    let rhs_c = constraints.transpose() * &theta;

    let mut kkt = DMatrix::<f64>::zeros(m + c, m + c);
    let mut rhs = DVector::<f64>::zeros(m + c);
    for i in 0..m {
        kkt[(i, i)] = 1.0;
        rhs[i] = theta[i];
    }
    if let Some(z) = bias {
        let b = z.dot(&theta);
        for i in 0..m {
            for k in 0..m {
                kkt[(i, k)] += z[i] * z[k];
            }
            rhs[i] += z[i] * b;
        }
    }
    for i in 0..m {
        for k in 0..c {
            kkt[(i, m + k)] = constraints[(i, k)];
            kkt[(m + k, i)] = constraints[(i, k)];
        }
    }
    for k in 0..c {
        rhs[m + k] = rhs_c[k];
    }
    let sol = linalg::solve(kkt, &rhs)?;
    Some(sol.rows(0, m).iter().cloned().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::{henderson_kernel, local_poly_filter};

    fn henderson(h: usize) -> MovingAverage {
        local_poly_filter(h, 3, &henderson_kernel(h).unwrap()).unwrap()
    }

    // Closed-form Musgrave weights: constants preserved, linear bias penalty.
    fn musgrave_closed(sym: &MovingAverage, q: usize, r: f64) -> Vec<f64> {
        let h = sym.lower();
        let w: Vec<f64> = sym.weights().to_vec();
        let n = 2 * h + 1;
        let m = h + q + 1;
        let mf = m as f64;
        let d = 4.0 / (std::f64::consts::PI * r * r);
        let tail: f64 = w[m..].iter().sum();
        let centre = (mf + 1.0) / 2.0;
        let moment: f64 = (m + 1..=n).map(|j| (j as f64 - centre) * w[j - 1]).sum();
        let scale = d / (1.0 + mf * (mf - 1.0) * (mf + 1.0) * d / 12.0);
        (1..=m)
            .map(|i| w[i - 1] + tail / mf + (i as f64 - centre) * scale * moment)
            .collect()
    }

    #[test]
    fn musgrave_matches_closed_form() {
        for h in [4, 6, 11] {
            let sym = henderson(h);
            for r in [1.0, 3.5, 4.5] {
                let s = slope_ratio_for_icr(r).unwrap();
                for q in 0..h {
                    let v = mmsre_asym_filter(&sym, &MmsreSpec::musgrave(s, q)).unwrap();
                    for (a, b) in v.weights().iter().zip(musgrave_closed(&sym, q, r)) {
                        assert!((a - b).abs() < 1e-12, "h={h} R={r} q={q}");
                    }
                    assert!((v.sum() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn slope_ratio_value() {
        let s = slope_ratio_for_icr(3.5).unwrap();
        assert!((s - 0.3224).abs() < 1e-4);
        assert!(slope_ratio_for_icr(0.0).is_err());
    }

    #[test]
    fn limits_in_slope_ratio() {
        let sym = henderson(6);
        let q = 2;
        let constant_proj = mmsre_asym_filter(&sym, &MmsreSpec::musgrave(0.0, q)).unwrap();
        let linear_proj = mmsre_asym_filter(
            &sym,
            &MmsreSpec { degree: 1, preserved_degree: 1, slope_ratio: 0.0, q },
        )
        .unwrap();
        let dist = |a: &MovingAverage, b: &MovingAverage| -> f64 {
            a.weights().iter().zip(b.weights()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
        };
        let mut last_small = f64::INFINITY;
        let mut last_large = f64::INFINITY;
        for s in [1.0, 1e1, 1e2, 1e3] {
            let large = mmsre_asym_filter(&sym, &MmsreSpec::musgrave(s, q)).unwrap();
            let small = mmsre_asym_filter(&sym, &MmsreSpec::musgrave(1.0 / s, q)).unwrap();
            let dl = dist(&large, &linear_proj);
            let ds = dist(&small, &constant_proj);
            assert!(dl < last_large && ds < last_small);
            last_large = dl;
            last_small = ds;
        }
        assert!(last_large < 1e-6 && last_small < 1e-6);
    }

    #[test]
    fn constraint_holds_for_higher_degrees() {
        let sym = henderson(6);
        for q in 0..6 {
            let spec = MmsreSpec { degree: 3, preserved_degree: 1, slope_ratio: 0.7, q };
            let v = mmsre_asym_filter(&sym, &spec).unwrap();
            assert!(v.preserves_polynomial(1, 1e-10));
        }
    }

    #[test]
    fn rejects_out_of_range_horizon() {
        let sym = henderson(4);
        assert!(mmsre_asym_filter(&sym, &MmsreSpec::musgrave(0.3, 4)).is_err());
        let bad = MmsreSpec { degree: 0, preserved_degree: 1, slope_ratio: 0.3, q: 0 };
        assert!(mmsre_asym_filter(&sym, &bad).is_err());
    }
}
