use crate::error::{invalid, Result};

/// Henderson kernel `κ_j` for `j = -h..=h`.
pub fn henderson_kernel(h: usize) -> Result<Vec<f64>> {
    if h < 1 {
        return invalid("Henderson kernel needs h >= 1");
    }
    let a = ((h + 1) * (h + 1)) as f64;
    let b = ((h + 2) * (h + 2)) as f64;
    let c = ((h + 3) * (h + 3)) as f64;
    let hi = h as isize;
    Ok((-hi..=hi)
        .map(|j| {
            let j2 = (j * j) as f64;
            (1.0 - j2 / a) * (1.0 - j2 / b) * (1.0 - j2 / c)
        })
        .collect())
}

/// Flat kernel of width `2h + 1`.
pub fn uniform_kernel(h: usize) -> Vec<f64> {
    vec![1.0; 2 * h + 1]
}
