use super::window::{
    better, eval_poly, lex_less, lower_median, ls_fit, median, order_stat, solve_small, sorted, Method,
    Window, WindowFit,
};

/// Running median of the window.
pub fn med_window(w: &Window) -> Option<WindowFit> {
    median(&w.y).map(|m| WindowFit::new(Method::Med, vec![m]))
}

/// Repeated-median line. Even counts use the lower median throughout.
pub fn rm_window(w: &Window) -> Option<WindowFit> {
    let n = w.len();
    if n < 2 {
        return None;
    }
    let inner: Vec<f64> = (0..n)
        .map(|i| {
            let s: Vec<f64> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (w.y[i] - w.y[j]) / (w.x[i] - w.x[j]))
                .collect();
            lower_median(&s).unwrap()
        })
        .collect();
    let slope = lower_median(&inner)?;
    let level: Vec<f64> = w.x.iter().zip(&w.y).map(|(x, y)| y - slope * x).collect();
    Some(WindowFit::new(Method::Rm, vec![lower_median(&level)?, slope]))
}

/// Order of the residual statistic minimised by LMS: `floor(n/2) + 1`.
pub fn lms_order(n: usize) -> usize {
    n / 2 + 1
}

/// LMS objective: the `lms_order`-th smallest squared residual.
pub fn lms_objective(w: &Window, beta: &[f64]) -> f64 {
    let mut r2: Vec<f64> = w.residuals(beta).iter().map(|r| r * r).collect();
    order_stat(&mut r2, lms_order(w.len()))
}

/// Best intercept for fixed higher-order terms: midpoint of the shortest
/// interval covering `k` of the partial residuals.
fn shortest_half(w: &Window, tail: &[f64], k: usize) -> (f64, f64) {
    let z: Vec<f64> = w
        .x
        .iter()
        .zip(&w.y)
        .map(|(&x, &y)| {
            let mut fit = 0.0;
            for (e, b) in tail.iter().enumerate() {
                fit += b * x.powi(e as i32 + 1);
            }
            y - fit
        })
        .collect();
    let z = sorted(&z);
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..=z.len() - k {
        let len = z[i + k - 1] - z[i];
        if len < best.0 {
            best = (len, 0.5 * (z[i] + z[i + k - 1]));
        }
    }
    (best.1, 0.25 * best.0 * best.0)
}

/// Least median of squares of degree 1 or 2, by exhaustive elemental search.
pub fn lms_window(w: &Window, degree: usize) -> Option<WindowFit> {
    let n = w.len();
    if !(1..=2).contains(&degree) || n < degree + 2 {
        return None;
    }
    let k = lms_order(n);
    let mut best_obj = f64::INFINITY;
    let mut best: Vec<f64> = Vec::new();
    let mut consider = |tail: Vec<f64>| {
        let (b0, obj) = shortest_half(w, &tail, k);
        let mut beta = vec![b0];
        beta.extend(tail);
        if best.is_empty() || better(obj, &beta, best_obj, &best) {
            best_obj = obj;
            best = beta;
        }
    };
    if degree == 1 {
        consider(vec![0.0]);
        for i in 0..n {
            for j in i + 1..n {
                consider(vec![(w.y[j] - w.y[i]) / (w.x[j] - w.x[i])]);
            }
        }
    } else {
        for i in 0..n {
            for j in i + 1..n {
                for l in j + 1..n {
                    if let Some(b) = ls_fit(&w.x, &w.y, &[i, j, l], 2) {
                        consider(b[1..].to_vec());
                    }
                    for m in l + 1..n {
                        if let Some(b) = chebyshev_fit(w, [i, j, l, m]) {
                            consider(b[1..].to_vec());
                        }
                    }
                }
            }
        }
    }
    Some(WindowFit::new(Method::Lms, best))
}

/// Minimax parabola through four points: equal residuals of alternating sign.
fn chebyshev_fit(w: &Window, idx: [usize; 4]) -> Option<Vec<f64>> {
    let a: Vec<Vec<f64>> = idx
        .iter()
        .enumerate()
        .map(|(s, &i)| {
            let x = w.x[i];
            vec![1.0, x, x * x, if s % 2 == 0 { 1.0 } else { -1.0 }]
        })
        .collect();
    let b: Vec<f64> = idx.iter().map(|&i| w.y[i]).collect();
    solve_small(a, b).map(|s| s[..3].to_vec())
}

/// Default LTS coverage `floor((n + p + 1) / 2)` with `p = degree`.
pub fn lts_coverage(n: usize, degree: usize) -> usize {
    (n + degree + 1) / 2
}

/// LTS objective: sum of the `coverage` smallest squared residuals.
pub fn lts_objective(w: &Window, beta: &[f64], coverage: usize) -> f64 {
    let r2 = sorted(&w.residuals(beta).iter().map(|r| r * r).collect::<Vec<_>>());
    r2[..coverage].iter().sum()
}

/// Least trimmed squares by enumeration of every subset of size `coverage`.
pub fn lts_window(w: &Window, degree: usize, coverage: Option<usize>) -> Option<WindowFit> {
    let n = w.len();
    if !(1..=2).contains(&degree) || n < degree + 2 {
        return None;
    }
    let c = coverage.unwrap_or_else(|| lts_coverage(n, degree));
    if c < degree + 2 || c > n {
        return None;
    }
    let mut best_obj = f64::INFINITY;
    let mut best: Vec<f64> = Vec::new();
    let mut idx: Vec<usize> = (0..c).collect();
    loop {
        if let Some(beta) = ls_fit(&w.x, &w.y, &idx, degree) {
            let rss: f64 = idx
                .iter()
                .map(|&i| (w.y[i] - eval_poly(&beta, w.x[i])).powi(2))
                .sum();
            if best.is_empty() || better(rss, &beta, best_obj, &best) {
                best_obj = rss;
                best = beta;
            }
        }
        let Some(pos) = (0..c).rev().find(|&p| idx[p] < n - c + p) else { break };
        idx[pos] += 1;
        for p in pos + 1..c {
            idx[p] = idx[p - 1] + 1;
        }
    }
    (!best.is_empty()).then(|| WindowFit::new(Method::Lts, best))
}

/// Order `C(h_p, 2)` used by LQD, with `h_p = floor((n + 2) / 2)`.
pub fn lqd_order(n: usize) -> usize {
    let hp = (n + 2) / 2;
    hp * (hp - 1) / 2
}

fn pair_differences(w: &Window) -> Vec<(f64, f64)> {
    let n = w.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push((w.y[j] - w.y[i], w.x[j] - w.x[i]));
        }
    }
    out
}

/// LQD objective at `slope`: the `lqd_order`-th smallest |r_i − r_j|.
pub fn lqd_objective(w: &Window, slope: f64) -> f64 {
    let mut d: Vec<f64> = pair_differences(w).iter().map(|(a, d)| (a - slope * d).abs()).collect();
    order_stat(&mut d, lqd_order(w.len()))
}

/// Least quartile difference slope, exact over every breakpoint of the
/// piecewise-linear objective; level is the median of `y − slope·x`.
pub fn lqd_window(w: &Window) -> Option<WindowFit> {
    let n = w.len();
    if n < 3 {
        return None;
    }
    let pairs = pair_differences(w);
    let k = lqd_order(n);
    let mut cand: Vec<f64> = pairs.iter().map(|(a, d)| a / d).collect();
    for (p, &(a1, d1)) in pairs.iter().enumerate() {
        for &(a2, d2) in &pairs[p + 1..] {
            if d1 != d2 {
                cand.push((a1 - a2) / (d1 - d2));
            }
            cand.push((a1 + a2) / (d1 + d2));
        }
    }
    cand.sort_by(f64::total_cmp);
    cand.dedup();
    let mut buf = vec![0.0; pairs.len()];
    let mut best_obj = f64::INFINITY;
    let mut best = f64::NAN;
    for &s in &cand {
        for (b, (a, d)) in buf.iter_mut().zip(&pairs) {
            *b = (a - s * d).abs();
        }
        let obj = order_stat(&mut buf, k);
        if best.is_nan() || better(obj, &[0.0, s], best_obj, &[0.0, best]) {
            best_obj = obj;
            best = s;
        }
    }
    let level: Vec<f64> = w.x.iter().zip(&w.y).map(|(x, y)| y - best * x).collect();
    Some(WindowFit::new(Method::Lqd, vec![median(&level)?, best]))
}

/// Regression depth of the line `beta` among the window points.
///
/// For each split, points left of it are compared with points right of it:
/// the depth is the smallest count of points whose residual sign would have
/// to flip for the line to be rotated off the data. Zero residuals count on
/// both sides.
pub fn rdepth(w: &Window, beta: &[f64]) -> usize {
    // Residuals at rounding level count as zero, so lines through two
    // points keep those points on both sides.
    let scale = w.y.iter().fold(0.0f64, |m, v| m.max(v.abs())) + beta[0].abs() + 1.0;
    let r: Vec<f64> = w
        .residuals(beta)
        .into_iter()
        .map(|v| if v.abs() <= 1e-12 * scale { 0.0 } else { v })
        .collect();
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by(|&a, &b| w.x[a].total_cmp(&w.x[b]));
    let nonneg = r.iter().filter(|&&v| v >= 0.0).count();
    let nonpos = r.iter().filter(|&&v| v <= 0.0).count();
    let (mut l_pos, mut l_neg) = (0, 0);
    let mut depth = nonneg.min(nonpos);
    for (k, &i) in order.iter().enumerate() {
        if r[i] >= 0.0 {
            l_pos += 1;
        }
        if r[i] <= 0.0 {
            l_neg += 1;
        }
        if k + 1 < order.len() && w.x[order[k + 1]] == w.x[i] {
            continue;
        }
        let r_pos = nonneg - l_pos;
        let r_neg = nonpos - l_neg;
        depth = depth.min(l_pos + r_neg).min(r_pos + l_neg);
    }
    depth
}

/// Deepest line among those through two window points.
pub fn dr_window(w: &Window) -> Option<WindowFit> {
    let n = w.len();
    if n < 2 {
        return None;
    }
    let mut best: Option<(usize, f64, Vec<f64>)> = None;
    for i in 0..n {
        for j in i + 1..n {
            let slope = (w.y[j] - w.y[i]) / (w.x[j] - w.x[i]);
            let beta = vec![w.y[i] - slope * w.x[i], slope];
            let depth = rdepth(w, &beta);
            let abs_res: Vec<f64> = w.residuals(&beta).iter().map(|r| r.abs()).collect();
            let med = median(&abs_res).unwrap();
            let wins = match &best {
                None => true,
                Some((bd, bm, bb)) => {
                    let tol = 1e-12 * (1.0 + bm.abs());
                    depth > *bd
                        || (depth == *bd
                            && (med < *bm - tol
                                || (med <= *bm + tol && lex_less(&beta, bb))))
                }
            };
            if wins {
                best = Some((depth, med, beta));
            }
        }
    }
    best.map(|(_, _, beta)| WindowFit::new(Method::Dr, beta))
}

/// Fits `method` on the window; `None` when there are too few points.
pub fn fit_window(w: &Window, method: Method, degree: usize) -> Option<WindowFit> {
    match method {
        Method::Med => med_window(w),
        Method::Rm => rm_window(w),
        Method::Lms => lms_window(w, degree),
        Method::Lts => lts_window(w, degree, None),
        Method::Lqd => lqd_window(w),
        Method::Dr => dr_window(w),
    }
}
