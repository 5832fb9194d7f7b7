use proptest::prelude::*;

use trendcycle::evaluation::turning_points;
use trendcycle::filters::{apply_filter_set, musgrave_filter_set, MovingAverage};
use trendcycle::inference::{sigma2_hat, trace_delta2_fast, Sigma2Form};
use trendcycle::io::{read_series, write_series, CsvOptions};
use trendcycle::nonlinear::{fit_window, lms_objective, lts_coverage, lts_objective, Method, Window};
use trendcycle::robust_ma::{OutlierSpec, RobustMa};
use trendcycle::{Period, TimeSeries};

fn start() -> Period {
    Period::new(2015, 1).unwrap()
}

fn series(values: Vec<f64>) -> TimeSeries {
    TimeSeries::new(start(), values).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn dense_trace2(theta: &MovingAverage, n: usize) -> f64 {
    let (p, f) = (theta.lower(), theta.upper());
    let rows: Vec<Vec<f64>> = (p..n - f)
        .map(|t| {
            let mut r = vec![0.0; n];
            r[t] += 1.0;
            for (j, w) in theta.iter() {
                r[(t as isize + j) as usize] -= w;
            }
            r
        })
        .collect();
    let mut total = 0.0;
    for a in &rows {
        for b in &rows {
            let g: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            total += g * g;
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn linear_filters_are_translation_equivariant(
        y in prop::collection::vec(-50.0..50.0f64, 30..60),
        c in -1e3..1e3f64,
    ) {
        let fs = musgrave_filter_set(6, 3.5).unwrap();
        let a = apply_filter_set(&series(y.clone()), &fs).unwrap();
        let b = apply_filter_set(&series(y.iter().map(|v| v + c).collect()), &fs).unwrap();
        for (u, v) in a.values.iter().zip(&b.values) {
            prop_assert!(close(u + c, *v, 1e-10));
        }
    }

    #[test]
    fn fast_trace_matches_dense(
        p in 0usize..5,
        f in 0usize..5,
        w in prop::collection::vec(-1.0..1.0f64, 9),
        n in 20usize..60,
    ) {
        prop_assume!(p + f >= 1);
        let theta = MovingAverage::new(p, f, w[..p + f + 1].to_vec()).unwrap();
        let fast = trace_delta2_fast(&theta, n).unwrap();
        let dense = dense_trace2(&theta, n);
        prop_assert!((fast - dense).abs() <= 1e-8 * dense.abs().max(1e-12));
    }

    #[test]
    fn sigma2_ignores_cubics_and_scales_quadratically(
        e in prop::collection::vec(-3.0..3.0f64, 40),
        c in prop::array::uniform4(-1.0..1.0f64),
        a in 0.1..10.0f64,
    ) {
        let fs = musgrave_filter_set(6, 3.5).unwrap();
        let theta = fs.symmetric();
        let base = sigma2_hat(&series(e.clone()), theta, Sigma2Form::TraceDelta).unwrap();
        let shifted: Vec<f64> = e
            .iter()
            .enumerate()
            .map(|(t, v)| {
                let x = t as f64 / 10.0;
                v + c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x
            })
            .collect();
        let moved = sigma2_hat(&series(shifted), theta, Sigma2Form::TraceDelta).unwrap();
        prop_assert!(close(base, moved, 1e-8));
        let scaled = sigma2_hat(&series(e.iter().map(|v| a * v).collect()), theta, Sigma2Form::TraceDelta).unwrap();
        prop_assert!(close(a * a * base, scaled, 1e-10));
    }

    #[test]
    fn turning_points_survive_affine_maps(
        x in prop::collection::vec(-10.0..10.0f64, 5..40),
        a in 0.1..5.0f64,
        b in -100.0..100.0f64,
    ) {
        // Keep values on a grid so the affine map cannot create ties.
        let x: Vec<f64> = x.iter().map(|v| v.round()).collect();
        let y: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        prop_assert_eq!(turning_points(start(), &x), turning_points(start(), &y));
    }

    #[test]
    fn window_fits_are_regression_equivariant(
        y in prop::collection::vec(-20.0..20.0f64, 13),
        a in -50.0..50.0f64,
        b in -3.0..3.0f64,
        s in 0.5..4.0f64,
    ) {
        let w = Window::centred(&y);
        let moved: Vec<f64> = w.x.iter().zip(&y).map(|(x, v)| s * v + a + b * x).collect();
        let w2 = Window::centred(&moved);
        for m in [Method::Rm, Method::Lms, Method::Lts, Method::Lqd, Method::Dr] {
            let f1 = fit_window(&w, m, 1).unwrap();
            let f2 = fit_window(&w2, m, 1).unwrap();
            prop_assert!(close(s * f1.level() + a, f2.level(), 1e-8), "{} level", m);
            prop_assert!(close(s * f1.slope() + b, f2.slope(), 1e-8), "{} slope", m);
        }
        let m1 = fit_window(&w, Method::Med, 0).unwrap().level();
        let shifted: Vec<f64> = y.iter().map(|v| s * v + a).collect();
        let m2 = fit_window(&Window::centred(&shifted), Method::Med, 0).unwrap().level();
        prop_assert!(close(s * m1 + a, m2, 1e-10));
    }

    #[test]
    fn lms_and_lts_beat_random_candidates(
        y in prop::collection::vec(-20.0..20.0f64, 13),
        cands in prop::collection::vec((-30.0..30.0f64, -5.0..5.0f64), 200),
    ) {
        let w = Window::centred(&y);
        let lms = fit_window(&w, Method::Lms, 1).unwrap();
        let lts = fit_window(&w, Method::Lts, 1).unwrap();
        let best_lms = lms_objective(&w, &lms.beta);
        let c = lts_coverage(13, 1);
        let best_lts = lts_objective(&w, &lts.beta, c);
        for (a, b) in cands {
            prop_assert!(lms_objective(&w, &[a, b]) >= best_lms - 1e-9);
            prop_assert!(lts_objective(&w, &[a, b], c) >= best_lts - 1e-9);
        }
    }

    #[test]
    fn robust_ma_ignores_the_size_of_an_ao(
        y in prop::collection::vec(90.0..110.0f64, 40),
        at in 0usize..40,
        size in -50.0..50.0f64,
    ) {
        let spec = OutlierSpec::new(trendcycle::robust_ma::OutlierKind::Ao, start().offset(at as i64));
        let model = RobustMa::new(6, 3.5).unwrap();
        let (a, plan) = model.apply(&series(y.clone()), &[spec]).unwrap();
        let mut z = y;
        z[at] += size;
        let (b, _) = model.apply(&series(z), &[spec]).unwrap();
        for (t, (u, v)) in a.values.iter().zip(&b.values).enumerate() {
            if !plan.entries[t].source.is_fallback() {
                prop_assert!(close(*u, *v, 1e-9), "t={}", t);
            }
        }
    }

    #[test]
    fn csv_round_trip(y in prop::collection::vec(prop::num::f64::NORMAL, 1..30)) {
        let s = series(y);
        let mut buf = Vec::new();
        write_series(&mut buf, &s).unwrap();
        let back = read_series(buf.as_slice(), &CsvOptions::default()).unwrap();
        prop_assert_eq!(back, s);
    }
}
