//! Power-law fits in log-log space and curve crossings.

use std::ops::RangeInclusive;

use crate::dynamics::DecayCurve;
use crate::perturbation::GammaSeries;
use crate::{Error, Result};

/// Least-squares fit `y = amplitude * x^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub amplitude: f64,
    /// First and last abscissa used.
    pub window: (f64, f64),
    /// Root-mean-square residual of `ln y`.
    pub residual: f64,
    pub n_points: usize,
}

/// Ordinary least squares on `(ln x, ln y)` over the inclusive index window.
pub fn fit_power_law(xs: &[f64], ys: &[f64], window: RangeInclusive<usize>) -> Result<PowerLawFit> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            got: ys.len(),
        });
    }
    let (lo, hi) = (*window.start(), *window.end());
    if lo > hi || hi >= xs.len() {
        return Err(Error::InvalidWindow(format!(
            "index window {lo}..={hi} outside 0..{}",
            xs.len()
        )));
    }
    let count = hi - lo + 1;
    if count < 3 {
        return Err(Error::TooFewPoints(count));
    }
    let mut lx = Vec::with_capacity(count);
    let mut ly = Vec::with_capacity(count);
    for i in lo..=hi {
        if !(xs[i] > 0.0 && ys[i] > 0.0) {
            return Err(Error::NonPositiveData { index: i });
        }
        lx.push(xs[i].ln());
        ly.push(ys[i].ln());
    }
    let nf = count as f64;
    let mx = lx.iter().sum::<f64>() / nf;
    let my = ly.iter().sum::<f64>() / nf;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidWindow("abscissae are all equal".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Ok(PowerLawFit {
        exponent: slope,
        amplitude: intercept.exp(),
        window: (xs[lo], xs[hi]),
        residual: (rss / nf).sqrt(),
        n_points: count,
    })
}

/// Default small-`l` window `[2, max(4, N / 10)]`.
pub fn default_mu_window(n: usize) -> (usize, usize) {
    (2, (n / 10).max(4))
}

/// Fit `gamma_l ~ l^mu` for `l` in the inclusive 1-based window.
pub fn fit_mu(series: &GammaSeries, l_lo: usize, l_hi: usize) -> Result<PowerLawFit> {
    let n = series.len();
    if l_lo == 0 || l_hi > n || l_lo > l_hi {
        return Err(Error::InvalidWindow(format!(
            "mode window {l_lo}..={l_hi} outside 1..={n}"
        )));
    }
    let ls: Vec<f64> = (1..=n).map(|l| l as f64).collect();
    fit_power_law(&ls, series.gammas(), l_lo - 1..=l_hi - 1)
}

/// Fit `Pi(t) ~ t^s` over grid points with `t_lo <= t <= t_hi`.
pub fn fit_decay_exponent(curve: &DecayCurve, t_lo: f64, t_hi: f64) -> Result<PowerLawFit> {
    let ts = curve.grid.points();
    let Some(lo) = ts.iter().position(|&t| t >= t_lo) else {
        return Err(Error::InvalidWindow(format!("no grid point at or after {t_lo}")));
    };
    let Some(hi) = ts.iter().rposition(|&t| t <= t_hi) else {
        return Err(Error::InvalidWindow(format!("no grid point at or before {t_hi}")));
    };
    if hi < lo {
        return Err(Error::InvalidWindow(format!("empty time window [{t_lo}, {t_hi}]")));
    }
    fit_power_law(ts, &curve.values, lo..=hi)
}

/// Late-time level of a curve: mean of its last five samples.
pub fn plateau_estimate(curve: &DecayCurve) -> f64 {
    let v = &curve.values;
    let tail = &v[v.len().saturating_sub(5)..];
    tail.iter().sum::<f64>() / tail.len() as f64
}

/// Intermediate time window: times whose values lie in `[10 * floor, 0.5]`.
pub fn intermediate_window(curve: &DecayCurve) -> Result<(f64, f64)> {
    let floor = plateau_estimate(curve);
    let (lo_v, hi_v) = (10.0 * floor, 0.5);
    if lo_v >= hi_v {
        return Err(Error::InvalidWindow(format!(
            "curve does not decay far enough (plateau {floor:.3e})"
        )));
    }
    let inside: Vec<f64> = curve
        .grid
        .points()
        .iter()
        .zip(&curve.values)
        .filter(|(_, v)| (lo_v..=hi_v).contains(*v))
        .map(|(t, _)| *t)
        .collect();
    match (inside.first(), inside.last()) {
        (Some(&a), Some(&b)) if b > a => Ok((a, b)),
        _ => Err(Error::InvalidWindow("no intermediate regime on this grid".into())),
    }
}

/// First time where `a - b` changes sign, interpolated linearly in
/// `(ln t, a - b)` between the bracketing samples.
pub fn find_crossing(a: &DecayCurve, b: &DecayCurve) -> Result<Option<f64>> {
    if a.grid.points() != b.grid.points() {
        return Err(Error::GridMismatch);
    }
    let ts = a.grid.points();
    let mut last: Option<(usize, f64)> = None;
    for (i, (x, y)) in a.values.iter().zip(&b.values).enumerate() {
        let d = x - y;
        if d == 0.0 {
            continue;
        }
        if let Some((j, dj)) = last {
            if (dj > 0.0) != (d > 0.0) {
                let frac = dj / (dj - d);
                let (t0, t1) = (ts[j], ts[i]);
                let t = if t0 > 0.0 {
                    (t0.ln() + frac * (t1.ln() - t0.ln())).exp()
                } else {
                    t0 + frac * (t1 - t0)
                };
                return Ok(Some(t));
            }
        }
        last = Some((i, d));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{CurveLabel, Spacing, TimeGrid};
    use proptest::prelude::*;

    fn curve(grid: &TimeGrid, f: impl Fn(f64) -> f64) -> DecayCurve {
        DecayCurve {
            grid: grid.clone(),
            values: grid.points().iter().map(|&t| f(t)).collect(),
            label: CurveLabel::QuantumExact,
            config: None,
        }
    }

    #[test]
    fn exact_power_law() {
        let xs: Vec<f64> = (1..=20).map(|i| i as f64 * 0.5).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x * x).collect();
        let f = fit_power_law(&xs, &ys, 0..=19).unwrap();
        assert!((f.exponent - 2.0).abs() < 1e-12);
        assert!((f.amplitude - 3.0).abs() < 1e-11);
        assert!(f.residual <= 1e-12);
        assert_eq!(f.n_points, 20);
        assert_eq!(f.window, (0.5, 10.0));
    }

    #[test]
    fn fit_errors() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [1.0, -2.0, 3.0, 4.0];
        assert_eq!(fit_power_law(&xs, &ys, 0..=1), Err(Error::TooFewPoints(2)));
        assert_eq!(
            fit_power_law(&xs, &ys, 0..=3),
            Err(Error::NonPositiveData { index: 1 })
        );
        assert!(fit_power_law(&xs, &ys, 2..=4).is_err());
        assert!(fit_power_law(&xs, &ys[..3], 0..=2).is_err());
        assert!(fit_power_law(&[2.0; 3], &[1.0, 2.0, 3.0], 0..=2).is_err());
    }

    #[test]
    fn mu_window_defaults() {
        assert_eq!(default_mu_window(100), (2, 10));
        assert_eq!(default_mu_window(10), (2, 4));
    }

    #[test]
    fn crossing_of_exponentials() {
        let grid = TimeGrid::log(0.01, 100.0, 200).unwrap();
        let a = curve(&grid, |t| 2.0 * (-t).exp());
        let b = curve(&grid, |t| (-t / 2.0).exp());
        let t = find_crossing(&a, &b).unwrap().unwrap();
        let exact = 2.0 * 2f64.ln();
        let step = 10f64.powf(1.0 / 200.0);
        assert!(t / exact < step && exact / t < step);
        assert_eq!(find_crossing(&b, &a).unwrap(), Some(t));
        assert_eq!(find_crossing(&a, &a).unwrap(), None);
        let other = TimeGrid::log(0.01, 100.0, 100).unwrap();
        assert_eq!(find_crossing(&a, &curve(&other, |t| t)), Err(Error::GridMismatch));
    }

    #[test]
    fn crossing_through_exact_touch() {
        let grid = TimeGrid::new(vec![0.0, 1.0, 2.0, 3.0], Spacing::Linear).unwrap();
        let a = curve(&grid, |t| t);
        let b = curve(&grid, |_| 1.0);
        // equal at t=1, sign change between t=0 and t=2
        let t = find_crossing(&a, &b).unwrap().unwrap();
        assert!((t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decay_fit_and_window() {
        let grid = TimeGrid::log(1.0, 1e6, 50).unwrap();
        let c = curve(&grid, |t| (1.0 + t).powf(-0.5) * (-t / 1e5).exp());
        let (lo, hi) = intermediate_window(&c).unwrap();
        assert!(lo >= 3.0 && hi <= 1e6);
        let f = fit_decay_exponent(&c, 1e2, 1e3).unwrap();
        assert!((f.exponent + 0.5).abs() < 0.01);
        assert!(fit_decay_exponent(&c, 2e6, 3e6).is_err());
        let flat = curve(&grid, |_| 0.9);
        assert!(intermediate_window(&flat).is_err());
    }

    proptest! {
        #[test]
        fn recovers_exponent_on_any_window(p in -3.0f64..3.0, amp in 0.01f64..100.0, lo in 0usize..10, len in 3usize..20) {
            let xs: Vec<f64> = (1..=40).map(|i| i as f64 * 0.37).collect();
            let ys: Vec<f64> = xs.iter().map(|x| amp * x.powf(p)).collect();
            let f = fit_power_law(&xs, &ys, lo..=lo + len - 1).unwrap();
            prop_assert!((f.exponent - p).abs() <= 1e-10);
        }

        #[test]
        fn scale_equivariance(c in 0.001f64..1000.0, seed in 0u64..1000) {
            let xs: Vec<f64> = (1..=15).map(|i| i as f64).collect();
            let ys: Vec<f64> = xs.iter().enumerate()
                .map(|(i, x)| x.powf(1.3) * (1.0 + 0.1 * (((i as u64 * 7919 + seed) % 13) as f64 / 13.0)))
                .collect();
            let scaled: Vec<f64> = ys.iter().map(|y| c * y).collect();
            let a = fit_power_law(&xs, &ys, 0..=14).unwrap();
            let b = fit_power_law(&xs, &scaled, 0..=14).unwrap();
            prop_assert!((a.exponent - b.exponent).abs() <= 1e-12);
            prop_assert!((b.amplitude / a.amplitude / c - 1.0).abs() <= 1e-10);
        }

        #[test]
        fn crossing_is_antisymmetric(r in 0.1f64..5.0, s in 1.1f64..4.0) {
            let grid = TimeGrid::log(0.01, 100.0, 40).unwrap();
            let a = curve(&grid, |t| s * (-r * t).exp());
            let b = curve(&grid, |t| (-r * t / s).exp());
            prop_assert_eq!(find_crossing(&a, &b).unwrap(), find_crossing(&b, &a).unwrap());
        }
    }
}
