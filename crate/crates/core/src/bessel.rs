//! Exponentially scaled modified Bessel function `exp(-x) I0(x)`.

use std::f64::consts::PI;

/// Below this argument the power series is used, above it the asymptotic
/// expansion.
pub const SERIES_LIMIT: f64 = 15.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BesselMethod {
    /// Power series for small arguments, asymptotic expansion beyond.
    #[default]
    SeriesAsymptotic,
    /// Direct quadrature of the integral representation.
    Quadrature,
}

/// `exp(-x) I0(x)` for `x >= 0`.
pub fn i0_scaled(x: f64) -> f64 {
    i0_scaled_with(x, BesselMethod::SeriesAsymptotic)
}

pub fn i0_scaled_with(x: f64, method: BesselMethod) -> f64 {
    let x = x.abs();
    match method {
        BesselMethod::SeriesAsymptotic if x <= SERIES_LIMIT => (-x).exp() * i0_series(x),
        BesselMethod::SeriesAsymptotic => i0_scaled_asymptotic(x),
        BesselMethod::Quadrature => i0_scaled_quadrature(x),
    }
}

/// `I0(x) = sum_k (x^2/4)^k / (k!)^2`.
fn i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > 1e-17 * sum {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}

/// `exp(-x) I0(x) ~ (2 pi x)^(-1/2) sum_k [(2k-1)!!]^2 / (k! (8x)^k)`,
/// truncated at the smallest term.
fn i0_scaled_asymptotic(x: f64) -> f64 {
    let mut term = 1.0f64;
    let mut sum = 1.0;
    let mut k = 1.0f64;
    loop {
        let r = (2.0 * k - 1.0).powi(2) / (8.0 * k * x);
        if r >= 1.0 {
            break;
        }
        term *= r;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
        k += 1.0;
    }
    sum / (2.0 * PI * x).sqrt()
}

/// `(1/pi) int_0^pi exp(-2x sin^2(u/2)) du` by the trapezoid rule with
/// interval doubling. The range is cut where the integrand drops below
/// `exp(-745)`; the integrand and all its derivatives vanish there and at
/// `u = 0` it is even, so the rule converges geometrically.
pub fn i0_scaled_quadrature(x: f64) -> f64 {
    let x = x.abs();
    let cut = 745.0 / (2.0 * x);
    let upper = if cut >= 1.0 { PI } else { 2.0 * cut.sqrt().asin() };
    let f = |u: f64| (-2.0 * x * (0.5 * u).sin().powi(2)).exp();
    let mut intervals = 16usize;
    let mut h = upper / intervals as f64;
    let mut sum = 0.5 * (f(0.0) + f(upper)) + (1..intervals).map(|i| f(i as f64 * h)).sum::<f64>();
    let mut estimate = sum * h / PI;
    loop {
        h *= 0.5;
        sum += (0..intervals).map(|i| f((2 * i + 1) as f64 * h)).sum::<f64>();
        intervals *= 2;
        let next = sum * h / PI;
        let converged = (next - estimate).abs() <= 1e-14 * next;
        estimate = next;
        if (converged && intervals >= 64) || intervals >= 1 << 22 {
            return estimate;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(i0_scaled(0.0), 1.0);
        // I0(1) = 1.2660658777520082
        assert!((i0_scaled(1.0) * 1f64.exp() - 1.2660658777520082).abs() < 1e-15);
        // I0(10) = 2815.716628466254
        assert!((i0_scaled(10.0) * 10f64.exp() / 2815.716628466254 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn branches_meet_at_switch() {
        let below = (-SERIES_LIMIT).exp() * i0_series(SERIES_LIMIT);
        let above = i0_scaled_asymptotic(SERIES_LIMIT);
        assert!((below / above - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadrature_agrees() {
        for x in [1e-3, 0.5, 3.0, 14.9, 15.1, 80.0, 1e3, 1e5] {
            let a = i0_scaled(x);
            let b = i0_scaled_with(x, BesselMethod::Quadrature);
            assert!((a / b - 1.0).abs() < 1e-12, "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn large_argument_limit() {
        let x = 1e6;
        assert!((i0_scaled(x) * (2.0 * PI * x).sqrt() - 1.0).abs() < 1e-6);
    }
}
