//! Transition probabilities and mean survival curves.
//!
//! Everything here is evaluated from spectra. The matrix-exponential
//! propagators at the bottom are independent oracles for tests and
//! cross-checks.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::expm::expm;
use crate::model::{check_node, ChainConfig, DenseOperator};
use crate::spectral::{ClassicalSpectrum, QuantumSpectrum};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// Strictly increasing, finite, non-negative sample times.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    points: Vec<f64>,
    spacing: Spacing,
}

impl TimeGrid {
    pub fn new(points: Vec<f64>, spacing: Spacing) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGrid("empty".into()));
        }
        if points.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::InvalidGrid("times must be finite and >= 0".into()));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("times must be strictly increasing".into()));
        }
        Ok(Self { points, spacing })
    }

    /// Log-spaced grid from `t_min` to `t_max` (both included) with
    /// `per_decade` intervals per factor of ten.
    pub fn log(t_min: f64, t_max: f64, per_decade: usize) -> Result<Self> {
        if !(t_min > 0.0 && t_max > t_min && per_decade > 0) {
            return Err(Error::InvalidGrid(format!(
                "log grid needs 0 < t_min < t_max, got [{t_min}, {t_max}]"
            )));
        }
        let (lo, hi) = (t_min.log10(), t_max.log10());
        let intervals = (((hi - lo) * per_decade as f64).round() as usize).max(1);
        let mut points: Vec<f64> = (0..=intervals)
            .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / intervals as f64))
            .collect();
        points[0] = t_min;
        points[intervals] = t_max;
        Self::new(points, Spacing::Log)
    }

    pub fn linear(t_min: f64, t_max: f64, n_points: usize) -> Result<Self> {
        if !(t_max > t_min && n_points >= 2) {
            return Err(Error::InvalidGrid("linear grid needs t_max > t_min and >= 2 points".into()));
        }
        let step = (t_max - t_min) / (n_points - 1) as f64;
        let mut points: Vec<f64> = (0..n_points).map(|i| t_min + step * i as f64).collect();
        points[n_points - 1] = t_max;
        Self::new(points, Spacing::Linear)
    }

    /// Default log grid, 400 points per decade starting at `0.1`: up to
    /// `1e7` for weak traps (`gamma < 0.1`) and `1e5` otherwise.
    pub fn default_for_gamma(gamma: f64) -> Self {
        let t_max = if gamma < 0.1 { 1e7 } else { 1e5 };
        Self::log(0.1, t_max, 400).expect("static grid bounds are valid")
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveLabel {
    QuantumExact,
    QuantumGammaSum,
    ClassicalExact,
    ClassicalDominant,
    ContinuumBessel,
}

impl CurveLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveLabel::QuantumExact => "QUANTUM_EXACT",
            CurveLabel::QuantumGammaSum => "QUANTUM_GAMMA_SUM",
            CurveLabel::ClassicalExact => "CLASSICAL_EXACT",
            CurveLabel::ClassicalDominant => "CLASSICAL_DOMINANT",
            CurveLabel::ContinuumBessel => "CONTINUUM_BESSEL",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            CurveLabel::QuantumExact,
            CurveLabel::QuantumGammaSum,
            CurveLabel::ClassicalExact,
            CurveLabel::ClassicalDominant,
            CurveLabel::ContinuumBessel,
        ]
        .into_iter()
        .find(|l| l.as_str() == s)
    }
}

/// A survival curve sampled on a grid. Values are stored unclipped.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayCurve {
    pub grid: TimeGrid,
    pub values: Vec<f64>,
    pub label: CurveLabel,
    /// `None` for the continuum curve, which has no finite chain.
    pub config: Option<ChainConfig>,
}

impl DecayCurve {
    /// Values with tiny negative round-off mapped to zero, for reporting.
    pub fn clipped_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.max(0.0)).collect()
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

fn phases(spec: &QuantumSpectrum, t: f64) -> Vec<Complex64> {
    spec.eigenvalues()
        .iter()
        .map(|e| (Complex64::new(0.0, -t) * e).exp())
        .collect()
}

/// Amplitudes `<k|exp(-iHt)|j>` for all `k`, from the spectrum.
pub fn quantum_amplitudes(spec: &QuantumSpectrum, j: usize, t: f64) -> Result<Vec<Complex64>> {
    let n = spec.dim();
    let j = check_node(j, n)?;
    let v = spec.right_vectors();
    let z = phases(spec, t);
    Ok((0..n)
        .map(|k| (0..n).map(|l| z[l] * v[(k, l)] * v[(j, l)]).sum())
        .collect())
}

/// `pi_kj(t)`.
pub fn quantum_transition(spec: &QuantumSpectrum, j: usize, k: usize, t: f64) -> Result<f64> {
    let n = spec.dim();
    let (j, k) = (check_node(j, n)?, check_node(k, n)?);
    let v = spec.right_vectors();
    let z = phases(spec, t);
    let a: Complex64 = (0..n).map(|l| z[l] * v[(k, l)] * v[(j, l)]).sum();
    Ok(a.norm_sqr())
}

/// `sum_k pi_kj(t)` over every node, traps included.
pub fn total_norm(spec: &QuantumSpectrum, j: usize, t: f64) -> Result<f64> {
    Ok(quantum_amplitudes(spec, j, t)?.iter().map(|a| a.norm_sqr()).sum())
}

/// Amplitudes `<k|exp(Tt)|j>` for all `k`, from the spectrum.
pub fn classical_column(spec: &ClassicalSpectrum, j: usize, t: f64) -> Result<Vec<f64>> {
    let n = spec.dim();
    let j = check_node(j, n)?;
    let v = spec.vectors();
    let w: Vec<f64> = spec.lambdas().iter().map(|l| (-l * t).exp()).collect();
    Ok((0..n)
        .map(|k| (0..n).map(|l| w[l] * v[(k, l)] * v[(j, l)]).sum())
        .collect())
}

/// `p_kj(t)`, unclipped.
pub fn classical_transition(spec: &ClassicalSpectrum, j: usize, k: usize, t: f64) -> Result<f64> {
    let n = spec.dim();
    let (j, k) = (check_node(j, n)?, check_node(k, n)?);
    let v = spec.vectors();
    Ok(spec
        .lambdas()
        .iter()
        .enumerate()
        .map(|(l, lam)| (-lam * t).exp() * v[(k, l)] * v[(j, l)])
        .sum())
}

fn free_count(cfg: &ChainConfig) -> Result<f64> {
    let free = cfg.n_nodes() - cfg.traps().len();
    if free == 0 {
        return Err(Error::InvalidConfig("no free nodes".into()));
    }
    Ok(free as f64)
}

/// Mean quantum survival probability averaged over free start and end
/// nodes.
///
/// Uses `Pi(t) = sum_{l,l'} z_l conj(z_l') A_{ll'}^2 / (N - M)` with
/// `z_l = exp(-i E_l t)` and the restricted Gram matrix
/// `A_{ll'} = sum_{k free} <k|Psi_l> conj(<k|Psi_l'>)`, so each time point
/// costs `O(N^2)`.
pub fn mean_survival_quantum(
    spec: &QuantumSpectrum,
    cfg: &ChainConfig,
    grid: &TimeGrid,
) -> Result<DecayCurve> {
    let n = spec.dim();
    check_dim(cfg.n_nodes(), n)?;
    let norm = free_count(cfg)?;
    let v = spec.right_vectors();
    let free: Vec<usize> = cfg.free_nodes().iter().map(|j| j - 1).collect();
    let mut w = DMatrix::<Complex64>::zeros(n, n);
    for l in 0..n {
        for lp in 0..n {
            let a: Complex64 = free.iter().map(|&k| v[(k, l)] * v[(k, lp)].conj()).sum();
            w[(l, lp)] = a * a;
        }
    }
    let values = grid
        .points()
        .iter()
        .map(|&t| {
            let z = phases(spec, t);
            let mut acc = 0.0;
            for l in 0..n {
                let mut row = Complex64::new(0.0, 0.0);
                for lp in 0..n {
                    row += w[(l, lp)] * z[lp].conj();
                }
                acc += (z[l] * row).re;
            }
            acc / norm
        })
        .collect();
    Ok(DecayCurve {
        grid: grid.clone(),
        values,
        label: CurveLabel::QuantumExact,
        config: Some(cfg.clone()),
    })
}

/// `sum_l exp(-2 gamma_l t) / (N - M)`; equals `N / (N - M)` at `t = 0`.
pub fn mean_survival_quantum_gamma_sum(
    spec: &QuantumSpectrum,
    cfg: &ChainConfig,
    grid: &TimeGrid,
) -> Result<DecayCurve> {
    check_dim(cfg.n_nodes(), spec.dim())?;
    let norm = free_count(cfg)?;
    let gammas = spec.gammas();
    let values = grid
        .points()
        .iter()
        .map(|&t| gammas.iter().map(|g| (-2.0 * g * t).exp()).sum::<f64>() / norm)
        .collect();
    Ok(DecayCurve {
        grid: grid.clone(),
        values,
        label: CurveLabel::QuantumGammaSum,
        config: Some(cfg.clone()),
    })
}

/// Per-mode weights `|sum_{k free} <k|Phi_l>|^2`.
pub fn classical_weights(spec: &ClassicalSpectrum, cfg: &ChainConfig) -> Result<Vec<f64>> {
    check_dim(cfg.n_nodes(), spec.dim())?;
    let free = cfg.free_nodes();
    let v = spec.vectors();
    Ok((0..spec.dim())
        .map(|l| {
            let s: f64 = free.iter().map(|&k| v[(k - 1, l)]).sum();
            s * s
        })
        .collect())
}

/// Mean classical survival probability over free start and end nodes.
pub fn mean_survival_classical(
    spec: &ClassicalSpectrum,
    cfg: &ChainConfig,
    grid: &TimeGrid,
) -> Result<DecayCurve> {
    let weights = classical_weights(spec, cfg)?;
    let norm = free_count(cfg)?;
    let values = grid
        .points()
        .iter()
        .map(|&t| {
            spec.lambdas()
                .iter()
                .zip(&weights)
                .map(|(lam, w)| (-lam * t).exp() * w)
                .sum::<f64>()
                / norm
        })
        .collect();
    Ok(DecayCurve {
        grid: grid.clone(),
        values,
        label: CurveLabel::ClassicalExact,
        config: Some(cfg.clone()),
    })
}

/// Only the slowest classical mode.
pub fn mean_survival_classical_dominant(
    spec: &ClassicalSpectrum,
    cfg: &ChainConfig,
    grid: &TimeGrid,
) -> Result<DecayCurve> {
    let weights = classical_weights(spec, cfg)?;
    let norm = free_count(cfg)?;
    let (idx, lam) = spec.dominant();
    let values = grid
        .points()
        .iter()
        .map(|&t| (-lam * t).exp() * weights[idx] / norm)
        .collect();
    Ok(DecayCurve {
        grid: grid.clone(),
        values,
        label: CurveLabel::ClassicalDominant,
        config: Some(cfg.clone()),
    })
}

/// Column `j` of `exp(-iHt)` by scaling and squaring.
pub fn propagate_oracle(h: &DenseOperator, j: usize, t: f64) -> Result<Vec<Complex64>> {
    let j = check_node(j, h.dim())?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidArgument(format!("time must be finite and >= 0, got {t}")));
    }
    let a = h.matrix() * Complex64::new(0.0, -t);
    let u = expm(&a)?;
    Ok(u.column(j).iter().copied().collect())
}

/// Column `j` of `exp(Tt)` by scaling and squaring.
pub fn propagate_classical_oracle(t_op: &DenseOperator, j: usize, t: f64) -> Result<Vec<f64>> {
    let j = check_node(j, t_op.dim())?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidArgument(format!("time must be finite and >= 0, got {t}")));
    }
    let u = expm(&(t_op.real_matrix() * t))?;
    Ok(u.column(j).iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_classical_transfer, build_quantum_hamiltonian, Exponent};
    use crate::spectral::{decompose_classical, decompose_quantum};

    fn quantum(cfg: &ChainConfig) -> QuantumSpectrum {
        decompose_quantum(&build_quantum_hamiltonian(cfg)).unwrap()
    }

    fn classical(cfg: &ChainConfig) -> ClassicalSpectrum {
        decompose_classical(&build_classical_transfer(cfg)).unwrap()
    }

    #[test]
    fn grids() {
        let g = TimeGrid::log(0.1, 1e7, 400).unwrap();
        assert_eq!(g.len(), 3201);
        assert_eq!(g.points()[0], 0.1);
        assert_eq!(*g.points().last().unwrap(), 1e7);
        assert_eq!(TimeGrid::default_for_gamma(1.0).points().last(), Some(&1e5));
        assert!(TimeGrid::new(vec![], Spacing::Log).is_err());
        assert!(TimeGrid::new(vec![1.0, 1.0], Spacing::Log).is_err());
        assert!(TimeGrid::new(vec![f64::NAN], Spacing::Log).is_err());
        let l = TimeGrid::linear(0.0, 1.0, 11).unwrap();
        assert_eq!(l.points()[10], 1.0);
        assert_eq!(l.spacing(), Spacing::Linear);
    }

    #[test]
    fn transition_at_zero_is_identity() {
        let c = ChainConfig::end_traps(12, Exponent::Finite(3.0), 0.4).unwrap();
        let q = quantum(&c);
        let cl = classical(&c);
        for j in 1..=12 {
            for k in 1..=12 {
                let want = if j == k { 1.0 } else { 0.0 };
                assert!((quantum_transition(&q, j, k, 0.0).unwrap() - want).abs() < 1e-12);
                assert!((classical_transition(&cl, j, k, 0.0).unwrap() - want).abs() < 1e-12);
            }
        }
        assert!(quantum_transition(&q, 13, 1, 0.0).is_err());
        assert!(classical_transition(&cl, 1, 0, 0.0).is_err());
    }

    #[test]
    fn two_level_rabi_and_relaxation() {
        let c = ChainConfig::new(2, Exponent::Infinite, 0.0, &[]).unwrap();
        let q = quantum(&c);
        let cl = classical(&c);
        for t in [0.0, 0.3, 1.0, 2.5, 17.0] {
            let s: f64 = t;
            assert!((quantum_transition(&q, 1, 2, t).unwrap() - s.sin().powi(2)).abs() < 1e-12);
            let p = (1.0 - (-2.0 * t).exp()) / 2.0;
            assert!((classical_transition(&cl, 1, 2, t).unwrap() - p).abs() < 1e-12);
        }
    }

    #[test]
    fn trap_free_conservation() {
        let c = ChainConfig::new(15, Exponent::Finite(2.0), 0.0, &[]).unwrap();
        let q = quantum(&c);
        let cl = classical(&c);
        for t in [0.5, 3.0, 40.0] {
            assert!((total_norm(&q, 4, t).unwrap() - 1.0).abs() < 1e-12);
            let s: f64 = (1..=15).map(|k| classical_transition(&cl, 4, k, t).unwrap()).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        let late = classical_transition(&cl, 1, 15, 1e3).unwrap();
        assert!((late - 1.0 / 15.0).abs() < 1e-12);

        let grid = TimeGrid::log(0.1, 1e3, 10).unwrap();
        let curve = mean_survival_quantum(&q, &c, &grid).unwrap();
        assert!(curve.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
        let curve = mean_survival_classical(&cl, &c, &grid).unwrap();
        assert!(curve.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn quantum_mean_survival_matches_double_sum() {
        let c = ChainConfig::new(11, Exponent::Finite(2.5), 0.6, &[1, 5]).unwrap();
        let q = quantum(&c);
        let grid = TimeGrid::new(vec![0.0, 0.7, 3.0, 25.0], Spacing::Linear).unwrap();
        let curve = mean_survival_quantum(&q, &c, &grid).unwrap();
        let free = c.free_nodes();
        for (t, v) in grid.points().iter().zip(&curve.values) {
            let mut s = 0.0;
            for &j in &free {
                for &k in &free {
                    s += quantum_transition(&q, j, k, *t).unwrap();
                }
            }
            assert!((s / free.len() as f64 - v).abs() < 1e-12);
        }
        assert!((curve.values[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classical_squared_sum_matches_double_sum() {
        let c = ChainConfig::new(13, Exponent::Finite(3.0), 1.0, &[2, 13]).unwrap();
        let cl = classical(&c);
        let grid = TimeGrid::new(vec![0.0, 1.0, 10.0, 100.0], Spacing::Linear).unwrap();
        let curve = mean_survival_classical(&cl, &c, &grid).unwrap();
        let free = c.free_nodes();
        for (t, v) in grid.points().iter().zip(&curve.values) {
            let mut s = 0.0;
            for &j in &free {
                for &k in &free {
                    s += classical_transition(&cl, j, k, *t).unwrap();
                }
            }
            assert!((s / free.len() as f64 - v).abs() < 1e-12);
        }
        assert!((curve.values[0] - 1.0).abs() < 1e-10);
        let dom = mean_survival_classical_dominant(&cl, &c, &grid).unwrap();
        assert!(dom.values[0] <= 1.0);
    }

    #[test]
    fn gamma_sum_limits() {
        let c = ChainConfig::new(2, Exponent::Infinite, 0.3, &[1]).unwrap();
        let q = quantum(&c);
        let grid = TimeGrid::new(vec![0.0, 2.0], Spacing::Linear).unwrap();
        let curve = mean_survival_quantum_gamma_sum(&q, &c, &grid).unwrap();
        assert!((curve.values[0] - 2.0).abs() < 1e-15);
        let g = q.gammas();
        let want = (-4.0 * g[0]).exp() + (-4.0 * g[1]).exp();
        assert!((curve.values[1] - want).abs() < 1e-15);
    }

    #[test]
    fn oracle_agrees_with_spectrum() {
        let c = ChainConfig::end_traps(9, Exponent::Finite(2.0), 0.5).unwrap();
        let h = build_quantum_hamiltonian(&c);
        let q = quantum(&c);
        for t in [0.0, 0.1, 7.0] {
            let a = propagate_oracle(&h, 3, t).unwrap();
            let b = quantum_amplitudes(&q, 3, t).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).norm() < 1e-10);
            }
        }
        let at0 = propagate_oracle(&h, 3, 0.0).unwrap();
        assert_eq!(at0[2], Complex64::new(1.0, 0.0));
        assert!(propagate_oracle(&h, 3, -1.0).is_err());
        assert!(propagate_oracle(&h, 10, 1.0).is_err());
    }

    #[test]
    fn dimension_checks() {
        let c = ChainConfig::end_traps(6, Exponent::Infinite, 0.5).unwrap();
        let other = ChainConfig::end_traps(7, Exponent::Infinite, 0.5).unwrap();
        let q = quantum(&c);
        let grid = TimeGrid::log(1.0, 10.0, 2).unwrap();
        assert!(mean_survival_quantum(&q, &other, &grid).is_err());
    }
}
