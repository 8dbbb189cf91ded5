//! Closed-form nearest-neighbour spectrum and the first-order expressions
//! built on it: trap-induced decay rates, long-range corrections to the
//! eigenstate overlap with the first node, and the resulting exponent
//! estimates.
//!
//! Mode labels follow `theta_l = pi (N - l) / N`, so `l = N` is the uniform
//! zero-energy state and `l = 1` the highest level. Functions returning
//! per-mode vectors use that order (index `l - 1`); [`GammaSeries`] is always
//! sorted ascending.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::bessel::{i0_scaled_with, BesselMethod};
use crate::dynamics::{CurveLabel, DecayCurve, TimeGrid};
use crate::model::{build_classical_transfer, build_h_nu_full, build_quantum_hamiltonian};
use crate::model::{ChainConfig, DenseOperator, Exponent};
use crate::spectral::{decompose_classical, decompose_quantum};
use crate::{Error, Result};

/// Unperturbed levels closer than this make first-order state corrections
/// undefined.
pub const DEGENERATE_GAP: f64 = 1e-10;

/// Nearest-neighbour chain spectrum in closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct NniAnalytic {
    n_nodes: usize,
    theta: Vec<f64>,
    energies: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl NniAnalytic {
    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    /// `theta_l`, index `l - 1`.
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// `2 - 2 cos theta_l`, index `l - 1`; the last entry is exactly zero.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Column `l - 1` holds `<j|Psi_l^(0)>`.
    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    /// `<1|Psi_l^(0)>` for every mode.
    pub fn first_node_overlaps(&self) -> Vec<f64> {
        self.vectors.row(0).iter().copied().collect()
    }
}

pub fn nni_analytic(n: usize) -> Result<NniAnalytic> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!("need N >= 2, got {n}")));
    }
    let nf = n as f64;
    let theta: Vec<f64> = (1..=n).map(|l| PI * (n - l) as f64 / nf).collect();
    let energies: Vec<f64> = theta
        .iter()
        .map(|&t| if t == 0.0 { 0.0 } else { 2.0 - 2.0 * t.cos() })
        .collect();
    let mut vectors = DMatrix::zeros(n, n);
    let uniform = (1.0 / nf).sqrt();
    let amp = (2.0 / nf).sqrt();
    for (l, &t) in theta.iter().enumerate() {
        for j in 0..n {
            vectors[(j, l)] = if l == n - 1 {
                uniform
            } else {
                amp * ((2 * j + 1) as f64 * t / 2.0).cos()
            };
        }
    }
    Ok(NniAnalytic {
        n_nodes: n,
        theta,
        energies,
        vectors,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaSource {
    ExactDiag,
    FirstOrderNumeric,
    NniAnalytic,
    NnnApprox,
}

/// Decay rates sorted ascending, tagged with how they were obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSeries {
    gammas: Vec<f64>,
    source: GammaSource,
    config: ChainConfig,
}

impl GammaSeries {
    pub fn new(mut gammas: Vec<f64>, source: GammaSource, config: ChainConfig) -> Self {
        gammas.sort_by(f64::total_cmp);
        Self {
            gammas,
            source,
            config,
        }
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn source(&self) -> GammaSource {
        self.source
    }

    pub fn config(&self) -> &ChainConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }
}

/// `gamma_l = Gamma sum_{m in M} |<m|Psi_l>|^2` per column of `states`, in
/// column order.
pub fn first_order_rates(states: &DMatrix<f64>, cfg: &ChainConfig) -> Result<Vec<f64>> {
    if states.nrows() != cfg.n_nodes() || states.ncols() != cfg.n_nodes() {
        return Err(Error::DimensionMismatch {
            expected: cfg.n_nodes(),
            got: states.nrows().max(states.ncols()),
        });
    }
    Ok(states
        .column_iter()
        .map(|c| cfg.gamma() * cfg.traps().iter().map(|&m| c[m - 1].powi(2)).sum::<f64>())
        .collect())
}

/// First-order decay rates from trap-free eigenstates.
pub fn gamma_first_order(states: &DMatrix<f64>, cfg: &ChainConfig) -> Result<GammaSeries> {
    Ok(GammaSeries::new(
        first_order_rates(states, cfg)?,
        GammaSource::FirstOrderNumeric,
        cfg.clone(),
    ))
}

fn require_end_traps(cfg: &ChainConfig) -> Result<()> {
    if cfg.has_end_traps() {
        Ok(())
    } else {
        Err(Error::TrapsNotAtEnds(cfg.traps().to_vec()))
    }
}

/// Closed-form first-order rates with traps at both ends: `2 Gamma / N` for
/// `l = N`, `(2 Gamma / N)(1 + cos theta_l)` otherwise. Mode order.
pub fn nni_end_trap_rates(n: usize, gamma: f64) -> Result<Vec<f64>> {
    let nni = nni_analytic(n)?;
    let base = 2.0 * gamma / n as f64;
    Ok(nni
        .theta
        .iter()
        .enumerate()
        .map(|(l, t)| if l == n - 1 { base } else { base * (1.0 + t.cos()) })
        .collect())
}

pub fn gamma_nni_analytic(cfg: &ChainConfig) -> Result<GammaSeries> {
    require_end_traps(cfg)?;
    Ok(GammaSeries::new(
        nni_end_trap_rates(cfg.n_nodes(), cfg.gamma())?,
        GammaSource::NniAnalytic,
        cfg.clone(),
    ))
}

/// Decay rates from full diagonalisation of `H0 - i Gamma`.
pub fn gamma_exact(cfg: &ChainConfig) -> Result<GammaSeries> {
    let spec = decompose_quantum(&build_quantum_hamiltonian(cfg))?;
    Ok(GammaSeries::new(spec.gammas(), GammaSource::ExactDiag, cfg.clone()))
}

/// Energy-ordered trap-free eigenstates of `H0(nu)` in mode order (highest
/// level first), each signed to overlap positively with its
/// nearest-neighbour counterpart.
pub fn trap_free_states(n: usize, nu: Exponent) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let cfg = ChainConfig::new(n, nu, 0.0, &[])?;
    let spec = decompose_classical(&build_classical_transfer(&cfg))?;
    let nni = nni_analytic(n)?;
    let mut energies = Vec::with_capacity(n);
    let mut vectors = DMatrix::zeros(n, n);
    for l in 0..n {
        // ascending energies; mode l (0-based) is the (n-1-l)-th smallest
        let src = n - 1 - l;
        let mut col = spec.vectors().column(src).into_owned();
        if col.dot(&nni.vectors.column(l)) < 0.0 {
            col.neg_mut();
        }
        energies.push(spec.lambdas()[src]);
        vectors.set_column(l, &col);
    }
    Ok((energies, vectors))
}

/// `<1|Psi_l>` of the exact long-range trap-free states, mode order.
pub fn overlap_exact(cfg: &ChainConfig) -> Result<Vec<f64>> {
    let (_, v) = trap_free_states(cfg.n_nodes(), cfg.nu())?;
    Ok(v.row(0).iter().copied().collect())
}

/// First-order corrected overlaps `<1|Psi_l>` for every mode, for an
/// arbitrary correction operator `h_nu`.
pub fn first_order_overlaps(nni: &NniAnalytic, h_nu: &DenseOperator) -> Result<Vec<f64>> {
    let n = nni.n_nodes;
    if h_nu.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: h_nu.dim(),
        });
    }
    let p = &nni.vectors;
    let coupling = p.transpose() * h_nu.real_matrix() * p;
    (0..n).map(|l| corrected_overlap(nni, &coupling, l)).collect()
}

fn corrected_overlap(nni: &NniAnalytic, coupling: &DMatrix<f64>, l: usize) -> Result<f64> {
    let e = &nni.energies;
    let mut value = nni.vectors[(0, l)];
    for r in 0..nni.n_nodes {
        if r == l {
            continue;
        }
        let gap = e[l] - e[r];
        if gap.abs() < DEGENERATE_GAP {
            return Err(Error::DegenerateGap {
                l: l + 1,
                r: r + 1,
                gap: gap.abs(),
            });
        }
        value += coupling[(r, l)] / gap * nni.vectors[(0, r)];
    }
    Ok(value)
}

/// First-order `<1|Psi_l>` for mode `l` with the exact long-range correction
/// `H0(nu) - H0(inf)`.
pub fn overlap_correction_full(l: usize, cfg: &ChainConfig) -> Result<f64> {
    let n = cfg.n_nodes();
    let idx = crate::model::check_node(l, n)?;
    let nni = nni_analytic(n)?;
    let h_nu = build_h_nu_full(cfg)?.real_matrix();
    let p = &nni.vectors;
    let hp = &h_nu * p.column(idx);
    let mut coupling = DMatrix::zeros(n, n);
    for r in 0..n {
        coupling[(r, idx)] = p.column(r).dot(&hp);
    }
    corrected_overlap(&nni, &coupling, idx)
}

/// All modes of [`overlap_correction_full`].
pub fn overlaps_full(cfg: &ChainConfig) -> Result<Vec<f64>> {
    let nni = nni_analytic(cfg.n_nodes())?;
    first_order_overlaps(&nni, &build_h_nu_full(cfg)?)
}

/// Closed-form overlap with the next-nearest-neighbour correction:
/// `<1|Psi_l^(0)> + 2^-nu sqrt(2/N) sin(2 theta_l) sin(theta_l / 2)`.
pub fn overlap_correction_nnn(l: usize, n: usize, nu: Exponent) -> Result<f64> {
    let nu = nu.finite().ok_or(Error::InfiniteExponent)?;
    let idx = crate::model::check_node(l, n)?;
    let nf = n as f64;
    let theta = PI * (n - l) as f64 / nf;
    let base = if idx == n - 1 {
        (1.0 / nf).sqrt()
    } else {
        (2.0 / nf).sqrt() * (theta / 2.0).cos()
    };
    Ok(base + 2f64.powf(-nu) * (2.0 / nf).sqrt() * (2.0 * theta).sin() * (theta / 2.0).sin())
}

/// `gamma_l^(1) = (8 Gamma / N) cos(theta/2) sin(2 theta) sin(theta/2)`,
/// mode order.
pub fn nnn_first_correction(n: usize, gamma: f64) -> Result<Vec<f64>> {
    let nni = nni_analytic(n)?;
    let c = 8.0 * gamma / n as f64;
    Ok(nni
        .theta
        .iter()
        .map(|&t| c * (t / 2.0).cos() * (2.0 * t).sin() * (t / 2.0).sin())
        .collect())
}

/// `gamma_l^(0) + 2^-nu gamma_l^(1)` in mode order; end traps only.
pub fn nnn_rates(cfg: &ChainConfig) -> Result<Vec<f64>> {
    let nu = cfg.nu().finite().ok_or(Error::InfiniteExponent)?;
    require_end_traps(cfg)?;
    let g0 = nni_end_trap_rates(cfg.n_nodes(), cfg.gamma())?;
    let g1 = nnn_first_correction(cfg.n_nodes(), cfg.gamma())?;
    let s = 2f64.powf(-nu);
    Ok(g0.iter().zip(&g1).map(|(a, b)| a + s * b).collect())
}

pub fn gamma_nnn_expansion(cfg: &ChainConfig) -> Result<GammaSeries> {
    Ok(GammaSeries::new(nnn_rates(cfg)?, GammaSource::NnnApprox, cfg.clone()))
}

/// Local log-slope `[ln g_{l+1} - ln g_l] / [ln(l+1) - ln l]` of a sorted
/// series, `1 <= l < len`.
pub fn mu_local(series: &GammaSeries, l: usize) -> Result<f64> {
    let g = series.gammas();
    if l == 0 || l >= g.len() {
        return Err(Error::InvalidWindow(format!(
            "local exponent needs 1 <= l < {}, got {l}",
            g.len()
        )));
    }
    let (a, b) = (g[l - 1], g[l]);
    if a <= 0.0 {
        return Err(Error::NonPositiveData { index: l });
    }
    if b <= 0.0 {
        return Err(Error::NonPositiveData { index: l + 1 });
    }
    Ok((b.ln() - a.ln()) / (((l + 1) as f64).ln() - (l as f64).ln()))
}

/// Analytic `(mu^(0), mu^(1))` at mode `l` for end traps: the
/// nearest-neighbour local exponent and the coefficient of `2^-nu`.
/// Independent of `Gamma`. Requires `1 <= l < N - 1`.
pub fn mu_terms(n: usize, l: usize) -> Result<(f64, f64)> {
    if l == 0 || l + 1 >= n {
        return Err(Error::InvalidWindow(format!(
            "analytic exponent terms need 1 <= l < {}, got {l}",
            n - 1
        )));
    }
    let g0 = nni_end_trap_rates(n, 1.0)?;
    let g1 = nnn_first_correction(n, 1.0)?;
    let dl = ((l + 1) as f64).ln() - (l as f64).ln();
    let (i, j) = (l - 1, l);
    let mu0 = (g0[j].ln() - g0[i].ln()) / dl;
    let mu1 = (g1[j] / g0[j] - g1[i] / g0[i]) / dl;
    Ok((mu0, mu1))
}

/// Continuum-limit survival `exp(-a t) I0(a t)` with `a = 4 Gamma / N`.
pub fn continuum_survival(a: f64, grid: &TimeGrid, method: BesselMethod) -> Result<DecayCurve> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidArgument(format!("rate must be > 0, got {a}")));
    }
    let values = grid
        .points()
        .iter()
        .map(|&t| i0_scaled_with(a * t, method))
        .collect();
    Ok(DecayCurve {
        grid: grid.clone(),
        values,
        label: CurveLabel::ContinuumBessel,
        config: None,
    })
}

/// `a = 4 Gamma / N`.
pub fn continuum_rate(cfg: &ChainConfig) -> f64 {
    4.0 * cfg.gamma() / cfg.n_nodes() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_h0, build_h_nu_nnn};

    #[test]
    fn two_node_closed_form() {
        let a = nni_analytic(2).unwrap();
        assert!((a.theta()[0] - PI / 2.0).abs() < 1e-15 && a.theta()[1] == 0.0);
        assert!((a.energies()[0] - 2.0).abs() < 1e-15 && a.energies()[1] == 0.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = a.vectors();
        assert!((v[(0, 0)] - s).abs() < 1e-15 && (v[(1, 0)] + s).abs() < 1e-15);
        assert!((v[(0, 1)] - s).abs() < 1e-15 && (v[(1, 1)] - s).abs() < 1e-15);
        assert!(nni_analytic(1).is_err());
    }

    #[test]
    fn analytic_states_diagonalise_nni_chain() {
        for n in [3, 10, 57, 100] {
            let a = nni_analytic(n).unwrap();
            assert_eq!(a.energies()[n - 1], 0.0);
            let v = a.vectors();
            let gram = v.transpose() * v;
            let h = build_h0(&ChainConfig::new(n, Exponent::Infinite, 0.0, &[]).unwrap())
                .real_matrix();
            let d = v.transpose() * h * v;
            for i in 0..n {
                assert!(a.theta()[i] >= 0.0 && a.theta()[i] < PI);
                for j in 0..n {
                    let id = if i == j { 1.0 } else { 0.0 };
                    assert!((gram[(i, j)] - id).abs() < 1e-12);
                    let e = if i == j { a.energies()[i] } else { 0.0 };
                    assert!((d[(i, j)] - e).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn end_trap_symmetry_of_nni_states() {
        let a = nni_analytic(100).unwrap();
        let v = a.vectors();
        for l in 0..100 {
            assert!((v[(0, l)].powi(2) - v[(99, l)].powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn first_order_closed_form_and_completeness() {
        let n = 100;
        let cfg = ChainConfig::end_traps(n, Exponent::Infinite, 0.001).unwrap();
        let a = nni_analytic(n).unwrap();
        let numeric = first_order_rates(a.vectors(), &cfg).unwrap();
        let closed = nni_end_trap_rates(n, 0.001).unwrap();
        for (x, y) in numeric.iter().zip(&closed) {
            assert!((x - y).abs() < 1e-15);
        }
        assert!((closed[n - 1] - 2.0 * 0.001 / n as f64).abs() < 1e-18);
        let total: f64 = numeric.iter().sum();
        assert!((total - 0.002).abs() < 1e-12 * 0.002);
        let series = gamma_first_order(a.vectors(), &cfg).unwrap();
        assert!(series.gammas().windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(series.source(), GammaSource::FirstOrderNumeric);

        let wrong = ChainConfig::end_traps(10, Exponent::Infinite, 0.001).unwrap();
        assert!(first_order_rates(a.vectors(), &wrong).is_err());
    }

    #[test]
    fn overlaps_reduce_to_nni_without_perturbation() {
        let n = 40;
        let nni = nni_analytic(n).unwrap();
        let zero = DenseOperator::from_real(
            &DMatrix::zeros(n, n),
            crate::model::OperatorKind::RealSymmetric,
        )
        .unwrap();
        let o = first_order_overlaps(&nni, &zero).unwrap();
        for (l, v) in o.iter().enumerate() {
            let want = if l == n - 1 {
                (1.0 / n as f64).sqrt()
            } else {
                (2.0 / n as f64).sqrt() * (nni.theta()[l] / 2.0).cos()
            };
            assert!((v - want).abs() < 1e-14);
        }
        // full correction at very large nu is negligible
        let cfg = ChainConfig::new(n, Exponent::Finite(60.0), 0.0, &[]).unwrap();
        let o = overlaps_full(&cfg).unwrap();
        for (a, b) in o.iter().zip(nni.first_node_overlaps()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn single_mode_matches_all_modes() {
        let cfg = ChainConfig::new(30, Exponent::Finite(4.0), 0.0, &[]).unwrap();
        let all = overlaps_full(&cfg).unwrap();
        for l in [1, 7, 15, 29, 30] {
            assert!((overlap_correction_full(l, &cfg).unwrap() - all[l - 1]).abs() < 1e-14);
        }
        assert!(overlap_correction_full(31, &cfg).is_err());
        let nni = ChainConfig::new(30, Exponent::Infinite, 0.0, &[]).unwrap();
        assert_eq!(overlap_correction_full(3, &nni), Err(Error::InfiniteExponent));
    }

    #[test]
    fn nnn_closed_form_matches_truncated_operator_for_large_nu() {
        // closed form versus first-order theory with the truncated operator
        let n = 100;
        let cfg = ChainConfig::new(n, Exponent::Finite(10.0), 0.0, &[]).unwrap();
        let nni = nni_analytic(n).unwrap();
        let first_nnn = first_order_overlaps(&nni, &build_h_nu_nnn(&cfg).unwrap()).unwrap();
        let base = nni.first_node_overlaps();
        let scale = first_nnn
            .iter()
            .zip(&base)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        for l in 1..=n {
            let closed = overlap_correction_nnn(l, n, cfg.nu()).unwrap();
            assert!((closed - first_nnn[l - 1]).abs() <= 0.15 * scale, "l={l}");
        }
        assert_eq!(
            overlap_correction_nnn(n, n, cfg.nu()).unwrap(),
            (1.0 / n as f64).sqrt()
        );
        assert!(overlap_correction_nnn(1, n, Exponent::Infinite).is_err());
    }

    #[test]
    fn nnn_expansion_properties() {
        let n = 100;
        let g1 = nnn_first_correction(n, 0.001).unwrap();
        for l in 1..=20 {
            assert!(g1[l - 1] < 0.0, "l={l}");
        }
        let cfg = ChainConfig::end_traps(n, Exponent::Finite(10.0), 0.001).unwrap();
        let rates = nnn_rates(&cfg).unwrap();
        let s = 2f64.powf(-10.0);
        for l in 1..=n {
            let o = overlap_correction_nnn(l, n, cfg.nu()).unwrap();
            let sq = 2.0 * cfg.gamma() * o * o;
            // difference is the 2^-2nu term
            assert!((sq - rates[l - 1]).abs() <= 2.0 * cfg.gamma() * s * s * 2.0 / n as f64 + 1e-18);
        }
        let far = ChainConfig::end_traps(n, Exponent::Finite(80.0), 0.001).unwrap();
        let g = gamma_nnn_expansion(&far).unwrap();
        let g_nni = gamma_nni_analytic(&far).unwrap();
        for (a, b) in g.gammas().iter().zip(g_nni.gammas()) {
            assert!((a - b).abs() < 1e-18);
        }
        let single = ChainConfig::new(n, Exponent::Finite(5.0), 0.001, &[1]).unwrap();
        assert!(matches!(gamma_nnn_expansion(&single), Err(Error::TrapsNotAtEnds(_))));
    }

    #[test]
    fn local_exponent() {
        let cfg = ChainConfig::end_traps(20, Exponent::Infinite, 0.1).unwrap();
        let g: Vec<f64> = (1..=20).map(|l| 0.3 * (l as f64).powi(2)).collect();
        let s = GammaSeries::new(g, GammaSource::NniAnalytic, cfg.clone());
        for l in 1..20 {
            assert!((mu_local(&s, l).unwrap() - 2.0).abs() < 1e-12);
        }
        assert!(mu_local(&s, 0).is_err() && mu_local(&s, 20).is_err());
        let bad = GammaSeries::new(vec![0.0; 20], GammaSource::NniAnalytic, cfg);
        assert!(matches!(mu_local(&bad, 2), Err(Error::NonPositiveData { .. })));

        let nni = gamma_nni_analytic(&ChainConfig::end_traps(1000, Exponent::Infinite, 0.001).unwrap())
            .unwrap();
        assert!((mu_local(&nni, 2).unwrap() - 2.0).abs() < 0.01);
        // Around l = N/2 the rates are linear in l (vanishing curvature);
        // the log-slope there is pi/2, inside the [1, 2] band.
        let g = nni.gammas();
        let curvature = (g[401] - 2.0 * g[400] + g[399]) / (g[401] - g[399]);
        assert!(curvature.abs() < 1e-2);
        let mid = mu_local(&nni, 400).unwrap();
        assert!((1.0..=2.0).contains(&mid), "{mid}");
    }

    #[test]
    fn analytic_mu_terms() {
        let (mu0, mu1) = mu_terms(100, 2).unwrap();
        assert!((mu0 - 2.0).abs() < 0.01);
        for l in 1..10 {
            assert!(mu_terms(100, l).unwrap().1 > 0.0);
        }
        assert!(mu1 > 0.0);
        assert!(mu_terms(100, 99).is_err());
    }

    #[test]
    fn continuum_curve() {
        let grid = TimeGrid::new(vec![0.0, 1.0, 1e4], crate::dynamics::Spacing::Linear).unwrap();
        let c = continuum_survival(0.04, &grid, BesselMethod::SeriesAsymptotic).unwrap();
        assert_eq!(c.values[0], 1.0);
        let at = 0.04 * 1e4;
        assert!((c.values[2] * (2.0 * PI * at).sqrt() - 1.0).abs() < 1e-3);
        assert!(continuum_survival(0.0, &grid, BesselMethod::Quadrature).is_err());
        let cfg = ChainConfig::end_traps(100, Exponent::Infinite, 1.0).unwrap();
        assert_eq!(continuum_rate(&cfg), 0.04);
    }

    #[test]
    fn trap_free_states_align_with_nni() {
        let (e, v) = trap_free_states(50, Exponent::Infinite).unwrap();
        let nni = nni_analytic(50).unwrap();
        for l in 0..50 {
            assert!((e[l] - nni.energies()[l]).abs() < 1e-10);
            for j in 0..50 {
                assert!((v[(j, l)] - nni.vectors()[(j, l)]).abs() < 1e-8);
            }
        }
    }
}
