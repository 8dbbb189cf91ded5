//! Pure builders turning computations into CSV tables.

use lrtrap::analysis::{fit_power_law, find_crossing};
use lrtrap::dynamics::{
    mean_survival_classical, mean_survival_classical_dominant, mean_survival_quantum,
    mean_survival_quantum_gamma_sum,
};
use lrtrap::model::{build_classical_transfer, build_h_nu_nnn_with, build_quantum_hamiltonian, NnnDiagonal};
use lrtrap::perturbation::{
    first_order_overlaps, nni_analytic, overlap_correction_nnn, overlap_exact, overlaps_full,
};
use lrtrap::spectral::{decompose_classical, decompose_quantum_ordered};
use lrtrap::{ChainConfig, DecayCurve, Ordering, PowerLawFit, TimeGrid};

use crate::error::CliError;
use crate::output::{config_comment, float, nu_field, traps, Csv};

pub const SPECTRUM_COLUMNS: [&str; 3] = ["l", "epsilon", "gamma"];
pub const CLASSICAL_COLUMNS: [&str; 2] = ["l", "lambda"];
pub const DECAY_COLUMNS: [&str; 7] = ["t", "value", "label", "N", "nu", "gamma", "traps"];
pub const PERTURB_COLUMNS: [&str; 7] = [
    "l",
    "overlap_exact",
    "overlap_eq8",
    "overlap_eq9",
    "diff_exact",
    "diff_eq8",
    "diff_eq9",
];
pub const FIT_COLUMNS: [&str; 7] = [
    "quantity",
    "exponent",
    "amplitude",
    "window_lo",
    "window_hi",
    "residual",
    "n_points",
];

pub fn ordering_name(o: Ordering) -> &'static str {
    match o {
        Ordering::ByGammaAsc => "gamma_asc",
        Ordering::ByEpsilonAsc => "epsilon_asc",
    }
}

/// Quantum spectrum table plus its decay rates in ascending order.
pub fn quantum_spectrum(cfg: &ChainConfig, ordering: Ordering) -> Result<(Csv, Vec<f64>), CliError> {
    let spec = decompose_quantum_ordered(&build_quantum_hamiltonian(cfg), ordering)?;
    let comment = format!(
        "{} ordering={} gamma_below_1e-14={}",
        config_comment(cfg),
        ordering_name(ordering),
        spec.count_below(1e-14)
    );
    let mut csv = Csv::new(&comment, &SPECTRUM_COLUMNS);
    for (l, e) in spec.eigenvalues().iter().enumerate() {
        csv.row(&[(l + 1).to_string(), float(e.re), float(-e.im)]);
    }
    let mut gammas = spec.gammas();
    gammas.sort_by(f64::total_cmp);
    Ok((csv, gammas))
}

pub fn classical_spectrum(cfg: &ChainConfig) -> Result<Csv, CliError> {
    let spec = decompose_classical(&build_classical_transfer(cfg))?;
    let mut csv = Csv::new(&config_comment(cfg), &CLASSICAL_COLUMNS);
    for (l, lam) in spec.lambdas().iter().enumerate() {
        csv.row(&[(l + 1).to_string(), float(*lam)]);
    }
    Ok(csv)
}

/// Fit of ascending rates against `l` over a 1-based inclusive window.
pub fn fit_rates(gammas: &[f64], window: (usize, usize)) -> Result<PowerLawFit, CliError> {
    let (lo, hi) = window;
    if lo == 0 || hi > gammas.len() || lo > hi {
        return Err(CliError::Usage(format!(
            "mode window {lo}..={hi} outside 1..={}",
            gammas.len()
        )));
    }
    let ls: Vec<f64> = (1..=gammas.len()).map(|l| l as f64).collect();
    Ok(fit_power_law(&ls, gammas, lo - 1..=hi - 1)?)
}

pub fn fit_row(csv: &mut Csv, quantity: &str, fit: &PowerLawFit) {
    csv.row(&[
        quantity.to_string(),
        float(fit.exponent),
        float(fit.amplitude),
        float(fit.window.0),
        float(fit.window.1),
        float(fit.residual),
        fit.n_points.to_string(),
    ]);
}

pub fn all_curves(cfg: &ChainConfig, grid: &TimeGrid) -> Result<Vec<DecayCurve>, CliError> {
    let qs = decompose_quantum_ordered(&build_quantum_hamiltonian(cfg), Ordering::ByGammaAsc)?;
    let cs = decompose_classical(&build_classical_transfer(cfg))?;
    Ok(vec![
        mean_survival_quantum(&qs, cfg, grid)?,
        mean_survival_quantum_gamma_sum(&qs, cfg, grid)?,
        mean_survival_classical(&cs, cfg, grid)?,
        mean_survival_classical_dominant(&cs, cfg, grid)?,
    ])
}

/// Exact quantum and classical curves only.
pub fn exact_curves(cfg: &ChainConfig, grid: &TimeGrid) -> Result<(DecayCurve, DecayCurve), CliError> {
    let qs = decompose_quantum_ordered(&build_quantum_hamiltonian(cfg), Ordering::ByGammaAsc)?;
    let cs = decompose_classical(&build_classical_transfer(cfg))?;
    Ok((
        mean_survival_quantum(&qs, cfg, grid)?,
        mean_survival_classical(&cs, cfg, grid)?,
    ))
}

pub fn decay_rows(csv: &mut Csv, curve: &DecayCurve, cfg: &ChainConfig) {
    let (n, nu, gamma, tr) = (
        cfg.n_nodes().to_string(),
        nu_field(cfg.nu()),
        float(cfg.gamma()),
        traps(cfg.traps()),
    );
    for (t, v) in curve.grid.points().iter().zip(curve.clipped_values()) {
        csv.row(&[
            float(*t),
            float(v),
            curve.label.as_str().to_string(),
            n.clone(),
            nu.clone(),
            gamma.clone(),
            tr.clone(),
        ]);
    }
}

pub fn crossing_field(q: &DecayCurve, c: &DecayCurve) -> Result<String, CliError> {
    Ok(match find_crossing(q, c)? {
        Some(t) => float(t),
        None => "none".into(),
    })
}

/// Three-way overlap table and the first-order table built from the
/// next-nearest-neighbour operator.
pub fn perturbation_tables(cfg: &ChainConfig, diag: NnnDiagonal) -> Result<(Csv, Csv), CliError> {
    let n = cfg.n_nodes();
    let nnn_closed = (1..=n)
        .map(|l| overlap_correction_nnn(l, n, cfg.nu()))
        .collect::<lrtrap::Result<Vec<_>>>()?;
    let exact = overlap_exact(cfg)?;
    let full = overlaps_full(cfg)?;
    let nni = nni_analytic(n)?;
    let base = nni.first_node_overlaps();
    let comment = format!("N={n} nu={}", cfg.nu());
    let mut main = Csv::new(&comment, &PERTURB_COLUMNS);
    for l in 0..n {
        main.row(&[
            (l + 1).to_string(),
            float(exact[l]),
            float(full[l]),
            float(nnn_closed[l]),
            float(exact[l] - base[l]),
            float(full[l] - base[l]),
            float(nnn_closed[l] - base[l]),
        ]);
    }
    let diag_name = match diag {
        NnnDiagonal::RowSumZero => "row_sum_zero",
        NnnDiagonal::Literal => "literal",
    };
    let op = build_h_nu_nnn_with(cfg, diag)?;
    let nnn = first_order_overlaps(&nni, &op)?;
    let mut extra = Csv::new(
        &format!("{comment} nnn_diagonal={diag_name}"),
        &["l", "overlap_nnn_operator", "diff_nnn_operator"],
    );
    for l in 0..n {
        extra.row(&[(l + 1).to_string(), float(nnn[l]), float(nnn[l] - base[l])]);
    }
    Ok((main, extra))
}
