use std::fs;
use std::path::{Path, PathBuf};

use lrtrap::analysis::{fit_decay_exponent, intermediate_window};
use lrtrap::model::NnnDiagonal;
use lrtrap::{ChainConfig, CurveLabel, DecayCurve, Exponent, Ordering, Spacing, TimeGrid};
use rayon::prelude::*;

use crate::args::{ChainArgs, CommonArgs, GridArgs, OrderArg, SpectrumKind, WindowArgs};
use crate::config::{self, chain_settings, FileConfig, FitWindow, GridSpec, Settings};
use crate::error::CliError;
use crate::output::{config_comment, float, Csv, Outputs};
use crate::plot;
use crate::report::{self, DECAY_COLUMNS, FIT_COLUMNS};

pub fn spectrum(
    chain: &ChainArgs,
    common: &CommonArgs,
    kind: SpectrumKind,
    ordering: OrderArg,
) -> Result<Vec<PathBuf>, CliError> {
    let file = FileConfig::load(common.config.as_deref())?;
    let cfg = config::resolve_chain(chain, &file)?;
    let ordering = match ordering {
        OrderArg::Gamma => Ordering::ByGammaAsc,
        OrderArg::Epsilon => Ordering::ByEpsilonAsc,
    };
    let mut out = Outputs::new(&config::out_dir(common, &file))?;
    if kind != SpectrumKind::Classical {
        let (csv, _) = report::quantum_spectrum(&cfg, ordering)?;
        out.write("spectrum_quantum.csv", csv.as_str())?;
        if common.plot {
            let files = [("spectrum_quantum.csv".to_string(), format!("nu={}", cfg.nu()))];
            out.write("spectrum_quantum.gp", &plot::spectrum(&files))?;
        }
    }
    if kind != SpectrumKind::Quantum {
        out.write("spectrum_classical.csv", report::classical_spectrum(&cfg)?.as_str())?;
    }
    let mut settings = chain_settings(&cfg);
    settings.push(("ordering".into(), report::ordering_name(ordering).into()));
    Ok(out.finish("spectrum", "spectrum", &settings)?)
}

pub fn decay(chain: &ChainArgs, common: &CommonArgs, grid: &GridArgs) -> Result<Vec<PathBuf>, CliError> {
    let file = FileConfig::load(common.config.as_deref())?;
    let cfg = config::resolve_chain(chain, &file)?;
    let spec = GridSpec::resolve(grid, &file, cfg.gamma());
    let curves = report::all_curves(&cfg, &spec.build()?)?;
    let mut csv = Csv::new(&config_comment(&cfg), &DECAY_COLUMNS);
    for c in &curves {
        report::decay_rows(&mut csv, c, &cfg);
    }
    let mut out = Outputs::new(&config::out_dir(common, &file))?;
    out.write("decay.csv", csv.as_str())?;
    if common.plot {
        let nu = crate::output::nu_field(cfg.nu());
        let series: Vec<(String, String)> = curves
            .iter()
            .map(|c| (c.label.as_str().to_string(), nu.clone()))
            .collect();
        out.write("decay.gp", &plot::decay("decay.csv", &series))?;
    }
    let mut settings = chain_settings(&cfg);
    spec.push_settings(&mut settings);
    Ok(out.finish("decay", "decay", &settings)?)
}

pub fn perturb(chain: &ChainArgs, common: &CommonArgs, literal: bool) -> Result<Vec<PathBuf>, CliError> {
    let file = FileConfig::load(common.config.as_deref())?;
    let literal = literal || file.paper_literal_diag.unwrap_or(false);
    let resolved = config::resolve_chain(chain, &file)?;
    if resolved.nu().is_infinite() {
        return Err(CliError::Usage("perturb needs a finite --nu".into()));
    }
    let cfg = ChainConfig::new(resolved.n_nodes(), resolved.nu(), 0.0, &[])?;
    let diag = if literal {
        NnnDiagonal::Literal
    } else {
        NnnDiagonal::RowSumZero
    };
    let (main, extra) = report::perturbation_tables(&cfg, diag)?;
    let mut out = Outputs::new(&config::out_dir(common, &file))?;
    out.write("perturb.csv", main.as_str())?;
    out.write("perturb_nnn_operator.csv", extra.as_str())?;
    if common.plot {
        out.write("perturb.gp", &plot::perturb("perturb.csv"))?;
    }
    let settings = vec![
        ("n".to_string(), cfg.n_nodes().to_string()),
        ("nu".to_string(), cfg.nu().to_string()),
        ("paper_literal_diag".to_string(), literal.to_string()),
    ];
    Ok(out.finish("perturb", "perturb", &settings)?)
}

/// First line starting with `#`, without the marker.
fn comment_line(text: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix('#'))
        .map(|l| l.trim().to_string())
        .unwrap_or_default()
}

fn read_table(path: &Path) -> Result<(String, Vec<String>, Vec<csv::StringRecord>), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let bad = |e: csv::Error| CliError::Usage(format!("malformed CSV {}: {e}", path.display()));
    let header: Vec<String> = reader.headers().map_err(bad)?.iter().map(String::from).collect();
    let rows = reader.records().collect::<Result<Vec<_>, _>>().map_err(bad)?;
    Ok((comment_line(&text), header, rows))
}

fn number(field: &str) -> Result<f64, CliError> {
    field
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("not a number: `{field}`")))
}

pub fn fit(input: &Path, common: &CommonArgs, window: &WindowArgs) -> Result<Vec<PathBuf>, CliError> {
    let file = FileConfig::load(common.config.as_deref())?;
    let window = FitWindow::resolve(window, &file)?;
    let (comment, header, rows) = read_table(input)?;
    let mut csv = Csv::new(&comment, &FIT_COLUMNS);
    if header == report::SPECTRUM_COLUMNS {
        let mut gammas = rows.iter().map(|r| number(&r[2])).collect::<Result<Vec<_>, _>>()?;
        gammas.sort_by(f64::total_cmp);
        let fit = report::fit_rates(&gammas, window.modes(gammas.len()))?;
        report::fit_row(&mut csv, "mu", &fit);
    } else if header == DECAY_COLUMNS {
        fit_decay_rows(&rows, window, &mut csv)?;
    } else {
        return Err(CliError::Usage(format!(
            "{} is neither a quantum spectrum nor a decay table",
            input.display()
        )));
    }
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "input".into());
    let name = format!("fit_{stem}.csv");
    let mut out = Outputs::new(&config::out_dir(common, &file))?;
    out.write(&name, csv.as_str())?;
    let given = |v: Option<usize>| v.map_or("default".into(), |v| v.to_string());
    let times = window.times().map(|(a, b)| format!("{};{}", float(a), float(b)));
    let settings: Settings = vec![
        ("input".into(), input.display().to_string()),
        ("l_lo".into(), given(window.l_lo)),
        ("l_hi".into(), given(window.l_hi)),
        ("t_window".into(), times.unwrap_or_else(|| "intermediate".into())),
        ("source_config".into(), comment),
    ];
    Ok(out.finish("fit", &format!("fit_{stem}"), &settings)?)
}

/// A decay curve in an input file, keyed by (label, nu), with its (t, value) points.
type CurveGroup = ((String, String), Vec<(f64, f64)>);

fn fit_decay_rows(rows: &[csv::StringRecord], window: FitWindow, csv: &mut Csv) -> Result<(), CliError> {
    // group by (label, nu) keeping first-appearance order
    let mut groups: Vec<CurveGroup> = Vec::new();
    for r in rows {
        let key = (r[2].to_string(), r[4].to_string());
        let point = (number(&r[0])?, number(&r[1])?);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, pts)) => pts.push(point),
            None => groups.push((key, vec![point])),
        }
    }
    let mut fitted = 0;
    for ((label, nu), pts) in groups {
        let label = CurveLabel::parse(&label)
            .ok_or_else(|| CliError::Usage(format!("unknown curve label `{label}`")))?;
        let nu: Exponent = nu.parse()?;
        let (ts, vs): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        let curve = DecayCurve {
            grid: TimeGrid::new(ts, Spacing::Log)?,
            values: vs,
            label,
            config: None,
        };
        let bounds = match window.times() {
            Some(b) => Ok(b),
            None => intermediate_window(&curve),
        };
        let result = bounds.and_then(|(lo, hi)| fit_decay_exponent(&curve, lo, hi));
        match result {
            Ok(f) => {
                let q = format!("decay_exponent[{};nu={nu}]", label.as_str());
                report::fit_row(csv, &q, &f);
                fitted += 1;
            }
            Err(e) => eprintln!("skipping {} nu={nu}: {e}", label.as_str()),
        }
    }
    if fitted == 0 {
        return Err(CliError::Numerical(lrtrap::Error::InvalidWindow(
            "no curve could be fitted".into(),
        )));
    }
    Ok(())
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    if jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
}

fn fin(v: f64) -> Exponent {
    Exponent::Finite(v)
}

const FIGURE_NOTE: &str = "the figure caption lists nu=2,3,4 while the accompanying text discusses nu=3,4,5; this preset covers nu=2,3,4,5 and inf";

pub fn figure(
    id: &str,
    common: &CommonArgs,
    grid: &GridArgs,
    jobs: Option<usize>,
) -> Result<Vec<PathBuf>, CliError> {
    let file = FileConfig::load(common.config.as_deref())?;
    let pool = pool(jobs.or(file.jobs))?;
    let mut out = Outputs::new(&config::out_dir(common, &file))?;
    let stem = format!("figure_{id}");
    let mut settings: Settings = vec![("figure".into(), id.to_string())];
    match id {
        "1a" | "1b" => {
            let gamma = if id == "1a" { 0.001 } else { 1.0 };
            let nus = [fin(3.0), fin(4.0), fin(5.0), Exponent::Infinite];
            let spec = GridSpec::resolve(grid, &file, gamma);
            let tgrid = spec.build()?;
            let cfgs = nus
                .iter()
                .map(|&nu| ChainConfig::end_traps(100, nu, gamma))
                .collect::<lrtrap::Result<Vec<_>>>()?;
            let curves = pool.install(|| {
                cfgs.par_iter()
                    .map(|c| report::exact_curves(c, &tgrid))
                    .collect::<Result<Vec<_>, _>>()
            })?;
            let comment = format!("figure {id} N=100 gamma={} traps=1;100 nu=3,4,5,inf", float(gamma));
            let mut decay = Csv::new(&comment, &DECAY_COLUMNS);
            let mut crossings = Csv::new(&comment, &["nu", "crossing_t"]);
            let mut fits = Csv::new(&comment, &FIT_COLUMNS);
            let mut series = Vec::new();
            for (cfg, (q, c)) in cfgs.iter().zip(&curves) {
                report::decay_rows(&mut decay, q, cfg);
                report::decay_rows(&mut decay, c, cfg);
                let nu = crate::output::nu_field(cfg.nu());
                crossings.row(&[nu.clone(), report::crossing_field(q, c)?]);
                series.push((q.label.as_str().to_string(), nu.clone()));
                series.push((c.label.as_str().to_string(), nu));
                if id == "1b" {
                    let (lo, hi) = intermediate_window(q)?;
                    let f = fit_decay_exponent(q, lo, hi)?;
                    report::fit_row(&mut fits, &format!("decay_exponent[QUANTUM_EXACT;nu={}]", cfg.nu()), &f);
                }
            }
            out.write(&format!("{stem}_decay.csv"), decay.as_str())?;
            out.write(&format!("{stem}_crossings.csv"), crossings.as_str())?;
            if id == "1b" {
                out.write(&format!("{stem}_fit.csv"), fits.as_str())?;
            }
            out.write(&format!("{stem}.gp"), &plot::decay(&format!("{stem}_decay.csv"), &series))?;
            settings.push(("gamma".into(), float(gamma)));
            spec.push_settings(&mut settings);
        }
        "2a" | "2b" => {
            let nu = if id == "2a" { 10.0 } else { 5.0 };
            let cfg = ChainConfig::new(100, fin(nu), 0.0, &[])?;
            let (main, extra) = report::perturbation_tables(&cfg, NnnDiagonal::RowSumZero)?;
            out.write(&format!("{stem}_perturb.csv"), main.as_str())?;
            out.write(&format!("{stem}_nnn_operator.csv"), extra.as_str())?;
            out.write(&format!("{stem}.gp"), &plot::perturb(&format!("{stem}_perturb.csv")))?;
            settings.push(("n".into(), "100".into()));
            settings.push(("nu".into(), cfg.nu().to_string()));
        }
        "3a" | "3b" => {
            let gamma = if id == "3a" { 0.001 } else { 1.0 };
            let nus = [fin(2.0), fin(3.0), fin(4.0), fin(5.0), Exponent::Infinite];
            let cfgs = nus
                .iter()
                .map(|&nu| ChainConfig::end_traps(100, nu, gamma))
                .collect::<lrtrap::Result<Vec<_>>>()?;
            let spectra = pool.install(|| {
                cfgs.par_iter()
                    .map(|c| report::quantum_spectrum(c, Ordering::ByGammaAsc))
                    .collect::<Result<Vec<_>, _>>()
            })?;
            let comment = format!("figure {id} N=100 gamma={} traps=1;100 nu=2,3,4,5,inf", float(gamma));
            let mut fits = Csv::new(&comment, &FIT_COLUMNS);
            let mut files = Vec::new();
            for (cfg, (csv, gammas)) in cfgs.iter().zip(&spectra) {
                let name = format!("{stem}_nu{}.csv", cfg.nu());
                out.write(&name, csv.as_str())?;
                files.push((name, format!("nu={}", cfg.nu())));
                let f = report::fit_rates(gammas, lrtrap::analysis::default_mu_window(100))?;
                report::fit_row(&mut fits, &format!("mu[nu={}]", cfg.nu()), &f);
            }
            out.write(&format!("{stem}_fit.csv"), fits.as_str())?;
            out.write(&format!("{stem}.gp"), &plot::spectrum(&files))?;
            settings.push(("gamma".into(), float(gamma)));
            settings.push(("note".into(), FIGURE_NOTE.into()));
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown figure `{other}`; expected one of 1a, 1b, 2a, 2b, 3a, 3b"
            )))
        }
    }
    Ok(out.finish("figure", &stem, &settings)?)
}

/// Sort key placing `inf` after every finite exponent.
fn nu_key(nu: Exponent) -> f64 {
    nu.finite().unwrap_or(f64::INFINITY)
}

#[allow(clippy::too_many_arguments)]
pub fn sweep(
    n: Option<usize>,
    traps: Option<&[usize]>,
    nus: Option<&[Exponent]>,
    gammas: Option<&[f64]>,
    jobs: Option<usize>,
    common: &CommonArgs,
    window: &WindowArgs,
) -> Result<Vec<PathBuf>, CliError> {
    let file = FileConfig::load(common.config.as_deref())?;
    let window = FitWindow::resolve(window, &file)?;
    let nus = match nus {
        Some(v) => v.to_vec(),
        None => file.nus()?.unwrap_or_default(),
    };
    let gammas = gammas
        .map(<[f64]>::to_vec)
        .or_else(|| file.gammas.clone())
        .unwrap_or_default();
    if nus.is_empty() || gammas.is_empty() {
        return Err(CliError::Usage("sweep needs non-empty --nus and --gammas".into()));
    }
    let chain = ChainArgs {
        n,
        nu: None,
        gamma: None,
        traps: traps.map(<[usize]>::to_vec),
    };
    let base = config::resolve_chain(&chain, &file)?;
    let mut cells = Vec::new();
    for &nu in &nus {
        for &g in &gammas {
            cells.push(ChainConfig::new(base.n_nodes(), nu, g, base.traps())?);
        }
    }
    cells.sort_by(|a, b| {
        nu_key(a.nu())
            .total_cmp(&nu_key(b.nu()))
            .then(a.gamma().total_cmp(&b.gamma()))
    });
    cells.dedup();
    let pool = pool(jobs.or(file.jobs))?;
    let modes = window.modes(base.n_nodes());
    let results = pool.install(|| {
        cells
            .par_iter()
            .map(|cfg| {
                let (csv, g) = report::quantum_spectrum(cfg, Ordering::ByGammaAsc)?;
                Ok((csv, report::fit_rates(&g, modes)?))
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?;
    let comment = format!(
        "sweep N={} traps={} nus={} gammas={}",
        base.n_nodes(),
        crate::output::traps(base.traps()),
        nus.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(";"),
        gammas.iter().map(|g| float(*g)).collect::<Vec<_>>().join(";")
    );
    let mut fits = Csv::new(&comment, &FIT_COLUMNS);
    let mut out = Outputs::new(&config::out_dir(common, &file))?;
    let mut files = Vec::new();
    for (cfg, (csv, f)) in cells.iter().zip(&results) {
        let name = format!("sweep_nu{}_gamma{}.csv", cfg.nu(), cfg.gamma());
        out.write(&name, csv.as_str())?;
        files.push((name, format!("nu={} gamma={}", cfg.nu(), cfg.gamma())));
        report::fit_row(&mut fits, &format!("mu[nu={};gamma={}]", cfg.nu(), cfg.gamma()), f);
    }
    out.write("sweep_fit.csv", fits.as_str())?;
    if common.plot {
        out.write("sweep.gp", &plot::spectrum(&files))?;
    }
    let settings: Settings = vec![
        ("n".into(), base.n_nodes().to_string()),
        ("traps".into(), crate::output::traps(base.traps())),
        ("cells".into(), cells.len().to_string()),
        ("l_lo".into(), modes.0.to_string()),
        ("l_hi".into(), modes.1.to_string()),
    ];
    Ok(out.finish("sweep", "sweep", &settings)?)
}
