//! Configuration file and resolution of flag > file > default.

use std::fs;
use std::path::{Path, PathBuf};

use lrtrap::{ChainConfig, Exponent, TimeGrid};
use serde::Deserialize;

use crate::args::{ChainArgs, CommonArgs, GridArgs, WindowArgs};
use crate::error::CliError;

pub const DEFAULT_N: usize = 100;
pub const DEFAULT_NU: Exponent = Exponent::Infinite;
pub const DEFAULT_GAMMA: f64 = 0.001;

/// An exponent written either as a number or as the string `inf`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum NuValue {
    Number(f64),
    Text(String),
}

impl NuValue {
    fn to_exponent(&self) -> Result<Exponent, CliError> {
        match self {
            NuValue::Number(v) => Ok(Exponent::Finite(*v)),
            NuValue::Text(s) => s
                .parse()
                .map_err(|e: lrtrap::Error| CliError::Usage(format!("config nu: {e}"))),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub nu: Option<NuValue>,
    pub gamma: Option<f64>,
    pub traps: Option<Vec<usize>>,
    pub out: Option<PathBuf>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub per_decade: Option<usize>,
    pub l_lo: Option<usize>,
    pub l_hi: Option<usize>,
    pub t_lo: Option<f64>,
    pub t_hi: Option<f64>,
    pub nus: Option<Vec<NuValue>>,
    pub gammas: Option<Vec<f64>>,
    pub jobs: Option<usize>,
    pub paper_literal_diag: Option<bool>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }

    pub fn nus(&self) -> Result<Option<Vec<Exponent>>, CliError> {
        self.nus
            .as_ref()
            .map(|v| v.iter().map(NuValue::to_exponent).collect())
            .transpose()
    }
}

/// Resolved key-value settings in a fixed order, for manifests.
pub type Settings = Vec<(String, String)>;

pub fn out_dir(common: &CommonArgs, file: &FileConfig) -> PathBuf {
    common
        .out
        .clone()
        .or_else(|| file.out.clone())
        .unwrap_or_else(|| PathBuf::from("."))
}

pub fn resolve_chain(args: &ChainArgs, file: &FileConfig) -> Result<ChainConfig, CliError> {
    let n = args.n.or(file.n).unwrap_or(DEFAULT_N);
    let nu = match args.nu {
        Some(nu) => nu,
        None => file
            .nu
            .as_ref()
            .map(NuValue::to_exponent)
            .transpose()?
            .unwrap_or(DEFAULT_NU),
    };
    let gamma = args.gamma.or(file.gamma).unwrap_or(DEFAULT_GAMMA);
    let traps = args
        .traps
        .clone()
        .or_else(|| file.traps.clone())
        .unwrap_or_else(|| if n >= 2 { vec![1, n] } else { vec![1] });
    Ok(ChainConfig::new(n, nu, gamma, &traps)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub per_decade: usize,
}

impl GridSpec {
    pub fn resolve(args: &GridArgs, file: &FileConfig, gamma: f64) -> Self {
        let base = TimeGrid::default_for_gamma(gamma);
        let pts = base.points();
        Self {
            t_min: args.t_min.or(file.t_min).unwrap_or(pts[0]),
            t_max: args.t_max.or(file.t_max).unwrap_or(pts[pts.len() - 1]),
            per_decade: args.per_decade.or(file.per_decade).unwrap_or(400),
        }
    }

    pub fn build(&self) -> Result<TimeGrid, CliError> {
        Ok(TimeGrid::log(self.t_min, self.t_max, self.per_decade)?)
    }

    pub fn push_settings(&self, s: &mut Settings) {
        s.push(("t_min".into(), crate::output::float(self.t_min)));
        s.push(("t_max".into(), crate::output::float(self.t_max)));
        s.push(("per_decade".into(), self.per_decade.to_string()));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FitWindow {
    pub l_lo: Option<usize>,
    pub l_hi: Option<usize>,
    pub t_lo: Option<f64>,
    pub t_hi: Option<f64>,
}

impl FitWindow {
    pub fn resolve(args: &WindowArgs, file: &FileConfig) -> Result<Self, CliError> {
        let w = Self {
            l_lo: args.l_lo.or(file.l_lo),
            l_hi: args.l_hi.or(file.l_hi),
            t_lo: args.t_lo.or(file.t_lo),
            t_hi: args.t_hi.or(file.t_hi),
        };
        if w.t_lo.is_some() != w.t_hi.is_some() {
            return Err(CliError::Usage("--t-lo and --t-hi must be given together".into()));
        }
        Ok(w)
    }

    /// 1-based inclusive mode window, defaulting to `[2, max(4, N/10)]`.
    pub fn modes(&self, n: usize) -> (usize, usize) {
        let (lo, hi) = lrtrap::analysis::default_mu_window(n);
        (self.l_lo.unwrap_or(lo), self.l_hi.unwrap_or(hi))
    }

    pub fn times(&self) -> Option<(f64, f64)> {
        self.t_lo.zip(self.t_hi)
    }
}

pub fn chain_settings(cfg: &ChainConfig) -> Settings {
    vec![
        ("config".into(), crate::output::config_comment(cfg)),
        ("n".into(), cfg.n_nodes().to_string()),
        ("nu".into(), cfg.nu().to_string()),
        ("gamma".into(), crate::output::float(cfg.gamma())),
        ("traps".into(), crate::output::traps(cfg.traps())),
    ]
}
