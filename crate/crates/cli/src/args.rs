use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lrtrap::Exponent;

#[derive(Debug, Parser)]
#[command(name = "lrtrap", version, about = "Quantum vs classical trapping on long-range chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantum and/or classical spectrum of one chain.
    Spectrum {
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Which operator to decompose.
        #[arg(long, value_enum, default_value_t = SpectrumKind::Both)]
        kind: SpectrumKind,
        /// Row order of the quantum spectrum.
        #[arg(long, value_enum, default_value_t = OrderArg::Gamma)]
        ordering: OrderArg,
    },
    /// Mean survival curves (quantum exact, exponential sum, classical
    /// exact, classical dominant mode) on a time grid.
    Decay {
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// First-node overlaps: exact, full first order and next-nearest
    /// neighbour closed form.
    Perturb {
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Use the literal boundary diagonal for the next-nearest-neighbour
        /// operator instead of the row-sum-zero rule.
        #[arg(long)]
        paper_literal_diag: bool,
    },
    /// Power-law fit of a spectrum or decay CSV.
    Fit {
        /// CSV written by `spectrum` or `decay`.
        input: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Data for one figure preset: 1a, 1b, 2a, 2b, 3a, 3b.
    Figure {
        id: String,
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Spectrum and exponent fit over every (nu, gamma) pair.
    Sweep {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        traps: Option<Vec<usize>>,
        /// Comma-separated exponents, `inf` allowed.
        #[arg(long, value_delimiter = ',')]
        nus: Option<Vec<Exponent>>,
        /// Comma-separated trap strengths.
        #[arg(long, value_delimiter = ',')]
        gammas: Option<Vec<f64>>,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        window: WindowArgs,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct ChainArgs {
    /// Number of nodes.
    #[arg(long)]
    pub n: Option<usize>,
    /// Coupling exponent; `inf` for nearest neighbours only.
    #[arg(long)]
    pub nu: Option<Exponent>,
    /// Trap strength.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Comma-separated 1-based trap nodes; default `1,N`.
    #[arg(long, value_delimiter = ',')]
    pub traps: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Key-value configuration file (TOML); flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a gnuplot script next to the CSVs.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Log-grid density.
    #[arg(long)]
    pub per_decade: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct WindowArgs {
    /// First mode of the exponent fit (1-based).
    #[arg(long)]
    pub l_lo: Option<usize>,
    /// Last mode of the exponent fit.
    #[arg(long)]
    pub l_hi: Option<usize>,
    /// Start of the decay fit window; default is the intermediate regime.
    #[arg(long)]
    pub t_lo: Option<f64>,
    #[arg(long)]
    pub t_hi: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpectrumKind {
    Quantum,
    Classical,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Gamma,
    Epsilon,
}
