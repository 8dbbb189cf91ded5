//! Chain configuration and operator construction.
//!
//! Node labels are 1-based in every public signature; storage is a 0-based
//! `nalgebra` matrix.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

/// Interaction exponent `nu` of the `R^-nu` coupling.
///
/// `Infinite` is the nearest-neighbour chain and is kept distinct from any
/// float so that no `R^-inf` is ever evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    /// Coupling strength between two nodes at distance `r >= 1`.
    pub fn coupling(self, r: usize) -> f64 {
        match self {
            Exponent::Infinite => {
                if r == 1 {
                    1.0
                } else {
                    0.0
                }
            }
            Exponent::Finite(nu) => (r as f64).powf(-nu),
        }
    }

    /// Largest distance with a non-zero coupling on a chain of `n` nodes.
    fn max_range(self, n: usize) -> usize {
        match self {
            Exponent::Infinite => 1.min(n - 1),
            Exponent::Finite(_) => n - 1,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Exponent::Finite(nu) => Some(nu),
            Exponent::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Infinite => f.write_str("inf"),
            Exponent::Finite(nu) => write!(f, "{nu}"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(Exponent::Infinite);
        }
        let nu: f64 = s
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("cannot parse exponent `{s}`")))?;
        if nu.is_infinite() && nu > 0.0 {
            return Ok(Exponent::Infinite);
        }
        Ok(Exponent::Finite(nu))
    }
}

/// Full description of one trapping experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    n_nodes: usize,
    nu: Exponent,
    gamma: f64,
    traps: Vec<usize>,
}

impl ChainConfig {
    /// Validates and builds a configuration. `traps` are 1-based and are
    /// stored sorted.
    pub fn new(n_nodes: usize, nu: Exponent, gamma: f64, traps: &[usize]) -> Result<Self> {
        if n_nodes < 2 {
            return Err(Error::InvalidConfig(format!("need N >= 2, got {n_nodes}")));
        }
        match nu {
            Exponent::Finite(v) if !(v.is_finite() && v > 1.0) => {
                return Err(Error::InvalidConfig(format!(
                    "exponent must satisfy nu > 1 or be inf, got {v}"
                )));
            }
            _ => {}
        }
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "trap strength must be finite and >= 0, got {gamma}"
            )));
        }
        let mut sorted = traps.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidConfig(format!("duplicate trap node {}", w[0])));
            }
        }
        if let Some(&m) = sorted.iter().find(|&&m| m == 0 || m > n_nodes) {
            return Err(Error::NodeOutOfRange { node: m, n: n_nodes });
        }
        if sorted.len() >= n_nodes {
            return Err(Error::InvalidConfig(
                "at least one node must be free of traps".into(),
            ));
        }
        Ok(Self {
            n_nodes,
            nu,
            gamma,
            traps: sorted,
        })
    }

    /// Traps at both chain ends, `M = {1, N}`.
    pub fn end_traps(n_nodes: usize, nu: Exponent, gamma: f64) -> Result<Self> {
        Self::new(n_nodes, nu, gamma, &[1, n_nodes])
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn nu(&self) -> Exponent {
        self.nu
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn traps(&self) -> &[usize] {
        &self.traps
    }

    pub fn is_trap(&self, node: usize) -> bool {
        self.traps.binary_search(&node).is_ok()
    }

    /// 1-based labels of the nodes that are not traps, ascending.
    pub fn free_nodes(&self) -> Vec<usize> {
        (1..=self.n_nodes).filter(|&j| !self.is_trap(j)).collect()
    }

    /// True when the trap set is exactly `{1, N}`.
    pub fn has_end_traps(&self) -> bool {
        self.traps == [1, self.n_nodes]
    }

    /// Same chain and traps with another exponent.
    pub fn with_nu(&self, nu: Exponent) -> Result<Self> {
        Self::new(self.n_nodes, nu, self.gamma, &self.traps)
    }

    /// Same chain and exponent with another trap strength.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.n_nodes, self.nu, gamma, &self.traps)
    }
}

impl fmt::Display for ChainConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let traps: Vec<String> = self.traps.iter().map(|m| m.to_string()).collect();
        write!(
            f,
            "N={} nu={} gamma={} traps={}",
            self.n_nodes,
            self.nu,
            self.gamma,
            traps.join(";")
        )
    }
}

/// Converts a 1-based node label into a 0-based index.
pub(crate) fn check_node(node: usize, n: usize) -> Result<usize> {
    if node == 0 || node > n {
        Err(Error::NodeOutOfRange { node, n })
    } else {
        Ok(node - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    RealSymmetric,
    ComplexSymmetric,
    Diagonal,
}

/// Dense `N x N` complex matrix tagged with its symmetry class.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    entries: DMatrix<Complex64>,
    kind: OperatorKind,
}

impl DenseOperator {
    /// Checks the symmetry class bit-exactly.
    pub fn new(entries: DMatrix<Complex64>, kind: OperatorKind) -> Result<Self> {
        let n = entries.nrows();
        if entries.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: entries.ncols(),
            });
        }
        for j in 0..n {
            for k in 0..n {
                let v = entries[(j, k)];
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::NonFinite(format!("entry ({}, {})", j + 1, k + 1)));
                }
                if k > j && v != entries[(k, j)] {
                    return Err(Error::NotSymmetric {
                        row: j + 1,
                        col: k + 1,
                    });
                }
                match kind {
                    OperatorKind::RealSymmetric if v.im != 0.0 => {
                        return Err(Error::WrongKind {
                            expected: "real symmetric",
                        })
                    }
                    OperatorKind::Diagonal if j != k && v != Complex64::new(0.0, 0.0) => {
                        return Err(Error::WrongKind {
                            expected: "diagonal",
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(Self { entries, kind })
    }

    pub fn from_real(entries: &DMatrix<f64>, kind: OperatorKind) -> Result<Self> {
        Self::new(entries.map(|v| Complex64::new(v, 0.0)), kind)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Real part of the entries. Exact for real and diagonal real operators.
    pub fn real_matrix(&self) -> DMatrix<f64> {
        self.entries.map(|v| v.re)
    }

    /// Entry `<j|A|k>` with 1-based labels.
    pub fn at(&self, j: usize, k: usize) -> Result<Complex64> {
        let n = self.dim();
        Ok(self.entries[(check_node(j, n)?, check_node(k, n)?)])
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.diagonal().sum()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.entries
            .row_iter()
            .map(|r| r.iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Row sums of the real part, used to check the Laplacian structure.
    pub fn real_row_sums(&self) -> Vec<f64> {
        self.entries
            .row_iter()
            .map(|r| r.iter().map(|v| v.re).sum())
            .collect()
    }
}

/// Long-range chain Hamiltonian without traps.
///
/// Off-diagonal `-R^-nu`, diagonal the sum of the node's couplings,
/// accumulated in ascending `R`.
pub fn build_h0(config: &ChainConfig) -> DenseOperator {
    DenseOperator::from_real(&h0_real(config.n_nodes, config.nu), OperatorKind::RealSymmetric)
        .expect("chain Hamiltonian is real symmetric by construction")
}

pub(crate) fn h0_real(n: usize, nu: Exponent) -> DMatrix<f64> {
    let mut h = DMatrix::<f64>::zeros(n, n);
    let couplings: Vec<f64> = (0..n).map(|r| if r == 0 { 0.0 } else { nu.coupling(r) }).collect();
    let max_r = nu.max_range(n);
    for j in 0..n {
        let mut diag = 0.0;
        for (r, &c) in couplings.iter().enumerate().take(max_r + 1).skip(1) {
            if j >= r {
                h[(j, j - r)] = -c;
                diag += c;
            }
            if j + r < n {
                h[(j, j + r)] = -c;
                diag += c;
            }
        }
        h[(j, j)] = diag;
    }
    h
}

/// Real diagonal trap operator: `gamma` on every trap node.
pub fn build_trap_operator(config: &ChainConfig) -> DenseOperator {
    let n = config.n_nodes;
    let mut g = DMatrix::<f64>::zeros(n, n);
    for &m in &config.traps {
        g[(m - 1, m - 1)] = config.gamma;
    }
    DenseOperator::from_real(&g, OperatorKind::Diagonal).expect("diagonal by construction")
}

/// Non-Hermitian Hamiltonian `H0 - i*Gamma`.
pub fn build_quantum_hamiltonian(config: &ChainConfig) -> DenseOperator {
    let mut h = build_h0(config).entries;
    for &m in &config.traps {
        h[(m - 1, m - 1)].im -= config.gamma;
    }
    DenseOperator::new(h, OperatorKind::ComplexSymmetric).expect("complex symmetric by construction")
}

/// Classical transfer matrix `T = -H0 - Gamma`.
pub fn build_classical_transfer(config: &ChainConfig) -> DenseOperator {
    let mut t = -h0_real(config.n_nodes, config.nu);
    for &m in &config.traps {
        t[(m - 1, m - 1)] -= config.gamma;
    }
    DenseOperator::from_real(&t, OperatorKind::RealSymmetric).expect("real symmetric by construction")
}

/// Diagonal convention for the next-nearest-neighbour correction operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NnnDiagonal {
    /// Each diagonal entry cancels its row: `2^-nu` per next-nearest
    /// neighbour.
    #[default]
    RowSumZero,
    /// `2^-nu` for `2 < j < N-1` and `2^(1-nu)` elsewhere, as literally
    /// printed alongside the closed-form overlap.
    Literal,
}

/// Correction operator truncated at distance 2, with row-sum-zero diagonal.
pub fn build_h_nu_nnn(config: &ChainConfig) -> Result<DenseOperator> {
    build_h_nu_nnn_with(config, NnnDiagonal::RowSumZero)
}

pub fn build_h_nu_nnn_with(config: &ChainConfig, diag: NnnDiagonal) -> Result<DenseOperator> {
    let nu = config.nu.finite().ok_or(Error::InfiniteExponent)?;
    let n = config.n_nodes;
    if n < 3 {
        return Err(Error::InvalidConfig(format!(
            "next-nearest-neighbour operator needs N >= 3, got {n}"
        )));
    }
    let c = 2f64.powf(-nu);
    let mut h = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut neighbours = 0usize;
        if j >= 2 {
            h[(j, j - 2)] = -c;
            neighbours += 1;
        }
        if j + 2 < n {
            h[(j, j + 2)] = -c;
            neighbours += 1;
        }
        h[(j, j)] = match diag {
            NnnDiagonal::RowSumZero => neighbours as f64 * c,
            NnnDiagonal::Literal => {
                let label = j + 1;
                if 2 < label && label < n - 1 {
                    c
                } else {
                    2.0 * c
                }
            }
        };
    }
    DenseOperator::from_real(&h, OperatorKind::RealSymmetric)
}

/// Exact long-range correction `H0(nu) - H0(inf)`.
pub fn build_h_nu_full(config: &ChainConfig) -> Result<DenseOperator> {
    if config.nu.is_infinite() {
        return Err(Error::InfiniteExponent);
    }
    let d = h0_real(config.n_nodes, config.nu) - h0_real(config.n_nodes, Exponent::Infinite);
    DenseOperator::from_real(&d, OperatorKind::RealSymmetric)
}
