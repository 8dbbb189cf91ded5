//! Dense eigendecompositions of the chain operators.
//!
//! The quantum Hamiltonian `H = H0 - i*Gamma` is complex symmetric, so its left
//! eigenvectors are the unconjugated transposes of the right ones and the pair
//! is normalised with the bilinear form `sum_k psi_k^2 = 1`. Chains whose
//! operator is invariant under `j -> N + 1 - j` (always the case for `H0`,
//! and for mirror-symmetric trap sets) are first split into even and odd
//! sectors: with traps at both ends the two trap-localised modes are
//! degenerate to machine precision and only the sector split keeps their
//! eigenvectors well defined.

use std::cmp::Ordering as CmpOrdering;

use nalgebra::linalg::{Schur, SymmetricEigen};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::model::{check_node, DenseOperator, OperatorKind};
use crate::{Error, Result};

/// Bilinear norms below this value are treated as an exceptional point.
pub const MIN_BILINEAR_NORM: f64 = 1e-10;

/// Decay rates closer than this are ordered by their real parts instead.
pub const GAMMA_TIE: f64 = 1e-14;

/// Decay rates below `-NEGATIVE_GAMMA_TOL` indicate a gain term or a solver
/// failure and are rejected.
pub const NEGATIVE_GAMMA_TOL: f64 = 1e-12;

const SCHUR_EPS: f64 = 1e-15;
const MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ordering {
    #[default]
    ByGammaAsc,
    ByEpsilonAsc,
}

/// How the left eigenvector `<~Psi_l|` is obtained from the right one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeftOverlapRule {
    /// `<~Psi_l|j> = <j|Psi_l>` (complex symmetric operator, no conjugation).
    UnconjugatedTranspose,
}

/// Complete spectrum of the (possibly non-Hermitian) quantum Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumSpectrum {
    eigenvalues: Vec<Complex64>,
    vectors: DMatrix<Complex64>,
    ordering: Ordering,
}

impl QuantumSpectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `E_l = epsilon_l - i*gamma_l` in the stored ordering.
    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn epsilons(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e.re).collect()
    }

    pub fn gammas(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| -e.im).collect()
    }

    /// Right eigenvectors as columns: `vectors[(k-1, l-1)] = <k|Psi_l>`.
    pub fn right_vectors(&self) -> &DMatrix<Complex64> {
        &self.vectors
    }

    /// `<k|Psi_l>`, 1-based.
    pub fn amplitude(&self, k: usize, l: usize) -> Result<Complex64> {
        let n = self.dim();
        Ok(self.vectors[(check_node(k, n)?, check_node(l, n)?)])
    }

    /// `<~Psi_l|j>`, 1-based.
    pub fn left_amplitude(&self, l: usize, j: usize) -> Result<Complex64> {
        self.amplitude(j, l)
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    pub fn left_overlap_rule(&self) -> LeftOverlapRule {
        LeftOverlapRule::UnconjugatedTranspose
    }

    /// Number of modes with `gamma_l < threshold`.
    pub fn count_below(&self, threshold: f64) -> usize {
        self.eigenvalues.iter().filter(|e| -e.im < threshold).count()
    }

    pub fn reordered(&self, ordering: Ordering) -> Self {
        let cols: Vec<DVector<Complex64>> =
            self.vectors.column_iter().map(|c| c.into_owned()).collect();
        let pairs = self.eigenvalues.iter().copied().zip(cols).collect();
        assemble(pairs, ordering)
    }

    /// `max_{l,k} |<~Psi_l|Psi_k> - delta_lk|`.
    pub fn biorthogonality_error(&self) -> f64 {
        let g = self.vectors.transpose() * &self.vectors;
        max_dev_from_identity(&g)
    }

    /// `max_l ||H Psi_l - E_l Psi_l||_inf`.
    pub fn max_residual(&self, h: &DenseOperator) -> f64 {
        let hv = h.matrix() * &self.vectors;
        let mut worst = 0.0f64;
        for (l, e) in self.eigenvalues.iter().enumerate() {
            for k in 0..self.dim() {
                worst = worst.max((hv[(k, l)] - e * self.vectors[(k, l)]).norm());
            }
        }
        worst
    }

    /// `sum_l E_l |Psi_l><~Psi_l|`.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let mut scaled = self.vectors.clone();
        for (l, e) in self.eigenvalues.iter().enumerate() {
            for k in 0..self.dim() {
                scaled[(k, l)] *= e;
            }
        }
        scaled * self.vectors.transpose()
    }
}

/// Spectrum of the classical transfer matrix: eigenvalues `-lambda_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalSpectrum {
    lambdas: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl ClassicalSpectrum {
    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    /// Ascending decay rates.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// Orthonormal eigenvectors as columns: `vectors[(k-1, l-1)] = <k|Phi_l>`.
    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn amplitude(&self, k: usize, l: usize) -> Result<f64> {
        let n = self.dim();
        Ok(self.vectors[(check_node(k, n)?, check_node(l, n)?)])
    }

    /// Smallest rate and its index (0-based).
    pub fn dominant(&self) -> (usize, f64) {
        (0, self.lambdas[0])
    }

    pub fn orthonormality_error(&self) -> f64 {
        max_dev_from_identity(&(self.vectors.transpose() * &self.vectors))
    }

    /// `max_l ||T Phi_l + lambda_l Phi_l||_inf`.
    pub fn max_residual(&self, t: &DenseOperator) -> f64 {
        let tv = t.real_matrix() * &self.vectors;
        let mut worst = 0.0f64;
        for (l, lam) in self.lambdas.iter().enumerate() {
            for k in 0..self.dim() {
                worst = worst.max((tv[(k, l)] + lam * self.vectors[(k, l)]).abs());
            }
        }
        worst
    }
}

fn max_dev_from_identity<T: nalgebra::ComplexField<RealField = f64>>(g: &DMatrix<T>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { T::one() } else { T::zero() };
            worst = worst.max((g[(i, j)].clone() - target).modulus());
        }
    }
    worst
}

/// Full decomposition of the quantum Hamiltonian, ordered by ascending decay
/// rate.
pub fn decompose_quantum(h: &DenseOperator) -> Result<QuantumSpectrum> {
    decompose_quantum_ordered(h, Ordering::ByGammaAsc)
}

pub fn decompose_quantum_ordered(h: &DenseOperator, ordering: Ordering) -> Result<QuantumSpectrum> {
    let n = h.dim();
    let m = h.matrix();
    let is_real = h.kind() == OperatorKind::RealSymmetric || m.iter().all(|v| v.im == 0.0);

    let pairs = if is_real {
        let (vals, vecs) = real_symmetric_eigen(&h.real_matrix())?;
        vals.into_iter()
            .zip(vecs.column_iter())
            .map(|(e, c)| (Complex64::new(e, 0.0), c.map(|v| Complex64::new(v, 0.0))))
            .collect()
    } else {
        let sectors = mirror_sectors(m).unwrap_or_else(|| vec![DMatrix::identity(n, n)]);
        let mut pairs = Vec::with_capacity(n);
        let mut offset = 0;
        for basis in &sectors {
            let p = basis.map(|v| Complex64::new(v, 0.0));
            let block = p.transpose() * m * &p;
            let (vals, vecs) = complex_symmetric_eigen(&block, offset)?;
            let full = &p * vecs;
            for (e, c) in vals.into_iter().zip(full.column_iter()) {
                pairs.push((e, c.into_owned()));
            }
            offset += basis.ncols();
        }
        pairs
    };
    let spec = assemble(pairs, ordering);
    if let Some((l, g)) = spec
        .gammas()
        .into_iter()
        .enumerate()
        .find(|(_, g)| *g < -NEGATIVE_GAMMA_TOL)
    {
        return Err(Error::NegativeDecayRate { l: l + 1, gamma: g });
    }
    Ok(spec)
}

/// Full decomposition of the classical transfer matrix, `lambda` ascending.
pub fn decompose_classical(t: &DenseOperator) -> Result<ClassicalSpectrum> {
    if t.matrix().iter().any(|v| v.im != 0.0) {
        return Err(Error::WrongKind {
            expected: "real symmetric",
        });
    }
    let (vals, vecs) = real_symmetric_eigen(&t.real_matrix())?;
    let n = vals.len();
    let mut idx: Vec<usize> = (0..n).collect();
    let lambdas: Vec<f64> = vals.iter().map(|v| -v).collect();
    idx.sort_by(|&a, &b| {
        lambdas[a]
            .total_cmp(&lambdas[b])
            .then_with(|| argmax_abs(vecs.column(a).iter().map(|v| v.abs())).cmp(&argmax_abs(vecs.column(b).iter().map(|v| v.abs()))))
    });
    let mut out = DMatrix::zeros(n, n);
    for (dst, &src) in idx.iter().enumerate() {
        out.set_column(dst, &vecs.column(src));
    }
    Ok(ClassicalSpectrum {
        lambdas: idx.iter().map(|&i| lambdas[i]).collect(),
        vectors: out,
    })
}

/// Eigenpairs of a real symmetric matrix, each vector signed so its largest
/// component is positive.
fn real_symmetric_eigen(a: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let eig = SymmetricEigen::try_new(a.clone(), f64::EPSILON, MAX_ITER)
        .ok_or_else(|| Error::NotConverged("symmetric eigensolver".into()))?;
    let mut vecs = eig.eigenvectors;
    for mut col in vecs.column_iter_mut() {
        let i = argmax_abs(col.iter().map(|v| v.abs()));
        if col[i] < 0.0 {
            col.neg_mut();
        }
    }
    Ok((eig.eigenvalues.iter().copied().collect(), vecs))
}

/// Orthonormal bases of the even and odd sectors of the reflection
/// `j -> N + 1 - j`, or `None` when the matrix is not exactly mirror
/// symmetric.
fn mirror_sectors(m: &DMatrix<Complex64>) -> Option<Vec<DMatrix<f64>>> {
    let n = m.nrows();
    if n < 2 {
        return None;
    }
    for j in 0..n {
        for k in 0..n {
            if m[(j, k)] != m[(n - 1 - j, n - 1 - k)] {
                return None;
            }
        }
    }
    let half = n / 2;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let n_even = n - half;
    let mut even = DMatrix::zeros(n, n_even);
    let mut odd = DMatrix::zeros(n, half);
    for k in 0..half {
        even[(k, k)] = s;
        even[(n - 1 - k, k)] = s;
        odd[(k, k)] = s;
        odd[(n - 1 - k, k)] = -s;
    }
    if n % 2 == 1 {
        even[(half, half)] = 1.0;
    }
    Some(vec![even, odd])
}

/// Eigenpairs of a complex symmetric matrix via complex Schur and triangular
/// back-substitution, with bilinear normalisation. `offset` only shifts the
/// mode index reported in errors.
fn complex_symmetric_eigen(
    a: &DMatrix<Complex64>,
    offset: usize,
) -> Result<(Vec<Complex64>, DMatrix<Complex64>)> {
    let n = a.nrows();
    let (q, t) = Schur::try_new(a.clone(), SCHUR_EPS, MAX_ITER)
        .ok_or_else(|| Error::NotConverged("complex Schur iteration".into()))?
        .unpack();
    for i in 1..n {
        if t[(i, i - 1)].norm() > 0.0 {
            return Err(Error::NotConverged(format!(
                "Schur form not triangular at row {}",
                i + offset + 1
            )));
        }
    }
    let tnorm = t.iter().fold(0.0f64, |m, v| m.max(v.norm())).max(f64::MIN_POSITIVE);
    let small = f64::EPSILON * tnorm;

    let vals: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    let mut vecs = DMatrix::<Complex64>::zeros(n, n);
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        y.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        y[k] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for j in i + 1..=k {
                s += t[(i, j)] * y[j];
            }
            let mut d = t[(i, i)] - t[(k, k)];
            if d.norm() < small {
                d = Complex64::new(small, 0.0);
            }
            y[i] = -s / d;
        }
        let mut v = DVector::<Complex64>::zeros(n);
        for i in 0..=k {
            let yi = y[i];
            for r in 0..n {
                v[r] += q[(r, i)] * yi;
            }
        }
        let norm = v.norm();
        vecs.set_column(k, &(v / Complex64::new(norm, 0.0)));
    }

    // Re-orthogonalise clusters of (numerically) coincident eigenvalues in the
    // bilinear form; isolated eigenvalues are untouched apart from scaling.
    let cluster_tol = 1e-8 * tnorm.max(1.0);
    let mut done = vec![false; n];
    for k in 0..n {
        if done[k] {
            continue;
        }
        let mut cluster = vec![k];
        let mut i = 0;
        while i < cluster.len() {
            let c = cluster[i];
            for j in 0..n {
                if !cluster.contains(&j) && (vals[j] - vals[c]).norm() <= cluster_tol {
                    cluster.push(j);
                }
            }
            i += 1;
        }
        cluster.sort_unstable();
        for (pos, &c) in cluster.iter().enumerate() {
            done[c] = true;
            let mut v = vecs.column(c).into_owned();
            for &prev in &cluster[..pos] {
                let u = vecs.column(prev);
                let proj = u.transpose() * &v;
                v -= u * proj[(0, 0)];
            }
            let unit = v.norm();
            v /= Complex64::new(unit, 0.0);
            let b = (v.transpose() * &v)[(0, 0)];
            if b.norm() < MIN_BILINEAR_NORM {
                return Err(Error::NearDefective {
                    l: c + offset + 1,
                    norm: b.norm(),
                });
            }
            v /= b.sqrt();
            vecs.set_column(c, &v);
        }
    }
    Ok((vals, vecs))
}

fn argmax_abs(it: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, v) in it.enumerate() {
        if v > best_v {
            best = i;
            best_v = v;
        }
    }
    best
}

/// Applies the sign convention and ordering and packs the spectrum.
fn assemble(pairs: Vec<(Complex64, DVector<Complex64>)>, ordering: Ordering) -> QuantumSpectrum {
    let n = pairs.len();
    let mut items: Vec<(Complex64, DVector<Complex64>, usize)> = pairs
        .into_iter()
        .map(|(e, mut v)| {
            let i = argmax_abs(v.iter().map(|z| z.norm()));
            // Only an overall sign keeps the bilinear norm; fix it by the
            // largest component.
            if v[i].re < 0.0 || (v[i].re == 0.0 && v[i].im < 0.0) {
                v.neg_mut();
            }
            (e, v, i)
        })
        .collect();

    let by_gamma = |a: &(Complex64, DVector<Complex64>, usize), b: &(Complex64, DVector<Complex64>, usize)| {
        let (ga, gb) = (-a.0.im, -b.0.im);
        let primary = if (ga - gb).abs() <= GAMMA_TIE {
            CmpOrdering::Equal
        } else {
            ga.total_cmp(&gb)
        };
        primary
            .then_with(|| a.0.re.total_cmp(&b.0.re))
            .then_with(|| a.2.cmp(&b.2))
    };
    let by_eps = |a: &(Complex64, DVector<Complex64>, usize), b: &(Complex64, DVector<Complex64>, usize)| {
        a.0.re
            .total_cmp(&b.0.re)
            .then_with(|| (-a.0.im).total_cmp(&-b.0.im))
            .then_with(|| a.2.cmp(&b.2))
    };
    match ordering {
        Ordering::ByGammaAsc => items.sort_by(by_gamma),
        Ordering::ByEpsilonAsc => items.sort_by(by_eps),
    }

    let mut vectors = DMatrix::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    for (l, (e, v, _)) in items.into_iter().enumerate() {
        eigenvalues.push(e);
        vectors.set_column(l, &v);
    }
    QuantumSpectrum {
        eigenvalues,
        vectors,
        ordering,
    }
}
