//! Matrix exponential by scaling and squaring on a degree-13 Padé
//! approximant.
//!
//! Used only as an oracle for the spectral propagators; it never touches an
//! eigendecomposition.

use nalgebra::{ComplexField, DMatrix};

use crate::{Error, Result};

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Largest 1-norm for which the unscaled degree-13 approximant is accurate to
/// double precision.
const THETA13: f64 = 5.371920351148152;

fn norm1<T: ComplexField<RealField = f64>>(a: &DMatrix<T>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|v| v.clone().modulus()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(A)` for a square real or complex matrix.
pub fn expm<T: ComplexField<RealField = f64>>(a: &DMatrix<T>) -> Result<DMatrix<T>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.ncols(),
        });
    }
    if a.iter().any(|v| !v.clone().is_finite()) {
        return Err(Error::NonFinite("matrix exponential input".into()));
    }
    let norm = norm1(a);
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let scale = T::from_real(2f64.powi(-squarings));
    let a = a.map(|v| v * scale.clone());

    let c = |i: usize| T::from_real(PADE13[i]);
    let id = DMatrix::<T>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * (&a6 * c(13) + &a4 * c(11) + &a2 * c(9))
        + &a6 * c(7)
        + &a4 * c(5)
        + &a2 * c(3)
        + &id * c(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * c(12) + &a4 * c(10) + &a2 * c(8))
        + &a6 * c(6)
        + &a4 * c(4)
        + &a2 * c(2)
        + &id * c(0);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .ok_or_else(|| Error::NonFinite("singular Padé denominator".into()))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    if r.iter().any(|v| !v.clone().is_finite()) {
        return Err(Error::NonFinite("matrix exponential overflow".into()));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    /// Plain Taylor series, adequate for small norms.
    fn taylor(a: &DMatrix<Complex64>, terms: usize) -> DMatrix<Complex64> {
        let n = a.nrows();
        let mut sum = DMatrix::identity(n, n);
        let mut term = DMatrix::identity(n, n);
        for k in 1..terms {
            term = &term * a / Complex64::new(k as f64, 0.0);
            sum += &term;
        }
        sum
    }

    fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        a.iter().zip(b.iter()).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
    }

    #[test]
    fn zero_and_diagonal() {
        let z = DMatrix::<f64>::zeros(4, 4);
        assert_eq!(expm(&z).unwrap(), DMatrix::identity(4, 4));
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-30.0, 0.5, 2.0]));
        let e = expm(&d).unwrap();
        assert_relative_eq!(e[(0, 0)], (-30f64).exp(), max_relative = 1e-13);
        assert_relative_eq!(e[(2, 2)], 2f64.exp(), max_relative = 1e-13);
    }

    #[test]
    fn rotation_generator() {
        let th = 37.3;
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -th, th, 0.0]);
        let e = expm(&a).unwrap();
        assert!((e[(0, 0)] - th.cos()).abs() < 1e-12);
        assert!((e[(1, 0)] - th.sin()).abs() < 1e-12);
    }

    #[test]
    fn matches_taylor_for_small_norm() {
        let a = DMatrix::from_fn(5, 5, |i, j| {
            Complex64::new(((i * 7 + j * 3) % 5) as f64 * 0.1 - 0.2, (i as f64 - j as f64) * 0.05)
        });
        assert!(max_diff(&expm(&a).unwrap(), &taylor(&a, 40)) < 1e-14);
    }

    #[test]
    fn unitary_with_squaring() {
        // exp(-iH) for Hermitian H with norm well above the scaling threshold
        let h = DMatrix::from_fn(6, 6, |i, j| {
            let re = ((i + j) % 4) as f64 * 3.0;
            let im = if i == j { 0.0 } else { (i as f64 - j as f64) * 1.5 };
            Complex64::new(re, im)
        });
        let u = expm(&(h * Complex64::new(0.0, -1.0))).unwrap();
        let prod = &u * u.adjoint();
        assert!(max_diff(&prod, &DMatrix::identity(6, 6)) < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let a = DMatrix::<f64>::zeros(2, 3);
        assert!(expm(&a).is_err());
        let mut b = DMatrix::<f64>::zeros(2, 2);
        b[(0, 1)] = f64::NAN;
        assert!(expm(&b).is_err());
    }
}
