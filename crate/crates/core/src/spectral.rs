// SPDX-License-Identifier: Apache-2.0

//! Largest eigenvalue, Perron vector, spectra and the pole guard for the
//! resolvent `(I − βA)⁻¹`.
//!
//! `lambda_max` and `perron_vector` run power iteration from the all-ones
//! vector first and fall back to a full symmetric eigendecomposition when it
//! does not converge or its residual is too large.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Relative width of the excluded band around each pole `1/λ`.
pub const POLE_EPSILON: f64 = 1e-8;

const POWER_TOLERANCE: f64 = 1e-12;
const POWER_MAX_ITERATIONS: usize = 10_000;
const RESIDUAL_TOLERANCE: f64 = 1e-10;
/// Caps power iteration at about this many multiply-adds before falling back.
const POWER_WORK_BUDGET: f64 = 2e9;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralInfo {
    pub lambda_max: f64,
    pub perron_vector: DVector<f64>,
    /// All eigenvalues in descending order, when requested.
    pub spectrum: Option<Vec<f64>>,
}

pub fn is_symmetric(a: &DMatrix<f64>) -> bool {
    if !a.is_square() {
        return false;
    }
    let scale = a.amax().max(1.0);
    let n = a.nrows();
    (0..n).all(|i| (0..i).all(|k| (a[(i, k)] - a[(k, i)]).abs() <= 1e-12 * scale))
}

fn require_symmetric(a: &DMatrix<f64>) -> Result<()> {
    if is_symmetric(a) {
        Ok(())
    } else {
        Err(Error::NotSymmetric)
    }
}

fn symmetrized(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

/// Power iteration for entrywise non-negative matrices. `None` when it does
/// not converge, the matrix has negative entries, or the result fails the
/// residual check.
fn power_iteration(a: &DMatrix<f64>) -> Option<(f64, DVector<f64>)> {
    let n = a.nrows();
    if n == 0 || a.iter().any(|&x| x < 0.0) {
        return None;
    }
    // Iterating on A + cI with c the mean row sum keeps the top eigenvector
    // but stops the ±λ oscillation on bipartite graphs. c ≤ λmax here.
    let shift = a.sum() / n as f64;
    let budget = (POWER_WORK_BUDGET / (n * n) as f64) as usize;
    let mut v = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut converged = false;
    for _ in 0..POWER_MAX_ITERATIONS.min(budget.max(100)) {
        let mut w = a * &v + &v * shift;
        let norm = w.norm();
        if norm == 0.0 {
            return None;
        }
        w /= norm;
        let step = (&w - &v).norm();
        v = w;
        if step < POWER_TOLERANCE {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    let av = a * &v;
    let lambda = v.dot(&av);
    let residual = (av - &v * lambda).norm();
    if lambda > 0.0 && residual <= RESIDUAL_TOLERANCE * a.norm().max(f64::MIN_POSITIVE) {
        Some((lambda, v))
    } else {
        None
    }
}

fn full_top_pair(a: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let eig = SymmetricEigen::new(symmetrized(a));
    let (idx, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .expect("non-empty matrix");
    (lambda, eig.eigenvectors.column(idx).into_owned())
}

fn top_pair(a: &DMatrix<f64>) -> (f64, DVector<f64>) {
    power_iteration(a).unwrap_or_else(|| full_top_pair(a))
}

/// Largest eigenvalue of a symmetric matrix.
pub fn lambda_max(a: &DMatrix<f64>) -> Result<f64> {
    require_symmetric(a)?;
    if a.nrows() == 0 {
        return Ok(0.0);
    }
    Ok(top_pair(a).0)
}

/// Largest absolute eigenvalue of a symmetric matrix. Equal to
/// [`lambda_max`] for non-negative matrices.
pub fn spectral_radius(a: &DMatrix<f64>) -> Result<f64> {
    require_symmetric(a)?;
    if a.iter().all(|&x| x >= 0.0) {
        return lambda_max(a);
    }
    Ok(spectrum(a)?.iter().fold(0.0f64, |m, l| m.max(l.abs())))
}

/// Unit eigenvector for the largest eigenvalue, signed so that its
/// largest-magnitude entry is positive.
pub fn perron_vector(a: &DMatrix<f64>) -> Result<DVector<f64>> {
    Ok(perron_pair(a)?.1)
}

pub fn perron_pair(a: &DMatrix<f64>) -> Result<(f64, DVector<f64>)> {
    require_symmetric(a)?;
    if a.nrows() == 0 {
        return Err(Error::ZeroSpectrum);
    }
    let (lambda, mut v) = top_pair(a);
    if lambda <= 1e-14 * a.amax() || lambda == 0.0 {
        return Err(Error::ZeroSpectrum);
    }
    let lead = v.iamax();
    if v[lead] < 0.0 {
        v.neg_mut();
    }
    v /= v.norm();
    Ok((lambda, v))
}

/// All eigenvalues of a symmetric matrix, descending.
pub fn spectrum(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    require_symmetric(a)?;
    let mut values: Vec<f64> = symmetrized(a).symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

pub fn spectral_info(a: &DMatrix<f64>, full_spectrum: bool) -> Result<SpectralInfo> {
    let (lambda_max, perron_vector) = perron_pair(a)?;
    let spectrum = if full_spectrum { Some(spectrum(a)?) } else { None };
    Ok(SpectralInfo {
        lambda_max,
        perron_vector,
        spectrum,
    })
}

/// Outcome of the pole guard for one `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleCheck {
    pub is_pole: bool,
    /// `min |β − 1/λ|` over nonzero eigenvalues; infinite if there are none.
    pub nearest_pole_distance: f64,
    /// The eigenvalue whose pole is nearest.
    pub nearest_eigenvalue: Option<f64>,
    pub spectral_radius: f64,
}

impl PoleCheck {
    pub fn into_result(self, beta: f64) -> Result<Self> {
        if self.is_pole {
            Err(Error::Pole {
                beta,
                lambda: self.nearest_eigenvalue.unwrap_or(f64::NAN),
                distance: self.nearest_pole_distance,
            })
        } else {
            Ok(self)
        }
    }
}

/// Pole guard from a precomputed list of real eigenvalues.
pub fn pole_check_eigenvalues(beta: f64, eigenvalues: &[f64]) -> PoleCheck {
    let radius = eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let mut nearest = f64::INFINITY;
    let mut nearest_eigenvalue = None;
    for &lambda in eigenvalues {
        if lambda.abs() <= 1e-12 * radius || lambda == 0.0 {
            continue;
        }
        let d = (beta - 1.0 / lambda).abs();
        if d < nearest {
            nearest = d;
            nearest_eigenvalue = Some(lambda);
        }
    }
    let band = if radius > 0.0 {
        POLE_EPSILON * (beta.abs() + 1.0 / radius)
    } else {
        0.0
    };
    PoleCheck {
        is_pole: nearest <= band,
        nearest_pole_distance: nearest,
        nearest_eigenvalue,
        spectral_radius: radius,
    }
}

/// Pole guard for any square matrix. Symmetric matrices use the symmetric
/// eigensolver; others use the real parts of (numerically) real eigenvalues
/// from a Schur decomposition.
pub fn pole_check(beta: f64, a: &DMatrix<f64>) -> Result<PoleCheck> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{:?}", a.shape()),
        });
    }
    let eigenvalues = real_eigenvalues(a);
    Ok(pole_check_eigenvalues(beta, &eigenvalues))
}

/// Real eigenvalues of any square matrix (complex pairs are dropped).
pub fn real_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    if a.nrows() == 0 {
        return Vec::new();
    }
    if is_symmetric(a) {
        return symmetrized(a).symmetric_eigenvalues().iter().copied().collect();
    }
    let values = a.clone().complex_eigenvalues();
    let scale = values.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    values
        .iter()
        .filter(|c| c.im.abs() <= 1e-10 * scale.max(1.0))
        .map(|c| c.re)
        .collect()
}

pub fn is_pole(beta: f64, a: &DMatrix<f64>) -> Result<bool> {
    Ok(pole_check(beta, a)?.is_pole)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn det3(a: &DMatrix<f64>, lambda: f64) -> f64 {
        let m = |i, j| a[(i, j)] - if i == j { lambda } else { 0.0 };
        m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
    }

    /// Largest root of the characteristic polynomial by bisection above the
    /// Gershgorin bound, scanning downward for the first sign change.
    fn largest_char_root(a: &DMatrix<f64>) -> f64 {
        let bound = (0..3).map(|i| a.row(i).abs().sum()).fold(0.0, f64::max) + 1.0;
        let steps = 10_000;
        let mut hi = bound;
        let sign_hi = det3(a, hi).signum();
        let mut lo = hi;
        for s in 1..=steps {
            lo = bound - 2.0 * bound * s as f64 / steps as f64;
            if det3(a, lo).signum() != sign_hi {
                break;
            }
            hi = lo;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if det3(a, mid).signum() == sign_hi {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn lambda_max_examples() {
        assert_relative_eq!(
            lambda_max(&DMatrix::from_element(2, 2, 1.0)).unwrap(),
            2.0,
            max_relative = 1e-10
        );
        assert_relative_eq!(lambda_max(&DMatrix::identity(3, 3)).unwrap(), 1.0, max_relative = 1e-10);

        let w = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 1.0, 1.0, 0.0, 1.0]);
        let a = &w * w.transpose();
        let oracle = largest_char_root(&a);
        assert_relative_eq!(oracle, 3.0, max_relative = 1e-12);
        assert_relative_eq!(lambda_max(&a).unwrap(), oracle, max_relative = 1e-10);
    }

    #[test]
    fn zero_matrix_has_zero_lambda_and_no_perron_vector() {
        let a = DMatrix::zeros(3, 3);
        assert_eq!(lambda_max(&a).unwrap(), 0.0);
        assert!(matches!(perron_vector(&a), Err(Error::ZeroSpectrum)));
    }

    #[test]
    fn rejects_asymmetric_input() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(lambda_max(&a), Err(Error::NotSymmetric)));
    }

    #[test]
    fn perron_vector_examples() {
        let v = perron_vector(&DMatrix::from_element(2, 2, 1.0)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(v, DVector::from_vec(vec![h, h]), epsilon = 1e-12);

        let v = perron_vector(&DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0]))).unwrap();
        assert_relative_eq!(v, DVector::from_vec(vec![1.0, 0.0]), epsilon = 1e-10);

        // Path P3 is bipartite, so the iteration only settles thanks to the
        // shift. Closed form (1, √2, 1)/2, also checked on the full solver.
        let p3 = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
        let v = perron_vector(&p3).unwrap();
        let closed = DVector::from_vec(vec![0.5, std::f64::consts::SQRT_2 / 2.0, 0.5]);
        assert_relative_eq!(v, closed, epsilon = 1e-10);
        let (l, mut u) = full_top_pair(&p3);
        if u[1] < 0.0 {
            u.neg_mut();
        }
        assert_relative_eq!(l, std::f64::consts::SQRT_2, epsilon = 1e-12);
        assert_relative_eq!(u, closed, epsilon = 1e-10);
    }

    #[test]
    fn pole_examples() {
        let a = DMatrix::from_element(2, 2, 1.0);
        let at_zero = pole_check(0.0, &a).unwrap();
        assert!(!at_zero.is_pole);
        assert!(pole_check(0.5, &a).unwrap().is_pole);
        let near = pole_check(0.4, &a).unwrap();
        assert!(!near.is_pole);
        assert_relative_eq!(near.nearest_pole_distance, 0.1, epsilon = 1e-12);
        assert!(matches!(
            pole_check(0.5, &a).unwrap().into_result(0.5),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn asymmetric_pole_check_uses_real_eigenvalues() {
        // Upper triangular: eigenvalues 2 and 0.5.
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 0.5]);
        assert!(pole_check(0.5, &a).unwrap().is_pole);
        assert!(pole_check(2.0, &a).unwrap().is_pole);
        assert!(!pole_check(1.0, &a).unwrap().is_pole);
    }

    fn sym_nonneg(max_n: usize) -> impl Strategy<Value = DMatrix<f64>> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(prop_oneof![Just(0.0), 0.0..1.0f64], n * n).prop_map(move |v| {
                let m = DMatrix::from_vec(n, n, v);
                &m + m.transpose()
            })
        })
    }

    proptest! {
        #[test]
        fn perron_residual_is_small(a in sym_nonneg(12)) {
            prop_assume!(a.amax() > 0.0);
            let (l, v) = perron_pair(&a).unwrap();
            prop_assert!((v.norm() - 1.0).abs() <= 1e-10);
            prop_assert!((&a * &v - &v * l).norm() <= 1e-8 * a.norm());
            let spec = spectrum(&a).unwrap();
            prop_assert!(spec.iter().all(|&x| x <= l + 1e-9 * l.abs().max(1.0)));
        }

        #[test]
        fn lambda_max_is_homogeneous(a in sym_nonneg(10), s in 0.01..10.0f64) {
            let l = lambda_max(&a).unwrap();
            let ls = lambda_max(&(&a * s)).unwrap();
            prop_assert!((ls - s * l).abs() <= 1e-10 * (s * l).abs().max(f64::MIN_POSITIVE));
        }

        #[test]
        fn gram_spectra_share_nonzero_eigenvalues(
            v in proptest::collection::vec(0.0..=1.0f64, 6 * 4),
        ) {
            let w = DMatrix::from_vec(6, 4, v);
            let big = spectrum(&(&w * w.transpose())).unwrap();
            let small = spectrum(&(w.transpose() * &w)).unwrap();
            for (x, y) in big.iter().zip(small.iter()) {
                prop_assert!((x - y).abs() <= 1e-9);
            }
            prop_assert!(big[small.len()..].iter().all(|x| x.abs() <= 1e-9));
        }
    }
}
