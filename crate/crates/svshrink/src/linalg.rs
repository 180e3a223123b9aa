//! Dense SVD and low-rank reconstruction on top of `faer`.

use faer::Mat;

use crate::{Error, Result};

/// Thin SVD `Y = U diag(s) V'` with `k = min(m, n)` components.
#[derive(Debug, Clone)]
pub struct SvdFactorization {
    /// Descending, nonnegative.
    pub singular_values: Vec<f64>,
    /// `m × k`, orthonormal columns.
    pub left_vectors: Mat<f64>,
    /// `n × k`, orthonormal columns.
    pub right_vectors: Mat<f64>,
}

impl SvdFactorization {
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    /// `Σ coeffs[i] u_i v_i'`, skipping zero coefficients.
    pub fn reconstruct(&self, coeffs: &[f64]) -> Mat<f64> {
        let m = self.left_vectors.nrows();
        let n = self.right_vectors.nrows();
        let kept: Vec<(usize, f64)> = coeffs
            .iter()
            .copied()
            .enumerate()
            .take(self.rank())
            .filter(|(_, c)| *c != 0.0)
            .collect();
        if kept.is_empty() {
            return Mat::zeros(m, n);
        }
        let u = Mat::from_fn(m, kept.len(), |i, j| self.left_vectors[(i, kept[j].0)] * kept[j].1);
        let v = Mat::from_fn(n, kept.len(), |i, j| self.right_vectors[(i, kept[j].0)]);
        &u * v.transpose()
    }
}

/// Rejects NaN and infinite entries, reporting the first offender.
pub fn check_finite(y: &Mat<f64>) -> Result<()> {
    for j in 0..y.ncols() {
        for i in 0..y.nrows() {
            if !y[(i, j)].is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

pub fn svd(y: &Mat<f64>) -> Result<SvdFactorization> {
    check_finite(y)?;
    if y.nrows() == 0 || y.ncols() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let dec = y.thin_svd().map_err(|e| Error::Svd(format!("{e:?}")))?;
    let s = dec.S().column_vector();
    let singular_values: Vec<f64> = (0..s.nrows()).map(|i| s[i]).collect();
    let fact = SvdFactorization {
        singular_values,
        left_vectors: dec.U().to_owned(),
        right_vectors: dec.V().to_owned(),
    };
    debug_assert!(fact.singular_values.windows(2).all(|w| w[0] >= w[1]));
    Ok(fact)
}

/// Singular values only, descending.
pub fn singular_values(y: &Mat<f64>) -> Result<Vec<f64>> {
    check_finite(y)?;
    if y.nrows() == 0 || y.ncols() == 0 {
        return Err(Error::EmptyMatrix);
    }
    y.singular_values().map_err(|e| Error::Svd(format!("{e:?}")))
}

pub fn frobenius_norm(y: &Mat<f64>) -> f64 {
    let mut acc = 0.0;
    for j in 0..y.ncols() {
        for i in 0..y.nrows() {
            acc += y[(i, j)] * y[(i, j)];
        }
    }
    acc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_has_unit_values() {
        let eye = Mat::<f64>::identity(3, 3);
        let f = svd(&eye).unwrap();
        for s in &f.singular_values {
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn diagonal_is_axis_aligned() {
        let d = Mat::from_fn(3, 3, |i, j| if i == j { [3.0, 2.0, 1.0][i] } else { 0.0 });
        let f = svd(&d).unwrap();
        assert_eq!(f.rank(), 3);
        for (k, expected) in [3.0, 2.0, 1.0].iter().enumerate() {
            assert!((f.singular_values[k] - expected).abs() < 1e-14);
            assert!((f.left_vectors[(k, k)].abs() - 1.0).abs() < 1e-12);
            assert!((f.right_vectors[(k, k)].abs() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn random_rectangular_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (m, n) in [(50, 80), (80, 50)] {
            let y = Mat::from_fn(m, n, |_, _| rng.random::<f64>() - 0.5);
            let f = svd(&y).unwrap();
            let k = m.min(n);
            assert_eq!(f.singular_values.len(), k);
            assert!(f.singular_values.windows(2).all(|w| w[0] >= w[1]));
            let back = f.reconstruct(&f.singular_values);
            let err = frobenius_norm(&(&back - &y)) / frobenius_norm(&y);
            assert!(err <= 1e-8, "relative error {err}");
            let utu = f.left_vectors.transpose() * &f.left_vectors;
            let vtv = f.right_vectors.transpose() * &f.right_vectors;
            for i in 0..k {
                for j in 0..k {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    assert!((utu[(i, j)] - delta).abs() < 1e-8);
                    assert!((vtv[(i, j)] - delta).abs() < 1e-8);
                }
            }
            let values = singular_values(&y).unwrap();
            for (a, b) in values.iter().zip(&f.singular_values) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_non_finite() {
        let mut y = Mat::<f64>::zeros(2, 3);
        y[(1, 2)] = f64::NAN;
        assert!(matches!(svd(&y), Err(Error::NonFinite { row: 1, col: 2 })));
    }
}
