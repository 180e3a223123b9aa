use faer::Mat;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use svshrink_core::check_signal;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorModel {
    /// Singular vectors drawn from the Haar measure on orthonormal frames.
    #[default]
    Haar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSpec {
    pub m: usize,
    pub n: usize,
    /// Strictly decreasing positive singular values.
    pub x: Vec<f64>,
    #[serde(default)]
    pub vector_model: VectorModel,
}

impl SignalSpec {
    pub fn new(m: usize, n: usize, x: Vec<f64>) -> Result<Self> {
        let spec = SignalSpec {
            m,
            n,
            x,
            vector_model: VectorModel::Haar,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_signal(&self.x)?;
        if !(self.x.len() <= self.m && self.m <= self.n) {
            return Err(Error::Config(format!(
                "signal spec needs rank <= m <= n, got rank {} with {}x{}",
                self.x.len(),
                self.m,
                self.n
            )));
        }
        Ok(())
    }

    pub fn beta(&self) -> f64 {
        self.m as f64 / self.n as f64
    }
}

/// `X = Ũ diag(x) Ṽ'` with the factors kept for cosine measurements.
#[derive(Debug, Clone)]
pub struct Signal {
    pub matrix: Mat<f64>,
    /// `m × r`.
    pub left: Mat<f64>,
    pub x: Vec<f64>,
    /// `n × r`.
    pub right: Mat<f64>,
}

/// Orthonormal `rows × cols` frame from a Gaussian block.
///
/// Gram–Schmidt (applied twice) yields the QR factor with positive `R`
/// diagonal, which is exactly Haar distributed and fixes every sign.
fn haar_frame<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Mat<f64> {
    let mut q = Mat::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal));
    for j in 0..cols {
        for _ in 0..2 {
            for k in 0..j {
                let dot: f64 = (0..rows).map(|i| q[(i, k)] * q[(i, j)]).sum();
                for i in 0..rows {
                    let qk = q[(i, k)];
                    q[(i, j)] -= dot * qk;
                }
            }
        }
        let norm = (0..rows).map(|i| q[(i, j)] * q[(i, j)]).sum::<f64>().sqrt();
        for i in 0..rows {
            q[(i, j)] /= norm;
        }
    }
    q
}

pub fn make_signal<R: Rng + ?Sized>(spec: &SignalSpec, rng: &mut R) -> Result<Signal> {
    spec.validate()?;
    let r = spec.x.len();
    let left = haar_frame(spec.m, r, rng);
    let right = haar_frame(spec.n, r, rng);
    let scaled = Mat::from_fn(spec.m, r, |i, k| left[(i, k)] * spec.x[k]);
    let matrix = &scaled * right.transpose();
    Ok(Signal {
        matrix,
        left,
        x: spec.x.clone(),
        right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius_norm, svd};
    use crate::sim::trial_rng;

    #[test]
    fn rank_one_unit_norm() {
        let spec = SignalSpec::new(40, 60, vec![1.0]).unwrap();
        let s = make_signal(&spec, &mut trial_rng(1, 0)).unwrap();
        assert!((frobenius_norm(&s.matrix) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn spectrum_is_exact() {
        let spec = SignalSpec::new(30, 50, vec![5.0, 3.0, 0.5]).unwrap();
        let s = make_signal(&spec, &mut trial_rng(2, 0)).unwrap();
        let f = svd(&s.matrix).unwrap();
        for (k, x) in spec.x.iter().enumerate() {
            assert!((f.singular_values[k] - x).abs() < 1e-10);
        }
        assert!(f.singular_values[3] < 1e-10);
        for j in 0..3 {
            assert!(s.left[(0, j)].is_finite());
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(SignalSpec::new(10, 20, vec![1.0, 2.0]).is_err());
        assert!(SignalSpec::new(30, 20, vec![1.0]).is_err());
        assert!(SignalSpec::new(2, 20, vec![3.0, 2.0, 1.0]).is_err());
    }

    #[test]
    fn vectors_are_delocalized() {
        // ‖ũ‖_∞ ≤ C log(m)/√m with C = 10
        let m = 400;
        let spec = SignalSpec::new(m, m, vec![2.0, 1.0]).unwrap();
        for seed in 0..5 {
            let s = make_signal(&spec, &mut trial_rng(seed, 0)).unwrap();
            let bound = 10.0 * (m as f64).ln() / (m as f64).sqrt();
            for k in 0..2 {
                let max = (0..m).map(|i| s.left[(i, k)].abs()).fold(0.0, f64::max);
                assert!(max <= bound, "{max} > {bound}");
            }
        }
    }
}
