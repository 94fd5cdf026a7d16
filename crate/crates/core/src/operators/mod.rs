//! Linear operators: the m×n measurement map applied to signals, the
//! redundant analysis operators, and the synthesis dictionaries.
//!
//! Every operator exposes a matched `apply`/`adjoint` pair; the adjoint
//! is the true adjoint of the map seen as a real-linear operator.
//! Operators are immutable after construction and safe to share across
//! threads; randomized constructors take an explicit seed.

mod analysis;
mod dictionary;
mod fourier;
mod mask;
mod noise;

pub use analysis::{build_finite_difference, AnalysisOperator};
pub use dictionary::{build_local_dct, SynthesisDictionary};
pub use mask::{MaskPattern, SamplingMask};
pub use noise::{sample_laplace_noise, scale_noise_to_ratio};

use crate::error::{Error, Result};
use crate::linalg::{derived_rng, DenseMatrix};
use fourier::Fft2;
use std::sync::Arc;

/// An m×n real-linear measurement map with a matched adjoint.
///
/// Complex-valued measurements (the subsampled Fourier kind) are
/// represented as real vectors of doubled length, real parts first and
/// imaginary parts second, so the whole pipeline stays real-valued.
#[derive(Clone)]
pub struct MeasurementOperator {
    rows: usize,
    cols: usize,
    kind: OperatorKind,
}

#[derive(Clone)]
enum OperatorKind {
    Identity,
    Dense(Arc<DenseMatrix>),
    /// Dense matrix with i.i.d. standard-normal entries (unit variance,
    /// deliberately not 1/sqrt(m)-normalized).
    Gaussian { seed: u64, matrix: Arc<DenseMatrix> },
    SubsampledFourier { mask: Arc<SamplingMask>, fft: Arc<Fft2> },
    Composite { outer: Arc<MeasurementOperator>, inner: Arc<MeasurementOperator> },
}

impl MeasurementOperator {
    pub fn identity(n: usize) -> Self {
        MeasurementOperator {
            rows: n,
            cols: n,
            kind: OperatorKind::Identity,
        }
    }

    pub fn dense(matrix: DenseMatrix) -> Self {
        MeasurementOperator {
            rows: matrix.rows,
            cols: matrix.cols,
            kind: OperatorKind::Dense(Arc::new(matrix)),
        }
    }

    /// m×n matrix with entries drawn i.i.d. from the standard normal
    /// distribution, reproducible from the seed.
    pub fn gaussian(rows: usize, cols: usize, seed: u64) -> Self {
        let mut rng = derived_rng(seed, &[0x6d61_7472, rows as u64, cols as u64]);
        let matrix = DenseMatrix::gaussian(rows, cols, &mut rng);
        MeasurementOperator {
            rows,
            cols,
            kind: OperatorKind::Gaussian {
                seed,
                matrix: Arc::new(matrix),
            },
        }
    }

    /// Samples the 2-D unitary DFT of an image at the mask's selected
    /// frequencies. Output length is 2·|selected| (real parts, then
    /// imaginary parts).
    pub fn subsampled_fourier(mask: SamplingMask) -> Self {
        let n = mask.height() * mask.width();
        let m = 2 * mask.selected().len();
        let fft = Fft2::new(mask.height(), mask.width());
        MeasurementOperator {
            rows: m,
            cols: n,
            kind: OperatorKind::SubsampledFourier {
                mask: Arc::new(mask),
                fft: Arc::new(fft),
            },
        }
    }

    /// outer ∘ inner. Requires outer.cols == inner.rows.
    pub fn composite(outer: MeasurementOperator, inner: MeasurementOperator) -> Result<Self> {
        if outer.cols != inner.rows {
            return Err(Error::Shape {
                context: "MeasurementOperator::composite",
                expected: outer.cols,
                got: inner.rows,
            });
        }
        Ok(MeasurementOperator {
            rows: outer.rows,
            cols: inner.cols,
            kind: OperatorKind::Composite {
                outer: Arc::new(outer),
                inner: Arc::new(inner),
            },
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            OperatorKind::Identity => "identity",
            OperatorKind::Dense(_) => "dense-matrix",
            OperatorKind::Gaussian { .. } => "gaussian-random",
            OperatorKind::SubsampledFourier { .. } => "subsampled-fourier",
            OperatorKind::Composite { .. } => "composite",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match &self.kind {
            OperatorKind::Gaussian { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    /// Dense column j, available for matrix-backed kinds. Used by the
    /// least-squares solver to avoid full applies on support bases.
    pub(crate) fn dense_column(&self, j: usize) -> Option<Vec<f64>> {
        match &self.kind {
            OperatorKind::Dense(m) | OperatorKind::Gaussian { matrix: m, .. } => Some(m.column(j)),
            _ => None,
        }
    }

    /// y = A x.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::Shape {
                context: "MeasurementOperator::apply",
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok(match &self.kind {
            OperatorKind::Identity => x.to_vec(),
            OperatorKind::Dense(m) | OperatorKind::Gaussian { matrix: m, .. } => m.matvec(x),
            OperatorKind::SubsampledFourier { mask, fft } => {
                let spectrum = fft.forward_unitary(x);
                let sel = mask.selected();
                let mut out = vec![0.0; 2 * sel.len()];
                for (i, &idx) in sel.iter().enumerate() {
                    out[i] = spectrum[idx].re;
                    out[sel.len() + i] = spectrum[idx].im;
                }
                out
            }
            OperatorKind::Composite { outer, inner } => outer.apply(&inner.apply(x)?)?,
        })
    }

    /// x = A* y. For the subsampled Fourier kind this is the real part
    /// of the unitary inverse DFT of the zero-filled spectrum, which
    /// makes ⟨Ax, y⟩ = ⟨x, A*y⟩ hold exactly.
    pub fn adjoint(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.rows {
            return Err(Error::Shape {
                context: "MeasurementOperator::adjoint",
                expected: self.rows,
                got: y.len(),
            });
        }
        Ok(match &self.kind {
            OperatorKind::Identity => y.to_vec(),
            OperatorKind::Dense(m) | OperatorKind::Gaussian { matrix: m, .. } => m.adjoint_vec(y),
            OperatorKind::SubsampledFourier { mask, fft } => {
                let sel = mask.selected();
                let mut spectrum = vec![fourier::Complex64::new(0.0, 0.0); self.cols];
                for (i, &idx) in sel.iter().enumerate() {
                    spectrum[idx] = fourier::Complex64::new(y[i], y[sel.len() + i]);
                }
                fft.inverse_unitary_real(spectrum)
            }
            OperatorKind::Composite { outer, inner } => inner.adjoint(&outer.adjoint(y)?)?,
        })
    }
}

impl std::fmt::Debug for MeasurementOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MeasurementOperator")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("kind", &self.kind_name())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dot, norm2, standard_normal_vec};

    fn adjoint_identity_error(op: &MeasurementOperator, probes: usize, seed: u64) -> f64 {
        let mut rng = derived_rng(seed, &[0xad01]);
        let mut worst = 0.0f64;
        for _ in 0..probes {
            let x = standard_normal_vec(&mut rng, op.cols());
            let y = standard_normal_vec(&mut rng, op.rows());
            let ax = op.apply(&x).unwrap();
            let aty = op.adjoint(&y).unwrap();
            let lhs = dot(&ax, &y);
            let rhs = dot(&x, &aty);
            let scale = norm2(&ax) * norm2(&y);
            if scale > 0.0 {
                worst = worst.max((lhs - rhs).abs() / scale);
            }
        }
        worst
    }

    #[test]
    fn identity_apply_and_adjoint() {
        let op = MeasurementOperator::identity(3);
        assert_eq!(op.apply(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(op.adjoint(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn dense_apply_matches_hand_arithmetic() {
        let a = DenseMatrix::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let op = MeasurementOperator::dense(a);
        assert_eq!(op.apply(&[1.0, 1.0]).unwrap(), vec![3.0, 7.0]);
        assert_eq!(op.adjoint(&[1.0, 0.0]).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn gaussian_at_zero_is_zero() {
        let op = MeasurementOperator::gaussian(5, 4, 7);
        let out = op.apply(&[0.0; 4]).unwrap();
        assert!(out.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gaussian_is_reproducible_per_seed() {
        let a = MeasurementOperator::gaussian(6, 5, 42);
        let b = MeasurementOperator::gaussian(6, 5, 42);
        let x = vec![1.0, -0.5, 2.0, 0.0, 3.0];
        assert_eq!(a.apply(&x).unwrap(), b.apply(&x).unwrap());
    }

    #[test]
    fn gaussian_column_variance_is_near_unit() {
        let m = 400;
        let op = MeasurementOperator::gaussian(m, 3, 11);
        for j in 0..3 {
            let col = op.dense_column(j).unwrap();
            let mean: f64 = col.iter().sum::<f64>() / m as f64;
            let var: f64 = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
            assert!((0.8..=1.2).contains(&var), "column {j} variance {var}");
        }
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let op = MeasurementOperator::gaussian(5, 4, 7);
        assert!(op.apply(&[0.0; 5]).is_err());
        assert!(op.adjoint(&[0.0; 4]).is_err());
    }

    #[test]
    fn adjoint_identity_holds_for_all_kinds() {
        let ops = vec![
            MeasurementOperator::identity(12),
            MeasurementOperator::gaussian(9, 12, 3),
            MeasurementOperator::dense(DenseMatrix::gaussian(
                7,
                12,
                &mut derived_rng(5, &[1]),
            )),
            MeasurementOperator::subsampled_fourier(
                SamplingMask::variable_density(6, 6, 0.5, 2.0, 17).unwrap(),
            ),
            MeasurementOperator::composite(
                MeasurementOperator::gaussian(5, 9, 21),
                MeasurementOperator::gaussian(9, 12, 22),
            )
            .unwrap(),
        ];
        for op in &ops {
            let err = adjoint_identity_error(op, 100, 99);
            assert!(err < 1e-10, "{} adjoint error {err}", op.kind_name());
        }
    }

    #[test]
    fn full_mask_fourier_round_trip() {
        let mask = SamplingMask::full(8, 8);
        let op = MeasurementOperator::subsampled_fourier(mask);
        let mut rng = derived_rng(31, &[]);
        let x = standard_normal_vec(&mut rng, 64);
        let back = op.adjoint(&op.apply(&x).unwrap()).unwrap();
        let rel = norm2(&crate::linalg::sub(&back, &x)) / norm2(&x);
        assert!(rel < 1e-10, "round trip error {rel}");
    }
}
