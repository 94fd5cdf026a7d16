//! Analysis operators for the cosparse model: a p×n map whose
//! near-zero output entries define the cosupport of a signal.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use std::sync::Arc;

/// A p×n analysis operator (p ≥ n allowed but not required).
#[derive(Debug, Clone)]
pub struct AnalysisOperator {
    rows: usize,
    cols: usize,
    kind: AnalysisKind,
}

#[derive(Debug, Clone)]
enum AnalysisKind {
    /// Non-periodic forward differences of an h×w image: all horizontal
    /// differences in row-major order, then all vertical differences.
    FiniteDifference2d { height: usize, width: usize },
    Dense(Arc<DenseMatrix>),
}

/// Returns the 2-D forward-difference operator for an h×w image, with
/// p = h(w−1) + (h−1)w rows.
pub fn build_finite_difference(height: usize, width: usize) -> Result<AnalysisOperator> {
    if height < 2 || width < 2 {
        return Err(Error::config(format!(
            "finite differences need height, width >= 2, got {height}x{width}"
        )));
    }
    let rows = height * (width - 1) + (height - 1) * width;
    Ok(AnalysisOperator {
        rows,
        cols: height * width,
        kind: AnalysisKind::FiniteDifference2d { height, width },
    })
}

impl AnalysisOperator {
    pub fn finite_difference(height: usize, width: usize) -> Result<Self> {
        build_finite_difference(height, width)
    }

    pub fn dense(matrix: DenseMatrix) -> Self {
        AnalysisOperator {
            rows: matrix.rows,
            cols: matrix.cols,
            kind: AnalysisKind::Dense(Arc::new(matrix)),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            AnalysisKind::FiniteDifference2d { .. } => "finite-difference-2d",
            AnalysisKind::Dense(_) => "dense-matrix",
        }
    }

    /// For the finite-difference kind, the (pixel, pixel) pair whose
    /// difference row `r` computes: row value is x[b] − x[a].
    pub fn difference_edge(&self, r: usize) -> Option<(usize, usize)> {
        match &self.kind {
            AnalysisKind::FiniteDifference2d { height, width } => {
                let (h, w) = (*height, *width);
                let horizontal = h * (w - 1);
                if r < horizontal {
                    let i = r / (w - 1);
                    let j = r % (w - 1);
                    Some((i * w + j, i * w + j + 1))
                } else {
                    let r = r - horizontal;
                    let i = r / w;
                    let j = r % w;
                    Some((i * w + j, (i + 1) * w + j))
                }
            }
            AnalysisKind::Dense(_) => None,
        }
    }

    pub fn dense_matrix(&self) -> Option<&DenseMatrix> {
        match &self.kind {
            AnalysisKind::Dense(m) => Some(m),
            _ => None,
        }
    }

    /// Ω x.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::Shape {
                context: "AnalysisOperator::apply",
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok(match &self.kind {
            AnalysisKind::FiniteDifference2d { .. } => {
                let mut out = Vec::with_capacity(self.rows);
                for r in 0..self.rows {
                    let (a, b) = self.difference_edge(r).unwrap();
                    out.push(x[b] - x[a]);
                }
                out
            }
            AnalysisKind::Dense(m) => m.matvec(x),
        })
    }

    /// Ω restricted to a sorted row subset, applied to x.
    pub fn apply_rows(&self, rows: &[usize], x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::Shape {
                context: "AnalysisOperator::apply_rows",
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok(match &self.kind {
            AnalysisKind::FiniteDifference2d { .. } => rows
                .iter()
                .map(|&r| {
                    let (a, b) = self.difference_edge(r).unwrap();
                    x[b] - x[a]
                })
                .collect(),
            AnalysisKind::Dense(m) => rows.iter().map(|&r| crate::linalg::dot(m.row(r), x)).collect(),
        })
    }

    /// The row subset as a dense matrix (used for dense null spaces).
    pub fn rows_matrix(&self, rows: &[usize]) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(rows.len(), self.cols);
        match &self.kind {
            AnalysisKind::FiniteDifference2d { .. } => {
                for (out_r, &r) in rows.iter().enumerate() {
                    let (a, b) = self.difference_edge(r).unwrap();
                    m.set(out_r, a, -1.0);
                    m.set(out_r, b, 1.0);
                }
            }
            AnalysisKind::Dense(d) => {
                for (out_r, &r) in rows.iter().enumerate() {
                    m.data[out_r * self.cols..(out_r + 1) * self.cols].copy_from_slice(d.row(r));
                }
            }
        }
        m
    }

    pub fn is_finite_difference(&self) -> bool {
        matches!(&self.kind, AnalysisKind::FiniteDifference2d { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_count_formula() {
        assert_eq!(build_finite_difference(2, 2).unwrap().rows(), 4);
        assert_eq!(build_finite_difference(3, 3).unwrap().rows(), 12);
        assert_eq!(build_finite_difference(2, 3).unwrap().rows(), 2 * 2 + 1 * 3);
    }

    #[test]
    fn constant_image_is_annihilated_exactly() {
        let op = build_finite_difference(2, 2).unwrap();
        let out = op.apply(&[3.5, 3.5, 3.5, 3.5]).unwrap();
        assert_eq!(out, vec![0.0; 4]);
    }

    #[test]
    fn horizontal_ramp_has_unit_horizontal_differences() {
        // 2x3 image [[1,2,3],[1,2,3]]
        let op = build_finite_difference(2, 3).unwrap();
        let out = op.apply(&[1.0, 2.0, 3.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(out[..4], [1.0, 1.0, 1.0, 1.0]);
        assert_eq!(out[4..], [0.0, 0.0, 0.0]);
    }

    #[test]
    fn degenerate_dimensions_rejected() {
        assert!(build_finite_difference(1, 5).is_err());
        assert!(build_finite_difference(5, 1).is_err());
    }

    #[test]
    fn rows_matrix_matches_apply() {
        let op = build_finite_difference(3, 3).unwrap();
        let x: Vec<f64> = (0..9).map(|i| (i as f64) * 1.3 - 2.0).collect();
        let rows: Vec<usize> = vec![0, 3, 7, 11];
        let direct = op.apply_rows(&rows, &x).unwrap();
        let via_matrix = op.rows_matrix(&rows).matvec(&x);
        assert_eq!(direct, via_matrix);
    }
}
