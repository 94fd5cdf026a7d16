//! Synthesis dictionaries: an n×d map from sparse coefficient vectors
//! to signals. The local-DCT kind tiles the image with overlapping
//! windows and uses orthonormal 2-D DCT basis functions per window,
//! with the lowest excluded×excluded frequency block removed.

use crate::error::{Error, Result};
use crate::linalg::{norm2, DenseMatrix};
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct SynthesisDictionary {
    rows: usize,
    atoms: usize,
    kind: DictionaryKind,
}

#[derive(Debug, Clone)]
enum DictionaryKind {
    LocalDct(Arc<LocalDct>),
    Dense(Arc<DenseMatrix>),
}

#[derive(Debug, Clone)]
struct LocalDct {
    image_h: usize,
    image_w: usize,
    window: usize,
    excluded: usize,
    /// top-left corners of the windows, row-major
    corners: Vec<(usize, usize)>,
    /// orthonormal DCT-II matrix, window×window, row-major
    dct: DenseMatrix,
    /// (u, v) frequency pairs kept per window, row-major order with the
    /// excluded low-frequency block skipped
    freqs: Vec<(usize, usize)>,
}

/// Builds the local-DCT dictionary. The window must tile the image
/// exactly at stride = window − overlap.
pub fn build_local_dct(
    image_h: usize,
    image_w: usize,
    window: usize,
    overlap: usize,
    excluded: usize,
) -> Result<SynthesisDictionary> {
    if window == 0 || window > image_h || window > image_w {
        return Err(Error::config(format!(
            "window {window} incompatible with image {image_h}x{image_w}"
        )));
    }
    if overlap >= window {
        return Err(Error::config("overlap must be smaller than the window"));
    }
    if excluded >= window {
        return Err(Error::config("excluded block must be smaller than the window"));
    }
    let stride = window - overlap;
    if (image_h - window) % stride != 0 || (image_w - window) % stride != 0 {
        return Err(Error::config(format!(
            "window {window} with overlap {overlap} does not tile {image_h}x{image_w}"
        )));
    }
    let mut corners = Vec::new();
    let mut r = 0;
    while r + window <= image_h {
        let mut c = 0;
        while c + window <= image_w {
            corners.push((r, c));
            if c + window == image_w {
                break;
            }
            c += stride;
        }
        if r + window == image_h {
            break;
        }
        r += stride;
    }
    let mut freqs = Vec::with_capacity(window * window - excluded * excluded);
    for u in 0..window {
        for v in 0..window {
            if u < excluded && v < excluded {
                continue;
            }
            freqs.push((u, v));
        }
    }
    let atoms = corners.len() * freqs.len();
    Ok(SynthesisDictionary {
        rows: image_h * image_w,
        atoms,
        kind: DictionaryKind::LocalDct(Arc::new(LocalDct {
            image_h,
            image_w,
            window,
            excluded,
            corners,
            dct: dct_matrix(window),
            freqs,
        })),
    })
}

/// Orthonormal DCT-II matrix of size n.
fn dct_matrix(n: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(n, n);
    for u in 0..n {
        let s = if u == 0 {
            (1.0 / n as f64).sqrt()
        } else {
            (2.0 / n as f64).sqrt()
        };
        for j in 0..n {
            let angle = std::f64::consts::PI * (2.0 * j as f64 + 1.0) * u as f64 / (2.0 * n as f64);
            m.set(u, j, s * angle.cos());
        }
    }
    m
}

impl SynthesisDictionary {
    /// Dense dictionary; columns are normalized to unit Euclidean norm
    /// at construction.
    pub fn dense(mut matrix: DenseMatrix) -> Result<Self> {
        for j in 0..matrix.cols {
            let col = matrix.column(j);
            let n = norm2(&col);
            if n == 0.0 {
                return Err(Error::config(format!("dictionary atom {j} is zero")));
            }
            for i in 0..matrix.rows {
                let v = matrix.get(i, j) / n;
                matrix.set(i, j, v);
            }
        }
        Ok(SynthesisDictionary {
            rows: matrix.rows,
            atoms: matrix.cols,
            kind: DictionaryKind::Dense(Arc::new(matrix)),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            DictionaryKind::LocalDct(_) => "local-dct",
            DictionaryKind::Dense(_) => "dense-matrix",
        }
    }

    /// Window index owning atom `i` (local-DCT only).
    pub fn atom_window(&self, i: usize) -> Option<usize> {
        match &self.kind {
            DictionaryKind::LocalDct(d) => Some(i / d.freqs.len()),
            DictionaryKind::Dense(_) => None,
        }
    }

    /// Row-major pixel indices covered by a window (local-DCT only).
    pub fn window_pixels(&self, window_idx: usize) -> Option<Vec<usize>> {
        match &self.kind {
            DictionaryKind::LocalDct(d) => {
                let (r0, c0) = d.corners[window_idx];
                let mut pixels = Vec::with_capacity(d.window * d.window);
                for i in 0..d.window {
                    for j in 0..d.window {
                        pixels.push((r0 + i) * d.image_w + (c0 + j));
                    }
                }
                Some(pixels)
            }
            DictionaryKind::Dense(_) => None,
        }
    }

    /// x = D α.
    pub fn apply(&self, alpha: &[f64]) -> Result<Vec<f64>> {
        if alpha.len() != self.atoms {
            return Err(Error::Shape {
                context: "SynthesisDictionary::apply",
                expected: self.atoms,
                got: alpha.len(),
            });
        }
        Ok(match &self.kind {
            DictionaryKind::LocalDct(d) => {
                let mut image = vec![0.0; self.rows];
                let per_window = d.freqs.len();
                for (w_idx, &(r0, c0)) in d.corners.iter().enumerate() {
                    let slice = &alpha[w_idx * per_window..(w_idx + 1) * per_window];
                    if slice.iter().all(|&a| a == 0.0) {
                        continue;
                    }
                    let mut coeff = DenseMatrix::zeros(d.window, d.window);
                    for (&(u, v), &a) in d.freqs.iter().zip(slice) {
                        coeff.set(u, v, a);
                    }
                    // inverse 2-D DCT: X = C^T Y C
                    let block = mat_mul(
                        &mat_mul(&d.dct.transpose(), &coeff),
                        &d.dct,
                    );
                    for i in 0..d.window {
                        for j in 0..d.window {
                            image[(r0 + i) * d.image_w + (c0 + j)] += block.get(i, j);
                        }
                    }
                }
                image
            }
            DictionaryKind::Dense(m) => m.matvec(alpha),
        })
    }

    /// α = D* x (correlation of every atom with x).
    pub fn adjoint(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.rows {
            return Err(Error::Shape {
                context: "SynthesisDictionary::adjoint",
                expected: self.rows,
                got: x.len(),
            });
        }
        Ok(match &self.kind {
            DictionaryKind::LocalDct(d) => {
                let mut out = Vec::with_capacity(self.atoms);
                for &(r0, c0) in &d.corners {
                    let mut block = DenseMatrix::zeros(d.window, d.window);
                    for i in 0..d.window {
                        for j in 0..d.window {
                            block.set(i, j, x[(r0 + i) * d.image_w + (c0 + j)]);
                        }
                    }
                    // forward 2-D DCT: Y = C X C^T
                    let coeff = mat_mul(&mat_mul(&d.dct, &block), &d.dct.transpose());
                    for &(u, v) in &d.freqs {
                        out.push(coeff.get(u, v));
                    }
                }
                out
            }
            DictionaryKind::Dense(m) => m.adjoint_vec(x),
        })
    }

    /// Atom `i` as a dense signal-space vector.
    pub fn atom(&self, i: usize) -> Vec<f64> {
        match &self.kind {
            DictionaryKind::LocalDct(d) => {
                let per_window = d.freqs.len();
                let (r0, c0) = d.corners[i / per_window];
                let (u, v) = d.freqs[i % per_window];
                let mut atom = vec![0.0; self.rows];
                for wi in 0..d.window {
                    for wj in 0..d.window {
                        atom[(r0 + wi) * d.image_w + (c0 + wj)] = d.dct.get(u, wi) * d.dct.get(v, wj);
                    }
                }
                atom
            }
            DictionaryKind::Dense(m) => m.column(i),
        }
    }
}

fn mat_mul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    debug_assert_eq!(a.cols, b.rows);
    let mut out = DenseMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if aik == 0.0 {
                continue;
            }
            for j in 0..b.cols {
                out.data[i * b.cols + j] += aik * b.get(k, j);
            }
        }
    }
    out
}
