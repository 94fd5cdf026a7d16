//! Small dense linear-algebra helpers shared across the crate: vector
//! arithmetic, a row-major dense matrix, modified Gram-Schmidt,
//! conjugate gradients on the normal equations, and power iteration.

use crate::error::{Error, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// y += alpha * x
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn scale(alpha: f64, x: &mut [f64]) {
    for xi in x.iter_mut() {
        *xi *= alpha;
    }
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn has_non_finite(a: &[f64]) -> bool {
    a.iter().any(|x| !x.is_finite())
}

/// Deterministic per-stream RNG. Mixes the parts into the master seed
/// with splitmix64 so that (seed, stream...) pairs give independent,
/// platform-stable streams.
pub fn derived_rng(seed: u64, parts: &[u64]) -> ChaCha8Rng {
    let mut state = seed ^ 0x9e37_79b9_7f4a_7c15;
    for &p in parts {
        state = splitmix64(state ^ splitmix64(p));
    }
    ChaCha8Rng::seed_from_u64(state)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn standard_normal_vec(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    (0..len)
        .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
        .collect()
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape {
                context: "DenseMatrix::new",
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::parse("ragged rows in dense matrix"));
            }
            data.extend_from_slice(row);
        }
        DenseMatrix::new(r, c, data)
    }

    pub fn gaussian(rows: usize, cols: usize, rng: &mut impl Rng) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: standard_normal_vec(rng, rows * cols),
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// A^T y without forming the transpose.
    pub fn adjoint_vec(&self, y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(y.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            axpy(y[i], self.row(i), &mut out);
        }
        out
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }
}

/// Modified Gram-Schmidt with one re-orthogonalization pass. Vectors
/// whose remaining norm falls below `drop_tol` are dropped, so the
/// result is an orthonormal basis of the span.
pub fn mgs_orthonormalize(vectors: &[Vec<f64>], drop_tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let original = norm2(v);
        if original == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                axpy(-c, b, &mut w);
            }
        }
        let remaining = norm2(&w);
        if remaining > drop_tol * original.max(1.0) {
            scale(1.0 / remaining, &mut w);
            basis.push(w);
        }
    }
    basis
}

/// Outcome of a conjugate-gradient normal-equations solve.
#[derive(Debug, Clone)]
pub struct CgOutcome {
    pub coefficients: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// ∞-norm of the final normal-equations gradient M^T (M c − y).
    pub gradient_norm: f64,
    /// Set when near-zero curvature forced a diagonal regularizer.
    pub regularized: bool,
}

/// Minimizes ‖y − M c‖₂ by conjugate gradients on the normal equations
/// M^T M c = M^T y, where `columns` are the columns of M. Stops when the
/// gradient ∞-norm falls below `tol_abs`. A near-singular system is
/// retried once with a 1e-10 diagonal regularizer.
pub fn cg_normal_equations(
    columns: &[Vec<f64>],
    y: &[f64],
    start: Option<&[f64]>,
    tol_abs: f64,
    max_iterations: usize,
) -> CgOutcome {
    match cg_attempt(columns, y, start, tol_abs, max_iterations, 0.0) {
        Ok(outcome) => outcome,
        Err(best) => {
            let mut outcome = cg_attempt(columns, y, Some(&best), tol_abs, max_iterations, 1e-10)
                .unwrap_or_else(|c| CgOutcome {
                    coefficients: c,
                    converged: false,
                    iterations: max_iterations,
                    gradient_norm: f64::INFINITY,
                    regularized: true,
                });
            outcome.regularized = true;
            outcome
        }
    }
}

/// One CG attempt; Err carries the best iterate if zero curvature was hit.
fn cg_attempt(
    columns: &[Vec<f64>],
    y: &[f64],
    start: Option<&[f64]>,
    tol_abs: f64,
    max_iterations: usize,
    ridge: f64,
) -> std::result::Result<CgOutcome, Vec<f64>> {
    let s = columns.len();
    if s == 0 {
        return Ok(CgOutcome {
            coefficients: Vec::new(),
            converged: true,
            iterations: 0,
            gradient_norm: 0.0,
            regularized: false,
        });
    }
    let gram_apply = |c: &[f64]| -> Vec<f64> {
        let m = y.len();
        let mut mixed = vec![0.0; m];
        for (ci, col) in c.iter().zip(columns) {
            axpy(*ci, col, &mut mixed);
        }
        let mut out: Vec<f64> = columns.iter().map(|col| dot(col, &mixed)).collect();
        if ridge > 0.0 {
            for (oi, ci) in out.iter_mut().zip(c) {
                *oi += ridge * ci;
            }
        }
        out
    };
    let rhs: Vec<f64> = columns.iter().map(|col| dot(col, y)).collect();

    let mut c = match start {
        Some(c0) => c0.to_vec(),
        None => vec![0.0; s],
    };
    // residual of the normal equations, r = rhs − G c
    let gc = gram_apply(&c);
    let mut r = sub(&rhs, &gc);
    let inf = |v: &[f64]| v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let mut grad_inf = inf(&r);
    if grad_inf <= tol_abs {
        return Ok(CgOutcome {
            coefficients: c,
            converged: true,
            iterations: 0,
            gradient_norm: grad_inf,
            regularized: ridge > 0.0,
        });
    }
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let curvature_floor = f64::EPSILON * f64::EPSILON;
    for it in 1..=max_iterations {
        let gp = gram_apply(&p);
        let pgp = dot(&p, &gp);
        let pp = dot(&p, &p);
        if pgp <= curvature_floor * pp {
            // semidefinite direction: caller retries with a regularizer
            if ridge == 0.0 {
                return Err(c);
            }
            return Ok(CgOutcome {
                coefficients: c,
                converged: false,
                iterations: it,
                gradient_norm: grad_inf,
                regularized: true,
            });
        }
        let alpha = rr / pgp;
        axpy(alpha, &p, &mut c);
        axpy(-alpha, &gp, &mut r);
        grad_inf = inf(&r);
        if grad_inf <= tol_abs {
            return Ok(CgOutcome {
                coefficients: c,
                converged: true,
                iterations: it,
                gradient_norm: grad_inf,
                regularized: ridge > 0.0,
            });
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
    }
    Ok(CgOutcome {
        coefficients: c,
        converged: false,
        iterations: max_iterations,
        gradient_norm: grad_inf,
        regularized: ridge > 0.0,
    })
}

/// Largest absolute eigenvalue of a symmetric matrix, by power
/// iteration with a deterministic seeded start.
pub fn power_iteration_sym(matrix: &DenseMatrix, tol: f64, max_iterations: usize) -> f64 {
    let n = matrix.rows;
    debug_assert_eq!(matrix.rows, matrix.cols);
    if n == 0 {
        return 0.0;
    }
    let mut rng = derived_rng(0x70775f69, &[n as u64]);
    let mut v = standard_normal_vec(&mut rng, n);
    let nv = norm2(&v);
    if nv == 0.0 {
        return 0.0;
    }
    scale(1.0 / nv, &mut v);
    let mut lambda = 0.0f64;
    for _ in 0..max_iterations {
        let mut w = matrix.matvec(&v);
        let nw = norm2(&w);
        if nw == 0.0 {
            return 0.0;
        }
        scale(1.0 / nw, &mut w);
        let new_lambda = dot(&w, &matrix.matvec(&w));
        let done = (new_lambda - lambda).abs() <= tol * new_lambda.abs().max(1e-30);
        lambda = new_lambda;
        v = w;
        if done {
            break;
        }
    }
    lambda.abs()
}

/// Thin SVD triplets (u_i, sigma_i, v_i) of a rows×cols matrix, ordered
/// by decreasing singular value.
pub fn svd_triplets(matrix: &DenseMatrix) -> Vec<(Vec<f64>, f64, Vec<f64>)> {
    let m = nalgebra::DMatrix::from_row_slice(matrix.rows, matrix.cols, &matrix.data);
    let svd = m.svd(true, true);
    let u = svd.u.expect("svd with u");
    let vt = svd.v_t.expect("svd with v_t");
    let mut triplets: Vec<(Vec<f64>, f64, Vec<f64>)> = svd
        .singular_values
        .iter()
        .enumerate()
        .map(|(i, &sigma)| {
            let ui: Vec<f64> = u.column(i).iter().copied().collect();
            let vi: Vec<f64> = vt.row(i).iter().copied().collect();
            (ui, sigma, vi)
        })
        .collect();
    triplets.sort_by(|a, b| b.1.total_cmp(&a.1));
    triplets
}

/// Orthonormal basis of the null space of `matrix`, via the symmetric
/// eigendecomposition of M^T M. Suitable for small dense operators.
pub fn null_space_basis(matrix: &DenseMatrix, rel_tol: f64) -> Vec<Vec<f64>> {
    let n = matrix.cols;
    let mut gram = nalgebra::DMatrix::zeros(n, n);
    for i in 0..matrix.rows {
        let row = matrix.row(i);
        for a in 0..n {
            for b in 0..n {
                gram[(a, b)] += row[a] * row[b];
            }
        }
    }
    let eig = nalgebra::SymmetricEigen::new(gram);
    let max_eig = eig.eigenvalues.iter().fold(0.0f64, |acc, &x| acc.max(x));
    let threshold = rel_tol * max_eig.max(1.0);
    let mut basis = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| f64::total_cmp(&eig.eigenvalues[a], &eig.eigenvalues[b]));
    for idx in order {
        if eig.eigenvalues[idx] <= threshold {
            let mut v: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
            canonical_sign(&mut v);
            basis.push(v);
        }
    }
    // deterministic ordering of the basis vectors themselves
    basis.sort_by(|a, b| {
        for (x, y) in a.iter().zip(b) {
            match x.total_cmp(y) {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    });
    basis
}

/// Flips a vector's sign so its largest-magnitude entry is positive.
pub fn canonical_sign(v: &mut [f64]) {
    let mut best = 0.0f64;
    let mut sign = 1.0f64;
    for &x in v.iter() {
        if x.abs() > best {
            best = x.abs();
            sign = if x >= 0.0 { 1.0 } else { -1.0 };
        }
    }
    if sign < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}
