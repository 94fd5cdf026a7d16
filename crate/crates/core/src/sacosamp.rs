//! Combined sparse-synthesis + cosparse-analysis recovery.
//!
//! The signal is modeled as x = x₁ + x₂ where x₁ = Dα has a k-sparse
//! coefficient vector in a dictionary D and x₂ is ℓ-cosparse under an
//! analysis operator Ω. Each iteration thresholds the proxy in both
//! domains, grows the synthesis support by union and shrinks the
//! analysis cosupport by intersection, then solves one joint least
//! squares over both components (or two separated solves in the
//! ablation mode) before pruning back to sparsity k / cosparsity ℓ.

use crate::error::{Error, Result};
use crate::gcosamp::{halt_decision, HaltReason, RecoverySettings};
use crate::linalg::{axpy, cg_normal_equations, dot, has_non_finite, norm2, sub};
use crate::models::{
    bottom_magnitude_indices, cosupport_components, cosupport_null_basis, cosupport_project,
    top_magnitude_indices,
};
use crate::operators::{AnalysisOperator, MeasurementOperator, SynthesisDictionary};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LsMode {
    /// One joint least squares over both components.
    Unified,
    /// Synthesis component fit first, analysis component fit on what
    /// remains.
    Split,
}

impl LsMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            LsMode::Unified => "unified",
            LsMode::Split => "split",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CombinedIterationRecord {
    pub t: usize,
    pub residual_norm: f64,
    /// ‖(x₁+x₂) − x‖ when the true components are supplied.
    pub error_norm: Option<f64>,
    /// Error of the pre-pruning estimate Dα̃ + x̃₂.
    pub intermediate_error_norm: Option<f64>,
    /// Dimension of the feasible set of the LS solve(s).
    pub subspace_dim: usize,
    pub support_size: usize,
    pub cosupport_size: usize,
    /// PSNR of x₂ against its truth (peak 255), when truth is given.
    pub psnr_x2: Option<f64>,
    pub ls_converged: bool,
    pub ls_orthogonality: f64,
    pub ls_regularized: bool,
}

#[derive(Debug, Clone)]
pub struct SacosampTrace {
    pub iterations: Vec<CombinedIterationRecord>,
    pub halt: HaltReason,
    pub initial_residual: f64,
}

impl SacosampTrace {
    pub fn iteration_count(&self) -> usize {
        self.iterations.len()
    }
}

#[derive(Debug, Clone)]
pub struct SacosampResult {
    /// Synthesis component D_T α_T.
    pub x1: Vec<f64>,
    /// Analysis component Q_Λ x̃₂.
    pub x2: Vec<f64>,
    /// x1 + x2 (exact vector sum).
    pub estimate: Vec<f64>,
    pub support: Vec<usize>,
    pub cosupport: Vec<usize>,
    pub trace: SacosampTrace,
}

/// Null-space parameterization of the analysis constraint: for
/// finite-difference operators, connected components of the constraint
/// graph (indicator basis); dense operators carry an explicit basis.
enum NullBasis {
    Components(Vec<Vec<usize>>),
    Dense(Vec<Vec<f64>>),
}

impl NullBasis {
    fn build(omega: &AnalysisOperator, cosupport: &[usize]) -> Result<NullBasis> {
        if let Some(components) = cosupport_components(omega, cosupport) {
            Ok(NullBasis::Components(components))
        } else {
            Ok(NullBasis::Dense(cosupport_null_basis(omega, cosupport)?))
        }
    }

    fn len(&self) -> usize {
        match self {
            NullBasis::Components(c) => c.len(),
            NullBasis::Dense(b) => b.len(),
        }
    }

    fn basis_vector(&self, j: usize, n: usize) -> Vec<f64> {
        match self {
            NullBasis::Components(c) => {
                let mut v = vec![0.0; n];
                let value = 1.0 / (c[j].len() as f64).sqrt();
                for &i in &c[j] {
                    v[i] = value;
                }
                v
            }
            NullBasis::Dense(b) => b[j].clone(),
        }
    }

    fn coefficient(&self, j: usize, v: &[f64]) -> f64 {
        match self {
            NullBasis::Components(c) => {
                let scale = 1.0 / (c[j].len() as f64).sqrt();
                c[j].iter().map(|&i| v[i]).sum::<f64>() * scale
            }
            NullBasis::Dense(b) => dot(&b[j], v),
        }
    }

    fn accumulate(&self, j: usize, coeff: f64, out: &mut [f64]) {
        match self {
            NullBasis::Components(c) => {
                let value = coeff / (c[j].len() as f64).sqrt();
                for &i in &c[j] {
                    out[i] += value;
                }
            }
            NullBasis::Dense(b) => axpy(coeff, &b[j], out),
        }
    }
}

struct LsOutput {
    alpha: Vec<f64>,
    x2: Vec<f64>,
    converged: bool,
    orthogonality: f64,
    regularized: bool,
    dim: usize,
}

/// Joint least squares min ‖y − A(Dᾱ + x̄₂)‖ subject to ᾱ supported on
/// `support` and Ω x̄₂ = 0 on `cosupport`. Returns the full coefficient
/// vector and the analysis component.
pub fn joint_constrained_ls(
    op: &MeasurementOperator,
    y: &[f64],
    dict: &SynthesisDictionary,
    omega: &AnalysisOperator,
    support: &[usize],
    cosupport: &[usize],
    settings: &RecoverySettings,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let out = joint_ls_inner(op, y, dict, omega, support, cosupport, settings, None)?;
    Ok((out.alpha, out.x2))
}

#[allow(clippy::too_many_arguments)]
fn joint_ls_inner(
    op: &MeasurementOperator,
    y: &[f64],
    dict: &SynthesisDictionary,
    omega: &AnalysisOperator,
    support: &[usize],
    cosupport: &[usize],
    settings: &RecoverySettings,
    warm: Option<(&[f64], &[f64])>,
) -> Result<LsOutput> {
    if support.is_empty() && cosupport.len() == omega.rows() {
        return Err(Error::config(
            "joint least squares needs a nonempty support or a reduced cosupport",
        ));
    }
    let n = op.cols();
    let null = NullBasis::build(omega, cosupport)?;
    let dim = support.len() + null.len();

    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(dim);
    let mut start: Vec<f64> = Vec::with_capacity(dim);
    for &atom_idx in support {
        columns.push(op.apply(&dict.atom(atom_idx))?);
        if let Some((alpha_prev, _)) = warm {
            start.push(alpha_prev[atom_idx]);
        }
    }
    for j in 0..null.len() {
        columns.push(op.apply(&null.basis_vector(j, n))?);
        if let Some((_, x2_prev)) = warm {
            start.push(null.coefficient(j, x2_prev));
        }
    }

    let tol_abs = settings.ls_tolerance * norm2(y).max(1e-300);
    let outcome = cg_normal_equations(
        &columns,
        y,
        if warm.is_some() { Some(&start) } else { None },
        tol_abs,
        settings.ls_max_iterations,
    );

    let mut alpha = vec![0.0; dict.atoms()];
    for (c, &atom_idx) in outcome.coefficients.iter().zip(support) {
        alpha[atom_idx] = *c;
    }
    let mut x2 = vec![0.0; n];
    for j in 0..null.len() {
        null.accumulate(j, outcome.coefficients[support.len() + j], &mut x2);
    }
    if has_non_finite(&alpha) || has_non_finite(&x2) {
        return Err(Error::numerical("joint least squares produced NaN/Inf"));
    }
    let ny = norm2(y);
    Ok(LsOutput {
        alpha,
        x2,
        converged: outcome.converged,
        orthogonality: if ny > 0.0 {
            outcome.gradient_norm / ny
        } else {
            0.0
        },
        regularized: outcome.regularized,
        dim,
    })
}

/// Split-mode estimation: fit the synthesis coefficients against the
/// measurements with the previous analysis component removed, then fit
/// the analysis component against the remaining synthesis residual.
#[allow(clippy::too_many_arguments)]
fn split_ls(
    op: &MeasurementOperator,
    y: &[f64],
    dict: &SynthesisDictionary,
    omega: &AnalysisOperator,
    support: &[usize],
    cosupport: &[usize],
    settings: &RecoverySettings,
    warm: (&[f64], &[f64]),
) -> Result<LsOutput> {
    let n = op.cols();
    let (alpha_prev, x2_prev) = warm;
    let ny = norm2(y).max(1e-300);
    let tol_abs = settings.ls_tolerance * ny;

    // synthesis stage
    let target1 = sub(y, &op.apply(x2_prev)?);
    let mut columns1: Vec<Vec<f64>> = Vec::with_capacity(support.len());
    let mut start1: Vec<f64> = Vec::with_capacity(support.len());
    for &atom_idx in support {
        columns1.push(op.apply(&dict.atom(atom_idx))?);
        start1.push(alpha_prev[atom_idx]);
    }
    let fit1 = cg_normal_equations(
        &columns1,
        &target1,
        Some(&start1),
        tol_abs,
        settings.ls_max_iterations,
    );
    let mut alpha = vec![0.0; dict.atoms()];
    for (c, &atom_idx) in fit1.coefficients.iter().zip(support) {
        alpha[atom_idx] = *c;
    }

    // analysis stage against the synthesis residual
    let x1 = dict.apply(&alpha)?;
    let target2 = sub(y, &op.apply(&x1)?);
    let null = NullBasis::build(omega, cosupport)?;
    let mut columns2: Vec<Vec<f64>> = Vec::with_capacity(null.len());
    let mut start2: Vec<f64> = Vec::with_capacity(null.len());
    for j in 0..null.len() {
        columns2.push(op.apply(&null.basis_vector(j, n))?);
        start2.push(null.coefficient(j, x2_prev));
    }
    let fit2 = cg_normal_equations(
        &columns2,
        &target2,
        Some(&start2),
        tol_abs,
        settings.ls_max_iterations,
    );
    let mut x2 = vec![0.0; n];
    for (j, c) in fit2.coefficients.iter().enumerate() {
        null.accumulate(j, *c, &mut x2);
    }
    if has_non_finite(&alpha) || has_non_finite(&x2) {
        return Err(Error::numerical("split least squares produced NaN/Inf"));
    }
    Ok(LsOutput {
        alpha,
        x2,
        converged: fit1.converged && fit2.converged,
        orthogonality: fit1.gradient_norm.max(fit2.gradient_norm) / ny,
        regularized: fit1.regularized || fit2.regularized,
        dim: support.len() + null.len(),
    })
}

/// Runs the combined recovery. `truths`, when given, is the pair of
/// true components (x₁, x₂) and enables error/PSNR columns in the
/// trace.
#[allow(clippy::too_many_arguments)]
pub fn run_sacosamp(
    op: &MeasurementOperator,
    y: &[f64],
    dict: &SynthesisDictionary,
    omega: &AnalysisOperator,
    k: usize,
    ell: usize,
    mode: LsMode,
    settings: &RecoverySettings,
    truths: Option<(&[f64], &[f64])>,
) -> Result<SacosampResult> {
    settings.validate()?;
    let n = op.cols();
    let p = omega.rows();
    let d = dict.atoms();
    if dict.rows() != n || omega.cols() != n {
        return Err(Error::Shape {
            context: "run_sacosamp operator dimensions",
            expected: n,
            got: if dict.rows() != n { dict.rows() } else { omega.cols() },
        });
    }
    if ell > p {
        return Err(Error::config(format!("cosparsity {ell} exceeds p = {p}")));
    }
    if k > d {
        return Err(Error::config(format!("sparsity {k} exceeds d = {d}")));
    }
    if y.len() != op.rows() {
        return Err(Error::Shape {
            context: "run_sacosamp measurements",
            expected: op.rows(),
            got: y.len(),
        });
    }
    let truth_sum = truths.map(|(x1, x2)| crate::linalg::add(x1, x2));

    let mut trace = SacosampTrace {
        iterations: Vec::new(),
        halt: HaltReason::MaxIterations,
        initial_residual: norm2(y),
    };
    let mut residual = y.to_vec();
    let mut support: Vec<usize> = Vec::new();
    let mut cosupport: Vec<usize> = (0..p).collect();
    let mut alpha = vec![0.0; d];
    let mut x1 = vec![0.0; n];
    let mut x2 = vec![0.0; n];
    let mut prev_residual_norm = trace.initial_residual;

    for t in 1..=settings.max_iterations {
        let proxy = op.adjoint(&residual)?;
        if has_non_finite(&proxy) {
            return Err(Error::numerical(format!("NaN/Inf in proxy at iteration {t}")));
        }
        let support_delta = top_magnitude_indices(&dict.adjoint(&proxy)?, (2 * k).min(d));
        let cosupport_delta = bottom_magnitude_indices(&omega.apply(&proxy)?, ell);
        let merged_support = merge_sorted(&support, &support_delta);
        let merged_cosupport = intersect_sorted(&cosupport, &cosupport_delta);

        let ls = match mode {
            LsMode::Unified => joint_ls_inner(
                op,
                y,
                dict,
                omega,
                &merged_support,
                &merged_cosupport,
                settings,
                Some((&alpha, &x2)),
            )?,
            LsMode::Split => split_ls(
                op,
                y,
                dict,
                omega,
                &merged_support,
                &merged_cosupport,
                settings,
                (&alpha, &x2),
            )?,
        };

        // prune: keep the k largest coefficients and the ell smallest
        // analysis responses
        support = top_magnitude_indices(&ls.alpha, k)
            .into_iter()
            .filter(|&i| ls.alpha[i] != 0.0)
            .collect();
        alpha = vec![0.0; d];
        for &i in &support {
            alpha[i] = ls.alpha[i];
        }
        cosupport = bottom_magnitude_indices(&omega.apply(&ls.x2)?, ell);
        x1 = dict.apply(&alpha)?;
        x2 = cosupport_project(omega, &cosupport, &ls.x2)?;
        let estimate = crate::linalg::add(&x1, &x2);
        residual = sub(y, &op.apply(&estimate)?);
        if has_non_finite(&residual) {
            return Err(Error::numerical(format!(
                "NaN/Inf in residual at iteration {t}"
            )));
        }
        let residual_norm = norm2(&residual);

        let intermediate = truth_sum.as_ref().map(|x| {
            let pre_prune = crate::linalg::add(&dict.apply(&ls.alpha).unwrap_or_default(), &ls.x2);
            norm2(&sub(&pre_prune, x))
        });
        trace.iterations.push(CombinedIterationRecord {
            t,
            residual_norm,
            error_norm: truth_sum.as_ref().map(|x| norm2(&sub(&estimate, x))),
            intermediate_error_norm: intermediate,
            subspace_dim: ls.dim,
            support_size: support.len(),
            cosupport_size: cosupport.len(),
            psnr_x2: truths.map(|(_, x2_truth)| crate::harness::psnr(x2_truth, &x2, 255.0)),
            ls_converged: ls.converged,
            ls_orthogonality: ls.orthogonality,
            ls_regularized: ls.regularized,
        });

        if let Some(reason) = halt_decision(prev_residual_norm, residual_norm, t, settings) {
            trace.halt = reason;
            break;
        }
        prev_residual_norm = residual_norm;
    }

    let estimate = crate::linalg::add(&x1, &x2);
    Ok(SacosampResult {
        x1,
        x2,
        estimate,
        support,
        cosupport,
        trace,
    })
}

fn merge_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    out.extend_from_slice(b);
    out.sort_unstable();
    out.dedup();
    out
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let bset: std::collections::BTreeSet<usize> = b.iter().copied().collect();
    a.iter().copied().filter(|i| bset.contains(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{derived_rng, mgs_orthonormalize, standard_normal_vec, DenseMatrix};
    use rand::seq::SliceRandom;
    use rand::Rng;

    fn identity_dict(n: usize) -> SynthesisDictionary {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        SynthesisDictionary::dense(m).unwrap()
    }

    fn identity_omega(n: usize) -> AnalysisOperator {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        AnalysisOperator::dense(m)
    }

    #[test]
    fn zero_measurements_give_zero_components() {
        let n = 12;
        let op = MeasurementOperator::gaussian(8, n, 1);
        let dict = identity_dict(n);
        let omega = identity_omega(n);
        let result = run_sacosamp(
            &op,
            &vec![0.0; 8],
            &dict,
            &omega,
            2,
            n,
            LsMode::Unified,
            &RecoverySettings::default(),
            None,
        )
        .unwrap();
        assert!(result.x1.iter().all(|&v| v == 0.0));
        assert!(result.x2.iter().all(|&v| v == 0.0));
        assert_eq!(result.trace.iteration_count(), 1);
    }

    #[test]
    fn joint_ls_fits_a_single_atom() {
        let n = 4;
        let op = MeasurementOperator::identity(n);
        let dict = identity_dict(n);
        let omega = identity_omega(n);
        // cosupport = everything forces x2 = 0 for a full-rank omega
        let cosupport: Vec<usize> = (0..n).collect();
        let y = vec![5.0, 0.0, 0.0, 0.0];
        let (alpha, x2) = joint_constrained_ls(
            &op,
            &y,
            &dict,
            &omega,
            &[0],
            &cosupport,
            &RecoverySettings::default(),
        )
        .unwrap();
        assert!((alpha[0] - 5.0).abs() < 1e-10);
        assert!(alpha[1..].iter().all(|&v| v == 0.0));
        assert!(norm2(&x2) < 1e-12);
    }

    #[test]
    fn joint_ls_satisfies_feasibility_and_orthogonality() {
        let mut rng = derived_rng(3, &[]);
        let n = 16;
        let m = 12;
        let op = MeasurementOperator::gaussian(m, n, 44);
        let dict = identity_dict(n);
        let omega = crate::operators::build_finite_difference(4, 4).unwrap();
        let y = standard_normal_vec(&mut rng, m);
        let support = vec![1usize, 5, 9];
        let cosupport: Vec<usize> = (0..omega.rows()).filter(|i| i % 2 == 0).collect();
        let out = joint_ls_inner(
            &op,
            &y,
            &dict,
            &omega,
            &support,
            &cosupport,
            &RecoverySettings::default(),
            None,
        )
        .unwrap();
        // off-support coefficients are exactly zero
        for (i, &a) in out.alpha.iter().enumerate() {
            if !support.contains(&i) {
                assert_eq!(a, 0.0);
            }
        }
        // analysis constraint holds on the cosupport
        let violation = norm2(&omega.apply_rows(&cosupport, &out.x2).unwrap());
        assert!(violation < 1e-8, "constraint violation {violation}");
        assert!(out.orthogonality < 1e-8, "orthogonality {}", out.orthogonality);
    }

    #[test]
    fn degenerate_joint_ls_is_rejected() {
        let n = 4;
        let op = MeasurementOperator::identity(n);
        let dict = identity_dict(n);
        let omega = identity_omega(n);
        let cosupport: Vec<usize> = (0..n).collect();
        let err = joint_constrained_ls(
            &op,
            &[1.0, 0.0, 0.0, 0.0],
            &dict,
            &omega,
            &[],
            &cosupport,
            &RecoverySettings::default(),
        );
        assert!(err.is_err());
    }

    #[test]
    fn unified_residual_never_exceeds_split_for_identical_selections() {
        let mut rng = derived_rng(7, &[]);
        let n = 24;
        let m = 18;
        let op = MeasurementOperator::gaussian(m, n, 91);
        let dict = identity_dict(n);
        let omega = crate::operators::build_finite_difference(4, 6).unwrap();
        let y = standard_normal_vec(&mut rng, m);
        let support = vec![0usize, 3, 7, 11];
        let cosupport: Vec<usize> = (0..omega.rows()).filter(|i| i % 3 != 0).collect();
        let alpha_prev = vec![0.0; dict.atoms()];
        let x2_prev = vec![0.0; n];
        let settings = RecoverySettings::default();

        let unified = joint_ls_inner(
            &op,
            &y,
            &dict,
            &omega,
            &support,
            &cosupport,
            &settings,
            Some((&alpha_prev, &x2_prev)),
        )
        .unwrap();
        let split = split_ls(
            &op,
            &y,
            &dict,
            &omega,
            &support,
            &cosupport,
            &settings,
            (&alpha_prev, &x2_prev),
        )
        .unwrap();
        let fit = |alpha: &[f64], x2: &[f64]| {
            let x = crate::linalg::add(&dict.apply(alpha).unwrap(), x2);
            norm2(&sub(&y, &op.apply(&x).unwrap()))
        };
        let unified_fit = fit(&unified.alpha, &unified.x2);
        let split_fit = fit(&split.alpha, &split.x2);
        assert!(
            unified_fit <= split_fit + 1e-9,
            "unified {unified_fit} > split {split_fit}"
        );
    }

    #[test]
    fn reduces_to_synthesis_only_recovery_with_orthonormal_dictionary() {
        // with omega = I (full column rank) and ell = p, the analysis
        // component is pinned to zero and the combined method must march
        // in lockstep with the synthesis-model engine
        let mut rng = derived_rng(15, &[]);
        let n = 40;
        let m = 30;
        let k = 4;
        // random orthonormal dictionary
        let vectors: Vec<Vec<f64>> = (0..n).map(|_| standard_normal_vec(&mut rng, n)).collect();
        let basis = mgs_orthonormalize(&vectors, 1e-12);
        let mut dmat = DenseMatrix::zeros(n, n);
        for (j, b) in basis.iter().enumerate() {
            for i in 0..n {
                dmat.set(i, j, b[i]);
            }
        }
        let dict = SynthesisDictionary::dense(dmat).unwrap();
        let omega = identity_omega(n);
        let op = MeasurementOperator::gaussian(m, n, 2023);

        let mut alpha_true = vec![0.0; n];
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        for &i in &idx[..k] {
            alpha_true[i] = rng.sample::<f64, _>(rand_distr::StandardNormal);
        }
        let x = dict.apply(&alpha_true).unwrap();
        let y = op.apply(&x).unwrap();

        let settings = RecoverySettings::default();
        let combined = run_sacosamp(
            &op,
            &y,
            &dict,
            &omega,
            k,
            n,
            LsMode::Unified,
            &settings,
            None,
        )
        .unwrap();
        let model = crate::models::UnionModel::synthesis(dict.clone(), k).unwrap();
        let plain = crate::gcosamp::run_gcosamp(&op, &y, &model, &settings, Some(&x)).unwrap();

        // identical per-iteration residuals and identical estimates
        assert_eq!(combined.trace.iteration_count(), plain.iteration_count());
        for (c, p) in combined.trace.iterations.iter().zip(&plain.iterations) {
            assert!(
                (c.residual_norm - p.residual_norm).abs() <= 1e-8 * (1.0 + p.residual_norm),
                "iteration {}: {} vs {}",
                c.t,
                c.residual_norm,
                p.residual_norm
            );
        }
        for (a, b) in combined.estimate.iter().zip(&plain.estimate) {
            assert!((a - b).abs() < 1e-8);
        }
        assert!(norm2(&combined.x2) < 1e-10);
        let err = norm2(&sub(&combined.estimate, &x)) / norm2(&x);
        assert!(err < 1e-4, "relative error {err}");
    }

    #[test]
    fn support_growth_and_cosupport_shrink_are_bounded() {
        let mut rng = derived_rng(31, &[]);
        let h = 6;
        let w = 6;
        let n = h * w;
        let k = 3;
        let omega = crate::operators::build_finite_difference(h, w).unwrap();
        let p = omega.rows();
        let ell = p - 8;
        let dict = crate::operators::build_local_dct(h, w, 6, 0, 1).unwrap();
        let op = MeasurementOperator::gaussian(30, n, 5);
        let y = standard_normal_vec(&mut rng, 30);
        let result = run_sacosamp(
            &op,
            &y,
            &dict,
            &omega,
            k,
            ell,
            LsMode::Unified,
            &RecoverySettings {
                max_iterations: 6,
                residual_relative_improvement_floor: 1e-12,
                ..RecoverySettings::default()
            },
            None,
        )
        .unwrap();
        for rec in &result.trace.iterations {
            assert!(rec.support_size <= k);
            assert_eq!(rec.cosupport_size, ell);
        }
    }

    #[test]
    fn component_feasibility_after_pruning() {
        let mut rng = derived_rng(77, &[]);
        let h = 6;
        let w = 6;
        let n = h * w;
        let omega = crate::operators::build_finite_difference(h, w).unwrap();
        let dict = crate::operators::build_local_dct(h, w, 6, 0, 1).unwrap();
        let op = MeasurementOperator::gaussian(28, n, 9);
        let y = standard_normal_vec(&mut rng, 28);
        let ell = omega.rows() - 6;
        let result = run_sacosamp(
            &op,
            &y,
            &dict,
            &omega,
            4,
            ell,
            LsMode::Unified,
            &RecoverySettings::default(),
            None,
        )
        .unwrap();
        // x2 satisfies its own cosupport constraint
        let violation = norm2(&omega.apply_rows(&result.cosupport, &result.x2).unwrap());
        assert!(violation < 1e-8);
        assert!(result.support.len() <= 4);
        // the reported estimate is the exact vector sum
        for ((a, b), s) in result.x1.iter().zip(&result.x2).zip(&result.estimate) {
            assert_eq!(a + b, *s);
        }
    }
}
