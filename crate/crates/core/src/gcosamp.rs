//! The generic greedy recovery engine.
//!
//! Each iteration back-projects the residual into signal space, selects
//! an order-2 subspace from that proxy, merges it with the previous
//! iterate's subspace, solves a least-squares problem constrained to
//! the merged subspace, prunes back to an order-1 subspace, and updates
//! the residual. With the plain sparsity model this is CoSaMP; with the
//! low-rank model it is ADMiRA.

use crate::error::{Error, Result};
use crate::linalg::{axpy, cg_normal_equations, dot, has_non_finite, norm2, sub};
use crate::models::{Subspace, UnionModel};
use crate::operators::MeasurementOperator;

#[derive(Debug, Clone)]
pub struct RecoverySettings {
    pub max_iterations: usize,
    /// Stop when the relative residual improvement drops below this.
    pub residual_relative_improvement_floor: f64,
    /// Stop when the residual norm drops below this.
    pub absolute_residual_floor: f64,
    pub ls_max_iterations: usize,
    pub ls_tolerance: f64,
}

impl Default for RecoverySettings {
    fn default() -> Self {
        RecoverySettings {
            max_iterations: 50,
            residual_relative_improvement_floor: 1e-4,
            absolute_residual_floor: 1e-9,
            ls_max_iterations: 200,
            ls_tolerance: 1e-10,
        }
    }
}

impl RecoverySettings {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::config("max_iterations must be at least 1"));
        }
        if self.residual_relative_improvement_floor <= 0.0
            || self.absolute_residual_floor <= 0.0
            || self.ls_tolerance <= 0.0
        {
            return Err(Error::config("tolerances must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaltReason {
    ResidualFloor,
    Stagnation,
    MaxIterations,
}

impl HaltReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            HaltReason::ResidualFloor => "residual-floor",
            HaltReason::Stagnation => "stagnation",
            HaltReason::MaxIterations => "max-iterations",
        }
    }
}

#[derive(Debug, Clone)]
pub struct IterationRecord {
    pub t: usize,
    pub residual_norm: f64,
    /// ‖x^t − x‖ when the true signal is supplied.
    pub error_norm: Option<f64>,
    /// ‖x̃^t − x‖ for the pre-pruning estimate, when truth is supplied.
    pub intermediate_error_norm: Option<f64>,
    pub subspace_dim: usize,
    pub ls_converged: bool,
    /// max over basis directions u of |⟨Ax̃ − y, Au⟩| / ‖y‖.
    pub ls_orthogonality: f64,
    /// ‖P_{V^t} x^t − x^t‖: how far the pruned estimate drifts when
    /// re-projected onto its own subspace.
    pub membership_drift: f64,
}

#[derive(Debug, Clone)]
pub struct RecoveryTrace {
    pub iterations: Vec<IterationRecord>,
    pub estimate: Vec<f64>,
    pub halt: HaltReason,
    pub initial_residual: f64,
}

impl RecoveryTrace {
    pub fn final_residual(&self) -> f64 {
        self.iterations
            .last()
            .map_or(self.initial_residual, |r| r.residual_norm)
    }

    pub fn iteration_count(&self) -> usize {
        self.iterations.len()
    }
}

/// Solution of a subspace-constrained least-squares problem.
#[derive(Debug, Clone)]
pub struct LsSolution {
    pub solution: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// max over basis directions u of |⟨Ax̃ − y, Au⟩| / ‖y‖.
    pub orthogonality_residual: f64,
    pub regularized: bool,
    pub subspace_dim: usize,
}

/// argmin ‖y − Az‖ over z in the given subspace, solved by conjugate
/// gradients on the normal equations in the subspace's orthonormal
/// basis coordinates. The optional warm start must already lie in the
/// subspace; it guarantees the solver never returns something worse.
pub fn constrained_least_squares(
    op: &MeasurementOperator,
    y: &[f64],
    sub_space: &Subspace,
    model: &UnionModel,
    settings: &RecoverySettings,
    warm_start: Option<&[f64]>,
) -> Result<LsSolution> {
    if y.len() != op.rows() {
        return Err(Error::Shape {
            context: "constrained_least_squares",
            expected: op.rows(),
            got: y.len(),
        });
    }
    let basis = model.subspace_basis(sub_space)?;
    let dim = basis.len();
    let n = op.cols();
    if dim == 0 {
        return Ok(LsSolution {
            solution: vec![0.0; n],
            converged: true,
            iterations: 0,
            orthogonality_residual: 0.0,
            regularized: false,
            subspace_dim: 0,
        });
    }

    // columns of A restricted to the basis, plus warm-start coordinates
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(dim);
    let mut start: Vec<f64> = Vec::with_capacity(dim);
    for b in &basis {
        columns.push(apply_to_basis_vector(op, b)?);
        if let Some(w) = warm_start {
            start.push(dot(b, w));
        }
    }
    let ny = norm2(y);
    let tol_abs = settings.ls_tolerance * ny.max(1e-300);
    let outcome = cg_normal_equations(
        &columns,
        y,
        if warm_start.is_some() { Some(&start) } else { None },
        tol_abs,
        settings.ls_max_iterations,
    );

    let mut solution = vec![0.0; n];
    for (c, b) in outcome.coefficients.iter().zip(&basis) {
        axpy(*c, b, &mut solution);
    }
    if has_non_finite(&solution) {
        return Err(Error::numerical("least-squares solution contains NaN/Inf"));
    }

    // measurement-space residual reuses the precomputed columns
    let mut fitted = vec![0.0; y.len()];
    for (c, col) in outcome.coefficients.iter().zip(&columns) {
        axpy(*c, col, &mut fitted);
    }
    let residual = sub(&fitted, y);
    let mut orthogonality = 0.0f64;
    for col in &columns {
        orthogonality = orthogonality.max(dot(col, &residual).abs());
    }
    if ny > 0.0 {
        orthogonality /= ny;
    }

    Ok(LsSolution {
        solution,
        converged: outcome.converged,
        iterations: outcome.iterations,
        orthogonality_residual: orthogonality,
        regularized: outcome.regularized,
        subspace_dim: dim,
    })
}

/// A x for a single basis vector, using dense columns directly when the
/// vector is canonical and the operator is matrix-backed.
fn apply_to_basis_vector(op: &MeasurementOperator, b: &[f64]) -> Result<Vec<f64>> {
    let mut nonzero = None;
    let mut count = 0;
    for (i, &v) in b.iter().enumerate() {
        if v != 0.0 {
            count += 1;
            if count > 1 {
                break;
            }
            nonzero = Some((i, v));
        }
    }
    if count == 1 {
        if let Some((i, v)) = nonzero {
            if let Some(mut col) = op.dense_column(i) {
                if v != 1.0 {
                    crate::linalg::scale(v, &mut col);
                }
                return Ok(col);
            }
        }
    }
    op.apply(b)
}

/// Decides whether the loop should halt after the latest iteration.
pub fn halt_check(trace: &RecoveryTrace, settings: &RecoverySettings) -> Option<HaltReason> {
    let last = trace.iterations.last()?;
    let previous = if trace.iterations.len() >= 2 {
        trace.iterations[trace.iterations.len() - 2].residual_norm
    } else {
        trace.initial_residual
    };
    halt_decision(previous, last.residual_norm, last.t, settings)
}

/// Shared stopping rule: residual floor, relative stagnation, or the
/// iteration cap.
pub fn halt_decision(
    previous_residual: f64,
    residual: f64,
    t: usize,
    settings: &RecoverySettings,
) -> Option<HaltReason> {
    if residual < settings.absolute_residual_floor {
        return Some(HaltReason::ResidualFloor);
    }
    if previous_residual > 0.0 {
        let improvement = (previous_residual - residual) / previous_residual;
        if improvement < settings.residual_relative_improvement_floor {
            return Some(HaltReason::Stagnation);
        }
    }
    if t >= settings.max_iterations {
        return Some(HaltReason::MaxIterations);
    }
    None
}

/// Runs the greedy recovery loop until the stopping criterion fires.
/// When `truth` is supplied, per-iteration error norms are recorded in
/// the trace.
pub fn run_gcosamp(
    op: &MeasurementOperator,
    y: &[f64],
    model: &UnionModel,
    settings: &RecoverySettings,
    truth: Option<&[f64]>,
) -> Result<RecoveryTrace> {
    settings.validate()?;
    let n = op.cols();
    if model.ambient_dim() != n {
        return Err(Error::Shape {
            context: "run_gcosamp model dimension",
            expected: n,
            got: model.ambient_dim(),
        });
    }
    if y.len() != op.rows() {
        return Err(Error::Shape {
            context: "run_gcosamp measurements",
            expected: op.rows(),
            got: y.len(),
        });
    }
    if let Some(x) = truth {
        if x.len() != n {
            return Err(Error::Shape {
                context: "run_gcosamp truth",
                expected: n,
                got: x.len(),
            });
        }
    }

    let mut trace = RecoveryTrace {
        iterations: Vec::new(),
        estimate: vec![0.0; n],
        halt: HaltReason::MaxIterations,
        initial_residual: norm2(y),
    };
    let mut residual = y.to_vec();
    let mut current = model.empty_subspace();
    let mut estimate = vec![0.0; n];

    for t in 1..=settings.max_iterations {
        let proxy = op.adjoint(&residual)?;
        guard_finite(&proxy, t, "proxy")?;
        let delta = model.select_subspace(&proxy, 2)?;
        let merged = model.sum_subspaces(&current, &delta)?;
        let ls = constrained_least_squares(op, y, &merged, model, settings, Some(&estimate))?;
        guard_finite(&ls.solution, t, "least-squares estimate")?;
        current = model.select_subspace(&ls.solution, 1)?;
        estimate = model.project(&current, &ls.solution)?;
        guard_finite(&estimate, t, "pruned estimate")?;
        let reprojected = model.project(&current, &estimate)?;
        let membership_drift = norm2(&sub(&reprojected, &estimate));
        residual = sub(y, &op.apply(&estimate)?);
        guard_finite(&residual, t, "residual")?;

        trace.iterations.push(IterationRecord {
            t,
            residual_norm: norm2(&residual),
            error_norm: truth.map(|x| norm2(&sub(&estimate, x))),
            intermediate_error_norm: truth.map(|x| norm2(&sub(&ls.solution, x))),
            subspace_dim: ls.subspace_dim,
            ls_converged: ls.converged,
            ls_orthogonality: ls.orthogonality_residual,
            membership_drift,
        });

        if let Some(reason) = halt_check(&trace, settings) {
            trace.halt = reason;
            break;
        }
    }
    trace.estimate = estimate;
    Ok(trace)
}

fn guard_finite(v: &[f64], t: usize, stage: &str) -> Result<()> {
    if has_non_finite(v) {
        Err(Error::numerical(format!(
            "NaN/Inf in {stage} at iteration {t}"
        )))
    } else {
        Ok(())
    }
}
