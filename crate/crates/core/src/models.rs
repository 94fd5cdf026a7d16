//! Union-of-subspaces signal models and their per-model operations:
//! subspace selection from a proxy vector, orthogonal projection,
//! subspace sums, and orthonormal bases.
//!
//! A model describes a family S of low-dimensional subspaces. Selection
//! at order B finds the member of S^B (sums of B subspaces from S)
//! closest to a given vector. Plain sparsity, block sparsity, and low
//! rank admit exact selection (thresholding / truncated SVD); synthesis
//! and analysis models use the usual thresholding surrogates and are
//! flagged approximate.

use crate::error::{Error, Result};
use crate::linalg::{
    dot, mgs_orthonormalize, norm2, null_space_basis, svd_triplets, DenseMatrix,
};
use crate::operators::{AnalysisOperator, SynthesisDictionary};
use rand::seq::SliceRandom;
use rand::Rng;

/// How the synthesis model picks atoms from the correlation vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SynthesisSelector {
    #[default]
    Thresholding,
    Omp,
}

#[derive(Debug, Clone)]
pub enum UnionModel {
    KSparse {
        n: usize,
        k: usize,
    },
    BlockSparse {
        n: usize,
        k: usize,
        block: usize,
    },
    /// rows×cols matrices of rank ≤ rank, vectorized column-major.
    LowRank {
        rows: usize,
        cols: usize,
        rank: usize,
    },
    Synthesis {
        dict: SynthesisDictionary,
        k: usize,
        selector: SynthesisSelector,
    },
    Analysis {
        omega: AnalysisOperator,
        ell: usize,
    },
    Combined {
        dict: SynthesisDictionary,
        k: usize,
        omega: AnalysisOperator,
        ell: usize,
    },
}

/// A concrete member subspace of some S^B.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    rep: SubspaceRep,
    /// Order bound B: the subspace is a member of S^B.
    order: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SubspaceRep {
    /// Sorted signal or atom indices.
    Support(Vec<usize>),
    /// Sorted analysis-row indices whose output is constrained to zero.
    Cosupport(Vec<usize>),
    /// Orthonormal basis of vectorized matrices.
    Factors(Vec<Vec<f64>>),
    /// Synthesis support plus analysis cosupport.
    Pair {
        support: Vec<usize>,
        cosupport: Vec<usize>,
    },
}

impl Subspace {
    pub fn rep(&self) -> &SubspaceRep {
        &self.rep
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn support(&self) -> Option<&[usize]> {
        match &self.rep {
            SubspaceRep::Support(s) => Some(s),
            SubspaceRep::Pair { support, .. } => Some(support),
            _ => None,
        }
    }

    pub fn cosupport(&self) -> Option<&[usize]> {
        match &self.rep {
            SubspaceRep::Cosupport(c) => Some(c),
            SubspaceRep::Pair { cosupport, .. } => Some(cosupport),
            _ => None,
        }
    }
}

/// Indices of the `count` largest-magnitude entries, ties broken by
/// lowest index; returned sorted ascending.
pub fn top_magnitude_indices(v: &[f64], count: usize) -> Vec<usize> {
    let count = count.min(v.len());
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[b].abs().total_cmp(&v[a].abs()).then(a.cmp(&b)));
    let mut out = order[..count].to_vec();
    out.sort_unstable();
    out
}

/// Indices of the `count` smallest-magnitude entries, ties broken by
/// lowest index; returned sorted ascending.
pub fn bottom_magnitude_indices(v: &[f64], count: usize) -> Vec<usize> {
    let count = count.min(v.len());
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()).then(a.cmp(&b)));
    let mut out = order[..count].to_vec();
    out.sort_unstable();
    out
}

fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    out.extend_from_slice(b);
    out.sort_unstable();
    out.dedup();
    out
}

fn sorted_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let bset: std::collections::BTreeSet<usize> = b.iter().copied().collect();
    a.iter().copied().filter(|i| bset.contains(i)).collect()
}

impl UnionModel {
    pub fn ksparse(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::config(format!("ksparse needs 1 <= k <= n, got k={k}, n={n}")));
        }
        Ok(UnionModel::KSparse { n, k })
    }

    pub fn blocksparse(n: usize, k: usize, block: usize) -> Result<Self> {
        if block == 0 || n % block != 0 || k % block != 0 {
            return Err(Error::config(format!(
                "block size {block} must divide both n={n} and k={k}"
            )));
        }
        if k == 0 || k > n {
            return Err(Error::config(format!("blocksparse needs 1 <= k <= n, got k={k}")));
        }
        Ok(UnionModel::BlockSparse { n, k, block })
    }

    pub fn lowrank(rows: usize, cols: usize, rank: usize) -> Result<Self> {
        if rank == 0 || rank > rows.min(cols) {
            return Err(Error::config(format!(
                "rank must satisfy 1 <= r <= min({rows},{cols}), got {rank}"
            )));
        }
        Ok(UnionModel::LowRank { rows, cols, rank })
    }

    pub fn synthesis(dict: SynthesisDictionary, k: usize) -> Result<Self> {
        if k == 0 || k > dict.atoms() {
            return Err(Error::config(format!(
                "synthesis sparsity must satisfy 1 <= k <= d={}, got {k}",
                dict.atoms()
            )));
        }
        Ok(UnionModel::Synthesis {
            dict,
            k,
            selector: SynthesisSelector::Thresholding,
        })
    }

    pub fn synthesis_with_selector(
        dict: SynthesisDictionary,
        k: usize,
        selector: SynthesisSelector,
    ) -> Result<Self> {
        let mut model = UnionModel::synthesis(dict, k)?;
        if let UnionModel::Synthesis { selector: s, .. } = &mut model {
            *s = selector;
        }
        Ok(model)
    }

    pub fn analysis(omega: AnalysisOperator, ell: usize) -> Result<Self> {
        if ell == 0 || ell > omega.rows() {
            return Err(Error::config(format!(
                "cosparsity must satisfy 1 <= ell <= p={}, got {ell}",
                omega.rows()
            )));
        }
        Ok(UnionModel::Analysis { omega, ell })
    }

    pub fn combined(
        dict: SynthesisDictionary,
        k: usize,
        omega: AnalysisOperator,
        ell: usize,
    ) -> Result<Self> {
        if dict.rows() != omega.cols() {
            return Err(Error::Shape {
                context: "UnionModel::combined",
                expected: dict.rows(),
                got: omega.cols(),
            });
        }
        if k == 0 || k > dict.atoms() || ell == 0 || ell > omega.rows() {
            return Err(Error::config("combined model parameters out of range"));
        }
        Ok(UnionModel::Combined { dict, k, omega, ell })
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            UnionModel::KSparse { n, .. } | UnionModel::BlockSparse { n, .. } => *n,
            UnionModel::LowRank { rows, cols, .. } => rows * cols,
            UnionModel::Synthesis { dict, .. } => dict.rows(),
            UnionModel::Analysis { omega, .. } => omega.cols(),
            UnionModel::Combined { dict, .. } => dict.rows(),
        }
    }

    /// Whether selection solves the subspace selection problem exactly.
    pub fn is_exact(&self) -> bool {
        matches!(
            self,
            UnionModel::KSparse { .. } | UnionModel::BlockSparse { .. } | UnionModel::LowRank { .. }
        )
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            UnionModel::KSparse { .. } => "ksparse",
            UnionModel::BlockSparse { .. } => "blocksparse",
            UnionModel::LowRank { .. } => "lowrank",
            UnionModel::Synthesis { .. } => "synthesis",
            UnionModel::Analysis { .. } => "analysis",
            UnionModel::Combined { .. } => "combined",
        }
    }

    /// The order-zero starting subspace used by the recovery engines:
    /// empty support for sparse families, the full cosupport for the
    /// analysis family.
    pub fn empty_subspace(&self) -> Subspace {
        let rep = match self {
            UnionModel::KSparse { .. }
            | UnionModel::BlockSparse { .. }
            | UnionModel::Synthesis { .. } => SubspaceRep::Support(Vec::new()),
            UnionModel::LowRank { .. } => SubspaceRep::Factors(Vec::new()),
            UnionModel::Analysis { omega, .. } => {
                SubspaceRep::Cosupport((0..omega.rows()).collect())
            }
            UnionModel::Combined { omega, .. } => SubspaceRep::Pair {
                support: Vec::new(),
                cosupport: (0..omega.rows()).collect(),
            },
        };
        Subspace { rep, order: 0 }
    }

    /// Solves (exactly or by the model's thresholding surrogate) the
    /// subspace selection problem at order B ∈ {1, 2}: the member of
    /// S^B whose orthogonal projection is closest to `v`.
    pub fn select_subspace(&self, v: &[f64], order: usize) -> Result<Subspace> {
        if !(1..=2).contains(&order) {
            return Err(Error::config(format!("selection order must be 1 or 2, got {order}")));
        }
        if v.len() != self.ambient_dim() {
            return Err(Error::Shape {
                context: "UnionModel::select_subspace",
                expected: self.ambient_dim(),
                got: v.len(),
            });
        }
        let rep = match self {
            UnionModel::KSparse { k, .. } => {
                SubspaceRep::Support(top_magnitude_indices(v, order * k))
            }
            UnionModel::BlockSparse { n, k, block } => {
                let blocks = n / block;
                let norms: Vec<f64> = (0..blocks)
                    .map(|b| norm2(&v[b * block..(b + 1) * block]))
                    .collect();
                let chosen = top_magnitude_indices(&norms, order * (k / block));
                let mut support = Vec::with_capacity(chosen.len() * block);
                for b in chosen {
                    support.extend(b * block..(b + 1) * block);
                }
                SubspaceRep::Support(support)
            }
            UnionModel::LowRank { rows, cols, rank } => {
                let count = (order * rank).min(*rows.min(cols));
                if norm2(v) == 0.0 {
                    SubspaceRep::Factors(canonical_factors(*rows, *cols, count))
                } else {
                    let matrix = matricize(v, *rows, *cols);
                    let triplets = svd_triplets(&matrix);
                    let factors = triplets
                        .into_iter()
                        .take(count)
                        .map(|(u, _, vt)| flatten_outer(&u, &vt, *rows, *cols))
                        .collect();
                    SubspaceRep::Factors(factors)
                }
            }
            UnionModel::Synthesis { dict, k, selector } => {
                let count = (order * k).min(dict.atoms());
                let support = match selector {
                    SynthesisSelector::Thresholding => {
                        top_magnitude_indices(&dict.adjoint(v)?, count)
                    }
                    SynthesisSelector::Omp => omp_select(dict, v, count)?,
                };
                SubspaceRep::Support(support)
            }
            UnionModel::Analysis { omega, ell } => {
                // cosupport stays size ell at every order
                SubspaceRep::Cosupport(bottom_magnitude_indices(&omega.apply(v)?, *ell))
            }
            UnionModel::Combined { dict, k, omega, ell } => SubspaceRep::Pair {
                support: top_magnitude_indices(&dict.adjoint(v)?, (order * k).min(dict.atoms())),
                cosupport: bottom_magnitude_indices(&omega.apply(v)?, *ell),
            },
        };
        Ok(Subspace { rep, order })
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, sub: &Subspace, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.ambient_dim() {
            return Err(Error::Shape {
                context: "UnionModel::project",
                expected: self.ambient_dim(),
                got: v.len(),
            });
        }
        match (self, &sub.rep) {
            (UnionModel::KSparse { .. }, SubspaceRep::Support(support))
            | (UnionModel::BlockSparse { .. }, SubspaceRep::Support(support)) => {
                let mut out = vec![0.0; v.len()];
                for &i in support {
                    out[i] = v[i];
                }
                Ok(out)
            }
            (UnionModel::Analysis { omega, .. }, SubspaceRep::Cosupport(cosupport)) => {
                project_analysis(omega, cosupport, v)
            }
            _ => {
                // generic path: orthonormal basis then coefficient sum
                let basis = self.subspace_basis(sub)?;
                let mut out = vec![0.0; v.len()];
                for b in &basis {
                    crate::linalg::axpy(dot(b, v), b, &mut out);
                }
                Ok(out)
            }
        }
    }

    /// Sum of two member subspaces: support union, cosupport
    /// intersection, or concatenated re-orthonormalized factors.
    pub fn sum_subspaces(&self, a: &Subspace, b: &Subspace) -> Result<Subspace> {
        let order = a.order + b.order;
        let rep = match (self, &a.rep, &b.rep) {
            (
                UnionModel::KSparse { .. } | UnionModel::BlockSparse { .. } | UnionModel::Synthesis { .. },
                SubspaceRep::Support(sa),
                SubspaceRep::Support(sb),
            ) => SubspaceRep::Support(sorted_union(sa, sb)),
            (UnionModel::Analysis { .. }, SubspaceRep::Cosupport(ca), SubspaceRep::Cosupport(cb)) => {
                SubspaceRep::Cosupport(sorted_intersection(ca, cb))
            }
            (UnionModel::LowRank { .. }, SubspaceRep::Factors(fa), SubspaceRep::Factors(fb)) => {
                let mut all = fa.clone();
                all.extend(fb.iter().cloned());
                SubspaceRep::Factors(mgs_orthonormalize(&all, 1e-12))
            }
            (
                UnionModel::Combined { .. },
                SubspaceRep::Pair { support: sa, cosupport: ca },
                SubspaceRep::Pair { support: sb, cosupport: cb },
            ) => SubspaceRep::Pair {
                support: sorted_union(sa, sb),
                cosupport: sorted_intersection(ca, cb),
            },
            _ => {
                return Err(Error::config(format!(
                    "subspace representations do not match the {} model",
                    self.variant_name()
                )))
            }
        };
        Ok(Subspace { rep, order })
    }

    /// Orthonormal basis of the subspace as ambient-space vectors. For
    /// the analysis family this is a basis of the null space of the
    /// cosupport rows.
    pub fn subspace_basis(&self, sub: &Subspace) -> Result<Vec<Vec<f64>>> {
        let n = self.ambient_dim();
        match (self, &sub.rep) {
            (UnionModel::KSparse { .. }, SubspaceRep::Support(support))
            | (UnionModel::BlockSparse { .. }, SubspaceRep::Support(support)) => Ok(support
                .iter()
                .map(|&i| {
                    let mut e = vec![0.0; n];
                    e[i] = 1.0;
                    e
                })
                .collect()),
            (UnionModel::Synthesis { dict, .. }, SubspaceRep::Support(support)) => {
                let atoms: Vec<Vec<f64>> = support.iter().map(|&i| dict.atom(i)).collect();
                Ok(mgs_orthonormalize(&atoms, 1e-12))
            }
            (UnionModel::Analysis { omega, .. }, SubspaceRep::Cosupport(cosupport)) => {
                analysis_null_basis(omega, cosupport)
            }
            (UnionModel::LowRank { .. }, SubspaceRep::Factors(factors)) => Ok(factors.clone()),
            (
                UnionModel::Combined { dict, omega, .. },
                SubspaceRep::Pair { support, cosupport },
            ) => {
                let mut vectors: Vec<Vec<f64>> = support.iter().map(|&i| dict.atom(i)).collect();
                vectors.extend(analysis_null_basis(omega, cosupport)?);
                Ok(mgs_orthonormalize(&vectors, 1e-12))
            }
            _ => Err(Error::config(format!(
                "subspace representation does not match the {} model",
                self.variant_name()
            ))),
        }
    }

    /// A uniformly seeded member subspace of S^B; used by the
    /// empirical lemma verifiers.
    pub fn random_subspace(&self, order: usize, rng: &mut impl Rng) -> Result<Subspace> {
        let rep = match self {
            UnionModel::KSparse { n, k } => {
                SubspaceRep::Support(random_indices(*n, (order * k).min(*n), rng))
            }
            UnionModel::BlockSparse { n, k, block } => {
                let blocks = random_indices(n / block, (order * (k / block)).min(n / block), rng);
                let mut support = Vec::new();
                for b in blocks {
                    support.extend(b * block..(b + 1) * block);
                }
                SubspaceRep::Support(support)
            }
            UnionModel::LowRank { rows, cols, rank } => {
                let count = (order * rank).min(*rows.min(cols));
                let left = random_orthonormal(*rows, count, rng);
                let right = random_orthonormal(*cols, count, rng);
                SubspaceRep::Factors(
                    (0..count)
                        .map(|i| flatten_outer(&left[i], &right[i], *rows, *cols))
                        .collect(),
                )
            }
            UnionModel::Synthesis { dict, k, .. } => SubspaceRep::Support(random_indices(
                dict.atoms(),
                (order * k).min(dict.atoms()),
                rng,
            )),
            UnionModel::Analysis { omega, ell } => {
                SubspaceRep::Cosupport(random_indices(omega.rows(), *ell, rng))
            }
            UnionModel::Combined { dict, k, omega, ell } => SubspaceRep::Pair {
                support: random_indices(dict.atoms(), (order * k).min(dict.atoms()), rng),
                cosupport: random_indices(omega.rows(), *ell, rng),
            },
        };
        Ok(Subspace { rep, order })
    }

    /// A random unit vector lying in a random member of S^B.
    pub fn random_member_unit(&self, order: usize, rng: &mut impl Rng) -> Result<Vec<f64>> {
        let n = self.ambient_dim();
        for _ in 0..16 {
            let sub = self.random_subspace(order, rng)?;
            let g = crate::linalg::standard_normal_vec(rng, n);
            let mut p = self.project(&sub, &g)?;
            let np = norm2(&p);
            if np > 1e-12 {
                crate::linalg::scale(1.0 / np, &mut p);
                return Ok(p);
            }
        }
        Err(Error::numerical(
            "could not draw a nonzero vector from the model",
        ))
    }
}

/// Q_Λ v for the analysis model. Finite-difference operators use the
/// constraint graph directly: the null space of the selected difference
/// rows is spanned by connected-component indicators, so the projection
/// replaces each component by its mean. Dense operators go through an
/// explicit null-space basis.
pub fn cosupport_project(
    omega: &AnalysisOperator,
    cosupport: &[usize],
    v: &[f64],
) -> Result<Vec<f64>> {
    project_analysis(omega, cosupport, v)
}

/// Orthonormal basis of the null space of the cosupport rows, as dense
/// ambient vectors.
pub fn cosupport_null_basis(
    omega: &AnalysisOperator,
    cosupport: &[usize],
) -> Result<Vec<Vec<f64>>> {
    analysis_null_basis(omega, cosupport)
}

/// For finite-difference operators: the connected components of the
/// constraint graph, whose normalized indicators form the null-space
/// basis. None for dense operators.
pub fn cosupport_components(
    omega: &AnalysisOperator,
    cosupport: &[usize],
) -> Option<Vec<Vec<usize>>> {
    if omega.is_finite_difference() {
        Some(difference_components(omega, cosupport))
    } else {
        None
    }
}

fn project_analysis(omega: &AnalysisOperator, cosupport: &[usize], v: &[f64]) -> Result<Vec<f64>> {
    if omega.is_finite_difference() {
        let components = difference_components(omega, cosupport);
        let mut out = vec![0.0; v.len()];
        for comp in &components {
            let mean = comp.iter().map(|&i| v[i]).sum::<f64>() / comp.len() as f64;
            for &i in comp {
                out[i] = mean;
            }
        }
        Ok(out)
    } else {
        let basis = analysis_null_basis(omega, cosupport)?;
        let mut out = vec![0.0; v.len()];
        for b in &basis {
            crate::linalg::axpy(dot(b, v), b, &mut out);
        }
        Ok(out)
    }
}

/// Orthonormal null-space basis of the cosupport rows.
fn analysis_null_basis(omega: &AnalysisOperator, cosupport: &[usize]) -> Result<Vec<Vec<f64>>> {
    let n = omega.cols();
    if omega.is_finite_difference() {
        let components = difference_components(omega, cosupport);
        Ok(components
            .iter()
            .map(|comp| {
                let value = 1.0 / (comp.len() as f64).sqrt();
                let mut b = vec![0.0; n];
                for &i in comp {
                    b[i] = value;
                }
                b
            })
            .collect())
    } else if cosupport.is_empty() {
        Ok((0..n)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                e
            })
            .collect())
    } else {
        Ok(null_space_basis(&omega.rows_matrix(cosupport), 1e-12))
    }
}

/// Connected components of the pixel graph whose edges are the selected
/// difference rows, ordered by smallest pixel index.
fn difference_components(omega: &AnalysisOperator, cosupport: &[usize]) -> Vec<Vec<usize>> {
    let n = omega.cols();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for &r in cosupport {
        if let Some((a, b)) = omega.difference_edge(r) {
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra != rb {
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent[hi] = lo;
            }
        }
    }
    let mut buckets: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        buckets.entry(root).or_default().push(i);
    }
    buckets.into_values().collect()
}

/// Column-major matricization of a length rows·cols vector.
pub fn matricize(v: &[f64], rows: usize, cols: usize) -> DenseMatrix {
    debug_assert_eq!(v.len(), rows * cols);
    let mut m = DenseMatrix::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            m.set(i, j, v[j * rows + i]);
        }
    }
    m
}

/// Column-major flattening of the outer product u v^T.
fn flatten_outer(u: &[f64], vt: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut out = vec![0.0; rows * cols];
    for j in 0..cols {
        for i in 0..rows {
            out[j * rows + i] = u[i] * vt[j];
        }
    }
    out
}

fn canonical_factors(rows: usize, cols: usize, count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|i| {
            let mut f = vec![0.0; rows * cols];
            f[i * rows + i] = 1.0; // e_i e_i^T, column-major
            f
        })
        .collect()
}

fn random_indices(n: usize, count: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    let mut out = all[..count].to_vec();
    out.sort_unstable();
    out
}

fn random_orthonormal(n: usize, count: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    loop {
        let vectors: Vec<Vec<f64>> =
            (0..count).map(|_| crate::linalg::standard_normal_vec(rng, n)).collect();
        let basis = mgs_orthonormalize(&vectors, 1e-12);
        if basis.len() == count {
            return basis;
        }
    }
}

/// Greedy orthogonal matching pursuit over dictionary atoms.
fn omp_select(dict: &SynthesisDictionary, v: &[f64], count: usize) -> Result<Vec<usize>> {
    let mut selected: Vec<usize> = Vec::with_capacity(count);
    let mut residual = v.to_vec();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for _ in 0..count {
        let correlations = dict.adjoint(&residual)?;
        let mut best: Option<(f64, usize)> = None;
        for (i, &c) in correlations.iter().enumerate() {
            if selected.contains(&i) {
                continue;
            }
            let better = match best {
                None => true,
                Some((bc, bi)) => c.abs() > bc || (c.abs() == bc && i < bi),
            };
            if better {
                best = Some((c.abs(), i));
            }
        }
        let Some((_, idx)) = best else { break };
        selected.push(idx);
        // orthogonalize the new atom against the running basis and
        // deflate the residual
        let mut w = dict.atom(idx);
        for b in &basis {
            let c = dot(b, &w);
            crate::linalg::axpy(-c, b, &mut w);
        }
        let nw = norm2(&w);
        if nw > 1e-12 {
            crate::linalg::scale(1.0 / nw, &mut w);
            let c = dot(&w, &residual);
            crate::linalg::axpy(-c, &w, &mut residual);
            basis.push(w);
        }
    }
    selected.sort_unstable();
    Ok(selected)
}
