//! Recovery of signals that live in a union of low-dimensional linear
//! subspaces, from compressive linear measurements.
//!
//! The crate is organized around a generic greedy engine ([`gcosamp`])
//! that alternates subspace selection, constrained least squares, and
//! pruning. Plugging different subspace families ([`models`]) into the
//! engine yields CoSaMP (plain sparsity), block-sparse CoSaMP, ADMiRA
//! (low rank), and signal-space / analysis variants. A combined
//! sparse-synthesis + cosparse-analysis solver lives in [`sacosamp`].
//!
//! [`theory`] provides Gaussian mean-width machinery: Monte-Carlo width
//! estimation, closed-form width bounds for the standard models, and a
//! convergence/noise bound calculator with empirical verifiers.
//! [`operators`] holds the measurement, analysis, and dictionary
//! operators used throughout, and [`harness`] drives the reproducible
//! experiments exposed by the `gcosamp` CLI.

pub mod error;
pub mod gcosamp;
pub mod harness;
pub mod linalg;
pub mod models;
pub mod operators;
pub mod sacosamp;
pub mod theory;

pub use error::{Error, Result};
