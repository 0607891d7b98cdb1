//! Random-walk polynomial families and momentum power iterations.
//!
//! A probability vector `p = (p0, 0, p2, ..., pm)` with mean-zero step
//! distribution defines a family of polynomials through a recurrence. The
//! family stays bounded on a cusped region of the complex plane and grows
//! like `(1 + sqrt(2 eps) / sigma)^n` just past `z = 1`. That growth is what
//! accelerates the power method when the subdominant spectrum fits inside a
//! scaled copy of the region.
//!
//! Modules:
//!
//! - [`prob`]: validated probability vectors and their walk variance.
//! - [`polyfam`]: family evaluation, characteristic polynomial and its roots,
//!   the exterior map `psi`.
//! - [`region`]: boundary curve, cusps, membership.
//! - [`walk_approx`]: exact distribution of the reflecting martingale and the
//!   degree-`sqrt(n)` approximation of `z^n`.
//! - [`eigensolve`]: power, static momentum and dynamic momentum iterations.
//! - [`matio`]: matrix operators, Matrix Market I/O, test problems.
//! - [`analysis`]: growth, boundedness and ellipse bound calculators.
//! - [`selfcheck`]: a quick invariant sweep used by the CLI.

pub mod analysis;
pub mod eigensolve;
mod error;
pub mod matio;
pub mod polyfam;
pub mod prob;
pub mod region;
pub mod selfcheck;
pub mod walk_approx;

pub use error::{Error, Result};
pub use num_complex::Complex64 as Complex;

pub use eigensolve::{
    dynamic_momentum, momentum_params, power_iterate, relative_error, static_momentum,
    IterationRecord, IterationTrace, MomentumParams, RunOptions, Solution, SolverConfig,
    Termination,
};
pub use matio::{CsrMatrix, DenseMatrix, MatrixOperator, Vector};
pub use polyfam::{char_poly, char_roots, dominant_root, eval_family, eval_monic, psi};
pub use prob::ProbVector;
pub use region::{contains, cusps, scaled_contains, Membership};
