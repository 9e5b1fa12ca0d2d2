//! Dense real linear-algebra substrate shared by the isomorphism and
//! pressure crates: operators with explicit domain/codomain dimensions,
//! orthonormal subspace bases, projectors, numerical rank, and minimum-norm
//! least squares.
//!
//! Everything works over 64-bit reals. Numerical rank decisions use a
//! relative singular-value threshold `tol * sigma_max`; the zero operator is
//! special-cased (rank 0, full nullspace, empty image) since every relative
//! test is vacuous there.

mod decomp;
mod error;
mod functional;
mod lstsq;
mod operator;
mod subspace;

pub use decomp::FullSvd;
pub use error::Error;
pub use functional::{CosetVector, Functional};
pub use lstsq::min_norm_least_squares;
pub use operator::Operator;
pub use subspace::{largest_principal_angle, SubspaceBasis};

/// Result alias for this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Default relative tolerance for rank decisions and membership tests.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Orthonormality slack permitted in a [`SubspaceBasis`]: every pairwise
/// inner product must satisfy `|<v_i, v_j> - delta_ij| <= ORTHONORMALITY_TOL`.
pub const ORTHONORMALITY_TOL: f64 = 1e-12;
