//! Two natural isomorphisms attached to a linear map `A : X -> H` between
//! finite-dimensional real spaces.
//!
//! Write `Im(A)` for the image, `N(A)` for the nullspace, and `Nperp(A)` for
//! the *conullspace*: the functionals on `X` that vanish on `N(A)`, which by
//! the Fredholm alternative equals `Im(A^T)`. The two maps are
//!
//! * the image-to-conullspace map `h -> (h | A.)`, with coordinate form
//!   `h -> A^T h`, an isomorphism `Im(A) -> Nperp(A)` of norm `||A||`; it
//!   reduces to the Riesz self-duality of `H` when `A = I`;
//! * the coset map `x + N(A) -> Ax`, an isomorphism `X/N(A) -> Im(A)` of
//!   norm `||A||` under the quotient norm.
//!
//! Their composite `x + N(A) -> (Ax | A.)` has norm `||A||^2`. All three
//! norm identities are computed, not assumed, so they double as consistency
//! checks on the construction.
//!
//! Everything is real: over complex scalars the map `h -> (h | A.)` is only
//! conjugate-linear, so this crate fixes `f64` coordinates throughout.

mod context;
mod error;
mod qr_lstsq;
mod reports;

pub use context::{ConullspaceCheck, IsoContext};
pub use error::Error;
pub use reports::{projector_special_case, FredholmReport, ProjectorCaseReport};

pub type Result<T> = std::result::Result<T, Error>;
