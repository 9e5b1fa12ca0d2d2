//! Discrete pressure recovery on a MAC staggered grid.
//!
//! The domain is a box `[0,lx] x [0,ly] x [0,lz]` split into cells. Scalars
//! (pressure, divergence) live at cell centers; velocity and force
//! components live at the faces, with boundary faces pinned to zero so that
//! border-vanishing is structural. The discrete divergence `D` maps
//! interior-face values to cell averages of out-fluxes; its matrix transpose
//! is the negative discrete gradient, and is also its adjoint under the
//! volume-weighted inner products once the weights are folded symmetrically
//! into the coordinates.
//!
//! Two facts carry the whole module, both checked numerically rather than
//! assumed: every divergence has zero volume-weighted sum (the discrete
//! divergence theorem), and `rank(D) = n_cells - 1`, so the image of `D` is
//! exactly the zero-mean scalars. Pressure recovery from a force field `G`
//! then inverts the image-to-conullspace isomorphism of `D`: the unique
//! zero-mean `p` with `<p, Dv> = <G, v>` for all border-null `v`. Sign
//! convention: `G = -grad p`, so the coordinate equation is `D^T p = g`.
//!
//! Grids up to [`DENSE_CELL_LIMIT`] cells get a dense SVD/pseudoinverse
//! solver (the oracle); larger grids use matrix-free conjugate gradient on
//! the zero-mean normal equations `D D^T p = D g`.

mod divergence;
mod error;
pub mod fieldio;
mod fields;
mod grid;
mod mms;
pub mod sampling;
mod solve;

pub use divergence::{DivergenceSystem, ZeroMeanImageReport};
pub use error::Error;
pub use fields::{ScalarField, VectorField};
pub use grid::{Axis, Grid};
pub use mms::{manufactured, MmsCase};
pub use solve::{MembershipCheck, PressureSolution, SolveMethod};

pub type Result<T> = std::result::Result<T, Error>;

/// Largest cell count solved through the dense SVD/pseudoinverse path;
/// larger systems switch to matrix-free conjugate gradient. Dense costs grow
/// with the cube of the cell count, and past about a thousand cells a single
/// factorization would dominate entire verification runs.
pub const DENSE_CELL_LIMIT: usize = 1024;
