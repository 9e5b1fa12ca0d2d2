use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] operator_core::Error),

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error(
        "vector lies outside the image of the operator: distance {distance:.3e} exceeds {allowed:.3e}"
    )]
    NotInImage { distance: f64, allowed: f64 },

    #[error(
        "functional lies outside the conullspace: component along the nullspace {residual:.3e} exceeds {allowed:.3e}"
    )]
    NotInConullspace { residual: f64, allowed: f64 },

    #[error(
        "inverse-isomorphism construction paths disagree: {deviation:.3e} exceeds {allowed:.3e}"
    )]
    ConstructionMismatch { deviation: f64, allowed: f64 },

    #[error("coset nullspace does not match the context: {detail}")]
    CosetMismatch { detail: String },
}
