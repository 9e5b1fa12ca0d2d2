use nalgebra::DVector;

use crate::{Error, Operator, Result};

/// Minimum-Euclidean-norm minimizer of `||Ax - b||`, via the SVD
/// pseudoinverse truncated at the relative threshold `tol`.
///
/// The result lies in the row space of `A`; for the zero operator it is 0.
pub fn min_norm_least_squares(a: &Operator, b: &DVector<f64>, tol: f64) -> Result<DVector<f64>> {
    assert!(tol > 0.0, "rank tolerance must be positive");
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: b.len(),
        });
    }
    let svd = a.full_svd();
    let smax = svd.sigma_max();
    let mut x = DVector::zeros(a.cols());
    if smax == 0.0 {
        return Ok(x);
    }
    for (i, &sigma) in svd.s.iter().enumerate() {
        if sigma > tol * smax {
            let coeff = svd.u.column(i).dot(b) / sigma;
            x.axpy(coeff, &svd.v.column(i).into_owned(), 1.0);
        }
    }
    Ok(x)
}
