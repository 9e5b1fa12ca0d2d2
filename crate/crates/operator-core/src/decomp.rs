//! Spectral decompositions, backed by faer.
//!
//! nalgebra's own SVD iteration loses up to half the mantissa on strongly
//! rank-deficient matrices (and its 2x2 special case can be wrong outright),
//! which is fatal for rank decisions at 1e-10 relative thresholds. faer's
//! SVD keeps backward error at machine precision on those cases, so every
//! decomposition in this crate routes through here.

use faer::MatRef;
use nalgebra::{DMatrix, DVector};

/// Full SVD `A = U diag(s) V^T` with `U` (m x m) and `V` (n x n) complete
/// orthogonal factors and `s` descending of length `min(m, n)`.
#[derive(Debug, Clone)]
pub struct FullSvd {
    pub u: DMatrix<f64>,
    pub s: DVector<f64>,
    pub v: DMatrix<f64>,
}

impl FullSvd {
    pub fn sigma_max(&self) -> f64 {
        self.s.iter().cloned().fold(0.0, f64::max)
    }

    /// Smallest singular value above `tol * sigma_max`, if any.
    pub fn sigma_min_positive(&self, tol: f64) -> Option<f64> {
        let r = self.rank(tol);
        if r == 0 {
            None
        } else {
            Some(self.s[r - 1])
        }
    }

    /// Numerical rank at relative threshold `tol`; 0 for the zero matrix.
    pub fn rank(&self, tol: f64) -> usize {
        let smax = self.sigma_max();
        if smax == 0.0 {
            return 0;
        }
        self.s.iter().filter(|&&x| x > tol * smax).count()
    }
}

pub(crate) fn full_svd(m: &DMatrix<f64>) -> FullSvd {
    let view = MatRef::from_column_major_slice(m.as_slice(), m.nrows(), m.ncols());
    let svd = view.svd().expect("SVD of a finite matrix did not converge");
    let u = svd.U();
    let v = svd.V();
    let s = svd.S().column_vector();
    FullSvd {
        u: DMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)]),
        s: DVector::from_fn(s.nrows(), |i, _| s[i]),
        v: DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)]),
    }
}

/// Singular values only, descending.
pub(crate) fn singular_values(m: &DMatrix<f64>) -> DVector<f64> {
    full_svd(m).s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_are_full_and_descending() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let svd = full_svd(&m);
        assert_eq!(svd.u.shape(), (2, 2));
        assert_eq!(svd.v.shape(), (3, 3));
        assert_eq!(svd.s.len(), 2);
        assert!(svd.s[0] >= svd.s[1]);
        let recon = &svd.u * DMatrix::from_fn(2, 3, |i, j| if i == j { svd.s[i] } else { 0.0 })
            * svd.v.transpose();
        assert!((&m - recon).abs().max() <= 1e-13);
    }

    #[test]
    fn rank_deficient_projector_is_exact() {
        // the case nalgebra's 2x2 SVD gets wrong by ~1e-1
        let v = [-0.6950924527982967f64, -0.7189203586370664];
        let q = DMatrix::from_fn(2, 2, |i, j| {
            (if i == j { 1.0 } else { 0.0 }) - v[i] * v[j]
        });
        let svd = full_svd(&q);
        assert!((svd.s[0] - 1.0).abs() <= 1e-14);
        assert!(svd.s[1].abs() <= 1e-14);
    }
}
