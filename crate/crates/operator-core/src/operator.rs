use nalgebra::{DMatrix, DVector};

use crate::decomp::{self, FullSvd};
use crate::subspace::SubspaceBasis;
use crate::{Error, Result};

/// A bounded linear map between finite-dimensional real spaces, stored as a
/// dense matrix with explicit row/column dimensions.
///
/// Construction validates that every entry is finite; all downstream code may
/// assume NaN/Inf-free data.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    matrix: DMatrix<f64>,
}

impl Operator {
    /// Build from row-major entries. `entries.len()` must equal `rows * cols`.
    pub fn new(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyShape { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(Error::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                got: entries.len(),
            });
        }
        check_finite(entries)?;
        Ok(Self {
            matrix: DMatrix::from_row_slice(rows, cols, entries),
        })
    }

    /// Wrap an existing matrix, validating shape and finiteness.
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() == 0 || matrix.ncols() == 0 {
            return Err(Error::EmptyShape {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        check_finite(matrix.as_slice())?;
        Ok(Self { matrix })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "operator shape must be positive");
        Self {
            matrix: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "operator shape must be positive");
        Self {
            matrix: DMatrix::identity(n, n),
        }
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.matrix[(row, col)]
    }

    /// Entries in row-major order.
    pub fn entries_row_major(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.matrix[(i, j)]);
            }
        }
        out
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn transpose(&self) -> Operator {
        Self {
            matrix: self.matrix.transpose(),
        }
    }

    /// Apply to a domain vector.
    pub fn apply(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.cols(),
                got: x.len(),
            });
        }
        Ok(&self.matrix * x)
    }

    /// Operator norm (largest singular value). Zero for the zero operator.
    pub fn operator_norm(&self) -> f64 {
        decomp::singular_values(&self.matrix)
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    }

    /// Numerical rank: the number of singular values exceeding
    /// `tol * sigma_max`, and 0 when `sigma_max == 0`.
    pub fn rank(&self, tol: f64) -> usize {
        assert!(tol > 0.0, "rank tolerance must be positive");
        self.full_svd().rank(tol)
    }

    /// Orthonormal basis of the column space, via SVD with relative
    /// threshold `tol`. Empty for the zero operator.
    pub fn image_basis(&self, tol: f64) -> SubspaceBasis {
        assert!(tol > 0.0, "rank tolerance must be positive");
        let svd = self.full_svd();
        let r = svd.rank(tol);
        SubspaceBasis::from_orthonormal_unchecked(
            self.rows(),
            svd.u.columns(0, r).into_owned(),
            tol,
        )
    }

    /// Orthonormal basis of `{x : Ax = 0}` at relative threshold `tol`:
    /// the trailing right singular vectors. For the zero operator this is
    /// the full standard basis.
    pub fn nullspace_basis(&self, tol: f64) -> SubspaceBasis {
        assert!(tol > 0.0, "rank tolerance must be positive");
        let svd = self.full_svd();
        let r = svd.rank(tol);
        SubspaceBasis::from_orthonormal_unchecked(
            self.cols(),
            svd.v.columns(r, self.cols() - r).into_owned(),
            tol,
        )
    }

    /// Orthonormal basis of the row space (the image of the transpose).
    pub fn row_space_basis(&self, tol: f64) -> SubspaceBasis {
        assert!(tol > 0.0, "rank tolerance must be positive");
        let svd = self.full_svd();
        let r = svd.rank(tol);
        SubspaceBasis::from_orthonormal_unchecked(
            self.cols(),
            svd.v.columns(0, r).into_owned(),
            tol,
        )
    }

    /// Full SVD factors with complete orthogonal `U` and `V`.
    pub fn full_svd(&self) -> FullSvd {
        decomp::full_svd(&self.matrix)
    }
}

fn check_finite(entries: &[f64]) -> Result<()> {
    for (index, &value) in entries.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index, value });
        }
    }
    Ok(())
}
