use nalgebra::{DMatrix, DVector};

use crate::decomp;
use crate::{Error, Operator, Result, ORTHONORMALITY_TOL};

/// An orthonormal spanning set of a subspace of `R^ambient_dim`, stored as
/// the columns of a dense matrix. The basis may be empty (the zero subspace).
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    basis: DMatrix<f64>,
    tol_used: f64,
}

impl SubspaceBasis {
    /// Build from basis columns, validating orthonormality to
    /// [`ORTHONORMALITY_TOL`](crate::ORTHONORMALITY_TOL) and finiteness.
    pub fn from_columns(basis: DMatrix<f64>, tol_used: f64) -> Result<Self> {
        let ambient_dim = basis.nrows();
        if basis.ncols() > ambient_dim {
            return Err(Error::TooManyVectors {
                count: basis.ncols(),
                ambient: ambient_dim,
            });
        }
        for (index, &value) in basis.as_slice().iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
        }
        let gram = basis.transpose() * &basis;
        let mut deviation = 0.0f64;
        for i in 0..gram.nrows() {
            for j in 0..gram.ncols() {
                let target = if i == j { 1.0 } else { 0.0 };
                deviation = deviation.max((gram[(i, j)] - target).abs());
            }
        }
        if deviation > ORTHONORMALITY_TOL {
            return Err(Error::NotOrthonormal {
                deviation,
                limit: ORTHONORMALITY_TOL,
            });
        }
        Ok(Self {
            ambient_dim,
            basis,
            tol_used,
        })
    }

    /// Wrap columns already known orthonormal (SVD output).
    pub(crate) fn from_orthonormal_unchecked(
        ambient_dim: usize,
        basis: DMatrix<f64>,
        tol_used: f64,
    ) -> Self {
        debug_assert_eq!(basis.nrows(), ambient_dim);
        Self {
            ambient_dim,
            basis,
            tol_used,
        }
    }

    /// The zero subspace of `R^ambient_dim`.
    pub fn empty(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: DMatrix::zeros(ambient_dim, 0),
            tol_used: 0.0,
        }
    }

    /// The full space, spanned by the standard basis.
    pub fn full_standard(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: DMatrix::identity(ambient_dim, ambient_dim),
            tol_used: 0.0,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Number of basis vectors (the subspace dimension).
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn tol_used(&self) -> f64 {
        self.tol_used
    }

    /// Basis vectors as matrix columns.
    pub fn columns(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn column(&self, index: usize) -> DVector<f64> {
        self.basis.column(index).into_owned()
    }

    /// The orthogonal projector onto the span, `P = B B^T`.
    /// `P` is square, symmetric, and idempotent; empty bases give the zero
    /// matrix.
    pub fn projector(&self) -> Operator {
        let p = &self.basis * self.basis.transpose();
        let p = if self.dim() == 0 {
            DMatrix::zeros(self.ambient_dim, self.ambient_dim)
        } else {
            p
        };
        Operator::from_matrix(p).expect("projector entries are finite")
    }

    /// Project `x` onto the span without forming the projector matrix.
    pub fn project(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: x.len(),
            });
        }
        if self.dim() == 0 {
            return Ok(DVector::zeros(self.ambient_dim));
        }
        let coeffs = self.basis.transpose() * x;
        Ok(&self.basis * coeffs)
    }

    /// The component of `x` orthogonal to the span.
    pub fn project_out(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(x - self.project(x)?)
    }

    /// Euclidean distance from `x` to the span.
    pub fn distance_to_span(&self, x: &DVector<f64>) -> Result<f64> {
        Ok(self.project_out(x)?.norm())
    }

    /// Orthonormal basis of the orthogonal complement of the span.
    ///
    /// The complement is the nullspace of `B^T`, read off the trailing right
    /// singular vectors of its full SVD. Since `B` is orthonormal, every
    /// singular value of `B^T` is 1, so the split needs no tolerance.
    pub fn orthonormal_complement(&self) -> SubspaceBasis {
        let d = self.ambient_dim;
        let k = self.dim();
        if k == 0 {
            return SubspaceBasis::full_standard(d);
        }
        if k == d {
            return SubspaceBasis::empty(d);
        }
        let svd = decomp::full_svd(&self.basis.transpose());
        SubspaceBasis::from_orthonormal_unchecked(
            d,
            svd.v.columns(k, d - k).into_owned(),
            self.tol_used,
        )
    }
}

/// Largest principal angle (radians) between two subspaces of the same
/// dimension in the same ambient space.
///
/// Computed through the sine, `sigma_max((I - P_a) B_b)`, which stays
/// accurate for angles near zero where the cosine route loses half the
/// available digits. Zero-dimensional subspaces are at angle 0 by convention.
pub fn largest_principal_angle(a: &SubspaceBasis, b: &SubspaceBasis) -> Result<f64> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: a.ambient_dim(),
            got: b.ambient_dim(),
        });
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    if a.dim() == 0 {
        return Ok(0.0);
    }
    let sine = |from: &SubspaceBasis, onto: &SubspaceBasis| -> f64 {
        let proj = from.columns() * (from.columns().transpose() * onto.columns());
        let residual = onto.columns() - proj;
        residual
            .svd(false, false)
            .singular_values
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    };
    let s = sine(a, b).max(sine(b, a));
    Ok(s.min(1.0).asin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn basis_of(cols: &[&[f64]]) -> SubspaceBasis {
        let dim = cols[0].len();
        let data: Vec<f64> = cols.iter().flat_map(|c| c.iter().cloned()).collect();
        SubspaceBasis::from_columns(DMatrix::from_column_slice(dim, cols.len(), &data), 1e-10)
            .unwrap()
    }

    #[test]
    fn projector_onto_axis() {
        let b = basis_of(&[&[1.0, 0.0]]);
        let p = b.projector();
        assert_eq!(p.entries_row_major(), vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn projector_of_empty_is_zero() {
        let b = SubspaceBasis::empty(3);
        let p = b.projector();
        assert!(p.entries_row_major().iter().all(|&x| x == 0.0));
        assert_eq!(p.rows(), 3);
    }

    #[test]
    fn projector_onto_diagonal_line() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b = basis_of(&[&[s, s]]);
        let p = b.projector();
        for (got, want) in p.entries_row_major().iter().zip([0.5, 0.5, 0.5, 0.5]) {
            assert_relative_eq!(*got, want, max_relative = 1e-14);
        }
    }

    #[test]
    fn rejects_non_orthonormal() {
        let err =
            SubspaceBasis::from_columns(DMatrix::from_column_slice(2, 1, &[1.0, 1.0]), 1e-10)
                .unwrap_err();
        assert!(matches!(err, Error::NotOrthonormal { .. }));
    }

    #[test]
    fn complement_of_axis() {
        let b = basis_of(&[&[1.0, 0.0, 0.0]]);
        let c = b.orthonormal_complement();
        assert_eq!(c.dim(), 2);
        for j in 0..2 {
            assert!(c.column(j)[0].abs() <= 1e-14);
        }
    }

    #[test]
    fn complement_edge_cases() {
        assert_eq!(SubspaceBasis::empty(4).orthonormal_complement().dim(), 4);
        assert_eq!(
            SubspaceBasis::full_standard(4).orthonormal_complement().dim(),
            0
        );
    }

    #[test]
    fn principal_angle_of_identical_spans() {
        let b1 = basis_of(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b2 = basis_of(&[&[s, s, 0.0], &[s, -s, 0.0]]);
        let angle = largest_principal_angle(&b1, &b2).unwrap();
        assert!(angle <= 1e-12, "angle {angle}");
    }

    #[test]
    fn principal_angle_of_tilted_line() {
        let b1 = basis_of(&[&[1.0, 0.0]]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b2 = basis_of(&[&[s, s]]);
        let angle = largest_principal_angle(&b1, &b2).unwrap();
        assert_relative_eq!(angle, std::f64::consts::FRAC_PI_4, max_relative = 1e-12);
    }

    #[test]
    fn principal_angle_zero_dim_convention() {
        let a = SubspaceBasis::empty(3);
        let b = SubspaceBasis::empty(3);
        assert_eq!(largest_principal_angle(&a, &b).unwrap(), 0.0);
    }
}
