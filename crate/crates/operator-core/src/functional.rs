use nalgebra::DVector;

use crate::{Error, Result, SubspaceBasis};

/// An element of the dual space, identified with its coordinate vector in the
/// standard dual basis. Under this identification the dual norm is the
/// Euclidean norm of the coordinates and the duality map is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional {
    coords: DVector<f64>,
}

impl Functional {
    pub fn new(coords: DVector<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyShape { rows: 0, cols: 1 });
        }
        for (index, &value) in coords.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
        }
        Ok(Self { coords })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(coords))
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    /// Dual norm (Euclidean norm of the coordinates).
    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }

    /// Evaluate the functional: `f(x) = <coords, x>`.
    pub fn evaluate(&self, x: &DVector<f64>) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(self.coords.dot(x))
    }
}

/// A coset `x + N`: a representative vector together with the nullspace it is
/// quotiented by. No canonical representative is chosen; quotient-norm
/// computations canonicalize on demand.
#[derive(Debug, Clone)]
pub struct CosetVector<'a> {
    representative: DVector<f64>,
    nullspace: &'a SubspaceBasis,
}

impl<'a> CosetVector<'a> {
    pub fn new(representative: DVector<f64>, nullspace: &'a SubspaceBasis) -> Result<Self> {
        if representative.len() != nullspace.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: nullspace.ambient_dim(),
                got: representative.len(),
            });
        }
        for (index, &value) in representative.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
        }
        Ok(Self {
            representative,
            nullspace,
        })
    }

    pub fn representative(&self) -> &DVector<f64> {
        &self.representative
    }

    pub fn nullspace(&self) -> &SubspaceBasis {
        self.nullspace
    }

    /// A different representative of the same coset.
    pub fn shifted_by(&self, nullspace_coeffs: &DVector<f64>) -> Result<CosetVector<'a>> {
        if nullspace_coeffs.len() != self.nullspace.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.nullspace.dim(),
                got: nullspace_coeffs.len(),
            });
        }
        let shift = self.nullspace.columns() * nullspace_coeffs;
        CosetVector::new(&self.representative + shift, self.nullspace)
    }
}
