use nalgebra::DVector;

use crate::grid::Axis;
use crate::{Error, Grid, Result};

/// A scalar field sampled at cell centers, row-major with x fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_cells() {
            return Err(Error::FieldLength {
                what: "scalar field",
                expected: grid.n_cells(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteField {
                what: "scalar field",
                index,
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.n_cells()],
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[self.grid.cell_index(i, j, k)]
    }

    /// Volume-weighted mean; on a uniform grid this is the plain mean times
    /// the cell volume over the total volume, i.e. the plain mean.
    pub fn weighted_mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Subtract the mean twice; the second pass removes the roundoff left by
    /// the first so the result is zero-mean to machine precision.
    pub fn subtract_mean(&mut self) {
        for _ in 0..2 {
            let m = self.weighted_mean();
            self.values.iter_mut().for_each(|v| *v -= m);
        }
    }

    /// L2 norm under the volume-weighted inner product.
    pub fn weighted_norm(&self) -> f64 {
        self.coords().norm()
    }

    /// Coordinate vector: values scaled by the symmetric weight, so that
    /// Euclidean products of coordinates equal volume-weighted products of
    /// fields.
    pub fn coords(&self) -> DVector<f64> {
        let w = self.grid.coord_weight();
        DVector::from_iterator(self.values.len(), self.values.iter().map(|&v| v * w))
    }

    pub fn from_coords(grid: Grid, coords: &DVector<f64>) -> Result<Self> {
        let w = grid.coord_weight();
        Self::new(grid, coords.iter().map(|&c| c / w).collect())
    }
}

/// A vector field on the staggered faces: component arrays `u`, `v`, `w`
/// include boundary faces. Velocity fields must carry exact zeros there
/// (border-vanishing is structural: boundary entries never enter any
/// operator); force fields may carry arbitrary boundary samples, which all
/// operations ignore.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: Grid,
    u: Vec<f64>,
    v: Vec<f64>,
    w: Vec<f64>,
}

impl VectorField {
    pub fn new(grid: Grid, u: Vec<f64>, v: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        for (vals, axis, what) in [
            (&u, Axis::X, "u component"),
            (&v, Axis::Y, "v component"),
            (&w, Axis::Z, "w component"),
        ] {
            if vals.len() != grid.n_faces(axis) {
                return Err(Error::FieldLength {
                    what,
                    expected: grid.n_faces(axis),
                    got: vals.len(),
                });
            }
            if let Some(index) = vals.iter().position(|x| !x.is_finite()) {
                return Err(Error::NonFiniteField { what, index });
            }
        }
        Ok(Self { grid, u, v, w })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            u: vec![0.0; grid.n_faces(Axis::X)],
            v: vec![0.0; grid.n_faces(Axis::Y)],
            w: vec![0.0; grid.n_faces(Axis::Z)],
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn component(&self, axis: Axis) -> &[f64] {
        match axis {
            Axis::X => &self.u,
            Axis::Y => &self.v,
            Axis::Z => &self.w,
        }
    }

    pub fn component_mut(&mut self, axis: Axis) -> &mut [f64] {
        match axis {
            Axis::X => &mut self.u,
            Axis::Y => &mut self.v,
            Axis::Z => &mut self.w,
        }
    }

    pub fn face_value(&self, axis: Axis, i: usize, j: usize, k: usize) -> f64 {
        self.component(axis)[self.grid.face_index(axis, i, j, k)]
    }

    /// Largest magnitude found on any boundary face.
    pub fn max_boundary_abs(&self) -> f64 {
        let g = self.grid;
        let mut worst = 0.0f64;
        for k in 0..g.nz {
            for j in 0..g.ny {
                worst = worst.max(self.face_value(Axis::X, 0, j, k).abs());
                worst = worst.max(self.face_value(Axis::X, g.nx, j, k).abs());
            }
        }
        for k in 0..g.nz {
            for i in 0..g.nx {
                worst = worst.max(self.face_value(Axis::Y, i, 0, k).abs());
                worst = worst.max(self.face_value(Axis::Y, i, g.ny, k).abs());
            }
        }
        for j in 0..g.ny {
            for i in 0..g.nx {
                worst = worst.max(self.face_value(Axis::Z, i, j, 0).abs());
                worst = worst.max(self.face_value(Axis::Z, i, j, g.nz).abs());
            }
        }
        worst
    }

    /// Whether every boundary face is exactly zero (the discrete form of
    /// vanishing on the border).
    pub fn is_border_null(&self) -> bool {
        self.max_boundary_abs() == 0.0
    }

    /// Velocity coordinate vector: interior-face values scaled by the
    /// symmetric weight, x block first, then y, then z.
    pub fn interior_coords(&self) -> DVector<f64> {
        let g = self.grid;
        let w = g.coord_weight();
        let mut coords = DVector::zeros(g.n_interior_faces_total());
        self.for_each_interior(|axis, i, j, k| {
            coords[g.interior_face_coord(axis, i, j, k)] =
                w * self.component(axis)[g.face_index(axis, i, j, k)];
        });
        coords
    }

    /// Rebuild a field from velocity coordinates; boundary faces are zero.
    pub fn from_interior_coords(grid: Grid, coords: &DVector<f64>) -> Result<Self> {
        if coords.len() != grid.n_interior_faces_total() {
            return Err(Error::FieldLength {
                what: "velocity coordinates",
                expected: grid.n_interior_faces_total(),
                got: coords.len(),
            });
        }
        let w = grid.coord_weight();
        let mut field = Self::zeros(grid);
        field.for_each_interior_mut(|grid, comp, axis, i, j, k| {
            comp[grid.face_index(axis, i, j, k)] =
                coords[grid.interior_face_coord(axis, i, j, k)] / w;
        });
        Ok(field)
    }

    /// L2 norm of the interior content under the volume-weighted inner
    /// product. Boundary samples do not contribute, matching their role in
    /// every pairing.
    pub fn weighted_norm(&self) -> f64 {
        self.interior_coords().norm()
    }

    fn for_each_interior(&self, mut visit: impl FnMut(Axis, usize, usize, usize)) {
        let g = self.grid;
        for k in 0..g.nz {
            for j in 0..g.ny {
                for i in 1..g.nx {
                    visit(Axis::X, i, j, k);
                }
            }
        }
        for k in 0..g.nz {
            for j in 1..g.ny {
                for i in 0..g.nx {
                    visit(Axis::Y, i, j, k);
                }
            }
        }
        for k in 1..g.nz {
            for j in 0..g.ny {
                for i in 0..g.nx {
                    visit(Axis::Z, i, j, k);
                }
            }
        }
    }

    fn for_each_interior_mut(
        &mut self,
        mut visit: impl FnMut(&Grid, &mut [f64], Axis, usize, usize, usize),
    ) {
        let g = self.grid;
        for k in 0..g.nz {
            for j in 0..g.ny {
                for i in 1..g.nx {
                    visit(&g, &mut self.u, Axis::X, i, j, k);
                }
            }
        }
        for k in 0..g.nz {
            for j in 1..g.ny {
                for i in 0..g.nx {
                    visit(&g, &mut self.v, Axis::Y, i, j, k);
                }
            }
        }
        for k in 1..g.nz {
            for j in 0..g.ny {
                for i in 0..g.nx {
                    visit(&g, &mut self.w, Axis::Z, i, j, k);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_1d() -> Grid {
        Grid::new(2, 1, 1, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn scalar_roundtrips_through_coords() {
        let g = grid_1d();
        let s = ScalarField::new(g, vec![0.25, -0.25]).unwrap();
        let back = ScalarField::from_coords(g, &s.coords()).unwrap();
        assert_eq!(back.values(), s.values());
    }

    #[test]
    fn scalar_mean_subtraction_is_machine_exact() {
        let g = Grid::new(5, 1, 1, 1.0, 1.0, 1.0).unwrap();
        let mut s = ScalarField::new(g, vec![1.0, 2.0, 3.5, -0.25, 10.0]).unwrap();
        s.subtract_mean();
        assert!(s.weighted_mean().abs() <= 1e-15);
    }

    #[test]
    fn vector_coords_see_only_interior_faces() {
        let g = grid_1d();
        // one interior x-face; boundary values must not leak into coords
        let u = vec![7.0, 2.0, -3.0];
        let f = VectorField::new(g, u, vec![0.0; 4], vec![0.0; 4]).unwrap();
        let coords = f.interior_coords();
        assert_eq!(coords.len(), 1);
        let w = g.coord_weight();
        assert_eq!(coords[0], 2.0 * w);
        assert_eq!(f.max_boundary_abs(), 7.0);
        assert!(!f.is_border_null());
    }

    #[test]
    fn interior_coords_roundtrip() {
        let g = Grid::new(3, 2, 2, 1.0, 1.0, 1.0).unwrap();
        let n = g.n_interior_faces_total();
        let coords = DVector::from_fn(n, |i, _| (i as f64) - 3.0);
        let f = VectorField::from_interior_coords(g, &coords).unwrap();
        assert!(f.is_border_null());
        // scaling by the irrational weight and back costs at most one ulp
        let back = f.interior_coords();
        assert!((back - &coords).norm() <= 1e-15 * coords.norm());
    }

    #[test]
    fn rejects_wrong_lengths_and_nan() {
        let g = grid_1d();
        assert!(ScalarField::new(g, vec![1.0]).is_err());
        assert!(ScalarField::new(g, vec![1.0, f64::NAN]).is_err());
        assert!(VectorField::new(g, vec![0.0; 2], vec![0.0; 4], vec![0.0; 4]).is_err());
    }
}
