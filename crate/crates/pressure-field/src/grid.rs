use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One of the three grid axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// A uniform MAC staggered grid on the box `[0,lx] x [0,ly] x [0,lz]` with
/// `nx * ny * nz` cells. Degenerate 1D/2D grids (`ny = nz = 1` and so on)
/// are supported; they exist mostly as hand-checkable solver oracles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub lx: f64,
    pub ly: f64,
    pub lz: f64,
}

impl Grid {
    pub fn new(nx: usize, ny: usize, nz: usize, lx: f64, ly: f64, lz: f64) -> Result<Self> {
        if nx == 0 || ny == 0 || nz == 0 {
            return Err(Error::InvalidGrid {
                detail: format!("cell counts must be positive, got {nx}x{ny}x{nz}"),
            });
        }
        if nx * ny * nz < 2 {
            return Err(Error::InvalidGrid {
                detail: "a single-cell grid has no nontrivial zero-mean scalars".into(),
            });
        }
        for (len, name) in [(lx, "lx"), (ly, "ly"), (lz, "lz")] {
            if !(len > 0.0 && len.is_finite()) {
                return Err(Error::InvalidGrid {
                    detail: format!("{name} must be positive and finite, got {len}"),
                });
            }
        }
        Ok(Self {
            nx,
            ny,
            nz,
            lx,
            ly,
            lz,
        })
    }

    pub fn cells(&self, axis: Axis) -> usize {
        match axis {
            Axis::X => self.nx,
            Axis::Y => self.ny,
            Axis::Z => self.nz,
        }
    }

    pub fn length(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.lx,
            Axis::Y => self.ly,
            Axis::Z => self.lz,
        }
    }

    pub fn spacing(&self, axis: Axis) -> f64 {
        self.length(axis) / self.cells(axis) as f64
    }

    pub fn hx(&self) -> f64 {
        self.spacing(Axis::X)
    }

    pub fn hy(&self) -> f64 {
        self.spacing(Axis::Y)
    }

    pub fn hz(&self) -> f64 {
        self.spacing(Axis::Z)
    }

    pub fn cell_volume(&self) -> f64 {
        self.hx() * self.hy() * self.hz()
    }

    /// Square root of the cell volume: the symmetric weight folded into
    /// scalar and velocity coordinates so that Euclidean inner products of
    /// coordinates equal the volume-weighted inner products of fields.
    pub fn coord_weight(&self) -> f64 {
        self.cell_volume().sqrt()
    }

    pub fn n_cells(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    /// Row-major cell index, x fastest.
    pub fn cell_index(&self, i: usize, j: usize, k: usize) -> usize {
        debug_assert!(i < self.nx && j < self.ny && k < self.nz);
        i + self.nx * (j + self.ny * k)
    }

    /// Cell-center coordinate along an axis.
    pub fn center(&self, axis: Axis, index: usize) -> f64 {
        (index as f64 + 0.5) * self.spacing(axis)
    }

    /// Face-plane coordinate along an axis (0 and `cells` are boundary).
    pub fn face_position(&self, axis: Axis, index: usize) -> f64 {
        index as f64 * self.spacing(axis)
    }

    /// Total face count (boundary included) for one velocity component.
    pub fn n_faces(&self, axis: Axis) -> usize {
        match axis {
            Axis::X => (self.nx + 1) * self.ny * self.nz,
            Axis::Y => self.nx * (self.ny + 1) * self.nz,
            Axis::Z => self.nx * self.ny * (self.nz + 1),
        }
    }

    /// Storage index into a full (boundary-inclusive) face array.
    pub fn face_index(&self, axis: Axis, i: usize, j: usize, k: usize) -> usize {
        match axis {
            Axis::X => {
                debug_assert!(i <= self.nx && j < self.ny && k < self.nz);
                i + (self.nx + 1) * (j + self.ny * k)
            }
            Axis::Y => {
                debug_assert!(i < self.nx && j <= self.ny && k < self.nz);
                i + self.nx * (j + (self.ny + 1) * k)
            }
            Axis::Z => {
                debug_assert!(i < self.nx && j < self.ny && k <= self.nz);
                i + self.nx * (j + self.ny * k)
            }
        }
    }

    /// Interior face count for one velocity component; zero on a degenerate
    /// axis.
    pub fn n_interior_faces(&self, axis: Axis) -> usize {
        match axis {
            Axis::X => (self.nx - 1) * self.ny * self.nz,
            Axis::Y => self.nx * (self.ny - 1) * self.nz,
            Axis::Z => self.nx * self.ny * (self.nz - 1),
        }
    }

    /// Dimension of the velocity coordinate space: interior faces of all
    /// three components, x block first, then y, then z.
    pub fn n_interior_faces_total(&self) -> usize {
        Axis::ALL
            .iter()
            .map(|&a| self.n_interior_faces(a))
            .sum()
    }

    /// Offset of an axis block inside the velocity coordinate vector.
    pub fn interior_block_offset(&self, axis: Axis) -> usize {
        match axis {
            Axis::X => 0,
            Axis::Y => self.n_interior_faces(Axis::X),
            Axis::Z => self.n_interior_faces(Axis::X) + self.n_interior_faces(Axis::Y),
        }
    }

    /// Coordinate index of an interior face; the face index along the
    /// staggered axis must be in `1..cells(axis)`.
    pub fn interior_face_coord(&self, axis: Axis, i: usize, j: usize, k: usize) -> usize {
        let offset = self.interior_block_offset(axis);
        offset
            + match axis {
                Axis::X => {
                    debug_assert!((1..self.nx).contains(&i));
                    (i - 1) + (self.nx - 1) * (j + self.ny * k)
                }
                Axis::Y => {
                    debug_assert!((1..self.ny).contains(&j));
                    i + self.nx * ((j - 1) + (self.ny - 1) * k)
                }
                Axis::Z => {
                    debug_assert!((1..self.nz).contains(&k));
                    i + self.nx * (j + self.ny * (k - 1))
                }
            }
    }

    pub(crate) fn shape_string(&self) -> String {
        format!(
            "{}x{}x{} over {}x{}x{}",
            self.nx, self.ny, self.nz, self.lx, self.ly, self.lz
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_grids() {
        assert!(Grid::new(0, 1, 1, 1.0, 1.0, 1.0).is_err());
        assert!(Grid::new(1, 1, 1, 1.0, 1.0, 1.0).is_err());
        assert!(Grid::new(2, 1, 1, 0.0, 1.0, 1.0).is_err());
        assert!(Grid::new(2, 1, 1, f64::NAN, 1.0, 1.0).is_err());
        assert!(Grid::new(2, 1, 1, 1.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn spacing_and_volume() {
        let g = Grid::new(2, 1, 1, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(g.hx(), 0.5);
        assert_eq!(g.cell_volume(), 0.5);
    }

    #[test]
    fn face_counts_on_degenerate_axes() {
        let g = Grid::new(4, 1, 1, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(g.n_interior_faces(Axis::X), 3);
        assert_eq!(g.n_interior_faces(Axis::Y), 0);
        assert_eq!(g.n_interior_faces(Axis::Z), 0);
        assert_eq!(g.n_interior_faces_total(), 3);
        assert_eq!(g.n_faces(Axis::X), 5);
    }

    #[test]
    fn interior_coordinates_are_a_bijection() {
        let g = Grid::new(3, 4, 2, 1.0, 2.0, 3.0).unwrap();
        let mut seen = vec![false; g.n_interior_faces_total()];
        for k in 0..g.nz {
            for j in 0..g.ny {
                for i in 1..g.nx {
                    seen[g.interior_face_coord(Axis::X, i, j, k)] = true;
                }
            }
        }
        for k in 0..g.nz {
            for j in 1..g.ny {
                for i in 0..g.nx {
                    seen[g.interior_face_coord(Axis::Y, i, j, k)] = true;
                }
            }
        }
        for k in 1..g.nz {
            for j in 0..g.ny {
                for i in 0..g.nx {
                    seen[g.interior_face_coord(Axis::Z, i, j, k)] = true;
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }
}
