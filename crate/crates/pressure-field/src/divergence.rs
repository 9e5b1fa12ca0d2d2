use nalgebra::{DMatrix, DVector};
use operator_core::{largest_principal_angle, Operator, SubspaceBasis, DEFAULT_TOL};
use crate::sampling::DetRng;
use riesz_iso::IsoContext;

use crate::grid::Axis;
use crate::{Error, Grid, Result, ScalarField, VectorField, DENSE_CELL_LIMIT};

/// The discrete divergence on a grid: stencil matvecs always, plus dense
/// matrix and isomorphism context when the grid is small enough for the
/// SVD path.
pub struct DivergenceSystem {
    grid: Grid,
    tol: f64,
    dense: Option<IsoContext>,
}

impl DivergenceSystem {
    /// Build with automatic solver selection: dense up to
    /// [`DENSE_CELL_LIMIT`](crate::DENSE_CELL_LIMIT) cells, matrix-free
    /// beyond.
    pub fn build(grid: Grid) -> Result<Self> {
        if grid.n_cells() <= DENSE_CELL_LIMIT {
            Self::build_dense(grid)
        } else {
            Self::build_matrix_free(grid)
        }
    }

    /// Force the dense path regardless of size.
    pub fn build_dense(grid: Grid) -> Result<Self> {
        let d = assemble_divergence(&grid)?;
        let iso = IsoContext::with_tol(d, DEFAULT_TOL)?;
        Ok(Self {
            grid,
            tol: DEFAULT_TOL,
            dense: Some(iso),
        })
    }

    /// Force the matrix-free path regardless of size.
    pub fn build_matrix_free(grid: Grid) -> Result<Self> {
        // grid validity was checked at Grid construction; nothing to assemble
        Ok(Self {
            grid,
            tol: DEFAULT_TOL,
            dense: None,
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn is_dense(&self) -> bool {
        self.dense.is_some()
    }

    /// The assembled divergence matrix, when the dense path is active.
    pub fn divergence_operator(&self) -> Option<&Operator> {
        self.dense.as_ref().map(|iso| iso.operator())
    }

    /// The isomorphism context over the divergence matrix (dense path only).
    pub fn iso(&self) -> Option<&IsoContext> {
        self.dense.as_ref()
    }

    pub(crate) fn require_dense(&self, what: &'static str) -> Result<&IsoContext> {
        self.dense.as_ref().ok_or(Error::NeedsDense {
            what,
            cells: self.grid.n_cells(),
            limit: DENSE_CELL_LIMIT,
        })
    }

    pub(crate) fn check_grid(&self, other: Grid) -> Result<()> {
        if other != self.grid {
            return Err(Error::GridMismatch {
                expected: self.grid.shape_string(),
                got: other.shape_string(),
            });
        }
        Ok(())
    }

    /// Divergence of velocity coordinates, as scalar coordinates. Stencil
    /// form of the matrix-vector product; identical to the dense matrix on
    /// every grid.
    pub fn apply_divergence_coords(&self, vc: &DVector<f64>) -> Result<DVector<f64>> {
        let g = &self.grid;
        if vc.len() != g.n_interior_faces_total() {
            return Err(Error::FieldLength {
                what: "velocity coordinates",
                expected: g.n_interior_faces_total(),
                got: vc.len(),
            });
        }
        let mut out = DVector::zeros(g.n_cells());
        for k in 0..g.nz {
            for j in 0..g.ny {
                for i in 0..g.nx {
                    let mut acc = 0.0;
                    for axis in Axis::ALL {
                        let h = g.spacing(axis);
                        let (lo, hi) = face_pair(g, axis, i, j, k);
                        let inflow = lo.map_or(0.0, |c| vc[c]);
                        let outflow = hi.map_or(0.0, |c| vc[c]);
                        acc += (outflow - inflow) / h;
                    }
                    out[g.cell_index(i, j, k)] = acc;
                }
            }
        }
        Ok(out)
    }

    /// Transpose of the divergence on scalar coordinates: the negative
    /// discrete gradient, `(D^T p)_face = (p_left - p_right) / h`.
    pub fn apply_divergence_transpose_coords(&self, pc: &DVector<f64>) -> Result<DVector<f64>> {
        let g = &self.grid;
        if pc.len() != g.n_cells() {
            return Err(Error::FieldLength {
                what: "scalar coordinates",
                expected: g.n_cells(),
                got: pc.len(),
            });
        }
        let mut out = DVector::zeros(g.n_interior_faces_total());
        for k in 0..g.nz {
            for j in 0..g.ny {
                for i in 1..g.nx {
                    out[g.interior_face_coord(Axis::X, i, j, k)] = (pc[g.cell_index(i - 1, j, k)]
                        - pc[g.cell_index(i, j, k)])
                        / g.hx();
                }
            }
        }
        for k in 0..g.nz {
            for j in 1..g.ny {
                for i in 0..g.nx {
                    out[g.interior_face_coord(Axis::Y, i, j, k)] = (pc[g.cell_index(i, j - 1, k)]
                        - pc[g.cell_index(i, j, k)])
                        / g.hy();
                }
            }
        }
        for k in 1..g.nz {
            for j in 0..g.ny {
                for i in 0..g.nx {
                    out[g.interior_face_coord(Axis::Z, i, j, k)] = (pc[g.cell_index(i, j, k - 1)]
                        - pc[g.cell_index(i, j, k)])
                        / g.hz();
                }
            }
        }
        Ok(out)
    }

    /// Field-level divergence of a border-null velocity field.
    pub fn apply_divergence(&self, v: &VectorField) -> Result<ScalarField> {
        self.check_grid(v.grid())?;
        let div_coords = self.apply_divergence_coords(&v.interior_coords())?;
        ScalarField::from_coords(self.grid, &div_coords)
    }

    /// The MAC gradient of a scalar field on interior faces,
    /// `(grad p)_face = (p_right - p_left) / h`; boundary faces are zero.
    /// This equals `-D^T` on coordinates, the discrete form of the weak
    /// identity between gradient and divergence.
    pub fn discrete_gradient(&self, p: &ScalarField) -> Result<VectorField> {
        self.check_grid(p.grid())?;
        let minus_grad = self.apply_divergence_transpose_coords(&p.coords())?;
        VectorField::from_interior_coords(self.grid, &(-minus_grad))
    }

    /// Checks that the image of the divergence is exactly the zero-mean
    /// scalars: telescoping weighted sums on random fields, the rank count,
    /// and the principal angle between the computed image and the zero-mean
    /// subspace. Dense path only.
    pub fn check_image_is_zero_mean(&self, seed: u64, trials: usize) -> Result<ZeroMeanImageReport> {
        let iso = self.require_dense("image/zero-mean verification")?;
        let g = &self.grid;
        let mut rng = DetRng::new(seed);

        let mut worst_ratio = 0.0f64;
        for _ in 0..trials.max(1) {
            let vc = DVector::from_fn(g.n_interior_faces_total(), |_, _| rng.gaussian());
            let norm = vc.norm();
            if norm == 0.0 {
                continue;
            }
            let div = self.apply_divergence_coords(&vc)?;
            let weighted_sum = g.coord_weight() * div.sum();
            worst_ratio = worst_ratio.max(weighted_sum.abs() / norm);
        }

        let m = g.n_cells();
        let ones = DMatrix::from_element(m, 1, 1.0 / (m as f64).sqrt());
        let mean_line = SubspaceBasis::from_columns(ones, self.tol)?;
        let zero_mean = mean_line.orthonormal_complement();
        let angle = largest_principal_angle(iso.image_basis(), &zero_mean)?;

        Ok(ZeroMeanImageReport {
            max_weighted_sum_ratio: worst_ratio,
            rank: iso.rank(),
            expected_rank: m - 1,
            angle_image_vs_zero_mean: angle,
        })
    }
}

/// Outcome of the image = zero-mean verification.
#[derive(Debug, Clone, Copy)]
pub struct ZeroMeanImageReport {
    /// Worst `|volume-weighted sum of Dv| / ||v||` over the random trials.
    pub max_weighted_sum_ratio: f64,
    pub rank: usize,
    pub expected_rank: usize,
    pub angle_image_vs_zero_mean: f64,
}

impl ZeroMeanImageReport {
    pub fn passes(&self, sum_tol: f64, angle_tol: f64) -> bool {
        self.max_weighted_sum_ratio <= sum_tol
            && self.rank == self.expected_rank
            && self.angle_image_vs_zero_mean <= angle_tol
    }
}

/// Coordinate indices of the two faces of a cell along one axis; `None`
/// marks a boundary face, whose value is structurally zero.
fn face_pair(
    g: &Grid,
    axis: Axis,
    i: usize,
    j: usize,
    k: usize,
) -> (Option<usize>, Option<usize>) {
    match axis {
        Axis::X => (
            (i > 0).then(|| g.interior_face_coord(Axis::X, i, j, k)),
            (i + 1 < g.nx).then(|| g.interior_face_coord(Axis::X, i + 1, j, k)),
        ),
        Axis::Y => (
            (j > 0).then(|| g.interior_face_coord(Axis::Y, i, j, k)),
            (j + 1 < g.ny).then(|| g.interior_face_coord(Axis::Y, i, j + 1, k)),
        ),
        Axis::Z => (
            (k > 0).then(|| g.interior_face_coord(Axis::Z, i, j, k)),
            (k + 1 < g.nz).then(|| g.interior_face_coord(Axis::Z, i, j, k + 1)),
        ),
    }
}

/// Dense stencil matrix: column per interior face, row per cell. The
/// symmetric coordinate weights cancel between the scalar and velocity
/// sides on a uniform grid, so the weighted-coordinate matrix is the raw
/// stencil itself.
fn assemble_divergence(grid: &Grid) -> Result<Operator> {
    let m = grid.n_cells();
    let n = grid.n_interior_faces_total();
    let mut mat = DMatrix::zeros(m, n);
    for k in 0..grid.nz {
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let row = grid.cell_index(i, j, k);
                for axis in Axis::ALL {
                    let h = grid.spacing(axis);
                    let (lo, hi) = face_pair(grid, axis, i, j, k);
                    if let Some(c) = lo {
                        mat[(row, c)] -= 1.0 / h;
                    }
                    if let Some(c) = hi {
                        mat[(row, c)] += 1.0 / h;
                    }
                }
            }
        }
    }
    Ok(Operator::from_matrix(mat)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hand_stencil_1d_two_cells() {
        // h = 0.5: one interior face drives (v/0.5, -v/0.5)
        let g = Grid::new(2, 1, 1, 1.0, 1.0, 1.0).unwrap();
        let sys = DivergenceSystem::build(g).unwrap();
        let d = sys.divergence_operator().unwrap();
        assert_eq!((d.rows(), d.cols()), (2, 1));
        assert_eq!(d.entry(0, 0), 2.0);
        assert_eq!(d.entry(1, 0), -2.0);

        let div = sys
            .apply_divergence_coords(&DVector::from_vec(vec![3.0]))
            .unwrap();
        assert_eq!(div.as_slice(), &[6.0, -6.0]);
    }

    #[test]
    fn zero_velocity_has_zero_divergence() {
        let g = Grid::new(3, 2, 2, 1.0, 1.0, 1.0).unwrap();
        let sys = DivergenceSystem::build(g).unwrap();
        let div = sys.apply_divergence(&VectorField::zeros(g)).unwrap();
        assert!(div.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn hand_rank_1d_three_cells() {
        let g = Grid::new(3, 1, 1, 1.0, 1.0, 1.0).unwrap();
        let sys = DivergenceSystem::build(g).unwrap();
        assert_eq!(sys.iso().unwrap().rank(), 2);
    }

    #[test]
    fn columns_sum_to_zero_after_weighting() {
        let g = Grid::new(4, 3, 1, 2.0, 1.5, 1.0).unwrap();
        let sys = DivergenceSystem::build(g).unwrap();
        let d = sys.divergence_operator().unwrap().matrix().clone();
        for c in 0..d.ncols() {
            let s: f64 = d.column(c).iter().sum();
            assert!(s.abs() <= 1e-13, "column {c} sums to {s}");
        }
    }

    #[test]
    fn stencil_matches_dense_matrix() {
        let g = Grid::new(3, 2, 2, 1.0, 2.0, 0.5).unwrap();
        let sys = DivergenceSystem::build(g).unwrap();
        let d = sys.divergence_operator().unwrap().matrix().clone();
        let n = g.n_interior_faces_total();
        for c in 0..n {
            let mut e = DVector::zeros(n);
            e[c] = 1.0;
            let by_stencil = sys.apply_divergence_coords(&e).unwrap();
            let by_matrix = d.column(c).into_owned();
            assert_relative_eq!(
                (by_stencil - by_matrix).norm(),
                0.0,
                epsilon = 1e-14
            );
        }
        // transpose stencil against the matrix transpose
        let m = g.n_cells();
        for r in 0..m {
            let mut e = DVector::zeros(m);
            e[r] = 1.0;
            let by_stencil = sys.apply_divergence_transpose_coords(&e).unwrap();
            let by_matrix = d.transpose().column(r).into_owned();
            assert_relative_eq!((by_stencil - by_matrix).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn adjoint_identity_weighted_inner_products() {
        // <p, Dv> = <D^T p, v> exactly in coordinates, hence for the
        // weighted field inner products too.
        let g = Grid::new(4, 3, 2, 1.0, 1.0, 1.0).unwrap();
        let sys = DivergenceSystem::build(g).unwrap();
        let mut rng = crate::sampling::DetRng::new(7);
        for _ in 0..5 {
            let p = DVector::from_fn(g.n_cells(), |_, _| rng.gaussian());
            let v = DVector::from_fn(g.n_interior_faces_total(), |_, _| rng.gaussian());
            let lhs = p.dot(&sys.apply_divergence_coords(&v).unwrap());
            let rhs = sys.apply_divergence_transpose_coords(&p).unwrap().dot(&v);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
    }

    #[test]
    fn gradient_is_negative_transpose() {
        let g = Grid::new(4, 1, 1, 1.0, 1.0, 1.0).unwrap();
        let sys = DivergenceSystem::build(g).unwrap();
        let p = ScalarField::new(g, vec![1.0, 3.0, 2.0, -6.0]).unwrap();
        let grad = sys.discrete_gradient(&p).unwrap();
        // (grad p) at face i is (p_i - p_{i-1}) / h with h = 0.25
        let expect = [(3.0 - 1.0) / 0.25, (2.0 - 3.0) / 0.25, (-6.0 - 2.0) / 0.25];
        for (i, &e) in expect.iter().enumerate() {
            assert_relative_eq!(grad.face_value(Axis::X, i + 1, 0, 0), e, max_relative = 1e-14);
        }
        assert!(grad.is_border_null());
    }

    #[test]
    fn image_report_on_small_grids() {
        for (g, _label) in [
            (Grid::new(2, 1, 1, 1.0, 1.0, 1.0).unwrap(), "1d-2"),
            (Grid::new(4, 4, 1, 1.0, 1.0, 1.0).unwrap(), "2d-4x4"),
        ] {
            let sys = DivergenceSystem::build(g).unwrap();
            let report = sys.check_image_is_zero_mean(42, 10).unwrap();
            assert_eq!(report.rank, report.expected_rank);
            assert!(report.max_weighted_sum_ratio <= 1e-12, "{}", report.max_weighted_sum_ratio);
            assert!(report.angle_image_vs_zero_mean <= 1e-8);
        }
    }

    #[test]
    fn matrix_free_refuses_dense_only_reports() {
        let g = Grid::new(4, 4, 4, 1.0, 1.0, 1.0).unwrap();
        let sys = DivergenceSystem::build_matrix_free(g).unwrap();
        assert!(!sys.is_dense());
        assert!(matches!(
            sys.check_image_is_zero_mean(1, 1),
            Err(Error::NeedsDense { .. })
        ));
    }
}
