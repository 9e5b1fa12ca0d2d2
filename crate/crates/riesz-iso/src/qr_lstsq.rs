use nalgebra::{DMatrix, DVector, Dyn};

/// Column-pivoted QR of a fixed matrix, kept around so repeated solves only
/// pay for back substitution.
pub(crate) struct PivotedQr {
    qr: nalgebra::linalg::ColPivQR<f64, Dyn, Dyn>,
    q: DMatrix<f64>,
    r: DMatrix<f64>,
    cols: usize,
}

impl PivotedQr {
    pub fn new(m: &DMatrix<f64>) -> Self {
        let qr = m.clone().col_piv_qr();
        let q = qr.q();
        let r = qr.r();
        Self {
            qr,
            q,
            r,
            cols: m.ncols(),
        }
    }

    /// A basic (not minimum-norm) least-squares solution of `M x = b`:
    /// back substitution on the leading `rank x rank` block of `R`, free
    /// variables pinned to zero, pivoting undone at the end. Rank is decided
    /// by `|r_ii| > tol * |r_00|`.
    pub fn basic_solve(&self, b: &DVector<f64>, tol: f64) -> DVector<f64> {
        let qtb = self.q.transpose() * b;
        let k = self.r.nrows();
        let r00 = if k == 0 { 0.0 } else { self.r[(0, 0)].abs() };
        let rank = if r00 == 0.0 {
            0
        } else {
            (0..k)
                .take_while(|&i| self.r[(i, i)].abs() > tol * r00)
                .count()
        };
        let mut y = DVector::zeros(self.cols);
        for i in (0..rank).rev() {
            let mut acc = qtb[i];
            for j in (i + 1)..rank {
                acc -= self.r[(i, j)] * y[j];
            }
            y[i] = acc / self.r[(i, i)];
        }
        self.qr.p().inv_permute_rows(&mut y);
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_consistent_rank_deficient_system() {
        // rank-1 matrix, rhs in its image
        let m = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0]);
        let b = DVector::from_vec(vec![5.0, 10.0, 15.0]);
        let x = PivotedQr::new(&m).basic_solve(&b, 1e-10);
        let residual = (&m * &x - &b).norm();
        assert!(residual <= 1e-12 * b.norm(), "residual {residual}");
    }

    #[test]
    fn zero_matrix_maps_to_zero() {
        let m = DMatrix::zeros(2, 3);
        let b = DVector::from_vec(vec![1.0, 2.0]);
        let x = PivotedQr::new(&m).basic_solve(&b, 1e-10);
        assert_eq!(x.norm(), 0.0);
    }
}
