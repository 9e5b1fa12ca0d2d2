use nalgebra::{DMatrix, DVector};
use operator_core::{
    largest_principal_angle, CosetVector, Operator, SubspaceBasis, DEFAULT_TOL,
};

use crate::{IsoContext, Result};

/// Numerical record of the Fredholm-alternative identities for one operator:
/// matching ranks of `A` and `A^T`, the principal angles certifying
/// `Im(A) = perpN(A^T)` and `Im(A^T) = Nperp(A)`, and the residual of the
/// factorization of the isomorphism through the transpose and the duality
/// map.
#[derive(Debug, Clone, Copy)]
pub struct FredholmReport {
    pub rank_a: usize,
    pub rank_at: usize,
    /// Largest principal angle between `Im(A)` and the orthogonal complement
    /// of `N(A^T)`.
    pub angle_image_vs_left_nullspace_perp: f64,
    /// Largest principal angle between `Im(A^T)` and the orthogonal
    /// complement of `N(A)`.
    pub angle_row_space_vs_nullspace_perp: f64,
    /// Worst deviation between the isomorphism applied to an image basis
    /// vector and `A^T (J b)` with `J` the identity in coordinates.
    pub j_factorization_residual: f64,
}

impl IsoContext {
    /// Check the Fredholm identities with two independent factorizations:
    /// everything on the `A^T` side is derived from a fresh SVD of the
    /// transpose, never from the context's own factors.
    pub fn fredholm_report(&self) -> Result<FredholmReport> {
        let tol = self.tol();
        let at_svd = self.transpose().full_svd();
        let rank_at = at_svd.rank(tol);
        let n = self.operator().cols();
        let m = self.operator().rows();

        // N(A^T): trailing right singular vectors of A^T; its complement is
        // the transpose-side realization of Im(A).
        let left_nullspace =
            SubspaceBasis::from_columns(at_svd.v.columns(rank_at, m - rank_at).into_owned(), tol)?;
        let angle_image = largest_principal_angle(
            self.image_basis(),
            &left_nullspace.orthonormal_complement(),
        )?;

        // Im(A^T): leading left singular vectors of A^T, against the
        // complement of the context's nullspace.
        let row_space =
            SubspaceBasis::from_columns(at_svd.u.columns(0, rank_at).into_owned(), tol)?;
        let angle_row_space = largest_principal_angle(
            &row_space,
            &self.nullspace_basis().orthonormal_complement(),
        )?;

        // The isomorphism factors through A^T J on the image; J is the
        // identity matrix under the standard-basis dual identification, and
        // the residual compares the operation against the literal matrix
        // product.
        let j = Operator::identity(m);
        let at_j = self.transpose().matrix() * j.matrix();
        let mut j_residual = 0.0f64;
        for i in 0..self.image_basis().dim() {
            let b = self.image_basis().column(i);
            let via_iso = self.apply_iso_tilde(&b)?;
            let via_factorization = &at_j * &b;
            j_residual = j_residual.max((via_iso.coords() - via_factorization).abs().max());
        }
        let _ = n;

        Ok(FredholmReport {
            rank_a: self.rank(),
            rank_at,
            angle_image_vs_left_nullspace_perp: angle_image,
            angle_row_space_vs_nullspace_perp: angle_row_space,
            j_factorization_residual: j_residual,
        })
    }
}

/// Residuals of the orthogonal-projector special case: with `A = I - P_N`,
/// the composite isomorphism on `X/N` must coincide with `x + N -> Ax`.
#[derive(Debug, Clone, Copy)]
pub struct ProjectorCaseReport {
    pub symmetry_residual: f64,
    pub idempotency_residual: f64,
    /// Worst deviation of the composite-map coordinates from `Ax` over the
    /// supplied sample points.
    pub max_composite_deviation: f64,
}

/// Construct the ortho-projector `A = I - P_N` onto the complement of the
/// span of `nullspace`, verify it is symmetric and idempotent, and check on
/// each sample `x` that the composite map `x + N -> (Ax | A.)` has exactly
/// the coordinates `Ax` (which uses `A^T A = A`).
pub fn projector_special_case(
    nullspace: &SubspaceBasis,
    samples: &[DVector<f64>],
) -> Result<ProjectorCaseReport> {
    let d = nullspace.ambient_dim();
    let a_mat = DMatrix::identity(d, d) - nullspace.projector().matrix();
    let a = Operator::from_matrix(a_mat.clone())?;

    let symmetry_residual = (&a_mat - a_mat.transpose()).abs().max();
    let idempotency_residual = (&a_mat * &a_mat - &a_mat).abs().max();

    let ctx = IsoContext::with_tol(a, DEFAULT_TOL)?;
    let mut max_dev = 0.0f64;
    for x in samples {
        let coset = CosetVector::new(x.clone(), ctx.nullspace_basis())?;
        let h = ctx.apply_coset_map(&coset)?;
        let f = ctx.apply_iso_tilde(&h)?;
        let direct = &a_mat * x;
        max_dev = max_dev.max((f.coords() - direct).norm());
    }

    Ok(ProjectorCaseReport {
        symmetry_residual,
        idempotency_residual,
        max_composite_deviation: max_dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fredholm_on_identity() {
        let ctx = IsoContext::new(Operator::identity(3));
        let report = ctx.fredholm_report().unwrap();
        assert_eq!(report.rank_a, 3);
        assert_eq!(report.rank_at, 3);
        assert!(report.angle_image_vs_left_nullspace_perp <= 1e-12);
        assert!(report.angle_row_space_vs_nullspace_perp <= 1e-12);
        assert_eq!(report.j_factorization_residual, 0.0);
    }

    #[test]
    fn fredholm_on_zero() {
        let ctx = IsoContext::new(Operator::zeros(2, 4));
        let report = ctx.fredholm_report().unwrap();
        assert_eq!(report.rank_a, 0);
        assert_eq!(report.rank_at, 0);
        assert_eq!(report.angle_image_vs_left_nullspace_perp, 0.0);
        assert_eq!(report.angle_row_space_vs_nullspace_perp, 0.0);
        assert_eq!(report.j_factorization_residual, 0.0);
    }

    #[test]
    fn fredholm_on_rank_one() {
        let ctx = IsoContext::new(Operator::new(2, 2, &[1.0, 1.0, 2.0, 2.0]).unwrap());
        let report = ctx.fredholm_report().unwrap();
        assert_eq!(report.rank_a, report.rank_at);
        assert!(report.angle_image_vs_left_nullspace_perp <= 1e-8);
        assert!(report.angle_row_space_vs_nullspace_perp <= 1e-8);
        assert!(report.j_factorization_residual <= 1e-12);
    }

    #[test]
    fn projector_case_axis_nullspace() {
        // N = span{e2} in dim 2: A zeroes the second coordinate.
        let n = SubspaceBasis::from_columns(
            DMatrix::from_column_slice(2, 1, &[0.0, 1.0]),
            DEFAULT_TOL,
        )
        .unwrap();
        let x = DVector::from_vec(vec![3.0, 4.0]);
        let report = projector_special_case(&n, &[x]).unwrap();
        assert_eq!(report.symmetry_residual, 0.0);
        assert!(report.idempotency_residual <= 1e-15);
        assert!(report.max_composite_deviation <= 1e-12);
    }

    #[test]
    fn projector_case_empty_nullspace_is_identity() {
        let n = SubspaceBasis::empty(3);
        let xs = vec![DVector::from_vec(vec![1.0, -2.0, 0.5])];
        let report = projector_special_case(&n, &xs).unwrap();
        assert!(report.max_composite_deviation <= 1e-12);
    }

    #[test]
    fn projector_case_diagonal_nullspace() {
        // N = span{(1,1)/sqrt(2)}: (I - P_N)(1,0) = (0.5, -0.5) by hand.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let n = SubspaceBasis::from_columns(
            DMatrix::from_column_slice(2, 1, &[s, s]),
            DEFAULT_TOL,
        )
        .unwrap();
        let ctx_a = DMatrix::identity(2, 2) - n.projector().matrix();
        let ax = &ctx_a * DVector::from_vec(vec![1.0, 0.0]);
        assert_relative_eq!(ax[0], 0.5, max_relative = 1e-14);
        assert_relative_eq!(ax[1], -0.5, max_relative = 1e-14);

        let report =
            projector_special_case(&n, &[DVector::from_vec(vec![1.0, 0.0])]).unwrap();
        assert!(report.max_composite_deviation <= 1e-10);
    }
}
