use std::sync::OnceLock;

use nalgebra::DVector;
use operator_core::{CosetVector, FullSvd, Functional, Operator, SubspaceBasis, DEFAULT_TOL};

use crate::qr_lstsq::PivotedQr;
use crate::{Error, Result};

/// Outcome of a conullspace membership test: the size of the functional's
/// component along the nullspace, and whether it clears the tolerance.
#[derive(Debug, Clone, Copy)]
pub struct ConullspaceCheck {
    pub contained: bool,
    pub residual: f64,
}

/// An operator together with every subspace the isomorphism constructions
/// consume: the image, row space, nullspace and left nullspace, their
/// projectors, and cached factorizations for repeated inversions.
///
/// The context is immutable after construction and safe to share across
/// threads; the two lazily-built solver factorizations sit behind
/// [`OnceLock`]s and do not change observable behavior.
pub struct IsoContext {
    a: Operator,
    at: Operator,
    tol: f64,
    svd: FullSvd,
    rank: usize,
    image: SubspaceBasis,
    row_space: SubspaceBasis,
    nullspace: SubspaceBasis,
    left_nullspace: SubspaceBasis,
    projector_image: Operator,
    projector_nullspace: Operator,
    // independent factorization of A^T for the oracle route of the inverse
    at_svd: OnceLock<FullSvd>,
    // pivoted QR of A^T for the constructive route of the inverse
    at_qr: OnceLock<PivotedQr>,
}

impl IsoContext {
    pub fn new(a: Operator) -> Self {
        Self::with_tol(a, DEFAULT_TOL).expect("default tolerance is valid")
    }

    pub fn with_tol(a: Operator, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidTolerance(tol));
        }
        let at = a.transpose();
        let svd = a.full_svd();
        let rank = svd.rank(tol);
        let (m, n) = (a.rows(), a.cols());

        let image = SubspaceBasis::from_columns(svd.u.columns(0, rank).into_owned(), tol)?;
        let left_nullspace =
            SubspaceBasis::from_columns(svd.u.columns(rank, m - rank).into_owned(), tol)?;
        let row_space = SubspaceBasis::from_columns(svd.v.columns(0, rank).into_owned(), tol)?;
        let nullspace =
            SubspaceBasis::from_columns(svd.v.columns(rank, n - rank).into_owned(), tol)?;

        let projector_image = image.projector();
        let projector_nullspace = nullspace.projector();

        // bases must be consistent with the operator they came from
        debug_assert!({
            let reproj = image.columns() * (image.columns().transpose() * a.matrix());
            (a.matrix() - reproj).abs().max() <= tol.max(1e-12) * svd.sigma_max().max(1.0)
        });

        Ok(Self {
            a,
            at,
            tol,
            svd,
            rank,
            image,
            row_space,
            nullspace,
            left_nullspace,
            projector_image,
            projector_nullspace,
            at_svd: OnceLock::new(),
            at_qr: OnceLock::new(),
        })
    }

    pub fn operator(&self) -> &Operator {
        &self.a
    }

    pub fn transpose(&self) -> &Operator {
        &self.at
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn sigma_max(&self) -> f64 {
        self.svd.sigma_max()
    }

    /// Smallest nonzero singular value, if the operator is nonzero.
    pub fn sigma_min_positive(&self) -> Option<f64> {
        self.svd.sigma_min_positive(self.tol)
    }

    /// Orthonormal basis of `Im(A)`.
    pub fn image_basis(&self) -> &SubspaceBasis {
        &self.image
    }

    /// Orthonormal basis of `Im(A^T)`, the realization of the conullspace.
    pub fn row_space_basis(&self) -> &SubspaceBasis {
        &self.row_space
    }

    /// Orthonormal basis of `N(A)`.
    pub fn nullspace_basis(&self) -> &SubspaceBasis {
        &self.nullspace
    }

    /// Orthonormal basis of `N(A^T) = Im(A)^perp`.
    pub fn left_nullspace_basis(&self) -> &SubspaceBasis {
        &self.left_nullspace
    }

    /// Assembled orthogonal projector onto `Im(A)`.
    pub fn projector_onto_image(&self) -> &Operator {
        &self.projector_image
    }

    /// Assembled orthogonal projector onto `N(A)`.
    pub fn projector_onto_nullspace(&self) -> &Operator {
        &self.projector_nullspace
    }

    /// Project a codomain vector onto `Im(A)` (factored, no matrix apply).
    pub fn project_onto_image(&self, h: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(self.image.project(h)?)
    }

    /// The image-to-conullspace map: `h -> (h | A.)`, with coordinates
    /// `A^T h`.
    ///
    /// `h` must lie in `Im(A)` within `tol * ||h||`; anything farther out is
    /// outside the isomorphism's domain and is rejected.
    pub fn apply_iso_tilde(&self, h: &DVector<f64>) -> Result<Functional> {
        if h.len() != self.a.rows() {
            return Err(Error::Core(operator_core::Error::DimensionMismatch {
                expected: self.a.rows(),
                got: h.len(),
            }));
        }
        let distance = self.image.distance_to_span(h)?;
        let allowed = self.tol * h.norm();
        if distance > allowed {
            return Err(Error::NotInImage { distance, allowed });
        }
        Ok(Functional::new(self.at.apply(h)?)?)
    }

    /// Membership of `f` in the conullspace `Nperp(A)`: true when the
    /// component of `f` along `N(A)` is at most `tol * max(||f||, 1)`.
    /// By the Fredholm alternative this is the same as `f` lying in
    /// `Im(A^T)`.
    pub fn conullspace_contains(&self, f: &Functional) -> Result<ConullspaceCheck> {
        if f.dim() != self.a.cols() {
            return Err(Error::Core(operator_core::Error::DimensionMismatch {
                expected: self.a.cols(),
                got: f.dim(),
            }));
        }
        let residual = self.nullspace.project(f.coords())?.norm();
        Ok(ConullspaceCheck {
            contained: residual <= self.tol * f.norm().max(1.0),
            residual,
        })
    }

    /// Inverse of the image-to-conullspace map: the unique `h` in `Im(A)`
    /// with `A^T h = f`.
    ///
    /// Two routes are computed on every call. The constructive route solves
    /// `A^T h0 = f` by pivoted-QR least squares (the representing vector of
    /// a functional with `A^T phi = f`) and then projects `h0` onto `Im(A)`.
    /// The oracle route is the SVD minimum-norm solve of the same system,
    /// which lands in `Im(A)` by itself. Their agreement is enforced here;
    /// disagreement means the construction broke down and is reported as an
    /// error rather than silently returning either answer.
    pub fn invert_iso_tilde(&self, f: &Functional) -> Result<DVector<f64>> {
        let check = self.conullspace_contains(f)?;
        if !check.contained {
            return Err(Error::NotInConullspace {
                residual: check.residual,
                allowed: self.tol * f.norm().max(1.0),
            });
        }
        if self.rank == 0 {
            return Ok(DVector::zeros(self.a.rows()));
        }

        let qr = self
            .at_qr
            .get_or_init(|| PivotedQr::new(self.at.matrix()));
        let h0 = qr.basic_solve(f.coords(), self.tol);
        let h_constructed = self.image.project(&h0)?;

        let h_oracle = self.min_norm_transpose_solve(f.coords());

        let kappa = self.sigma_max() / self.sigma_min_positive().unwrap_or(1.0);
        let allowed = (1e-8f64).max(1000.0 * f64::EPSILON * kappa) * h_oracle.norm().max(1e-300);
        let deviation = (&h_constructed - &h_oracle).norm();
        if deviation > allowed {
            return Err(Error::ConstructionMismatch { deviation, allowed });
        }
        Ok(h_constructed)
    }

    /// Minimum-norm least-squares solution of `A^T h = f` through an
    /// independently computed SVD of `A^T`.
    fn min_norm_transpose_solve(&self, f: &DVector<f64>) -> DVector<f64> {
        let svd = self.at_svd.get_or_init(|| self.at.full_svd());
        let smax = svd.sigma_max();
        let mut h = DVector::zeros(self.a.rows());
        if smax == 0.0 {
            return h;
        }
        for (i, &sigma) in svd.s.iter().enumerate() {
            if sigma > self.tol * smax {
                let coeff = svd.u.column(i).dot(f) / sigma;
                h.axpy(coeff, &svd.v.column(i).into_owned(), 1.0);
            }
        }
        h
    }

    /// Norm of the image-to-conullspace map, computed directly as the
    /// largest singular value of `A^T` restricted to `Im(A)`. Equality with
    /// `operator_norm(A)` is a theorem to be checked, not an assumption.
    pub fn iso_tilde_norm(&self) -> f64 {
        if self.rank == 0 {
            return 0.0;
        }
        let restricted = self.at.matrix() * self.image.columns();
        Operator::from_matrix(restricted)
            .expect("restriction of a finite operator is finite")
            .operator_norm()
    }

    /// Quotient norm of the coset `x + N(A)`: the exact infimum of
    /// `||x + n||` over `n` in `N(A)`, which in Euclidean geometry is the
    /// norm of the component of `x` orthogonal to the nullspace.
    pub fn coset_norm(&self, x: &DVector<f64>) -> Result<f64> {
        if x.len() != self.a.cols() {
            return Err(Error::Core(operator_core::Error::DimensionMismatch {
                expected: self.a.cols(),
                got: x.len(),
            }));
        }
        Ok(self.nullspace.project_out(x)?.norm())
    }

    /// The coset map `x + N(A) -> Ax`. The result is independent of the
    /// representative up to roundoff, since `A` annihilates the nullspace.
    pub fn apply_coset_map(&self, coset: &CosetVector<'_>) -> Result<DVector<f64>> {
        if coset.nullspace().ambient_dim() != self.a.cols() {
            return Err(Error::CosetMismatch {
                detail: format!(
                    "coset ambient dimension {} differs from operator domain {}",
                    coset.nullspace().ambient_dim(),
                    self.a.cols()
                ),
            });
        }
        if coset.nullspace().dim() != self.nullspace.dim() {
            return Err(Error::CosetMismatch {
                detail: format!(
                    "coset nullspace dimension {} differs from the context's {}",
                    coset.nullspace().dim(),
                    self.nullspace.dim()
                ),
            });
        }
        Ok(self.a.apply(coset.representative())?)
    }

    /// Norm of the coset map under the quotient norm on the domain:
    /// restricting to `N(A)^perp` realizes the infimum exactly, so this is
    /// the largest singular value of `A` on the row space.
    pub fn coset_map_norm(&self) -> f64 {
        if self.rank == 0 {
            return 0.0;
        }
        let restricted = self.a.matrix() * self.row_space.columns();
        Operator::from_matrix(restricted)
            .expect("restriction of a finite operator is finite")
            .operator_norm()
    }

    /// Norm of the composite map `x + N(A) -> (Ax | A.)`, i.e. of
    /// `x -> A^T A x` with the quotient norm on the domain.
    pub fn composite_norm(&self) -> f64 {
        if self.rank == 0 {
            return 0.0;
        }
        let ata = self.at.matrix() * self.a.matrix();
        let restricted = ata * self.row_space.columns();
        Operator::from_matrix(restricted)
            .expect("restriction of a finite operator is finite")
            .operator_norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn op(rows: usize, cols: usize, entries: &[f64]) -> Operator {
        Operator::new(rows, cols, entries).unwrap()
    }

    #[test]
    fn apply_on_diagonal_example() {
        let ctx = IsoContext::new(op(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        let f = ctx
            .apply_iso_tilde(&DVector::from_vec(vec![3.0, 0.0]))
            .unwrap();
        assert_eq!(f.coords().as_slice(), &[3.0, 0.0]);
    }

    #[test]
    fn apply_is_riesz_map_for_identity() {
        let ctx = IsoContext::new(Operator::identity(2));
        let h = DVector::from_vec(vec![0.3, -1.7]);
        let f = ctx.apply_iso_tilde(&h).unwrap();
        assert_eq!(f.coords(), &h);
    }

    #[test]
    fn apply_on_shifted_example() {
        // (h | Ax) with h = (5,0) expands to 5 * 2 x2, so coords are (0, 10).
        let ctx = IsoContext::new(op(2, 2, &[0.0, 2.0, 0.0, 0.0]));
        let f = ctx
            .apply_iso_tilde(&DVector::from_vec(vec![5.0, 0.0]))
            .unwrap();
        assert_eq!(f.coords().as_slice(), &[0.0, 10.0]);
    }

    #[test]
    fn apply_rejects_vectors_outside_image() {
        let ctx = IsoContext::new(op(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        let err = ctx
            .apply_iso_tilde(&DVector::from_vec(vec![0.0, 4.0]))
            .unwrap_err();
        assert!(matches!(err, Error::NotInImage { .. }));
    }

    #[test]
    fn invert_roundtrips_diagonal_example() {
        let ctx = IsoContext::new(op(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        let h = ctx
            .invert_iso_tilde(&Functional::from_slice(&[3.0, 0.0]).unwrap())
            .unwrap();
        assert_relative_eq!(h[0], 3.0, max_relative = 1e-12);
        assert!(h[1].abs() <= 1e-12);
    }

    #[test]
    fn invert_is_riesz_map_for_identity() {
        let ctx = IsoContext::new(Operator::identity(3));
        let f = Functional::from_slice(&[0.25, -2.0, 7.5]).unwrap();
        let h = ctx.invert_iso_tilde(&f).unwrap();
        for i in 0..3 {
            assert_relative_eq!(h[i], f.coords()[i], max_relative = 1e-14);
        }
    }

    #[test]
    fn invert_undoes_the_hand_expansion() {
        let ctx = IsoContext::new(op(2, 2, &[0.0, 2.0, 0.0, 0.0]));
        let h = ctx
            .invert_iso_tilde(&Functional::from_slice(&[0.0, 10.0]).unwrap())
            .unwrap();
        assert_relative_eq!(h[0], 5.0, max_relative = 1e-12);
        assert!(h[1].abs() <= 1e-12);
    }

    #[test]
    fn invert_rejects_incompatible_functionals() {
        // f supported on the nullspace: no pressure-like preimage exists
        let ctx = IsoContext::new(op(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        let err = ctx
            .invert_iso_tilde(&Functional::from_slice(&[0.0, 1.0]).unwrap())
            .unwrap_err();
        assert!(matches!(err, Error::NotInConullspace { .. }));
    }

    #[test]
    fn conullspace_check_examples() {
        let ctx = IsoContext::new(op(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        let ok = ctx
            .conullspace_contains(&Functional::from_slice(&[7.0, 0.0]).unwrap())
            .unwrap();
        assert!(ok.contained);
        assert!(ok.residual <= 1e-14);

        let bad = ctx
            .conullspace_contains(&Functional::from_slice(&[0.0, 1.0]).unwrap())
            .unwrap();
        assert!(!bad.contained);
        assert_relative_eq!(bad.residual, 1.0, max_relative = 1e-14);

        // (1,1) is orthogonal to the nullspace direction (1,-1)
        let ctx2 = IsoContext::new(op(2, 2, &[1.0, 1.0, 2.0, 2.0]));
        let check = ctx2
            .conullspace_contains(&Functional::from_slice(&[1.0, 1.0]).unwrap())
            .unwrap();
        assert!(check.contained, "residual {}", check.residual);
    }

    #[test]
    fn iso_norm_examples() {
        let ctx = IsoContext::new(op(2, 2, &[2.0, 0.0, 0.0, 0.0]));
        assert_relative_eq!(ctx.iso_tilde_norm(), 2.0, max_relative = 1e-12);
        let zero = IsoContext::new(Operator::zeros(3, 4));
        assert_eq!(zero.iso_tilde_norm(), 0.0);
        assert_eq!(zero.coset_map_norm(), 0.0);
        assert_eq!(zero.composite_norm(), 0.0);
    }

    #[test]
    fn coset_norm_examples() {
        let ctx = IsoContext::new(op(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        assert_relative_eq!(
            ctx.coset_norm(&DVector::from_vec(vec![3.0, 4.0])).unwrap(),
            3.0,
            max_relative = 1e-14
        );
        // a nullspace vector has quotient norm zero
        assert!(ctx.coset_norm(&DVector::from_vec(vec![0.0, 9.0])).unwrap() <= 1e-14);

        let ctx2 = IsoContext::new(op(2, 2, &[1.0, 1.0, 2.0, 2.0]));
        let q = ctx2.coset_norm(&DVector::from_vec(vec![1.0, 0.0])).unwrap();
        assert_relative_eq!(q, std::f64::consts::FRAC_1_SQRT_2, max_relative = 1e-12);
    }

    #[test]
    fn coset_map_examples() {
        let ctx = IsoContext::new(op(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        let n = ctx.nullspace_basis();
        let c = CosetVector::new(DVector::from_vec(vec![3.0, 99.0]), n).unwrap();
        let out = ctx.apply_coset_map(&c).unwrap();
        assert_eq!(out.as_slice(), &[3.0, 0.0]);

        let zero = CosetVector::new(DVector::zeros(2), n).unwrap();
        assert_eq!(ctx.apply_coset_map(&zero).unwrap().norm(), 0.0);

        let ctx2 = IsoContext::new(op(2, 2, &[0.0, 2.0, 0.0, 0.0]));
        let c2 = CosetVector::new(DVector::from_vec(vec![7.0, 3.0]), ctx2.nullspace_basis())
            .unwrap();
        assert_eq!(ctx2.apply_coset_map(&c2).unwrap().as_slice(), &[6.0, 0.0]);
    }

    #[test]
    fn composite_norm_diagonal_example() {
        let ctx = IsoContext::new(op(2, 2, &[2.0, 0.0, 0.0, 0.0]));
        assert_relative_eq!(ctx.composite_norm(), 4.0, max_relative = 1e-12);
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(IsoContext::with_tol(Operator::identity(2), 0.0).is_err());
        assert!(IsoContext::with_tol(Operator::identity(2), f64::NAN).is_err());
    }

    #[test]
    fn subspace_dimensions_are_consistent() {
        let ctx = IsoContext::new(op(2, 3, &[1.0, 1.0, 0.0, 2.0, 2.0, 0.0]));
        assert_eq!(ctx.rank(), 1);
        assert_eq!(ctx.image_basis().dim(), 1);
        assert_eq!(ctx.nullspace_basis().dim(), 2);
        assert_eq!(ctx.row_space_basis().dim(), 1);
        assert_eq!(ctx.left_nullspace_basis().dim(), 1);
    }
}
