use nalgebra::DVector;
use operator_core::Functional;

use crate::grid::Axis;
use crate::{DivergenceSystem, Error, Result, ScalarField, VectorField};

/// Which route produced a pressure solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    /// SVD pseudoinverse through the isomorphism context (the oracle path).
    DensePseudoinverse,
    /// Matrix-free conjugate gradient on the zero-mean normal equations.
    ConjugateGradient,
}

/// A recovered pressure together with the size of the force component that
/// no pressure can explain (the divergence-free part of the data).
#[derive(Debug, Clone)]
pub struct PressureSolution {
    pub pressure: ScalarField,
    /// Norm of the component of the force coordinates along the nullspace
    /// of the divergence. Zero for exactly-compatible data; sampled analytic
    /// fields typically leave an O(h^2) remainder.
    pub incompatibility_residual: f64,
    pub method: SolveMethod,
}

/// Outcome of the discrete Helmholtz membership test.
#[derive(Debug, Clone, Copy)]
pub struct MembershipCheck {
    /// Whether the force is a discrete gradient within the context tolerance.
    pub is_gradient: bool,
    /// Norm of the component along the discrete divergence-free fields.
    pub residual: f64,
}

/// Relative residual target for the conjugate-gradient path.
const CG_REL_TOL: f64 = 1e-10;

impl DivergenceSystem {
    /// The functional `(G | .)` on velocity coordinates. Since coordinates
    /// carry the symmetric volume weight, the coordinate vector of the
    /// functional is just the weighted interior data of `G`; pairing it
    /// against any velocity coordinate vector reproduces the volume-weighted
    /// field inner product. Boundary samples of `G` never enter: test
    /// fields vanish on the border.
    pub fn gradient_functional(&self, g: &VectorField) -> Result<Functional> {
        self.check_grid(g.grid())?;
        Ok(Functional::new(g.interior_coords())?)
    }

    /// Is `G` (discretely) a gradient? Delegates to the conullspace
    /// membership test on the dense path; the matrix-free path projects via
    /// one normal-equation solve. The residual measures the divergence-free
    /// component either way.
    pub fn check_helmholtz_membership(&self, g: &VectorField) -> Result<MembershipCheck> {
        self.check_grid(g.grid())?;
        let coords = g.interior_coords();
        let residual = if let Some(iso) = self.iso() {
            let f = self.gradient_functional(g)?;
            iso.conullspace_contains(&f)?.residual
        } else {
            let (_, grad_coords) = self.solve_normal_equations(&coords)?;
            (&coords - grad_coords).norm()
        };
        Ok(MembershipCheck {
            is_gradient: residual <= self.tol() * coords.norm().max(1.0),
            residual,
        })
    }

    /// Recover the unique zero-mean pressure `p` with `<p, Dv> = <G, v>`
    /// for every border-null `v` — the inverse of the image-to-conullspace
    /// isomorphism applied to `(G | .)`.
    ///
    /// Incompatible data (a nonzero divergence-free component) is not an
    /// error: the solve proceeds on the projected compatible part and the
    /// leftover is reported in the solution.
    pub fn recover_pressure(&self, g: &VectorField) -> Result<PressureSolution> {
        if self.is_dense() {
            self.recover_pressure_dense(g)
        } else {
            self.recover_pressure_cg(g)
        }
    }

    /// Dense route: project the force functional onto the conullspace, then
    /// invert the isomorphism (constructive QR path cross-checked against
    /// the SVD minimum-norm oracle inside).
    pub fn recover_pressure_dense(&self, g: &VectorField) -> Result<PressureSolution> {
        self.check_grid(g.grid())?;
        let iso = self.require_dense("dense pressure recovery")?;
        let coords = g.interior_coords();

        let along_nullspace = iso.nullspace_basis().project(&coords)?;
        let incompatibility = along_nullspace.norm();
        let compatible = &coords - along_nullspace;

        let p_coords = if compatible.norm() == 0.0 {
            DVector::zeros(self.grid().n_cells())
        } else {
            iso.invert_iso_tilde(&Functional::new(compatible)?)?
        };

        let mut pressure = ScalarField::from_coords(self.grid(), &p_coords)?;
        pressure.subtract_mean();
        Ok(PressureSolution {
            pressure,
            incompatibility_residual: incompatibility,
            method: SolveMethod::DensePseudoinverse,
        })
    }

    /// Matrix-free route: conjugate gradient on `D D^T p = D g` restricted
    /// to the zero-mean subspace, with the mean re-projected every
    /// iteration.
    pub fn recover_pressure_cg(&self, g: &VectorField) -> Result<PressureSolution> {
        self.check_grid(g.grid())?;
        let coords = g.interior_coords();
        let (p_coords, grad_coords) = self.solve_normal_equations(&coords)?;
        let incompatibility = (&coords - grad_coords).norm();

        let mut pressure = ScalarField::from_coords(self.grid(), &p_coords)?;
        pressure.subtract_mean();
        Ok(PressureSolution {
            pressure,
            incompatibility_residual: incompatibility,
            method: SolveMethod::ConjugateGradient,
        })
    }

    /// Orthogonal split of interior force content into a discrete gradient
    /// and a discrete divergence-free remainder. Both parts come back with
    /// zero boundary faces; boundary samples of `f` are outside the split.
    pub fn helmholtz_split(&self, f: &VectorField) -> Result<(VectorField, VectorField)> {
        self.check_grid(f.grid())?;
        let coords = f.interior_coords();
        let grad_coords = if let Some(iso) = self.iso() {
            // projection onto Im(D^T) realized through the solve, matching
            // the matrix-free path
            let along_nullspace = iso.nullspace_basis().project(&coords)?;
            &coords - along_nullspace
        } else {
            self.solve_normal_equations(&coords)?.1
        };
        let solenoidal = &coords - &grad_coords;
        Ok((
            VectorField::from_interior_coords(self.grid(), &grad_coords)?,
            VectorField::from_interior_coords(self.grid(), &solenoidal)?,
        ))
    }

    /// The best constant `C` with `||p|| <= C ||G_compatible||`: the
    /// reciprocal of the smallest nonzero singular value of `D^T`. The dense
    /// path reads it from the SVD; the matrix-free path uses the closed-form
    /// smallest nonzero eigenvalue of the Neumann Laplacian on a box,
    /// `min_axis (2/h) sin(pi / (2 n))`.
    pub fn continuity_constant(&self) -> Result<f64> {
        if let Some(iso) = self.iso() {
            let smin = iso.sigma_min_positive().ok_or(Error::InvalidGrid {
                detail: "divergence system has rank zero".into(),
            })?;
            return Ok(1.0 / smin);
        }
        let g = self.grid();
        let smin = Axis::ALL
            .iter()
            .filter(|&&a| g.cells(a) >= 2)
            .map(|&a| {
                let n = g.cells(a) as f64;
                (2.0 / g.spacing(a)) * (std::f64::consts::PI / (2.0 * n)).sin()
            })
            .fold(f64::INFINITY, f64::min);
        if !smin.is_finite() {
            return Err(Error::InvalidGrid {
                detail: "divergence system has rank zero".into(),
            });
        }
        Ok(1.0 / smin)
    }

    /// Shared normal-equation solve: returns the (uncentered) pressure
    /// coordinates and the gradient coordinates `D^T p`, which equal the
    /// projection of the input onto `Im(D^T)` at the solver tolerance.
    fn solve_normal_equations(&self, coords: &DVector<f64>) -> Result<(DVector<f64>, DVector<f64>)> {
        let rhs = self.apply_divergence_coords(coords)?;
        let p = self.cg_zero_mean(&rhs)?;
        let grad = self.apply_divergence_transpose_coords(&p)?;
        Ok((p, grad))
    }

    /// Conjugate gradient for `D D^T x = rhs` on the zero-mean subspace.
    /// The Laplacian preserves zero-mean vectors up to roundoff; the
    /// re-projection each iteration stops that roundoff from accumulating.
    fn cg_zero_mean(&self, rhs: &DVector<f64>) -> Result<DVector<f64>> {
        let n = rhs.len();
        let center = |v: &mut DVector<f64>| {
            let m = v.sum() / n as f64;
            v.iter_mut().for_each(|x| *x -= m);
        };

        let mut b = rhs.clone();
        center(&mut b);
        let b_norm = b.norm();
        let mut x = DVector::zeros(n);
        if b_norm == 0.0 {
            return Ok(x);
        }

        let apply = |v: &DVector<f64>| -> Result<DVector<f64>> {
            let grad = self.apply_divergence_transpose_coords(v)?;
            self.apply_divergence_coords(&grad)
        };

        let max_iter = 10 * n;
        let mut r = b.clone();
        let mut p = r.clone();
        let mut rs_old = r.dot(&r);
        for _ in 0..max_iter {
            if rs_old.sqrt() <= CG_REL_TOL * b_norm {
                center(&mut x);
                return Ok(x);
            }
            let mut ap = apply(&p)?;
            center(&mut ap);
            let denom = p.dot(&ap);
            if denom <= 0.0 {
                break;
            }
            let alpha = rs_old / denom;
            x.axpy(alpha, &p, 1.0);
            r.axpy(-alpha, &ap, 1.0);
            center(&mut r);
            let rs_new = r.dot(&r);
            p = &r + (rs_new / rs_old) * p;
            rs_old = rs_new;
        }
        if rs_old.sqrt() <= CG_REL_TOL * b_norm {
            center(&mut x);
            return Ok(x);
        }
        Err(Error::CgDidNotConverge {
            iterations: max_iter,
            residual: rs_old.sqrt() / b_norm,
        })
    }
}
