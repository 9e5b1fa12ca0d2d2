use std::f64::consts::PI;

use crate::grid::Axis;
use crate::{Error, Grid, Result, ScalarField, VectorField};

/// Manufactured pressure profiles: products of `cos(pi x / l)` factors along
/// one, two, or three axes. Each factor has zero mean on the box and zero
/// normal derivative at the walls, so the sampled force is border-null up to
/// exact zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmsCase {
    CosX,
    CosXCosY,
    CosXCosYCosZ,
}

impl MmsCase {
    pub fn active_axes(self) -> &'static [Axis] {
        match self {
            MmsCase::CosX => &[Axis::X],
            MmsCase::CosXCosY => &[Axis::X, Axis::Y],
            MmsCase::CosXCosYCosZ => &[Axis::X, Axis::Y, Axis::Z],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MmsCase::CosX => "cosX",
            MmsCase::CosXCosY => "cosXcosY",
            MmsCase::CosXCosYCosZ => "cosXcosYcosZ",
        }
    }
}

impl std::str::FromStr for MmsCase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "cosX" => Ok(MmsCase::CosX),
            "cosXcosY" => Ok(MmsCase::CosXCosY),
            "cosXcosYcosZ" => Ok(MmsCase::CosXCosYCosZ),
            other => Err(format!(
                "unknown case {other:?}; expected cosX, cosXcosY, or cosXcosYcosZ"
            )),
        }
    }
}

fn axis_name(axis: Axis) -> &'static str {
    match axis {
        Axis::X => "x",
        Axis::Y => "y",
        Axis::Z => "z",
    }
}

/// Exact pressure sampled at cell centers (discrete mean subtracted to
/// machine precision) together with the force `G = -grad p` sampled
/// analytically at face centers, boundary faces included.
pub fn manufactured(grid: Grid, case: MmsCase) -> Result<(ScalarField, VectorField)> {
    let axes = case.active_axes();
    for &axis in axes {
        if grid.cells(axis) < 2 {
            return Err(Error::DegenerateAxis {
                axis: axis_name(axis),
                got: grid.cells(axis),
            });
        }
    }

    let factor = |axis: Axis, coord: f64| (PI * coord / grid.length(axis)).cos();
    let is_active = |axis: Axis| axes.contains(&axis);

    let mut p_values = Vec::with_capacity(grid.n_cells());
    for k in 0..grid.nz {
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let mut p = 1.0;
                for (axis, idx) in [(Axis::X, i), (Axis::Y, j), (Axis::Z, k)] {
                    if is_active(axis) {
                        p *= factor(axis, grid.center(axis, idx));
                    }
                }
                p_values.push(p);
            }
        }
    }
    let mut pressure = ScalarField::new(grid, p_values)?;
    pressure.subtract_mean();

    // one force component per axis: -d/da of the product, i.e. the sine
    // factor along `a` times the cosine factors along the other active axes
    let mut force = VectorField::zeros(grid);
    let mut fill = |axis: Axis| {
        let l = grid.length(axis);
        let (n_i, n_j, n_k) = match axis {
            Axis::X => (grid.nx + 1, grid.ny, grid.nz),
            Axis::Y => (grid.nx, grid.ny + 1, grid.nz),
            Axis::Z => (grid.nx, grid.ny, grid.nz + 1),
        };
        for k in 0..n_k {
            for j in 0..n_j {
                for i in 0..n_i {
                    let coord_on = |a: Axis| -> f64 {
                        let idx = match a {
                            Axis::X => i,
                            Axis::Y => j,
                            Axis::Z => k,
                        };
                        if a == axis {
                            grid.face_position(a, idx)
                        } else {
                            grid.center(a, idx)
                        }
                    };
                    let mut g = (PI / l) * (PI * coord_on(axis) / l).sin();
                    for other in Axis::ALL {
                        if other != axis && is_active(other) {
                            g *= factor(other, coord_on(other));
                        }
                    }
                    let idx = grid.face_index(axis, i, j, k);
                    force.component_mut(axis)[idx] = g;
                }
            }
        }
    };
    for &axis in axes {
        fill(axis);
    }

    Ok((pressure, force))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cos_x_samples_match_hand_values() {
        let g = Grid::new(2, 1, 1, 1.0, 1.0, 1.0).unwrap();
        let (p, force) = manufactured(g, MmsCase::CosX).unwrap();
        // first center at x = 0.25: cos(pi/4) = sqrt(2)/2
        assert_relative_eq!(
            p.values()[0],
            std::f64::consts::FRAC_1_SQRT_2,
            max_relative = 1e-13
        );
        // interior face at x = 0.5: pi sin(pi/2) = pi
        assert_relative_eq!(
            force.face_value(Axis::X, 1, 0, 0),
            PI,
            max_relative = 1e-14
        );
        // boundary faces carry exact zeros of the sine
        assert!(force.face_value(Axis::X, 0, 0, 0).abs() <= 1e-15);
        assert!(force.face_value(Axis::X, 2, 0, 0).abs() <= PI * 1e-15);
    }

    #[test]
    fn discrete_mean_is_centered() {
        for n in [2usize, 5, 9, 16] {
            let g = Grid::new(n, 1, 1, 1.0, 1.0, 1.0).unwrap();
            let (p, _) = manufactured(g, MmsCase::CosX).unwrap();
            assert!(p.weighted_mean().abs() <= 1e-14, "n={n}");
        }
    }

    #[test]
    fn rejects_degenerate_axes() {
        let g = Grid::new(4, 1, 1, 1.0, 1.0, 1.0).unwrap();
        assert!(manufactured(g, MmsCase::CosX).is_ok());
        assert!(matches!(
            manufactured(g, MmsCase::CosXCosY),
            Err(Error::DegenerateAxis { axis: "y", .. })
        ));
    }

    #[test]
    fn case_names_parse() {
        assert_eq!("cosX".parse::<MmsCase>().unwrap(), MmsCase::CosX);
        assert_eq!("cosXcosY".parse::<MmsCase>().unwrap(), MmsCase::CosXCosY);
        assert_eq!(
            "cosXcosYcosZ".parse::<MmsCase>().unwrap(),
            MmsCase::CosXCosYCosZ
        );
        assert!("cosx".parse::<MmsCase>().is_err());
    }
}
