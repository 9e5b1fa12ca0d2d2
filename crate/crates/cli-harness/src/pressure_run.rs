use std::path::PathBuf;

use pressure_field::fieldio::{read_field, write_scalar, LoadedField};
use pressure_field::{DivergenceSystem, Grid};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct PressureConfig {
    pub input: PathBuf,
    pub output: PathBuf,
    /// Expected grid from `--grid`/`--len`; when present the input header
    /// must match it exactly.
    pub expected_grid: Option<Grid>,
}

#[derive(Debug, Clone)]
pub struct PressureOutcome {
    pub incompatibility_residual: f64,
    pub continuity_constant: f64,
    pub boundary_warning: Option<String>,
}

/// Read a vector field file, recover the zero-mean pressure, and write it
/// out as a scalar field file.
pub fn run_pressure(cfg: &PressureConfig) -> Result<PressureOutcome, CliError> {
    let loaded = read_field(&cfg.input)?;
    let force = match loaded {
        LoadedField::Vector(v) => v,
        LoadedField::Scalar(_) => {
            return Err(CliError::Usage(format!(
                "{}: expected a vector field file, found kind \"scalar\"",
                cfg.input.display()
            )));
        }
    };

    if let Some(expected) = cfg.expected_grid {
        if force.grid() != expected {
            return Err(CliError::Usage(format!(
                "grid mismatch: file declares {:?} cells over {:?}, flags require {:?} cells over {:?}",
                (force.grid().nx, force.grid().ny, force.grid().nz),
                (force.grid().lx, force.grid().ly, force.grid().lz),
                (expected.nx, expected.ny, expected.nz),
                (expected.lx, expected.ly, expected.lz),
            )));
        }
    }

    // nonzero boundary samples are legal force data; they are ignored by
    // every pairing, which deserves a note rather than an error
    let boundary_warning = {
        let worst = force.max_boundary_abs();
        (worst > 0.0).then(|| {
            format!(
                "warning: boundary faces carry values up to {worst:.3e}; they are ignored (test fields vanish on the border)"
            )
        })
    };

    let sys = DivergenceSystem::build(force.grid())?;
    let solution = sys.recover_pressure(&force)?;
    let continuity = sys.continuity_constant()?;
    write_scalar(&cfg.output, &solution.pressure)?;

    Ok(PressureOutcome {
        incompatibility_residual: solution.incompatibility_residual,
        continuity_constant: continuity,
        boundary_warning,
    })
}
