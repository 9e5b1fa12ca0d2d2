use std::path::PathBuf;
use std::time::Instant;

use pressure_field::{manufactured, DivergenceSystem, Grid, MmsCase};

use crate::report::{CheckRecord, Report};
use crate::CliError;

/// Minimum error-reduction factor per mesh doubling; the stencil is second
/// order, so a clean run lands near 4.
pub const REQUIRED_RATIO: f64 = 3.5;

#[derive(Debug, Clone)]
pub struct MmsConfig {
    pub case: MmsCase,
    pub n_list: Vec<usize>,
    pub report_path: Option<PathBuf>,
}

/// Grid for a case at refinement `n`: active axes get `n` cells over unit
/// length, inactive axes collapse to a single cell.
pub fn case_grid(case: MmsCase, n: usize) -> Result<Grid, CliError> {
    let g = match case {
        MmsCase::CosX => Grid::new(n, 1, 1, 1.0, 1.0, 1.0),
        MmsCase::CosXCosY => Grid::new(n, n, 1, 1.0, 1.0, 1.0),
        MmsCase::CosXCosYCosZ => Grid::new(n, n, n, 1.0, 1.0, 1.0),
    };
    g.map_err(|e| CliError::Usage(e.to_string()))
}

/// Weighted L2 error of the recovered pressure against the exact profile.
pub fn mms_error(case: MmsCase, n: usize) -> Result<f64, CliError> {
    let grid = case_grid(case, n)?;
    let (exact, force) = manufactured(grid, case)?;
    let sys = DivergenceSystem::build(grid)?;
    let sol = sys.recover_pressure(&force)?;
    let err2: f64 = sol
        .pressure
        .values()
        .iter()
        .zip(exact.values())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(err2.sqrt() * grid.coord_weight())
}

/// Run the convergence study: solve at each refinement, tabulate errors and
/// observed orders, and check each successive order against
/// `log2(REQUIRED_RATIO)`. A single refinement level reports its error and
/// passes vacuously.
pub fn run_mms(cfg: &MmsConfig) -> Result<Report, CliError> {
    if cfg.n_list.is_empty() {
        return Err(CliError::Usage("--n must list at least one size".into()));
    }
    if cfg.n_list.iter().any(|&n| n < 4) {
        return Err(CliError::Usage("--n entries must be at least 4".into()));
    }
    if cfg.n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage("--n must be strictly increasing".into()));
    }

    let started = Instant::now();
    let mut errors = Vec::with_capacity(cfg.n_list.len());
    for &n in &cfg.n_list {
        errors.push(mms_error(cfg.case, n)?);
    }

    let required_order = REQUIRED_RATIO.log2();
    let mut orders = Vec::new();
    let mut checks = Vec::new();
    for (pair_e, pair_n) in errors.windows(2).zip(cfg.n_list.windows(2)) {
        let order = (pair_e[0] / pair_e[1]).log2() / (pair_n[1] as f64 / pair_n[0] as f64).log2();
        orders.push(order);
        // shortfall below the required order; <= 0 passes
        checks.push(CheckRecord::new(
            format!("order_n{}_to_n{}", pair_n[0], pair_n[1]),
            required_order - order,
            0.0,
        ));
    }

    Ok(Report {
        suite: "mms".into(),
        seed: None,
        trials: None,
        dims: None,
        tol: None,
        case: Some(cfg.case.name().into()),
        n: Some(cfg.n_list.clone()),
        errors: Some(errors),
        orders: Some(orders),
        checks,
        pass: false,
        elapsed_seconds: started.elapsed().as_secs_f64(),
    }
    .finish())
}
