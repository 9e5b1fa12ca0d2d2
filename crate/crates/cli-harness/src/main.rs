//! `riesz` — verification suites for operator image/conullspace dualities
//! and discrete pressure recovery.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check fails
//! or a solver breaks down, 2 for usage and I/O problems.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cli_harness::{
    run_check_iso, run_mms, run_pressure, CheckIsoConfig, CliError, MmsConfig, PressureConfig,
};
use pressure_field::{Grid, MmsCase};

#[derive(Parser)]
#[command(name = "riesz", version, about = "Isomorphism and pressure-equation verification harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Randomized verification of the isomorphism identities.
    CheckIso(CheckIsoArgs),
    /// Recover the zero-mean pressure from a vector field file.
    Pressure(PressureArgs),
    /// Manufactured-solution convergence study.
    Mms(MmsArgs),
}

#[derive(Args)]
struct CheckIsoArgs {
    /// RNG seed; every trial derives its own ChaCha8 stream from it.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Gaussian trials per shape (structured cases are always added).
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Operator shapes as RxC, comma separated, e.g. 20x30,10x14.
    #[arg(long, value_parser = parse_dims, value_delimiter = ',', default_value = "20x30")]
    dims: Vec<(usize, usize)>,
    /// Relative tolerance for rank decisions and membership tests.
    #[arg(long, default_value_t = operator_core::DEFAULT_TOL)]
    tol: f64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Run trials on one thread (they always do; flag kept for scripting).
    #[arg(long)]
    single_thread: bool,
}

#[derive(Args)]
struct PressureArgs {
    /// Input vector field file.
    #[arg(long)]
    input: PathBuf,
    /// Output scalar field file for the recovered pressure.
    #[arg(long)]
    output: PathBuf,
    /// Expected grid cells NX,NY,NZ; the input header must match.
    #[arg(long, value_parser = parse_triplet_usize)]
    grid: Option<(usize, usize, usize)>,
    /// Expected box lengths LX,LY,LZ (default 1,1,1 when --grid is given).
    #[arg(long, value_parser = parse_triplet_f64)]
    len: Option<(f64, f64, f64)>,
}

#[derive(Args)]
struct MmsArgs {
    /// Manufactured case: cosX, cosXcosY, or cosXcosYcosZ.
    #[arg(long, value_parser = parse_case)]
    case: MmsCase,
    /// Strictly increasing refinement sizes, e.g. 8,16,32; each at least 4.
    #[arg(long, value_parser = parse_n_list)]
    n: NList,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Debug)]
struct NList(Vec<usize>);

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (r, c) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected RxC, got {s:?}"))?;
    let rows = r.trim().parse().map_err(|e| format!("bad rows in {s:?}: {e}"))?;
    let cols = c.trim().parse().map_err(|e| format!("bad cols in {s:?}: {e}"))?;
    Ok((rows, cols))
}

fn parse_triplet_usize(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected NX,NY,NZ, got {s:?}"));
    }
    let mut vals = [0usize; 3];
    for (v, p) in vals.iter_mut().zip(&parts) {
        *v = p.trim().parse().map_err(|e| format!("bad entry in {s:?}: {e}"))?;
    }
    Ok((vals[0], vals[1], vals[2]))
}

fn parse_triplet_f64(s: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected LX,LY,LZ, got {s:?}"));
    }
    let mut vals = [0f64; 3];
    for (v, p) in vals.iter_mut().zip(&parts) {
        *v = p.trim().parse().map_err(|e| format!("bad entry in {s:?}: {e}"))?;
    }
    Ok((vals[0], vals[1], vals[2]))
}

fn parse_n_list(s: &str) -> Result<NList, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        out.push(
            part.trim()
                .parse()
                .map_err(|e| format!("bad entry in {s:?}: {e}"))?,
        );
    }
    Ok(NList(out))
}

fn parse_case(s: &str) -> Result<MmsCase, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::CheckIso(args) => cmd_check_iso(args),
        Command::Pressure(args) => cmd_pressure(args),
        Command::Mms(args) => cmd_mms(args),
    };
    match outcome {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn cmd_check_iso(args: CheckIsoArgs) -> Result<bool, CliError> {
    let cfg = CheckIsoConfig {
        seed: args.seed,
        trials: args.trials,
        dims: args.dims,
        tol: args.tol,
        report_path: args.report,
        single_thread: args.single_thread,
    };
    let report = run_check_iso(&cfg)?;
    report.emit(cfg.report_path.as_deref())?;
    if cfg.report_path.is_some() {
        report.print_summary();
    }
    Ok(report.pass)
}

fn cmd_pressure(args: PressureArgs) -> Result<bool, CliError> {
    let expected_grid = match (args.grid, args.len) {
        (Some((nx, ny, nz)), len) => {
            let (lx, ly, lz) = len.unwrap_or((1.0, 1.0, 1.0));
            Some(Grid::new(nx, ny, nz, lx, ly, lz).map_err(|e| CliError::Usage(e.to_string()))?)
        }
        (None, Some(_)) => {
            return Err(CliError::Usage(
                "--len is only meaningful together with --grid".into(),
            ));
        }
        (None, None) => None,
    };
    let cfg = PressureConfig {
        input: args.input,
        output: args.output.clone(),
        expected_grid,
    };
    let outcome = run_pressure(&cfg)?;
    if let Some(warning) = &outcome.boundary_warning {
        eprintln!("{warning}");
    }
    println!(
        "incompatibility residual: {:.6e}",
        outcome.incompatibility_residual
    );
    println!("continuity constant:     {:.6e}", outcome.continuity_constant);
    println!("pressure written to {}", args.output.display());
    Ok(true)
}

fn cmd_mms(args: MmsArgs) -> Result<bool, CliError> {
    let cfg = MmsConfig {
        case: args.case,
        n_list: args.n.0,
        report_path: args.report,
    };
    let report = run_mms(&cfg)?;
    report.emit(cfg.report_path.as_deref())?;
    if cfg.report_path.is_some() {
        report.print_summary();
    }
    Ok(report.pass)
}
