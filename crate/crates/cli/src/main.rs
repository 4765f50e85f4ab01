//! `gapfield`: solve, sweep and verify from the command line.
//!
//! Exit codes: 0 success, 1 a check failed (or output could not be
//! written), 2 invalid arguments, 3 the series did not converge.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use gapfield::report::{self, SweepRow, SCHEMA_VERSION};
use gapfield::solver::checks::CheckResult;
use gapfield::suite::{self, SuiteRow};
use gapfield::{solve, Error, FieldKind, GapConfig};

const SWEEP_COLUMNS: &str = "\
sweep.csv columns:
  epsilon      gap width
  gy_at_0      d_y u at the centre of the gap
  P1           P(1), the B1 trace at the near pole
  C_alpha      coefficient of f_alpha in the decomposition of f (empty when the fit window [20 sqrt(eps), 0.3] is empty)
  C_beta       coefficient of f_beta (same)
  slope_local  d ln f / d ln t at t = 0.05
  residual     max functional-equation residual on 50 points of [1, 1.5]
  depth_used   reflection levels summed
  tail_bound   bound on the discarded remainder";

#[derive(Parser)]
#[command(name = "gapfield", version, about = "Field between two insulating unit spheres at distance eps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Field {
    Y,
    X,
}

#[derive(Subcommand)]
enum Command {
    /// Solve at one eps; writes solve.json and segment.csv (columns x,gy).
    Solve {
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value = "y")]
        field: Field,
        #[arg(long)]
        max_depth: Option<usize>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Log-spaced sweep with a fit of ln gy_at_0 against ln eps.
    #[command(after_help = SWEEP_COLUMNS)]
    Sweep {
        #[arg(long, default_value_t = 1e-5)]
        eps_min: f64,
        #[arg(long, default_value_t = 1e-2)]
        eps_max: f64,
        #[arg(long, default_value_t = 7)]
        count: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Output directory for sweep.csv and sweep.json.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; 0 picks the number of cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Run the invariant checks; the table columns are epsilon,name,pass,margin.
    Verify {
        #[arg(long, value_delimiter = ',', default_value = "1e-2,1e-3,1e-4")]
        epsilon_list: Vec<f64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Add this constant to P before the exact identities are checked.
        #[arg(long, default_value_t = 0.0)]
        perturb: f64,
        /// Also run the depth-limited Neumann check on the sphere surface.
        #[arg(long)]
        boundary: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

enum Failure {
    Checks,
    Args(String),
    Convergence(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) | Error::Precondition { .. } | Error::OutOfDomain { .. } => {
                Failure::Args(e.to_string())
            }
            Error::NotConverged { .. }
            | Error::DepthExceeded { .. }
            | Error::ToleranceFloor { .. }
            | Error::NotContracting { .. }
            | Error::IllConditioned { .. }
            | Error::Quadrature { .. } => Failure::Convergence(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn check_precision() -> Outcome {
    match std::env::var("GAPFIELD_PRECISION").as_deref() {
        Err(_) | Ok("double") | Ok("") => Ok(()),
        Ok("extended") => {
            eprintln!("warning: extended precision is not available on this build; using double");
            Ok(())
        }
        Ok(other) => Err(Failure::Args(format!(
            "GAPFIELD_PRECISION must be double or extended, got {other}"
        ))),
    }
}

fn pool(jobs: usize) -> std::result::Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::Other(e.to_string()))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Outcome {
    fs::create_dir_all(dir)?;
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(dir.join(name), text)?;
    Ok(())
}

fn cmd_solve(epsilon: f64, tol: f64, field: Field, max_depth: Option<usize>, out: Option<PathBuf>) -> Outcome {
    let kind = match field {
        Field::Y => FieldKind::YLinear,
        Field::X => FieldKind::XLinear,
    };
    let mut cfg = GapConfig::new(epsilon, kind).with_tol(tol);
    if let Some(d) = max_depth {
        cfg = cfg.with_max_depth(d);
    }
    cfg.validate()?;
    let sol = solve(&cfg)?;
    let checks = if kind == FieldKind::YLinear {
        let resid = gapfield::solver::checks::fundamental_equation_residual(
            &sol,
            &gapfield::solver::checks::linear_grid(1.0, 1.5, 50),
        )?;
        let limit = 5.0 * sol.tail_bound;
        vec![CheckResult::new("fundamental_equation", resid <= limit, 1.0 - resid / limit)]
    } else {
        Vec::new()
    };
    let rep = report::solve_report(&sol, checks)?;
    if let Some(dir) = out {
        write_json(&dir, "solve.json", &rep)?;
        let f = fs::File::create(dir.join("segment.csv"))?;
        report::write_segment_csv(&sol, f)?;
    }
    println!("epsilon,field,depth_used,tail_bound,gy_at_0,gx_max");
    println!(
        "{},{},{},{:.6e},{:.12},{:.6e}",
        rep.epsilon, rep.field, rep.depth_used, rep.tail_bound, rep.gy_at_0, rep.gx_max
    );
    if rep.checks.iter().all(|c| c.pass) {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    // largest first, so the rows read in the direction of blow-up
    let (a, b) = (hi.ln(), lo.ln());
    (0..count)
        .map(|i| match i {
            0 => hi,
            i if i == count - 1 => lo,
            i => (a + (b - a) * i as f64 / (count - 1) as f64).exp(),
        })
        .collect()
}

fn cmd_sweep(eps_min: f64, eps_max: f64, count: usize, tol: f64, out: Option<PathBuf>, jobs: usize) -> Outcome {
    if !(eps_min > 0.0 && eps_min < eps_max && eps_max < 0.25) {
        return Err(Failure::Args(
            "need 0 < eps-min < eps-max < 1/4".into(),
        ));
    }
    if count < 4 {
        return Err(Failure::Args("count must be at least 4".into()));
    }
    let eps = log_spaced(eps_min, eps_max, count);
    let rows: Vec<SweepRow> = pool(jobs)?.install(|| {
        eps.par_iter()
            .map(|&e| {
                let cfg = GapConfig::y_linear(e).with_tol(tol);
                cfg.validate()?;
                let sol = solve(&cfg)?;
                report::sweep_row(&sol)
            })
            .collect::<gapfield::Result<Vec<_>>>()
    })?;
    let rep = report::sweep_report(rows)?;
    if let Some(dir) = &out {
        fs::create_dir_all(dir)?;
        report::write_sweep_csv(&rep.rows, fs::File::create(dir.join("sweep.csv"))?)?;
        write_json(dir, "sweep.json", &rep)?;
    }
    println!("epsilon,gy_at_0,P1,depth_used");
    for r in &rep.rows {
        println!("{:e},{:.10},{:.10},{}", r.epsilon, r.gy_at_0, r.p1, r.depth_used);
    }
    println!(
        "slope {:.6} target {:.6} deviation {:+.6} stderr {:.2e}",
        rep.fit.slope, rep.target_slope, rep.deviation, rep.fit.stderr
    );
    Ok(())
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    schema_version: u32,
    perturb: f64,
    all_pass: bool,
    rows: &'a [SuiteRow],
}

fn cmd_verify(
    epsilon_list: Vec<f64>,
    tol: f64,
    perturb: f64,
    boundary: bool,
    out: Option<PathBuf>,
    jobs: usize,
) -> Outcome {
    if epsilon_list.is_empty() {
        return Err(Failure::Args("empty epsilon list".into()));
    }
    for &e in &epsilon_list {
        if !(e > 0.0 && e.is_finite()) {
            return Err(Failure::Args(format!("epsilon must be positive, got {e}")));
        }
        if e >= 0.25 && !boundary {
            return Err(Failure::Args(format!(
                "epsilon {e} is above the solver cap 1/4; only --boundary checks run there"
            )));
        }
    }
    let per_eps: Vec<Vec<SuiteRow>> = pool(jobs)?.install(|| {
        epsilon_list
            .par_iter()
            .map(|&e| {
                let mut rows = Vec::new();
                if e < 0.25 {
                    let cfg = GapConfig::y_linear(e).with_tol(tol);
                    cfg.validate()?;
                    let sol = solve(&cfg)?;
                    rows.extend(suite::rows(Some(e), suite::solution_checks(&sol, perturb)?));
                } else {
                    eprintln!("eps = {e}: above the solver cap, running the boundary check only");
                }
                if boundary {
                    rows.extend(suite::rows(Some(e), vec![suite::boundary_check(e)?]));
                }
                Ok(rows)
            })
            .collect::<gapfield::Result<Vec<_>>>()
    })?;
    let mut rows: Vec<SuiteRow> = per_eps.into_iter().flatten().collect();
    rows.extend(suite::rows(None, suite::oracle_checks()?));
    let all_pass = rows.iter().all(|r| r.pass);

    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    writeln!(w, "epsilon,name,pass,margin")?;
    for r in &rows {
        let e = r.epsilon.map(|e| format!("{e:e}")).unwrap_or_default();
        writeln!(w, "{},{},{},{:.6e}", e, r.name, if r.pass { "pass" } else { "FAIL" }, r.margin)?;
    }
    if let Some(dir) = out {
        write_json(
            &dir,
            "verify.json",
            &VerifyReport {
                schema_version: SCHEMA_VERSION,
                perturb,
                all_pass,
                rows: &rows,
            },
        )?;
    }
    for r in rows.iter().filter(|r| !r.pass) {
        eprintln!("check failed: {} (margin {:e})", r.name, r.margin);
    }
    if all_pass {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = check_precision().and_then(|_| match cli.command {
        Command::Solve {
            epsilon,
            tol,
            field,
            max_depth,
            out,
        } => cmd_solve(epsilon, tol, field, max_depth, out),
        Command::Sweep {
            eps_min,
            eps_max,
            count,
            tol,
            out,
            jobs,
        } => cmd_sweep(eps_min, eps_max, count, tol, out, jobs),
        Command::Verify {
            epsilon_list,
            tol,
            perturb,
            boundary,
            out,
            jobs,
        } => cmd_verify(epsilon_list, tol, perturb, boundary, out, jobs),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Args(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Convergence(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
