//! Serializable summaries of solves and sweeps.

use std::io::Write;

use serde::Serialize;

use crate::config::FieldKind;
use crate::error::Result;
use crate::ode::{fit_decomposition, local_slope, ExponentFit, FitOptions, BLOWUP_EXPONENT};
use crate::solver::checks::{fundamental_equation_residual, linear_grid, CheckResult};
use crate::solver::{dx_series, f_trace, gradient_on_segment, p_trace, segment_grid, SeriesSolution};

pub const SCHEMA_VERSION: u32 = 1;
/// Points on the segment in the per-solve CSV.
pub const SEGMENT_POINTS: usize = 101;
/// Where the sweep samples the local slope of `f`.
pub const SLOPE_T: f64 = 0.05;

pub fn field_name(kind: FieldKind) -> &'static str {
    match kind {
        FieldKind::YLinear => "y",
        FieldKind::XLinear => "x",
        FieldKind::Custom => "custom",
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub schema_version: u32,
    pub epsilon: f64,
    pub field: &'static str,
    pub tol: f64,
    pub depth_used: usize,
    pub tail_bound: f64,
    pub gy_at_0: f64,
    pub gx_max: f64,
    pub checks: Vec<CheckResult>,
}

pub fn gx_max(sol: &SeriesSolution) -> Result<f64> {
    let mut m = 0.0_f64;
    for x in segment_grid(sol.config.epsilon, SEGMENT_POINTS) {
        m = m.max(dx_series(&sol.config, x)?.0.abs());
    }
    Ok(m)
}

pub fn solve_report(sol: &SeriesSolution, checks: Vec<CheckResult>) -> Result<SolveReport> {
    let cfg = &sol.config;
    Ok(SolveReport {
        schema_version: SCHEMA_VERSION,
        epsilon: cfg.epsilon,
        field: field_name(cfg.field_kind),
        tol: cfg.tol,
        depth_used: sol.depth_used,
        tail_bound: sol.tail_bound,
        gy_at_0: gradient_on_segment(sol, 0.0)?.gy,
        gx_max: gx_max(sol)?,
        checks,
    })
}

/// `x,gy` on the segment.
pub fn write_segment_csv<W: Write>(sol: &SeriesSolution, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "gy"])?;
    for x in segment_grid(sol.config.epsilon, SEGMENT_POINTS) {
        let gy = gradient_on_segment(sol, x)?.gy;
        w.serialize((x, gy))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub gy_at_0: f64,
    #[serde(rename = "P1")]
    pub p1: f64,
    #[serde(rename = "C_alpha")]
    pub c_alpha: Option<f64>,
    #[serde(rename = "C_beta")]
    pub c_beta: Option<f64>,
    pub slope_local: f64,
    pub residual: f64,
    pub depth_used: usize,
    pub tail_bound: f64,
}

/// One sweep row; the decomposition columns are empty when the fit window
/// is empty at this ε.
pub fn sweep_row(sol: &SeriesSolution) -> Result<SweepRow> {
    let eps = sol.config.epsilon;
    let f = f_trace(sol)?;
    let opts = FitOptions::default();
    let (c_alpha, c_beta) = if opts.c1 * eps.sqrt() < opts.c2 {
        let d = fit_decomposition(&f, eps, &opts)?;
        (Some(d.c_alpha), Some(d.c_beta))
    } else {
        (None, None)
    };
    Ok(SweepRow {
        epsilon: eps,
        gy_at_0: gradient_on_segment(sol, 0.0)?.gy,
        p1: p_trace(sol)?.value(1.0),
        c_alpha,
        c_beta,
        slope_local: local_slope(&f, SLOPE_T)?,
        residual: fundamental_equation_residual(sol, &linear_grid(1.0, 1.5, 50))?,
        depth_used: sol.depth_used,
        tail_bound: sol.tail_bound,
    })
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub rows: Vec<SweepRow>,
    pub fit: ExponentFit,
    pub target_slope: f64,
    pub deviation: f64,
    /// Largest over smallest `gy_at_0·ε^{(2−√2)/2}`.
    pub scaled_spread: f64,
}

pub fn sweep_report(rows: Vec<SweepRow>) -> Result<SweepReport> {
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.epsilon, r.gy_at_0)).collect();
    let fit = crate::ode::fit_exponent(&pts)?;
    let scaled: Vec<f64> = rows
        .iter()
        .map(|r| r.gy_at_0 * r.epsilon.powf(BLOWUP_EXPONENT))
        .collect();
    let hi = scaled.iter().cloned().fold(f64::MIN, f64::max);
    let lo = scaled.iter().cloned().fold(f64::MAX, f64::min);
    Ok(SweepReport {
        schema_version: SCHEMA_VERSION,
        target_slope: -BLOWUP_EXPONENT,
        deviation: fit.slope + BLOWUP_EXPONENT,
        fit,
        rows,
        scaled_spread: hi / lo,
    })
}
