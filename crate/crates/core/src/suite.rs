//! The invariant checks bundled as rows of a pass/fail table.
//!
//! Margins are positive exactly when a check passes: `1 − value/limit` for
//! upper-bound checks, the smallest sampled value for positivity checks.

use serde::Serialize;

use crate::config::GapConfig;
use crate::error::Result;
use crate::ode::{fit_decomposition, FitOptions, BLOWUP_EXPONENT};
use crate::oracle::{naive_reflect_dy, neumann_surface_check};
use crate::solver::checks::{
    chain_length, chain_sides, fundamental_equation_residual_of, gamma_inequality, ladder_grid,
    linear_grid, moment_inequality_check, sign_ladder, CheckResult,
};
use crate::solver::{f_trace, p_trace, SeriesSolution};
use crate::trace::{reflect_unit_dy, AxisTrace};

/// Relative slack allowed on the signs of `P‴` and `P⁗`.
pub const HIGH_ORDER_SLACK: f64 = 1e-4;
/// Off-axis depth of the surface check.
pub const BOUNDARY_DEPTH: usize = 4;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteRow {
    pub epsilon: Option<f64>,
    pub name: String,
    pub pass: bool,
    pub margin: f64,
}

impl SuiteRow {
    fn from_check(epsilon: Option<f64>, c: CheckResult) -> Self {
        Self {
            epsilon,
            name: c.name,
            pass: c.pass,
            margin: c.margin,
        }
    }
}

fn upper(name: &str, value: f64, limit: f64) -> CheckResult {
    CheckResult::new(name, value <= limit, 1.0 - value / limit)
}

/// Every check that reads the solution. `perturb` is added to `P` before
/// the exact identities are evaluated, a self-test of the harness.
pub fn solution_checks(sol: &SeriesSolution, perturb: f64) -> Result<Vec<CheckResult>> {
    let eps = sol.config.epsilon;
    let mut out = Vec::new();
    let p = p_trace(sol)?.plus_constant(perturb);
    let grid = linear_grid(1.0, 1.5, 50);
    let resid = fundamental_equation_residual_of(&p, eps, &grid)?;
    out.push(upper("fundamental_equation", resid, 5.0 * sol.tail_bound));

    let m = moment_inequality_check(sol, &linear_grid(1.0, 2.0 + eps, 50))?;
    out.push(CheckResult::new("moment_inequality", m.min_margin > 0.0, m.min_margin));
    out.push(upper("tail_integral", m.tail_integral, 3.0));

    let ladder = sign_ladder(sol, &ladder_grid(eps, 0.5, 200), HIGH_ORDER_SLACK)?;
    for l in ladder {
        let margin = if l.order <= 2 { l.margin } else { l.margin + HIGH_ORDER_SLACK };
        out.push(CheckResult::new(format!("sign_ladder_{}", l.order), l.pass, margin));
    }

    let n0 = chain_length(eps);
    if n0 >= 1 {
        let (lhs, rhs) = chain_sides(&p, eps, n0)?;
        let rel = (lhs - rhs).abs() / lhs.abs();
        out.push(upper("chain_identity", rel, 10.0 * sol.tail_bound / p.value(1.0)));
    }

    if let Some(g) = gamma_inequality(sol, 40)? {
        out.push(CheckResult::new("gamma_inequality", g.pass, g.min_relative));
    }

    let opts = FitOptions::default();
    let se = eps.sqrt();
    if opts.c1 * se < opts.c2 {
        let f = f_trace(sol)?;
        let d = fit_decomposition(&f, eps, &opts)?;
        out.push(upper("decomposition_residual", d.residual_norm, opts.fit_tol));
        out.push(CheckResult::new("c_alpha_positive", d.c_alpha > 0.0, d.c_alpha));
        let edge = 10.0 * se;
        let beta = d.c_beta.abs() * edge.powf(-2.0 - std::f64::consts::SQRT_2);
        let alpha = d.c_alpha * edge.powf(-2.0 + std::f64::consts::SQRT_2);
        out.push(upper("c_beta_subdominant", beta, alpha));
        let w = f.evaluate(se)? * eps.powf(BLOWUP_EXPONENT);
        out.push(CheckResult::new("lower_bound_witness", w > 0.0, w));
    }
    Ok(out)
}

/// Test functions for the reflection oracle.
pub fn oracle_corpus() -> Vec<(&'static str, fn(f64) -> f64)> {
    vec![
        ("one", |_| 1.0),
        ("s", |s| s),
        ("s2", |s| s * s),
        ("inverse_cube", |s| (1.0 + s).powi(-3)),
    ]
}

/// Largest disagreement between the trace reflection and direct quadrature
/// over `[1, 4]`, relative to the largest value there (some corpus images
/// vanish at `x = 1`).
pub fn oracle_disagreement(g: fn(f64) -> f64) -> Result<f64> {
    let trace = AxisTrace::build(g, 0.0, 1.0, 1e-15)?;
    let reflected = reflect_unit_dy(&trace)?;
    let mut worst = 0.0_f64;
    let mut scale = 0.0_f64;
    for x in linear_grid(1.0, 4.0, 31) {
        let naive = naive_reflect_dy(&g, x)?;
        worst = worst.max((reflected.evaluate(x)? - naive).abs());
        scale = scale.max(naive.abs());
    }
    Ok(worst / scale)
}

pub fn oracle_checks() -> Result<Vec<CheckResult>> {
    oracle_corpus()
        .into_iter()
        .map(|(name, g)| Ok(upper(&format!("oracle_reflect_{name}"), oracle_disagreement(g)?, 1e-9)))
        .collect()
}

/// Depth-limited Neumann residual on B₁; accepts any positive ε.
pub fn boundary_check(eps: f64) -> Result<CheckResult> {
    let cfg = GapConfig::y_linear(eps);
    let c = neumann_surface_check(&cfg, BOUNDARY_DEPTH, 10)?;
    Ok(upper("neumann_surface", c.max_residual, 2.0 * c.bound))
}

pub fn rows(epsilon: Option<f64>, checks: Vec<CheckResult>) -> Vec<SuiteRow> {
    checks
        .into_iter()
        .map(|c| SuiteRow::from_check(epsilon, c))
        .collect()
}
