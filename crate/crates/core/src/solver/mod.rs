//! Reflection series for the two-sphere Neumann problem.
//!
//! `u = H + Σ_k α_k + Σ_k β_k` with `α₀ = R₁H`, `β₀ = R₂H`,
//! `α_k = R₁β_{k−1}` and `β_k = R₂α_{k−1}`. Only the axis traces of `∂_y`
//! are carried; `∂_x` on the segment comes from the scalar image-chain
//! product series.

pub mod checks;

use serde::Serialize;

use crate::config::{FieldKind, GapConfig};
use crate::error::{Error, Result};
use crate::geometry::{kelvin_map_r1, kelvin_map_r2};
use crate::trace::{cheb, reflect_local, AxisTrace, ReflectOptions, Sphere, TraceKind};

const MAX_DEGREE: usize = 512;

/// One member of the `∂_x` product series at a gap point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DxTerm {
    /// `'A'` for the chain starting in B₂, `'B'` for the one starting in B₁.
    pub chain: char,
    pub n: usize,
    pub factor: f64,
    pub point: f64,
}

#[derive(Debug, Clone)]
pub struct SeriesSolution {
    pub config: GapConfig,
    pub depth_used: usize,
    /// Sum of the terms that end with a reflection across B₁.
    pub rb1_dy: AxisTrace,
    pub rb2_dy: AxisTrace,
    /// `∂_x` series at the midpoint of the gap.
    pub dx_series_terms: Vec<DxTerm>,
    pub tail_bound: f64,
    /// `∂_y u(0)` after 0, 1, 2, … pairs of terms.
    pub partial_sums_at_0: Vec<f64>,
    /// Sup norm of each pair of terms.
    pub term_sups: Vec<f64>,
    /// Per-reflection ratio used for the tail extrapolation.
    pub ratio: f64,
    /// `(1+ε)^{-3/2}`, the analytic per-reflection decay.
    pub analytic_ratio: f64,
}

fn reflect_term(
    g: &AxisTrace,
    which: Sphere,
    cfg: &GapConfig,
    degree: &mut usize,
) -> Result<(AxisTrace, f64)> {
    loop {
        let opts = ReflectOptions {
            x_max: cfg.x_max,
            accuracy: 0.0,
            degree: Some(*degree),
        };
        let (t, local) = reflect_local(g, which, cfg.epsilon, TraceKind::Dy, &opts)?;
        // resolution is judged from the coefficient tail; `local` also
        // carries roundoff that more degree cannot remove
        let resolved = t.pieces().iter().all(|p| {
            let c = p.coeffs();
            cheb::tail(c) <= 1e-12 * cheb::abs_sum(c)
        });
        if resolved {
            return Ok((t.with_accuracy(local), local));
        }
        if *degree >= MAX_DEGREE {
            let (lo, hi) = t.domain();
            return Err(Error::NotConverged {
                lo,
                hi,
                error: local,
            });
        }
        *degree = (*degree * 3 / 2).min(MAX_DEGREE);
    }
}

/// Runs the series until the extrapolated remainder is below `tol`.
pub fn solve(config: &GapConfig) -> Result<SeriesSolution> {
    solve_impl(config, None)
}

/// Exactly `depth` pairs of terms, with no stopping rule. The tail bound is
/// still estimated from the last ratios when possible.
pub fn solve_with_depth(config: &GapConfig, depth: usize) -> Result<SeriesSolution> {
    solve_impl(config, Some(depth))
}

fn solve_impl(cfg: &GapConfig, fixed: Option<usize>) -> Result<SeriesSolution> {
    cfg.validate()?;
    if fixed == Some(0) {
        return Err(Error::InvalidConfig("depth must be at least 1".into()));
    }
    let eps = cfg.epsilon;
    let h = cfg.dy_trace()?;
    let h0 = h.value(0.0);
    let mut degree = cfg.degree;

    let (mut alpha, acc_a) = reflect_term(&h, Sphere::B1, cfg, &mut degree)?;
    let (mut beta, acc_b) = reflect_term(&h, Sphere::B2, cfg, &mut degree)?;
    let mut rb1 = alpha.clone();
    let mut rb2 = beta.clone();
    let mut sups = vec![alpha.sup_norm().max(beta.sup_norm())];
    let mut partial = vec![h0, h0 + alpha.value(0.0) + beta.value(0.0)];
    let mut acc_sum = acc_a.max(acc_b);
    let analytic = (1.0 + eps).powf(-1.5);
    let mut ratio = f64::NAN;
    let mut tail = f64::INFINITY;
    let mut depth = 1;

    loop {
        let last = *sups.last().unwrap();
        if last == 0.0 {
            tail = acc_sum;
            ratio = 0.0;
        } else if sups.len() >= 4 {
            let n = sups.len();
            ratio = (1..=3)
                .map(|j| sups[n - j] / sups[n - j - 1])
                .fold(0.0_f64, f64::max);
            tail = if ratio < 1.0 {
                (last * ratio + acc_sum) / (1.0 - ratio)
            } else {
                f64::INFINITY
            };
        }
        match fixed {
            Some(d) if depth >= d => break,
            Some(_) => {}
            None => {
                let scale = rb1.sup_norm().max(rb2.sup_norm()).max(1.0);
                if tail < cfg.tol && last <= cfg.tol * scale {
                    break;
                }
                if ratio < 1.0 {
                    let floor = acc_sum / (1.0 - ratio);
                    if floor >= cfg.tol && last * ratio / (1.0 - ratio) < 1e-2 * floor {
                        return Err(Error::ToleranceFloor {
                            tol: cfg.tol,
                            floor,
                            epsilon: eps,
                        });
                    }
                }
                if depth >= cfg.max_depth {
                    return Err(Error::DepthExceeded {
                        depth,
                        epsilon: eps,
                        ratio,
                    });
                }
            }
        }
        if last == 0.0 {
            // nothing left to reflect; extra depth adds zeros
            depth += 1;
            sups.push(0.0);
            partial.push(*partial.last().unwrap());
            continue;
        }
        let (a_next, acc_a) = reflect_term(&beta, Sphere::B1, cfg, &mut degree)?;
        let (b_next, acc_b) = reflect_term(&alpha, Sphere::B2, cfg, &mut degree)?;
        alpha = a_next;
        beta = b_next;
        rb1.add_scaled(&alpha, 1.0)?;
        rb2.add_scaled(&beta, 1.0)?;
        acc_sum += acc_a.max(acc_b);
        sups.push(alpha.sup_norm().max(beta.sup_norm()));
        partial.push(partial.last().unwrap() + alpha.value(0.0) + beta.value(0.0));
        depth += 1;
    }

    let rb1 = rb1.with_accuracy(tail);
    let rb2 = rb2.with_accuracy(tail);
    let dx_terms = dx_series(cfg, 0.0)?.1;
    Ok(SeriesSolution {
        config: cfg.clone(),
        depth_used: depth,
        rb1_dy: rb1,
        rb2_dy: rb2,
        dx_series_terms: dx_terms,
        tail_bound: tail,
        partial_sums_at_0: partial,
        term_sups: sups,
        ratio,
        analytic_ratio: analytic,
    })
}

/// `∂_x u` at a gap point from the image-chain product series, with the
/// individual terms.
pub fn dx_series(cfg: &GapConfig, x: f64) -> Result<(f64, Vec<DxTerm>)> {
    let eps = cfg.epsilon;
    let c = 1.0 + 0.5 * eps;
    let mut total = cfg.dx_on_axis(x);
    let mut terms = Vec::new();
    let floor = 1e-6 * cfg.tol;
    for (chain, first) in [('A', Sphere::B2), ('B', Sphere::B1)] {
        let mut y = x;
        let mut factor = 1.0;
        let mut which = first;
        for n in 1..=crate::geometry::MAX_CHAIN_LEN {
            y = match which {
                Sphere::B1 => kelvin_map_r1(y, eps)?,
                Sphere::B2 => kelvin_map_r2(y, eps)?,
            };
            let inv_xi = c - y.abs();
            factor *= inv_xi * inv_xi * inv_xi;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let v = cfg.dx_on_axis(y);
            total += sign * factor * v;
            terms.push(DxTerm {
                chain,
                n,
                factor,
                point: y,
            });
            if factor < floor {
                break;
            }
            which = which.other();
        }
    }
    Ok((total, terms))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Gradient {
    pub gx: f64,
    pub gy: f64,
    pub gz: Option<f64>,
}

/// Gradient of `u` at `(x, 0, 0)` with `|x| ≤ ε/2`.
pub fn gradient_on_segment(sol: &SeriesSolution, x: f64) -> Result<Gradient> {
    let half = 0.5 * sol.config.epsilon;
    if !(x.abs() <= half) {
        return Err(Error::Precondition {
            sphere: "gap",
            x,
            requirement: "|x| <= eps/2".into(),
        });
    }
    let h = sol.config.dy_trace()?;
    let gy = h.value(x) + sol.rb1_dy.value(x) + sol.rb2_dy.value(x);
    let (gx, _) = dx_series(&sol.config, x)?;
    // both built-in fields are even in z
    let gz = match sol.config.field_kind {
        FieldKind::Custom => None,
        _ => Some(0.0),
    };
    Ok(Gradient { gx, gy, gz })
}

/// Evenly spaced points of the closed gap segment.
pub fn segment_grid(eps: f64, count: usize) -> Vec<f64> {
    let h = 0.5 * eps;
    if count < 2 {
        return vec![0.0];
    }
    (0..count)
        .map(|i| -h + eps * i as f64 / (count - 1) as f64)
        .collect()
}

fn require_y(sol: &SeriesSolution) -> Result<()> {
    if sol.config.field_kind != FieldKind::YLinear {
        return Err(Error::Unsupported(
            "P and f are defined for the field H = y".into(),
        ));
    }
    Ok(())
}

/// `P(x) = ∂_y R_{B₁}(x − 1 − ε/2)`, on `[1, 1 + x_max + ε/2]`.
pub fn p_trace(sol: &SeriesSolution) -> Result<AxisTrace> {
    require_y(sol)?;
    Ok(sol.rb1_dy.shifted(1.0 + 0.5 * sol.config.epsilon))
}

/// `f(t) = P(1 + t)`, on `[0, x_max + ε/2]`.
pub fn f_trace(sol: &SeriesSolution) -> Result<AxisTrace> {
    require_y(sol)?;
    Ok(sol.rb1_dy.shifted(0.5 * sol.config.epsilon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn depth_one_at_tenth() {
        let sol = solve_with_depth(&GapConfig::y_linear(0.1), 1).unwrap();
        let g = gradient_on_segment(&sol, 0.0).unwrap();
        assert_relative_eq!(g.gy, 1.0 + 1.0 / 1.05_f64.powi(3), max_relative = 1e-13);
        assert_eq!(g.gz, Some(0.0));
    }

    #[test]
    fn converged_solution_invariants() {
        let sol = solve(&GapConfig::y_linear(0.01)).unwrap();
        assert!(sol.tail_bound < sol.config.tol);
        for x in [-0.005, 0.0, 0.3, 2.0, 4.0] {
            let d = (sol.rb1_dy.value(x) - sol.rb2_dy.value(-x)).abs();
            assert!(d <= 1e-12, "mirror defect {d} at {x}");
        }
        for w in sol.partial_sums_at_0.windows(2) {
            assert!(w[1] >= w[0]);
        }
        let g = gradient_on_segment(&sol, 0.0).unwrap();
        assert_relative_eq!(g.gy, 1.0 + 2.0 * sol.rb1_dy.value(0.0), max_relative = 1e-13);
        assert_relative_eq!(
            sol.rb1_dy.value(-0.005),
            2.1383498837,
            max_relative = 1e-9
        );
        assert!(gradient_on_segment(&sol, 0.01).is_err());
        assert!(sol.ratio <= sol.analytic_ratio);
    }

    #[test]
    fn x_field_has_no_y_gradient() {
        let sol = solve(&GapConfig::x_linear(0.01)).unwrap();
        let g = gradient_on_segment(&sol, 0.001).unwrap();
        assert_eq!(g.gy, 0.0);
        assert_eq!(g.gz, Some(0.0));
        assert!(p_trace(&sol).is_err());
    }

    #[test]
    fn dx_series_depth_two_factors() {
        let e = 0.1;
        let cfg = GapConfig::x_linear(e);
        let (_, terms) = dx_series(&cfg, 0.0).unwrap();
        let c = 1.0 + e / 2.0;
        let r1 = c - 1.0 / c;
        let y2 = 1.0 / (r1 + c) - c;
        assert_relative_eq!(terms[0].point, r1, max_relative = 1e-14);
        assert_relative_eq!(terms[1].point, y2, max_relative = 1e-14);
        let f2 = ((c - r1) * (c + y2)).powi(3);
        assert_relative_eq!(terms[1].factor, f2, max_relative = 1e-14);
    }
}
