//! Identities and inequalities satisfied by the trace `P`.

use serde::Serialize;

use super::{dx_series, p_trace, segment_grid, SeriesSolution};
use crate::config::GapConfig;
use crate::error::{Error, Result};
use crate::geometry::KelvinGeometry;
use crate::trace::AxisTrace;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub margin: f64,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, pass: bool, margin: f64) -> Self {
        Self {
            name: name.into(),
            pass,
            margin,
        }
    }
}

pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

/// Evaluates the right-hand side of the functional equation for `P`.
pub struct FunctionalEquation<'a> {
    p: &'a AxisTrace,
    moment: AxisTrace,
    e: f64,
}

impl<'a> FunctionalEquation<'a> {
    pub fn new(p: &'a AxisTrace, eps: f64) -> Result<Self> {
        let e = 2.0 + eps;
        if !p.covers(1.0, e) {
            return Err(Error::DomainMismatch { lo: 1.0, hi: e });
        }
        Ok(Self {
            p,
            moment: p.moment_antiderivative(e),
            e,
        })
    }

    /// `∫₀^{1/x} s·P(2+ε−s) ds`.
    pub fn moment(&self, x: f64) -> f64 {
        let w = self.e - 1.0 / x;
        self.moment.value(w) - self.moment.value(self.e)
    }

    /// `1/(2x³) + P(2+ε−1/x)/x³ − I(x)/x`, valid for every `x ≥ 1`.
    pub fn rhs(&self, x: f64) -> f64 {
        let x3 = x * x * x;
        0.5 / x3 + self.p.value(self.e - 1.0 / x) / x3 - self.moment(x) / x
    }

    pub fn residual(&self, x: f64) -> f64 {
        self.rhs(x) - self.p.value(x)
    }
}

/// Max residual of the functional equation for an arbitrary `P` trace on a
/// grid inside `[1, 2+ε]`.
pub fn fundamental_equation_residual_of(p: &AxisTrace, eps: f64, grid: &[f64]) -> Result<f64> {
    let eq = FunctionalEquation::new(p, eps)?;
    let e = 2.0 + eps;
    let mut worst = 0.0_f64;
    for &x in grid {
        if !(x >= 1.0 && x <= e) {
            return Err(Error::OutOfDomain { x, lo: 1.0, hi: e });
        }
        worst = worst.max(eq.residual(x).abs());
    }
    Ok(worst)
}

pub fn fundamental_equation_residual(sol: &SeriesSolution, grid: &[f64]) -> Result<f64> {
    let p = p_trace(sol)?;
    fundamental_equation_residual_of(&p, sol.config.epsilon, grid)
}

/// `P(x)` for any `x ≥ 1`: read from the trace where it exists, from the
/// functional equation beyond it.
pub fn p_extended(sol: &SeriesSolution, x: f64) -> Result<f64> {
    let p = p_trace(sol)?;
    if x < 1.0 {
        return Err(Error::OutOfDomain {
            x,
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    if p.covers(x, x) {
        return Ok(p.value(x));
    }
    Ok(FunctionalEquation::new(&p, sol.config.epsilon)?.rhs(x))
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub pass: bool,
    /// Smallest `1/(2x²) − I(x)` over the grid.
    pub min_margin: f64,
    pub worst_x: f64,
    /// `∫_ε^1 P(1+s) ds`, bounded by 3.
    pub tail_integral: f64,
    /// `∫_ε^{1/2} P(1+s) ds`, bounded by 1.
    pub half_tail_integral: f64,
}

pub fn moment_inequality_check(sol: &SeriesSolution, grid: &[f64]) -> Result<MomentReport> {
    let eps = sol.config.epsilon;
    let p = p_trace(sol)?;
    let eq = FunctionalEquation::new(&p, eps)?;
    let mut min_margin = f64::INFINITY;
    let mut worst_x = f64::NAN;
    for &x in grid {
        if !(x >= 1.0 && x <= 2.0 + eps) {
            return Err(Error::OutOfDomain {
                x,
                lo: 1.0,
                hi: 2.0 + eps,
            });
        }
        let m = 0.5 / (x * x) - eq.moment(x);
        if m < min_margin {
            min_margin = m;
            worst_x = x;
        }
    }
    let tail_integral = p.integral(1.0 + eps, 2.0)?;
    let half_tail_integral = p.integral(1.0 + eps, 1.5)?;
    Ok(MomentReport {
        pass: min_margin > 0.0 && tail_integral <= 3.0 && half_tail_integral <= 1.0,
        min_margin,
        worst_x,
        tail_integral,
        half_tail_integral,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainIdentity {
    pub n0: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub relative_residual: f64,
    /// `10·tail/P(1)`.
    pub tolerance: f64,
    pub pass: bool,
}

/// `n₀ = ⌊1/(20√ε)⌋`.
pub fn chain_length(eps: f64) -> usize {
    (1.0 / (20.0 * eps.sqrt())).floor() as usize
}

/// Both sides of the telescoped functional equation along `x₁, …, x_{n₀+1}`.
pub fn chain_sides(p: &AxisTrace, eps: f64, n0: usize) -> Result<(f64, f64)> {
    if n0 == 0 {
        return Err(Error::InvalidConfig(
            "chain needs at least one step; eps too large".into(),
        ));
    }
    let geom = KelvinGeometry::new(eps)?;
    let eq = FunctionalEquation::new(p, eps)?;
    let xs: Vec<f64> = (1..=n0 + 1).map(|n| geom.x(n)).collect();
    let q = |n: usize| {
        let x = xs[n - 1];
        0.5 - x * x * eq.moment(x)
    };
    let cube = |n: usize| xs[n - 1].powi(3);
    let lhs = (1..=n0).map(cube).product::<f64>() * p.value(1.0);
    let mut rhs = p.value(xs[n0]) + q(n0);
    for n in 1..n0 {
        let w: f64 = (n + 1..=n0).map(cube).product();
        rhs += w * q(n);
    }
    Ok((lhs, rhs))
}

pub fn chain_identity_check(sol: &SeriesSolution) -> Result<ChainIdentity> {
    let eps = sol.config.epsilon;
    let p = p_trace(sol)?;
    let n0 = chain_length(eps);
    let (lhs, rhs) = chain_sides(&p, eps, n0)?;
    let p1 = p.value(1.0);
    let relative_residual = (lhs - rhs).abs() / lhs.abs();
    let tolerance = 10.0 * sol.tail_bound / p1;
    Ok(ChainIdentity {
        n0,
        lhs,
        rhs,
        relative_residual,
        tolerance,
        pass: relative_residual <= tolerance,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LadderOrder {
    pub order: usize,
    pub pass: bool,
    /// Smallest `(−1)^k P^{(k)}` over the grid, relative to the largest
    /// magnitude on the grid.
    pub margin: f64,
}

/// Grid `1 + t` with `t` log-spaced in `[ε/10, t_max]`.
pub fn ladder_grid(eps: f64, t_max: f64, count: usize) -> Vec<f64> {
    log_grid(0.1 * eps, t_max, count)
        .into_iter()
        .map(|t| 1.0 + t)
        .collect()
}

/// Alternating signs of `P, P′, …, P⁗`. Orders 0–2 must hold strictly; orders
/// 3 and 4 may dip below zero by `slack` relative to their scale.
pub fn sign_ladder(sol: &SeriesSolution, grid: &[f64], slack: f64) -> Result<Vec<LadderOrder>> {
    let p = p_trace(sol)?;
    let mut out = Vec::new();
    for k in 0..=4usize {
        let d = p.derivative(k)?;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let vals: Vec<f64> = grid
            .iter()
            .map(|&x| d.evaluate(x).map(|v| sign * v))
            .collect::<Result<_>>()?;
        let scale = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let margin = min / scale;
        let pass = if k <= 2 { min > 0.0 } else { margin > -slack };
        out.push(LadderOrder {
            order: k,
            pass,
            margin,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaReport {
    pub points: usize,
    pub pass: bool,
    /// Smallest value of the expression relative to its first term.
    pub min_relative: f64,
}

/// `3γ√ε·P(1+γ√ε−γ²ε) + ((γ²−1)ε − γ³ε^{3/2})·P′(1+γ√ε) > 0` for
/// `2 < γ < 1/(10√ε)`. `None` when that range is empty.
pub fn gamma_inequality(sol: &SeriesSolution, count: usize) -> Result<Option<GammaReport>> {
    let eps = sol.config.epsilon;
    let se = eps.sqrt();
    let top = 1.0 / (10.0 * se);
    if top <= 2.0 {
        return Ok(None);
    }
    let p = p_trace(sol)?;
    let dp = p.derivative(1)?;
    let mut min_relative = f64::INFINITY;
    for i in 0..count {
        let g = 2.0 * (top / 2.0).powf((i as f64 + 0.5) / count as f64);
        let first = 3.0 * g * se * p.evaluate(1.0 + g * se - g * g * eps)?;
        let second = ((g * g - 1.0) * eps - g.powi(3) * eps * se) * dp.evaluate(1.0 + g * se)?;
        min_relative = min_relative.min((first + second) / first);
    }
    Ok(Some(GammaReport {
        points: count,
        pass: min_relative > 0.0,
        min_relative,
    }))
}

/// `K_n = max |(x−1)ⁿ P^{(n−1)}(x)| / ((x−1)·P(1+(x−1)/2))` over `(1, 1.3]`,
/// n = 1..=4.
pub fn derivative_ratio_constants(sol: &SeriesSolution, count: usize) -> Result<[f64; 4]> {
    let eps = sol.config.epsilon;
    let p = p_trace(sol)?;
    let mut k = [0.0; 4];
    let ts = log_grid(0.1 * eps, 0.3, count);
    for (n, slot) in k.iter_mut().enumerate() {
        let d = p.derivative(n)?;
        for &t in &ts {
            let num = (t.powi(n as i32 + 1) * d.evaluate(1.0 + t)?).abs();
            let den = t * p.evaluate(1.0 + 0.5 * t)?;
            *slot = f64::max(*slot, num / den);
        }
    }
    Ok(k)
}

#[derive(Debug, Clone, Serialize)]
pub struct DxBoundedReport {
    pub epsilons: Vec<f64>,
    /// Max of `|∂_x u|` over the segment, per ε.
    pub maxima: Vec<f64>,
    /// Largest over smallest maximum.
    pub ratio: f64,
    /// `(largest − smallest)/largest`.
    pub variation: f64,
    pub pass: bool,
}

pub fn dx_segment_max(cfg: &GapConfig, points: usize) -> Result<f64> {
    cfg.validate()?;
    let mut m = 0.0_f64;
    for x in segment_grid(cfg.epsilon, points) {
        m = m.max(dx_series(cfg, x)?.0.abs());
    }
    Ok(m)
}

/// Compares `max |∂_x u|` on the segment across configurations that share
/// the background field.
pub fn dx_bounded_check(configs: &[GapConfig]) -> Result<DxBoundedReport> {
    if configs.is_empty() {
        return Err(Error::InvalidConfig("no configurations".into()));
    }
    let kind = configs[0].field_kind;
    if configs.iter().any(|c| c.field_kind != kind) {
        return Err(Error::InvalidConfig(
            "configurations must share the background field".into(),
        ));
    }
    let maxima: Vec<f64> = configs
        .iter()
        .map(|c| dx_segment_max(c, 101))
        .collect::<Result<_>>()?;
    let hi = maxima.iter().cloned().fold(0.0_f64, f64::max);
    let lo = maxima.iter().cloned().fold(f64::INFINITY, f64::min);
    let (ratio, variation) = if hi == 0.0 {
        (1.0, 0.0)
    } else {
        (hi / lo, (hi - lo) / hi)
    };
    Ok(DxBoundedReport {
        epsilons: configs.iter().map(|c| c.epsilon).collect(),
        maxima,
        ratio,
        variation,
        pass: ratio <= 1.5,
    })
}
