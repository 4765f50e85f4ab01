//! The second-order equation `(t²−ε)f″ + 5tf′ + 2f = G` satisfied by
//! `f(t) = P(1+t)`, its power-series homogeneous solutions, a particular
//! solution by nested integration and the decomposition of `f`.

use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::solver::checks::log_grid;
use crate::trace::{AxisTrace, BuildOptions, Coordinate};

/// `(2 − √2)/2`, the blow-up exponent.
pub const BLOWUP_EXPONENT: f64 = 0.292_893_218_813_452_5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum HomogeneousKind {
    /// behaves like `t^{−2+√2}`
    Alpha,
    /// behaves like `t^{−2−√2}`
    Beta,
}

/// `f_α` or `f_β` for one ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousSolution<T> {
    pub kind: HomogeneousKind,
    pub epsilon: T,
}

/// Value and first two derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousValue<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
    pub terms_used: usize,
}

fn lit<T: Float>(v: f64) -> T {
    T::from(v).expect("literal representable in the scalar type")
}

impl<T: Float> HomogeneousSolution<T> {
    pub fn new(kind: HomogeneousKind, epsilon: T) -> Self {
        Self { kind, epsilon }
    }

    pub fn exponent(&self) -> T {
        let r2 = lit::<T>(2.0).sqrt();
        match self.kind {
            HomogeneousKind::Alpha => r2 - lit(2.0),
            HomogeneousKind::Beta => -r2 - lit(2.0),
        }
    }

    pub fn lower_limit(&self) -> T {
        lit::<T>(10.0) * self.epsilon.sqrt()
    }

    /// Sums `Σ aₙ εⁿ t^{λ−2n}` with its first two derivatives.
    pub fn eval(&self, t: T) -> Result<HomogeneousValue<T>> {
        if !(t >= self.lower_limit()) || t <= T::zero() {
            return Err(Error::OutOfDomain {
                x: t.to_f64().unwrap_or(f64::NAN),
                lo: self.lower_limit().to_f64().unwrap_or(f64::NAN),
                hi: f64::INFINITY,
            });
        }
        let r2 = lit::<T>(2.0).sqrt();
        let s = match self.kind {
            HomogeneousKind::Alpha => r2,
            HomogeneousKind::Beta => -r2,
        };
        let lambda = self.exponent();
        let z = self.epsilon / (t * t);
        let (mut v, mut d1, mut d2) = (T::zero(), T::zero(), T::zero());
        let mut a = T::one();
        let mut zn = T::one();
        let tiny = lit::<T>(1e-15).max(T::epsilon());
        let mut n = 0usize;
        loop {
            let mu = lambda - lit::<T>(2.0 * n as f64);
            let term = a * zn;
            v = v + term;
            d1 = d1 + term * mu;
            d2 = d2 + term * mu * (mu - T::one());
            n += 1;
            let k = lit::<T>(n as f64);
            let two_k = k + k;
            a = a * (two_k - s) * (two_k + T::one() - s) / (two_k * (two_k - s - s));
            zn = zn * z;
            let next = (a * zn).abs();
            if next <= tiny * v.abs() || n > 400 {
                break;
            }
        }
        let p = t.powf(lambda);
        Ok(HomogeneousValue {
            value: v * p,
            d1: d1 * p / t,
            d2: d2 * p / (t * t),
            terms_used: n,
        })
    }
}

pub fn eval_homogeneous<T: Float>(kind: HomogeneousKind, eps: T, t: T) -> Result<T> {
    HomogeneousSolution::new(kind, eps).eval(t).map(|h| h.value)
}

fn log_opts() -> BuildOptions {
    BuildOptions {
        coord: Coordinate::Log { anchor: 0.0 },
        accuracy: 0.0,
        max_degree: 128,
        max_depth: 30,
    }
}

/// Adaptive log-coordinate build with a target relative to the sampled size.
/// If that fails, retry at `floor`, the error already carried by the inputs;
/// below it the builder only chases piece-boundary kinks.
fn build_rel(f: impl Fn(f64) -> f64, lo: f64, hi: f64, rel: f64, floor: f64) -> Result<AxisTrace> {
    let scale = log_grid(lo, hi, 64)
        .into_iter()
        .fold(0.0_f64, |m, t| m.max(f(t).abs()));
    let strict = rel * scale;
    let opts = |accuracy| BuildOptions {
        accuracy,
        ..log_opts()
    };
    match AxisTrace::build_with(&f, lo, hi, &opts(strict)) {
        Err(Error::NotConverged { .. }) if 2.0 * floor > strict => {
            AxisTrace::build_with(&f, lo, hi, &opts(2.0 * floor))
        }
        r => r,
    }
}

/// Relative noise level accepted for traces assembled from differentiated data.
const DERIVED_REL: f64 = 1e-10;
/// Relative target for the nested integrals.
const INTEGRAL_REL: f64 = 1e-13;

/// Trace of `f_α` or `f_β` on `[lo, hi]`.
pub fn homogeneous_trace(kind: HomogeneousKind, eps: f64, lo: f64, hi: f64) -> Result<AxisTrace> {
    let h = HomogeneousSolution::new(kind, eps);
    if lo < h.lower_limit() {
        return Err(Error::OutOfDomain {
            x: lo,
            lo: h.lower_limit(),
            hi: f64::INFINITY,
        });
    }
    build_rel(|t| h.eval(t).map(|v| v.value).unwrap_or(f64::NAN), lo, hi, INTEGRAL_REL, 0.0)
}

/// `(t²−ε)f″ + 5tf′ + 2f` on `[lo, hi]`.
pub fn apply_operator(f: &AxisTrace, eps: f64, lo: f64, hi: f64) -> Result<AxisTrace> {
    if !f.covers(lo, hi) {
        return Err(Error::DomainMismatch { lo, hi });
    }
    let d1 = f.derivative(1)?;
    let d2 = f.derivative(2)?;
    // the terms cancel heavily, so measure against the size of 2f
    let scale = 2.0 * f.value(lo).abs().max(f.value(hi).abs());
    let lf = |t: f64| (t * t - eps) * d2.value(t) + 5.0 * t * d1.value(t) + 2.0 * f.value(t);
    let opts = |accuracy| BuildOptions {
        accuracy,
        ..log_opts()
    };
    match AxisTrace::build_with(lf, lo, hi, &opts(DERIVED_REL * scale)) {
        Err(Error::NotConverged { .. }) => AxisTrace::build_with(lf, lo, hi, &opts(4.0 * f.accuracy())),
        r => r,
    }
}

#[derive(Debug, Clone)]
pub struct GTrace {
    /// `g = (t²−ε)f″ + 5tf′ + 2f + 1/(1+t)³`.
    pub g: AxisTrace,
    /// `max |g(t)| / (t·f(t/2))` on the interval.
    pub relative_size: f64,
}

/// The inhomogeneity `g` of the equation for `f` on `[10√ε, upper]`.
pub fn compute_g(f: &AxisTrace, eps: f64, upper: f64) -> Result<GTrace> {
    let lo = 10.0 * eps.sqrt();
    if !(upper > lo) {
        return Err(Error::InvalidConfig(format!(
            "window [10*sqrt(eps), {upper}] = [{lo}, {upper}] is empty"
        )));
    }
    if !f.covers(0.5 * lo, upper) {
        return Err(Error::DomainMismatch { lo: 0.5 * lo, hi: upper });
    }
    let lf = apply_operator(f, eps, lo, upper)?;
    let g = build_rel(
        |t| lf.value(t) + (1.0 + t).powi(-3),
        lo,
        upper,
        DERIVED_REL,
        lf.accuracy(),
    )?;
    let mut rel = 0.0_f64;
    for t in log_grid(lo, upper, 200) {
        rel = rel.max(g.value(t).abs() / (t * f.value(0.5 * t)));
    }
    Ok(GTrace {
        g,
        relative_size: rel,
    })
}

#[derive(Debug, Clone)]
pub struct ParticularOptions {
    /// Stop once a correction falls below this fraction of the running sum.
    pub correction_tol: f64,
    pub max_corrections: usize,
}

impl Default for ParticularOptions {
    fn default() -> Self {
        Self {
            correction_tol: 1e-10,
            max_corrections: 80,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ParticularSolution {
    pub f_p: AxisTrace,
    pub corrections: usize,
    /// Ratio of successive correction sizes.
    pub ratios: Vec<f64>,
    /// `sup |f_p|`.
    pub m_fit: f64,
    /// `sup |t·f_p′|`.
    pub m_fit_prime: f64,
}

/// `t^{−2−√2} ∫_L^t w^{−1+2√2} ∫_L^w G(s)s^{1−√2} ds dw`, the solution of
/// the Euler part with zero data at `L`.
pub fn euler_inverse(g: &AxisTrace, lower: f64) -> Result<AxisTrace> {
    let (_, upper) = g.domain();
    let r2 = std::f64::consts::SQRT_2;
    let span = upper - lower;
    let q1 = build_rel(
        |s| g.value(s) * s.powf(1.0 - r2),
        lower,
        upper,
        INTEGRAL_REL,
        g.accuracy() * lower.powf(1.0 - r2),
    )?;
    let i1 = q1.antiderivative();
    let q2 = build_rel(
        |w| w.powf(2.0 * r2 - 1.0) * i1.value(w),
        lower,
        upper,
        INTEGRAL_REL,
        q1.accuracy() * span * upper.powf(2.0 * r2 - 1.0),
    )?;
    let i2 = q2.antiderivative();
    build_rel(
        |t| t.powf(-2.0 - r2) * i2.value(t),
        lower,
        upper,
        INTEGRAL_REL,
        q2.accuracy() * span * lower.powf(-2.0 - r2),
    )
}

/// Particular solution of `(t²−ε)f″ + 5tf′ + 2f = G` vanishing with its
/// derivative at `lower`, by iterating the Euler inverse on `ε·f″`.
pub fn build_particular(
    g: &AxisTrace,
    eps: f64,
    lower: f64,
    opts: &ParticularOptions,
) -> Result<ParticularSolution> {
    let min_lower = 10.0 * eps.sqrt();
    if lower < min_lower * (1.0 - 1e-12) {
        return Err(Error::InvalidConfig(format!(
            "lower limit {lower} is below 10*sqrt(eps) = {min_lower}"
        )));
    }
    let (a, upper) = g.domain();
    if a > lower || upper <= lower {
        return Err(Error::DomainMismatch { lo: lower, hi: upper });
    }
    let g = if a < lower {
        build_rel(|t| g.value(t), lower, upper, INTEGRAL_REL, g.accuracy())?
    } else {
        g.clone()
    };
    let mut term = euler_inverse(&g, lower)?;
    let mut total = AxisTrace::on_layout(|t| term.value(t), &term.layout())?;
    let mut prev = term.sup_norm();
    let mut ratios = Vec::new();
    let mut corrections = 0;
    while prev > opts.correction_tol * total.sup_norm() && prev > 0.0 {
        if corrections >= opts.max_corrections {
            return Err(Error::NotContracting {
                ratio: *ratios.last().unwrap_or(&1.0),
            });
        }
        let rhs = term.derivative(2)?.scaled(eps);
        term = euler_inverse(&rhs, lower)?;
        let size = term.sup_norm();
        let ratio = size / prev;
        ratios.push(ratio);
        if ratio >= 0.9 {
            return Err(Error::NotContracting { ratio });
        }
        let t2 = &term;
        let sum = build_rel(
            |t| total.value(t) + t2.value(t),
            lower,
            upper,
            INTEGRAL_REL,
            total.accuracy() + t2.accuracy(),
        )?;
        total = sum;
        prev = size;
        corrections += 1;
    }
    let d1 = total.derivative(1)?;
    let mut m_fit = 0.0_f64;
    let mut m_fit_prime = 0.0_f64;
    for t in log_grid(lower, upper, 400) {
        m_fit = m_fit.max(total.value(t).abs());
        m_fit_prime = m_fit_prime.max((t * d1.value(t)).abs());
    }
    Ok(ParticularSolution {
        f_p: total,
        corrections,
        ratios,
        m_fit,
        m_fit_prime,
    })
}

#[derive(Debug, Clone)]
pub struct FitOptions {
    /// Window `[c1·√ε, c2]`.
    pub c1: f64,
    pub c2: f64,
    /// Lower limit of the nested integrals is `lower_factor·√ε`.
    pub lower_factor: f64,
    pub points: usize,
    pub fit_tol: f64,
    pub max_condition: f64,
    pub particular: ParticularOptions,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            c1: 20.0,
            c2: 0.3,
            lower_factor: 10.0,
            points: 40,
            fit_tol: 1e-6,
            max_condition: 1e8,
            particular: ParticularOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OdeDecomposition {
    pub c_alpha: f64,
    pub c_beta: f64,
    pub f_p: AxisTrace,
    pub window: (f64, f64),
    /// Max fit residual relative to `max |f − f_p|` on the grid.
    pub residual_norm: f64,
    pub m_fit: f64,
    pub m_fit_prime: f64,
    pub condition: f64,
    pub corrections: usize,
}

/// Least squares of `y` against two columns; returns the coefficients and
/// the condition number of the column-normalised system.
pub fn two_column_lsq(a: &[f64], b: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let na = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let nb = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let u: Vec<f64> = a.iter().map(|v| v / na).collect();
    let w: Vec<f64> = b.iter().map(|v| v / nb).collect();
    let c = u.iter().zip(&w).map(|(p, q)| p * q).sum::<f64>();
    let cond = ((1.0 + c.abs()) / (1.0 - c.abs()).max(1e-300)).sqrt();
    // modified Gram-Schmidt on the normalised columns
    let w_perp: Vec<f64> = w.iter().zip(&u).map(|(q, p)| q - c * p).collect();
    let r22 = w_perp.iter().map(|v| v * v).sum::<f64>().sqrt();
    let q2: Vec<f64> = w_perp.iter().map(|v| v / r22).collect();
    let yu = y.iter().zip(&u).map(|(p, q)| p * q).sum::<f64>();
    let yq = y.iter().zip(&q2).map(|(p, q)| p * q).sum::<f64>();
    let x2 = yq / r22;
    let x1 = yu - c * x2;
    (x1 / na, x2 / nb, cond)
}

/// `f = f_p + C_α f_α + C_β f_β` on the window.
pub fn fit_decomposition(f: &AxisTrace, eps: f64, opts: &FitOptions) -> Result<OdeDecomposition> {
    let se = eps.sqrt();
    let (w0, w1) = (opts.c1 * se, opts.c2);
    let lower = opts.lower_factor * se;
    if !(w0 < w1) || lower > w0 || lower < 10.0 * se * (1.0 - 1e-12) {
        return Err(Error::InvalidConfig(format!(
            "empty or invalid fit window [{w0}, {w1}] with lower limit {lower}"
        )));
    }
    if !f.covers(lower, w1) {
        return Err(Error::DomainMismatch { lo: lower, hi: w1 });
    }
    let big_g = apply_operator(f, eps, lower, w1)?;
    let part = build_particular(&big_g, eps, lower, &opts.particular)?;
    let fa = HomogeneousSolution::new(HomogeneousKind::Alpha, eps);
    let fb = HomogeneousSolution::new(HomogeneousKind::Beta, eps);
    let grid = log_grid(w0, w1, opts.points);
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut y = Vec::new();
    for &t in &grid {
        a.push(fa.eval(t)?.value);
        b.push(fb.eval(t)?.value);
        y.push(f.value(t) - part.f_p.value(t));
    }
    let (c_alpha, c_beta, condition) = two_column_lsq(&a, &b, &y);
    if condition > opts.max_condition {
        return Err(Error::IllConditioned { condition });
    }
    let scale = y.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let resid = (0..grid.len())
        .map(|i| (y[i] - c_alpha * a[i] - c_beta * b[i]).abs())
        .fold(0.0_f64, f64::max);
    Ok(OdeDecomposition {
        c_alpha,
        c_beta,
        f_p: part.f_p,
        window: (w0, w1),
        residual_norm: resid / scale,
        m_fit: part.m_fit,
        m_fit_prime: part.m_fit_prime,
        condition,
        corrections: part.corrections,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentFit {
    pub eps_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
}

/// Ordinary least squares of `ln value` on `ln ε`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<ExponentFit> {
    if points.len() < 4 {
        return Err(Error::InvalidConfig("need at least 4 points".into()));
    }
    if points.iter().any(|&(e, v)| !(e > 0.0) || !(v > 0.0)) {
        return Err(Error::InvalidConfig(
            "epsilon and values must be positive".into(),
        ));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|p, q| q.0.total_cmp(&p.0));
    if pts.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::InvalidConfig("repeated epsilon".into()));
    }
    if pts[0].0 / pts[pts.len() - 1].0 < 100.0 * (1.0 - 1e-12) {
        return Err(Error::InvalidConfig("points must span two decades".into()));
    }
    let n = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = (ssr / (n - 2.0) / sxx).sqrt();
    Ok(ExponentFit {
        eps_grid: pts.iter().map(|p| p.0).collect(),
        values: pts.iter().map(|p| p.1).collect(),
        slope,
        intercept,
        stderr,
    })
}

/// `d ln f / d ln t`.
pub fn local_slope(f: &AxisTrace, t: f64) -> Result<f64> {
    let d = f.derivative(1)?;
    Ok(t * d.evaluate(t)? / f.evaluate(t)?)
}

/// `f(√ε)·ε^{(2−√2)/2}`.
pub fn lower_bound_witness(f: &AxisTrace, eps: f64) -> Result<f64> {
    Ok(f.evaluate(eps.sqrt())? * eps.powf(BLOWUP_EXPONENT))
}

/// `∫_{s√ε}^{S} f dt`.
pub fn integral_mass(f: &AxisTrace, eps: f64, s: f64, big_s: f64) -> Result<f64> {
    f.integral(s * eps.sqrt(), big_s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn tangent_limit_is_pure_power() {
        let v = eval_homogeneous(HomogeneousKind::Alpha, 0.0_f64, 1.0).unwrap();
        assert_eq!(v, 1.0);
        let v = eval_homogeneous(HomogeneousKind::Alpha, 0.0_f64, 0.3).unwrap();
        assert_relative_eq!(v, 0.3_f64.powf(-2.0 + 2f64.sqrt()), max_relative = 1e-15);
    }

    #[test]
    fn small_correction() {
        let e = 1e-6_f64;
        let t = 0.1;
        let v = eval_homogeneous(HomogeneousKind::Alpha, e, t).unwrap();
        let r = v / t.powf(-2.0 + 2f64.sqrt());
        assert!((r - 1.0).abs() <= 1e-3);
        assert!(eval_homogeneous(HomogeneousKind::Alpha, e, 1e-3).is_err());
    }

    #[test]
    fn annihilated_pointwise() {
        for kind in [HomogeneousKind::Alpha, HomogeneousKind::Beta] {
            let e = 1e-4;
            let h = HomogeneousSolution::new(kind, e);
            for t in [0.1, 0.15, 0.5, 1.0] {
                let v = h.eval(t).unwrap();
                let r = (t * t - e) * v.d2 + 5.0 * t * v.d1 + 2.0 * v.value;
                assert!(r.abs() <= 1e-12 * v.value.abs(), "{kind:?} {t} {r}");
            }
        }
    }

    #[test]
    fn single_precision_series() {
        let v32 = eval_homogeneous(HomogeneousKind::Beta, 1e-4_f32, 0.2).unwrap();
        let v64 = eval_homogeneous(HomogeneousKind::Beta, 1e-4_f64, 0.2).unwrap();
        assert!(((v32 as f64) - v64).abs() <= 1e-5 * v64);
    }

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = [1e-2, 1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&e: &f64| (e, e.powf(-BLOWUP_EXPONENT)))
            .collect();
        let fit = fit_exponent(&pts).unwrap();
        assert!((fit.slope + BLOWUP_EXPONENT).abs() <= 1e-12);
        assert!(fit_exponent(&pts[..3]).is_err());
        let narrow: Vec<(f64, f64)> = [1e-2, 5e-3, 2e-3, 1.5e-3].iter().map(|&e| (e, 1.0)).collect();
        assert!(fit_exponent(&narrow).is_err());
        let mut bad = pts.clone();
        bad[1].1 = -1.0;
        assert!(fit_exponent(&bad).is_err());
    }

    #[test]
    fn zero_source_gives_zero() {
        let g = AxisTrace::build_with(|_| 0.0, 0.1, 0.3, &log_opts()).unwrap();
        let p = build_particular(&g, 1e-4, 0.1, &ParticularOptions::default()).unwrap();
        assert_eq!(p.m_fit, 0.0);
    }

    #[test]
    fn euler_inverse_of_constant() {
        let l = 0.05;
        let g = AxisTrace::build_with(|_| -1.0, l, 0.3, &log_opts()).unwrap();
        let fp = euler_inverse(&g, l).unwrap();
        let r2 = 2f64.sqrt();
        let exact = |t: f64| {
            -1.0 / (2.0 - r2)
                * t.powf(-2.0 - r2)
                * ((t.powf(2.0 + r2) - l.powf(2.0 + r2)) / (2.0 + r2)
                    - l.powf(2.0 - r2) * (t.powf(2.0 * r2) - l.powf(2.0 * r2)) / (2.0 * r2))
        };
        for t in [0.06, 0.1, 0.2, 0.3] {
            assert_relative_eq!(fp.value(t), exact(t), max_relative = 1e-10);
        }
    }

    #[test]
    fn synthetic_decomposition() {
        let e = 1e-4;
        let (lo, hi) = (0.1, 0.35);
        let src = AxisTrace::build_with(|t| -(1.0 + t).powi(-3), lo, hi, &log_opts()).unwrap();
        let part = build_particular(&src, e, lo, &ParticularOptions::default()).unwrap();
        let fa = HomogeneousSolution::new(HomogeneousKind::Alpha, e);
        let fb = HomogeneousSolution::new(HomogeneousKind::Beta, e);
        let grid = log_grid(0.12, 0.3, 40);
        let a: Vec<f64> = grid.iter().map(|&t| fa.eval(t).unwrap().value).collect();
        let b: Vec<f64> = grid.iter().map(|&t| fb.eval(t).unwrap().value).collect();
        let y: Vec<f64> = (0..grid.len()).map(|i| 2.0 * a[i] + 0.1 * b[i]).collect();
        let (ca, cb, cond) = two_column_lsq(&a, &b, &y);
        assert!((ca - 2.0).abs() <= 1e-10 && (cb - 0.1).abs() <= 1e-10, "{ca} {cb}");
        assert!(cond > 1.0 && cond < 1e8);
        // f_p solves the full equation
        let r = apply_operator(&part.f_p, e, 0.12, 0.3).unwrap();
        for t in [0.15, 0.2, 0.3] {
            assert!((r.value(t) + (1.0 + t).powi(-3)).abs() <= 1e-8, "{t}");
        }
    }
}
