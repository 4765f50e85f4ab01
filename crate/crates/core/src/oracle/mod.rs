//! Slow reference implementations: direct quadrature of the reflection
//! formula, 3D evaluation of the truncated series off the axis, and finite
//! difference derivative checks. Nothing here uses the trace machinery
//! except `fd_cross_check`, which exists to test it.

pub mod quad;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{FieldKind, GapConfig};
use crate::error::{Error, Result};
use crate::trace::{AxisTrace, Coordinate, Sphere};

/// Deepest off-axis evaluation accepted; the cost is `17^depth` per point.
pub const MAX_OFFAXIS_DEPTH: usize = 4;

/// `g(1/x)/x³ − (1/x)∫₀^{1/x} s·g(s) ds` by adaptive quadrature.
pub fn naive_reflect_dy(g: &dyn Fn(f64) -> f64, x: f64) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(Error::OutOfDomain {
            x,
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    let u = 1.0 / x;
    let m = quad::adaptive(&|s| s * g(s), 0.0, u, 1e-300, 1e-14)?;
    Ok(g(u) * u * u * u - u * m)
}

/// Spherical coordinates about the centre of one sphere, polar axis along
/// `+x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OffAxisPoint {
    pub rho: f64,
    pub theta: f64,
    pub phi: f64,
}

impl OffAxisPoint {
    pub fn to_cartesian(&self, center: f64) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [
            center + self.rho * ct,
            self.rho * st * cp,
            self.rho * st * sp,
        ]
    }
}

#[derive(Debug, Clone, Copy)]
struct Geometry3 {
    c1: f64,
    c2: f64,
    kind: FieldKind,
}

impl Geometry3 {
    fn new(cfg: &GapConfig) -> Result<Self> {
        let e = cfg.epsilon;
        if !(e > 0.0 && e.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be positive, got {e}"
            )));
        }
        if cfg.field_kind == FieldKind::Custom {
            return Err(Error::Unsupported(
                "off-axis evaluation needs a field known away from the axis".into(),
            ));
        }
        Ok(Self {
            c1: Sphere::B1.center(e),
            c2: Sphere::B2.center(e),
            kind: cfg.field_kind,
        })
    }

    fn background(&self, p: [f64; 3]) -> f64 {
        match self.kind {
            FieldKind::YLinear => p[1],
            _ => p[0],
        }
    }

    fn center(&self, s: Sphere) -> f64 {
        match s {
            Sphere::B1 => self.c1,
            Sphere::B2 => self.c2,
        }
    }

    /// Term that ends with a reflection across `last` after `level` earlier
    /// reflections alternating back to `H`.
    fn term(&self, last: Sphere, level: usize, p: [f64; 3]) -> f64 {
        let inner = |q: [f64; 3]| {
            if level == 0 {
                self.background(q)
            } else {
                self.term(last.other(), level - 1, q)
            }
        };
        let c = self.center(last);
        let xi = [p[0] - c, p[1], p[2]];
        let rho = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
        let dir = [xi[0] / rho, xi[1] / rho, xi[2] / rho];
        let at = |s: f64| [c + s * dir[0], s * dir[1], s * dir[2]];
        let u = 1.0 / rho;
        let line = quad::gauss_legendre(&|s| inner(at(s)), 0.0, u);
        u * inner(at(u)) - line
    }

    fn u(&self, depth: usize, p: [f64; 3]) -> f64 {
        let mut v = self.background(p);
        for level in 0..depth {
            v += self.term(Sphere::B1, level, p) + self.term(Sphere::B2, level, p);
        }
        v
    }
}

/// The series truncated after `depth` reflection levels, at a 3D point
/// given about the centre of `about`.
pub fn offaxis_term_eval(
    depth: usize,
    point: OffAxisPoint,
    about: Sphere,
    config: &GapConfig,
) -> Result<f64> {
    if depth > MAX_OFFAXIS_DEPTH {
        return Err(Error::InvalidConfig(format!(
            "off-axis depth {depth} exceeds {MAX_OFFAXIS_DEPTH}"
        )));
    }
    if !(point.rho >= 1.0) {
        return Err(Error::OutOfDomain {
            x: point.rho,
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    let g = Geometry3::new(config)?;
    Ok(g.u(depth, point.to_cartesian(g.center(about))))
}

/// Outward normal derivative on the surface of `about` by a one-sided
/// fourth-order difference (every sample stays outside the sphere).
pub fn normal_derivative(
    depth: usize,
    theta: f64,
    phi: f64,
    about: Sphere,
    config: &GapConfig,
) -> Result<f64> {
    const H: f64 = 1e-3;
    let mut f = [0.0; 5];
    for (k, v) in f.iter_mut().enumerate() {
        let point = OffAxisPoint {
            rho: 1.0 + k as f64 * H,
            theta,
            phi,
        };
        *v = offaxis_term_eval(depth, point, about, config)?;
    }
    Ok((-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * H))
}

/// `∂_y` of the truncated series at an axis point, by central differences.
pub fn offaxis_dy_on_axis(depth: usize, x: f64, config: &GapConfig) -> Result<f64> {
    if depth > MAX_OFFAXIS_DEPTH {
        return Err(Error::InvalidConfig(format!(
            "off-axis depth {depth} exceeds {MAX_OFFAXIS_DEPTH}"
        )));
    }
    let g = Geometry3::new(config)?;
    let h = 1e-3;
    let f = |y: f64| g.u(depth, [x, y, 0.0]);
    Ok((f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h))
}

/// `sup |∂_ν R₂(H)|` over the surface of B₁ times `(1+ε)^{-3(depth−1)/2}`:
/// the size of the one term whose partner is missing after truncation.
pub fn analytic_tail_bound(config: &GapConfig, depth: usize) -> Result<f64> {
    let g = Geometry3::new(config)?;
    let e = config.epsilon;
    // R₂ of a linear field is the dipole (1/2)·e·(X−c₂)/|X−c₂|³
    let dir = match g.kind {
        FieldKind::YLinear => [0.0, 1.0, 0.0],
        _ => [1.0, 0.0, 0.0],
    };
    let mut sup = 0.0_f64;
    let n = 400;
    for i in 0..=n {
        let theta = std::f64::consts::PI * i as f64 / n as f64;
        for phi in [0.0, 0.25 * std::f64::consts::PI, 0.5 * std::f64::consts::PI] {
            let nrm = [theta.cos(), theta.sin() * phi.cos(), theta.sin() * phi.sin()];
            let r = [g.c1 + nrm[0] - g.c2, nrm[1], nrm[2]];
            let d2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
            let d = d2.sqrt();
            let er: f64 = (0..3).map(|k| dir[k] * r[k]).sum();
            let mut dn = 0.0;
            for k in 0..3 {
                let grad = 0.5 * (dir[k] / (d2 * d) - 3.0 * er * r[k] / (d2 * d2 * d));
                dn += grad * nrm[k];
            }
            sup = sup.max(dn.abs());
        }
    }
    let q = (1.0 + e).powf(-1.5);
    Ok(sup * q.powi(depth.max(1) as i32 - 1))
}

#[derive(Debug, Clone, Serialize)]
pub struct SurfaceCheck {
    pub depth: usize,
    pub max_residual: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Neumann residual of the truncated series on an `n×n` grid over the
/// surface of B₁, against twice the analytic tail bound.
pub fn neumann_surface_check(config: &GapConfig, depth: usize, n: usize) -> Result<SurfaceCheck> {
    let pts: Vec<(f64, f64)> = (0..n)
        .flat_map(|i| {
            (0..n).map(move |j| {
                let theta = std::f64::consts::PI * (i as f64 + 0.5) / n as f64;
                let phi = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                (theta, phi)
            })
        })
        .collect();
    let vals: Result<Vec<f64>> = pts
        .par_iter()
        .map(|&(t, p)| normal_derivative(depth, t, p, Sphere::B1, config))
        .collect();
    let max_residual = vals?.into_iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let bound = analytic_tail_bound(config, depth)?;
    Ok(SurfaceCheck {
        depth,
        max_residual,
        bound,
        pass: max_residual <= 2.0 * bound,
    })
}

/// `|spectral derivative − finite difference| / |spectral derivative|`.
pub fn fd_cross_check(trace: &AxisTrace, order: usize, x: f64) -> Result<f64> {
    if !(1..=2).contains(&order) {
        return Err(Error::DerivativeOrder(order));
    }
    let (a, b) = trace.domain();
    let reach = match trace.coordinate() {
        Coordinate::Affine => b - a,
        Coordinate::Log { anchor } => (x - anchor).abs(),
    };
    let margin = (x - a).min(b - x);
    let h = (if order == 1 { 1e-3 } else { 1e-2 } * reach).min(0.4 * margin);
    if !(h > 0.0) {
        return Err(Error::OutOfDomain { x, lo: a, hi: b });
    }
    let f = |k: f64| trace.value(x + k * h);
    let fd = match order {
        1 => (f(-2.0) - 8.0 * f(-1.0) + 8.0 * f(1.0) - f(2.0)) / (12.0 * h),
        _ => (-f(-2.0) + 16.0 * f(-1.0) - 30.0 * f(0.0) + 16.0 * f(1.0) - f(2.0)) / (12.0 * h * h),
    };
    let spectral = trace.derivative(order)?.evaluate(x)?;
    Ok((spectral - fd).abs() / spectral.abs().max(f64::MIN_POSITIVE))
}
