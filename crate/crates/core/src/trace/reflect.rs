//! Reflection of axis traces across a unit sphere.
//!
//! For a sphere centred at `c` and a gap-side orientation `σ`, a point at
//! local radius `ξ = σ(x − c) ≥ 1` sees the image point `c + σ/ξ`. The
//! y-trace of the reflected function is `g(y)/ξ³ − m(1/ξ)/ξ`, with `m` the
//! radial moment of `g` from the centre; the x-trace is `−g(y)/ξ³`.

use super::{AxisTrace, BuildOptions, Coordinate, Layout};
use crate::error::{Error, Result};
use crate::geometry::KelvinGeometry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sphere {
    B1,
    B2,
}

impl Sphere {
    pub fn center(self, eps: f64) -> f64 {
        match self {
            Sphere::B1 => -1.0 - 0.5 * eps,
            Sphere::B2 => 1.0 + 0.5 * eps,
        }
    }

    /// +1 when the gap lies in the +x direction from the centre.
    pub fn orientation(self) -> f64 {
        match self {
            Sphere::B1 => 1.0,
            Sphere::B2 => -1.0,
        }
    }

    pub fn other(self) -> Sphere {
        match self {
            Sphere::B1 => Sphere::B2,
            Sphere::B2 => Sphere::B1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sphere::B1 => "B1",
            Sphere::B2 => "B2",
        }
    }
}

/// Which directional derivative a trace carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceKind {
    Dy,
    Dx,
}

#[derive(Debug, Clone)]
pub struct ReflectOptions {
    /// Extent of the output on the far side, measured from the origin.
    pub x_max: f64,
    pub accuracy: f64,
    /// Sample on a single piece of this degree instead of adapting.
    pub degree: Option<usize>,
}

impl Default for ReflectOptions {
    fn default() -> Self {
        Self {
            x_max: 4.0,
            accuracy: 1e-13,
            degree: None,
        }
    }
}

fn missing(g: &AxisTrace, lo: f64, hi: f64) -> Error {
    let (a, b) = g.domain();
    if lo < a {
        Error::DomainMismatch {
            lo,
            hi: a.min(hi),
        }
    } else {
        Error::DomainMismatch {
            lo: b.max(lo),
            hi,
        }
    }
}

/// Core reflection. Returns the trace (accuracy including what is inherited
/// from `g`) and the accuracy of the sampling step alone.
pub(crate) fn reflect_general(
    g: &AxisTrace,
    center: f64,
    sigma: f64,
    kind: TraceKind,
    out: (f64, f64),
    coord: Coordinate,
    opts: &ReflectOptions,
) -> Result<(AxisTrace, f64)> {
    let (clo, chi) = if sigma > 0.0 {
        (center, center + 1.0)
    } else {
        (center - 1.0, center)
    };
    if !g.covers(clo, chi) {
        return Err(missing(g, clo, chi));
    }
    let moment = match kind {
        TraceKind::Dy => Some(g.moment_antiderivative(center)),
        TraceKind::Dx => None,
    };
    let base = moment.as_ref().map(|m| m.value(center)).unwrap_or(0.0);
    let f = |x: f64| {
        let xi = sigma * (x - center);
        let u = 1.0 / xi;
        let y = center + sigma * u;
        let u3 = u * u * u;
        match &moment {
            Some(m) => g.value(y) * u3 - (m.value(y) - base) * u,
            None => -g.value(y) * u3,
        }
    };
    let trace = match opts.degree {
        Some(n) => AxisTrace::on_layout(f, &Layout::single(out.0, out.1, coord, n)?)?,
        None => AxisTrace::build_with(
            f,
            out.0,
            out.1,
            &BuildOptions {
                coord,
                accuracy: opts.accuracy,
                ..Default::default()
            },
        )?,
    };
    let local = trace.accuracy();
    let inherited = g.accuracy() + moment.as_ref().map(|m| m.accuracy()).unwrap_or(0.0);
    Ok((trace.with_accuracy(local + inherited), local))
}

fn unit(g: &AxisTrace, kind: TraceKind, opts: &ReflectOptions) -> Result<AxisTrace> {
    if !(opts.x_max > 1.0) {
        return Err(Error::InvalidConfig("x_max must exceed 1".into()));
    }
    let (t, _) = reflect_general(
        g,
        0.0,
        1.0,
        kind,
        (1.0, opts.x_max),
        Coordinate::Log { anchor: 0.0 },
        opts,
    )?;
    Ok(t)
}

/// Reflection of a y-trace across the unit sphere at the origin; input on
/// `[0, 1]`, output on `[1, x_max]`.
pub fn reflect_unit_dy(g: &AxisTrace) -> Result<AxisTrace> {
    unit(g, TraceKind::Dy, &ReflectOptions::default())
}

/// Reflection of an x-trace across the unit sphere at the origin.
pub fn reflect_unit_dx(g: &AxisTrace) -> Result<AxisTrace> {
    unit(g, TraceKind::Dx, &ReflectOptions::default())
}

pub fn reflect_about_sphere(
    g: &AxisTrace,
    which: Sphere,
    eps: f64,
    kind: TraceKind,
) -> Result<AxisTrace> {
    reflect_about_sphere_with(g, which, eps, kind, &ReflectOptions::default())
}

pub fn reflect_about_sphere_with(
    g: &AxisTrace,
    which: Sphere,
    eps: f64,
    kind: TraceKind,
    opts: &ReflectOptions,
) -> Result<AxisTrace> {
    reflect_local(g, which, eps, kind, opts).map(|(t, _)| t)
}

/// Output domain and log anchor of a reflection across `which`.
pub(crate) fn output_frame(which: Sphere, eps: f64, x_max: f64) -> ((f64, f64), Coordinate) {
    let geom = KelvinGeometry::unchecked(eps);
    let c = which.center(eps);
    let anchor = c + which.orientation() * geom.p1;
    let dom = match which {
        Sphere::B1 => (-0.5 * eps, x_max),
        Sphere::B2 => (-x_max, 0.5 * eps),
    };
    (dom, Coordinate::Log { anchor })
}

pub(crate) fn reflect_local(
    g: &AxisTrace,
    which: Sphere,
    eps: f64,
    kind: TraceKind,
    opts: &ReflectOptions,
) -> Result<(AxisTrace, f64)> {
    KelvinGeometry::new(eps)?;
    if !(opts.x_max > 0.5 * eps) {
        return Err(Error::InvalidConfig("x_max must exceed eps/2".into()));
    }
    let (dom, coord) = output_frame(which, eps, opts.x_max);
    reflect_general(
        g,
        which.center(eps),
        which.orientation(),
        kind,
        dom,
        coord,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn one() -> AxisTrace {
        AxisTrace::constant(1.0, -3.0, 3.0).unwrap()
    }

    #[test]
    fn unit_dy_of_constant() {
        let g = AxisTrace::constant(1.0, 0.0, 1.0).unwrap();
        let r = reflect_unit_dy(&g).unwrap();
        for x in [1.0, 2.0, 3.7] {
            assert_relative_eq!(r.value(x), 0.5 / (x * x * x), max_relative = 1e-13);
        }
        let z = reflect_unit_dy(&AxisTrace::constant(0.0, 0.0, 1.0).unwrap()).unwrap();
        assert_eq!(z.value(2.0), 0.0);
    }

    #[test]
    fn unit_dy_of_identity() {
        let g = AxisTrace::build(|s| s, 0.0, 1.0, 1e-14).unwrap();
        let r = reflect_unit_dy(&g).unwrap();
        assert!((r.value(2.0) - 1.0 / 24.0).abs() <= r.accuracy());
        assert_relative_eq!(r.value(2.0), 1.0 / 24.0, max_relative = 1e-12);
    }

    #[test]
    fn unit_dx() {
        let g = AxisTrace::constant(1.0, 0.0, 1.0).unwrap();
        let r = reflect_unit_dx(&g).unwrap();
        assert_relative_eq!(r.value(1.0), -1.0, epsilon = 1e-14);
        assert_relative_eq!(r.value(2.0), -0.125, epsilon = 1e-14);
    }

    #[test]
    fn requires_the_chord() {
        let g = AxisTrace::constant(1.0, 0.2, 1.0).unwrap();
        match reflect_unit_dy(&g) {
            Err(Error::DomainMismatch { lo, hi }) => {
                assert_eq!((lo, hi), (0.0, 0.2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn linear_field_image_both_spheres() {
        let e = 0.1;
        let r1 = reflect_about_sphere(&one(), Sphere::B1, e, TraceKind::Dy).unwrap();
        assert_relative_eq!(r1.value(0.0), 0.5 / 1.05_f64.powi(3), max_relative = 1e-13);
        let r2 = reflect_about_sphere(&one(), Sphere::B2, e, TraceKind::Dy).unwrap();
        for x in [-3.0, -1.0, 0.0, 0.05] {
            assert_relative_eq!(r2.value(x), 0.5 / (1.05 - x).powi(3), max_relative = 1e-12);
            assert_relative_eq!(r2.value(x), r1.value(-x), max_relative = 1e-12);
        }
    }

    #[test]
    fn dx_at_far_pole() {
        let e = 0.1;
        let r = reflect_about_sphere(&one(), Sphere::B1, e, TraceKind::Dx).unwrap();
        assert_relative_eq!(r.value(e / 2.0), -1.0 / (1.0 + e).powi(3), max_relative = 1e-13);
    }
}
