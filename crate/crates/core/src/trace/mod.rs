//! Axis traces: scalar functions on an interval of the x-axis stored as
//! Chebyshev series in a mapped variable.
//!
//! Two coordinates are available. `Affine` is the plain variable. `Log`
//! uses `s = ln|x − anchor|` with the anchor outside the domain, which grades
//! resolution geometrically toward the anchor. Reflected traces put the
//! anchor at the accumulation point of the image charges, where every
//! singularity of the trace sits on the line `Im s = π`.

pub mod cheb;
mod reflect;

use std::io::Write;
use std::path::Path;

pub use reflect::{
    reflect_about_sphere, reflect_about_sphere_with, reflect_unit_dx, reflect_unit_dy,
    ReflectOptions, Sphere, TraceKind,
};
pub(crate) use reflect::reflect_local;

use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coordinate {
    Affine,
    Log { anchor: f64 },
}

/// Mapping between x and the series variable s.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Map {
    coord: Coordinate,
    sigma: f64,
}

impl Map {
    fn new(coord: Coordinate, a: f64, b: f64) -> Result<Self> {
        match coord {
            Coordinate::Affine => Ok(Self { coord, sigma: 1.0 }),
            Coordinate::Log { anchor } => {
                let sigma = if a > anchor {
                    1.0
                } else if b < anchor {
                    -1.0
                } else {
                    return Err(Error::InvalidConfig(format!(
                        "log anchor {anchor} lies inside [{a}, {b}]"
                    )));
                };
                Ok(Self { coord, sigma })
            }
        }
    }

    fn s(&self, x: f64) -> f64 {
        match self.coord {
            Coordinate::Affine => x,
            Coordinate::Log { anchor } => (self.sigma * (x - anchor)).ln(),
        }
    }

    fn x(&self, s: f64) -> f64 {
        match self.coord {
            Coordinate::Affine => s,
            Coordinate::Log { anchor } => anchor + self.sigma * s.exp(),
        }
    }

    fn dxds(&self, s: f64) -> f64 {
        match self.coord {
            Coordinate::Affine => 1.0,
            Coordinate::Log { .. } => self.sigma * s.exp(),
        }
    }

    fn s_range(&self, a: f64, b: f64) -> (f64, f64) {
        let (sa, sb) = (self.s(a), self.s(b));
        (sa.min(sb), sa.max(sb))
    }
}

/// One Chebyshev series on `[lo, hi]` of the mapped variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    lo: f64,
    hi: f64,
    coeffs: Vec<f64>,
}

impl Piece {
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Bounds in the mapped variable.
    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    fn t(&self, s: f64) -> f64 {
        ((2.0 * s - self.lo - self.hi) / (self.hi - self.lo)).clamp(-1.0, 1.0)
    }

    fn s_at(&self, t: f64) -> f64 {
        0.5 * (self.lo + self.hi) + 0.5 * (self.hi - self.lo) * t
    }
}

/// A fixed sampling plan: coordinate, breakpoints in the mapped variable and
/// per-piece degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    a: f64,
    b: f64,
    coord: Coordinate,
    breaks: Vec<f64>,
    degree: usize,
}

impl Layout {
    pub fn single(a: f64, b: f64, coord: Coordinate, degree: usize) -> Result<Self> {
        let map = Map::new(coord, a, b)?;
        let (lo, hi) = map.s_range(a, b);
        Ok(Self {
            a,
            b,
            coord,
            breaks: vec![lo, hi],
            degree: degree.max(1),
        })
    }

    pub fn with_degree(&self, degree: usize) -> Self {
        Self {
            degree: degree.max(1),
            ..self.clone()
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }
}

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub coord: Coordinate,
    /// Absolute target; a roundoff floor relative to the local scale is
    /// applied on top.
    pub accuracy: f64,
    pub max_degree: usize,
    pub max_depth: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            coord: Coordinate::Affine,
            accuracy: 1e-13,
            max_degree: 128,
            max_depth: 30,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxisTrace {
    a: f64,
    b: f64,
    map: Map,
    pieces: Vec<Piece>,
    accuracy: f64,
}

struct Sampled {
    coeffs: Vec<f64>,
    err: f64,
    floor: f64,
}

fn sample_piece(map: &Map, lo: f64, hi: f64, n: usize, f: &dyn Fn(f64) -> f64) -> Sampled {
    let piece = Piece {
        lo,
        hi,
        coeffs: Vec::new(),
    };
    let vals: Vec<f64> = cheb::lobatto(n)
        .into_iter()
        .map(|t| f(map.x(piece.s_at(t))))
        .collect();
    let coeffs = cheb::coeffs_from_lobatto(&vals);
    let mut probe = 0.0_f64;
    for t in cheb::midpoints(n) {
        let v = f(map.x(piece.s_at(t)));
        probe = probe.max((v - cheb::clenshaw(&coeffs, t)).abs());
    }
    let scale = cheb::abs_sum(&coeffs);
    let floor = 4.0 * EPS * scale;
    let err = probe.max(cheb::tail(&coeffs)) + floor;
    Sampled { coeffs, err, floor }
}

/// Drop trailing coefficients whose total stays below `budget`.
fn chop(c: &mut Vec<f64>, budget: f64) -> f64 {
    let mut dropped = 0.0;
    while c.len() > 1 {
        let last = c[c.len() - 1].abs();
        if dropped + last > budget {
            break;
        }
        dropped += last;
        c.pop();
    }
    dropped
}

impl AxisTrace {
    /// Adaptive construction in the plain variable.
    pub fn build(f: impl Fn(f64) -> f64, a: f64, b: f64, accuracy: f64) -> Result<Self> {
        Self::build_with(
            f,
            a,
            b,
            &BuildOptions {
                accuracy,
                ..Default::default()
            },
        )
    }

    /// Adaptive construction: raise the degree, then bisect.
    pub fn build_with(f: impl Fn(f64) -> f64, a: f64, b: f64, opts: &BuildOptions) -> Result<Self> {
        check_interval(a, b)?;
        let map = Map::new(opts.coord, a, b)?;
        let (lo, hi) = map.s_range(a, b);
        Self::build_from_breaks(&f, a, b, map, &[lo, hi], opts)
    }

    fn build_from_breaks(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        map: Map,
        breaks: &[f64],
        opts: &BuildOptions,
    ) -> Result<Self> {
        let mut degrees = vec![16usize];
        while *degrees.last().unwrap() < opts.max_degree {
            let next = (degrees.last().unwrap() * 2).min(opts.max_degree);
            degrees.push(next);
        }
        let mut done: Vec<Piece> = Vec::new();
        let mut accuracy = 0.0_f64;
        let mut stack: Vec<(f64, f64, usize)> =
            breaks.windows(2).rev().map(|w| (w[0], w[1], 0)).collect();
        while let Some((lo, hi, depth)) = stack.pop() {
            let mut accepted = None;
            let mut worst = f64::INFINITY;
            for &n in &degrees {
                let s = sample_piece(&map, lo, hi, n, f);
                if !s.err.is_finite() {
                    break;
                }
                let target = opts.accuracy.max(16.0 * s.floor);
                worst = s.err;
                if s.err <= target {
                    accepted = Some((s, target));
                    break;
                }
            }
            match accepted {
                Some((mut s, target)) => {
                    let dropped = chop(&mut s.coeffs, 0.1 * (target - s.err).max(0.0));
                    accuracy = accuracy.max(s.err + dropped);
                    done.push(Piece {
                        lo,
                        hi,
                        coeffs: s.coeffs,
                    });
                }
                None => {
                    if depth >= opts.max_depth {
                        let (x0, x1) = (map.x(lo), map.x(hi));
                        return Err(Error::NotConverged {
                            lo: x0.min(x1),
                            hi: x0.max(x1),
                            error: worst,
                        });
                    }
                    let mid = 0.5 * (lo + hi);
                    stack.push((mid, hi, depth + 1));
                    stack.push((lo, mid, depth + 1));
                }
            }
        }
        Ok(Self {
            a,
            b,
            map,
            pieces: done,
            accuracy,
        })
    }

    /// Sample on a fixed layout; the accuracy is measured, not enforced.
    pub fn on_layout(f: impl Fn(f64) -> f64, layout: &Layout) -> Result<Self> {
        let map = Map::new(layout.coord, layout.a, layout.b)?;
        let mut pieces = Vec::with_capacity(layout.breaks.len() - 1);
        let mut accuracy = 0.0_f64;
        for w in layout.breaks.windows(2) {
            let s = sample_piece(&map, w[0], w[1], layout.degree, &f);
            accuracy = accuracy.max(s.err);
            pieces.push(Piece {
                lo: w[0],
                hi: w[1],
                coeffs: s.coeffs,
            });
        }
        if !accuracy.is_finite() {
            return Err(Error::NotConverged {
                lo: layout.a,
                hi: layout.b,
                error: accuracy,
            });
        }
        Ok(Self {
            a: layout.a,
            b: layout.b,
            map,
            pieces,
            accuracy,
        })
    }

    pub fn constant(value: f64, a: f64, b: f64) -> Result<Self> {
        check_interval(a, b)?;
        Ok(Self {
            a,
            b,
            map: Map::new(Coordinate::Affine, a, b)?,
            pieces: vec![Piece {
                lo: a,
                hi: b,
                coeffs: vec![value],
            }],
            accuracy: 0.0,
        })
    }

    pub fn layout(&self) -> Layout {
        let mut breaks: Vec<f64> = self.pieces.iter().map(|p| p.lo).collect();
        breaks.push(self.pieces.last().map(|p| p.hi).unwrap_or(self.a));
        Layout {
            a: self.a,
            b: self.b,
            coord: self.map.coord,
            breaks,
            degree: self.degree(),
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn coordinate(&self) -> Coordinate {
        self.map.coord
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn accuracy(&self) -> f64 {
        self.accuracy
    }

    pub fn with_accuracy(mut self, accuracy: f64) -> Self {
        self.accuracy = accuracy;
        self
    }

    /// Largest number of coefficients minus one over all pieces.
    pub fn degree(&self) -> usize {
        self.pieces
            .iter()
            .map(|p| p.coeffs.len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    fn slack(&self) -> f64 {
        1e-12 * (1.0 + self.a.abs().max(self.b.abs()))
    }

    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        lo >= self.a - self.slack() && hi <= self.b + self.slack()
    }

    fn locate(&self, x: f64) -> (&Piece, f64) {
        let s = self.map.s(x.clamp(self.a, self.b));
        let i = self
            .pieces
            .partition_point(|p| p.hi < s)
            .min(self.pieces.len() - 1);
        let p = &self.pieces[i];
        (p, s)
    }

    /// Value at `x`, clamped to the domain. Callers are responsible for
    /// staying inside it.
    pub fn value(&self, x: f64) -> f64 {
        debug_assert!(
            self.covers(x, x),
            "x = {x} outside [{}, {}]",
            self.a,
            self.b
        );
        let (p, s) = self.locate(x);
        cheb::clenshaw(&p.coeffs, p.t(s))
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !self.covers(x, x) || x.is_nan() {
            return Err(Error::OutOfDomain {
                x,
                lo: self.a,
                hi: self.b,
            });
        }
        Ok(self.value(x))
    }

    /// Largest absolute value over the interpolation nodes.
    pub fn sup_norm(&self) -> f64 {
        let mut m = 0.0_f64;
        for p in &self.pieces {
            let n = p.coeffs.len().max(2) - 1;
            for t in cheb::lobatto(n) {
                m = m.max(cheb::clenshaw(&p.coeffs, t).abs());
            }
        }
        m
    }

    /// Exact k-th derivative of the stored representation at x.
    fn derivative_value(&self, ders: &[Vec<Vec<f64>>], k: usize, x: f64) -> f64 {
        let s = self.map.s(x.clamp(self.a, self.b));
        let i = self
            .pieces
            .partition_point(|p| p.hi < s)
            .min(self.pieces.len() - 1);
        let p = &self.pieces[i];
        let t = p.t(s);
        match self.map.coord {
            Coordinate::Affine => cheb::clenshaw(&ders[i][k], t),
            Coordinate::Log { .. } => {
                // d^k/dx^k = (σ e^{-s})^k · D(D-1)…(D-k+1)
                const STIRLING: [[f64; 5]; 5] = [
                    [1.0, 0.0, 0.0, 0.0, 0.0],
                    [0.0, 1.0, 0.0, 0.0, 0.0],
                    [0.0, -1.0, 1.0, 0.0, 0.0],
                    [0.0, 2.0, -3.0, 1.0, 0.0],
                    [0.0, -6.0, 11.0, -6.0, 1.0],
                ];
                let mut acc = 0.0;
                for j in 1..=k {
                    acc += STIRLING[k][j] * cheb::clenshaw(&ders[i][j], t);
                }
                acc * (self.map.sigma * (-s).exp()).powi(k as i32)
            }
        }
    }

    /// Series derivatives in the mapped variable, per piece, orders 0..=k.
    fn mapped_derivatives(&self, k: usize) -> Vec<Vec<Vec<f64>>> {
        self.pieces
            .iter()
            .map(|p| {
                let scale = 2.0 / (p.hi - p.lo);
                let mut out = vec![p.coeffs.clone()];
                for _ in 0..k {
                    let d: Vec<f64> = cheb::derivative(out.last().unwrap())
                        .into_iter()
                        .map(|v| v * scale)
                        .collect();
                    out.push(d);
                }
                out
            })
            .collect()
    }

    /// k-th derivative (k ≤ 4). The stated accuracy includes a Markov-type
    /// amplification of the input accuracy and is pessimistic.
    pub fn derivative(&self, k: usize) -> Result<Self> {
        if k > 4 {
            return Err(Error::DerivativeOrder(k));
        }
        if k == 0 {
            return Ok(self.clone());
        }
        let ders = self.mapped_derivatives(k);
        let mut amplification = 0.0_f64;
        for p in &self.pieces {
            let n = p.coeffs.len().max(2) as f64;
            let mut a = 2.0 * n * n / (p.hi - p.lo);
            if let Coordinate::Log { .. } = self.map.coord {
                let xlo = self.map.x(p.lo);
                let xhi = self.map.x(p.hi);
                let near = match self.map.coord {
                    Coordinate::Log { anchor } => (xlo - anchor).abs().min((xhi - anchor).abs()),
                    Coordinate::Affine => 1.0,
                };
                a /= near;
            }
            amplification = amplification.max(a);
        }
        // roundoff of evaluating the differentiated series; asking for less
        // than this makes the rebuild bisect forever
        let mut noise = 0.0_f64;
        for (p, d) in self.pieces.iter().zip(&ders) {
            let n = match self.map.coord {
                Coordinate::Affine => cheb::abs_sum(&d[k]),
                Coordinate::Log { anchor } => {
                    let near = (self.map.x(p.lo) - anchor)
                        .abs()
                        .min((self.map.x(p.hi) - anchor).abs());
                    let sum: f64 = (1..=k).map(|j| cheb::abs_sum(&d[j])).sum();
                    sum * near.powi(-(k as i32))
                }
            };
            noise = noise.max(n);
        }
        let opts = BuildOptions {
            coord: self.map.coord,
            accuracy: 64.0 * EPS * noise,
            max_degree: 256,
            max_depth: 30,
        };
        let breaks = self.layout().breaks;
        let f = |x: f64| self.derivative_value(&ders, k, x);
        // the estimate above misses roundoff in the coordinate map itself;
        // if the rebuild stalls, accept the noise level it stalled at
        let built = match Self::build_from_breaks(&f, self.a, self.b, self.map, &breaks, &opts) {
            Err(Error::NotConverged { error, .. }) if error.is_finite() => {
                let retry = BuildOptions {
                    accuracy: 4.0 * error,
                    ..opts
                };
                Self::build_from_breaks(&f, self.a, self.b, self.map, &breaks, &retry)?
            }
            r => r?,
        };
        let propagated = self.accuracy * amplification.powi(k as i32);
        let acc = built.accuracy + propagated;
        Ok(built.with_accuracy(acc))
    }

    /// `F(x) = ∫_a^x w(y)·g(y) dy` on the same coordinate and breaks.
    pub fn antiderivative_weighted(&self, w: impl Fn(f64) -> f64) -> Self {
        let mut pieces = Vec::with_capacity(self.pieces.len());
        let mut running = 0.0;
        let mut tail_err = 0.0;
        let mut wmax = 0.0_f64;
        for p in &self.pieces {
            let m = (2 * p.coeffs.len()).max(16);
            let vals: Vec<f64> = cheb::lobatto(m)
                .into_iter()
                .map(|t| {
                    let s = p.s_at(t);
                    let x = self.map.x(s);
                    let wx = w(x);
                    wmax = wmax.max(wx.abs());
                    wx * cheb::clenshaw(&p.coeffs, t) * self.map.dxds(s)
                })
                .collect();
            let c = cheb::coeffs_from_lobatto(&vals);
            let half = 0.5 * (p.hi - p.lo);
            tail_err += (cheb::tail(&c) + 4.0 * EPS * cheb::abs_sum(&c)) * 2.0 * half;
            let mut ic: Vec<f64> = cheb::integral(&c).into_iter().map(|v| v * half).collect();
            ic[0] += running;
            running = cheb::clenshaw(&ic, 1.0);
            pieces.push(Piece {
                lo: p.lo,
                hi: p.hi,
                coeffs: ic,
            });
        }
        let mut out = Self {
            a: self.a,
            b: self.b,
            map: self.map,
            pieces,
            accuracy: 0.0,
        };
        let base = out.value(self.a);
        for p in &mut out.pieces {
            p.coeffs[0] -= base;
        }
        out.accuracy = self.accuracy * wmax * (self.b - self.a) + 2.0 * tail_err;
        out
    }

    pub fn antiderivative(&self) -> Self {
        self.antiderivative_weighted(|_| 1.0)
    }

    /// Antiderivative of `(y − center)·g(y)`; differences of it are the
    /// radial moments used by the reflection formulas.
    pub fn moment_antiderivative(&self, center: f64) -> Self {
        self.antiderivative_weighted(move |y| y - center)
    }

    /// `∫₀ᵘ s·g(s) ds`.
    pub fn moment_integral(&self, upper: f64) -> Result<f64> {
        let (lo, hi) = (upper.min(0.0), upper.max(0.0));
        if !self.covers(lo, hi) {
            return Err(Error::DomainMismatch { lo, hi });
        }
        let f = self.moment_antiderivative(0.0);
        Ok(f.value(upper) - f.value(0.0))
    }

    pub fn integral(&self, lo: f64, hi: f64) -> Result<f64> {
        if !self.covers(lo.min(hi), lo.max(hi)) {
            return Err(Error::DomainMismatch {
                lo: lo.min(hi),
                hi: lo.max(hi),
            });
        }
        let f = self.antiderivative();
        Ok(f.value(hi) - f.value(lo))
    }

    /// `x ↦ g(x − offset)`, defined on the domain moved by `offset`.
    pub fn shifted(&self, offset: f64) -> Self {
        let mut out = self.clone();
        out.a += offset;
        out.b += offset;
        match self.map.coord {
            Coordinate::Affine => {
                for p in &mut out.pieces {
                    p.lo += offset;
                    p.hi += offset;
                }
            }
            Coordinate::Log { anchor } => {
                out.map.coord = Coordinate::Log {
                    anchor: anchor + offset,
                };
            }
        }
        out
    }

    /// `x ↦ g(−x)`.
    pub fn mirrored(&self) -> Self {
        let mut out = self.clone();
        out.a = -self.b;
        out.b = -self.a;
        match self.map.coord {
            Coordinate::Affine => {
                out.pieces = self
                    .pieces
                    .iter()
                    .rev()
                    .map(|p| Piece {
                        lo: -p.hi,
                        hi: -p.lo,
                        coeffs: p
                            .coeffs
                            .iter()
                            .enumerate()
                            .map(|(k, c)| if k % 2 == 0 { *c } else { -*c })
                            .collect(),
                    })
                    .collect();
            }
            Coordinate::Log { anchor } => {
                out.map = Map {
                    coord: Coordinate::Log { anchor: -anchor },
                    sigma: -self.map.sigma,
                };
            }
        }
        out
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let mut out = self.clone();
        for p in &mut out.pieces {
            for c in &mut p.coeffs {
                *c *= alpha;
            }
        }
        out.accuracy *= alpha.abs();
        out
    }

    /// `x ↦ g(x) + c`.
    pub fn plus_constant(&self, c: f64) -> Self {
        let mut out = self.clone();
        for p in &mut out.pieces {
            p.coeffs[0] += c;
        }
        out
    }

    fn same_layout(&self, other: &Self) -> bool {
        let close = |u: f64, v: f64| (u - v).abs() <= 1e-13 * (1.0 + u.abs().max(v.abs()));
        let coord_ok = match (self.map.coord, other.map.coord) {
            (Coordinate::Affine, Coordinate::Affine) => true,
            (Coordinate::Log { anchor: p }, Coordinate::Log { anchor: q }) => {
                close(p, q) && self.map.sigma == other.map.sigma
            }
            _ => false,
        };
        coord_ok
            && close(self.a, other.a)
            && close(self.b, other.b)
            && self.pieces.len() == other.pieces.len()
            && self
                .pieces
                .iter()
                .zip(&other.pieces)
                .all(|(p, q)| close(p.lo, q.lo) && close(p.hi, q.hi))
    }

    /// `alpha·self + beta·other`; both must share one layout.
    pub fn linear_combination(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
        if !self.same_layout(other) {
            return Err(Error::LayoutMismatch);
        }
        let mut out = self.scaled(alpha);
        out.add_scaled_unchecked(other, beta);
        Ok(out)
    }

    /// In-place `self += beta·other`.
    pub fn add_scaled(&mut self, other: &Self, beta: f64) -> Result<()> {
        if !self.same_layout(other) {
            return Err(Error::LayoutMismatch);
        }
        self.add_scaled_unchecked(other, beta);
        Ok(())
    }

    fn add_scaled_unchecked(&mut self, other: &Self, beta: f64) {
        for (p, q) in self.pieces.iter_mut().zip(&other.pieces) {
            if p.coeffs.len() < q.coeffs.len() {
                p.coeffs.resize(q.coeffs.len(), 0.0);
            }
            for (c, d) in p.coeffs.iter_mut().zip(&q.coeffs) {
                *c += beta * d;
            }
        }
        self.accuracy += beta.abs() * other.accuracy;
    }

    /// Writes `x,value` rows for the given grid.
    pub fn write_csv<W: Write>(&self, out: W, grid: &[f64]) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "value"])?;
        for &x in grid {
            let v = self.evaluate(x)?;
            w.write_record([format!("{x:.17e}"), format!("{v:.17e}")])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn dump_csv(&self, path: &Path, grid: &[f64]) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(file, grid)
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidConfig(format!("bad interval [{a}, {b}]")));
    }
    Ok(())
}
