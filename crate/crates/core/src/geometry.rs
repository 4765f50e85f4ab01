//! Axis geometry of two unit spheres centred at `∓(1 + ε/2)`.
//!
//! Everything here is closed form and generic over the floating type so the
//! same formulas can be checked in `f32` against `f64`.

use num_traits::Float;

use crate::error::{Error, Result};

/// Hard cap on image-chain lengths, guards runaway loops.
pub const MAX_CHAIN_LEN: usize = 10_000_000;

fn lit<T: Float>(v: f64) -> T {
    T::from(v).expect("literal representable in the scalar type")
}

fn check_eps<T: Float>(eps: T) -> Result<()> {
    let e = eps.to_f64().unwrap_or(f64::NAN);
    if !(e > 0.0 && e < 0.25) {
        return Err(Error::InvalidConfig(format!(
            "epsilon must lie in (0, 1/4), got {e}"
        )));
    }
    Ok(())
}

/// Image of an axis point under inversion in B₁.
pub fn kelvin_map_r1<T: Float>(x: T, eps: T) -> Result<T> {
    let half = eps / lit(2.0);
    if !(x >= -half) {
        return Err(Error::Precondition {
            sphere: "B1",
            x: x.to_f64().unwrap_or(f64::NAN),
            requirement: "x >= -eps/2".into(),
        });
    }
    let c = T::one() + half;
    Ok(T::one() / (x + c) - c)
}

/// Image of an axis point under inversion in B₂.
pub fn kelvin_map_r2<T: Float>(x: T, eps: T) -> Result<T> {
    let half = eps / lit(2.0);
    if !(x <= half) {
        return Err(Error::Precondition {
            sphere: "B2",
            x: x.to_f64().unwrap_or(f64::NAN),
            requirement: "x <= eps/2".into(),
        });
    }
    let c = T::one() + half;
    Ok(c - T::one() / (c - x))
}

/// Fixed points of `x ↦ 2 + ε − 1/x` and the constants of the closed form
/// for the orbit of 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KelvinGeometry<T> {
    pub epsilon: T,
    pub p1: T,
    pub p2: T,
    pub c0: T,
    pub d: T,
}

impl<T: Float> KelvinGeometry<T> {
    pub fn new(eps: T) -> Result<Self> {
        check_eps(eps)?;
        Ok(Self::unchecked(eps))
    }

    /// Same formulas without the range check; also valid at `eps = 0`.
    pub fn unchecked(eps: T) -> Self {
        let half = eps / lit(2.0);
        // s = p2 - 1, kept separate so that 1 - p2 never cancels
        let s = (eps + half * half).sqrt() + half;
        let p2 = T::one() + s;
        let p1 = T::one() / p2;
        let c0 = if s > T::zero() {
            T::one() - eps / s
        } else {
            T::one()
        };
        let d = p2 * p2;
        Self {
            epsilon: eps,
            p1,
            p2,
            c0,
            d,
        }
    }

    /// Closed form `xₙ = p₂ + (2+ε−2p₂)/(c₀dⁿ⁻¹+1)`; `x₁ = 1`.
    pub fn x(&self, n: usize) -> T {
        assert!(n >= 1, "sequence index starts at 1");
        if n == 1 {
            return T::one();
        }
        let e = self.epsilon;
        let s = self.p2 - T::one();
        let num = e - s - s;
        let pow = self.d.powi((n - 1).min(i32::MAX as usize) as i32);
        self.p2 + num / (self.c0 * pow + T::one())
    }

    /// The recursion `xₙ₊₁ = 2 + ε − 1/xₙ`, the reference for the closed form.
    pub fn x_recursive(&self, n: usize) -> T {
        assert!(n >= 1, "sequence index starts at 1");
        let two_e = lit::<T>(2.0) + self.epsilon;
        let mut x = T::one();
        for _ in 1..n {
            x = two_e - T::one() / x;
        }
        x
    }

    /// `oₙ = xₙ − 1 − (n−1)ε`.
    pub fn remainder(&self, n: usize) -> T {
        self.x(n) - T::one() - lit::<T>((n - 1) as f64) * self.epsilon
    }
}

pub fn fixed_points<T: Float>(eps: T) -> Result<KelvinGeometry<T>> {
    KelvinGeometry::new(eps)
}

pub fn x_sequence<T: Float>(geom: &KelvinGeometry<T>, n: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::InvalidConfig("sequence index starts at 1".into()));
    }
    Ok(geom.x(n))
}

/// The two image sequences seen from a point of the gap.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageChains<T> {
    pub a: Vec<T>,
    pub b: Vec<T>,
}

/// `r_{A,2n-1} = (r₂r₁)ⁿ⁻¹r₂(x)`, `r_{A,2n} = −(r₁r₂)ⁿ(x)` and the mirrored
/// chain for B. Both come out positive.
pub fn image_chains<T: Float>(x: T, eps: T, count: usize) -> Result<ImageChains<T>> {
    check_eps(eps)?;
    if count == 0 || count > MAX_CHAIN_LEN {
        return Err(Error::InvalidConfig(format!(
            "chain length {count} outside 1..={MAX_CHAIN_LEN}"
        )));
    }
    let half = eps / lit(2.0);
    if x.abs() > half {
        return Err(Error::Precondition {
            sphere: "gap",
            x: x.to_f64().unwrap_or(f64::NAN),
            requirement: "|x| <= eps/2".into(),
        });
    }
    let mut a = Vec::with_capacity(count);
    let mut b = Vec::with_capacity(count);
    // A: r2 first, then r1, alternating; odd members are inside B2 (positive),
    // even members inside B1 (negated).
    let mut y = x;
    for n in 1..=count {
        y = if n % 2 == 1 {
            kelvin_map_r2(y, eps)?
        } else {
            kelvin_map_r1(y, eps)?
        };
        a.push(if n % 2 == 1 { y } else { -y });
    }
    let mut y = x;
    for n in 1..=count {
        y = if n % 2 == 1 {
            kelvin_map_r1(y, eps)?
        } else {
            kelvin_map_r2(y, eps)?
        };
        b.push(if n % 2 == 1 { -y } else { y });
    }
    Ok(ImageChains { a, b })
}
