use crate::error::{Error, Result};
use crate::trace::AxisTrace;

/// Background harmonic field `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    /// `H = y`
    YLinear,
    /// `H = x`
    XLinear,
    /// Axis traces of `∂_y H` and `∂_x H` supplied by the caller.
    Custom,
}

#[derive(Debug, Clone)]
pub struct GapConfig {
    pub epsilon: f64,
    pub field_kind: FieldKind,
    pub custom_dy_trace: Option<AxisTrace>,
    pub custom_dx_trace: Option<AxisTrace>,
    /// Absolute sup-norm target for the truncated remainder.
    pub tol: f64,
    pub max_depth: usize,
    /// Far end of the reflected traces.
    pub x_max: f64,
    /// Starting Chebyshev degree of each reflected term.
    pub degree: usize,
}

impl GapConfig {
    pub fn new(epsilon: f64, field_kind: FieldKind) -> Self {
        Self {
            epsilon,
            field_kind,
            custom_dy_trace: None,
            custom_dx_trace: None,
            tol: 1e-10,
            max_depth: 200_000,
            x_max: 4.0,
            degree: 64,
        }
    }

    pub fn y_linear(epsilon: f64) -> Self {
        Self::new(epsilon, FieldKind::YLinear)
    }

    pub fn x_linear(epsilon: f64) -> Self {
        Self::new(epsilon, FieldKind::XLinear)
    }

    pub fn custom(epsilon: f64, dy: AxisTrace, dx: AxisTrace) -> Self {
        Self {
            custom_dy_trace: Some(dy),
            custom_dx_trace: Some(dx),
            ..Self::new(epsilon, FieldKind::Custom)
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_depth(mut self, max_depth: usize) -> Self {
        self.max_depth = max_depth;
        self
    }

    /// Axis interval that every reflection reads from: both sphere chords.
    pub fn chord_span(&self) -> (f64, f64) {
        let c = 1.0 + 0.5 * self.epsilon;
        (-c, c)
    }

    pub fn validate(&self) -> Result<()> {
        let e = self.epsilon;
        if !(e > 0.0 && e < 0.25) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must lie in (0, 1/4), got {e}"
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig("tol must be positive".into()));
        }
        if self.max_depth < 1 {
            return Err(Error::InvalidConfig("max_depth must be at least 1".into()));
        }
        if !(self.x_max >= 1.0 + e) {
            return Err(Error::InvalidConfig(
                "x_max must reach past the opposite sphere's centre".into(),
            ));
        }
        if self.degree < 4 {
            return Err(Error::InvalidConfig("degree must be at least 4".into()));
        }
        if self.field_kind == FieldKind::Custom {
            let (lo, hi) = self.chord_span();
            for (name, t) in [("dy", &self.custom_dy_trace), ("dx", &self.custom_dx_trace)] {
                let t = t.as_ref().ok_or_else(|| {
                    Error::InvalidConfig(format!("custom field needs a {name} trace"))
                })?;
                if !t.covers(lo, hi) {
                    return Err(Error::InvalidConfig(format!(
                        "custom {name} trace must cover [{lo}, {hi}]"
                    )));
                }
                let finite = t
                    .pieces()
                    .iter()
                    .all(|p| p.coeffs().iter().all(|c| c.is_finite()));
                if !finite {
                    return Err(Error::InvalidConfig(format!(
                        "custom {name} trace has non-finite coefficients"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Axis trace of `∂_y H` on the chord span.
    pub fn dy_trace(&self) -> Result<AxisTrace> {
        let (lo, hi) = self.chord_span();
        match self.field_kind {
            FieldKind::YLinear => AxisTrace::constant(1.0, lo, hi),
            FieldKind::XLinear => AxisTrace::constant(0.0, lo, hi),
            FieldKind::Custom => self
                .custom_dy_trace
                .clone()
                .ok_or_else(|| Error::InvalidConfig("custom field needs a dy trace".into())),
        }
    }

    /// `∂_x H` on the axis.
    pub fn dx_on_axis(&self, x: f64) -> f64 {
        match self.field_kind {
            FieldKind::YLinear => 0.0,
            FieldKind::XLinear => 1.0,
            FieldKind::Custom => self
                .custom_dx_trace
                .as_ref()
                .map(|t| t.value(x))
                .unwrap_or(0.0),
        }
    }
}
