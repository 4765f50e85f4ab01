//! Semi-analytic solver for the field between two insulating unit spheres
//! at distance ε, by alternating reflections computed on the axis.

pub mod config;
pub mod error;
pub mod geometry;
pub mod ode;
pub mod oracle;
pub mod report;
pub mod solver;
pub mod suite;
pub mod trace;

pub use config::{FieldKind, GapConfig};
pub use error::{Error, Result};
pub use solver::{solve, SeriesSolution};
pub use trace::AxisTrace;

/// Double-precision geometry, what the solver uses.
pub type Geometry = geometry::KelvinGeometry<f64>;
