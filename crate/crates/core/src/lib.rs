//! Coulomb-corrected strong-field approximation for tunnel ionization of a
//! one-dimensional atom by a half-cycle pulse.
//!
//! The crate evaluates the eikonal hierarchy S0/S1/S2 along complex
//! trajectories, solves the complex saddle-point equations, assembles the
//! ionization amplitude at each truncation order and locates the peak of the
//! momentum distribution. A shooting solver for complex classical trajectories
//! ([`hqa`]) and brute-force reference evaluators ([`oracle`]) complete it.
//!
//! All quantities are in atomic units.

pub mod actions;
pub mod amplitude;
pub mod error;
pub mod hqa;
pub mod linalg;
pub mod model;
pub mod ode;
pub mod oracle;
pub mod saddle;

pub use num_complex::Complex64 as C64;

pub use actions::{ActionValues, Contour, ContourKind, JetOrder, Partials1, Partials2, ZetaJet};
pub use amplitude::{AmplitudeResult, PeakMethod, PeakResult, Variant};
pub use error::{Error, Result};
pub use hqa::{HqaSolution, StartPoint, TrajectoryState};
pub use model::{AtomicSystem, DerivedParams, ExitModel, HalfCyclePulse};
pub use oracle::QuadratureReport;
pub use saddle::SaddleSolution;
