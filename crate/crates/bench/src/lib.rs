//! Shared fixtures for the benchmarks.

use ccsfa::{AtomicSystem, HalfCyclePulse};

/// Hydrogen-like atom, κ = Z = 1.
pub fn coulomb_atom() -> AtomicSystem {
    AtomicSystem::new(1.0, 1.0).expect("valid atom")
}

/// Quasistatic pulse at reduced field `f`, γ = 0.1.
pub fn quasistatic_pulse(atom: &AtomicSystem, f: f64) -> HalfCyclePulse {
    HalfCyclePulse::from_gamma_f(atom, 0.1, f).expect("valid pulse")
}
