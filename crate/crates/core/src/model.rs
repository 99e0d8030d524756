//! Atom, half-cycle pulse and the derived scales.
//!
//! Everything is in atomic units. Complex times are handled by analytic
//! continuation of the in-pulse formulas, with the window decided by `Re t`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Bound system characterized by `kappa = sqrt(2 Ip)` and the core charge `Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicSystem {
    pub kappa: f64,
    pub charge: f64,
}

impl AtomicSystem {
    pub fn new(kappa: f64, charge: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidParameter(format!("kappa must be positive, got {kappa}")));
        }
        if !(charge.is_finite() && charge >= 0.0) {
            return Err(Error::InvalidParameter(format!("Z must be non-negative, got {charge}")));
        }
        Ok(AtomicSystem { kappa, charge })
    }

    pub fn ip(&self) -> f64 {
        0.5 * self.kappa * self.kappa
    }

    /// Atomic field strength `kappa^3`.
    pub fn ea(&self) -> f64 {
        self.kappa.powi(3)
    }

    /// Asymptotic normalization of the bound state. Reduces to `sqrt(kappa)` at `Z = 0`.
    pub fn c_a(&self) -> f64 {
        c_a(self.kappa, self.charge)
    }

    /// Short-range normalization, the `Z -> 0` limit of [`Self::c_a`].
    pub fn c_a0(&self) -> f64 {
        self.kappa.sqrt()
    }

    pub fn is_short_range(&self) -> bool {
        self.charge == 0.0
    }
}

fn c_a(kappa: f64, z: f64) -> f64 {
    if z == 0.0 {
        return kappa.sqrt();
    }
    // 2Z Γ(2Z/κ) = κ Γ(2Z/κ + 1), which stays finite as Z -> 0
    let nu = 2.0 * z / kappa;
    kappa / (kappa * libm::tgamma(nu + 1.0)).sqrt()
}

/// Single half-cycle pulse `F(t) = E0 cos(ωt)` for `|ωt| < π/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfCyclePulse {
    pub e0: f64,
    pub omega: f64,
}

impl HalfCyclePulse {
    pub fn new(e0: f64, omega: f64) -> Result<Self> {
        if !(e0.is_finite() && e0 > 0.0) {
            return Err(Error::InvalidParameter(format!("E0 must be positive, got {e0}")));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter(format!("omega must be positive, got {omega}")));
        }
        Ok(HalfCyclePulse { e0, omega })
    }

    /// Pulse with the given Keldysh parameter and reduced field `f = E0/kappa^3`.
    pub fn from_gamma_f(atom: &AtomicSystem, gamma: f64, f: f64) -> Result<Self> {
        let e0 = f * atom.ea();
        Self::new(e0, gamma * e0 / atom.kappa)
    }

    /// Pulse with fixed frequency and the given Keldysh parameter.
    pub fn from_omega_gamma(atom: &AtomicSystem, omega: f64, gamma: f64) -> Result<Self> {
        Self::new(omega * atom.kappa / gamma, omega)
    }

    /// End of the pulse, `π/(2ω)`.
    pub fn t_end(&self) -> f64 {
        FRAC_PI_2 / self.omega
    }

    /// Quiver amplitude `E0/ω`, equal to the drift momentum `p0`.
    pub fn a0(&self) -> f64 {
        self.e0 / self.omega
    }

    fn window(&self, t: C64) -> Window {
        let phase = self.omega * t.re;
        if phase >= FRAC_PI_2 {
            Window::After
        } else if phase <= -FRAC_PI_2 {
            Window::Before
        } else {
            Window::Inside
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Window {
    Before,
    Inside,
    After,
}

/// Dimensionless and derived scales of an atom-pulse pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    pub gamma: f64,
    pub es: f64,
    pub f: f64,
    pub up: f64,
    pub p0: f64,
    /// `E_s/E_a < kappa/(16 Z)`; always true for `Z = 0`.
    pub below_barrier: bool,
    /// `ω < Ip` and `ω < Up`, each by at least a factor of ten.
    pub slow_field: bool,
}

impl DerivedParams {
    pub fn new(atom: &AtomicSystem, pulse: &HalfCyclePulse) -> Self {
        let gamma = pulse.omega * atom.kappa / pulse.e0;
        let es = pulse.e0 * (1.0 + gamma * gamma).sqrt();
        let up = pulse.e0 * pulse.e0 / (4.0 * pulse.omega * pulse.omega);
        let below_barrier = atom.charge == 0.0 || es / atom.ea() < atom.kappa / (16.0 * atom.charge);
        let slow_field = 10.0 * pulse.omega < atom.ip() && 10.0 * pulse.omega < up;
        DerivedParams {
            gamma,
            es,
            f: pulse.e0 / atom.ea(),
            up,
            p0: pulse.a0(),
            below_barrier,
            slow_field,
        }
    }

    /// Advisory messages for parameters outside the regime of validity.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.below_barrier {
            out.push(format!("E_s/E_a = {:.4} is near or above the barrier-suppression bound", self.f * (1.0 + self.gamma * self.gamma).sqrt()));
        }
        if !self.slow_field {
            out.push("omega is not small compared with Ip and Up".to_string());
        }
        out
    }
}

/// Field `F(t)`, continued analytically inside the window.
pub fn field_at(pulse: &HalfCyclePulse, t: C64) -> C64 {
    match pulse.window(t) {
        Window::Inside => pulse.e0 * (pulse.omega * t).cos(),
        _ => C64::new(0.0, 0.0),
    }
}

/// `F'(t)`.
pub fn field_derivative(pulse: &HalfCyclePulse, t: C64) -> C64 {
    match pulse.window(t) {
        Window::Inside => -pulse.e0 * pulse.omega * (pulse.omega * t).sin(),
        _ => C64::new(0.0, 0.0),
    }
}

/// `F''(t)`.
pub fn field_second_derivative(pulse: &HalfCyclePulse, t: C64) -> C64 {
    -pulse.omega * pulse.omega * field_at(pulse, t)
}

/// Vector potential with `A = 0` after the pulse, so that `p` is the detected momentum.
pub fn vector_potential_at(pulse: &HalfCyclePulse, t: C64) -> C64 {
    let a = pulse.a0();
    match pulse.window(t) {
        Window::Inside => a * ((pulse.omega * t).sin() - 1.0),
        Window::After => C64::new(0.0, 0.0),
        Window::Before => C64::new(-2.0 * a, 0.0),
    }
}

/// Continuous antiderivative of `A`.
pub fn vector_potential_integral(pulse: &HalfCyclePulse, t: C64) -> C64 {
    let a = pulse.a0();
    let w = pulse.omega;
    let tp = pulse.t_end();
    match pulse.window(t) {
        Window::Inside => -(a / w) * (w * t).cos() - a * t,
        Window::After => C64::new(-a * tp, 0.0),
        Window::Before => -2.0 * a * t - a * tp,
    }
}

/// Continuous antiderivative of `(p + A)^2 / 2`.
pub fn volkov_energy_integral(pulse: &HalfCyclePulse, p: f64, t: C64) -> C64 {
    let a = pulse.a0();
    let w = pulse.omega;
    let tp = pulse.t_end();
    let g = |q: C64| {
        let u = p - a;
        0.5 * (u * u * q - (2.0 * u * a / w) * (w * q).cos() + a * a * (q / 2.0 - (2.0 * w * q).sin() / (4.0 * w)))
    };
    match pulse.window(t) {
        Window::Inside => g(t),
        Window::After => g(C64::new(tp, 0.0)) + 0.5 * p * p * (t - tp),
        Window::Before => g(C64::new(-tp, 0.0)) + 0.5 * (p - 2.0 * a).powi(2) * (t + tp),
    }
}

/// Bound-state action pieces `S_a0 = -κx + i Ip t` and `S_a1 = (Z/κ) log(2κx)`.
pub fn bound_action(atom: &AtomicSystem, x: C64, t: C64) -> Result<(C64, C64)> {
    if x == C64::new(0.0, 0.0) {
        return Err(Error::Domain("bound action at x = 0"));
    }
    let sa0 = -atom.kappa * x + I * atom.ip() * t;
    let sa1 = if atom.charge == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        (atom.charge / atom.kappa) * (2.0 * atom.kappa * x).ln()
    };
    Ok((sa0, sa1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitModel {
    /// `Ip/E0`.
    Simpleman,
    /// `2/γ² (sqrt(1+γ²) - 1) Ip/E0`.
    Nonadiabatic,
    /// `(Ip/E0)(1 - 4 Z E0/(κ Ea))`.
    CoulombExpanded,
    /// Larger root of `-Ip = -E0 x - Z/x`.
    CoulombExact,
}

pub fn tunnel_exit(atom: &AtomicSystem, pulse: &HalfCyclePulse, model: ExitModel) -> Result<f64> {
    let ip = atom.ip();
    let e0 = pulse.e0;
    match model {
        ExitModel::Simpleman => Ok(ip / e0),
        ExitModel::Nonadiabatic => {
            let g = DerivedParams::new(atom, pulse).gamma;
            Ok(2.0 / (g * g) * ((1.0 + g * g).sqrt() - 1.0) * ip / e0)
        }
        ExitModel::CoulombExpanded => {
            let x = ip / e0 * (1.0 - 4.0 * atom.charge * e0 / (atom.kappa * atom.ea()));
            if x > 0.0 {
                Ok(x)
            } else {
                Err(Error::BarrierSuppression)
            }
        }
        ExitModel::CoulombExact => {
            let disc = ip * ip - 4.0 * e0 * atom.charge;
            if disc < 0.0 {
                return Err(Error::BarrierSuppression);
            }
            Ok((ip + disc.sqrt()) / (2.0 * e0))
        }
    }
}
