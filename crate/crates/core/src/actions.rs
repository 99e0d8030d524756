//! Eikonal actions along laser-driven trajectories and the ζ-jet.
//!
//! The Coulomb pieces are integrals from the start point `t` to infinity. The
//! finite part runs along a [`Contour`] ending on the real axis after the pulse,
//! and the free post-pulse part is added in closed form.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{
    bound_action, field_at, field_derivative, field_second_derivative, vector_potential_at,
    vector_potential_integral, volkov_energy_integral, AtomicSystem, HalfCyclePulse,
};
use crate::ode::{self, Tolerance};

const I: C64 = C64 { re: 0.0, im: 1.0 };
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Laser-only trajectory through `x` at time `t`, evaluated at `t_prime`.
pub fn trajectory(pulse: &HalfCyclePulse, x: C64, t: C64, p: f64, t_prime: C64) -> C64 {
    x + p * (t_prime - t) + vector_potential_integral(pulse, t_prime) - vector_potential_integral(pulse, t)
}

/// Volkov action `(p + A(t)) x + ∫_t^{t_f} (p + A)^2/2`.
pub fn s0(pulse: &HalfCyclePulse, x: C64, t: C64, p: f64, t_f: f64) -> C64 {
    let v = p + vector_potential_at(pulse, t);
    v * x + volkov_energy_integral(pulse, p, C64::new(t_f, 0.0)) - volkov_energy_integral(pulse, p, t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourKind {
    VerticalThenReal,
    Custom,
}

/// Polyline in complex time from the start point to a real final time.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    nodes: Vec<C64>,
    kind: ContourKind,
}

impl Contour {
    /// Straight down from `t` to `Re t`, then along the real axis to `t_f`.
    pub fn vertical_then_real(t: C64, t_f: f64) -> Self {
        let mut nodes = vec![t];
        if t.im != 0.0 {
            nodes.push(C64::new(t.re, 0.0));
        }
        if t.re != t_f {
            nodes.push(C64::new(t_f, 0.0));
        }
        if nodes.len() == 1 {
            nodes.push(t);
        }
        Contour { nodes, kind: ContourKind::VerticalThenReal }
    }

    pub fn custom(nodes: Vec<C64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidParameter("contour needs at least two nodes".into()));
        }
        if nodes.last().unwrap().im != 0.0 {
            return Err(Error::InvalidParameter("contour must end on the real axis".into()));
        }
        Ok(Contour { nodes, kind: ContourKind::Custom })
    }

    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    pub fn kind(&self) -> ContourKind {
        self.kind
    }

    pub fn start(&self) -> C64 {
        self.nodes[0]
    }

    pub fn end(&self) -> f64 {
        self.nodes.last().unwrap().re
    }
}

/// All Coulomb integrals from the start point to infinity, post-pulse tail included.
///
/// `i_k = ∫ V^(k)`, `s2qc = ∫ G^2/2` with `G(t') = ∫_{t'} V'`, `q = ½ ∫ (t'' - t) V''`.
/// `*_x` are the derivatives with respect to the start coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombIntegrals {
    pub s1: C64,
    pub i1: C64,
    pub i2: C64,
    pub i3: C64,
    pub s2qc: C64,
    pub s2qc_x: C64,
    pub q: C64,
    pub q_x: C64,
}

impl CoulombIntegrals {
    fn zero() -> Self {
        CoulombIntegrals { s1: ZERO, i1: ZERO, i2: ZERO, i3: ZERO, s2qc: ZERO, s2qc_x: ZERO, q: ZERO, q_x: ZERO }
    }

    fn from_state(y: &[C64; 8]) -> Self {
        CoulombIntegrals { s1: y[0], i1: y[1], i2: y[2], i3: y[3], s2qc: y[4], s2qc_x: y[5], q: y[6], q_x: y[7] }
    }
}

/// Exclusion radius around the core, `1e-3/κ`.
pub fn core_radius(atom: &AtomicSystem) -> f64 {
    1e-3 / atom.kappa
}

pub fn coulomb_integrals(
    atom: &AtomicSystem,
    pulse: &HalfCyclePulse,
    x: C64,
    t: C64,
    p: f64,
    contour: &Contour,
    tol: Tolerance,
) -> Result<CoulombIntegrals> {
    let z = atom.charge;
    if z == 0.0 {
        return Ok(CoulombIntegrals::zero());
    }
    if !(p > 0.0) {
        return Err(Error::Domain("Coulomb tail needs a positive final momentum"));
    }
    if (contour.start() - t).norm() > 1e-12 * (1.0 + t.norm()) {
        return Err(Error::InvalidParameter("contour does not start at t".into()));
    }
    let t_f = contour.end();
    if t_f < pulse.t_end() * (1.0 - 1e-12) {
        return Err(Error::InvalidParameter("contour must end after the pulse".into()));
    }
    let r_core = core_radius(atom);

    let tf = C64::new(t_f, 0.0);
    let xf = trajectory(pulse, x, t, p, tf);
    if xf.norm() < r_core {
        return Err(Error::CoreProximity(tf));
    }
    // free motion xf + p s afterwards; the (Z/p) log s phase of S1 is dropped
    let lag = tf - t;
    let y_tail = [
        z / p * xf.ln(),
        z / (p * xf),
        -z / (p * xf * xf),
        2.0 * z / (p * xf * xf * xf),
        z * z / (2.0 * p.powi(3) * xf),
        -z * z / (2.0 * p.powi(3) * xf * xf),
        0.5 * (-z / (p * p * xf) + lag * (-z / (p * xf * xf))),
        0.5 * (z / (p * p * xf * xf) + lag * (2.0 * z / (p * xf * xf * xf))),
    ];

    let rhs = |tau: C64, y: &[C64; 8]| -> Result<[C64; 8]> {
        let xt = trajectory(pulse, x, t, p, tau);
        if xt.norm() < r_core {
            return Err(Error::CoreProximity(tau));
        }
        let inv = 1.0 / xt;
        let v0 = -z * inv;
        let v1 = z * inv * inv;
        let v2 = -2.0 * z * inv * inv * inv;
        let v3 = 6.0 * z * inv * inv * inv * inv;
        let g = y[1];
        let h = y[2];
        let w = 0.5 * (tau - t);
        // y(t') = ∫_{t'}^∞ (...), so dy/dt' is minus the integrand
        Ok([-v0, -v1, -v2, -v3, -0.5 * g * g, -g * h, -w * v2, -w * v3])
    };

    let reversed: Vec<C64> = contour.nodes().iter().rev().copied().collect();
    let y = ode::integrate_path(rhs, &reversed, y_tail, tol, |_, _| {})?;
    Ok(CoulombIntegrals::from_state(&y))
}

/// Values of the eikonal hierarchy at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionValues {
    pub x: C64,
    pub t: C64,
    pub p: f64,
    pub t_f: f64,
    pub s0: C64,
    pub s1: C64,
    pub s2_qc: C64,
    /// `-i ½ ∫∫ V''`, the quantum term.
    pub s2_qu: C64,
}

pub fn action_values(
    atom: &AtomicSystem,
    pulse: &HalfCyclePulse,
    x: C64,
    t: C64,
    p: f64,
    contour: &Contour,
) -> Result<ActionValues> {
    let c = coulomb_integrals(atom, pulse, x, t, p, contour, Tolerance::default())?;
    Ok(ActionValues {
        x,
        t,
        p,
        t_f: contour.end(),
        s0: s0(pulse, x, t, p, contour.end()),
        s1: c.s1,
        s2_qc: c.s2qc,
        s2_qu: -I * c.q,
    })
}

pub fn s1(atom: &AtomicSystem, pulse: &HalfCyclePulse, x: C64, t: C64, p: f64, contour: &Contour) -> Result<C64> {
    Ok(action_values(atom, pulse, x, t, p, contour)?.s1)
}

pub fn s2_quasiclassical(
    atom: &AtomicSystem,
    pulse: &HalfCyclePulse,
    x: C64,
    t: C64,
    p: f64,
    contour: &Contour,
) -> Result<C64> {
    Ok(action_values(atom, pulse, x, t, p, contour)?.s2_qc)
}

pub fn s2_quantum(atom: &AtomicSystem, pulse: &HalfCyclePulse, x: C64, t: C64, p: f64, contour: &Contour) -> Result<C64> {
    Ok(action_values(atom, pulse, x, t, p, contour)?.s2_qu)
}

/// Value with first and second partials in `(x, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Partials2 {
    pub value: C64,
    pub x: C64,
    pub t: C64,
    pub xx: C64,
    pub xt: C64,
    pub tt: C64,
}

impl Partials2 {
    pub fn gradient(&self) -> [C64; 2] {
        [self.x, self.t]
    }

    pub fn hessian(&self) -> [[C64; 2]; 2] {
        [[self.xx, self.xt], [self.xt, self.tt]]
    }

    pub fn det(&self) -> C64 {
        self.xx * self.tt - self.xt * self.xt
    }
}

impl std::ops::Add for Partials2 {
    type Output = Partials2;
    fn add(self, o: Partials2) -> Partials2 {
        Partials2 {
            value: self.value + o.value,
            x: self.x + o.x,
            t: self.t + o.t,
            xx: self.xx + o.xx,
            xt: self.xt + o.xt,
            tt: self.tt + o.tt,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Partials1 {
    pub value: C64,
    pub x: C64,
    pub t: C64,
}

impl std::ops::Add for Partials1 {
    type Output = Partials1;
    fn add(self, o: Partials1) -> Partials1 {
        Partials1 { value: self.value + o.value, x: self.x + o.x, t: self.t + o.t }
    }
}

/// Third partials of ζ0 as `[xxx, xxt, xtt, ttt]`.
pub type Third = [C64; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum JetOrder {
    Zeroth,
    First,
    Second,
}

/// ζ0, ζ1, ζ2 with their partials at one phase-space point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaJet {
    pub x: C64,
    pub t: C64,
    pub p: f64,
    pub zeta0: Partials2,
    pub zeta0_third: Third,
    pub zeta1: Partials2,
    pub zeta2_qc: Partials1,
    pub zeta2_qu: Partials1,
}

impl ZetaJet {
    /// Full second-order piece `ζ2 = -i S2*`.
    pub fn zeta2(&self) -> Partials1 {
        self.zeta2_qc + self.zeta2_qu
    }
}

/// ζ0 = -i S0 + log(x F) + S_a0 with closed-form partials.
pub fn zeta0(atom: &AtomicSystem, pulse: &HalfCyclePulse, x: C64, t: C64, p: f64) -> Result<(Partials2, Third)> {
    let f = field_at(pulse, t);
    if f.norm() == 0.0 {
        return Err(Error::Window(t));
    }
    let (sa0, _) = bound_action(atom, x, t)?;
    let f1 = field_derivative(pulse, t);
    let f2 = field_second_derivative(pulse, t);
    let w = pulse.omega;
    let v = p + vector_potential_at(pulse, t);
    let value = -I * s0(pulse, x, t, p, pulse.t_end()) + (x * f).ln() + sa0;

    let r = f1 / f;
    let sec2 = 1.0 / ((w * t).cos() * (w * t).cos());
    let r2 = -2.0 * w.powi(3) * (w * t).tan() * sec2;

    let jet = Partials2 {
        value,
        x: -I * v + 1.0 / x - atom.kappa,
        t: -I * (f * x - 0.5 * v * v) + r + I * atom.ip(),
        xx: -1.0 / (x * x),
        xt: -I * f,
        tt: -I * (f1 * x - v * f) + (f2 * f - f1 * f1) / (f * f),
    };
    let third = [
        2.0 / (x * x * x),
        ZERO,
        -I * f1,
        -I * (f2 * x - f * f - v * f1) + r2,
    ];
    Ok((jet, third))
}

pub fn zeta_jet(atom: &AtomicSystem, pulse: &HalfCyclePulse, x: C64, t: C64, p: f64, order: JetOrder) -> Result<ZetaJet> {
    zeta_jet_on(atom, pulse, x, t, p, order, &Contour::vertical_then_real(t, pulse.t_end()), Tolerance::default())
}

pub fn zeta_jet_on(
    atom: &AtomicSystem,
    pulse: &HalfCyclePulse,
    x: C64,
    t: C64,
    p: f64,
    order: JetOrder,
    contour: &Contour,
    tol: Tolerance,
) -> Result<ZetaJet> {
    let (z0, third) = zeta0(atom, pulse, x, t, p)?;
    let mut jet = ZetaJet {
        x,
        t,
        p,
        zeta0: z0,
        zeta0_third: third,
        zeta1: Partials2::default(),
        zeta2_qc: Partials1::default(),
        zeta2_qu: Partials1::default(),
    };
    if order == JetOrder::Zeroth || atom.charge == 0.0 {
        return Ok(jet);
    }
    let c = coulomb_integrals(atom, pulse, x, t, p, contour, tol)?;
    let z = atom.charge;
    let k = atom.kappa;
    let v = p + vector_potential_at(pulse, t);
    let f = field_at(pulse, t);
    let pot = -z / x;
    let pot1 = z / (x * x);
    let (_, sa1) = bound_action(atom, x, t)?;

    let s1_t = -pot - v * c.i1;
    let s1_xt = -pot1 - v * c.i2;
    let s1_tt = -f * c.i1 + v * pot1 + v * v * c.i2;
    jet.zeta1 = Partials2 {
        value: -I * c.s1 + sa1,
        x: -I * c.i1 + z / (k * x),
        t: -I * s1_t,
        xx: -I * c.i2 - z / (k * x * x),
        xt: -I * s1_xt,
        tt: -I * s1_tt,
    };
    if order == JetOrder::Second {
        let s2_t = -0.5 * c.i1 * c.i1 - v * c.s2qc_x;
        jet.zeta2_qc = Partials1 { value: -I * c.s2qc, x: -I * c.s2qc_x, t: -I * s2_t };
        // -i S2* with the conjugated quantum factor gives +Q
        jet.zeta2_qu = Partials1 { value: c.q, x: c.q_x, t: -0.5 * c.i2 - v * c.q_x };
    }
    Ok(jet)
}
