//! Complex classical trajectories in the laser plus Coulomb field, with
//! shooting for the most probable trajectory.
//!
//! The trajectory starts at complex `t_s` under the barrier, runs straight
//! down to the real axis and then along it. At the real exit time `t_e` the
//! coordinate is real and the velocity vanishes.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::actions::core_radius;
use crate::error::{Error, Result};
use crate::linalg::solve3;
use crate::model::{bound_action, field_at, field_derivative, field_second_derivative, AtomicSystem, DerivedParams, HalfCyclePulse};
use crate::ode::{self, Tolerance};

const I: C64 = C64 { re: 0.0, im: 1.0 };
const MAX_SHOOT: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryState {
    pub t: C64,
    pub x: C64,
    pub v: C64,
    /// `S̃_c = ∫ (v²/2 + x F - V)` accumulated from the start point.
    pub action: C64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StartPoint {
    /// Root of the cubic start condition nearest to `sqrt(κ/F)`.
    #[default]
    Full,
    /// `x_s = sqrt(κ/F(t_s))`, valid for `F << κ³`.
    Simplified,
}

/// Start coordinate and velocity at complex time `t_s`.
pub fn initial_conditions(atom: &AtomicSystem, pulse: &HalfCyclePulse, ts: C64, start: StartPoint) -> Result<(C64, C64)> {
    let f = field_at(pulse, ts);
    if f.norm() == 0.0 {
        return Err(Error::Window(ts));
    }
    let (k, z) = (atom.kappa, atom.charge);
    let seed = (k / f).sqrt();
    let xs = match start {
        StartPoint::Simplified => seed,
        StartPoint::Full => {
            let r = field_derivative(pulse, ts) / f;
            let c = [2.0 * k * k * f, 2.0 * I * k * k * r, C64::new(-2.0 * k.powi(3), 0.0), C64::new(k * k + z * z + 2.0 * k * z, 0.0)];
            let roots = cubic_roots(c)?;
            roots.into_iter().min_by(|a, b| (a - seed).norm().total_cmp(&(b - seed).norm())).unwrap()
        }
    };
    let vs = I * k - I * (z + k) / (k * xs);
    Ok((xs, vs))
}

/// All roots of `c0 x³ + c1 x² + c2 x + c3` by Durand–Kerner iteration.
fn cubic_roots(c: [C64; 4]) -> Result<[C64; 3]> {
    let (b, cc, d) = (c[1] / c[0], c[2] / c[0], c[3] / c[0]);
    let poly = |x: C64| ((x + b) * x + cc) * x + d;
    let radius = 1.0 + b.norm().max(cc.norm()).max(d.norm());
    let w = C64::new(0.4, 0.9);
    let mut r = [w * radius, w * w * radius, w * w * w * radius];
    for _ in 0..500 {
        let mut delta: f64 = 0.0;
        for i in 0..3 {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..3 {
                if j != i {
                    den *= r[i] - r[j];
                }
            }
            let step = poly(r[i]) / den;
            r[i] -= step;
            delta = delta.max(step.norm() / r[i].norm().max(1e-300));
        }
        if delta < 1e-13 {
            for x in r.iter_mut() {
                for _ in 0..3 {
                    let der = (3.0 * *x + 2.0 * b) * *x + cc;
                    *x -= poly(*x) / der;
                }
            }
            return Ok(r);
        }
    }
    Err(Error::NoConvergence { what: "start point", iterations: 500 })
}

fn check_core(atom: &AtomicSystem, t: C64, x: C64) -> Result<()> {
    if x.norm() < core_radius(atom) {
        return Err(Error::CoreProximity(t));
    }
    Ok(())
}

/// `[x, v, S̃_c]` equations of motion, `ẍ = F - Z/x²`.
fn motion(atom: &AtomicSystem, pulse: &HalfCyclePulse, t: C64, y: &[C64; 3]) -> Result<[C64; 3]> {
    let (x, v) = (y[0], y[1]);
    check_core(atom, t, x)?;
    let f = field_at(pulse, t);
    let z = atom.charge;
    Ok([v, f - z / (x * x), 0.5 * v * v + x * f + z / x])
}

/// Propagates a state along the polyline `nodes`, which must start at `state.t`.
pub fn propagate(atom: &AtomicSystem, pulse: &HalfCyclePulse, state: TrajectoryState, nodes: &[C64]) -> Result<TrajectoryState> {
    propagate_observed(atom, pulse, state, nodes, |_| {})
}

fn propagate_observed<O: FnMut(TrajectoryState)>(
    atom: &AtomicSystem,
    pulse: &HalfCyclePulse,
    state: TrajectoryState,
    nodes: &[C64],
    mut observe: O,
) -> Result<TrajectoryState> {
    if nodes.first().is_none_or(|&n| (n - state.t).norm() > 1e-12 * (1.0 + n.norm())) {
        return Err(Error::InvalidParameter("path does not start at the state time".into()));
    }
    let y = ode::integrate_path(
        |t, y: &[C64; 3]| motion(atom, pulse, t, y),
        nodes,
        [state.x, state.v, state.action],
        Tolerance::default(),
        |t, y| observe(TrajectoryState { t, x: y[0], v: y[1], action: y[2] }),
    )?;
    Ok(TrajectoryState { t: *nodes.last().unwrap(), x: y[0], v: y[1], action: y[2] })
}

/// Polyline from `t_s` straight down to the real axis and on to `t_end`.
fn path(ts: C64, t_end: f64) -> Vec<C64> {
    vec![ts, C64::new(ts.re, 0.0), C64::new(t_end, 0.0)]
}

#[derive(Debug, Clone, PartialEq)]
pub struct HqaSolution {
    pub ts: C64,
    pub te: f64,
    pub xs: C64,
    pub vs: C64,
    pub xe: f64,
    /// Asymptotic momentum `sqrt(v² - 2Z/x)` at the end of the pulse.
    pub p_final: f64,
    /// `i S̃_c + S_a + log(x_s F(t_s))`; `2 Re` of it is the log-probability exponent.
    pub exponent: C64,
    /// `Im S̃_c` from `t_s` to `t_e`.
    pub im_action: f64,
    /// Largest boundary residual `{Im x, Re v, Im v}` at `t_e`.
    pub residual: f64,
    pub iterations: usize,
    pub start: StartPoint,
    /// Accepted integrator steps from `t_s` to the end of the pulse.
    pub samples: Vec<TrajectoryState>,
}

fn exit_state(atom: &AtomicSystem, pulse: &HalfCyclePulse, u: [f64; 3], start: StartPoint) -> Result<TrajectoryState> {
    let ts = C64::new(u[0], u[1]);
    let (xs, vs) = initial_conditions(atom, pulse, ts, start)?;
    propagate(atom, pulse, TrajectoryState { t: ts, x: xs, v: vs, action: C64::new(0.0, 0.0) }, &path(ts, u[2]))
}

fn residual(s: &TrajectoryState) -> [f64; 3] {
    [s.x.im, s.v.re, s.v.im]
}

fn max_abs(r: [f64; 3]) -> f64 {
    r.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Finds the most probable trajectory by Newton shooting in `(Re t_s, Im t_s, t_e)`.
pub fn shoot(atom: &AtomicSystem, pulse: &HalfCyclePulse, start: StartPoint) -> Result<HqaSolution> {
    let d = DerivedParams::new(atom, pulse);
    let k = atom.kappa;
    let seed = (I * d.gamma).asin() / pulse.omega - I / (k * d.es).sqrt();
    let mut u = [0.0, seed.im, 0.0];
    let mut r = residual(&exit_state(atom, pulse, u, start)?);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_SHOOT {
        iterations += 1;
        let mut jac = [[0.0; 3]; 3];
        for j in 0..3 {
            let h = 1e-5 * u[j].abs().max(1.0);
            let (mut up, mut um) = (u, u);
            up[j] += h;
            um[j] -= h;
            let rp = residual(&exit_state(atom, pulse, up, start)?);
            let rm = residual(&exit_state(atom, pulse, um, start)?);
            for i in 0..3 {
                jac[i][j] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let step = solve3(jac, [-r[0], -r[1], -r[2]])?;
        let mut lam = 1.0;
        let mut accepted = false;
        for _ in 0..=8 {
            let un = [u[0] + lam * step[0], u[1] + lam * step[1], u[2] + lam * step[2]];
            if let Ok(s) = exit_state(atom, pulse, un, start) {
                let rn = residual(&s);
                if max_abs(rn) <= max_abs(r) || lam == 1.0 && max_abs(rn) < 1e-6 {
                    u = un;
                    r = rn;
                    accepted = true;
                    break;
                }
            }
            lam *= 0.5;
        }
        if !accepted {
            break;
        }
        if max_abs(step) * lam < 1e-11 * u.iter().fold(1.0f64, |m, v| m.max(v.abs())) && max_abs(r) < 1e-8 {
            converged = true;
            break;
        }
    }
    if !converged && max_abs(r) >= 1e-8 {
        return Err(Error::NoConvergence { what: "HQA shooting", iterations });
    }

    let ts = C64::new(u[0], u[1]);
    let (xs, vs) = initial_conditions(atom, pulse, ts, start)?;
    let mut samples = Vec::new();
    let start_state = TrajectoryState { t: ts, x: xs, v: vs, action: C64::new(0.0, 0.0) };
    let exit = propagate_observed(atom, pulse, start_state, &path(ts, u[2]), |s| samples.push(s))?;
    let end = propagate_observed(atom, pulse, exit, &[C64::new(u[2], 0.0), C64::new(pulse.t_end(), 0.0)], |s| samples.push(s))?;
    let p_final = (end.v * end.v - 2.0 * atom.charge / end.x).sqrt().re;

    let (sa0, sa1) = bound_action(atom, xs, ts)?;
    let exponent = I * exit.action + sa0 + sa1 + (xs * field_at(pulse, ts)).ln();
    Ok(HqaSolution {
        ts,
        te: u[2],
        xs,
        vs,
        xe: exit.x.re,
        p_final,
        exponent,
        im_action: exit.action.im,
        residual: max_abs(r),
        iterations,
        start,
        samples,
    })
}

/// `[x, v, S̃_c, δx_1, δv_1, δx_2, δv_2]` with the linearized flow.
fn motion_tangent(atom: &AtomicSystem, pulse: &HalfCyclePulse, t: C64, y: &[C64; 7]) -> Result<[C64; 7]> {
    let m = motion(atom, pulse, t, &[y[0], y[1], y[2]])?;
    let k2 = 2.0 * atom.charge / (y[0] * y[0] * y[0]);
    Ok([m[0], m[1], m[2], y[4], k2 * y[3], y[6], k2 * y[5]])
}

/// Log-amplitude of the most probable trajectory with the momentum evaluated at `t_f`.
///
/// The 2x2 determinant uses derivatives of the start action with respect to
/// `(x_s, t_s)`, obtained from the tangent flow of the final momentum.
pub fn log_amplitude_at(atom: &AtomicSystem, pulse: &HalfCyclePulse, sol: &HqaSolution, t_f: f64) -> Result<C64> {
    if t_f < pulse.t_end() {
        return Err(Error::InvalidParameter("final time must be after the pulse".into()));
    }
    let (ts, xs, vs) = (sol.ts, sol.xs, sol.vs);
    let z = atom.charge;
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let y0 = [xs, vs, zero, one, zero, zero, one];
    let y = ode::integrate_path(
        |t, y: &[C64; 7]| motion_tangent(atom, pulse, t, y),
        &path(ts, t_f),
        y0,
        Tolerance::default(),
        |_, _| {},
    )?;
    let (x, v) = (y[0], y[1]);
    let pf = (v * v - 2.0 * z / x).sqrt();
    let p_x = (v * y[4] + z / (x * x) * y[3]) / pf;
    let p_v = (v * y[6] + z / (x * x) * y[5]) / pf;
    if p_v.norm() == 0.0 {
        return Err(Error::Caustic);
    }
    let f = field_at(pulse, ts);
    let f1 = field_derivative(pulse, ts);
    let f2 = field_second_derivative(pulse, ts);
    // start velocity as a function of (x_s, t_s) at fixed final momentum
    let v_x = -p_x / p_v;
    let v_t = -v_x * vs + f - z / (xs * xs);
    let s_tt = -(vs * v_t - xs * f1);
    let xx = -I * v_x - 1.0 / (xs * xs) - z / (atom.kappa * xs * xs);
    let xt = -I * v_t;
    let tt = -I * s_tt + (f2 * f - f1 * f1) / (f * f);
    let det = xx * tt - xt * xt;
    if det.norm() == 0.0 {
        return Err(Error::Caustic);
    }
    Ok((-I).ln() + (atom.c_a() * (2.0 * PI).sqrt()).ln() + sol.exponent - 0.5 * det.ln())
}

pub fn log_amplitude(atom: &AtomicSystem, pulse: &HalfCyclePulse, sol: &HqaSolution) -> Result<C64> {
    log_amplitude_at(atom, pulse, sol, pulse.t_end())
}

/// Ionization probability at the final momentum of the most probable trajectory.
pub fn hqa_probability(atom: &AtomicSystem, pulse: &HalfCyclePulse, sol: &HqaSolution) -> Result<f64> {
    Ok((2.0 * log_amplitude(atom, pulse, sol)?.re).exp())
}
