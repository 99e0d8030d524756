//! Complex saddle points of ζ in `(x, t)`: Newton solve at zeroth order and
//! perturbative corrections in the Coulomb coupling.

use num_complex::Complex64 as C64;

use crate::actions::{zeta0, zeta_jet, JetOrder, ZetaJet};
use crate::error::{Error, Result};
use crate::linalg::solve2;
use crate::model::{AtomicSystem, DerivedParams, HalfCyclePulse};

const I: C64 = C64 { re: 0.0, im: 1.0 };
const MAX_NEWTON: usize = 50;

/// Seed of the zeroth-order saddle. At `p = p0` this is
/// `t = arcsin(iγ)/ω - i/sqrt(κ E_s)`, `x = sqrt(κ/E_s)`.
pub fn seed(atom: &AtomicSystem, pulse: &HalfCyclePulse, p: f64) -> (C64, C64) {
    let d = DerivedParams::new(atom, pulse);
    let a = pulse.a0();
    let arg = 1.0 + (I * atom.kappa - p) / a;
    let t = arg.asin() / pulse.omega - I / (atom.kappa * d.es).sqrt();
    let x = C64::new((atom.kappa / d.es).sqrt(), 0.0);
    (x, t)
}

fn scaled_residual(g: [C64; 2], atom: &AtomicSystem, es: f64) -> f64 {
    (g[0].norm() / atom.kappa).max(g[1].norm() / (atom.kappa * es))
}

/// Zeroth-order saddle `(x0, t0)` on the ionization branch `Re x0 > 0`, `Im t0 > 0`.
pub fn solve_zeroth(atom: &AtomicSystem, pulse: &HalfCyclePulse, p: f64) -> Result<(C64, C64)> {
    let (x, t) = seed(atom, pulse, p);
    solve_zeroth_from(atom, pulse, p, x, t)
}

pub fn solve_zeroth_from(atom: &AtomicSystem, pulse: &HalfCyclePulse, p: f64, x_seed: C64, t_seed: C64) -> Result<(C64, C64)> {
    let es = DerivedParams::new(atom, pulse).es;
    let (mut x, mut t) = (x_seed, t_seed);
    let (mut jet, _) = zeta0(atom, pulse, x, t, p)?;
    let mut res = scaled_residual(jet.gradient(), atom, es);
    let mut converged = false;
    for _ in 0..MAX_NEWTON {
        if res < 1e-13 {
            converged = true;
            break;
        }
        let g = jet.gradient();
        let d = solve2(jet.hessian(), [-g[0], -g[1]])?;
        let mut lam = 1.0;
        let mut accepted = false;
        for _ in 0..=8 {
            let (xn, tn) = (x + lam * d[0], t + lam * d[1]);
            if let Ok((jn, _)) = zeta0(atom, pulse, xn, tn, p) {
                let rn = scaled_residual(jn.gradient(), atom, es);
                if rn.is_finite() && rn < res {
                    x = xn;
                    t = tn;
                    jet = jn;
                    res = rn;
                    accepted = true;
                    break;
                }
            }
            lam *= 0.5;
        }
        if !accepted {
            // no decrease possible: at the rounding floor or stuck
            converged = res < 1e-10;
            break;
        }
    }
    if !converged && res >= 1e-10 {
        return Err(Error::NoConvergence { what: "zeroth-order saddle", iterations: MAX_NEWTON });
    }
    if !(x.re > 0.0 && t.im > 0.0) {
        return Err(Error::WrongBranch { x, t });
    }
    Ok((x, t))
}

/// First-order correction `-H0^{-1} ∇ζ1`.
pub fn correction_first(jet: &ZetaJet) -> Result<(C64, C64)> {
    let g = jet.zeta1.gradient();
    let y = solve2(jet.zeta0.hessian(), [-g[0], -g[1]])?;
    Ok((y[0], y[1]))
}

/// Second-order correction from the α² terms of `∇(ζ0 + αζ1 + α²ζ2) = 0`:
/// `H0 y2 = -(½ T0[y1, y1] + H1 y1 + ∇ζ2)`.
pub fn correction_second(jet: &ZetaJet, first: (C64, C64), quantum: bool) -> Result<(C64, C64)> {
    let (x1, t1) = first;
    let [xxx, xxt, xtt, ttt] = jet.zeta0_third;
    let cubic = [
        xxx * x1 * x1 + 2.0 * xxt * x1 * t1 + xtt * t1 * t1,
        xxt * x1 * x1 + 2.0 * xtt * x1 * t1 + ttt * t1 * t1,
    ];
    let h1 = jet.zeta1;
    let lin = [h1.xx * x1 + h1.xt * t1, h1.xt * x1 + h1.tt * t1];
    let z2 = if quantum { jet.zeta2() } else { jet.zeta2_qc };
    let rhs = [-(0.5 * cubic[0] + lin[0] + z2.x), -(0.5 * cubic[1] + lin[1] + z2.t)];
    let y = solve2(jet.zeta0.hessian(), rhs)?;
    Ok((y[0], y[1]))
}

/// Perturbative saddle with residual diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleSolution {
    pub p: f64,
    pub x0: C64,
    pub t0: C64,
    pub x1: C64,
    pub t1: C64,
    pub x2: C64,
    pub t2: C64,
    /// `|∇ζ0|` at the zeroth-order point.
    pub residual0: f64,
    /// `|∇(ζ0 + ζ1)|` at the first-order point.
    pub residual1: f64,
    /// `|∇(ζ0 + ζ1 + ζ2)|` at the second-order point.
    pub residual2: f64,
    pub quantum: bool,
}

impl SaddleSolution {
    pub fn solve(atom: &AtomicSystem, pulse: &HalfCyclePulse, p: f64, quantum: bool) -> Result<Self> {
        let (x0, t0) = solve_zeroth(atom, pulse, p)?;
        let jet = zeta_jet(atom, pulse, x0, t0, p, JetOrder::Second)?;
        let (x1, t1) = correction_first(&jet)?;
        let (x2, t2) = correction_second(&jet, (x1, t1), quantum)?;
        let residual0 = norm2(jet.zeta0.gradient());
        let (residual1, residual2) = if atom.charge == 0.0 {
            (residual0, residual0)
        } else {
            let j1 = zeta_jet(atom, pulse, x0 + x1, t0 + t1, p, JetOrder::First)?;
            let r1 = norm2([j1.zeta0.x + j1.zeta1.x, j1.zeta0.t + j1.zeta1.t]);
            let j2 = zeta_jet(atom, pulse, x0 + x1 + x2, t0 + t1 + t2, p, JetOrder::Second)?;
            let z2 = if quantum { j2.zeta2() } else { j2.zeta2_qc };
            let r2 = norm2([j2.zeta0.x + j2.zeta1.x + z2.x, j2.zeta0.t + j2.zeta1.t + z2.t]);
            (r1, r2)
        };
        Ok(SaddleSolution { p, x0, t0, x1, t1, x2, t2, residual0, residual1, residual2, quantum })
    }

    /// Saddle point summed up to the given order.
    pub fn point(&self, order: JetOrder) -> (C64, C64) {
        match order {
            JetOrder::Zeroth => (self.x0, self.t0),
            JetOrder::First => (self.x0 + self.x1, self.t0 + self.t1),
            JetOrder::Second => (self.x0 + self.x1 + self.x2, self.t0 + self.t1 + self.t2),
        }
    }
}

pub(crate) fn norm2(g: [C64; 2]) -> f64 {
    (g[0].norm_sqr() + g[1].norm_sqr()).sqrt()
}
