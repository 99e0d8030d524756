//! Brute-force reference evaluators: exact coordinate quadrature, nested sums
//! for the second-order actions, finite-difference jets, the third-order SPI
//! term and a direct Newton solve of the truncated saddle equations.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::actions::{trajectory, zeta0, zeta_jet, JetOrder, Partials1, Partials2, ZetaJet};
use crate::amplitude::{golden_max, log_parts, ppt_reference, Variant};
use crate::error::{Error, Result};
use crate::linalg::solve2;
use crate::model::{AtomicSystem, DerivedParams, HalfCyclePulse};
use crate::saddle::{norm2, solve_zeroth};

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureReport {
    pub value: C64,
    /// Estimated absolute error.
    pub error: f64,
    pub nodes: usize,
}

/// Newton solve of `∂t ζ0(x, t) = 0` at fixed real `x`. Returns `(t, ∂tt ζ0, residual)`.
fn time_saddle(atom: &AtomicSystem, pulse: &HalfCyclePulse, x: f64, p: f64, guess: C64) -> Result<(C64, C64, f64)> {
    let xc = C64::new(x, 0.0);
    let mut t = guess;
    for _ in 0..80 {
        let (j, _) = zeta0(atom, pulse, xc, t, p)?;
        let mut d = -j.t / j.tt;
        while d.norm() > 0.2 * t.norm() {
            d *= 0.5;
        }
        t += d;
        if d.norm() < 1e-13 * t.norm() {
            break;
        }
    }
    let (j, _) = zeta0(atom, pulse, xc, t, p)?;
    Ok((t, j.tt, j.t.norm()))
}

/// Composite Simpson on a uniform grid with an even number of intervals.
fn simpson(y: &[C64], h: f64) -> C64 {
    let n = y.len() - 1;
    let mut s = y[0] + y[n];
    for (i, v) in y.iter().enumerate().take(n).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    s * h / 3.0
}

/// Coordinate-SPI amplitude on the full line and restricted to `x > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpiCoordinate {
    pub full_line: C64,
    pub half_line: C64,
}

/// `M` with the time integral by SPI and the coordinate integral done numerically over `(0, x_max)`.
///
/// The upper limit is where the time saddle reaches the real axis (the tunnel
/// exit); beyond it the under-barrier representation no longer holds.
pub fn exact_x_amplitude(atom: &AtomicSystem, pulse: &HalfCyclePulse, p: f64, variant: Variant) -> Result<QuadratureReport> {
    let with_coulomb = match variant {
        Variant::S0 => false,
        Variant::S1 => true,
        _ => return Err(Error::InvalidParameter("exact-x oracle supports S0 and S1".into())),
    };
    let (x0, t0) = solve_zeroth(atom, pulse, p)?;
    let x0 = x0.re;
    let h = x0 / 400.0;
    let integrand = |x: f64, t: C64, tt: C64| -> Result<C64> {
        let mut z = zeta0(atom, pulse, C64::new(x, 0.0), t, p)?.0.value;
        if with_coulomb {
            z += zeta_jet(atom, pulse, C64::new(x, 0.0), t, p, JetOrder::First)?.zeta1.value + (atom.c_a() / atom.c_a0()).ln();
        }
        Ok(z.exp() * (2.0 * PI / (-tt)).sqrt())
    };

    let mut upper = Vec::new();
    let mut guess = t0;
    let mut j = 400usize;
    loop {
        let x = j as f64 * h;
        let Ok((t, tt, r)) = time_saddle(atom, pulse, x, p, guess) else { break };
        if r > 1e-9 || t.im < 0.02 * t0.im {
            break;
        }
        let Ok(v) = integrand(x, t, tt) else { break };
        upper.push(v);
        guess = t;
        j += 1;
        if j > 40_000 {
            return Err(Error::Quadrature("exit not reached".into()));
        }
    }
    let mut lower = Vec::new();
    guess = t0;
    for j in (1..400).rev() {
        let x = j as f64 * h;
        let (t, tt, r) = time_saddle(atom, pulse, x, p, guess)?;
        if r > 1e-9 {
            return Err(Error::Quadrature(format!("time saddle lost at x = {x}")));
        }
        lower.push(integrand(x, t, tt)?);
        guess = t;
    }
    // x = 0 carries the factor x F and vanishes
    let mut y: Vec<C64> = std::iter::once(C64::new(0.0, 0.0)).chain(lower.into_iter().rev()).chain(upper).collect();
    if y.len().is_multiple_of(2) {
        y.pop();
    }
    let fine = simpson(&y, h);
    let m = (y.len() - 1) / 4 * 4;
    let coarse_grid: Vec<C64> = y[..=m].iter().step_by(2).copied().collect();
    let err = (simpson(&y[..=m], h) - simpson(&coarse_grid, 2.0 * h)).norm() / 15.0;
    let norm = -I * atom.c_a0() / (2.0 * PI).sqrt();
    Ok(QuadratureReport { value: norm * fine, error: norm.norm() * err, nodes: y.len() })
}

/// Coordinate-SPI counterpart of [`exact_x_amplitude`] with the same normalization.
pub fn spi_coordinate(atom: &AtomicSystem, pulse: &HalfCyclePulse, p: f64, variant: Variant) -> Result<SpiCoordinate> {
    let order = match variant {
        Variant::S0 => JetOrder::Zeroth,
        Variant::S1 => JetOrder::First,
        _ => return Err(Error::InvalidParameter("coordinate SPI supports S0 and S1".into())),
    };
    let parts = log_parts(atom, pulse, p, order)?;
    let full = parts.log_amplitude(variant).exp();
    let z0 = parts.jet.zeta0;
    let hpp = z0.xx - z0.xt * z0.xt / z0.tt;
    let sigma = (-1.0 / hpp).sqrt();
    let arg = (parts.jet.x / (2f64.sqrt() * sigma)).re;
    Ok(SpiCoordinate { full_line: full, half_line: full * 0.5 * (1.0 + libm::erf(arg)) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum S2Part {
    Quasiclassical,
    Quantum,
}

/// Arc-length grid along vertical-then-real contour from `t` to the pulse end.
fn contour_grid(t: C64, tp: f64, n: usize) -> (Vec<C64>, Vec<C64>) {
    let corner = C64::new(t.re, 0.0);
    let mut pts = Vec::with_capacity(2 * n + 1);
    let mut dts = Vec::with_capacity(2 * n);
    for k in 0..n {
        pts.push(t + (corner - t) * (k as f64 / n as f64));
        dts.push((corner - t) / n as f64);
    }
    for k in 0..=n {
        pts.push(corner + (tp - t.re) * (k as f64 / n as f64));
        if k < n {
            dts.push(C64::new((tp - t.re) / n as f64, 0.0));
        }
    }
    (pts, dts)
}

/// Cumulative-trapezoid nested sum for one grid.
fn nested_sum(atom: &AtomicSystem, pulse: &HalfCyclePulse, x: C64, t: C64, p: f64, part: S2Part, n: usize) -> Result<C64> {
    let z = atom.charge;
    let tp = pulse.t_end();
    let (pts, dts) = contour_grid(t, tp, n);
    let xs: Vec<C64> = pts.iter().map(|&s| trajectory(pulse, x, t, p, s)).collect();
    let xf = xs[xs.len() - 1];
    let inner_f: Vec<C64> = match part {
        S2Part::Quasiclassical => xs.iter().map(|&q| z / (q * q)).collect(),
        S2Part::Quantum => xs.iter().map(|&q| -2.0 * z / (q * q * q)).collect(),
    };
    // inner(t') = ∫_{t'}^∞ f, built from the end backwards
    let mut inner = vec![C64::new(0.0, 0.0); pts.len()];
    inner[pts.len() - 1] = match part {
        S2Part::Quasiclassical => z / (p * xf),
        S2Part::Quantum => -z / (p * xf * xf),
    };
    for k in (0..pts.len() - 1).rev() {
        inner[k] = inner[k + 1] + 0.5 * dts[k] * (inner_f[k] + inner_f[k + 1]);
    }
    let outer_f: Vec<C64> = match part {
        S2Part::Quasiclassical => inner.iter().map(|g| 0.5 * g * g).collect(),
        S2Part::Quantum => inner.iter().map(|g| 0.5 * g).collect(),
    };
    let mut total = match part {
        S2Part::Quasiclassical => z * z / (2.0 * p.powi(3) * xf),
        S2Part::Quantum => -z / (2.0 * p * p * xf),
    };
    for k in 0..pts.len() - 1 {
        total += 0.5 * dts[k] * (outer_f[k] + outer_f[k + 1]);
    }
    Ok(total)
}

/// `S2qc = ∫ G²/2` or the quantum double integral `½ ∫∫ V''`, by nested sums with Romberg extrapolation.
///
/// The quantum part is returned as the real-time double integral `Q`; the
/// action itself is `-i Q`.
pub fn nested_riemann_s2(atom: &AtomicSystem, pulse: &HalfCyclePulse, x: C64, t: C64, p: f64, part: S2Part) -> Result<QuadratureReport> {
    if atom.charge == 0.0 {
        return Ok(QuadratureReport { value: C64::new(0.0, 0.0), error: 0.0, nodes: 0 });
    }
    if !(p > 0.0) {
        return Err(Error::Domain("Coulomb tail needs a positive final momentum"));
    }
    let mut n = 512;
    let mut table: Vec<Vec<C64>> = Vec::new();
    for _ in 0..9 {
        let mut row = vec![nested_sum(atom, pulse, x, t, p, part, n)?];
        if let Some(prev) = table.last() {
            for (k, pk) in prev.iter().enumerate() {
                let f = 4f64.powi(k as i32 + 1);
                let r = (f * row[k] - pk) / (f - 1.0);
                row.push(r);
            }
            let best = *row.last().unwrap();
            let err = (best - prev.last().unwrap()).norm();
            if err < 1e-7 * best.norm() {
                return Ok(QuadratureReport { value: best, error: err, nodes: 2 * n + 1 });
            }
        }
        table.push(row);
        n *= 2;
    }
    Err(Error::Quadrature("nested sum grid exhausted".into()))
}

/// Natural scales `(x, t)` for finite-difference steps.
fn scales(atom: &AtomicSystem, pulse: &HalfCyclePulse) -> (f64, f64) {
    (atom.ip() / pulse.e0, 1.0 / pulse.omega)
}

fn richardson<F: FnMut(f64) -> Result<C64>>(mut f: F, h: f64) -> Result<C64> {
    let d = |f: &mut F, h: f64| -> Result<C64> { Ok((f(h)? - f(-h)?) / (2.0 * h)) };
    let coarse = d(&mut f, h)?;
    let fine = d(&mut f, 0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Central-difference jet. First partials differentiate the values, second and
/// third partials differentiate the analytic lower partials.
pub fn finite_difference_jet(atom: &AtomicSystem, pulse: &HalfCyclePulse, x: C64, t: C64, p: f64, order: JetOrder) -> Result<ZetaJet> {
    let (sx, st) = scales(atom, pulse);
    let (hx, ht) = (1e-5 * sx, 1e-5 * st);
    let at = |dx: f64, dt: f64| zeta_jet(atom, pulse, x + dx, t + dt, p, order);
    let base = at(0.0, 0.0)?;

    let p2 = |sel: fn(&ZetaJet) -> Partials2| -> Result<Partials2> {
        let v = sel(&base).value;
        let x1 = richardson(|h| Ok(sel(&at(h, 0.0)?).value), hx)?;
        let t1 = richardson(|h| Ok(sel(&at(0.0, h)?).value), ht)?;
        let xx = richardson(|h| Ok(sel(&at(h, 0.0)?).x), hx)?;
        let xt = richardson(|h| Ok(sel(&at(0.0, h)?).x), ht)?;
        let tt = richardson(|h| Ok(sel(&at(0.0, h)?).t), ht)?;
        Ok(Partials2 { value: v, x: x1, t: t1, xx, xt, tt })
    };
    let p1 = |sel: fn(&ZetaJet) -> Partials1| -> Result<Partials1> {
        let v = sel(&base).value;
        let x1 = richardson(|h| Ok(sel(&at(h, 0.0)?).value), hx)?;
        let t1 = richardson(|h| Ok(sel(&at(0.0, h)?).value), ht)?;
        Ok(Partials1 { value: v, x: x1, t: t1 })
    };

    let zeta0 = p2(|j| j.zeta0)?;
    let third = [
        richardson(|h| Ok(at(h, 0.0)?.zeta0.xx), hx)?,
        richardson(|h| Ok(at(0.0, h)?.zeta0.xx), ht)?,
        richardson(|h| Ok(at(0.0, h)?.zeta0.xt), ht)?,
        richardson(|h| Ok(at(0.0, h)?.zeta0.tt), ht)?,
    ];
    let mut jet = ZetaJet { zeta0, zeta0_third: third, ..base };
    if order >= JetOrder::First && atom.charge != 0.0 {
        jet.zeta1 = p2(|j| j.zeta1)?;
    }
    if order == JetOrder::Second && atom.charge != 0.0 {
        jet.zeta2_qc = p1(|j| j.zeta2_qc)?;
        jet.zeta2_qu = p1(|j| j.zeta2_qu)?;
    }
    Ok(jet)
}

/// Relative size `|∂ttt ζ0|² / (72 |∂tt ζ0|³)` of the cubic term in the time integral.
pub fn third_order_spi_estimate(jet: &ZetaJet) -> f64 {
    let tt = jet.zeta0.tt;
    let ttt = jet.zeta0_third[3];
    ttt.norm_sqr() / (72.0 * tt.norm().powi(3))
}

/// Leading amplitude correction `1 + 5 ζ_ttt² / (24 (-ζ_tt)³)` from the cubic term.
pub fn third_order_factor(jet: &ZetaJet) -> C64 {
    let tt = jet.zeta0.tt;
    let ttt = jet.zeta0_third[3];
    1.0 + 5.0 * ttt * ttt / (24.0 * (-tt).powi(3))
}

/// S0 peak located with and without the cubic correction factor, `(plain, corrected)`.
pub fn third_order_peak(atom: &AtomicSystem, pulse: &HalfCyclePulse) -> Result<(f64, f64)> {
    let p0 = pulse.a0();
    let w = ppt_reference(atom, pulse).width;
    let (lo, hi, tol) = (p0 - 3.0 * w, p0 + 3.0 * w, 1e-9 * p0.max(1.0));
    let with = |corr: bool| {
        golden_max(
            |p| {
                let parts = log_parts(atom, pulse, p, JetOrder::Zeroth)?;
                let mut l = parts.l0;
                if corr {
                    l += third_order_factor(&parts.jet).ln();
                }
                Ok(2.0 * l.re)
            },
            lo,
            hi,
            tol,
        )
        .map(|(p, _)| p)
    };
    Ok((with(false)?, with(true)?))
}

/// Newton solve of `∇(ζ0 + λ ζ1 + λ² ζ2) = 0` from the zeroth-order saddle,
/// with a finite-difference Jacobian.
pub fn direct_saddle(atom: &AtomicSystem, pulse: &HalfCyclePulse, p: f64, lambda: f64, quantum: bool) -> Result<(C64, C64)> {
    let (mut x, mut t) = solve_zeroth(atom, pulse, p)?;
    let grad = |x: C64, t: C64| -> Result<[C64; 2]> {
        let j = zeta_jet(atom, pulse, x, t, p, JetOrder::Second)?;
        let z2 = if quantum { j.zeta2() } else { j.zeta2_qc };
        let l2 = lambda * lambda;
        Ok([j.zeta0.x + lambda * j.zeta1.x + l2 * z2.x, j.zeta0.t + lambda * j.zeta1.t + l2 * z2.t])
    };
    let (sx, st) = scales(atom, pulse);
    let d = DerivedParams::new(atom, pulse);
    let scale = atom.kappa * d.es;
    for _ in 0..40 {
        let g = grad(x, t)?;
        if norm2(g) < 1e-12 * scale.max(atom.kappa) {
            return Ok((x, t));
        }
        let (hx, ht) = (1e-6 * sx, 1e-6 * st);
        let gxp = grad(x + hx, t)?;
        let gxm = grad(x - hx, t)?;
        let gtp = grad(x, t + ht)?;
        let gtm = grad(x, t - ht)?;
        let m = [
            [(gxp[0] - gxm[0]) / (2.0 * hx), (gtp[0] - gtm[0]) / (2.0 * ht)],
            [(gxp[1] - gxm[1]) / (2.0 * hx), (gtp[1] - gtm[1]) / (2.0 * ht)],
        ];
        let s = solve2(m, [-g[0], -g[1]])?;
        x += s[0];
        t += s[1];
        if s[0].norm() < 1e-13 * x.norm() && s[1].norm() < 1e-13 * t.norm() {
            return Ok((x, t));
        }
    }
    Err(Error::NoConvergence { what: "direct saddle", iterations: 40 })
}
