//! Adaptive Dormand–Prince 5(4) integration along straight segments in the
//! complex time plane.
//!
//! A segment `ta -> tb` is parametrized as `t = ta + s (tb - ta)`, `s in [0, 1]`,
//! so the step control works on a real variable while the state stays complex.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rtol: 1e-12, atol: 1e-14 }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const MAX_STEPS: usize = 200_000;

fn axpy<const N: usize>(y: &[C64; N], terms: &[(f64, &[C64; N])], h: f64) -> [C64; N] {
    let mut out = *y;
    for (c, k) in terms {
        let s = c * h;
        for i in 0..N {
            out[i] += s * k[i];
        }
    }
    out
}

/// Integrates `dy/dt = f(t, y)` from `ta` to `tb` along the straight segment.
///
/// `observe` is called after every accepted step with `(t, y)`.
pub fn integrate<const N: usize, F, O>(
    mut f: F,
    ta: C64,
    tb: C64,
    y0: [C64; N],
    tol: Tolerance,
    mut observe: O,
) -> Result<[C64; N]>
where
    F: FnMut(C64, &[C64; N]) -> Result<[C64; N]>,
    O: FnMut(C64, &[C64; N]),
{
    let dt = tb - ta;
    if dt.norm() == 0.0 {
        return Ok(y0);
    }
    let mut rhs = |s: f64, y: &[C64; N]| -> Result<[C64; N]> {
        let mut d = f(ta + s * dt, y)?;
        for v in d.iter_mut() {
            *v *= dt;
        }
        Ok(d)
    };

    let mut s = 0.0;
    let mut y = y0;
    let mut k1 = rhs(0.0, &y)?;
    let mut h = initial_step(&y, &k1, tol);
    let mut steps = 0usize;

    while s < 1.0 {
        if steps >= MAX_STEPS {
            return Err(Error::NoConvergence { what: "ode integration", iterations: steps });
        }
        steps += 1;
        if s + h > 1.0 {
            h = 1.0 - s;
        }
        if h < 1e-15 {
            return Err(Error::StepUnderflow(ta + s * dt));
        }

        let k2 = rhs(s + C2 * h, &axpy(&y, &[(A21, &k1)], h))?;
        let k3 = rhs(s + C3 * h, &axpy(&y, &[(A31, &k1), (A32, &k2)], h))?;
        let k4 = rhs(s + C4 * h, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h))?;
        let k5 = rhs(s + C5 * h, &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h))?;
        let k6 = rhs(
            s + h,
            &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h),
        )?;
        let y_new = axpy(&y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], h);
        let k7 = rhs(s + h, &y_new)?;

        let mut err = 0.0f64;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = tol.atol + tol.rtol * y[i].norm().max(y_new[i].norm());
            err = err.max(e.norm() / sc);
        }

        if err <= 1.0 {
            s = if s + h >= 1.0 - 1e-15 { 1.0 } else { s + h };
            y = y_new;
            k1 = k7;
            observe(ta + s * dt, &y);
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
    }
    Ok(y)
}

fn initial_step<const N: usize>(y: &[C64; N], k: &[C64; N], tol: Tolerance) -> f64 {
    let mut d0 = 0.0f64;
    let mut d1 = 0.0f64;
    for i in 0..N {
        let sc = tol.atol + tol.rtol * y[i].norm();
        d0 = d0.max(y[i].norm() / sc);
        d1 = d1.max(k[i].norm() / sc);
    }
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.clamp(1e-8, 0.1)
}

/// Integrates along a polyline, visiting the nodes in order.
pub fn integrate_path<const N: usize, F, O>(
    mut f: F,
    nodes: &[C64],
    y0: [C64; N],
    tol: Tolerance,
    mut observe: O,
) -> Result<[C64; N]>
where
    F: FnMut(C64, &[C64; N]) -> Result<[C64; N]>,
    O: FnMut(C64, &[C64; N]),
{
    let mut y = y0;
    for w in nodes.windows(2) {
        y = integrate(&mut f, w[0], w[1], y, tol, &mut observe)?;
    }
    Ok(y)
}
