use std::f64::consts::{E, PI};

use ccsfa::actions::{coulomb_integrals, zeta_jet, Contour};
use ccsfa::amplitude::{amplitude, capture_factor, peak, ppt_reference, shift_estimate, ShiftRegime};
use ccsfa::hqa::{hqa_probability, shoot};
use ccsfa::ode::Tolerance;
use ccsfa::oracle::{direct_saddle, exact_x_amplitude, finite_difference_jet, nested_riemann_s2, third_order_peak, third_order_spi_estimate, S2Part};
use ccsfa::saddle::{solve_zeroth, SaddleSolution};
use ccsfa::{AtomicSystem, HalfCyclePulse, JetOrder, PeakMethod, StartPoint, Variant, C64};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Reported only; does not affect the exit status.
    Info,
}

#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

type Outcome = ccsfa::Result<(bool, String)>;

struct Case {
    name: &'static str,
    informational: bool,
    run: fn(&AtomicSystem, &HalfCyclePulse) -> Outcome,
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

fn nested_sums(atom: &AtomicSystem, pulse: &HalfCyclePulse) -> Outcome {
    let p = pulse.a0() - ppt_reference(atom, pulse).width;
    let (x, t) = solve_zeroth(atom, pulse, p)?;
    let c = coulomb_integrals(atom, pulse, x, t, p, &Contour::vertical_then_real(t, pulse.t_end()), Tolerance::default())?;
    let qc = nested_riemann_s2(atom, pulse, x, t, p, S2Part::Quasiclassical)?;
    let qu = nested_riemann_s2(atom, pulse, x, t, p, S2Part::Quantum)?;
    let (a, b) = (rel(qc.value, c.s2qc), rel(qu.value, c.q));
    Ok((a < 1e-6 && b < 1e-6, format!("quasiclassical {a:.2e}, quantum {b:.2e} (tol 1e-6)")))
}

fn jets(atom: &AtomicSystem, pulse: &HalfCyclePulse) -> Outcome {
    let p = pulse.a0();
    let (x0, t0) = solve_zeroth(atom, pulse, p)?;
    let (x, t) = (x0 + C64::new(0.3, 0.1), t0 + C64::new(1.0, -2.0));
    let an = zeta_jet(atom, pulse, x, t, p, JetOrder::Second)?;
    let fd = finite_difference_jet(atom, pulse, x, t, p, JetOrder::Second)?;
    let pairs = [
        (an.zeta0.xx, fd.zeta0.xx),
        (an.zeta0.tt, fd.zeta0.tt),
        (an.zeta1.x, fd.zeta1.x),
        (an.zeta1.t, fd.zeta1.t),
        (an.zeta1.xt, fd.zeta1.xt),
        (an.zeta2_qc.x, fd.zeta2_qc.x),
        (an.zeta2_qu.t, fd.zeta2_qu.t),
    ];
    let worst = pairs.iter().map(|&(a, b)| rel(b, a)).fold(0.0, f64::max);
    Ok((worst < 1e-6, format!("max relative deviation {worst:.2e} (tol 1e-6)")))
}

fn coordinate_spi(atom: &AtomicSystem, pulse: &HalfCyclePulse) -> Outcome {
    let free = AtomicSystem::new(atom.kappa, 0.0)?;
    let p = pulse.a0();
    let r = exact_x_amplitude(&free, pulse, p, Variant::S0)?;
    let ratio = r.value.norm_sqr() / (ppt_reference(&free, pulse).sfa0_probability(p) / (PI / E));
    Ok(((ratio - 1.0).abs() < 0.03, format!("|M_x|^2 / (P_SFA0 e/pi) = {ratio:.4} (tol 3%)")))
}

fn third_order(atom: &AtomicSystem, pulse: &HalfCyclePulse) -> Outcome {
    let p = pulse.a0();
    let (x, t) = solve_zeroth(atom, pulse, p)?;
    let est = third_order_spi_estimate(&zeta_jet(atom, pulse, x, t, p, JetOrder::Zeroth)?);
    let f = pulse.e0 / atom.ea();
    let (plain, corrected) = third_order_peak(atom, pulse)?;
    let dp = (plain - corrected).abs() / ppt_reference(atom, pulse).width;
    Ok((est < f / 36.0 && dp < 1e-3, format!("estimate {est:.3e} (< f/36 = {:.3e}), peak moves {dp:.1e} widths", f / 36.0)))
}

fn zero_charge(atom: &AtomicSystem, pulse: &HalfCyclePulse) -> Outcome {
    let free = AtomicSystem::new(atom.kappa, 0.0)?;
    let p = pulse.a0();
    let s0 = amplitude(&free, pulse, p, Variant::S0)?.m;
    let mut worst = 0.0f64;
    for v in [Variant::S1, Variant::S2qc, Variant::S2qu] {
        worst = worst.max(rel(amplitude(&free, pulse, p, v)?.m, s0));
    }
    let sfa = ppt_reference(&free, pulse).sfa0_probability(p);
    let r = s0.norm_sqr() / sfa;
    Ok((worst < 1e-12 && (r - 1.0).abs() < 0.05, format!("variants equal S0 to {worst:.1e}, S0/SFA0 = {r:.4}")))
}

fn capture(atom: &AtomicSystem, _: &HalfCyclePulse) -> Outcome {
    let c = capture_factor(atom, E / 2.0)?;
    Ok(((c - 1.0).abs() < 1e-14, format!("factor at gamma = e/2 is {c}")))
}

fn peak_methods(atom: &AtomicSystem, pulse: &HalfCyclePulse) -> Outcome {
    let w = ppt_reference(atom, pulse).width;
    let mut worst = 0.0f64;
    for v in [Variant::S1, Variant::S2qc] {
        let r = peak(atom, pulse, v, PeakMethod::Direct)?;
        let pert: f64 = r.p_orders.iter().sum();
        worst = worst.max((pert - r.p_m).abs() / w);
    }
    Ok((worst < 0.01, format!("perturbative vs golden-section peak {worst:.2e} widths (tol 1e-2)")))
}

fn hqa_free(atom: &AtomicSystem, pulse: &HalfCyclePulse) -> Outcome {
    let free = AtomicSystem::new(atom.kappa, 0.0)?;
    let h = shoot(&free, pulse, StartPoint::Full)?;
    let r = hqa_probability(&free, pulse, &h)? / ppt_reference(&free, pulse).sfa0_probability(h.p_final);
    Ok(((r - 1.0).abs() < 0.05 && h.residual < 1e-8, format!("Z=0 trajectory probability / SFA0 = {r:.4}, residual {:.1e}", h.residual)))
}

fn direct_literal(atom: &AtomicSystem, pulse: &HalfCyclePulse) -> Outcome {
    let p = pulse.a0();
    let mut parts = Vec::new();
    for quantum in [false, true] {
        let s = SaddleSolution::solve(atom, pulse, p, quantum)?;
        let (x, t) = direct_saddle(atom, pulse, p, 1.0, quantum)?;
        let (xp, tp) = (s.x0 + s.x1 + s.x2, s.t0 + s.t1 + s.t2);
        parts.push(format!("{}: x {:.2e}, t {:.2e}", if quantum { "quantum" } else { "quasiclassical" }, rel(xp, x), rel(tp, t)));
    }
    Ok((true, format!("perturbative vs direct saddle at lambda=1: {}", parts.join("; "))))
}

fn static_estimate(atom: &AtomicSystem, pulse: &HalfCyclePulse) -> Outcome {
    let est = shift_estimate(atom, pulse, ShiftRegime::Static)?;
    let r = peak(atom, pulse, Variant::S1, PeakMethod::Perturbative)?;
    let d = r.coulomb_shift / est - 1.0;
    Ok((true, format!("S1 shift {:.4} vs pi Z E0/kappa^3 = {est:.4} ({:+.1}%)", r.coulomb_shift, 100.0 * d)))
}

const CASES: [Case; 10] = [
    Case { name: "nested-sums", informational: false, run: nested_sums },
    Case { name: "jets-vs-fd", informational: false, run: jets },
    Case { name: "coordinate-spi", informational: false, run: coordinate_spi },
    Case { name: "third-order", informational: false, run: third_order },
    Case { name: "zero-charge", informational: false, run: zero_charge },
    Case { name: "capture-factor", informational: false, run: capture },
    Case { name: "peak-methods", informational: false, run: peak_methods },
    Case { name: "hqa-zero-charge", informational: false, run: hqa_free },
    Case { name: "direct-saddle", informational: true, run: direct_literal },
    Case { name: "static-estimate", informational: true, run: static_estimate },
];

pub fn run(atom: &AtomicSystem, pulse: &HalfCyclePulse) -> Vec<CheckLine> {
    CASES
        .par_iter()
        .map(|c| {
            let (status, detail) = match (c.run)(atom, pulse) {
                Ok((_, d)) if c.informational => (Status::Info, d),
                Ok((true, d)) => (Status::Pass, d),
                Ok((false, d)) => (Status::Fail, d),
                Err(e) if c.informational => (Status::Info, format!("error: {e}")),
                Err(e) => (Status::Fail, format!("error: {e}")),
            };
            CheckLine { name: c.name, status, detail }
        })
        .collect()
}

pub fn render(lines: &[CheckLine]) -> String {
    let mut s = String::new();
    for l in lines {
        let tag = match l.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        };
        s.push_str(&format!("{tag}  {:<16} {}\n", l.name, l.detail));
    }
    let failed = lines.iter().filter(|l| l.status == Status::Fail).count();
    let total = lines.iter().filter(|l| l.status != Status::Info).count();
    s.push_str(&format!("{} of {total} checks passed\n", total - failed));
    s
}
