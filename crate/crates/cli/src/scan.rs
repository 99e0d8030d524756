use ccsfa::amplitude::{amplitude, arm_peak, peak_with_reference, pmd, ppt_reference, shift_estimate, ShiftRegime};
use ccsfa::hqa::{hqa_probability, shoot};
use ccsfa::model::DerivedParams;
use ccsfa::{AtomicSystem, HalfCyclePulse, PeakMethod, StartPoint, Variant};
use rayon::prelude::*;

use crate::settings::{Range, Settings, SpecError, SpecResult, VariantSet};
use crate::table::{cell_text, num, Panel, Table};

/// Axis of a shift scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Reduced field `f = E0/κ³` at fixed γ.
    Field,
    /// Keldysh parameter at fixed ω (or fixed E0).
    Gamma,
}

struct Row {
    cells: Vec<String>,
    errors: Vec<String>,
}

impl Row {
    fn new() -> Row {
        Row { cells: Vec::new(), errors: Vec::new() }
    }

    fn push(&mut self, x: Option<f64>) {
        self.cells.push(num(x));
    }

    fn fail(&mut self, what: &str, e: impl std::fmt::Display) {
        self.errors.push(format!("{what}: {e}"));
    }

    fn finish(mut self) -> Vec<String> {
        self.cells.push(cell_text(&self.errors.join(" | ")));
        self.cells
    }
}

fn shift_header(variants: &VariantSet, first: &[&str]) -> Vec<String> {
    let mut h: Vec<String> = first.iter().map(|s| s.to_string()).collect();
    for v in &variants.variants {
        for col in ["shift", "peak_probability", "ratio_to_arm"] {
            h.push(format!("{col}_{v}"));
        }
    }
    h.push("estimate_static".into());
    h.push("estimate_nonadiabatic".into());
    if variants.hqa {
        for col in ["shift_HQA", "peak_probability_HQA", "ratio_to_arm_HQA", "ts_re_HQA", "ts_im_HQA", "exit_HQA"] {
            h.push(col.into());
        }
    }
    h.push("error".into());
    h
}

fn shift_row(atom: &AtomicSystem, pulse: Result<HalfCyclePulse, ccsfa::Error>, x: f64, variants: &VariantSet) -> Vec<String> {
    let mut row = Row::new();
    row.push(Some(x));
    let pulse = match pulse {
        Ok(p) => p,
        Err(e) => {
            let width = shift_header(variants, &["", "", "", ""]).len() - 1;
            row.cells.resize(width, String::new());
            row.fail("pulse", e);
            return row.finish();
        }
    };
    let d = DerivedParams::new(atom, &pulse);
    row.push(Some(pulse.e0));
    row.push(Some(pulse.omega));
    row.push(Some(d.gamma));

    let arm = arm_peak(atom, &pulse, PeakMethod::Perturbative);
    if let Err(e) = &arm {
        row.fail("ARM", e);
    }
    let ratio = |lp: f64| arm.as_ref().ok().map(|a| (lp - a.log_probability).exp());
    for &v in &variants.variants {
        if v == Variant::Ppt {
            match amplitude(atom, &pulse, pulse.a0(), v) {
                Ok(a) => {
                    row.push(Some(0.0));
                    row.push(Some(a.probability));
                    row.push(ratio(a.log_probability()));
                }
                Err(e) => {
                    (0..3).for_each(|_| row.push(None));
                    row.fail(v.name(), e);
                }
            }
            continue;
        }
        let result = match &arm {
            Ok(a) => peak_with_reference(atom, &pulse, v, PeakMethod::Perturbative, a).map(|r| (r.coulomb_shift, r.probability, Some(r.ratio_to_arm))),
            Err(_) => ccsfa::amplitude::peak(atom, &pulse, v, PeakMethod::Perturbative).map(|r| (r.coulomb_shift, r.probability, None)),
        };
        match result {
            Ok((s, p, r)) => {
                row.push(Some(s));
                row.push(Some(p));
                row.push(r);
            }
            Err(e) => {
                (0..3).for_each(|_| row.push(None));
                row.fail(v.name(), e);
            }
        }
    }
    row.push(shift_estimate(atom, &pulse, ShiftRegime::Static).ok());
    row.push(shift_estimate(atom, &pulse, ShiftRegime::Nonadiabatic).ok());
    if variants.hqa {
        let h = shoot(atom, &pulse, StartPoint::Full).and_then(|h| hqa_probability(atom, &pulse, &h).map(|p| (h, p)));
        match h {
            Ok((h, p)) => {
                row.push(Some(pulse.a0() - h.p_final));
                row.push(Some(p));
                row.push(arm.as_ref().ok().map(|a| p / a.log_probability.exp()));
                row.push(Some(h.ts.re));
                row.push(Some(h.ts.im));
                row.push(Some(h.xe));
            }
            Err(e) => {
                (0..6).for_each(|_| row.push(None));
                row.fail("HQA", e);
            }
        }
    }
    row.finish()
}

fn atom_comment(atom: &AtomicSystem) -> String {
    format!("kappa={} Z={}", atom.kappa, atom.charge)
}

/// Coulomb shift and peak probability along the field or γ axis.
pub fn shift_scan(s: &Settings, axis: Axis) -> SpecResult<Table> {
    let atom = s.atom;
    let (xname, range, fixed): (&str, Range, String) = match axis {
        Axis::Field => {
            let r = s.f_range.ok_or_else(|| SpecError("scan-field needs --f-range".into()))?;
            if s.e0.is_some() || s.omega.is_some() {
                return Err(SpecError("scan-field takes --gamma, not --E0 or --omega".into()));
            }
            ("f", r, format!("gamma={}", s.gamma_or(0.1)?))
        }
        Axis::Gamma => {
            let r = s.gamma_range.ok_or_else(|| SpecError("scan-gamma needs --gamma-range".into()))?;
            if s.gamma.is_some() {
                return Err(SpecError("scan-gamma takes --omega or --E0, not --gamma".into()));
            }
            let fixed = match (s.omega, s.e0) {
                (Some(_), Some(_)) => return Err(SpecError("scan-gamma takes one of --omega, --E0".into())),
                (_, Some(e0)) => format!("E0={e0}"),
                (w, None) => format!("omega={}", w.unwrap_or(0.02)),
            };
            ("gamma", r, fixed)
        }
    };
    let gamma = s.gamma_or(0.1)?;
    let omega = s.omega.unwrap_or(0.02);
    let pulse_at = |x: f64| match axis {
        Axis::Field => HalfCyclePulse::from_gamma_f(&atom, gamma, x),
        Axis::Gamma => match s.e0 {
            Some(e0) => HalfCyclePulse::new(e0, x * e0 / atom.kappa),
            None => HalfCyclePulse::from_omega_gamma(&atom, omega, x),
        },
    };
    let rows: Vec<Vec<String>> = range.values().par_iter().map(|&x| shift_row(&atom, pulse_at(x), x, &s.variants)).collect();
    let mut t = Table::new(shift_header(&s.variants, &[xname, "E0", "omega", "gamma"]));
    t.comments.push(format!("scan={} {} {}", xname, atom_comment(&atom), fixed));
    t.rows = rows;
    Ok(t)
}

pub fn shift_panels(t: &Table) -> Vec<Panel> {
    let pick = |prefix: &str| t.header.iter().filter(|h| h.starts_with(prefix)).cloned().collect::<Vec<_>>();
    let mut shifts = pick("shift_");
    shifts.extend(pick("estimate_"));
    vec![
        Panel { ylabel: "p0 - p_m (a.u.)".into(), curves: shifts, logscale_y: false },
        Panel { ylabel: "P / P_ARM".into(), curves: pick("ratio_to_arm_"), logscale_y: false },
    ]
}

/// Momentum distribution on a grid, raw and normalized to the maximum.
pub fn pmd_scan(s: &Settings) -> SpecResult<Table> {
    if s.variants.hqa {
        return Err(SpecError("HQA gives only the peak; it has no pmd column".into()));
    }
    let atom = s.atom;
    let pulse = s.pulse()?;
    let grid = match s.p_range {
        Some(r) => r.values(),
        None => {
            let w = ppt_reference(&atom, &pulse).width;
            Range { start: pulse.a0() - 3.0 * w, stop: pulse.a0() + 3.0 * w, points: 121, spacing: crate::settings::Spacing::Linear }.values()
        }
    };
    let columns: Vec<Vec<Result<f64, ccsfa::Error>>> = s
        .variants
        .variants
        .par_iter()
        .map(|&v| pmd(&atom, &pulse, &grid, v).into_iter().map(|pt| pt.probability).collect())
        .collect();
    let maxima: Vec<Option<f64>> = columns
        .iter()
        .map(|c| c.iter().filter_map(|r| r.as_ref().ok().copied()).fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v)))))
        .collect();

    let mut header = vec!["p".to_string()];
    header.extend(s.variants.variants.iter().map(|v| format!("probability_{v}")));
    header.extend(s.variants.variants.iter().map(|v| format!("normalized_{v}")));
    header.push("error".into());
    let mut t = Table::new(header);
    let d = DerivedParams::new(&atom, &pulse);
    t.comments.push(format!("scan=pmd {} E0={} omega={} gamma={}", atom_comment(&atom), pulse.e0, pulse.omega, d.gamma));
    for (i, &p) in grid.iter().enumerate() {
        let mut row = Row::new();
        row.push(Some(p));
        for (c, v) in columns.iter().zip(&s.variants.variants) {
            match &c[i] {
                Ok(x) => row.push(Some(*x)),
                Err(e) => {
                    row.push(None);
                    row.fail(v.name(), e);
                }
            }
        }
        for (c, m) in columns.iter().zip(&maxima) {
            row.push(match (&c[i], m) {
                (Ok(x), Some(m)) if *m > 0.0 => Some(x / m),
                _ => None,
            });
        }
        t.rows.push(row.finish());
    }
    Ok(t)
}

pub fn pmd_panels(t: &Table) -> Vec<Panel> {
    let curves = t.header.iter().filter(|h| h.starts_with("normalized_")).cloned().collect();
    vec![Panel { ylabel: "w(p) / max".into(), curves, logscale_y: false }]
}

/// Complex classical trajectories: a single pulse, or an `--f-range` scan at fixed γ.
pub fn hqa_scan(s: &Settings) -> SpecResult<Table> {
    let atom = s.atom;
    let pulses: Vec<(f64, Result<HalfCyclePulse, ccsfa::Error>)> = match s.f_range {
        Some(r) => {
            let g = s.gamma_or(0.1)?;
            r.values().into_iter().map(|f| (f, HalfCyclePulse::from_gamma_f(&atom, g, f))).collect()
        }
        None => {
            let p = s.pulse()?;
            vec![(p.e0 / atom.ea(), Ok(p))]
        }
    };
    let header: Vec<String> = [
        "f", "E0", "omega", "gamma", "ts_re", "ts_im", "exit_time", "exit", "p_final", "shift", "probability", "residual", "iterations", "error",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let width = header.len() - 1;
    let rows = pulses
        .par_iter()
        .map(|(f, pulse)| {
            let mut row = Row::new();
            row.push(Some(*f));
            match pulse {
                Err(e) => row.fail("pulse", e),
                Ok(pulse) => {
                    row.push(Some(pulse.e0));
                    row.push(Some(pulse.omega));
                    row.push(Some(DerivedParams::new(&atom, pulse).gamma));
                    match shoot(&atom, pulse, StartPoint::Full) {
                        Ok(h) => {
                            for v in [h.ts.re, h.ts.im, h.te, h.xe, h.p_final, pulse.a0() - h.p_final] {
                                row.push(Some(v));
                            }
                            match hqa_probability(&atom, pulse, &h) {
                                Ok(p) => row.push(Some(p)),
                                Err(e) => {
                                    row.push(None);
                                    row.fail("probability", e);
                                }
                            }
                            row.push(Some(h.residual));
                            row.cells.push(h.iterations.to_string());
                        }
                        Err(e) => row.fail("shooting", e),
                    }
                }
            }
            row.cells.resize(width, String::new());
            row.finish()
        })
        .collect();
    let mut t = Table::new(header);
    t.comments.push(format!("scan=hqa {}", atom_comment(&atom)));
    t.rows = rows;
    Ok(t)
}

pub fn hqa_panels() -> Vec<Panel> {
    vec![Panel { ylabel: "p0 - p_final (a.u.)".into(), curves: vec!["shift".into()], logscale_y: false }]
}
