use ccsfa::actions::{coulomb_integrals, zeta0, Contour};
use ccsfa::amplitude::{amplitude, capture_factor, pmd, ppt_reference};
use ccsfa::hqa::{initial_conditions, StartPoint};
use ccsfa::model::{field_at, vector_potential_at, vector_potential_integral, volkov_energy_integral};
use ccsfa::ode::Tolerance;
use ccsfa::saddle::solve_zeroth;
use ccsfa::{AtomicSystem, HalfCyclePulse, Variant, C64};
use proptest::prelude::*;

fn pulse_strategy() -> impl Strategy<Value = (f64, f64)> {
    // (f, gamma) inside the tunnelling regime
    (0.008f64..0.04, 0.05f64..0.8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn field_is_derivative_of_vector_potential(re in -0.95f64..0.95, im in -0.5f64..0.5) {
        let pulse = HalfCyclePulse::new(0.03, 0.004).unwrap();
        let t = C64::new(re, im) * pulse.t_end();
        let h = 1e-3;
        let d = (vector_potential_at(&pulse, t + h) - vector_potential_at(&pulse, t - h)) / (2.0 * h);
        prop_assert!((d - field_at(&pulse, t)).norm() < 1e-8);
        let di = (vector_potential_integral(&pulse, t + h) - vector_potential_integral(&pulse, t - h)) / (2.0 * h);
        prop_assert!((di - vector_potential_at(&pulse, t)).norm() < 1e-6 * pulse.a0());
    }

    #[test]
    fn volkov_integral_derivative(re in -1.5f64..1.5, im in -0.4f64..0.4, p in 2.0f64..12.0) {
        let pulse = HalfCyclePulse::new(0.03, 0.004).unwrap();
        let t = C64::new(re * pulse.t_end(), im * pulse.t_end());
        let h = 1e-3;
        let d = (volkov_energy_integral(&pulse, p, t + h) - volkov_energy_integral(&pulse, p, t - h)) / (2.0 * h);
        let v = p + vector_potential_at(&pulse, t);
        prop_assert!((d - 0.5 * v * v).norm() < 1e-6 * (1.0 + v.norm_sqr()));
    }

    #[test]
    fn zeroth_saddle_solves_gradient((f, g) in pulse_strategy(), dp in -1.0f64..1.0) {
        let atom = AtomicSystem::new(1.0, 1.0).unwrap();
        let pulse = HalfCyclePulse::from_gamma_f(&atom, g, f).unwrap();
        let width = ppt_reference(&atom, &pulse).width;
        let p = pulse.a0() + dp * width;
        let (x, t) = solve_zeroth(&atom, &pulse, p).unwrap();
        let (j, _) = zeta0(&atom, &pulse, x, t, p).unwrap();
        prop_assert!(j.x.norm() < 1e-9 && j.t.norm() < 1e-9 * f);
        prop_assert!(x.re > 0.0 && t.im > 0.0);
    }

    #[test]
    fn zero_charge_reduces_to_s0((f, g) in pulse_strategy(), dp in -1.0f64..1.0) {
        let atom = AtomicSystem::new(1.0, 0.0).unwrap();
        let pulse = HalfCyclePulse::from_gamma_f(&atom, g, f).unwrap();
        let p = pulse.a0() + dp * ppt_reference(&atom, &pulse).width;
        let s0 = amplitude(&atom, &pulse, p, Variant::S0).unwrap();
        for v in [Variant::S1, Variant::S2qc, Variant::S2qu] {
            prop_assert_eq!(amplitude(&atom, &pulse, p, v).unwrap().m, s0.m);
        }
    }

    #[test]
    fn s0_distribution_is_symmetric((f, g) in pulse_strategy(), dp in 0.05f64..1.0) {
        let atom = AtomicSystem::new(1.0, 0.0).unwrap();
        let pulse = HalfCyclePulse::from_gamma_f(&atom, g, f).unwrap();
        let d = dp * ppt_reference(&atom, &pulse).width;
        let grid = [pulse.a0() - d, pulse.a0() + d];
        let pts = pmd(&atom, &pulse, &grid, Variant::S0);
        let (a, b) = (pts[0].probability.clone().unwrap(), pts[1].probability.clone().unwrap());
        prop_assert!((a / b - 1.0).abs() < 1e-10);
    }

    #[test]
    fn coulomb_integrals_are_linear_in_charge(z in 0.1f64..1.0) {
        let pulse = HalfCyclePulse::new(0.02, 0.002).unwrap();
        let one = AtomicSystem::new(1.0, 1.0).unwrap();
        let atom = AtomicSystem::new(1.0, z).unwrap();
        let p = pulse.a0();
        let (x, t) = solve_zeroth(&one, &pulse, p).unwrap();
        let c = Contour::vertical_then_real(t, pulse.t_end());
        let a = coulomb_integrals(&one, &pulse, x, t, p, &c, Tolerance::default()).unwrap();
        let b = coulomb_integrals(&atom, &pulse, x, t, p, &c, Tolerance::default()).unwrap();
        prop_assert!((b.s1 - z * a.s1).norm() < 1e-9 * a.s1.norm());
        prop_assert!((b.s2qc - z * z * a.s2qc).norm() < 1e-9 * a.s2qc.norm());
        prop_assert!((b.q - z * a.q).norm() < 1e-9 * a.q.norm());
    }

    #[test]
    fn contour_independence(frac in 0.1f64..0.9, shift in -30.0f64..60.0) {
        let atom = AtomicSystem::new(1.0, 1.0).unwrap();
        let pulse = HalfCyclePulse::new(0.02, 0.002).unwrap();
        let p = pulse.a0() - 0.3;
        let (x, t) = solve_zeroth(&atom, &pulse, p).unwrap();
        let a = coulomb_integrals(&atom, &pulse, x, t, p, &Contour::vertical_then_real(t, pulse.t_end()), Tolerance::default()).unwrap();
        let alt = Contour::custom(vec![t, C64::new(t.re + shift, frac * t.im), C64::new(pulse.t_end(), 0.0)]).unwrap();
        let b = coulomb_integrals(&atom, &pulse, x, t, p, &alt, Tolerance::default()).unwrap();
        for (u, v) in [(a.s1, b.s1), (a.i1, b.i1), (a.s2qc, b.s2qc), (a.q, b.q)] {
            prop_assert!((u - v).norm() < 1e-8 * u.norm(), "{} vs {}", u, v);
        }
    }

    #[test]
    fn start_velocity_charge_dependence(im in 10.0f64..60.0, z in 0.0f64..2.0) {
        let pulse = HalfCyclePulse::new(0.02, 0.002).unwrap();
        let ts = C64::new(0.0, im);
        let (x0, v0) = initial_conditions(&AtomicSystem::new(1.0, 0.0).unwrap(), &pulse, ts, StartPoint::Simplified).unwrap();
        let (x1, v1) = initial_conditions(&AtomicSystem::new(1.0, z).unwrap(), &pulse, ts, StartPoint::Simplified).unwrap();
        prop_assert_eq!(x0, x1);
        prop_assert!((v1 - v0 + C64::new(0.0, z) / x0).norm() < 1e-14);
    }

    #[test]
    fn capture_factor_unity_at_e_over_2(z in 0.0f64..3.0, k in 0.5f64..2.0) {
        let atom = AtomicSystem::new(k, z).unwrap();
        prop_assert!((capture_factor(&atom, std::f64::consts::E / 2.0).unwrap() - 1.0).abs() < 1e-14);
    }
}
