use proptest::prelude::*;
use zerok_core::phase::{phi_log_derivative, validity_interval, PhaseSolution};
use zerok_core::Error;

/// (v, φ(v), φ′(v)) from 40-digit quadrature, anchored at the interval midpoint.
const FROZEN_01_1: [(f64, f64, f64); 7] = [
    (0.050925345107657551865, -0.37792007959775325964, 3.5262561796736320557),
    (0.23431987867255176689, -0.17361209431205242127, 0.44659499861042892731),
    (0.69280621258478730445, -0.062705808938067392976, 0.15828951594011421666),
    (1.151292546497022842, 0.0, 0.12422599874998831647),
    (1.6097788804092583796, 0.055909360533546635671, 0.12363205282059520629),
    (2.0682652143214939171, 0.11939044853198968541, 0.16980536109517973742),
    (2.2516597478863881322, 0.16020804661840615744, 0.34529027456710657444),
];

const FROZEN_03_1: [(f64, f64, f64); 4] = [
    (0.074652503602275344442, -0.9746916592323033467, 11.696181576162719221),
    (0.32733332999594057346, -0.22996194927695829551, 1.1267713503663256149),
    (0.87663947432999541916, 0.17674631623760570063, 0.65467719934418822367),
    (1.1293203007236606482, 0.39923530880832487243, 1.8114708813220042913),
];

fn check_frozen(c1: f64, c2: f64, interval: (f64, f64), rows: &[(f64, f64, f64)]) {
    let s = PhaseSolution::new(c1, c2).unwrap();
    assert!((s.interval.0 - interval.0).abs() < 1e-12);
    assert!((s.interval.1 - interval.1).abs() < 1e-12);
    for &(v, phi, dphi) in rows {
        let got = s.phi(v).unwrap();
        assert!((got - phi).abs() < 1e-9, "phi({v}) = {got}, want {phi}");
        let d = s.phi_prime(v).unwrap();
        assert!((d - dphi).abs() < 1e-12 * dphi, "phi'({v}) = {d}, want {dphi}");
    }
}

#[test]
fn frozen_high_precision_values() {
    check_frozen(0.1, 1.0, (0.0050767117164339981086, 2.2975083812776116859), &FROZEN_01_1);
    check_frozen(0.3, 1.0, (0.052680257828913150614, 1.151292546497022842), &FROZEN_03_1);
}

#[test]
fn empty_interval_boundary() {
    assert!(matches!(validity_interval(0.5, 1.0), Err(Error::EmptyInterval { .. })));
    assert!(matches!(PhaseSolution::new(0.6, 1.0), Err(Error::EmptyInterval { .. })));
    assert!(validity_interval(0.49, 1.0).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Scaling c1 and c2 by k shifts the whole solution by −ln(k)/2 in v.
    #[test]
    fn scaling_shifts_the_phase(c1 in 0.05f64..0.4, k in 0.5f64..3.0, frac in 0.05f64..0.95) {
        let a = PhaseSolution::new(c1, 1.0).unwrap();
        let b = PhaseSolution::new(k * c1, k).unwrap();
        let shift = -0.5 * k.ln();
        prop_assert!((b.interval.0 - a.interval.0 - shift).abs() < 1e-12);
        let v = a.interval.0 + frac * (a.interval.1 - a.interval.0);
        prop_assert!((b.phi(v + shift).unwrap() - a.phi(v).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn solutions_satisfy_their_equations(c1 in 0.05f64..0.45, frac in 0.05f64..0.95) {
        let s = PhaseSolution::new(c1, 1.0).unwrap();
        let v = s.interval.0 + frac * (s.interval.1 - s.interval.0);
        let (g, h) = s.gh(v).unwrap();
        prop_assert!((g * g + h * h - (1.0 - (-2.0 * v).exp())).abs() < 1e-12);
        let rg = s.coefficient_ode_residual(|x| Ok(s.gh(x)?.0), v).unwrap();
        let rh = s.coefficient_ode_residual(|x| Ok(s.gh(x)?.1), v).unwrap();
        prop_assert!(rg.abs() < 1e-6 && rh.abs() < 1e-6, "{rg} {rh}");
        let rc = s.phase_ode_residual(|x| Ok(s.phi(x)?.cos()), v).unwrap();
        prop_assert!(rc.abs() < 1e-6, "{rc}");
        let lhs = s.fd_log_derivative(v).unwrap();
        let rhs = phi_log_derivative(v, c1, 1.0).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-5 * rhs.abs().max(1.0), "{lhs} {rhs}");
    }

    #[test]
    fn phase_is_increasing(c1 in 0.05f64..0.45, a in 0.01f64..0.99, b in 0.01f64..0.99) {
        prop_assume!((a - b).abs() > 1e-6);
        let s = PhaseSolution::new(c1, 1.0).unwrap();
        let (lo, hi) = s.interval;
        let (va, vb) = (lo + a * (hi - lo), lo + b * (hi - lo));
        let (pa, pb) = (s.phi(va).unwrap(), s.phi(vb).unwrap());
        prop_assert_eq!(va < vb, pa < pb);
    }
}
