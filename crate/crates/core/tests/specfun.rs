#![allow(clippy::excessive_precision)]

use approx::assert_relative_eq;
use mhmw_core::specfun::{gamma, kummer_m, ln_gamma, tricomi_u, tricomi_u_small_y};
use proptest::prelude::*;

// Reference values at 40 digits from an arbitrary-precision library.
const U_REF: &[(f64, f64, f64, f64)] = &[
    (0.5, 1.3, 0.2, 1.8833572489368061917),
    (1.2, 0.7, 3.5, 0.15437324932341637701),
    (-0.3, 1.7, 0.05, -2.03545265768452144),
    (2.5, 2.5, 12.0, 0.0016770037482599575069),
    (0.15, 1.35, 1e-3, 5.2711117447706800439),
    (-1.4, 0.4, 0.8, -0.33520385887605805656),
];

const M_REF: &[(f64, f64, f64, f64)] = &[
    (0.5, 1.3, 0.2, 1.0822038413724460318),
    (1.2, 0.7, 3.5, 90.340703364738014889),
    (2.5, 2.5, 12.0, 162754.79141900392081),
    (3.0, 1.5, 30.0, 856550268904715.73862),
];

const GAMMA_REF: &[(f64, f64, f64)] = &[
    (0.1, 2.252712651734205902, 9.5135076986687312858),
    (0.5, 0.57236494292470008707, 1.7724538509055160273),
    (1.5, -0.12078223763524522235, 0.88622692545275801365),
    (7.3, 7.1478925230222486921, 1271.4236336639088399),
    (-0.5, 1.2655121234846453965, -3.5449077018110320546),
    (-2.7, -0.071407085315645687684, -0.93108278483896396546),
];

#[test]
fn tricomi_u_reference_values() {
    for &(a, b, y, want) in U_REF {
        let got = tricomi_u(a, b, y).unwrap().value;
        assert_relative_eq!(got, want, max_relative = 1e-9);
    }
}

#[test]
fn kummer_m_reference_values() {
    for &(a, b, y, want) in M_REF {
        let got = kummer_m(a, b, y).unwrap().value;
        assert_relative_eq!(got, want, max_relative = 1e-12);
    }
}

#[test]
fn gamma_reference_values() {
    for &(x, lg, g) in GAMMA_REF {
        let r = ln_gamma(x).unwrap();
        assert_relative_eq!(r.value, lg, max_relative = 1e-13, epsilon = 1e-15);
        assert_eq!(r.sign, g.signum());
        assert_relative_eq!(gamma(x).unwrap(), g, max_relative = 1e-13);
    }
    assert_relative_eq!(ln_gamma(150.0).unwrap().value, 600.00947055532742811, max_relative = 1e-14);
}

#[test]
fn gamma_poles_are_errors() {
    for x in [0.0, -1.0, -4.0] {
        assert!(gamma(x).is_err());
    }
}

#[test]
fn small_y_form_tracks_u() {
    // U ≈ Γ(b−1)/Γ(a) y^(1−b) with relative error O(y^min(1, b−1)).
    for (a, b) in [(0.4, 1.7), (1.3, 2.5), (0.2, 3.0)] {
        let y = 1e-5;
        let u = tricomi_u(a, b, y).unwrap().value;
        let lead = tricomi_u_small_y(a, b, y).unwrap();
        assert_relative_eq!(lead, u, max_relative = 1e-3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ln_gamma_matches_libm(x in 0.05f64..60.0) {
        let ours = ln_gamma(x).unwrap().value;
        let theirs = libm::lgamma(x);
        prop_assert!((ours - theirs).abs() <= 1e-13 * theirs.abs().max(1.0));
    }

    #[test]
    fn gamma_recurrence(x in 0.1f64..20.0) {
        let lhs = gamma(x + 1.0).unwrap();
        let rhs = x * gamma(x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs());
    }

    #[test]
    fn kummer_contiguous_relation(a in 1.1f64..4.0, b in 0.3f64..5.0, y in 0.0f64..8.0) {
        // (b−a) M(a−1) + (2a − b + y) M(a) − a M(a+1) = 0
        let m = |a| kummer_m(a, b, y).unwrap().value;
        let terms = [(b - a) * m(a - 1.0), (2.0 * a - b + y) * m(a), -a * m(a + 1.0)];
        let scale = terms.iter().fold(0.0f64, |s, t| s.max(t.abs()));
        prop_assert!(terms.iter().sum::<f64>().abs() <= 1e-11 * scale);
    }

    #[test]
    fn kummer_with_equal_parameters_is_exponential(b in 0.2f64..6.0, y in 0.0f64..20.0) {
        let got = kummer_m(b, b, y).unwrap().value;
        prop_assert!((got - y.exp()).abs() <= 1e-13 * y.exp());
    }

    #[test]
    fn u_contiguous_relation(a in 0.2f64..3.0, b in 0.3f64..3.0, y in 0.1f64..8.0) {
        // U(a, b; y) − a U(a+1, b; y) − U(a, b−1; y) = 0
        let u = |a, b| tricomi_u(a, b, y).unwrap().value;
        let (t0, t1, t2) = (u(a, b), a * u(a + 1.0, b), u(a, b - 1.0));
        let scale = t0.abs().max(t1.abs()).max(t2.abs());
        prop_assert!((t0 - t1 - t2).abs() <= 1e-8 * scale);
    }

    #[test]
    fn u_at_nonpositive_integer_a_is_laguerre(n in 0u32..5, b in 0.5f64..4.0, y in 0.1f64..6.0) {
        // U(−n, b; y) = (−1)^n n! L_n^(b−1)(y)
        let alpha = b - 1.0;
        let (mut p0, mut p1) = (1.0, 1.0 + alpha - y);
        if n == 0 { p1 = p0; }
        for k in 1..n.max(1) {
            let k = k as f64;
            let p2 = ((2.0 * k + 1.0 + alpha - y) * p1 - (k + alpha) * p0) / (k + 1.0);
            p0 = p1;
            p1 = p2;
        }
        let fact: f64 = (1..=n).map(f64::from).product();
        let want = if n % 2 == 0 { fact * p1 } else { -fact * p1 };
        let got = tricomi_u(-f64::from(n), b, y).unwrap().value;
        prop_assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0));
    }
}
