#![allow(clippy::excessive_precision)]

use std::f64::consts::TAU;

use mhmw_core::landau::{
    energy_asymptotic, periodicity_check, radial_wavefunction, spectrum_table, LandauChannel, LandauSource,
    LevelMethod, DEFAULT_REL_TOL,
};
use mhmw_core::model::{derive, gamma_param, DerivedParams, Spin, SystemParams};
use mhmw_core::oracle::ode_residual;
use proptest::prelude::*;

/// (γ, s, ϖ, y0, n, E) with E a root of U(a(E), |γ|+1; y0) found at 40 digits.
const WALL_ROOTS: &[(f64, i32, f64, f64, u32, f64)] = &[
    (0.7, 1, 2.0, 1e-3, 0, 1.4121536339757482266),
    (0.7, 1, 2.0, 1e-3, 1, 3.4204945083044404095),
    (1.5, -1, 1.0, 1e-2, 0, 0.0010971809400891397815),
    (2.3, 1, 0.5, 0.05, 2, 2.1525194058908767711),
    (-1.3, 1, 2.0, 1e-2, 1, 2.0121194370286128478),
    (3.0, -1, 1.5, 0.1, 0, 0.00064328483501837217662),
];

#[test]
fn wall_roots_match_reference() {
    for &(g, s, varpi, y0, n, want) in WALL_ROOTS {
        let ch = LandauChannel::decoupled(g, Spin::from_i32(s).unwrap(), varpi, 1.0, y0);
        let got = ch.energy_exact(n, DEFAULT_REL_TOL).unwrap();
        assert!((got - want).abs() <= 1e-9 * varpi, "γ={g} n={n}: {got} vs {want}");
    }
}

#[test]
fn wall_lifts_every_level() {
    for &(g, s, varpi, y0, n, _) in WALL_ROOTS {
        let ch = LandauChannel::decoupled(g, Spin::from_i32(s).unwrap(), varpi, 1.0, y0);
        assert!(ch.energy_exact(n, DEFAULT_REL_TOL).unwrap() > ch.asymptotic_energy(n));
    }
}

#[test]
fn wavefunction_solves_radial_equation() {
    let p = SystemParams::new(1.0, 1.0, 2.0, 0.1).unwrap();
    for s in Spin::BOTH {
        let derived = derive(&p, s);
        for l in [-2, 0, 1] {
            let ch = LandauChannel::new(l, s, &derived, p.m);
            let e = ch.energy_exact(1, DEFAULT_REL_TOL).unwrap();
            let (start, h) = (derived.y0 + 0.5, 0.01);
            let values: Vec<f64> = (0..300)
                .map(|i| radial_wavefunction(start + i as f64 * h, e, l, s, &derived, p.m).unwrap())
                .collect();
            let r = ode_residual(&ch, e, start, h, &values).unwrap();
            assert!(r < 1e-7, "l={l} s={s}: residual {r:e}");
        }
    }
}

#[test]
fn wavefunction_vanishes_at_wall() {
    let d = DerivedParams::decoupled(2.0, 0.3 * TAU, 1e-3).unwrap();
    let ch = LandauChannel::new(1, Spin::Up, &d, 1.0);
    let e = ch.energy_exact(0, DEFAULT_REL_TOL).unwrap();
    let at_wall = radial_wavefunction(d.y0, e, 1, Spin::Up, &d, 1.0).unwrap();
    let inside = radial_wavefunction(0.5, e, 1, Spin::Up, &d, 1.0).unwrap();
    assert!(at_wall.abs() <= 1e-6 * inside.abs());
}

#[test]
fn exact_table_sits_above_asymptotic_table() {
    let src = LandauSource::Decoupled {
        derived: DerivedParams::decoupled(2.0, 0.3 * TAU, 1e-3).unwrap(),
        m: 1.0,
    };
    let asym = spectrum_table(0..=2, -2..=2, &Spin::BOTH, &src, LevelMethod::Asymptotic, DEFAULT_REL_TOL).unwrap();
    let exact = spectrum_table(0..=2, -2..=2, &Spin::BOTH, &src, LevelMethod::ExactRoot, DEFAULT_REL_TOL).unwrap();
    assert_eq!(asym.rows.len(), exact.rows.len());
    for (a, e) in asym.rows.iter().zip(&exact.rows) {
        assert_eq!(a.state, e.state);
        assert!(e.energy > a.energy);
        assert!(e.energy - a.energy < 0.1 * 2.0);
    }
}

#[test]
fn zero_gamma_is_rejected_by_exact_solver() {
    let ch = LandauChannel::decoupled(0.0, Spin::Up, 2.0, 1.0, 1e-3);
    assert!(ch.energy_exact(0, DEFAULT_REL_TOL).is_err());
}

proptest! {
    #[test]
    fn ladder_shift_map(n in 0u32..6, l in -8i64..8, up in any::<bool>(), varpi in 0.1f64..10.0, phi in -20.0f64..20.0) {
        let s = if up { Spin::Up } else { Spin::Down };
        prop_assert!(periodicity_check(n, l, s, varpi, phi).holds());
    }

    #[test]
    fn ladder_is_bounded_below_and_evenly_spaced(n in 0u32..6, l in -8i64..8, up in any::<bool>(), varpi in 0.1f64..10.0, phi in -20.0f64..20.0) {
        let s = if up { Spin::Up } else { Spin::Down };
        let e0 = energy_asymptotic(n, l, s, varpi, phi);
        let e1 = energy_asymptotic(n + 1, l, s, varpi, phi);
        prop_assert!(e0 >= -1e-12 * varpi);
        prop_assert!((e1 - e0 - varpi).abs() <= 1e-12 * varpi * (1.0 + e1 / varpi));
    }

    #[test]
    fn gamma_shifts_by_one_per_period(l in -20i64..20, up in any::<bool>(), phi in -30.0f64..30.0) {
        let s = if up { Spin::Up } else { Spin::Down };
        let a = gamma_param(l, s, phi + TAU);
        let b = gamma_param(l - 1, s, phi);
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn root_rises_with_wall(g in prop_oneof![0.6f64..2.5, -2.5f64..-0.6], up in any::<bool>(), n in 0u32..3) {
        let s = if up { Spin::Up } else { Spin::Down };
        let energies: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&y0| LandauChannel::decoupled(g, s, 2.0, 1.0, y0).energy_exact(n, DEFAULT_REL_TOL).unwrap())
            .collect();
        let floor = LandauChannel::decoupled(g, s, 2.0, 1.0, 1e-4).asymptotic_energy(n);
        prop_assert!(energies[0] > energies[1] && energies[1] > energies[2] && energies[2] > floor);
    }
}
