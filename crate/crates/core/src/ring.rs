//! Particle confined to a one-dimensional ring of radius R.
//!
//! Each spin component obeys f'' − 2iν f' + β f = 0. Anti-periodicity
//! f(φ + 2π) = −f(φ) forces the exponent ν ± √(ν² + β) to equal j = ℓ + 1/2,
//! which fixes E_ℓ = [ℓ + (1−s)/2 − Φ/2π + (s/2) m ϖ R²]² / (2mR²) − ϖ/2.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{nu_beta_params, QuantumState, Spin, SystemParams};
use crate::table::{Provenance, SpectrumTable};

/// Tolerance on the reconstructed exponent ν ± √(ν² + β) − j.
pub const DISPERSION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingLevel {
    pub l: i64,
    pub s: Spin,
    pub j: f64,
    pub energy: f64,
    pub nu: f64,
    pub beta: f64,
    /// Sign in front of √(ν² + β) that reproduces j.
    pub branch: f64,
}

impl RingLevel {
    pub fn state(&self) -> QuantumState {
        QuantumState::ring(self.l, self.s)
    }

    /// |ν ± √(ν² + β) − j| with β as stored.
    pub fn dispersion_residual(&self) -> f64 {
        let disc = (self.nu * self.nu + self.beta).max(0.0);
        (self.nu + self.branch * disc.sqrt() - self.j).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingSystem {
    pub m: f64,
    pub varpi: f64,
    pub radius: f64,
}

impl RingSystem {
    /// Physical mode: needs R ≥ r0 on the parameters.
    pub fn physical(params: &SystemParams) -> Result<Self> {
        Ok(Self {
            m: params.m,
            varpi: params.varpi(),
            radius: params.ring_radius()?,
        })
    }

    /// Decoupled mode: any R > 0.
    pub fn decoupled(m: f64, varpi: f64, radius: f64) -> Result<Self> {
        for (name, v) in [("m", m), ("varpi", varpi), ("R", radius)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be > 0, got {v}")));
            }
        }
        Ok(Self { m, varpi, radius })
    }

    /// m ϖ R².
    pub fn flux_coupling(&self) -> f64 {
        self.m * self.varpi * self.radius * self.radius
    }

    /// 1/(2mR²), the natural energy scale of the ring.
    pub fn level_scale(&self) -> f64 {
        1.0 / (2.0 * self.m * self.radius * self.radius)
    }

    /// ℓ + (1−s)/2 − Φ/2π + (s/2) m ϖ R².
    pub fn bracket(&self, l: i64, s: Spin, phi: f64) -> f64 {
        l as f64 + 0.5 * (1.0 - s.sign()) - phi / TAU + 0.5 * s.sign() * self.flux_coupling()
    }

    pub fn energy(&self, l: i64, s: Spin, phi: f64) -> f64 {
        let b = self.bracket(l, s, phi);
        self.level_scale() * b * b - 0.5 * self.varpi
    }
}

pub fn ring_energy(l: i64, s: Spin, system: &RingSystem, phi: f64) -> Result<RingLevel> {
    let energy = system.energy(l, s, phi);
    let (nu, beta) = nu_beta_params(s, phi, system.m, system.varpi, system.radius, energy);
    let j = l as f64 + 0.5;
    let level = RingLevel {
        l,
        s,
        j,
        energy,
        nu,
        beta,
        branch: if j - nu >= 0.0 { 1.0 } else { -1.0 },
    };
    let scale = 1.0_f64.max(j.abs()).max(nu.abs());
    if level.dispersion_residual() > DISPERSION_TOL * scale {
        return Err(Error::Domain(format!(
            "ring state {}: dispersion residual {:e}",
            level.state(),
            level.dispersion_residual()
        )));
    }
    Ok(level)
}

/// e^(i j φ) with a0 = 1; the branch is the one whose exponent is j = ℓ + 1/2.
pub fn angular_wavefunction(angle: f64, l: i64) -> Complex64 {
    Complex64::from_polar(1.0, (l as f64 + 0.5) * angle)
}

/// Rows ordered by s (as given), then ℓ. `phase` gives Φ for each spin.
pub fn ring_spectrum<P: Fn(Spin) -> f64>(
    l_range: std::ops::RangeInclusive<i64>,
    spins: &[Spin],
    system: &RingSystem,
    phase: P,
) -> Result<SpectrumTable<RingLevel>> {
    if l_range.is_empty() || spins.is_empty() {
        return Err(Error::InvalidParams("empty ℓ or s range".into()));
    }
    let states: Vec<QuantumState> = spins
        .iter()
        .flat_map(|&s| l_range.clone().map(move |l| QuantumState::ring(l, s)))
        .collect();
    let rows = states
        .iter()
        .map(|st| ring_energy(st.l, st.s, system, phase(st.s)))
        .collect();
    SpectrumTable::collect_rows(Provenance::ClosedForm, states, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit() -> RingSystem {
        RingSystem::decoupled(1.0, 2.0, 1.0).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let r = ring_energy(0, Spin::Up, &unit(), 0.0).unwrap();
        assert_eq!(r.energy, -0.5);
        assert_eq!(r.nu, -0.5);
        let r = ring_energy(-1, Spin::Up, &unit(), 0.0).unwrap();
        assert_eq!(r.energy, -1.0);
    }

    #[test]
    fn phase_shift_maps_l_to_l_minus_one() {
        let sys = unit();
        for s in Spin::BOTH {
            let a = ring_energy(1, s, &sys, 0.37 + TAU).unwrap().energy;
            let b = ring_energy(0, s, &sys, 0.37).unwrap().energy;
            assert!((a - b).abs() <= 1e-12 * sys.level_scale());
        }
    }

    #[test]
    fn wavefunction_is_antiperiodic() {
        for l in -3..=3 {
            for angle in [0.0, 0.4, 2.0, 5.5] {
                let v = angular_wavefunction(angle, l);
                let w = angular_wavefunction(angle + TAU, l);
                assert!((v + w).norm() < 1e-13);
            }
            assert_eq!(angular_wavefunction(0.0, l), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn spectrum_minimum_is_at_smallest_bracket() {
        let sys = unit();
        let t = ring_spectrum(-4..=4, &[Spin::Up], &sys, |_| 0.9).unwrap();
        let min = t.rows.iter().min_by(|a, b| a.energy.total_cmp(&b.energy)).unwrap();
        let best = (-4..=4)
            .min_by(|a, b| sys.bracket(*a, Spin::Up, 0.9).abs().total_cmp(&sys.bracket(*b, Spin::Up, 0.9).abs()))
            .unwrap();
        assert_eq!(min.l, best);
        for row in &t.rows {
            assert!(row.energy >= -0.5 * sys.varpi);
        }
    }

    #[test]
    fn singleton_table_matches_single_level() {
        let sys = unit();
        let t = ring_spectrum(2..=2, &[Spin::Down], &sys, |_| 0.3).unwrap();
        assert_eq!(t.rows, vec![ring_energy(2, Spin::Down, &sys, 0.3).unwrap()]);
    }

    #[test]
    fn physical_mode_needs_radius() {
        let p = SystemParams::new(1.0, 1.0, 2.0, 0.5).unwrap();
        assert_eq!(RingSystem::physical(&p), Err(Error::MissingRadius));
        let sys = RingSystem::physical(&p.with_ring_radius(1.0).unwrap()).unwrap();
        assert_relative_eq!(sys.varpi, 2.0);
    }
}
