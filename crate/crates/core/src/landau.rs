//! Landau-type levels outside a hard wall at r = r0.
//!
//! The regular-at-infinity radial solution is
//! f(y) = e^(−y/2) y^(|γ|/2) U(a, |γ| + 1; y) with
//! a = |γ|/2 + 1/2 − τ/(2mϖ) and τ = 2mE − s m ϖ γ + m ϖ.
//! The wall imposes U(a, b; y0) = 0. For y0 → 0 this reduces to a = −n,
//! which gives E = ϖ (n + |γ|/2 + s γ/2).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{gamma_param, DerivedParams, QuantumState, Spin, SystemParams};
use crate::numeric::brent;
use crate::specfun::tricomi_u_with_estimate;
use crate::table::{Provenance, SpectrumTable};

/// |γ| below which the wall problem is not solved (b = |γ| + 1 → 1).
pub const MIN_ABS_GAMMA: f64 = 1e-6;

/// Wall positions at or beyond this are outside the small-y0 regime.
pub const VALIDATED_Y0_MAX: f64 = 1.0;

pub const DEFAULT_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LevelMethod {
    Asymptotic,
    ExactRoot,
}

impl LevelMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            LevelMethod::Asymptotic => "asymptotic",
            LevelMethod::ExactRoot => "exact_root",
        }
    }
}

impl std::str::FromStr for LevelMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "asymptotic" => Ok(LevelMethod::Asymptotic),
            "exact" | "exact_root" => Ok(LevelMethod::ExactRoot),
            other => Err(Error::InvalidParams(format!("unknown level method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandauLevel {
    pub state: QuantumState,
    pub energy: f64,
    pub method: LevelMethod,
    pub gamma: f64,
    /// Wall coordinate the level was solved at; 0 for asymptotic levels.
    pub y0_used: f64,
}

impl LandauLevel {
    /// False when an exact root was computed at y0 ≥ 1.
    pub fn in_validated_regime(&self) -> bool {
        self.y0_used < VALIDATED_Y0_MAX
    }
}

/// One (γ, s) channel of the radial problem with its wall.
///
/// Built either from physical inputs or with γ injected directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandauChannel {
    pub gamma: f64,
    pub s: Spin,
    pub varpi: f64,
    pub m: f64,
    pub y0: f64,
}

impl LandauChannel {
    pub fn new(l: i64, s: Spin, derived: &DerivedParams, m: f64) -> Self {
        Self {
            gamma: gamma_param(l, s, derived.phi_mhmw),
            s,
            varpi: derived.varpi,
            m,
            y0: derived.y0,
        }
    }

    pub fn decoupled(gamma: f64, s: Spin, varpi: f64, m: f64, y0: f64) -> Self {
        Self {
            gamma,
            s,
            varpi,
            m,
            y0,
        }
    }

    pub fn tau(&self, energy: f64) -> f64 {
        let mw = self.m * self.varpi;
        2.0 * self.m * energy - self.s.sign() * mw * self.gamma + mw
    }

    /// Energy from τ; inverse of [`Self::tau`].
    pub fn energy_from_tau(&self, tau: f64) -> f64 {
        let mw = self.m * self.varpi;
        (tau + self.s.sign() * mw * self.gamma - mw) / (2.0 * self.m)
    }

    /// First Kummer parameter a(E).
    pub fn kummer_a(&self, energy: f64) -> f64 {
        // |γ|/2 + 1/2 − τ/(2mϖ), simplified so that a = −n holds exactly at the ladder
        0.5 * (self.gamma.abs() + self.s.sign() * self.gamma) - energy / self.varpi
    }

    pub fn kummer_b(&self) -> f64 {
        self.gamma.abs() + 1.0
    }

    pub fn asymptotic_energy(&self, n: u32) -> f64 {
        asymptotic_from_gamma(n, self.gamma, self.s, self.varpi)
    }

    fn check_wall(&self) -> Result<()> {
        if !(self.y0 > 0.0) {
            return Err(Error::InvalidParams(format!("wall coordinate y0 must be > 0, got {}", self.y0)));
        }
        Ok(())
    }

    fn check_gamma(&self) -> Result<()> {
        if self.gamma.abs() <= MIN_ABS_GAMMA {
            return Err(Error::Domain(format!(
                "|γ| = {:e} is inside the excluded band |γ| ≤ {MIN_ABS_GAMMA:e}",
                self.gamma.abs()
            )));
        }
        Ok(())
    }

    /// U(a(E), b; y0).
    pub fn boundary_function(&self, energy: f64) -> Result<f64> {
        self.check_wall()?;
        self.check_gamma()?;
        Ok(tricomi_u_with_estimate(self.kummer_a(energy), self.kummer_b(), self.y0)?.value)
    }

    /// (n+1)-th zero of the boundary function in ascending energy.
    pub fn energy_exact(&self, n: u32, rel_tol: f64) -> Result<f64> {
        self.check_wall()?;
        self.check_gamma()?;
        let ground = self.asymptotic_energy(0);
        let lo = ground - self.varpi;
        let hi = ground + (n as f64 + 10.0) * self.varpi;
        let step = self.varpi / 10.0;
        let abs_tol = rel_tol * self.varpi.max(self.asymptotic_energy(n).abs());

        let mut seen = 0u32;
        let mut e0 = lo;
        let mut f0 = self.boundary_function(e0)?;
        if f0 == 0.0 {
            if n == 0 {
                return Ok(e0);
            }
            seen = 1;
        }
        for k in 1.. {
            let e1 = lo + k as f64 * step;
            if e1 > hi + 0.5 * step {
                break;
            }
            let f1 = self.boundary_function(e1)?;
            if f1 == 0.0 {
                if seen == n {
                    return Ok(e1);
                }
                seen += 1;
            } else if f0 != 0.0 && f0.signum() != f1.signum() {
                if seen == n {
                    return self.refine(e0, e1, n, abs_tol);
                }
                seen += 1;
            }
            e0 = e1;
            f0 = f1;
        }
        Err(Error::NoBracket { n, lo, hi })
    }

    fn refine(&self, lo: f64, hi: f64, n: u32, abs_tol: f64) -> Result<f64> {
        let mut failure = None;
        let root = brent(
            |e| match self.boundary_function(e) {
                Ok(v) => v,
                Err(err) => {
                    failure.get_or_insert(err);
                    f64::NAN
                }
            },
            lo,
            hi,
            abs_tol,
            500,
        );
        if let Some(err) = failure {
            return Err(err);
        }
        root.ok_or(Error::NoBracket { n, lo, hi })
    }

    /// f(y) = e^(−y/2) y^(|γ|/2) U(a, b; y), unnormalized.
    pub fn wavefunction(&self, y: f64, energy: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Err(Error::Domain(format!("radial coordinate y must be > 0, got {y}")));
        }
        let u = tricomi_u_with_estimate(self.kummer_a(energy), self.kummer_b(), y)?;
        Ok((-0.5 * y + 0.5 * self.gamma.abs() * y.ln()).exp() * u.value)
    }
}

fn asymptotic_from_gamma(n: u32, gamma: f64, s: Spin, varpi: f64) -> f64 {
    varpi * (n as f64 + 0.5 * gamma.abs() + 0.5 * s.sign() * gamma)
}

/// E = ϖ [n + |γ|/2 + s γ/2]; no upper limit on n.
pub fn energy_asymptotic(n: u32, l: i64, s: Spin, varpi: f64, phi: f64) -> f64 {
    asymptotic_from_gamma(n, gamma_param(l, s, phi), s, varpi)
}

pub fn boundary_function(energy: f64, l: i64, s: Spin, derived: &DerivedParams, m: f64) -> Result<f64> {
    LandauChannel::new(l, s, derived, m).boundary_function(energy)
}

pub fn energy_exact(
    n: u32,
    l: i64,
    s: Spin,
    derived: &DerivedParams,
    m: f64,
    rel_tol: f64,
) -> Result<LandauLevel> {
    let ch = LandauChannel::new(l, s, derived, m);
    Ok(LandauLevel {
        state: QuantumState::landau(n, l, s),
        energy: ch.energy_exact(n, rel_tol)?,
        method: LevelMethod::ExactRoot,
        gamma: ch.gamma,
        y0_used: ch.y0,
    })
}

pub fn radial_wavefunction(
    y: f64,
    energy: f64,
    l: i64,
    s: Spin,
    derived: &DerivedParams,
    m: f64,
) -> Result<f64> {
    LandauChannel::new(l, s, derived, m).wavefunction(y, energy)
}

/// Where the formula inputs of a table come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LandauSource {
    /// ϖ, y0 and Φ(s) derived from the system.
    Physical(SystemParams),
    /// ϖ, Φ and y0 fixed directly; Φ is used as given for both spins.
    Decoupled { derived: DerivedParams, m: f64 },
}

impl LandauSource {
    pub fn resolve(&self, s: Spin) -> (DerivedParams, f64) {
        match self {
            LandauSource::Physical(p) => (crate::model::derive(p, s), p.m),
            LandauSource::Decoupled { derived, m } => (*derived, *m),
        }
    }
}

/// Rows ordered by s (as given), then ℓ, then n.
pub fn spectrum_table(
    n_range: std::ops::RangeInclusive<u32>,
    l_range: std::ops::RangeInclusive<i64>,
    spins: &[Spin],
    source: &LandauSource,
    method: LevelMethod,
    rel_tol: f64,
) -> Result<SpectrumTable<LandauLevel>> {
    if n_range.is_empty() || l_range.is_empty() || spins.is_empty() {
        return Err(Error::InvalidParams("empty n, ℓ or s range".into()));
    }
    let states: Vec<QuantumState> = spins
        .iter()
        .flat_map(|&s| {
            let n_range = n_range.clone();
            l_range
                .clone()
                .flat_map(move |l| n_range.clone().map(move |n| QuantumState::landau(n, l, s)))
        })
        .collect();
    let rows: Vec<Result<LandauLevel>> = states
        .par_iter()
        .map(|st| {
            let (derived, m) = source.resolve(st.s);
            let n = st.n.unwrap_or(0);
            match method {
                LevelMethod::Asymptotic => {
                    let gamma = gamma_param(st.l, st.s, derived.phi_mhmw);
                    Ok(LandauLevel {
                        state: *st,
                        energy: asymptotic_from_gamma(n, gamma, st.s, derived.varpi),
                        method,
                        gamma,
                        y0_used: 0.0,
                    })
                }
                LevelMethod::ExactRoot => energy_exact(n, st.l, st.s, &derived, m, rel_tol),
            }
        })
        .collect();
    let provenance = match method {
        LevelMethod::Asymptotic => Provenance::Asymptotic,
        LevelMethod::ExactRoot => Provenance::ExactRoot,
    };
    SpectrumTable::collect_rows(provenance, states, rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicityReport {
    /// |E_{n,ℓ}(Φ+2π) − E_{n,ℓ−1}(Φ)|
    pub forward_residual: f64,
    /// |E_{n,ℓ}(Φ−2π) − E_{n,ℓ+1}(Φ)|
    pub backward_residual: f64,
    pub tolerance: f64,
}

impl PeriodicityReport {
    pub fn holds(&self) -> bool {
        self.forward_residual <= self.tolerance && self.backward_residual <= self.tolerance
    }
}

/// Both 2π shift maps of the asymptotic ladder, judged at 1e−12·ϖ.
pub fn periodicity_check(n: u32, l: i64, s: Spin, varpi: f64, phi: f64) -> PeriodicityReport {
    let two_pi = std::f64::consts::TAU;
    PeriodicityReport {
        forward_residual: (energy_asymptotic(n, l, s, varpi, phi + two_pi)
            - energy_asymptotic(n, l - 1, s, varpi, phi))
        .abs(),
        backward_residual: (energy_asymptotic(n, l, s, varpi, phi - two_pi)
            - energy_asymptotic(n, l + 1, s, varpi, phi))
        .abs(),
        tolerance: 1e-12 * varpi,
    }
}
