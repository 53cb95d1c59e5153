//! Physical parameters and the quantities derived from them.
//!
//! Units are natural (ħ = c = 1). The magnetic field outside the cavity is
//! radial, B(r) = (ρm/2) r − ρm r0² / (2r), and the dipole coupling splits the
//! effective vector potential into a piece growing like r (uniform effective
//! field) and a piece falling like 1/r (the missing-charge phase).

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Eigenvalue of σ³.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Up, Spin::Down];

    pub fn sign(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }

    pub fn from_i32(s: i32) -> Result<Self> {
        match s {
            1 => Ok(Spin::Up),
            -1 => Ok(Spin::Down),
            _ => Err(Error::InvalidParams(format!("spin projection must be ±1, got {s}"))),
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spin::Up => "+1",
            Spin::Down => "-1",
        })
    }
}

impl FromStr for Spin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+1" | "1" | "+" | "up" => Ok(Spin::Up),
            "-1" | "-" | "down" => Ok(Spin::Down),
            other => Err(Error::InvalidParams(format!("cannot parse spin '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub m: f64,
    pub d: f64,
    pub rho_m: f64,
    pub r0: f64,
    pub ring_radius: Option<f64>,
}

impl SystemParams {
    pub fn new(m: f64, d: f64, rho_m: f64, r0: f64) -> Result<Self> {
        let p = Self {
            m,
            d,
            rho_m,
            r0,
            ring_radius: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_ring_radius(mut self, radius: f64) -> Result<Self> {
        self.ring_radius = Some(radius);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("m", self.m), ("d", self.d), ("rho_m", self.rho_m), ("r0", self.r0)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        if let Some(radius) = self.ring_radius {
            if !(radius.is_finite() && radius >= self.r0) {
                return Err(Error::InvalidParams(format!(
                    "ring radius R = {radius} must satisfy R ≥ r0 = {}",
                    self.r0
                )));
            }
        }
        Ok(())
    }

    /// ϖ = d ρm / m.
    pub fn varpi(&self) -> f64 {
        self.d * self.rho_m / self.m
    }

    pub fn ring_radius(&self) -> Result<f64> {
        self.ring_radius.ok_or(Error::MissingRadius)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    pub varpi: f64,
    /// Missing phase for the spin it was derived with (radians).
    pub phi_mhmw: f64,
    /// Wall position in the dimensionless radial coordinate y = m ϖ r² / 2.
    pub y0: f64,
}

impl DerivedParams {
    /// Formula inputs set independently of any [`SystemParams`].
    pub fn decoupled(varpi: f64, phi_mhmw: f64, y0: f64) -> Result<Self> {
        if !(varpi.is_finite() && varpi > 0.0) {
            return Err(Error::InvalidParams(format!("varpi must be > 0, got {varpi}")));
        }
        if !phi_mhmw.is_finite() {
            return Err(Error::InvalidParams("phase must be finite".into()));
        }
        if !(y0.is_finite() && y0 >= 0.0) {
            return Err(Error::InvalidParams(format!("y0 must be ≥ 0, got {y0}")));
        }
        Ok(Self {
            varpi,
            phi_mhmw,
            y0,
        })
    }

    pub fn phi_over_two_pi(&self) -> f64 {
        self.phi_mhmw / TAU
    }
}

/// ϖ, y0 and Φ for one spin projection. Φ is built as 2π·y0·s so that the
/// identity Φ/(2π s) = y0 holds by construction.
pub fn derive(params: &SystemParams, s: Spin) -> DerivedParams {
    let varpi = params.varpi();
    let y0 = params.m * varpi * params.r0 * params.r0 / 2.0;
    DerivedParams {
        varpi,
        phi_mhmw: TAU * y0 * s.sign(),
        y0,
    }
}

/// π d ρm r0² s, the closed form of the loop integral of the 1/r potential.
pub fn missing_phase(params: &SystemParams, s: Spin) -> f64 {
    PI * params.d * params.rho_m * params.r0 * params.r0 * s.sign()
}

/// Radial field outside the cavity.
pub fn magnetic_field_radial(params: &SystemParams, r: f64) -> Result<f64> {
    if !(r >= params.r0) {
        return Err(Error::Domain(format!(
            "field formula holds for r ≥ r0 = {}, got r = {r}",
            params.r0
        )));
    }
    Ok(0.5 * params.rho_m * r - params.rho_m * params.r0 * params.r0 / (2.0 * r))
}

/// Azimuthal component of the growing part of d σ×B.
pub fn potential_uniform_part(params: &SystemParams, s: Spin, r: f64) -> f64 {
    0.5 * params.d * params.rho_m * r * s.sign()
}

/// Azimuthal component of the 1/r part of d σ×B.
pub fn potential_missing_part(params: &SystemParams, s: Spin, r: f64) -> f64 {
    params.d * params.rho_m * params.r0 * params.r0 / (2.0 * r) * s.sign()
}

/// Axial field generated by the growing part: d ρm s.
pub fn effective_uniform_field(params: &SystemParams, s: Spin) -> f64 {
    params.d * params.rho_m * s.sign()
}

const LOOP_NODES: usize = 256;

/// ∮ A·dr of the 1/r potential around a circle of radius `loop_radius`,
/// evaluated as a Cartesian line integral with the periodic trapezoid rule.
pub fn missing_phase_by_quadrature(params: &SystemParams, s: Spin, loop_radius: f64) -> Result<f64> {
    if !(loop_radius >= params.r0) {
        return Err(Error::Domain(format!(
            "loop radius {loop_radius} lies inside the cavity (r0 = {})",
            params.r0
        )));
    }
    let dphi = TAU / LOOP_NODES as f64;
    let sum: f64 = (0..LOOP_NODES)
        .map(|k| {
            let (sin, cos) = (k as f64 * dphi).sin_cos();
            let (x, y) = (loop_radius * cos, loop_radius * sin);
            let r = x.hypot(y);
            let a_phi = potential_missing_part(params, s, r);
            let (ax, ay) = (-a_phi * y / r, a_phi * x / r);
            let (dx, dy) = (-loop_radius * sin, loop_radius * cos);
            ax * dx + ay * dy
        })
        .sum();
    Ok(sum * dphi)
}

/// γ = ℓ + (1 − s)/2 − Φ/2π.
pub fn gamma_param(l: i64, s: Spin, phi: f64) -> f64 {
    l as f64 + 0.5 * (1.0 - s.sign()) - phi / TAU
}

/// (ν, β) of the ring equation: ν = Φ/2π + s/2 − (s/2) m ϖ R²,
/// β = 2 m R² E − ν² + m ϖ R².
pub fn nu_beta_params(s: Spin, phi: f64, m: f64, varpi: f64, radius: f64, energy: f64) -> (f64, f64) {
    let mwr2 = m * varpi * radius * radius;
    let nu = phi / TAU + 0.5 * s.sign() - 0.5 * s.sign() * mwr2;
    let beta = 2.0 * m * radius * radius * energy - nu * nu + mwr2;
    (nu, beta)
}

/// Quantum numbers of one level. Ring states carry no radial number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantumState {
    pub s: Spin,
    pub l: i64,
    pub n: Option<u32>,
}

impl QuantumState {
    pub fn landau(n: u32, l: i64, s: Spin) -> Self {
        Self { s, l, n: Some(n) }
    }

    pub fn ring(l: i64, s: Spin) -> Self {
        Self { s, l, n: None }
    }

    /// j = ℓ + 1/2.
    pub fn j(&self) -> f64 {
        self.l as f64 + 0.5
    }
}

impl fmt::Display for QuantumState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n {
            Some(n) => write!(f, "{n}:{}:{}", self.l, self.s),
            None => write!(f, "{}:{}", self.l, self.s),
        }
    }
}

impl FromStr for QuantumState {
    type Err = Error;

    /// `n:l:s` for Landau states, `l:s` for ring states.
    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.trim().split(':').collect();
        let bad = || Error::InvalidParams(format!("cannot parse state '{text}'"));
        match parts.as_slice() {
            [n, l, s] => Ok(Self::landau(
                n.trim().parse().map_err(|_| bad())?,
                l.trim().parse().map_err(|_| bad())?,
                s.parse()?,
            )),
            [l, s] => Ok(Self::ring(l.trim().parse().map_err(|_| bad())?, s.parse()?)),
            _ => Err(bad()),
        }
    }
}
