//! Persistent spin currents at zero temperature.
//!
//! I = −Σ ∂E/∂Φ over an explicit occupation set, either by central
//! differences on the spectrum or from the closed forms.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::landau::energy_asymptotic;
use crate::model::{gamma_param, QuantumState, Spin};
use crate::numeric::CompensatedSum;
use crate::ring::RingSystem;

/// |γ| below which a Landau result is flagged as close to a level crossing.
pub const CROSSING_THRESHOLD: f64 = 1e-3;

/// Default Byers–Yang phase step.
pub const DEFAULT_STEP: f64 = 1e-6 * TAU;

/// Occupied states, in the order given. Non-empty, without duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupationSet {
    states: Vec<QuantumState>,
}

impl OccupationSet {
    pub fn new(states: Vec<QuantumState>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidParams("occupation set is empty".into()));
        }
        let mut seen = BTreeSet::new();
        for st in &states {
            if !seen.insert(*st) {
                return Err(Error::InvalidParams(format!("state {st} is occupied twice")));
            }
        }
        let landau = states[0].n.is_some();
        if states.iter().any(|st| st.n.is_some() != landau) {
            return Err(Error::InvalidParams("occupation mixes n:l:s and l:s states".into()));
        }
        Ok(Self { states })
    }

    pub fn states(&self) -> &[QuantumState] {
        &self.states
    }

    /// True for `n:l:s` states.
    pub fn is_landau(&self) -> bool {
        self.states[0].n.is_some()
    }

    /// The common spin, if there is one.
    pub fn single_spin(&self) -> Option<Spin> {
        let s = self.states[0].s;
        self.states.iter().all(|st| st.s == s).then_some(s)
    }

    /// Every ℓ moved by `dl`.
    pub fn shifted(&self, dl: i64) -> Self {
        Self {
            states: self
                .states
                .iter()
                .map(|st| QuantumState { l: st.l + dl, ..*st })
                .collect(),
        }
    }

    /// Sub-sets sharing one spin, spin-up first.
    pub fn split_by_spin(&self) -> Vec<(Spin, OccupationSet)> {
        Spin::BOTH
            .iter()
            .filter_map(|&s| {
                let states: Vec<_> = self.states.iter().copied().filter(|st| st.s == s).collect();
                (!states.is_empty()).then_some((s, OccupationSet { states }))
            })
            .collect()
    }
}

impl fmt::Display for OccupationSet {
    /// Semicolon separated so the list fits in one CSV field.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, st) in self.states.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{st}")?;
        }
        Ok(())
    }
}

impl FromStr for OccupationSet {
    type Err = Error;

    /// Comma (or semicolon) separated `n:l:s` or `l:s` entries.
    fn from_str(text: &str) -> Result<Self> {
        let states = text
            .split([',', ';'])
            .filter(|p| !p.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<QuantumState>>>()?;
        Self::new(states)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurrentMethod {
    /// Per-state closed form.
    ClosedForm,
    /// Printed single-sum form, constant outside the sum.
    ClosedFormVerbatim,
    ByersYangFd,
}

impl CurrentMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            CurrentMethod::ClosedForm => "closed_form",
            CurrentMethod::ClosedFormVerbatim => "closed_form_verbatim",
            CurrentMethod::ByersYangFd => "byers_yang_fd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentResult {
    pub value: f64,
    pub method: CurrentMethod,
    pub near_crossing: bool,
    /// Smallest |γ| over occupied Landau states; infinite for rings.
    pub crossing_distance: f64,
}

impl CurrentResult {
    /// Sum of per-spin partial results.
    pub fn combine(parts: &[CurrentResult]) -> Option<CurrentResult> {
        let first = parts.first()?;
        let crossing_distance = parts.iter().map(|p| p.crossing_distance).fold(f64::INFINITY, f64::min);
        Some(CurrentResult {
            value: parts.iter().map(|p| p.value).collect::<CompensatedSum>().value(),
            method: first.method,
            near_crossing: parts.iter().any(|p| p.near_crossing),
            crossing_distance,
        })
    }
}

/// Energies as a function of the phase, one state at a time.
pub trait PhaseSpectrum: Sync {
    fn energy(&self, state: &QuantumState, phi: f64) -> Result<f64>;

    /// Distance from the nearest kink in Φ/2π units; infinite if smooth.
    fn kink_distance(&self, state: &QuantumState, phi: f64) -> f64;
}

/// The asymptotic Landau ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandauPhaseSpectrum {
    pub varpi: f64,
}

impl PhaseSpectrum for LandauPhaseSpectrum {
    fn energy(&self, state: &QuantumState, phi: f64) -> Result<f64> {
        let n = state
            .n
            .ok_or_else(|| Error::InvalidParams(format!("Landau state {state} has no radial number")))?;
        Ok(energy_asymptotic(n, state.l, state.s, self.varpi, phi))
    }

    fn kink_distance(&self, state: &QuantumState, phi: f64) -> f64 {
        gamma_param(state.l, state.s, phi).abs()
    }
}

/// The closed-form ring levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingPhaseSpectrum {
    pub system: RingSystem,
}

impl PhaseSpectrum for RingPhaseSpectrum {
    fn energy(&self, state: &QuantumState, phi: f64) -> Result<f64> {
        Ok(self.system.energy(state.l, state.s, phi))
    }

    fn kink_distance(&self, _: &QuantumState, _: f64) -> f64 {
        f64::INFINITY
    }
}

fn crossing_scan<P: PhaseSpectrum + ?Sized>(spectrum: &P, occ: &OccupationSet, phi: f64) -> (f64, QuantumState) {
    occ.states
        .iter()
        .map(|st| (spectrum.kink_distance(st, phi), *st))
        .fold((f64::INFINITY, occ.states[0]), |best, cur| if cur.0 < best.0 { cur } else { best })
}

/// −Σ [E(Φ+h) − E(Φ−h)] / 2h over the occupied states.
pub fn byers_yang_current<P: PhaseSpectrum + ?Sized>(
    spectrum: &P,
    occ: &OccupationSet,
    phi: f64,
    step: f64,
) -> Result<CurrentResult> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidParams(format!("phase step must be > 0, got {step}")));
    }
    let (distance, worst) = crossing_scan(spectrum, occ, phi);
    if distance < step / TAU {
        return Err(Error::Crossing {
            state: worst.to_string(),
            distance,
        });
    }
    let mut sum = CompensatedSum::new();
    for st in &occ.states {
        let up = spectrum.energy(st, phi + step)?;
        let down = spectrum.energy(st, phi - step)?;
        sum.add(-(up - down) / (2.0 * step));
    }
    Ok(CurrentResult {
        value: sum.value(),
        method: CurrentMethod::ByersYangFd,
        near_crossing: distance < CROSSING_THRESHOLD,
        crossing_distance: distance,
    })
}

fn landau_signs(occ: &OccupationSet, phi: f64) -> Result<(Vec<(Spin, f64)>, f64)> {
    let mut distance = f64::INFINITY;
    let mut signs = Vec::with_capacity(occ.states.len());
    for st in &occ.states {
        // ℓ − Φ/2π for s = +1, ℓ + 1 − Φ/2π for s = −1
        let g = gamma_param(st.l, st.s, phi);
        if g == 0.0 {
            return Err(Error::Crossing {
                state: st.to_string(),
                distance: 0.0,
            });
        }
        distance = distance.min(g.abs());
        signs.push((st.s, g.signum()));
    }
    Ok((signs, distance))
}

/// Σ (ϖ/4π)[s + sgn γ] with the constant counted once per occupied state.
pub fn landau_current_closed(occ: &OccupationSet, phi: f64, varpi: f64) -> Result<CurrentResult> {
    let (signs, distance) = landau_signs(occ, phi)?;
    let scale = varpi / (4.0 * PI);
    let value = signs
        .iter()
        .map(|&(s, sg)| scale * (s.sign() + sg))
        .collect::<CompensatedSum>()
        .value();
    Ok(CurrentResult {
        value,
        method: CurrentMethod::ClosedForm,
        near_crossing: distance < CROSSING_THRESHOLD,
        crossing_distance: distance,
    })
}

/// (ϖ/4π)[s + Σ_ℓ sgn γ_ℓ], the constant outside the sum. Needs a single spin.
pub fn landau_current_closed_verbatim(occ: &OccupationSet, phi: f64, varpi: f64) -> Result<CurrentResult> {
    let s = occ
        .single_spin()
        .ok_or_else(|| Error::InvalidParams("the printed closed form takes one spin".into()))?;
    let (signs, distance) = landau_signs(occ, phi)?;
    let total = signs.iter().map(|&(_, sg)| sg).collect::<CompensatedSum>().value();
    Ok(CurrentResult {
        value: varpi / (4.0 * PI) * (s.sign() + total),
        method: CurrentMethod::ClosedFormVerbatim,
        near_crossing: distance < CROSSING_THRESHOLD,
        crossing_distance: distance,
    })
}

/// Σ (1/2πmR²)·term, term = ℓ − Φ/2π + mϖR²/2 (s = +1) or
/// ℓ + 1 − Φ/2π − mϖR²/2 (s = −1).
pub fn ring_current_closed(occ: &OccupationSet, phi: f64, system: &RingSystem) -> Result<CurrentResult> {
    let r2 = system.radius * system.radius;
    let half = 0.5 * system.flux_coupling();
    let prefactor = 1.0 / (TAU * system.m * r2);
    let value = occ
        .states
        .iter()
        .map(|st| {
            let term = match st.s {
                Spin::Up => st.l as f64 - phi / TAU + half,
                Spin::Down => st.l as f64 + 1.0 - phi / TAU - half,
            };
            prefactor * term
        })
        .collect::<CompensatedSum>()
        .value();
    Ok(CurrentResult {
        value,
        method: CurrentMethod::ClosedForm,
        near_crossing: false,
        crossing_distance: f64::INFINITY,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn occ(text: &str) -> OccupationSet {
        text.parse().unwrap()
    }

    fn unit_ring() -> RingSystem {
        RingSystem::decoupled(1.0, 2.0, 1.0).unwrap()
    }

    #[test]
    fn occupation_validation() {
        assert!("".parse::<OccupationSet>().is_err());
        assert!("0:1:+1,0:1:+1".parse::<OccupationSet>().is_err());
        assert!("0:1:+1,1:+1".parse::<OccupationSet>().is_err());
        let o = occ("0:1:+1, 2:-1:-1");
        assert!(o.is_landau());
        assert_eq!(o.single_spin(), None);
        assert_eq!(o.to_string(), "0:1:+1;2:-1:-1");
        assert_eq!(o.to_string().parse::<OccupationSet>().unwrap(), o);
    }

    #[test]
    fn landau_single_state() {
        let phi = 0.3 * TAU;
        let closed = landau_current_closed(&occ("0:1:+1"), phi, 2.0).unwrap();
        assert_abs_diff_eq!(closed.value, 1.0 / PI, epsilon = 1e-15);
        let fd = byers_yang_current(&LandauPhaseSpectrum { varpi: 2.0 }, &occ("0:1:+1"), phi, DEFAULT_STEP).unwrap();
        assert_abs_diff_eq!(fd.value, 1.0 / PI, epsilon = 1e-8);
        let down = landau_current_closed(&occ("0:-1:-1"), phi, 2.0).unwrap();
        assert_abs_diff_eq!(down.value, -1.0 / PI, epsilon = 1e-15);
    }

    #[test]
    fn verbatim_and_per_state_differ_beyond_one_state() {
        let o = occ("0:1:+1,0:2:+1");
        let per_state = landau_current_closed(&o, 0.3 * TAU, 2.0).unwrap().value;
        let verbatim = landau_current_closed_verbatim(&o, 0.3 * TAU, 2.0).unwrap().value;
        assert_abs_diff_eq!(per_state, 2.0 / PI, epsilon = 1e-15);
        assert_abs_diff_eq!(verbatim, 3.0 / (2.0 * PI), epsilon = 1e-15);
    }

    #[test]
    fn crossing_is_an_error() {
        let o = occ("0:1:+1");
        assert!(matches!(landau_current_closed(&o, TAU, 2.0), Err(Error::Crossing { .. })));
        let err = byers_yang_current(&LandauPhaseSpectrum { varpi: 2.0 }, &o, TAU, DEFAULT_STEP).unwrap_err();
        assert_eq!(err.exit_code(), 4);
        let near = landau_current_closed(&o, TAU * (1.0 - 1e-4), 2.0).unwrap();
        assert!(near.near_crossing);
    }

    #[test]
    fn ring_examples() {
        let sys = unit_ring();
        let cases = [("0:+1", 1.0 / TAU), ("-1:+1,0:+1,1:+1", 3.0 / TAU), ("-1:-1", -1.0 / TAU)];
        for (text, want) in cases {
            let closed = ring_current_closed(&occ(text), 0.0, &sys).unwrap();
            assert_abs_diff_eq!(closed.value, want, epsilon = 1e-15);
            let fd = byers_yang_current(&RingPhaseSpectrum { system: sys }, &occ(text), 0.0, DEFAULT_STEP).unwrap();
            assert_abs_diff_eq!(fd.value, want, epsilon = 1e-8);
        }
    }

    #[test]
    fn ring_current_shift_map() {
        let sys = unit_ring();
        let o = occ("-2:+1,0:-1,3:+1");
        let a = ring_current_closed(&o, 0.7 + TAU, &sys).unwrap().value;
        let b = ring_current_closed(&o.shifted(-1), 0.7, &sys).unwrap().value;
        assert_abs_diff_eq!(a, b, epsilon = 1e-14);
    }

    #[test]
    fn landau_current_is_piecewise_constant() {
        let o = occ("0:0:+1,1:1:+1,0:-1:-1");
        let a = landau_current_closed(&o, 0.2 * TAU, 2.0).unwrap().value;
        let b = landau_current_closed(&o, 0.8 * TAU, 2.0).unwrap().value;
        assert_eq!(a, b);
    }
}
