//! Command-line front end.
//!
//! Parameters come from an optional flat `key = value` file and from flags;
//! flags win. Output goes to `--out` or stdout, always preceded by a `#`
//! header block holding the resolved configuration.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::currents::{
    byers_yang_current, landau_current_closed, landau_current_closed_verbatim, ring_current_closed,
    CurrentMethod, CurrentResult, LandauPhaseSpectrum, OccupationSet, RingPhaseSpectrum, DEFAULT_STEP,
};
use crate::error::{Error, Result};
use crate::landau::{spectrum_table, LandauLevel, LandauSource, LevelMethod, DEFAULT_REL_TOL};
use crate::model::{derive, DerivedParams, Spin, SystemParams};
use crate::ring::{ring_spectrum, RingLevel, RingSystem};
use crate::specfun::{gamma, kummer_m, ln_gamma, tricomi_u, tricomi_u_small_y};
use crate::table::{format_float, parse_f64, render_rows, Cell, Format, Record};
use crate::verify::{self, Level};

#[derive(Debug, Parser)]
#[command(name = "mhmw", version, about = "Spectra and persistent spin currents of a neutral dipole outside a magnetically charged cylinder")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Landau-type levels with the hard wall.
    LandauSpectrum(CommonArgs),
    /// Levels of the one-dimensional ring.
    RingSpectrum(CommonArgs),
    /// Persistent spin currents for an occupation set.
    Currents(CommonArgs),
    /// Levels or currents over a range of phi, y0 or R.
    Sweep(CommonArgs),
    /// Evaluate one special function.
    SpecfunEval(SpecfunArgs),
    /// Run the acceptance checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Default, Clone, Args)]
pub struct CommonArgs {
    /// key = value file; flags override it
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// physical | decoupled
    #[arg(long)]
    pub mode: Option<String>,
    /// landau | ring (sweep and currents)
    #[arg(long)]
    pub system: Option<String>,
    /// asymptotic | exact (Landau levels)
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<String>,
    #[arg(long = "rho-m", allow_hyphen_values = true)]
    pub rho_m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub r0: Option<String>,
    /// ring radius
    #[arg(long = "R", allow_hyphen_values = true)]
    pub ring_radius: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub varpi: Option<String>,
    #[arg(long = "phi-over-2pi", allow_hyphen_values = true)]
    pub phi_over_2pi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub y0: Option<String>,
    /// +1 | -1 | both
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    #[arg(long = "l-min", allow_hyphen_values = true)]
    pub l_min: Option<String>,
    #[arg(long = "l-max", allow_hyphen_values = true)]
    pub l_max: Option<String>,
    #[arg(long = "n-min", allow_hyphen_values = true)]
    pub n_min: Option<String>,
    #[arg(long = "n-max", allow_hyphen_values = true)]
    pub n_max: Option<String>,
    /// comma list of n:l:s (Landau) or l:s (ring)
    #[arg(long, allow_hyphen_values = true)]
    pub occupation: Option<String>,
    /// phi (in units of 2π) | y0 | R
    #[arg(long = "sweep-var")]
    pub sweep_var: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub steps: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    /// csv | txt
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub jobs: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<String>,
    /// also emit the printed single-sum Landau closed form
    #[arg(long)]
    pub verbatim: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SpecfunArgs {
    /// lngamma | gamma | kummer-m | tricomi-u | tricomi-u-small
    #[arg(long)]
    pub function: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    pub format: String,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// quick | full
    #[arg(default_value = "quick")]
    pub level: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "mode",
    "system",
    "method",
    "m",
    "d",
    "rho-m",
    "r0",
    "R",
    "varpi",
    "phi-over-2pi",
    "y0",
    "s",
    "l-min",
    "l-max",
    "n-min",
    "n-max",
    "occupation",
    "sweep-var",
    "from",
    "to",
    "steps",
    "out",
    "format",
    "jobs",
    "tol",
    "verbatim",
];

fn canonical_key(key: &str) -> Option<&'static str> {
    let k = key.trim().replace('_', "-");
    KEYS.iter().copied().find(|c| *c == k || (c.len() > 1 && c.eq_ignore_ascii_case(&k)))
}

/// Flat `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<&'static str, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value, got '{raw}'", i + 1)))?;
        let canon =
            canonical_key(key).ok_or_else(|| Error::Config(format!("line {}: unknown key '{}'", i + 1, key.trim())))?;
        if map.insert(canon, value.trim().to_string()).is_some() {
            return Err(Error::Config(format!("line {}: key '{canon}' given twice", i + 1)));
        }
    }
    Ok(map)
}

impl CommonArgs {
    fn flag_values(&self) -> Vec<(&'static str, Option<String>)> {
        vec![
            ("mode", self.mode.clone()),
            ("system", self.system.clone()),
            ("method", self.method.clone()),
            ("m", self.m.clone()),
            ("d", self.d.clone()),
            ("rho-m", self.rho_m.clone()),
            ("r0", self.r0.clone()),
            ("R", self.ring_radius.clone()),
            ("varpi", self.varpi.clone()),
            ("phi-over-2pi", self.phi_over_2pi.clone()),
            ("y0", self.y0.clone()),
            ("s", self.s.clone()),
            ("l-min", self.l_min.clone()),
            ("l-max", self.l_max.clone()),
            ("n-min", self.n_min.clone()),
            ("n-max", self.n_max.clone()),
            ("occupation", self.occupation.clone()),
            ("sweep-var", self.sweep_var.clone()),
            ("from", self.from.clone()),
            ("to", self.to.clone()),
            ("steps", self.steps.clone()),
            ("out", self.out.clone()),
            ("format", self.format.clone()),
            ("jobs", self.jobs.clone()),
            ("tol", self.tol.clone()),
            ("verbatim", self.verbatim.then(|| "true".to_string())),
        ]
    }

    /// File values overlaid with flags.
    pub fn merged(&self) -> Result<BTreeMap<&'static str, String>> {
        let mut map = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
                parse_config_text(&text)?
            }
            None => BTreeMap::new(),
        };
        for (k, v) in self.flag_values() {
            if let Some(v) = v {
                map.insert(k, v);
            }
        }
        Ok(map)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Physical,
    Decoupled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    Landau,
    Ring,
}

impl SystemKind {
    fn as_str(self) -> &'static str {
        match self {
            SystemKind::Landau => "landau",
            SystemKind::Ring => "ring",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    Phi,
    Y0,
    Radius,
}

impl SweepVar {
    fn as_str(self) -> &'static str {
        match self {
            SweepVar::Phi => "phi",
            SweepVar::Y0 => "y0",
            SweepVar::Radius => "R",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub var: SweepVar,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.to
                } else {
                    self.from + (self.to - self.from) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

/// Physical inputs or directly injected formula inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Inputs {
    Physical(SystemParams),
    Decoupled {
        m: f64,
        varpi: f64,
        phi_over_2pi: f64,
        y0: Option<f64>,
        radius: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: &'static str,
    pub system: SystemKind,
    pub inputs: Inputs,
    pub spins: Vec<Spin>,
    pub l_range: (i64, i64),
    pub n_range: (u32, u32),
    pub method: LevelMethod,
    pub occupation: Option<OccupationSet>,
    pub sweep: Option<Sweep>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub jobs: usize,
    pub tol: Option<f64>,
    pub verbatim: bool,
}

fn get_f64(map: &BTreeMap<&str, String>, key: &str) -> Result<Option<f64>> {
    map.get(key)
        .map(|v| {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Config(format!("'{key}' must be a finite number, got '{v}'")))
        })
        .transpose()
}

fn get_int<T: std::str::FromStr>(map: &BTreeMap<&str, String>, key: &str) -> Result<Option<T>> {
    map.get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| Error::Config(format!("'{key}' must be an integer, got '{v}'")))
        })
        .transpose()
}

fn require(map: &BTreeMap<&str, String>, key: &str, mode: &str) -> Result<f64> {
    get_f64(map, key)?.ok_or_else(|| Error::Config(format!("{mode} mode needs '{key}'")))
}

fn forbid(map: &BTreeMap<&str, String>, keys: &[&str], why: &str) -> Result<()> {
    match keys.iter().find(|k| map.contains_key(**k)) {
        Some(k) => Err(Error::Config(format!("'{k}' cannot be given: {why}"))),
        None => Ok(()),
    }
}

fn parse_spins(text: &str) -> Result<Vec<Spin>> {
    match text.trim() {
        "both" | "+-1" | "±1" => Ok(Spin::BOTH.to_vec()),
        other => other
            .parse::<Spin>()
            .map(|s| vec![s])
            .map_err(|_| Error::Config(format!("'s' must be +1, -1 or both, got '{text}'"))),
    }
}

impl RunConfig {
    pub fn resolve(command: &'static str, map: &BTreeMap<&'static str, String>) -> Result<Self> {
        let mode = match map.get("mode").map(String::as_str).unwrap_or("physical") {
            "physical" => Mode::Physical,
            "decoupled" => Mode::Decoupled,
            other => return Err(Error::Config(format!("unknown mode '{other}' (physical|decoupled)"))),
        };
        let occupation = map
            .get("occupation")
            .map(|v| v.parse::<OccupationSet>().map_err(|e| Error::Config(e.to_string())))
            .transpose()?;
        let system = match (command, map.get("system").map(String::as_str)) {
            ("landau-spectrum", None | Some("landau")) => SystemKind::Landau,
            ("ring-spectrum", None | Some("ring")) => SystemKind::Ring,
            ("landau-spectrum" | "ring-spectrum", Some(other)) => {
                return Err(Error::Config(format!("'system = {other}' conflicts with {command}")))
            }
            (_, Some("landau")) => SystemKind::Landau,
            (_, Some("ring")) => SystemKind::Ring,
            (_, Some(other)) => return Err(Error::Config(format!("unknown system '{other}' (landau|ring)"))),
            (_, None) => match &occupation {
                Some(o) if !o.is_landau() => SystemKind::Ring,
                _ => SystemKind::Landau,
            },
        };
        if let Some(o) = &occupation {
            if o.is_landau() != (system == SystemKind::Landau) {
                return Err(Error::Config(format!(
                    "occupation '{o}' does not match the {} system (n:l:s for landau, l:s for ring)",
                    system.as_str()
                )));
            }
        }

        let inputs = match mode {
            Mode::Physical => {
                forbid(
                    map,
                    &["varpi", "phi-over-2pi", "y0"],
                    "physical mode derives varpi, phi and y0 from m, d, rho-m and r0",
                )?;
                let mut p = SystemParams::new(
                    require(map, "m", "physical")?,
                    require(map, "d", "physical")?,
                    require(map, "rho-m", "physical")?,
                    require(map, "r0", "physical")?,
                )
                .map_err(|e| Error::Config(e.to_string()))?;
                if let Some(r) = get_f64(map, "R")? {
                    p = p.with_ring_radius(r).map_err(|e| Error::Config(e.to_string()))?;
                }
                Inputs::Physical(p)
            }
            Mode::Decoupled => {
                forbid(
                    map,
                    &["d", "rho-m", "r0"],
                    "decoupled mode takes varpi, phi-over-2pi and y0 directly",
                )?;
                let m = get_f64(map, "m")?.unwrap_or(1.0);
                let varpi = require(map, "varpi", "decoupled")?;
                let phi_over_2pi = require(map, "phi-over-2pi", "decoupled")?;
                let y0 = get_f64(map, "y0")?;
                let radius = get_f64(map, "R")?;
                DerivedParams::decoupled(varpi, TAU * phi_over_2pi, y0.unwrap_or(0.0))
                    .map_err(|e| Error::Config(e.to_string()))?;
                if !(m > 0.0) {
                    return Err(Error::Config(format!("'m' must be > 0, got {m}")));
                }
                if let Some(r) = radius {
                    if !(r > 0.0) {
                        return Err(Error::Config(format!("'R' must be > 0, got {r}")));
                    }
                }
                Inputs::Decoupled {
                    m,
                    varpi,
                    phi_over_2pi,
                    y0,
                    radius,
                }
            }
        };

        let spins = parse_spins(map.get("s").map(String::as_str).unwrap_or("both"))?;
        let l_range = (
            get_int::<i64>(map, "l-min")?.unwrap_or(-3),
            get_int::<i64>(map, "l-max")?.unwrap_or(3),
        );
        let n_range = (
            get_int::<u32>(map, "n-min")?.unwrap_or(0),
            get_int::<u32>(map, "n-max")?.unwrap_or(3),
        );
        if l_range.0 > l_range.1 || n_range.0 > n_range.1 {
            return Err(Error::Config("empty l or n range".into()));
        }
        let method = match map.get("method").map(String::as_str) {
            None => LevelMethod::Asymptotic,
            Some(m) => m.parse().map_err(|e: Error| Error::Config(e.to_string()))?,
        };

        let sweep = match map.get("sweep-var") {
            None => {
                if command == "sweep" {
                    return Err(Error::Config("sweep needs 'sweep-var'".into()));
                }
                None
            }
            Some(v) => {
                let var = match v.as_str() {
                    "phi" | "phi-over-2pi" => SweepVar::Phi,
                    "y0" => SweepVar::Y0,
                    "R" => SweepVar::Radius,
                    other => return Err(Error::Config(format!("unknown sweep variable '{other}' (phi|y0|R)"))),
                };
                let steps = get_int::<usize>(map, "steps")?.unwrap_or(2);
                if steps < 2 {
                    return Err(Error::Config(format!("'steps' must be ≥ 2, got {steps}")));
                }
                Some(Sweep {
                    var,
                    from: require(map, "from", "sweep")?,
                    to: require(map, "to", "sweep")?,
                    steps,
                })
            }
        };

        let format = map
            .get("format")
            .map(|f| f.parse::<Format>())
            .transpose()?
            .unwrap_or(Format::Csv);
        let jobs = get_int::<usize>(map, "jobs")?.unwrap_or(0);
        let tol = get_f64(map, "tol")?;
        if let Some(t) = tol {
            if !(t > 0.0) {
                return Err(Error::Config(format!("'tol' must be > 0, got {t}")));
            }
        }
        let verbatim = match map.get("verbatim").map(String::as_str) {
            None | Some("false") => false,
            Some("true") => true,
            Some(other) => return Err(Error::Config(format!("'verbatim' must be true or false, got '{other}'"))),
        };

        Ok(Self {
            command,
            system,
            inputs,
            spins,
            l_range,
            n_range,
            method,
            occupation,
            sweep,
            out: map.get("out").map(PathBuf::from),
            format,
            jobs,
            tol,
            verbatim,
        })
    }

    pub fn mode(&self) -> Mode {
        match self.inputs {
            Inputs::Physical(_) => Mode::Physical,
            Inputs::Decoupled { .. } => Mode::Decoupled,
        }
    }

    pub fn m(&self) -> f64 {
        match self.inputs {
            Inputs::Physical(p) => p.m,
            Inputs::Decoupled { m, .. } => m,
        }
    }

    pub fn varpi(&self) -> f64 {
        match self.inputs {
            Inputs::Physical(p) => p.varpi(),
            Inputs::Decoupled { varpi, .. } => varpi,
        }
    }

    /// Φ for spin s: derived in physical mode, shared in decoupled mode.
    pub fn phase(&self, s: Spin) -> f64 {
        match self.inputs {
            Inputs::Physical(p) => derive(&p, s).phi_mhmw,
            Inputs::Decoupled { phi_over_2pi, .. } => TAU * phi_over_2pi,
        }
    }

    pub fn landau_source(&self) -> Result<LandauSource> {
        Ok(match self.inputs {
            Inputs::Physical(p) => LandauSource::Physical(p),
            Inputs::Decoupled {
                m,
                varpi,
                phi_over_2pi,
                y0,
                ..
            } => {
                if self.method == LevelMethod::ExactRoot && !y0.is_some_and(|y| y > 0.0) {
                    return Err(Error::Config("the exact method needs y0 > 0".into()));
                }
                LandauSource::Decoupled {
                    derived: DerivedParams::decoupled(varpi, TAU * phi_over_2pi, y0.unwrap_or(0.0))?,
                    m,
                }
            }
        })
    }

    pub fn ring_system(&self) -> Result<RingSystem> {
        match self.inputs {
            Inputs::Physical(p) => RingSystem::physical(&p).map_err(|e| Error::Config(e.to_string())),
            Inputs::Decoupled { m, varpi, radius, .. } => {
                RingSystem::decoupled(m, varpi, radius.ok_or(Error::MissingRadius)?)
            }
        }
    }

    /// Same configuration with the sweep variable set to `value`.
    pub fn at(&self, var: SweepVar, value: f64) -> Result<Self> {
        let mut next = self.clone();
        next.inputs = match (self.inputs, var) {
            (Inputs::Physical(_), SweepVar::Phi) => {
                return Err(Error::Config(
                    "phi is derived from r0 in physical mode; sweep y0 instead or use decoupled mode".into(),
                ))
            }
            (Inputs::Physical(p), SweepVar::Y0) => {
                let r0 = (2.0 * value / (p.m * p.varpi())).sqrt();
                let mut q = SystemParams::new(p.m, p.d, p.rho_m, r0)?;
                if let Some(r) = p.ring_radius {
                    q = q.with_ring_radius(r)?;
                }
                Inputs::Physical(q)
            }
            (Inputs::Physical(p), SweepVar::Radius) => Inputs::Physical(p.with_ring_radius(value)?),
            (Inputs::Decoupled { m, varpi, y0, radius, .. }, SweepVar::Phi) => Inputs::Decoupled {
                m,
                varpi,
                phi_over_2pi: value,
                y0,
                radius,
            },
            (Inputs::Decoupled { m, varpi, phi_over_2pi, radius, .. }, SweepVar::Y0) => Inputs::Decoupled {
                m,
                varpi,
                phi_over_2pi,
                y0: Some(value),
                radius,
            },
            (Inputs::Decoupled { m, varpi, phi_over_2pi, y0, .. }, SweepVar::Radius) => {
                if !(value > 0.0) {
                    return Err(Error::InvalidParams(format!("R must be > 0, got {value}")));
                }
                Inputs::Decoupled {
                    m,
                    varpi,
                    phi_over_2pi,
                    y0,
                    radius: Some(value),
                }
            }
        };
        Ok(next)
    }

    fn rel_tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_REL_TOL)
    }

    /// Resolved configuration, then derived quantities, one `key = value` per line.
    pub fn header(&self) -> Vec<(String, String)> {
        let mut h: Vec<(String, String)> = vec![
            ("tool".into(), format!("mhmw {}", env!("CARGO_PKG_VERSION"))),
            ("command".into(), self.command.into()),
            (
                "mode".into(),
                match self.mode() {
                    Mode::Physical => "physical".into(),
                    Mode::Decoupled => "decoupled".into(),
                },
            ),
            ("system".into(), self.system.as_str().into()),
        ];
        let mut push = |k: &str, v: String| h.push((k.into(), v));
        match self.inputs {
            Inputs::Physical(p) => {
                push("m", format_float(p.m));
                push("d", format_float(p.d));
                push("rho-m", format_float(p.rho_m));
                push("r0", format_float(p.r0));
                push("R", p.ring_radius.map_or("none".into(), format_float));
            }
            Inputs::Decoupled {
                m,
                varpi,
                phi_over_2pi,
                y0,
                radius,
            } => {
                push("m", format_float(m));
                push("varpi", format_float(varpi));
                push("phi-over-2pi", format_float(phi_over_2pi));
                push("y0", y0.map_or("none".into(), format_float));
                push("R", radius.map_or("none".into(), format_float));
            }
        }
        push(
            "s",
            self.spins.iter().map(Spin::to_string).collect::<Vec<_>>().join(","),
        );
        push("l-min", self.l_range.0.to_string());
        push("l-max", self.l_range.1.to_string());
        push("n-min", self.n_range.0.to_string());
        push("n-max", self.n_range.1.to_string());
        push("method", self.method.as_str().into());
        push("occupation", self.occupation.as_ref().map_or("none".into(), |o| o.to_string()));
        match self.sweep {
            Some(sw) => {
                push("sweep-var", sw.var.as_str().into());
                push("from", format_float(sw.from));
                push("to", format_float(sw.to));
                push("steps", sw.steps.to_string());
            }
            None => push("sweep-var", "none".into()),
        }
        push("format", match self.format {
            Format::Csv => "csv".into(),
            Format::Text => "txt".into(),
        });
        push("jobs", self.jobs.to_string());
        push("tol", self.tol.map_or("default".into(), format_float));
        push("verbatim", self.verbatim.to_string());
        if let Inputs::Physical(p) = self.inputs {
            push("derived.varpi", format_float(p.varpi()));
            for s in Spin::BOTH {
                let d = derive(&p, s);
                push(&format!("derived.y0[s={s}]"), format_float(d.y0));
                push(&format!("derived.phi-over-2pi[s={s}]"), format_float(d.phi_over_two_pi()));
            }
        }
        h
    }
}

/// Text destined for the output file (or stdout) and a summary for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub body: String,
    pub summary: Vec<String>,
    /// Non-fatal failure to report after the body is written.
    pub failure: Option<Error>,
}

fn landau_spectrum(cfg: &RunConfig) -> Result<Output> {
    let table = spectrum_table(
        cfg.n_range.0..=cfg.n_range.1,
        cfg.l_range.0..=cfg.l_range.1,
        &cfg.spins,
        &cfg.landau_source()?,
        cfg.method,
        cfg.rel_tol(),
    )?;
    let varpi = cfg.varpi();
    let mut summary = Vec::new();
    for &s in &cfg.spins {
        let mut energies: Vec<f64> = table.rows.iter().filter(|r| r.state.s == s).map(|r| r.energy).collect();
        energies.sort_by(f64::total_cmp);
        let classes = 1 + energies.windows(2).filter(|w| w[1] - w[0] > 1e-12 * varpi).count();
        summary.push(format!("s={s}: {} levels in {classes} degeneracy classes", energies.len()));
    }
    if table.rows.iter().any(|r| r.method == LevelMethod::ExactRoot && !r.in_validated_regime()) {
        summary.push("warning: y0 ≥ 1 lies outside the validated regime".into());
    }
    Ok(Output {
        body: table.render(cfg.format, &cfg.header()),
        summary,
        failure: None,
    })
}

fn ring_levels(cfg: &RunConfig) -> Result<Vec<RingLevel>> {
    let system = cfg.ring_system()?;
    Ok(ring_spectrum(cfg.l_range.0..=cfg.l_range.1, &cfg.spins, &system, |s| cfg.phase(s))?.rows)
}

fn ring_spectrum_cmd(cfg: &RunConfig) -> Result<Output> {
    let rows = ring_levels(cfg)?;
    let mut summary = Vec::new();
    for &s in &cfg.spins {
        if let Some(min) = rows.iter().filter(|r| r.s == s).min_by(|a, b| a.energy.total_cmp(&b.energy)) {
            summary.push(format!("s={s}: ground level l={} E={}", min.l, format_float(min.energy)));
        }
    }
    Ok(Output {
        body: crate::table::render_records(&rows, cfg.format, &cfg.header()),
        summary,
        failure: None,
    })
}

/// One line of the currents table.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentRow {
    pub system: SystemKind,
    pub s: Spin,
    pub occupied: String,
    pub phi_over_2pi: f64,
    pub result: CurrentResult,
    /// value − closed-form value.
    pub difference: f64,
}

impl Record for CurrentRow {
    const COLUMNS: &'static [&'static str] = &[
        "system",
        "s",
        "occupied_states",
        "phi_over_2pi",
        "value",
        "method",
        "near_crossing",
        "crossing_distance",
        "difference",
    ];

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Text(self.system.as_str().into()),
            Cell::Int(self.s.as_i32() as i64),
            Cell::Text(self.occupied.clone()),
            Cell::Float(self.phi_over_2pi),
            Cell::Float(self.result.value),
            Cell::Text(self.result.method.as_str().into()),
            Cell::Bool(self.result.near_crossing),
            Cell::Float(self.result.crossing_distance),
            Cell::Float(self.difference),
        ]
    }

    fn parse(f: &[&str]) -> Result<Self> {
        let system = match f[0] {
            "landau" => SystemKind::Landau,
            "ring" => SystemKind::Ring,
            other => return Err(Error::Io(format!("bad system '{other}'"))),
        };
        let method = match f[5] {
            "closed_form" => CurrentMethod::ClosedForm,
            "closed_form_verbatim" => CurrentMethod::ClosedFormVerbatim,
            "byers_yang_fd" => CurrentMethod::ByersYangFd,
            other => return Err(Error::Io(format!("bad method '{other}'"))),
        };
        Ok(CurrentRow {
            system,
            s: crate::table::parse_spin(f[1])?,
            occupied: f[2].into(),
            phi_over_2pi: parse_f64(f[3])?,
            result: CurrentResult {
                value: parse_f64(f[4])?,
                method,
                near_crossing: f[6] == "true",
                crossing_distance: parse_f64(f[7])?,
            },
            difference: parse_f64(f[8])?,
        })
    }
}

/// Closed form, Byers–Yang and optionally the printed form, one spin at a time.
fn current_rows(cfg: &RunConfig, occ: &OccupationSet) -> Result<(Vec<CurrentRow>, Option<Error>)> {
    let tol = cfg.tol.unwrap_or(1e-6);
    let mut rows = Vec::new();
    let mut failure = None;
    for (s, part) in occ.split_by_spin() {
        let phi = cfg.phase(s);
        let (closed, fd, verbatim, scale) = match cfg.system {
            SystemKind::Landau => {
                let varpi = cfg.varpi();
                let fd = byers_yang_current(&LandauPhaseSpectrum { varpi }, &part, phi, DEFAULT_STEP)?;
                let closed = landau_current_closed(&part, phi, varpi)?;
                let verbatim = if cfg.verbatim {
                    Some(landau_current_closed_verbatim(&part, phi, varpi)?)
                } else {
                    None
                };
                (closed, fd, verbatim, varpi)
            }
            SystemKind::Ring => {
                let system = cfg.ring_system()?;
                let fd = byers_yang_current(&RingPhaseSpectrum { system }, &part, phi, DEFAULT_STEP)?;
                let closed = ring_current_closed(&part, phi, &system)?;
                (closed, fd, None, 1.0 / (system.m * system.radius * system.radius))
            }
        };
        let diff = fd.value - closed.value;
        if diff.abs() > tol * scale && !fd.near_crossing && failure.is_none() {
            failure = Some(Error::PrecisionLoss {
                what: format!("closed form vs Byers–Yang for s={s} {part}"),
                value: closed.value,
                estimate: diff.abs(),
            });
        }
        let row = |result: CurrentResult| CurrentRow {
            system: cfg.system,
            s,
            occupied: part.to_string(),
            phi_over_2pi: phi / TAU,
            result,
            difference: result.value - closed.value,
        };
        rows.push(row(closed));
        rows.push(row(fd));
        if let Some(v) = verbatim {
            rows.push(row(v));
        }
    }
    Ok((rows, failure))
}

fn currents_cmd(cfg: &RunConfig) -> Result<Output> {
    let occ = cfg
        .occupation
        .as_ref()
        .ok_or_else(|| Error::Config("currents needs 'occupation'".into()))?;
    let (rows, failure) = current_rows(cfg, occ)?;
    let summary = rows
        .iter()
        .map(|r| {
            format!(
                "s={} {}: {}{}",
                r.s,
                r.result.method.as_str(),
                format_float(r.result.value),
                if r.result.near_crossing { " (near crossing)" } else { "" }
            )
        })
        .collect();
    Ok(Output {
        body: crate::table::render_records(&rows, cfg.format, &cfg.header()),
        summary,
        failure,
    })
}

fn sweep_cmd(cfg: &RunConfig) -> Result<Output> {
    let sweep = cfg.sweep.ok_or_else(|| Error::Config("sweep needs 'sweep-var'".into()))?;
    if sweep.var == SweepVar::Radius && cfg.system == SystemKind::Landau && cfg.occupation.is_none() {
        return Err(Error::Config("R sweeps apply to the ring system".into()));
    }
    let values = sweep.values();
    let points: Vec<RunConfig> = values
        .iter()
        .map(|&v| cfg.at(sweep.var, v))
        .collect::<Result<_>>()?;

    type Rows = (Vec<&'static str>, Vec<Vec<Cell>>);
    let point_rows = |p: &RunConfig| -> Result<Rows> {
        match (&p.occupation, p.system) {
            (Some(occ), _) => {
                let (rows, failure) = current_rows(p, occ)?;
                if let Some(f) = failure {
                    return Err(f);
                }
                Ok((CurrentRow::COLUMNS.to_vec(), rows.iter().map(Record::cells).collect()))
            }
            (None, SystemKind::Landau) => {
                let table = spectrum_table(
                    p.n_range.0..=p.n_range.1,
                    p.l_range.0..=p.l_range.1,
                    &p.spins,
                    &p.landau_source()?,
                    p.method,
                    p.rel_tol(),
                )?;
                Ok((LandauLevel::COLUMNS.to_vec(), table.rows.iter().map(Record::cells).collect()))
            }
            (None, SystemKind::Ring) => Ok((
                RingLevel::COLUMNS.to_vec(),
                ring_levels(p)?.iter().map(Record::cells).collect(),
            )),
        }
    };
    let results: Vec<Result<Rows>> = points.par_iter().map(point_rows).collect();

    let mut columns = vec!["sweep_var", "sweep_value"];
    let mut cells = Vec::new();
    let mut failures = Vec::new();
    for (i, (value, res)) in values.iter().zip(results).enumerate() {
        match res {
            Ok((cols, rows)) => {
                if columns.len() == 2 {
                    columns.extend(cols);
                }
                for r in rows {
                    let mut line = vec![Cell::Text(sweep.var.as_str().into()), Cell::Float(*value)];
                    line.extend(r);
                    cells.push(line);
                }
            }
            Err(e) => failures.push(Error::Row {
                row: i,
                state: format!("{}={}", sweep.var.as_str(), format_float(*value)),
                source: Box::new(e),
            }),
        }
    }
    match failures.len() {
        0 => {}
        1 => return Err(failures.remove(0)),
        _ => return Err(Error::Aggregate(failures)),
    }
    let summary = vec![format!("{} points, {} rows", values.len(), cells.len())];
    Ok(Output {
        body: render_rows(&columns, cells, cfg.format, &cfg.header()),
        summary,
        failure: None,
    })
}

fn specfun_cmd(args: &SpecfunArgs) -> Result<Output> {
    let format: Format = args.format.parse()?;
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| Error::Config(format!("{} needs --{name}", args.function)));
    let x = args.x;
    let (value, sign, estimate, method): (f64, Option<f64>, Option<f64>, String) = match args.function.as_str() {
        "lngamma" => {
            let r = ln_gamma(x)?;
            (r.value, Some(r.sign), None, "ln_gamma".into())
        }
        "gamma" => (gamma(x)?, None, None, "gamma".into()),
        "kummer-m" => {
            let r = kummer_m(need(args.a, "a")?, need(args.b, "b")?, x)?;
            (r.value, None, Some(r.abs_error_estimate), r.method.as_str().into())
        }
        "tricomi-u" => {
            let r = tricomi_u(need(args.a, "a")?, need(args.b, "b")?, x)?;
            (r.value, None, Some(r.abs_error_estimate), r.method.as_str().into())
        }
        "tricomi-u-small" => (
            tricomi_u_small_y(need(args.a, "a")?, need(args.b, "b")?, x)?,
            None,
            None,
            "leading_term".into(),
        ),
        other => {
            return Err(Error::Config(format!(
                "unknown function '{other}' (lngamma|gamma|kummer-m|tricomi-u|tricomi-u-small)"
            )))
        }
    };
    let opt = |v: Option<f64>| v.map_or(Cell::Text(String::new()), Cell::Float);
    let row = vec![
        Cell::Text(args.function.clone()),
        opt(args.a),
        opt(args.b),
        Cell::Float(x),
        Cell::Float(value),
        opt(sign),
        opt(estimate),
        Cell::Text(method),
    ];
    let header = vec![
        ("tool".to_string(), format!("mhmw {}", env!("CARGO_PKG_VERSION"))),
        ("command".into(), "specfun-eval".into()),
        ("function".into(), args.function.clone()),
    ];
    Ok(Output {
        body: render_rows(
            &["function", "a", "b", "x", "value", "sign", "abs_error_estimate", "method"],
            [row],
            format,
            &header,
        ),
        summary: Vec::new(),
        failure: None,
    })
}

fn write_body(out: Option<&Path>, body: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if jobs == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {jobs} worker threads: {e}")))?;
    Ok(pool.install(f))
}

/// Compute one command without touching the filesystem.
pub fn execute(command: &Command) -> Result<Output> {
    match command {
        Command::SpecfunEval(args) => specfun_cmd(args),
        Command::Verify(args) => {
            let level: Level = args.level.parse()?;
            let report = verify::run(level);
            let failure = (!report.passed()).then(|| {
                let failed: Vec<String> = report
                    .outcomes
                    .iter()
                    .filter(|o| !o.passed)
                    .map(|o| o.id.to_string())
                    .collect();
                Error::Domain(format!("verification failed for criteria {}", failed.join(", ")))
            });
            Ok(Output {
                body: report.render(),
                summary: Vec::new(),
                failure,
            })
        }
        Command::LandauSpectrum(a) | Command::RingSpectrum(a) | Command::Currents(a) | Command::Sweep(a) => {
            let name = match command {
                Command::LandauSpectrum(_) => "landau-spectrum",
                Command::RingSpectrum(_) => "ring-spectrum",
                Command::Currents(_) => "currents",
                _ => "sweep",
            };
            let cfg = RunConfig::resolve(name, &a.merged()?)?;
            with_pool(cfg.jobs, || match name {
                "landau-spectrum" => landau_spectrum(&cfg),
                "ring-spectrum" => ring_spectrum_cmd(&cfg),
                "currents" => currents_cmd(&cfg),
                _ => sweep_cmd(&cfg),
            })?
        }
    }
}

fn output_path(command: &Command) -> Result<Option<PathBuf>> {
    Ok(match command {
        Command::SpecfunEval(a) => a.out.clone(),
        Command::Verify(a) => a.out.clone(),
        Command::LandauSpectrum(a) | Command::RingSpectrum(a) | Command::Currents(a) | Command::Sweep(a) => {
            a.merged()?.get("out").map(PathBuf::from)
        }
    })
}

/// Parse, compute, write; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = execute(&cli.command).and_then(|out| {
        write_body(output_path(&cli.command)?.as_deref(), &out.body)?;
        for line in &out.summary {
            eprintln!("{line}");
        }
        match out.failure {
            Some(e) => Err(e),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
