//! Tabular output shared by the Landau and ring spectra.
//!
//! Two formats: CSV with a `#`-commented header block, and a TOML-compatible
//! text form with one `[[row]]` table per record. Floats are written with the
//! shortest representation that parses back to the same bits.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::landau::{LandauLevel, LevelMethod};
use crate::model::{QuantumState, Spin};
use crate::ring::RingLevel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Asymptotic,
    ExactRoot,
    Oracle,
    ClosedForm,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Asymptotic => "asymptotic",
            Provenance::ExactRoot => "exact_root",
            Provenance::Oracle => "oracle",
            Provenance::ClosedForm => "closed_form",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "txt" | "text" => Ok(Format::Text),
            other => Err(Error::Config(format!("unknown format '{other}' (csv|txt)"))),
        }
    }
}

/// One typed cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(v) => v.clone(),
            Cell::Bool(v) => v.to_string(),
        }
    }

    fn toml(&self) -> String {
        match self {
            Cell::Text(v) => format!("\"{}\"", v.replace('\\', "\\\\").replace('"', "\\\"")),
            Cell::Float(v) if v.is_nan() => "nan".into(),
            Cell::Float(v) if v.is_infinite() => if *v > 0.0 { "inf" } else { "-inf" }.into(),
            other => other.csv(),
        }
    }
}

/// Shortest round-trip decimal.
pub fn format_float(v: f64) -> String {
    format!("{v:?}")
}

pub trait Record: Sized {
    const COLUMNS: &'static [&'static str];
    fn cells(&self) -> Vec<Cell>;
    fn parse(fields: &[&str]) -> Result<Self>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable<R> {
    pub provenance: Provenance,
    pub rows: Vec<R>,
}

impl<R: Record> SpectrumTable<R> {
    /// Keep the row order; on failure report every failing row.
    pub(crate) fn collect_rows(
        provenance: Provenance,
        states: Vec<QuantumState>,
        rows: Vec<Result<R>>,
    ) -> Result<Self> {
        let mut ok = Vec::with_capacity(rows.len());
        let mut failures = Vec::new();
        for (i, (st, row)) in states.into_iter().zip(rows).enumerate() {
            match row {
                Ok(r) => ok.push(r),
                Err(e) => failures.push(Error::Row {
                    row: i,
                    state: st.to_string(),
                    source: Box::new(e),
                }),
            }
        }
        match failures.len() {
            0 => Ok(Self {
                provenance,
                rows: ok,
            }),
            1 => Err(failures.remove(0)),
            _ => Err(Error::Aggregate(failures)),
        }
    }

    pub fn render(&self, format: Format, header: &[(String, String)]) -> String {
        render_records(&self.rows, format, header)
    }

    pub fn from_csv(text: &str) -> Result<Vec<R>> {
        parse_csv(text)
    }
}

pub fn render_records<R: Record>(rows: &[R], format: Format, header: &[(String, String)]) -> String {
    render_rows(R::COLUMNS, rows.iter().map(Record::cells), format, header)
}

/// Render untyped rows under the given column names.
pub fn render_rows<I>(columns: &[&str], rows: I, format: Format, header: &[(String, String)]) -> String
where
    I: IntoIterator<Item = Vec<Cell>>,
{
    let mut out = String::new();
    for (k, v) in header {
        let _ = writeln!(out, "# {k} = {v}");
    }
    match format {
        Format::Csv => {
            let _ = writeln!(out, "{}", columns.join(","));
            for cells in rows {
                let line: Vec<String> = cells.iter().map(Cell::csv).collect();
                let _ = writeln!(out, "{}", line.join(","));
            }
        }
        Format::Text => {
            for cells in rows {
                let _ = writeln!(out, "\n[[row]]");
                for (name, cell) in columns.iter().zip(&cells) {
                    let _ = writeln!(out, "{name} = {}", cell.toml());
                }
            }
        }
    }
    out
}

pub fn parse_csv<R: Record>(text: &str) -> Result<Vec<R>> {
    let mut lines = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Io("missing CSV header".into()))?;
    if header.split(',').collect::<Vec<_>>() != R::COLUMNS {
        return Err(Error::Io(format!("unexpected CSV header '{header}'")));
    }
    lines
        .map(|l| {
            let fields: Vec<&str> = l.split(',').collect();
            if fields.len() != R::COLUMNS.len() {
                return Err(Error::Io(format!("bad CSV row '{l}'")));
            }
            R::parse(&fields)
        })
        .collect()
}

pub(crate) fn parse_f64(s: &str) -> Result<f64> {
    s.parse().map_err(|_| Error::Io(format!("bad float '{s}'")))
}

pub(crate) fn parse_i64(s: &str) -> Result<i64> {
    s.parse().map_err(|_| Error::Io(format!("bad integer '{s}'")))
}

pub(crate) fn parse_spin(s: &str) -> Result<Spin> {
    s.parse().map_err(|_| Error::Io(format!("bad spin '{s}'")))
}

impl Record for LandauLevel {
    const COLUMNS: &'static [&'static str] = &["s", "l", "n", "gamma", "energy", "method", "y0"];

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Int(self.state.s.as_i32() as i64),
            Cell::Int(self.state.l),
            Cell::Int(self.state.n.unwrap_or(0) as i64),
            Cell::Float(self.gamma),
            Cell::Float(self.energy),
            Cell::Text(self.method.as_str().into()),
            Cell::Float(self.y0_used),
        ]
    }

    fn parse(f: &[&str]) -> Result<Self> {
        let n = parse_i64(f[2])?;
        let n = u32::try_from(n).map_err(|_| Error::Io(format!("bad radial number {n}")))?;
        Ok(LandauLevel {
            state: QuantumState::landau(n, parse_i64(f[1])?, parse_spin(f[0])?),
            gamma: parse_f64(f[3])?,
            energy: parse_f64(f[4])?,
            method: f[5].parse::<LevelMethod>().map_err(|e| Error::Io(e.to_string()))?,
            y0_used: parse_f64(f[6])?,
        })
    }
}

impl Record for RingLevel {
    const COLUMNS: &'static [&'static str] = &["s", "l", "j", "nu", "beta", "energy"];

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Int(self.s.as_i32() as i64),
            Cell::Int(self.l),
            Cell::Float(self.j),
            Cell::Float(self.nu),
            Cell::Float(self.beta),
            Cell::Float(self.energy),
        ]
    }

    fn parse(f: &[&str]) -> Result<Self> {
        let nu = parse_f64(f[3])?;
        let j = parse_f64(f[2])?;
        Ok(RingLevel {
            s: parse_spin(f[0])?,
            l: parse_i64(f[1])?,
            j,
            nu,
            beta: parse_f64(f[4])?,
            energy: parse_f64(f[5])?,
            branch: if j - nu >= 0.0 { 1.0 } else { -1.0 },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn level(energy: f64, gamma: f64, y0: f64) -> LandauLevel {
        LandauLevel {
            state: QuantumState::landau(2, -1, Spin::Down),
            energy,
            method: LevelMethod::ExactRoot,
            gamma,
            y0_used: y0,
        }
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_bit_exact(e in proptest::num::f64::NORMAL, g in -50.0..50.0f64, y0 in 0.0..2.0f64) {
            let t = SpectrumTable { provenance: Provenance::ExactRoot, rows: vec![level(e, g, y0)] };
            let text = t.render(Format::Csv, &[("mode".into(), "decoupled".into())]);
            let back = SpectrumTable::<LandauLevel>::from_csv(&text).unwrap();
            prop_assert_eq!(back.len(), 1);
            prop_assert_eq!(back[0].energy.to_bits(), e.to_bits());
            prop_assert_eq!(back[0].gamma.to_bits(), g.to_bits());
            prop_assert_eq!(back[0], t.rows[0]);
        }
    }

    #[test]
    fn text_format_is_toml_like() {
        let t = SpectrumTable {
            provenance: Provenance::Asymptotic,
            rows: vec![level(1.5, 0.25, 0.0)],
        };
        let text = t.render(Format::Text, &[("system".into(), "landau".into())]);
        assert!(text.starts_with("# system = landau\n"));
        assert!(text.contains("[[row]]\ns = -1\nl = -1\nn = 2\ngamma = 0.25\nenergy = 1.5\nmethod = \"exact_root\"\ny0 = 0.0\n"));
    }

    #[test]
    fn header_mismatch_is_rejected() {
        assert!(parse_csv::<LandauLevel>("s,l\n1,2\n").is_err());
    }
}
