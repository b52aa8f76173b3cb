//! JSON and CSV encodings of the emitted tables.
//!
//! Reals are printed with 17 significant digits so a parse recovers the
//! exact double.

use std::io::{self, Write};

use lame_core::harmonics::{SpheroconalHarmonic, StateId};
use lame_core::ladder::LadderDecomposition;
use lame_core::polyalg::Coord;
use lame_core::verify::Report;
use lame_core::AsymmetryConfigF64;
use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

pub const SCHEMA_VERSION: &str = "1";

/// A real number written in scientific notation with 17 significant digits.
#[derive(Debug, Clone, Copy)]
pub struct Num(pub f64);

impl Num {
    pub fn text(self) -> String {
        format!("{:.16e}", self.0)
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom(format!("non-finite value {}", self.0)));
        }
        RawValue::from_string(self.text()).map_err(S::Error::custom)?.serialize(s)
    }
}

#[derive(Serialize)]
pub struct ConfigRecord {
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    moments: Option<[Num; 3]>,
    e: [Num; 3],
    k1sq: Num,
    k2sq: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<Num>,
    lmax: u32,
}

impl ConfigRecord {
    pub fn new(c: &AsymmetryConfigF64, moments: Option<[f64; 3]>, lmax: u32) -> Self {
        Self {
            mode: if moments.is_some() { "moments" } else { "e1" },
            moments: moments.map(|m| m.map(Num)),
            e: c.e().map(Num),
            k1sq: Num(c.k1sq()),
            k2sq: Num(c.k2sq()),
            q: c.q().map(Num),
            p: c.p().map(Num),
            lmax,
        }
    }
}

#[derive(Serialize)]
pub struct StateKey {
    l: u32,
    species_a: String,
    species_b: String,
    n1: u32,
    n2: u32,
}

impl StateKey {
    fn new(id: &StateId) -> Self {
        let pair = id.pair();
        Self {
            l: id.ell,
            species_a: pair.a.name(Coord::First),
            species_b: pair.b.name(Coord::Second),
            n1: id.n1,
            n2: id.n2,
        }
    }

    fn compact(&self) -> String {
        format!("{}:{}:{}:{}:{}", self.l, self.species_a, self.species_b, self.n1, self.n2)
    }
}

#[derive(Serialize)]
pub struct StateRecord {
    #[serde(flatten)]
    key: StateKey,
    h1: Num,
    h2: Num,
    estar2: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    e_total: Option<Num>,
}

impl StateRecord {
    pub fn new(s: &SpheroconalHarmonic<f64>, e_total: Option<f64>) -> Self {
        Self {
            key: StateKey::new(&s.id()),
            h1: Num(s.h1),
            h2: Num(s.h2),
            estar2: Num(s.estar2),
            e_total: e_total.map(Num),
        }
    }
}

#[derive(Serialize)]
pub struct TermRecord {
    target: StateKey,
    coefficient: Num,
}

#[derive(Serialize)]
pub struct LadderRecord {
    operator: String,
    source: StateKey,
    convention: &'static str,
    terms: Vec<TermRecord>,
    residual: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_residual: Option<Num>,
}

impl LadderRecord {
    pub fn new(d: &LadderDecomposition<f64>, oracle_residual: Option<f64>) -> Self {
        Self {
            operator: d.operator.to_string(),
            source: StateKey::new(&d.source),
            convention: d.convention.as_str(),
            terms: d
                .terms
                .iter()
                .map(|t| TermRecord {
                    target: StateKey::new(&t.target),
                    coefficient: Num(t.coefficient),
                })
                .collect(),
            residual: Num(d.residual),
            oracle_residual: oracle_residual.map(Num),
        }
    }
}

#[derive(Serialize)]
struct Document<'a> {
    config: &'a ConfigRecord,
    states: &'a [StateRecord],
    ladders: &'a [LadderRecord],
    version: &'static str,
}

fn finish_json<W: Write + ?Sized, T: Serialize>(w: &mut W, doc: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, doc)?;
    writeln!(w)
}

pub fn write_json<W: Write + ?Sized>(
    w: &mut W,
    config: &ConfigRecord,
    states: &[StateRecord],
    ladders: &[LadderRecord],
) -> io::Result<()> {
    let doc = Document {
        config,
        states,
        ladders,
        version: SCHEMA_VERSION,
    };
    finish_json(w, &doc)
}

pub fn write_states_csv<W: Write + ?Sized>(w: &mut W, states: &[StateRecord], with_energy: bool) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["l", "species_a", "species_b", "n1", "n2", "h1", "h2", "estar2"];
    if with_energy {
        header.push("e_total");
    }
    out.write_record(&header)?;
    for s in states {
        let k = &s.key;
        let mut row = vec![
            k.l.to_string(),
            k.species_a.clone(),
            k.species_b.clone(),
            k.n1.to_string(),
            k.n2.to_string(),
            s.h1.text(),
            s.h2.text(),
            s.estar2.text(),
        ];
        if with_energy {
            row.push(s.e_total.map(Num::text).unwrap_or_default());
        }
        out.write_record(&row)?;
    }
    out.flush()
}

/// One row per decomposition. Targets are `l:species_a:species_b:n1:n2=coefficient`
/// joined by `;`.
pub fn write_ladders_csv<W: Write + ?Sized>(w: &mut W, records: &[LadderRecord], with_oracle: bool) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["operator", "source", "convention", "terms", "residual"];
    if with_oracle {
        header.push("oracle_residual");
    }
    out.write_record(&header)?;
    for r in records {
        let terms: Vec<String> = r
            .terms
            .iter()
            .map(|t| format!("{}={}", t.target.compact(), t.coefficient.text()))
            .collect();
        let mut row = vec![
            r.operator.clone(),
            r.source.compact(),
            r.convention.to_string(),
            terms.join(";"),
            r.residual.text(),
        ];
        if with_oracle {
            row.push(r.oracle_residual.map(Num::text).unwrap_or_default());
        }
        out.write_record(&row)?;
    }
    out.flush()
}

#[derive(Serialize)]
struct CheckRecord {
    name: &'static str,
    passed: bool,
    worst: Num,
    tolerance: Num,
    worst_l: Option<u32>,
}

#[derive(Serialize)]
struct ReportDocument<'a> {
    config: &'a ConfigRecord,
    passed: bool,
    checks: Vec<CheckRecord>,
    version: &'static str,
}

fn check_records(report: &Report) -> Vec<CheckRecord> {
    report
        .checks
        .iter()
        .map(|c| CheckRecord {
            name: c.name,
            passed: c.passed,
            // An unbounded defect is reported as the largest double.
            worst: Num(if c.worst.is_finite() { c.worst } else { f64::MAX }),
            tolerance: Num(c.tolerance),
            worst_l: c.worst_ell,
        })
        .collect()
}

pub fn write_report_json<W: Write + ?Sized>(w: &mut W, config: &ConfigRecord, report: &Report) -> io::Result<()> {
    let doc = ReportDocument {
        config,
        passed: report.passed(),
        checks: check_records(report),
        version: SCHEMA_VERSION,
    };
    finish_json(w, &doc)
}

pub fn write_report_csv<W: Write + ?Sized>(w: &mut W, report: &Report) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["name", "passed", "worst", "tolerance", "worst_l"])?;
    for c in check_records(report) {
        out.write_record([
            c.name.to_string(),
            c.passed.to_string(),
            c.worst.text(),
            c.tolerance.text(),
            c.worst_l.map(|l| l.to_string()).unwrap_or_default(),
        ])?;
    }
    out.flush()
}
