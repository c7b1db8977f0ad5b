//! Report records and their JSON-lines / CSV rendering.
//!
//! Every JSON line carries `"schema": "1"`. Exact rationals are written as
//! `"p/2^q"` strings with an `_f64` companion field; CSV rows use the same
//! strings and the same float formatting, so both formats carry identical
//! values.

use std::io::Write;

use anyhow::Result;
use serde::Serialize;
use temporal_bell::inequalities::InequalityReport;
use temporal_bell::Dyadic;

pub const SCHEMA: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Float rendering shared by both formats (shortest round-trip form).
pub fn float(x: f64) -> String {
    serde_json::to_string(&x).expect("finite float")
}

/// A rational with its float convenience value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exact(pub Dyadic);

impl Exact {
    fn insert(&self, map: &mut serde_json::Map<String, serde_json::Value>, key: &str) {
        map.insert(key.into(), self.0.to_string().into());
        map.insert(format!("{key}_f64"), self.0.to_f64().into());
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Reduced,
    BruteForce,
}

impl SearchMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchMode::Reduced => "reduced",
            SearchMode::BruteForce => "brute_force",
        }
    }
}

/// Classical maximum against bound and quantum value for one `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct GameReport {
    pub n: usize,
    pub classical_max: Dyadic,
    pub classical_bound: Dyadic,
    pub quantum_fidelity: f64,
    pub violation_ratio: Dyadic,
    pub search_mode: SearchMode,
    pub elapsed_ms: u64,
    /// Hex encoding of the lowest maximizing strategy.
    pub argmax: String,
}

/// `verify` adds the reduced maximum and the verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub game: GameReport,
    pub reduced_max: Dyadic,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProtocolReport {
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub quantum_exact: String,
    pub quantum_exact_f64: f64,
    pub classical_exact: String,
    pub classical_exact_f64: f64,
    pub classical_strategy: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantum_empirical: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classical_empirical: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classical_std_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelatorReport {
    pub s: [f64; 3],
    pub dirs: Vec<[f64; 3]>,
    pub exact: f64,
    pub analytic: f64,
    pub difference: f64,
    pub pass: bool,
}

/// One output line.
#[derive(Clone, Debug, PartialEq)]
pub enum Record {
    Game(GameReport),
    Verify(VerifyReport),
    CapacityError { n: usize, message: String },
    Protocol(ProtocolReport),
    Correlator(CorrelatorReport),
    Inequality(InequalityReport),
}

impl Record {
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        map.insert("schema".into(), SCHEMA.into());
        match self {
            Record::Game(g) => game_fields(g, &mut map),
            Record::Verify(v) => {
                game_fields(&v.game, &mut map);
                Exact(v.reduced_max).insert(&mut map, "reduced_max");
                map.insert("pass".into(), v.pass.into());
            }
            Record::CapacityError { n, message } => {
                map.insert("n".into(), (*n).into());
                map.insert("error".into(), "capacity".into());
                map.insert("message".into(), message.clone().into());
            }
            Record::Protocol(p) => extend(&mut map, p),
            Record::Correlator(c) => extend(&mut map, c),
            Record::Inequality(r) => extend(&mut map, r),
        }
        serde_json::Value::Object(map)
    }

    fn csv_header(&self) -> &'static [&'static str] {
        match self {
            Record::Game(_) | Record::Verify(_) | Record::CapacityError { .. } => &GAME_HEADER,
            Record::Protocol(_) => &[
                "n",
                "samples",
                "seed",
                "quantum_exact",
                "classical_exact",
                "classical_strategy",
                "quantum_empirical",
                "classical_empirical",
                "tolerance",
                "pass",
            ],
            Record::Correlator(_) => &["m", "exact", "analytic", "difference", "pass"],
            Record::Inequality(_) => &["name", "lhs", "bound", "violated"],
        }
    }

    fn csv_row(&self) -> Vec<String> {
        let opt = |x: Option<f64>| x.map(float).unwrap_or_default();
        match self {
            Record::Game(g) | Record::Verify(VerifyReport { game: g, .. }) => vec![
                g.n.to_string(),
                g.classical_max.to_string(),
                g.classical_bound.to_string(),
                float(g.quantum_fidelity),
                g.violation_ratio.to_string(),
                g.search_mode.as_str().into(),
                g.elapsed_ms.to_string(),
            ],
            Record::CapacityError { n, .. } => {
                let mut row = vec![String::new(); GAME_HEADER.len()];
                row[0] = n.to_string();
                row[5] = "capacity_error".into();
                row
            }
            Record::Protocol(p) => vec![
                p.n.to_string(),
                p.samples.to_string(),
                p.seed.to_string(),
                p.quantum_exact.clone(),
                p.classical_exact.clone(),
                p.classical_strategy.clone(),
                opt(p.quantum_empirical),
                opt(p.classical_empirical),
                opt(p.tolerance),
                p.pass.to_string(),
            ],
            Record::Correlator(c) => vec![
                c.dirs.len().to_string(),
                float(c.exact),
                float(c.analytic),
                float(c.difference),
                c.pass.to_string(),
            ],
            Record::Inequality(r) => {
                vec![
                    r.kind.as_str().into(),
                    float(r.lhs),
                    float(r.bound),
                    r.violated.to_string(),
                ]
            }
        }
    }
}

const GAME_HEADER: [&str; 7] = [
    "n",
    "classical_max",
    "classical_bound",
    "quantum_fidelity",
    "violation_ratio",
    "search_mode",
    "elapsed_ms",
];

fn game_fields(g: &GameReport, map: &mut serde_json::Map<String, serde_json::Value>) {
    map.insert("n".into(), g.n.into());
    Exact(g.classical_max).insert(map, "classical_max");
    Exact(g.classical_bound).insert(map, "classical_bound");
    map.insert("quantum_fidelity".into(), g.quantum_fidelity.into());
    Exact(g.violation_ratio).insert(map, "violation_ratio");
    map.insert("search_mode".into(), g.search_mode.as_str().into());
    map.insert("argmax_encoding".into(), g.argmax.clone().into());
    map.insert("elapsed_ms".into(), g.elapsed_ms.into());
}

fn extend<T: Serialize>(map: &mut serde_json::Map<String, serde_json::Value>, value: &T) {
    match serde_json::to_value(value).expect("report serializes") {
        serde_json::Value::Object(fields) => map.extend(fields),
        other => unreachable!("report serialized to {other}"),
    }
}

/// Writes records in order; in CSV a header precedes each run of records
/// sharing one layout.
pub fn write_records<W: Write>(out: W, format: Format, records: &[Record]) -> Result<()> {
    match format {
        Format::Json => {
            let mut out = out;
            for r in records {
                serde_json::to_writer(&mut out, &r.to_json())?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
            let mut last: Option<&[&str]> = None;
            for r in records {
                let header = r.csv_header();
                if last != Some(header) {
                    w.write_record(header)?;
                    last = Some(header);
                }
                w.write_record(r.csv_row())?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
