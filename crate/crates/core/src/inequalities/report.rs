use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::quantum::{Direction, Vec3};

/// Margin by which a left-hand side must exceed its bound to count as a
/// violation.
pub const VIOLATION_MARGIN: f64 = 1e-9;

/// Two settings for each of two times.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChshSettings {
    pub a1: Direction,
    pub a2: Direction,
    pub b1: Direction,
    pub b2: Direction,
}

/// Two settings for each of three times.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MerminSettings {
    pub a1: Direction,
    pub a2: Direction,
    pub b1: Direction,
    pub b2: Direction,
    pub c1: Direction,
    pub c2: Direction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InequalityKind {
    Chsh,
    Mermin,
    General,
}

impl InequalityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InequalityKind::Chsh => "chsh",
            InequalityKind::Mermin => "mermin",
            InequalityKind::General => "general",
        }
    }
}

/// What attained a reported left-hand side.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    None,
    Chsh(ChshSettings),
    Mermin { s: Vec3, settings: MerminSettings },
    General { strategy: String, signs: String },
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        match self {
            Witness::None => {}
            Witness::Chsh(c) => {
                map.serialize_entry("a1", &c.a1)?;
                map.serialize_entry("a2", &c.a2)?;
                map.serialize_entry("b1", &c.b1)?;
                map.serialize_entry("b2", &c.b2)?;
            }
            Witness::Mermin { s, settings: m } => {
                map.serialize_entry("s", s)?;
                map.serialize_entry("a1", &m.a1)?;
                map.serialize_entry("a2", &m.a2)?;
                map.serialize_entry("b1", &m.b1)?;
                map.serialize_entry("b2", &m.b2)?;
                map.serialize_entry("c1", &m.c1)?;
                map.serialize_entry("c2", &m.c2)?;
            }
            Witness::General { strategy, signs } => {
                map.serialize_entry("strategy_encoding", strategy)?;
                map.serialize_entry("sign_encoding", signs)?;
            }
        }
        map.end()
    }
}

/// Value of an inequality's left-hand side against its classical bound.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub kind: InequalityKind,
    pub n: Option<usize>,
    pub lhs: f64,
    pub bound: f64,
    pub violated: bool,
    pub witness: Witness,
}

impl InequalityReport {
    pub fn new(kind: InequalityKind, n: Option<usize>, lhs: f64, bound: f64, witness: Witness) -> Self {
        InequalityReport {
            kind,
            n,
            lhs,
            bound,
            violated: lhs > bound + VIOLATION_MARGIN,
            witness,
        }
    }
}

impl Serialize for InequalityReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("name", self.kind.as_str())?;
        if let Some(n) = self.n {
            map.serialize_entry("n", &n)?;
        }
        map.serialize_entry("lhs", &self.lhs)?;
        map.serialize_entry("bound", &self.bound)?;
        map.serialize_entry("violated", &self.violated)?;
        map.serialize_entry("witness", &self.witness)?;
        map.end()
    }
}
