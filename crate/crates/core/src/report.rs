//! JSON records shared by the command line and the FFI layer, and DOT
//! export of level Schreier graphs.

use std::fmt::{Display, Write as _};

use num_bigint::BigUint;
use num_rational::{BigRational, Ratio};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::schreier::SchreierLevelGraph;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Serializes a ratio as `{"num": p, "den": q}`.
pub fn ser_ratio<S: Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
    let mut m = s.serialize_map(Some(2))?;
    m.serialize_entry("num", r.numer())?;
    m.serialize_entry("den", r.denom())?;
    m.end()
}

/// Exact rationals with decimal-string numerator and denominator.
pub fn ser_big_ratio<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    let mut m = s.serialize_map(Some(2))?;
    m.serialize_entry("num", &r.numer().to_string())?;
    m.serialize_entry("den", &r.denom().to_string())?;
    m.end()
}

/// A JSON number when it fits in 64 bits, else a decimal string.
pub fn big_uint_json(n: &BigUint) -> serde_json::Value {
    match u64::try_from(n) {
        Ok(v) => v.into(),
        Err(_) => n.to_string().into(),
    }
}

pub fn big_ratio_json(r: &BigRational) -> serde_json::Value {
    serde_json::json!({"num": r.numer().to_string(), "den": r.denom().to_string()})
}

/// A map serialized in insertion order.
#[derive(Debug, Clone, Default)]
pub struct OrderedMap<V>(pub Vec<(String, V)>);

impl<V> OrderedMap<V> {
    pub fn new() -> Self {
        OrderedMap(Vec::new())
    }

    pub fn insert(&mut self, key: impl Into<String>, value: V) {
        self.0.push((key.into(), value));
    }
}

impl<V: Serialize> Serialize for OrderedMap<V> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

/// Envelope around a command's payload.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport<T: Serialize> {
    pub version: &'static str,
    pub command: String,
    /// SHA-256 of the input machine text.
    pub input_digest: String,
    pub budget_exhausted: bool,
    pub payload: T,
}

impl<T: Serialize> AnalysisReport<T> {
    pub fn new(command: impl Into<String>, input: &str, budget_exhausted: bool, payload: T) -> Self {
        AnalysisReport {
            version: VERSION,
            command: command.into(),
            input_digest: digest(input),
            budget_exhausted,
            payload,
        }
    }
}

pub fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().fold(String::new(), |mut out, b| {
        let _ = write!(out, "{b:02x}");
        out
    })
}

fn quoted(s: impl Display) -> String {
    let s = s.to_string();
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT text for a level graph. Each generator contributes one edge per
/// vertex (inverse generators are left out); edges with a nontrivial
/// section are bold.
pub fn export_dot(graph: &SchreierLevelGraph) -> String {
    let mut out = String::from("digraph schreier {\n");
    for v in &graph.vertices {
        let _ = writeln!(out, "  {} [label={}];", quoted(v), quoted(v));
    }
    for e in &graph.edges {
        let name = &graph.generators[e.generator];
        if name.ends_with("^-1") {
            continue;
        }
        let style = if e.trivial_section { "" } else { ", style=bold" };
        let _ = writeln!(
            out,
            "  {} -> {} [label={}{}];",
            quoted(&graph.vertices[e.source]),
            quoted(&graph.vertices[e.target]),
            quoted(name),
            style
        );
    }
    out.push_str("}\n");
    out
}
