//! The `grpf-results/1` JSON document.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::{self, Deserializer};
use serde::ser::{Error as _, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use grpf::phase::SampleFault;
use grpf::refine::{NodeHitReport, OpenRegionReport, UnresolvedRegion};
use grpf::{Found, Point};

use crate::error::CliError;

pub const SCHEMA: &str = "grpf-results/1";

/// A real written with 17 significant digits; non-finite values become the
/// strings `"nan"`, `"inf"` and `"-inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let x = self.0;
        if x.is_nan() {
            s.serialize_str("nan")
        } else if x.is_infinite() {
            s.serialize_str(if x > 0.0 { "inf" } else { "-inf" })
        } else {
            RawValue::from_string(format!("{x:.16e}")).map_err(S::Error::custom)?.serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Number(x) => Ok(Num(x)),
            Repr::Text(t) => match t.as_str() {
                "nan" => Ok(Num(f64::NAN)),
                "inf" => Ok(Num(f64::INFINITY)),
                "-inf" => Ok(Num(f64::NEG_INFINITY)),
                _ => Err(de::Error::custom(format!("not a number: {t}"))),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cpx {
    pub re: Num,
    pub im: Num,
}

impl Cpx {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re: Num(re), im: Num(im) }
    }
}

impl From<Point> for Cpx {
    fn from(p: Point) -> Self {
        Self::new(p.re, p.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionEcho {
    pub name: String,
    pub spec: String,
    pub parameters: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<Num>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainEcho {
    pub kind: String,
    pub spec: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub function: FunctionEcho,
    pub domain: DomainEcho,
    pub dr: Num,
    pub tol: Num,
    pub max_iters: usize,
    pub max_nodes: usize,
    pub verify_each_iter: bool,
    pub global_winding_check: bool,
    pub moments: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub merge_within: Option<Num>,
    pub on_open_region: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultEntry {
    /// In the search variable.
    pub location: Cpx,
    /// `scale · location` for scaled built-ins.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub physical_location: Option<Cpx>,
    pub q: i32,
    pub kind: String,
    pub accuracy: Num,
    pub status: String,
    pub iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moment1: Option<Cpx>,
}

impl ResultEntry {
    pub fn new(r: &Found, scale: Option<f64>) -> Self {
        Self {
            location: r.location.into(),
            physical_location: scale.map(|s| Cpx::new(s * r.location.re, s * r.location.im)),
            q: r.q,
            kind: if r.q > 0 { "root" } else { "pole" }.into(),
            accuracy: Num(r.accuracy),
            status: r.status.as_str().into(),
            iterations: r.iterations_used,
            moment1: r.moment1.map(|m| Cpx::new(m.re, m.im)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionEntry {
    pub location: Cpx,
    pub diameter: Num,
    pub message: String,
}

impl From<&OpenRegionReport<f64>> for RegionEntry {
    fn from(o: &OpenRegionReport<f64>) -> Self {
        Self { location: o.location.into(), diameter: Num(o.diameter), message: o.message.clone() }
    }
}

impl From<&UnresolvedRegion<f64>> for RegionEntry {
    fn from(u: &UnresolvedRegion<f64>) -> Self {
        Self { location: u.location.into(), diameter: Num(u.diameter), message: u.message.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeHitEntry {
    pub requested: Cpx,
    pub placed: Option<Cpx>,
    pub fault: String,
}

impl From<&NodeHitReport<f64>> for NodeHitEntry {
    fn from(h: &NodeHitReport<f64>) -> Self {
        Self {
            requested: h.requested.into(),
            placed: h.placed.map(Cpx::from),
            fault: match h.fault {
                SampleFault::ExactZero => "exact_zero",
                SampleFault::NonFinite => "non_finite",
            }
            .into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshStats {
    pub initial_nodes: usize,
    pub nodes: usize,
    /// Calls of f; equals the rows of the nodes CSV.
    pub evaluations: usize,
    pub rejected: usize,
    pub iterations: usize,
    pub node_hits: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_seconds: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultsDocument {
    pub schema: String,
    pub config: ConfigEcho,
    pub results: Vec<ResultEntry>,
    pub open_regions: Vec<RegionEntry>,
    pub unresolved: Vec<RegionEntry>,
    pub node_hits: Vec<NodeHitEntry>,
    pub mesh: MeshStats,
    /// Roots minus poles from the domain boundary, if it could be counted.
    pub global_winding: Option<i64>,
    /// Sum of `q` over `results`.
    pub region_sum: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
    pub warnings: Vec<String>,
}

impl ResultsDocument {
    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

pub fn emit_results_json(doc: &ResultsDocument, path: &Path) -> Result<(), CliError> {
    std::fs::write(path, doc.to_json()?).map_err(|e| CliError::io(path, e))
}

pub fn read_results_json(path: &Path) -> Result<ResultsDocument, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_keep_seventeen_digits() {
        let s = serde_json::to_string(&Num(0.1)).unwrap();
        assert_eq!(s, "1.0000000000000001e-1");
        let back: Num = serde_json::from_str(&s).unwrap();
        assert_eq!(back.0, 0.1);
        assert_eq!(serde_json::to_string(&Num(f64::NAN)).unwrap(), "\"nan\"");
        assert_eq!(serde_json::to_string(&Num(f64::NEG_INFINITY)).unwrap(), "\"-inf\"");
        let inf: Num = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(inf.0, f64::INFINITY);
        assert!(serde_json::from_str::<Num>("\"x\"").is_err());
    }
}
