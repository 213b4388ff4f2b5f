use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::padic::PAdicContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

/// Worst-case cylinder found by a check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub a: u64,
    pub n: u32,
    pub residual_norm: f64,
}

/// Outcome of a verification. Maps are ordered so the rendering is stable.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub p: u64,
    pub precision: u32,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    pub constants: BTreeMap<String, f64>,
    pub witness: Option<Witness>,
    pub levels: Vec<u32>,
}

impl CheckReport {
    pub(crate) fn new(name: &str, ctx: &PAdicContext) -> Self {
        Self {
            name: name.to_string(),
            p: ctx.p(),
            precision: ctx.precision(),
            params: BTreeMap::new(),
            status: Status::Pass,
            constants: BTreeMap::new(),
            witness: None,
            levels: Vec::new(),
        }
    }

    pub(crate) fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn constant(&self, key: &str) -> Option<f64> {
        self.constants.get(key).copied()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check: {}", self.name)?;
        writeln!(f, "p: {}", self.p)?;
        writeln!(f, "precision: {}", self.precision)?;
        for (k, v) in &self.params {
            writeln!(f, "param.{k}: {v}")?;
        }
        writeln!(f, "status: {}", self.status)?;
        for (k, v) in &self.constants {
            writeln!(f, "constant.{k}: {v}")?;
        }
        if let Some(w) = &self.witness {
            writeln!(f, "witness: {},{} residual {}", w.a, w.n, w.residual_norm)?;
        }
        let levels: Vec<String> = self.levels.iter().map(u32::to_string).collect();
        write!(f, "levels: {}", levels.join(","))
    }
}
