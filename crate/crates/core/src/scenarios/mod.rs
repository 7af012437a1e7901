//! End-to-end reproductions of the worked examples, each producing a
//! self-describing JSON report whose checks carry their own tolerances.

mod ex81;
mod ex91;
mod ex94;
mod ex97;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub use ex81::run_ex81;
pub use ex91::run_ex91;
pub use ex94::run_ex94;
pub use ex97::{run_ex97, run_ex98};

pub const SCHEMA: &str = "hyperstretch/1";

pub const K_MAX_CAP: u32 = 6;
pub const LENGTH_CAP: usize = 14;
pub const N_CAP: u32 = 200;
pub const M_CAP: u32 = 4;
pub const GRID_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioId {
    Ex81,
    Ex91,
    Ex94,
    Ex97,
    Ex98,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 5] =
        [ScenarioId::Ex81, ScenarioId::Ex91, ScenarioId::Ex94, ScenarioId::Ex97, ScenarioId::Ex98];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioId::Ex81 => "ex81",
            ScenarioId::Ex91 => "ex91",
            ScenarioId::Ex94 => "ex94",
            ScenarioId::Ex97 => "ex97",
            ScenarioId::Ex98 => "ex98",
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown scenario {s:?}; expected one of ex81, ex91, ex94, ex97, ex98")))
    }
}

/// Scenario parameters. Unset fields take the scenario's defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub id: ScenarioId,
    pub k_max: Option<u32>,
    pub n: Option<u32>,
    pub m: Option<u32>,
    pub length: Option<usize>,
    pub grid: Option<usize>,
    pub t: Option<f64>,
    pub big_t: Option<f64>,
    /// Recorded in the report; every scenario is deterministic.
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn new(id: ScenarioId) -> Self {
        ScenarioConfig { id, k_max: None, n: None, m: None, length: None, grid: None, t: None, big_t: None, seed: 0 }
    }
}

pub fn run(config: &ScenarioConfig) -> Result<ScenarioReport> {
    let mut report = match config.id {
        ScenarioId::Ex81 => run_ex81(config.t.unwrap_or(2.0), config.big_t.unwrap_or(1.0))?,
        ScenarioId::Ex91 => run_ex91(config.n.unwrap_or(40), config.m.unwrap_or(2), config.length.unwrap_or(4))?,
        ScenarioId::Ex94 => run_ex94(config.length.unwrap_or(10), config.grid.unwrap_or(200))?,
        ScenarioId::Ex97 => run_ex97(config.k_max.unwrap_or(6))?,
        ScenarioId::Ex98 => run_ex98(config.k_max.unwrap_or(4))?,
    };
    report.seed = config.seed;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// Observed equals expected exactly.
    Exact,
    /// `|observed − expected| ≤ tolerance`.
    Close,
    /// `observed ≤ expected + tolerance`.
    AtMost,
    /// `observed ≥ expected − tolerance`.
    AtLeast,
    /// `observed < expected`.
    Below,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub observed: Value,
    pub expected: Value,
    pub relation: Relation,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn exact<T: Serialize + PartialEq>(name: impl Into<String>, observed: T, expected: T) -> Self {
        let passed = observed == expected;
        Check {
            name: name.into(),
            observed: to_value(&observed),
            expected: to_value(&expected),
            relation: Relation::Exact,
            tolerance: 0.0,
            passed,
        }
    }

    pub fn close(name: impl Into<String>, observed: f64, expected: f64, tolerance: f64) -> Self {
        Self::numeric(name, observed, expected, tolerance, Relation::Close, (observed - expected).abs() <= tolerance)
    }

    pub fn at_most(name: impl Into<String>, observed: f64, bound: f64, tolerance: f64) -> Self {
        Self::numeric(name, observed, bound, tolerance, Relation::AtMost, observed <= bound + tolerance)
    }

    pub fn at_least(name: impl Into<String>, observed: f64, bound: f64, tolerance: f64) -> Self {
        Self::numeric(name, observed, bound, tolerance, Relation::AtLeast, observed >= bound - tolerance)
    }

    pub fn below(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self::numeric(name, observed, bound, 0.0, Relation::Below, observed < bound)
    }

    fn numeric(name: impl Into<String>, observed: f64, expected: f64, tolerance: f64, relation: Relation, passed: bool) -> Self {
        Check {
            name: name.into(),
            observed: to_value(&observed),
            expected: to_value(&expected),
            relation,
            tolerance,
            passed: passed && observed.is_finite(),
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub schema: &'static str,
    pub scenario: ScenarioId,
    pub seed: u64,
    pub parameters: Value,
    pub checks: Vec<Check>,
    pub data: Value,
    pub passed: bool,
}

impl ScenarioReport {
    fn new(scenario: ScenarioId, parameters: Value, checks: Vec<Check>, data: Value) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        ScenarioReport { schema: SCHEMA, scenario, seed: 0, parameters, checks, data, passed }
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario reports serialize")
    }
}

fn cap<T: PartialOrd + fmt::Display>(name: &str, value: T, lo: T, hi: T) -> Result<()> {
    if value < lo || value > hi {
        return Err(Error::InvalidArgument(format!("{name} = {value} outside [{lo}, {hi}]")));
    }
    Ok(())
}

/// Largest deviation of a matrix from ±identity.
fn identity_residual(g: &crate::moebius::Isometry) -> f64 {
    let [a, b, c, d] = g.entries();
    let one = num_complex::Complex64::new(1.0, 0.0);
    let dev = |s: f64| [(a - one * s).norm(), b.norm(), c.norm(), (d - one * s).norm()].into_iter().fold(0.0, f64::max);
    let flip = if g.is_orientation_reversing() { f64::INFINITY } else { 0.0 };
    dev(1.0).min(dev(-1.0)) + flip
}
