//! Seeded, file-driven experiments behind the command-line interface.
//!
//! [`run`] is pure: it never touches the filesystem and returns the bytes to
//! write. Reports are JSON objects with sorted keys, so identical configs give
//! byte-identical output.

mod algebra;
mod causal;
mod physics;

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Every command accepted by [`run`], as `"<noun> <verb>"`.
pub const COMMANDS: [&str; 17] = [
    "octonion table",
    "octonion check",
    "clifford dim",
    "clifford identities",
    "ideals states",
    "ideals su3",
    "ideals casimir",
    "cfs action",
    "cfs classify",
    "cfs minimize",
    "cfs el-residual",
    "vacuum build",
    "vacuum residual",
    "vacuum localize",
    "vacuum act",
    "majorana check",
    "potentials scan",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Config(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: String,
    #[serde(default = "empty_object")]
    pub params: Value,
    #[serde(default)]
    pub seed: u64,
    /// Where the primary output goes; stdout when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Overrides the command's default check tolerance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

fn empty_object() -> Value {
    Value::Object(Default::default())
}

impl ExperimentConfig {
    pub fn new(command: &str, params: Value) -> Self {
        ExperimentConfig {
            command: command.to_string(),
            params,
            seed: 0,
            output: None,
            format: Format::Json,
            tol: None,
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        serde_json::from_value(v.clone())
            .map_err(|e| Error::Config(format!("invalid experiment config: {e}")))
    }

    fn validate(&self) -> Result<()> {
        if !COMMANDS.contains(&self.command.as_str()) {
            return Err(Error::Config(format!("unknown command {:?}", self.command)));
        }
        if !(self.params.is_object() || self.params.is_null()) {
            return Err(Error::Config("params must be a JSON object".into()));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::Config(format!("tol must be positive, got {t}")));
            }
        }
        Ok(())
    }

    /// The config as embedded in reports; the output path is left out so that
    /// runs differing only in destination produce the same bytes.
    fn embedded(&self) -> Value {
        let mut c = self.clone();
        c.output = None;
        serde_json::to_value(c).unwrap_or(Value::Null)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Success,
    AssertionFailure,
    ValidationError,
    NumericalFailure,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::AssertionFailure => 1,
            Status::ValidationError => 2,
            Status::NumericalFailure => 3,
        }
    }

    pub fn from_error(e: &Error) -> Status {
        match e {
            Error::Numerical(_)
            | Error::Consistency(_)
            | Error::LineSearchFailure(_)
            | Error::MaxIterations(_)
            | Error::NoFixedPoint { .. }
            | Error::NotSpinConnectable(_) => Status::NumericalFailure,
            _ => Status::ValidationError,
        }
    }
}

/// What a run produced. `primary` goes to the output path or stdout;
/// `summary` (only for commands whose primary output is binary) goes to stdout.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub primary: Vec<u8>,
    pub summary: Option<Vec<u8>>,
    pub error: Option<String>,
}

/// Rows for the CSV projection.
#[derive(Debug, Clone, Default)]
pub(crate) struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

/// Result of one command before formatting.
#[derive(Debug, Default)]
pub(crate) struct Computed {
    pub result: Value,
    pub table: Option<Table>,
    /// `Some` when the command verifies invariants.
    pub passed: Option<bool>,
    pub tolerances: BTreeMap<&'static str, f64>,
    pub binary: Option<Vec<u8>>,
}

impl Computed {
    pub fn new(result: Value) -> Self {
        Computed {
            result,
            ..Default::default()
        }
    }

    pub fn table(mut self, t: Table) -> Self {
        self.table = Some(t);
        self
    }

    pub fn tol(mut self, name: &'static str, v: f64) -> Self {
        self.tolerances.insert(name, v);
        self
    }

    pub fn passed(mut self, p: bool) -> Self {
        self.passed = Some(p);
        self
    }
}

/// Deserializes command params; `null` counts as an empty object.
pub(crate) fn params<T: DeserializeOwned>(v: &Value) -> Result<T> {
    let v = if v.is_null() {
        empty_object()
    } else {
        v.clone()
    };
    serde_json::from_value(v).map_err(|e| Error::Config(format!("invalid params: {e}")))
}

pub(crate) fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn dispatch(cfg: &ExperimentConfig) -> Result<Computed> {
    let p = &cfg.params;
    match cfg.command.as_str() {
        "octonion table" => algebra::octonion_table(p),
        "octonion check" => algebra::octonion_check(p, cfg.seed, cfg.tol),
        "clifford dim" => algebra::clifford_dim(p),
        "clifford identities" => algebra::clifford_identities(p, cfg.seed, cfg.tol),
        "ideals states" => algebra::ideals_states(p),
        "ideals su3" => algebra::ideals_su3(p, cfg.tol),
        "ideals casimir" => algebra::ideals_casimir(p, cfg.tol),
        "cfs action" => causal::action(p),
        "cfs classify" => causal::classify(p, cfg.seed, cfg.tol),
        "cfs minimize" => causal::minimize(p, cfg.seed),
        "cfs el-residual" => causal::el_residual(p, cfg.seed),
        "vacuum build" => physics::vacuum_build(p),
        "vacuum residual" => physics::vacuum_residual(p, cfg.tol),
        "vacuum localize" => physics::vacuum_localize(p),
        "vacuum act" => physics::vacuum_act(p),
        "majorana check" => physics::majorana_check(p, cfg.seed, cfg.tol),
        "potentials scan" => physics::potentials_scan(p),
        other => Err(Error::Config(format!("unknown command {other:?}"))),
    }
}

fn report(cfg: &ExperimentConfig, c: &Computed) -> Value {
    let mut obj = json!({
        "command": cfg.command,
        "config": cfg.embedded(),
        "version": VERSION,
        "tolerances": c.tolerances,
        "result": c.result,
    });
    if let Some(p) = c.passed {
        obj["passed"] = json!(p);
    }
    obj
}

fn pretty(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_default();
    s.push('\n');
    s.into_bytes()
}

fn render_csv(cfg: &ExperimentConfig, c: &Computed) -> Result<Vec<u8>> {
    let Some(t) = &c.table else {
        return Err(Error::Config(format!(
            "{} has no CSV projection",
            cfg.command
        )));
    };
    let mut out = String::new();
    out.push_str(&format!("# config: {}\n", cfg.embedded()));
    out.push_str(&format!("# version: {VERSION}\n"));
    out.push_str(&format!("# tolerances: {}\n", json!(c.tolerances)));
    if let Some(p) = c.passed {
        out.push_str(&format!("# passed: {p}\n"));
    }
    out.push_str(&t.render());
    Ok(out.into_bytes())
}

fn failure(e: Error) -> Outcome {
    Outcome {
        status: Status::from_error(&e),
        primary: Vec::new(),
        summary: None,
        error: Some(e.to_string()),
    }
}

pub fn run(cfg: &ExperimentConfig) -> Outcome {
    if let Err(e) = cfg.validate() {
        return failure(e);
    }
    let computed = match dispatch(cfg) {
        Ok(c) => c,
        Err(e) => return failure(e),
    };
    let status = match computed.passed {
        Some(false) => Status::AssertionFailure,
        _ => Status::Success,
    };
    let text = match cfg.format {
        Format::Json => pretty(&report(cfg, &computed)),
        Format::Csv => match render_csv(cfg, &computed) {
            Ok(t) => t,
            Err(e) => return failure(e),
        },
    };
    match computed.binary {
        Some(bin) => Outcome {
            status,
            primary: bin,
            summary: Some(text),
            error: None,
        },
        None => Outcome {
            status,
            primary: text,
            summary: None,
            error: None,
        },
    }
}

/// Shortest round-trip form, switching to exponent notation for tiny and huge values.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}
