//! Persisted run records: one JSON object per line in `reports.jsonl`.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{HarnessError, Result};
use crate::functional::Functional;
use crate::space::{Element, ElementKind};

pub const SCHEMA_VERSION: u32 = 1;
pub const REPORT_FILE: &str = "reports.jsonl";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HoldsAtScale,
    Counterexample,
    ReportOnly,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::HoldsAtScale => "holds-at-scale",
            Self::Counterexample => "counterexample",
            Self::ReportOnly => "report-only",
        }
    }

    /// Process exit code for a finished run.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Counterexample => 2,
            _ => 0,
        }
    }
}

/// An element together with the functional value recorded for it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: ElementKind,
    pub object: String,
    pub functional: String,
    pub value: f64,
}

impl Witness {
    pub fn new(element: &Element, functional: &Functional, value: f64) -> Self {
        Self {
            kind: element.kind(),
            object: element.to_object(),
            functional: functional.to_string(),
            value,
        }
    }

    /// Recomputes the functional and demands the identical value.
    pub fn reverify(&self) -> Result<()> {
        let element = Element::parse(self.kind, &self.object)?;
        let functional: Functional = self.functional.parse()?;
        match functional.eval(&element)? {
            Some(v) if v.to_bits() == self.value.to_bits() => Ok(()),
            got => Err(HarnessError::Verification(format!(
                "{} at {} is {got:?}, report says {}",
                self.functional, self.object, self.value
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub conjecture_id: String,
    pub parameters: BTreeMap<String, Value>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub metrics: BTreeMap<String, Value>,
    pub seed: u64,
    pub wall_time_ms: u64,
    pub code_version: String,
    /// A node budget stopped a search before it covered its space.
    pub budgeted: bool,
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// JSON with the wall time zeroed: equal for reproducible runs.
    pub fn canonical_json(&self) -> Result<String> {
        Self {
            wall_time_ms: 0,
            ..self.clone()
        }
        .to_json()
    }

    /// Checks the schema version and the witness. Counterexamples must
    /// carry a witness.
    pub fn reverify(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(HarnessError::Verification(format!(
                "schema version {} (this build reads {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        match (&self.witness, self.verdict) {
            (Some(w), _) => w.reverify(),
            (None, Verdict::Counterexample) => Err(HarnessError::Verification(format!(
                "{}: counterexample without a witness",
                self.conjecture_id
            ))),
            (None, _) => Ok(()),
        }
    }

    /// Appends one line to `<dir>/reports.jsonl`, creating the directory.
    pub fn append(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(REPORT_FILE);
        let mut file = OpenOptions::new().create(true).append(true).open(&path)?;
        writeln!(file, "{}", self.to_json()?)?;
        Ok(path)
    }
}

/// Every report in a JSONL file; blank lines are skipped.
pub fn load(path: &Path) -> Result<Vec<Report>> {
    fs::read_to_string(path)?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(serde_json::from_str(l)?))
        .collect()
}

const COLUMNS: [&str; 8] = [
    "conjecture_id",
    "verdict",
    "seed",
    "budgeted",
    "witness",
    "functional",
    "value",
    "metrics",
];

fn row(r: &Report) -> Result<[String; 8]> {
    let (object, functional, value) = match &r.witness {
        Some(w) => (w.object.clone(), w.functional.clone(), w.value.to_string()),
        None => Default::default(),
    };
    Ok([
        r.conjecture_id.clone(),
        r.verdict.as_str().to_string(),
        r.seed.to_string(),
        r.budgeted.to_string(),
        object,
        functional,
        value,
        serde_json::to_string(&r.metrics)?,
    ])
}

pub fn render_csv(reports: &[Report]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COLUMNS)?;
    for r in reports {
        w.write_record(row(r)?)?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

pub fn render_markdown(reports: &[Report]) -> Result<String> {
    let mut out = format!("| {} |\n|{}\n", COLUMNS.join(" | "), "---|".repeat(COLUMNS.len()));
    for r in reports {
        let cells: Vec<String> = row(r)?
            .into_iter()
            .map(|c| c.replace('|', "\\|"))
            .collect();
        out.push_str(&format!("| {} |\n", cells.join(" | ")));
    }
    Ok(out)
}
