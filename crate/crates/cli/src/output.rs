use std::fs::File;
use std::io::{self, Write};

use bellcopies::measures::CheckRecord;
use bellcopies::quantum::Divergence;
use serde::Serialize;

use crate::args::{Command, Format, OutputArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    /// `|value - expected| <= tolerance`; infinite values only match infinite.
    Equal,
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(flatten)]
    pub record: CheckRecord,
    pub comparison: Comparison,
    /// Closed form the expected value comes from.
    pub anchor: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, record: CheckRecord, comparison: Comparison, anchor: &str) -> Self {
        let pass = match (comparison, record.expected_bits) {
            (Comparison::Equal, _) | (_, None) => record.passes(),
            (Comparison::AtMost, Some(e)) => {
                record.value_bits.to_f64() <= e.to_f64() + record.tolerance
            }
            (Comparison::AtLeast, Some(e)) => {
                record.value_bits.to_f64() >= e.to_f64() - record.tolerance
            }
        };
        Self {
            name: name.into(),
            record,
            comparison,
            anchor: anchor.into(),
            pass,
        }
    }
}

/// Shorthand for a check record without sampling metadata.
pub fn record(target: &str, value: Divergence, expected: f64, tolerance: f64, method: &str) -> CheckRecord {
    CheckRecord {
        target: target.into(),
        value_bits: value,
        expected_bits: Some(Divergence::Finite(expected)),
        tolerance,
        seed: None,
        samples: None,
        method: method.into(),
    }
}

#[derive(Debug, Clone, Default)]
pub struct CsvTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CommandEcho {
    #[serde(flatten)]
    pub command: Command,
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub command: CommandEcho,
    pub checks: Vec<Check>,
    /// False for exploratory commands, whose checks never set the exit code.
    pub asserting: bool,
    pub pass: bool,
    pub report: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
    /// Per-row data for `--format csv`; the check table is used when absent.
    #[serde(skip)]
    pub table: Option<CsvTable>,
}

impl RunResult {
    pub fn exit_code(&self) -> i32 {
        if self.asserting && !self.pass {
            1
        } else {
            0
        }
    }

    fn check_table(&self) -> CsvTable {
        let opt = |v: Option<String>| v.unwrap_or_default();
        CsvTable {
            headers: [
                "name", "target", "value_bits", "expected_bits", "comparison", "tolerance",
                "pass", "seed", "samples", "method", "anchor",
            ]
            .map(String::from)
            .to_vec(),
            rows: self
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone(),
                        c.record.target.clone(),
                        c.record.value_bits.to_string(),
                        opt(c.record.expected_bits.map(|e| e.to_string())),
                        serde_json::to_value(c.comparison)
                            .ok()
                            .and_then(|v| v.as_str().map(String::from))
                            .unwrap_or_default(),
                        c.record.tolerance.to_string(),
                        c.pass.to_string(),
                        opt(c.record.seed.map(|s| s.to_string())),
                        opt(c.record.samples.map(|s| s.to_string())),
                        c.record.method.clone(),
                        c.anchor.clone(),
                    ]
                })
                .collect(),
        }
    }

    pub fn render(&self, format: Format) -> io::Result<Vec<u8>> {
        match format {
            Format::Json => {
                let mut buf = serde_json::to_vec_pretty(self)?;
                buf.push(b'\n');
                Ok(buf)
            }
            Format::Csv => {
                let table = self.table.clone().unwrap_or_else(|| self.check_table());
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&table.headers)?;
                for row in &table.rows {
                    w.write_record(row)?;
                }
                w.into_inner().map_err(|e| e.into_error())
            }
        }
    }

    pub fn emit(&self, output: &OutputArgs) -> io::Result<()> {
        let bytes = self.render(output.format)?;
        match &output.out {
            Some(path) => File::create(path)?.write_all(&bytes),
            None => io::stdout().lock().write_all(&bytes),
        }
    }
}
