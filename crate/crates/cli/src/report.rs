//! Tabular reports with a versioned CSV layout and a JSON mirror.
//!
//! CSV files start with `# arc-widom v1`, followed by `# key: value`
//! metadata lines and a header row. Numbers are written with 17 significant
//! digits so that both formats re-parse to the same bits.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA: &str = "arc-widom v1";

/// Columns holding complex literals rather than numbers.
const TEXT_COLUMNS: [&str; 1] = ["u0"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn num(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Num(n as f64)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// 17 significant digits; integral values print as integers.
pub fn format_number(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 && !(x == 0.0 && x.is_sign_negative()) {
        format!("{}", x as i64)
    } else {
        format!("{x:.16e}")
    }
}

impl Report {
    pub fn new(command: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            schema: SCHEMA.into(),
            command: command.into(),
            params: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            verdict: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<String>) {
        self.params.insert(key.into(), value.into());
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric column values, skipping text cells.
    pub fn numbers(&self, name: &str) -> Vec<f64> {
        match self.column(name) {
            Some(j) => self.rows.iter().filter_map(|r| r[j].num()).collect(),
            None => Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.as_ref().map_or(true, |v| v.pass)
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut out = Vec::new();
        writeln!(out, "# {}", self.schema)?;
        writeln!(out, "# command: {}", self.command)?;
        for (k, v) in &self.params {
            writeln!(out, "# {k}: {v}")?;
        }
        if let Some(v) = &self.verdict {
            writeln!(out, "# pass: {}", v.pass)?;
            writeln!(out, "# tolerance: {}", format_number(v.tolerance))?;
            writeln!(out, "# detail: {}", v.detail)?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Num(x) => format_number(*x),
                Cell::Text(s) => s.clone(),
            }))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("utf-8 report"))
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_csv(text: &str) -> Result<Self, CliError> {
        let mut lines = text.lines();
        let first = lines.next().unwrap_or_default();
        let schema = first
            .strip_prefix("# ")
            .filter(|s| *s == SCHEMA)
            .ok_or_else(|| CliError::Input(format!("missing '# {SCHEMA}' header")))?;
        let mut report = Report::new("", &[]);
        report.schema = schema.into();
        let mut meta = BTreeMap::new();
        let mut body = String::new();
        for line in lines {
            if let Some(m) = line.strip_prefix("# ") {
                let (k, v) = m
                    .split_once(": ")
                    .ok_or_else(|| CliError::Input(format!("bad metadata line '{line}'")))?;
                meta.insert(k.to_string(), v.to_string());
            } else {
                body.push_str(line);
                body.push('\n');
            }
        }
        report.command = meta.remove("command").unwrap_or_default();
        let pass = meta.remove("pass");
        let tolerance = meta.remove("tolerance");
        let detail = meta.remove("detail");
        if let (Some(p), Some(t), Some(d)) = (pass, tolerance, detail) {
            report.verdict = Some(Verdict {
                pass: p == "true",
                tolerance: parse_number(&t)?,
                detail: d,
            });
        }
        report.params = meta;
        let mut r = csv::Reader::from_reader(body.as_bytes());
        report.columns = r.headers()?.iter().map(String::from).collect();
        for rec in r.records() {
            let rec = rec?;
            let row = rec
                .iter()
                .zip(&report.columns)
                .map(|(field, col)| {
                    if TEXT_COLUMNS.contains(&col.as_str()) {
                        Ok(Cell::Text(field.to_string()))
                    } else {
                        parse_number(field).map(Cell::Num)
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            report.rows.push(row);
        }
        Ok(report)
    }
}

fn parse_number(s: &str) -> Result<f64, CliError> {
    s.parse().map_err(|_| CliError::Input(format!("bad number '{s}'")))
}
