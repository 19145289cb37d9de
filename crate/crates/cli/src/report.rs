//! Report rows and their JSON-lines and CSV encodings.

use std::io::Write;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

/// Versioned schema tag written as the first line of every report.
pub const SCHEMA: &str = "pickone-lab/report/v1";

pub const COLUMNS: [&str; 10] =
    ["experiment", "params", "metric", "measured", "theoretical", "abs_err", "relation", "tolerance", "pass", "detail"];

/// How `measured` is compared with `theoretical`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `measured ≤ theoretical + tolerance`.
    AtMost,
    /// `measured ≥ theoretical − tolerance`.
    AtLeast,
    /// `|measured − theoretical| ≤ tolerance`.
    Within,
    /// Informational; always passes.
    Report,
    /// The experiment could not run; never passes.
    Error,
}

impl Relation {
    pub fn passes(self, measured: f64, theoretical: f64, tolerance: f64) -> bool {
        match self {
            Relation::AtMost => measured <= theoretical + tolerance,
            Relation::AtLeast => measured >= theoretical - tolerance,
            Relation::Within => (measured - theoretical).abs() <= tolerance,
            Relation::Report => true,
            Relation::Error => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub experiment: String,
    /// Compact JSON object echoing the parameters.
    pub params: String,
    pub metric: String,
    #[serde(deserialize_with = "null_as_nan")]
    pub measured: f64,
    #[serde(deserialize_with = "null_as_nan")]
    pub theoretical: f64,
    #[serde(deserialize_with = "null_as_nan")]
    pub abs_err: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub pass: bool,
    pub detail: String,
}

/// JSON has no NaN; error rows serialize it as `null`.
fn null_as_nan<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

impl ReportRow {
    pub fn check(
        experiment: &str,
        params: &serde_json::Value,
        metric: &str,
        measured: f64,
        relation: Relation,
        theoretical: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            experiment: experiment.to_string(),
            params: params.to_string(),
            metric: metric.to_string(),
            measured,
            theoretical,
            abs_err: (measured - theoretical).abs(),
            relation,
            tolerance,
            pass: relation.passes(measured, theoretical, tolerance),
            detail: String::new(),
        }
    }

    pub fn report(experiment: &str, params: &serde_json::Value, metric: &str, measured: f64, theoretical: f64) -> Self {
        Self::check(experiment, params, metric, measured, Relation::Report, theoretical, 0.0)
    }

    pub fn error(experiment: &str, params: &serde_json::Value, metric: &str, message: impl ToString) -> Self {
        let mut row = Self::check(experiment, params, metric, f64::NAN, Relation::Error, f64::NAN, 0.0);
        row.abs_err = f64::NAN;
        row.detail = message.to_string();
        row
    }

    pub fn with_detail(mut self, detail: impl ToString) -> Self {
        self.detail = detail.to_string();
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    /// JSON lines: a header object, then one object per row.
    #[default]
    Json,
    /// CSV with a `#`-prefixed schema line before the column header.
    Csv,
}

/// Header shared by both formats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportHeader {
    pub schema: String,
    pub command: String,
    pub seed: u64,
    pub columns: Vec<String>,
}

impl ReportHeader {
    pub fn new(command: &str, seed: u64) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            command: command.to_string(),
            seed,
            columns: COLUMNS.iter().map(|c| c.to_string()).collect(),
        }
    }
}

pub fn write_report(
    out: &mut dyn Write,
    format: Format,
    header: &ReportHeader,
    rows: &[ReportRow],
) -> anyhow::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer(&mut *out, header)?;
            writeln!(out)?;
            for row in rows {
                serde_json::to_writer(&mut *out, row)?;
                writeln!(out)?;
            }
        }
        Format::Csv => {
            writeln!(out, "# schema={} command={} seed={}", header.schema, header.command, header.seed)?;
            let mut w = csv::Writer::from_writer(&mut *out);
            for row in rows {
                w.serialize(row)?;
            }
            if rows.is_empty() {
                w.write_record(COLUMNS)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Parses a report written by [`write_report`].
pub fn read_report(text: &str, format: Format) -> anyhow::Result<(ReportHeader, Vec<ReportRow>)> {
    match format {
        Format::Json => {
            let mut lines = text.lines();
            let header: ReportHeader =
                serde_json::from_str(lines.next().ok_or_else(|| anyhow::anyhow!("empty report"))?)?;
            let rows = lines.map(serde_json::from_str).collect::<Result<Vec<ReportRow>, _>>()?;
            Ok((header, rows))
        }
        Format::Csv => {
            let (first, rest) = text.split_once('\n').ok_or_else(|| anyhow::anyhow!("empty report"))?;
            let fields: std::collections::BTreeMap<&str, &str> =
                first.trim_start_matches("# ").split(' ').filter_map(|kv| kv.split_once('=')).collect();
            let header = ReportHeader {
                schema: fields.get("schema").unwrap_or(&"").to_string(),
                command: fields.get("command").unwrap_or(&"").to_string(),
                seed: fields.get("seed").unwrap_or(&"0").parse()?,
                columns: COLUMNS.iter().map(|c| c.to_string()).collect(),
            };
            let mut r = csv::Reader::from_reader(rest.as_bytes());
            let rows = r.deserialize().collect::<Result<Vec<ReportRow>, _>>()?;
            Ok((header, rows))
        }
    }
}

pub fn all_pass(rows: &[ReportRow]) -> bool {
    rows.iter().all(|r| r.pass)
}
