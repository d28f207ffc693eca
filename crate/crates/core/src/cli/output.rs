use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// First line of every CSV file; bump the version when columns change.
pub const CSV_HEADER: &str = "# densecode-lab v1";

pub const CSV_COLUMNS: [&str; 11] = [
    "scenario",
    "param",
    "value",
    "capacity_bits",
    "closed_form_bits",
    "optimizer_bits",
    "receiver_entropy_bits",
    "min_output_entropy_bits",
    "holevo_bits",
    "nonunitary_bits",
    "agreement",
];

/// One evaluated scenario point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub scenario: String,
    /// Swept parameter, empty for a single run.
    pub param: String,
    pub value: Option<f64>,
    /// Closed form when one exists, otherwise the optimizer value.
    pub capacity_bits: f64,
    pub closed_form_bits: Option<f64>,
    pub optimizer_bits: f64,
    pub receiver_entropy_bits: f64,
    pub min_output_entropy_bits: f64,
    pub holevo_bits: f64,
    /// Capacity over CPTP pre-processings, when requested.
    pub nonunitary_bits: Option<f64>,
    /// `|closed − optimized| ≤ 1e-6`, or true without a closed form.
    pub agreement: bool,
}

// 17 significant digits: enough to reproduce every f64 exactly
fn number(x: f64) -> String {
    format!("{x:.16e}")
}

fn optional(x: Option<f64>) -> String {
    x.map(number).unwrap_or_default()
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Config(format!("csv: {other:?}")),
    }
}

pub fn write_csv(rows: &[ResultRow], mut out: impl Write) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS).map_err(csv_error)?;
    for r in rows {
        w.write_record([
            r.scenario.clone(),
            r.param.clone(),
            optional(r.value),
            number(r.capacity_bits),
            optional(r.closed_form_bits),
            number(r.optimizer_bits),
            number(r.receiver_entropy_bits),
            number(r.min_output_entropy_bits),
            number(r.holevo_bits),
            optional(r.nonunitary_bits),
            r.agreement.to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses CSV written by [`write_csv`].
pub fn read_csv(input: impl Read) -> Result<Vec<ResultRow>> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let headers = reader.headers().map_err(csv_error)?.clone();
    if headers.iter().ne(CSV_COLUMNS) {
        return Err(Error::Config(format!("csv: unexpected columns {headers:?}")));
    }
    reader.deserialize().map(|r| r.map_err(csv_error)).collect()
}

pub fn write_json(rows: &[ResultRow], mut out: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows).map_err(|e| Error::Config(format!("json: {e}")))?;
    writeln!(out)?;
    Ok(())
}
