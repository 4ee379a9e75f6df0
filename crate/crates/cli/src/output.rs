//! JSON and CSV encoding with every number written at 17 significant
//! digits, so both formats carry bit-identical values.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;
use std::io::Write;

/// A float serialized as `{:.16e}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Num {
    pub fn text(&self) -> String {
        if self.0.is_finite() {
            format!("{:.16e}", self.0)
        } else {
            // JSON has no literal for these
            "null".to_string()
        }
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(self.text()).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

pub fn nums<const N: usize>(xs: [f64; N]) -> [Num; N] {
    xs.map(Num)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A table that can be written as CSV: a header and rows of cells.
pub trait Tabular {
    fn header(&self) -> Vec<String>;
    fn rows(&self) -> Vec<Vec<String>>;
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_csv(out: &mut dyn Write, table: &dyn Tabular) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(table.header())?;
    for row in table.rows() {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit<T: Serialize + Tabular>(out: &mut dyn Write, format: Format, value: &T) -> anyhow::Result<()> {
    match format {
        Format::Json => write_json(out, value),
        Format::Csv => write_csv(out, value),
    }
}

pub fn indexed(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (0..n).map(move |i| format!("{prefix}{i}"))
}
