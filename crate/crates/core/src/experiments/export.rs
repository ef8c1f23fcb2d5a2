//! CSV and JSON output.
//!
//! CSV: UTF-8, header row, LF endings, floats in shortest round-trip form.
//! JSON: `{"meta": {"seed", "n", "version"}, "results": ...}`.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Parse { line: 0, message: format!("unknown format '{other}'") }),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Meta {
    pub seed: Option<u64>,
    pub n: u64,
    pub version: &'static str,
}

impl Meta {
    pub fn new(seed: Option<u64>, n: u64) -> Self {
        Self { seed, n, version: env!("CARGO_PKG_VERSION") }
    }
}

/// Something with a tabular CSV form and a JSON form.
pub trait Exportable: Serialize {
    fn csv_header(&self) -> Vec<String>;
    fn csv_records(&self) -> Vec<Vec<String>>;
}

/// Shortest decimal that parses back to the same f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    meta: &'a Meta,
    results: &'a T,
}

pub fn write_results<T: Exportable, W: Write>(item: &T, meta: &Meta, format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
            w.write_record(item.csv_header())?;
            for r in item.csv_records() {
                w.write_record(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &Envelope { meta, results: item })?;
            out.write_all(b"\n")?;
            out.flush()?;
        }
    }
    Ok(())
}

pub fn export_results<T: Exportable>(item: &T, meta: &Meta, format: Format, path: &Path) -> Result<()> {
    let file = File::create(path)?;
    write_results(item, meta, format, BufWriter::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Two(Vec<(f64, Option<f64>)>);

    impl Exportable for Two {
        fn csv_header(&self) -> Vec<String> {
            vec!["x".into(), "y".into()]
        }
        fn csv_records(&self) -> Vec<Vec<String>> {
            self.0.iter().map(|(x, y)| vec![fmt_float(*x), fmt_opt(*y)]).collect()
        }
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_results(&Two(vec![(0.1, Some(1.0 / 3.0)), (2.0, None)]), &Meta::new(Some(1), 2), Format::Csv, &mut buf)
            .unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,y\n0.1,0.3333333333333333\n2,\n");
    }

    #[test]
    fn json_envelope() {
        let mut buf = Vec::new();
        write_results(&Two(vec![(0.5, None)]), &Meta::new(Some(9), 1), Format::Json, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["meta"]["seed"], 9);
        assert_eq!(v["meta"]["n"], 1);
        assert_eq!(v["results"][0][0], 0.5);
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-17, 123456.789, -2.5e300] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
        }
        assert!("xml".parse::<Format>().is_err());
    }
}
