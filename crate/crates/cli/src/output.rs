use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::args::Format;

pub const SCHEMA: &str = "cbct/1";

/// Destination for the main artifact: the --out file or standard output.
pub fn open(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json<S: Serialize>(w: &mut dyn Write, value: &S) -> io::Result<()> {
    serde_json::to_writer(&mut *w, value)?;
    writeln!(w)?;
    w.flush()
}

/// Rows of string cells under a header.
pub fn write_csv(w: &mut dyn Write, header: &[String], rows: &[Vec<String>]) -> io::Result<()> {
    let mut csv = csv::Writer::from_writer(&mut *w);
    csv.write_record(header)?;
    for row in rows {
        csv.write_record(row)?;
    }
    csv.flush()?;
    drop(csv);
    w.flush()
}

/// Writes either the JSON value or the CSV rows.
pub fn emit<S: Serialize>(
    out: Option<&Path>,
    format: Format,
    json: &S,
    csv: impl FnOnce() -> (Vec<String>, Vec<Vec<String>>),
) -> io::Result<()> {
    let mut w = open(out)?;
    match format {
        Format::Json => write_json(&mut *w, json),
        Format::Csv => {
            let (header, rows) = csv();
            write_csv(&mut *w, &header, &rows)
        }
    }
}

#[derive(Serialize)]
pub struct TableJson<'a> {
    pub schema: &'static str,
    pub kind: &'static str,
    pub p: u32,
    pub n: u32,
    pub modulus: &'a [u32],
    pub d: u64,
    pub c_enc: u32,
    pub entries: &'a [Vec<u64>],
    pub uniformity: u64,
    pub argmax: Vec<[u32; 2]>,
    pub engine: &'static str,
}

/// Header of b encodings after a corner cell, then one row per a.
pub fn table_csv(entries: &[Vec<u64>]) -> (Vec<String>, Vec<Vec<String>>) {
    let q = entries.len();
    let header = std::iter::once("a\\b".to_string()).chain((0..q).map(|b| b.to_string())).collect();
    let rows = entries
        .iter()
        .enumerate()
        .map(|(a, row)| std::iter::once(a.to_string()).chain(row.iter().map(|v| v.to_string())).collect())
        .collect();
    (header, rows)
}
