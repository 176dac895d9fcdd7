//! CSV records and their readers and writers.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{io_err, Result};

/// Prices keep 17 significant digits so that a file read back reproduces
/// the values exactly.
fn sig17<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{v:.16e}"))
}

/// One pricing run: a method applied to one parameter combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub method: String,
    pub option: String,
    pub s0: f64,
    #[serde(rename = "K")]
    pub strike: f64,
    pub r: f64,
    pub sigma: f64,
    pub lambda0: f64,
    pub eta: f64,
    pub alpha: f64,
    pub b: f64,
    pub beta: f64,
    /// Resolved reference price.
    pub delta: f64,
    pub n_paths: usize,
    pub n_exercise: usize,
    pub seed: u64,
    #[serde(serialize_with = "sig17")]
    pub price: f64,
    #[serde(serialize_with = "sig17")]
    pub std_error: f64,
    /// Empty unless timing was requested, so that repeated runs produce identical files.
    pub runtime_s: Option<f64>,
    pub flagged_paths: usize,
}

/// Wall-clock time of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub method: String,
    pub option: String,
    pub s0: f64,
    #[serde(rename = "K")]
    pub strike: f64,
    pub lambda0: f64,
    pub eta: f64,
    pub alpha: f64,
    pub n_paths: usize,
    pub trial: usize,
    pub seed: u64,
    #[serde(serialize_with = "sig17")]
    pub price: f64,
    pub runtime_s: f64,
}

/// A fine-grid point of a simulated path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRow {
    pub path: usize,
    pub step: usize,
    pub t: f64,
    pub price: f64,
    /// 1 on the grid point where the drift was redrawn.
    pub is_jump: u8,
    /// Number of drift changes over the whole path.
    pub n_jumps: usize,
}

/// Writes records with a header row. The header is written even when `rows` is empty.
pub fn write_csv<T: Serialize, W: Write>(w: W, header: &[&str], rows: &[T]) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .has_headers(false)
        .from_writer(w);
    wtr.write_record(header)?;
    for row in rows {
        wtr.serialize(row)?;
    }
    wtr.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_csv_file<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    write_csv(std::io::BufWriter::new(file), header, rows)
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut rdr = csv::Reader::from_reader(std::io::BufReader::new(file));
    Ok(rdr.deserialize().collect::<std::result::Result<_, _>>()?)
}

pub const RESULT_HEADER: &[&str] = &[
    "method",
    "option",
    "s0",
    "K",
    "r",
    "sigma",
    "lambda0",
    "eta",
    "alpha",
    "b",
    "beta",
    "delta",
    "n_paths",
    "n_exercise",
    "seed",
    "price",
    "std_error",
    "runtime_s",
    "flagged_paths",
];

pub const BENCH_HEADER: &[&str] = &[
    "method",
    "option",
    "s0",
    "K",
    "lambda0",
    "eta",
    "alpha",
    "n_paths",
    "trial",
    "seed",
    "price",
    "runtime_s",
];

pub const PATH_HEADER: &[&str] = &["path", "step", "t", "price", "is_jump", "n_jumps"];
