use std::io::{self, Read, Write};

use serde::{Deserialize, Serialize};

use crate::restart::Algorithm;

pub const RECORD_HEADER: &str = "instance,algorithm,seed,solved,tries,flips,wall_time_s";

/// Outcome of one solve call in a suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub solved: bool,
    #[serde(rename = "tries")]
    pub tries_used: u32,
    #[serde(rename = "flips")]
    pub total_flips: u64,
    #[serde(rename = "wall_time_s")]
    pub wall_time: f64,
}

impl RunRecord {
    /// The record with timing zeroed, for comparisons that must ignore the clock.
    pub fn without_time(&self) -> RunRecord {
        RunRecord {
            wall_time: 0.0,
            ..self.clone()
        }
    }
}

/// Append-only CSV writer; each record is flushed as soon as it is written
/// so an interrupted suite leaves every finished run on disk.
pub struct RecordWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(out: W) -> Self {
        RecordWriter {
            inner: csv::WriterBuilder::new().has_headers(true).from_writer(out),
        }
    }

    pub fn write(&mut self, record: &RunRecord) -> io::Result<()> {
        self.inner.serialize(record).map_err(csv_to_io)?;
        self.inner.flush()
    }

    pub fn into_inner(self) -> io::Result<W> {
        self.inner
            .into_inner()
            .map_err(|e| io::Error::other(e.to_string()))
    }
}

pub fn read_records<R: Read>(input: R) -> io::Result<Vec<RunRecord>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(csv_to_io))
        .collect()
}

fn csv_to_io(e: csv::Error) -> io::Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => io,
            _ => unreachable!(),
        }
    } else {
        io::Error::new(io::ErrorKind::InvalidData, e.to_string())
    }
}
