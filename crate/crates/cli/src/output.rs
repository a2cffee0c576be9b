//! JSON and CSV writers. Every float is printed with 17 significant digits.

use std::io;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use stellar_core::state::SymmetricState;
use stellar_core::stellar::{Constellation, StarAngles};

use crate::CliError;

/// `serde_json` formatter printing floats as `{:.16e}`.
struct Digits17;

impl serde_json::ser::Formatter for Digits17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }
}

pub fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17);
    value.serialize(&mut ser).map_err(|e| CliError::Io(format!("json output: {e}")))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| CliError::Io(format!("json output: {e}")))
}

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV document built row by row.
pub struct Csv {
    writer: csv::Writer<Vec<u8>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Result<Self, CliError> {
        let mut csv = Csv { writer: csv::Writer::from_writer(Vec::new()) };
        csv.row(header)?;
        Ok(csv)
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).map_err(|e| CliError::Io(format!("csv output: {e}")))
    }

    pub fn finish(self) -> Result<String, CliError> {
        let bytes = self.writer.into_inner().map_err(|e| CliError::Io(format!("csv output: {e}")))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(format!("csv output: {e}")))
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StateJson {
    pub n: usize,
    pub dicke: Vec<[f64; 2]>,
}

impl From<&SymmetricState> for StateJson {
    fn from(s: &SymmetricState) -> Self {
        StateJson { n: s.n(), dicke: s.dicke().iter().map(|c| [c.re, c.im]).collect() }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ConstellationJson {
    pub n: usize,
    pub stars: Vec<StarAngles>,
}

impl From<&Constellation> for ConstellationJson {
    fn from(c: &Constellation) -> Self {
        ConstellationJson { n: c.n(), stars: c.stars().iter().map(StarAngles::from).collect() }
    }
}

/// Rows `star_index,theta,phi,x,y,z`, optionally prefixed by extra columns.
pub fn star_rows(csv: &mut Csv, prefix: &[String], c: &Constellation) -> Result<(), CliError> {
    for (i, s) in c.stars().iter().enumerate() {
        let [x, y, z] = s.vector();
        let mut row = prefix.to_vec();
        row.push(i.to_string());
        row.extend([s.theta(), s.phi(), x, y, z].map(num));
        csv.row(&row)?;
    }
    Ok(())
}

/// Rows `k,re,im`, optionally prefixed by extra columns.
pub fn dicke_rows(csv: &mut Csv, prefix: &[String], s: &SymmetricState) -> Result<(), CliError> {
    for (k, d) in s.dicke().iter().enumerate() {
        let mut row = prefix.to_vec();
        row.push(k.to_string());
        row.extend([num(d.re), num(d.im)]);
        csv.row(&row)?;
    }
    Ok(())
}

/// Complex matrix as nested `[[re, im], ...]` rows.
pub fn matrix_json(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect()
}
