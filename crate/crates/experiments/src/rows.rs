//! Result rows and their CSV form.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Column order of every results file.
pub const COLUMNS: [&str; 17] = [
    "preset_id",
    "topology",
    "model",
    "d",
    "L",
    "k",
    "J",
    "Delta_or_theta",
    "tau",
    "N_step",
    "site",
    "fidelity",
    "step_probability",
    "cum_probability",
    "log_cum_probability",
    "extinct",
    "grid_index",
];

/// One target site after one measurement of one grid point.
///
/// Rows flagged `extinct` mark the step where the post-selected branch
/// became negligible; their fidelity is empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub preset_id: String,
    pub topology: String,
    pub model: String,
    pub d: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub k: usize,
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "Delta_or_theta")]
    pub delta_or_theta: f64,
    pub tau: f64,
    #[serde(rename = "N_step")]
    pub n_step: usize,
    pub site: usize,
    pub fidelity: Option<f64>,
    pub step_probability: f64,
    pub cum_probability: f64,
    pub log_cum_probability: f64,
    pub extinct: bool,
    pub grid_index: usize,
}

/// 17 significant digits: enough to round-trip any f64.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl ResultRow {
    pub fn jtau(&self) -> f64 {
        self.j * self.tau
    }

    fn fields(&self) -> [String; 17] {
        [
            self.preset_id.clone(),
            self.topology.clone(),
            self.model.clone(),
            self.d.to_string(),
            self.l.to_string(),
            self.k.to_string(),
            format_float(self.j),
            format_float(self.delta_or_theta),
            format_float(self.tau),
            self.n_step.to_string(),
            self.site.to_string(),
            self.fidelity.map(format_float).unwrap_or_default(),
            format_float(self.step_probability),
            format_float(self.cum_probability),
            format_float(self.log_cum_probability),
            self.extinct.to_string(),
            self.grid_index.to_string(),
        ]
    }
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

pub fn write_rows<W: Write>(out: W, rows: &[ResultRow]) -> Result<()> {
    let mut w = writer(out);
    w.write_record(COLUMNS)?;
    for row in rows {
        w.write_record(row.fields())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_rows<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for row in r.deserialize() {
        rows.push(row?);
    }
    Ok(rows)
}

/// Writes a small derived table with a header and float columns.
pub fn write_table<W: Write>(out: W, header: &[&str], records: &[Vec<String>]) -> Result<()> {
    let mut w = writer(out);
    w.write_record(header)?;
    for rec in records {
        w.write_record(rec)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
