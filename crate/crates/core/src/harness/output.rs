//! Campaign CSV and summary output.

use std::io::Write;

use super::{CampaignSummary, ExperimentRecord, RecordStatus};
use crate::error::Result;
use crate::qubit::csv_error;

pub const CSV_HEADER: [&str; 10] =
    ["sample_id", "n", "family", "rank_k", "t_before", "t_after", "delta", "gap_before", "gap_after", "status"];

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes one CSV row per record and flushes it, so partial runs stay readable.
pub struct RecordCsvWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> RecordCsvWriter<W> {
    pub fn new(out: W) -> Result<Self> {
        let mut inner = csv::Writer::from_writer(out);
        inner.write_record(CSV_HEADER).map_err(csv_error)?;
        inner.flush()?;
        Ok(Self { inner })
    }

    pub fn write(&mut self, r: &ExperimentRecord) -> Result<()> {
        let status = match r.status {
            RecordStatus::Ok => "ok",
            RecordStatus::Excluded => "excluded",
        };
        self.inner
            .write_record([
                r.sample_id.to_string(),
                r.n.to_string(),
                r.family.to_string(),
                r.rank_k.map(|k| k.to_string()).unwrap_or_default(),
                float(r.t_before),
                float(r.t_after),
                float(r.delta),
                float(r.gap_before),
                float(r.gap_after),
                status.to_string(),
            ])
            .map_err(csv_error)?;
        self.inner.flush()?;
        Ok(())
    }

    pub fn into_inner(self) -> Result<W> {
        self.inner.into_inner().map_err(|e| e.into_error().into())
    }
}

pub fn write_summary<W: Write>(summary: &CampaignSummary, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, summary)?;
    writeln!(out)?;
    Ok(())
}
