use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::mc::Estimate;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    #[serde(rename = "T")]
    pub t: f64,
    pub estimate: Estimate,
    /// `estimate.mean / T`.
    pub ratio: f64,
}

/// `H(T)/T` over strictly increasing horizons.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub alpha: f64,
    pub step: f64,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// Ratio at the largest horizon; no extrapolation is attempted.
    pub fn pickands_constant(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.ratio)
    }

    /// CSV with columns `T,mean,stderr,ratio`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "T,mean,stderr,ratio")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{}",
                r.t, r.estimate.mean, r.estimate.stderr, r.ratio
            )?;
        }
        Ok(())
    }
}
