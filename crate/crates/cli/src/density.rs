//! Long-format density CSV and its JSON sidecar.

use std::io::Write;

use serde::{Deserialize, Serialize};
use wedge_stark::density::DensityGrid;

use crate::aperture::Aperture;
use crate::format::significant;

pub fn write_density_csv<W: Write>(grid: &DensityGrid, out: W) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["x", "y", "density"])?;
    for (x, y, v) in grid.points() {
        w.write_record([significant(x, 10), significant(y, 10), significant(v, 10)])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakRecord {
    pub x: f64,
    pub y: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensitySidecar {
    pub d: f64,
    pub theta0: String,
    pub f: f64,
    pub direction: String,
    pub resolution: usize,
    pub beta_star: f64,
    pub peaks: Vec<PeakRecord>,
}

impl DensitySidecar {
    pub fn new(grid: &DensityGrid, aperture: Aperture) -> Self {
        Self {
            d: grid.wedge.radius(),
            theta0: aperture.to_string(),
            f: grid.field.strength(),
            direction: grid.field.direction().label().to_string(),
            resolution: grid.nx,
            beta_star: grid.beta,
            peaks: grid.peaks.iter().map(|p| PeakRecord { x: p.x, y: p.y, height: p.height }).collect(),
        }
    }
}
