//! Zero-field energy table and the Bessel-zero curve.

use std::io::Write;

use anyhow::{bail, Context};
use serde::Deserialize;
use wedge_stark::specfun::first_zero;
use wedge_stark::variational::ground_energy;
use wedge_stark::Wedge;

use crate::aperture::Aperture;
use crate::format::{sig6, significant};

pub const TABLE1_RADII: [f64; 6] = [1.0, 2.0, 4.0, 6.0, 8.0, 10.0];
pub const TABLE1_THICKNESSES: [f64; 3] = [1.0, 10.0, 100.0];

pub fn table1_apertures() -> [Aperture; 5] {
    [
        Aperture::pi_over(20),
        Aperture::pi_over(10),
        Aperture::pi_over(2),
        Aperture::pi_over(1),
        Aperture::new(3, 2).expect("3π/2 is a valid aperture"),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub d: f64,
    pub thickness: f64,
    pub aperture: Aperture,
    pub energy: f64,
}

/// All 90 `(d, L, θ0)` ground energies, `d` outer, `L`, then `θ0`.
pub fn table1() -> anyhow::Result<Vec<Table1Row>> {
    let mut rows = Vec::with_capacity(90);
    for d in TABLE1_RADII {
        for thickness in TABLE1_THICKNESSES {
            for aperture in table1_apertures() {
                let wedge = Wedge::new(d, aperture.radians(), thickness)?;
                let energy = ground_energy(&wedge)
                    .with_context(|| format!("ground state for d={d}, L={thickness}, theta0={aperture}"))?
                    .energy;
                rows.push(Table1Row { d, thickness, aperture, energy });
            }
        }
    }
    Ok(rows)
}

pub fn write_table1_csv<W: Write>(rows: &[Table1Row], out: W) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["d", "L", "theta0_label", "energy", "energy_sig6"])?;
    for r in rows {
        w.write_record([
            sig6(r.d),
            sig6(r.thickness),
            r.aperture.to_string(),
            format!("{:.2}", r.energy),
            sig6(r.energy),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Table1Record {
    pub d: f64,
    #[serde(rename = "L")]
    pub thickness: f64,
    pub theta0_label: String,
    pub energy: f64,
    pub energy_sig6: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct ZeroRow {
    pub theta0: f64,
    pub m0: f64,
    pub alpha: f64,
}

/// `steps` evenly spaced apertures from `min` to `max` inclusive.
pub fn zeros(min: Aperture, max: Aperture, steps: usize) -> anyhow::Result<Vec<ZeroRow>> {
    let (a, b) = (min.radians(), max.radians());
    if a >= b {
        bail!("aperture range is empty: {min} is not below {max}");
    }
    if steps < 2 {
        bail!("need at least 2 steps, got {steps}");
    }
    (0..steps)
        .map(|i| {
            let theta0 = if i + 1 == steps { b } else { a + (b - a) * i as f64 / (steps - 1) as f64 };
            let m0 = std::f64::consts::PI / theta0;
            let alpha = first_zero(m0).with_context(|| format!("first zero for theta0={theta0}"))?.value;
            Ok(ZeroRow { theta0, m0, alpha })
        })
        .collect()
}

pub fn write_zeros_csv<W: Write>(rows: &[ZeroRow], out: W) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["theta0", "m0", "alpha"])?;
    for r in rows {
        w.write_record([significant(r.theta0, 10), significant(r.m0, 10), significant(r.alpha, 10)])?;
    }
    w.flush()?;
    Ok(())
}
