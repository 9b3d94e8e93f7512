//! Field-dressed ground-state density `|Ψ(x, y, z=0)|²` on a Cartesian grid.

use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::units::{FieldConfig, Wedge};
use crate::variational::{self, GroundState, TrialState};

pub const MIN_RESOLUTION: usize = 64;
/// Local maxima below this fraction of the global maximum are ignored.
pub const PEAK_FLOOR: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub x: f64,
    pub y: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub wedge: Wedge,
    pub field: FieldConfig,
    /// Variational parameter the density was sampled at.
    pub beta: f64,
    pub x_min: f64,
    pub x_max: f64,
    /// The grid spans `-y_max ≤ y ≤ y_max`.
    pub y_max: f64,
    pub nx: usize,
    /// Always odd, so `y = 0` is a grid row.
    pub ny: usize,
    /// Row-major samples, `y` outer and `x` inner.
    pub values: Vec<f64>,
    pub peaks: Vec<Peak>,
}

impl DensityGrid {
    pub fn x(&self, ix: usize) -> f64 {
        self.x_min + (self.x_max - self.x_min) * ix as f64 / (self.nx - 1) as f64
    }

    /// Row coordinate; rows `k` and `ny - 1 - k` are exact negatives.
    pub fn y(&self, iy: usize) -> f64 {
        let half = (self.ny - 1) as f64;
        self.y_max * (2.0 * iy as f64 - half) / half
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    pub fn spacing(&self) -> (f64, f64) {
        ((self.x_max - self.x_min) / (self.nx - 1) as f64, 2.0 * self.y_max / (self.ny - 1) as f64)
    }

    /// `(x, y, density)` in row-major order.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.ny).flat_map(move |iy| (0..self.nx).map(move |ix| (self.x(ix), self.y(iy), self.value(ix, iy))))
    }
}

/// Bounding box `(x_min, x_max, y_max)` of the wedge cross-section.
pub fn bounds(wedge: &Wedge) -> (f64, f64, f64) {
    let d = wedge.radius();
    let half = 0.5 * wedge.aperture();
    let x_min = if half <= FRAC_PI_2 { 0.0 } else { d * half.cos() };
    (x_min, d, d * half.min(FRAC_PI_2).sin())
}

/// Density at the variationally optimal `β*` for `field`.
pub fn density_grid(wedge: &Wedge, field: FieldConfig, resolution: usize) -> Result<DensityGrid> {
    let gs = GroundState::new(wedge)?;
    let beta = variational::minimize(&gs, field)?.beta_star;
    density_grid_at(&gs, field, beta, resolution)
}

/// Density of the trial state with an explicit `β`.
pub fn density_grid_at(gs: &GroundState, field: FieldConfig, beta: f64, resolution: usize) -> Result<DensityGrid> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::Domain(format!("density resolution must be at least {MIN_RESOLUTION}, got {resolution}")));
    }
    let state = TrialState::new(gs, field, beta)?;
    let (x_min, x_max, y_max) = bounds(&gs.wedge);
    let nx = resolution;
    let ny = resolution | 1;
    let mut grid = DensityGrid {
        wedge: gs.wedge,
        field,
        beta,
        x_min,
        x_max,
        y_max,
        nx,
        ny,
        values: vec![0.0; nx * ny],
        peaks: Vec::new(),
    };
    // fill y ≥ 0 and mirror
    for iy in ny / 2..ny {
        let y = grid.y(iy);
        for ix in 0..nx {
            let x = grid.x(ix);
            let rho = x.hypot(y);
            let theta = y.atan2(x);
            let v = state.density(rho, theta, 0.0);
            grid.values[iy * nx + ix] = v;
            grid.values[(ny - 1 - iy) * nx + ix] = v;
        }
    }
    grid.peaks = find_peaks(&grid);
    Ok(grid)
}

/// Strict local maxima over 8-neighbourhoods above [`PEAK_FLOOR`] of the
/// global maximum, refined by a quadratic fit on the 3×3 stencil and sorted by
/// height, highest first. Equal neighbours count as lower when they come later
/// in row-major order, so a flat-topped maximum is reported once.
pub fn find_peaks(grid: &DensityGrid) -> Vec<Peak> {
    let (nx, ny) = (grid.nx, grid.ny);
    let global = grid.values.iter().copied().fold(0.0f64, f64::max);
    if global <= 0.0 || nx < 3 || ny < 3 {
        return Vec::new();
    }
    let floor = PEAK_FLOOR * global;
    let (hx, hy) = grid.spacing();
    let mut peaks = Vec::new();
    for iy in 1..ny - 1 {
        for ix in 1..nx - 1 {
            let c = grid.value(ix, iy);
            if c < floor {
                continue;
            }
            let is_max = (-1..=1i64).all(|dy| {
                (-1..=1i64).all(|dx| {
                    if dx == 0 && dy == 0 {
                        return true;
                    }
                    let n = grid.value((ix as i64 + dx) as usize, (iy as i64 + dy) as usize);
                    let earlier = dy < 0 || (dy == 0 && dx < 0);
                    if earlier {
                        c > n
                    } else {
                        c >= n
                    }
                })
            });
            if !is_max {
                continue;
            }
            let (ox, gx) = vertex(grid.value(ix - 1, iy), c, grid.value(ix + 1, iy));
            let (oy, gy) = vertex(grid.value(ix, iy - 1), c, grid.value(ix, iy + 1));
            peaks.push(Peak { x: grid.x(ix) + ox * hx, y: grid.y(iy) + oy * hy, height: c + gx + gy });
        }
    }
    peaks.sort_by(|a, b| {
        b.height
            .partial_cmp(&a.height)
            .unwrap_or(Ordering::Equal)
            .then(a.y.partial_cmp(&b.y).unwrap_or(Ordering::Equal))
    });
    peaks
}

/// Offset (in grid steps) and height gain of the parabola through three
/// equally spaced samples.
fn vertex(left: f64, centre: f64, right: f64) -> (f64, f64) {
    let curvature = left - 2.0 * centre + right;
    if curvature >= 0.0 {
        return (0.0, 0.0);
    }
    let offset = (0.5 * (left - right) / curvature).clamp(-0.5, 0.5);
    (offset, -0.25 * (left - right) * offset)
}
