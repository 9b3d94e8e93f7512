//! Library side of the `wedge-stark` command: sweep specifications, presets,
//! and CSV/JSON writers shared by the binary and its tests.

pub mod aperture;
pub mod density;
pub mod format;
pub mod oracle;
pub mod sweep;
pub mod tables;

pub use aperture::Aperture;
pub use sweep::{run_sweep, SweepSpec};
