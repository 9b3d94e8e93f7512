//! Stark shift of a carrier confined in a wedge-shaped quantum box.
//!
//! The box is an infinite well `0 ≤ ρ ≤ d`, `|θ| ≤ θ0/2`, `|z| ≤ L/2`; a static
//! field acts along the wedge axis. Everything is in reduced atomic units (see
//! [`units`]).
//!
//! - [`specfun`]: Bessel functions of real order, their zeros and maxima.
//! - [`quadrature`]: Gauss-Legendre rules on the wedge cross-section.
//! - [`variational`]: zero-field spectrum, the one-parameter trial energy
//!   `E(β)`, its minimum and the Stark shift.
//! - [`density`]: sampled ground-state densities and their peaks.
//! - [`fd_oracle`]: a finite-difference eigensolver that checks the
//!   variational energies independently.

pub mod density;
pub mod error;
pub mod fd_oracle;
pub mod quadrature;
pub mod specfun;
pub mod units;
pub mod variational;

pub use error::{Error, Result};
pub use units::{Direction, FieldConfig, QuantumNumbers, Wedge};
pub use variational::{stark_shift, GroundState, VariationalResult};
