//! Casimir and van der Waals forces between real-material surfaces.
//!
//! The crate evaluates the finite-temperature Lifshitz formula for a sphere
//! above a plate in the proximity force approximation, with interchangeable
//! dielectric response models evaluated along the imaginary frequency axis.
//! Measured roughness enters through geometric averaging over height
//! histograms, and theory bands can be confronted with experimental data
//! points carrying error arms.
//!
//! Module map:
//!
//! - [`materials`]: Drude, Lorentz, Ninham-Parsegian, modified-oscillator and
//!   tabulated (Kramers-Kronig) response models, plus oscillator fitting.
//! - [`lifshitz`]: Matsubara bookkeeping, reflection coefficients, force,
//!   force gradient and effective pressure.
//! - [`roughness`]: height histograms and the geometric average.
//! - [`compare`]: theory bands, measurement crosses and exclusion reports.
//! - [`cli`]: scenario files and the `casimir` command-line front end.
//!
//! All frequencies are in eV (that is, `ħω`), lengths in nm. Forces come out
//! in pN, gradients in μN/m and pressures in mPa.

// NaN must fail validation, so `!(x > 0.0)` is used on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod compare;
pub mod constants;
mod error;
pub mod lifshitz;
pub mod materials;
pub mod pipeline;
pub mod quadrature;
pub mod roughness;

pub use constants::Constants;
pub use error::{Error, Result};
