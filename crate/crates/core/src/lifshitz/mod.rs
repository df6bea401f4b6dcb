//! Lifshitz formula for a sphere above a plate.
//!
//! In the proximity force approximation the force is
//!
//! ```text
//! F(a) = k_B T R / (4a²) Σ'_l ∫_{y_l}^∞ y Σ_α ln(1 − r_α⁽¹⁾ r_α⁽²⁾ e^{−y}) dy
//! ```
//!
//! with `y = 2a q_l`, `y_l = 2a ξ_l/(ħc)` and the `l = 0` term halved. The
//! gradient and the effective parallel-plate pressure follow from the
//! term-by-term derivative in `a`.

mod force;
mod matsubara;
mod reflection;

pub use force::{ForceResult, Quantity, Settings, SpherePlate};
pub use matsubara::{MatsubaraGrid, Truncation};
pub use reflection::{reflection_coeffs, LayerResponse, ZeroCharacter};

use crate::{Error, Result};

/// Sphere radius and separation, both in nm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub sphere_radius: f64,
    pub separation: f64,
}

impl Geometry {
    /// Above this `a/R` the proximity force approximation is flagged.
    pub const PFA_WARN_RATIO: f64 = 0.01;

    pub fn new(sphere_radius: f64, separation: f64) -> Result<Self> {
        if !(sphere_radius > 0.0 && sphere_radius.is_finite()) {
            return Err(Error::Geometry(format!("sphere radius must be positive, got {sphere_radius} nm")));
        }
        if !(separation > 0.0 && separation.is_finite()) {
            return Err(Error::Geometry(format!("separation must be positive, got {separation} nm")));
        }
        Ok(Self {
            sphere_radius,
            separation,
        })
    }

    /// `a/R`, the order of the neglected beyond-PFA correction.
    pub fn pfa_ratio(&self) -> f64 {
        self.separation / self.sphere_radius
    }

    pub fn pfa_warning(&self) -> bool {
        self.pfa_ratio() > Self::PFA_WARN_RATIO
    }
}
