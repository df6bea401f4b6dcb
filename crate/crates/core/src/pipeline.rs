//! Lifshitz evaluation with optional roughness averaging, swept over
//! separation grids.

use rayon::prelude::*;

use crate::lifshitz::{Quantity, SpherePlate};
use crate::roughness::{averaged_quantity, RoughnessProfile};
use crate::Result;

#[derive(Debug, Clone)]
pub struct Pipeline {
    pub setup: SpherePlate,
    /// Plate and sphere profiles; `None` means both surfaces are flat.
    pub roughness: Option<(RoughnessProfile, RoughnessProfile)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub a: f64,
    pub value: f64,
    /// Matsubara cut-off and error estimate, reported for flat surfaces only.
    pub truncation_l: Option<usize>,
    pub error_estimate: Option<f64>,
}

impl Pipeline {
    pub fn flat(setup: SpherePlate) -> Self {
        Self { setup, roughness: None }
    }

    pub fn with_roughness(setup: SpherePlate, plate: RoughnessProfile, sphere: RoughnessProfile) -> Self {
        Self {
            setup,
            roughness: Some((plate, sphere)),
        }
    }

    /// For pressure with roughness this averages −(dF/da)/(2πR) over the
    /// profiles, which is the derivative of the averaged force.
    pub fn point(&self, quantity: Quantity, a: f64) -> Result<SweepPoint> {
        match &self.roughness {
            None => {
                let r = self.setup.evaluate(quantity, a)?;
                Ok(SweepPoint {
                    a,
                    value: r.value,
                    truncation_l: Some(r.truncation_l),
                    error_estimate: Some(r.error_estimate),
                })
            }
            Some((p1, p2)) => {
                let value = averaged_quantity(|gap| Ok(self.setup.evaluate(quantity, gap)?.value), a, p1, p2)?;
                Ok(SweepPoint {
                    a,
                    value,
                    truncation_l: None,
                    error_estimate: None,
                })
            }
        }
    }

    pub fn value(&self, quantity: Quantity, a: f64) -> Result<f64> {
        Ok(self.point(quantity, a)?.value)
    }

    /// Evaluates every separation in parallel; results keep grid order.
    pub fn sweep(&self, quantity: Quantity, grid: &[f64]) -> Result<Vec<SweepPoint>> {
        grid.par_iter().map(|&a| self.point(quantity, a)).collect()
    }
}
