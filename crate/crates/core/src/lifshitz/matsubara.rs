use crate::constants::Constants;
use crate::{Error, Result};

/// How the Matsubara sum is cut off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    /// Sum `l = 0..=l_max`.
    Fixed { l_max: usize },
    /// Stop once a geometric extrapolation of the remaining terms falls
    /// below `rel_tol` times the running sum.
    Auto { rel_tol: f64, max_terms: usize },
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::Auto {
            rel_tol: 1e-7,
            max_terms: 2_000_000,
        }
    }
}

/// Matsubara frequencies `ξ_l = 2π k_B T l / ħ`, in eV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatsubaraGrid {
    temperature: f64,
    first: f64,
    pub truncation: Truncation,
}

impl MatsubaraGrid {
    pub fn new(temperature: f64, truncation: Truncation, constants: &Constants) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::domain(format!("temperature must be positive, got {temperature} K")));
        }
        match truncation {
            Truncation::Auto { rel_tol, max_terms } if !(rel_tol > 0.0) || max_terms < 3 => {
                return Err(Error::domain("automatic truncation needs rel_tol > 0 and max_terms >= 3"))
            }
            _ => {}
        }
        Ok(Self {
            temperature,
            first: 2.0 * std::f64::consts::PI * constants.thermal_energy(temperature),
            truncation,
        })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn xi(&self, l: usize) -> f64 {
        l as f64 * self.first
    }

    /// Lower limit `y_l = 2a ξ_l/(ħc)` of the radial integral at separation `a` nm.
    pub fn y_min(&self, l: usize, a: f64, constants: &Constants) -> f64 {
        2.0 * a * self.xi(l) / constants.hbar_c_ev_nm
    }

    /// The first `count` pairs `(l, ξ_l)`.
    pub fn terms(&self, count: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (0..count).map(move |l| (l, self.xi(l)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn room_temperature_first_frequency() {
        let g = MatsubaraGrid::new(300.0, Truncation::default(), &Constants::CODATA).unwrap();
        assert_eq!(g.xi(0), 0.0);
        assert!((g.xi(1) - 0.16243).abs() < 1e-5);
        for (l, xi) in g.terms(50).skip(1) {
            assert!((xi / g.xi(1) - l as f64).abs() <= 1e-13 * l as f64);
        }
    }

    #[test]
    fn y_min_scales_with_separation() {
        let c = Constants::CODATA;
        let g = MatsubaraGrid::new(300.0, Truncation::default(), &c).unwrap();
        assert!((g.y_min(1, 200.0, &c) - 400.0 * g.xi(1) / c.hbar_c_ev_nm).abs() < 1e-15);
        assert_eq!(g.y_min(0, 200.0, &c), 0.0);
    }

    #[test]
    fn rejects_bad_temperature() {
        assert!(MatsubaraGrid::new(0.0, Truncation::default(), &Constants::CODATA).is_err());
    }
}
