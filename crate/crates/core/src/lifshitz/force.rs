use rayon::prelude::*;

use super::matsubara::{MatsubaraGrid, Truncation};
use super::reflection::{reflection_unchecked, LayerResponse};
use super::Geometry;
use crate::constants::Constants;
use crate::materials::Material;
use crate::quadrature::{integrate, pairwise_sum, Tolerance};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Sphere-plate force, pN.
    Force,
    /// dF/da, μN/m.
    Gradient,
    /// Effective parallel-plate pressure −(dF/da)/(2πR), mPa.
    Pressure,
}

impl Quantity {
    pub fn unit(&self) -> &'static str {
        match self {
            Quantity::Force => "pN",
            Quantity::Gradient => "uN/m",
            Quantity::Pressure => "mPa",
        }
    }
}

/// Numerical controls for the radial integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    /// Relative tolerance of each radial integral.
    pub quad_rel_tol: f64,
    /// Integration runs over `y ∈ [y_l, y_l + y_cutoff]`; the rest is bounded
    /// analytically.
    pub y_cutoff: f64,
    pub max_intervals: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            quad_rel_tol: 1e-8,
            y_cutoff: 60.0,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForceResult {
    pub quantity: Quantity,
    pub separation: f64,
    pub value: f64,
    /// Running sums over `l = 0..=truncation_l`, in the same units as `value`.
    pub partial_sums: Vec<f64>,
    pub truncation_l: usize,
    /// Quadrature error, cut-off bound and Matsubara tail estimate combined.
    pub error_estimate: f64,
    /// `a/R`, the order of the neglected beyond-PFA correction.
    pub pfa_ratio: f64,
}

/// A sphere of radius `radius` nm above a plate at fixed temperature.
/// Material 1 is the plate, material 2 the sphere.
#[derive(Debug, Clone)]
pub struct SpherePlate {
    pub radius: f64,
    pub plate: Material,
    pub sphere: Material,
    pub grid: MatsubaraGrid,
    pub settings: Settings,
    pub constants: Constants,
}

// Terms are evaluated in blocks; the stopping test runs sequentially over
// each block so the truncation point does not depend on the thread count.
const BLOCK: usize = 32;

#[derive(Debug, Clone, Copy)]
struct Term {
    value: f64,
    error: f64,
}

impl SpherePlate {
    pub fn new(radius: f64, plate: Material, sphere: Material, temperature: f64) -> Result<Self> {
        let constants = Constants::CODATA;
        Geometry::new(radius, 1.0)?;
        Ok(Self {
            radius,
            plate,
            sphere,
            grid: MatsubaraGrid::new(temperature, Truncation::default(), &constants)?,
            settings: Settings::default(),
            constants,
        })
    }

    /// Same material for both bodies.
    pub fn symmetric(radius: f64, material: Material, temperature: f64) -> Result<Self> {
        Self::new(radius, material.clone(), material, temperature)
    }

    pub fn with_truncation(mut self, truncation: Truncation) -> Self {
        self.grid.truncation = truncation;
        self
    }

    pub fn with_settings(mut self, settings: Settings) -> Self {
        self.settings = settings;
        self
    }

    pub fn with_constants(mut self, constants: Constants) -> Result<Self> {
        self.constants = constants;
        self.grid = MatsubaraGrid::new(self.grid.temperature(), self.grid.truncation, &constants)?;
        Ok(self)
    }

    pub fn force(&self, a: f64) -> Result<ForceResult> {
        self.evaluate(Quantity::Force, a)
    }

    pub fn gradient(&self, a: f64) -> Result<ForceResult> {
        self.evaluate(Quantity::Gradient, a)
    }

    pub fn pressure(&self, a: f64) -> Result<ForceResult> {
        self.evaluate(Quantity::Pressure, a)
    }

    pub fn evaluate(&self, quantity: Quantity, a: f64) -> Result<ForceResult> {
        let geometry = Geometry::new(self.radius, a)?;
        let kt = self.constants.thermal_energy(self.grid.temperature());
        let to_units = match quantity {
            Quantity::Force => kt * self.radius / (4.0 * a * a) * self.constants.pn_per_ev_per_nm(),
            Quantity::Gradient => {
                kt * self.radius / (4.0 * a * a * a) * self.constants.un_per_m_per_ev_per_nm2()
            }
            Quantity::Pressure => {
                -kt / (8.0 * std::f64::consts::PI * a * a * a) * self.constants.mpa_per_ev_per_nm3()
            }
        };
        let derivative = quantity != Quantity::Force;

        let mut terms: Vec<Term> = Vec::new();
        let mut running = 0.0;
        let mut tail = 0.0;
        let truncation_l;
        'outer: loop {
            let start = terms.len();
            let end = match self.grid.truncation {
                Truncation::Fixed { l_max } => l_max + 1,
                Truncation::Auto { max_terms, .. } => {
                    if start >= max_terms {
                        return Err(Error::Truncation(format!(
                            "no convergence after {max_terms} Matsubara terms at a = {a} nm \
                             (last term {:.3e}, running sum {running:.3e})",
                            terms.last().map_or(0.0, |t| t.value)
                        )));
                    }
                    (start + BLOCK).min(max_terms)
                }
            };
            let block: Vec<Term> = (start..end)
                .into_par_iter()
                .map(|l| self.term(l, a, derivative))
                .collect::<Result<_>>()?;
            for term in block {
                let l = terms.len();
                running += term.value;
                terms.push(term);
                if let Truncation::Auto { rel_tol, .. } = self.grid.truncation {
                    if l >= 2 {
                        let prev = terms[l - 1].value;
                        if term.value == 0.0 {
                            truncation_l = l;
                            break 'outer;
                        }
                        let ratio = (term.value / prev).abs();
                        if ratio < 1.0 {
                            let estimate = term.value.abs() * ratio / (1.0 - ratio);
                            if estimate <= rel_tol * running.abs() {
                                tail = estimate;
                                truncation_l = l;
                                break 'outer;
                            }
                        }
                    }
                }
            }
            if let Truncation::Fixed { l_max } = self.grid.truncation {
                truncation_l = l_max;
                break;
            }
        }

        let value = to_units * pairwise_sum(terms.iter().map(|t| t.value));
        let mut acc = 0.0;
        let partial_sums = terms
            .iter()
            .map(|t| {
                acc += t.value;
                to_units * acc
            })
            .collect();
        let error = to_units.abs() * (terms.iter().map(|t| t.error).sum::<f64>() + tail);
        Ok(ForceResult {
            quantity,
            separation: a,
            value,
            partial_sums,
            truncation_l,
            error_estimate: error,
            pfa_ratio: geometry.pfa_ratio(),
        })
    }

    /// Radial integral at Matsubara index `l`, primed-sum weight included.
    fn term(&self, l: usize, a: f64, derivative: bool) -> Result<Term> {
        let xi = self.grid.xi(l);
        let plate = self.plate.layer(l, xi)?;
        let sphere = self.sphere.layer(l, xi)?;
        let (value, error) = self.radial_integral(&plate, &sphere, l == 0, xi, a, derivative)?;
        let weight = if l == 0 { 0.5 } else { 1.0 };
        Ok(Term {
            value: weight * value,
            error: weight * error,
        })
    }

    /// `∫_{y(ξ)}^∞` of the force (or gradient) integrand at a non-zero
    /// frequency `xi` treated as continuous. Used for the zero-temperature
    /// limit, where `k_B T Σ'_l → (1/2π) ∫ dξ`.
    pub fn spectral_integral(&self, quantity: Quantity, a: f64, xi: f64) -> Result<f64> {
        let plate = self.plate.layer(1, xi)?;
        let sphere = self.sphere.layer(1, xi)?;
        Ok(self
            .radial_integral(&plate, &sphere, false, xi, a, quantity != Quantity::Force)?
            .0)
    }

    fn radial_integral(
        &self,
        plate: &LayerResponse,
        sphere: &LayerResponse,
        zero: bool,
        xi: f64,
        a: f64,
        derivative: bool,
    ) -> Result<(f64, f64)> {
        let scale = 2.0 * a / self.constants.hbar_c_ev_nm;
        let kappa = scale * xi;
        let integrand = |t: f64| {
            let y = kappa + t;
            let (tm1, te1) = reflection_unchecked(plate, zero, y, kappa, scale);
            let (tm2, te2) = reflection_unchecked(sphere, zero, y, kappa, scale);
            let e = (-y).exp();
            let em1 = -(-y).exp_m1();
            if derivative {
                y * y * (occupation(tm1 * tm2, e, em1) + occupation(te1 * te2, e, em1))
            } else {
                y * (log_factor(tm1 * tm2, e, em1) + log_factor(te1 * te2, e, em1))
            }
        };
        let cutoff = self.settings.y_cutoff;
        let r = integrate(
            integrand,
            0.0,
            cutoff,
            // Low-order terms are O(1); the absolute floor stops noise-limited
            // refinement of far-tail terms that cannot affect the sum.
            Tolerance {
                rel: self.settings.quad_rel_tol,
                abs: self.settings.quad_rel_tol * 1e-9,
            },
            self.settings.max_intervals,
        )
        .map_err(|e| Error::Numeric(format!("radial integral at xi = {xi:.6e} eV, a = {a} nm: {e}")))?;
        let y_end = kappa + cutoff;
        let decay = (-y_end).exp() / (-(-y_end).exp_m1());
        let bound = if derivative {
            2.0 * (y_end * y_end + 2.0 * y_end + 2.0) * decay
        } else {
            2.0 * (y_end + 1.0) * decay
        };
        Ok((r.value, r.error + bound))
    }
}

// ln(1 − r e^{−y}), with 1 − e^{−y} = `em1` kept exact for r = 1.
#[inline]
fn log_factor(r: f64, e: f64, em1: f64) -> f64 {
    if r == 1.0 && e > 0.5 {
        em1.ln()
    } else {
        (-r * e).ln_1p()
    }
}

// r e^{−y} / (1 − r e^{−y}).
#[inline]
fn occupation(r: f64, e: f64, em1: f64) -> f64 {
    let x = r * e;
    if r == 1.0 {
        e / em1
    } else {
        x / (1.0 - x)
    }
}
