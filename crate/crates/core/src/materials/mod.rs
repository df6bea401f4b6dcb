//! Dielectric and magnetic response models.
//!
//! A [`ResponseModel`] is a plain sum of independent contributions to
//! `ε − 1`: an optional Drude (or dissipationless plasma) term for conduction
//! electrons, any number of Lorentz oscillators, an optional
//! Ninham-Parsegian pair, an optional modified oscillator with exponent
//! `α ∈ (0, 2)`, and an optional tabulated `Im ε(ω)` that enters through the
//! Kramers-Kronig relation. Frequencies are in eV.

mod catalog;
mod fit;
mod kk;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::Constants;
use crate::{Error, Result};

pub use catalog::{Family, Material, MaterialKind};
pub use fit::{fit_oscillator, FitFamily, FitOptions, FitResult};
pub use kk::{kk_transform, KkRow, KkTable, KkTransform};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LorentzTerm {
    pub g_j: f64,
    pub omega_j: f64,
    pub gamma_j: f64,
}

impl LorentzTerm {
    pub fn new(g_j: f64, omega_j: f64, gamma_j: f64) -> Result<Self> {
        let term = Self {
            g_j,
            omega_j,
            gamma_j,
        };
        term.validate()?;
        Ok(term)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g_j > 0.0 && self.omega_j > 0.0 && self.gamma_j >= 0.0)
            || !(self.g_j.is_finite() && self.omega_j.is_finite() && self.gamma_j.is_finite())
        {
            return Err(Error::domain(format!(
                "Lorentz term needs g_j > 0, omega_j > 0, gamma_j >= 0 (got {self:?})"
            )));
        }
        Ok(())
    }

    fn imag_axis(&self, xi: f64) -> f64 {
        let x = xi / self.omega_j;
        self.g_j / (1.0 + x * x + self.gamma_j * xi / (self.omega_j * self.omega_j))
    }

    fn real_axis(&self, omega: f64) -> Result<Complex64> {
        let x = omega / self.omega_j;
        let denom = Complex64::new(1.0 - x * x, -self.gamma_j * omega / (self.omega_j * self.omega_j));
        if denom.norm() == 0.0 {
            return Err(Error::domain(format!(
                "undamped Lorentz oscillator has a pole at omega = {} eV",
                self.omega_j
            )));
        }
        Ok(self.g_j / denom)
    }
}

/// Conduction-electron term. `gamma_0 = 0` is the plasma model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrudeTerm {
    pub omega_p: f64,
    pub gamma_0: f64,
}

impl DrudeTerm {
    pub fn new(omega_p: f64, gamma_0: f64) -> Result<Self> {
        let term = Self { omega_p, gamma_0 };
        term.validate()?;
        Ok(term)
    }

    pub fn plasma(omega_p: f64) -> Result<Self> {
        Self::new(omega_p, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_p > 0.0 && self.gamma_0 >= 0.0)
            || !(self.omega_p.is_finite() && self.gamma_0.is_finite())
        {
            return Err(Error::domain(format!(
                "Drude term needs omega_p > 0, gamma_0 >= 0 (got {self:?})"
            )));
        }
        Ok(())
    }

    pub fn is_plasma(&self) -> bool {
        self.gamma_0 == 0.0
    }

    fn imag_axis(&self, xi: f64) -> f64 {
        self.omega_p * self.omega_p / (xi * (xi + self.gamma_0))
    }

    fn real_axis(&self, omega: f64) -> Complex64 {
        -self.omega_p * self.omega_p / (omega * Complex64::new(omega, self.gamma_0))
    }
}

/// Empirical oscillator `g_uv / (1 + (ξ/ω_uv)^α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModifiedOscillatorTerm {
    pub g_uv: f64,
    pub omega_uv: f64,
    pub alpha: f64,
}

impl ModifiedOscillatorTerm {
    pub fn new(g_uv: f64, omega_uv: f64, alpha: f64) -> Result<Self> {
        let term = Self {
            g_uv,
            omega_uv,
            alpha,
        };
        term.validate()?;
        Ok(term)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g_uv > 0.0 && self.omega_uv > 0.0 && self.alpha > 0.0 && self.alpha < 2.0)
            || !(self.g_uv.is_finite() && self.omega_uv.is_finite())
        {
            return Err(Error::domain(format!(
                "modified oscillator needs g_uv > 0, omega_uv > 0, 0 < alpha < 2 (got {self:?})"
            )));
        }
        Ok(())
    }

    fn imag_axis(&self, xi: f64) -> f64 {
        self.g_uv / (1.0 + (xi / self.omega_uv).powf(self.alpha))
    }

    // Continuation ξ = −iω: (−iω/ω_uv)^α = (ω/ω_uv)^α e^{−iπα/2}.
    fn real_axis(&self, omega: f64) -> Complex64 {
        let x = (omega / self.omega_uv).powf(self.alpha);
        let phase = -0.5 * std::f64::consts::PI * self.alpha;
        let denom = Complex64::new(1.0 + x * phase.cos(), x * phase.sin());
        self.g_uv / denom
    }
}

/// Relaxation-free ultraviolet plus infrared oscillator pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NinhamParsegianTerm {
    pub g_uv: f64,
    pub omega_uv: f64,
    pub g_ir: f64,
    pub omega_ir: f64,
}

impl NinhamParsegianTerm {
    pub fn new(g_uv: f64, omega_uv: f64, g_ir: f64, omega_ir: f64) -> Result<Self> {
        let term = Self {
            g_uv,
            omega_uv,
            g_ir,
            omega_ir,
        };
        term.validate()?;
        Ok(term)
    }

    pub fn validate(&self) -> Result<()> {
        let all_positive = [self.g_uv, self.omega_uv, self.g_ir, self.omega_ir]
            .iter()
            .all(|v| *v > 0.0 && v.is_finite());
        if !all_positive || self.omega_ir >= self.omega_uv {
            return Err(Error::domain(format!(
                "Ninham-Parsegian term needs positive parameters and omega_ir < omega_uv (got {self:?})"
            )));
        }
        Ok(())
    }

    fn imag_axis(&self, xi: f64) -> f64 {
        let u = xi / self.omega_uv;
        let r = xi / self.omega_ir;
        self.g_uv / (1.0 + u * u) + self.g_ir / (1.0 + r * r)
    }

    fn real_axis(&self, omega: f64) -> Result<Complex64> {
        let du = 1.0 - (omega / self.omega_uv).powi(2);
        let di = 1.0 - (omega / self.omega_ir).powi(2);
        if du == 0.0 || di == 0.0 {
            return Err(Error::domain(format!(
                "Ninham-Parsegian term has a pole at omega = {omega} eV"
            )));
        }
        Ok(Complex64::new(self.g_uv / du + self.g_ir / di, 0.0))
    }
}

/// Composite permittivity: `ε(iξ) = 1 + Σ` of the present contributions.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ResponseModel {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drude: Option<DrudeTerm>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lorentz: Vec<LorentzTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modified: Option<ModifiedOscillatorTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ninham_parsegian: Option<NinhamParsegianTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tabulated: Option<KkTable>,
}

impl ResponseModel {
    pub fn lorentz(terms: Vec<LorentzTerm>) -> Result<Self> {
        Self {
            lorentz: terms,
            ..Self::default()
        }
        .validated()
    }

    pub fn drude_lorentz(drude: DrudeTerm, terms: Vec<LorentzTerm>) -> Result<Self> {
        Self {
            drude: Some(drude),
            lorentz: terms,
            ..Self::default()
        }
        .validated()
    }

    pub fn modified(drude: Option<DrudeTerm>, term: ModifiedOscillatorTerm) -> Result<Self> {
        Self {
            drude,
            modified: Some(term),
            ..Self::default()
        }
        .validated()
    }

    pub fn ninham_parsegian(term: NinhamParsegianTerm) -> Result<Self> {
        Self {
            ninham_parsegian: Some(term),
            ..Self::default()
        }
        .validated()
    }

    pub fn tabulated(table: KkTable) -> Result<Self> {
        Self {
            tabulated: Some(table),
            ..Self::default()
        }
        .validated()
    }

    /// The gold model of Eq. (12) of the modified-oscillator fit:
    /// ω_p = 9.1 eV, γ_0 = 0.06 eV, g_UV = 6.5, ω_UV = 5.9 eV, α = 1.42.
    pub fn gold_modified() -> Self {
        Self::modified(
            Some(DrudeTerm {
                omega_p: 9.1,
                gamma_0: 0.06,
            }),
            ModifiedOscillatorTerm {
                g_uv: 6.5,
                omega_uv: 5.9,
                alpha: 1.42,
            },
        )
        .expect("constant parameters are valid")
    }

    /// Nickel with the modified oscillator: ω_p = 4.33 eV, γ_0 = 0.0195 eV,
    /// g_UV = 115, ω_UV = 0.61 eV, α = 1.35.
    pub fn nickel_modified() -> Self {
        Self::modified(
            Some(DrudeTerm {
                omega_p: 4.33,
                gamma_0: 0.0195,
            }),
            ModifiedOscillatorTerm {
                g_uv: 115.0,
                omega_uv: 0.61,
                alpha: 1.35,
            },
        )
        .expect("constant parameters are valid")
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.drude.is_none()
            && self.lorentz.is_empty()
            && self.modified.is_none()
            && self.ninham_parsegian.is_none()
            && self.tabulated.is_none()
        {
            return Err(Error::domain("response model has no components"));
        }
        if let Some(d) = &self.drude {
            d.validate()?;
        }
        for t in &self.lorentz {
            t.validate()?;
        }
        if let Some(m) = &self.modified {
            m.validate()?;
        }
        if let Some(np) = &self.ninham_parsegian {
            np.validate()?;
        }
        if let Some(t) = &self.tabulated {
            t.validate()?;
        }
        Ok(())
    }

    pub fn is_metallic(&self) -> bool {
        self.drude.is_some()
    }

    /// Same model with the conduction-electron term removed.
    pub fn without_drude(&self) -> Self {
        Self {
            drude: None,
            ..self.clone()
        }
    }

    /// ε(iξ) for ξ > 0.
    pub fn eps_imag(&self, xi: f64) -> Result<f64> {
        check_frequency(xi)?;
        Ok(1.0 + self.drude_contribution(xi) + self.core_contribution(xi)?)
    }

    /// Drude part of ε(iξ) − 1, zero for insulators.
    pub fn drude_contribution(&self, xi: f64) -> f64 {
        self.drude.map_or(0.0, |d| d.imag_axis(xi))
    }

    /// Bound-electron part of ε(iξ) − 1: everything except the Drude term.
    pub fn core_contribution(&self, xi: f64) -> Result<f64> {
        let mut sum: f64 = self.lorentz.iter().map(|t| t.imag_axis(xi)).sum();
        if let Some(m) = &self.modified {
            sum += m.imag_axis(xi);
        }
        if let Some(np) = &self.ninham_parsegian {
            sum += np.imag_axis(xi);
        }
        if let Some(t) = &self.tabulated {
            sum += t.transform(xi)?.value - 1.0;
        }
        Ok(sum)
    }

    /// Static permittivity of the bound electrons, `ε_core(0)`.
    pub fn static_core(&self) -> Result<f64> {
        let mut eps = 1.0 + self.lorentz.iter().map(|t| t.g_j).sum::<f64>();
        if let Some(m) = &self.modified {
            eps += m.g_uv;
        }
        if let Some(np) = &self.ninham_parsegian {
            eps += np.g_uv + np.g_ir;
        }
        if let Some(t) = &self.tabulated {
            eps += t.transform_unchecked(0.0)?.value - 1.0;
        }
        Ok(eps)
    }

    /// Complex ε(ω) on the real frequency axis, closed-form components only.
    pub fn eps_real(&self, omega: f64) -> Result<Complex64> {
        if self.tabulated.is_some() {
            return Err(Error::UnsupportedModel(
                "tabulated components have no closed form on the real axis".into(),
            ));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::domain(format!("real frequency must be positive, got {omega}")));
        }
        let mut eps = Complex64::new(1.0, 0.0);
        if let Some(d) = &self.drude {
            eps += d.real_axis(omega);
        }
        for t in &self.lorentz {
            eps += t.real_axis(omega)?;
        }
        if let Some(m) = &self.modified {
            eps += m.real_axis(omega);
        }
        if let Some(np) = &self.ninham_parsegian {
            eps += np.real_axis(omega)?;
        }
        Ok(eps)
    }

    /// Largest characteristic frequency among the closed-form terms.
    pub fn max_characteristic_frequency(&self) -> f64 {
        let mut w: f64 = 0.0;
        if let Some(d) = &self.drude {
            w = w.max(d.omega_p).max(d.gamma_0);
        }
        for t in &self.lorentz {
            w = w.max(t.omega_j).max(t.gamma_j);
        }
        if let Some(m) = &self.modified {
            w = w.max(m.omega_uv);
        }
        if let Some(np) = &self.ninham_parsegian {
            w = w.max(np.omega_uv);
        }
        if let Some(t) = &self.tabulated {
            w = w.max(t.rows.last().map_or(0.0, |r| r.omega));
        }
        w
    }
}

fn check_frequency(xi: f64) -> Result<()> {
    if xi > 0.0 && xi.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("imaginary frequency must be positive, got {xi}")))
    }
}

/// Static permeability; μ(iξ_l) is `mu_static` for l = 0 and 1 otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagneticModel {
    pub mu_static: f64,
}

impl MagneticModel {
    pub const NONMAGNETIC: MagneticModel = MagneticModel { mu_static: 1.0 };

    pub fn new(mu_static: f64) -> Result<Self> {
        if !(mu_static >= 1.0 && mu_static.is_finite()) {
            return Err(Error::domain(format!("mu_static must be >= 1, got {mu_static}")));
        }
        Ok(Self { mu_static })
    }

    pub fn mu(&self, l: usize) -> f64 {
        if l == 0 {
            self.mu_static
        } else {
            1.0
        }
    }
}

impl Default for MagneticModel {
    fn default() -> Self {
        Self::NONMAGNETIC
    }
}

/// Free-electron gas of `n_density` electrons per nm³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeElectronParams {
    pub n_density: f64,
}

impl FreeElectronParams {
    pub fn new(n_density: f64) -> Result<Self> {
        if !(n_density > 0.0 && n_density.is_finite()) {
            return Err(Error::domain(format!("n_density must be positive, got {n_density}")));
        }
        Ok(Self { n_density })
    }

    /// Electron density that reproduces a given `c_fe` in eV².
    pub fn from_coefficient(c_fe: f64, constants: &Constants) -> Result<Self> {
        Self::new(
            c_fe / (4.0
                * std::f64::consts::PI
                * constants.electron_radius_nm
                * constants.hbar_c_ev_nm.powi(2)),
        )
    }

    /// `4πNe²/m_e` expressed as an energy squared: `4π N r_e (ħc)²` in eV².
    pub fn coefficient(&self, constants: &Constants) -> f64 {
        4.0 * std::f64::consts::PI
            * self.n_density
            * constants.electron_radius_nm
            * constants.hbar_c_ev_nm.powi(2)
    }
}

/// `1 + c_fe/ξ²`.
pub fn free_electron_eps(params: &FreeElectronParams, constants: &Constants, xi: f64) -> Result<f64> {
    check_frequency(xi)?;
    Ok(1.0 + params.coefficient(constants) / (xi * xi))
}

/// Negated least-squares slope of `ln(ε(iξ) − 1)` against `ln ξ` on a
/// 64-point geometric grid over `[xi_lo, xi_hi]`.
///
/// Models obeying the free-electron law report 2; a modified oscillator
/// dominating at high frequency reports its exponent α.
pub fn asymptote_exponent(model: &ResponseModel, xi_lo: f64, xi_hi: f64) -> Result<f64> {
    asymptote_exponent_of(|xi| model.eps_imag(xi), xi_lo, xi_hi)
}

/// [`asymptote_exponent`] for an arbitrary ε(iξ) function.
pub fn asymptote_exponent_of<F>(eps: F, xi_lo: f64, xi_hi: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    const POINTS: usize = 64;
    if !(xi_lo > 0.0 && xi_hi > xi_lo && xi_hi.is_finite()) {
        return Err(Error::domain(format!(
            "need 0 < xi_lo < xi_hi, got [{xi_lo}, {xi_hi}]"
        )));
    }
    let step = (xi_hi / xi_lo).ln() / (POINTS - 1) as f64;
    let mut xs = Vec::with_capacity(POINTS);
    let mut ys = Vec::with_capacity(POINTS);
    for i in 0..POINTS {
        let ln_xi = xi_lo.ln() + step * i as f64;
        let excess = eps(ln_xi.exp())? - 1.0;
        if !(excess > 0.0) || !excess.is_finite() {
            return Err(Error::Precision(format!(
                "eps - 1 = {excess:e} at xi = {:e} eV; cannot take its logarithm",
                ln_xi.exp()
            )));
        }
        xs.push(ln_xi);
        ys.push(excess.ln());
    }
    let n = POINTS as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(-sxy / sxx)
}
