use crate::constants::Constants;
use crate::materials::{Material, MaterialKind};
use crate::{Error, Result};

/// Analytic branch used for the `l = 0` Matsubara term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroCharacter {
    /// Dissipative conduction electrons: `ξ ε(iξ) → 0`.
    DrudeMetal,
    /// Dissipationless conduction electrons: `ξ² ε(iξ) → ω_p²`.
    PlasmaMetal { omega_p: f64 },
    /// Finite static permittivity `ε₀`.
    Insulator { eps0: f64 },
    Ideal,
}

/// ε and μ of one body at one Matsubara frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerResponse {
    pub eps: f64,
    pub mu: f64,
    pub zero: ZeroCharacter,
}

impl LayerResponse {
    pub const VACUUM: LayerResponse = LayerResponse {
        eps: 1.0,
        mu: 1.0,
        zero: ZeroCharacter::Insulator { eps0: 1.0 },
    };
}

impl Material {
    pub fn zero_character(&self) -> Result<ZeroCharacter> {
        Ok(match &self.kind {
            MaterialKind::IdealMetal => ZeroCharacter::Ideal,
            MaterialKind::Dielectric(m) => match m.drude {
                Some(d) if d.is_plasma() => ZeroCharacter::PlasmaMetal { omega_p: d.omega_p },
                Some(_) => ZeroCharacter::DrudeMetal,
                None => ZeroCharacter::Insulator {
                    eps0: m.static_core()?,
                },
            },
        })
    }

    /// Response at Matsubara index `l` and frequency `xi` (eV). For `l = 0`
    /// `eps` is left at 1 and only `zero` and `mu` matter.
    pub fn layer(&self, l: usize, xi: f64) -> Result<LayerResponse> {
        let zero = self.zero_character()?;
        let eps = match (&self.kind, l) {
            (_, 0) | (MaterialKind::IdealMetal, _) => 1.0,
            (MaterialKind::Dielectric(m), _) => m.eps_imag(xi)?,
        };
        Ok(LayerResponse {
            eps,
            mu: self.magnetic.mu(l),
            zero,
        })
    }
}

/// `(r_TM, r_TE)` at Matsubara index `l`, radial variable `y = 2a q_l`,
/// separation `a` (nm) and frequency `xi_l` (eV).
pub fn reflection_coeffs(
    layer: &LayerResponse,
    l: usize,
    y: f64,
    a: f64,
    xi_l: f64,
    constants: &Constants,
) -> Result<(f64, f64)> {
    let scale = 2.0 * a / constants.hbar_c_ev_nm;
    let y_min = scale * xi_l;
    if !(y >= y_min * (1.0 - 1e-12)) {
        return Err(Error::domain(format!("y = {y} below its lower limit {y_min}")));
    }
    Ok(reflection_unchecked(layer, l == 0, y, scale * xi_l, scale))
}

/// `kappa = 2a ξ_l/(ħc)`; `scale = 2a/(ħc)`.
#[inline]
pub(crate) fn reflection_unchecked(layer: &LayerResponse, zero: bool, y: f64, kappa: f64, scale: f64) -> (f64, f64) {
    let mu = layer.mu;
    let magnetic_static = (mu - 1.0) / (mu + 1.0);
    if zero {
        return match layer.zero {
            ZeroCharacter::Ideal => (1.0, -1.0),
            ZeroCharacter::DrudeMetal => (1.0, magnetic_static),
            ZeroCharacter::PlasmaMetal { omega_p } => {
                let p = scale * omega_p;
                let k = (y * y + mu * p * p).sqrt();
                (1.0, (mu * y - k) / (mu * y + k))
            }
            ZeroCharacter::Insulator { eps0 } => ((eps0 - 1.0) / (eps0 + 1.0), magnetic_static),
        };
    }
    if layer.zero == ZeroCharacter::Ideal {
        return (1.0, -1.0);
    }
    let eps = layer.eps;
    let k = (y * y + (eps * mu - 1.0) * kappa * kappa).sqrt();
    ((eps * y - k) / (eps * y + k), (mu * y - k) / (mu * y + k))
}

#[cfg(test)]
mod tests {
    use super::*;

    const C: Constants = Constants::CODATA;

    #[test]
    fn drude_metal_zero_frequency() {
        let layer = Material::gold_modified().layer(0, 0.0).unwrap();
        for y in [1e-3, 0.5, 3.0, 40.0] {
            assert_eq!(reflection_coeffs(&layer, 0, y, 200.0, 0.0, &C).unwrap(), (1.0, 0.0));
        }
    }

    #[test]
    fn vacuum_does_not_reflect() {
        let (tm, te) = reflection_coeffs(&LayerResponse::VACUUM, 3, 5.0, 200.0, 0.3, &C).unwrap();
        assert_eq!((tm, te), (0.0, 0.0));
    }

    #[test]
    fn nickel_static_magnetic_reflection() {
        let layer = Material::nickel_modified().layer(0, 0.0).unwrap();
        let (tm, te) = reflection_coeffs(&layer, 0, 1.0, 250.0, 0.0, &C).unwrap();
        assert_eq!(tm, 1.0);
        assert!((te - 109.0 / 111.0).abs() < 1e-15);
        assert_eq!(layer.mu, 110.0);
        assert_eq!(Material::nickel_modified().layer(1, 0.16).unwrap().mu, 1.0);
    }

    #[test]
    fn plasma_metal_te_is_negative_and_bounded() {
        let layer = LayerResponse {
            eps: 1.0,
            mu: 1.0,
            zero: ZeroCharacter::PlasmaMetal { omega_p: 9.0 },
        };
        let (_, te) = reflection_coeffs(&layer, 0, 1.0, 200.0, 0.0, &C).unwrap();
        let p = 400.0 * 9.0 / C.hbar_c_ev_nm;
        let k = (1.0 + p * p).sqrt();
        assert!((te - (1.0 - k) / (1.0 + k)).abs() < 1e-15);
        assert!(te < 0.0 && te > -1.0);
    }

    #[test]
    fn insulator_and_ideal_branches() {
        let ins = LayerResponse {
            eps: 1.0,
            mu: 1.0,
            zero: ZeroCharacter::Insulator { eps0: 3.0 },
        };
        assert_eq!(reflection_coeffs(&ins, 0, 2.0, 100.0, 0.0, &C).unwrap(), (0.5, 0.0));
        let ideal = Material::ideal_metal().layer(4, 0.6).unwrap();
        let y = 2.0 * 100.0 * 0.6 / C.hbar_c_ev_nm + 0.1;
        assert_eq!(reflection_coeffs(&ideal, 4, y, 100.0, 0.6, &C).unwrap(), (1.0, -1.0));
    }

    #[test]
    fn below_lower_limit_is_domain_error() {
        let layer = Material::gold_modified().layer(1, 0.16).unwrap();
        let r = reflection_coeffs(&layer, 1, 0.01, 200.0, 0.16, &C);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn coefficients_bounded_for_real_materials() {
        for mat in [Material::gold_modified(), Material::nickel_modified()] {
            for l in 0..40 {
                let xi = 0.16 * l as f64;
                let layer = mat.layer(l, xi).unwrap();
                let y0 = 2.0 * 300.0 * xi / C.hbar_c_ev_nm;
                for dy in [0.0, 1e-3, 0.1, 1.0, 10.0, 100.0] {
                    let (tm, te) = reflection_coeffs(&layer, l, y0 + dy, 300.0, xi, &C).unwrap();
                    assert!(tm.abs() <= 1.0 && te.abs() <= 1.0, "l={l} dy={dy}: {tm} {te}");
                }
            }
        }
    }
}
