//! Physical constants and unit conversions.
//!
//! Every unit conversion in the crate goes through [`Constants`]. The default
//! table holds CODATA 2018 values; a different table can be supplied for
//! testing (see [`Constants::from_env`]).

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Name of the environment variable pointing at a JSON constants table.
pub const CONSTANTS_ENV_VAR: &str = "CASIMIR_CONSTANTS";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    /// ħc in eV·nm.
    pub hbar_c_ev_nm: f64,
    /// Boltzmann constant in eV/K.
    pub k_b_ev_per_k: f64,
    /// Elementary charge in C. Fixes eV ↔ J.
    pub elementary_charge_c: f64,
    /// Classical electron radius e²/(m_e c²) in nm (Gaussian units).
    pub electron_radius_nm: f64,
}

impl Constants {
    pub const CODATA: Constants = Constants {
        hbar_c_ev_nm: 197.326_980_4,
        k_b_ev_per_k: 8.617_333_262e-5,
        elementary_charge_c: 1.602_176_634e-19,
        electron_radius_nm: 2.817_940_326_2e-6,
    };

    /// Loads the table named by `CASIMIR_CONSTANTS`, or the CODATA table when
    /// the variable is unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CONSTANTS_ENV_VAR) {
            None => Ok(Self::CODATA),
            Some(path) => {
                let text = std::fs::read_to_string(&path).map_err(|e| {
                    Error::Parse(format!("constants table {}: {e}", path.to_string_lossy()))
                })?;
                let c: Self = serde_json::from_str(&text).map_err(|e| {
                    Error::Parse(format!("constants table {}: {e}", path.to_string_lossy()))
                })?;
                let values = [c.hbar_c_ev_nm, c.k_b_ev_per_k, c.elementary_charge_c, c.electron_radius_nm];
                if values.iter().all(|v| v.is_finite() && *v > 0.0) {
                    Ok(c)
                } else {
                    Err(Error::Parse(format!(
                        "constants table {}: every constant must be positive and finite",
                        path.to_string_lossy()
                    )))
                }
            }
        }
    }

    /// 1 eV/nm expressed in pN (≈ 160.21766).
    pub fn pn_per_ev_per_nm(&self) -> f64 {
        self.elementary_charge_c * 1e21
    }

    /// 1 eV/nm² expressed in μN/m.
    pub fn un_per_m_per_ev_per_nm2(&self) -> f64 {
        self.elementary_charge_c * 1e24
    }

    /// 1 eV/nm³ expressed in mPa.
    pub fn mpa_per_ev_per_nm3(&self) -> f64 {
        self.elementary_charge_c * 1e30
    }

    /// k_B·T in eV.
    pub fn thermal_energy(&self, temperature_k: f64) -> f64 {
        self.k_b_ev_per_k * temperature_k
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::CODATA
    }
}
