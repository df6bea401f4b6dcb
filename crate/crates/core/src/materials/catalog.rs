//! Material files: JSON documents with a `family` discriminator.
//!
//! ```json
//! {
//!   "family": "modified_oscillator",
//!   "name": "Au",
//!   "drude": { "omega_p": 9.1, "gamma_0": 0.06 },
//!   "modified": { "g_uv": 6.5, "omega_uv": 5.9, "alpha": 1.42 }
//! }
//! ```
//!
//! A `tabulated` block takes either inline `rows` or a `csv` path relative to
//! the material file, plus `tail_exponent`. `mu_static` defaults to 1.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    DrudeTerm, KkRow, KkTable, LorentzTerm, MagneticModel, ModifiedOscillatorTerm, NinhamParsegianTerm,
    ResponseModel,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Lorentz,
    DrudeLorentz,
    PlasmaLorentz,
    NinhamParsegian,
    ModifiedOscillator,
    TabulatedKk,
    IdealMetal,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MaterialKind {
    Dielectric(ResponseModel),
    /// Perfect reflector: r_TM = 1, r_TE = −1 at every frequency.
    IdealMetal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub name: String,
    pub family: Family,
    pub kind: MaterialKind,
    pub magnetic: MagneticModel,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TabulatedSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rows: Option<Vec<KkRow>>,
    tail_exponent: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialFile {
    family: Family,
    #[serde(default)]
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    drude: Option<DrudeTerm>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    lorentz: Vec<LorentzTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modified: Option<ModifiedOscillatorTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ninham_parsegian: Option<NinhamParsegianTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tabulated: Option<TabulatedSpec>,
    #[serde(default = "one")]
    mu_static: f64,
}

fn one() -> f64 {
    1.0
}

impl Material {
    pub fn new(name: impl Into<String>, family: Family, kind: MaterialKind, magnetic: MagneticModel) -> Result<Self> {
        let m = Self {
            name: name.into(),
            family,
            kind,
            magnetic,
        };
        m.check_family()?;
        Ok(m)
    }

    pub fn ideal_metal() -> Self {
        Self {
            name: "ideal metal".into(),
            family: Family::IdealMetal,
            kind: MaterialKind::IdealMetal,
            magnetic: MagneticModel::NONMAGNETIC,
        }
    }

    pub fn dielectric(name: impl Into<String>, family: Family, model: ResponseModel) -> Result<Self> {
        Self::new(name, family, MaterialKind::Dielectric(model), MagneticModel::NONMAGNETIC)
    }

    pub fn gold_modified() -> Self {
        Self::dielectric("Au (modified oscillator)", Family::ModifiedOscillator, ResponseModel::gold_modified())
            .expect("valid")
    }

    pub fn nickel_modified() -> Self {
        Self::new(
            "Ni (modified oscillator)",
            Family::ModifiedOscillator,
            MaterialKind::Dielectric(ResponseModel::nickel_modified()),
            MagneticModel { mu_static: 110.0 },
        )
        .expect("valid")
    }

    pub fn model(&self) -> Option<&ResponseModel> {
        match &self.kind {
            MaterialKind::Dielectric(m) => Some(m),
            MaterialKind::IdealMetal => None,
        }
    }

    fn check_family(&self) -> Result<()> {
        let model = match (&self.kind, self.family) {
            (MaterialKind::IdealMetal, Family::IdealMetal) => return Ok(()),
            (MaterialKind::IdealMetal, f) | (MaterialKind::Dielectric(_), f @ Family::IdealMetal) => {
                return Err(Error::Parse(format!("family {f:?} does not match the material contents")))
            }
            (MaterialKind::Dielectric(m), _) => m,
        };
        model.validate()?;
        let ok = match self.family {
            Family::Lorentz => !model.lorentz.is_empty() && model.drude.is_none(),
            Family::DrudeLorentz => model.drude.is_some_and(|d| !d.is_plasma()),
            Family::PlasmaLorentz => model.drude.is_some_and(|d| d.is_plasma()),
            Family::NinhamParsegian => model.ninham_parsegian.is_some(),
            Family::ModifiedOscillator => model.modified.is_some(),
            Family::TabulatedKk => model.tabulated.is_some(),
            Family::IdealMetal => unreachable!(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "material `{}`: components do not fit family {:?}",
                self.name, self.family
            )))
        }
    }

    /// Parses a material document; relative `csv` paths resolve against `base_dir`.
    pub fn from_json_str(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let file: MaterialFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let magnetic = MagneticModel::new(file.mu_static)?;
        if file.family == Family::IdealMetal {
            if file.drude.is_some()
                || !file.lorentz.is_empty()
                || file.modified.is_some()
                || file.ninham_parsegian.is_some()
                || file.tabulated.is_some()
            {
                return Err(Error::Parse("ideal_metal takes no response components".into()));
            }
            return Material::new(file.name, Family::IdealMetal, MaterialKind::IdealMetal, magnetic);
        }
        let tabulated = match file.tabulated {
            None => None,
            Some(TabulatedSpec {
                csv: Some(csv),
                rows: None,
                tail_exponent,
            }) => {
                let path = match base_dir {
                    Some(dir) => dir.join(&csv),
                    None => csv.into(),
                };
                Some(KkTable::from_csv_path(&path, tail_exponent)?)
            }
            Some(TabulatedSpec {
                csv: None,
                rows: Some(rows),
                tail_exponent,
            }) => Some(KkTable::new(rows, tail_exponent)?),
            Some(_) => return Err(Error::Parse("tabulated needs exactly one of `csv` or `rows`".into())),
        };
        let model = ResponseModel {
            drude: file.drude,
            lorentz: file.lorentz,
            modified: file.modified,
            ninham_parsegian: file.ninham_parsegian,
            tabulated,
        };
        Material::new(file.name, file.family, MaterialKind::Dielectric(model), magnetic)
    }

    pub fn from_json_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text, path.parent()).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Serialises to the material-file format with tabulated data inline.
    pub fn to_json(&self) -> String {
        let model = self.model().cloned().unwrap_or_default();
        let file = MaterialFile {
            family: self.family,
            name: self.name.clone(),
            drude: model.drude,
            lorentz: model.lorentz,
            modified: model.modified,
            ninham_parsegian: model.ninham_parsegian,
            tabulated: model.tabulated.map(|t| TabulatedSpec {
                csv: None,
                rows: Some(t.rows),
                tail_exponent: t.tail_exponent,
            }),
            mu_static: self.magnetic.mu_static,
        };
        serde_json::to_string_pretty(&file).expect("material serialises")
    }
}
