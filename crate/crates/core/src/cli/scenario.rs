//! Scenario documents: one JSON file per run, paths relative to the file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::compare::{CompareMode, HalfWidth};
use crate::constants::Constants;
use crate::lifshitz::{Quantity, Settings, SpherePlate, Truncation};
use crate::materials::{FitFamily, Material};
use crate::pipeline::Pipeline;
use crate::roughness::RoughnessProfile;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn points(&self, field: &str) -> Result<Vec<f64>> {
        let bad = |why: &str| Error::Parse(format!("{field}: {why}"));
        if self.count == 0 {
            return Err(bad("count must be at least 1"));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(bad("bounds must be finite"));
        }
        if self.count > 1 && !(self.stop > self.start) {
            return Err(bad("grid must be ascending (stop > start)"));
        }
        if self.spacing == Spacing::Log && !(self.start > 0.0) {
            return Err(bad("log spacing needs start > 0"));
        }
        if self.count == 1 {
            return Ok(vec![self.start]);
        }
        let n = (self.count - 1) as f64;
        Ok((0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    return self.stop;
                }
                let t = i as f64 / n;
                match self.spacing {
                    Spacing::Linear => self.start + t * (self.stop - self.start),
                    Spacing::Log => self.start * (self.stop / self.start).powf(t),
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpec {
    pub sphere_radius_nm: f64,
    pub separations: GridSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_quad")]
    pub quadrature_rel: f64,
    #[serde(default = "default_matsubara")]
    pub matsubara_rel: f64,
    #[serde(default)]
    pub l_max: Option<usize>,
}

fn default_quad() -> f64 {
    Settings::default().quad_rel_tol
}

fn default_matsubara() -> f64 {
    1e-7
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            quadrature_rel: default_quad(),
            matsubara_rel: default_matsubara(),
            l_max: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BandSpec {
    Absolute(f64),
    Relative(f64),
    /// CSV with header `a_nm,half_width`.
    Table(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioQuantity {
    Force,
    Gradient,
    Pressure,
    EpsilonTable,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsilonSpec {
    pub xi: GridSpec,
    /// Defaults to `material_1`.
    #[serde(default)]
    pub material: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KkSpec {
    /// CSV with header `omega_ev,im_eps`.
    pub table: String,
    pub tail_exponent: f64,
    pub xi: GridSpec,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSpec {
    /// CSV with header `xi_ev,eps`.
    pub samples: String,
    pub family: FitFamily,
    pub initial: Vec<f64>,
    #[serde(default)]
    pub max_evaluations: Option<usize>,
    #[serde(default)]
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub geometry: Option<GeometrySpec>,
    #[serde(default)]
    pub temperature_k: Option<f64>,
    #[serde(default)]
    pub material_1: Option<String>,
    /// Sphere material; defaults to `material_1`.
    #[serde(default)]
    pub material_2: Option<String>,
    #[serde(default)]
    pub roughness_1: Option<String>,
    #[serde(default)]
    pub roughness_2: Option<String>,
    /// Bin count used when a roughness file is a raw `height_nm` map.
    #[serde(default = "default_bins")]
    pub roughness_bins: usize,
    #[serde(default)]
    pub quantity: Option<ScenarioQuantity>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub band: Option<BandSpec>,
    #[serde(default)]
    pub dataset: Option<String>,
    #[serde(default)]
    pub compare_mode: CompareMode,
    #[serde(default)]
    pub epsilon: Option<EpsilonSpec>,
    #[serde(default)]
    pub kk: Option<KkSpec>,
    #[serde(default)]
    pub fit: Option<FitSpec>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_bins() -> usize {
    64
}

fn missing(field: &str) -> Error {
    Error::Parse(format!("scenario field `{field}` is required for this subcommand"))
}

impl Scenario {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let mut s: Scenario =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        s.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(s)
    }

    pub fn resolve(&self, rel: &str) -> PathBuf {
        self.base_dir.join(rel)
    }

    pub fn material(&self, rel: &str) -> Result<Material> {
        Material::from_json_path(&self.resolve(rel))
    }

    pub fn materials(&self) -> Result<(Material, Material)> {
        let m1 = self.material_1.as_deref().ok_or_else(|| missing("material_1"))?;
        let plate = self.material(m1)?;
        let sphere = match &self.material_2 {
            Some(m2) => self.material(m2)?,
            None => plate.clone(),
        };
        Ok((plate, sphere))
    }

    fn roughness_profile(&self, rel: &str) -> Result<RoughnessProfile> {
        let path = self.resolve(rel);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let first = text.lines().next().unwrap_or_default().trim();
        let wrap = |e: Error| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            other => other,
        };
        if first == "height_nm" {
            let heights = text
                .lines()
                .skip(1)
                .filter(|l| !l.trim().is_empty())
                .enumerate()
                .map(|(i, l)| {
                    l.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("{}: row {}: {e}", path.display(), i + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            RoughnessProfile::from_heights(&heights, self.roughness_bins).map_err(wrap)
        } else {
            RoughnessProfile::from_csv_reader(text.as_bytes()).map_err(wrap)
        }
    }

    pub fn separations(&self) -> Result<Vec<f64>> {
        let g = self.geometry.as_ref().ok_or_else(|| missing("geometry"))?;
        g.separations.points("geometry.separations")
    }

    /// Builds the physics pipeline with the given constants and optional
    /// command-line overrides.
    pub fn pipeline(&self, constants: Constants, overrides: &Overrides) -> Result<Pipeline> {
        let g = self.geometry.as_ref().ok_or_else(|| missing("geometry"))?;
        let t = self.temperature_k.ok_or_else(|| missing("temperature_k"))?;
        let (plate, sphere) = self.materials()?;
        let mut tol = self.tolerances;
        if let Some(rel) = overrides.tolerance {
            tol.matsubara_rel = rel;
            tol.quadrature_rel = rel / 10.0;
        }
        if let Some(l) = overrides.l_max {
            tol.l_max = Some(l);
        }
        if !(tol.quadrature_rel > 0.0 && tol.matsubara_rel > 0.0) {
            return Err(Error::Parse("tolerances must be positive".into()));
        }
        let truncation = match tol.l_max {
            Some(l_max) => Truncation::Fixed { l_max },
            None => Truncation::Auto {
                rel_tol: tol.matsubara_rel,
                max_terms: 2_000_000,
            },
        };
        let setup = SpherePlate::new(g.sphere_radius_nm, plate, sphere, t)?
            .with_constants(constants)?
            .with_truncation(truncation)
            .with_settings(Settings {
                quad_rel_tol: tol.quadrature_rel,
                ..Settings::default()
            });
        let roughness = match (&self.roughness_1, &self.roughness_2) {
            (None, None) => None,
            (r1, r2) => {
                let load = |r: &Option<String>| match r {
                    Some(p) => self.roughness_profile(p),
                    None => Ok(RoughnessProfile::flat()),
                };
                Some((load(r1)?, load(r2)?))
            }
        };
        Ok(Pipeline { setup, roughness })
    }

    pub fn half_width(&self) -> Result<HalfWidth> {
        match self.band.as_ref().ok_or_else(|| missing("band"))? {
            BandSpec::Absolute(w) => Ok(HalfWidth::Absolute(*w)),
            BandSpec::Relative(f) => Ok(HalfWidth::Relative(*f)),
            BandSpec::Table(rel) => {
                let path = self.resolve(rel);
                let mut rdr = csv::Reader::from_path(&path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
                if headers.iter().collect::<Vec<_>>() != ["a_nm", "half_width"] {
                    return Err(Error::Parse(format!("{}: expected header `a_nm,half_width`", path.display())));
                }
                let mut nodes: Vec<(f64, f64)> = Vec::new();
                for rec in rdr.deserialize() {
                    nodes.push(rec.map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?);
                }
                if nodes.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(Error::Parse(format!("{}: a_nm must be ascending", path.display())));
                }
                Ok(HalfWidth::Table(nodes))
            }
        }
    }

    pub fn quantity_or(&self, fallback: Quantity) -> Quantity {
        match self.quantity {
            Some(ScenarioQuantity::Force) => Quantity::Force,
            Some(ScenarioQuantity::Gradient) => Quantity::Gradient,
            Some(ScenarioQuantity::Pressure) => Quantity::Pressure,
            _ => fallback,
        }
    }
}

/// Command-line overrides of scenario settings.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub tolerance: Option<f64>,
    pub l_max: Option<usize>,
}
