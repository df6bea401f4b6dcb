//! Theory bands against measurement crosses.
//!
//! A measurement is a cross `[a ± da] × [value ± dvalue]`. It is consistent
//! with a theory band when the rectangle spanned by its arms intersects the
//! band region `{(a, v) : lo(a) ≤ v ≤ hi(a)}`, the band edges being linear
//! between grid nodes. The signed margin is the smallest vertical gap
//! between rectangle and band over the rectangle's separation range:
//! positive when they are apart, zero or negative when they overlap.

use std::io::Read;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::lifshitz::Quantity;
use crate::pipeline::Pipeline;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementPoint {
    pub a: f64,
    pub da: f64,
    pub value: f64,
    pub dvalue: f64,
    pub confidence: f64,
    pub quantity: Quantity,
}

impl MeasurementPoint {
    pub fn new(a: f64, da: f64, value: f64, dvalue: f64, confidence: f64, quantity: Quantity) -> Result<Self> {
        let p = Self {
            a,
            da,
            value,
            dvalue,
            confidence,
            quantity,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.da > 0.0 && self.dvalue > 0.0) || !(self.a.is_finite() && self.value.is_finite()) {
            return Err(Error::domain(format!(
                "measurement at a = {} nm needs finite values and positive arms",
                self.a
            )));
        }
        two_sided_quantile(self.confidence)?;
        Ok(())
    }
}

/// Half-width of a theory band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfWidth {
    /// Same half-width everywhere, in the quantity's units.
    Absolute(f64),
    /// Fraction of `|center|`.
    Relative(f64),
    /// `(a_nm, half_width)` nodes, linearly interpolated.
    Table(Vec<(f64, f64)>),
}

impl HalfWidth {
    pub fn at(&self, a: f64, center: f64) -> Result<f64> {
        let w = match self {
            HalfWidth::Absolute(w) => *w,
            HalfWidth::Relative(f) => f * center.abs(),
            HalfWidth::Table(nodes) => interpolate(nodes, a)
                .ok_or_else(|| Error::Coverage(format!("half-width table does not cover a = {a} nm")))?,
        };
        if !(w >= 0.0 && w.is_finite()) {
            return Err(Error::domain(format!("band half-width must be >= 0, got {w}")));
        }
        Ok(w)
    }
}

fn interpolate(nodes: &[(f64, f64)], a: f64) -> Option<f64> {
    let first = nodes.first()?;
    let last = nodes.last()?;
    if a < first.0 || a > last.0 {
        return None;
    }
    if nodes.len() == 1 {
        return Some(first.1);
    }
    let i = nodes.partition_point(|n| n.0 <= a).clamp(1, nodes.len() - 1);
    let (a0, v0) = nodes[i - 1];
    let (a1, v1) = nodes[i];
    let t = (a - a0) / (a1 - a0);
    Some(v0 + t * (v1 - v0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandNode {
    pub a: f64,
    pub center: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryBand {
    pub quantity: Quantity,
    pub nodes: Vec<BandNode>,
    pub provenance: String,
    pub half_width: HalfWidth,
}

impl TheoryBand {
    pub fn new(quantity: Quantity, nodes: Vec<BandNode>, provenance: impl Into<String>, half_width: HalfWidth) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::domain("theory band has no nodes"));
        }
        if nodes.windows(2).any(|w| w[1].a <= w[0].a) {
            return Err(Error::domain("band separations must be strictly increasing"));
        }
        if let Some(n) = nodes.iter().find(|n| !(n.lo <= n.hi)) {
            return Err(Error::domain(format!("band edges inverted at a = {} nm", n.a)));
        }
        Ok(Self {
            quantity,
            nodes,
            provenance: provenance.into(),
            half_width,
        })
    }

    /// Band from precomputed centers `(a, center)`.
    pub fn from_centers(quantity: Quantity, centers: &[(f64, f64)], half_width: HalfWidth, provenance: impl Into<String>) -> Result<Self> {
        let nodes = centers
            .iter()
            .map(|&(a, c)| {
                let w = half_width.at(a, c)?;
                Ok(BandNode {
                    a,
                    center: c,
                    lo: c - w,
                    hi: c + w,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(quantity, nodes, provenance, half_width)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.nodes[0].a, self.nodes[self.nodes.len() - 1].a)
    }

    /// Linearly interpolated node at `a`.
    pub fn at(&self, a: f64) -> Result<BandNode> {
        let (lo, hi) = self.range();
        if !(a >= lo && a <= hi) {
            return Err(Error::Coverage(format!(
                "a = {a} nm outside the band grid [{lo}, {hi}] nm"
            )));
        }
        if self.nodes.len() == 1 {
            return Ok(self.nodes[0]);
        }
        let i = self.nodes.partition_point(|n| n.a <= a).clamp(1, self.nodes.len() - 1);
        let (n0, n1) = (self.nodes[i - 1], self.nodes[i]);
        let t = (a - n0.a) / (n1.a - n0.a);
        let lerp = |x: f64, y: f64| x + t * (y - x);
        Ok(BandNode {
            a,
            center: lerp(n0.center, n1.center),
            lo: lerp(n0.lo, n1.lo),
            hi: lerp(n0.hi, n1.hi),
        })
    }

    /// The same band shifted by `offset` in value.
    pub fn shifted(&self, offset: f64) -> Self {
        let mut b = self.clone();
        for n in &mut b.nodes {
            n.center += offset;
            n.lo += offset;
            n.hi += offset;
        }
        b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Excluded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompareMode {
    /// Cross rectangle must touch the band.
    #[default]
    Geometric,
    /// `|value − center| ≤ sqrt(dvalue² + halfwidth² + (slope·da)²)`.
    Quadrature,
}

/// Touch test of one cross against the band; returns the verdict and the
/// signed margin in the quantity's units.
pub fn verdict(point: &MeasurementPoint, band: &TheoryBand) -> Result<(Verdict, f64)> {
    verdict_with(point, band, CompareMode::Geometric)
}

pub fn verdict_with(point: &MeasurementPoint, band: &TheoryBand, mode: CompareMode) -> Result<(Verdict, f64)> {
    let center = band.at(point.a)?;
    let (grid_lo, grid_hi) = band.range();
    let a0 = (point.a - point.da).max(grid_lo);
    let a1 = (point.a + point.da).min(grid_hi);
    let margin = match mode {
        CompareMode::Geometric => {
            let top = point.value + point.dvalue;
            let bottom = point.value - point.dvalue;
            let gap = |n: &BandNode| (n.lo - top).max(bottom - n.hi);
            let mut xs = vec![a0, a1];
            xs.extend(band.nodes.iter().map(|n| n.a).filter(|&a| a > a0 && a < a1));
            xs.sort_by(f64::total_cmp);
            let mut best = f64::INFINITY;
            for w in xs.windows(2) {
                let (l, r) = (band.at(w[0])?, band.at(w[1])?);
                best = best.min(gap(&l)).min(gap(&r));
                // Crossing of the two linear gap branches inside the piece.
                let d0 = (l.lo - top) - (bottom - l.hi);
                let d1 = (r.lo - top) - (bottom - r.hi);
                if d0.signum() != d1.signum() && d0 != d1 {
                    let t = d0 / (d0 - d1);
                    best = best.min(gap(&band.at(w[0] + t * (w[1] - w[0]))?));
                }
            }
            if xs.len() == 1 || a0 == a1 {
                best = best.min(gap(&center));
            }
            best
        }
        CompareMode::Quadrature => {
            let slope = if a1 > a0 {
                (band.at(a1)?.center - band.at(a0)?.center) / (a1 - a0)
            } else {
                0.0
            };
            let hw = 0.5 * (center.hi - center.lo);
            let combined = (point.dvalue.powi(2) + hw * hw + (slope * point.da).powi(2)).sqrt();
            (point.value - center.center).abs() - combined
        }
    };
    Ok((if margin <= 0.0 { Verdict::Consistent } else { Verdict::Excluded }, margin))
}

/// Two-sided standard-normal quantile for a central probability `p`.
pub fn two_sided_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("confidence level must lie in (0, 1), got {p}")));
    }
    let normal = Normal::standard();
    Ok(normal.inverse_cdf(0.5 * (1.0 + p)))
}

/// Rescales both error arms from confidence `from` to `to`, assuming
/// normally distributed errors.
pub fn rescale_confidence(point: &MeasurementPoint, from: f64, to: f64) -> Result<MeasurementPoint> {
    let factor = two_sided_quantile(to)? / two_sided_quantile(from)?;
    Ok(MeasurementPoint {
        da: point.da * factor,
        dvalue: point.dvalue * factor,
        confidence: to,
        ..*point
    })
}

/// Theory band over `grid` from the physics pipeline.
pub fn build_band(pipeline: &Pipeline, quantity: Quantity, grid: &[f64], half_width: &HalfWidth) -> Result<TheoryBand> {
    let centers: Vec<(f64, f64)> = pipeline
        .sweep(quantity, grid)?
        .into_iter()
        .map(|p| (p.a, p.value))
        .collect();
    let provenance = format!(
        "plate={}; sphere={}; R={} nm; T={} K; roughness={}",
        pipeline.setup.plate.name,
        pipeline.setup.sphere.name,
        pipeline.setup.radius,
        pipeline.setup.grid.temperature(),
        if pipeline.roughness.is_some() { "averaged" } else { "flat" }
    );
    TheoryBand::from_centers(quantity, &centers, half_width.clone(), provenance)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub index: usize,
    pub a: f64,
    pub da: f64,
    pub value: f64,
    pub dvalue: f64,
    pub confidence: f64,
    pub center: f64,
    pub lo: f64,
    pub hi: f64,
    pub verdict: Verdict,
    pub margin: f64,
}

/// Maximal run of excluded points, in order of separation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExclusionWindow {
    pub a_start: f64,
    pub a_end: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub quantity: Quantity,
    pub provenance: String,
    pub mode: CompareMode,
    pub points: Vec<PointReport>,
    pub consistent: usize,
    pub excluded: usize,
    pub windows: Vec<ExclusionWindow>,
    /// Every point excluded.
    pub full_range_exclusion: bool,
    pub statement: String,
}

fn confidence_label(points: &[MeasurementPoint]) -> String {
    let first = points[0].confidence;
    if points.iter().all(|p| p.confidence == first) {
        format!("{}%", (first * 1000.0).round() / 10.0)
    } else {
        "stated (mixed)".into()
    }
}

/// Per-point verdicts and exclusion windows of a dataset against a band.
pub fn exclusion_summary(dataset: &[MeasurementPoint], band: &TheoryBand, mode: CompareMode) -> Result<ComparisonReport> {
    if dataset.is_empty() {
        return Err(Error::domain("dataset is empty"));
    }
    if let Some(p) = dataset.iter().find(|p| p.quantity != band.quantity) {
        return Err(Error::domain(format!(
            "dataset point at a = {} nm is a {:?} measurement but the band is {:?}",
            p.a, p.quantity, band.quantity
        )));
    }
    let points: Vec<PointReport> = dataset
        .par_iter()
        .enumerate()
        .map(|(index, p)| {
            p.validate()?;
            let (v, margin) = verdict_with(p, band, mode)?;
            let n = band.at(p.a)?;
            Ok(PointReport {
                index,
                a: p.a,
                da: p.da,
                value: p.value,
                dvalue: p.dvalue,
                confidence: p.confidence,
                center: n.center,
                lo: n.lo,
                hi: n.hi,
                verdict: v,
                margin,
            })
        })
        .collect::<Result<_>>()?;

    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| points[i].a.total_cmp(&points[j].a).then(i.cmp(&j)));
    let mut windows = Vec::new();
    let mut run: Option<ExclusionWindow> = None;
    for &i in &order {
        let p = &points[i];
        match (p.verdict, run.as_mut()) {
            (Verdict::Excluded, Some(w)) => {
                w.a_end = p.a;
                w.points += 1;
            }
            (Verdict::Excluded, None) => {
                run = Some(ExclusionWindow {
                    a_start: p.a,
                    a_end: p.a,
                    points: 1,
                })
            }
            (Verdict::Consistent, _) => windows.extend(run.take()),
        }
    }
    windows.extend(run);

    let excluded = points.iter().filter(|p| p.verdict == Verdict::Excluded).count();
    let consistent = points.len() - excluded;
    let full = excluded == points.len();
    let conf = confidence_label(dataset);
    let statement = if full {
        format!("theoretical predictions are excluded by the measurement data at the {conf} confidence level over the entire measurement range")
    } else if windows.is_empty() {
        format!("theoretical predictions are consistent with all {} measurement points at the {conf} confidence level", points.len())
    } else {
        let spans: Vec<String> = windows
            .iter()
            .map(|w| format!("[{:.9e}, {:.9e}] nm", w.a_start, w.a_end))
            .collect();
        format!(
            "theoretical predictions are excluded by the measurement data at the {conf} confidence level over {}",
            spans.join(", ")
        )
    };
    Ok(ComparisonReport {
        quantity: band.quantity,
        provenance: band.provenance.clone(),
        mode,
        points,
        consistent,
        excluded,
        windows,
        full_range_exclusion: full,
        statement,
    })
}

#[derive(Debug, Deserialize)]
struct DatasetRow {
    a_nm: f64,
    da_nm: f64,
    value: f64,
    dvalue: f64,
    quantity: String,
    confidence: f64,
}

pub fn quantity_from_tag(tag: &str) -> Result<Quantity> {
    match tag {
        "force_pn" => Ok(Quantity::Force),
        "gradient_un_per_m" => Ok(Quantity::Gradient),
        "pressure_mpa" => Ok(Quantity::Pressure),
        other => Err(Error::Parse(format!("unknown quantity `{other}`"))),
    }
}

pub fn quantity_tag(q: Quantity) -> &'static str {
    match q {
        Quantity::Force => "force_pn",
        Quantity::Gradient => "gradient_un_per_m",
        Quantity::Pressure => "pressure_mpa",
    }
}

pub const DATASET_HEADER: [&str; 6] = ["a_nm", "da_nm", "value", "dvalue", "quantity", "confidence"];

/// Reads a dataset CSV with header `a_nm,da_nm,value,dvalue,quantity,confidence`.
pub fn read_dataset<R: Read>(reader: R) -> Result<Vec<MeasurementPoint>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != DATASET_HEADER {
        return Err(Error::Parse(format!(
            "expected header `{}`, found `{}`",
            DATASET_HEADER.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut points = Vec::new();
    for (i, rec) in rdr.deserialize::<DatasetRow>().enumerate() {
        let r = rec.map_err(|e| Error::Parse(format!("row {}: {e}", i + 1)))?;
        let p = MeasurementPoint::new(r.a_nm, r.da_nm, r.value, r.dvalue, r.confidence, quantity_from_tag(&r.quantity)?)
            .map_err(|e| Error::Parse(format!("row {}: {e}", i + 1)))?;
        points.push(p);
    }
    if points.is_empty() {
        return Err(Error::Parse("dataset has no rows".into()));
    }
    if points.iter().any(|p| p.quantity != points[0].quantity) {
        return Err(Error::Parse("dataset mixes quantity kinds".into()));
    }
    Ok(points)
}

pub fn read_dataset_path(path: &Path) -> Result<Vec<MeasurementPoint>> {
    let file = std::fs::File::open(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    read_dataset(file).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}
