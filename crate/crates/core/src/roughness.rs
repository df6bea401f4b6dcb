//! Geometric averaging over measured roughness profiles.
//!
//! Each body carries a histogram of `(fraction, height)` bins. The averaged
//! quantity is
//!
//! ```text
//! f_R(a) = Σ_{i,k} v_i⁽¹⁾ v_k⁽²⁾ f(a + H₀⁽¹⁾ + H₀⁽²⁾ − h_i⁽¹⁾ − h_k⁽²⁾)
//! ```
//!
//! where `H₀ = Σ v_i h_i` is the zero level of each profile. The sum is exact
//! and runs over bin pairs in row-major order.

use std::io::Read;
use std::path::Path;

use serde::Deserialize;

use crate::quadrature::pairwise_sum;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RoughnessProfile {
    bins: Vec<(f64, f64)>,
    zero_level: f64,
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    fraction: f64,
    height_nm: f64,
}

impl RoughnessProfile {
    /// Tolerance on `Σ v_i = 1`.
    pub const NORMALIZATION_TOL: f64 = 1e-12;

    /// Bins of `(fraction, height_nm)`.
    pub fn new(bins: Vec<(f64, f64)>) -> Result<Self> {
        if bins.is_empty() {
            return Err(Error::domain("roughness profile has no bins"));
        }
        if let Some((i, (v, h))) = bins
            .iter()
            .enumerate()
            .find(|(_, (v, h))| !(*v > 0.0 && v.is_finite() && h.is_finite()))
        {
            return Err(Error::domain(format!(
                "bin {i}: fraction must be positive and height finite, got ({v}, {h})"
            )));
        }
        let total: f64 = bins.iter().map(|b| b.0).sum();
        if (total - 1.0).abs() > Self::NORMALIZATION_TOL {
            return Err(Error::domain(format!("fractions sum to {total}, not 1")));
        }
        let zero_level = zero_level(&bins);
        Ok(Self { bins, zero_level })
    }

    /// A perfectly flat surface.
    pub fn flat() -> Self {
        Self {
            bins: vec![(1.0, 0.0)],
            zero_level: 0.0,
        }
    }

    /// Histogram of raw heights with `bin_count` equal-width bins; empty bins
    /// are dropped and each bin sits at the mean of its samples.
    pub fn from_heights(heights: &[f64], bin_count: usize) -> Result<Self> {
        if heights.is_empty() || bin_count == 0 {
            return Err(Error::domain("need at least one height and one bin"));
        }
        if heights.iter().any(|h| !h.is_finite()) {
            return Err(Error::domain("height map contains non-finite values"));
        }
        let lo = heights.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = heights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let width = (hi - lo) / bin_count as f64;
        let mut sums = vec![(0usize, 0.0f64); bin_count];
        for &h in heights {
            let idx = if width > 0.0 {
                (((h - lo) / width) as usize).min(bin_count - 1)
            } else {
                0
            };
            sums[idx].0 += 1;
            sums[idx].1 += h;
        }
        let n = heights.len() as f64;
        let mut bins: Vec<(f64, f64)> = sums
            .into_iter()
            .filter(|(c, _)| *c > 0)
            .map(|(c, s)| (c as f64 / n, s / c as f64))
            .collect();
        // Absorb rounding so the fractions sum to one.
        let total: f64 = bins.iter().map(|b| b.0).sum();
        for b in &mut bins {
            b.0 /= total;
        }
        Self::new(bins)
    }

    /// Reads a CSV with header `fraction,height_nm`.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
        if headers.iter().collect::<Vec<_>>() != ["fraction", "height_nm"] {
            return Err(Error::Parse(format!(
                "expected header `fraction,height_nm`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut bins = Vec::new();
        for (i, rec) in rdr.deserialize::<CsvRow>().enumerate() {
            let rec = rec.map_err(|e| Error::Parse(format!("row {}: {e}", i + 1)))?;
            bins.push((rec.fraction, rec.height_nm));
        }
        Self::new(bins)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_csv_reader(file).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn bins(&self) -> &[(f64, f64)] {
        &self.bins
    }

    pub fn zero_level(&self) -> f64 {
        self.zero_level
    }

    /// Largest height above the zero level.
    pub fn max_excursion(&self) -> f64 {
        self.bins
            .iter()
            .map(|&(_, h)| h - self.zero_level)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `Σ v_i h_i`.
pub fn zero_level(bins: &[(f64, f64)]) -> f64 {
    bins.iter().map(|(v, h)| v * h).sum()
}

/// Averages `f` over all bin pairs of the two profiles at separation `a` nm.
///
/// Fails with a geometry error naming the first bin pair whose local gap is
/// not positive.
pub fn averaged_quantity<F>(f: F, a: f64, p1: &RoughnessProfile, p2: &RoughnessProfile) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let offset = a + p1.zero_level + p2.zero_level;
    let mut terms = Vec::with_capacity(p1.bins.len() * p2.bins.len());
    for (i, &(v1, h1)) in p1.bins.iter().enumerate() {
        for (k, &(v2, h2)) in p2.bins.iter().enumerate() {
            let gap = offset - h1 - h2;
            if !(gap > 0.0) {
                return Err(Error::Geometry(format!(
                    "surfaces touch: bin {i} of profile 1 (h = {h1} nm) and bin {k} of profile 2 \
                     (h = {h2} nm) leave a gap of {gap} nm at a = {a} nm"
                )));
            }
            terms.push(v1 * v2 * f(gap)?);
        }
    }
    Ok(pairwise_sum(terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_bin_profiles_are_transparent() {
        let p1 = RoughnessProfile::new(vec![(1.0, 7.5)]).unwrap();
        let p2 = RoughnessProfile::new(vec![(1.0, -3.0)]).unwrap();
        assert_eq!(p1.zero_level(), 7.5);
        let v = averaged_quantity(|a| Ok(a.powi(-3)), 200.0, &p1, &p2).unwrap();
        assert_eq!(v, 200f64.powi(-3));
    }

    #[test]
    fn symmetric_profile_averages_linear_function_exactly() {
        let p = RoughnessProfile::new(vec![(0.5, 10.0), (0.5, -10.0)]).unwrap();
        assert_eq!(p.zero_level(), 0.0);
        let v = averaged_quantity(Ok, 200.0, &p, &RoughnessProfile::flat()).unwrap();
        assert_eq!(v, 200.0);
    }

    #[test]
    fn convex_law_is_amplified() {
        let p = RoughnessProfile::new(vec![(0.5, 10.0), (0.5, -10.0)]).unwrap();
        let v = averaged_quantity(|a| Ok(a.powi(-3)), 200.0, &p, &RoughnessProfile::flat()).unwrap();
        let expected = 0.5 * (190f64.powi(-3) + 210f64.powi(-3));
        assert!((v - expected).abs() <= 1e-15 * expected);
        assert!(v > 200f64.powi(-3));
    }

    #[test]
    fn weighted_zero_level() {
        let p = RoughnessProfile::new(vec![(0.25, 0.0), (0.75, 4.0)]).unwrap();
        assert_eq!(p.zero_level(), 3.0);
    }

    #[test]
    fn contact_names_offending_pair() {
        let p = RoughnessProfile::new(vec![(0.5, 30.0), (0.5, -30.0)]).unwrap();
        let err = averaged_quantity(Ok, 50.0, &p, &p).unwrap_err();
        match err {
            Error::Geometry(msg) => assert!(msg.contains("bin 0") && msg.contains("bin 0 of profile 2")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invalid_profiles() {
        assert!(RoughnessProfile::new(vec![]).is_err());
        assert!(RoughnessProfile::new(vec![(0.5, 1.0)]).is_err());
        assert!(RoughnessProfile::new(vec![(1.2, 1.0), (-0.2, 0.0)]).is_err());
    }

    #[test]
    fn histogram_from_heights() {
        let heights: Vec<f64> = (0..1000).map(|i| (i % 10) as f64).collect();
        let p = RoughnessProfile::from_heights(&heights, 64).unwrap();
        assert!((p.zero_level() - 4.5).abs() < 1e-12);
        assert_eq!(p.bins().len(), 10);
    }

    #[test]
    fn csv_profile() {
        let p = RoughnessProfile::from_csv_reader("fraction,height_nm\n0.25,0\n0.75,4\n".as_bytes()).unwrap();
        assert_eq!(p.zero_level(), 3.0);
        assert!(RoughnessProfile::from_csv_reader("v,h\n1,0\n".as_bytes()).is_err());
    }
}
