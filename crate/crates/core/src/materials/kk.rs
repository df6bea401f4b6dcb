//! ε(iξ) from tabulated `Im ε(ω)` through the Kramers-Kronig relation
//!
//! `ε(iξ) = 1 + (2/π) ∫₀^∞ ω Im ε(ω) / (ω² + ξ²) dω`.
//!
//! Inside the table the integral is a trapezoid rule in `ln ω`, with every
//! table interval split into [`KkTable::REFINE`] log-spaced pieces whose
//! `Im ε` is linearly interpolated. Above the last sample `Im ε` continues as
//! a power law `ω^(−p)`, integrated after the change of variable
//! `u = ω_max/ω`. Below the first sample the contribution is taken as zero;
//! [`KkTransform::omitted_bound`] estimates what that leaves out.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::quadrature::{integrate, Tolerance};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KkRow {
    pub omega: f64,
    pub im_eps: f64,
}

impl KkRow {
    pub fn new(omega: f64, im_eps: f64) -> Self {
        Self { omega, im_eps }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KkTable {
    pub rows: Vec<KkRow>,
    pub tail_exponent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KkTransform {
    /// ε(iξ).
    pub value: f64,
    /// Part of `value − 1` coming from the power-law tail.
    pub tail: f64,
    /// Upper estimate of the omitted `ω < ω_min` contribution, assuming
    /// `Im ε` does not exceed its first tabulated value there.
    pub omitted_bound: f64,
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    omega_ev: f64,
    im_eps: f64,
}

impl KkTable {
    pub const REFINE: usize = 4;

    pub fn new(rows: Vec<KkRow>, tail_exponent: f64) -> Result<Self> {
        let table = Self {
            rows,
            tail_exponent,
        };
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows.is_empty() {
            return Err(Error::domain("Kramers-Kronig table is empty"));
        }
        if !(self.tail_exponent > 1.0) {
            return Err(Error::NonIntegrableTail(self.tail_exponent));
        }
        for (i, r) in self.rows.iter().enumerate() {
            if !(r.omega > 0.0 && r.omega.is_finite()) {
                return Err(Error::domain(format!("row {i}: omega must be positive, got {}", r.omega)));
            }
            if !(r.im_eps >= 0.0 && r.im_eps.is_finite()) {
                return Err(Error::domain(format!("row {i}: im_eps must be >= 0, got {}", r.im_eps)));
            }
        }
        if let Some(i) = self.rows.windows(2).position(|w| w[1].omega <= w[0].omega) {
            return Err(Error::domain(format!(
                "omega not strictly increasing at row {}",
                i + 1
            )));
        }
        Ok(())
    }

    /// Reads a CSV with header `omega_ev,im_eps`.
    pub fn from_csv_reader<R: Read>(reader: R, tail_exponent: f64) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
        if headers.iter().collect::<Vec<_>>() != ["omega_ev", "im_eps"] {
            return Err(Error::Parse(format!(
                "expected header `omega_ev,im_eps`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut rows = Vec::new();
        for (i, rec) in rdr.deserialize::<CsvRow>().enumerate() {
            let rec = rec.map_err(|e| Error::Parse(format!("row {}: {e}", i + 1)))?;
            rows.push(KkRow::new(rec.omega_ev, rec.im_eps));
        }
        Self::new(rows, tail_exponent)
    }

    pub fn from_csv_path(path: &Path, tail_exponent: f64) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_csv_reader(file, tail_exponent)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    /// Samples `im_eps(ω)` on `count` log-spaced points over `[lo, hi]`.
    pub fn sample<F: Fn(f64) -> f64>(im_eps: F, lo: f64, hi: f64, count: usize, tail_exponent: f64) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && count >= 2) {
            return Err(Error::domain("sampling needs 0 < lo < hi and at least two points"));
        }
        let step = (hi / lo).ln() / (count - 1) as f64;
        let rows = (0..count)
            .map(|i| {
                let w = if i + 1 == count { hi } else { lo * (step * i as f64).exp() };
                KkRow::new(w, im_eps(w))
            })
            .collect();
        Self::new(rows, tail_exponent)
    }

    pub fn transform(&self, xi: f64) -> Result<KkTransform> {
        if !(xi > 0.0 && xi.is_finite()) {
            return Err(Error::domain(format!("imaginary frequency must be positive, got {xi}")));
        }
        self.transform_unchecked(xi)
    }

    /// Also accepts ξ = 0, the static limit.
    pub(crate) fn transform_unchecked(&self, xi: f64) -> Result<KkTransform> {
        self.validate()?;
        let xi2 = xi * xi;
        // ∫ ω Im ε/(ω²+ξ²) dω = ∫ ω² Im ε/(ω²+ξ²) d(ln ω)
        let weight = |w: f64, im: f64| w * w * im / (w * w + xi2);
        let mut body = 0.0;
        for pair in self.rows.windows(2) {
            let (r0, r1) = (pair[0], pair[1]);
            let h = (r1.omega / r0.omega).ln() / Self::REFINE as f64;
            let mut prev = weight(r0.omega, r0.im_eps);
            for k in 1..=Self::REFINE {
                let w = if k == Self::REFINE {
                    r1.omega
                } else {
                    r0.omega * (h * k as f64).exp()
                };
                let t = (w - r0.omega) / (r1.omega - r0.omega);
                let im = r0.im_eps + t * (r1.im_eps - r0.im_eps);
                let cur = weight(w, im);
                body += 0.5 * h * (prev + cur);
                prev = cur;
            }
        }

        let last = *self.rows.last().expect("validated non-empty");
        let tail = if last.im_eps == 0.0 {
            0.0
        } else {
            let p = self.tail_exponent;
            let s = xi / last.omega;
            let r = integrate(
                |u: f64| u.powf(p - 1.0) / (1.0 + (s * u) * (s * u)),
                0.0,
                1.0,
                Tolerance::relative(1e-12),
                200,
            )?;
            last.im_eps * r.value
        };

        let first = self.rows[0];
        let omitted_bound = if xi > 0.0 {
            first.im_eps / std::f64::consts::PI * (1.0 + (first.omega / xi).powi(2)).ln()
        } else {
            f64::INFINITY
        };

        let scale = 2.0 / std::f64::consts::PI;
        Ok(KkTransform {
            value: 1.0 + scale * (body + tail),
            tail: scale * tail,
            omitted_bound: if first.im_eps == 0.0 { 0.0 } else { omitted_bound },
        })
    }
}

/// ε(iξ) of a tabulated `Im ε(ω)`.
pub fn kk_transform(table: &KkTable, xi: f64) -> Result<f64> {
    Ok(table.transform(xi)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_absorption_gives_vacuum() {
        let t = KkTable::new(vec![KkRow::new(0.1, 0.0), KkRow::new(1.0, 0.0), KkRow::new(10.0, 0.0)], 3.0)
            .unwrap();
        assert_eq!(kk_transform(&t, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn table_errors() {
        assert!(matches!(KkTable::new(vec![], 3.0), Err(Error::Domain(_))));
        assert!(matches!(
            KkTable::new(vec![KkRow::new(1.0, 0.1)], 1.0),
            Err(Error::NonIntegrableTail(_))
        ));
        assert!(KkTable::new(vec![KkRow::new(2.0, 0.1), KkRow::new(1.0, 0.1)], 3.0).is_err());
        assert!(KkTable::new(vec![KkRow::new(1.0, -0.1)], 3.0).is_err());
        let t = KkTable::new(vec![KkRow::new(1.0, 0.1)], 3.0).unwrap();
        assert!(matches!(kk_transform(&t, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn pure_power_law_tail() {
        // Im ε = ω^-3 for ω ≥ 1 as a single-row table: the whole integral is the tail.
        // (2/π)∫₁^∞ ω^-2/(ω²+ξ²) dω at ξ → 0 equals (2/π)/3.
        let t = KkTable::new(vec![KkRow::new(1.0, 1.0)], 3.0).unwrap();
        let v = kk_transform(&t, 1e-9).unwrap();
        assert!((v - 1.0 - 2.0 / (3.0 * std::f64::consts::PI)).abs() < 1e-10);
    }

    #[test]
    fn csv_parsing() {
        let text = "omega_ev,im_eps\n0.5,0.1\n1.0,0.2\n2.0,0.05\n";
        let t = KkTable::from_csv_reader(text.as_bytes(), 3.0).unwrap();
        assert_eq!(t.rows.len(), 3);
        let bad = "omega,im\n1,2\n";
        assert!(matches!(KkTable::from_csv_reader(bad.as_bytes(), 3.0), Err(Error::Parse(_))));
    }
}
