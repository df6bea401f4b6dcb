//! Compares a synthetic dataset against theory bands. The data follow the
//! plasma prescription with 1% error bars; the Drude band is excluded over
//! the whole range and the plasma band is not.

use casimir::compare::{build_band, exclusion_summary, CompareMode, HalfWidth, MeasurementPoint};
use casimir::lifshitz::{Quantity, SpherePlate};
use casimir::materials::{DrudeTerm, Family, Material, ResponseModel};
use casimir::pipeline::Pipeline;

fn main() -> casimir::Result<()> {
    let mut plasma_model = ResponseModel::gold_modified();
    plasma_model.drude = Some(DrudeTerm::plasma(9.1)?);
    let plasma_au = Material::dielectric("Au plasma", Family::PlasmaLorentz, plasma_model)?;
    let drude = Pipeline::flat(SpherePlate::symmetric(1e5, Material::gold_modified(), 300.0)?);
    let plasma = Pipeline::flat(SpherePlate::symmetric(1e5, plasma_au, 300.0)?);

    let grid: Vec<f64> = (0..=10).map(|i| 1000.0 + 200.0 * i as f64).collect();
    let mut data = Vec::new();
    for &a in &grid {
        let f = plasma.value(Quantity::Force, a)?;
        data.push(MeasurementPoint::new(a, 1.0, f, 0.01 * f.abs(), 0.95, Quantity::Force)?);
    }

    let half_width = HalfWidth::Relative(0.005);
    for (name, pipeline) in [("Drude", &drude), ("plasma", &plasma)] {
        let band = build_band(pipeline, Quantity::Force, &grid, &half_width)?;
        let report = exclusion_summary(&data, &band, CompareMode::Geometric)?;
        println!("{name}: {} excluded, {} consistent", report.excluded, report.consistent);
        println!("  {}", report.statement);
    }
    Ok(())
}
