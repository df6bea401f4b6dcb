//! Sphere–plate force, gradient and pressure for gold at room temperature,
//! with the Drude and plasma low-frequency treatments side by side.

use casimir::lifshitz::{Quantity, SpherePlate};
use casimir::materials::{DrudeTerm, Family, Material, ResponseModel};
use casimir::pipeline::Pipeline;

fn main() -> casimir::Result<()> {
    let mut plasma_model = ResponseModel::gold_modified();
    plasma_model.drude = Some(DrudeTerm::plasma(9.1)?);
    let plasma = Material::dielectric("Au plasma", Family::PlasmaLorentz, plasma_model)?;

    let drude = Pipeline::flat(SpherePlate::symmetric(1.5e5, Material::gold_modified(), 300.0)?);
    let plasma = Pipeline::flat(SpherePlate::symmetric(1.5e5, plasma, 300.0)?);

    let grid: Vec<f64> = (0..8).map(|i| 150.0 * 1.6f64.powi(i)).collect();
    let f_drude = drude.sweep(Quantity::Force, &grid)?;
    let f_plasma = plasma.sweep(Quantity::Force, &grid)?;
    let gradient = drude.sweep(Quantity::Gradient, &grid)?;
    let pressure = drude.sweep(Quantity::Pressure, &grid)?;

    println!("{:>9} {:>13} {:>13} {:>14} {:>13} {:>5}", "a (nm)", "F Drude pN", "F plasma pN", "dF/da uN/m", "P mPa", "l");
    for i in 0..grid.len() {
        println!(
            "{:>9.1} {:>13.5e} {:>13.5e} {:>14.5e} {:>13.5e} {:>5}",
            grid[i],
            f_drude[i].value,
            f_plasma[i].value,
            gradient[i].value,
            pressure[i].value,
            f_drude[i].truncation_l.unwrap_or(0)
        );
    }
    Ok(())
}
