//! Roughness correction from the shipped synthetic height profiles.

use std::path::Path;

use casimir::lifshitz::{Quantity, SpherePlate};
use casimir::materials::Material;
use casimir::pipeline::Pipeline;
use casimir::roughness::RoughnessProfile;

fn main() -> casimir::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/profiles");
    let plate = RoughnessProfile::from_csv_path(&data.join("synthetic_plate.csv"))?;
    let sphere = RoughnessProfile::from_csv_path(&data.join("synthetic_sphere.csv"))?;
    println!(
        "plate: {} bins, zero level {:.3} nm; sphere: {} bins, zero level {:.3} nm",
        plate.bins().len(),
        plate.zero_level(),
        sphere.bins().len(),
        sphere.zero_level()
    );

    let setup = SpherePlate::symmetric(1e5, Material::gold_modified(), 300.0)?;
    let flat = Pipeline::flat(setup.clone());
    let rough = Pipeline::with_roughness(setup, plate, sphere);
    for a in [100.0, 150.0, 250.0, 400.0] {
        let f0 = flat.value(Quantity::Force, a)?;
        let f1 = rough.value(Quantity::Force, a)?;
        println!("a = {a:>5} nm: flat {f0:.5e} pN, rough {f1:.5e} pN, correction {:+.3}%", 100.0 * (f1 / f0 - 1.0));
    }
    Ok(())
}
