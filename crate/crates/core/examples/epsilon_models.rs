//! Permittivity along the imaginary axis for the shipped response models,
//! plus the high-frequency exponent that distinguishes them.

use casimir::materials::{asymptote_exponent, Material, ResponseModel};

fn main() -> casimir::Result<()> {
    let gold = Material::gold_modified();
    let nickel = Material::nickel_modified();
    let models = [(&gold.name, gold.model().unwrap()), (&nickel.name, nickel.model().unwrap())];

    println!("{:>10} {:>16} {:>16}", "xi (eV)", models[0].0, models[1].0);
    for i in 0..=8 {
        let xi = 0.1 * 10f64.powf(i as f64 / 2.0);
        println!("{xi:>10.3} {:>16.6e} {:>16.6e}", models[0].1.eps_imag(xi)?, models[1].1.eps_imag(xi)?);
    }

    // A sum of Lorentz oscillators falls as ξ⁻²; the modified oscillator
    // falls more slowly, which is easy to read off as a log-log slope.
    for (name, model) in [("Au core", ResponseModel::gold_modified()), ("Ni core", ResponseModel::nickel_modified())] {
        let p = asymptote_exponent(&model.without_drude(), 1e3, 1e5)?;
        println!("{name}: ε − 1 ~ ξ^-{p:.3}");
    }
    Ok(())
}
