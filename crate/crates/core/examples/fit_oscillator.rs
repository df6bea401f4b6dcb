//! Fits oscillator families to ε(iξ) samples. The samples come from a
//! modified oscillator, so that family recovers them and a Lorentz term
//! cannot.

use casimir::materials::{fit_oscillator, FitFamily, FitOptions, ModifiedOscillatorTerm, ResponseModel};

fn main() -> casimir::Result<()> {
    let truth = ResponseModel::modified(None, ModifiedOscillatorTerm::new(6.5, 5.9, 1.42)?)?;
    let samples: Vec<(f64, f64)> = (0..60)
        .map(|i| {
            let xi = 0.1 * 10f64.powf(4.0 * i as f64 / 59.0);
            (xi, truth.eps_imag(xi).unwrap())
        })
        .collect();

    let options = FitOptions::default();
    for (family, initial) in [
        (FitFamily::ModifiedOscillator, vec![4.0, 4.0, 1.2]),
        (FitFamily::Lorentz, vec![4.0, 4.0, 0.5]),
    ] {
        let fit = fit_oscillator(&samples, family, &initial, &options)?;
        println!(
            "{family:?}: parameters {:?}, residual {:.3e}, {} evaluations",
            fit.parameters, fit.residual_norm, fit.evaluations
        );
    }
    Ok(())
}
