use std::f64::consts::PI;

use casimir::lifshitz::{Quantity, Settings, SpherePlate, Truncation};
use casimir::materials::{DrudeTerm, Family, Material, ResponseModel};
use casimir::Constants;

const C: Constants = Constants::CODATA;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn ideal(t: f64) -> SpherePlate {
    SpherePlate::symmetric(1e5, Material::ideal_metal(), t).unwrap()
}

fn gold_plasma() -> Material {
    let mut m = ResponseModel::gold_modified();
    m.drude = Some(DrudeTerm::plasma(9.1).unwrap());
    Material::dielectric("Au plasma", Family::PlasmaLorentz, m).unwrap()
}

#[test]
fn ideal_metal_gradient_and_pressure_limits() {
    let s = ideal(1.0);
    let a: f64 = 200.0;
    let grad = s.gradient(a).unwrap().value;
    let grad_exact = PI.powi(3) * C.hbar_c_ev_nm * 1e5 / (120.0 * a.powi(4)) * C.un_per_m_per_ev_per_nm2();
    assert!(rel(grad, grad_exact) < 1e-3, "{grad} vs {grad_exact}");
    let p = s.pressure(a).unwrap().value;
    let p_exact = -PI.powi(2) * C.hbar_c_ev_nm / (240.0 * a.powi(4)) * C.mpa_per_ev_per_nm3();
    assert!(rel(p, p_exact) < 1e-3, "{p} vs {p_exact}");
}

#[test]
fn ideal_metal_cubic_scaling() {
    let s = ideal(1.0);
    let ratio = s.force(150.0).unwrap().value / s.force(300.0).unwrap().value;
    assert!(rel(ratio, 8.0) < 1e-3, "{ratio}");
}

fn fd_check(setup: &SpherePlate, a: f64) -> f64 {
    let auto = setup.force(a).unwrap();
    let fixed = setup.clone().with_truncation(Truncation::Fixed { l_max: 2 * auto.truncation_l + 10 });
    let h = 1e-3 * a;
    let fd = (fixed.force(a + h).unwrap().value - fixed.force(a - h).unwrap().value) / (2.0 * h);
    // pN/nm → μN/m is a factor of 1000.
    let analytic = setup.gradient(a).unwrap().value;
    rel(fd * 1e3, analytic)
}

#[test]
fn gradient_matches_finite_difference() {
    let au = SpherePlate::symmetric(1e5, Material::gold_modified(), 300.0).unwrap();
    let ni = SpherePlate::symmetric(1e5, Material::nickel_modified(), 300.0).unwrap();
    for a in [150.0, 400.0, 750.0] {
        assert!(fd_check(&au, a) < 1e-4, "Au at {a}");
        assert!(fd_check(&ni, a) < 1e-4, "Ni at {a}");
    }
}

#[test]
fn gold_pressure_attractive_and_radius_independent() {
    let small = SpherePlate::symmetric(5e4, Material::gold_modified(), 300.0).unwrap();
    let large = SpherePlate::symmetric(1.5e5, Material::gold_modified(), 300.0).unwrap();
    for a in [150.0, 300.0, 450.0, 600.0, 750.0] {
        let p1 = small.pressure(a).unwrap().value;
        let p2 = large.pressure(a).unwrap().value;
        assert!(p1 < 0.0);
        assert!(rel(p1, p2) < 1e-12, "{p1} vs {p2}");
    }
}

#[test]
fn ideal_metal_bounds_real_materials() {
    let catalog = [Material::gold_modified(), Material::nickel_modified(), gold_plasma()];
    for a in [150.0, 500.0, 2000.0] {
        let bound = ideal(300.0).force(a).unwrap().value.abs();
        for m in &catalog {
            let f = SpherePlate::symmetric(1e5, m.clone(), 300.0).unwrap().force(a).unwrap().value;
            assert!(f < 0.0 && f.abs() <= bound, "{} at {a}: {f} vs {bound}", m.name);
        }
    }
}

#[test]
fn plasma_exceeds_drude() {
    let drude = SpherePlate::symmetric(1e5, Material::gold_modified(), 300.0).unwrap();
    let plasma = SpherePlate::symmetric(1e5, gold_plasma(), 300.0).unwrap();
    for a in [150.0, 1000.0, 5000.0] {
        let fd = drude.force(a).unwrap().value;
        let fp = plasma.force(a).unwrap().value;
        assert!(fp.abs() > fd.abs(), "a = {a}: {fp} vs {fd}");
    }
}

#[test]
fn doubling_l_max_is_stable() {
    let s = SpherePlate::symmetric(1e5, Material::gold_modified(), 300.0).unwrap();
    let auto = s.force(200.0).unwrap();
    let doubled = s
        .clone()
        .with_truncation(Truncation::Fixed { l_max: 2 * auto.truncation_l })
        .force(200.0)
        .unwrap();
    assert!(rel(auto.value, doubled.value) < 1e-6);
    assert!(auto.error_estimate < 1e-6 * auto.value.abs());
}

#[test]
fn low_temperature_matches_frequency_integral() {
    // k_B T Σ'_l → (1/2π)∫dξ as T → 0. The continuous integral is done with
    // the library's radial integral and an independent fine trapezoid in ξ.
    let s = SpherePlate::symmetric(1e5, Material::gold_modified(), 1.0).unwrap();
    let a: f64 = 200.0;
    let f1k = s.force(a).unwrap().value;
    let xi_max = 60.0 * C.hbar_c_ev_nm / (2.0 * a);
    let n = 20_000;
    let h = xi_max / n as f64;
    let mut sum = 0.0;
    for i in 1..=n {
        let xi = h * i as f64;
        let w = if i == n { 0.5 } else { 1.0 };
        sum += w * s.spectral_integral(Quantity::Force, a, xi).unwrap();
    }
    // ξ → 0 end: Drude TE vanishes, TM → ideal, giving ∫ y ln(1 − e^{−y}) = −ζ(3).
    sum += 0.5 * (-1.202_056_903_159_594);
    let f0 = 1e5 / (4.0 * a * a) * (h * sum) / (2.0 * PI) * C.pn_per_ev_per_nm();
    assert!(rel(f1k, f0) < 1e-3, "{f1k} vs {f0}");
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let s = SpherePlate::symmetric(1e5, Material::gold_modified(), 300.0).unwrap();
    let run = |n: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
            .install(|| s.force(180.0).unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one.value.to_bits(), four.value.to_bits());
    assert_eq!(one.truncation_l, four.truncation_l);
}

#[test]
fn halving_quadrature_tolerance_is_stable() {
    let s = SpherePlate::symmetric(1e5, Material::gold_modified(), 300.0).unwrap();
    let base = s.force(200.0).unwrap().value;
    let tight = s
        .clone()
        .with_settings(Settings { quad_rel_tol: 5e-9, ..Settings::default() })
        .force(200.0)
        .unwrap()
        .value;
    assert!(rel(base, tight) < 1e-6);
}
