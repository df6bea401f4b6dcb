//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line and
//! the process exits non-zero if any of them fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use casimir::compare::{build_band, exclusion_summary, CompareMode, HalfWidth, MeasurementPoint};
use casimir::lifshitz::{Quantity, Settings, SpherePlate, Truncation};
use casimir::materials::{asymptote_exponent, kk_transform, DrudeTerm, Family, KkTable, Material, ResponseModel};
use casimir::pipeline::Pipeline;
use casimir::roughness::{averaged_quantity, RoughnessProfile};
use casimir::Constants;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const C: Constants = Constants::CODATA;

type Check = fn() -> Result<String, String>;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn ensure(ok: bool, detail: String) -> Result<String, String> {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn gold_plasma() -> Material {
    let mut m = ResponseModel::gold_modified();
    m.drude = Some(DrudeTerm::plasma(9.1).unwrap());
    Material::dielectric("Au plasma", Family::PlasmaLorentz, m).unwrap()
}

fn ideal_metal_limit() -> Result<String, String> {
    let start = Instant::now();
    let (r, a) = (1e5, 200.0f64);
    let s = SpherePlate::symmetric(r, Material::ideal_metal(), 1.0).map_err(|e| e.to_string())?;
    let f = s.force(a).map_err(|e| e.to_string())?.value;
    let p = s.pressure(a).map_err(|e| e.to_string())?.value;
    let elapsed = start.elapsed();
    let f_exact = -PI.powi(3) * C.hbar_c_ev_nm * r / (360.0 * a.powi(3)) * C.pn_per_ev_per_nm();
    let p_exact = -PI.powi(2) * C.hbar_c_ev_nm / (240.0 * a.powi(4)) * C.mpa_per_ev_per_nm3();
    let (df, dp) = (rel(f, f_exact), rel(p, p_exact));
    ensure(
        df < 1e-3 && dp < 1e-3 && elapsed < Duration::from_secs(10),
        format!("force dev {df:.2e}, pressure dev {dp:.2e}, {:.2} s", elapsed.as_secs_f64()),
    )
}

fn high_frequency_law() -> Result<String, String> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/materials/au_drude_lorentz.json");
    let material = Material::from_json_path(&path).map_err(|e| e.to_string())?;
    let model = material.model().ok_or("not a dielectric")?;
    let drude = model.drude.ok_or("no Drude term")?;
    let expected = drude.omega_p.powi(2) + model.lorentz.iter().map(|t| t.g_j * t.omega_j.powi(2)).sum::<f64>();
    let xi = 1e5;
    let got = xi * xi * (model.eps_imag(xi).map_err(|e| e.to_string())? - 1.0);
    let d = rel(got, expected);
    ensure(d < 1e-3, format!("ξ²(ε−1) = {got:.6}, expected {expected:.6}, dev {d:.2e}"))
}

fn modified_oscillator_exponents() -> Result<String, String> {
    let au = asymptote_exponent(&ResponseModel::gold_modified().without_drude(), 1e3, 1e5).map_err(|e| e.to_string())?;
    let ni = asymptote_exponent(&ResponseModel::nickel_modified().without_drude(), 1e3, 1e5).map_err(|e| e.to_string())?;
    ensure(
        (au - 1.42).abs() <= 0.01 && (ni - 1.35).abs() <= 0.01,
        format!("Au exponent {au:.4}, Ni exponent {ni:.4}"),
    )
}

fn kk_round_trip() -> Result<String, String> {
    let start = Instant::now();
    let (g, w0, gamma) = (1.0, 5.0, 0.5);
    let absorption = |w: f64| {
        let d = 1.0 - (w / w0).powi(2);
        let e = gamma * w / (w0 * w0);
        g * e / (d * d + e * e)
    };
    let table = KkTable::sample(absorption, 0.01, 1e4, 4000, 3.0).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for i in 0..=60 {
        let xi = 0.1 * 1000f64.powf(i as f64 / 60.0);
        let exact = 1.0 + g / (1.0 + (xi / w0).powi(2) + gamma * xi / (w0 * w0));
        worst = worst.max(rel(kk_transform(&table, xi).map_err(|e| e.to_string())?, exact));
    }
    let elapsed = start.elapsed();
    ensure(
        worst < 5e-3 && elapsed < Duration::from_secs(5),
        format!("worst dev {worst:.2e} over ξ ∈ [0.1, 100] eV, {:.2} s", elapsed.as_secs_f64()),
    )
}

fn gradient_consistency() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for material in [Material::gold_modified(), Material::nickel_modified()] {
        let setup = SpherePlate::symmetric(1e5, material, 300.0).map_err(|e| e.to_string())?;
        for i in 0..20 {
            let a = 150.0 + 600.0 * i as f64 / 19.0;
            let auto = setup.force(a).map_err(|e| e.to_string())?;
            // A fixed truncation keeps both difference points on the same sum.
            let fixed = setup.clone().with_truncation(Truncation::Fixed { l_max: 2 * auto.truncation_l + 10 });
            let h = 1e-3 * a;
            let up = fixed.force(a + h).map_err(|e| e.to_string())?.value;
            let down = fixed.force(a - h).map_err(|e| e.to_string())?.value;
            let fd = (up - down) / (2.0 * h) * 1e3;
            let analytic = setup.gradient(a).map_err(|e| e.to_string())?.value;
            worst = worst.max(rel(fd, analytic));
        }
    }
    ensure(worst < 1e-4, format!("worst dev {worst:.2e} over 20 separations, Au and Ni"))
}

fn drude_plasma_ordering() -> Result<String, String> {
    let drude = SpherePlate::symmetric(1e5, Material::gold_modified(), 300.0).map_err(|e| e.to_string())?;
    let plasma = SpherePlate::symmetric(1e5, gold_plasma(), 300.0).map_err(|e| e.to_string())?;
    let mut min_ratio = f64::INFINITY;
    for i in 0..40 {
        let a = 150.0 * (5000.0f64 / 150.0).powf(i as f64 / 39.0);
        let fd = drude.force(a).map_err(|e| e.to_string())?.value;
        let fp = plasma.force(a).map_err(|e| e.to_string())?.value;
        min_ratio = min_ratio.min(fp.abs() / fd.abs());
    }
    ensure(min_ratio > 1.0, format!("min |F_plasma|/|F_Drude| = {min_ratio:.6} over 40 points"))
}

fn roughness_properties() -> Result<String, String> {
    let profile = prop::collection::vec((0.01f64..1.0, -8.0f64..8.0), 1..20).prop_map(|raw| {
        let total: f64 = raw.iter().map(|b| b.0).sum();
        RoughnessProfile::new(raw.into_iter().map(|(v, h)| (v / total, h)).collect()).unwrap()
    });
    let mut runner = TestRunner::new(Config { cases: 200, failure_persistence: None, ..Config::default() });
    runner
        .run(&(profile.clone(), profile, 50.0f64..500.0), |(p1, p2, a)| {
            let constant = averaged_quantity(|_| Ok(3.5), a, &p1, &p2).unwrap();
            prop_assert!((constant - 3.5).abs() <= 8.0 * f64::EPSILON * 3.5);
            let rough = averaged_quantity(|x| Ok(x.powi(-3)), a, &p1, &p2).unwrap();
            prop_assert!(rough >= a.powi(-3));
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("normalization and convexity held in 200 cases".into())
}

fn exclusion_pipeline() -> Result<String, String> {
    let run = || -> Result<(String, String), String> {
        let drude = Pipeline::flat(SpherePlate::symmetric(1e5, Material::gold_modified(), 300.0).unwrap());
        let plasma = Pipeline::flat(SpherePlate::symmetric(1e5, gold_plasma(), 300.0).unwrap());
        let grid: Vec<f64> = (0..=20).map(|i| 1000.0 + 200.0 * i as f64).collect();
        let data: Vec<MeasurementPoint> = grid
            .iter()
            .map(|&a| {
                let f = plasma.value(Quantity::Force, a).unwrap();
                MeasurementPoint::new(a, 1.0, f, 0.01 * f.abs(), 0.95, Quantity::Force).unwrap()
            })
            .collect();
        let hw = HalfWidth::Relative(0.005);
        let band = build_band(&drude, Quantity::Force, &grid, &hw).map_err(|e| e.to_string())?;
        let own = build_band(&plasma, Quantity::Force, &grid, &hw).map_err(|e| e.to_string())?;
        let cross = exclusion_summary(&data, &band, CompareMode::Geometric).map_err(|e| e.to_string())?;
        let selfc = exclusion_summary(&data, &own, CompareMode::Geometric).map_err(|e| e.to_string())?;
        Ok((serde_json::to_string(&cross).unwrap(), serde_json::to_string(&selfc).unwrap()))
    };
    let in_pool = |n: usize| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap().install(run);
    let first = in_pool(1)?;
    let again = in_pool(1)?;
    let wide = in_pool(4)?;
    let cross: serde_json::Value = serde_json::from_str(&first.0).unwrap();
    let selfc: serde_json::Value = serde_json::from_str(&first.1).unwrap();
    let full = cross["full_range_exclusion"] == true;
    let none = selfc["excluded"] == 0;
    let deterministic = first == again && first == wide;
    ensure(
        full && none && deterministic,
        format!(
            "full-range exclusion {full}, self-comparison exclusions {}, deterministic {deterministic}",
            selfc["excluded"]
        ),
    )
}

fn truncation_stability() -> Result<String, String> {
    let setup = SpherePlate::symmetric(1e5, Material::gold_modified(), 300.0).map_err(|e| e.to_string())?;
    let base = setup.force(200.0).map_err(|e| e.to_string())?;
    let tight = setup
        .clone()
        .with_truncation(Truncation::Fixed { l_max: 2 * base.truncation_l })
        .with_settings(Settings { quad_rel_tol: 0.5 * Settings::default().quad_rel_tol, ..Settings::default() })
        .force(200.0)
        .map_err(|e| e.to_string())?;
    let d = rel(base.value, tight.value);
    ensure(d < 1e-6, format!("l_max {} → {}, dev {d:.2e}", base.truncation_l, 2 * base.truncation_l))
}

fn main() {
    let checks: [(&str, Check); 9] = [
        ("ideal-metal limit", ideal_metal_limit),
        ("high-frequency law", high_frequency_law),
        ("modified-oscillator exponents", modified_oscillator_exponents),
        ("KK round trip", kk_round_trip),
        ("gradient consistency", gradient_consistency),
        ("Drude/plasma ordering", drude_plasma_ordering),
        ("roughness properties", roughness_properties),
        ("exclusion pipeline", exclusion_pipeline),
        ("truncation stability", truncation_stability),
    ];
    let mut failures = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} [{tag}] {name}: {detail}", i + 1);
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
