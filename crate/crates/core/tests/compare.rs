use casimir::compare::{
    build_band, exclusion_summary, verdict, CompareMode, HalfWidth, MeasurementPoint, TheoryBand, Verdict,
};
use casimir::lifshitz::{Quantity, SpherePlate};
use casimir::materials::{DrudeTerm, Family, Material, ResponseModel};
use casimir::pipeline::Pipeline;
use proptest::prelude::*;

fn toy_band(width: f64) -> TheoryBand {
    let centers: Vec<(f64, f64)> = (0..=40)
        .map(|i| {
            let a = 100.0 + 10.0 * i as f64;
            (a, -1e7 / (a * a * a))
        })
        .collect();
    TheoryBand::from_centers(Quantity::Force, &centers, HalfWidth::Absolute(width), "toy").unwrap()
}

fn point(a: f64, da: f64, value: f64, dvalue: f64) -> MeasurementPoint {
    MeasurementPoint::new(a, da, value, dvalue, 0.95, Quantity::Force).unwrap()
}

proptest! {
    #[test]
    fn widening_error_bars_never_excludes(
        a in 150.0f64..450.0,
        da in 0.0f64..5.0,
        offset in -2.0f64..2.0,
        dvalue in 0.0f64..0.5,
        grow in 1.0f64..3.0,
    ) {
        let band = toy_band(0.05);
        let center = band.at(a).unwrap().center;
        let narrow = point(a, da, center + offset, dvalue);
        let wide = point(a, (da * grow).min(40.0), center + offset, dvalue * grow);
        if verdict(&narrow, &band).unwrap().0 == Verdict::Consistent {
            prop_assert_eq!(verdict(&wide, &band).unwrap().0, Verdict::Consistent);
        }
    }

    #[test]
    fn verdicts_are_translation_covariant(
        a in 150.0f64..450.0,
        da in 0.0f64..5.0,
        offset in -2.0f64..2.0,
        dvalue in 0.0f64..0.5,
        shift in -100.0f64..100.0,
    ) {
        let band = toy_band(0.05);
        let center = band.at(a).unwrap().center;
        let p = point(a, da, center + offset, dvalue);
        let moved = point(a, da, center + offset + shift, dvalue);
        let (v1, m1) = verdict(&p, &band).unwrap();
        let (v2, m2) = verdict(&moved, &band.shifted(shift)).unwrap();
        prop_assert!((m1 - m2).abs() < 1e-9 * (1.0 + m1.abs()));
        if (m1).abs() > 1e-9 {
            prop_assert_eq!(v1, v2);
        }
    }
}

fn gold_plasma() -> Material {
    let mut m = ResponseModel::gold_modified();
    m.drude = Some(DrudeTerm::plasma(9.1).unwrap());
    Material::dielectric("Au plasma", Family::PlasmaLorentz, m).unwrap()
}

#[test]
fn plasma_data_exclude_drude_band_above_one_micron() {
    let drude = Pipeline::flat(SpherePlate::symmetric(1e5, Material::gold_modified(), 300.0).unwrap());
    let plasma = Pipeline::flat(SpherePlate::symmetric(1e5, gold_plasma(), 300.0).unwrap());
    let grid: Vec<f64> = (0..=10).map(|i| 1000.0 + 200.0 * i as f64).collect();
    let band = build_band(&drude, Quantity::Force, &grid, &HalfWidth::Relative(0.005)).unwrap();
    let self_band = build_band(&plasma, Quantity::Force, &grid, &HalfWidth::Relative(0.005)).unwrap();
    let data: Vec<MeasurementPoint> = grid
        .iter()
        .map(|&a| {
            let f = plasma.value(Quantity::Force, a).unwrap();
            point(a, 1.0, f, 0.01 * f.abs())
        })
        .collect();
    let report = exclusion_summary(&data, &band, CompareMode::Geometric).unwrap();
    assert!(report.full_range_exclusion, "{}", report.statement);
    let own = exclusion_summary(&data, &self_band, CompareMode::Geometric).unwrap();
    assert_eq!(own.excluded, 0);
    assert!(own.windows.is_empty());
}

#[test]
fn points_outside_the_band_are_a_coverage_error() {
    let band = toy_band(0.05);
    let p = point(1000.0, 1.0, -1e-2, 1e-3);
    assert!(verdict(&p, &band).is_err());
}
