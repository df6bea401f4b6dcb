//! Command-line front end.
//!
//! ```text
//! casimir <epsilon|force|gradient|pressure|kk|fit|compare> --scenario <file> --out <dir>
//!         [--tolerance <rel>] [--l-max <n>] [--threads <n>]
//! ```
//!
//! Every output is computed in memory first and written only when the whole
//! run succeeded. Numbers are printed in scientific notation with nine
//! significant digits. Exit codes are listed in [`exit_code`].

mod scenario;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

pub use scenario::{
    BandSpec, EpsilonSpec, FitSpec, GeometrySpec, GridSpec, KkSpec, Overrides, Scenario, ScenarioQuantity, Spacing,
    Tolerances,
};

use crate::compare::{build_band, exclusion_summary, read_dataset_path, ComparisonReport, Verdict};
use crate::constants::Constants;
use crate::lifshitz::Quantity;
use crate::materials::{fit_oscillator, Family, FitFamily, FitOptions, KkTable, Material};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "casimir", version, about = "Lifshitz-theory Casimir forces for real materials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Matsubara tail tolerance; the radial quadrature uses a tenth of it.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Sum exactly l = 0..=L instead of truncating automatically.
    #[arg(long = "l-max", global = true)]
    pub l_max: Option<usize>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Tabulate ε(iξ) of a material over a ξ grid.
    Epsilon,
    /// Sphere-plate force over the separation grid.
    Force,
    /// Force gradient over the separation grid.
    Gradient,
    /// Effective parallel-plate pressure over the separation grid.
    Pressure,
    /// ε(iξ) from a tabulated Im ε(ω).
    Kk,
    /// Fit an oscillator family to ε(iξ) samples.
    Fit,
    /// Compare a theory band with a measurement dataset.
    Compare,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;
pub const EXIT_COVERAGE: i32 = 5;
pub const EXIT_IO: i32 = 6;

/// Process exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_) => EXIT_PARSE,
        Error::Domain(_) | Error::UnsupportedModel(_) | Error::NonIntegrableTail(_) | Error::Geometry(_) => EXIT_DOMAIN,
        Error::Numeric(_) | Error::Truncation(_) | Error::Precision(_) | Error::FitFailure { .. } => EXIT_NUMERIC,
        Error::Coverage(_) => EXIT_COVERAGE,
        Error::Io(_) => EXIT_IO,
    }
}

/// Nine significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.8e}")
}

/// Files produced by a run, as `(file name, contents)`.
pub type Outputs = Vec<(String, String)>;

/// Parses arguments, runs, prints diagnostics and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("casimir: {e}");
            exit_code(&e)
        }
    }
}

/// Runs a parsed command line and writes its outputs.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    let scenario_path = cli.scenario.as_deref().ok_or_else(|| Error::Parse("--scenario is required".into()))?;
    let out = cli.out.as_deref().ok_or_else(|| Error::Parse("--out is required".into()))?;
    let overrides = Overrides {
        tolerance: cli.tolerance,
        l_max: cli.l_max,
    };
    let constants = Constants::from_env()?;
    let scenario = Scenario::from_path(scenario_path)?;
    let compute = || execute(cli.command, &scenario, constants, &overrides);
    let outputs = match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Parse(format!("--threads: {e}")))?
            .install(compute)?,
        None => compute()?,
    };
    write_outputs(out, &outputs)
}

fn write_outputs(dir: &Path, outputs: &Outputs) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    outputs
        .iter()
        .map(|(name, body)| {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            Ok(path)
        })
        .collect()
}

/// Computes the outputs of `command` without touching the filesystem
/// beyond reading inputs.
pub fn execute(command: Command, scenario: &Scenario, constants: Constants, overrides: &Overrides) -> Result<Outputs> {
    match command {
        Command::Epsilon => epsilon(scenario),
        Command::Force => sweep(scenario, constants, overrides, Quantity::Force),
        Command::Gradient => sweep(scenario, constants, overrides, Quantity::Gradient),
        Command::Pressure => sweep(scenario, constants, overrides, Quantity::Pressure),
        Command::Kk => kk(scenario),
        Command::Fit => fit(scenario),
        Command::Compare => compare(scenario, constants, overrides),
    }
}

fn epsilon(scenario: &Scenario) -> Result<Outputs> {
    let spec = scenario
        .epsilon
        .as_ref()
        .ok_or_else(|| Error::Parse("scenario field `epsilon` is required for this subcommand".into()))?;
    let rel = spec
        .material
        .as_deref()
        .or(scenario.material_1.as_deref())
        .ok_or_else(|| Error::Parse("scenario needs `epsilon.material` or `material_1`".into()))?;
    let material = scenario.material(rel)?;
    let model = material
        .model()
        .ok_or_else(|| Error::UnsupportedModel("an ideal metal has no finite permittivity".into()))?;
    let mut csv = String::from("xi_ev,eps\n");
    for xi in spec.xi.points("epsilon.xi")? {
        writeln!(csv, "{},{}", sci(xi), sci(model.eps_imag(xi)?)).expect("write to string");
    }
    Ok(vec![("epsilon.csv".into(), csv)])
}

fn sweep(scenario: &Scenario, constants: Constants, overrides: &Overrides, quantity: Quantity) -> Result<Outputs> {
    let pipeline = scenario.pipeline(constants, overrides)?;
    let grid = scenario.separations()?;
    let points = pipeline.sweep(quantity, &grid)?;
    let name = crate::compare::quantity_tag(quantity);
    let mut csv = format!("a_nm,{name},truncation_l,error_estimate\n");
    for p in &points {
        let l = p.truncation_l.map(|l| l.to_string()).unwrap_or_default();
        let e = p.error_estimate.map(sci).unwrap_or_default();
        writeln!(csv, "{},{},{l},{e}", sci(p.a), sci(p.value)).expect("write to string");
    }
    let radius = pipeline.setup.radius;
    if let Some(a) = grid.iter().find(|&&a| a / radius > crate::lifshitz::Geometry::PFA_WARN_RATIO) {
        eprintln!("casimir: warning: a/R = {:.3e} at a = {a} nm; beyond-PFA corrections of that order are neglected", a / radius);
    }
    let file = match quantity {
        Quantity::Force => "force.csv",
        Quantity::Gradient => "gradient.csv",
        Quantity::Pressure => "pressure.csv",
    };
    Ok(vec![(file.into(), csv)])
}

fn kk(scenario: &Scenario) -> Result<Outputs> {
    let spec = scenario
        .kk
        .as_ref()
        .ok_or_else(|| Error::Parse("scenario field `kk` is required for this subcommand".into()))?;
    let table = KkTable::from_csv_path(&scenario.resolve(&spec.table), spec.tail_exponent)?;
    let mut csv = String::from("xi_ev,eps,tail,omitted_bound\n");
    for xi in spec.xi.points("kk.xi")? {
        let t = table.transform(xi)?;
        writeln!(csv, "{},{},{},{}", sci(xi), sci(t.value), sci(t.tail), sci(t.omitted_bound)).expect("write to string");
    }
    Ok(vec![("kk_epsilon.csv".into(), csv)])
}

#[derive(Serialize)]
struct FitSummary {
    family: FitFamily,
    parameters: Vec<f64>,
    residual_norm: f64,
    evaluations: usize,
    samples: usize,
}

fn read_samples(path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["xi_ev", "eps"] {
        return Err(Error::Parse(format!("{}: expected header `xi_ev,eps`", path.display())));
    }
    rdr.deserialize()
        .map(|r| r.map_err(|e| Error::Parse(format!("{}: {e}", path.display()))))
        .collect()
}

fn fit(scenario: &Scenario) -> Result<Outputs> {
    let spec = scenario
        .fit
        .as_ref()
        .ok_or_else(|| Error::Parse("scenario field `fit` is required for this subcommand".into()))?;
    let samples = read_samples(&scenario.resolve(&spec.samples))?;
    let mut options = FitOptions::default();
    if let Some(n) = spec.max_evaluations {
        options.max_evaluations = n;
    }
    let result = fit_oscillator(&samples, spec.family, &spec.initial, &options)?;
    let family = match spec.family {
        FitFamily::Lorentz => Family::Lorentz,
        FitFamily::ModifiedOscillator => Family::ModifiedOscillator,
        FitFamily::NinhamParsegian => Family::NinhamParsegian,
    };
    let name = spec.name.clone().unwrap_or_else(|| "fitted".into());
    let material = Material::dielectric(name, family, result.model.clone())?;
    let summary = FitSummary {
        family: spec.family,
        parameters: result.parameters.iter().map(|&p| round9(p)).collect(),
        residual_norm: round9(result.residual_norm),
        evaluations: result.evaluations,
        samples: samples.len(),
    };
    Ok(vec![
        ("fitted_material.json".into(), material.to_json() + "\n"),
        ("fit.json".into(), serde_json::to_string_pretty(&summary).expect("serialise") + "\n"),
    ])
}

fn round9(x: f64) -> f64 {
    sci(x).parse().expect("formatted float parses")
}

fn rounded_report(mut report: ComparisonReport) -> ComparisonReport {
    for p in &mut report.points {
        for v in [&mut p.a, &mut p.da, &mut p.value, &mut p.dvalue, &mut p.center, &mut p.lo, &mut p.hi, &mut p.margin] {
            *v = round9(*v);
        }
    }
    for w in &mut report.windows {
        w.a_start = round9(w.a_start);
        w.a_end = round9(w.a_end);
    }
    report
}

fn compare(scenario: &Scenario, constants: Constants, overrides: &Overrides) -> Result<Outputs> {
    let dataset_rel = scenario
        .dataset
        .as_deref()
        .ok_or_else(|| Error::Parse("scenario field `dataset` is required for this subcommand".into()))?;
    let dataset = read_dataset_path(&scenario.resolve(dataset_rel))?;
    let quantity = dataset[0].quantity;
    if let Some(q) = scenario.quantity {
        if q != ScenarioQuantity::EpsilonTable && scenario.quantity_or(quantity) != quantity {
            return Err(Error::Parse(format!(
                "scenario quantity {q:?} does not match the dataset's {quantity:?}"
            )));
        }
    }
    let half_width = scenario.half_width()?;
    let pipeline = scenario.pipeline(constants, overrides)?;
    let grid = scenario.separations()?;
    let band = build_band(&pipeline, quantity, &grid, &half_width)?;
    let report = rounded_report(exclusion_summary(&dataset, &band, scenario.compare_mode)?);

    let mut plot = String::from("a_nm,center,lo,hi,exp_value,exp_dvalue,verdict\n");
    for p in &report.points {
        let v = match p.verdict {
            Verdict::Consistent => "consistent",
            Verdict::Excluded => "excluded",
        };
        writeln!(plot, "{},{},{},{},{},{},{v}", sci(p.a), sci(p.center), sci(p.lo), sci(p.hi), sci(p.value), sci(p.dvalue))
            .expect("write to string");
    }
    Ok(vec![
        ("report.json".into(), serde_json::to_string_pretty(&report).expect("serialise") + "\n"),
        ("plot.csv".into(), plot),
    ])
}
