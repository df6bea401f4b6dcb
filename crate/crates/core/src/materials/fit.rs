//! Least-squares fitting of oscillator models to ε(iξ) samples.
//!
//! The objective is `Σ [ln(ε_model(iξ) − 1) − ln(ε_sample − 1)]²`, minimised
//! by Nelder-Mead simplex descent restarted from the incumbent until a
//! restart no longer improves it. Strengths, frequencies and relaxation
//! parameters are optimised as logarithms and the modified-oscillator
//! exponent through a logistic map onto (0, 2), so every trial point is a
//! valid model.

use serde::{Deserialize, Serialize};

use super::{LorentzTerm, ModifiedOscillatorTerm, NinhamParsegianTerm, ResponseModel};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitFamily {
    /// Parameters `(g_j, omega_j, gamma_j)` per oscillator.
    Lorentz,
    /// Parameters `(g_uv, omega_uv, alpha)`.
    ModifiedOscillator,
    /// Parameters `(g_uv, omega_uv, g_ir, omega_ir)`.
    NinhamParsegian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Cap on objective evaluations across all restarts.
    pub max_evaluations: usize,
    pub max_restarts: usize,
    /// Simplex convergence threshold on the spread of objective values.
    pub f_tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_evaluations: 200_000,
            max_restarts: 20,
            f_tolerance: 1e-24,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: ResponseModel,
    /// Physical parameters in the family's order.
    pub parameters: Vec<f64>,
    /// Euclidean norm of the log residuals.
    pub residual_norm: f64,
    pub evaluations: usize,
}

impl FitFamily {
    fn check_len(&self, n: usize) -> Result<()> {
        let ok = match self {
            FitFamily::Lorentz => n > 0 && n.is_multiple_of(3),
            FitFamily::ModifiedOscillator => n == 3,
            FitFamily::NinhamParsegian => n == 4,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{self:?} family cannot take {n} initial parameters"
            )))
        }
    }

    fn is_exponent(&self, index: usize) -> bool {
        matches!(self, FitFamily::ModifiedOscillator) && index == 2
    }

    fn encode(&self, params: &[f64]) -> Result<Vec<f64>> {
        params
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                if self.is_exponent(i) {
                    if !(p > 0.0 && p < 2.0) {
                        return Err(Error::domain(format!("initial alpha {p} outside (0, 2)")));
                    }
                    let s = p / 2.0;
                    Ok((s / (1.0 - s)).ln())
                } else if p > 0.0 && p.is_finite() {
                    Ok(p.ln())
                } else {
                    Err(Error::domain(format!("initial parameter {i} must be positive, got {p}")))
                }
            })
            .collect()
    }

    fn decode(&self, z: &[f64]) -> Vec<f64> {
        z.iter()
            .enumerate()
            .map(|(i, &v)| {
                if self.is_exponent(i) {
                    2.0 / (1.0 + (-v).exp())
                } else {
                    v.exp()
                }
            })
            .collect()
    }

    /// Builds the model for physical parameters `p`.
    pub fn model(&self, p: &[f64]) -> Result<ResponseModel> {
        self.check_len(p.len())?;
        match self {
            FitFamily::Lorentz => ResponseModel::lorentz(
                p.chunks(3)
                    .map(|c| LorentzTerm::new(c[0], c[1], c[2]))
                    .collect::<Result<_>>()?,
            ),
            FitFamily::ModifiedOscillator => {
                ResponseModel::modified(None, ModifiedOscillatorTerm::new(p[0], p[1], p[2])?)
            }
            FitFamily::NinhamParsegian => {
                ResponseModel::ninham_parsegian(NinhamParsegianTerm::new(p[0], p[1], p[2], p[3])?)
            }
        }
    }

    // Closed forms only, so evaluation never fails for decoded parameters.
    fn excess(&self, p: &[f64], xi: f64) -> f64 {
        match self {
            FitFamily::Lorentz => p
                .chunks(3)
                .map(|c| c[0] / (1.0 + (xi / c[1]).powi(2) + c[2] * xi / (c[1] * c[1])))
                .sum(),
            FitFamily::ModifiedOscillator => p[0] / (1.0 + (xi / p[1]).powf(p[2])),
            FitFamily::NinhamParsegian => {
                p[0] / (1.0 + (xi / p[1]).powi(2)) + p[2] / (1.0 + (xi / p[3]).powi(2))
            }
        }
    }
}

/// Fits `family` to `(ξ, ε)` samples starting from `initial` (physical
/// parameters in the family's order).
pub fn fit_oscillator(
    samples: &[(f64, f64)],
    family: FitFamily,
    initial: &[f64],
    options: &FitOptions,
) -> Result<FitResult> {
    family.check_len(initial.len())?;
    if samples.len() < 2 * initial.len() {
        return Err(Error::domain(format!(
            "{} samples for {} parameters; need at least twice as many",
            samples.len(),
            initial.len()
        )));
    }
    if let Some((xi, eps)) = samples.iter().find(|(xi, eps)| !(*xi > 0.0 && *eps > 1.0)) {
        return Err(Error::domain(format!(
            "sample (xi = {xi}, eps = {eps}) needs xi > 0 and eps > 1"
        )));
    }
    let targets: Vec<(f64, f64)> = samples.iter().map(|&(xi, e)| (xi, (e - 1.0).ln())).collect();
    let objective = |z: &[f64]| -> f64 {
        let p = family.decode(z);
        let s: f64 = targets
            .iter()
            .map(|&(xi, t)| {
                let r = family.excess(&p, xi).ln() - t;
                r * r
            })
            .sum();
        if s.is_finite() {
            s
        } else {
            f64::INFINITY
        }
    };

    let mut best = family.encode(initial)?;
    let mut best_f = objective(&best);
    let mut evaluations = 1;
    let mut converged = false;
    for _ in 0..=options.max_restarts {
        let budget = options.max_evaluations.saturating_sub(evaluations);
        if budget == 0 {
            break;
        }
        let run = nelder_mead(&objective, &best, budget, options.f_tolerance);
        evaluations += run.evaluations;
        let improved = run.f < best_f * (1.0 - 1e-9) && best_f - run.f > 1e-300;
        if run.f <= best_f {
            best = run.x;
            best_f = run.f;
        }
        if run.converged && !improved {
            converged = true;
            break;
        }
    }

    let parameters = family.decode(&best);
    if !converged {
        return Err(Error::FitFailure {
            iterations: evaluations,
            residual: best_f.sqrt(),
            best: parameters,
        });
    }
    Ok(FitResult {
        model: family.model(&parameters)?,
        parameters,
        residual_norm: best_f.sqrt(),
        evaluations,
    })
}

struct SimplexRun {
    x: Vec<f64>,
    f: f64,
    evaluations: usize,
    converged: bool,
}

fn nelder_mead<F: Fn(&[f64]) -> f64>(f: &F, start: &[f64], budget: usize, f_tol: f64) -> SimplexRun {
    let n = start.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(start.to_vec());
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += if v[i].abs() > 1e-3 { 0.1 * v[i].abs().max(1.0) } else { 0.1 };
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut evaluations = n + 1;
    let mut converged = false;

    while evaluations < budget {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let size = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= f_tol * values[0].abs().max(1e-30) || spread < 1e-300 || size < 1e-13 {
            converged = true;
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };

        let reflected = along(-1.0);
        let fr = f(&reflected);
        evaluations += 1;
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = f(&expanded);
            evaluations += 1;
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            let (contracted, fc) = if fr < values[n] {
                let c = along(-0.5);
                let fc = f(&c);
                (c, fc)
            } else {
                let c = along(0.5);
                let fc = f(&c);
                (c, fc)
            };
            evaluations += 1;
            if fc < values[n].min(fr) {
                simplex[n] = contracted;
                values[n] = fc;
            } else {
                let best = simplex[0].clone();
                for i in 1..=n {
                    simplex[i] = simplex[i]
                        .iter()
                        .zip(&best)
                        .map(|(v, b)| b + 0.5 * (v - b))
                        .collect();
                    values[i] = f(&simplex[i]);
                }
                evaluations += n;
            }
        }
    }

    let (i_best, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("simplex is non-empty");
    SimplexRun {
        x: simplex[i_best].clone(),
        f: values[i_best],
        evaluations,
        converged,
    }
}
