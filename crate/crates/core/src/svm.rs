//! Soft-margin linear SVM: objective evaluation and a subgradient solver.
//!
//! For a weighted set standing in for `n_src` points the objective is
//!
//! ```text
//! f(S, w) = sum_p u(p) (|w|^2 / n_src + C max(0, 1 - y <w, x>))
//! ```
//!
//! which for unit weights and `n_src = n` is `|w|^2 + C sum hinge`. There is
//! no bias term; embed one with [`preprocess`](crate::dataset::preprocess).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::{dot, LabeledDataset};
use crate::error::{CoresetError, Result};

/// Objective growth (relative to the value at `w = 0`) treated as divergence.
pub const DIVERGENCE_FACTOR: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Relative improvement of the best objective over `window` iterations
    /// below which the solver stops.
    pub tolerance: f64,
    pub window: usize,
    /// First step size; `None` uses `1 / (2 + C W)` with `W` the total weight.
    pub initial_step: Option<f64>,
    /// Step `k` is `initial_step / (1 + k decay)`.
    pub decay: f64,
    /// Also track a running average of the iterates (weights growing
    /// linearly with the iteration index).
    pub averaging: bool,
    /// Project `w` onto the ball of this radius after every step.
    pub project_radius: Option<f64>,
    pub record_trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iters: 50_000,
            tolerance: 1e-6,
            window: 10,
            initial_step: None,
            decay: 1e-3,
            averaging: true,
            project_radius: None,
            record_trace: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(CoresetError::InvalidParameter("max_iters must be at least 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(CoresetError::InvalidParameter("tolerance must be positive".into()));
        }
        if self.window == 0 {
            return Err(CoresetError::InvalidParameter("window must be at least 1".into()));
        }
        if let Some(s) = self.initial_step {
            if !(s > 0.0) || !s.is_finite() {
                return Err(CoresetError::InvalidParameter(format!("initial step must be positive, got {s}")));
            }
        }
        if !(self.decay >= 0.0) {
            return Err(CoresetError::InvalidParameter("decay must be nonnegative".into()));
        }
        if let Some(r) = self.project_radius {
            if !(r > 0.0) {
                return Err(CoresetError::InvalidParameter(format!("projection radius must be positive, got {r}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub w: Vec<f64>,
    #[serde(rename = "C")]
    pub c: f64,
    pub iterations_run: usize,
    pub final_objective: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective_trace: Option<Vec<f64>>,
    pub config: SolverConfig,
}

impl SvmModel {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, serde_json::to_string_pretty(self)?).map_err(|e| CoresetError::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let raw = std::fs::read_to_string(path).map_err(|e| CoresetError::io(path, e))?;
        Ok(serde_json::from_str(&raw)?)
    }

    /// Sign of `<w, x>`, with ties going to the positive class.
    pub fn predict(&self, x: &[f64]) -> f64 {
        if dot(&self.w, x) >= 0.0 {
            1.0
        } else {
            -1.0
        }
    }
}

fn check(points: &LabeledDataset, w: &[f64], c: f64) -> Result<()> {
    if w.len() != points.dim() {
        return Err(CoresetError::DimensionMismatch {
            expected: points.dim(),
            found: w.len(),
        });
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(CoresetError::InvalidParameter(format!("C must be positive, got {c}")));
    }
    if points.source_n() == 0 && !points.is_empty() {
        return Err(CoresetError::InvalidData("weighted set has no source population size".into()));
    }
    Ok(())
}

fn regularizer_scale(points: &LabeledDataset) -> f64 {
    if points.source_n() == 0 {
        0.0
    } else {
        points.total_weight() / points.source_n() as f64
    }
}

/// Weighted objective at `w`.
pub fn evaluate_objective(points: &LabeledDataset, w: &[f64], c: f64) -> Result<f64> {
    check(points, w, c)?;
    let w2 = dot(w, w);
    let share = if points.source_n() == 0 {
        0.0
    } else {
        w2 / points.source_n() as f64
    };
    Ok(points
        .points()
        .iter()
        .map(|p| p.weight * (share + c * (1.0 - p.margin(w)).max(0.0)))
        .sum())
}

/// Objective and one subgradient at `w`. Points exactly on the margin
/// contribute zero to the subgradient.
pub fn objective_and_subgradient(points: &LabeledDataset, w: &[f64], c: f64) -> Result<(f64, Vec<f64>)> {
    check(points, w, c)?;
    let a = regularizer_scale(points);
    let mut g: Vec<f64> = w.iter().map(|v| 2.0 * a * v).collect();
    let mut hinge = 0.0;
    for p in points.points() {
        let slack = 1.0 - p.margin(w);
        if slack > 0.0 {
            hinge += p.weight * slack;
            let coef = c * p.weight * p.label.sign();
            for (gj, xj) in g.iter_mut().zip(&p.features) {
                *gj -= coef * xj;
            }
        }
    }
    Ok((a * dot(w, w) + c * hinge, g))
}

/// Subgradient descent from `w = 0` with best-iterate tracking.
///
/// Deterministic: the same inputs and configuration give bit-identical
/// results.
pub fn train(points: &LabeledDataset, c: f64, cfg: &SolverConfig) -> Result<SvmModel> {
    cfg.validate()?;
    if points.is_empty() {
        return Err(CoresetError::TooFewPoints { n: 0, required: 1 });
    }
    let d = points.dim();
    if points.points().iter().any(|p| p.features.iter().any(|x| !x.is_finite())) {
        return Err(CoresetError::InvalidData("non-finite feature value".into()));
    }
    let mut w = vec![0.0; d];
    let (f0, mut g) = objective_and_subgradient(points, &w, c)?;
    let eta0 = cfg
        .initial_step
        .unwrap_or_else(|| 1.0 / (2.0 + c * points.total_weight()));

    let mut best_w = w.clone();
    let mut best_f = f0;
    let mut avg = w.clone();
    let mut history = vec![f0];
    let mut trace = cfg.record_trace.then(|| vec![f0]);
    let mut iterations = 0;

    for k in 0..cfg.max_iters {
        if f0 == 0.0 {
            break;
        }
        let eta = eta0 / (1.0 + k as f64 * cfg.decay);
        for (wj, gj) in w.iter_mut().zip(&g) {
            *wj -= eta * gj;
        }
        if let Some(r) = cfg.project_radius {
            let nrm = dot(&w, &w).sqrt();
            if nrm > r {
                w.iter_mut().for_each(|v| *v *= r / nrm);
            }
        }
        iterations = k + 1;

        let (f, next_g) = objective_and_subgradient(points, &w, c)?;
        if !f.is_finite() || f > DIVERGENCE_FACTOR * f0 {
            return Err(CoresetError::Diverged {
                iterations,
                objective: f,
            });
        }
        g = next_g;
        if f < best_f {
            best_f = f;
            best_w.copy_from_slice(&w);
        }
        if cfg.averaging {
            let rate = 2.0 / (iterations as f64 + 1.0);
            for (a, v) in avg.iter_mut().zip(&w) {
                *a += rate * (v - *a);
            }
            if iterations % cfg.window == 0 {
                let fa = evaluate_objective(points, &avg, c)?;
                if fa < best_f {
                    best_f = fa;
                    best_w.copy_from_slice(&avg);
                }
            }
        }
        if let Some(t) = trace.as_mut() {
            t.push(f);
        }
        history.push(best_f);
        if iterations >= cfg.window {
            let before = history[iterations - cfg.window];
            if before - best_f <= cfg.tolerance * before.abs() {
                break;
            }
        }
    }

    let final_objective = evaluate_objective(points, &best_w, c)?;
    Ok(SvmModel {
        w: best_w,
        c,
        iterations_run: iterations,
        final_objective,
        objective_trace: trace,
        config: cfg.clone(),
    })
}

/// `|f(P, w_sub) - f(P, w_full)| / f(P, w_full)` on the full data.
pub fn relative_error(full: &LabeledDataset, w_sub: &[f64], w_full: &[f64], c: f64) -> Result<f64> {
    let reference = evaluate_objective(full, w_full, c)?;
    if reference == 0.0 {
        return Err(CoresetError::DegenerateReference);
    }
    let value = evaluate_objective(full, w_sub, c)?;
    Ok((value - reference).abs() / reference)
}
