//! Per-point sensitivity upper bounds and a Monte-Carlo sensitivity oracle.
//!
//! For a centered dataset inside the unit ball and margins restricted to
//!
//! ```text
//! Q(P) = { w : |w| <= ln n,  sum_i max(0, 1 - y_i <w, x_i>) >= n / ln n }
//! ```
//!
//! the share of the objective any point can contribute is bounded by
//!
//! ```text
//! gamma_i = 1/n + (ln n + |x_i| ln^2 n) / n
//! ```
//!
//! and the bounds sum to at most `1 + ln n + ln^2 n`. All logarithms are
//! natural.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::{dot, LabeledDataset};
use crate::error::{CoresetError, Result};
use crate::rng;

/// Smallest dataset for which the bounds are defined (`ln n > 1`).
pub const MIN_POINTS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityProfile {
    pub gamma: Vec<f64>,
    pub total: f64,
    pub probs: Vec<f64>,
    pub n: usize,
    pub d: usize,
}

impl SensitivityProfile {
    /// Normalizes arbitrary nonnegative importances into a profile. Zero
    /// entries are allowed as long as the total is positive.
    pub fn from_gamma(gamma: Vec<f64>, d: usize) -> Result<Self> {
        if gamma.iter().any(|g| !(*g >= 0.0) || !g.is_finite()) {
            return Err(CoresetError::InvalidData("importances must be finite and nonnegative".into()));
        }
        let total: f64 = gamma.iter().sum();
        if !(total > 0.0) {
            return Err(CoresetError::InvalidData("importances sum to zero".into()));
        }
        let probs = gamma.iter().map(|g| g / total).collect();
        Ok(SensitivityProfile {
            n: gamma.len(),
            gamma,
            total,
            probs,
            d,
        })
    }
}

/// `1/n + (ln n + norm ln^2 n) / n`
#[inline]
pub fn gamma_bound(n: f64, norm: f64) -> f64 {
    let ln = n.ln();
    (1.0 + ln + norm * ln * ln) / n
}

pub fn total_sensitivity_bound(n: usize) -> Result<f64> {
    if n < MIN_POINTS {
        return Err(CoresetError::TooFewPoints { n, required: MIN_POINTS });
    }
    let ln = (n as f64).ln();
    Ok(1.0 + ln + ln * ln)
}

/// Sensitivity upper bounds for a preprocessed dataset. One pass, `O(nd)`.
pub fn compute_gamma(ds: &LabeledDataset) -> Result<SensitivityProfile> {
    if !ds.is_preprocessed() {
        return Err(CoresetError::NotPreprocessed);
    }
    let n = ds.len();
    if n < MIN_POINTS {
        return Err(CoresetError::TooFewPoints { n, required: MIN_POINTS });
    }
    let nf = n as f64;
    let gamma: Vec<f64> = ds.points().iter().map(|p| gamma_bound(nf, p.norm())).collect();
    SensitivityProfile::from_gamma(gamma, ds.dim())
}

/// A candidate margin and whether it lies in the bounded query space.
#[derive(Debug, Clone, PartialEq)]
pub struct QuerySample {
    pub w: Vec<f64>,
    pub feasible: bool,
}

/// Radius `ln n` of the bounded query space.
pub fn query_radius(n: usize) -> f64 {
    (n as f64).ln()
}

/// Sum of hinge terms `max(0, 1 - y <w, x>)` over all points, unweighted.
pub fn hinge_sum(ds: &LabeledDataset, w: &[f64]) -> f64 {
    ds.points().iter().map(|p| (1.0 - p.margin(w)).max(0.0)).sum()
}

/// Whether `w` lies in the bounded query space of `ds`.
pub fn is_feasible(ds: &LabeledDataset, w: &[f64]) -> bool {
    let n = ds.len() as f64;
    dot(w, w).sqrt() <= n.ln() + 1e-9 && hinge_sum(ds, w) >= n / n.ln()
}

/// Draws `w` uniformly from the radius-`ln n` ball and tests feasibility.
pub fn sample_query<R: rand::RngCore + ?Sized>(ds: &LabeledDataset, rng: &mut R) -> QuerySample {
    let w = rng::uniform_in_ball(rng, ds.dim(), query_radius(ds.len()));
    let feasible = is_feasible(ds, &w);
    QuerySample { w, feasible }
}

/// Draws up to `max_draws` queries and keeps the first `count` feasible ones.
pub fn feasible_queries(ds: &LabeledDataset, count: usize, max_draws: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = rng::seeded(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..max_draws {
        if out.len() == count {
            break;
        }
        let q = sample_query(ds, &mut rng);
        if q.feasible {
            out.push(q.w);
        }
    }
    out
}

/// Per-point contributions `|w|^2 / n + C max(0, 1 - y <w, x>)`.
pub fn point_contributions(ds: &LabeledDataset, w: &[f64], c: f64) -> Vec<f64> {
    let share = dot(w, w) / ds.len() as f64;
    ds.points()
        .iter()
        .map(|p| share + c * (1.0 - p.margin(w)).max(0.0))
        .collect()
}

/// Each point's share of the total objective at `w`.
pub fn sensitivity_ratios(ds: &LabeledDataset, w: &[f64], c: f64) -> Vec<f64> {
    let contrib = point_contributions(ds, w, c);
    let total: f64 = contrib.iter().sum();
    contrib.into_iter().map(|f| f / total).collect()
}

/// Monte-Carlo lower bounds on every point's sensitivity.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSensitivity {
    /// Max over feasible queries of each point's share; 0 if none was feasible.
    pub values: Vec<f64>,
    pub drawn: usize,
    pub feasible: usize,
}

impl EmpiricalSensitivity {
    pub fn feasible_fraction(&self) -> f64 {
        self.feasible as f64 / self.drawn as f64
    }
}

/// Evaluates all points against one shared set of `num_queries` draws.
pub fn empirical_sensitivities(
    ds: &LabeledDataset,
    num_queries: usize,
    seed: u64,
    c: f64,
) -> Result<EmpiricalSensitivity> {
    if !ds.is_preprocessed() {
        return Err(CoresetError::NotPreprocessed);
    }
    if num_queries == 0 {
        return Err(CoresetError::InvalidParameter("num_queries must be at least 1".into()));
    }
    if !(c > 0.0) {
        return Err(CoresetError::InvalidParameter(format!("C must be positive, got {c}")));
    }
    let n = ds.len();
    if n < MIN_POINTS {
        return Err(CoresetError::TooFewPoints { n, required: MIN_POINTS });
    }
    let nf = n as f64;
    let radius = query_radius(n);
    let threshold = nf / nf.ln();
    let mut rng = rng::seeded(seed);
    let mut values = vec![0.0; n];
    let mut hinges = vec![0.0; n];
    let mut feasible = 0;
    for _ in 0..num_queries {
        let w = rng::uniform_in_ball(&mut rng, ds.dim(), radius);
        let mut hsum = 0.0;
        for (h, p) in hinges.iter_mut().zip(ds.points()) {
            *h = (1.0 - p.margin(&w)).max(0.0);
            hsum += *h;
        }
        if hsum < threshold {
            continue;
        }
        feasible += 1;
        let w2 = dot(&w, &w);
        let total = w2 + c * hsum;
        let share = w2 / nf;
        for (v, h) in values.iter_mut().zip(&hinges) {
            let r = (share + c * h) / total;
            if r > *v {
                *v = r;
            }
        }
    }
    Ok(EmpiricalSensitivity {
        values,
        drawn: num_queries,
        feasible,
    })
}

/// Oracle value for a single point, with the feasible fraction of draws.
pub fn empirical_sensitivity(
    ds: &LabeledDataset,
    point_index: usize,
    num_queries: usize,
    seed: u64,
    c: f64,
) -> Result<(f64, f64)> {
    if point_index >= ds.len() {
        return Err(CoresetError::InvalidParameter(format!(
            "point index {point_index} out of range for {} points",
            ds.len()
        )));
    }
    let all = empirical_sensitivities(ds, num_queries, seed, c)?;
    Ok((all.values[point_index], all.feasible_fraction()))
}

/// Writes `index,norm,gamma,prob`.
pub fn write_profile_csv(ds: &LabeledDataset, profile: &SensitivityProfile, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if ds.len() != profile.n {
        return Err(CoresetError::DimensionMismatch {
            expected: profile.n,
            found: ds.len(),
        });
    }
    let file = File::create(path).map_err(|e| CoresetError::io(path, e))?;
    let mut out = BufWriter::new(file);
    let res = (|| -> std::io::Result<()> {
        writeln!(out, "index,norm,gamma,prob")?;
        for (i, p) in ds.points().iter().enumerate() {
            writeln!(out, "{i},{},{},{}", p.norm(), profile.gamma[i], profile.probs[i])?;
        }
        out.flush()
    })();
    res.map_err(|e| CoresetError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{preprocess, LabeledPoint};
    use crate::synthetic::two_gaussians;

    fn unit_norm_set(n: usize) -> LabeledDataset {
        let points = (0..n)
            .map(|i| {
                let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                let label = if i % 2 == 0 { crate::Label::Positive } else { crate::Label::Negative };
                LabeledPoint::new(vec![a.cos(), a.sin()], label)
            })
            .collect();
        LabeledDataset::new(points).unwrap().assume_preprocessed().unwrap()
    }

    #[test]
    fn closed_form_values() {
        // 1/n + (ln n + ln^2 n)/n at n = 30000 with unit norm.
        let ln = 30_000f64.ln();
        assert!((ln - 10.308_952_660_644_293).abs() < 1e-12);
        let g = gamma_bound(30_000.0, 1.0);
        assert!((g - 3.919_448_587e-3).abs() < 1e-12, "{g}");
        let g0 = gamma_bound(1000.0, 0.0);
        assert!((g0 - 7.907_755_279e-3).abs() < 1e-12, "{g0}");
    }

    #[test]
    fn total_bound_values() {
        assert!((total_sensitivity_bound(30_000).unwrap() - 117.583_457_620).abs() < 1e-8);
        assert!((total_sensitivity_bound(3).unwrap() - 3.305_561_249).abs() < 1e-8);
        assert!(matches!(total_sensitivity_bound(2), Err(CoresetError::TooFewPoints { .. })));
    }

    #[test]
    fn unit_norms_make_the_total_bound_tight() {
        let ds = unit_norm_set(64);
        let profile = compute_gamma(&ds).unwrap();
        let bound = total_sensitivity_bound(64).unwrap();
        assert!((profile.total - bound).abs() < 1e-9);
    }

    #[test]
    fn profile_invariants() {
        let ds = preprocess(&two_gaussians(300, 5, 1).unwrap(), false).unwrap();
        let p = compute_gamma(&ds).unwrap();
        let n = ds.len() as f64;
        assert!(p.gamma.iter().all(|&g| g >= 1.0 / n));
        assert!((p.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(p.probs.iter().all(|&q| q > 0.0));
        assert!(p.total <= total_sensitivity_bound(ds.len()).unwrap() + 1e-9);
    }

    #[test]
    fn rejects_small_or_raw_input() {
        let raw = two_gaussians(10, 2, 1).unwrap();
        assert!(matches!(compute_gamma(&raw), Err(CoresetError::NotPreprocessed)));
        let tiny = preprocess(&two_gaussians(2, 2, 1).unwrap(), false).unwrap();
        assert!(matches!(compute_gamma(&tiny), Err(CoresetError::TooFewPoints { .. })));
    }

    #[test]
    fn zero_query_gives_uniform_shares() {
        let ds = preprocess(&two_gaussians(40, 3, 2).unwrap(), false).unwrap();
        assert!(is_feasible(&ds, &[0.0; 3]));
        let r = sensitivity_ratios(&ds, &[0.0; 3], 1.0);
        assert!(r.iter().all(|&v| (v - 1.0 / 40.0).abs() < 1e-15));
    }

    #[test]
    fn oracle_is_dominated_and_symmetric() {
        let mut ds = two_gaussians(60, 4, 5).unwrap().into_points();
        let dup = ds[0].clone();
        ds.push(dup);
        let ds = preprocess(&LabeledDataset::new(ds).unwrap(), false).unwrap();
        let profile = compute_gamma(&ds).unwrap();
        let emp = empirical_sensitivities(&ds, 5_000, 17, 1.0).unwrap();
        assert!(emp.feasible > 0);
        for (e, g) in emp.values.iter().zip(&profile.gamma) {
            assert!(*e <= g + 1e-9);
        }
        assert_eq!(emp.values[0], emp.values[60]);
    }

    #[test]
    fn oracle_errors() {
        let ds = preprocess(&two_gaussians(20, 2, 5).unwrap(), false).unwrap();
        assert!(empirical_sensitivity(&ds, 20, 10, 0, 1.0).is_err());
        assert!(empirical_sensitivity(&ds, 0, 10, 0, 0.0).is_err());
        assert!(empirical_sensitivity(&ds, 0, 0, 0, 1.0).is_err());
    }
}
