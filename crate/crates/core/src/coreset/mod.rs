//! Coreset construction by sensitivity sampling, plus the class-stratified
//! uniform baseline and streaming merge-and-reduce.
//!
//! [`build_coreset`] draws `m` points i.i.d. with probability
//! `gamma_i / t` and gives a point drawn `K_i` times the weight
//! `t K_i / (gamma_i m)`, which makes `sum_S u(p) f(p, w)` an unbiased
//! estimate of `f(P, w)` for every `w`.

mod alias;
pub mod stream;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use alias::AliasTable;
pub use stream::{merge, reduce, reduce_seed, stream_coreset};

use crate::dataset::{sidecar_path, Label, LabeledDataset, LabeledPoint};
use crate::error::{CoresetError, Result};
use crate::rng;
use crate::sensitivity::{compute_gamma, SensitivityProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Sensitivity,
    Uniform,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Sensitivity => "sensitivity",
            Method::Uniform => "uniform",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = CoresetError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sensitivity" => Ok(Method::Sensitivity),
            "uniform" => Ok(Method::Uniform),
            other => Err(CoresetError::InvalidParameter(format!("unknown method {other:?}"))),
        }
    }
}

/// Which sample-size expression to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeFormula {
    /// `c t / eps^2 (d ln t + ln(1/delta))`
    #[default]
    Standard,
    /// `c t / eps^2 (d ln t + t ln(1/delta))`
    ScaledConfidence,
}

/// Denominator of the coreset weight `t K_i / (gamma_i * denom)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightDenominator {
    /// Total number of draws `m`; unbiased.
    #[default]
    Draws,
    /// Number of distinct sampled points `|S|`.
    Distinct,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoresetParams {
    pub epsilon: f64,
    pub delta: f64,
    /// Constant in front of the sample-size bound.
    pub c: f64,
    /// Overrides the sample-size formula when set.
    pub explicit_size: Option<usize>,
    pub method: Method,
    pub seed: u64,
    #[serde(default)]
    pub size_formula: SizeFormula,
    #[serde(default)]
    pub weight_denominator: WeightDenominator,
}

impl Default for CoresetParams {
    fn default() -> Self {
        CoresetParams {
            epsilon: 0.1,
            delta: 0.1,
            c: 1.0,
            explicit_size: None,
            method: Method::Sensitivity,
            seed: 0,
            size_formula: SizeFormula::Standard,
            weight_denominator: WeightDenominator::Draws,
        }
    }
}

impl CoresetParams {
    pub fn new(epsilon: f64, delta: f64) -> Self {
        CoresetParams {
            epsilon,
            delta,
            ..Default::default()
        }
    }

    pub fn with_size(mut self, size: usize) -> Self {
        self.explicit_size = Some(size);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_constant(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let open_unit = |v: f64| v > 0.0 && v < 1.0;
        if !open_unit(self.epsilon) {
            return Err(CoresetError::InvalidParameter(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if !open_unit(self.delta) {
            return Err(CoresetError::InvalidParameter(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if !(self.c > 0.0) || !self.c.is_finite() {
            return Err(CoresetError::InvalidParameter(format!("c must be positive, got {}", self.c)));
        }
        if self.explicit_size == Some(0) {
            return Err(CoresetError::InvalidParameter("explicit size must be at least 1".into()));
        }
        Ok(())
    }
}

/// Number of multinomial draws for total sensitivity `t` in dimension `d`,
/// rounded up and floored at one. Callers cap it at the dataset size.
pub fn sample_size(t: f64, d: usize, params: &CoresetParams) -> Result<usize> {
    params.validate()?;
    if !(t > 1.0) || !t.is_finite() {
        return Err(CoresetError::InvalidParameter(format!(
            "total sensitivity must exceed 1, got {t}"
        )));
    }
    if d == 0 {
        return Err(CoresetError::InvalidParameter("dimension must be at least 1".into()));
    }
    let log_delta = (1.0 / params.delta).ln();
    let confidence = match params.size_formula {
        SizeFormula::Standard => log_delta,
        SizeFormula::ScaledConfidence => t * log_delta,
    };
    let m = params.c * t / (params.epsilon * params.epsilon) * (d as f64 * t.ln() + confidence);
    Ok((m.ceil() as usize).max(1))
}

/// Where a coreset came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub method: Method,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub c: Option<f64>,
    /// Total sensitivity of the profile that was sampled.
    pub t: Option<f64>,
    pub generator_id: String,
    pub weight_denominator: WeightDenominator,
}

impl Provenance {
    pub fn sensitivity(params: &CoresetParams, t: f64) -> Self {
        Provenance {
            seed: params.seed,
            method: Method::Sensitivity,
            epsilon: Some(params.epsilon),
            delta: Some(params.delta),
            c: Some(params.c),
            t: Some(t),
            generator_id: rng::GENERATOR_ID.to_string(),
            weight_denominator: params.weight_denominator,
        }
    }

    pub fn uniform(seed: u64) -> Self {
        Provenance {
            seed,
            method: Method::Uniform,
            epsilon: None,
            delta: None,
            c: None,
            t: None,
            generator_id: rng::GENERATOR_ID.to_string(),
            weight_denominator: WeightDenominator::Draws,
        }
    }
}

/// A weighted subset standing in for `source_n` original points.
#[derive(Debug, Clone, PartialEq)]
pub struct Coreset {
    /// Sampled points; `weight` holds `u(p)`.
    pub points: Vec<LabeledPoint>,
    /// Position of each point in the set it was sampled from.
    pub indices: Vec<usize>,
    /// Total draws.
    pub m: usize,
    pub distinct: usize,
    pub source_n: usize,
    pub d: usize,
    pub preprocessed: bool,
    pub provenance: Provenance,
}

impl Coreset {
    /// A coreset with no points, the identity for [`merge`].
    pub fn empty(d: usize, provenance: Provenance) -> Self {
        Coreset {
            points: Vec::new(),
            indices: Vec::new(),
            m: 0,
            distinct: 0,
            source_n: 0,
            d,
            preprocessed: true,
            provenance,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.points.iter().map(|p| p.weight).sum()
    }

    /// The weighted point set, carrying `source_n` for objective evaluation.
    pub fn to_dataset(&self) -> LabeledDataset {
        LabeledDataset::from_parts(self.points.clone(), self.d, self.preprocessed, self.source_n)
    }

    fn full(ds: &LabeledDataset, provenance: Provenance) -> Self {
        let n = ds.len();
        Coreset {
            points: ds.points().to_vec(),
            indices: (0..n).collect(),
            m: n,
            distinct: n,
            source_n: ds.source_n(),
            d: ds.dim(),
            preprocessed: ds.is_preprocessed(),
            provenance,
        }
    }
}

/// Draws `m` indices from `gamma / total` and weights each distinct point by
/// `total K_i / (gamma_i denom)` times its incoming weight.
pub(crate) fn importance_sample(
    ds: &LabeledDataset,
    gamma: &[f64],
    total: f64,
    m: usize,
    params: &CoresetParams,
    provenance: Provenance,
) -> Result<Coreset> {
    let table = AliasTable::new(gamma)?;
    let mut rng = rng::seeded(params.seed);
    let counts = table.counts(m, &mut rng);
    let distinct = counts.iter().filter(|&&k| k > 0).count();
    let denom = match params.weight_denominator {
        WeightDenominator::Draws => m,
        WeightDenominator::Distinct => distinct,
    } as f64;

    let mut points = Vec::with_capacity(distinct);
    let mut indices = Vec::with_capacity(distinct);
    for (i, &k) in counts.iter().enumerate().filter(|(_, &k)| k > 0) {
        let src = &ds.points()[i];
        let u = total * k as f64 / (gamma[i] * denom) * src.weight;
        points.push(LabeledPoint::weighted(src.features.clone(), src.label, u));
        indices.push(i);
    }
    Ok(Coreset {
        points,
        indices,
        m,
        distinct,
        source_n: ds.source_n(),
        d: ds.dim(),
        preprocessed: ds.is_preprocessed(),
        provenance,
    })
}

/// Sensitivity sampling over a precomputed profile.
///
/// `m` is the explicit size when given, otherwise [`sample_size`] at the
/// profile's total. When `m >= n` the whole dataset is returned unweighted.
pub fn build_coreset(ds: &LabeledDataset, profile: &SensitivityProfile, params: &CoresetParams) -> Result<Coreset> {
    params.validate()?;
    if !ds.is_preprocessed() {
        return Err(CoresetError::NotPreprocessed);
    }
    if profile.n != ds.len() {
        return Err(CoresetError::DimensionMismatch {
            expected: ds.len(),
            found: profile.n,
        });
    }
    let m = match params.explicit_size {
        Some(m) => m,
        None => sample_size(profile.total, ds.dim(), params)?,
    };
    let provenance = Provenance::sensitivity(params, profile.total);
    if m >= ds.len() {
        return Ok(Coreset::full(ds, provenance));
    }
    importance_sample(ds, &profile.gamma, profile.total, m, params, provenance)
}

/// Class-stratified uniform sampling without replacement.
///
/// Class sample sizes are proportional to class frequencies (largest
/// remainder, at least one per class) and every sampled point of a class
/// gets weight `n_class / size_class`.
pub fn build_uniform(ds: &LabeledDataset, size: usize, seed: u64) -> Result<Coreset> {
    let n = ds.len();
    if size < 2 {
        return Err(CoresetError::InvalidParameter(format!("uniform size must be at least 2, got {size}")));
    }
    if size > n {
        return Err(CoresetError::InvalidParameter(format!(
            "uniform size {size} exceeds dataset size {n}"
        )));
    }
    let mut by_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, p) in ds.points().iter().enumerate() {
        by_class[usize::from(p.label == Label::Positive)].push(i);
    }
    if by_class.iter().any(Vec::is_empty) {
        return Err(CoresetError::InvalidData("uniform sampling needs both classes".into()));
    }
    let alloc = allocate(size, [by_class[0].len(), by_class[1].len()]);

    let mut rng = rng::seeded(seed);
    let mut chosen: Vec<(usize, f64)> = Vec::with_capacity(size);
    for (members, &k) in by_class.iter_mut().zip(&alloc) {
        let weight = members.len() as f64 / k as f64;
        // Partial Fisher-Yates: the first k slots become the sample.
        for j in 0..k {
            let r = j + rng::index(&mut rng, members.len() - j);
            members.swap(j, r);
        }
        chosen.extend(members[..k].iter().map(|&i| (i, weight)));
    }
    chosen.sort_unstable_by_key(|&(i, _)| i);

    let points = chosen
        .iter()
        .map(|&(i, w)| {
            let p = &ds.points()[i];
            LabeledPoint::weighted(p.features.clone(), p.label, w * p.weight)
        })
        .collect();
    Ok(Coreset {
        points,
        indices: chosen.iter().map(|&(i, _)| i).collect(),
        m: size,
        distinct: size,
        source_n: ds.source_n(),
        d: ds.dim(),
        preprocessed: ds.is_preprocessed(),
        provenance: Provenance::uniform(seed),
    })
}

/// Largest-remainder split of `size` over two classes, each getting at
/// least one and at most its population.
fn allocate(size: usize, counts: [usize; 2]) -> [usize; 2] {
    let n = (counts[0] + counts[1]) as f64;
    let quota = counts.map(|c| size as f64 * c as f64 / n);
    let mut alloc = quota.map(|q| q.floor() as usize);
    let mut rest = size - alloc[0] - alloc[1];
    let mut order = [0, 1];
    // Larger fractional part first; ties go to the positive class.
    order.sort_by(|&a, &b| {
        let fa = quota[a] - quota[a].floor();
        let fb = quota[b] - quota[b].floor();
        fb.total_cmp(&fa).then(b.cmp(&a))
    });
    for &c in order.iter().cycle() {
        if rest == 0 {
            break;
        }
        if alloc[c] < counts[c] {
            alloc[c] += 1;
            rest -= 1;
        }
    }
    for c in 0..2 {
        if alloc[c] == 0 {
            alloc[c] = 1;
            alloc[1 - c] -= 1;
        }
    }
    alloc
}

/// Computes the profile when needed and dispatches on `params.method`.
/// The uniform method requires `explicit_size`.
pub fn build(ds: &LabeledDataset, params: &CoresetParams) -> Result<Coreset> {
    match params.method {
        Method::Sensitivity => {
            let profile = compute_gamma(ds)?;
            build_coreset(ds, &profile, params)
        }
        Method::Uniform => {
            let size = params.explicit_size.ok_or_else(|| {
                CoresetError::InvalidParameter("uniform sampling needs an explicit size".into())
            })?;
            build_uniform(ds, size.min(ds.len()), params.seed)
        }
    }
}

/// JSON sidecar of a coreset CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoresetMeta {
    pub seed: u64,
    pub method: Method,
    pub m: usize,
    pub distinct: usize,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub c: Option<f64>,
    pub t: Option<f64>,
    pub generator_id: String,
    pub weight_denominator: WeightDenominator,
    pub source_n: usize,
    pub d: usize,
}

/// Writes `weight,label,f1,...,fd` and a `<path>.meta.json` sidecar.
pub fn write_coreset(coreset: &Coreset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| CoresetError::io(path, e))?;
    let mut out = BufWriter::new(file);
    let res = (|| -> std::io::Result<()> {
        write!(out, "weight,label")?;
        for j in 1..=coreset.d {
            write!(out, ",f{j}")?;
        }
        writeln!(out)?;
        for p in &coreset.points {
            write!(out, "{},{}", p.weight, p.label.as_i8())?;
            for x in &p.features {
                write!(out, ",{x}")?;
            }
            writeln!(out)?;
        }
        out.flush()
    })();
    res.map_err(|e| CoresetError::io(path, e))?;

    let pv = &coreset.provenance;
    let meta = CoresetMeta {
        seed: pv.seed,
        method: pv.method,
        m: coreset.m,
        distinct: coreset.distinct,
        epsilon: pv.epsilon,
        delta: pv.delta,
        c: pv.c,
        t: pv.t,
        generator_id: pv.generator_id.clone(),
        weight_denominator: pv.weight_denominator,
        source_n: coreset.source_n,
        d: coreset.d,
    };
    let side = sidecar_path(path);
    std::fs::write(&side, serde_json::to_string_pretty(&meta)?).map_err(|e| CoresetError::io(&side, e))
}

/// Reads a coreset written by [`write_coreset`]. Source indices are not
/// stored in the file and come back as row positions.
pub fn read_coreset(path: impl AsRef<Path>) -> Result<Coreset> {
    let path = path.as_ref();
    let side = sidecar_path(path);
    let raw = std::fs::read_to_string(&side).map_err(|e| CoresetError::io(&side, e))?;
    let meta: CoresetMeta = serde_json::from_str(&raw)?;
    let table = crate::dataset::load_csv(path, 1, true)?;
    if table.dim() != meta.d + 1 {
        return Err(CoresetError::DimensionMismatch {
            expected: meta.d + 1,
            found: table.dim().saturating_sub(1),
        });
    }
    let points: Vec<LabeledPoint> = table
        .into_points()
        .into_iter()
        .map(|mut p| {
            let weight = p.features.remove(0);
            LabeledPoint::weighted(p.features, p.label, weight)
        })
        .collect();
    if let Some(p) = points.iter().find(|p| !(p.weight > 0.0)) {
        return Err(CoresetError::InvalidData(format!("coreset weight {} is not positive", p.weight)));
    }
    Ok(Coreset {
        indices: (0..points.len()).collect(),
        points,
        m: meta.m,
        distinct: meta.distinct,
        source_n: meta.source_n,
        d: meta.d,
        preprocessed: true,
        provenance: Provenance {
            seed: meta.seed,
            method: meta.method,
            epsilon: meta.epsilon,
            delta: meta.delta,
            c: meta.c,
            t: meta.t,
            generator_id: meta.generator_id,
            weight_denominator: meta.weight_denominator,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::preprocess;
    use crate::synthetic::two_gaussians;

    fn small_set(n: usize, seed: u64) -> LabeledDataset {
        preprocess(&two_gaussians(n, 3, seed).unwrap(), false).unwrap()
    }

    #[test]
    fn sample_size_examples() {
        let p = CoresetParams::new(0.5, 0.1);
        // ceil(470.32 * (24 ln 117.58 + ln 10)), evaluated independently.
        assert_eq!(sample_size(117.58, 24, &p).unwrap(), 54_893);
        let t = crate::sensitivity::total_sensitivity_bound(30_000).unwrap();
        assert_eq!(sample_size(t, 24, &p).unwrap(), 54_895);

        let raw = |c: f64, delta: f64| c * 117.58 / 0.25 * (24.0 * 117.58f64.ln() + (1.0 / delta).ln());
        let doubled = sample_size(117.58, 24, &p.clone().with_constant(2.0)).unwrap();
        assert_eq!(doubled, raw(2.0, 0.1).ceil() as usize);
        assert!((raw(2.0, 0.1) - 2.0 * raw(1.0, 0.1)).abs() < 1e-9);

        let near_one = CoresetParams::new(0.5, 1.0 - 1e-12);
        assert_eq!(
            sample_size(117.58, 24, &near_one).unwrap(),
            (117.58 / 0.25 * 24.0 * 117.58f64.ln()).ceil() as usize
        );

        let mut scaled = p.clone();
        scaled.size_formula = SizeFormula::ScaledConfidence;
        let expected = (117.58 / 0.25 * (24.0 * 117.58f64.ln() + 117.58 * 10f64.ln())).ceil() as usize;
        assert_eq!(sample_size(117.58, 24, &scaled).unwrap(), expected);
    }

    #[test]
    fn sample_size_errors() {
        let p = CoresetParams::new(0.5, 0.1);
        assert!(sample_size(1.0, 3, &p).is_err());
        assert!(sample_size(5.0, 0, &p).is_err());
        assert!(sample_size(5.0, 3, &CoresetParams::new(1.0, 0.1)).is_err());
        assert!(sample_size(5.0, 3, &CoresetParams::new(0.5, 0.0)).is_err());
        assert!(sample_size(5.0, 3, &p.clone().with_constant(0.0)).is_err());
    }

    #[test]
    fn point_mass_profile() {
        let ds = small_set(20, 1);
        let mut gamma = vec![0.0; 20];
        gamma[0] = 0.7;
        let profile = SensitivityProfile::from_gamma(gamma, ds.dim()).unwrap();
        let params = CoresetParams::default().with_size(10).with_seed(4);
        let cs = build_coreset(&ds, &profile, &params).unwrap();
        assert_eq!(cs.indices, vec![0]);
        assert_eq!((cs.m, cs.distinct), (10, 1));
        assert!((cs.points[0].weight - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_profile_gives_classic_reweighting() {
        let ds = small_set(100, 2);
        let profile = SensitivityProfile::from_gamma(vec![0.37; 100], ds.dim()).unwrap();
        let cs = build_coreset(&ds, &profile, &CoresetParams::default().with_size(10).with_seed(9)).unwrap();
        for p in &cs.points {
            let k = (p.weight * 10.0 / 100.0).round();
            assert!((p.weight - 100.0 * k / 10.0).abs() < 1e-9);
        }
        let total: f64 = cs.points.iter().map(|p| p.weight * 10.0 / 100.0).sum();
        assert!((total - 10.0).abs() < 1e-9);
    }

    #[test]
    fn weight_identity_and_determinism() {
        let ds = small_set(200, 3);
        let profile = compute_gamma(&ds).unwrap();
        let params = CoresetParams::default().with_size(60).with_seed(21);
        let a = build_coreset(&ds, &profile, &params).unwrap();
        let b = build_coreset(&ds, &profile, &params).unwrap();
        assert_eq!(a, b);

        let table = AliasTable::new(&profile.gamma).unwrap();
        let counts = table.counts(60, &mut rng::seeded(21));
        assert_eq!(counts.iter().sum::<usize>(), 60);
        for (p, &i) in a.points.iter().zip(&a.indices) {
            let lhs = p.weight * profile.gamma[i] * a.m as f64;
            let rhs = profile.total * counts[i] as f64;
            assert!(((lhs - rhs) / rhs).abs() < 1e-12);
        }
        let identity: f64 = a
            .points
            .iter()
            .zip(&a.indices)
            .map(|(p, &i)| p.weight * profile.gamma[i] / profile.total)
            .sum();
        assert!((identity - 1.0).abs() < 1e-9);
        assert!(a.distinct <= a.m);
        assert!(a.points.iter().all(|p| p.weight > 0.0));
    }

    #[test]
    fn distinct_denominator_variant() {
        let ds = small_set(200, 3);
        let profile = compute_gamma(&ds).unwrap();
        let mut params = CoresetParams::default().with_size(60).with_seed(21);
        let by_draws = build_coreset(&ds, &profile, &params).unwrap();
        params.weight_denominator = WeightDenominator::Distinct;
        let by_distinct = build_coreset(&ds, &profile, &params).unwrap();
        assert_eq!(by_draws.indices, by_distinct.indices);
        let ratio = by_draws.m as f64 / by_draws.distinct as f64;
        for (a, b) in by_draws.points.iter().zip(&by_distinct.points) {
            assert!((b.weight / a.weight - ratio).abs() < 1e-12);
        }
    }

    #[test]
    fn oversized_request_returns_full_data() {
        let ds = small_set(30, 4);
        let profile = compute_gamma(&ds).unwrap();
        let cs = build_coreset(&ds, &profile, &CoresetParams::default().with_size(30)).unwrap();
        assert_eq!(cs.len(), 30);
        assert!(cs.points.iter().all(|p| p.weight == 1.0));
        // The formula size for eps = 0.1 is far above 30.
        let cs = build_coreset(&ds, &profile, &CoresetParams::default()).unwrap();
        assert_eq!(cs.len(), 30);
    }

    #[test]
    fn uniform_allocation_examples() {
        assert_eq!(allocate(10, [50, 50]), [5, 5]);
        assert_eq!(allocate(10, [10, 90]), [1, 9]);
        assert_eq!(allocate(10, [1, 999]), [1, 9]);
        assert_eq!(allocate(3, [50, 50]), [1, 2]);
        assert_eq!(allocate(7, [3, 4]), [3, 4]);
    }

    #[test]
    fn uniform_balanced_and_skewed() {
        let rows: Vec<(Vec<f64>, i8)> = (0..100).map(|i| (vec![i as f64], if i % 2 == 0 { 1 } else { -1 })).collect();
        let ds = LabeledDataset::from_rows(rows).unwrap();
        let cs = build_uniform(&ds, 10, 3).unwrap();
        assert_eq!(cs.len(), 10);
        let pos = cs.points.iter().filter(|p| p.label == Label::Positive).count();
        assert_eq!(pos, 5);
        assert!(cs.points.iter().all(|p| p.weight == 10.0));

        let rows: Vec<(Vec<f64>, i8)> = (0..100).map(|i| (vec![i as f64], if i < 90 { 1 } else { -1 })).collect();
        let ds = LabeledDataset::from_rows(rows).unwrap();
        let cs = build_uniform(&ds, 10, 3).unwrap();
        let pos = cs.points.iter().filter(|p| p.label == Label::Positive).count();
        assert_eq!(pos, 9);
        assert!(cs.points.iter().all(|p| p.weight == 10.0));
        let mut idx = cs.indices.clone();
        idx.dedup();
        assert_eq!(idx.len(), 10);

        let full = build_uniform(&ds, 100, 3).unwrap();
        assert_eq!(full.indices, (0..100).collect::<Vec<_>>());
        assert!(full.points.iter().all(|p| p.weight == 1.0));
    }

    #[test]
    fn uniform_errors() {
        let ds = LabeledDataset::from_rows([(vec![1.0], 1), (vec![2.0], 1), (vec![3.0], -1)]).unwrap();
        assert!(build_uniform(&ds, 1, 0).is_err());
        assert!(build_uniform(&ds, 4, 0).is_err());
        let one_class = LabeledDataset::from_rows([(vec![1.0], 1), (vec![2.0], 1)]).unwrap();
        assert!(build_uniform(&one_class, 2, 0).is_err());
    }

    #[test]
    fn file_roundtrip() {
        let ds = small_set(100, 5);
        let cs = build(&ds, &CoresetParams::default().with_size(20).with_seed(8)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        write_coreset(&cs, &path).unwrap();
        let back = read_coreset(&path).unwrap();
        assert_eq!(back.points, cs.points);
        assert_eq!((back.m, back.distinct, back.source_n, back.d), (cs.m, cs.distinct, cs.source_n, cs.d));
        assert_eq!(back.provenance, cs.provenance);
        let header = std::fs::read_to_string(&path).unwrap();
        assert!(header.starts_with("weight,label,f1,f2,f3\n"));
        let meta: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(crate::dataset::sidecar_path(&path)).unwrap()).unwrap();
        for key in ["seed", "method", "m", "distinct", "epsilon", "delta", "c", "t", "generator_id"] {
            assert!(meta.get(key).is_some(), "missing {key}");
        }
    }
}
