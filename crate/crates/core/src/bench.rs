//! Repeated-trial comparison of subsampling methods against full-data
//! training.
//!
//! For every method, size and trial the harness builds a subsample of exactly
//! that size, trains on it and records the relative objective error of the
//! resulting model on the full data, together with build and training wall
//! times. [`summarize`] reduces the records to per-(method, size) means and
//! sample standard deviations; [`emit_report`] writes them as CSV or JSON.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::coreset::{self, CoresetParams, Method};
use crate::dataset::{self, LabeledDataset};
use crate::error::{CoresetError, Result};
use crate::rng;
use crate::sensitivity::compute_gamma;
use crate::svm::{self, SolverConfig};
use crate::synthetic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataFormat {
    /// Label in `label_column`, every other column a feature.
    #[default]
    Csv,
    Libsvm,
    /// A file written by [`dataset::write_preprocessed`]; used as is.
    Preprocessed,
}

impl std::str::FromStr for DataFormat {
    type Err = CoresetError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(DataFormat::Csv),
            "libsvm" => Ok(DataFormat::Libsvm),
            "preprocessed" => Ok(DataFormat::Preprocessed),
            other => Err(CoresetError::InvalidParameter(format!("unknown data format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = CoresetError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(CoresetError::InvalidParameter(format!("unknown report format {other:?}"))),
        }
    }
}

fn default_trials() -> usize {
    100
}

fn default_methods() -> Vec<Method> {
    vec![Method::Sensitivity, Method::Uniform]
}

fn default_true() -> bool {
    true
}

fn default_epsilon() -> f64 {
    0.1
}

fn default_delta() -> f64 {
    0.1
}

fn default_c_const() -> f64 {
    1.0
}

/// A benchmark configuration. Everything except `C` has a default, so a
/// config file may be as small as `C = 0.01`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchPlan {
    /// Input file; `None` uses the bundled synthetic set.
    #[serde(default)]
    pub dataset: Option<PathBuf>,
    #[serde(default)]
    pub format: DataFormat,
    #[serde(default)]
    pub label_column: usize,
    #[serde(default)]
    pub has_header: bool,
    /// Append a constant feature during preprocessing.
    #[serde(default)]
    pub add_bias: bool,
    /// Subsample sizes; empty means [`default_sizes`] of the loaded `n`.
    #[serde(default)]
    pub sizes: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_c_const")]
    pub c_const: f64,
    #[serde(default)]
    pub base_seed: u64,
    /// When false all times are recorded as zero, which makes the report a
    /// pure function of the plan.
    #[serde(default = "default_true")]
    pub timing: bool,
    #[serde(default)]
    pub solver: SolverConfig,
}

impl BenchPlan {
    /// A plan on the bundled synthetic set with default grid and 100 trials.
    pub fn new(c: f64) -> Self {
        BenchPlan {
            dataset: None,
            format: DataFormat::Csv,
            label_column: 0,
            has_header: false,
            add_bias: false,
            sizes: Vec::new(),
            trials: default_trials(),
            methods: default_methods(),
            c,
            epsilon: default_epsilon(),
            delta: default_delta(),
            c_const: default_c_const(),
            base_seed: 0,
            timing: true,
            solver: SolverConfig::default(),
        }
    }

    /// Reads a plan from JSON, or TOML when the extension is `.toml`.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let value = read_plan_value(path)?;
        Self::from_value(value)
    }

    pub fn from_value(value: serde_json::Value) -> Result<Self> {
        Ok(serde_json::from_value(value)?)
    }

    fn coreset_params(&self) -> CoresetParams {
        CoresetParams::new(self.epsilon, self.delta).with_constant(self.c_const)
    }

    /// Checks everything that does not depend on the data.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(CoresetError::InvalidParameter("trials must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(CoresetError::InvalidParameter("no methods selected".into()));
        }
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(CoresetError::InvalidParameter(format!("C must be positive, got {}", self.c)));
        }
        self.coreset_params().validate()?;
        self.solver.validate()
    }

    /// The size grid for a dataset of `n` points.
    pub fn resolved_sizes(&self, n: usize) -> Result<Vec<usize>> {
        let sizes = if self.sizes.is_empty() {
            default_sizes(n)
        } else {
            self.sizes.clone()
        };
        if sizes.is_empty() {
            return Err(CoresetError::InvalidParameter(format!("no usable sizes for n = {n}")));
        }
        if sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CoresetError::InvalidParameter("sizes must be strictly increasing".into()));
        }
        if let Some(&s) = sizes.iter().find(|&&s| s < 2 || s > n) {
            return Err(CoresetError::InvalidParameter(format!("size {s} outside [2, {n}]")));
        }
        Ok(sizes)
    }

    /// Loads and preprocesses the configured dataset.
    pub fn load_dataset(&self) -> Result<LabeledDataset> {
        let Some(path) = &self.dataset else {
            return if self.add_bias {
                dataset::preprocess(&synthetic::bundled(), true)
            } else {
                Ok(synthetic::bundled_preprocessed())
            };
        };
        let raw = match self.format {
            DataFormat::Preprocessed => return dataset::load_preprocessed(path),
            DataFormat::Csv => dataset::load_csv(path, self.label_column, self.has_header)?,
            DataFormat::Libsvm => dataset::load_libsvm(path)?,
        };
        dataset::preprocess(&raw, self.add_bias)
    }
}

/// Parses a JSON or TOML plan file into a generic value so that command-line
/// overrides can be applied before deserializing.
pub fn read_plan_value(path: impl AsRef<Path>) -> Result<serde_json::Value> {
    let path = path.as_ref();
    let raw = std::fs::read_to_string(path).map_err(|e| CoresetError::io(path, e))?;
    if path.extension().is_some_and(|e| e == "toml") {
        toml::from_str(&raw).map_err(|e| CoresetError::Serde(e.to_string()))
    } else {
        Ok(serde_json::from_str(&raw)?)
    }
}

/// Ten log-spaced sizes from 0.1% to 10% of `n`, rounded, at least 2 and
/// deduplicated.
pub fn default_sizes(n: usize) -> Vec<usize> {
    let (lo, hi) = (0.001 * n as f64, 0.1 * n as f64);
    let mut sizes: Vec<usize> = (0..10)
        .map(|k| {
            let s = lo * (hi / lo).powf(k as f64 / 9.0);
            (s.round() as usize).clamp(2, n.max(2))
        })
        .collect();
    sizes.dedup();
    sizes.retain(|&s| s <= n);
    sizes
}

fn method_key(method: Method) -> u64 {
    match method {
        Method::Sensitivity => 1,
        Method::Uniform => 2,
    }
}

pub fn trial_seed(base_seed: u64, method: Method, size: usize, trial: usize) -> u64 {
    rng::derive_seed(base_seed, &[method_key(method), size as u64, trial as u64])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub method: Method,
    pub size: usize,
    pub trial: usize,
    pub seed: u64,
    /// NaN when the trial failed.
    pub rel_error: f64,
    pub build_time_s: f64,
    pub train_time_s: f64,
    pub full_train_time_s: f64,
    pub error: Option<String>,
}

impl BenchRecord {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    /// `(build + train) / full_train`, or 0 when timing was off.
    pub fn rel_time(&self) -> f64 {
        if self.full_train_time_s > 0.0 {
            (self.build_time_s + self.train_time_s) / self.full_train_time_s
        } else {
            0.0
        }
    }
}

fn seconds_since(start: Instant, timing: bool) -> f64 {
    if timing {
        start.elapsed().as_secs_f64()
    } else {
        0.0
    }
}

/// Loads the plan's dataset and runs it; see [`run_bench_on`].
pub fn run_bench(plan: &BenchPlan) -> Result<Vec<BenchRecord>> {
    plan.validate()?;
    let data = plan.load_dataset()?;
    run_bench_on(&data, plan)
}

/// Runs every (method, size, trial) cell of the plan on preprocessed data.
/// Failures inside a cell become records with `error` set; only an invalid
/// plan or a failing full-data reference is an error.
pub fn run_bench_on(data: &LabeledDataset, plan: &BenchPlan) -> Result<Vec<BenchRecord>> {
    plan.validate()?;
    if !data.is_preprocessed() {
        return Err(CoresetError::NotPreprocessed);
    }
    let sizes = plan.resolved_sizes(data.len())?;

    let start = Instant::now();
    let full = svm::train(data, plan.c, &plan.solver)?;
    let full_time = seconds_since(start, plan.timing);

    let mut records = Vec::with_capacity(plan.methods.len() * sizes.len() * plan.trials);
    for &method in &plan.methods {
        for &size in &sizes {
            for trial in 0..plan.trials {
                let seed = trial_seed(plan.base_seed, method, size, trial);
                let mut rec = BenchRecord {
                    method,
                    size,
                    trial,
                    seed,
                    rel_error: f64::NAN,
                    build_time_s: 0.0,
                    train_time_s: 0.0,
                    full_train_time_s: full_time,
                    error: None,
                };
                if let Err(e) = run_cell(data, plan, &full.w, &mut rec) {
                    rec.rel_error = f64::NAN;
                    rec.error = Some(e.to_string());
                }
                records.push(rec);
            }
        }
    }
    Ok(records)
}

fn run_cell(data: &LabeledDataset, plan: &BenchPlan, w_full: &[f64], rec: &mut BenchRecord) -> Result<()> {
    let start = Instant::now();
    let subsample = match rec.method {
        Method::Sensitivity => {
            let profile = compute_gamma(data)?;
            let params = plan.coreset_params().with_size(rec.size).with_seed(rec.seed);
            coreset::build_coreset(data, &profile, &params)?
        }
        Method::Uniform => coreset::build_uniform(data, rec.size, rec.seed)?,
    };
    let subsample = subsample.to_dataset();
    rec.build_time_s = seconds_since(start, plan.timing);

    let start = Instant::now();
    let model = svm::train(&subsample, plan.c, &plan.solver)?;
    rec.train_time_s = seconds_since(start, plan.timing);

    rec.rel_error = svm::relative_error(data, &model.w, w_full, plan.c)?;
    Ok(())
}

/// One row of the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub method: Method,
    pub size: usize,
    pub mean_rel_error: f64,
    pub sd_rel_error: f64,
    pub mean_rel_time: f64,
    pub sd_rel_time: f64,
    /// Number of successful trials aggregated.
    pub trials: usize,
}

pub const REPORT_HEADER: [&str; 7] = [
    "method",
    "size",
    "mean_rel_error",
    "sd_rel_error",
    "mean_rel_time",
    "sd_rel_time",
    "trials",
];

/// Mean and standard deviation with the `n - 1` denominator; a single value
/// has deviation 0.
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Groups successful records by (method, size). Groups in which every trial
/// failed are left out. Rows come out sorted by method, then size.
pub fn summarize(records: &[BenchRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(Method, usize), (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for r in records.iter().filter(|r| r.is_ok()) {
        let g = groups.entry((r.method, r.size)).or_default();
        g.0.push(r.rel_error);
        g.1.push(r.rel_time());
    }
    groups
        .into_iter()
        .map(|((method, size), (errs, times))| {
            let (mean_rel_error, sd_rel_error) = mean_sd(&errs);
            let (mean_rel_time, sd_rel_time) = mean_sd(&times);
            SummaryRow {
                method,
                size,
                mean_rel_error,
                sd_rel_error,
                mean_rel_time,
                sd_rel_time,
                trials: errs.len(),
            }
        })
        .collect()
}

pub fn emit_report(summary: &[SummaryRow], path: impl AsRef<Path>, format: ReportFormat) -> Result<()> {
    let path = path.as_ref();
    let mut rows = summary.to_vec();
    rows.sort_by_key(|r| (r.method, r.size));
    let file = File::create(path).map_err(|e| CoresetError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io_err = |e| CoresetError::io(path, e);
    match format {
        // Floats use the shortest representation that parses back exactly.
        ReportFormat::Csv => {
            writeln!(w, "{}", REPORT_HEADER.join(",")).map_err(io_err)?;
            for r in &rows {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{}",
                    r.method, r.size, r.mean_rel_error, r.sd_rel_error, r.mean_rel_time, r.sd_rel_time, r.trials
                )
                .map_err(io_err)?;
            }
        }
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut w, &rows)?;
            writeln!(w).map_err(io_err)?;
        }
    }
    w.flush().map_err(io_err)
}

pub fn read_report(path: impl AsRef<Path>, format: ReportFormat) -> Result<Vec<SummaryRow>> {
    let path = path.as_ref();
    match format {
        ReportFormat::Csv => {
            let mut r = csv::Reader::from_path(path).map_err(|e| CoresetError::Serde(e.to_string()))?;
            let header = r.headers().map_err(|e| CoresetError::Serde(e.to_string()))?;
            if !header.iter().eq(REPORT_HEADER) {
                return Err(CoresetError::parse(path, 1, "unexpected report header"));
            }
            r.deserialize()
                .enumerate()
                .map(|(i, row)| row.map_err(|e| CoresetError::parse(path, i + 2, e.to_string())))
                .collect()
        }
        ReportFormat::Json => {
            let raw = std::fs::read_to_string(path).map_err(|e| CoresetError::io(path, e))?;
            Ok(serde_json::from_str(&raw)?)
        }
    }
}

/// Per-trial records as CSV, for plotting spreads.
pub fn write_records(records: &[BenchRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| CoresetError::Serde(e.to_string()))?;
    for r in records {
        w.serialize(r).map_err(|e| CoresetError::Serde(e.to_string()))?;
    }
    w.flush().map_err(|e| CoresetError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn record(method: Method, size: usize, rel_error: f64) -> BenchRecord {
        BenchRecord {
            method,
            size,
            trial: 0,
            seed: 0,
            rel_error,
            build_time_s: 0.1,
            train_time_s: 0.1,
            full_train_time_s: 0.4,
            error: None,
        }
    }

    fn small_plan() -> (LabeledDataset, BenchPlan) {
        let raw = synthetic::two_gaussians(300, 3, 5).unwrap();
        let data = dataset::preprocess(&raw, false).unwrap();
        let mut plan = BenchPlan::new(0.1);
        plan.sizes = vec![10, 40];
        plan.trials = 3;
        plan.timing = false;
        (data, plan)
    }

    #[test]
    fn summary_of_one_record() {
        let s = summarize(&[record(Method::Uniform, 10, 0.25)]);
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].mean_rel_error, s[0].sd_rel_error, s[0].trials), (0.25, 0.0, 1));
        assert_abs_diff_eq!(s[0].mean_rel_time, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn sample_sd() {
        let s = summarize(&[record(Method::Uniform, 10, 0.1), record(Method::Uniform, 10, 0.3)]);
        assert_abs_diff_eq!(s[0].mean_rel_error, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(s[0].sd_rel_error, 0.141_421_356_237, epsilon = 1e-12);
    }

    #[test]
    fn summary_is_sorted_and_skips_failures() {
        let mut failed = record(Method::Sensitivity, 5, f64::NAN);
        failed.error = Some("boom".into());
        let s = summarize(&[
            record(Method::Uniform, 20, 0.1),
            record(Method::Sensitivity, 20, 0.1),
            record(Method::Uniform, 10, 0.1),
            failed,
        ]);
        let keys: Vec<_> = s.iter().map(|r| (r.method, r.size)).collect();
        assert_eq!(
            keys,
            [(Method::Sensitivity, 20), (Method::Uniform, 10), (Method::Uniform, 20)]
        );
    }

    #[test]
    fn default_grid() {
        assert_eq!(default_sizes(5000), [5, 8, 14, 23, 39, 65, 108, 180, 300, 500]);
        assert_eq!(default_sizes(100), [2, 4, 6, 10]);
        let g = default_sizes(30_000);
        assert_eq!((g.len(), g[0], g[9]), (10, 30, 3000));
    }

    #[test]
    fn size_validation() {
        let mut plan = BenchPlan::new(1.0);
        plan.sizes = vec![10, 10];
        assert!(plan.resolved_sizes(100).is_err());
        plan.sizes = vec![1, 10];
        assert!(plan.resolved_sizes(100).is_err());
        plan.sizes = vec![10, 101];
        assert!(plan.resolved_sizes(100).is_err());
        plan.sizes = vec![2, 100];
        assert_eq!(plan.resolved_sizes(100).unwrap(), [2, 100]);
        plan.trials = 0;
        assert!(plan.validate().is_err());
    }

    #[test]
    fn record_count_and_seed_uniqueness() {
        let (data, plan) = small_plan();
        let recs = run_bench_on(&data, &plan).unwrap();
        assert_eq!(recs.len(), 2 * 2 * 3);
        assert!(recs.iter().all(|r| r.is_ok() && r.rel_error >= 0.0));
        let mut seeds: Vec<u64> = recs.iter().map(|r| r.seed).collect();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), recs.len());
    }

    #[test]
    fn full_size_uniform_has_no_error() {
        let (data, mut plan) = small_plan();
        plan.methods = vec![Method::Uniform];
        plan.sizes = vec![data.len()];
        let recs = run_bench_on(&data, &plan).unwrap();
        assert!(recs.iter().all(|r| r.rel_error.abs() < 1e-12));
    }

    #[test]
    fn timing_fields() {
        let (data, mut plan) = small_plan();
        let off = run_bench_on(&data, &plan).unwrap();
        assert!(off.iter().all(|r| r.build_time_s == 0.0 && r.rel_time() == 0.0));
        plan.timing = true;
        let on = run_bench_on(&data, &plan).unwrap();
        assert!(on.iter().all(|r| r.build_time_s > 0.0 && r.train_time_s > 0.0 && r.full_train_time_s > 0.0));
        let errs = |rs: &[BenchRecord]| rs.iter().map(|r| r.rel_error).collect::<Vec<_>>();
        assert_eq!(errs(&off), errs(&on));
    }

    #[test]
    fn plan_from_partial_configs() {
        let json = serde_json::json!({"C": 0.5, "sizes": [5, 10], "methods": ["uniform"]});
        let plan = BenchPlan::from_value(json).unwrap();
        assert_eq!((plan.c, plan.trials, plan.methods.clone()), (0.5, 100, vec![Method::Uniform]));
        assert_eq!(plan.solver, SolverConfig::default());

        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("plan.toml");
        std::fs::write(&p, "C = 0.01\ntrials = 7\n[solver]\nwindow = 20\n").unwrap();
        let plan = BenchPlan::from_file(&p).unwrap();
        assert_eq!((plan.trials, plan.solver.window), (7, 20));

        assert!(BenchPlan::from_value(serde_json::json!({"trials": 3})).is_err());
    }

    #[test]
    fn report_roundtrip() {
        let (data, plan) = small_plan();
        let summary = summarize(&run_bench_on(&data, &plan).unwrap());
        let dir = tempfile::tempdir().unwrap();
        for format in [ReportFormat::Csv, ReportFormat::Json] {
            let p = dir.path().join("report");
            emit_report(&summary, &p, format).unwrap();
            assert_eq!(read_report(&p, format).unwrap(), summary);
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.csv");
        emit_report(&[], &p, ReportFormat::Csv).unwrap();
        assert_eq!(
            std::fs::read_to_string(&p).unwrap(),
            "method,size,mean_rel_error,sd_rel_error,mean_rel_time,sd_rel_time,trials\n"
        );
        assert!(read_report(&p, ReportFormat::Csv).unwrap().is_empty());
    }
}
