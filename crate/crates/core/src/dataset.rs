//! Labeled point sets: loading, validation and preprocessing.
//!
//! The sensitivity bounds in [`crate::sensitivity`] assume every point lies in
//! the unit ball and that the data is centered at its mean. [`preprocess`]
//! establishes both by subtracting the weighted mean and dividing by the
//! largest resulting norm. Optionally a bias coordinate is appended: features
//! are scaled by `1/sqrt(2)` and a constant `1/sqrt(2)` coordinate is added,
//! which keeps every norm at most one.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CoresetError, Result};

/// Norm slack tolerated by the unit-ball invariant.
pub const NORM_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    /// `+1.0` or `-1.0`.
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Label::Negative => -1.0,
            Label::Positive => 1.0,
        }
    }

    /// Accepts `-1`, `0` (mapped to negative) and `+1`.
    pub fn from_value(v: f64) -> Option<Label> {
        if v == 1.0 {
            Some(Label::Positive)
        } else if v == -1.0 || v == 0.0 {
            Some(Label::Negative)
        } else {
            None
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Label::Negative => -1,
            Label::Positive => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPoint {
    pub features: Vec<f64>,
    pub label: Label,
    pub weight: f64,
}

impl LabeledPoint {
    pub fn new(features: Vec<f64>, label: Label) -> Self {
        LabeledPoint {
            features,
            label,
            weight: 1.0,
        }
    }

    pub fn weighted(features: Vec<f64>, label: Label, weight: f64) -> Self {
        LabeledPoint {
            features,
            label,
            weight,
        }
    }

    pub fn norm(&self) -> f64 {
        norm(&self.features)
    }

    /// `y * <w, x>`
    #[inline]
    pub fn margin(&self, w: &[f64]) -> f64 {
        self.label.sign() * dot(&self.features, w)
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// The affine map applied by [`preprocess`]: `x -> (x - mean) / scale`,
/// followed by the bias embedding when `bias` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transform {
    pub mean: Vec<f64>,
    pub scale: f64,
    pub bias: bool,
}

impl Transform {
    /// Fits the centering and max-norm scaling for `ds`. A dataset that is
    /// all zero after centering gets `scale = 1`.
    pub fn fit(ds: &LabeledDataset, bias: bool) -> Result<Transform> {
        if ds.is_empty() {
            return Err(CoresetError::TooFewPoints { n: 0, required: 1 });
        }
        let d = ds.dim();
        let total = ds.total_weight();
        if !(total > 0.0) {
            return Err(CoresetError::InvalidData("total weight must be positive".into()));
        }
        let mut mean = vec![0.0; d];
        for p in &ds.points {
            for (m, x) in mean.iter_mut().zip(&p.features) {
                *m += p.weight * x;
            }
        }
        mean.iter_mut().for_each(|m| *m /= total);

        let max_norm = ds
            .points
            .iter()
            .map(|p| {
                p.features
                    .iter()
                    .zip(&mean)
                    .map(|(x, m)| (x - m) * (x - m))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        let scale = if max_norm > 0.0 { max_norm } else { 1.0 };
        Ok(Transform { mean, scale, bias })
    }

    pub fn input_dim(&self) -> usize {
        self.mean.len()
    }

    pub fn output_dim(&self) -> usize {
        self.mean.len() + usize::from(self.bias)
    }

    pub fn apply_point(&self, x: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = x
            .iter()
            .zip(&self.mean)
            .map(|(v, m)| (v - m) / self.scale)
            .collect();
        if self.bias {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            out.iter_mut().for_each(|v| *v *= h);
            out.push(h);
        }
        out
    }

    /// Applies the map to every point. The preprocessed flag is left as is.
    pub fn apply(&self, ds: &LabeledDataset) -> Result<LabeledDataset> {
        if ds.dim() != self.input_dim() {
            return Err(CoresetError::DimensionMismatch {
                expected: self.input_dim(),
                found: ds.dim(),
            });
        }
        let points = ds
            .points
            .iter()
            .map(|p| LabeledPoint::weighted(self.apply_point(&p.features), p.label, p.weight))
            .collect();
        Ok(LabeledDataset {
            points,
            d: self.output_dim(),
            preprocessed: ds.preprocessed,
            source_n: ds.source_n,
            transform: ds.transform.clone(),
        })
    }
}

/// An ordered, immutable set of labeled (and possibly weighted) points.
///
/// `source_n` is the size of the population the points stand for. It equals
/// the point count for raw data and the original dataset size for coresets;
/// the weighted objective divides the regularizer by it.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    points: Vec<LabeledPoint>,
    d: usize,
    preprocessed: bool,
    source_n: usize,
    transform: Option<Transform>,
}

impl LabeledDataset {
    /// Builds a raw dataset. All points must share one dimension and carry
    /// finite features and nonnegative finite weights.
    pub fn new(points: Vec<LabeledPoint>) -> Result<Self> {
        let d = points.first().map_or(0, |p| p.features.len());
        Self::with_dim(points, d)
    }

    /// Like [`LabeledDataset::new`] but with an explicit dimension, so that
    /// empty sets keep their shape.
    pub fn with_dim(points: Vec<LabeledPoint>, d: usize) -> Result<Self> {
        for p in &points {
            if p.features.len() != d {
                return Err(CoresetError::DimensionMismatch {
                    expected: d,
                    found: p.features.len(),
                });
            }
            if p.features.iter().any(|x| !x.is_finite()) {
                return Err(CoresetError::InvalidData("non-finite feature value".into()));
            }
            if !(p.weight >= 0.0) || !p.weight.is_finite() {
                return Err(CoresetError::InvalidData(format!(
                    "weight must be finite and nonnegative, got {}",
                    p.weight
                )));
            }
        }
        let n = points.len();
        Ok(LabeledDataset {
            points,
            d,
            preprocessed: false,
            source_n: n,
            transform: None,
        })
    }

    /// Convenience constructor from `(features, ±1 label)` rows.
    pub fn from_rows<I, V>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (V, i8)>,
        V: Into<Vec<f64>>,
    {
        let points = rows
            .into_iter()
            .map(|(x, y)| {
                let label = Label::from_value(f64::from(y))
                    .ok_or_else(|| CoresetError::InvalidData(format!("label {y} not in {{-1, 0, +1}}")))?;
                Ok(LabeledPoint::new(x.into(), label))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    pub fn points(&self) -> &[LabeledPoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<LabeledPoint> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn is_preprocessed(&self) -> bool {
        self.preprocessed
    }

    pub fn source_n(&self) -> usize {
        self.source_n
    }

    pub fn transform(&self) -> Option<&Transform> {
        self.transform.as_ref()
    }

    pub fn total_weight(&self) -> f64 {
        self.points.iter().map(|p| p.weight).sum()
    }

    /// Sets the population size used by the weighted objective.
    pub fn with_source_n(mut self, source_n: usize) -> Self {
        self.source_n = source_n;
        self
    }

    /// Marks the dataset as satisfying the centering and unit-ball
    /// assumptions without transforming it. Fails if a norm exceeds one.
    pub fn assume_preprocessed(mut self) -> Result<Self> {
        if let Some(p) = self.points.iter().find(|p| p.norm() > 1.0 + NORM_SLACK) {
            return Err(CoresetError::InvalidData(format!(
                "point norm {} exceeds the unit ball",
                p.norm()
            )));
        }
        self.preprocessed = true;
        Ok(self)
    }

    /// A copy with every weight reset to one and `source_n = n`.
    pub fn unweighted(&self) -> Self {
        let mut out = self.clone();
        out.points.iter_mut().for_each(|p| p.weight = 1.0);
        out.source_n = out.points.len();
        out
    }

    /// Rows selected by index, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        LabeledDataset {
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
            d: self.d,
            preprocessed: self.preprocessed,
            source_n: indices.len(),
            transform: self.transform.clone(),
        }
    }

    pub(crate) fn from_parts(
        points: Vec<LabeledPoint>,
        d: usize,
        preprocessed: bool,
        source_n: usize,
    ) -> Self {
        LabeledDataset {
            points,
            d,
            preprocessed,
            source_n,
            transform: None,
        }
    }
}

/// Centers, scales to the unit ball, and optionally embeds a bias coordinate.
pub fn preprocess(ds: &LabeledDataset, add_bias: bool) -> Result<LabeledDataset> {
    if ds.preprocessed {
        return Err(CoresetError::AlreadyPreprocessed);
    }
    let transform = Transform::fit(ds, add_bias)?;
    let mut out = transform.apply(ds)?;
    out.preprocessed = true;
    out.transform = Some(transform);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub n: usize,
    pub d: usize,
    pub positives: usize,
    pub negatives: usize,
    /// Average point norm.
    pub mean_norm: f64,
    pub max_norm: f64,
    /// Norm of the weighted feature mean.
    pub centroid_norm: f64,
    pub total_weight: f64,
}

pub fn dataset_stats(ds: &LabeledDataset) -> DatasetStats {
    let d = ds.dim();
    let mut positives = 0;
    let mut norm_sum = 0.0;
    let mut max_norm: f64 = 0.0;
    let mut weight = 0.0;
    let mut centroid = vec![0.0; d];
    for p in ds.points() {
        if p.label == Label::Positive {
            positives += 1;
        }
        let nrm = p.norm();
        norm_sum += nrm;
        max_norm = max_norm.max(nrm);
        weight += p.weight;
        for (c, x) in centroid.iter_mut().zip(&p.features) {
            *c += p.weight * x;
        }
    }
    let n = ds.len();
    let centroid_norm = if weight > 0.0 {
        norm(&centroid) / weight
    } else {
        0.0
    };
    DatasetStats {
        n,
        d,
        positives,
        negatives: n - positives,
        mean_norm: if n > 0 { norm_sum / n as f64 } else { 0.0 },
        max_norm,
        centroid_norm,
        total_weight: weight,
    }
}

impl DatasetStats {
    pub fn class_counts(&self) -> BTreeMap<i8, usize> {
        BTreeMap::from([(-1, self.negatives), (1, self.positives)])
    }
}

/// Reads a comma-separated file. The label column may hold `{0, 1}` or
/// `{-1, +1}`; every other column is a feature.
pub fn load_csv(path: impl AsRef<Path>, label_column: usize, has_header: bool) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| CoresetError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .trim(csv::Trim::All)
        .from_reader(BufReader::new(file));

    let mut points = Vec::new();
    let mut width = None;
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        match width {
            None => {
                if label_column >= record.len() {
                    return Err(CoresetError::parse(
                        path,
                        line,
                        format!("label column {label_column} out of range for {} columns", record.len()),
                    ));
                }
                width = Some(record.len());
            }
            Some(w) if w != record.len() => {
                return Err(CoresetError::parse(
                    path,
                    line,
                    format!("expected {w} columns, found {}", record.len()),
                ));
            }
            _ => {}
        }
        let mut features = Vec::with_capacity(record.len() - 1);
        let mut label = None;
        for (col, field) in record.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| CoresetError::parse(path, line, format!("cannot parse {field:?} as a number")))?;
            if col == label_column {
                label = Some(
                    Label::from_value(v)
                        .ok_or_else(|| CoresetError::parse(path, line, format!("label {field} not in {{-1, 0, +1}}")))?,
                );
            } else {
                features.push(v);
            }
        }
        points.push(LabeledPoint::new(features, label.expect("label column checked")));
    }
    if points.is_empty() {
        return Err(CoresetError::TooFewPoints { n: 0, required: 1 });
    }
    LabeledDataset::new(points)
}

fn csv_error(path: &Path, e: csv::Error) -> CoresetError {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CoresetError::io(path, io),
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => CoresetError::parse(path, line, format!("expected {expected_len} columns, found {len}")),
        other => CoresetError::parse(path, line, format!("{other:?}")),
    }
}

/// Reads the sparse `label index:value ...` format with 1-based, strictly
/// ascending indices. The dimension is the largest index seen.
pub fn load_libsvm(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| CoresetError::io(path, e))?;
    let mut rows: Vec<(Label, Vec<(usize, f64)>)> = Vec::new();
    let mut d = 0;
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.map_err(|e| CoresetError::io(path, e))?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let label_tok = tokens.next().expect("nonempty line");
        let label = label_tok
            .parse::<f64>()
            .ok()
            .and_then(Label::from_value)
            .ok_or_else(|| CoresetError::parse(path, lineno, format!("bad label {label_tok:?}")))?;
        let mut entries = Vec::new();
        let mut last = 0;
        for tok in tokens {
            let (idx, val) = tok
                .split_once(':')
                .ok_or_else(|| CoresetError::parse(path, lineno, format!("malformed token {tok:?}")))?;
            let idx: usize = idx
                .parse()
                .map_err(|_| CoresetError::parse(path, lineno, format!("bad index in {tok:?}")))?;
            let val: f64 = val
                .parse()
                .map_err(|_| CoresetError::parse(path, lineno, format!("bad value in {tok:?}")))?;
            if idx == 0 || idx <= last {
                return Err(CoresetError::parse(
                    path,
                    lineno,
                    format!("indices must be 1-based and ascending, got {idx} after {last}"),
                ));
            }
            last = idx;
            entries.push((idx, val));
        }
        d = d.max(last);
        rows.push((label, entries));
    }
    if rows.is_empty() {
        return Err(CoresetError::parse(path, 0, "empty file"));
    }
    let points = rows
        .into_iter()
        .map(|(label, entries)| {
            let mut x = vec![0.0; d];
            for (i, v) in entries {
                x[i - 1] = v;
            }
            LabeledPoint::new(x, label)
        })
        .collect();
    LabeledDataset::with_dim(points, d)
}

/// Writes `label,f1,...,fd` with shortest round-trip float formatting.
pub fn write_csv(ds: &LabeledDataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| CoresetError::io(path, e))?;
    let mut out = BufWriter::new(file);
    let header = std::iter::once("label".to_string())
        .chain((1..=ds.dim()).map(|j| format!("f{j}")))
        .collect::<Vec<_>>()
        .join(",");
    let write = |out: &mut BufWriter<File>| -> std::io::Result<()> {
        writeln!(out, "{header}")?;
        for p in ds.points() {
            write!(out, "{}", p.label.as_i8())?;
            for x in &p.features {
                write!(out, ",{x}")?;
            }
            writeln!(out)?;
        }
        out.flush()
    };
    write(&mut out).map_err(|e| CoresetError::io(path, e))
}

/// Sidecar describing how a preprocessed CSV was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreprocessMeta {
    pub n: usize,
    pub d: usize,
    pub transform: Transform,
}

pub fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_os_string();
    s.push(".meta.json");
    s.into()
}

/// Writes the CSV and a `<path>.meta.json` sidecar holding the transform.
pub fn write_preprocessed(ds: &LabeledDataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let transform = match (&ds.transform, ds.preprocessed) {
        (Some(t), true) => t.clone(),
        _ => return Err(CoresetError::NotPreprocessed),
    };
    write_csv(ds, path)?;
    let meta = PreprocessMeta {
        n: ds.len(),
        d: ds.dim(),
        transform,
    };
    let side = sidecar_path(path);
    let json = serde_json::to_string_pretty(&meta)?;
    std::fs::write(&side, json).map_err(|e| CoresetError::io(&side, e))
}

/// Reads a file written by [`write_preprocessed`]; the result is flagged
/// preprocessed and carries its transform.
pub fn load_preprocessed(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let side = sidecar_path(path);
    let raw = std::fs::read_to_string(&side).map_err(|e| CoresetError::io(&side, e))?;
    let meta: PreprocessMeta = serde_json::from_str(&raw)?;
    let ds = load_csv(path, 0, true)?;
    if ds.dim() != meta.d {
        return Err(CoresetError::DimensionMismatch {
            expected: meta.d,
            found: ds.dim(),
        });
    }
    let mut ds = ds.assume_preprocessed()?;
    ds.transform = Some(meta.transform);
    Ok(ds)
}
