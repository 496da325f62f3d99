//! Merge-and-reduce composition of coresets over a stream.
//!
//! Reducing a weighted set uses the unweighted bound with `n` replaced by the
//! total weight `W` and each term scaled by the point's weight:
//!
//! ```text
//! gamma_i = u_i / W * (1 + ln W + |x_i| ln^2 W)
//! ```
//!
//! Sampled weights are multiplied by the incoming `u_i`, so the estimator
//! stays unbiased for the weighted objective. With unit weights this is
//! exactly [`build_coreset`](super::build_coreset).

use crate::dataset::{LabeledDataset, LabeledPoint, NORM_SLACK};
use crate::error::{CoresetError, Result};
use crate::rng;

use super::{importance_sample, sample_size, Coreset, CoresetParams, Provenance};

/// Concatenates two coresets. Weights are kept and population sizes add.
pub fn merge(a: &Coreset, b: &Coreset) -> Result<LabeledDataset> {
    if a.d != b.d {
        return Err(CoresetError::DimensionMismatch {
            expected: a.d,
            found: b.d,
        });
    }
    let points: Vec<LabeledPoint> = a.points.iter().chain(&b.points).cloned().collect();
    Ok(LabeledDataset::from_parts(
        points,
        a.d,
        a.preprocessed && b.preprocessed,
        a.source_n + b.source_n,
    ))
}

fn pass_through(ws: &LabeledDataset, params: &CoresetParams, t: Option<f64>) -> Coreset {
    let n = ws.len();
    let mut provenance = Provenance::sensitivity(params, t.unwrap_or(f64::NAN));
    provenance.t = t;
    Coreset {
        points: ws.points().to_vec(),
        indices: (0..n).collect(),
        m: n,
        distinct: n,
        source_n: ws.source_n(),
        d: ws.dim(),
        preprocessed: ws.is_preprocessed(),
        provenance,
    }
}

/// Weighted sensitivity bounds and their total.
pub fn weighted_gamma(ws: &LabeledDataset) -> (Vec<f64>, f64) {
    let total_weight = ws.total_weight();
    let ln = total_weight.ln();
    let gamma: Vec<f64> = ws
        .points()
        .iter()
        .map(|p| p.weight * (1.0 + ln + p.norm() * ln * ln) / total_weight)
        .collect();
    let t = gamma.iter().sum();
    (gamma, t)
}

/// Resamples a weighted set down to `m` draws. Sets with total weight
/// below 3, or no larger than `m`, are passed through unchanged.
pub fn reduce(ws: &LabeledDataset, params: &CoresetParams) -> Result<Coreset> {
    params.validate()?;
    if let Some(p) = ws.points().iter().find(|p| !(p.weight > 0.0)) {
        return Err(CoresetError::InvalidData(format!(
            "reduce needs strictly positive weights, got {}",
            p.weight
        )));
    }
    let total_weight = ws.total_weight();
    if !(total_weight > 0.0) {
        return Err(CoresetError::InvalidData("reduce needs positive total weight".into()));
    }
    if total_weight < 3.0 {
        return Ok(pass_through(ws, params, None));
    }
    let (gamma, t) = weighted_gamma(ws);
    let m = match params.explicit_size {
        Some(m) => m,
        None => sample_size(t, ws.dim(), params)?,
    };
    if m >= ws.len() {
        return Ok(pass_through(ws, params, Some(t)));
    }
    importance_sample(ws, &gamma, t, m, params, Provenance::sensitivity(params, t))
}

/// Seed for the `k`-th reduction (in execution order) of a stream. The
/// first reduction uses the base seed itself.
pub fn reduce_seed(base: u64, k: u64) -> u64 {
    if k == 0 {
        base
    } else {
        rng::derive_seed(base, &[0x5eed_57ea, k])
    }
}

struct Tree {
    params: CoresetParams,
    levels: Vec<Option<Coreset>>,
    reductions: u64,
}

impl Tree {
    fn reduce(&mut self, ws: &LabeledDataset) -> Result<Coreset> {
        let mut params = self.params.clone();
        params.seed = reduce_seed(self.params.seed, self.reductions);
        self.reductions += 1;
        reduce(ws, &params)
    }

    fn push(&mut self, mut carry: Coreset) -> Result<()> {
        let mut h = 0;
        loop {
            if h == self.levels.len() {
                self.levels.push(None);
            }
            match self.levels[h].take() {
                None => {
                    self.levels[h] = Some(carry);
                    return Ok(());
                }
                Some(sibling) => {
                    let merged = merge(&sibling, &carry)?;
                    carry = self.reduce(&merged)?;
                    h += 1;
                }
            }
        }
    }
}

/// Streaming coreset over preprocessed points (every norm at most one).
///
/// Points are buffered into blocks of `block_size`; each block is reduced
/// and pushed into a binary tree in which two coresets of equal height are
/// merged and reduced into one of the next height. At the end of the stream
/// the partial block and all occupied levels are merged and reduced once.
/// At most one coreset per level is held, so memory is
/// `O(m log(n / block_size))`.
pub fn stream_coreset<I>(source: I, block_size: usize, params: &CoresetParams) -> Result<Coreset>
where
    I: IntoIterator<Item = LabeledPoint>,
{
    params.validate()?;
    if block_size < 3 {
        return Err(CoresetError::InvalidParameter(format!(
            "block size must be at least 3, got {block_size}"
        )));
    }
    let mut tree = Tree {
        params: params.clone(),
        levels: Vec::new(),
        reductions: 0,
    };
    let mut d = None;
    let mut buffer: Vec<LabeledPoint> = Vec::with_capacity(block_size);
    for p in source {
        let dim = *d.get_or_insert(p.features.len());
        if p.features.len() != dim {
            return Err(CoresetError::DimensionMismatch {
                expected: dim,
                found: p.features.len(),
            });
        }
        if p.norm() > 1.0 + NORM_SLACK {
            return Err(CoresetError::InvalidData(format!(
                "stream point norm {} exceeds the unit ball; preprocess first",
                p.norm()
            )));
        }
        buffer.push(p);
        if buffer.len() == block_size {
            let block = block_dataset(std::mem::take(&mut buffer), dim)?;
            let cs = tree.reduce(&block)?;
            tree.push(cs)?;
            buffer.reserve(block_size);
        }
    }
    let Some(dim) = d else {
        return Err(CoresetError::InvalidData("empty stream".into()));
    };

    let mut residual: Vec<Coreset> = Vec::new();
    if !buffer.is_empty() {
        let block = block_dataset(buffer, dim)?;
        residual.push(tree.reduce(&block)?);
    }
    residual.extend(tree.levels.drain(..).flatten());
    if residual.len() == 1 {
        return Ok(residual.pop().expect("one residual"));
    }
    let merged = LabeledDataset::from_parts(
        residual.iter().flat_map(|c| c.points.iter().cloned()).collect(),
        dim,
        residual.iter().all(|c| c.preprocessed),
        residual.iter().map(|c| c.source_n).sum(),
    );
    tree.reduce(&merged)
}

fn block_dataset(points: Vec<LabeledPoint>, d: usize) -> Result<LabeledDataset> {
    let n = points.len();
    LabeledDataset::with_dim(points, d)?.with_source_n(n).assume_preprocessed()
}
