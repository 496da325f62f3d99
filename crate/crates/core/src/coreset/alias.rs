//! Vose's alias method for repeated draws from a fixed discrete distribution.

use rand::RngCore;

use crate::error::{CoresetError, Result};
use crate::rng;

#[derive(Debug, Clone)]
pub struct AliasTable {
    prob: Vec<f64>,
    alias: Vec<usize>,
}

impl AliasTable {
    /// Builds the table from nonnegative weights with a positive sum.
    pub fn new(weights: &[f64]) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(CoresetError::InvalidData("alias table needs at least one weight".into()));
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(CoresetError::InvalidData("alias weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(CoresetError::InvalidData("alias weights sum to zero".into()));
        }

        let mut scaled: Vec<f64> = weights.iter().map(|w| w * n as f64 / total).collect();
        let mut prob = vec![0.0; n];
        let mut alias: Vec<usize> = (0..n).collect();
        let (mut small, mut large): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| scaled[i] < 1.0);

        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            prob[s] = scaled[s];
            alias[s] = l;
            scaled[l] -= 1.0 - scaled[s];
            if scaled[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        // Leftovers are within rounding of one.
        for i in large.into_iter().chain(small) {
            prob[i] = if weights[i] > 0.0 { 1.0 } else { 0.0 };
        }
        Ok(AliasTable { prob, alias })
    }

    pub fn len(&self) -> usize {
        self.prob.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prob.is_empty()
    }

    /// One draw: a uniform column, then a biased coin against its alias.
    #[inline]
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> usize {
        let i = rng::index(rng, self.prob.len());
        if rng::unit_f64(rng) < self.prob[i] {
            i
        } else {
            self.alias[i]
        }
    }

    /// Multinomial counts of `m` independent draws.
    pub fn counts<R: RngCore + ?Sized>(&self, m: usize, rng: &mut R) -> Vec<usize> {
        let mut k = vec![0; self.prob.len()];
        for _ in 0..m {
            k[self.sample(rng)] += 1;
        }
        k
    }

    /// Probability of each outcome implied by the table.
    pub fn implied_probabilities(&self) -> Vec<f64> {
        let n = self.prob.len() as f64;
        let mut p: Vec<f64> = self.prob.iter().map(|q| q / n).collect();
        for (i, &a) in self.alias.iter().enumerate() {
            p[a] += (1.0 - self.prob[i]) / n;
        }
        p
    }
}
