//! Sensitivity-sampling coresets for soft-margin linear SVMs.
//!
//! The pipeline is: load a labeled dataset, center it and scale it into the
//! unit ball ([`dataset`]), bound every point's sensitivity in closed form
//! ([`sensitivity`]), draw a weighted subset proportional to those bounds
//! ([`coreset`]), and train a linear SVM on the weighted subset ([`svm`]).
//! [`bench`] compares the result against class-stratified uniform sampling
//! and full-data training over repeated seeded trials.
//!
//! ```
//! use svm_coreset::{coreset, sensitivity, svm, synthetic};
//!
//! let data = synthetic::bundled_preprocessed();
//! let profile = sensitivity::compute_gamma(&data).unwrap();
//! let params = coreset::CoresetParams::default().with_size(200).with_seed(7);
//! let cs = coreset::build_coreset(&data, &profile, &params).unwrap();
//! let model = svm::train(&cs.to_dataset(), 1.0, &svm::SolverConfig::default()).unwrap();
//! assert_eq!(model.w.len(), data.dim());
//! ```

// Negated float comparisons are how NaN gets rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod coreset;
pub mod dataset;
pub mod error;
pub mod rng;
pub mod sensitivity;
pub mod svm;
pub mod synthetic;

pub use coreset::{Coreset, CoresetParams, Method};
pub use dataset::{Label, LabeledDataset, LabeledPoint};
pub use error::{CoresetError, Result};
pub use sensitivity::SensitivityProfile;
pub use svm::{SolverConfig, SvmModel};
