//! Merge-and-reduce over a stream of blocks versus one batch coreset.

use svm_coreset::coreset::{build_coreset, stream_coreset, CoresetParams};
use svm_coreset::sensitivity::compute_gamma;
use svm_coreset::{svm, synthetic};

fn main() -> svm_coreset::Result<()> {
    let data = synthetic::bundled_preprocessed();
    let c = 0.01;
    let cfg = svm::SolverConfig::default();
    let full = svm::train(&data, c, &cfg)?;
    let profile = compute_gamma(&data)?;

    for block in [250, 500, 1000, 5000] {
        let params = CoresetParams::default().with_size(200).with_seed(9);
        let cs = stream_coreset(data.points().iter().cloned(), block, &params)?;
        let model = svm::train(&cs.to_dataset(), c, &cfg)?;
        println!(
            "block {block:>4}: {:>3} points, weight {:.0}, relative error {:.4}",
            cs.len(),
            cs.total_weight(),
            svm::relative_error(&data, &model.w, &full.w, c)?
        );
    }
    let batch = build_coreset(&data, &profile, &CoresetParams::default().with_size(200).with_seed(9))?;
    let model = svm::train(&batch.to_dataset(), c, &cfg)?;
    println!(
        "batch     : {:>3} points, relative error {:.4}",
        batch.len(),
        svm::relative_error(&data, &model.w, &full.w, c)?
    );
    Ok(())
}
