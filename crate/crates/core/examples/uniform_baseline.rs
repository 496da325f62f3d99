//! Class-stratified uniform sampling next to sensitivity sampling at the
//! same size.

use svm_coreset::coreset::{build_coreset, build_uniform, CoresetParams};
use svm_coreset::dataset::dataset_stats;
use svm_coreset::sensitivity::compute_gamma;
use svm_coreset::{svm, synthetic};

fn main() -> svm_coreset::Result<()> {
    let data = synthetic::bundled_preprocessed();
    let profile = compute_gamma(&data)?;
    let c = 0.01;
    let cfg = svm::SolverConfig::default();
    let full = svm::train(&data, c, &cfg)?;

    println!("size  uniform  sensitivity   (mean relative error over 20 seeds)");
    for size in [20, 80, 320] {
        let (mut u, mut s) = (0.0, 0.0);
        for seed in 0..20 {
            let uc = build_uniform(&data, size, seed)?;
            let sc = build_coreset(&data, &profile, &CoresetParams::default().with_size(size).with_seed(seed))?;
            u += svm::relative_error(&data, &svm::train(&uc.to_dataset(), c, &cfg)?.w, &full.w, c)?;
            s += svm::relative_error(&data, &svm::train(&sc.to_dataset(), c, &cfg)?.w, &full.w, c)?;
        }
        println!("{size:>4}  {:.5}  {:.5}", u / 20.0, s / 20.0);
    }

    let uc = build_uniform(&data, 100, 0)?;
    let counts = dataset_stats(&uc.to_dataset()).class_counts();
    println!("uniform sample of 100 keeps class shares: {counts:?}");
    Ok(())
}
