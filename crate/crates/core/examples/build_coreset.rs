//! Sample a sensitivity coreset and check how well its weighted objective
//! tracks the full objective on random queries.

use svm_coreset::coreset::{self, sample_size, CoresetParams};
use svm_coreset::sensitivity::{compute_gamma, feasible_queries};
use svm_coreset::{svm, synthetic};

fn main() -> svm_coreset::Result<()> {
    let data = synthetic::bundled_preprocessed();
    let profile = compute_gamma(&data)?;

    let params = CoresetParams::new(0.1, 0.1);
    println!(
        "sample size from the bound at eps = 0.1, delta = 0.1: {} (n = {})",
        sample_size(profile.total, data.dim(), &params)?,
        data.len()
    );

    let queries = feasible_queries(&data, 20, 100_000, 3);
    for m in [50, 200, 800] {
        let params = CoresetParams::default().with_size(m).with_seed(11);
        let cs = coreset::build_coreset(&data, &profile, &params)?;
        let ws = cs.to_dataset();
        let mut worst: f64 = 0.0;
        for w in &queries {
            let full = svm::evaluate_objective(&data, w, 1.0)?;
            let approx = svm::evaluate_objective(&ws, w, 1.0)?;
            worst = worst.max((full - approx).abs() / full);
        }
        println!(
            "m = {m:>3}: {} distinct points, total weight {:.0}, worst relative error {worst:.3}",
            cs.len(),
            cs.total_weight()
        );
    }

    let out = std::env::temp_dir().join("svm-coreset-sample.csv");
    let cs = coreset::build_coreset(&data, &profile, &CoresetParams::default().with_size(200))?;
    coreset::write_coreset(&cs, &out)?;
    let back = coreset::read_coreset(&out)?;
    println!("wrote {} ({} rows, seed {})", out.display(), back.len(), back.provenance.seed);
    Ok(())
}
