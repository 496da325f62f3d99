//! Train on the full data and on a coreset, then compare objectives.

use svm_coreset::coreset::{build_coreset, CoresetParams};
use svm_coreset::sensitivity::compute_gamma;
use svm_coreset::svm::{self, SolverConfig, SvmModel};
use svm_coreset::synthetic;

fn accuracy(model: &SvmModel, data: &svm_coreset::LabeledDataset) -> f64 {
    let hits = data
        .points()
        .iter()
        .filter(|p| model.predict(&p.features) == p.label.sign())
        .count();
    hits as f64 / data.len() as f64
}

fn main() -> svm_coreset::Result<()> {
    let data = synthetic::bundled_preprocessed();
    let c = 0.1;
    let cfg = SolverConfig {
        record_trace: true,
        ..Default::default()
    };

    let start = std::time::Instant::now();
    let full = svm::train(&data, c, &cfg)?;
    let full_time = start.elapsed();
    println!(
        "full:    f = {:.4} after {} iterations in {:.1?}, accuracy {:.3}",
        full.final_objective,
        full.iterations_run,
        full_time,
        accuracy(&full, &data)
    );

    let profile = compute_gamma(&data)?;
    let cs = build_coreset(&data, &profile, &CoresetParams::default().with_size(250).with_seed(5))?;
    let start = std::time::Instant::now();
    let small = svm::train(&cs.to_dataset(), c, &cfg)?;
    println!(
        "coreset: {} points, trained in {:.1?}, f(P, w) = {:.4}, relative error {:.4}, accuracy {:.3}",
        cs.len(),
        start.elapsed(),
        svm::evaluate_objective(&data, &small.w, c)?,
        svm::relative_error(&data, &small.w, &full.w, c)?,
        accuracy(&small, &data)
    );

    if let Some(trace) = &full.objective_trace {
        let picks: Vec<String> = [0, 10, 100, trace.len() - 1]
            .iter()
            .filter(|&&k| k < trace.len())
            .map(|&k| format!("{k}:{:.3}", trace[k]))
            .collect();
        println!("objective trace {}", picks.join(" "));
    }

    let out = std::env::temp_dir().join("svm-coreset-model.json");
    small.save(&out)?;
    println!("wrote {}", out.display());
    Ok(())
}
