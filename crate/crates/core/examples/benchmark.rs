//! Repeated-trial comparison of sensitivity and uniform subsamples, written
//! as a CSV report.
//!
//!     cargo run --example benchmark [trials]

use svm_coreset::bench::{self, BenchPlan, ReportFormat};

fn main() -> svm_coreset::Result<()> {
    let trials = std::env::args().nth(1).map_or(20, |s| s.parse().expect("trial count"));
    let mut plan = BenchPlan::new(0.01);
    plan.trials = trials;

    let records = bench::run_bench(&plan)?;
    let summary = bench::summarize(&records);
    println!("{:<12} {:>5} {:>10} {:>10} {:>9}", "method", "size", "rel_error", "sd", "rel_time");
    for r in &summary {
        println!(
            "{:<12} {:>5} {:>10.5} {:>10.5} {:>9.4}",
            r.method.as_str(),
            r.size,
            r.mean_rel_error,
            r.sd_rel_error,
            r.mean_rel_time
        );
    }
    let out = std::env::temp_dir().join("svm-coreset-report.csv");
    bench::emit_report(&summary, &out, ReportFormat::Csv)?;
    println!("wrote {}", out.display());
    Ok(())
}
