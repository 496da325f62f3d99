//! Closed-form sensitivity bounds, compared against Monte-Carlo estimates
//! over random queries.

use svm_coreset::sensitivity::{self, compute_gamma, total_sensitivity_bound};
use svm_coreset::{dataset, synthetic};

fn main() -> svm_coreset::Result<()> {
    let data = synthetic::bundled_preprocessed();
    let profile = compute_gamma(&data)?;
    println!(
        "n = {}: total sensitivity {:.3} (at most {:.3} for any data of this size)",
        profile.n,
        profile.total,
        total_sensitivity_bound(profile.n)?,
    );

    let mut order: Vec<usize> = (0..data.len()).collect();
    order.sort_by(|&a, &b| profile.gamma[b].total_cmp(&profile.gamma[a]));
    println!("largest bounds:");
    for &i in &order[..5] {
        let p = &data.points()[i];
        println!("  #{i:<5} norm {:.3}  gamma {:.3e}  prob {:.3e}", p.norm(), profile.gamma[i], profile.probs[i]);
    }

    // The bound must dominate what random queries can actually achieve.
    let small = dataset::preprocess(&synthetic::two_gaussians(200, 4, 1)?, false)?;
    let bound = compute_gamma(&small)?;
    let emp = sensitivity::empirical_sensitivities(&small, 20_000, 2, 1.0)?;
    let worst = emp
        .values
        .iter()
        .zip(&bound.gamma)
        .map(|(s, g)| s / g)
        .fold(0.0, f64::max);
    println!(
        "200-point check: {} of {} queries feasible, max empirical/bound = {worst:.3}",
        emp.feasible, emp.drawn
    );

    let out = std::env::temp_dir().join("svm-coreset-profile.csv");
    sensitivity::write_profile_csv(&data, &profile, &out)?;
    println!("wrote {}", out.display());
    Ok(())
}
