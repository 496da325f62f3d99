//! Load a raw CSV, center and scale it into the unit ball, and write it back
//! with its transform sidecar.
//!
//!     cargo run --example preprocess [input.csv] [label_column]
//!
//! Without arguments the bundled synthetic set is written to a temp file
//! first and used as the input.

use svm_coreset::dataset::{self, dataset_stats};
use svm_coreset::synthetic;

fn main() -> svm_coreset::Result<()> {
    let dir = std::env::temp_dir().join("svm-coreset-example");
    std::fs::create_dir_all(&dir).expect("temp dir");

    let args: Vec<String> = std::env::args().skip(1).collect();
    let raw = match args.first() {
        Some(path) => {
            let label_col = args.get(1).map_or(0, |s| s.parse().expect("label column"));
            dataset::load_csv(path, label_col, false)?
        }
        None => {
            let path = dir.join("raw.csv");
            dataset::write_csv(&synthetic::bundled(), &path)?;
            dataset::load_csv(&path, 0, true)?
        }
    };

    let before = dataset_stats(&raw);
    let ds = dataset::preprocess(&raw, false)?;
    let after = dataset_stats(&ds);
    println!("n = {}, d = {}, classes {:?}", after.n, after.d, after.class_counts());
    println!("max norm   {:.4} -> {:.4}", before.max_norm, after.max_norm);
    println!("mean norm  {:.4} -> {:.4}", before.mean_norm, after.mean_norm);
    println!("centroid   {:.4} -> {:.2e}", before.centroid_norm, after.centroid_norm);

    let out = dir.join("preprocessed.csv");
    dataset::write_preprocessed(&ds, &out)?;
    let back = dataset::load_preprocessed(&out)?;
    assert_eq!(back.len(), ds.len());
    println!("wrote {} and {}", out.display(), dataset::sidecar_path(&out).display());
    Ok(())
}
