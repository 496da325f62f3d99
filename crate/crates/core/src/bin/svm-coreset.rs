use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use svm_coreset::bench::{self, BenchPlan, DataFormat, ReportFormat};
use svm_coreset::coreset::{self, stream_coreset, CoresetParams, Method};
use svm_coreset::dataset::{self, LabeledDataset};
use svm_coreset::sensitivity;
use svm_coreset::svm::{self, SolverConfig, SvmModel};
use svm_coreset::CoresetError;

/// Sensitivity-sampling coresets for linear SVMs.
#[derive(Parser)]
#[command(name = "svm-coreset", version)]
struct Cli {
    #[command(flatten)]
    shared: Shared,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Shared {
    /// Random seed (bench: base seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// SVM regularization constant C.
    #[arg(long = "reg-c", global = true)]
    reg_c: Option<f64>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    #[arg(long, global = true)]
    delta: Option<f64>,
    /// Constant in the sample-size bound.
    #[arg(long = "c-const", global = true)]
    c_const: Option<f64>,
    /// Coreset size; bench accepts a comma-separated list.
    #[arg(long, global = true, value_delimiter = ',')]
    size: Vec<usize>,
    /// sensitivity or uniform; bench accepts a comma-separated list.
    #[arg(long, global = true, value_delimiter = ',')]
    method: Vec<Method>,
    /// Output format for profile and bench reports.
    #[arg(long, global = true)]
    format: Option<ReportFormat>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Center and scale a raw dataset into the unit ball.
    Preprocess {
        input: PathBuf,
        #[arg(long = "input-format", default_value = "csv")]
        input_format: DataFormat,
        #[arg(long = "label-col", default_value_t = 0)]
        label_col: usize,
        #[arg(long)]
        header: bool,
        /// Append a constant feature.
        #[arg(long)]
        bias: bool,
    },
    /// Write per-point sensitivity bounds of a preprocessed dataset.
    Profile { input: PathBuf },
    /// Sample a weighted coreset from a preprocessed dataset.
    Coreset { input: PathBuf },
    /// Train a linear SVM on a preprocessed dataset or a coreset file.
    Train {
        input: PathBuf,
        /// The input is a coreset written by `coreset` or `stream`.
        #[arg(long)]
        coreset: bool,
        #[arg(long = "max-iters")]
        max_iters: Option<usize>,
        #[arg(long)]
        trace: bool,
    },
    /// Objective and accuracy of a model on a preprocessed dataset.
    Eval {
        input: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Full-data model; adds the relative objective error.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Repeated-trial comparison of sensitivity and uniform subsamples.
    Bench {
        /// JSON or TOML plan; flags override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Dataset file; the bundled synthetic set when absent.
        #[arg(long)]
        dataset: Option<PathBuf>,
        #[arg(long = "input-format")]
        input_format: Option<DataFormat>,
        #[arg(long = "label-col")]
        label_col: Option<usize>,
        #[arg(long)]
        header: bool,
        #[arg(long)]
        trials: Option<usize>,
        /// Record all times as zero so reports are reproducible byte for byte.
        #[arg(long = "no-timing")]
        no_timing: bool,
        /// Also write per-trial records as CSV.
        #[arg(long)]
        records: Option<PathBuf>,
    },
    /// Merge-and-reduce coreset of a preprocessed dataset read as a stream.
    Stream {
        input: PathBuf,
        #[arg(long = "block-size", default_value_t = 500)]
        block_size: usize,
    },
}

enum Failure {
    Usage(String),
    Data(CoresetError),
}

impl From<CoresetError> for Failure {
    fn from(e: CoresetError) -> Self {
        match e {
            CoresetError::InvalidParameter(msg) => Failure::Usage(msg),
            other => Failure::Data(other),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let s = &cli.shared;
    match &cli.cmd {
        Cmd::Preprocess {
            input,
            input_format,
            label_col,
            header,
            bias,
        } => {
            let out = require_out(s)?;
            let raw = match input_format {
                DataFormat::Csv => dataset::load_csv(input, *label_col, *header)?,
                DataFormat::Libsvm => dataset::load_libsvm(input)?,
                DataFormat::Preprocessed => return Err(usage("input is already preprocessed")),
            };
            let ds = dataset::preprocess(&raw, *bias)?;
            dataset::write_preprocessed(&ds, out)?;
            let st = dataset::dataset_stats(&ds);
            println!("n={} d={} positives={} negatives={}", st.n, st.d, st.positives, st.negatives);
        }
        Cmd::Profile { input } => {
            let out = require_out(s)?;
            let ds = dataset::load_preprocessed(input)?;
            let profile = sensitivity::compute_gamma(&ds)?;
            match s.format.unwrap_or_default() {
                ReportFormat::Csv => sensitivity::write_profile_csv(&ds, &profile, out)?,
                ReportFormat::Json => write_json(out, &profile)?,
            }
            println!("n={} total={}", profile.n, profile.total);
        }
        Cmd::Coreset { input } => {
            let out = require_out(s)?;
            let ds = dataset::load_preprocessed(input)?;
            let params = coreset_params(s)?;
            let cs = coreset::build(&ds, &params)?;
            coreset::write_coreset(&cs, out)?;
            println!("points={} draws={} total_weight={}", cs.len(), cs.m, cs.total_weight());
        }
        Cmd::Train {
            input,
            coreset,
            max_iters,
            trace,
        } => {
            let out = require_out(s)?;
            let c = require_c(s)?;
            let ds = load_training_set(input, *coreset)?;
            let mut cfg = SolverConfig {
                record_trace: *trace,
                ..Default::default()
            };
            if let Some(k) = max_iters {
                cfg.max_iters = *k;
            }
            let model = svm::train(&ds, c, &cfg)?;
            model.save(out)?;
            println!("iterations={} objective={}", model.iterations_run, model.final_objective);
        }
        Cmd::Eval {
            input,
            model,
            reference,
        } => {
            let ds = dataset::load_preprocessed(input)?;
            let model = SvmModel::load(model)?;
            let c = s.reg_c.unwrap_or(model.c);
            let objective = svm::evaluate_objective(&ds, &model.w, c)?;
            let correct = ds
                .points()
                .iter()
                .filter(|p| model.predict(&p.features) == p.label.sign())
                .count();
            let mut report = json!({
                "C": c,
                "objective": objective,
                "accuracy": correct as f64 / ds.len() as f64,
            });
            if let Some(r) = reference {
                let reference = SvmModel::load(r)?;
                report["rel_error"] = json!(svm::relative_error(&ds, &model.w, &reference.w, c)?);
            }
            match &s.out {
                Some(out) => write_json(out, &report)?,
                None => println!("{}", serde_json::to_string_pretty(&report).expect("json value")),
            }
        }
        Cmd::Bench {
            config,
            dataset,
            input_format,
            label_col,
            header,
            trials,
            no_timing,
            records,
        } => {
            let out = require_out(s)?;
            let mut value = match config {
                Some(p) => bench::read_plan_value(p)?,
                None => Value::Object(Map::new()),
            };
            let Value::Object(obj) = &mut value else {
                return Err(usage("bench config must be a table"));
            };
            let mut set = |k: &str, v: Value| {
                obj.insert(k.to_string(), v);
            };
            if let Some(v) = s.reg_c {
                set("C", json!(v));
            }
            if let Some(v) = s.epsilon {
                set("epsilon", json!(v));
            }
            if let Some(v) = s.delta {
                set("delta", json!(v));
            }
            if let Some(v) = s.c_const {
                set("c_const", json!(v));
            }
            if let Some(v) = s.seed {
                set("base_seed", json!(v));
            }
            if !s.size.is_empty() {
                set("sizes", json!(s.size));
            }
            if !s.method.is_empty() {
                set("methods", json!(s.method));
            }
            if let Some(v) = dataset {
                set("dataset", json!(v));
            }
            if let Some(v) = input_format {
                set("format", json!(v));
            }
            if let Some(v) = label_col {
                set("label_column", json!(v));
            }
            if *header {
                set("has_header", json!(true));
            }
            if let Some(v) = trials {
                set("trials", json!(v));
            }
            if *no_timing {
                set("timing", json!(false));
            }
            if !obj.contains_key("C") {
                return Err(usage("--reg-c is required (or C in the config file)"));
            }
            let plan = BenchPlan::from_value(value).map_err(|e| usage(&format!("bad bench plan: {e}")))?;
            let recs = bench::run_bench(&plan)?;
            if let Some(p) = records {
                bench::write_records(&recs, p)?;
            }
            let failed = recs.iter().filter(|r| !r.is_ok()).count();
            let summary = bench::summarize(&recs);
            bench::emit_report(&summary, out, s.format.unwrap_or_default())?;
            println!("records={} failed={failed} rows={}", recs.len(), summary.len());
        }
        Cmd::Stream { input, block_size } => {
            let out = require_out(s)?;
            let ds = dataset::load_preprocessed(input)?;
            let params = coreset_params(s)?;
            if params.method != Method::Sensitivity {
                return Err(usage("stream only supports the sensitivity method"));
            }
            let cs = stream_coreset(ds.into_points(), *block_size, &params)?;
            coreset::write_coreset(&cs, out)?;
            println!("points={} source_n={} total_weight={}", cs.len(), cs.source_n, cs.total_weight());
        }
    }
    Ok(())
}

fn usage(msg: &str) -> Failure {
    Failure::Usage(msg.to_string())
}

fn require_out(s: &Shared) -> Result<&Path, Failure> {
    s.out.as_deref().ok_or_else(|| usage("--out is required"))
}

fn require_c(s: &Shared) -> Result<f64, Failure> {
    s.reg_c.ok_or_else(|| usage("--reg-c is required"))
}

fn coreset_params(s: &Shared) -> Result<CoresetParams, Failure> {
    let mut p = CoresetParams::default();
    if let Some(v) = s.epsilon {
        p.epsilon = v;
    }
    if let Some(v) = s.delta {
        p.delta = v;
    }
    if let Some(v) = s.c_const {
        p.c = v;
    }
    if let Some(v) = s.seed {
        p.seed = v;
    }
    match s.size.as_slice() {
        [] => {}
        [m] => p.explicit_size = Some(*m),
        _ => return Err(usage("--size takes a single value here")),
    }
    match s.method.as_slice() {
        [] => {}
        [m] => p.method = *m,
        _ => return Err(usage("--method takes a single value here")),
    }
    if p.method == Method::Uniform && p.explicit_size.is_none() {
        return Err(usage("--method uniform needs --size"));
    }
    p.validate()?;
    Ok(p)
}

fn load_training_set(input: &Path, is_coreset: bool) -> Result<LabeledDataset, Failure> {
    if is_coreset {
        Ok(coreset::read_coreset(input)?.to_dataset())
    } else {
        Ok(dataset::load_preprocessed(input)?)
    }
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(CoresetError::from)?;
    std::fs::write(path, text + "\n").map_err(|e| {
        Failure::Data(CoresetError::Io {
            path: path.to_path_buf(),
            source: e,
        })
    })
}
