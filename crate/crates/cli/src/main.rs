use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use dadt::data::{read_csv, read_records, Dataset, Schema};
use dadt::harness::{
    emit_results, generate_synthetic, run_experiment, ExperimentConfig, SynthConfig,
};
use dadt::knowledge::{build_from_target_sample, load_from_crosstabs, KnowledgeRegime, KnowledgeStore};
use dadt::metrics::{attribute_shift_report, evaluate};
use dadt::tree::{grow, DecisionTree, TreeConfig};
use dadt::{Error, Result};

#[derive(Parser)]
#[command(name = "dadt", version, about = "Domain-adaptive decision trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic source/target pair, its schema and ground truth.
    Synth {
        /// SynthConfig JSON; omitted fields take defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Grow one tree and write it as JSON.
    Train {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        schema: PathBuf,
        /// ntdk, ftdk or ptdkK.
        #[arg(long, default_value = "ntdk")]
        regime: String,
        /// Crosstab knowledge document.
        #[arg(long, conflicts_with = "target_sample")]
        knowledge: Option<PathBuf>,
        /// Target sample to build knowledge from.
        #[arg(long)]
        target_sample: Option<PathBuf>,
        /// Tree config JSON; flags below override it.
        #[arg(long)]
        tree_config: Option<PathBuf>,
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long)]
        min_node_fraction: Option<f64>,
        #[arg(long)]
        x_w: Option<String>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Predict every row of a CSV.
    Predict {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Accuracy and fairness of a tree on labeled data.
    Evaluate {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        positive: Option<String>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run an experiment config and write the result tables.
    Experiment {
        config: PathBuf,
        /// Output directory; defaults to the config's `output` or `results`.
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Per-attribute marginal and class-conditional shift between two samples.
    ShiftReport {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        schema: PathBuf,
        #[arg(long)]
        knowledge: Option<PathBuf>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn load_schema(path: &Path) -> Result<Arc<Schema>> {
    Ok(Arc::new(Schema::from_reader(File::open(path)?)?))
}

fn load_data(path: &Path, schema: &Arc<Schema>) -> Result<Dataset> {
    read_csv(File::open(path)?, schema.clone())
}

fn load_tree(path: &Path) -> Result<DecisionTree> {
    DecisionTree::from_json(&serde_json::from_reader(File::open(path)?)?)
}

fn write_json(v: &impl serde::Serialize, out: Option<&Path>) -> Result<()> {
    let mut w = output(out)?;
    serde_json::to_writer_pretty(&mut w, v)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn synth(config: Option<&Path>, seed: Option<u64>, out: &Path) -> Result<()> {
    let mut cfg: SynthConfig = match config {
        Some(p) => serde_json::from_reader(File::open(p)?)
            .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?,
        None => SynthConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let s = generate_synthetic(&cfg)?;
    fs::create_dir_all(out)?;
    s.source.write_csv(File::create(out.join("source.csv"))?)?;
    s.target.write_csv(File::create(out.join("target.csv"))?)?;
    write_json(&cfg.schema().to_json(), Some(&out.join("schema.json")))?;
    write_json(&s.ground_truth, Some(&out.join("ground_truth.json")))?;
    write_json(&cfg, Some(&out.join("synth_config.json")))
}

#[allow(clippy::too_many_arguments)]
fn train(
    data: &Path,
    schema: &Path,
    regime: &str,
    knowledge: Option<&Path>,
    target_sample: Option<&Path>,
    tree_config: Option<&Path>,
    overrides: (Option<usize>, Option<f64>, Option<String>),
    out: Option<&Path>,
) -> Result<()> {
    let schema = load_schema(schema)?;
    let source = load_data(data, &schema)?;
    let regime = KnowledgeRegime::parse(regime)?;
    let mut cfg = match tree_config {
        Some(p) => TreeConfig::from_json(&serde_json::from_reader(File::open(p)?)?)?,
        None => TreeConfig::default(),
    };
    cfg.regime = regime;
    let (max_depth, min_node_fraction, x_w) = overrides;
    if let Some(d) = max_depth {
        cfg.max_depth = d;
    }
    if let Some(f) = min_node_fraction {
        cfg.min_node_fraction = f;
    }
    if x_w.is_some() {
        cfg.x_w_override = x_w;
    }
    let ks = match (knowledge, target_sample) {
        _ if regime == KnowledgeRegime::NoTargetKnowledge => KnowledgeStore::empty(schema.clone()),
        (Some(k), _) => load_from_crosstabs(File::open(k)?, schema.clone())?,
        (None, Some(t)) => build_from_target_sample(&load_data(t, &schema)?, regime)?,
        (None, None) => {
            return Err(Error::Config(format!(
                "regime {} needs --knowledge or --target-sample",
                regime.name()
            )))
        }
    };
    let tree = grow(&source, &ks, &cfg)?;
    write_json(&tree.to_json(), out)
}

fn predict(tree: &Path, data: &Path, out: Option<&Path>) -> Result<()> {
    let tree = load_tree(tree)?;
    let records = read_records(File::open(data)?, &tree.schema)?;
    let mut w = csv::Writer::from_writer(output(out)?);
    let mut header = vec!["row".to_string(), "prediction".to_string()];
    header.extend(tree.schema.class.labels.iter().map(|l| format!("p_{l}")));
    w.write_record(&header).map_err(Error::from)?;
    for (r, rec) in records.iter().enumerate() {
        let (c, p) = tree.predict_record(rec).map_err(|e| match e {
            Error::ValueOutOfDomain { column, value, .. } => Error::ValueOutOfDomain { row: r, column, value },
            e => e,
        })?;
        let mut row = vec![r.to_string(), tree.schema.class.label(c).to_string()];
        row.extend(p.iter().map(f64::to_string));
        w.write_record(&row).map_err(Error::from)?;
    }
    w.flush()?;
    Ok(())
}

fn evaluate_cmd(tree: &Path, data: &Path, positive: Option<&str>, out: Option<&Path>) -> Result<()> {
    let tree = load_tree(tree)?;
    let test = load_data(data, &tree.schema)?;
    let positive = positive.map(|p| tree.schema.class_code(p)).transpose()?;
    write_json(&evaluate(&tree, &test, positive)?, out)
}

fn experiment(config: &Path, out: Option<PathBuf>, threads: Option<usize>) -> Result<()> {
    let mut cfg = ExperimentConfig::from_file(config)?;
    if threads.is_some() {
        cfg.parallelism = threads;
        cfg.validate()?;
    }
    let dir = out
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| config.parent().unwrap_or(Path::new(".")).join("results"));
    let results = run_experiment(&cfg)?;
    let failed = results
        .iter()
        .filter(|r| r.error.is_some() || r.regimes.iter().any(|g| g.error.is_some()))
        .count();
    for p in emit_results(&results, &dir)? {
        eprintln!("wrote {}", p.display());
    }
    if failed > 0 {
        eprintln!("{failed} of {} runs recorded errors; see results.csv", results.len());
    }
    Ok(())
}

fn shift_report(
    source: &Path,
    target: &Path,
    schema: &Path,
    knowledge: Option<&Path>,
    out: Option<&Path>,
) -> Result<()> {
    let schema = load_schema(schema)?;
    let s = load_data(source, &schema)?;
    let t = load_data(target, &schema)?;
    let ks = knowledge
        .map(|k| load_from_crosstabs(File::open(k)?, schema.clone()))
        .transpose()?;
    let report = attribute_shift_report(&s, &t, ks.as_ref())?;
    let mut w = csv::Writer::from_writer(output(out)?);
    w.write_record(["attribute", "w_marginal", "w_conditional"])?;
    for a in report {
        w.write_record([
            a.attribute,
            a.w_marginal.to_string(),
            a.w_conditional.map_or_else(String::new, |v| v.to_string()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth { config, seed, out } => synth(config.as_deref(), seed, &out),
        Command::Train {
            data,
            schema,
            regime,
            knowledge,
            target_sample,
            tree_config,
            max_depth,
            min_node_fraction,
            x_w,
            out,
        } => train(
            &data,
            &schema,
            &regime,
            knowledge.as_deref(),
            target_sample.as_deref(),
            tree_config.as_deref(),
            (max_depth, min_node_fraction, x_w),
            out.as_deref(),
        ),
        Command::Predict { tree, data, out } => predict(&tree, &data, out.as_deref()),
        Command::Evaluate {
            tree,
            data,
            positive,
            out,
        } => evaluate_cmd(&tree, &data, positive.as_deref(), out.as_deref()),
        Command::Experiment {
            config,
            out,
            threads,
        } => experiment(&config, out, threads),
        Command::ShiftReport {
            source,
            target,
            schema,
            knowledge,
            out,
        } => shift_report(&source, &target, &schema, knowledge.as_deref(), out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // usage errors are input errors, not broken invariants
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
