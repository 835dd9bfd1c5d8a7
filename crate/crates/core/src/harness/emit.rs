use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};

use super::experiment::{ExperimentResult, RegimeResult};
use crate::error::Result;
use crate::metrics::Gain;

pub const RESULT_COLUMNS: [&str; 24] = [
    "pair",
    "replicate",
    "seed",
    "source",
    "target",
    "regime",
    "n_test",
    "acc",
    "dp",
    "eop",
    "pp_acc",
    "pp_dp",
    "pp_eop",
    "tau_a",
    "tau_b",
    "r_acc",
    "r_acc_degenerate",
    "r_dp",
    "r_eop",
    "w_tree",
    "n_leaves",
    "depth",
    "x_w",
    "error",
];

fn num(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

fn int(x: Option<usize>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

fn gain(g: Option<&Gain>) -> String {
    num(g.map(|g| g.value))
}

fn regime_row(e: &ExperimentResult, r: &RegimeResult) -> Vec<String> {
    let rep = r.report.as_ref();
    let pp = r.postprocessed.as_ref();
    let g = r.gains.as_ref();
    let error = match (&e.error, &r.error) {
        (Some(a), Some(b)) => format!("{a}; {b}"),
        (a, b) => a.clone().or_else(|| b.clone()).unwrap_or_default(),
    };
    vec![
        e.pair.clone(),
        e.replicate.to_string(),
        e.seed.to_string(),
        e.source.clone(),
        e.target.clone(),
        r.regime.clone(),
        int(rep.map(|x| x.n_test)),
        num(rep.map(|x| x.acc)),
        num(rep.and_then(|x| x.dp)),
        num(rep.and_then(|x| x.eop)),
        num(pp.map(|x| x.acc)),
        num(pp.and_then(|x| x.dp)),
        num(pp.and_then(|x| x.eop)),
        num(r.thresholds.map(|t| t[0])),
        num(r.thresholds.map(|t| t[1])),
        gain(g.map(|g| &g.r_acc)),
        g.map_or_else(String::new, |g| g.r_acc.degenerate.to_string()),
        gain(g.and_then(|g| g.r_dp.as_ref())),
        gain(g.and_then(|g| g.r_eop.as_ref())),
        num(r.w_tree),
        int(r.n_leaves),
        int(r.depth),
        r.x_w.as_ref().map_or_else(String::new, |x| x.join("|")),
        error,
    ]
}

/// One row per pair and regime. A pair that failed before any regime ran
/// still gets a row carrying its error.
pub fn write_results_csv<W: Write>(results: &[ExperimentResult], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(RESULT_COLUMNS)?;
    for e in results {
        if e.regimes.is_empty() {
            let blank = RegimeResult {
                regime: String::new(),
                report: None,
                postprocessed: None,
                thresholds: None,
                gains: None,
                w_tree: None,
                n_leaves: None,
                depth: None,
                x_w: None,
                error: None,
            };
            out.write_record(regime_row(e, &blank))?;
        }
        for r in &e.regimes {
            out.write_record(regime_row(e, r))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn r_acc(e: &ExperimentResult, regime: &str) -> Option<f64> {
    e.regime(regime)?.gains.as_ref().map(|g| g.r_acc.value)
}

fn w_tree(e: &ExperimentResult, regime: &str) -> Option<f64> {
    e.regime(regime)?.w_tree
}

/// Tree shift distances against the recovered share of accuracy and fairness.
pub fn write_scatter_csv<W: Write>(results: &[ExperimentResult], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["pair", "replicate", "w_ntdk", "w_ftdk", "r_acc", "r_dp", "r_eop"])?;
    for e in results {
        let g = e.regime("ftdk").and_then(|r| r.gains.as_ref());
        out.write_record([
            e.pair.clone(),
            e.replicate.to_string(),
            num(w_tree(e, "ntdk")),
            num(w_tree(e, "ftdk")),
            gain(g.map(|g| &g.r_acc)),
            gain(g.and_then(|g| g.r_dp.as_ref())),
            gain(g.and_then(|g| g.r_eop.as_ref())),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Recovered accuracy for full, triple and pairwise knowledge side by side.
pub fn write_partial_csv<W: Write>(results: &[ExperimentResult], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["pair", "replicate", "w_ftdk", "r_acc_ftdk", "r_acc_ptdk3", "r_acc_ptdk2"])?;
    for e in results {
        out.write_record([
            e.pair.clone(),
            e.replicate.to_string(),
            num(w_tree(e, "ftdk")),
            num(r_acc(e, "ftdk")),
            num(r_acc(e, "ptdk3")),
            num(r_acc(e, "ptdk2")),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Signed `(acc_ntdk - acc_tt) * 100` per source and target.
pub fn write_heatmap_csv<W: Write>(results: &[ExperimentResult], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["pair", "replicate", "source", "target", "acc_diff"])?;
    for e in results {
        let acc = |name| e.regime(name).and_then(|r| r.report.as_ref()).map(|r| r.acc);
        let diff = acc("ntdk").zip(acc("tt")).map(|(a, b)| (a - b) * 100.0);
        out.write_record([
            e.pair.clone(),
            e.replicate.to_string(),
            e.source.clone(),
            e.target.clone(),
            num(diff),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_attribute_shift_csv<W: Write>(results: &[ExperimentResult], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["pair", "replicate", "attribute", "w_marginal", "w_conditional"])?;
    for e in results {
        for a in &e.attribute_shift {
            out.write_record([
                e.pair.clone(),
                e.replicate.to_string(),
                a.attribute.clone(),
                a.w_marginal.to_string(),
                num(a.w_conditional),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_results_json<W: Write>(results: &[ExperimentResult], w: W) -> Result<()> {
    serde_json::to_writer_pretty(w, results)?;
    Ok(())
}

pub fn read_results_json<R: std::io::Read>(r: R) -> Result<Vec<ExperimentResult>> {
    Ok(serde_json::from_reader(r)?)
}

/// Writes every table into directory `dir` and returns the written paths.
pub fn emit_results(results: &[ExperimentResult], dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    type Writer = fn(&[ExperimentResult], File) -> Result<()>;
    let tables: [(&str, Writer); 6] = [
        ("results.csv", write_results_csv),
        ("results.json", write_results_json),
        ("scatter.csv", write_scatter_csv),
        ("partial.csv", write_partial_csv),
        ("heatmap.csv", write_heatmap_csv),
        ("attribute_shift.csv", write_attribute_shift_csv),
    ];
    let mut written = Vec::new();
    for (name, write) in tables {
        let path = dir.join(name);
        write(results, File::create(&path)?)?;
        written.push(path);
    }
    Ok(written)
}
