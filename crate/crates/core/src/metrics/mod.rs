//! Accuracy, group fairness, relative gains and shift diagnostics.

mod fairness;
mod gains;
mod postprocess;
mod shift;

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::tree::DecisionTree;

pub use fairness::{demographic_parity, equal_opportunity, group_codes};
pub use gains::{relative_gain_acc, relative_gain_fairness, Gain, RelativeGains, DEGENERATE_EPS};
pub use postprocess::{postprocess_thresholds, Objective, PostprocessedModel};
pub use shift::{attribute_shift_report, tree_shift_distance, AttributeShift};

/// Anything that assigns a class code to a dataset row.
pub trait Model: Sync {
    fn predict_class(&self, data: &Dataset, row: usize) -> u32;
}

impl Model for DecisionTree {
    fn predict_class(&self, data: &Dataset, row: usize) -> u32 {
        self.predict_row(data, row).0
    }
}

pub fn predictions<M: Model + ?Sized>(model: &M, data: &Dataset) -> Vec<u32> {
    (0..data.len()).map(|r| model.predict_class(data, r)).collect()
}

fn require_rows(data: &Dataset) -> Result<()> {
    if data.is_empty() {
        Err(Error::EmptyDataset)
    } else {
        Ok(())
    }
}

/// Fraction of rows whose predicted class equals the label.
pub fn accuracy<M: Model + ?Sized>(model: &M, test: &Dataset) -> Result<f64> {
    require_rows(test)?;
    let y = test.labels()?;
    let correct = (0..test.len())
        .filter(|&r| model.predict_class(test, r) == y[r])
        .count();
    Ok(crate::stats::ratio(correct, test.len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupConfusion {
    pub group: String,
    #[serde(flatten)]
    pub counts: Confusion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub acc: f64,
    pub dp: Option<f64>,
    pub eop: Option<f64>,
    /// Why a fairness metric is missing, when it is.
    pub fairness_note: Option<String>,
    pub confusion: Vec<GroupConfusion>,
    pub n_test: usize,
}

/// Accuracy plus, when the schema names a protected attribute, DP and EOP
/// for the `positive` class.
pub fn evaluate<M: Model + ?Sized>(model: &M, test: &Dataset, positive: Option<u32>) -> Result<EvalReport> {
    require_rows(test)?;
    let y = test.labels()?;
    let preds = predictions(model, test);
    let schema = test.schema();
    let positive = positive.unwrap_or_else(|| schema.default_positive());
    let correct = preds.iter().zip(y).filter(|(p, t)| p == t).count();
    let mut report = EvalReport {
        acc: crate::stats::ratio(correct, test.len()),
        dp: None,
        eop: None,
        fairness_note: None,
        confusion: Vec::new(),
        n_test: test.len(),
    };
    let Some(protected) = schema.protected else {
        report.confusion.push(GroupConfusion {
            group: "all".into(),
            counts: fairness::confusion(&preds, y, (0..test.len()).collect::<Vec<_>>().as_slice(), positive),
        });
        return Ok(report);
    };
    let attr = schema.attr(protected);
    for code in 0..attr.cardinality() as u32 {
        let rows: Vec<usize> = (0..test.len()).filter(|&r| test.code(protected, r) == code).collect();
        report.confusion.push(GroupConfusion {
            group: attr.label(code).to_string(),
            counts: fairness::confusion(&preds, y, &rows, positive),
        });
    }
    let mut notes = Vec::new();
    match fairness::dp_from(&preds, test, protected, positive) {
        Ok(v) => report.dp = Some(v),
        Err(e) => notes.push(e.to_string()),
    }
    match fairness::eop_from(&preds, test, protected, positive) {
        Ok(v) => report.eop = Some(v),
        Err(e) => notes.push(e.to_string()),
    }
    if !notes.is_empty() {
        report.fairness_note = Some(notes.join("; "));
    }
    Ok(report)
}
