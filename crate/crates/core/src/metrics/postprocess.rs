use serde::{Deserialize, Serialize};

use super::fairness::group_codes;
use super::Model;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::stats::ratio;
use crate::tree::DecisionTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Dp,
    Eop,
}

impl Objective {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dp" => Ok(Objective::Dp),
            "eop" => Ok(Objective::Eop),
            _ => Err(Error::Config(format!("unknown fairness objective `{s}`"))),
        }
    }
}

/// A tree whose positive-class score is thresholded per protected group.
#[derive(Debug, Clone)]
pub struct PostprocessedModel {
    pub tree: DecisionTree,
    pub protected: usize,
    pub positive: u32,
    pub thresholds: [f64; 2],
    pub objective: Objective,
    /// Disparity and accuracy of the chosen pair on the holdout.
    pub holdout_disparity: f64,
    pub holdout_accuracy: f64,
}

impl PostprocessedModel {
    pub fn score(&self, data: &Dataset, row: usize) -> f64 {
        self.tree.predict_row(data, row).1[self.positive as usize]
    }
}

impl Model for PostprocessedModel {
    fn predict_class(&self, data: &Dataset, row: usize) -> u32 {
        let g = data.code(self.protected, row) as usize;
        if self.score(data, row) >= self.thresholds[g] {
            self.positive
        } else {
            1 - self.positive
        }
    }
}

/// Per group and threshold: predicted positives, true positives, correct
/// predictions; plus the group's size and number of positive labels.
struct GroupTable {
    n: usize,
    n_pos: usize,
    predicted: Vec<usize>,
    tp: Vec<usize>,
    correct: Vec<usize>,
}

/// Exhaustive search over per-group thresholds on the leaf-score grid.
///
/// Picks the pair with the smallest holdout disparity, then the highest
/// holdout accuracy, then the lowest thresholds.
pub fn postprocess_thresholds(
    tree: &DecisionTree,
    holdout: &Dataset,
    protected: usize,
    objective: Objective,
    positive: Option<u32>,
) -> Result<PostprocessedModel> {
    let schema = holdout.schema();
    if schema.n_classes() != 2 {
        return Err(Error::Config("threshold post-processing needs a binary class".into()));
    }
    if holdout.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let codes = group_codes(holdout, protected)?;
    let positive = positive.unwrap_or_else(|| schema.default_positive());
    let labels = holdout.labels().ok();
    if objective == Objective::Eop && labels.is_none() {
        return Err(Error::UnlabeledData);
    }

    let mut grid: Vec<f64> = tree
        .leaves()
        .iter()
        .map(|l| l.dist.probs()[positive as usize])
        .chain([0.0, 1.0])
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let scores: Vec<f64> = (0..holdout.len())
        .map(|r| tree.predict_row(holdout, r).1[positive as usize])
        .collect();
    let mut tables = Vec::with_capacity(2);
    for g in codes {
        let rows: Vec<usize> = (0..holdout.len())
            .filter(|&r| holdout.code(protected, r) == g)
            .collect();
        if rows.is_empty() {
            return Err(Error::GroupMissing(schema.attr(protected).label(g).to_string()));
        }
        let is_pos = |r: usize| labels.is_some_and(|y| y[r] == positive);
        let n_pos = rows.iter().filter(|&&r| is_pos(r)).count();
        if objective == Objective::Eop && n_pos == 0 {
            return Err(Error::NoPositives(schema.attr(protected).label(g).to_string()));
        }
        let mut t = GroupTable {
            n: rows.len(),
            n_pos,
            predicted: Vec::with_capacity(grid.len()),
            tp: Vec::with_capacity(grid.len()),
            correct: Vec::with_capacity(grid.len()),
        };
        for &tau in &grid {
            let (mut p, mut tp, mut c) = (0, 0, 0);
            for &r in &rows {
                let pred = scores[r] >= tau;
                let pos = is_pos(r);
                p += pred as usize;
                tp += (pred && pos) as usize;
                c += (pred == pos) as usize;
            }
            t.predicted.push(p);
            t.tp.push(tp);
            t.correct.push(c);
        }
        tables.push(t);
    }

    let rate = |t: &GroupTable, i: usize| match objective {
        Objective::Dp => ratio(t.predicted[i], t.n),
        Objective::Eop => ratio(t.tp[i], t.n_pos),
    };
    let mut best: Option<(f64, f64, usize, usize)> = None;
    for i in 0..grid.len() {
        for j in 0..grid.len() {
            let disparity = (rate(&tables[0], i) - rate(&tables[1], j)).abs();
            let acc = if labels.is_some() {
                ratio(tables[0].correct[i] + tables[1].correct[j], holdout.len())
            } else {
                0.0
            };
            let better = match best {
                None => true,
                Some((d, a, _, _)) => disparity < d || (disparity == d && acc > a),
            };
            if better {
                best = Some((disparity, acc, i, j));
            }
        }
    }
    let (d, a, i, j) = best.expect("grid holds at least 0 and 1");
    Ok(PostprocessedModel {
        tree: tree.clone(),
        protected,
        positive,
        thresholds: [grid[i], grid[j]],
        objective,
        holdout_disparity: d,
        holdout_accuracy: a,
    })
}
