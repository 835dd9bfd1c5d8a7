//! Decision tree induction with and without target-domain knowledge.

mod candidates;
mod grow;
mod json;
mod pivot;
mod standard;

use std::sync::Arc;

use crate::data::{Dataset, Path, Schema, SplitCondition, Value};
use crate::error::{Error, Result};
use crate::knowledge::KnowledgeRegime;
use crate::stats::Distribution;

pub use grow::{best_split, grow};
pub use pivot::{estimate_class_dist, pivot_for, pivot_scores, select_pivot, Pivot};
pub use standard::grow_standard;

/// Gains at or below this are treated as no gain.
pub const MIN_GAIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TreeConfig {
    pub max_depth: usize,
    pub min_node_fraction: f64,
    pub purity_stop: f64,
    pub regime: KnowledgeRegime,
    pub alpha_override: Option<f64>,
    pub x_w_override: Option<String>,
    /// Recorded for reproducibility; induction itself has no random choices.
    pub seed: u64,
    /// Apply the knowledge-based estimate to leaf distributions too.
    pub adapt_leaves: bool,
    /// Send unseen discrete values down the `!=` branch instead of failing.
    pub route_unseen_right: bool,
}

impl Default for TreeConfig {
    fn default() -> Self {
        Self {
            max_depth: 8,
            min_node_fraction: 0.05,
            purity_stop: 1.0,
            regime: KnowledgeRegime::NoTargetKnowledge,
            alpha_override: None,
            x_w_override: None,
            seed: 0,
            adapt_leaves: true,
            route_unseen_right: false,
        }
    }
}

impl TreeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_depth < 1 {
            return Err(Error::Config("max_depth must be at least 1".into()));
        }
        if !(self.min_node_fraction > 0.0 && self.min_node_fraction < 1.0) {
            return Err(Error::Config("min_node_fraction must lie in (0, 1)".into()));
        }
        if !(self.purity_stop > 0.5 && self.purity_stop <= 1.0) {
            return Err(Error::Config("purity_stop must lie in (0.5, 1]".into()));
        }
        if let Some(a) = self.alpha_override {
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::Config("alpha override must lie in [0, 1]".into()));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        json::config_to_json(self)
    }

    /// Missing fields take their defaults.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        json::config_from_json(v)
    }

    /// Smallest admissible leaf for a training set of `n` rows.
    pub fn min_rows(&self, n: usize) -> usize {
        ((self.min_node_fraction * n as f64 - 1e-9).ceil() as usize).max(1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Internal {
        condition: SplitCondition,
        ig: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        dist: Distribution,
        n_source_rows: usize,
        path: Path,
    },
}

impl TreeNode {
    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }
}

/// Per-node record of how target knowledge entered the estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeDiagnostics {
    /// Preorder index.
    pub id: usize,
    pub depth: usize,
    pub n_source_rows: usize,
    /// Mixing weight on the source estimate; 1 means source only.
    pub alpha: f64,
    /// Path attributes dropped before the knowledge could answer.
    pub truncated: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    pub root: TreeNode,
    pub config: TreeConfig,
    pub schema: Arc<Schema>,
    pub pivot: Option<Pivot>,
    pub diagnostics: Vec<NodeDiagnostics>,
}

/// A leaf reached by a prediction.
#[derive(Debug, Clone, Copy)]
pub struct LeafRef<'a> {
    pub dist: &'a Distribution,
    pub n_source_rows: usize,
    pub path: &'a Path,
}

impl DecisionTree {
    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn n_leaves(&self) -> usize {
        self.root.n_leaves()
    }

    /// Names of the pivot attributes, if knowledge was used.
    pub fn x_w(&self) -> Option<Vec<String>> {
        self.pivot.as_ref().map(|p| {
            p.attrs()
                .iter()
                .map(|&a| self.schema.attr(a).name.clone())
                .collect()
        })
    }

    pub fn leaves(&self) -> Vec<LeafRef<'_>> {
        fn walk<'a>(n: &'a TreeNode, out: &mut Vec<LeafRef<'a>>) {
            match n {
                TreeNode::Leaf {
                    dist,
                    n_source_rows,
                    path,
                } => out.push(LeafRef {
                    dist,
                    n_source_rows: *n_source_rows,
                    path,
                }),
                TreeNode::Internal { left, right, .. } => {
                    walk(left, out);
                    walk(right, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    /// Leaf reached by row `row` of a dataset sharing this tree's schema.
    pub fn leaf_for_row(&self, data: &Dataset, row: usize) -> LeafRef<'_> {
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf {
                    dist,
                    n_source_rows,
                    path,
                } => {
                    return LeafRef {
                        dist,
                        n_source_rows: *n_source_rows,
                        path,
                    }
                }
                TreeNode::Internal {
                    condition,
                    left,
                    right,
                    ..
                } => node = if condition.holds(data, row) { left } else { right },
            }
        }
    }

    /// Class code and class probabilities for a dataset row.
    pub fn predict_row(&self, data: &Dataset, row: usize) -> (u32, &[f64]) {
        let leaf = self.leaf_for_row(data, row);
        (leaf.dist.argmax() as u32, leaf.dist.probs())
    }

    /// Routes a parsed record, which may hold labels the schema lacks.
    pub fn predict_record(&self, record: &[Value]) -> Result<(u32, &[f64])> {
        if record.len() != self.schema.n_attrs() {
            return Err(Error::SchemaMismatch(format!(
                "record has {} values, schema has {} attributes",
                record.len(),
                self.schema.n_attrs()
            )));
        }
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { dist, .. } => return Ok((dist.argmax() as u32, dist.probs())),
                TreeNode::Internal {
                    condition,
                    left,
                    right,
                    ..
                } => {
                    let v = &record[condition.attr];
                    let goes_left = match condition.holds_value(v) {
                        Some(b) => b,
                        None if self.config.route_unseen_right => false,
                        None => {
                            let Value::Unseen(label) = v else { unreachable!() };
                            return Err(Error::ValueOutOfDomain {
                                row: 0,
                                column: self.schema.attr(condition.attr).name.clone(),
                                value: label.clone(),
                            });
                        }
                    };
                    node = if goes_left { left } else { right };
                }
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json::tree_to_json(self)
    }

    pub fn from_json(doc: &serde_json::Value) -> Result<Self> {
        json::tree_from_json(doc)
    }
}

/// Class label and probabilities for one record.
pub fn predict(tree: &DecisionTree, record: &[Value]) -> Result<(String, Vec<f64>)> {
    let (c, p) = tree.predict_record(record)?;
    Ok((tree.schema.class.label(c).to_string(), p.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_bounds() {
        assert!(TreeConfig::default().validate().is_ok());
        let bad = TreeConfig {
            purity_stop: 0.5,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = TreeConfig {
            min_node_fraction: 1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = TreeConfig {
            max_depth: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn min_rows_rounds_up() {
        let c = TreeConfig::default();
        assert_eq!(c.min_rows(2000), 100);
        assert_eq!(c.min_rows(2001), 101);
        assert_eq!(c.min_rows(10), 1);
        assert_eq!(c.min_rows(0), 1);
    }
}
