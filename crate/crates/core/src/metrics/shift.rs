use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::data::{Column, Dataset};
use crate::error::{Error, Result};
use crate::knowledge::{build_from_target_sample, KnowledgeRegime, KnowledgeStore};
use crate::stats::{freqs, wasserstein_categorical, wasserstein_samples};
use crate::tree::{pivot_scores, DecisionTree};

/// Leaf-level distance between the tree's class distributions and the
/// target class frequencies, weighted by the target mass of each leaf.
pub fn tree_shift_distance(tree: &DecisionTree, target_test: &Dataset) -> Result<f64> {
    let y = target_test.labels()?;
    if target_test.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let leaves = tree.leaves();
    let index: HashMap<*const _, usize> = leaves
        .iter()
        .enumerate()
        .map(|(i, l)| (l.dist as *const _, i))
        .collect();
    let k = tree.schema.n_classes();
    let mut counts = vec![vec![0usize; k]; leaves.len()];
    for r in 0..target_test.len() {
        let leaf = tree.leaf_for_row(target_test, r);
        counts[index[&(leaf.dist as *const _)]][y[r] as usize] += 1;
    }
    let n = target_test.len() as f64;
    let mut total = 0.0;
    for (leaf, c) in leaves.iter().zip(&counts) {
        let m: usize = c.iter().sum();
        if m == 0 {
            continue;
        }
        total += wasserstein_categorical(leaf.dist.probs(), &freqs(c, m)) * (m as f64 / n);
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeShift {
    pub attribute: String,
    /// Distance between source and target marginals.
    pub w_marginal: f64,
    /// Target-weighted distance between class conditionals, when known.
    pub w_conditional: Option<f64>,
}

fn marginal_distance(source: &Dataset, target: &Dataset, a: usize) -> Result<f64> {
    match (source.column(a), target.column(a)) {
        (Column::Discrete(s), Column::Discrete(t)) => {
            let card = source.schema().attr(a).cardinality();
            let hist = |v: &[u32]| {
                let mut c = vec![0usize; card];
                v.iter().for_each(|&x| c[x as usize] += 1);
                freqs(&c, v.len())
            };
            Ok(wasserstein_categorical(&hist(s), &hist(t)))
        }
        (Column::Continuous(s), Column::Continuous(t)) => wasserstein_samples(s, t),
        _ => Err(Error::SchemaMismatch("column kinds differ".into())),
    }
}

/// Marginal and class-conditional shift of every attribute. Class
/// conditionals come from the store, or from the target labels when the
/// store has none.
pub fn attribute_shift_report(
    source: &Dataset,
    target: &Dataset,
    ks: Option<&KnowledgeStore>,
) -> Result<Vec<AttributeShift>> {
    if source.is_empty() || target.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if source.schema() != target.schema() {
        return Err(Error::SchemaMismatch("source and target schemas differ".into()));
    }
    let owned;
    let store = match ks {
        Some(k) if k.has_class_conditionals() => Some(k),
        _ if target.is_labeled() => {
            owned = build_from_target_sample(target, KnowledgeRegime::PartialTargetKnowledge(1))?;
            Some(&owned)
        }
        _ => None,
    };
    let conditional = match store {
        Some(k) if source.is_labeled() => pivot_scores(source, k)?,
        _ => vec![None; source.schema().n_attrs()],
    };
    (0..source.schema().n_attrs())
        .map(|a| {
            Ok(AttributeShift {
                attribute: source.schema().attr(a).name.clone(),
                w_marginal: marginal_distance(source, target, a)?,
                w_conditional: conditional[a],
            })
        })
        .collect()
}
