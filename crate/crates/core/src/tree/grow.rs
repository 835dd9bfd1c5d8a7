use super::candidates::{candidate_conditions, class_counts, partition};
use super::pivot::{estimate_class_dist, select_pivot, Pivot};
use super::{DecisionTree, NodeDiagnostics, TreeConfig, TreeNode, MIN_GAIN};
use crate::data::{Dataset, DatasetView, Path, SplitCondition};
use crate::error::{Error, Result};
use crate::knowledge::{mix, KnowledgeRegime, KnowledgeStore};
use crate::stats::{freqs, gain_of, ratio, Distribution};

struct Grower<'a> {
    data: &'a Dataset,
    labels: &'a [u32],
    ks: &'a KnowledgeStore,
    pivot: Option<&'a Pivot>,
    cfg: &'a TreeConfig,
    min_rows: usize,
    diagnostics: Vec<NodeDiagnostics>,
}

/// Best split at a node: the maximum-gain candidate whose children both keep
/// `min_rows` source rows, or `None` when no candidate gains anything.
pub fn best_split(
    view: &DatasetView<'_>,
    phi: &Path,
    ks: &KnowledgeStore,
    pivot: Option<&Pivot>,
    cfg: &TreeConfig,
    min_rows: usize,
) -> Result<Option<(SplitCondition, f64)>> {
    let (parent, _) = estimate_class_dist(view, phi, pivot, ks, cfg.alpha_override)?;
    Ok(best_split_with(view, phi, &parent, ks, pivot, cfg, min_rows)?.map(|(c, ig, _, _)| (c, ig)))
}

type Split = (SplitCondition, f64, Vec<usize>, Vec<usize>);

fn best_split_with(
    view: &DatasetView<'_>,
    phi: &Path,
    parent: &[f64],
    ks: &KnowledgeStore,
    pivot: Option<&Pivot>,
    cfg: &TreeConfig,
    min_rows: usize,
) -> Result<Option<Split>> {
    let data = view.data();
    let rows = view.rows();
    let n = rows.len();
    let knowledge = ks.regime() != KnowledgeRegime::NoTargetKnowledge;
    let mut best: Option<Split> = None;
    let mut best_ig = MIN_GAIN;
    for cond in candidate_conditions(data, rows) {
        let (l, r) = partition(data, rows, &cond);
        if l.len() < min_rows || r.len() < min_rows {
            continue;
        }
        let src_p = ratio(l.len(), n);
        let p_left = if knowledge {
            mix(ks, &[vec![cond]], phi, &[src_p], cfg.alpha_override)?.probs[0]
        } else {
            src_p
        };
        let lv = DatasetView::new(data, l);
        let rv = DatasetView::new(data, r);
        let (ld, _) = estimate_class_dist(&lv, &phi.extended(cond), pivot, ks, cfg.alpha_override)?;
        let (rd, _) =
            estimate_class_dist(&rv, &phi.extended(cond.negate()), pivot, ks, cfg.alpha_override)?;
        let ig = gain_of(parent, p_left, &ld, &rd);
        if ig > best_ig {
            best_ig = ig;
            best = Some((cond, ig, lv.rows().to_vec(), rv.rows().to_vec()));
        }
    }
    Ok(best)
}

impl Grower<'_> {
    fn node(&mut self, rows: Vec<usize>, path: Path, depth: usize) -> Result<TreeNode> {
        let id = self.diagnostics.len();
        let n = rows.len();
        let view = DatasetView::new(self.data, rows);
        let (dist, mixed) =
            estimate_class_dist(&view, &path, self.pivot, self.ks, self.cfg.alpha_override)?;
        self.diagnostics.push(NodeDiagnostics {
            id,
            depth,
            n_source_rows: n,
            alpha: mixed.as_ref().map_or(1.0, |m| m.alpha),
            truncated: mixed.as_ref().map_or(0, |m| m.truncated),
        });
        let k = self.data.schema().n_classes();
        let counts = class_counts(self.labels, view.rows(), k);
        let purity = ratio(counts.iter().copied().max().unwrap_or(0), n);
        let split = if depth < self.cfg.max_depth
            && purity < self.cfg.purity_stop
            && n >= 2 * self.min_rows
        {
            best_split_with(&view, &path, &dist, self.ks, self.pivot, self.cfg, self.min_rows)?
        } else {
            None
        };
        match split {
            Some((condition, ig, l, r)) => {
                let left = self.node(l, path.extended(condition), depth + 1)?;
                let right = self.node(r, path.extended(condition.negate()), depth + 1)?;
                Ok(TreeNode::Internal {
                    condition,
                    ig,
                    left: Box::new(left),
                    right: Box::new(right),
                })
            }
            None => {
                let probs = if self.cfg.adapt_leaves {
                    dist
                } else {
                    freqs(&counts, n)
                };
                Ok(TreeNode::Leaf {
                    dist: Distribution::categorical(probs)?,
                    n_source_rows: n,
                    path,
                })
            }
        }
    }
}

/// Grows a domain-adaptive tree on labeled source data. Knowledge enters
/// both the split probabilities and the class distributions; with
/// `NoTargetKnowledge` this is a plain information-gain tree.
pub fn grow(train: &Dataset, ks: &KnowledgeStore, cfg: &TreeConfig) -> Result<DecisionTree> {
    cfg.validate()?;
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let labels = train.labels()?;
    if ks.schema() != train.schema() {
        return Err(Error::SchemaMismatch(
            "knowledge and training data use different schemas".into(),
        ));
    }
    let none = KnowledgeStore::empty(train.schema_arc().clone());
    let ks = if cfg.regime == KnowledgeRegime::NoTargetKnowledge || ks.is_empty() {
        &none
    } else {
        ks
    };
    let pivot = if ks.regime() == KnowledgeRegime::NoTargetKnowledge {
        None
    } else {
        Some(select_pivot(train, ks, cfg.x_w_override.as_deref())?)
    };
    let mut g = Grower {
        data: train,
        labels,
        ks,
        pivot: pivot.as_ref(),
        cfg,
        min_rows: cfg.min_rows(train.len()),
        diagnostics: Vec::new(),
    };
    let root = g.node((0..train.len()).collect(), Path::root(), 0)?;
    let diagnostics = g.diagnostics;
    Ok(DecisionTree {
        root,
        config: cfg.clone(),
        schema: train.schema_arc().clone(),
        pivot,
        diagnostics,
    })
}
