//! Plain information-gain tree, used as the train-on-target baseline and as
//! the reference the knowledge-free adaptive tree must reproduce.

use super::candidates::{candidate_conditions, class_counts, partition};
use super::{DecisionTree, NodeDiagnostics, TreeConfig, TreeNode, MIN_GAIN};
use crate::data::{Dataset, Path};
use crate::error::{Error, Result};
use crate::knowledge::KnowledgeRegime;
use crate::stats::{freqs, gain_of, ratio, Distribution};

struct Ctx<'a> {
    data: &'a Dataset,
    labels: &'a [u32],
    k: usize,
    cfg: &'a TreeConfig,
    min_rows: usize,
    diagnostics: Vec<NodeDiagnostics>,
}

fn build(ctx: &mut Ctx<'_>, rows: Vec<usize>, path: Path, depth: usize) -> Result<TreeNode> {
    let n = rows.len();
    ctx.diagnostics.push(NodeDiagnostics {
        id: ctx.diagnostics.len(),
        depth,
        n_source_rows: n,
        alpha: 1.0,
        truncated: 0,
    });
    let counts = class_counts(ctx.labels, &rows, ctx.k);
    let parent = freqs(&counts, n);
    let purity = ratio(counts.iter().copied().max().unwrap_or(0), n);
    let mut best = None;
    if depth < ctx.cfg.max_depth && purity < ctx.cfg.purity_stop && n >= 2 * ctx.min_rows {
        let mut best_ig = MIN_GAIN;
        for cond in candidate_conditions(ctx.data, &rows) {
            let (l, r) = partition(ctx.data, &rows, &cond);
            if l.len() < ctx.min_rows || r.len() < ctx.min_rows {
                continue;
            }
            let ld = freqs(&class_counts(ctx.labels, &l, ctx.k), l.len());
            let rd = freqs(&class_counts(ctx.labels, &r, ctx.k), r.len());
            let ig = gain_of(&parent, ratio(l.len(), n), &ld, &rd);
            if ig > best_ig {
                best_ig = ig;
                best = Some((cond, ig, l, r));
            }
        }
    }
    match best {
        None => Ok(TreeNode::Leaf {
            dist: Distribution::categorical(parent)?,
            n_source_rows: n,
            path,
        }),
        Some((condition, ig, l, r)) => {
            let left = build(ctx, l, path.extended(condition), depth + 1)?;
            let right = build(ctx, r, path.extended(condition.negate()), depth + 1)?;
            Ok(TreeNode::Internal {
                condition,
                ig,
                left: Box::new(left),
                right: Box::new(right),
            })
        }
    }
}

pub fn grow_standard(train: &Dataset, cfg: &TreeConfig) -> Result<DecisionTree> {
    cfg.validate()?;
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let config = TreeConfig {
        regime: KnowledgeRegime::NoTargetKnowledge,
        ..cfg.clone()
    };
    let mut ctx = Ctx {
        data: train,
        labels: train.labels()?,
        k: train.schema().n_classes(),
        cfg: &config,
        min_rows: config.min_rows(train.len()),
        diagnostics: Vec::new(),
    };
    let root = build(&mut ctx, (0..train.len()).collect(), Path::root(), 0)?;
    let diagnostics = ctx.diagnostics;
    Ok(DecisionTree {
        root,
        config,
        schema: train.schema_arc().clone(),
        pivot: None,
        diagnostics,
    })
}
