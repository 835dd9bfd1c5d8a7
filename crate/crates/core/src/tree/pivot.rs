//! The pivot attribute `X_w` through which target knowledge reaches the class
//! distribution, and the class-distribution estimate built on it.

use crate::data::{Column, Dataset, DatasetView, Path, Schema, SplitCondition};
use crate::error::{Error, Result};
use crate::knowledge::{mix, ClassConditional, KnowledgeRegime, KnowledgeStore, Mixed};
use crate::stats::{decile_edges, freqs, ratio, wasserstein_categorical, SUM_TOL};

const MAX_JOINT_CELLS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq)]
enum Cells {
    /// Cartesian product of the domains of discrete attributes.
    Joint { radix: Vec<usize> },
    /// Intervals `(-inf, e0], (e0, e1], ..., (e_last, inf)` of one continuous attribute.
    Edges(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pivot {
    attrs: Vec<usize>,
    cells: Cells,
}

impl Pivot {
    /// Joint cells over one or more discrete attributes.
    pub fn discrete(schema: &Schema, attrs: &[usize]) -> Result<Self> {
        if attrs.is_empty() {
            return Err(Error::Config("pivot needs at least one attribute".into()));
        }
        let mut radix = Vec::with_capacity(attrs.len());
        let mut cells: usize = 1;
        for &a in attrs {
            if a >= schema.n_attrs() {
                return Err(Error::UnknownAttribute(format!("#{a}")));
            }
            let attr = schema.attr(a);
            if !attr.is_discrete() {
                return Err(Error::Config(format!(
                    "`{}` is continuous; joint pivots take discrete attributes",
                    attr.name
                )));
            }
            radix.push(attr.cardinality());
            cells = cells.saturating_mul(attr.cardinality());
        }
        if cells > MAX_JOINT_CELLS {
            return Err(Error::ArityOverflow {
                cells,
                budget: MAX_JOINT_CELLS,
            });
        }
        Ok(Self {
            attrs: attrs.to_vec(),
            cells: Cells::Joint { radix },
        })
    }

    pub fn continuous(attr: usize, mut edges: Vec<f64>) -> Self {
        edges.sort_by(f64::total_cmp);
        edges.dedup();
        Self {
            attrs: vec![attr],
            cells: Cells::Edges(edges),
        }
    }

    pub fn attrs(&self) -> &[usize] {
        &self.attrs
    }

    pub fn edges(&self) -> Option<&[f64]> {
        match &self.cells {
            Cells::Edges(e) => Some(e),
            Cells::Joint { .. } => None,
        }
    }

    pub fn n_cells(&self) -> usize {
        match &self.cells {
            Cells::Joint { radix } => radix.iter().product(),
            Cells::Edges(e) => e.len() + 1,
        }
    }

    fn cell_of(&self, data: &Dataset, row: usize) -> usize {
        match &self.cells {
            Cells::Joint { radix } => self
                .attrs
                .iter()
                .zip(radix)
                .fold(0, |acc, (&a, &r)| acc * r + data.code(a, row) as usize),
            Cells::Edges(e) => {
                let x = data.num(self.attrs[0], row);
                e.partition_point(|&t| t < x)
            }
        }
    }

    /// Events whose probabilities determine the cell masses: the cells
    /// themselves for joint pivots, `X <= e` per edge for intervals.
    pub(crate) fn events(&self) -> Vec<Vec<SplitCondition>> {
        match &self.cells {
            Cells::Joint { radix } => (0..self.n_cells())
                .map(|mut cell| {
                    let mut codes = vec![0u32; radix.len()];
                    for j in (0..radix.len()).rev() {
                        codes[j] = (cell % radix[j]) as u32;
                        cell /= radix[j];
                    }
                    self.attrs
                        .iter()
                        .zip(codes)
                        .map(|(&a, c)| SplitCondition::eq(a, c))
                        .collect()
                })
                .collect(),
            Cells::Edges(e) => e.iter().map(|&t| vec![SplitCondition::leq(self.attrs[0], t)]).collect(),
        }
    }

    /// Source probabilities of `events()` from cell counts.
    fn source_event_probs(&self, cell_counts: &[usize], n: usize) -> Vec<f64> {
        match &self.cells {
            Cells::Joint { .. } => freqs(cell_counts, n),
            Cells::Edges(e) => {
                let mut cum = 0;
                (0..e.len())
                    .map(|i| {
                        cum += cell_counts[i];
                        ratio(cum, n)
                    })
                    .collect()
            }
        }
    }

    /// Cell masses from event probabilities. Source and target go through
    /// the same arithmetic, so equal inputs give bit-equal cells.
    fn cell_probs(&self, event_probs: &[f64]) -> Vec<f64> {
        match &self.cells {
            Cells::Joint { .. } => event_probs.to_vec(),
            Cells::Edges(_) => {
                let mut out = Vec::with_capacity(event_probs.len() + 1);
                let mut prev = 0.0;
                for &f in event_probs {
                    out.push((f - prev).max(0.0));
                    prev = f;
                }
                out.push((1.0 - prev).max(0.0));
                out
            }
        }
    }
}

/// `P(Y | phi)` at a node from its source rows.
///
/// Without knowledge this is the source class frequency. Otherwise the
/// source class distribution within each pivot cell is reweighted by the
/// mixed cell mass; cells with no source rows contribute the node's class
/// frequency. The returned `Mixed` reports the mixing weight used.
pub fn estimate_class_dist(
    view: &DatasetView<'_>,
    phi: &Path,
    pivot: Option<&Pivot>,
    ks: &KnowledgeStore,
    alpha_override: Option<f64>,
) -> Result<(Vec<f64>, Option<Mixed>)> {
    let data = view.data();
    let labels = data.labels()?;
    let n = view.len();
    if n == 0 {
        return Err(Error::EmptyContext);
    }
    let k = data.schema().n_classes();
    let pivot = match pivot {
        Some(p) if ks.regime() != KnowledgeRegime::NoTargetKnowledge => p,
        _ => {
            let counts = view.class_counts()?;
            return Ok((freqs(&counts, n), None));
        }
    };
    let n_cells = pivot.n_cells();
    let mut n_xy = vec![0usize; n_cells * k];
    let mut n_x = vec![0usize; n_cells];
    let mut n_y = vec![0usize; k];
    for &r in view.rows() {
        let x = pivot.cell_of(data, r);
        let y = labels[r] as usize;
        n_xy[x * k + y] += 1;
        n_x[x] += 1;
        n_y[y] += 1;
    }
    let src_events = pivot.source_event_probs(&n_x, n);
    let s = pivot.cell_probs(&src_events);
    let mixed = mix(ks, &pivot.events(), phi, &src_events, alpha_override)?;
    let w = pivot.cell_probs(&mixed.probs);

    let mut acc = vec![0.0; k];
    for x in 0..n_cells {
        if n_x[x] == 0 {
            if w[x] > 0.0 {
                for y in 0..k {
                    acc[y] += n_y[y] as f64 * w[x];
                }
            }
        } else {
            let r = w[x] / s[x];
            for y in 0..k {
                acc[y] += n_xy[x * k + y] as f64 * r;
            }
        }
    }
    let total: f64 = acc.iter().sum();
    if !((total / n as f64) - 1.0).abs().le(&SUM_TOL) {
        return Err(Error::Internal(format!(
            "class mixture mass {} deviates from 1",
            total / n as f64
        )));
    }
    Ok((acc.into_iter().map(|a| a / total).collect(), Some(mixed)))
}

fn source_points(source: &Dataset, attr: usize) -> Vec<f64> {
    match source.column(attr) {
        Column::Continuous(v) => v.clone(),
        Column::Discrete(v) => v.iter().map(|&c| c as f64).collect(),
    }
}

/// Decile edges over source and target values, each domain carrying half the mass.
fn pooled_edges(source: &[f64], target: &[(f64, f64)]) -> Vec<f64> {
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(source.len() + target.len());
    let t_mass: f64 = target.iter().map(|p| p.1).sum();
    let (s_share, t_share) = if t_mass > 0.0 { (0.5, 0.5) } else { (1.0, 0.0) };
    if !source.is_empty() {
        let w = s_share / source.len() as f64;
        pts.extend(source.iter().map(|&x| (x, w)));
    }
    if t_mass > 0.0 {
        pts.extend(target.iter().map(|&(x, w)| (x, t_share * w / t_mass)));
    }
    decile_edges(&pts)
}

/// Average class-conditional shift of every attribute, weighted by the
/// target attribute distribution. `None` where the knowledge has no class
/// conditionals for the attribute.
pub fn pivot_scores(source: &Dataset, ks: &KnowledgeStore) -> Result<Vec<Option<f64>>> {
    let schema = source.schema();
    let labels = source.labels()?;
    let k = schema.n_classes();
    let n = source.len();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    let src_marginal = freqs(&class_counts_all(labels, k), n);
    let mut out = Vec::with_capacity(schema.n_attrs());
    for a in 0..schema.n_attrs() {
        let score = match ks.class_conditional(a) {
            None => None,
            Some(ClassConditional::Discrete { p_x, p_y }) => {
                let card = schema.attr(a).cardinality();
                let mut counts = vec![vec![0usize; k]; card];
                for r in 0..n {
                    counts[source.code(a, r) as usize][labels[r] as usize] += 1;
                }
                let mut total = 0.0;
                for x in 0..card {
                    let (Some(t), px) = (&p_y[x], p_x[x]) else { continue };
                    if px == 0.0 {
                        continue;
                    }
                    let nx: usize = counts[x].iter().sum();
                    let s = if nx > 0 { freqs(&counts[x], nx) } else { src_marginal.clone() };
                    total += wasserstein_categorical(&s, t) * px;
                }
                Some(total)
            }
            Some(ClassConditional::Continuous { points }) => {
                let t_pts: Vec<(f64, f64)> = points.iter().map(|(x, w)| (*x, w.iter().sum())).collect();
                let edges = pooled_edges(&source_points(source, a), &t_pts);
                let cell = |x: f64| edges.partition_point(|&e| e < x);
                let nc = edges.len() + 1;
                let mut s_counts = vec![vec![0usize; k]; nc];
                for r in 0..n {
                    s_counts[cell(source.num(a, r))][labels[r] as usize] += 1;
                }
                let mut t_w = vec![vec![0.0; k]; nc];
                for (x, w) in points {
                    for (acc, wi) in t_w[cell(*x)].iter_mut().zip(w) {
                        *acc += wi;
                    }
                }
                let t_total: f64 = t_w.iter().flatten().sum();
                let mut total = 0.0;
                for c in 0..nc {
                    let mass: f64 = t_w[c].iter().sum();
                    if mass <= 0.0 {
                        continue;
                    }
                    let t: Vec<f64> = t_w[c].iter().map(|w| w / mass).collect();
                    let nx: usize = s_counts[c].iter().sum();
                    let s = if nx > 0 { freqs(&s_counts[c], nx) } else { src_marginal.clone() };
                    total += wasserstein_categorical(&s, &t) * (mass / t_total);
                }
                Some(total)
            }
        };
        out.push(score);
    }
    Ok(out)
}

fn class_counts_all(labels: &[u32], k: usize) -> Vec<usize> {
    let mut c = vec![0; k];
    for &y in labels {
        c[y as usize] += 1;
    }
    c
}

/// Builds the pivot for attribute `attr`, with decile cells when continuous.
pub fn pivot_for(source: &Dataset, ks: &KnowledgeStore, attr: usize) -> Result<Pivot> {
    let schema = source.schema();
    if schema.attr(attr).is_discrete() {
        return Pivot::discrete(schema, &[attr]);
    }
    let target: Vec<(f64, f64)> = match ks.class_conditional(attr) {
        Some(ClassConditional::Continuous { points }) => {
            points.iter().map(|(x, w)| (*x, w.iter().sum())).collect()
        }
        _ => ks.marginal_points(attr).unwrap_or_default(),
    };
    Ok(Pivot::continuous(attr, pooled_edges(&source_points(source, attr), &target)))
}

/// The attribute with the smallest class-conditional shift, ties to the
/// first in schema order, or the named override.
pub fn select_pivot(source: &Dataset, ks: &KnowledgeStore, x_w_override: Option<&str>) -> Result<Pivot> {
    if let Some(name) = x_w_override {
        let a = source.schema().index_of(name)?;
        return pivot_for(source, ks, a);
    }
    if !ks.has_class_conditionals() {
        return Err(Error::InsufficientKnowledge(
            "choosing the pivot attribute needs target class conditionals or an explicit attribute".into(),
        ));
    }
    let scores = pivot_scores(source, ks)?;
    let mut best: Option<(usize, f64)> = None;
    for (a, s) in scores.iter().enumerate() {
        if let Some(s) = *s {
            if best.is_none_or(|(_, b)| s < b) {
                best = Some((a, s));
            }
        }
    }
    let (a, _) = best.ok_or_else(|| {
        Error::InsufficientKnowledge("no attribute has target class conditionals".into())
    })?;
    pivot_for(source, ks, a)
}
