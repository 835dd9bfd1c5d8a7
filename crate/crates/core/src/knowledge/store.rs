use std::collections::HashMap;
use std::sync::Arc;

use crate::data::{Column, Dataset, Path, Schema, SplitCondition, Threshold};
use crate::error::{Error, Result};

/// Default ceiling on the number of cells of one precomputed cross-table.
pub const DEFAULT_CELL_BUDGET: usize = 10_000_000;

/// How much is known about the target attribute distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnowledgeRegime {
    NoTargetKnowledge,
    FullTargetKnowledge,
    /// Joint distributions of at most `k` attributes.
    PartialTargetKnowledge(usize),
}

impl KnowledgeRegime {
    pub fn arity_limit(&self) -> Option<usize> {
        match self {
            KnowledgeRegime::PartialTargetKnowledge(k) => Some(*k),
            _ => None,
        }
    }

    /// Accepts `ntdk`, `ftdk` and `ptdk<k>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ntdk" => Ok(KnowledgeRegime::NoTargetKnowledge),
            "ftdk" => Ok(KnowledgeRegime::FullTargetKnowledge),
            _ => match s.strip_prefix("ptdk").and_then(|k| k.parse::<usize>().ok()) {
                Some(k) if k >= 1 => Ok(KnowledgeRegime::PartialTargetKnowledge(k)),
                _ => Err(Error::Config(format!("unknown knowledge regime `{s}`"))),
            },
        }
    }

    pub fn name(&self) -> String {
        match self {
            KnowledgeRegime::NoTargetKnowledge => "ntdk".into(),
            KnowledgeRegime::FullTargetKnowledge => "ftdk".into(),
            KnowledgeRegime::PartialTargetKnowledge(k) => format!("ptdk{k}"),
        }
    }
}

/// Weighted joint sample over a set of attributes. A cross-table is the
/// special case of discrete attributes with one point per cell; a full target
/// sample is the case of all attributes with unit weights.
#[derive(Debug, Clone)]
pub(crate) struct PointTable {
    attrs: Vec<usize>,
    columns: Vec<Column>,
    weights: Vec<f64>,
}

impl PointTable {
    pub(crate) fn new(attrs: Vec<usize>, columns: Vec<Column>, weights: Vec<f64>) -> Self {
        Self {
            attrs,
            columns,
            weights,
        }
    }

    pub(crate) fn attrs(&self) -> &[usize] {
        &self.attrs
    }

    pub(crate) fn covers(&self, key: &[usize]) -> bool {
        key.iter().all(|a| self.attrs.contains(a))
    }

    fn local(&self, attr: usize) -> usize {
        self.attrs.iter().position(|&a| a == attr).expect("attribute covered")
    }

    #[inline]
    fn holds(&self, cond: &SplitCondition, local: usize, i: usize) -> bool {
        match (&self.columns[local], cond.threshold) {
            (Column::Discrete(v), Threshold::Code(_)) => cond.holds_code(v[i]),
            (Column::Continuous(v), Threshold::Value(_)) => cond.holds_num(v[i]),
            _ => false,
        }
    }

    /// `P(event_e | path)` for every event, or `None` when the path has no mass.
    fn conditional(&self, events: &[Vec<SplitCondition>], path: &Path) -> Option<Vec<f64>> {
        let path_local: Vec<(SplitCondition, usize)> = path
            .conditions()
            .iter()
            .map(|c| (*c, self.local(c.attr)))
            .collect();
        let ev_local: Vec<Vec<(SplitCondition, usize)>> = events
            .iter()
            .map(|e| e.iter().map(|c| (*c, self.local(c.attr))).collect())
            .collect();
        let mut ctx = 0.0;
        let mut hits = vec![0.0; events.len()];
        for i in 0..self.weights.len() {
            if path_local.iter().all(|(c, l)| self.holds(c, *l, i)) {
                let w = self.weights[i];
                ctx += w;
                for (e, ev) in ev_local.iter().enumerate() {
                    if ev.iter().all(|(c, l)| self.holds(c, *l, i)) {
                        hits[e] += w;
                    }
                }
            }
        }
        if ctx <= 0.0 {
            return None;
        }
        Some(hits.into_iter().map(|h| h / ctx).collect())
    }

    /// Marginal point masses of one continuous or discrete attribute.
    fn marginal(&self, attr: usize) -> Vec<(f64, f64)> {
        let l = self.local(attr);
        match &self.columns[l] {
            Column::Continuous(v) => v.iter().copied().zip(self.weights.iter().copied()).collect(),
            Column::Discrete(v) => v
                .iter()
                .map(|&c| c as f64)
                .zip(self.weights.iter().copied())
                .collect(),
        }
    }
}

/// Knots of a cumulative distribution, optionally conditioned on a discrete
/// context, evaluated by linear interpolation between knots.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfKnots {
    pub attr: usize,
    pub context: Vec<(usize, u32)>,
    pub knots: Vec<(f64, f64)>,
}

impl CdfKnots {
    /// `F(t)`: 0 below the first knot, 1 from the last knot on.
    pub fn eval(&self, t: f64) -> f64 {
        let k = &self.knots;
        if k.is_empty() || t < k[0].0 {
            return 0.0;
        }
        if t >= k[k.len() - 1].0 {
            return k[k.len() - 1].1;
        }
        let i = k.partition_point(|&(x, _)| x <= t);
        let (x0, f0) = k[i - 1];
        let (x1, f1) = k[i];
        if t == x0 {
            return f0;
        }
        f0 + (f1 - f0) * (t - x0) / (x1 - x0)
    }

    fn matches(&self, path: &Path) -> bool {
        let conds = path.conditions();
        conds.len() == self.context.len()
            && conds.iter().all(|c| {
                c.op == crate::data::Op::Eq
                    && matches!(c.threshold, Threshold::Code(code) if self.context.contains(&(c.attr, code)))
            })
    }
}

/// Target class distribution given a single attribute, needed only to pick
/// the pivot attribute.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassConditional {
    /// `p_x[x] = P_T(X = x)`; `p_y[x] = P_T(Y | X = x)`, `None` for values
    /// with no target mass.
    Discrete {
        p_x: Vec<f64>,
        p_y: Vec<Option<Vec<f64>>>,
    },
    /// Class weights per distinct observed value, sorted by value.
    Continuous { points: Vec<(f64, Vec<f64>)> },
}

/// Target-domain knowledge queried while growing a tree. Immutable after
/// construction.
#[derive(Debug, Clone)]
pub struct KnowledgeStore {
    schema: Arc<Schema>,
    regime: KnowledgeRegime,
    arity_limit: Option<usize>,
    tables: Vec<PointTable>,
    index: HashMap<Vec<usize>, usize>,
    cdfs: Vec<CdfKnots>,
    class_conditionals: Option<Vec<Option<ClassConditional>>>,
    class_marginal: Option<Vec<f64>>,
    warnings: Vec<String>,
}

impl KnowledgeStore {
    pub fn empty(schema: Arc<Schema>) -> Self {
        Self {
            schema,
            regime: KnowledgeRegime::NoTargetKnowledge,
            arity_limit: None,
            tables: Vec::new(),
            index: HashMap::new(),
            cdfs: Vec::new(),
            class_conditionals: None,
            class_marginal: None,
            warnings: Vec::new(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        schema: Arc<Schema>,
        regime: KnowledgeRegime,
        arity_limit: Option<usize>,
        tables: Vec<PointTable>,
        cdfs: Vec<CdfKnots>,
        class_conditionals: Option<Vec<Option<ClassConditional>>>,
        class_marginal: Option<Vec<f64>>,
        warnings: Vec<String>,
    ) -> Self {
        let index = tables
            .iter()
            .enumerate()
            .map(|(i, t)| (t.attrs.clone(), i))
            .collect();
        Self {
            schema,
            regime,
            arity_limit,
            tables,
            index,
            cdfs,
            class_conditionals,
            class_marginal,
            warnings,
        }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn regime(&self) -> KnowledgeRegime {
        self.regime
    }

    pub fn arity_limit(&self) -> Option<usize> {
        self.arity_limit
    }

    /// Attribute sets of the stored joint tables, sorted.
    pub fn table_keys(&self) -> Vec<Vec<usize>> {
        let mut keys: Vec<Vec<usize>> = self.tables.iter().map(|t| t.attrs().to_vec()).collect();
        keys.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        keys
    }

    pub fn class_conditional(&self, attr: usize) -> Option<&ClassConditional> {
        self.class_conditionals.as_ref()?.get(attr)?.as_ref()
    }

    pub fn has_class_conditionals(&self) -> bool {
        self.class_conditionals.is_some()
    }

    pub fn class_marginal(&self) -> Option<&[f64]> {
        self.class_marginal.as_deref()
    }

    /// Notes collected while loading, such as domain values absent from a table.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn is_empty(&self) -> bool {
        self.regime == KnowledgeRegime::NoTargetKnowledge
            || (self.tables.is_empty() && self.cdfs.is_empty())
    }

    fn covering_table(&self, key: &[usize]) -> Option<&PointTable> {
        if let Some(&i) = self.index.get(key) {
            return Some(&self.tables[i]);
        }
        self.tables
            .iter()
            .filter(|t| t.covers(key))
            .min_by_key(|t| t.attrs.len())
    }

    /// `P_T(event | path)` for several events, each a conjunction, or `None`
    /// when the store cannot answer for the whole path.
    pub fn query_many(&self, events: &[Vec<SplitCondition>], path: &Path) -> Option<Vec<f64>> {
        if self.regime == KnowledgeRegime::NoTargetKnowledge || events.is_empty() {
            return None;
        }
        let mut key = path.attributes();
        for c in events.iter().flatten() {
            if !key.contains(&c.attr) {
                key.push(c.attr);
            }
        }
        if self.arity_limit.is_some_and(|k| key.len() > k) {
            return None;
        }
        key.sort_unstable();
        if let Some(t) = self.covering_table(&key) {
            return t.conditional(events, path);
        }
        // interpolated CDFs answer `X <= t` / `X > t` in an exact discrete context
        let single: Option<Vec<SplitCondition>> = events
            .iter()
            .map(|e| if e.len() == 1 { Some(e[0]) } else { None })
            .collect();
        let single = single?;
        let attr = single[0].attr;
        if single.iter().all(|e| e.attr == attr && matches!(e.threshold, Threshold::Value(_))) {
            let cdf = self.cdfs.iter().find(|c| c.attr == attr && c.matches(path))?;
            return Some(
                single
                    .iter()
                    .map(|e| {
                        let Threshold::Value(t) = e.threshold else { unreachable!() };
                        let f = cdf.eval(t);
                        if e.op == crate::data::Op::Leq {
                            f
                        } else {
                            1.0 - f
                        }
                    })
                    .collect(),
            );
        }
        None
    }

    /// Target point masses of one attribute, if any stored table or
    /// unconditional CDF covers it.
    pub fn marginal_points(&self, attr: usize) -> Option<Vec<(f64, f64)>> {
        if let Some(t) = self.covering_table(&[attr]) {
            return Some(t.marginal(attr));
        }
        let cdf = self
            .cdfs
            .iter()
            .find(|c| c.attr == attr && c.context.is_empty())?;
        let mut prev = 0.0;
        Some(
            cdf.knots
                .iter()
                .map(|&(x, f)| {
                    let w = f - prev;
                    prev = f;
                    (x, w)
                })
                .collect(),
        )
    }
}

fn check_query(schema: &Schema, cond: &SplitCondition, path: &Path) -> Result<()> {
    cond.check(schema).map_err(|_| {
        if cond.attr >= schema.n_attrs() {
            Error::UnknownAttribute(format!("#{}", cond.attr))
        } else {
            Error::Domain(format!("condition does not fit `{}`", schema.attr(cond.attr).name))
        }
    })?;
    path.check(schema)
}

/// `P_T(cond | path)` when the store can answer for the full path.
pub fn query_target(ks: &KnowledgeStore, cond: &SplitCondition, path: &Path) -> Result<Option<f64>> {
    check_query(&ks.schema, cond, path)?;
    Ok(ks
        .query_many(&[vec![*cond]], path)
        .map(|v| v[0]))
}

/// The longest answerable restriction of `path` to its leading attributes.
///
/// Under a `k`-way arity limit the candidate keeps at most the first `k - 1`
/// distinct attributes of the path; shorter prefixes are tried when the
/// knowledge has no mass for a longer one. `None` means nothing is answerable
/// and the caller falls back to the source estimate.
pub fn maximal_subpath(
    ks: &KnowledgeStore,
    cond: &SplitCondition,
    path: &Path,
) -> Result<Option<Path>> {
    check_query(&ks.schema, cond, path)?;
    Ok(maximal_subpath_for(ks, &[vec![*cond]], path))
}

pub(crate) fn maximal_subpath_for(
    ks: &KnowledgeStore,
    events: &[Vec<SplitCondition>],
    path: &Path,
) -> Option<Path> {
    if ks.regime == KnowledgeRegime::NoTargetKnowledge {
        return None;
    }
    let m = path.attributes().len();
    let start = match ks.arity_limit {
        Some(k) => m.min(k.saturating_sub(1)),
        None => m,
    };
    (0..=start).rev().find_map(|j| {
        let sub = if j == m { path.clone() } else { path.leading_attributes(j) };
        ks.query_many(events, &sub).map(|_| sub)
    })
}

/// Builds knowledge from a target sample. Class labels, when present, only
/// feed the class conditionals used to pick the pivot attribute; the joint
/// tables never see them.
pub fn build_from_target_sample(target: &Dataset, regime: KnowledgeRegime) -> Result<KnowledgeStore> {
    build_with_budget(target, regime, DEFAULT_CELL_BUDGET)
}

pub fn build_with_budget(
    target: &Dataset,
    regime: KnowledgeRegime,
    cell_budget: usize,
) -> Result<KnowledgeStore> {
    if target.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let schema = target.schema_arc().clone();
    if regime == KnowledgeRegime::NoTargetKnowledge {
        return Ok(KnowledgeStore::empty(schema));
    }
    let n_attrs = schema.n_attrs();
    let tables = match regime {
        KnowledgeRegime::FullTargetKnowledge => {
            let attrs: Vec<usize> = (0..n_attrs).collect();
            let columns = attrs.iter().map(|&a| target.column(a).clone()).collect();
            vec![PointTable::new(attrs, columns, vec![1.0; target.len()])]
        }
        KnowledgeRegime::PartialTargetKnowledge(k) => {
            if k == 0 {
                return Err(Error::Config("arity limit must be at least 1".into()));
            }
            let mut tables = Vec::new();
            for size in 1..=k.min(n_attrs) {
                for subset in combinations(n_attrs, size) {
                    tables.push(aggregate(target, &subset, cell_budget)?);
                }
            }
            tables
        }
        KnowledgeRegime::NoTargetKnowledge => unreachable!(),
    };
    let (class_conditionals, class_marginal) = if target.is_labeled() {
        let (cc, cm) = class_conditionals_from(target)?;
        (Some(cc), Some(cm))
    } else {
        (None, None)
    };
    Ok(KnowledgeStore::from_parts(
        schema,
        regime,
        regime.arity_limit(),
        tables,
        Vec::new(),
        class_conditionals,
        class_marginal,
        Vec::new(),
    ))
}

/// All `size`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, size, &mut Vec::with_capacity(size), &mut out);
    out
}

fn aggregate(target: &Dataset, attrs: &[usize], budget: usize) -> Result<PointTable> {
    let schema = target.schema();
    let mut cells: usize = 1;
    for &a in attrs {
        let width = match target.column(a) {
            Column::Discrete(_) => schema.attr(a).cardinality(),
            Column::Continuous(v) => {
                let mut s: Vec<u64> = v.iter().map(|x| x.to_bits()).collect();
                s.sort_unstable();
                s.dedup();
                s.len()
            }
        };
        cells = cells.saturating_mul(width.max(1));
    }
    if cells > budget {
        return Err(Error::ArityOverflow { cells, budget });
    }
    let mut slot: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut keys: Vec<Vec<u64>> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    for r in 0..target.len() {
        let key: Vec<u64> = attrs
            .iter()
            .map(|&a| match target.column(a) {
                Column::Discrete(v) => v[r] as u64,
                Column::Continuous(v) => v[r].to_bits(),
            })
            .collect();
        match slot.get(&key) {
            Some(&i) => weights[i] += 1.0,
            None => {
                slot.insert(key.clone(), keys.len());
                keys.push(key);
                weights.push(1.0);
            }
        }
    }
    let columns = attrs
        .iter()
        .enumerate()
        .map(|(j, &a)| match target.column(a) {
            Column::Discrete(_) => Column::Discrete(keys.iter().map(|k| k[j] as u32).collect()),
            Column::Continuous(_) => {
                Column::Continuous(keys.iter().map(|k| f64::from_bits(k[j])).collect())
            }
        })
        .collect();
    Ok(PointTable::new(attrs.to_vec(), columns, weights))
}

type ClassKnowledge = (Vec<Option<ClassConditional>>, Vec<f64>);

fn class_conditionals_from(target: &Dataset) -> Result<ClassKnowledge> {
    let schema = target.schema();
    let y = target.labels()?;
    let n = target.len();
    let k = schema.n_classes();
    let mut marginal = vec![0usize; k];
    for &c in y {
        marginal[c as usize] += 1;
    }
    let mut out = Vec::with_capacity(schema.n_attrs());
    for a in 0..schema.n_attrs() {
        out.push(Some(match target.column(a) {
            Column::Discrete(v) => {
                let card = schema.attr(a).cardinality();
                let mut counts = vec![vec![0usize; k]; card];
                for (r, &x) in v.iter().enumerate() {
                    counts[x as usize][y[r] as usize] += 1;
                }
                let n_x: Vec<usize> = counts.iter().map(|c| c.iter().sum()).collect();
                ClassConditional::Discrete {
                    p_x: crate::stats::freqs(&n_x, n),
                    p_y: counts
                        .iter()
                        .zip(&n_x)
                        .map(|(c, &nx)| (nx > 0).then(|| crate::stats::freqs(c, nx)))
                        .collect(),
                }
            }
            Column::Continuous(v) => {
                let mut pairs: Vec<(f64, u32)> = v.iter().copied().zip(y.iter().copied()).collect();
                pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
                let mut points: Vec<(f64, Vec<f64>)> = Vec::new();
                for (x, c) in pairs {
                    match points.last_mut() {
                        Some((px, w)) if *px == x => w[c as usize] += 1.0,
                        _ => {
                            let mut w = vec![0.0; k];
                            w[c as usize] = 1.0;
                            points.push((x, w));
                        }
                    }
                }
                ClassConditional::Continuous { points }
            }
        }));
    }
    Ok((out, crate::stats::freqs(&marginal, n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Attribute, Column, Schema};

    fn abc() -> Dataset {
        let schema = Arc::new(
            Schema::new(
                vec![
                    Attribute::discrete("A", &["0", "1"]),
                    Attribute::discrete("B", &["0", "1"]),
                    Attribute::discrete("C", &["0", "1"]),
                ],
                Attribute::discrete("Y", &["0", "1"]),
                None,
            )
            .unwrap(),
        );
        Dataset::new(
            schema,
            vec![
                Column::Discrete(vec![0, 0, 0, 0, 1, 1, 1, 1, 1, 1]),
                Column::Discrete(vec![0, 1, 0, 1, 0, 1, 1, 1, 0, 0]),
                Column::Discrete(vec![1, 1, 0, 0, 0, 1, 0, 1, 1, 0]),
            ],
            None,
        )
        .unwrap()
    }

    #[test]
    fn no_knowledge_answers_nothing() {
        let d = abc();
        let ks = build_from_target_sample(&d, KnowledgeRegime::NoTargetKnowledge).unwrap();
        assert!(ks.is_empty());
        let q = query_target(&ks, &SplitCondition::eq(0, 0), &Path::root()).unwrap();
        assert_eq!(q, None);
        assert_eq!(maximal_subpath(&ks, &SplitCondition::eq(0, 0), &Path::root()).unwrap(), None);
    }

    #[test]
    fn pairwise_tables_enumerate_subsets() {
        let ks = build_from_target_sample(&abc(), KnowledgeRegime::PartialTargetKnowledge(2)).unwrap();
        assert_eq!(
            ks.table_keys(),
            vec![vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]]
        );
    }

    #[test]
    fn full_marginal_lookup() {
        // A = 0 on 4 of 10 rows
        let ks = build_from_target_sample(&abc(), KnowledgeRegime::FullTargetKnowledge).unwrap();
        let q = query_target(&ks, &SplitCondition::eq(0, 0), &Path::root()).unwrap();
        assert_eq!(q, Some(0.4));
        let phi = Path::new(vec![SplitCondition::eq(0, 1), SplitCondition::eq(1, 1)]);
        // rows with A=1, B=1: 5, 6, 7; C=1 on 5 and 7
        let q = query_target(&ks, &SplitCondition::eq(2, 1), &phi).unwrap();
        assert_eq!(q, Some(2.0 / 3.0));
    }

    #[test]
    fn arity_limit_blocks_wide_queries() {
        let ks = build_from_target_sample(&abc(), KnowledgeRegime::PartialTargetKnowledge(2)).unwrap();
        let phi = Path::new(vec![SplitCondition::eq(0, 1), SplitCondition::eq(1, 1)]);
        assert_eq!(query_target(&ks, &SplitCondition::eq(2, 1), &phi).unwrap(), None);
        let sub = maximal_subpath(&ks, &SplitCondition::eq(2, 1), &phi).unwrap().unwrap();
        assert_eq!(sub.conditions(), &[SplitCondition::eq(0, 1)]);
        let q = query_target(&ks, &SplitCondition::eq(2, 1), &sub).unwrap();
        // A = 1 on rows 4..=9, C = 1 on 5, 7, 8
        assert_eq!(q, Some(0.5));
    }

    #[test]
    fn zero_mass_context_shrinks_subpath() {
        let ks = build_from_target_sample(&abc(), KnowledgeRegime::FullTargetKnowledge).unwrap();
        // A=0, B=0, C=0 is row 2 only; add B != 0 to make it empty
        let phi = Path::new(vec![
            SplitCondition::eq(0, 0),
            SplitCondition::eq(2, 0),
            SplitCondition::neq(2, 0),
        ]);
        assert_eq!(query_target(&ks, &SplitCondition::eq(1, 0), &phi).unwrap(), None);
        let sub = maximal_subpath(&ks, &SplitCondition::eq(1, 0), &phi).unwrap().unwrap();
        assert_eq!(sub.conditions(), &[SplitCondition::eq(0, 0)]);
    }

    #[test]
    fn cell_budget_is_enforced() {
        let err = build_with_budget(&abc(), KnowledgeRegime::PartialTargetKnowledge(3), 4).unwrap_err();
        assert!(matches!(err, Error::ArityOverflow { cells: 8, budget: 4 }));
    }

    #[test]
    fn interpolated_cdf() {
        let cdf = CdfKnots {
            attr: 0,
            context: vec![],
            knots: vec![(10.0, 0.2), (20.0, 0.7), (30.0, 1.0)],
        };
        assert_eq!(cdf.eval(20.0), 0.7);
        assert_eq!(cdf.eval(9.9), 0.0);
        assert_eq!(cdf.eval(10.0), 0.2);
        assert!((cdf.eval(15.0) - 0.45).abs() < 1e-12);
        assert_eq!(cdf.eval(35.0), 1.0);
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
    }
}
