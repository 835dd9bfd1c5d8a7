//! Numerical kernel: frequency estimates, Shannon entropy, information gain
//! and the one-dimensional Wasserstein distance.

use crate::data::{DatasetView, SplitCondition};
use crate::error::{Error, Result};

/// Tolerance on the unit sum of a probability vector.
pub const SUM_TOL: f64 = 1e-9;

/// Ordered axis a distribution lives on. Categorical supports are the schema
/// labels mapped to positions `0, 1, ..., k-1` with unit spacing.
#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    Categorical(usize),
    Numeric(Vec<f64>),
}

impl Support {
    fn len(&self) -> usize {
        match self {
            Support::Categorical(k) => *k,
            Support::Numeric(v) => v.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    support: Support,
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(support: Support, probs: Vec<f64>) -> Result<Self> {
        if support.len() != probs.len() || probs.is_empty() {
            return Err(Error::Domain("support and probabilities differ in length".into()));
        }
        if let Support::Numeric(v) = &support {
            if v.iter().any(|x| !x.is_finite()) || v.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Domain(
                    "numeric support must be finite and strictly increasing".into(),
                ));
            }
        }
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Domain("probability outside [0, 1]".into()));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::Normalization {
                sum,
                tolerance: SUM_TOL,
            });
        }
        Ok(Self { support, probs })
    }

    pub fn categorical(probs: Vec<f64>) -> Result<Self> {
        Self::new(Support::Categorical(probs.len()), probs)
    }

    /// Relative frequencies of `counts`. Errors on an all-zero vector.
    pub fn from_counts(counts: &[usize]) -> Result<Self> {
        let n: usize = counts.iter().sum();
        if n == 0 {
            return Err(Error::EmptyContext);
        }
        Ok(Self {
            support: Support::Categorical(counts.len()),
            probs: freqs(counts, n),
        })
    }

    /// Empirical distribution of a sample, each observation weighted equally.
    pub fn empirical(sample: &[f64]) -> Result<Self> {
        Self::weighted(sample.iter().map(|&x| (x, 1.0)))
    }

    /// Distribution of weighted point masses; weights are normalized.
    pub fn weighted<I: IntoIterator<Item = (f64, f64)>>(points: I) -> Result<Self> {
        let mut pts: Vec<(f64, f64)> = points.into_iter().collect();
        if pts.iter().any(|(x, w)| !x.is_finite() || w.is_nan() || *w < 0.0) {
            return Err(Error::Domain("invalid weighted point".into()));
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let total: f64 = pts.iter().map(|p| p.1).sum();
        if pts.is_empty() || total <= 0.0 {
            return Err(Error::EmptyContext);
        }
        let mut support: Vec<f64> = Vec::new();
        let mut mass: Vec<f64> = Vec::new();
        for (x, w) in pts {
            if support.last() == Some(&x) {
                *mass.last_mut().unwrap() += w;
            } else {
                support.push(x);
                mass.push(w);
            }
        }
        let probs = mass.into_iter().map(|w| w / total).collect();
        Ok(Self {
            support: Support::Numeric(support),
            probs,
        })
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }

    /// Index of the most probable value; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        argmax(&self.probs)
    }
}

/// `count / n` for each entry; the one place frequency ratios are formed.
#[inline]
pub fn freqs(counts: &[usize], n: usize) -> Vec<f64> {
    counts.iter().map(|&c| ratio(c, n)).collect()
}

#[inline]
pub fn ratio(count: usize, n: usize) -> f64 {
    count as f64 / n as f64
}

pub fn argmax(probs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &p) in probs.iter().enumerate().skip(1) {
        if p > probs[best] {
            best = i;
        }
    }
    best
}

/// Event whose relative frequency [`estimate_freq`] counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Event {
    Split(SplitCondition),
    Class(u32),
}

pub fn estimate_freq(view: &DatasetView<'_>, event: &Event) -> Result<f64> {
    if view.is_empty() {
        return Err(Error::EmptyContext);
    }
    let data = view.data();
    let hits = match event {
        Event::Split(c) => view.rows().iter().filter(|&&r| c.holds(data, r)).count(),
        Event::Class(y) => {
            let labels = data.labels()?;
            view.rows().iter().filter(|&&r| labels[r] == *y).count()
        }
    };
    Ok(ratio(hits, view.len()))
}

/// Shannon entropy in bits of a probability vector, with `0 log 0 = 0`.
#[inline]
pub fn entropy_of(probs: &[f64]) -> f64 {
    let h: f64 = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    // -0.0 for a pure node
    h.max(0.0)
}

pub fn entropy(p: &Distribution) -> f64 {
    entropy_of(&p.probs)
}

/// Raw form of [`information_gain`] over class probability vectors.
#[inline]
pub fn gain_of(parent: &[f64], p_left: f64, left: &[f64], right: &[f64]) -> f64 {
    entropy_of(parent) - p_left * entropy_of(left) - (1.0 - p_left) * entropy_of(right)
}

/// Parent entropy minus the `p_left`-weighted child entropies.
pub fn information_gain(
    parent: &Distribution,
    p_left: f64,
    left: &Distribution,
    right: &Distribution,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_left) {
        return Err(Error::Domain(format!("p_left = {p_left}")));
    }
    if parent.support != left.support || parent.support != right.support {
        return Err(Error::Domain("class distributions over different supports".into()));
    }
    Ok(gain_of(&parent.probs, p_left, &left.probs, &right.probs))
}

fn axis(d: &Distribution) -> Vec<f64> {
    match &d.support {
        Support::Categorical(k) => (0..*k).map(|i| i as f64).collect(),
        Support::Numeric(v) => v.clone(),
    }
}

/// `∫ |F_p - F_q|` over the merged support of two discrete distributions.
pub fn wasserstein(p: &Distribution, q: &Distribution) -> Result<f64> {
    match (&p.support, &q.support) {
        (Support::Categorical(a), Support::Categorical(b)) if a != b => {
            return Err(Error::IncomparableSupports(format!(
                "{a} versus {b} categories"
            )))
        }
        (Support::Categorical(_), Support::Numeric(_))
        | (Support::Numeric(_), Support::Categorical(_)) => {
            return Err(Error::IncomparableSupports(
                "categorical versus numeric axis".into(),
            ))
        }
        _ => {}
    }
    if let (Support::Categorical(_), Support::Categorical(_)) = (&p.support, &q.support) {
        return Ok(wasserstein_categorical(&p.probs, &q.probs));
    }
    let (xp, xq) = (axis(p), axis(q));
    let (mut i, mut j) = (0usize, 0usize);
    let (mut fp, mut fq) = (0.0f64, 0.0f64);
    let mut total = 0.0;
    let mut prev: Option<f64> = None;
    while i < xp.len() || j < xq.len() {
        let x = match (xp.get(i), xq.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        if let Some(x0) = prev {
            total += (fp - fq).abs() * (x - x0);
        }
        while i < xp.len() && xp[i] == x {
            fp += p.probs[i];
            i += 1;
        }
        while j < xq.len() && xq[j] == x {
            fq += q.probs[j];
            j += 1;
        }
        prev = Some(x);
    }
    Ok(total)
}

/// Wasserstein distance between two class probability vectors on a unit-spaced axis.
#[inline]
pub fn wasserstein_categorical(p: &[f64], q: &[f64]) -> f64 {
    let mut fp = 0.0;
    let mut fq = 0.0;
    let mut total = 0.0;
    for k in 0..p.len().saturating_sub(1) {
        fp += p[k];
        fq += q[k];
        total += (fp - fq).abs();
    }
    total
}

/// Wasserstein distance between two equally weighted samples.
pub fn wasserstein_samples(a: &[f64], b: &[f64]) -> Result<f64> {
    wasserstein(&Distribution::empirical(a)?, &Distribution::empirical(b)?)
}

/// Cut points at the 10%, 20%, ..., 90% levels of a weighted sample: the
/// smallest value whose cumulative mass reaches each level. Duplicates removed.
pub fn decile_edges(points: &[(f64, f64)]) -> Vec<f64> {
    let mut pts: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.1 > 0.0).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pts.iter().map(|p| p.1).sum();
    if pts.is_empty() || total <= 0.0 {
        return Vec::new();
    }
    let mut edges: Vec<f64> = Vec::new();
    let mut cum = 0.0;
    let mut level = 1;
    for &(x, w) in &pts {
        cum += w;
        while level <= 9 && cum >= total * level as f64 / 10.0 - 1e-12 * total {
            if edges.last() != Some(&x) {
                edges.push(x);
            }
            level += 1;
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Attribute, Column, Dataset, Schema};
    use std::sync::Arc;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn entropy_reference_values() {
        assert!(close(entropy(&Distribution::categorical(vec![0.5, 0.5]).unwrap()), 1.0));
        assert_eq!(entropy(&Distribution::categorical(vec![1.0, 0.0]).unwrap()), 0.0);
        // -(0.25 log2 0.25 + 0.75 log2 0.75) = 0.5 + 0.311278124459133
        let h = entropy(&Distribution::categorical(vec![0.25, 0.75]).unwrap());
        assert!((h - 0.811_278_124_459_132_9).abs() < 1e-12);
    }

    #[test]
    fn gain_reference_values() {
        let d = |v: Vec<f64>| Distribution::categorical(v).unwrap();
        let parent = d(vec![0.5, 0.5]);
        let g = information_gain(&parent, 0.5, &d(vec![1.0, 0.0]), &d(vec![0.0, 1.0])).unwrap();
        assert!(close(g, 1.0));
        let g = information_gain(&parent, 0.3, &parent, &parent).unwrap();
        assert!(close(g, 0.0));
        // 1 - 0.75 * H(1/3, 2/3) = 1 - 0.75 * 0.918295834054489
        let g = information_gain(
            &parent,
            0.25,
            &d(vec![1.0, 0.0]),
            &d(vec![1.0 / 3.0, 2.0 / 3.0]),
        )
        .unwrap();
        assert!((g - 0.311_278_124_459_133).abs() < 1e-12);
        assert!(information_gain(&parent, 1.5, &parent, &parent).is_err());
    }

    #[test]
    fn wasserstein_reference_values() {
        let p = Distribution::categorical(vec![0.7, 0.3]).unwrap();
        let q = Distribution::categorical(vec![0.5, 0.5]).unwrap();
        assert!(close(wasserstein(&p, &q).unwrap(), 0.2));
        assert_eq!(wasserstein(&p, &p).unwrap(), 0.0);
        // class distributions of the two-attribute agreement example
        let s = Distribution::categorical(vec![0.5, 0.5]).unwrap();
        let t = Distribution::categorical(vec![0.0, 1.0]).unwrap();
        assert!(close(wasserstein(&s, &t).unwrap(), 0.5));

        let three = Distribution::categorical(vec![0.2, 0.3, 0.5]).unwrap();
        assert!(matches!(
            wasserstein(&p, &three),
            Err(Error::IncomparableSupports(_))
        ));
        let num = Distribution::empirical(&[0.0, 1.0]).unwrap();
        assert!(wasserstein(&p, &num).is_err());
    }

    #[test]
    fn wasserstein_on_numeric_samples() {
        // scipy.stats.wasserstein_distance([0, 1, 3], [5, 6, 8]) == 5.0
        assert!(close(wasserstein_samples(&[0.0, 1.0, 3.0], &[5.0, 6.0, 8.0]).unwrap(), 5.0));
        // ([0, 1], [0.5]) -> 0.5
        assert!(close(wasserstein_samples(&[0.0, 1.0], &[0.5]).unwrap(), 0.5));
    }

    #[test]
    fn frequency_estimates() {
        let schema = Arc::new(
            Schema::new(
                vec![Attribute::discrete("X", &["s", "t"])],
                Attribute::discrete("Y", &["0", "1"]),
                None,
            )
            .unwrap(),
        );
        let d = Dataset::new(
            schema.clone(),
            vec![Column::Discrete(vec![1, 0, 1, 0])],
            Some(vec![1, 1, 0, 1]),
        )
        .unwrap();
        let v = d.view();
        let p = estimate_freq(&v, &Event::Split(SplitCondition::eq(0, 1))).unwrap();
        assert_eq!(p, 0.5);
        assert_eq!(estimate_freq(&v, &Event::Class(1)).unwrap(), 0.75);
        let empty = crate::data::DatasetView::new(&d, vec![]);
        assert!(matches!(
            estimate_freq(&empty, &Event::Class(1)),
            Err(Error::EmptyContext)
        ));

        // ten rows with seven positives
        let ten = Dataset::new(
            schema,
            vec![Column::Discrete(vec![0; 10])],
            Some(vec![1, 1, 0, 1, 1, 0, 1, 1, 0, 1]),
        )
        .unwrap();
        assert!(close(estimate_freq(&ten.view(), &Event::Class(1)).unwrap(), 0.7));
    }

    #[test]
    fn distribution_validation() {
        assert!(Distribution::categorical(vec![0.5, 0.4]).is_err());
        assert!(Distribution::categorical(vec![1.2, -0.2]).is_err());
        assert!(Distribution::new(Support::Numeric(vec![1.0, 1.0]), vec![0.5, 0.5]).is_err());
        assert!(Distribution::from_counts(&[0, 0]).is_err());
    }

    #[test]
    fn deciles_of_uniform_grid() {
        let pts: Vec<(f64, f64)> = (1..=100).map(|i| (i as f64, 1.0)).collect();
        assert_eq!(
            decile_edges(&pts),
            vec![10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0]
        );
        let binary = [(0.0, 3.0), (1.0, 7.0)];
        assert_eq!(decile_edges(&binary), vec![0.0, 1.0]);
    }
}
