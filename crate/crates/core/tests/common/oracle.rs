//! Brute-force references shared by the test targets.

use dadt::data::Dataset;
use dadt::metrics::Objective;
use dadt::tree::DecisionTree;

pub fn entropy_oracle(p: &[f64]) -> f64 {
    // natural log, summed from the largest mass down
    let mut v: Vec<f64> = p.iter().copied().filter(|&x| x > 0.0).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v.iter().map(|&x| x * (1.0 / x).ln()).sum::<f64>() / std::f64::consts::LN_2
}

/// Mutual information between the split side and the class, from a 2 x k
/// contingency table.
pub fn gain_oracle(left: &[usize], right: &[usize]) -> f64 {
    let n = (left.iter().sum::<usize>() + right.iter().sum::<usize>()) as f64;
    let sides = [left, right];
    let side_mass: Vec<f64> = sides.iter().map(|s| s.iter().sum::<usize>() as f64 / n).collect();
    let class_mass: Vec<f64> = (0..left.len())
        .map(|y| (left[y] + right[y]) as f64 / n)
        .collect();
    let mut mi = 0.0;
    for (s, side) in sides.iter().enumerate() {
        for (y, &c) in side.iter().enumerate() {
            if c > 0 {
                let pj = c as f64 / n;
                mi += pj * (pj / (side_mass[s] * class_mass[y])).log2();
            }
        }
    }
    mi
}

/// `W1` through the quantile functions: the integral over `u` of
/// `|F^-1(u) - G^-1(u)|`.
pub fn wasserstein_oracle(xp: &[f64], p: &[f64], xq: &[f64], q: &[f64]) -> f64 {
    let cum = |w: &[f64]| {
        w.iter()
            .scan(0.0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect::<Vec<f64>>()
    };
    let (cp, cq) = (cum(p), cum(q));
    let mut breaks: Vec<f64> = cp.iter().chain(cq.iter()).copied().chain([0.0]).collect();
    breaks.iter_mut().for_each(|b| *b = b.min(1.0));
    breaks.sort_by(f64::total_cmp);
    let inv = |xs: &[f64], c: &[f64], u: f64| {
        let i = c.iter().position(|&v| v >= u).unwrap_or(c.len() - 1);
        xs[i]
    };
    breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let u = 0.5 * (w[0] + w[1]);
            (w[1] - w[0]) * (inv(xp, &cp, u) - inv(xq, &cq, u)).abs()
        })
        .sum()
}

/// Every threshold pair on the grid, scored from scratch.
pub fn grid_oracle(tree: &DecisionTree, d: &Dataset, objective: Objective) -> Vec<(f64, f64, f64, f64)> {
    let mut grid: Vec<f64> = tree.leaves().iter().map(|l| l.dist.probs()[1]).collect();
    grid.extend([0.0, 1.0]);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let y = d.labels().unwrap();
    let score: Vec<f64> = (0..d.len()).map(|r| tree.predict_row(d, r).1[1]).collect();
    let mut out = Vec::new();
    for &a in &grid {
        for &b in &grid {
            let pred: Vec<bool> = (0..d.len())
                .map(|r| score[r] >= if d.code(0, r) == 0 { a } else { b })
                .collect();
            let rate = |g: u32| {
                let rows: Vec<usize> = (0..d.len())
                    .filter(|&r| d.code(0, r) == g && (objective == Objective::Dp || y[r] == 1))
                    .collect();
                rows.iter().filter(|&&r| pred[r]).count() as f64 / rows.len() as f64
            };
            let acc = (0..d.len()).filter(|&r| pred[r] == (y[r] == 1)).count() as f64 / d.len() as f64;
            out.push(((rate(0) - rate(1)).abs(), acc, a, b));
        }
    }
    out
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        for &k in &idx[i..=j] {
            out[k] = (i + j) as f64 / 2.0 + 1.0;
        }
        i = j + 1;
    }
    out
}

/// Spearman correlation: Pearson on average ranks.
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}
