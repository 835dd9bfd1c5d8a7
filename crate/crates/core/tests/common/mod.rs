#![allow(dead_code)]

pub mod oracle;

use std::sync::Arc;

use dadt::data::{Attribute, Column, Dataset, Schema};
use dadt::tree::TreeConfig;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Random probability vector of length `k`, sometimes with zero entries.
pub fn simplex(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k)
        .map(|_| if rng.gen_bool(0.15) { 0.0 } else { rng.gen::<f64>() })
        .collect();
    let s: f64 = w.iter().sum();
    if s == 0.0 {
        let mut v = vec![0.0; k];
        v[rng.gen_range(0..k)] = 1.0;
        return v;
    }
    w.iter().map(|x| x / s).collect()
}

pub fn labels(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("v{i}")).collect()
}

/// Mixed discrete/continuous schema with a binary class and `n_attrs`
/// predictive attributes; the first one is a binary protected attribute when
/// `protected` is set.
pub fn random_schema(rng: &mut ChaCha8Rng, n_attrs: usize, protected: bool) -> Arc<Schema> {
    let attrs = (0..n_attrs)
        .map(|i| {
            let name = format!("A{i}");
            if protected && i == 0 {
                Attribute::discrete(name, &["g0", "g1"])
            } else if rng.gen_bool(0.35) {
                Attribute::continuous(name)
            } else {
                let k = rng.gen_range(2..=4);
                let l = labels(k);
                Attribute::discrete(name, &l.iter().map(String::as_str).collect::<Vec<_>>())
            }
        })
        .collect();
    let p = protected.then_some("A0");
    Arc::new(Schema::new(attrs, Attribute::discrete("Y", &["n", "y"]), p).unwrap())
}

/// Labels depend on a random subset of attributes plus noise so that trees
/// have something to find. Continuous values sit on a coarse grid so ties occur.
pub fn random_dataset(rng: &mut ChaCha8Rng, schema: &Arc<Schema>, n: usize) -> Dataset {
    let mut cols = Vec::new();
    let mut score = vec![0.0f64; n];
    for a in &schema.predictive {
        let weight = rng.gen_range(-1.0..1.0);
        if a.is_discrete() {
            let k = a.cardinality() as u32;
            let v: Vec<u32> = (0..n).map(|_| rng.gen_range(0..k)).collect();
            for (s, &c) in score.iter_mut().zip(&v) {
                *s += weight * c as f64;
            }
            cols.push(Column::Discrete(v));
        } else {
            let v: Vec<f64> = (0..n).map(|_| (rng.gen_range(0..40) as f64) / 4.0).collect();
            for (s, &x) in score.iter_mut().zip(&v) {
                *s += weight * x / 5.0;
            }
            cols.push(Column::Continuous(v));
        }
    }
    let mean = score.iter().sum::<f64>() / n as f64;
    let y = score
        .iter()
        .map(|&s| ((s > mean) ^ rng.gen_bool(0.15)) as u32)
        .collect();
    Dataset::new(schema.clone(), cols, Some(y)).unwrap()
}

pub fn binary_schema(names: &[&str], protected: Option<&str>) -> Arc<Schema> {
    let attrs = names.iter().map(|n| Attribute::discrete(*n, &["0", "1"])).collect();
    Arc::new(Schema::new(attrs, Attribute::discrete("Y", &["0", "1"]), protected).unwrap())
}

/// Dataset over binary attributes from `(x, y, count)` cells.
pub fn from_cells(schema: &Arc<Schema>, cells: &[(&[u32], u32, usize)]) -> Dataset {
    let k = schema.n_attrs();
    let mut cols = vec![Vec::new(); k];
    let mut y = Vec::new();
    for (x, label, count) in cells {
        for _ in 0..*count {
            for (c, v) in cols.iter_mut().zip(x.iter()) {
                c.push(*v);
            }
            y.push(*label);
        }
    }
    Dataset::new(schema.clone(), cols.into_iter().map(Column::Discrete).collect(), Some(y)).unwrap()
}

fn random_config(r: &mut ChaCha8Rng) -> TreeConfig {
    TreeConfig {
        max_depth: r.gen_range(1..=6),
        min_node_fraction: [0.01, 0.03, 0.05, 0.1][r.gen_range(0..4)],
        purity_stop: [1.0, 0.95, 0.9][r.gen_range(0..3)],
        ..Default::default()
    }
}

/// 50 datasets with up to 500 rows and 6 mixed attributes.
pub fn corpus() -> Vec<(Dataset, TreeConfig)> {
    let mut r = rng(2024);
    (0..50)
        .map(|_| {
            let n_attrs = r.gen_range(1..=6);
            let schema = random_schema(&mut r, n_attrs, false);
            let n = r.gen_range(20..=500);
            let d = random_dataset(&mut r, &schema, n);
            (d, random_config(&mut r))
        })
        .collect()
}
