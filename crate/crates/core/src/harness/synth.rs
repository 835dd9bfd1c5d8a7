//! Binary populations with a controllable shift between source and target.
//!
//! Source: `X1 ~ Ber(0.5)`, `X2` agrees with `X1` with probability
//! `source_agreement` (0.5 makes them independent), further attributes are
//! independent fair coins. Target: `X1 ~ Ber(0.5)` and each later attribute
//! copies its predecessor with probability `target_correlation`, otherwise a
//! fair coin. The label rule is shared; `covshift_violation` flips the target
//! label of every cell with that probability.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{Attribute, Column, Dataset, Schema};
use crate::error::{Error, Result};

pub const MAX_SYNTH_ATTRS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelRule {
    /// `Y = [X1 = X2]`.
    Agreement,
    /// `Y = X1 xor X2 xor ... xor Xn`.
    Parity,
    /// `Y = [X1 + ... + Xn > n / 2]`.
    Majority,
}

impl LabelRule {
    fn eval(self, x: &[u8]) -> bool {
        match self {
            LabelRule::Agreement => x[0] == x[1],
            LabelRule::Parity => x.iter().fold(0, |a, &b| a ^ b) == 1,
            LabelRule::Majority => 2 * x.iter().map(|&b| b as usize).sum::<usize>() > x.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub n_source: usize,
    pub n_target: usize,
    pub n_attrs: usize,
    pub source_agreement: f64,
    pub target_correlation: f64,
    pub label_rule: LabelRule,
    pub label_noise: f64,
    pub covshift_violation: f64,
    /// Mark the last attribute as protected.
    pub protected: bool,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_source: 5000,
            n_target: 5000,
            n_attrs: 2,
            source_agreement: 0.5,
            target_correlation: 1.0,
            label_rule: LabelRule::Agreement,
            label_noise: 0.0,
            covshift_violation: 0.0,
            protected: false,
            seed: 42,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        if !(2..=MAX_SYNTH_ATTRS).contains(&self.n_attrs) {
            return Err(Error::Config(format!(
                "n_attrs must lie in 2..={MAX_SYNTH_ATTRS}"
            )));
        }
        if self.n_source == 0 || self.n_target == 0 {
            return Err(Error::Config("sample sizes must be positive".into()));
        }
        if !unit(self.source_agreement) || !unit(self.target_correlation) || !unit(self.covshift_violation) {
            return Err(Error::Config(
                "source_agreement, target_correlation and covshift_violation must lie in [0, 1]".into(),
            ));
        }
        if !(0.0..0.5).contains(&self.label_noise) {
            return Err(Error::Config("label_noise must lie in [0, 0.5)".into()));
        }
        Ok(())
    }

    pub fn schema(&self) -> Arc<Schema> {
        let attrs = (1..=self.n_attrs)
            .map(|i| Attribute::discrete(format!("X{i}"), &["0", "1"]))
            .collect();
        let protected = self.protected.then(|| format!("X{}", self.n_attrs));
        Arc::new(
            Schema::new(attrs, Attribute::discrete("Y", &["0", "1"]), protected.as_deref())
                .expect("synthetic schema is valid"),
        )
    }
}

/// Exact law of one attribute cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellTruth {
    pub x: Vec<u8>,
    pub p_source: f64,
    pub p_target: f64,
    pub p_y1_source: f64,
    pub p_y1_target: f64,
}

#[derive(Debug, Clone)]
pub struct Synthetic {
    pub source: Dataset,
    pub target: Dataset,
    pub ground_truth: Vec<CellTruth>,
}

fn p_y1_source(cfg: &SynthConfig, x: &[u8]) -> f64 {
    if cfg.label_rule.eval(x) {
        1.0 - cfg.label_noise
    } else {
        cfg.label_noise
    }
}

fn p_y1_target(cfg: &SynthConfig, x: &[u8]) -> f64 {
    let p = p_y1_source(cfg, x);
    let d = cfg.covshift_violation;
    (1.0 - d) * p + d * (1.0 - p)
}

/// Cell probabilities and class conditionals for all `2^n` cells, in
/// lexicographic order with `X1` most significant.
pub fn ground_truth(cfg: &SynthConfig) -> Result<Vec<CellTruth>> {
    cfg.validate()?;
    let n = cfg.n_attrs;
    let q = cfg.source_agreement;
    let rho = cfg.target_correlation;
    let copy = |same: bool| if same { rho + (1.0 - rho) / 2.0 } else { (1.0 - rho) / 2.0 };
    Ok((0..1usize << n)
        .map(|bits| {
            let x: Vec<u8> = (0..n).map(|i| ((bits >> (n - 1 - i)) & 1) as u8).collect();
            let p_source = 0.5 * if x[0] == x[1] { q } else { 1.0 - q } * 0.5f64.powi(n as i32 - 2);
            let p_target = 0.5 * (1..n).map(|i| copy(x[i] == x[i - 1])).product::<f64>();
            CellTruth {
                p_y1_source: p_y1_source(cfg, &x),
                p_y1_target: p_y1_target(cfg, &x),
                x,
                p_source,
                p_target,
            }
        })
        .collect())
}

fn sample(cfg: &SynthConfig, schema: &Arc<Schema>, n_rows: usize, target: bool, rng: &mut ChaCha8Rng) -> Dataset {
    let n = cfg.n_attrs;
    let mut cols = vec![Vec::with_capacity(n_rows); n];
    let mut y = Vec::with_capacity(n_rows);
    let mut x = vec![0u8; n];
    for _ in 0..n_rows {
        x[0] = rng.gen_bool(0.5) as u8;
        for i in 1..n {
            x[i] = if target {
                if rng.gen_bool(cfg.target_correlation) {
                    x[i - 1]
                } else {
                    rng.gen_bool(0.5) as u8
                }
            } else if i == 1 {
                if rng.gen_bool(cfg.source_agreement) {
                    x[0]
                } else {
                    1 - x[0]
                }
            } else {
                rng.gen_bool(0.5) as u8
            };
        }
        let p = if target { p_y1_target(cfg, &x) } else { p_y1_source(cfg, &x) };
        y.push(rng.gen_bool(p) as u32);
        for (c, &v) in cols.iter_mut().zip(&x) {
            c.push(v as u32);
        }
    }
    Dataset::new(
        schema.clone(),
        cols.into_iter().map(Column::Discrete).collect(),
        Some(y),
    )
    .expect("synthetic rows match the schema")
}

pub fn generate_synthetic(cfg: &SynthConfig) -> Result<Synthetic> {
    let ground_truth = ground_truth(cfg)?;
    let schema = cfg.schema();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let source = sample(cfg, &schema, cfg.n_source, false, &mut rng);
    let target = sample(cfg, &schema, cfg.n_target, true, &mut rng);
    Ok(Synthetic {
        source,
        target,
        ground_truth,
    })
}
