use std::fs::File;
use std::path::{Path as FsPath, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use super::synth::{generate_synthetic, SynthConfig};
use crate::data::{read_csv, split_train_test, Dataset, Schema};
use crate::error::{Error, Result};
use crate::knowledge::{build_from_target_sample, KnowledgeRegime, KnowledgeStore};
use crate::metrics::{
    attribute_shift_report, evaluate, postprocess_thresholds, relative_gain_acc,
    relative_gain_fairness, tree_shift_distance, AttributeShift, EvalReport, Objective,
    RelativeGains,
};
use crate::par::par_map;
use crate::tree::{grow, grow_standard, DecisionTree, TreeConfig};

/// A training regime: the train-on-target baseline or a source-trained
/// tree with some amount of target knowledge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Tt,
    Source(KnowledgeRegime),
}

impl Regime {
    pub fn parse(s: &str) -> Result<Self> {
        if s == "tt" {
            Ok(Regime::Tt)
        } else {
            KnowledgeRegime::parse(s).map(Regime::Source)
        }
    }

    pub fn name(&self) -> String {
        match self {
            Regime::Tt => "tt".into(),
            Regime::Source(k) => k.name(),
        }
    }

    fn is_adapted(&self) -> bool {
        matches!(self, Regime::Source(k) if *k != KnowledgeRegime::NoTargetKnowledge)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PairSpec {
    /// CSV files sharing one schema file.
    Files {
        id: String,
        source: PathBuf,
        target: PathBuf,
        schema: PathBuf,
    },
    Synth { id: String, synth: SynthConfig },
}

impl PairSpec {
    pub fn id(&self) -> &str {
        match self {
            PairSpec::Files { id, .. } | PairSpec::Synth { id, .. } => id,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub pairs: Vec<PairSpec>,
    pub regimes: Vec<Regime>,
    pub tree: TreeConfig,
    pub objective: Option<Objective>,
    /// Positive class label for fairness metrics; the last class by default.
    pub positive: Option<String>,
    /// Independent replicates of every pair, each with its own seed.
    pub repeats: usize,
    pub train_fraction: f64,
    /// Worker threads; `None` lets the pool decide.
    pub parallelism: Option<usize>,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(seed: u64, pairs: Vec<PairSpec>, regimes: Vec<Regime>) -> Self {
        Self {
            seed,
            pairs,
            regimes,
            tree: TreeConfig::default(),
            objective: None,
            positive: None,
            repeats: 1,
            train_fraction: 0.75,
            parallelism: None,
            output: None,
        }
    }

    /// Reads a JSON config; relative paths resolve against its directory.
    pub fn from_file(path: &FsPath) -> Result<Self> {
        let doc: Json = serde_json::from_reader(File::open(path)?)?;
        let base = path.parent().unwrap_or_else(|| FsPath::new("."));
        Self::from_json(&doc, base)
    }

    pub fn from_json(doc: &Json, base: &FsPath) -> Result<Self> {
        let cfg_err = |m: &str| Error::Config(m.to_string());
        let obj = doc.as_object().ok_or_else(|| cfg_err("config must be a JSON object"))?;
        let seed = obj
            .get("seed")
            .and_then(Json::as_u64)
            .ok_or_else(|| cfg_err("`seed` is required"))?;
        let resolve = |v: &Json, what: &str| -> Result<PathBuf> {
            let p = v
                .as_str()
                .ok_or_else(|| Error::Config(format!("`{what}` must be a path")))?;
            Ok(base.join(p))
        };
        let mut pairs = Vec::new();
        for (i, p) in obj
            .get("pairs")
            .and_then(Json::as_array)
            .ok_or_else(|| cfg_err("`pairs` must be an array"))?
            .iter()
            .enumerate()
        {
            let id = p
                .get("id")
                .and_then(Json::as_str)
                .map_or_else(|| format!("pair{i}"), str::to_string);
            if let Some(s) = p.get("synth") {
                let synth: SynthConfig = serde_json::from_value(s.clone())
                    .map_err(|e| Error::Config(format!("pair `{id}`: {e}")))?;
                synth.validate()?;
                pairs.push(PairSpec::Synth { id, synth });
            } else {
                let schema = p.get("schema").or_else(|| obj.get("schema")).ok_or_else(|| {
                    Error::Config(format!("pair `{id}` needs a `schema`"))
                })?;
                pairs.push(PairSpec::Files {
                    source: resolve(&p["source"], "source")?,
                    target: resolve(&p["target"], "target")?,
                    schema: resolve(schema, "schema")?,
                    id,
                });
            }
        }
        let regimes = match obj.get("regimes") {
            None => vec![
                Regime::Tt,
                Regime::Source(KnowledgeRegime::NoTargetKnowledge),
                Regime::Source(KnowledgeRegime::FullTargetKnowledge),
            ],
            Some(r) => r
                .as_array()
                .ok_or_else(|| cfg_err("`regimes` must be an array"))?
                .iter()
                .map(|v| Regime::parse(v.as_str().unwrap_or_default()))
                .collect::<Result<_>>()?,
        };
        let tree = match obj.get("tree") {
            Some(t) => TreeConfig::from_json(t)?,
            None => TreeConfig::default(),
        };
        let objective = match obj.get("objective") {
            None | Some(Json::Null) => None,
            Some(v) => Some(Objective::parse(v.as_str().unwrap_or_default())?),
        };
        let cfg = Self {
            seed,
            pairs,
            regimes,
            tree,
            objective,
            positive: obj.get("positive").and_then(Json::as_str).map(str::to_string),
            repeats: obj.get("repeats").and_then(Json::as_u64).unwrap_or(1) as usize,
            train_fraction: obj.get("train_fraction").and_then(Json::as_f64).unwrap_or(0.75),
            parallelism: obj.get("parallelism").and_then(Json::as_u64).map(|n| n as usize),
            output: obj.get("output").map(|o| resolve(o, "output")).transpose()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.tree.validate()?;
        if self.repeats == 0 {
            return Err(Error::Config("`repeats` must be positive".into()));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::Config("`train_fraction` must lie in (0, 1)".into()));
        }
        if self.parallelism == Some(0) {
            return Err(Error::Config("`parallelism` must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeResult {
    pub regime: String,
    pub report: Option<EvalReport>,
    pub postprocessed: Option<EvalReport>,
    pub thresholds: Option<[f64; 2]>,
    pub gains: Option<RelativeGains>,
    pub w_tree: Option<f64>,
    pub n_leaves: Option<usize>,
    pub depth: Option<usize>,
    pub x_w: Option<Vec<String>>,
    pub error: Option<String>,
}

impl RegimeResult {
    fn failed(regime: &Regime, e: &Error) -> Self {
        Self {
            regime: regime.name(),
            report: None,
            postprocessed: None,
            thresholds: None,
            gains: None,
            w_tree: None,
            n_leaves: None,
            depth: None,
            x_w: None,
            error: Some(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub pair: String,
    pub replicate: usize,
    pub seed: u64,
    pub source: String,
    pub target: String,
    pub regimes: Vec<RegimeResult>,
    pub attribute_shift: Vec<AttributeShift>,
    pub error: Option<String>,
    pub wall_clock_ms: f64,
}

impl ExperimentResult {
    pub fn regime(&self, name: &str) -> Option<&RegimeResult> {
        self.regimes.iter().find(|r| r.regime == name)
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of one replicate of one pair; independent of run order.
pub fn run_seed(seed: u64, pair: &str, replicate: usize) -> u64 {
    splitmix(seed ^ fnv1a(pair) ^ splitmix(replicate as u64))
}

struct Loaded {
    source: Dataset,
    target: Dataset,
    source_name: String,
    target_name: String,
}

fn load_pair(spec: &PairSpec, seed: u64) -> Result<Loaded> {
    match spec {
        PairSpec::Files {
            source,
            target,
            schema,
            ..
        } => {
            let schema = Arc::new(Schema::from_reader(File::open(schema)?)?);
            let stem = |p: &PathBuf| {
                p.file_stem()
                    .map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned())
            };
            Ok(Loaded {
                source: read_csv(File::open(source)?, schema.clone())?,
                target: read_csv(File::open(target)?, schema)?,
                source_name: stem(source),
                target_name: stem(target),
            })
        }
        PairSpec::Synth { synth, .. } => {
            let cfg = SynthConfig {
                seed: splitmix(seed ^ synth.seed),
                ..synth.clone()
            };
            let s = generate_synthetic(&cfg)?;
            Ok(Loaded {
                source: s.source,
                target: s.target,
                source_name: "source".into(),
                target_name: "target".into(),
            })
        }
    }
}

struct Trained {
    tree: DecisionTree,
}

fn train_regime(
    regime: &Regime,
    source_train: &Dataset,
    target_train: &Dataset,
    tree_cfg: &TreeConfig,
) -> Result<Trained> {
    let tree = match regime {
        Regime::Tt => grow_standard(target_train, tree_cfg)?,
        Regime::Source(k) => {
            let ks = match k {
                KnowledgeRegime::NoTargetKnowledge => KnowledgeStore::empty(source_train.schema_arc().clone()),
                _ => build_from_target_sample(target_train, *k)?,
            };
            let cfg = TreeConfig {
                regime: *k,
                ..tree_cfg.clone()
            };
            grow(source_train, &ks, &cfg)?
        }
    };
    Ok(Trained { tree })
}

fn run_regime(
    cfg: &ExperimentConfig,
    regime: &Regime,
    source_split: (&Dataset, &Dataset),
    target_split: (&Dataset, &Dataset),
    positive: Option<u32>,
) -> Result<RegimeResult> {
    let (source_train, source_test) = source_split;
    let (target_train, target_test) = target_split;
    let Trained { tree } = train_regime(regime, source_train, target_train, &cfg.tree)?;
    let report = evaluate(&tree, target_test, positive)?;
    let w_tree = tree_shift_distance(&tree, target_test)?;
    let mut out = RegimeResult {
        regime: regime.name(),
        report: Some(report),
        postprocessed: None,
        thresholds: None,
        gains: None,
        w_tree: Some(w_tree),
        n_leaves: Some(tree.n_leaves()),
        depth: Some(tree.depth()),
        x_w: tree.x_w(),
        error: None,
    };
    if let Some(objective) = cfg.objective {
        let post = target_test
            .schema()
            .protected
            .ok_or_else(|| Error::Config("post-processing needs a protected attribute".into()))
            .and_then(|protected| {
                let holdout = if *regime == Regime::Tt { target_train } else { source_test };
                let model = postprocess_thresholds(&tree, holdout, protected, objective, positive)?;
                Ok((evaluate(&model, target_test, positive)?, model.thresholds))
            });
        match post {
            Ok((r, t)) => {
                out.postprocessed = Some(r);
                out.thresholds = Some(t);
            }
            Err(e) => out.error = Some(format!("post-processing: {e}")),
        }
    }
    Ok(out)
}

fn fairness_triple(
    tt: &RegimeResult,
    ntdk: &RegimeResult,
    adapted: &RegimeResult,
    pick: fn(&EvalReport) -> Option<f64>,
) -> Option<[f64; 3]> {
    let get = |r: &RegimeResult| r.postprocessed.as_ref().or(r.report.as_ref()).and_then(pick);
    Some([get(tt)?, get(ntdk)?, get(adapted)?])
}

fn attach_gains(results: &mut [RegimeResult]) {
    let tt = results.iter().find(|r| r.regime == "tt").cloned();
    let ntdk = results.iter().find(|r| r.regime == "ntdk").cloned();
    let (Some(tt), Some(ntdk)) = (tt, ntdk) else { return };
    let (Some(tt_rep), Some(nt_rep)) = (&tt.report, &ntdk.report) else { return };
    for r in results.iter_mut() {
        let adapted = Regime::parse(&r.regime).is_ok_and(|g| g.is_adapted());
        let Some(rep) = r.report.as_ref().filter(|_| adapted) else { continue };
        let Ok(r_acc) = relative_gain_acc(tt_rep.acc, nt_rep.acc, rep.acc) else { continue };
        let dp = fairness_triple(&tt, &ntdk, r, |e| e.dp);
        let eop = fairness_triple(&tt, &ntdk, r, |e| e.eop);
        let fair = |t: Option<[f64; 3]>| t.and_then(|[a, b, c]| relative_gain_fairness(a, b, c).ok());
        r.gains = Some(RelativeGains {
            r_acc,
            r_dp: fair(dp),
            r_eop: fair(eop),
            acc_tt: tt_rep.acc,
            acc_ntdk: nt_rep.acc,
            acc_adapted: rep.acc,
            dp,
            eop,
        });
    }
}

/// Runs every regime on one replicate of one pair. Failures are recorded in
/// the result rather than returned.
pub fn run_pair(cfg: &ExperimentConfig, spec: &PairSpec, replicate: usize) -> ExperimentResult {
    let start = Instant::now();
    let seed = run_seed(cfg.seed, spec.id(), replicate);
    let mut result = ExperimentResult {
        pair: spec.id().to_string(),
        replicate,
        seed,
        source: String::new(),
        target: String::new(),
        regimes: Vec::new(),
        attribute_shift: Vec::new(),
        error: None,
        wall_clock_ms: 0.0,
    };
    let prepared = load_pair(spec, seed).and_then(|l| {
        let s = split_train_test(&l.source, cfg.train_fraction, splitmix(seed ^ 1))?;
        let t = split_train_test(&l.target, cfg.train_fraction, splitmix(seed ^ 2))?;
        let positive = cfg
            .positive
            .as_deref()
            .map(|p| l.source.schema().class_code(p))
            .transpose()?;
        Ok((l, s, t, positive))
    });
    match prepared {
        Err(e) => result.error = Some(e.to_string()),
        Ok((l, s, t, positive)) => {
            result.source = l.source_name;
            result.target = l.target_name;
            for regime in &cfg.regimes {
                let r = run_regime(cfg, regime, (&s.train, &s.test), (&t.train, &t.test), positive)
                    .unwrap_or_else(|e| RegimeResult::failed(regime, &e));
                result.regimes.push(r);
            }
            attach_gains(&mut result.regimes);
            match attribute_shift_report(&s.train, &t.train, None) {
                Ok(a) => result.attribute_shift = a,
                Err(e) => result.error = Some(format!("shift report: {e}")),
            }
        }
    }
    result.wall_clock_ms = start.elapsed().as_secs_f64() * 1e3;
    result
}

/// All pairs times all replicates, in config order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentResult>> {
    cfg.validate()?;
    let runs: Vec<(&PairSpec, usize)> = cfg
        .pairs
        .iter()
        .flat_map(|p| (0..cfg.repeats).map(move |r| (p, r)))
        .collect();
    Ok(par_map(&runs, cfg.parallelism, |(p, r)| run_pair(cfg, p, *r)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regime_names_round_trip() {
        for s in ["tt", "ntdk", "ftdk", "ptdk2", "ptdk3"] {
            assert_eq!(Regime::parse(s).unwrap().name(), s);
        }
        assert!(Regime::parse("ptdk").is_err());
    }

    #[test]
    fn seeds_depend_on_pair_and_replicate() {
        assert_ne!(run_seed(1, "a", 0), run_seed(1, "b", 0));
        assert_ne!(run_seed(1, "a", 0), run_seed(1, "a", 1));
        assert_eq!(run_seed(1, "a", 3), run_seed(1, "a", 3));
    }

    #[test]
    fn config_requires_seed() {
        let doc = serde_json::json!({"pairs": []});
        assert!(matches!(
            ExperimentConfig::from_json(&doc, FsPath::new(".")),
            Err(Error::Config(_))
        ));
        let doc = serde_json::json!({
            "seed": 3,
            "pairs": [{"id": "p", "synth": {"n_source": 50, "n_target": 50}}],
            "regimes": ["tt", "ntdk", "ftdk"],
            "tree": {"max_depth": 3}
        });
        let cfg = ExperimentConfig::from_json(&doc, FsPath::new(".")).unwrap();
        assert_eq!(cfg.tree.max_depth, 3);
        assert_eq!(cfg.regimes.len(), 3);
    }
}
