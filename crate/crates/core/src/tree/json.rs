use std::sync::Arc;

use serde_json::{json, Map, Value as Json};

use super::{DecisionTree, NodeDiagnostics, Pivot, TreeConfig, TreeNode};
use crate::data::{Op, Path, Schema, SplitCondition, Threshold};
use crate::error::{Error, Result};
use crate::knowledge::KnowledgeRegime;
use crate::stats::Distribution;

fn bad(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn cond_to_json(c: &SplitCondition, schema: &Schema) -> Json {
    let a = schema.attr(c.attr);
    let threshold = match c.threshold {
        Threshold::Code(code) => Json::String(a.label(code).to_string()),
        Threshold::Value(t) => json!(t),
    };
    json!({"attr": a.name, "op": c.op.as_str(), "threshold": threshold})
}

fn cond_from_json(v: &Json, schema: &Schema) -> Result<SplitCondition> {
    let name = v["attr"].as_str().ok_or_else(|| bad("condition without `attr`"))?;
    let attr = schema.index_of(name)?;
    let op = Op::parse(v["op"].as_str().ok_or_else(|| bad("condition without `op`"))?)?;
    let threshold = match &v["threshold"] {
        Json::String(label) => Threshold::Code(
            schema
                .attr(attr)
                .code_of(label)
                .ok_or_else(|| bad(format!("`{label}` is not in the domain of `{name}`")))?,
        ),
        Json::Number(x) => Threshold::Value(x.as_f64().unwrap_or(f64::NAN)),
        other => return Err(bad(format!("invalid threshold {other}"))),
    };
    let c = SplitCondition { attr, op, threshold };
    c.check(schema)?;
    Ok(c)
}

fn path_to_json(p: &Path, schema: &Schema) -> Json {
    Json::Array(p.conditions().iter().map(|c| cond_to_json(c, schema)).collect())
}

fn path_from_json(v: &Json, schema: &Schema) -> Result<Path> {
    let arr = v.as_array().ok_or_else(|| bad("path must be an array"))?;
    Ok(Path::new(
        arr.iter()
            .map(|c| cond_from_json(c, schema))
            .collect::<Result<_>>()?,
    ))
}

fn node_to_json(n: &TreeNode, schema: &Schema) -> Json {
    match n {
        TreeNode::Internal {
            condition,
            ig,
            left,
            right,
        } => json!({
            "condition": cond_to_json(condition, schema),
            "ig": ig,
            "left": node_to_json(left, schema),
            "right": node_to_json(right, schema),
        }),
        TreeNode::Leaf {
            dist,
            n_source_rows,
            path,
        } => {
            let mut d = Map::new();
            for (label, p) in schema.class.labels.iter().zip(dist.probs()) {
                d.insert(label.clone(), json!(p));
            }
            json!({
                "dist": d,
                "n_source_rows": n_source_rows,
                "path": path_to_json(path, schema),
            })
        }
    }
}

fn node_from_json(v: &Json, schema: &Schema) -> Result<TreeNode> {
    if let Some(dist) = v.get("dist") {
        let obj = dist.as_object().ok_or_else(|| bad("`dist` must be an object"))?;
        let mut probs = vec![0.0; schema.n_classes()];
        for (label, p) in obj {
            let c = schema.class_code(label)?;
            probs[c as usize] = p.as_f64().ok_or_else(|| bad("probability must be a number"))?;
        }
        return Ok(TreeNode::Leaf {
            dist: Distribution::categorical(probs)?,
            n_source_rows: v["n_source_rows"].as_u64().unwrap_or(0) as usize,
            path: match v.get("path") {
                Some(p) => path_from_json(p, schema)?,
                None => Path::root(),
            },
        });
    }
    let condition = cond_from_json(
        v.get("condition").ok_or_else(|| bad("node needs `dist` or `condition`"))?,
        schema,
    )?;
    Ok(TreeNode::Internal {
        condition,
        ig: v["ig"].as_f64().unwrap_or(0.0),
        left: Box::new(node_from_json(&v["left"], schema)?),
        right: Box::new(node_from_json(&v["right"], schema)?),
    })
}

pub(super) fn config_to_json(c: &TreeConfig) -> Json {
    json!({
        "max_depth": c.max_depth,
        "min_node_fraction": c.min_node_fraction,
        "purity_stop": c.purity_stop,
        "regime": c.regime.name(),
        "alpha_override": c.alpha_override,
        "x_w_override": c.x_w_override,
        "seed": c.seed,
        "adapt_leaves": c.adapt_leaves,
        "route_unseen_right": c.route_unseen_right,
    })
}

pub(super) fn config_from_json(v: &Json) -> Result<TreeConfig> {
    let d = TreeConfig::default();
    let c = TreeConfig {
        max_depth: v["max_depth"].as_u64().map_or(d.max_depth, |x| x as usize),
        min_node_fraction: v["min_node_fraction"].as_f64().unwrap_or(d.min_node_fraction),
        purity_stop: v["purity_stop"].as_f64().unwrap_or(d.purity_stop),
        regime: match v["regime"].as_str() {
            Some(s) => KnowledgeRegime::parse(s)?,
            None => d.regime,
        },
        alpha_override: v["alpha_override"].as_f64(),
        x_w_override: v["x_w_override"].as_str().map(str::to_string),
        seed: v["seed"].as_u64().unwrap_or(0),
        adapt_leaves: v["adapt_leaves"].as_bool().unwrap_or(d.adapt_leaves),
        route_unseen_right: v["route_unseen_right"].as_bool().unwrap_or(false),
    };
    c.validate()?;
    Ok(c)
}

pub(super) fn tree_to_json(t: &DecisionTree) -> Json {
    let schema = &t.schema;
    let pivot = t.pivot.as_ref().map(|p| {
        json!({
            "attrs": p.attrs().iter().map(|&a| schema.attr(a).name.clone()).collect::<Vec<_>>(),
            "edges": p.edges(),
        })
    });
    let diagnostics: Vec<Json> = t
        .diagnostics
        .iter()
        .map(|d| {
            json!({
                "id": d.id,
                "depth": d.depth,
                "n_source_rows": d.n_source_rows,
                "alpha": d.alpha,
                "truncated": d.truncated,
            })
        })
        .collect();
    json!({
        "schema": schema.to_json(),
        "config": config_to_json(&t.config),
        "x_w": t.x_w(),
        "pivot": pivot,
        "root": node_to_json(&t.root, schema),
        "diagnostics": diagnostics,
    })
}

pub(super) fn tree_from_json(doc: &Json) -> Result<DecisionTree> {
    let schema = Arc::new(Schema::from_json(
        doc.get("schema").ok_or_else(|| bad("tree without `schema`"))?,
    )?);
    let config = config_from_json(&doc["config"])?;
    let pivot = match doc.get("pivot") {
        None | Some(Json::Null) => None,
        Some(p) => {
            let attrs = p["attrs"]
                .as_array()
                .ok_or_else(|| bad("pivot without `attrs`"))?
                .iter()
                .map(|a| schema.index_of(a.as_str().unwrap_or_default()))
                .collect::<Result<Vec<_>>>()?;
            Some(match p["edges"].as_array() {
                Some(e) => {
                    let edges = e.iter().filter_map(Json::as_f64).collect();
                    Pivot::continuous(*attrs.first().ok_or_else(|| bad("empty pivot"))?, edges)
                }
                None => Pivot::discrete(&schema, &attrs)?,
            })
        }
    };
    let root = node_from_json(doc.get("root").ok_or_else(|| bad("tree without `root`"))?, &schema)?;
    let diagnostics = doc["diagnostics"]
        .as_array()
        .map(|a| {
            a.iter()
                .map(|d| NodeDiagnostics {
                    id: d["id"].as_u64().unwrap_or(0) as usize,
                    depth: d["depth"].as_u64().unwrap_or(0) as usize,
                    n_source_rows: d["n_source_rows"].as_u64().unwrap_or(0) as usize,
                    alpha: d["alpha"].as_f64().unwrap_or(1.0),
                    truncated: d["truncated"].as_u64().unwrap_or(0) as usize,
                })
                .collect()
        })
        .unwrap_or_default();
    Ok(DecisionTree {
        root,
        config,
        schema,
        pivot,
        diagnostics,
    })
}
