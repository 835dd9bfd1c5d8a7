//! Loading target knowledge from published cross-tables.

use std::io::Read;
use std::sync::Arc;

use serde_json::{Map, Value as Json};

use super::store::{CdfKnots, ClassConditional, KnowledgeRegime, KnowledgeStore, PointTable};
use crate::data::{Column, Schema};
use crate::error::{Error, Result};

/// Sums within this distance of 1 are rescaled; anything further is rejected.
pub const LOAD_TOLERANCE: f64 = 1e-6;

fn format_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn normalize(values: &mut [f64], what: &str) -> Result<()> {
    if values.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(format_err(format!("{what}: probabilities must be finite and non-negative")));
    }
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > LOAD_TOLERANCE {
        return Err(Error::Normalization {
            sum,
            tolerance: LOAD_TOLERANCE,
        });
    }
    values.iter_mut().for_each(|p| *p /= sum);
    Ok(())
}

fn label_of(v: &Json) -> Result<String> {
    match v {
        Json::String(s) => Ok(s.clone()),
        Json::Number(n) => Ok(n.to_string()),
        Json::Bool(b) => Ok(b.to_string()),
        _ => Err(format_err(format!("invalid key {v}"))),
    }
}

fn prob_of(v: &Json) -> Result<f64> {
    v.as_f64().ok_or_else(|| format_err(format!("invalid probability {v}")))
}

/// Reads a cross-tab document. Either the full form with `tables`, `cdfs`
/// and optional class knowledge, or a bare `{"vars": [...], "table": {...}}`.
pub fn load_from_crosstabs<R: Read>(reader: R, schema: Arc<Schema>) -> Result<KnowledgeStore> {
    let doc: Json = serde_json::from_reader(reader).map_err(|e| format_err(e.to_string()))?;
    from_json(&doc, schema)
}

pub fn from_json(doc: &Json, schema: Arc<Schema>) -> Result<KnowledgeStore> {
    let obj = doc
        .as_object()
        .ok_or_else(|| format_err("knowledge document must be an object"))?;
    let mut warnings = Vec::new();
    if obj.contains_key("vars") {
        let table = table_from_json(obj, &schema, &mut warnings)?;
        let k = table.attrs().len();
        return Ok(KnowledgeStore::from_parts(
            schema,
            KnowledgeRegime::PartialTargetKnowledge(k),
            None,
            vec![table],
            Vec::new(),
            None,
            None,
            warnings,
        ));
    }
    let arity_limit = match obj.get("arity_limit") {
        None | Some(Json::Null) => None,
        Some(Json::String(s)) if s == "inf" || s == "infinity" => None,
        Some(v) => match v.as_u64() {
            Some(k) if k >= 1 => Some(k as usize),
            _ => return Err(format_err("`arity_limit` must be a positive integer")),
        },
    };
    let mut tables = Vec::new();
    if let Some(ts) = obj.get("tables") {
        for t in ts.as_array().ok_or_else(|| format_err("`tables` must be an array"))? {
            let t = t
                .as_object()
                .ok_or_else(|| format_err("table must be an object"))?;
            let table = table_from_json(t, &schema, &mut warnings)?;
            if arity_limit.is_some_and(|k| table.attrs().len() > k) {
                return Err(format_err(format!(
                    "table over {} attributes exceeds the arity limit",
                    table.attrs().len()
                )));
            }
            tables.push(table);
        }
    }
    let mut cdfs = Vec::new();
    if let Some(cs) = obj.get("cdfs") {
        for c in cs.as_array().ok_or_else(|| format_err("`cdfs` must be an array"))? {
            cdfs.push(cdf_from_json(c, &schema)?);
        }
    }
    let class_conditionals = match obj.get("class_conditionals") {
        None | Some(Json::Null) => None,
        Some(v) => Some(class_conditionals_from_json(v, &schema)?),
    };
    let class_marginal = match obj.get("class_marginal") {
        None | Some(Json::Null) => None,
        Some(v) => Some(class_table(v, &schema)?),
    };
    let widest = tables.iter().map(|t| t.attrs().len()).max().unwrap_or(1);
    let regime = KnowledgeRegime::PartialTargetKnowledge(arity_limit.unwrap_or(widest));
    Ok(KnowledgeStore::from_parts(
        schema,
        regime,
        arity_limit,
        tables,
        cdfs,
        class_conditionals,
        class_marginal,
        warnings,
    ))
}

fn table_from_json(
    obj: &Map<String, Json>,
    schema: &Schema,
    warnings: &mut Vec<String>,
) -> Result<PointTable> {
    let vars: Vec<usize> = obj
        .get("vars")
        .and_then(Json::as_array)
        .ok_or_else(|| format_err("table without `vars`"))?
        .iter()
        .map(|v| {
            let name = v.as_str().ok_or_else(|| format_err("`vars` entries must be strings"))?;
            schema.index_of(name)
        })
        .collect::<Result<_>>()?;
    if vars.is_empty() {
        return Err(format_err("table with no variables"));
    }
    let mut sorted = vars.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != vars.len() {
        return Err(format_err("repeated variable in table"));
    }
    match obj.get("kind").and_then(Json::as_str) {
        None | Some("joint") => {}
        Some(other) => return Err(format_err(format!("unsupported table kind `{other}`"))),
    }
    // (key labels, p) in `vars` order
    let mut cells: Vec<(Vec<String>, f64)> = Vec::new();
    if let Some(cs) = obj.get("cells") {
        for c in cs.as_array().ok_or_else(|| format_err("`cells` must be an array"))? {
            let key = match c.get("key") {
                Some(Json::Array(k)) => k.iter().map(label_of).collect::<Result<Vec<_>>>()?,
                Some(k) if vars.len() == 1 => vec![label_of(k)?],
                _ => return Err(format_err("cell without `key`")),
            };
            let p = prob_of(c.get("p").ok_or_else(|| format_err("cell without `p`"))?)?;
            cells.push((key, p));
        }
    } else if let Some(Json::Object(t)) = obj.get("table") {
        for (k, p) in t {
            let key: Vec<String> = if vars.len() == 1 {
                vec![k.clone()]
            } else {
                k.split('|').map(str::to_string).collect()
            };
            cells.push((key, prob_of(p)?));
        }
    } else {
        return Err(format_err("table needs `cells` or `table`"));
    }
    let mut probs: Vec<f64> = cells.iter().map(|c| c.1).collect();
    normalize(&mut probs, "table")?;

    let order: Vec<usize> = sorted
        .iter()
        .map(|a| vars.iter().position(|v| v == a).unwrap())
        .collect();
    let mut columns: Vec<Column> = sorted
        .iter()
        .map(|&a| {
            if schema.attr(a).is_discrete() {
                Column::Discrete(Vec::with_capacity(cells.len()))
            } else {
                Column::Continuous(Vec::with_capacity(cells.len()))
            }
        })
        .collect();
    let mut seen = vec![vec![false; 0]; sorted.len()];
    for (j, &a) in sorted.iter().enumerate() {
        seen[j] = vec![false; schema.attr(a).cardinality()];
    }
    for (key, _) in &cells {
        if key.len() != vars.len() {
            return Err(format_err(format!("key {key:?} does not match `vars`")));
        }
        for (j, &a) in sorted.iter().enumerate() {
            let label = &key[order[j]];
            let attr = schema.attr(a);
            match &mut columns[j] {
                Column::Discrete(v) => {
                    let code = attr.code_of(label).ok_or_else(|| {
                        format_err(format!("`{label}` is not in the domain of `{}`", attr.name))
                    })?;
                    seen[j][code as usize] = true;
                    v.push(code);
                }
                Column::Continuous(v) => v.push(
                    label
                        .parse::<f64>()
                        .map_err(|_| format_err(format!("`{label}` is not a number")))?,
                ),
            }
        }
    }
    for (j, &a) in sorted.iter().enumerate() {
        let attr = schema.attr(a);
        for (code, s) in seen[j].iter().enumerate() {
            if !s {
                warnings.push(format!(
                    "value `{}` of `{}` is absent from a target table; treated as probability 0",
                    attr.label(code as u32),
                    attr.name
                ));
            }
        }
    }
    Ok(PointTable::new(sorted, columns, probs))
}

fn cdf_from_json(v: &Json, schema: &Schema) -> Result<CdfKnots> {
    let name = v
        .get("var")
        .and_then(Json::as_str)
        .ok_or_else(|| format_err("cdf without `var`"))?;
    let attr = schema.index_of(name)?;
    if schema.attr(attr).is_discrete() {
        return Err(format_err(format!("cdf over discrete attribute `{name}`")));
    }
    let mut context = Vec::new();
    if let Some(ctx) = v.get("context") {
        for pair in ctx.as_array().ok_or_else(|| format_err("`context` must be an array"))? {
            let (n, l) = match pair.as_array().map(Vec::as_slice) {
                Some([n, l]) => (n, l),
                _ => return Err(format_err("context entries are [name, label] pairs")),
            };
            let a = schema.index_of(n.as_str().ok_or_else(|| format_err("context name"))?)?;
            let attr_a = schema.attr(a);
            let label = label_of(l)?;
            let code = attr_a
                .code_of(&label)
                .ok_or_else(|| format_err(format!("`{label}` is not in the domain of `{}`", attr_a.name)))?;
            context.push((a, code));
        }
    }
    let mut knots = Vec::new();
    for k in v
        .get("knots")
        .and_then(Json::as_array)
        .ok_or_else(|| format_err("cdf without `knots`"))?
    {
        match k.as_array().map(Vec::as_slice) {
            Some([x, f]) => knots.push((prob_of(x)?, prob_of(f)?)),
            _ => return Err(format_err("knots are [value, cumulative] pairs")),
        }
    }
    if knots.is_empty() {
        return Err(format_err("cdf without knots"));
    }
    for w in knots.windows(2) {
        if w[0].0.partial_cmp(&w[1].0) != Some(std::cmp::Ordering::Less) || w[1].1 < w[0].1 {
            return Err(format_err(format!("cdf of `{name}` is not monotone")));
        }
    }
    if knots[0].1 < 0.0 {
        return Err(format_err(format!("cdf of `{name}` starts below 0")));
    }
    let last = knots[knots.len() - 1].1;
    if (last - 1.0).abs() > LOAD_TOLERANCE {
        return Err(Error::Normalization {
            sum: last,
            tolerance: LOAD_TOLERANCE,
        });
    }
    knots.iter_mut().for_each(|k| k.1 /= last);
    Ok(CdfKnots { attr, context, knots })
}

fn class_table(v: &Json, schema: &Schema) -> Result<Vec<f64>> {
    let obj = v
        .as_object()
        .ok_or_else(|| format_err("class distribution must be an object"))?;
    let mut p = vec![0.0; schema.n_classes()];
    for (label, q) in obj {
        let c = schema
            .class
            .code_of(label)
            .ok_or_else(|| format_err(format!("`{label}` is not a class label")))?;
        p[c as usize] = prob_of(q)?;
    }
    normalize(&mut p, "class distribution")?;
    Ok(p)
}

fn class_conditionals_from_json(v: &Json, schema: &Schema) -> Result<Vec<Option<ClassConditional>>> {
    let mut out: Vec<Option<ClassConditional>> = vec![None; schema.n_attrs()];
    for entry in v
        .as_array()
        .ok_or_else(|| format_err("`class_conditionals` must be an array"))?
    {
        let name = entry
            .get("var")
            .and_then(Json::as_str)
            .ok_or_else(|| format_err("class conditional without `var`"))?;
        let a = schema.index_of(name)?;
        let attr = schema.attr(a);
        if !attr.is_discrete() {
            return Err(format_err(format!(
                "class conditionals are supported for discrete attributes only (`{name}`)"
            )));
        }
        let mut p_x = vec![0.0; attr.cardinality()];
        let mut p_y: Vec<Option<Vec<f64>>> = vec![None; attr.cardinality()];
        for cell in entry
            .get("cells")
            .and_then(Json::as_array)
            .ok_or_else(|| format_err("class conditional without `cells`"))?
        {
            let label = label_of(cell.get("key").ok_or_else(|| format_err("cell without `key`"))?)?;
            let code = attr
                .code_of(&label)
                .ok_or_else(|| format_err(format!("`{label}` is not in the domain of `{name}`")))?
                as usize;
            p_x[code] = prob_of(cell.get("p_x").ok_or_else(|| format_err("cell without `p_x`"))?)?;
            p_y[code] = Some(class_table(
                cell.get("p_y").ok_or_else(|| format_err("cell without `p_y`"))?,
                schema,
            )?);
        }
        normalize(&mut p_x, "class conditional marginal")?;
        out[a] = Some(ClassConditional::Discrete { p_x, p_y });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Attribute, Path, SplitCondition};
    use crate::knowledge::query_target;

    fn schema() -> Arc<Schema> {
        Arc::new(
            Schema::new(
                vec![
                    Attribute::discrete("SEX", &["female", "male"]),
                    Attribute::discrete("CIT", &["1", "2", "3", "4", "5"]),
                    Attribute::continuous("AGEP"),
                ],
                Attribute::discrete("Y", &["0", "1"]),
                Some("SEX"),
            )
            .unwrap(),
        )
    }

    #[test]
    fn bare_marginal() {
        let doc = r#"{"vars":["SEX"],"table":{"female":0.5,"male":0.5}}"#;
        let ks = load_from_crosstabs(doc.as_bytes(), schema()).unwrap();
        let q = query_target(&ks, &SplitCondition::eq(0, 0), &Path::root()).unwrap();
        assert_eq!(q, Some(0.5));
        assert!(ks.warnings().is_empty());
    }

    #[test]
    fn rejects_bad_sum() {
        let doc = r#"{"vars":["SEX"],"table":{"female":0.48,"male":0.5}}"#;
        let err = load_from_crosstabs(doc.as_bytes(), schema()).unwrap_err();
        assert!(matches!(err, Error::Normalization { .. }));
    }

    #[test]
    fn unknown_variable() {
        let doc = r#"{"vars":["RACE"],"table":{"a":1.0}}"#;
        let err = load_from_crosstabs(doc.as_bytes(), schema()).unwrap_err();
        assert!(matches!(err, Error::UnknownAttribute(_)));
    }

    #[test]
    fn two_way_row_normalization() {
        let doc = r#"{"arity_limit": 2, "tables": [{"vars": ["SEX","CIT"], "kind": "joint", "cells": [
            {"key": ["female","1"], "p": 0.2}, {"key": ["female","2"], "p": 0.1},
            {"key": ["female","3"], "p": 0.1}, {"key": ["female","4"], "p": 0.05},
            {"key": ["female","5"], "p": 0.05},
            {"key": ["male","1"], "p": 0.3}, {"key": ["male","2"], "p": 0.05},
            {"key": ["male","3"], "p": 0.05}, {"key": ["male","4"], "p": 0.05},
            {"key": ["male","5"], "p": 0.05}]}]}"#;
        let ks = load_from_crosstabs(doc.as_bytes(), schema()).unwrap();
        let female = Path::new(vec![SplitCondition::eq(0, 0)]);
        let q = query_target(&ks, &SplitCondition::eq(1, 0), &female).unwrap().unwrap();
        assert!((q - 0.4).abs() < 1e-12);
        let male = Path::new(vec![SplitCondition::eq(0, 1)]);
        let q = query_target(&ks, &SplitCondition::eq(1, 0), &male).unwrap().unwrap();
        assert!((q - 0.6).abs() < 1e-12);
        // the marginal is answered from the covering two-way table
        let q = query_target(&ks, &SplitCondition::eq(0, 0), &Path::root()).unwrap().unwrap();
        assert!((q - 0.5).abs() < 1e-12);
    }

    #[test]
    fn conditioned_cdf() {
        let doc = r#"{"cdfs": [{"var": "AGEP", "context": [["SEX","female"]],
            "knots": [[10,0.2],[20,0.7],[30,1.0]]}]}"#;
        let ks = load_from_crosstabs(doc.as_bytes(), schema()).unwrap();
        let female = Path::new(vec![SplitCondition::eq(0, 0)]);
        let q = query_target(&ks, &SplitCondition::leq(2, 20.0), &female).unwrap();
        assert_eq!(q, Some(0.7));
        let q = query_target(&ks, &SplitCondition::gt(2, 20.0), &female).unwrap().unwrap();
        assert!((q - 0.3).abs() < 1e-12);
        let male = Path::new(vec![SplitCondition::eq(0, 1)]);
        assert_eq!(query_target(&ks, &SplitCondition::leq(2, 20.0), &male).unwrap(), None);
    }

    #[test]
    fn non_monotone_cdf_is_rejected() {
        let doc = r#"{"cdfs": [{"var": "AGEP", "knots": [[10,0.5],[20,0.4],[30,1.0]]}]}"#;
        assert!(matches!(
            load_from_crosstabs(doc.as_bytes(), schema()),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn missing_value_is_flagged() {
        let doc = r#"{"vars":["CIT"],"table":{"1":0.5,"2":0.5}}"#;
        let ks = load_from_crosstabs(doc.as_bytes(), schema()).unwrap();
        assert_eq!(ks.warnings().len(), 3);
        let q = query_target(&ks, &SplitCondition::eq(1, 4), &Path::root()).unwrap();
        assert_eq!(q, Some(0.0));
    }

    #[test]
    fn class_knowledge() {
        let doc = r#"{"tables": [], "class_marginal": {"0": 0.25, "1": 0.75},
            "class_conditionals": [{"var": "SEX", "cells": [
                {"key": "female", "p_x": 0.5, "p_y": {"0": 0.1, "1": 0.9}},
                {"key": "male", "p_x": 0.5, "p_y": {"0": 0.4, "1": 0.6}}]}]}"#;
        let ks = load_from_crosstabs(doc.as_bytes(), schema()).unwrap();
        assert_eq!(ks.class_marginal(), Some(&[0.25, 0.75][..]));
        match ks.class_conditional(0).unwrap() {
            ClassConditional::Discrete { p_x, p_y } => {
                assert_eq!(p_x, &vec![0.5, 0.5]);
                assert_eq!(p_y[1], Some(vec![0.4, 0.6]));
            }
            _ => panic!("expected discrete"),
        }
        assert!(ks.class_conditional(1).is_none());
    }
}
