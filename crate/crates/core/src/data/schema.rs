use std::collections::HashSet;
use std::io::Read;

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttrKind {
    Discrete,
    Continuous,
}

/// A named column. Discrete attributes carry their ordered category labels;
/// continuous ones may carry inclusive bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct Attribute {
    pub name: String,
    pub kind: AttrKind,
    pub labels: Vec<String>,
    pub bounds: Option<(f64, f64)>,
}

impl Attribute {
    pub fn discrete<S: Into<String>>(name: S, labels: &[&str]) -> Self {
        Self {
            name: name.into(),
            kind: AttrKind::Discrete,
            labels: labels.iter().map(|s| s.to_string()).collect(),
            bounds: None,
        }
    }

    pub fn continuous<S: Into<String>>(name: S) -> Self {
        Self {
            name: name.into(),
            kind: AttrKind::Continuous,
            labels: Vec::new(),
            bounds: None,
        }
    }

    pub fn with_bounds(mut self, lo: f64, hi: f64) -> Self {
        self.bounds = Some((lo, hi));
        self
    }

    pub fn is_discrete(&self) -> bool {
        self.kind == AttrKind::Discrete
    }

    pub fn code_of(&self, label: &str) -> Option<u32> {
        self.labels.iter().position(|l| l == label).map(|i| i as u32)
    }

    pub fn label(&self, code: u32) -> &str {
        &self.labels[code as usize]
    }

    pub fn cardinality(&self) -> usize {
        self.labels.len()
    }

    fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::InvalidSchema("attribute with empty name".into()));
        }
        match self.kind {
            AttrKind::Discrete => {
                if self.labels.is_empty() {
                    return Err(Error::InvalidSchema(format!(
                        "discrete attribute `{}` has an empty domain",
                        self.name
                    )));
                }
                let mut seen = HashSet::new();
                for l in &self.labels {
                    if !seen.insert(l.as_str()) {
                        return Err(Error::InvalidSchema(format!(
                            "duplicate label `{l}` in domain of `{}`",
                            self.name
                        )));
                    }
                }
            }
            AttrKind::Continuous => {
                if let Some((lo, hi)) = self.bounds {
                    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                        return Err(Error::InvalidSchema(format!(
                            "invalid bounds for `{}`",
                            self.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schema {
    pub predictive: Vec<Attribute>,
    pub class: Attribute,
    pub protected: Option<usize>,
}

impl Schema {
    pub fn new(
        predictive: Vec<Attribute>,
        class: Attribute,
        protected: Option<&str>,
    ) -> Result<Self> {
        for a in &predictive {
            a.validate()?;
        }
        class.validate()?;
        if class.kind != AttrKind::Discrete || class.labels.len() < 2 {
            return Err(Error::InvalidSchema(
                "class attribute must be discrete with at least two values".into(),
            ));
        }
        let mut names = HashSet::new();
        for a in predictive.iter().chain(std::iter::once(&class)) {
            if !names.insert(a.name.as_str()) {
                return Err(Error::InvalidSchema(format!(
                    "duplicate attribute name `{}`",
                    a.name
                )));
            }
        }
        let protected = match protected {
            None => None,
            Some(p) => {
                let idx = predictive
                    .iter()
                    .position(|a| a.name == p)
                    .ok_or_else(|| Error::UnknownAttribute(p.to_string()))?;
                if !predictive[idx].is_discrete() {
                    return Err(Error::InvalidSchema(format!(
                        "protected attribute `{p}` must be discrete"
                    )));
                }
                Some(idx)
            }
        };
        Ok(Self {
            predictive,
            class,
            protected,
        })
    }

    pub fn n_attrs(&self) -> usize {
        self.predictive.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class.labels.len()
    }

    pub fn attr(&self, idx: usize) -> &Attribute {
        &self.predictive[idx]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.predictive
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    pub fn class_code(&self, label: &str) -> Result<u32> {
        self.class
            .code_of(label)
            .ok_or_else(|| Error::Config(format!("`{label}` is not a class label")))
    }

    /// Positive label for fairness metrics: the last declared class value.
    pub fn default_positive(&self) -> u32 {
        (self.class.labels.len() - 1) as u32
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let doc: Json = serde_json::from_reader(reader)?;
        Self::from_json(&doc)
    }

    pub fn from_json(doc: &Json) -> Result<Self> {
        let obj = doc
            .as_object()
            .ok_or_else(|| Error::InvalidSchema("schema must be a JSON object".into()))?;
        let predictive = obj
            .get("predictive")
            .and_then(Json::as_array)
            .ok_or_else(|| Error::InvalidSchema("missing `predictive` array".into()))?
            .iter()
            .map(attribute_from_json)
            .collect::<Result<Vec<_>>>()?;
        let class = attribute_from_json(
            obj.get("class")
                .ok_or_else(|| Error::InvalidSchema("missing `class`".into()))?,
        )?;
        let protected = match obj.get("protected") {
            None | Some(Json::Null) => None,
            Some(Json::String(s)) => Some(s.as_str()),
            Some(_) => return Err(Error::InvalidSchema("`protected` must be a string".into())),
        };
        Self::new(predictive, class, protected)
    }

    pub fn to_json(&self) -> Json {
        let mut obj = serde_json::Map::new();
        obj.insert(
            "predictive".into(),
            Json::Array(self.predictive.iter().map(attribute_to_json).collect()),
        );
        obj.insert("class".into(), attribute_to_json(&self.class));
        if let Some(p) = self.protected {
            obj.insert("protected".into(), Json::String(self.predictive[p].name.clone()));
        }
        Json::Object(obj)
    }
}

fn label_from_json(v: &Json) -> Result<String> {
    match v {
        Json::String(s) => Ok(s.clone()),
        Json::Number(n) => Ok(n.to_string()),
        Json::Bool(b) => Ok(b.to_string()),
        _ => Err(Error::InvalidSchema(format!("invalid domain label {v}"))),
    }
}

fn attribute_from_json(v: &Json) -> Result<Attribute> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::InvalidSchema("attribute must be an object".into()))?;
    let name = obj
        .get("name")
        .and_then(Json::as_str)
        .ok_or_else(|| Error::InvalidSchema("attribute without `name`".into()))?
        .to_string();
    let kind = match obj.get("kind").and_then(Json::as_str) {
        Some("discrete") => AttrKind::Discrete,
        Some("continuous") => AttrKind::Continuous,
        other => {
            return Err(Error::InvalidSchema(format!(
                "attribute `{name}`: unknown kind {other:?}"
            )))
        }
    };
    let domain = obj.get("domain");
    match kind {
        AttrKind::Discrete => {
            let labels = domain
                .and_then(Json::as_array)
                .ok_or_else(|| {
                    Error::InvalidSchema(format!("discrete attribute `{name}` needs a `domain`"))
                })?
                .iter()
                .map(label_from_json)
                .collect::<Result<Vec<_>>>()?;
            Ok(Attribute {
                name,
                kind,
                labels,
                bounds: None,
            })
        }
        AttrKind::Continuous => {
            let bounds = match domain {
                None | Some(Json::Null) => None,
                Some(Json::Array(b)) if b.len() == 2 => {
                    let lo = b[0].as_f64();
                    let hi = b[1].as_f64();
                    match (lo, hi) {
                        (Some(lo), Some(hi)) => Some((lo, hi)),
                        _ => {
                            return Err(Error::InvalidSchema(format!(
                                "continuous attribute `{name}`: bounds must be numbers"
                            )))
                        }
                    }
                }
                Some(_) => {
                    return Err(Error::InvalidSchema(format!(
                        "continuous attribute `{name}`: domain must be [min, max]"
                    )))
                }
            };
            Ok(Attribute {
                name,
                kind,
                labels: Vec::new(),
                bounds,
            })
        }
    }
}

fn attribute_to_json(a: &Attribute) -> Json {
    let mut obj = serde_json::Map::new();
    obj.insert("name".into(), Json::String(a.name.clone()));
    match a.kind {
        AttrKind::Discrete => {
            obj.insert("kind".into(), Json::String("discrete".into()));
            obj.insert(
                "domain".into(),
                Json::Array(a.labels.iter().cloned().map(Json::String).collect()),
            );
        }
        AttrKind::Continuous => {
            obj.insert("kind".into(), Json::String("continuous".into()));
            if let Some((lo, hi)) = a.bounds {
                obj.insert("domain".into(), serde_json::json!([lo, hi]));
            }
        }
    }
    Json::Object(obj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_acs_style_schema() {
        let doc = r#"{
            "predictive": [
                {"name": "SCHL", "kind": "discrete", "domain": [1, 2, 3]},
                {"name": "MAR", "kind": "discrete", "domain": ["1", "2"]},
                {"name": "AGEP", "kind": "continuous", "domain": [0, 99]},
                {"name": "SEX", "kind": "discrete", "domain": ["1", "2"]},
                {"name": "CIT", "kind": "discrete", "domain": ["1", "2", "3", "4", "5"]},
                {"name": "RAC1P", "kind": "discrete", "domain": ["1", "2", "3"]}
            ],
            "class": {"name": "PUBCOV", "kind": "discrete", "domain": ["0", "1"]},
            "protected": "SEX"
        }"#;
        let schema = Schema::from_reader(doc.as_bytes()).unwrap();
        assert_eq!(schema.n_attrs(), 6);
        assert_eq!(schema.attr(2).kind, AttrKind::Continuous);
        assert_eq!(schema.attr(0).labels, vec!["1", "2", "3"]);
        assert_eq!(schema.protected, Some(3));
        let again = Schema::from_json(&schema.to_json()).unwrap();
        assert_eq!(again, schema);
    }

    #[test]
    fn rejects_duplicate_labels_and_names() {
        let dup = Attribute::discrete("A", &["x", "x"]);
        let class = Attribute::discrete("Y", &["0", "1"]);
        assert!(matches!(
            Schema::new(vec![dup], class.clone(), None),
            Err(Error::InvalidSchema(_))
        ));
        let a = Attribute::discrete("A", &["x"]);
        assert!(Schema::new(vec![a.clone(), a], class, None).is_err());
    }

    #[test]
    fn class_must_be_discrete_with_two_values() {
        let a = Attribute::discrete("A", &["x"]);
        assert!(Schema::new(vec![a.clone()], Attribute::discrete("Y", &["1"]), None).is_err());
        assert!(Schema::new(vec![a], Attribute::continuous("Y"), None).is_err());
    }

    #[test]
    fn protected_must_name_discrete_predictive() {
        let a = Attribute::continuous("AGE");
        let y = Attribute::discrete("Y", &["0", "1"]);
        assert!(Schema::new(vec![a.clone()], y.clone(), Some("AGE")).is_err());
        assert!(matches!(
            Schema::new(vec![a], y, Some("SEX")),
            Err(Error::UnknownAttribute(_))
        ));
    }
}
