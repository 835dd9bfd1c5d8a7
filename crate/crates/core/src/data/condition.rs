use crate::data::{Dataset, Schema, Value};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Eq,
    Neq,
    Leq,
    Gt,
}

impl Op {
    pub fn as_str(self) -> &'static str {
        match self {
            Op::Eq => "eq",
            Op::Neq => "neq",
            Op::Leq => "leq",
            Op::Gt => "gt",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "eq" | "=" | "==" => Ok(Op::Eq),
            "neq" | "!=" => Ok(Op::Neq),
            "leq" | "<=" => Ok(Op::Leq),
            "gt" | ">" => Ok(Op::Gt),
            _ => Err(Error::Parse(format!("unknown split operator `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Code(u32),
    Value(f64),
}

/// One binary test `X op t`. Discrete attributes use `Eq`/`Neq` against a
/// category code, continuous ones `Leq`/`Gt` against a real threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitCondition {
    pub attr: usize,
    pub op: Op,
    pub threshold: Threshold,
}

impl SplitCondition {
    pub fn eq(attr: usize, code: u32) -> Self {
        Self {
            attr,
            op: Op::Eq,
            threshold: Threshold::Code(code),
        }
    }

    pub fn neq(attr: usize, code: u32) -> Self {
        Self {
            attr,
            op: Op::Neq,
            threshold: Threshold::Code(code),
        }
    }

    pub fn leq(attr: usize, t: f64) -> Self {
        Self {
            attr,
            op: Op::Leq,
            threshold: Threshold::Value(t),
        }
    }

    pub fn gt(attr: usize, t: f64) -> Self {
        Self {
            attr,
            op: Op::Gt,
            threshold: Threshold::Value(t),
        }
    }

    /// The complementary condition (right child of a split).
    pub fn negate(&self) -> Self {
        let op = match self.op {
            Op::Eq => Op::Neq,
            Op::Neq => Op::Eq,
            Op::Leq => Op::Gt,
            Op::Gt => Op::Leq,
        };
        Self { op, ..*self }
    }

    pub fn check(&self, schema: &Schema) -> Result<()> {
        if self.attr >= schema.n_attrs() {
            return Err(Error::UnknownAttribute(format!("#{}", self.attr)));
        }
        let a = schema.attr(self.attr);
        match (self.op, self.threshold, a.is_discrete()) {
            (Op::Eq | Op::Neq, Threshold::Code(c), true) if (c as usize) < a.cardinality() => {
                Ok(())
            }
            (Op::Leq | Op::Gt, Threshold::Value(t), false) if !t.is_nan() => Ok(()),
            _ => Err(Error::Domain(format!(
                "condition {:?} does not fit attribute `{}`",
                self, a.name
            ))),
        }
    }

    #[inline]
    pub fn holds_code(&self, code: u32) -> bool {
        match (self.op, self.threshold) {
            (Op::Eq, Threshold::Code(c)) => code == c,
            (Op::Neq, Threshold::Code(c)) => code != c,
            _ => false,
        }
    }

    #[inline]
    pub fn holds_num(&self, x: f64) -> bool {
        match (self.op, self.threshold) {
            (Op::Leq, Threshold::Value(t)) => x <= t,
            (Op::Gt, Threshold::Value(t)) => x > t,
            _ => false,
        }
    }

    #[inline]
    pub fn holds(&self, data: &Dataset, row: usize) -> bool {
        match self.threshold {
            Threshold::Code(_) => self.holds_code(data.code(self.attr, row)),
            Threshold::Value(_) => self.holds_num(data.num(self.attr, row)),
        }
    }

    /// `None` when the value is a discrete label the schema does not know.
    pub fn holds_value(&self, v: &Value) -> Option<bool> {
        match v {
            Value::Code(c) => Some(self.holds_code(*c)),
            Value::Num(x) => Some(self.holds_num(*x)),
            Value::Unseen(_) => None,
        }
    }

    pub fn describe(&self, schema: &Schema) -> String {
        let a = schema.attr(self.attr);
        match self.threshold {
            Threshold::Code(c) => {
                let sym = if self.op == Op::Eq { "=" } else { "!=" };
                format!("{}{}{}", a.name, sym, a.label(c))
            }
            Threshold::Value(t) => {
                let sym = if self.op == Op::Leq { "<=" } else { ">" };
                format!("{}{}{}", a.name, sym, t)
            }
        }
    }
}

/// Conjunction of split conditions from the root to a node, in root order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Path {
    conditions: Vec<SplitCondition>,
}

impl Path {
    pub fn root() -> Self {
        Self::default()
    }

    pub fn new(conditions: Vec<SplitCondition>) -> Self {
        Self { conditions }
    }

    pub fn conditions(&self) -> &[SplitCondition] {
        &self.conditions
    }

    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    pub fn extended(&self, cond: SplitCondition) -> Self {
        let mut conditions = Vec::with_capacity(self.conditions.len() + 1);
        conditions.extend_from_slice(&self.conditions);
        conditions.push(cond);
        Self { conditions }
    }

    /// Distinct attributes in order of first appearance.
    pub fn attributes(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for c in &self.conditions {
            if !out.contains(&c.attr) {
                out.push(c.attr);
            }
        }
        out
    }

    /// Conditions on the first `j` distinct attributes of the path.
    pub fn leading_attributes(&self, j: usize) -> Self {
        let keep: Vec<usize> = self.attributes().into_iter().take(j).collect();
        Self {
            conditions: self
                .conditions
                .iter()
                .filter(|c| keep.contains(&c.attr))
                .copied()
                .collect(),
        }
    }

    /// True when every condition of `self` occurs in `other`.
    pub fn is_subpath_of(&self, other: &Path) -> bool {
        self.conditions.iter().all(|c| other.conditions.contains(c))
    }

    pub fn check(&self, schema: &Schema) -> Result<()> {
        self.conditions.iter().try_for_each(|c| c.check(schema))
    }

    #[inline]
    pub fn holds(&self, data: &Dataset, row: usize) -> bool {
        self.conditions.iter().all(|c| c.holds(data, row))
    }
}

impl From<Vec<SplitCondition>> for Path {
    fn from(conditions: Vec<SplitCondition>) -> Self {
        Self { conditions }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn attributes_are_distinct_in_root_order() {
        let p = Path::new(vec![
            SplitCondition::leq(2, 30.0),
            SplitCondition::eq(0, 1),
            SplitCondition::gt(2, 10.0),
            SplitCondition::neq(1, 0),
        ]);
        assert_eq!(p.attributes(), vec![2, 0, 1]);
        let lead = p.leading_attributes(1);
        assert_eq!(
            lead.conditions(),
            &[SplitCondition::leq(2, 30.0), SplitCondition::gt(2, 10.0)]
        );
        assert!(lead.is_subpath_of(&p));
        assert!(!p.is_subpath_of(&lead));
        assert!(Path::root().is_subpath_of(&p));
    }

    #[test]
    fn negation_is_involutive() {
        for c in [
            SplitCondition::eq(0, 3),
            SplitCondition::neq(0, 3),
            SplitCondition::leq(1, 0.5),
            SplitCondition::gt(1, 0.5),
        ] {
            assert_eq!(c.negate().negate(), c);
            assert_ne!(c.negate(), c);
        }
        assert!(SplitCondition::leq(0, 2.0).holds_num(2.0));
        assert!(!SplitCondition::gt(0, 2.0).holds_num(2.0));
    }
}
