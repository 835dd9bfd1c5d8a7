use crate::data::{Column, Dataset, SplitCondition};

/// Split candidates at a node, in schema order then ascending value.
///
/// Discrete attributes test equality with every value present at the node;
/// continuous ones test `<=` the midpoint of consecutive distinct values.
pub(crate) fn candidate_conditions(data: &Dataset, rows: &[usize]) -> Vec<SplitCondition> {
    let schema = data.schema();
    let mut out = Vec::new();
    for a in 0..schema.n_attrs() {
        match data.column(a) {
            Column::Discrete(v) => {
                let mut present = vec![false; schema.attr(a).cardinality()];
                for &r in rows {
                    present[v[r] as usize] = true;
                }
                if present.iter().filter(|p| **p).count() < 2 {
                    continue;
                }
                for (code, p) in present.iter().enumerate() {
                    if *p {
                        out.push(SplitCondition::eq(a, code as u32));
                    }
                }
            }
            Column::Continuous(v) => {
                let mut xs: Vec<f64> = rows.iter().map(|&r| v[r]).collect();
                xs.sort_by(f64::total_cmp);
                xs.dedup();
                for w in xs.windows(2) {
                    out.push(SplitCondition::leq(a, midpoint(w[0], w[1])));
                }
            }
        }
    }
    out
}

/// A threshold strictly separating `a < b`.
pub(crate) fn midpoint(a: f64, b: f64) -> f64 {
    let m = a + (b - a) / 2.0;
    if m >= b {
        a
    } else {
        m
    }
}

pub(crate) fn partition(
    data: &Dataset,
    rows: &[usize],
    cond: &SplitCondition,
) -> (Vec<usize>, Vec<usize>) {
    rows.iter().partition(|&&r| cond.holds(data, r))
}

/// Class counts over a row subset.
pub(crate) fn class_counts(labels: &[u32], rows: &[usize], k: usize) -> Vec<usize> {
    let mut c = vec![0; k];
    for &r in rows {
        c[labels[r] as usize] += 1;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Attribute, Schema};
    use std::sync::Arc;

    #[test]
    fn enumerates_present_values_and_midpoints() {
        let schema = Arc::new(
            Schema::new(
                vec![
                    Attribute::discrete("A", &["x", "y", "z"]),
                    Attribute::continuous("B"),
                ],
                Attribute::discrete("Y", &["0", "1"]),
                None,
            )
            .unwrap(),
        );
        let d = Dataset::new(
            schema,
            vec![
                Column::Discrete(vec![2, 0, 2, 0]),
                Column::Continuous(vec![3.0, 1.0, 3.0, 2.0]),
            ],
            Some(vec![0, 1, 0, 1]),
        )
        .unwrap();
        let rows = [0, 1, 2, 3];
        let c = candidate_conditions(&d, &rows);
        assert_eq!(
            c,
            vec![
                SplitCondition::eq(0, 0),
                SplitCondition::eq(0, 2),
                SplitCondition::leq(1, 1.5),
                SplitCondition::leq(1, 2.5)
            ]
        );
        // a constant attribute gives no candidates
        assert_eq!(candidate_conditions(&d, &[0, 2]), vec![]);
        assert_eq!(partition(&d, &rows, &c[2]), (vec![1], vec![0, 2, 3]));
        assert!(midpoint(1.0, 1.0 + f64::EPSILON) < 1.0 + f64::EPSILON);
    }
}
