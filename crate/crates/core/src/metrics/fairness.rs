use super::{predictions, Confusion, Model};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::stats::ratio;

/// The two codes of a binary protected attribute.
pub fn group_codes(data: &Dataset, protected: usize) -> Result<[u32; 2]> {
    let schema = data.schema();
    if protected >= schema.n_attrs() {
        return Err(Error::UnknownAttribute(format!("#{protected}")));
    }
    let attr = schema.attr(protected);
    if !attr.is_discrete() || attr.cardinality() != 2 {
        return Err(Error::Config(format!(
            "protected attribute `{}` must be binary",
            attr.name
        )));
    }
    Ok([0, 1])
}

pub(crate) fn confusion(preds: &[u32], y: &[u32], rows: &[usize], positive: u32) -> Confusion {
    let mut c = Confusion {
        tp: 0,
        fp: 0,
        fn_: 0,
        tn: 0,
    };
    for &r in rows {
        match (preds[r] == positive, y[r] == positive) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, true) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    c
}

fn group_rows(data: &Dataset, protected: usize) -> Result<[Vec<usize>; 2]> {
    let codes = group_codes(data, protected)?;
    let rows = codes.map(|g| {
        (0..data.len())
            .filter(|&r| data.code(protected, r) == g)
            .collect::<Vec<_>>()
    });
    for (g, r) in codes.iter().zip(&rows) {
        if r.is_empty() {
            return Err(Error::GroupMissing(
                data.schema().attr(protected).label(*g).to_string(),
            ));
        }
    }
    Ok(rows)
}

pub(crate) fn dp_from(preds: &[u32], data: &Dataset, protected: usize, positive: u32) -> Result<f64> {
    let groups = group_rows(data, protected)?;
    let rate = |rows: &[usize]| ratio(rows.iter().filter(|&&r| preds[r] == positive).count(), rows.len());
    Ok((rate(&groups[0]) - rate(&groups[1])).abs())
}

pub(crate) fn eop_from(preds: &[u32], data: &Dataset, protected: usize, positive: u32) -> Result<f64> {
    let groups = group_rows(data, protected)?;
    let y = data.labels()?;
    let mut tpr = [0.0; 2];
    for (i, rows) in groups.iter().enumerate() {
        let pos: Vec<usize> = rows.iter().copied().filter(|&r| y[r] == positive).collect();
        if pos.is_empty() {
            let g = data.schema().attr(protected).label(i as u32).to_string();
            return Err(Error::NoPositives(g));
        }
        tpr[i] = ratio(pos.iter().filter(|&&r| preds[r] == positive).count(), pos.len());
    }
    Ok((tpr[0] - tpr[1]).abs())
}

/// `|P(pred = positive | a) - P(pred = positive | b)|`. Labels are not needed.
pub fn demographic_parity<M: Model + ?Sized>(
    model: &M,
    test: &Dataset,
    protected: usize,
    positive: u32,
) -> Result<f64> {
    dp_from(&predictions(model, test), test, protected, positive)
}

/// `|TPR_a - TPR_b|`.
pub fn equal_opportunity<M: Model + ?Sized>(
    model: &M,
    test: &Dataset,
    protected: usize,
    positive: u32,
) -> Result<f64> {
    test.labels()?;
    eop_from(&predictions(model, test), test, protected, positive)
}
