use super::store::{maximal_subpath_for, KnowledgeRegime, KnowledgeStore};
use crate::data::{Path, SplitCondition};
use crate::error::{Error, Result};

const CLAMP_DRIFT: f64 = 1e-12;

/// Share of the distinct attributes of `phi` that the subpath does not cover.
pub fn dynamic_alpha(phi: &Path, sub: &Path) -> Result<f64> {
    if !sub.is_subpath_of(phi) {
        return Err(Error::SubsetViolation);
    }
    let all = phi.attributes();
    if all.is_empty() {
        return Ok(0.0);
    }
    let kept = sub.attributes();
    let missing = all.iter().filter(|a| !kept.contains(a)).count();
    Ok(missing as f64 / all.len() as f64)
}

fn unit(x: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} = {x} is outside [0, 1]")))
    }
}

/// `alpha * source + (1 - alpha) * target`.
pub fn affine_estimate(source: f64, target: f64, alpha: f64) -> Result<f64> {
    unit(source, "source probability")?;
    unit(target, "target probability")?;
    unit(alpha, "alpha")?;
    let p = alpha * source + (1.0 - alpha) * target;
    if !(-CLAMP_DRIFT..=1.0 + CLAMP_DRIFT).contains(&p) {
        return Err(Error::Internal(format!("affine estimate {p} left [0, 1]")));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Mixed probabilities of several conditions on one node.
#[derive(Debug, Clone, PartialEq)]
pub struct Mixed {
    pub probs: Vec<f64>,
    /// 1 when no target knowledge was used.
    pub alpha: f64,
    /// Distinct path attributes dropped to reach answerable knowledge.
    pub truncated: usize,
}

/// Combines source estimates with the target knowledge for `phi`. A fixed
/// `alpha_override` replaces the dynamic weight wherever knowledge exists.
pub fn mix(
    ks: &KnowledgeStore,
    events: &[Vec<SplitCondition>],
    phi: &Path,
    source: &[f64],
    alpha_override: Option<f64>,
) -> Result<Mixed> {
    let fallback = || Mixed {
        probs: source.to_vec(),
        alpha: 1.0,
        truncated: phi.attributes().len(),
    };
    if ks.regime() == KnowledgeRegime::NoTargetKnowledge {
        return Ok(fallback());
    }
    let Some(sub) = maximal_subpath_for(ks, events, phi) else {
        return Ok(fallback());
    };
    let target = ks
        .query_many(events, &sub)
        .ok_or_else(|| Error::Internal("subpath became unanswerable".into()))?;
    let alpha = match alpha_override {
        Some(a) => a,
        None => dynamic_alpha(phi, &sub)?,
    };
    let probs = source
        .iter()
        .zip(&target)
        .map(|(&s, &t)| affine_estimate(s, t, alpha))
        .collect::<Result<Vec<_>>>()?;
    Ok(Mixed {
        probs,
        alpha,
        truncated: phi.attributes().len() - sub.attributes().len(),
    })
}
