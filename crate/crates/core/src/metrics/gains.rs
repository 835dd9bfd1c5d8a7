use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Denominators below this make a relative gain undefined.
pub const DEGENERATE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gain {
    pub value: f64,
    /// The baseline gap was below `DEGENERATE_EPS`; `value` is 0.
    pub degenerate: bool,
}

fn check(x: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} = {x} is outside [0, 1]")))
    }
}

fn scaled(num: f64, den: f64) -> Gain {
    if den < DEGENERATE_EPS {
        return Gain {
            value: 0.0,
            degenerate: true,
        };
    }
    Gain {
        value: (num / den * 100.0).clamp(-100.0, 100.0),
        degenerate: false,
    }
}

/// Share of the accuracy lost by the source-only model that the adapted
/// model recovers, in percent.
pub fn relative_gain_acc(tt: f64, ntdk: f64, adapted: f64) -> Result<Gain> {
    check(tt, "acc_tt")?;
    check(ntdk, "acc_ntdk")?;
    check(adapted, "acc_adapted")?;
    Ok(scaled(adapted - ntdk.min(tt), (tt - ntdk).abs()))
}

/// Same for a disparity, where smaller is better.
pub fn relative_gain_fairness(tt: f64, ntdk: f64, adapted: f64) -> Result<Gain> {
    check(tt, "metric_tt")?;
    check(ntdk, "metric_ntdk")?;
    check(adapted, "metric_adapted")?;
    Ok(scaled(ntdk.max(tt) - adapted, (tt - ntdk).abs()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelativeGains {
    pub r_acc: Gain,
    pub r_dp: Option<Gain>,
    pub r_eop: Option<Gain>,
    pub acc_tt: f64,
    pub acc_ntdk: f64,
    pub acc_adapted: f64,
    pub dp: Option<[f64; 3]>,
    pub eop: Option<[f64; 3]>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints() {
        assert_eq!(relative_gain_acc(0.9, 0.7, 0.9).unwrap().value, 100.0);
        assert_eq!(relative_gain_acc(0.9, 0.7, 0.7).unwrap().value, 0.0);
        let g = relative_gain_acc(0.8, 0.8, 0.9).unwrap();
        assert!(g.degenerate && g.value == 0.0);
        assert_eq!(relative_gain_acc(0.7, 0.7 + 1e-6, 0.9).unwrap().value, 100.0);
        assert_eq!(relative_gain_fairness(0.1, 0.3, 0.1).unwrap().value, 100.0);
        assert_eq!(relative_gain_fairness(0.1, 0.3, 0.3).unwrap().value, 0.0);
        assert!(matches!(relative_gain_acc(1.1, 0.5, 0.5), Err(Error::Domain(_))));
    }
}
