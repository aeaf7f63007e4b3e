//! Stepdown and stepup rejection rules.

use serde::Serialize;

use crate::constants::CriticalSequence;
use crate::error::{Error, Result};

/// p-values with optional labels.
#[derive(Debug, Clone, PartialEq)]
pub struct PValueSet {
    values: Vec<f64>,
    ids: Option<Vec<String>>,
}

impl PValueSet {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Param("at least one p-value is required".into()));
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::PValue { index, value });
        }
        Ok(PValueSet { values, ids: None })
    }

    pub fn with_ids(mut self, ids: Vec<String>) -> Result<Self> {
        if ids.len() != self.values.len() {
            return Err(Error::Length {
                expected: self.values.len(),
                actual: ids.len(),
            });
        }
        self.ids = Some(ids);
        Ok(self)
    }

    /// Skips range checks; for samplers that construct valid p-values.
    pub(crate) fn from_trusted(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| (0.0..=1.0).contains(v)));
        PValueSet { values, ids: None }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn ids(&self) -> Option<&[String]> {
        self.ids.as_deref()
    }

    /// Label of position `index`: the user id if present, else `index + 1`.
    pub fn label(&self, index: usize) -> String {
        match &self.ids {
            Some(ids) => ids[index].clone(),
            None => (index + 1).to_string(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Positions sorted by `(value, position)`.
    pub fn order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        // Stable, so equal values keep their input order.
        idx.sort_by(|&a, &b| self.values[a].total_cmp(&self.values[b]));
        idx
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Stepdown,
    Stepup,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "stepdown" | "step-down" => Ok(Mode::Stepdown),
            "stepup" | "step-up" => Ok(Mode::Stepup),
            other => Err(Error::Param(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceStep {
    /// 1-based rank among the ordered p-values.
    pub rank: usize,
    /// Position in the input.
    pub index: usize,
    pub p: f64,
    pub threshold: f64,
    pub rejected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RejectionOutcome {
    pub num_rejected: usize,
    /// Input positions of the rejected hypotheses, most significant first.
    pub rejected: Vec<usize>,
    pub mode: Mode,
    pub trace: Vec<TraceStep>,
}

impl RejectionOutcome {
    pub fn is_rejected(&self, index: usize) -> bool {
        self.rejected.contains(&index)
    }
}

fn check_len(p: &PValueSet, c: &CriticalSequence) -> Result<()> {
    if p.len() != c.len() {
        return Err(Error::Length {
            expected: c.len(),
            actual: p.len(),
        });
    }
    Ok(())
}

/// Number of rejections only, without building a trace.
pub fn rejection_count(sorted: &[f64], thresholds: &[f64], mode: Mode) -> usize {
    match mode {
        Mode::Stepdown => sorted
            .iter()
            .zip(thresholds)
            .position(|(p, a)| p > a)
            .unwrap_or(sorted.len()),
        Mode::Stepup => sorted
            .iter()
            .zip(thresholds)
            .rposition(|(p, a)| p <= a)
            .map_or(0, |i| i + 1),
    }
}

fn apply(p: &PValueSet, c: &CriticalSequence, mode: Mode) -> Result<RejectionOutcome> {
    check_len(p, c)?;
    let order = p.order();
    let sorted: Vec<f64> = order.iter().map(|&i| p.values[i]).collect();
    let r = rejection_count(&sorted, &c.values, mode);
    let trace = order
        .iter()
        .enumerate()
        .map(|(k, &index)| TraceStep {
            rank: k + 1,
            index,
            p: sorted[k],
            threshold: c.values[k],
            rejected: k < r,
        })
        .collect();
    Ok(RejectionOutcome {
        num_rejected: r,
        rejected: order[..r].to_vec(),
        mode,
        trace,
    })
}

/// Reject `H_(1..r)` for the largest `r` with `p_(i) <= alpha_i` for all `i <= r`.
pub fn stepdown(p: &PValueSet, c: &CriticalSequence) -> Result<RejectionOutcome> {
    apply(p, c, Mode::Stepdown)
}

/// Reject `H_(1..r)` for the largest `r` with `p_(r) <= alpha_r`; none if no
/// ordered p-value is under its threshold.
pub fn stepup(p: &PValueSet, c: &CriticalSequence) -> Result<RejectionOutcome> {
    apply(p, c, Mode::Stepup)
}

pub fn run(p: &PValueSet, c: &CriticalSequence, mode: Mode) -> Result<RejectionOutcome> {
    apply(p, c, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{bh_stepup_constants, holm_constants};
    use crate::params::ControlParams;

    fn pv(v: &[f64]) -> PValueSet {
        PValueSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn holm_hand_trace() {
        let c = holm_constants(&ControlParams::new(4, 0.05).unwrap());
        let out = stepdown(&pv(&[0.001, 0.01, 0.02, 0.9]), &c).unwrap();
        assert_eq!(out.num_rejected, 3);
        assert_eq!(out.rejected, vec![0, 1, 2]);
        assert_eq!(out.trace.len(), 4);
        assert!(!out.trace[3].rejected);
    }

    #[test]
    fn stepdown_base_and_all() {
        let c = holm_constants(&ControlParams::new(3, 0.05).unwrap());
        assert_eq!(
            stepdown(&pv(&[0.02, 0.5, 0.9]), &c).unwrap().num_rejected,
            0
        );
        assert_eq!(stepdown(&pv(&[0.0, 0.0, 0.0]), &c).unwrap().num_rejected, 3);
    }

    #[test]
    fn stepup_vs_stepdown() {
        let c = bh_stepup_constants(&ControlParams::new(4, 0.2).unwrap());
        let p = pv(&[0.04, 0.9, 0.9, 0.9]);
        assert_eq!(stepup(&p, &c).unwrap().rejected, vec![0]);
        assert_eq!(stepdown(&p, &c).unwrap().num_rejected, 1);
        let q = pv(&[0.06, 0.09, 0.9, 0.9]);
        assert_eq!(stepup(&q, &c).unwrap().num_rejected, 2);
        assert_eq!(stepdown(&q, &c).unwrap().num_rejected, 0);
        let all = pv(&[0.9, 0.1, 0.2, 0.15]);
        assert_eq!(stepup(&all, &c).unwrap().num_rejected, 0);
        let last = pv(&[0.19, 0.19, 0.19, 0.19]);
        assert_eq!(stepup(&last, &c).unwrap().num_rejected, 4);
    }

    #[test]
    fn equality_rejects() {
        let c = holm_constants(&ControlParams::new(2, 0.1).unwrap());
        let out = stepdown(&pv(&[0.05, 0.1]), &c).unwrap();
        assert_eq!(out.num_rejected, 2);
    }

    #[test]
    fn ties_follow_input_order() {
        let c = holm_constants(&ControlParams::new(4, 0.2).unwrap());
        let out = stepdown(&pv(&[0.9, 0.01, 0.01, 0.01]), &c).unwrap();
        assert_eq!(out.rejected, vec![1, 2, 3]);
    }

    #[test]
    fn length_mismatch_and_bad_values() {
        let c = holm_constants(&ControlParams::new(3, 0.05).unwrap());
        assert!(matches!(
            stepdown(&pv(&[0.1, 0.2]), &c),
            Err(Error::Length { .. })
        ));
        assert!(PValueSet::new(vec![]).is_err());
        assert!(matches!(
            PValueSet::new(vec![0.1, 1.5]),
            Err(Error::PValue { index: 1, .. })
        ));
        assert!(PValueSet::new(vec![f64::NAN]).is_err());
        assert!(pv(&[0.1]).with_ids(vec![]).is_err());
    }

    #[test]
    fn labels() {
        let p = pv(&[0.1, 0.2])
            .with_ids(vec!["a".into(), "b".into()])
            .unwrap();
        assert_eq!(p.label(1), "b");
        assert_eq!(pv(&[0.1, 0.2]).label(1), "2");
    }
}
