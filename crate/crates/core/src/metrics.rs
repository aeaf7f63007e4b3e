//! Per-trial error quantities.

use crate::params::Gamma;
use crate::procedures::RejectionOutcome;

/// Which hypotheses are true nulls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthMask {
    is_true_null: Vec<bool>,
}

impl TruthMask {
    pub fn new(is_true_null: Vec<bool>) -> Self {
        TruthMask { is_true_null }
    }

    /// The first `true_nulls` of `s` positions are true nulls.
    pub fn leading(s: usize, true_nulls: usize) -> Self {
        assert!(true_nulls <= s);
        TruthMask::new((0..s).map(|i| i < true_nulls).collect())
    }

    pub fn len(&self) -> usize {
        self.is_true_null.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_true_null.is_empty()
    }

    pub fn is_true_null(&self, index: usize) -> bool {
        self.is_true_null[index]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.is_true_null
    }

    /// `|I|`.
    pub fn true_null_count(&self) -> usize {
        self.is_true_null.iter().filter(|t| **t).count()
    }

    /// p-values of the true nulls, in input order.
    pub fn true_null_values(&self, pvalues: &[f64]) -> Vec<f64> {
        assert_eq!(
            pvalues.len(),
            self.len(),
            "p-values and truth mask differ in length"
        );
        pvalues
            .iter()
            .zip(&self.is_true_null)
            .filter_map(|(p, t)| t.then_some(*p))
            .collect()
    }
}

/// Rejected true nulls.
pub fn false_rejections(outcome: &RejectionOutcome, truth: &TruthMask) -> usize {
    outcome
        .rejected
        .iter()
        .filter(|&&i| truth.is_true_null(i))
        .count()
}

/// False rejections over total rejections; zero when nothing is rejected.
pub fn fdp(outcome: &RejectionOutcome, truth: &TruthMask) -> f64 {
    if outcome.num_rejected == 0 {
        return 0.0;
    }
    false_rejections(outcome, truth) as f64 / outcome.num_rejected as f64
}

/// At least `k` true nulls rejected.
pub fn kfwer_event(outcome: &RejectionOutcome, truth: &TruthMask, k: usize) -> bool {
    false_rejections(outcome, truth) >= k
}

/// `FDP > gamma`, decided exactly: `f / r > num / den` iff `f den > num r`.
pub fn fdp_exceeds(false_rej: usize, num_rejected: usize, gamma: Gamma) -> bool {
    num_rejected > 0 && (false_rej as i128) * gamma.denom() > gamma.numer() * num_rejected as i128
}

/// Whether `q_(i) <= i alpha / |I|` for some `i <= M = min(floor(gamma s) + 1, |I|)`,
/// where `true_pvalues` are the true-null p-values in any order.
pub fn thm32_bound_event(true_pvalues: &[f64], alpha: f64, gamma: Gamma, s: usize) -> bool {
    let t = true_pvalues.len();
    if t == 0 {
        return false;
    }
    let mut q = true_pvalues.to_vec();
    q.sort_by(f64::total_cmp);
    let m = (gamma.floor_mul(s) + 1).min(t);
    q[..m]
        .iter()
        .enumerate()
        .any(|(i, &v)| v <= (i + 1) as f64 * alpha / t as f64)
}

/// `M = min(floor(gamma s) + 1, |I|)` used by [`thm32_bound_event`].
pub fn thm32_depth(gamma: Gamma, s: usize, true_nulls: usize) -> usize {
    (gamma.floor_mul(s) + 1).min(true_nulls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::procedures::Mode;

    fn outcome(rejected: Vec<usize>) -> RejectionOutcome {
        RejectionOutcome {
            num_rejected: rejected.len(),
            rejected,
            mode: Mode::Stepdown,
            trace: vec![],
        }
    }

    #[test]
    fn fdp_examples() {
        let truth = TruthMask::new(vec![true, false, false, false, true]);
        assert_eq!(fdp(&outcome(vec![]), &truth), 0.0);
        assert_eq!(fdp(&outcome(vec![0, 1, 2, 3]), &truth), 0.25);
        assert_eq!(fdp(&outcome(vec![1, 2]), &truth), 0.0);
    }

    #[test]
    fn kfwer_examples() {
        let truth = TruthMask::new(vec![true, true, true, false]);
        let none = outcome(vec![]);
        assert_eq!(false_rejections(&none, &truth), 0);
        assert!(!kfwer_event(&none, &truth, 1));
        assert!(kfwer_event(&outcome(vec![0]), &truth, 1));
        let three = outcome(vec![0, 1, 2, 3]);
        assert_eq!(false_rejections(&three, &truth), 3);
        assert!(!kfwer_event(&three, &truth, 4));
    }

    #[test]
    fn exact_exceedance() {
        let g: Gamma = "0.1".parse().unwrap();
        assert!(!fdp_exceeds(1, 10, g));
        assert!(fdp_exceeds(1, 9, g));
        assert!(!fdp_exceeds(0, 0, g));
    }

    #[test]
    fn thm32_examples() {
        let g: Gamma = "0.1".parse().unwrap();
        assert!(!thm32_bound_event(&[], 0.05, g, 100));
        assert!(thm32_bound_event(&[0.5, 0.0, 0.7], 0.05, g, 100));
        assert_eq!(thm32_depth(g, 100, 90), 11);
        // q_(2) = 0.02 <= 2 * 0.05 / 3 fires at depth 2.
        assert!(thm32_bound_event(&[0.9, 0.02, 0.03], 0.05, g, 100));
        // Depth 1 only when floor(gamma s) = 0.
        assert!(!thm32_bound_event(&[0.9, 0.02, 0.03], 0.05, g, 5));
    }

    #[test]
    fn true_null_values_in_order() {
        let truth = TruthMask::leading(4, 2);
        assert_eq!(
            truth.true_null_values(&[0.1, 0.2, 0.3, 0.4]),
            vec![0.1, 0.2]
        );
        assert_eq!(truth.true_null_count(), 2);
    }
}
