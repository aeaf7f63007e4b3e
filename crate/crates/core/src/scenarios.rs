//! Seeded joint distributions of p-values with known truth.
//!
//! True nulls always occupy the leading positions `0..|I|`; false nulls
//! follow. Every sampler draws only from the generator it is handed, so a
//! scenario plus a seed determines the sample bit for bit.

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::constants::beta_sequence;
use crate::error::{param, Result};
use crate::metrics::TruthMask;
use crate::normal;
use crate::params::{ControlParams, Gamma};
use crate::procedures::PValueSet;
use crate::rng::trial_rng;

/// Law of the false-null p-values in [`Scenario::Independent`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum AltLaw {
    /// Every false-null p-value equals `at`.
    PointMass { at: f64 },
    /// `U^a` for `U` uniform and `a > 1`, so `P{p <= u} = u^(1/a) >= u`.
    Power { a: f64 },
}

impl AltLaw {
    fn validate(&self) -> Result<()> {
        match *self {
            AltLaw::PointMass { at } if !(0.0..=1.0).contains(&at) => {
                param(format!("point mass must lie in [0, 1], got {at}"))
            }
            AltLaw::Power { a } if !(a.is_finite() && a > 1.0) => {
                param(format!("power-law exponent must exceed 1, got {a}"))
            }
            _ => Ok(()),
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            AltLaw::PointMass { at } => at,
            AltLaw::Power { a } => rng.random::<f64>().powf(a),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Scenario {
    /// Independent uniform nulls, independent alternatives.
    Independent {
        s: usize,
        true_nulls: usize,
        alt: AltLaw,
    },
    /// One-factor Gaussian model `Z_i = sqrt(rho) W + sqrt(1 - rho) e_i`,
    /// one-sided p-values `1 - Phi(Z_i + shift_i)` with `shift_i = 0` for
    /// true nulls. With `independent_false` the false nulls load on their own
    /// factor, which makes them independent of the true nulls.
    Equicorrelated {
        s: usize,
        true_nulls: usize,
        rho: f64,
        shift: f64,
        independent_false: bool,
    },
    /// All-null configuration attaining the order-statistic union bound
    /// `t sum (beta_i - beta_{i-1}) / i` with equality.
    Lemma31 { t: usize, betas: Vec<f64> },
    /// `s = 100`, `|I| = 90`, `gamma = 0.1` construction that defeats the
    /// unscaled base FDP constants.
    Example31 { alpha: f64 },
    /// Adversarial construction near `D(gamma, s)`: the true nulls follow the
    /// sharp all-null law on `alpha beta_1..alpha beta_L` and the false nulls
    /// react to the first `i` with `q_(i) <= alpha beta_i`.
    Remark31 {
        s: usize,
        gamma: Gamma,
        true_nulls: usize,
        alpha: f64,
    },
    /// `s = 3`, `|I| = 2` construction that defeats the stepdown FDR constants.
    Example41 { alpha: f64 },
}

/// One draw of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub pvalues: PValueSet,
    pub truth: TruthMask,
}

impl Sample {
    fn new(values: Vec<f64>, true_nulls: usize) -> Self {
        let s = values.len();
        Sample {
            pvalues: PValueSet::from_trusted(values),
            truth: TruthMask::leading(s, true_nulls),
        }
    }
}

/// Uniform on `(lo, hi]`.
fn uniform_left_open<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let u: f64 = rng.random();
    (lo + (hi - lo) * (1.0 - u)).min(hi)
}

fn lemma31_bound(t: usize, betas: &[f64]) -> f64 {
    let mut prev = 0.0;
    let mut acc = 0.0;
    for (i, b) in betas.iter().enumerate() {
        acc += (b - prev) / (i + 1) as f64;
        prev = *b;
    }
    t as f64 * acc
}

fn check_lemma31(t: usize, betas: &[f64]) -> Result<()> {
    if t == 0 {
        return param("t must be at least 1");
    }
    if betas.is_empty() || betas.len() > t {
        return param(format!("need 1 <= m <= t = {t} betas, got {}", betas.len()));
    }
    if betas.iter().any(|b| !(0.0..=1.0).contains(b)) {
        return param("betas must lie in [0, 1]");
    }
    if betas.windows(2).any(|w| w[0] > w[1]) {
        return param("betas must be nondecreasing");
    }
    let bound = lemma31_bound(t, betas);
    if bound > 1.0 {
        return param(format!(
            "union bound {bound} exceeds 1; the sharp law does not exist"
        ));
    }
    Ok(())
}

/// Draws the sharp law. Returns the p-values and the index `i` of the event
/// `A_i` that was selected (`None` for the complement).
fn draw_lemma31<R: Rng + ?Sized>(
    rng: &mut R,
    t: usize,
    betas: &[f64],
) -> (Vec<f64>, Option<usize>) {
    let m = betas.len();
    let top = betas[m - 1];
    let u: f64 = rng.random();
    let mut cum = 0.0;
    let mut prev = 0.0;
    let mut chosen = None;
    for (k, b) in betas.iter().enumerate() {
        let i = k + 1;
        cum += t as f64 * (b - prev) / i as f64;
        if u < cum {
            chosen = Some((i, prev, *b));
            break;
        }
        prev = *b;
    }
    let mut values: Vec<f64> = (0..t).map(|_| uniform_left_open(rng, top, 1.0)).collect();
    if let Some((i, lo, hi)) = chosen {
        for j in sample_indices(rng, t, i) {
            values[j] = uniform_left_open(rng, lo, hi);
        }
    }
    (values, chosen.map(|c| c.0))
}

/// Thresholds `(alpha/92, 2 alpha/91)` of the `s = 100` example.
pub fn example31_betas(alpha: f64) -> [f64; 2] {
    [alpha / 92.0, 2.0 * alpha / 91.0]
}

/// The adversarial thresholds `alpha beta_1..alpha beta_L` and the number of
/// zeros placed among the false nulls when trigger `i` fires.
#[derive(Debug, Clone, PartialEq)]
pub struct Remark31Plan {
    pub betas: Vec<f64>,
    pub zeros: Vec<usize>,
}

/// Trigger `i` is usable while `ceil(i/gamma) - 1 <= s - |I|` and
/// `i <= floor(gamma s)`. When it fires, `ceil(i/gamma) - 1 - i` false nulls
/// are set to zero so the `i`-th true-null rejection lands at step
/// `ceil(i/gamma) - 1`, where `i / step > gamma`.
pub fn remark31_plan(
    s: usize,
    gamma: Gamma,
    true_nulls: usize,
    alpha: f64,
) -> Result<Remark31Plan> {
    let p = ControlParams::new(s, alpha)?.with_gamma(gamma);
    if true_nulls == 0 || true_nulls >= s {
        return param("the adversarial construction needs 0 < |I| < s");
    }
    let all = beta_sequence(&p, None, true_nulls)?;
    let spare = s - true_nulls;
    let depth = (1..=gamma.floor_mul(s))
        .take_while(|&i| gamma.ceil_div(i) - 1 <= spare && i <= true_nulls)
        .last()
        .unwrap_or(0);
    if depth == 0 {
        return param("no trigger fits: too few false nulls");
    }
    Ok(Remark31Plan {
        betas: all[..depth].iter().map(|b| alpha * b).collect(),
        zeros: (1..=depth).map(|i| gamma.ceil_div(i) - 1 - i).collect(),
    })
}

impl Scenario {
    pub fn independent(s: usize, true_nulls: usize, alt: AltLaw) -> Self {
        Scenario::Independent { s, true_nulls, alt }
    }

    /// The worst case at `s = 1000`, `gamma = 0.1`, `|I| = 712`.
    pub fn remark31(alpha: f64) -> Self {
        Scenario::Remark31 {
            s: 1000,
            gamma: Gamma::from_fraction(1, 10).expect("valid"),
            true_nulls: 712,
            alpha,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Independent { .. } => "independent",
            Scenario::Equicorrelated { .. } => "equicorrelated",
            Scenario::Lemma31 { .. } => "lemma31",
            Scenario::Example31 { .. } => "example31",
            Scenario::Remark31 { .. } => "remark31",
            Scenario::Example41 { .. } => "example41",
        }
    }

    pub fn s(&self) -> usize {
        match self {
            Scenario::Independent { s, .. }
            | Scenario::Equicorrelated { s, .. }
            | Scenario::Remark31 { s, .. } => *s,
            Scenario::Lemma31 { t, .. } => *t,
            Scenario::Example31 { .. } => 100,
            Scenario::Example41 { .. } => 3,
        }
    }

    pub fn true_nulls(&self) -> usize {
        match self {
            Scenario::Independent { true_nulls, .. }
            | Scenario::Equicorrelated { true_nulls, .. }
            | Scenario::Remark31 { true_nulls, .. } => *true_nulls,
            Scenario::Lemma31 { t, .. } => *t,
            Scenario::Example31 { .. } => 90,
            Scenario::Example41 { .. } => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check_alpha = |a: f64| {
            if a > 0.0 && a < 1.0 {
                Ok(())
            } else {
                param(format!("alpha must lie in (0, 1), got {a}"))
            }
        };
        match self {
            Scenario::Independent { s, true_nulls, alt } => {
                if *s == 0 || true_nulls > s {
                    return param("need s >= 1 and 0 <= |I| <= s");
                }
                alt.validate()
            }
            Scenario::Equicorrelated {
                s,
                true_nulls,
                rho,
                shift,
                ..
            } => {
                if *s == 0 || true_nulls > s {
                    return param("need s >= 1 and 0 <= |I| <= s");
                }
                if !(0.0..1.0).contains(rho) {
                    return param(format!("rho must lie in [0, 1), got {rho}"));
                }
                if !shift.is_finite() {
                    return param("shift must be finite");
                }
                Ok(())
            }
            Scenario::Lemma31 { t, betas } => check_lemma31(*t, betas),
            Scenario::Example31 { alpha } => {
                check_alpha(*alpha)?;
                check_lemma31(90, &example31_betas(*alpha))
            }
            Scenario::Remark31 {
                s,
                gamma,
                true_nulls,
                alpha,
            } => {
                check_alpha(*alpha)?;
                let plan = remark31_plan(*s, *gamma, *true_nulls, *alpha)?;
                check_lemma31(*true_nulls, &plan.betas)
            }
            Scenario::Example41 { alpha } => {
                check_alpha(*alpha)?;
                if *alpha >= 4.0 / 9.0 {
                    return param(format!("the construction needs alpha < 4/9, got {alpha}"));
                }
                Ok(())
            }
        }
    }

    /// Draws one sample. Assumes [`Scenario::validate`] passed; use
    /// [`Scenario::sampler`] to validate once and reuse precomputed tables.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Sample> {
        Ok(self.sampler()?.draw(rng))
    }

    /// Validates and precomputes anything that does not depend on the draw.
    pub fn sampler(&self) -> Result<Sampler<'_>> {
        self.validate()?;
        let plan = match self {
            Scenario::Remark31 {
                s,
                gamma,
                true_nulls,
                alpha,
            } => Some(remark31_plan(*s, *gamma, *true_nulls, *alpha)?),
            _ => None,
        };
        Ok(Sampler {
            scenario: self,
            plan,
        })
    }
}

/// A validated scenario ready to draw.
#[derive(Debug, Clone)]
pub struct Sampler<'a> {
    scenario: &'a Scenario,
    plan: Option<Remark31Plan>,
}

impl Sampler<'_> {
    pub fn scenario(&self) -> &Scenario {
        self.scenario
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Sample {
        match self.scenario {
            Scenario::Independent { s, true_nulls, alt } => {
                let values = (0..*s)
                    .map(|i| {
                        if i < *true_nulls {
                            rng.random::<f64>()
                        } else {
                            alt.draw(rng)
                        }
                    })
                    .collect();
                Sample::new(values, *true_nulls)
            }
            Scenario::Equicorrelated {
                s,
                true_nulls,
                rho,
                shift,
                independent_false,
            } => {
                let load = rho.sqrt();
                let idio = (1.0 - rho).sqrt();
                let w: f64 = rng.sample(StandardNormal);
                let w_false: f64 = if *independent_false {
                    rng.sample(StandardNormal)
                } else {
                    w
                };
                let values = (0..*s)
                    .map(|i| {
                        let e: f64 = rng.sample(StandardNormal);
                        if i < *true_nulls {
                            normal::upper_tail(load * w + idio * e)
                        } else {
                            normal::upper_tail(load * w_false + idio * e + shift)
                        }
                    })
                    .collect();
                Sample::new(values, *true_nulls)
            }
            Scenario::Lemma31 { t, betas } => {
                let (values, _) = draw_lemma31(rng, *t, betas);
                Sample::new(values, *t)
            }
            Scenario::Example31 { alpha } => {
                let betas = example31_betas(*alpha);
                let (mut values, _) = draw_lemma31(rng, 90, &betas);
                let q1 = values.iter().cloned().fold(f64::INFINITY, f64::min);
                let last = if q1 <= betas[0] { 1.0 } else { 0.0 };
                values.extend(std::iter::repeat_n(0.0, 8));
                values.extend([last, last]);
                Sample::new(values, 90)
            }
            Scenario::Remark31 { s, true_nulls, .. } => {
                let plan = self.plan.as_ref().expect("remark31 plan");
                let (mut values, _) = draw_lemma31(rng, *true_nulls, &plan.betas);
                let mut sorted = values.clone();
                sorted.sort_by(f64::total_cmp);
                let trigger = plan.betas.iter().zip(&sorted).position(|(b, q)| q <= b);
                let zeros = trigger.map_or(0, |i| plan.zeros[i]);
                let spare = s - true_nulls;
                values.extend((0..spare).map(|j| if j < zeros { 0.0 } else { 1.0 }));
                Sample::new(values, *true_nulls)
            }
            Scenario::Example41 { alpha } => {
                let pair = rng.random_range(0..6usize);
                // Ordered pairs (i, j) with i != j over the thirds of [0, 1).
                const PAIRS: [(u8, u8); 6] = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];
                let (i, j) = PAIRS[pair];
                let q1 = (i as f64 + rng.random::<f64>()) / 3.0;
                let q2 = (j as f64 + rng.random::<f64>()) / 3.0;
                let r1 = if q1.min(q2) <= alpha / 3.0 { 1.0 } else { 0.0 };
                Sample::new(vec![q1, q2, r1], 2)
            }
        }
    }
}

fn seeded<F: FnOnce(&mut crate::rng::TrialRng) -> T, T>(seed: u64, f: F) -> T {
    let mut rng = trial_rng(seed, 0);
    f(&mut rng)
}

pub fn sample_independent(s: usize, true_nulls: usize, alt: AltLaw, seed: u64) -> Result<Sample> {
    let sc = Scenario::independent(s, true_nulls, alt);
    seeded(seed, |r| sc.sample(r))
}

pub fn sample_equicorrelated_gaussian(
    s: usize,
    true_nulls: usize,
    rho: f64,
    shift: f64,
    seed: u64,
) -> Result<Sample> {
    let sc = Scenario::Equicorrelated {
        s,
        true_nulls,
        rho,
        shift,
        independent_false: false,
    };
    seeded(seed, |r| sc.sample(r))
}

pub fn sample_lemma31_sharp(t: usize, betas: &[f64], seed: u64) -> Result<PValueSet> {
    check_lemma31(t, betas)?;
    Ok(seeded(seed, |r| {
        PValueSet::from_trusted(draw_lemma31(r, t, betas).0)
    }))
}

pub fn sample_example31(alpha: f64, seed: u64) -> Result<Sample> {
    seeded(seed, |r| Scenario::Example31 { alpha }.sample(r))
}

pub fn sample_remark31(alpha: f64, seed: u64) -> Result<Sample> {
    seeded(seed, |r| Scenario::remark31(alpha).sample(r))
}

pub fn sample_example41(alpha: f64, seed: u64) -> Result<Sample> {
    seeded(seed, |r| Scenario::Example41 { alpha }.sample(r))
}

/// The analytic probability of the union event under [`Scenario::Lemma31`].
pub fn lemma31_union_probability(t: usize, betas: &[f64]) -> f64 {
    lemma31_bound(t, betas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{fdp_base_constants, holm_constants};
    use crate::metrics::fdp;
    use crate::procedures::stepdown;
    use crate::rng::trial_rng;

    fn se(p: f64, n: usize) -> f64 {
        (p * (1.0 - p) / n as f64).sqrt()
    }

    #[test]
    fn same_seed_same_sample() {
        let sc = Scenario::Equicorrelated {
            s: 20,
            true_nulls: 10,
            rho: 0.5,
            shift: 2.0,
            independent_false: true,
        };
        let a = sc.sample(&mut trial_rng(11, 5)).unwrap();
        let b = sc.sample(&mut trial_rng(11, 5)).unwrap();
        let c = sc.sample(&mut trial_rng(11, 6)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.pvalues, c.pvalues);
        assert_eq!(
            sample_remark31(0.05, 3).unwrap(),
            sample_remark31(0.05, 3).unwrap()
        );
    }

    #[test]
    fn independent_all_null_and_all_false() {
        let s = sample_independent(10, 10, AltLaw::Power { a: 4.0 }, 1).unwrap();
        assert_eq!(s.truth.true_null_count(), 10);
        let z = sample_independent(10, 0, AltLaw::PointMass { at: 0.0 }, 1).unwrap();
        let c = holm_constants(&ControlParams::new(10, 0.05).unwrap());
        let out = stepdown(&z.pvalues, &c).unwrap();
        assert_eq!(out.num_rejected, 10);
        assert_eq!(fdp(&out, &z.truth), 0.0);
    }

    #[test]
    fn parameter_errors() {
        assert!(Scenario::independent(5, 6, AltLaw::PointMass { at: 0.0 })
            .validate()
            .is_err());
        assert!(Scenario::independent(5, 2, AltLaw::Power { a: 0.5 })
            .validate()
            .is_err());
        assert!(sample_equicorrelated_gaussian(5, 2, 1.0, 0.0, 1).is_err());
        assert!(sample_equicorrelated_gaussian(5, 2, -0.1, 0.0, 1).is_err());
        assert!(sample_lemma31_sharp(2, &[0.6, 0.9], 1).is_err());
        assert!(sample_lemma31_sharp(2, &[0.2, 0.1], 1).is_err());
        assert!(sample_lemma31_sharp(1, &[0.1, 0.2], 1).is_err());
        assert!(sample_example41(4.0 / 9.0, 1).is_err());
        assert!(sample_example41(0.12, 1).is_ok());
    }

    #[test]
    fn example31_layout() {
        let alpha = 0.05;
        for seed in 0..200 {
            let smp = sample_example31(alpha, seed).unwrap();
            let v = smp.pvalues.values();
            assert_eq!(v.len(), 100);
            assert!(v[90..98].iter().all(|x| *x == 0.0));
            let q1 = v[..90].iter().cloned().fold(1.0, f64::min);
            let expect = if q1 <= alpha / 92.0 { 1.0 } else { 0.0 };
            assert_eq!(v[98], expect);
            assert_eq!(v[99], expect);
        }
    }

    #[test]
    fn example31_stepdown_paths() {
        // FDP > 0.1 exactly when q_(1) <= alpha/92 or q_(2) <= 2 alpha/91;
        // otherwise the zeros are the only rejections and FDP = 0.
        let alpha = 0.05;
        let c = fdp_base_constants(&ControlParams::fdp(100, "0.1", alpha).unwrap()).unwrap();
        let mut hits = 0;
        for seed in 0..3000 {
            let smp = sample_example31(alpha, seed).unwrap();
            let mut q = smp.truth.true_null_values(smp.pvalues.values());
            q.sort_by(f64::total_cmp);
            let trigger = q[0] <= alpha / 92.0 || q[1] <= 2.0 * alpha / 91.0;
            let out = stepdown(&smp.pvalues, &c).unwrap();
            let f = fdp(&out, &smp.truth);
            if trigger {
                hits += 1;
                assert!(f > 0.1, "seed {seed}: fdp {f}");
            } else {
                assert_eq!(f, 0.0);
                assert_eq!(out.num_rejected, 10);
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn remark31_plan_matches_construction() {
        let g = Gamma::from_fraction(1, 10).unwrap();
        let plan = remark31_plan(1000, g, 712, 0.05).unwrap();
        assert_eq!(plan.betas.len(), 28);
        assert_eq!(plan.zeros[0], 8);
        assert_eq!(plan.zeros[27], 251);
        let smp = sample_remark31(0.05, 9).unwrap();
        assert_eq!(smp.pvalues.len(), 1000);
        assert_eq!(smp.truth.true_null_count(), 712);
    }

    #[test]
    fn remark31_no_trigger_means_no_zero() {
        let sc = Scenario::remark31(0.05);
        let sampler = sc.sampler().unwrap();
        let c = fdp_base_constants(&ControlParams::fdp(1000, "0.1", 0.05).unwrap()).unwrap();
        let mut quiet = 0;
        for n in 0..400 {
            let smp = sampler.draw(&mut trial_rng(5, n));
            let v = smp.pvalues.values();
            if v[712..].iter().all(|x| *x == 1.0) {
                quiet += 1;
                let out = stepdown(&smp.pvalues, &c).unwrap();
                assert_eq!(out.num_rejected, 0);
                assert_eq!(fdp(&out, &smp.truth), 0.0);
            }
        }
        assert!(quiet > 300);
    }

    #[test]
    fn example41_marginals_and_rule() {
        let alpha = 0.12;
        let n = 40_000;
        let mut below = [0usize; 9];
        let mut low_min = 0;
        for seed in 0..n {
            let smp = sample_example41(alpha, seed as u64).unwrap();
            let v = smp.pvalues.values();
            let m = v[0].min(v[1]);
            if m <= alpha / 3.0 {
                low_min += 1;
                assert_eq!(v[2], 1.0);
            } else {
                assert_eq!(v[2], 0.0);
            }
            for (k, b) in below.iter_mut().enumerate() {
                if v[0] <= (k + 1) as f64 / 10.0 {
                    *b += 1;
                }
            }
        }
        for (k, b) in below.iter().enumerate() {
            let u = (k + 1) as f64 / 10.0;
            let f = *b as f64 / n as f64;
            assert!((f - u).abs() <= 3.0 * se(u, n) + 1e-12, "u={u}: {f}");
        }
        let p = 2.0 * alpha / 3.0;
        let f = low_min as f64 / n as f64;
        assert!((f - p).abs() <= 3.0 * se(p, n));
    }

    #[test]
    fn independent_null_marginals() {
        let n = 20_000;
        let sc = Scenario::Equicorrelated {
            s: 3,
            true_nulls: 3,
            rho: 0.5,
            shift: 0.0,
            independent_false: false,
        };
        for scenario in [Scenario::independent(3, 3, AltLaw::Power { a: 3.0 }), sc] {
            let sampler = scenario.sampler().unwrap();
            let mut counts = [[0usize; 9]; 3];
            for t in 0..n {
                let smp = sampler.draw(&mut trial_rng(2, t as u64));
                for (j, row) in counts.iter_mut().enumerate() {
                    for (k, c) in row.iter_mut().enumerate() {
                        if smp.pvalues.values()[j] <= (k + 1) as f64 / 10.0 {
                            *c += 1;
                        }
                    }
                }
            }
            for row in counts {
                for (k, c) in row.iter().enumerate() {
                    let u = (k + 1) as f64 / 10.0;
                    let f = *c as f64 / n as f64;
                    assert!(f <= u + 3.0 * se(u, n), "{}: u={u} f={f}", scenario.name());
                }
            }
        }
    }

    #[test]
    fn power_law_is_stochastically_small() {
        let mut rng = trial_rng(1, 1);
        let law = AltLaw::Power { a: 4.0 };
        let n = 10_000;
        let small = (0..n).filter(|_| law.draw(&mut rng) <= 0.1).count();
        // P{U^4 <= 0.1} = 0.1^(1/4) = 0.562
        assert!((small as f64 / n as f64 - 0.1f64.powf(0.25)).abs() < 0.02);
    }
}
