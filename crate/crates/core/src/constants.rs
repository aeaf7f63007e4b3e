//! Critical-value sequences and the rescaling quantities `C_j`, `beta_m`,
//! `N`, `S` and `D`.
//!
//! Sequences are stored 0-based (`values[0]` is the first threshold) but all
//! public index arguments such as `true_nulls` or `m` use the usual 1-based
//! counting of steps and hypotheses.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::params::{ratio_to_f64, ControlParams, Gamma, Rational};

/// Which construction produced a [`CriticalSequence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Recipe {
    Holm,
    Kfwer,
    FdpBase,
    FdpLr,
    FdpImproved,
    RescaledCustom,
    EtaI,
    EtaIi,
    FdrStepdown,
    FdrConservative,
    BhStepup,
}

impl Recipe {
    pub const ALL: [Recipe; 11] = [
        Recipe::Holm,
        Recipe::Kfwer,
        Recipe::FdpBase,
        Recipe::FdpLr,
        Recipe::FdpImproved,
        Recipe::RescaledCustom,
        Recipe::EtaI,
        Recipe::EtaIi,
        Recipe::FdrStepdown,
        Recipe::FdrConservative,
        Recipe::BhStepup,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Recipe::Holm => "holm",
            Recipe::Kfwer => "kfwer",
            Recipe::FdpBase => "fdp-base",
            Recipe::FdpLr => "fdp-lr",
            Recipe::FdpImproved => "fdp-improved",
            Recipe::RescaledCustom => "rescaled-custom",
            Recipe::EtaI => "eta-i",
            Recipe::EtaIi => "eta-ii",
            Recipe::FdrStepdown => "fdr-stepdown",
            Recipe::FdrConservative => "fdr-conservative",
            Recipe::BhStepup => "bh-stepup",
        }
    }

    /// Whether the recipe reads `gamma`.
    pub fn needs_gamma(&self) -> bool {
        matches!(
            self,
            Recipe::FdpBase
                | Recipe::FdpLr
                | Recipe::FdpImproved
                | Recipe::RescaledCustom
                | Recipe::EtaI
                | Recipe::EtaIi
        )
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Recipe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tag = s.trim().to_ascii_lowercase();
        let r = match tag.as_str() {
            "fdr-sd" => Recipe::FdrStepdown,
            "fdr-sd-conservative" => Recipe::FdrConservative,
            "bh" => Recipe::BhStepup,
            "eta-1" => Recipe::EtaI,
            "eta-2" => Recipe::EtaIi,
            other => match Recipe::ALL.iter().find(|r| r.as_str() == other) {
                Some(r) => *r,
                None => return param(format!("unknown method {s:?}")),
            },
        };
        Ok(r)
    }
}

/// A nondecreasing list of rejection thresholds in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalSequence {
    pub values: Vec<f64>,
    pub recipe: Recipe,
    pub params: ControlParams,
    /// The divisor (`D`, `C_j`, ...) applied to the unscaled sequence.
    pub d_used: Option<f64>,
    /// Factor applied to user deltas whose maximum exceeded 1.
    pub delta_scale: Option<f64>,
}

impl CriticalSequence {
    fn new(values: Vec<f64>, recipe: Recipe, params: ControlParams) -> Self {
        CriticalSequence {
            values,
            recipe,
            params,
            d_used: None,
            delta_scale: None,
        }
    }

    fn divided(mut self, recipe: Recipe, d: f64) -> Self {
        for v in &mut self.values {
            *v /= d;
        }
        self.recipe = recipe;
        self.d_used = Some(d);
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Threshold for step `i` (1-based).
    pub fn at(&self, i: usize) -> f64 {
        self.values[i - 1]
    }

    pub fn is_monotone(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn in_unit_interval(&self) -> bool {
        self.values.iter().all(|v| (0.0..=1.0).contains(v))
    }
}

/// One `|I|` evaluated while searching for `D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SPoint {
    pub true_nulls: usize,
    pub n: usize,
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DResult {
    pub d: f64,
    /// Smallest `|I|` attaining the maximum.
    pub argmax_i: usize,
    pub per_i: Option<Vec<SPoint>>,
}

pub fn holm_constants(p: &ControlParams) -> CriticalSequence {
    let s = p.s as f64;
    let values = (1..=p.s).map(|i| p.alpha / (s - i as f64 + 1.0)).collect();
    CriticalSequence::new(values, Recipe::Holm, *p)
}

/// k-FWER constants: `k alpha / s` up to step `k`, then `k alpha / (s + k - i)`.
pub fn kfwer_constants(p: &ControlParams) -> Result<CriticalSequence> {
    if p.k == 0 || p.k > p.s {
        return param(format!("k must satisfy 1 <= k <= s = {}, got {}", p.s, p.k));
    }
    let k = p.k as f64;
    let s = p.s as f64;
    let values = (1..=p.s)
        .map(|i| {
            if i <= p.k {
                k * p.alpha / s
            } else {
                k * p.alpha / (s + k - i as f64)
            }
        })
        .collect();
    Ok(CriticalSequence::new(values, Recipe::Kfwer, *p))
}

/// Harmonic number `C_j = 1 + 1/2 + ... + 1/j`, with `C_0 = 0`.
pub fn harmonic(j: usize) -> f64 {
    // Smallest terms first.
    (1..=j).rev().map(|i| 1.0 / i as f64).sum()
}

fn base_value(s: usize, gamma: Gamma, alpha: f64, i: usize) -> f64 {
    let f = gamma.floor_mul(i);
    (f + 1) as f64 * alpha / (s + f + 1 - i) as f64
}

/// `(floor(gamma i) + 1) alpha / (s + floor(gamma i) + 1 - i)`.
pub fn fdp_base_constants(p: &ControlParams) -> Result<CriticalSequence> {
    let gamma = p.gamma()?;
    let values = (1..=p.s)
        .map(|i| base_value(p.s, gamma, p.alpha, i))
        .collect();
    Ok(CriticalSequence::new(values, Recipe::FdpBase, *p))
}

/// The base FDP constants divided by `C_{floor(gamma s) + 1}`.
pub fn fdp_lr_constants(p: &ControlParams) -> Result<CriticalSequence> {
    let gamma = p.gamma()?;
    let c = harmonic(gamma.floor_mul(p.s) + 1);
    Ok(fdp_base_constants(p)?.divided(Recipe::FdpLr, c))
}

fn check_deltas(s: usize, deltas: &[f64]) -> Result<()> {
    if deltas.len() != s {
        return Err(Error::Length {
            expected: s,
            actual: deltas.len(),
        });
    }
    if let Some((i, d)) = deltas
        .iter()
        .enumerate()
        .find(|(_, d)| !(0.0..=1.0).contains(*d))
    {
        return param(format!("delta {} = {} lies outside [0, 1]", i + 1, d));
    }
    if let Some(i) = deltas.windows(2).position(|w| w[0] > w[1]) {
        return param(format!(
            "deltas must be nondecreasing: delta {} = {} > delta {} = {}",
            i + 1,
            deltas[i],
            i + 2,
            deltas[i + 1]
        ));
    }
    Ok(())
}

fn check_true_nulls(p: &ControlParams, true_nulls: usize) -> Result<()> {
    if true_nulls == 0 || true_nulls > p.s {
        return param(format!(
            "|I| must satisfy 1 <= |I| <= s = {}, got {true_nulls}",
            p.s
        ));
    }
    Ok(())
}

/// Evaluates `beta_m` for fixed `(s, gamma, |I|)` without revalidating.
struct BetaEval<'a> {
    s: usize,
    gamma: Gamma,
    true_nulls: usize,
    top: usize,
    deltas: Option<&'a [f64]>,
}

impl<'a> BetaEval<'a> {
    fn new(s: usize, gamma: Gamma, true_nulls: usize, deltas: Option<&'a [f64]>) -> Self {
        BetaEval {
            s,
            gamma,
            true_nulls,
            top: gamma.floor_mul(s) + 1,
            deltas,
        }
    }

    fn at(&self, m: usize) -> f64 {
        match self.deltas {
            Some(d) => {
                let k = self
                    .s
                    .min(self.s + m - self.true_nulls)
                    .min(self.gamma.ceil_div(m) - 1);
                d[k - 1]
            }
            None if m == self.top => m as f64 / self.true_nulls as f64,
            None => {
                let denom = (self.s + m + 1 - self.gamma.ceil_div(m)).max(self.true_nulls);
                m as f64 / denom as f64
            }
        }
    }

    fn n_cap(&self) -> usize {
        self.top
            .min(self.true_nulls)
            .min(self.gamma.floor_tail_bound(self.s, self.true_nulls) + 1)
    }

    /// `|I| * sum_{i <= upto} (beta_i - beta_{i-1}) / i`.
    fn weighted_sum(&self, upto: usize) -> f64 {
        let mut prev = 0.0;
        let mut acc = 0.0;
        for i in 1..=upto {
            let b = self.at(i);
            acc += (b - prev) / i as f64;
            prev = b;
        }
        self.true_nulls as f64 * acc
    }
}

/// `(beta_1, ..., beta_{floor(gamma s) + 1})` for `|I| = true_nulls`.
///
/// Without deltas the betas come from the base FDP constants at level one;
/// with deltas `beta_m = delta_k` with `k = min{s, s + m - |I|, ceil(m/gamma) - 1}`.
pub fn beta_sequence(
    p: &ControlParams,
    deltas: Option<&[f64]>,
    true_nulls: usize,
) -> Result<Vec<f64>> {
    let gamma = p.gamma()?;
    check_true_nulls(p, true_nulls)?;
    if let Some(d) = deltas {
        check_deltas(p.s, d)?;
    }
    let eval = BetaEval::new(p.s, gamma, true_nulls, deltas);
    Ok((1..=eval.top).map(|m| eval.at(m)).collect())
}

/// `N = min{floor(gamma s) + 1, |I|, floor(gamma((s - |I|)/(1 - gamma) + 1)) + 1}`.
pub fn n_cap(p: &ControlParams, true_nulls: usize) -> Result<usize> {
    let gamma = p.gamma()?;
    check_true_nulls(p, true_nulls)?;
    Ok(BetaEval::new(p.s, gamma, true_nulls, None).n_cap())
}

/// `S(gamma, s, |I|)`.
pub fn s_value(p: &ControlParams, deltas: Option<&[f64]>, true_nulls: usize) -> Result<f64> {
    let gamma = p.gamma()?;
    check_true_nulls(p, true_nulls)?;
    if let Some(d) = deltas {
        check_deltas(p.s, d)?;
    }
    let eval = BetaEval::new(p.s, gamma, true_nulls, deltas);
    Ok(eval.weighted_sum(eval.n_cap()))
}

/// The same weighted sum as [`s_value`] truncated after `upto` terms, which is
/// the union bound of the sharp all-null law for thresholds `beta_1..beta_upto`.
pub fn truncated_s_value(
    p: &ControlParams,
    deltas: Option<&[f64]>,
    true_nulls: usize,
    upto: usize,
) -> Result<f64> {
    let gamma = p.gamma()?;
    check_true_nulls(p, true_nulls)?;
    if let Some(d) = deltas {
        check_deltas(p.s, d)?;
    }
    let eval = BetaEval::new(p.s, gamma, true_nulls, deltas);
    if upto > eval.top {
        return param(format!(
            "only {} betas are defined, asked for {upto}",
            eval.top
        ));
    }
    Ok(eval.weighted_sum(upto))
}

fn d_search(p: &ControlParams, deltas: Option<&[f64]>, keep_profile: bool) -> Result<DResult> {
    let gamma = p.gamma()?;
    if let Some(d) = deltas {
        check_deltas(p.s, d)?;
    }
    let mut best = DResult {
        d: f64::NEG_INFINITY,
        argmax_i: 0,
        per_i: keep_profile.then(|| Vec::with_capacity(p.s)),
    };
    for t in 1..=p.s {
        let eval = BetaEval::new(p.s, gamma, t, deltas);
        let n = eval.n_cap();
        let s = eval.weighted_sum(n);
        if s > best.d {
            best.d = s;
            best.argmax_i = t;
        }
        if let Some(profile) = best.per_i.as_mut() {
            profile.push(SPoint {
                true_nulls: t,
                n,
                s,
            });
        }
    }
    Ok(best)
}

/// `D(gamma, s) = max over |I| in 1..=s of S(gamma, s, |I|)`.
pub fn d_value(p: &ControlParams, deltas: Option<&[f64]>) -> Result<DResult> {
    d_search(p, deltas, false)
}

/// [`d_value`] keeping every `(|I|, N, S)` triple.
pub fn d_profile(p: &ControlParams, deltas: Option<&[f64]>) -> Result<DResult> {
    d_search(p, deltas, true)
}

/// The base FDP constants divided by `D(gamma, s)`.
pub fn fdp_improved_constants(p: &ControlParams) -> Result<CriticalSequence> {
    let d = d_value(p, None)?.d;
    Ok(fdp_base_constants(p)?.divided(Recipe::FdpImproved, d))
}

/// `alpha delta_i / D(gamma, s)` where `D` is computed from the deltas.
///
/// Deltas whose maximum exceeds one are first divided by that maximum; the
/// factor is reported in `delta_scale`. The resulting constants do not depend
/// on it since `D` scales linearly in the deltas.
pub fn rescale_custom(p: &ControlParams, deltas: &[f64]) -> Result<CriticalSequence> {
    if deltas.len() != p.s {
        return Err(Error::Length {
            expected: p.s,
            actual: deltas.len(),
        });
    }
    if deltas.iter().any(|d| !d.is_finite() || *d < 0.0) {
        return param("deltas must be finite and nonnegative");
    }
    let max = deltas.iter().cloned().fold(0.0, f64::max);
    let (scaled, factor) = if max > 1.0 {
        (
            deltas.iter().map(|d| d / max).collect::<Vec<_>>(),
            Some(1.0 / max),
        )
    } else {
        (deltas.to_vec(), None)
    };
    check_deltas(p.s, &scaled)?;
    let d = d_value(p, Some(&scaled))?.d;
    if d.is_nan() || d <= 0.0 {
        return param("deltas are identically zero on every relevant index; D = 0");
    }
    let values = scaled.iter().map(|x| p.alpha * x / d).collect();
    let mut seq = CriticalSequence::new(values, Recipe::RescaledCustom, *p);
    seq.d_used = Some(d);
    seq.delta_scale = factor;
    Ok(seq)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EtaVariant {
    /// Divide by `D(gamma, s)` computed from `eta_i = i / s`.
    I,
    /// Divide by the closed-form bound `max{C_floor(gamma s), 1} / gamma`.
    Ii,
}

pub fn eta_sequence(s: usize) -> Vec<f64> {
    (1..=s).map(|i| i as f64 / s as f64).collect()
}

/// `(1/gamma) max{C_floor(gamma s), 1}`.
pub fn eta_bound(s: usize, gamma: Gamma) -> f64 {
    harmonic(gamma.floor_mul(s)).max(1.0) / gamma.to_f64()
}

pub fn eta_constants(p: &ControlParams, variant: EtaVariant) -> Result<CriticalSequence> {
    let gamma = p.gamma()?;
    let eta = eta_sequence(p.s);
    let (recipe, d) = match variant {
        EtaVariant::I => (Recipe::EtaI, d_value(p, Some(&eta))?.d),
        EtaVariant::Ii => (Recipe::EtaIi, eta_bound(p.s, gamma)),
    };
    let values = eta.iter().map(|e| p.alpha * e / d).collect();
    let mut seq = CriticalSequence::new(values, recipe, *p);
    seq.d_used = Some(d);
    Ok(seq)
}

/// `min{s alpha / (s - i + 1)^2, 1}`, or `alpha min{s / (s - i + 1)^2, 1}`
/// when `conservative`.
pub fn fdr_stepdown_constants(p: &ControlParams, conservative: bool) -> CriticalSequence {
    let s = p.s as f64;
    let values = (1..=p.s)
        .map(|i| {
            let r = s / (s - i as f64 + 1.0).powi(2);
            if conservative {
                p.alpha * r.min(1.0)
            } else {
                (p.alpha * r).min(1.0)
            }
        })
        .collect();
    let recipe = if conservative {
        Recipe::FdrConservative
    } else {
        Recipe::FdrStepdown
    };
    CriticalSequence::new(values, recipe, *p)
}

/// `i alpha / s`, to be used with [`crate::procedures::stepup`].
pub fn bh_stepup_constants(p: &ControlParams) -> CriticalSequence {
    let s = p.s as f64;
    let values = (1..=p.s).map(|i| i as f64 * p.alpha / s).collect();
    CriticalSequence::new(values, Recipe::BhStepup, *p)
}

/// Build any recipe. `deltas` is only read by [`Recipe::RescaledCustom`].
pub fn build(
    recipe: Recipe,
    p: &ControlParams,
    deltas: Option<&[f64]>,
) -> Result<CriticalSequence> {
    p.validate()?;
    match recipe {
        Recipe::Holm => Ok(holm_constants(p)),
        Recipe::Kfwer => kfwer_constants(p),
        Recipe::FdpBase => fdp_base_constants(p),
        Recipe::FdpLr => fdp_lr_constants(p),
        Recipe::FdpImproved => fdp_improved_constants(p),
        Recipe::RescaledCustom => match deltas {
            Some(d) => rescale_custom(p, d),
            None => param("rescaled-custom needs a deltas sequence"),
        },
        Recipe::EtaI => eta_constants(p, EtaVariant::I),
        Recipe::EtaIi => eta_constants(p, EtaVariant::Ii),
        Recipe::FdrStepdown => Ok(fdr_stepdown_constants(p, false)),
        Recipe::FdrConservative => Ok(fdr_stepdown_constants(p, true)),
        Recipe::BhStepup => Ok(bh_stepup_constants(p)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelDirection {
    /// FDR level `q` gives `P{FDP > gamma} <= q / gamma`.
    FdrToFdp,
    /// `P{FDP > gamma} <= alpha` gives `FDR <= alpha (1 - gamma) + gamma`.
    FdpToFdr,
}

/// Translate an error level between FDR and FDP control via Markov's
/// inequality and its reverse. `gamma` may be zero for `FdpToFdr`.
pub fn convert_levels(direction: LevelDirection, gamma: Rational, level: f64) -> Result<f64> {
    if gamma < Rational::zero() || gamma >= Rational::from_integer(1) {
        return param("gamma must lie in [0, 1)");
    }
    if !(0.0..=1.0).contains(&level) {
        return param(format!("level must lie in [0, 1], got {level}"));
    }
    let g = ratio_to_f64(&gamma);
    match direction {
        LevelDirection::FdrToFdp => {
            if gamma.is_zero() {
                return param("fdr_to_fdp needs gamma > 0");
            }
            Ok((level / g).min(1.0))
        }
        LevelDirection::FdpToFdr => Ok(level * (1.0 - g) + g),
    }
}
