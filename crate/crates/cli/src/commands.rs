use std::env;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

use stepdown::constants::{build, d_value};
use stepdown::procedures::run;
use stepdown::reproduce;
use stepdown::scenarios::example31_betas;
use stepdown::simulation::{self, SimulationConfig};
use stepdown::{AltLaw, ControlParams, CriticalSequence, Gamma, Mode, PValueSet, Recipe, Scenario};

use crate::format::g6;
use crate::input::{read_numbers, read_pvalues};
use crate::{ApplyArgs, MethodArgs, SimulateArgs};

pub const SCHEMA_VERSION: u32 = 1;
const DEFAULT_TRIALS: u64 = 10_000;
const DEFAULT_SEED: u64 = 1;

fn fill<T: FromStr>(slot: &mut Option<T>, key: &str, value: &str) -> Result<()>
where
    T::Err: std::fmt::Display,
{
    if slot.is_none() {
        let v = value
            .parse()
            .map_err(|e| anyhow!("config key {key}: invalid value {value:?}: {e}"))?;
        *slot = Some(v);
    }
    Ok(())
}

fn merge_method_key(a: &mut MethodArgs, key: &str, value: &str) -> Result<bool> {
    match key {
        "method" => fill(&mut a.method, key, value)?,
        "s" => fill(&mut a.s, key, value)?,
        "alpha" => fill(&mut a.alpha, key, value)?,
        "gamma" => fill(&mut a.gamma, key, value)?,
        "k" => fill(&mut a.k, key, value)?,
        "deltas" => fill(&mut a.deltas, key, value)?,
        _ => return Ok(false),
    }
    Ok(true)
}

fn unknown(key: &str, command: &str) -> anyhow::Error {
    anyhow!("unknown config key {key:?} for {command}")
}

pub fn merge_method(a: &mut MethodArgs, config: &[(String, String)]) -> Result<()> {
    for (k, v) in config {
        if !merge_method_key(a, k, v)? {
            return Err(unknown(k, "constants"));
        }
    }
    Ok(())
}

pub fn merge_apply(a: &mut ApplyArgs, config: &[(String, String)]) -> Result<()> {
    for (k, v) in config {
        if merge_method_key(&mut a.method, k, v)? {
            continue;
        }
        match k.as_str() {
            "pvalues" => fill(&mut a.pvalues, k, v)?,
            "mode" => fill(&mut a.mode, k, v)?,
            _ => return Err(unknown(k, "apply")),
        }
    }
    Ok(())
}

pub fn merge_simulate(a: &mut SimulateArgs, config: &[(String, String)]) -> Result<()> {
    for (k, v) in config {
        if merge_method_key(&mut a.method, k, v)? {
            continue;
        }
        match k.as_str() {
            "scenario" => fill(&mut a.scenario, k, v)?,
            "I" => fill(&mut a.true_nulls, k, v)?,
            "rho" => fill(&mut a.rho, k, v)?,
            "shift" => fill(&mut a.shift, k, v)?,
            "independent-false" => {
                let mut flag = None;
                fill::<bool>(&mut flag, k, v)?;
                a.independent_false |= flag.unwrap_or(false);
            }
            "alt" => fill(&mut a.alt, k, v)?,
            "alt-param" => fill(&mut a.alt_param, k, v)?,
            "t" => fill(&mut a.t, k, v)?,
            "betas" => fill(&mut a.betas, k, v)?,
            "mode" => fill(&mut a.mode, k, v)?,
            "trials" => fill(&mut a.trials, k, v)?,
            "seed" => fill(&mut a.seed, k, v)?,
            "workers" => fill(&mut a.workers, k, v)?,
            _ => return Err(unknown(k, "simulate")),
        }
    }
    Ok(())
}

pub fn reject_config(config: &[(String, String)], command: &str) -> Result<()> {
    match config.first() {
        Some((k, _)) => Err(unknown(k, command)),
        None => Ok(()),
    }
}

fn env_default<T: FromStr>(var: &str) -> Result<Option<T>> {
    match env::var(var) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| anyhow!("{var}={v:?} is not a valid count")),
        Err(_) => Ok(None),
    }
}

/// Decimal strings only; the library also takes `p/q`, the command line does not.
fn parse_gamma(text: &str) -> Result<Gamma> {
    if text.contains('/') {
        bail!("--gamma must be a decimal string such as 0.1, got {text:?}");
    }
    Ok(text.parse()?)
}

fn recipe(a: &MethodArgs) -> Result<Recipe> {
    let tag = a.method.as_deref().context("--method is required")?;
    Ok(tag.parse()?)
}

fn mode(text: Option<&str>) -> Result<Mode> {
    Ok(text
        .map(Mode::from_str)
        .transpose()?
        .unwrap_or(Mode::Stepdown))
}

fn params(a: &MethodArgs, s: usize, recipe: Option<Recipe>) -> Result<ControlParams> {
    let alpha = a.alpha.context("--alpha is required")?;
    let mut p = ControlParams::new(s, alpha)?;
    match &a.gamma {
        Some(g) => p = p.with_gamma(parse_gamma(g)?),
        None if recipe.is_some_and(|r| r.needs_gamma()) => {
            bail!("--gamma is required for {}", recipe.unwrap())
        }
        None => {}
    }
    if let Some(k) = a.k {
        p = p.with_k(k)?;
    } else if recipe == Some(Recipe::Kfwer) {
        bail!("--k is required for kfwer");
    }
    Ok(p)
}

fn deltas(a: &MethodArgs, recipe: Recipe) -> Result<Option<Vec<f64>>> {
    match (&a.deltas, recipe) {
        (Some(path), _) => Ok(Some(read_numbers(path)?)),
        (None, Recipe::RescaledCustom) => bail!("--deltas is required for rescaled-custom"),
        (None, _) => Ok(None),
    }
}

fn sequence(a: &MethodArgs) -> Result<CriticalSequence> {
    let recipe = recipe(a)?;
    let s = a.s.context("--s is required")?;
    let p = params(a, s, Some(recipe))?;
    let deltas = deltas(a, recipe)?;
    Ok(build(recipe, &p, deltas.as_deref())?)
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    Ok(String::from_utf8(
        w.into_inner().map_err(|e| anyhow!("{e}"))?,
    )?)
}

pub fn constants(a: &MethodArgs) -> Result<String> {
    let c = sequence(a)?;
    csv_text(
        &["i", "alpha_i"],
        c.values
            .iter()
            .enumerate()
            .map(|(k, v)| vec![(k + 1).to_string(), g6(*v)]),
    )
}

#[derive(Debug, Serialize)]
struct TraceRow {
    rank: usize,
    id: String,
    p: f64,
    threshold: f64,
    rejected: bool,
}

#[derive(Debug, Serialize)]
struct ApplyReport {
    schema_version: u32,
    method: Recipe,
    mode: Mode,
    d_used: Option<f64>,
    num_rejected: usize,
    rejected_ids: Vec<String>,
    thresholds: Vec<f64>,
    trace: Vec<TraceRow>,
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

pub fn apply(a: &ApplyArgs) -> Result<String> {
    let path = a.pvalues.as_ref().context("--pvalues is required")?;
    let file = read_pvalues(path)?;
    let mut m = a.method.clone();
    match m.s {
        Some(s) if s != file.values.len() => bail!(
            "--s {s} disagrees with the {} p-values in {}",
            file.values.len(),
            path.display()
        ),
        _ => m.s = Some(file.values.len()),
    }
    let c = sequence(&m)?;
    let mut pv = PValueSet::new(file.values)?;
    if let Some(ids) = file.ids {
        pv = pv.with_ids(ids)?;
    }
    let out = run(&pv, &c, mode(a.mode.as_deref())?)?;
    let report = ApplyReport {
        schema_version: SCHEMA_VERSION,
        method: c.recipe,
        mode: out.mode,
        d_used: c.d_used,
        num_rejected: out.num_rejected,
        rejected_ids: out.rejected.iter().map(|&i| pv.label(i)).collect(),
        thresholds: c.values.clone(),
        trace: out
            .trace
            .iter()
            .map(|t| TraceRow {
                rank: t.rank,
                id: pv.label(t.index),
                p: t.p,
                threshold: t.threshold,
                rejected: t.rejected,
            })
            .collect(),
    };
    json(&report)
}

pub fn table(which: u8) -> Result<String> {
    let rows = reproduce::table(which)?;
    csv_text(
        &["s", "gamma", "D", "C_or_bound", "ratio"],
        rows.iter().map(|r| r.printed().to_vec()),
    )
}

pub fn figure(which: u8) -> Result<String> {
    let header = reproduce::figure_columns(which)?;
    let rows = reproduce::figure(which)?;
    csv_text(
        &header,
        rows.iter()
            .map(|r| vec![r.i.to_string(), g6(r.a), g6(r.b), g6(r.ratio)]),
    )
}

fn alt_law(a: &SimulateArgs) -> Result<AltLaw> {
    match a.alt.as_deref().unwrap_or("power") {
        "power" => Ok(AltLaw::Power {
            a: a.alt_param.unwrap_or(10.0),
        }),
        "point" => Ok(AltLaw::PointMass {
            at: a.alt_param.unwrap_or(0.0),
        }),
        other => bail!("unknown --alt {other:?}; expected power or point"),
    }
}

fn betas(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|b| {
            b.trim()
                .parse::<f64>()
                .map_err(|_| anyhow!("--betas: {b:?} is not a number"))
        })
        .collect()
}

fn scenario(a: &SimulateArgs) -> Result<Scenario> {
    let name = a.scenario.as_deref().context("--scenario is required")?;
    let need_s = || a.method.s.context("--s is required for this scenario");
    let alpha = a.method.alpha.context("--alpha is required")?;
    let sc = match name {
        "independent" => {
            let s = need_s()?;
            Scenario::independent(s, a.true_nulls.unwrap_or(s), alt_law(a)?)
        }
        "equicorrelated" => {
            let s = need_s()?;
            Scenario::Equicorrelated {
                s,
                true_nulls: a.true_nulls.unwrap_or(s),
                rho: a.rho.context("--rho is required for equicorrelated")?,
                shift: a.shift.unwrap_or(3.0),
                independent_false: a.independent_false,
            }
        }
        "lemma31" => {
            let t = a.t.or(a.method.s).context("--t is required for lemma31")?;
            let betas = match &a.betas {
                Some(b) => betas(b)?,
                None => example31_betas(alpha).to_vec(),
            };
            Scenario::Lemma31 { t, betas }
        }
        "example31" => Scenario::Example31 { alpha },
        "example41" => Scenario::Example41 { alpha },
        "remark31" => {
            let s = a.method.s.unwrap_or(1000);
            let gamma = parse_gamma(
                a.method
                    .gamma
                    .as_deref()
                    .context("--gamma is required for remark31")?,
            )?;
            let true_nulls = match a.true_nulls {
                Some(t) => t,
                None => {
                    let p = ControlParams::new(s, alpha)?.with_gamma(gamma);
                    d_value(&p, None)?.argmax_i
                }
            };
            Scenario::Remark31 {
                s,
                gamma,
                true_nulls,
                alpha,
            }
        }
        other => bail!(
            "unknown scenario {other:?}; expected independent, equicorrelated, lemma31, \
             example31, remark31 or example41"
        ),
    };
    sc.validate()?;
    Ok(sc)
}

pub fn simulate(a: &SimulateArgs) -> Result<String> {
    let sc = scenario(a)?;
    let recipe = recipe(&a.method)?;
    let s = a.method.s.unwrap_or(sc.s());
    let p = params(&a.method, s, Some(recipe))?;
    let trials = match a.trials {
        Some(t) => t,
        None => env_default("STEPDOWN_TRIALS")?.unwrap_or(DEFAULT_TRIALS),
    };
    let workers = match a.workers {
        Some(w) => Some(w),
        None => env_default("STEPDOWN_WORKERS")?,
    };
    let cfg = SimulationConfig {
        scenario: sc,
        recipe,
        deltas: deltas(&a.method, recipe)?,
        mode: mode(a.mode.as_deref())?,
        params: p,
        trials,
        seed: a.seed.unwrap_or(DEFAULT_SEED),
        workers,
    };
    json(&simulation::run(&cfg)?)
}
