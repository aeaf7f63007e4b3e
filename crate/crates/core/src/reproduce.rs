//! Numeric tables of `D(gamma, s)` and comparison data between constant
//! sequences.

use serde::Serialize;

use crate::constants::{
    d_value, eta_bound, eta_constants, eta_sequence, fdp_base_constants, fdp_improved_constants,
    fdr_stepdown_constants, harmonic, EtaVariant,
};
use crate::error::{param, Result};
use crate::params::{ControlParams, Gamma};

/// The `(s, gamma)` grid shared by both tables.
pub const TABLE_GRID: [(usize, &str); 23] = [
    (100, "0.01"),
    (250, "0.01"),
    (500, "0.01"),
    (1000, "0.01"),
    (2000, "0.01"),
    (5000, "0.01"),
    (25, "0.05"),
    (50, "0.05"),
    (100, "0.05"),
    (250, "0.05"),
    (500, "0.05"),
    (1000, "0.05"),
    (2000, "0.05"),
    (5000, "0.05"),
    (10, "0.1"),
    (25, "0.1"),
    (50, "0.1"),
    (100, "0.1"),
    (250, "0.1"),
    (500, "0.1"),
    (1000, "0.1"),
    (2000, "0.1"),
    (5000, "0.1"),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub s: usize,
    pub gamma: String,
    /// `D(gamma, s)`.
    pub d: f64,
    /// `C_{floor(gamma s) + 1}` in table 1, `(1/gamma) max{C_floor(gamma s), 1}` in table 2.
    pub c_or_bound: f64,
    /// `c_or_bound / d`.
    pub ratio: f64,
}

impl TableRow {
    /// The row as printed: every number through [`printed`].
    pub fn printed(&self) -> [String; 5] {
        [
            self.s.to_string(),
            self.gamma.clone(),
            printed(self.d),
            printed(self.c_or_bound),
            printed(self.ratio),
        ]
    }
}

/// Five significant figures, halves away from zero, trailing zeros dropped.
pub fn printed(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = 5 - 1 - x.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits);
    let mut r = (x * scale).round() / scale;
    // A carry such as 9.99995 -> 10 gains a digit; redo at the new magnitude.
    if r.abs().log10().floor() as i32 != x.abs().log10().floor() as i32 {
        let scale = 10f64.powi(digits - 1);
        r = (x * scale).round() / scale;
    }
    let mut s = format!("{:.*}", digits.max(0) as usize, r);
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    s
}

fn row_params(s: usize, gamma: &str) -> Result<ControlParams> {
    ControlParams::fdp(s, gamma, 0.05)
}

/// `D(gamma, s)` of the base FDP constants against `C_{floor(gamma s) + 1}`.
pub fn table1() -> Result<Vec<TableRow>> {
    TABLE_GRID
        .iter()
        .map(|&(s, g)| {
            let p = row_params(s, g)?;
            let d = d_value(&p, None)?.d;
            let c = harmonic(p.gamma()?.floor_mul(s) + 1);
            Ok(TableRow {
                s,
                gamma: g.to_string(),
                d,
                c_or_bound: c,
                ratio: c / d,
            })
        })
        .collect()
}

/// `D(gamma, s)` of `eta_i = i / s` against `(1/gamma) max{C_floor(gamma s), 1}`.
pub fn table2() -> Result<Vec<TableRow>> {
    TABLE_GRID
        .iter()
        .map(|&(s, g)| {
            let p = row_params(s, g)?;
            let d = d_value(&p, Some(&eta_sequence(s)))?.d;
            let b = eta_bound(s, p.gamma()?);
            Ok(TableRow {
                s,
                gamma: g.to_string(),
                d,
                c_or_bound: b,
                ratio: b / d,
            })
        })
        .collect()
}

pub fn table(which: u8) -> Result<Vec<TableRow>> {
    match which {
        1 => table1(),
        2 => table2(),
        _ => param(format!("no table {which}; expected 1 or 2")),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureRow {
    pub i: usize,
    pub a: f64,
    pub b: f64,
    /// `a / b`.
    pub ratio: f64,
}

pub const FIGURE_S: usize = 100;
pub const FIGURE_ALPHA: f64 = 0.05;

/// Column names of each figure's data, after `i`.
pub fn figure_columns(which: u8) -> Result<[&'static str; 4]> {
    match which {
        1 => Ok(["i", "alpha_improved", "eta_prime", "ratio"]),
        2 => Ok(["i", "alpha_fdp", "alpha_fdr_tuned_for_fdp", "ratio"]),
        3 => Ok(["i", "alpha_fdp_tuned_for_fdr", "alpha_fdr", "ratio"]),
        _ => param(format!("no figure {which}; expected 1, 2 or 3")),
    }
}

fn zip_rows(a: &[f64], b: &[f64]) -> Vec<FigureRow> {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(k, (&a, &b))| FigureRow {
            i: k + 1,
            a,
            b,
            ratio: a / b,
        })
        .collect()
}

/// Improved FDP constants against the `eta_i = i / s` constants rescaled by
/// their own `D`, at `s = 100`, `gamma = 0.1`, `alpha = 0.05`.
pub fn figure1() -> Result<Vec<FigureRow>> {
    let p = ControlParams::fdp(FIGURE_S, "0.1", FIGURE_ALPHA)?;
    let a = fdp_improved_constants(&p)?;
    let b = eta_constants(&p, EtaVariant::I)?;
    Ok(zip_rows(&a.values, &b.values))
}

/// Base FDP constants at `gamma = 0.1`, `alpha = 0.05` against the FDR
/// constants at level `alpha gamma`, which also give `P{FDP > gamma} <= alpha`.
pub fn figure2() -> Result<Vec<FigureRow>> {
    let p = ControlParams::fdp(FIGURE_S, "0.1", FIGURE_ALPHA)?;
    let a = fdp_base_constants(&p)?;
    let level = FIGURE_ALPHA * p.gamma()?.to_f64();
    let b = fdr_stepdown_constants(&ControlParams::new(FIGURE_S, level)?, false);
    Ok(zip_rows(&a.values, &b.values))
}

/// Base FDP constants at `gamma = alpha / 2` and level `alpha / (2 - alpha)`,
/// which give `FDR <= alpha`, against the FDR constants at `alpha = 0.05`.
pub fn figure3() -> Result<Vec<FigureRow>> {
    let gamma = Gamma::from_fraction(1, 40)?;
    let level = FIGURE_ALPHA / (2.0 - FIGURE_ALPHA);
    let p = ControlParams::new(FIGURE_S, level)?.with_gamma(gamma);
    let a = fdp_base_constants(&p)?;
    let b = fdr_stepdown_constants(&ControlParams::new(FIGURE_S, FIGURE_ALPHA)?, false);
    Ok(zip_rows(&a.values, &b.values))
}

pub fn figure(which: u8) -> Result<Vec<FigureRow>> {
    match which {
        1 => figure1(),
        2 => figure2(),
        3 => figure3(),
        _ => param(format!("no figure {which}; expected 1, 2 or 3")),
    }
}
