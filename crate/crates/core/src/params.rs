//! Control parameters and the exact rational `gamma`.
//!
//! Every floor and ceiling that involves `gamma` goes through integer
//! arithmetic on the reduced fraction `num/den`, so boundary points such as
//! `0.1 * 10` land exactly on the integer.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{param, Error, Result};

/// An exact rational in `[0, 1)`.
pub type Rational = Ratio<i128>;

/// Correctly rounded when numerator and denominator fit in 53 bits.
pub fn ratio_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Parse a decimal string (`"0.05"`, `".1"`, `"1e-2"` is rejected) or a
/// fraction (`"1/3"`) into an exact rational.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let s = input.trim();
    let bad = |reason: &str| Error::Gamma {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    if s.is_empty() {
        return Err(bad("empty"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| bad("bad numerator"))?;
        let d: i128 = d.trim().parse().map_err(|_| bad("bad denominator"))?;
        if d == 0 {
            return Err(bad("zero denominator"));
        }
        return Ok(Ratio::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("no digits"));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad(
            "expected a plain decimal like 0.1 or a fraction like 1/3",
        ));
    }
    if frac_part.len() > 30 {
        return Err(bad("too many decimal places"));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: i128 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| bad("value out of range"))?
    };
    let denom = 10i128.pow(frac_part.len() as u32);
    let r = Ratio::new(numer, denom);
    Ok(if neg { -r } else { r })
}

/// The FDP tolerance `gamma`, held exactly and constrained to `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gamma(Rational);

impl Gamma {
    pub fn new(value: Rational) -> Result<Self> {
        if value <= Rational::zero() || value >= Rational::from_integer(1) {
            return Err(Error::Gamma {
                input: value.to_string(),
                reason: "must lie strictly between 0 and 1".into(),
            });
        }
        Ok(Gamma(value))
    }

    pub fn from_fraction(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return param("gamma denominator is zero");
        }
        Gamma::new(Ratio::new(num, den))
    }

    pub fn ratio(&self) -> Rational {
        self.0
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.0)
    }

    /// `floor(gamma * n)`.
    pub fn floor_mul(&self, n: usize) -> usize {
        Integer::div_floor(&(self.numer() * n as i128), &self.denom()) as usize
    }

    /// `ceil(m / gamma)`.
    pub fn ceil_div(&self, m: usize) -> usize {
        Integer::div_ceil(&(m as i128 * self.denom()), &self.numer()) as usize
    }

    /// `floor(gamma * ((s - t) / (1 - gamma) + 1))`, the third argument of the
    /// `N` cap, for `t <= s` true nulls.
    pub fn floor_tail_bound(&self, s: usize, t: usize) -> usize {
        let one = Rational::from_integer(1);
        let x = self.0 * (Rational::from_integer((s - t) as i128) / (one - self.0) + one);
        x.floor().to_integer() as usize
    }
}

impl FromStr for Gamma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let r = parse_rational(s)?;
        Gamma::new(r).map_err(|_| Error::Gamma {
            input: s.to_string(),
            reason: "must lie strictly between 0 and 1".into(),
        })
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl Serialize for Gamma {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Number of hypotheses, FDP tolerance, level and k.
///
/// `gamma` is optional because the FWER-type recipes never read it; the
/// FDP recipes fetch it through [`ControlParams::gamma`], which errors when
/// it is missing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ControlParams {
    pub s: usize,
    #[serde(serialize_with = "serialize_opt_gamma")]
    pub gamma: Option<Gamma>,
    pub alpha: f64,
    pub k: usize,
}

fn serialize_opt_gamma<S: Serializer>(
    g: &Option<Gamma>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    match g {
        Some(g) => g.serialize(serializer),
        None => serializer.serialize_none(),
    }
}

impl ControlParams {
    pub fn new(s: usize, alpha: f64) -> Result<Self> {
        let p = ControlParams {
            s,
            gamma: None,
            alpha,
            k: 1,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_gamma(mut self, gamma: Gamma) -> Self {
        self.gamma = Some(gamma);
        self
    }

    pub fn with_k(mut self, k: usize) -> Result<Self> {
        self.k = k;
        self.validate()?;
        Ok(self)
    }

    /// Shorthand for the FDP recipes.
    pub fn fdp(s: usize, gamma: &str, alpha: f64) -> Result<Self> {
        Ok(ControlParams::new(s, alpha)?.with_gamma(gamma.parse()?))
    }

    pub fn validate(&self) -> Result<()> {
        if self.s == 0 {
            return param("s must be at least 1");
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return param(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if self.k == 0 || self.k > self.s {
            return param(format!(
                "k must satisfy 1 <= k <= s = {}, got {}",
                self.s, self.k
            ));
        }
        Ok(())
    }

    pub fn gamma(&self) -> Result<Gamma> {
        self.gamma
            .ok_or_else(|| Error::Param("gamma is required for this recipe".into()))
    }
}
