//! Complex numbers with rational real and imaginary parts.
//!
//! Used for colors and `K`-exponents. Exactness is only available on the real
//! (rational) sublattice; anything with a nonzero imaginary part is evaluated
//! with the approximate backend.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussQ {
    pub re: Rational64,
    pub im: Rational64,
}

impl GaussQ {
    pub fn new(re: Rational64, im: Rational64) -> Self {
        GaussQ { re, im }
    }

    pub fn real(re: Rational64) -> Self {
        GaussQ { re, im: Rational64::zero() }
    }

    pub fn int(n: i64) -> Self {
        Self::real(Rational64::from_integer(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::real(Rational64::new(n, d))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.im.is_zero() && self.re.is_integer()
    }

    pub fn scale(&self, r: Rational64) -> Self {
        GaussQ { re: self.re * r, im: self.im * r }
    }

    /// Subtract the integer multiple of `period` that brings the real part into `[0, period)`.
    /// Returns the reduced value and the multiple removed.
    pub fn reduce_real(&self, period: Rational64) -> (Self, i64) {
        let q = (self.re / period).floor();
        let n = q.to_integer();
        (GaussQ { re: self.re - q * period, im: self.im }, n)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64().unwrap_or(0.0), self.im.to_f64().unwrap_or(0.0))
    }
}

impl Add for GaussQ {
    type Output = GaussQ;
    fn add(self, o: GaussQ) -> GaussQ {
        GaussQ { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for GaussQ {
    type Output = GaussQ;
    fn sub(self, o: GaussQ) -> GaussQ {
        GaussQ { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Neg for GaussQ {
    type Output = GaussQ;
    fn neg(self) -> GaussQ {
        GaussQ { re: -self.re, im: -self.im }
    }
}

impl Mul for GaussQ {
    type Output = GaussQ;
    fn mul(self, o: GaussQ) -> GaussQ {
        GaussQ { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

impl From<i64> for GaussQ {
    fn from(n: i64) -> Self {
        GaussQ::int(n)
    }
}

impl From<Rational64> for GaussQ {
    fn from(r: Rational64) -> Self {
        GaussQ::real(r)
    }
}

fn fmt_rat(r: &Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", fmt_rat(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}i", fmt_rat(&self.im))
        } else {
            let sign = if self.im.is_negative() { "-" } else { "+" };
            write!(f, "{}{}{}i", fmt_rat(&self.re), sign, fmt_rat(&self.im.abs()))
        }
    }
}

impl fmt::Debug for GaussQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed number `{0}`")]
pub struct ParseGaussError(pub String);

fn parse_rat(s: &str) -> Option<Rational64> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(Rational64::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        // decimal literal, kept exact
        let neg = ip.trim_start().starts_with('-');
        let ip_val: i64 = if ip.is_empty() || ip == "-" || ip == "+" { 0 } else { ip.parse().ok()? };
        if !fp.chars().all(|c| c.is_ascii_digit()) || fp.len() > 15 {
            return None;
        }
        let den = 10i64.pow(fp.len() as u32);
        let frac: i64 = if fp.is_empty() { 0 } else { fp.parse().ok()? };
        let frac = Rational64::new(frac, den);
        let base = Rational64::from_integer(ip_val);
        return Some(if neg { base - frac } else { base + frac });
    }
    s.parse::<i64>().ok().map(Rational64::from_integer)
}

impl FromStr for GaussQ {
    type Err = ParseGaussError;

    /// Accepts `p`, `p/q`, decimals, `bi`, `a+bi`, `a-bi`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseGaussError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        if let Some(body) = t.strip_suffix('i') {
            // split at the last sign that is not the leading one
            let split = body.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').map(|(i, _)| i).last();
            let (re, im) = match split {
                Some(i) => (parse_rat(&body[..i]).ok_or_else(err)?, &body[i..]),
                None => (Rational64::zero(), body),
            };
            let im = match im {
                "" | "+" => Rational64::one(),
                "-" => -Rational64::one(),
                other => parse_rat(other).ok_or_else(err)?,
            };
            return Ok(GaussQ { re, im });
        }
        parse_rat(&t).map(GaussQ::real).ok_or_else(err)
    }
}

impl Serialize for GaussQ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GaussRepr {
    Int(i64),
    Text(String),
}

impl<'de> Deserialize<'de> for GaussQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match GaussRepr::deserialize(d)? {
            GaussRepr::Int(n) => Ok(GaussQ::int(n)),
            GaussRepr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}
