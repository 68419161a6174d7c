//! Scalars: rational combinations of roots of unity, or complex doubles.
//!
//! An exact scalar is a finite sum `sum c_r e^{2 pi i r}` with `r` in `Q/Z` (a "turn")
//! and rational `c_r`. Storing turns rather than exponents of `xi` keeps the
//! representation independent of `ell`; `xi^x` is the turn `x / ell`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::coef::Coef;
use crate::cyclotomic::{cyclotomic_poly, inverse_mod_phi};
use crate::gauss::GaussQ;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0);

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Relative tolerance used by the approximate backend.
pub fn tolerance() -> f64 {
    match TOLERANCE_BITS.load(Ordering::Relaxed) {
        0 => DEFAULT_TOLERANCE,
        bits => f64::from_bits(bits),
    }
}

pub fn set_tolerance(tol: f64) {
    TOLERANCE_BITS.store(tol.to_bits(), Ordering::Relaxed);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("division by zero")]
pub struct DivisionByZero;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Exact,
    Approx,
}

/// Approximate value with a running magnitude bound for relative zero tests.
#[derive(Clone, Copy, Debug)]
pub struct Approx {
    pub value: Complex64,
    pub mag: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Exact {
    terms: BTreeMap<Rational64, Coef>,
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Exact),
    Approx(Approx),
}

fn wrap_turn(r: Rational64) -> Rational64 {
    r - r.floor()
}

fn big_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Exact {
    fn single(turn: Rational64, c: Coef) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(wrap_turn(turn), c);
        }
        Exact { terms }
    }

    fn add_term(&mut self, turn: Rational64, c: Coef) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(turn) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Rational64, BigRational)> + '_ {
        self.terms.iter().map(|(r, c)| (*r, c.to_big()))
    }

    fn conductor(&self) -> i64 {
        self.terms.keys().fold(1i64, |acc, r| acc.lcm(r.denom()))
    }

    fn to_complex(&self) -> Complex64 {
        self.terms.iter().map(|(r, c)| Complex64::from_polar(c.to_f64(), TAU * r.to_f64().unwrap())).sum()
    }

    fn mag(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().abs()).sum()
    }

    fn index(r: &Rational64, n: i64) -> usize {
        (r * n).to_integer() as usize
    }

    fn to_dense(&self, n: i64) -> Vec<Coef> {
        let mut p = vec![Coef::zero(); n as usize];
        for (r, c) in &self.terms {
            p[Self::index(r, n)] += c;
        }
        p
    }

    fn from_dense(p: Vec<Coef>, n: i64) -> Self {
        let terms = p.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (Rational64::new(k as i64, n), c)).collect();
        Exact { terms }
    }

    /// Representative reduced modulo the cyclotomic polynomial of the conductor.
    pub fn canonical(&self) -> Exact {
        let n = self.conductor();
        let phi = cyclotomic_poly(n as u64);
        let deg = phi.len() - 1;
        if self.terms.keys().all(|r| Self::index(r, n) < deg) {
            return self.clone();
        }
        if let Some(out) = self.canonical_small(n, &phi) {
            return out;
        }
        let phi: Vec<Coef> = phi.iter().map(|c| Coef::from_big(BigRational::from_integer(c.clone()))).collect();
        let mut p = self.to_dense(n);
        for i in (deg..p.len()).rev() {
            let c = std::mem::replace(&mut p[i], Coef::zero());
            if c.is_zero() {
                continue;
            }
            for (j, f) in phi.iter().enumerate().take(deg) {
                if !f.is_zero() {
                    p[i - deg + j] = &p[i - deg + j] - &(&c * f);
                }
            }
        }
        p.truncate(deg);
        Exact::from_dense(p, n)
    }

    /// `canonical` over a common denominator in machine integers, if nothing overflows.
    fn canonical_small(&self, n: i64, phi: &[BigInt]) -> Option<Exact> {
        let phi: Vec<i128> = phi.iter().map(|c| c.to_i128()).collect::<Option<_>>()?;
        let deg = phi.len() - 1;
        let (den, nums) = self.small_form(n)?;
        let mut p = vec![0i128; n as usize];
        for (k, c) in nums {
            p[k] = p[k].checked_add(c)?;
        }
        for i in (deg..p.len()).rev() {
            let c = std::mem::take(&mut p[i]);
            if c == 0 {
                continue;
            }
            for (j, f) in phi.iter().enumerate().take(deg) {
                if *f != 0 {
                    p[i - deg + j] = p[i - deg + j].checked_sub(c.checked_mul(*f)?)?;
                }
            }
        }
        let terms = p[..deg].iter().enumerate().filter(|(_, c)| **c != 0).map(|(k, c)| (Rational64::new(k as i64, n), Coef::from_i128(*c, den))).collect();
        Some(Exact { terms })
    }

    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        if self.to_complex().norm() > 1e-6 * self.mag().max(1.0) {
            return false;
        }
        self.canonical().terms.is_empty()
    }

    /// Common denominator and numerators indexed by `turn * n`, if they fit in machine words.
    fn small_form(&self, n: i64) -> Option<(i128, Vec<(usize, i128)>)> {
        let mut den: i128 = 1;
        for c in self.terms.values() {
            let (_, d) = c.small()?;
            let d = d as i128;
            den = (den / den.gcd(&d)).checked_mul(d)?;
        }
        let mut nums = Vec::with_capacity(self.terms.len());
        for (r, c) in &self.terms {
            let (p, d) = c.small()?;
            nums.push((Self::index(r, n), (p as i128).checked_mul(den / d as i128)?));
        }
        Some((den, nums))
    }

    fn mul_small(&self, o: &Exact, n: i64) -> Option<Exact> {
        let (da, na) = self.small_form(n)?;
        let (db, nb) = o.small_form(n)?;
        let den = da.checked_mul(db)?;
        let mut acc = vec![0i128; n as usize];
        for (i, a) in &na {
            for (j, b) in &nb {
                let k = (i + j) % n as usize;
                acc[k] = acc[k].checked_add(a.checked_mul(*b)?)?;
            }
        }
        let terms = acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .map(|(k, c)| (Rational64::new(k as i64, n), Coef::from_i128(c, den)))
            .collect();
        Some(Exact { terms })
    }

    fn mul(&self, o: &Exact) -> Exact {
        if self.terms.len() * o.terms.len() > 4 {
            let n = self.conductor().lcm(&o.conductor());
            if let Some(out) = self.mul_small(o, n) {
                return out;
            }
        }
        let mut out = Exact::default();
        for (r1, c1) in &self.terms {
            for (r2, c2) in &o.terms {
                out.add_term(wrap_turn(r1 + r2), c1 * c2);
            }
        }
        out
    }

    fn inv(&self) -> Option<Exact> {
        if self.terms.len() == 1 {
            let (r, c) = self.terms.iter().next().unwrap();
            return Some(Exact::single(-*r, c.recip()));
        }
        let n = self.conductor();
        let p: Vec<BigRational> = self.to_dense(n).iter().map(Coef::to_big).collect();
        inverse_mod_phi(&p, n as u64).map(|q| Exact::from_dense(q.into_iter().map(Coef::from_big).collect(), n))
    }

    fn conj(&self) -> Exact {
        let mut out = Exact::default();
        for (r, c) in &self.terms {
            out.add_term(wrap_turn(-*r), c.clone());
        }
        out
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Exact::default())
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(Exact::single(Rational64::zero(), Coef::int(n)))
    }

    pub fn from_rational(r: Rational64) -> Self {
        Scalar::Exact(Exact::single(Rational64::zero(), Coef::from_big(BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())))))
    }

    pub fn from_big_rational(r: BigRational) -> Self {
        Scalar::Exact(Exact::single(Rational64::zero(), Coef::from_big(r)))
    }

    pub fn approx(value: Complex64) -> Self {
        Scalar::Approx(Approx { value, mag: value.norm() })
    }

    /// `exp(2 pi i r)`.
    pub fn turn(r: Rational64) -> Self {
        Scalar::Exact(Exact::single(r, Coef::int(1)))
    }

    /// `exp(2 pi i x)` for a complex rational `x`; exact only when `x` is real.
    pub fn turn_c(x: GaussQ) -> Self {
        if x.is_real() {
            return Scalar::turn(x.re);
        }
        let (re, im) = x.to_f64_pair();
        Scalar::approx(Complex64::from_polar((-TAU * im).exp(), TAU * re))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(e) => e.to_complex(),
            Scalar::Approx(a) => a.value,
        }
    }

    fn as_approx(&self) -> Approx {
        match self {
            Scalar::Exact(e) => Approx { value: e.to_complex(), mag: e.mag() },
            Scalar::Approx(a) => *a,
        }
    }

    pub fn to_backend(&self, backend: Backend) -> Scalar {
        match backend {
            Backend::Exact => self.clone(),
            Backend::Approx => Scalar::Approx(self.as_approx()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(e) => e.is_zero(),
            Scalar::Approx(a) => a.value.norm() <= tolerance() * a.mag.max(1.0),
        }
    }

    pub fn is_one(&self) -> bool {
        (self - &Scalar::one()).is_zero()
    }

    pub fn inv(&self) -> Result<Scalar, DivisionByZero> {
        match self {
            Scalar::Exact(e) => e.inv().map(Scalar::Exact).ok_or(DivisionByZero),
            Scalar::Approx(a) => {
                if self.is_zero() {
                    return Err(DivisionByZero);
                }
                let v = a.value.inv();
                Ok(Scalar::Approx(Approx { value: v, mag: v.norm() }))
            }
        }
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar, DivisionByZero> {
        Ok(self * &o.inv()?)
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(e) => Scalar::Exact(e.conj()),
            Scalar::Approx(a) => Scalar::Approx(Approx { value: a.value.conj(), mag: a.mag }),
        }
    }

    pub fn pow(&self, n: i64) -> Result<Scalar, DivisionByZero> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Scalar::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Shrinks an exact value to at most `phi(N)` terms, `N` its conductor.
    pub fn canonical(&self) -> Scalar {
        match self {
            Scalar::Exact(e) => Scalar::Exact(e.canonical()),
            Scalar::Approx(_) => self.clone(),
        }
    }

    /// The value as a rational if it is one exactly.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Exact(e) => {
                let c = e.canonical();
                match c.terms.len() {
                    0 => Some(BigRational::zero()),
                    1 => c.terms.get(&Rational64::zero()).map(Coef::to_big),
                    _ => None,
                }
            }
            Scalar::Approx(_) => None,
        }
    }

    pub fn approx_eq(&self, o: &Scalar) -> bool {
        (self - o).is_zero()
    }

    pub fn mul_rational(&self, r: &BigRational) -> Scalar {
        match self {
            Scalar::Exact(e) => {
                if r.is_zero() {
                    return Scalar::zero();
                }
                let r = Coef::from_big(r.clone());
                Scalar::Exact(Exact { terms: e.terms.iter().map(|(t, c)| (*t, c * &r)).collect() })
            }
            Scalar::Approx(a) => {
                let f = big_to_f64(r);
                Scalar::Approx(Approx { value: a.value * f, mag: a.mag * f.abs() })
            }
        }
    }

    /// Multiply by `exp(2 pi i r)`.
    pub fn mul_turn(&self, r: Rational64) -> Scalar {
        match self {
            Scalar::Exact(e) => {
                Scalar::Exact(Exact { terms: e.terms.iter().map(|(t, c)| (wrap_turn(t + r), c.clone())).collect() })
            }
            Scalar::Approx(a) => {
                let z = Complex64::from_polar(1.0, TAU * r.to_f64().unwrap());
                Scalar::Approx(Approx { value: a.value * z, mag: a.mag })
            }
        }
    }

    /// Number of stored terms; a size measure for exact values.
    pub fn len(&self) -> usize {
        match self {
            Scalar::Exact(e) => e.terms.len(),
            Scalar::Approx(_) => 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Scalar::Exact(e) => e.terms.is_empty(),
            Scalar::Approx(a) => a.value == Complex64::zero(),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Scalar) -> bool {
        (self - o).is_zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl<'a> Add<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, o: &'a Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                let (big, small) = if a.terms.len() >= b.terms.len() { (a, b) } else { (b, a) };
                let mut out = big.clone();
                for (r, c) in &small.terms {
                    out.add_term(*r, c.clone());
                }
                Scalar::Exact(out)
            }
            _ => {
                let (a, b) = (self.as_approx(), o.as_approx());
                Scalar::Approx(Approx { value: a.value + b.value, mag: a.mag + b.mag })
            }
        }
    }
}

impl<'a> Mul<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &'a Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.mul(b)),
            _ => {
                let (a, b) = (self.as_approx(), o.as_approx());
                Scalar::Approx(Approx { value: a.value * b.value, mag: a.mag * b.mag })
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(e) => Scalar::Exact(Exact { terms: e.terms.iter().map(|(r, c)| (*r, -c)).collect() }),
            Scalar::Approx(a) => Scalar::Approx(Approx { value: -a.value, mag: a.mag }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Sub<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &'a Scalar) -> Scalar {
        self + &(-o)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, o: Scalar) -> Scalar {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, o: &'a Scalar) -> Scalar {
                (&self).$f(o)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $f(self, o: Scalar) -> Scalar {
                self.$f(&o)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        if let (Scalar::Exact(a), Scalar::Exact(b)) = (&mut *self, o) {
            for (r, c) in &b.terms {
                a.add_term(*r, c.clone());
            }
        } else {
            *self = &*self + o;
        }
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        *self += &o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self += &(-o);
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        let mut acc = Scalar::zero();
        for s in iter {
            acc += &s;
        }
        acc
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Approx(a) => write!(f, "{:.12}{:+.12}i", a.value.re, a.value.im),
            Scalar::Exact(e) => {
                let c = e.canonical();
                if c.terms.is_empty() {
                    return write!(f, "0");
                }
                let parts: Vec<String> = c
                    .terms
                    .iter()
                    .map(|(r, k)| {
                        if r.is_zero() {
                            format!("{k}")
                        } else {
                            format!("{k}*e(2pi i*{r})")
                        }
                    })
                    .collect();
                write!(f, "{}", parts.join(" + "))
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let z = self.to_complex();
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("re", &z.re)?;
        m.serialize_entry("im", &z.im)?;
        m.serialize_entry("exact", &self.is_exact())?;
        if self.is_exact() {
            m.serialize_entry("form", &self.to_string())?;
        }
        m.end()
    }
}

/// Root of unity data: `ell`, `ell'` and the integral normalization `eta`.
#[derive(Clone, Debug)]
pub struct RootData {
    pub ell: u32,
    pub ellp: u32,
    pub eta: Scalar,
    pub backend: Backend,
}

impl RootData {
    pub fn new(ell: u32, eta: Scalar, backend: Backend) -> Result<Self, crate::Error> {
        if ell < 3 {
            return Err(crate::Error::Input(format!("ell must be at least 3, got {ell}")));
        }
        if eta.is_zero() {
            return Err(crate::Error::Input("eta must be nonzero".into()));
        }
        let ellp = if ell.is_multiple_of(2) { ell / 2 } else { ell };
        Ok(RootData { ell, ellp, eta: eta.to_backend(backend), backend })
    }

    pub fn with_ell(ell: u32) -> Result<Self, crate::Error> {
        RootData::new(ell, Scalar::one(), Backend::Exact)
    }

    fn finish(&self, s: Scalar) -> Scalar {
        s.to_backend(self.backend)
    }

    pub fn xi_pow(&self, x: Rational64) -> Scalar {
        self.finish(Scalar::turn(x / Rational64::from_integer(self.ell as i64)))
    }

    pub fn xi_pow_int(&self, x: i64) -> Scalar {
        self.xi_pow(Rational64::from_integer(x))
    }

    pub fn xi_pow_c(&self, x: GaussQ) -> Scalar {
        self.finish(Scalar::turn_c(x.scale(Rational64::new(1, self.ell as i64))))
    }

    pub fn qint(&self, x: Rational64) -> Scalar {
        self.xi_pow(x) - self.xi_pow(-x)
    }

    pub fn qint_c(&self, x: GaussQ) -> Scalar {
        self.xi_pow_c(x) - self.xi_pow_c(-x)
    }

    pub fn qfact(&self, n: u32) -> Scalar {
        (1..=n as i64).fold(self.finish(Scalar::one()), |acc, k| acc * self.qint(Rational64::from_integer(k)))
    }

    pub fn scalar(&self, n: i64) -> Scalar {
        self.finish(Scalar::from_int(n))
    }
}

impl FromStr for Scalar {
    type Err = crate::Error;

    /// Parses the `Display` form of either backend.
    fn from_str(s: &str) -> Result<Scalar, crate::Error> {
        let bad = || crate::Error::Input(format!("cannot read scalar {s:?}"));
        let s = s.trim();
        if let Some(body) = s.strip_suffix('i').filter(|_| !s.contains("e(")) {
            let cut = body.char_indices().skip(1).filter(|&(i, c)| (c == '+' || c == '-') && !body[..i].ends_with(['e', 'E'])).last().ok_or_else(bad)?.0;
            let re: f64 = body[..cut].parse().map_err(|_| bad())?;
            let im: f64 = body[cut..].parse().map_err(|_| bad())?;
            return Ok(Scalar::approx(Complex64::new(re, im)));
        }
        let mut out = Exact::default();
        for part in s.split(" + ") {
            let (coeff, turn) = match part.split_once("*e(2pi i*") {
                Some((k, r)) => (k, r.strip_suffix(')').ok_or_else(bad)?.parse::<Rational64>().map_err(|_| bad())?),
                None => (part, Rational64::zero()),
            };
            out.add_term(wrap_turn(turn), Coef::from_big(coeff.trim().parse::<BigRational>().map_err(|_| bad())?));
        }
        Ok(Scalar::Exact(out))
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Doc {
            re: f64,
            im: f64,
            form: Option<String>,
        }
        let doc = Doc::deserialize(d)?;
        match doc.form {
            Some(f) => f.parse().map_err(serde::de::Error::custom),
            None => Ok(Scalar::approx(Complex64::new(doc.re, doc.im))),
        }
    }
}
