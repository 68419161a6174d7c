//! The graded algebras `U_a = U^K / (K^{ell/2} - xi^{ell a/2})` in PBW normal form.
//!
//! Elements are sums of monomials `E^e F^f K^k`. The `K`-exponent is kept with real
//! part in `[0, ell/2)`; the integer-lattice part of the algebra (the finite
//! subalgebra of dimension `ell'^3`) consists of monomials whose exponent lies in
//! `Z + (ell/2) Z` before reduction.

mod center;
mod hopf;
mod tensor;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::OnceLock;

use num_rational::Rational64;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::GaussQ;
use crate::scalar::{Backend, RootData, Scalar};

pub use center::HH0;
pub use tensor::TensorElem;

/// An element of `G = C / 2Z`, stored with real part in `[0, 2)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(into = "GaussQ", from = "GaussQ")]
pub struct Color(GaussQ);

impl Color {
    pub fn new(g: GaussQ) -> Self {
        Color(g.reduce_real(Rational64::from_integer(2)).0)
    }

    pub fn zero() -> Self {
        Color(GaussQ::zero())
    }

    pub fn int(n: i64) -> Self {
        Color::new(GaussQ::int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Color::new(GaussQ::frac(n, d))
    }

    /// Representative with real part in `[0, 2)`.
    pub fn value(&self) -> GaussQ {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Admissible colors: everything except `0` and `1` mod 2.
    pub fn in_gprime(&self) -> bool {
        !(self.0.is_zero() || self.0 == GaussQ::int(1))
    }

    pub fn is_real(&self) -> bool {
        self.0.is_real()
    }
}

impl From<GaussQ> for Color {
    fn from(g: GaussQ) -> Self {
        Color::new(g)
    }
}

impl From<Color> for GaussQ {
    fn from(c: Color) -> Self {
        c.0
    }
}

impl Add for Color {
    type Output = Color;
    fn add(self, o: Color) -> Color {
        Color::new(self.0 + o.0)
    }
}

impl Sub for Color {
    type Output = Color;
    fn sub(self, o: Color) -> Color {
        Color::new(self.0 - o.0)
    }
}

impl Neg for Color {
    type Output = Color;
    fn neg(self) -> Color {
        Color::new(-self.0)
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `E^e F^f K^k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Monomial {
    pub e: u32,
    pub f: u32,
    pub k: GaussQ,
}

impl Monomial {
    pub fn new(e: u32, f: u32, k: GaussQ) -> Self {
        Monomial { e, f, k }
    }

    pub fn unit() -> Self {
        Monomial { e: 0, f: 0, k: GaussQ::zero() }
    }

    pub fn kpow(k: GaussQ) -> Self {
        Monomial { e: 0, f: 0, k }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.e {
            0 => {}
            1 => parts.push("E".to_string()),
            n => parts.push(format!("E^{n}")),
        }
        match self.f {
            0 => {}
            1 => parts.push("F".to_string()),
            n => parts.push(format!("F^{n}")),
        }
        if !self.k.is_zero() {
            parts.push(format!("K^({})", self.k));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Element of `U_a` for a fixed grade `a`.
#[derive(Clone, Debug)]
pub struct AlgElem {
    pub grade: Color,
    pub terms: BTreeMap<Monomial, Scalar>,
}

impl AlgElem {
    pub fn zero(grade: Color) -> Self {
        AlgElem { grade, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        match self.terms.get_mut(&m) {
            Some(v) => *v += &c,
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Drop vanishing coefficients and shrink exact ones.
    pub fn cleanup(mut self) -> Self {
        self.terms = self
            .terms
            .into_iter()
            .filter_map(|(m, c)| {
                let c = c.canonical();
                (!c.is_zero()).then_some((m, c))
            })
            .collect();
        self
    }

    pub fn scale(&self, s: &Scalar) -> AlgElem {
        let terms = self.terms.iter().map(|(m, c)| (*m, c * s)).collect();
        AlgElem { grade: self.grade, terms }.cleanup()
    }

    pub fn add(&self, o: &AlgElem) -> Result<AlgElem> {
        check_grade(self.grade, o.grade)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out.cleanup())
    }

    pub fn sub(&self, o: &AlgElem) -> Result<AlgElem> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> AlgElem {
        AlgElem { grade: self.grade, terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    /// Equality of values (grades and every coefficient).
    pub fn equals(&self, o: &AlgElem) -> bool {
        self.grade == o.grade && self.sub(o).map(|d| d.is_zero()).unwrap_or(false)
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_exact(&self) -> bool {
        self.terms.values().all(|c| c.is_exact())
    }
}

impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn check_grade(a: Color, b: Color) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::Grade(format!("expected grade {a}, got {b}")))
    }
}

/// A term `c E^i F^j K^m` with an integer, unreduced `K`-exponent.
#[derive(Clone, Debug)]
struct RawTerm {
    e: u32,
    f: u32,
    k: i64,
    c: Scalar,
}

/// Images of `E^i F^j`, indexed by `i` then `j`.
type Table<T> = Vec<Vec<Vec<T>>>;

/// Unrolled quantum `sl_2` at `xi = exp(2 pi i / ell)`; owns the structure constants.
pub struct Uq {
    pub root: RootData,
    half_ell: Rational64,
    inv_q1: Scalar,
    /// `fe[b][a]` is `F^b E^a` in PBW order.
    fe: Vec<Vec<Vec<RawTerm>>>,
    delta_ef: OnceLock<Table<(Monomial, Monomial, Scalar)>>,
    antipode_ef: OnceLock<Table<(Monomial, Scalar)>>,
    antipode_inv_ef: OnceLock<Table<(Monomial, Scalar)>>,
    pub(crate) cache: crate::memo::Memo,
}

impl fmt::Debug for Uq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Uq").field("ell", &self.root.ell).field("backend", &self.root.backend).finish()
    }
}

impl Uq {
    pub fn new(root: RootData) -> Result<Self> {
        let inv_q1 = root.qint(Rational64::one()).inv()?;
        let mut u = Uq {
            half_ell: Rational64::new(root.ell as i64, 2),
            root,
            inv_q1,
            fe: Vec::new(),
            delta_ef: OnceLock::new(),
            antipode_ef: OnceLock::new(),
            antipode_inv_ef: OnceLock::new(),
            cache: Default::default(),
        };
        u.fe = u.build_fe_table();
        Ok(u)
    }

    pub fn with_ell(ell: u32) -> Result<Self> {
        Uq::new(RootData::with_ell(ell)?)
    }

    pub fn with_backend(ell: u32, backend: Backend) -> Result<Self> {
        Uq::new(RootData::new(ell, Scalar::one(), backend)?)
    }

    pub fn ell(&self) -> u32 {
        self.root.ell
    }

    pub fn ellp(&self) -> u32 {
        self.root.ellp
    }

    pub fn xi(&self, x: i64) -> Scalar {
        self.root.xi_pow_int(x)
    }

    pub fn xi_c(&self, x: GaussQ) -> Scalar {
        self.root.xi_pow_c(x)
    }

    pub fn scalar(&self, n: i64) -> Scalar {
        self.root.scalar(n)
    }

    /// `1 / (xi - xi^{-1})`.
    pub fn inv_q1(&self) -> &Scalar {
        &self.inv_q1
    }

    fn build_fe_table(&self) -> Vec<Vec<Vec<RawTerm>>> {
        let lp = self.ellp();
        let mut table: Vec<Vec<Vec<RawTerm>>> = Vec::with_capacity(lp as usize);
        table.push((0..lp).map(|a| vec![RawTerm { e: a, f: 0, k: 0, c: self.scalar(1) }]).collect());
        for b in 1..lp {
            let row = (0..lp).map(|a| self.f_times(&table[b as usize - 1][a as usize])).collect();
            table.push(row);
        }
        table
    }

    /// Left multiplication by `F` of a sum of `E^a F^c K^g`, using
    /// `F E^a = E^a F - sum_n E^{a-1} (xi^{2n} K - xi^{-2n} K^{-1}) / (xi - xi^{-1})`.
    fn f_times(&self, terms: &[RawTerm]) -> Vec<RawTerm> {
        let lp = self.ellp();
        let mut acc: BTreeMap<(u32, u32, i64), Scalar> = BTreeMap::new();
        let mut push = |e: u32, f: u32, k: i64, c: Scalar| {
            *acc.entry((e, f, k)).or_default() += &c;
        };
        for t in terms {
            if t.f + 1 < lp {
                push(t.e, t.f + 1, t.k, t.c.clone());
            }
            if t.e == 0 {
                continue;
            }
            let c = &t.c * &self.inv_q1;
            let f2 = 2 * t.f as i64;
            for n in 0..t.e as i64 {
                push(t.e - 1, t.f, t.k + 1, -(&c * &self.xi(2 * n - f2)));
                push(t.e - 1, t.f, t.k - 1, &c * &self.xi(f2 - 2 * n));
            }
        }
        acc.into_iter()
            .filter_map(|((e, f, k), c)| {
                let c = c.canonical();
                (!c.is_zero()).then_some(RawTerm { e, f, k, c })
            })
            .collect()
    }

    /// Product of two monomials in `U^K`, without reducing `K`-exponents.
    fn mul_mono_raw(&self, x: &Monomial, y: &Monomial) -> Vec<(Monomial, Scalar)> {
        let lp = self.ellp();
        let twist = GaussQ::int(2 * (y.e as i64 - y.f as i64));
        let pre = if x.k.is_zero() || twist.is_zero() { self.scalar(1) } else { self.xi_c(x.k * twist) };
        let mut out = Vec::new();
        for t in &self.fe[x.f as usize][y.e as usize] {
            let (e, f) = (x.e + t.e, t.f + y.f);
            if e >= lp || f >= lp {
                continue;
            }
            let mut c = &t.c * &pre;
            if t.k != 0 && y.f != 0 {
                c = c * self.xi(-2 * t.k * y.f as i64);
            }
            out.push((Monomial { e, f, k: x.k + y.k + GaussQ::int(t.k) }, c));
        }
        out
    }

    /// Bring the `K`-exponent into `[0, ell/2)` using `K^{ell/2} = xi^{ell a/2}` in `U_a`.
    pub fn reduce(&self, m: Monomial, grade: Color) -> (Monomial, Option<Scalar>) {
        let (k, n) = m.k.reduce_real(self.half_ell);
        let m = Monomial { k, ..m };
        if n == 0 {
            return (m, None);
        }
        // xi^{n ell a/2} is the turn n a / 2
        let turn = grade.value().scale(Rational64::new(n, 2));
        if turn.is_integer() {
            return (m, None);
        }
        (m, Some(crate::scalar::Scalar::turn_c(turn).to_backend(self.root.backend)))
    }

    /// Add `c m` to `out` after reducing `m` in the grade of `out`.
    pub fn push_reduced(&self, out: &mut AlgElem, m: Monomial, c: Scalar) {
        let (m, f) = self.reduce(m, out.grade);
        match f {
            Some(f) => out.add_term(m, c * f),
            None => out.add_term(m, c),
        }
    }

    pub fn mono(&self, grade: Color, e: u32, f: u32, k: GaussQ) -> AlgElem {
        let mut out = AlgElem::zero(grade);
        if e < self.ellp() && f < self.ellp() {
            self.push_reduced(&mut out, Monomial { e, f, k }, self.scalar(1));
        }
        out
    }

    pub fn one(&self, grade: Color) -> AlgElem {
        self.mono(grade, 0, 0, GaussQ::zero())
    }

    pub fn e(&self, grade: Color) -> AlgElem {
        self.mono(grade, 1, 0, GaussQ::zero())
    }

    pub fn f(&self, grade: Color) -> AlgElem {
        self.mono(grade, 0, 1, GaussQ::zero())
    }

    pub fn k(&self, grade: Color, k: GaussQ) -> AlgElem {
        self.mono(grade, 0, 0, k)
    }

    pub fn scalar_elem(&self, grade: Color, s: Scalar) -> AlgElem {
        self.one(grade).scale(&s)
    }

    pub fn mul(&self, x: &AlgElem, y: &AlgElem) -> Result<AlgElem> {
        check_grade(x.grade, y.grade)?;
        let mut out = AlgElem::zero(x.grade);
        for (mx, cx) in &x.terms {
            for (my, cy) in &y.terms {
                let cxy = cx * cy;
                for (m, c) in self.mul_mono_raw(mx, my) {
                    self.push_reduced(&mut out, m, c * &cxy);
                }
            }
        }
        Ok(out.cleanup())
    }

    pub fn mul_all(&self, xs: &[&AlgElem]) -> Result<AlgElem> {
        let (first, rest) = xs.split_first().ok_or_else(|| Error::Input("empty product".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, x| self.mul(&acc, x))
    }

    pub fn pow(&self, x: &AlgElem, n: u32) -> Result<AlgElem> {
        (0..n).try_fold(self.one(x.grade), |acc, _| self.mul(&acc, x))
    }

    /// `x y - y x`.
    pub fn commutator(&self, x: &AlgElem, y: &AlgElem) -> Result<AlgElem> {
        self.mul(x, y)?.sub(&self.mul(y, x)?)
    }

    /// Whether the reduced exponent lies on the lattice `Z + (ell/2) Z`.
    pub fn is_tilde_exponent(&self, k: &GaussQ) -> bool {
        k.is_integer() || (self.root.ell % 2 == 1 && k.scale(Rational64::from_integer(2)).is_integer())
    }

    /// Membership in the finite subalgebra spanned by `E^i F^j K^m`, `m` integer.
    pub fn in_tilde(&self, x: &AlgElem) -> bool {
        x.terms.keys().all(|m| self.is_tilde_exponent(&m.k))
    }

    /// The `ell'^3` reduced PBW monomials of the finite subalgebra.
    pub fn tilde_basis(&self) -> Vec<Monomial> {
        let lp = self.ellp();
        let mut out = Vec::with_capacity((lp * lp * lp) as usize);
        for e in 0..lp {
            for f in 0..lp {
                for m in 0..lp as i64 {
                    let (mono, _) = self.reduce(Monomial { e, f, k: GaussQ::int(m) }, Color::zero());
                    out.push(mono);
                }
            }
        }
        out
    }

    /// Drop the terms outside the finite subalgebra.
    pub fn tilde_part(&self, x: &AlgElem) -> AlgElem {
        let terms = x.terms.iter().filter(|(m, _)| self.is_tilde_exponent(&m.k)).map(|(m, c)| (*m, c.clone())).collect();
        AlgElem { grade: x.grade, terms }
    }
}

#[cfg(test)]
mod tests;
