//! Rational coefficients that stay in machine words until they outgrow them.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

/// A reduced rational: `Small(n, d)` with `d > 0` whenever both parts fit in `i64`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Coef {
    Small(i64, i64),
    Big(BigRational),
}

fn from_i128(n: i128, d: i128) -> Coef {
    let g = n.gcd(&d);
    let (mut n, mut d) = if g > 1 { (n / g, d / g) } else { (n, d) };
    if d < 0 {
        n = -n;
        d = -d;
    }
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(n), Ok(d)) => Coef::Small(n, d),
        _ => Coef::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
    }
}

impl Coef {
    pub fn from_i128(n: i128, d: i128) -> Coef {
        from_i128(n, d)
    }

    pub fn zero() -> Coef {
        Coef::Small(0, 1)
    }

    pub fn int(n: i64) -> Coef {
        Coef::Small(n, 1)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Coef::Small(0, _))
    }

    pub fn from_big(r: BigRational) -> Coef {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Coef::Small(n, d),
            _ => Coef::Big(r),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Coef::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Coef::Big(r) => r.clone(),
        }
    }

    /// Numerator and denominator as machine integers, if they fit.
    pub fn small(&self) -> Option<(i64, i64)> {
        match self {
            Coef::Small(n, d) => Some((*n, *d)),
            Coef::Big(_) => None,
        }
    }

    pub fn recip(&self) -> Coef {
        match self {
            Coef::Small(n, d) => from_i128(*d as i128, *n as i128),
            Coef::Big(r) => Coef::from_big(r.recip()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coef::Small(n, d) => *n as f64 / *d as f64,
            Coef::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl From<BigRational> for Coef {
    fn from(r: BigRational) -> Coef {
        Coef::from_big(r)
    }
}

impl Add<&Coef> for &Coef {
    type Output = Coef;
    fn add(self, o: &Coef) -> Coef {
        match (self, o) {
            (Coef::Small(a, b), Coef::Small(c, d)) => {
                if b == d {
                    from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    let (b, d) = (*b as i128, *d as i128);
                    from_i128(*a as i128 * d + *c as i128 * b, b * d)
                }
            }
            _ => Coef::from_big(self.to_big() + o.to_big()),
        }
    }
}

impl Mul<&Coef> for &Coef {
    type Output = Coef;
    fn mul(self, o: &Coef) -> Coef {
        match (self, o) {
            (Coef::Small(a, b), Coef::Small(c, d)) => from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128),
            _ => Coef::from_big(self.to_big() * o.to_big()),
        }
    }
}

impl Neg for &Coef {
    type Output = Coef;
    fn neg(self) -> Coef {
        match self {
            Coef::Small(n, d) => match n.checked_neg() {
                Some(m) => Coef::Small(m, *d),
                None => Coef::from_big(-self.to_big()),
            },
            Coef::Big(r) => Coef::from_big(-r),
        }
    }
}

impl Sub<&Coef> for &Coef {
    type Output = Coef;
    fn sub(self, o: &Coef) -> Coef {
        self + &(-o)
    }
}

impl AddAssign<&Coef> for Coef {
    fn add_assign(&mut self, o: &Coef) {
        *self = &*self + o;
    }
}

impl One for Coef {
    fn one() -> Coef {
        Coef::Small(1, 1)
    }
}

impl Mul for Coef {
    type Output = Coef;
    fn mul(self, o: Coef) -> Coef {
        &self * &o
    }
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coef::Small(n, 1) => write!(f, "{n}"),
            Coef::Small(n, d) => write!(f, "{n}/{d}"),
            Coef::Big(r) => write!(f, "{r}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_big_rationals_across_the_word_boundary() {
        let big = |n: i128, d: i128| BigRational::new(BigInt::from(n), BigInt::from(d));
        let xs = [(3, 7), (-5, 12), (i64::MAX as i128, 3), (i64::MIN as i128 + 1, 5), (1 << 40, (1 << 33) + 1), (0, 1)];
        for &(a, b) in &xs {
            for &(c, d) in &xs {
                let (x, y) = (Coef::from_big(big(a, b)), Coef::from_big(big(c, d)));
                assert_eq!((&x + &y).to_big(), big(a, b) + big(c, d));
                assert_eq!((&x * &y).to_big(), big(a, b) * big(c, d));
                assert_eq!((&x - &y).to_big(), big(a, b) - big(c, d));
                assert_eq!(Coef::from_big((&x * &y).to_big()), &x * &y);
            }
        }
        assert!(matches!(&Coef::int(i64::MAX) + &Coef::int(1), Coef::Big(_)));
    }
}
