//! Cyclotomic polynomials and arithmetic in `Q[t]/(Phi_N(t))`.
//!
//! Exact scalars are kept as sparse combinations of roots of unity. Whenever a
//! canonical answer is needed (zero testing, inversion) the combination is
//! rewritten as a polynomial in `t = exp(2 pi i / N)` and reduced modulo the
//! `N`-th cyclotomic polynomial.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Dense polynomial with rational coefficients, lowest degree first.
pub type QPoly = Vec<BigRational>;

fn cache() -> &'static Mutex<HashMap<u64, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).take_while(|d| d * d <= n).filter(|d| n.is_multiple_of(*d)).flat_map(|d| [d, n / d]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Exact division of integer polynomials where the divisor is monic.
fn div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<BigInt>> {
    assert!(n >= 1);
    if let Some(p) = cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // t^n - 1 divided by every proper divisor's cyclotomic polynomial
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d < n {
            let phi = cyclotomic_poly(d);
            p = div_monic(&p, &phi);
        }
    }
    let p = Arc::new(p);
    cache().lock().unwrap().insert(n, p.clone());
    p
}

/// Euler's totient, i.e. the degree of `Phi_n`.
pub fn totient(n: u64) -> u64 {
    cyclotomic_poly(n).len() as u64 - 1
}

/// Reduce `p` in place modulo `Phi_n`, truncating to degree `< phi(n)`.
pub fn reduce_mod_phi(p: &mut QPoly, n: u64) {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    if p.len() > deg {
        for i in (deg..p.len()).rev() {
            let c = std::mem::replace(&mut p[i], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            for (j, f) in phi.iter().enumerate().take(deg) {
                if !f.is_zero() {
                    p[i - deg + j] -= &c * BigRational::from_integer(f.clone());
                }
            }
        }
        p.truncate(deg);
    }
    trim(p);
}

fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &QPoly, b: &QPoly) -> QPoly {
    let mut out = a.clone();
    if out.len() < b.len() {
        out.resize(b.len(), BigRational::zero());
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

fn poly_divrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut rem = a.clone();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead = b.last().unwrap().clone();
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + b.len() - 1] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            rem[i + j] -= &c * y;
        }
        quot[i] = c;
    }
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

/// Inverse of `p` in `Q[t]/(Phi_n)`; `None` when `p` is zero there.
pub fn inverse_mod_phi(p: &QPoly, n: u64) -> Option<QPoly> {
    let mut a = p.clone();
    reduce_mod_phi(&mut a, n);
    if a.is_empty() {
        return None;
    }
    let modulus: QPoly = cyclotomic_poly(n).iter().map(|c| BigRational::from_integer(c.clone())).collect();
    // extended Euclid tracking the coefficient of `a`
    let (mut r0, mut r1) = (modulus, a);
    let (mut s0, mut s1): (QPoly, QPoly) = (Vec::new(), vec![BigRational::one()]);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is a nonzero constant since Phi_n is irreducible
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].clone();
    let mut inv: QPoly = s0.into_iter().map(|x| x / &c).collect();
    reduce_mod_phi(&mut inv, n);
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(*cyclotomic_poly(1), ints(&[-1, 1]));
        assert_eq!(*cyclotomic_poly(2), ints(&[1, 1]));
        assert_eq!(*cyclotomic_poly(4), ints(&[1, 0, 1]));
        assert_eq!(*cyclotomic_poly(6), ints(&[1, -1, 1]));
        assert_eq!(*cyclotomic_poly(12), ints(&[1, 0, -1, 0, 1]));
        assert_eq!(totient(105), 48);
        // Phi_105 is the first with a coefficient of absolute value 2
        assert!(cyclotomic_poly(105).iter().any(|c| *c == BigInt::from(-2)));
    }

    #[test]
    fn inverse_roundtrip() {
        let q = |n: i64| BigRational::from_integer(n.into());
        let p = vec![q(2), q(-1), q(3)];
        for n in [5u64, 8, 12, 20] {
            let inv = inverse_mod_phi(&p, n).unwrap();
            let mut prod = poly_mul(&p, &inv);
            reduce_mod_phi(&mut prod, n);
            assert_eq!(prod, vec![q(1)], "n = {n}");
        }
        // 1 + t^2 vanishes at a primitive 4th root
        assert!(inverse_mod_phi(&vec![q(1), q(0), q(1)], 4).is_none());
    }
}
