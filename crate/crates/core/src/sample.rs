//! Random elements for property checks.

use num_rational::Rational64;
use rand::Rng;

use crate::gauss::GaussQ;
use crate::pbw::{AlgElem, Color, Monomial, Uq};
use crate::scalar::Scalar;

/// A small random coefficient `(p/q) xi^k`.
pub fn random_scalar(u: &Uq, rng: &mut impl Rng) -> Scalar {
    let c = Rational64::new(rng.gen_range(-3..=3), rng.gen_range(1..=2));
    let c = if c == Rational64::from_integer(0) { Rational64::from_integer(1) } else { c };
    Scalar::from_rational(c).to_backend(u.root.backend) * u.xi(rng.gen_range(0..u.ell() as i64))
}

/// Random element of `U_a` supported on `K^{coset + Z}` with `nterms` monomials.
pub fn random_elem(u: &Uq, grade: Color, coset: GaussQ, nterms: usize, rng: &mut impl Rng) -> AlgElem {
    let lp = u.ellp();
    let mut x = AlgElem::zero(grade);
    for _ in 0..nterms {
        let m = Monomial::new(rng.gen_range(0..lp), rng.gen_range(0..lp), coset + GaussQ::int(rng.gen_range(-(lp as i64)..lp as i64)));
        u.push_reduced(&mut x, m, random_scalar(u, rng));
    }
    x.cleanup()
}

/// Random element of the finite subalgebra.
pub fn random_tilde(u: &Uq, grade: Color, nterms: usize, rng: &mut impl Rng) -> AlgElem {
    random_elem(u, grade, GaussQ::zero(), nterms, rng)
}
