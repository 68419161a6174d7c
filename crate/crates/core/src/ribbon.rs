//! R-matrix `R_{a,b} = H_{a,b} R^_{a,b}`, its inverse and the twist.

use std::sync::Arc;

use num_rational::Rational64;

use crate::error::Result;
use crate::gauss::GaussQ;
use crate::pbw::{AlgElem, Color, Monomial, TensorElem, Uq};
use crate::scalar::Scalar;

impl Uq {
    /// `H_{a,b}` built from the lifts `alpha = a/2`, `beta = b/2`.
    pub fn h_factor(&self, a: Color, b: Color, alpha: GaussQ, beta: GaussQ) -> TensorElem {
        let lp = self.ellp() as i64;
        let inv_lp = Scalar::from_rational(Rational64::new(1, lp)).to_backend(self.root.backend);
        let mut out = TensorElem::zero(vec![a, b]);
        for m1 in 0..lp {
            for m2 in 0..lp {
                let (b1, a2) = (beta + GaussQ::int(m1), alpha + GaussQ::int(m2));
                let c = self.xi_c(b1 * a2 * GaussQ::int(-2)) * &inv_lp;
                let (l, fl) = self.reduce(Monomial::kpow(b1), a);
                let (r, fr) = self.reduce(Monomial::kpow(a2), b);
                let c = [fl, fr].into_iter().flatten().fold(c, |acc, f| acc * f);
                out.add_term(vec![l, r], c);
            }
        }
        out.cleanup()
    }

    /// `sum_n [1]^{2n} / [n]! xi^{n(n-1)/2} E^n (x) F^n`.
    pub fn r_check(&self, a: Color, b: Color) -> TensorElem {
        let q1 = self.root.qint(Rational64::from_integer(1));
        let mut out = TensorElem::zero(vec![a, b]);
        let mut q1pow = self.scalar(1);
        for n in 0..self.ellp() {
            let c = &q1pow * &self.root.qfact(n).inv().expect("[n]! is nonzero below ell'");
            let c = c * self.root.xi_pow(Rational64::from_integer((n * n.saturating_sub(1) / 2) as i64));
            out.add_term(vec![Monomial::new(n, 0, GaussQ::zero()), Monomial::new(0, n, GaussQ::zero())], c);
            q1pow = &q1pow * &q1 * &q1;
        }
        out.cleanup()
    }

    /// `R_{a,b}` with explicit lifts of `a/2` and `b/2`.
    pub fn r_matrix_with_lift(&self, a: Color, b: Color, alpha: GaussQ, beta: GaussQ) -> Result<TensorElem> {
        self.tmul(&self.h_factor(a, b, alpha, beta), &self.r_check(a, b))
    }

    pub fn r_matrix(&self, a: Color, b: Color) -> Result<Arc<TensorElem>> {
        self.cache.r.get_or_try(&(a, b), || {
            let half = Rational64::new(1, 2);
            self.r_matrix_with_lift(a, b, a.value().scale(half), b.value().scale(half))
        })
    }

    /// `R_{a,b}^{-1} = (1 (x) S^{-1}) R_{a,-b}`.
    pub fn r_inverse(&self, a: Color, b: Color) -> Result<Arc<TensorElem>> {
        self.cache.r_inv.get_or_try(&(a, b), || {
            let r = self.r_matrix(a, -b)?;
            self.apply_leg(&r, 1, b, |x| Ok(self.antipode_inv(x)))
        })
    }

    /// `R_{a,b}^{-1} = (S (x) 1) R_{-a,b}`, the second expression for the inverse.
    pub fn r_inverse_alt(&self, a: Color, b: Color) -> Result<TensorElem> {
        let r = self.r_matrix(-a, b)?;
        self.apply_leg(&r, 0, a, |x| Ok(self.antipode(x)))
    }

    /// `tau(R_{b,a}) R_{a,b} in U_a (x) U_b`.
    pub fn double_braiding(&self, a: Color, b: Color) -> Result<TensorElem> {
        self.tmul(&self.r_matrix(b, a)?.flip(), &*self.r_matrix(a, b)?)
    }

    fn leg_product(&self, t: &TensorElem, middle: &AlgElem, swap: bool) -> Result<AlgElem> {
        let g = t.grades[0];
        let mut out = AlgElem::zero(g);
        for (ms, c) in &t.terms {
            let (x, y) = if swap { (ms[1], ms[0]) } else { (ms[0], ms[1]) };
            let mut xe = AlgElem::zero(g);
            xe.terms.insert(x, c.clone());
            let mut ye = AlgElem::zero(g);
            ye.terms.insert(y, self.scalar(1));
            for (m, d) in self.mul_all(&[&xe, middle, &ye])?.terms {
                out.add_term(m, d);
            }
        }
        Ok(out.cleanup())
    }

    /// `theta_a = sum s g r` for `R_{a,a} = sum r (x) s`.
    pub fn twist(&self, a: Color) -> Result<AlgElem> {
        self.leg_product(&*self.r_matrix(a, a)?, &self.pivot(a), true)
    }

    /// `theta_a = sum r g^{-1} s`, the second defining expression.
    pub fn twist_alt(&self, a: Color) -> Result<AlgElem> {
        self.leg_product(&*self.r_matrix(a, a)?, &self.pivot_inv(a), false)
    }

    /// `theta_a^{-1} = sum r' g s'` for `R_{a,a}^{-1} = sum r' (x) s'`.
    pub fn twist_inv(&self, a: Color) -> Result<AlgElem> {
        self.leg_product(&*self.r_inverse(a, a)?, &self.pivot(a), false)
    }
}
