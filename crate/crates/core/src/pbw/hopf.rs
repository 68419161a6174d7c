use std::collections::BTreeMap;

use super::{check_grade, AlgElem, Color, Monomial, TensorElem, Uq};
use crate::error::{Error, Result};
use crate::gauss::GaussQ;
use crate::scalar::Scalar;

type Raw = Vec<(Monomial, Scalar)>;
type Raw2 = Vec<(Monomial, Monomial, Scalar)>;

fn m(e: u32, f: u32, k: i64) -> Monomial {
    Monomial::new(e, f, GaussQ::int(k))
}

impl Uq {
    fn mul_raw(&self, x: &Raw, y: &Raw) -> Raw {
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (mx, cx) in x {
            for (my, cy) in y {
                for (mm, c) in self.mul_mono_raw(mx, my) {
                    *acc.entry(mm).or_default() += &(c * cx * cy);
                }
            }
        }
        acc.into_iter().map(|(k, c)| (k, c.canonical())).filter(|(_, c)| !c.is_zero()).collect()
    }

    fn mul_raw2(&self, x: &Raw2, y: &Raw2) -> Raw2 {
        let mut acc: BTreeMap<(Monomial, Monomial), Scalar> = BTreeMap::new();
        for (a1, a2, ca) in x {
            for (b1, b2, cb) in y {
                let c = ca * cb;
                let left = self.mul_mono_raw(a1, b1);
                let right = self.mul_mono_raw(a2, b2);
                for (l, cl) in &left {
                    for (r, cr) in &right {
                        *acc.entry((*l, *r)).or_default() += &(&c * cl * cr);
                    }
                }
            }
        }
        acc.into_iter().map(|((l, r), c)| (l, r, c.canonical())).filter(|(_, _, c)| !c.is_zero()).collect()
    }

    /// Powers `b^0 .. b^{ell'-1}` in `U^K`.
    fn raw_powers(&self, b: &Raw) -> Vec<Raw> {
        let mut out = vec![vec![(Monomial::unit(), self.scalar(1))]];
        for i in 1..self.ellp() as usize {
            let next = self.mul_raw(&out[i - 1], b);
            out.push(next);
        }
        out
    }

    fn delta_table(&self) -> &Vec<Vec<Raw2>> {
        self.delta_ef.get_or_init(|| {
            let one = self.scalar(1);
            let de: Raw2 = vec![(m(0, 0, 0), m(1, 0, 0), one.clone()), (m(1, 0, 0), m(0, 0, 1), one.clone())];
            let df: Raw2 = vec![(m(0, 0, -1), m(0, 1, 0), one.clone()), (m(0, 1, 0), m(0, 0, 0), one.clone())];
            let unit: Raw2 = vec![(Monomial::unit(), Monomial::unit(), one)];
            let lp = self.ellp() as usize;
            let mut epow = vec![unit.clone()];
            let mut fpow = vec![unit];
            for i in 1..lp {
                let e = self.mul_raw2(&epow[i - 1], &de);
                let f = self.mul_raw2(&fpow[i - 1], &df);
                epow.push(e);
                fpow.push(f);
            }
            (0..lp).map(|e| (0..lp).map(|f| self.mul_raw2(&epow[e], &fpow[f])).collect()).collect()
        })
    }

    fn antipode_table(&self, inverse: bool) -> &Vec<Vec<Raw>> {
        let cell = if inverse { &self.antipode_inv_ef } else { &self.antipode_ef };
        cell.get_or_init(|| {
            let neg = self.scalar(-1);
            // S(E) = -E K^{-1}, S(F) = -K F; S^{-1}(E) = -K^{-1} E, S^{-1}(F) = -F K
            let (se, sf) = if inverse {
                (
                    self.mul_raw(&vec![(m(0, 0, -1), neg.clone())], &vec![(m(1, 0, 0), self.scalar(1))]),
                    vec![(m(0, 1, 1), neg)],
                )
            } else {
                (vec![(m(1, 0, -1), neg.clone())], self.mul_raw(&vec![(m(0, 0, 1), neg)], &vec![(m(0, 1, 0), self.scalar(1))]))
            };
            let epow = self.raw_powers(&se);
            let fpow = self.raw_powers(&sf);
            let lp = self.ellp() as usize;
            (0..lp).map(|e| (0..lp).map(|f| self.mul_raw(&fpow[f], &epow[e])).collect()).collect()
        })
    }

    /// `Delta_{a,b}: U_{a+b} -> U_a (x) U_b`.
    pub fn coproduct(&self, x: &AlgElem, a: Color, b: Color) -> Result<TensorElem> {
        check_grade(a + b, x.grade)?;
        let table = self.delta_table();
        let mut out = TensorElem::zero(vec![a, b]);
        for (mono, c) in &x.terms {
            for (l, r, d) in &table[mono.e as usize][mono.f as usize] {
                let (l, fl) = self.reduce(Monomial { k: l.k + mono.k, ..*l }, a);
                let (r, fr) = self.reduce(Monomial { k: r.k + mono.k, ..*r }, b);
                let mut v = c * d;
                if let Some(f) = fl {
                    v = v * f;
                }
                if let Some(f) = fr {
                    v = v * f;
                }
                out.add_term(vec![l, r], v);
            }
        }
        Ok(out.cleanup())
    }

    /// `Delta_{a_1, ..., a_n}`, splitting off the last factor each time.
    pub fn iterated_coproduct(&self, x: &AlgElem, colors: &[Color]) -> Result<TensorElem> {
        let total = colors.iter().fold(Color::zero(), |acc, c| acc + *c);
        check_grade(total, x.grade)?;
        if colors.is_empty() {
            return Err(Error::Input("iterated coproduct needs at least one color".into()));
        }
        let mut t = TensorElem::from_alg(x);
        let mut rest = total;
        for i in (1..colors.len()).rev() {
            rest = rest - colors[i];
            let (head, last) = (rest, colors[i]);
            t = self.expand_leg(&t, 0, &[head, last], |y| self.coproduct(y, head, last))?;
        }
        Ok(t)
    }

    fn antipode_impl(&self, x: &AlgElem, inverse: bool) -> AlgElem {
        let table = self.antipode_table(inverse);
        let mut out = AlgElem::zero(-x.grade);
        for (mono, c) in &x.terms {
            let kinv = Monomial::kpow(-mono.k);
            for (t, d) in &table[mono.e as usize][mono.f as usize] {
                for (mm, s) in self.mul_mono_raw(&kinv, t) {
                    self.push_reduced(&mut out, mm, s * d * c);
                }
            }
        }
        out.cleanup()
    }

    /// `S_a: U_a -> U_{-a}`, an anti-homomorphism.
    pub fn antipode(&self, x: &AlgElem) -> AlgElem {
        self.antipode_impl(x, false)
    }

    /// `S_{-a}^{-1}: U_a -> U_{-a}`.
    pub fn antipode_inv(&self, x: &AlgElem) -> AlgElem {
        self.antipode_impl(x, true)
    }

    pub fn counit(&self, x: &AlgElem) -> Result<Scalar> {
        if !x.grade.is_zero() {
            return Err(Error::Grade(format!("counit needs grade 0, got {}", x.grade)));
        }
        Ok(x.terms.iter().filter(|(m, _)| m.e == 0 && m.f == 0).map(|(_, c)| c.clone()).sum::<Scalar>().canonical())
    }

    /// `g_a = K^{1 - ell'}`.
    pub fn pivot(&self, a: Color) -> AlgElem {
        self.k(a, GaussQ::int(1 - self.ellp() as i64))
    }

    pub fn pivot_inv(&self, a: Color) -> AlgElem {
        self.k(a, GaussQ::int(self.ellp() as i64 - 1))
    }
}
