//! Randomized checks of the Hopf, quasitriangular and ribbon identities, shared by the
//! command line and the test suites.

use rand::Rng;

use crate::error::Result;
use crate::gauss::GaussQ;
use crate::integrals::AxiomReport;
use crate::pbw::{AlgElem, Color, TensorElem, Uq};
use crate::sample::random_elem;

/// Grades used by the default suites: the two non-admissible classes and three generic ones.
pub fn sample_grades() -> Vec<Color> {
    vec![Color::zero(), Color::int(1), Color::frac(1, 2), Color::frac(1, 3), Color::frac(7, 5)]
}

/// A random rational color with a small denominator.
pub fn random_color(rng: &mut impl Rng) -> Color {
    let d = rng.gen_range(2..=9);
    Color::frac(rng.gen_range(-2 * d..2 * d), d)
}

fn random_coset(rng: &mut impl Rng) -> GaussQ {
    [GaussQ::zero(), GaussQ::frac(1, 2), GaussQ::frac(1, 3), GaussQ::frac(rng.gen_range(1..7), 7)][rng.gen_range(0..4)]
}

fn record(report: &mut AxiomReport, ok: bool, what: impl FnOnce() -> String) {
    report.checked += 1;
    if !ok {
        report.failures.push(what());
    }
}

impl Uq {
    fn counit_leg(&self, t: &TensorElem, i: usize) -> Result<AlgElem> {
        self.contract_leg(t, i, |x| self.counit(x))?.into_alg()
    }

    /// Coassociativity, counit, antipode, multiplicativity of the coproduct and the pivot
    /// identities, `samples` random elements per identity for every grade in `grades`.
    pub fn check_hopf_axioms(&self, grades: &[Color], samples: usize, rng: &mut impl Rng) -> Result<AxiomReport> {
        let mut report = AxiomReport::default();
        let nterms = self.ellp() as usize;
        let z = Color::zero();
        for (i, &a) in grades.iter().enumerate() {
            let b = grades[(i + 1) % grades.len()];
            let c = grades[(i + 2) % grades.len()];
            for _ in 0..samples {
                let x = random_elem(self, a + b + c, random_coset(rng), nterms, rng);
                let l = self.expand_leg(&self.coproduct(&x, a + b, c)?, 0, &[a, b], |y| self.coproduct(y, a, b))?;
                let r = self.expand_leg(&self.coproduct(&x, a, b + c)?, 1, &[b, c], |y| self.coproduct(y, b, c))?;
                record(&mut report, l.equals(&r), || format!("coassociativity at ({a}, {b}, {c}) on {x}"));

                let x = random_elem(self, a, random_coset(rng), nterms, rng);
                let left = self.counit_leg(&self.coproduct(&x, z, a)?, 0)?;
                let right = self.counit_leg(&self.coproduct(&x, a, z)?, 1)?;
                record(&mut report, left.equals(&x) && right.equals(&x), || format!("counit at {a} on {x}"));

                let s2 = self.antipode(&self.antipode(&x));
                let conj = self.mul_all(&[&self.pivot(a), &x, &self.pivot_inv(a)])?;
                record(&mut report, s2.equals(&conj), || format!("S^2 = Ad(g) at {a} on {x}"));

                let y = random_elem(self, a + b, random_coset(rng), nterms, rng);
                let w = random_elem(self, a + b, random_coset(rng), nterms, rng);
                let lhs = self.coproduct(&self.mul(&y, &w)?, a, b)?;
                let rhs = self.tmul(&self.coproduct(&y, a, b)?, &self.coproduct(&w, a, b)?)?;
                record(&mut report, lhs.equals(&rhs), || format!("multiplicativity at ({a}, {b}) on {y} and {w}"));

                let h = random_elem(self, z, random_coset(rng), nterms, rng);
                let h2 = random_elem(self, z, random_coset(rng), nterms, rng);
                let eps = self.counit(&h)?;
                let unit = self.one(a).scale(&eps);
                let sl = self.apply_leg(&self.coproduct(&h, -a, a)?, 0, a, |m| Ok(self.antipode(m)))?;
                let sr = self.apply_leg(&self.coproduct(&h, a, -a)?, 1, a, |m| Ok(self.antipode(m)))?;
                let ok = self.multiply_legs(&sl, &[0, 1])?.equals(&unit) && self.multiply_legs(&sr, &[0, 1])?.equals(&unit);
                record(&mut report, ok, || format!("antipode at {a} on {h}"));
                let eps_mul = self.counit(&self.mul(&h, &h2)?)? == &eps * &self.counit(&h2)?;
                record(&mut report, eps_mul, || format!("counit multiplicativity on {h} and {h2}"));
            }
            let grouplike = self.coproduct(&self.pivot(a + b), a, b)?.equals(&self.tensor(&[&self.pivot(a), &self.pivot(b)]));
            record(&mut report, grouplike, || format!("pivot grouplike at ({a}, {b})"));
        }
        record(&mut report, self.counit(&self.pivot(z))?.is_one(), || "counit of the pivot".into());
        Ok(report)
    }

    /// The three defining properties of the R-matrix, both formulas for its inverse and the
    /// antipode symmetry, for every ordered triple of `colors`; the Yang-Baxter equation on request.
    pub fn check_quasitriangular(&self, colors: &[Color], samples: usize, yang_baxter: bool, rng: &mut impl Rng) -> Result<AxiomReport> {
        let mut report = AxiomReport::default();
        let nterms = self.ellp() as usize;
        let r = |a: Color, b: Color| -> Result<TensorElem> { Ok((*self.r_matrix(a, b)?).clone()) };
        for &a in colors {
            for &b in colors {
                let rab = r(a, b)?;
                let mut gens = vec![self.e(a + b), self.f(a + b), self.k(a + b, GaussQ::frac(1, 2))];
                gens.extend((0..samples).map(|_| random_elem(self, a + b, random_coset(rng), nterms, rng)));
                for x in &gens {
                    let lhs = self.tmul(&rab, &self.coproduct(x, a, b)?)?;
                    let rhs = self.tmul(&self.coproduct(x, b, a)?.flip(), &rab)?;
                    record(&mut report, lhs.equals(&rhs), || format!("R Delta = Delta^op R at ({a}, {b}) on {x}"));
                }

                let one = self.tensor_one(&[a, b]);
                let inv1 = self.apply_leg(&r(a, -b)?, 1, b, |m| Ok(self.antipode_inv(m)))?;
                let inv2 = self.apply_leg(&r(-a, b)?, 0, a, |m| Ok(self.antipode(m)))?;
                let ok = self.tmul(&rab, &inv1)?.equals(&one) && inv1.equals(&inv2) && inv1.equals(&*self.r_inverse(a, b)?);
                record(&mut report, ok, || format!("inverse formulas at ({a}, {b})"));

                let ss = self.apply_leg(&self.apply_leg(&rab, 0, -a, |m| Ok(self.antipode(m)))?, 1, -b, |m| Ok(self.antipode(m)))?;
                record(&mut report, ss.equals(&r(-a, -b)?), || format!("(S (x) S) R = R at ({a}, {b})"));

                for &c in colors {
                    let r13 = self.insert_unit(&r(a, c)?, 1, b);
                    let r12 = self.insert_unit(&rab, 2, c);
                    let r23 = self.insert_unit(&r(b, c)?, 0, a);
                    let lhs = self.expand_leg(&r(a, b + c)?, 1, &[b, c], |y| self.coproduct(y, b, c))?;
                    record(&mut report, lhs.equals(&self.tmul(&r13, &r12)?), || format!("(id (x) Delta) R at ({a}, {b}, {c})"));
                    let lhs = self.expand_leg(&r(a + b, c)?, 0, &[a, b], |y| self.coproduct(y, a, b))?;
                    record(&mut report, lhs.equals(&self.tmul(&r13, &r23)?), || format!("(Delta (x) id) R at ({a}, {b}, {c})"));
                    if yang_baxter {
                        let lhs = self.tmul(&self.tmul(&r12, &r13)?, &r23)?;
                        let rhs = self.tmul(&self.tmul(&r23, &r13)?, &r12)?;
                        record(&mut report, lhs.equals(&rhs), || format!("Yang-Baxter at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        Ok(report)
    }

    /// The two expressions for the twist agree, and the twist is invertible and central.
    pub fn check_ribbon(&self, colors: &[Color]) -> Result<AxiomReport> {
        let mut report = AxiomReport::default();
        for &a in colors {
            let t = self.twist(a)?;
            record(&mut report, t.equals(&self.twist_alt(a)?), || format!("twist expressions differ at {a}"));
            record(&mut report, self.mul(&t, &self.twist_inv(a)?)?.equals(&self.one(a)), || format!("twist inverse at {a}"));
            let mut central = true;
            for g in [self.e(a), self.f(a), self.k(a, GaussQ::frac(1, 3))] {
                central &= self.commutator(&t, &g)?.is_zero();
            }
            record(&mut report, central, || format!("twist not central at {a}"));
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use rand::{rngs::StdRng, SeedableRng};

    use super::*;

    #[test]
    fn hopf_suite_small() {
        let u = Uq::with_ell(4).unwrap();
        let mut rng = StdRng::seed_from_u64(1);
        let r = u.check_hopf_axioms(&sample_grades(), 3, &mut rng).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert!(r.checked > 30);
    }

    #[test]
    fn quasitriangular_suite_small() {
        let u = Uq::with_ell(3).unwrap();
        let mut rng = StdRng::seed_from_u64(2);
        let r = u.check_quasitriangular(&[Color::frac(1, 2), Color::frac(1, 3)], 1, true, &mut rng).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn ribbon_suite_small() {
        let u = Uq::with_ell(5).unwrap();
        let mut rng = StdRng::seed_from_u64(3);
        let colors: Vec<Color> = (0..3).map(|_| random_color(&mut rng)).collect();
        assert!(u.check_ribbon(&colors).unwrap().passed());
    }

    #[test]
    fn a_broken_identity_is_reported() {
        let u = Uq::with_ell(3).unwrap();
        let mut report = AxiomReport::default();
        let a = Color::frac(1, 2);
        record(&mut report, u.e(a).equals(&u.f(a)), || "E = F".into());
        assert_eq!(report.failures, vec!["E = F".to_string()]);
    }
}
