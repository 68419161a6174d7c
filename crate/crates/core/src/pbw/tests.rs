use std::collections::BTreeMap;

use rand::{rngs::StdRng, SeedableRng};

use super::*;
use crate::sample::{random_elem, random_tilde};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Letter {
    E,
    F,
    K(i64),
}

type Word = Vec<Letter>;

/// Apply one rewrite to the redex at `i`, if any.
fn rewrite_at(u: &Uq, w: &Word, c: &Scalar, i: usize) -> Option<Vec<(Word, Scalar)>> {
    use Letter::*;
    let lp = u.ellp() as usize;
    if i + lp <= w.len() && (w[i..i + lp].iter().all(|l| *l == E) || w[i..i + lp].iter().all(|l| *l == F)) {
        return Some(Vec::new());
    }
    if let K(0) = w[i] {
        let mut v = w.clone();
        v.remove(i);
        return Some(vec![(v, c.clone())]);
    }
    if i + 1 >= w.len() {
        return None;
    }
    let splice = |mid: &[Letter]| {
        let mut v = w[..i].to_vec();
        v.extend_from_slice(mid);
        v.extend_from_slice(&w[i + 2..]);
        v
    };
    match (w[i], w[i + 1]) {
        (K(n), K(m)) => Some(vec![(splice(&[K(n + m)]), c.clone())]),
        (K(n), E) => Some(vec![(splice(&[E, K(n)]), c * &u.xi(2 * n))]),
        (K(n), F) => Some(vec![(splice(&[F, K(n)]), c * &u.xi(-2 * n))]),
        (F, E) => {
            let d = c * u.inv_q1();
            Some(vec![(splice(&[E, F]), c.clone()), (splice(&[K(1)]), -&d), (splice(&[K(-1)]), d)])
        }
        _ => None,
    }
}

/// Normalize a word by single-step rewriting, picking the leftmost or rightmost redex.
fn normalize(u: &Uq, w: Word, leftmost: bool) -> BTreeMap<Word, Scalar> {
    let mut todo = vec![(w, u.scalar(1))];
    let mut done: BTreeMap<Word, Scalar> = BTreeMap::new();
    while let Some((w, c)) = todo.pop() {
        let idx: Vec<usize> = if leftmost { (0..w.len()).collect() } else { (0..w.len()).rev().collect() };
        match idx.into_iter().find_map(|i| rewrite_at(u, &w, &c, i)) {
            Some(next) => todo.extend(next),
            None => *done.entry(w).or_default() += &c,
        }
    }
    done
}

fn word_to_elem(u: &Uq, grade: Color, terms: &BTreeMap<Word, Scalar>) -> AlgElem {
    let mut out = AlgElem::zero(grade);
    for (w, c) in terms {
        let (mut e, mut f, mut k) = (0, 0, 0);
        for l in w {
            match l {
                Letter::E => {
                    assert!(f == 0 && k == 0, "not normal: {w:?}");
                    e += 1
                }
                Letter::F => {
                    assert!(k == 0, "not normal: {w:?}");
                    f += 1
                }
                Letter::K(n) => k += n,
            }
        }
        u.push_reduced(&mut out, Monomial::new(e, f, GaussQ::int(k)), c.clone());
    }
    out.cleanup()
}

fn mono_word(m: &Monomial) -> Word {
    let mut w = vec![Letter::E; m.e as usize];
    w.extend(vec![Letter::F; m.f as usize]);
    w.push(Letter::K(m.k.re.to_integer()));
    w
}

fn uq(ell: u32) -> Uq {
    Uq::with_ell(ell).unwrap()
}

#[test]
fn fe_relation() {
    for ell in [3, 4, 5, 6] {
        let u = uq(ell);
        let a = Color::frac(1, 3);
        let fe = u.mul(&u.f(a), &u.e(a)).unwrap();
        let kk = u.k(a, GaussQ::int(1)).sub(&u.k(a, GaussQ::int(-1))).unwrap().scale(u.inv_q1());
        let expected = u.mul(&u.e(a), &u.f(a)).unwrap().sub(&kk).unwrap();
        assert!(fe.equals(&expected), "ell = {ell}");
        let top = u.pow(&u.e(a), u.ellp() - 1).unwrap();
        assert!(!top.is_zero());
        assert!(u.mul(&top, &u.e(a)).unwrap().is_zero());
        assert!(u.pow(&u.f(a), u.ellp()).unwrap().is_zero());
    }
}

#[test]
fn product_matches_rewriting_oracle() {
    for ell in [3, 4, 5, 6] {
        let u = uq(ell);
        let a = Color::frac(2, 5);
        let lp = u.ellp();
        let mut rng = StdRng::seed_from_u64(ell as u64);
        for _ in 0..40 {
            use rand::Rng;
            let m1 = Monomial::new(rng.gen_range(0..lp), rng.gen_range(0..lp), GaussQ::int(rng.gen_range(-2..3)));
            let m2 = Monomial::new(rng.gen_range(0..lp), rng.gen_range(0..lp), GaussQ::int(rng.gen_range(-2..3)));
            let mut w = mono_word(&m1);
            w.extend(mono_word(&m2));
            let oracle = word_to_elem(&u, a, &normalize(&u, w, false));
            let got = u.mul(&u.mono(a, m1.e, m1.f, m1.k), &u.mono(a, m2.e, m2.f, m2.k)).unwrap();
            assert!(got.equals(&oracle), "ell={ell} {m1} * {m2}: {got} vs {oracle}");
        }
    }
}

#[test]
fn rewriting_is_confluent_on_short_words() {
    use Letter::*;
    let u = uq(4);
    let a = Color::frac(1, 2);
    let letters = [E, F, K(1), K(-1)];
    // every word of length <= 5 over the generators
    let mut words: Vec<Word> = vec![vec![]];
    for _ in 0..5 {
        let next: Vec<Word> = words
            .iter()
            .filter(|w| w.len() == words.last().unwrap().len())
            .flat_map(|w| letters.iter().map(move |l| [w.clone(), vec![*l]].concat()))
            .collect();
        words.extend(next);
    }
    for w in words.iter().filter(|w| !w.is_empty()) {
        let l = word_to_elem(&u, a, &normalize(&u, w.clone(), true));
        let r = word_to_elem(&u, a, &normalize(&u, w.clone(), false));
        assert!(l.equals(&r), "{w:?}");
        // and the closed-form product agrees
        let mut prod = u.one(a);
        for x in w {
            let g = match x {
                E => u.e(a),
                F => u.f(a),
                K(n) => u.k(a, GaussQ::int(*n)),
            };
            prod = u.mul(&prod, &g).unwrap();
        }
        assert!(prod.equals(&l), "{w:?}");
    }
}

#[test]
fn e_f_squared_against_oracle() {
    use Letter::*;
    let u = uq(5);
    let a = Color::zero();
    let ef2 = u.mul(&u.e(a), &u.pow(&u.f(a), 2).unwrap()).unwrap();
    let oracle = word_to_elem(&u, a, &normalize(&u, vec![E, F, F], true));
    assert!(ef2.equals(&oracle));
    let fe2 = u.mul(&u.f(a), &u.pow(&u.e(a), 2).unwrap()).unwrap();
    let oracle = word_to_elem(&u, a, &normalize(&u, vec![F, E, E], true));
    assert!(fe2.equals(&oracle));
}

#[test]
fn associativity_and_unit() {
    for ell in [3, 4, 6] {
        let u = uq(ell);
        let mut rng = StdRng::seed_from_u64(3);
        let a = Color::frac(7, 5);
        for coset in [GaussQ::zero(), GaussQ::frac(1, 2), GaussQ::frac(1, 3)] {
            let x = random_elem(&u, a, coset, 4, &mut rng);
            let y = random_elem(&u, a, GaussQ::frac(1, 5), 4, &mut rng);
            let z = random_tilde(&u, a, 4, &mut rng);
            let l = u.mul(&u.mul(&x, &y).unwrap(), &z).unwrap();
            let r = u.mul(&x, &u.mul(&y, &z).unwrap()).unwrap();
            assert!(l.equals(&r));
            assert!(u.mul(&u.one(a), &x).unwrap().equals(&x));
            assert!(u.mul(&x, &u.one(a)).unwrap().equals(&x));
        }
    }
}

#[test]
fn tilde_basis_is_closed() {
    for ell in [3, 4, 5] {
        let u = uq(ell);
        let a = Color::frac(1, 3);
        let basis = u.tilde_basis();
        let lp = u.ellp() as usize;
        assert_eq!(basis.len(), lp * lp * lp);
        let set: std::collections::BTreeSet<_> = basis.iter().collect();
        assert_eq!(set.len(), basis.len());
        for m1 in basis.iter().step_by(5) {
            for m2 in basis.iter().step_by(3) {
                let p = u.mul(&u.mono(a, m1.e, m1.f, m1.k), &u.mono(a, m2.e, m2.f, m2.k)).unwrap();
                assert!(p.terms.keys().all(|m| set.contains(m)));
            }
        }
    }
}

#[test]
fn reduction_folds_in_grade() {
    let u = uq(4);
    let a = Color::frac(1, 3);
    // K^2 = xi^{2a} in U_a for ell = 4
    let k2 = u.k(a, GaussQ::int(2));
    assert!(k2.equals(&u.scalar_elem(a, u.xi_c(GaussQ::frac(2, 3)))));
}

#[test]
fn coproduct_examples() {
    let u = uq(5);
    let (a, b) = (Color::frac(1, 2), Color::frac(1, 3));
    let one = u.coproduct(&u.one(a + b), a, b).unwrap();
    assert!(one.equals(&u.tensor_one(&[a, b])));
    let de = u.coproduct(&u.e(a + b), a, b).unwrap();
    let expected = u.tensor(&[&u.one(a), &u.e(b)]).add(&u.tensor(&[&u.e(a), &u.k(b, GaussQ::int(1))])).unwrap();
    assert!(de.equals(&expected));
    let de2 = u.coproduct(&u.pow(&u.e(a + b), 2).unwrap(), a, b).unwrap();
    assert!(de2.equals(&u.tmul(&de, &de).unwrap()));
    assert!(u.coproduct(&u.one(a), b, b).is_err());
}

#[test]
fn hopf_axioms_small() {
    let u = uq(4);
    let mut rng = StdRng::seed_from_u64(5);
    let (a, b, c) = (Color::frac(1, 2), Color::frac(1, 3), Color::frac(7, 5));
    for coset in [GaussQ::zero(), GaussQ::frac(1, 2)] {
        let x = random_elem(&u, a + b + c, coset, 3, &mut rng);
        let y = random_elem(&u, a + b + c, GaussQ::frac(1, 3), 3, &mut rng);
        // coassociativity
        let d = u.coproduct(&x, a + b, c).unwrap();
        let l = u.expand_leg(&d, 0, &[a, b], |z| u.coproduct(z, a, b)).unwrap();
        let d = u.coproduct(&x, a, b + c).unwrap();
        let r = u.expand_leg(&d, 1, &[b, c], |z| u.coproduct(z, b, c)).unwrap();
        assert!(l.equals(&r));
        assert!(u.iterated_coproduct(&x, &[a, b, c]).unwrap().equals(&l));
        // multiplicativity
        let xy = u.mul(&x, &y).unwrap();
        let lhs = u.coproduct(&xy, a, b + c).unwrap();
        let rhs = u.tmul(&u.coproduct(&x, a, b + c).unwrap(), &u.coproduct(&y, a, b + c).unwrap()).unwrap();
        assert!(lhs.equals(&rhs));
        // S S x = g x g^{-1}
        let s2 = u.antipode(&u.antipode(&x));
        let g = u.pivot(x.grade);
        let conj = u.mul_all(&[&g, &x, &u.pivot_inv(x.grade)]).unwrap();
        assert!(s2.equals(&conj));
        assert!(u.antipode_inv(&u.antipode(&x)).equals(&x));
    }
    // counit and antipode on grade 0 splits
    let x = random_elem(&u, a, GaussQ::frac(1, 2), 3, &mut rng);
    let d = u.coproduct(&x, Color::zero(), a).unwrap();
    let back = u.apply_leg(&d, 0, Color::zero(), |z| Ok(z.clone())).unwrap();
    let mut acc = AlgElem::zero(a);
    for (ms, c) in &back.terms {
        let e = u.counit(&u.mono(Color::zero(), ms[0].e, ms[0].f, ms[0].k)).unwrap();
        u.push_reduced(&mut acc, ms[1], c * &e);
    }
    assert!(acc.cleanup().equals(&x));
}

#[test]
fn antipode_and_counit_examples() {
    let u = uq(6);
    let a = Color::frac(1, 3);
    assert!(u.antipode(&u.one(a)).equals(&u.one(-a)));
    let se = u.mul(&u.e(-a), &u.k(-a, GaussQ::int(-1))).unwrap().neg();
    assert!(u.antipode(&u.e(a)).equals(&se));
    let z = Color::zero();
    assert!(u.counit(&u.one(z)).unwrap().is_one());
    assert!(u.counit(&u.mul(&u.e(z), &u.f(z)).unwrap()).unwrap().is_zero());
    assert!(u.counit(&u.k(z, GaussQ::frac(3, 2))).unwrap().is_one());
    assert!(u.counit(&u.one(a)).is_err());
}

#[test]
fn pivot_forms() {
    let u = uq(6);
    let a = Color::frac(2, 7);
    let expected = u.k(a, GaussQ::int(1)).scale(&u.xi_c(GaussQ::int(-(u.ellp() as i64)) * a.value()));
    assert!(u.pivot(a).equals(&expected));
    let b = Color::frac(1, 2);
    let d = u.coproduct(&u.pivot(a + b), a, b).unwrap();
    assert!(d.equals(&u.tensor(&[&u.pivot(a), &u.pivot(b)])));
    let u3 = uq(3);
    let g = u3.pivot(Color::zero());
    // K^{-2} = K^{1/2} K^{-5/2} and K^{3/2} = 1 in grade 0
    assert!(g.equals(&u3.k(Color::zero(), GaussQ::int(1))));
}

#[test]
fn iterated_coproduct_grouplike() {
    let u = uq(4);
    let cs = [Color::frac(1, 2), Color::frac(1, 3), Color::frac(1, 5)];
    let total = cs[0] + cs[1] + cs[2];
    let k = GaussQ::frac(3, 4);
    let t = u.iterated_coproduct(&u.k(total, k), &cs).unwrap();
    assert!(t.equals(&u.tensor(&[&u.k(cs[0], k), &u.k(cs[1], k), &u.k(cs[2], k)])));
    let x = u.e(cs[0]);
    assert!(u.iterated_coproduct(&x, &cs[..1]).unwrap().equals(&TensorElem::from_alg(&x)));
}

#[test]
fn commutant_examples() {
    let u = uq(4);
    let (a, b) = (Color::frac(1, 3), Color::frac(2, 5));
    assert!(u.in_commutant(&u.tensor_one(&[a, b])).unwrap());
    assert!(!u.in_commutant(&u.tensor(&[&u.e(a), &u.one(b)])).unwrap());
    let center = u.center_basis(a + b).unwrap();
    let d = u.coproduct(&center[1], a, b).unwrap();
    assert!(u.in_commutant(&d).unwrap());
}

#[test]
fn center_dimension() {
    for ell in [3, 4, 5, 6] {
        let u = uq(ell);
        let a = Color::frac(1, 3);
        let z = u.center_basis(a).unwrap();
        assert_eq!(z.len(), u.ellp() as usize, "ell = {ell}");
        let mut rng = StdRng::seed_from_u64(1);
        for c in &z {
            let x = random_tilde(&u, a, 5, &mut rng);
            assert!(u.commutator(c, &x).unwrap().is_zero());
        }
    }
}

#[test]
fn hh0_quotient() {
    let u = uq(4);
    let a = Color::frac(1, 3);
    let h = u.hh0(a).unwrap();
    let mut rng = StdRng::seed_from_u64(2);
    for _ in 0..5 {
        let x = random_tilde(&u, a, 4, &mut rng);
        let y = random_tilde(&u, a, 4, &mut rng);
        assert!(u.hh0_equal(&h, &u.mul(&x, &y).unwrap(), &u.mul(&y, &x).unwrap()).unwrap());
    }
    assert!(u.hh0_reduce(&h, &AlgElem::zero(a)).unwrap().is_empty());
    // brute-force rank of all basis-pair commutators
    let basis = u.tilde_basis();
    let index = u.tilde_index();
    let mut rows = Vec::new();
    for m1 in &basis {
        for m2 in &basis {
            let x = u.mono(a, m1.e, m1.f, m1.k);
            let y = u.mono(a, m2.e, m2.f, m2.k);
            rows.push(u.tilde_coords(&u.commutator(&x, &y).unwrap(), &index).unwrap());
        }
    }
    assert_eq!(crate::linalg::rank(&rows), h.commutator_rank());
    assert_eq!(h.dim(), basis.len() - h.commutator_rank());
    assert!(u.hh0_reduce(&h, &u.k(a, GaussQ::frac(1, 2))).is_err());
}

#[test]
fn tensors_survive_json() {
    let u = uq(3);
    let r = u.r_matrix(Color::frac(1, 3), Color::frac(-1, 2)).unwrap();
    let text = serde_json::to_string(&*r).unwrap();
    let back: TensorElem = serde_json::from_str(&text).unwrap();
    assert!(back.equals(&r));
    assert_eq!(back.grades, r.grades);
}
