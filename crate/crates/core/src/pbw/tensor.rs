use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{check_grade, AlgElem, Color, Monomial, Uq};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Element of `U_{a_1} (x) ... (x) U_{a_n}`. Serializes as its grades and a list of terms.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(into = "TensorDoc", from = "TensorDoc")]
pub struct TensorElem {
    pub grades: Vec<Color>,
    pub terms: BTreeMap<Vec<Monomial>, Scalar>,
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    monomials: Vec<Monomial>,
    coeff: Scalar,
}

#[derive(Serialize, Deserialize)]
struct TensorDoc {
    grades: Vec<Color>,
    terms: Vec<TermDoc>,
}

impl From<TensorElem> for TensorDoc {
    fn from(t: TensorElem) -> Self {
        let terms = t.terms.into_iter().map(|(monomials, coeff)| TermDoc { monomials, coeff }).collect();
        TensorDoc { grades: t.grades, terms }
    }
}

impl From<TensorDoc> for TensorElem {
    fn from(d: TensorDoc) -> Self {
        let mut t = TensorElem::zero(d.grades);
        for term in d.terms {
            t.add_term(term.monomials, term.coeff);
        }
        t
    }
}

impl TensorElem {
    pub fn zero(grades: Vec<Color>) -> Self {
        TensorElem { grades, terms: BTreeMap::new() }
    }

    pub fn arity(&self) -> usize {
        self.grades.len()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    pub fn add_term(&mut self, m: Vec<Monomial>, c: Scalar) {
        match self.terms.get_mut(&m) {
            Some(v) => *v += &c,
            None => {
                self.terms.insert(m, c);
            }
        }
    }

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

    pub fn scale(&self, s: &Scalar) -> TensorElem {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect();
        TensorElem { grades: self.grades.clone(), terms }.cleanup()
    }

    pub fn add(&self, o: &TensorElem) -> Result<TensorElem> {
        if self.grades != o.grades {
            return Err(Error::Grade(format!("tensor grades {:?} vs {:?}", self.grades, o.grades)));
        }
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out.cleanup())
    }

    pub fn sub(&self, o: &TensorElem) -> Result<TensorElem> {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    pub fn equals(&self, o: &TensorElem) -> bool {
        self.grades == o.grades && self.sub(o).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// The single leg of an arity-one tensor.
    pub fn into_alg(self) -> Result<AlgElem> {
        if self.arity() != 1 {
            return Err(Error::Grade(format!("expected one leg, found {}", self.arity())));
        }
        let terms = self.terms.into_iter().map(|(m, c)| (m[0], c)).collect();
        Ok(AlgElem { grade: self.grades[0], terms })
    }

    pub fn from_alg(x: &AlgElem) -> TensorElem {
        let terms = x.terms.iter().map(|(m, c)| (vec![*m], c.clone())).collect();
        TensorElem { grades: vec![x.grade], terms }
    }

    /// Reorder legs: leg `i` of the result is leg `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> TensorElem {
        let grades = perm.iter().map(|&i| self.grades[i]).collect();
        let terms = self.terms.iter().map(|(m, c)| (perm.iter().map(|&i| m[i]).collect(), c.clone())).collect();
        TensorElem { grades, terms }
    }

    /// `x (x) y -> y (x) x` on a two-leg tensor.
    pub fn flip(&self) -> TensorElem {
        self.permute(&[1, 0])
    }
}

impl fmt::Display for TensorElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(ms, c)| {
                let legs: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
                format!("({c})*{}", legs.join(" (x) "))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Uq {
    /// `x_1 (x) ... (x) x_n`.
    pub fn tensor(&self, xs: &[&AlgElem]) -> TensorElem {
        let mut out = TensorElem { grades: xs.iter().map(|x| x.grade).collect(), terms: BTreeMap::new() };
        out.terms.insert(Vec::new(), Scalar::one());
        for x in xs {
            let mut next = BTreeMap::new();
            for (ms, c) in &out.terms {
                for (m, d) in &x.terms {
                    let mut key = ms.clone();
                    key.push(*m);
                    next.insert(key, c * d);
                }
            }
            out.terms = next;
        }
        out
    }

    pub fn tensor_one(&self, grades: &[Color]) -> TensorElem {
        let ones: Vec<AlgElem> = grades.iter().map(|g| self.one(*g)).collect();
        self.tensor(&ones.iter().collect::<Vec<_>>())
    }

    /// Factorwise product.
    pub fn tmul(&self, x: &TensorElem, y: &TensorElem) -> Result<TensorElem> {
        if x.grades != y.grades {
            return Err(Error::Grade(format!("tensor grades {:?} vs {:?}", x.grades, y.grades)));
        }
        let n = x.arity();
        let mut out = TensorElem::zero(x.grades.clone());
        for (mx, cx) in &x.terms {
            for (my, cy) in &y.terms {
                let mut partial: Vec<(Vec<Monomial>, Scalar)> = vec![(Vec::with_capacity(n), self.scalar(1))];
                for i in 0..n {
                    let prods = self.mul_mono_raw(&mx[i], &my[i]);
                    let mut next = Vec::with_capacity(partial.len() * prods.len());
                    for (ms, c) in &partial {
                        for (m, d) in &prods {
                            let (m, f) = self.reduce(*m, x.grades[i]);
                            let mut key = ms.clone();
                            key.push(m);
                            let mut cd = c * d;
                            if let Some(f) = f {
                                cd = cd * f;
                            }
                            next.push((key, cd));
                        }
                    }
                    partial = next;
                }
                let cxy = cx * cy;
                for (k, c) in partial {
                    out.add_term(k, &cxy * &c);
                }
            }
        }
        Ok(out.cleanup())
    }

    /// Apply a linear map to leg `i`; `f` maps a single monomial of grade `grades[i]`.
    pub fn apply_leg<F>(&self, t: &TensorElem, i: usize, new_grade: Color, f: F) -> Result<TensorElem>
    where
        F: Fn(&AlgElem) -> Result<AlgElem>,
    {
        let mut grades = t.grades.clone();
        grades[i] = new_grade;
        let mut out = TensorElem::zero(grades);
        let mut memo: BTreeMap<Monomial, AlgElem> = BTreeMap::new();
        for (ms, c) in &t.terms {
            if let Entry::Vacant(e) = memo.entry(ms[i]) {
                let mut single = AlgElem::zero(t.grades[i]);
                single.terms.insert(ms[i], Scalar::one());
                let img = f(&single)?;
                check_grade(new_grade, img.grade)?;
                e.insert(img);
            }
            for (m, d) in &memo[&ms[i]].terms {
                let mut key = ms.clone();
                key[i] = *m;
                out.add_term(key, c * d);
            }
        }
        Ok(out.cleanup())
    }

    /// Replace leg `i` by the legs of a map into a tensor product.
    pub fn expand_leg<F>(&self, t: &TensorElem, i: usize, new_grades: &[Color], f: F) -> Result<TensorElem>
    where
        F: Fn(&AlgElem) -> Result<TensorElem>,
    {
        let mut grades = t.grades[..i].to_vec();
        grades.extend_from_slice(new_grades);
        grades.extend_from_slice(&t.grades[i + 1..]);
        let mut out = TensorElem::zero(grades);
        let mut memo: BTreeMap<Monomial, TensorElem> = BTreeMap::new();
        for (ms, c) in &t.terms {
            if let Entry::Vacant(e) = memo.entry(ms[i]) {
                let mut single = AlgElem::zero(t.grades[i]);
                single.terms.insert(ms[i], Scalar::one());
                e.insert(f(&single)?);
            }
            for (ns, d) in &memo[&ms[i]].terms {
                let mut key = ms[..i].to_vec();
                key.extend_from_slice(ns);
                key.extend_from_slice(&ms[i + 1..]);
                out.add_term(key, c * d);
            }
        }
        Ok(out.cleanup())
    }

    /// Insert a unit leg of grade `g` at position `i`, e.g. `r (x) s -> r (x) 1 (x) s`.
    pub fn insert_unit(&self, t: &TensorElem, i: usize, g: Color) -> TensorElem {
        let mut grades = t.grades.clone();
        grades.insert(i, g);
        let terms = t
            .terms
            .iter()
            .map(|(ms, c)| {
                let mut key = ms.clone();
                key.insert(i, Monomial::unit());
                (key, c.clone())
            })
            .collect();
        TensorElem { grades, terms }
    }

    /// Multiply leg `i` by `x`, on the left or on the right.
    pub fn mul_leg(&self, t: &TensorElem, i: usize, x: &AlgElem, left: bool) -> Result<TensorElem> {
        check_grade(t.grades[i], x.grade)?;
        self.apply_leg(t, i, x.grade, |m| if left { self.mul(x, m) } else { self.mul(m, x) })
    }

    /// Contract every leg with a linear form.
    pub fn contract<F>(&self, t: &TensorElem, forms: &[F]) -> Result<Scalar>
    where
        F: Fn(&AlgElem) -> Result<Scalar>,
    {
        let mut memo: Vec<BTreeMap<Monomial, Scalar>> = vec![BTreeMap::new(); t.arity()];
        let mut acc = Scalar::zero();
        for (ms, c) in &t.terms {
            let mut v = c.clone();
            for (i, m) in ms.iter().enumerate() {
                if !memo[i].contains_key(m) {
                    let mut single = AlgElem::zero(t.grades[i]);
                    single.terms.insert(*m, Scalar::one());
                    memo[i].insert(*m, forms[i](&single)?.canonical());
                }
                let w = &memo[i][m];
                if w.is_empty() {
                    v = Scalar::zero();
                    break;
                }
                v *= w;
            }
            acc += &v;
        }
        Ok(acc.canonical())
    }

    /// Sum of `x_1 x_2 ... x_n` over the terms, all legs sharing one grade.
    pub fn multiply_legs(&self, t: &TensorElem, order: &[usize]) -> Result<AlgElem> {
        let g = t.grades[order[0]];
        let mut out = AlgElem::zero(g);
        for (ms, c) in &t.terms {
            let mut prod = self.scalar_elem(g, c.clone());
            for &i in order {
                check_grade(g, t.grades[i])?;
                let mut single = AlgElem::zero(g);
                single.terms.insert(ms[i], Scalar::one());
                prod = self.mul(&prod, &single)?;
            }
            for (m, d) in prod.terms {
                out.add_term(m, d);
            }
        }
        Ok(out.cleanup())
    }
}
