use std::collections::HashMap;

use super::{AlgElem, Color, TensorElem, Uq};
use crate::error::{Error, Result};
use crate::gauss::GaussQ;
use crate::linalg::{Echelon, SparseRow};
use crate::scalar::Scalar;

/// Zeroth Hochschild homology `U/[U,U]` of the finite subalgebra of one grade.
#[derive(Clone, Debug)]
pub struct HH0 {
    pub grade: Color,
    commutators: Echelon,
    dim_total: usize,
}

impl HH0 {
    pub fn dim(&self) -> usize {
        self.dim_total - self.commutators.rank()
    }

    pub fn commutator_rank(&self) -> usize {
        self.commutators.rank()
    }
}

impl Uq {
    pub fn tilde_index(&self) -> HashMap<super::Monomial, usize> {
        self.tilde_basis().into_iter().enumerate().map(|(i, m)| (m, i)).collect()
    }

    /// Coordinates in the PBW basis of the finite subalgebra.
    pub fn tilde_coords(&self, x: &AlgElem, index: &HashMap<super::Monomial, usize>) -> Result<SparseRow> {
        x.terms
            .iter()
            .map(|(m, c)| {
                index
                    .get(m)
                    .map(|i| (*i, c.clone()))
                    .ok_or_else(|| Error::Input(format!("monomial {m} is outside the finite subalgebra")))
            })
            .collect()
    }

    pub fn from_tilde_coords(&self, grade: Color, v: &SparseRow) -> AlgElem {
        let basis = self.tilde_basis();
        let mut out = AlgElem::zero(grade);
        for (i, c) in v {
            out.add_term(basis[*i], c.clone());
        }
        out.cleanup()
    }

    fn basis_elem(&self, grade: Color, m: super::Monomial) -> AlgElem {
        let mut x = AlgElem::zero(grade);
        x.terms.insert(m, self.scalar(1));
        x
    }

    /// Basis of the center of the finite subalgebra of grade `a`.
    pub fn center_basis(&self, a: Color) -> Result<Vec<AlgElem>> {
        let basis = self.tilde_basis();
        let index = self.tilde_index();
        let gens = [self.e(a), self.f(a), self.k(a, GaussQ::int(1))];
        // rows of the map x -> ([g, x])_g, one per (generator, output monomial)
        let mut rows: HashMap<(usize, usize), SparseRow> = HashMap::new();
        for (j, m) in basis.iter().enumerate() {
            let x = self.basis_elem(a, *m);
            for (gi, g) in gens.iter().enumerate() {
                let c = self.commutator(g, &x)?;
                for (i, v) in self.tilde_coords(&c, &index)? {
                    rows.entry((gi, i)).or_default().insert(j, v);
                }
            }
        }
        let mut keys: Vec<_> = rows.keys().copied().collect();
        keys.sort_unstable();
        let rows: Vec<SparseRow> = keys.iter().map(|k| rows[k].clone()).collect();
        Ok(Echelon::from_rows(&rows, basis.len()).nullspace(basis.len()).iter().map(|v| self.from_tilde_coords(a, v)).collect())
    }

    /// Whether `x` commutes with the image of `E`, `F`, `K` under the iterated coproduct.
    pub fn in_commutant(&self, x: &TensorElem) -> Result<bool> {
        let total = x.grades.iter().fold(Color::zero(), |acc, c| acc + *c);
        for g in [self.e(total), self.f(total), self.k(total, GaussQ::int(1))] {
            let d = self.iterated_coproduct(&g, &x.grades)?;
            if !self.tmul(&d, x)?.equals(&self.tmul(x, &d)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The commutator subspace of the finite subalgebra, spanned by `[m, E]`, `[m, F]`, `[m, K]`.
    pub fn hh0(&self, a: Color) -> Result<HH0> {
        let basis = self.tilde_basis();
        let index = self.tilde_index();
        let gens = [self.e(a), self.f(a), self.k(a, GaussQ::int(1))];
        let mut rows = Vec::new();
        for m in &basis {
            let x = self.basis_elem(a, *m);
            for g in &gens {
                rows.push(self.tilde_coords(&self.commutator(&x, g)?, &index)?);
            }
        }
        Ok(HH0 { grade: a, commutators: Echelon::from_rows(&rows, basis.len()), dim_total: basis.len() })
    }

    /// Canonical representative of the class of `x` in `HH_0`.
    pub fn hh0_reduce(&self, h: &HH0, x: &AlgElem) -> Result<SparseRow> {
        super::check_grade(h.grade, x.grade)?;
        if !self.in_tilde(x) {
            return Err(Error::Input("hh0_reduce needs an element of the finite subalgebra".into()));
        }
        Ok(h.commutators.reduce(&self.tilde_coords(x, &self.tilde_index())?))
    }

    /// Whether two elements agree in `HH_0`.
    pub fn hh0_equal(&self, h: &HH0, x: &AlgElem, y: &AlgElem) -> Result<bool> {
        Ok(self.hh0_reduce(h, &x.sub(y)?)?.values().all(Scalar::is_zero))
    }
}
