//! Symmetrized integral `mu`, the central elements `z_a`, the modified integral `mu'`,
//! partial traces and the compatibility checks between them.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::sync::Arc;

use num_rational::Rational64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gauss::GaussQ;
use crate::linalg::{Echelon, SparseRow};
use crate::pbw::{AlgElem, Color, Monomial, TensorElem, Uq};
use crate::sample::random_elem;
use crate::scalar::Scalar;

/// Outcome of a randomized axiom check.
#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `delta_+ = mu_0(g theta_0)`, `delta_- = mu_0(g^{-1} theta_0^{-1})` and the Gauss-sum closed form of `delta_+`.
#[derive(Clone, Debug)]
pub struct Deltas {
    pub plus: Scalar,
    pub minus: Scalar,
    pub closed_form: Scalar,
}

impl Deltas {
    pub fn degenerate(&self) -> bool {
        self.plus.is_zero() || self.minus.is_zero()
    }
}

/// Linear map between spaces with PBW product bases; `cols[j]` is the image of basis vector `j`.
#[derive(Clone, Debug)]
pub struct LinOp {
    pub dim_in: usize,
    pub dim_out: usize,
    pub cols: Vec<SparseRow>,
}

impl LinOp {
    pub fn identity(n: usize) -> Self {
        let cols = (0..n).map(|j| SparseRow::from([(j, Scalar::one())])).collect();
        LinOp { dim_in: n, dim_out: n, cols }
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        self.cols[j].get(&i).cloned().unwrap_or_default()
    }

    pub fn trace(&self) -> Scalar {
        (0..self.dim_in.min(self.dim_out)).map(|j| self.entry(j, j)).sum::<Scalar>().canonical()
    }

    pub fn scale(&self, s: &Scalar) -> LinOp {
        let cols = self.cols.iter().map(|c| c.iter().map(|(i, v)| (*i, v * s)).collect()).collect();
        LinOp { cols, ..self.clone() }
    }

    pub fn equals(&self, o: &LinOp) -> bool {
        self.dim_in == o.dim_in
            && self.dim_out == o.dim_out
            && (0..self.dim_in).all(|j| {
                let keys: std::collections::BTreeSet<_> = self.cols[j].keys().chain(o.cols[j].keys()).collect();
                keys.into_iter().all(|i| self.entry(*i, j) == o.entry(*i, j))
            })
    }

    /// `ptr` over the second factor of a space of dimension `na * nb`, indexed `i * nb + j`.
    pub fn partial_trace_right(&self, na: usize, nb: usize) -> Result<LinOp> {
        self.check_square(na * nb)?;
        let mut cols = vec![SparseRow::new(); na];
        for (i, col) in cols.iter_mut().enumerate() {
            for j in 0..nb {
                for (r, v) in &self.cols[i * nb + j] {
                    if r % nb == j {
                        *col.entry(r / nb).or_default() += v;
                    }
                }
            }
        }
        Ok(LinOp { dim_in: na, dim_out: na, cols: cols.into_iter().map(clean_row).collect() })
    }

    /// `ptr` over the first factor.
    pub fn partial_trace_left(&self, na: usize, nb: usize) -> Result<LinOp> {
        self.check_square(na * nb)?;
        let mut cols = vec![SparseRow::new(); nb];
        for (j, col) in cols.iter_mut().enumerate() {
            for i in 0..na {
                for (r, v) in &self.cols[i * nb + j] {
                    if r / nb == i {
                        *col.entry(r % nb).or_default() += v;
                    }
                }
            }
        }
        Ok(LinOp { dim_in: nb, dim_out: nb, cols: cols.into_iter().map(clean_row).collect() })
    }

    fn check_square(&self, n: usize) -> Result<()> {
        if self.dim_in != n || self.dim_out != n {
            return Err(Error::Input(format!("operator is {}x{}, expected {n}x{n}", self.dim_out, self.dim_in)));
        }
        Ok(())
    }
}

fn clean_row(row: SparseRow) -> SparseRow {
    row.into_iter().map(|(i, v)| (i, v.canonical())).filter(|(_, v)| !v.is_zero()).collect()
}

fn admissible(a: Color) -> Result<()> {
    if a.in_gprime() {
        Ok(())
    } else {
        Err(Error::NotComputable(format!("color {a} is not admissible")))
    }
}

impl Uq {
    /// `mu_a`: `eta` times the coefficient of `E^{l'-1} F^{l'-1} K^0`.
    pub fn mu(&self, x: &AlgElem) -> Scalar {
        let top = self.ellp() - 1;
        let c: Scalar = x.terms.iter().filter(|(m, _)| m.e == top && m.f == top && m.k.is_zero()).map(|(_, c)| c.clone()).sum();
        (c * &self.root.eta).canonical()
    }

    pub(crate) fn single(&self, grade: Color, m: Monomial) -> AlgElem {
        let mut x = AlgElem::zero(grade);
        x.terms.insert(m, self.scalar(1));
        x
    }

    /// `tr(L_m)` on the finite subalgebra of grade `a` for each basis monomial `m`.
    pub fn trace_table(&self, a: Color) -> Result<Arc<HashMap<Monomial, Scalar>>> {
        self.cache.traces.get_or_try(&a, || {
            let basis = self.tilde_basis();
            let elems: Vec<AlgElem> = basis.iter().map(|m| self.single(a, *m)).collect();
            let mut table = HashMap::new();
            for x in &elems {
                let mut t = Scalar::zero();
                for (m, y) in basis.iter().zip(&elems) {
                    t += &self.mul(x, y)?.coeff(m);
                }
                table.insert(*x.terms.keys().next().unwrap(), t.canonical());
            }
            Ok(table)
        })
    }

    /// `tr(L_x)` for `x` in the finite subalgebra of its grade.
    pub fn trace(&self, x: &AlgElem) -> Result<Scalar> {
        let table = self.trace_table(x.grade)?;
        let mut acc = Scalar::zero();
        for (m, c) in &x.terms {
            let t = table.get(m).ok_or_else(|| Error::Input(format!("monomial {m} is outside the finite subalgebra")))?;
            acc += &(c * t);
        }
        Ok(acc.canonical())
    }

    /// The central `z_a` with `tr(L_{z_a x}) = mu_a(x)` on the finite subalgebra.
    pub fn solve_z(&self, a: Color) -> Result<Arc<AlgElem>> {
        admissible(a)?;
        self.cache.z.get_or_try(&a, || {
            let basis = self.tilde_basis();
            let elems: Vec<AlgElem> = basis.iter().map(|m| self.single(a, *m)).collect();
            let n = basis.len();
            let mut rows = Vec::with_capacity(n);
            let mut rhs = Vec::with_capacity(n);
            for x in &elems {
                let mut row = SparseRow::new();
                for (j, b) in elems.iter().enumerate() {
                    let t = self.trace(&self.mul(b, x)?)?;
                    if !t.is_zero() {
                        row.insert(j, t);
                    }
                }
                rows.push(row);
                rhs.push(self.mu(x));
            }
            for (row, b) in rows.iter_mut().zip(rhs) {
                if !b.is_zero() {
                    row.insert(n, b);
                }
            }
            let ech = Echelon::from_rows(&rows, n);
            if ech.rank() < n || ech.row(n).is_some() {
                return Err(Error::NotComputable(format!("trace form is degenerate at {a}")));
            }
            let sol: SparseRow = (0..n).filter_map(|p| ech.row(p).and_then(|r| r.get(&n)).map(|c| (p, c.clone()))).collect();
            let z = self.from_tilde_coords(a, &sol);
            Ok(z)
        })
    }

    /// `mu'_a(x) = mu_a(z_a x)`.
    pub fn mu_mod(&self, x: &AlgElem) -> Result<Scalar> {
        let z = self.solve_z(x.grade)?;
        Ok(self.mu(&self.mul(&z, x)?))
    }
}

impl Uq {
    /// Randomized check of the right-integral identity, cyclicity and antipode invariance of `mu`
    /// on the cosets `K^q U~` for a few `q`.
    pub fn check_integral_axioms(&self, a: Color, b: Color, samples: usize, rng: &mut impl Rng) -> Result<AxiomReport> {
        let half = Rational64::new(1, 2);
        let cosets = [
            GaussQ::zero(),
            a.value().scale(half),
            -a.value().scale(half),
            GaussQ::frac(1, 2),
            GaussQ::frac(-1, 2),
            GaussQ::frac(rng.gen_range(1..7), 7),
        ];
        let nterms = 2 * self.ellp() as usize;
        let mut report = AxiomReport::default();
        for i in 0..samples {
            let q = cosets[i % cosets.len()];
            let x = random_elem(self, a + b, q, nterms, rng);
            // sum mu_a(x') g_b x'' = mu_{a+b}(x) 1_b
            let d = self.coproduct(&x, a, b)?;
            let g = self.pivot(b);
            let mut lhs = AlgElem::zero(b);
            for (ms, c) in &d.terms {
                let w = self.mu(&self.single(a, ms[0]));
                if !w.is_zero() {
                    let y = self.mul(&g, &self.single(b, ms[1]))?;
                    lhs = lhs.add(&y.scale(&(c * &w)))?;
                }
            }
            if !lhs.cleanup().equals(&self.one(b).scale(&self.mu(&x))) {
                report.failures.push(format!("right integral fails on {x}"));
            }
            let xa = random_elem(self, a, q, nterms, rng);
            let ya = random_elem(self, a, -q + GaussQ::int(rng.gen_range(-1..=1)), nterms, rng);
            if self.mu(&self.mul(&xa, &ya)?) != self.mu(&self.mul(&ya, &xa)?) {
                report.failures.push(format!("cyclicity fails on {xa} and {ya}"));
            }
            if self.mu(&self.antipode(&xa)) != self.mu(&xa) {
                report.failures.push(format!("antipode invariance fails on {xa}"));
            }
            report.checked += 1;
        }
        Ok(report)
    }

    /// `(-1)^{l+1} xi^{-1} / l'^2 [1]^{2l'-2} sum_k xi^{2k^2+2k}`, times `eta`.
    pub fn delta_closed_form(&self) -> Scalar {
        let lp = self.ellp() as i64;
        let gauss: Scalar = (0..lp).map(|k| self.xi(2 * k * k + 2 * k)).sum();
        let sign = if self.ell() % 2 == 1 { 1 } else { -1 };
        let q1 = self.root.qint(Rational64::from_integer(1));
        let mut c = self.xi(-1) * Scalar::from_rational(Rational64::new(sign, lp * lp)) * &self.root.eta * gauss;
        for _ in 0..2 * lp - 2 {
            c *= &q1;
        }
        c.canonical()
    }

    pub fn deltas(&self) -> Result<Deltas> {
        let z = Color::zero();
        let plus = self.mu(&self.mul(&self.pivot(z), &self.twist(z)?)?);
        let minus = self.mu(&self.mul(&self.pivot_inv(z), &self.twist_inv(z)?)?);
        Ok(Deltas { plus, minus, closed_form: self.delta_closed_form() })
    }

    /// `(delta_+, delta_-)`, rejecting a degenerate twist.
    pub fn delta_pm(&self) -> Result<(Scalar, Scalar)> {
        let d = self.deltas()?;
        if d.degenerate() {
            return Err(Error::NotComputable(format!("twist is degenerate at ell = {}", self.ell())));
        }
        Ok((d.plus, d.minus))
    }

    /// Matrix of `L_x` on the finite subalgebra of the grade of `x`.
    pub fn left_mult_op(&self, x: &AlgElem) -> Result<LinOp> {
        let basis = self.tilde_basis();
        let index = self.tilde_index();
        let mut cols = Vec::with_capacity(basis.len());
        for m in &basis {
            cols.push(self.tilde_coords(&self.mul(x, &self.single(x.grade, *m))?, &index)?);
        }
        Ok(LinOp { dim_in: basis.len(), dim_out: basis.len(), cols })
    }

    /// Matrix of `L_t` on `U~_a (x) U~_b` for a two-leg `t`, basis pairs indexed `i * n + j`.
    pub fn left_mult_op2(&self, t: &TensorElem) -> Result<LinOp> {
        if t.arity() != 2 {
            return Err(Error::Input("left_mult_op2 needs a two-leg tensor".into()));
        }
        let basis = self.tilde_basis();
        let index = self.tilde_index();
        let n = basis.len();
        let mut cols = Vec::with_capacity(n * n);
        for p in &basis {
            for q in &basis {
                let mut v = TensorElem::zero(t.grades.clone());
                v.terms.insert(vec![*p, *q], self.scalar(1));
                let mut col = SparseRow::new();
                for (ms, c) in self.tmul(t, &v)?.terms {
                    let (i, j) = match (index.get(&ms[0]), index.get(&ms[1])) {
                        (Some(i), Some(j)) => (*i, *j),
                        _ => return Err(Error::Input("multiplier leaves the finite subalgebra".into())),
                    };
                    col.insert(i * n + j, c);
                }
                cols.push(col);
            }
        }
        Ok(LinOp { dim_in: n * n, dim_out: n * n, cols })
    }

    fn require_commutant(&self, xt: &TensorElem) -> Result<()> {
        if !self.in_commutant(xt)? {
            return Err(Error::Input("element is not in the commutant of the coproduct".into()));
        }
        Ok(())
    }

    /// `mu_a(ptr_b((1 (x) L_{g_b}) L_t)(1)) = mu_b(ptr_a((L_{g_a^{-1}} (x) 1) L_t)(1))`.
    pub fn check_ambidexterity(&self, a: Color, b: Color, xt: &TensorElem) -> Result<bool> {
        if xt.grades != [a, b] {
            return Err(Error::Grade(format!("expected grades {a}, {b}")));
        }
        self.require_commutant(xt)?;
        let (ga, gb) = (self.pivot_inv(a), self.pivot(b));
        let lhs = self.pair(xt, |x: &AlgElem| Ok(self.mu(x)), |y: &AlgElem| self.trace(&self.mul(&gb, y)?))?;
        let rhs = self.pair(xt, |x: &AlgElem| self.trace(&self.mul(&ga, x)?), |y: &AlgElem| Ok(self.mu(y)))?;
        Ok(lhs == rhs)
    }

    /// The two sides of `mu_a L_{g^{-1}} (x) mu'_b = mu'_a (x) mu_b L_g` on `xt`.
    pub fn mod_compat_sides(&self, a: Color, b: Color, xt: &TensorElem) -> Result<(Scalar, Scalar)> {
        admissible(a)?;
        admissible(b)?;
        if xt.grades != [a, b] {
            return Err(Error::Grade(format!("expected grades {a}, {b}")));
        }
        let (ga, gb) = (self.pivot_inv(a), self.pivot(b));
        let lhs = self.pair(xt, |x: &AlgElem| Ok(self.mu(&self.mul(&ga, x)?)), |y: &AlgElem| self.mu_mod(y))?;
        let rhs = self.pair(xt, |x: &AlgElem| self.mu_mod(x), |y: &AlgElem| Ok(self.mu(&self.mul(&gb, y)?)))?;
        Ok((lhs, rhs))
    }

    pub fn check_mod_compat(&self, a: Color, b: Color, xt: &TensorElem) -> Result<bool> {
        self.require_commutant(xt)?;
        let (l, r) = self.mod_compat_sides(a, b, xt)?;
        Ok(l == r)
    }

    /// `sum c f(x') h(x'')` for a two-leg `t = sum c x' (x) x''`.
    pub fn pair<F, H>(&self, t: &TensorElem, f: F, h: H) -> Result<Scalar>
    where
        F: Fn(&AlgElem) -> Result<Scalar>,
        H: Fn(&AlgElem) -> Result<Scalar>,
    {
        let rest = self.contract_leg(&self.contract_leg(t, 1, h)?, 0, f)?;
        Ok(rest.terms.into_values().sum::<Scalar>().canonical())
    }

    /// Contract leg `i` of `t` against the linear form `form`.
    pub fn contract_leg<F>(&self, t: &TensorElem, i: usize, form: F) -> Result<TensorElem>
    where
        F: Fn(&AlgElem) -> Result<Scalar>,
    {
        let mut grades = t.grades.clone();
        grades.remove(i);
        let mut out = TensorElem::zero(grades);
        let mut memo: HashMap<Monomial, Scalar> = HashMap::new();
        for (ms, c) in &t.terms {
            if let Entry::Vacant(e) = memo.entry(ms[i]) {
                e.insert(form(&self.single(t.grades[i], ms[i]))?);
            }
            let w = &memo[&ms[i]];
            if !w.is_zero() {
                let mut key = ms.clone();
                key.remove(i);
                out.add_term(key, c * w);
            }
        }
        Ok(out.cleanup())
    }

    /// Contracting the first leg with `mu L_{g^{-1}}` and the last with `mu L_g` both stay in the commutant.
    pub fn check_equivariance(&self, xt: &TensorElem) -> Result<bool> {
        self.require_commutant(xt)?;
        let n = xt.arity();
        if n <= 1 {
            return Ok(true);
        }
        let g0 = self.pivot_inv(xt.grades[0]);
        let first = self.contract_leg(xt, 0, |x| Ok(self.mu(&self.mul(&g0, x)?)))?;
        let gl = self.pivot(xt.grades[n - 1]);
        let last = self.contract_leg(xt, n - 1, |x| Ok(self.mu(&self.mul(&gl, x)?)))?;
        Ok(self.in_commutant(&first)? && self.in_commutant(&last)?)
    }

    fn random_central(&self, basis: &[AlgElem], grade: Color, rng: &mut impl Rng) -> Result<AlgElem> {
        let mut x = AlgElem::zero(grade);
        for c in basis {
            x = x.add(&c.scale(&crate::sample::random_scalar(self, rng)))?;
        }
        Ok(x.cleanup())
    }

    /// Random elements `(u (x) v) Delta_{a,b}(w)` with `u`, `v`, `w` central in the finite subalgebras.
    pub fn commutant_samples(&self, a: Color, b: Color, count: usize, rng: &mut impl Rng) -> Result<Vec<TensorElem>> {
        let (ca, cb, cab) = (self.center_basis(a)?, self.center_basis(b)?, self.center_basis(a + b)?);
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let u = self.random_central(&ca, a, rng)?;
            let v = self.random_central(&cb, b, rng)?;
            let w = self.random_central(&cab, a + b, rng)?;
            out.push(self.tmul(&self.tensor(&[&u, &v]), &self.coproduct(&w, a, b)?)?);
        }
        Ok(out)
    }
}
