//! The irreducible modules of the finite subalgebras of admissible grades, used as an
//! independent check of the algebraic computations.

use num_rational::Rational64;

use std::collections::HashMap;

use crate::diagrams::{Block, EventKind, GDiagram};
use crate::error::{Error, Result};
use crate::gauss::GaussQ;
use crate::linalg::{solve_multi, Matrix, SparseRow};
use crate::pbw::{check_grade, AlgElem, Color, Monomial, TensorElem, Uq};
use crate::scalar::Scalar;

/// Module of highest weight `xi^{alpha + 2k}` with basis `v_i = F^i v_0`.
#[derive(Clone, Debug)]
pub struct IrrModule {
    pub grade: Color,
    pub k: u32,
    /// `alpha + 2k`, the exponent of the highest weight.
    pub weight: GaussQ,
    pub dim: usize,
    /// `E v_i = c_i v_{i-1}`.
    pub e_coeffs: Vec<Scalar>,
}

impl IrrModule {
    /// Exponent of the `K`-eigenvalue on `v_i`.
    pub fn weight_of(&self, i: usize) -> GaussQ {
        self.weight - GaussQ::int(2 * i as i64)
    }
}

impl Uq {
    pub fn build_module(&self, a: Color, k: u32) -> Result<IrrModule> {
        if !a.in_gprime() {
            return Err(Error::NotComputable(format!("color {a} is not admissible")));
        }
        if k >= self.ellp() {
            return Err(Error::Input(format!("module index {k} out of range")));
        }
        let weight = a.value() + GaussQ::int(2 * k as i64);
        let dim = self.ellp() as usize;
        let q1 = self.root.qint(Rational64::from_integer(1)).inv()?;
        let mut e_coeffs = vec![Scalar::zero()];
        for i in 0..dim - 1 {
            let w = weight - GaussQ::int(2 * i as i64);
            let step = (self.xi_c(w) - self.xi_c(-w)) * &q1;
            e_coeffs.push((&e_coeffs[i] + &step).canonical());
        }
        Ok(IrrModule { grade: a, k, weight, dim, e_coeffs })
    }

    pub fn modules(&self, a: Color) -> Result<Vec<IrrModule>> {
        (0..self.ellp()).map(|k| self.build_module(a, k)).collect()
    }

    /// Nonzero entry `(row, col, value)` of a monomial acting on `v_col`, if any.
    fn mono_entry(&self, m: &Monomial, v: &IrrModule, col: usize) -> Option<(usize, Scalar)> {
        let mid = col + m.f as usize;
        if mid >= v.dim || (m.e as usize) > mid {
            return None;
        }
        let mut c = self.xi_c(m.k * v.weight_of(col));
        for t in (mid + 1 - m.e as usize..=mid).rev() {
            c *= &v.e_coeffs[t];
        }
        Some((mid - m.e as usize, c))
    }

    pub fn represent(&self, x: &AlgElem, v: &IrrModule) -> Result<Matrix> {
        check_grade(v.grade, x.grade)?;
        let mut out = Matrix::zeros(v.dim, v.dim);
        for (m, c) in &x.terms {
            for col in 0..v.dim {
                if let Some((row, s)) = self.mono_entry(m, v, col) {
                    out.add_at(row, col, &(c * &s));
                }
            }
        }
        Ok(out.canonical())
    }

    /// Action of a tensor on `V_0 (x) ... (x) V_n`, basis ordered lexicographically.
    pub fn represent_tensor(&self, t: &TensorElem, vs: &[&IrrModule]) -> Result<Matrix> {
        if t.arity() != vs.len() {
            return Err(Error::Input("one module per tensor leg is needed".into()));
        }
        let n: usize = vs.iter().map(|v| v.dim).product();
        let mut out = Matrix::zeros(n, n);
        for (ms, c) in &t.terms {
            let mut m = Matrix::identity(1).scale(c);
            for (i, (mono, v)) in ms.iter().zip(vs).enumerate() {
                let mut single = AlgElem::zero(t.grades[i]);
                single.terms.insert(*mono, Scalar::one());
                m = m.kron(&self.represent(&single, v)?);
            }
            out = out.add(&m);
        }
        Ok(out)
    }

    /// Central idempotents `e_k` of the finite subalgebra, acting by `delta_{jk}` on `V_j`.
    pub fn central_idempotents(&self, a: Color) -> Result<std::sync::Arc<Vec<AlgElem>>> {
        self.cache.idempotents.get_or_try(&a, || {
            let mods = self.modules(a)?;
            let basis = self.tilde_basis();
            let d = self.ellp() as usize;
            let n = basis.len();
            // one row per (module, matrix entry), one column per basis monomial
            let mut rows = vec![SparseRow::new(); mods.len() * d * d];
            for (j, m) in basis.iter().enumerate() {
                for (mi, v) in mods.iter().enumerate() {
                    for col in 0..d {
                        if let Some((row, s)) = self.mono_entry(m, v, col) {
                            rows[(mi * d + row) * d + col].insert(j, s.canonical());
                        }
                    }
                }
            }
            let rhs: Vec<Vec<Scalar>> = (0..mods.len())
                .map(|k| {
                    (0..rows.len())
                        .map(|r| {
                            let (mi, rest) = (r / (d * d), r % (d * d));
                            if mi == k && rest / d == rest % d {
                                Scalar::one()
                            } else {
                                Scalar::zero()
                            }
                        })
                        .collect()
                })
                .collect();
            let sols = solve_multi(&rows, &rhs, n).ok_or_else(|| Error::NotComputable(format!("no central idempotents at {a}")))?;
            Ok(sols
                .into_iter()
                .map(|x| self.from_tilde_coords(a, &x.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()))
                .collect())
        })
    }

    /// `d_{alpha+2k} = mu_a(e_k) / l'`, so that `z_a = sum_k (d_k / l') e_k`.
    pub fn modified_dimension(&self, a: Color, k: u32) -> Result<Scalar> {
        let e = self.central_idempotents(a)?;
        let e = e.get(k as usize).ok_or_else(|| Error::Input(format!("module index {k} out of range")))?;
        Ok(self.mu(e) * Scalar::from_rational(Rational64::new(1, self.ellp() as i64)))
    }

    /// `d_0 l' [x] / [l' x]` with `d_0 = [1]^{2l'-2} eta / l'^3`.
    pub fn modified_dimension_formula(&self, x: GaussQ) -> Result<Scalar> {
        let lp = self.ellp() as i64;
        let q1 = self.root.qint(Rational64::from_integer(1));
        let d0 = q1.pow(2 * lp - 2)? * &self.root.eta * Scalar::from_rational(Rational64::new(1, lp * lp * lp));
        let num = self.root.qint_c(x) * Scalar::from_int(lp);
        Ok((d0 * num).div(&self.root.qint_c(x.scale(Rational64::from_integer(lp))))?)
    }
    /// Action on `V` or, for `dual`, on `V^*` through the antipode.
    fn act(&self, x: &AlgElem, v: &IrrModule, dual: bool) -> Result<Matrix> {
        if dual {
            Ok(self.represent(&self.antipode(x), v)?.transpose())
        } else {
            self.represent(x, v)
        }
    }

    fn act_pair(&self, t: &TensorElem, legs: [(&IrrModule, bool); 2]) -> Result<Matrix> {
        let n = legs[0].0.dim * legs[1].0.dim;
        let mut out = Matrix::zeros(n, n);
        for (ms, c) in &t.terms {
            let x = self.act(&self.single(t.grades[0], ms[0]), legs[0].0, legs[0].1)?;
            let y = self.act(&self.single(t.grades[1], ms[1]), legs[1].0, legs[1].1)?;
            out = out.add(&x.kron(&y).scale(c));
        }
        Ok(out)
    }

    /// Local map of one row block, from its bottom strands to its top strands.
    fn block_map(&self, d: &GDiagram, r: usize, b: &Block, mods: &[IrrModule]) -> Result<Matrix> {
        let lay = d.layout();
        let colors = d.colors();
        let strand = |lv: usize, p: usize| {
            let (c, up) = lay.strands[lv][p];
            (&mods[c], !up, if up { colors[c] } else { -colors[c] })
        };
        Ok(match b.kind {
            EventKind::Id => Matrix::identity(strand(r, b.bottom).0.dim),
            EventKind::Cup | EventKind::Cap => {
                let (v, left_dual, g) = if b.kind == EventKind::Cup { strand(r + 1, b.top) } else { strand(r, b.bottom) };
                let n = v.dim;
                let piv = if left_dual == (b.kind == EventKind::Cup) {
                    let a = if left_dual { -g } else { g };
                    let x = if b.kind == EventKind::Cup { self.pivot_inv(a) } else { self.pivot(a) };
                    self.represent(&x, v)?
                } else {
                    Matrix::identity(n)
                };
                // cup: sum_i v_i (x) v^i, or sum_i v^i (x) g^{-1} v_i; cap: f(v) or f(g v)
                let mut m = if b.kind == EventKind::Cup { Matrix::zeros(n * n, 1) } else { Matrix::zeros(1, n * n) };
                for i in 0..n {
                    for j in 0..n {
                        let val = piv.get(j, i).clone();
                        if b.kind == EventKind::Cup {
                            m.set(i * n + j, 0, val);
                        } else {
                            m.set(0, i * n + j, val);
                        }
                    }
                }
                m
            }
            EventKind::Over | EventKind::Under => {
                let (x, xd, gx) = strand(r, b.bottom);
                let (y, yd, gy) = strand(r, b.bottom + 1);
                let (dx, dy) = (x.dim, y.dim);
                let mut m = Matrix::zeros(dx * dy, dx * dy);
                if b.kind == EventKind::Over {
                    let rep = self.act_pair(&*self.r_matrix(gx, gy)?, [(x, xd), (y, yd)])?;
                    for (ix, iy, col) in (0..dx).flat_map(|ix| (0..dy).map(move |iy| (ix, iy))).flat_map(|(ix, iy)| (0..dx * dy).map(move |c| (ix, iy, c))) {
                        m.set(iy * dx + ix, col, rep.get(ix * dy + iy, col).clone());
                    }
                } else {
                    let rep = self.act_pair(&*self.r_inverse(gy, gx)?, [(y, yd), (x, xd)])?;
                    for (ix, iy, row) in (0..dx).flat_map(|ix| (0..dy).map(move |iy| (ix, iy))).flat_map(|(ix, iy)| (0..dx * dy).map(move |c| (ix, iy, c))) {
                        m.set(row, ix * dy + iy, rep.get(row, iy * dx + ix).clone());
                    }
                }
                m
            }
        })
    }

    /// Operator of a diagram between the tensor products of its bottom and top strands,
    /// computed by composing the module maps of cups, caps and braidings row by row.
    /// Component `c` carries the module `ks[c]` of its color.
    pub fn rep_evaluate(&self, d: &GDiagram, ks: &[u32]) -> Result<Matrix> {
        if ks.len() != d.num_components() {
            return Err(Error::Input(format!("{} module indices for {} components", ks.len(), d.num_components())));
        }
        let mods = d.colors().iter().zip(ks).map(|(c, k)| self.build_module(*c, *k)).collect::<Result<Vec<_>>>()?;
        let lay = d.layout();
        let dims = |lv: usize| -> Vec<usize> { lay.strands[lv].iter().map(|s| mods[s.0].dim).collect() };
        let bottom: usize = dims(0).iter().product();
        let mut cols = Vec::with_capacity(bottom);
        for start in 0..bottom {
            let mut digits = Vec::new();
            let mut rest = start;
            for dim in dims(0).iter().rev() {
                digits.push(rest % dim);
                rest /= dim;
            }
            digits.reverse();
            let mut state: HashMap<Vec<usize>, Scalar> = HashMap::from([(digits, Scalar::one())]);
            for (r, blocks) in lay.blocks.iter().enumerate() {
                let maps = blocks.iter().map(|b| self.block_map(d, r, b, &mods)).collect::<Result<Vec<_>>>()?;
                let bd = dims(r);
                let td = dims(r + 1);
                let mut next: HashMap<Vec<usize>, Scalar> = HashMap::new();
                for (idx, c) in &state {
                    let mut partial: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), c.clone())];
                    for (b, m) in blocks.iter().zip(&maps) {
                        let (nin, nout) = b.kind.arity();
                        let col = (b.bottom..b.bottom + nin).fold(0, |acc, p| acc * bd[p] + idx[p]);
                        let mut grown = Vec::new();
                        for row in 0..m.rows {
                            let e = m.get(row, col);
                            if e.is_zero() {
                                continue;
                            }
                            let mut out = Vec::with_capacity(nout);
                            let mut rest = row;
                            for p in (b.top..b.top + nout).rev() {
                                out.push(rest % td[p]);
                                rest /= td[p];
                            }
                            out.reverse();
                            for (k, s) in &partial {
                                let mut k = k.clone();
                                k.extend_from_slice(&out);
                                grown.push((k, s * e));
                            }
                        }
                        partial = grown;
                    }
                    for (k, s) in partial {
                        *next.entry(k).or_insert_with(Scalar::zero) += &s;
                    }
                }
                next.retain(|_, v| {
                    *v = v.canonical();
                    !v.is_zero()
                });
                state = next;
            }
            cols.push(state);
        }
        let top = dims(lay.strands.len() - 1);
        let ntop: usize = top.iter().product();
        let mut out = Matrix::zeros(ntop, bottom);
        for (j, state) in cols.into_iter().enumerate() {
            for (idx, v) in state {
                let i = idx.iter().zip(&top).fold(0, |acc, (x, d)| acc * d + x);
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    /// The same operator assembled from the universal invariant: the legs act on the open
    /// strands and are traced over the closed components.
    pub fn universal_evaluate(&self, d: &GDiagram, ks: &[u32]) -> Result<Matrix> {
        if ks.len() != d.num_components() {
            return Err(Error::Input(format!("{} module indices for {} components", ks.len(), d.num_components())));
        }
        let mut j = self.universal_invariant(d)?;
        for c in (0..d.num_components()).rev() {
            if !d.open.contains(&c) {
                let v = self.build_module(d.colors()[c], ks[c])?;
                j = self.contract_leg(&j, c, |x| Ok(self.represent(x, &v)?.trace()))?;
            }
        }
        let lay = d.layout();
        let bottom = &lay.strands[0];
        let mods = bottom.iter().map(|s| self.build_module(d.colors()[s.0], ks[s.0])).collect::<Result<Vec<_>>>()?;
        let n: usize = mods.iter().map(|m| m.dim).product();
        let mut out = Matrix::zeros(n, n);
        for (ms, c) in &j.terms {
            let mut m = Matrix::identity(1).scale(c);
            for (s, v) in bottom.iter().zip(&mods) {
                let leg = d.open.iter().position(|&o| o == s.0).expect("bottom strands are open");
                let x = self.represent(&self.single(j.grades[leg], ms[leg]), v)?;
                m = m.kron(&if s.1 { x } else { x.transpose() });
            }
            out = out.add(&m);
        }
        Ok(out)
    }
}
