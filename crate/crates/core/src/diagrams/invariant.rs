use std::collections::hash_map::Entry;
use std::collections::HashMap;

use super::layout::{CrossingInfo, Step};
use super::GDiagram;
use crate::error::{Error, Result};
use crate::pbw::{AlgElem, Color, Monomial, TensorElem, Uq};
use crate::scalar::Scalar;

/// Which strand of a crossing receives the first leg of the R-matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum BeadConvention {
    #[default]
    OverFirst,
    UnderFirst,
}

impl std::str::FromStr for BeadConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "over-first" => Ok(BeadConvention::OverFirst),
            "under-first" => Ok(BeadConvention::UnderFirst),
            other => Err(Error::Input(format!("unknown bead convention {other:?}"))),
        }
    }
}

impl std::fmt::Display for BeadConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BeadConvention::OverFirst => "over-first",
            BeadConvention::UnderFirst => "under-first",
        })
    }
}

/// A linear form applied to one leg of a universal invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Evaluator {
    /// The right integral.
    Mu,
    /// The modified trace form.
    MuMod,
    /// The trace on the `k`-th simple module of the leg's grade.
    ModuleTrace(u32),
}

/// End of the shortest stretch of `steps` from `i` that starts at a crossing, ends at its
/// second visit, and meets every crossing inside it twice.
fn closed_window(steps: &[Step], i: usize) -> Option<usize> {
    let Step::Crossing { id, .. } = steps[i] else { return None };
    let j = i + 1 + steps[i + 1..].iter().position(|s| matches!(s, Step::Crossing { id: k, .. } if *k == id))?;
    let mut open: Vec<usize> = Vec::new();
    for s in &steps[i..=j] {
        if let Step::Crossing { id, .. } = s {
            match open.iter().position(|k| k == id) {
                Some(p) => {
                    open.remove(p);
                }
                None => open.push(*id),
            }
        }
    }
    open.is_empty().then_some(j)
}

impl Uq {
    fn crossing_tensor(&self, x: &CrossingInfo, colors: &[Color], conv: BeadConvention) -> Result<TensorElem> {
        let signed = |c: usize, up: bool| if up { colors[c] } else { -colors[c] };
        let (go, gu) = (signed(x.over_comp, x.over_up), signed(x.under_comp, x.under_up));
        let (first, second, ups) = match conv {
            BeadConvention::OverFirst => (go, gu, [x.over_up, x.under_up]),
            BeadConvention::UnderFirst => (gu, go, [x.under_up, x.over_up]),
        };
        let mut t = if x.positive_kind { (*self.r_matrix(first, second)?).clone() } else { (*self.r_inverse(first, second)?).clone() };
        for (i, up) in ups.into_iter().enumerate() {
            if !up {
                let g = t.grades[i];
                t = self.apply_leg(&t, i, -g, |m| Ok(self.antipode(m)))?;
            }
        }
        Ok(t)
    }

    /// Tensor `t` with `x` and multiply leg `src` of `x` onto leg `dst` of `t` from the left.
    fn attach(&self, t: &TensorElem, x: &TensorElem, src: usize, dst: usize) -> Result<TensorElem> {
        let mut grades = t.grades.clone();
        grades.extend(x.grades.iter().enumerate().filter(|(i, _)| *i != src).map(|(_, g)| *g));
        let g = t.grades[dst];
        crate::pbw::check_grade(g, x.grades[src])?;
        let mut memo: HashMap<(Monomial, Monomial), AlgElem> = HashMap::new();
        let mut out = TensorElem::zero(grades);
        for (ms, c) in &t.terms {
            for (ns, d) in &x.terms {
                let key = (ns[src], ms[dst]);
                if let Entry::Vacant(e) = memo.entry(key) {
                    let p = self.mul(&self.single(g, key.0), &self.single(g, key.1))?;
                    e.insert(p);
                }
                let cd = c * d;
                for (m, e) in &memo[&key].terms {
                    let mut k = ms.clone();
                    k[dst] = *m;
                    k.extend(ns.iter().enumerate().filter(|(i, _)| *i != src).map(|(_, n)| *n));
                    out.add_term(k, &cd * e);
                }
            }
        }
        Ok(out.cleanup())
    }

    /// Move leg `src` onto leg `dst` from the left and drop it.
    fn absorb(&self, t: &TensorElem, src: usize, dst: usize) -> Result<TensorElem> {
        let g = t.grades[dst];
        crate::pbw::check_grade(g, t.grades[src])?;
        let mut grades = t.grades.clone();
        grades.remove(src);
        let mut memo: HashMap<(Monomial, Monomial), AlgElem> = HashMap::new();
        let mut out = TensorElem::zero(grades);
        for (ms, c) in &t.terms {
            let key = (ms[src], ms[dst]);
            if let Entry::Vacant(e) = memo.entry(key) {
                e.insert(self.mul(&self.single(g, key.0), &self.single(g, key.1))?);
            }
            for (m, e) in &memo[&key].terms {
                let mut k = ms.clone();
                k[dst] = *m;
                k.remove(src);
                out.add_term(k, c * e);
            }
        }
        Ok(out.cleanup())
    }

    /// The universal invariant of a colored diagram, one leg per component.
    pub fn universal_invariant(&self, d: &GDiagram) -> Result<TensorElem> {
        self.universal_invariant_with(d, BeadConvention::default())
    }

    /// Universal invariant with the marked points placed to keep few crossings pending at once.
    pub fn universal_invariant_with(&self, d: &GDiagram, conv: BeadConvention) -> Result<TensorElem> {
        let order: Vec<usize> = (0..d.num_components()).collect();
        self.walk(d, &self.cheap_shifts(d, &order), conv, None)
    }

    /// Universal invariant with the marked point of closed component `c` moved forward by
    /// `shifts[c]` events along its orientation.
    pub fn universal_invariant_marked(&self, d: &GDiagram, shifts: &[usize], conv: BeadConvention) -> Result<TensorElem> {
        self.walk(d, shifts, conv, None)
    }

    /// One form applied to each leg of the universal invariant. Each leg is contracted as soon
    /// as its component has been walked, which keeps the intermediate tensors small.
    pub fn invariant_value(&self, d: &GDiagram, forms: &[Evaluator]) -> Result<Scalar> {
        if forms.len() != d.num_components() {
            return Err(Error::Input(format!("{} forms for {} components", forms.len(), d.num_components())));
        }
        let t = self.walk(d, &self.cheap_shifts(d, &Self::form_order(d)), BeadConvention::default(), Some(forms))?;
        Ok(t.terms.into_values().sum::<Scalar>().canonical())
    }

    /// Contracted legs are walked closed components first.
    fn form_order(d: &GDiagram) -> Vec<usize> {
        let n = d.num_components();
        (0..n).filter(|c| !d.open.contains(c)).chain(d.open.iter().copied()).collect()
    }

    /// Starting offsets for the closed components, chosen greedily in walk order to minimize
    /// the sum over steps of `|R|^pending`.
    fn cheap_shifts(&self, d: &GDiagram, order: &[usize]) -> Vec<usize> {
        let lay = d.layout();
        let base = (self.ellp() as f64).powi(3);
        let ids = |steps: &[Step]| -> Vec<usize> {
            steps.iter().filter_map(|s| if let Step::Crossing { id, .. } = s { Some(*id) } else { None }).collect()
        };
        let simulate = |pending: &mut Vec<usize>, seq: &[usize]| -> f64 {
            let mut cost = 0.0;
            for id in seq {
                match pending.iter().position(|p| p == id) {
                    Some(j) => {
                        pending.remove(j);
                    }
                    None => pending.push(*id),
                }
                cost += base.powi(pending.len() as i32);
            }
            cost
        };
        let mut shifts = vec![0; d.num_components()];
        let mut pending: Vec<usize> = Vec::new();
        for &c in order {
            let steps = &lay.steps[c];
            if !d.open.contains(&c) {
                let mut best = (f64::INFINITY, 0);
                for k in (0..steps.len()).filter(|&k| k == 0 || matches!(steps[k - 1], Step::Crossing { .. })) {
                    let seq = ids(&[&steps[k..], &steps[..k]].concat());
                    let cost = simulate(&mut pending.clone(), &seq);
                    if cost < best.0 {
                        best = (cost, k);
                    }
                }
                shifts[c] = best.1;
            }
            let k = shifts[c];
            simulate(&mut pending, &ids(&[&steps[k..], &steps[..k]].concat()));
        }
        shifts
    }

    fn walk(&self, d: &GDiagram, shifts: &[usize], conv: BeadConvention, forms: Option<&[Evaluator]>) -> Result<TensorElem> {
        let colors = d.colors();
        let n = colors.len();
        if shifts.len() != n {
            return Err(Error::Input(format!("{} marked-point shifts for {n} components", shifts.len())));
        }
        let lay = d.layout();
        let mut state = self.tensor_one(if forms.is_some() { &[] } else { &colors });
        let mut pending: Vec<usize> = Vec::new();
        let order: Vec<usize> = match forms {
            Some(_) => Self::form_order(d),
            None => (0..n).collect(),
        };
        for c in order {
            if forms.is_some() {
                state = self.insert_unit(&state, 0, colors[c]);
            }
            let mut steps = lay.steps[c].clone();
            if !d.open.contains(&c) && !steps.is_empty() {
                let k = shifts[c] % steps.len();
                steps.rotate_left(k);
            }
            let leg = if forms.is_some() { 0 } else { c };
            let mut i = 0;
            while i < steps.len() {
                match closed_window(&steps, i) {
                    Some(j) => {
                        let mut local = self.tensor_one(&[colors[c]]);
                        let mut inner = Vec::new();
                        for s in &steps[i..=j] {
                            local = self.step(local, 0, colors[c], s, &mut inner, &lay.crossings, &colors, conv)?;
                        }
                        state = self.mul_leg(&state, leg, &local.into_alg()?, true)?;
                        i = j + 1;
                    }
                    None => {
                        state = self.step(state, leg, colors[c], &steps[i], &mut pending, &lay.crossings, &colors, conv)?;
                        i += 1;
                    }
                }
            }
            if let Some(f) = forms {
                state = self.apply_form(&state, 0, f[c])?;
            }
        }
        if !pending.is_empty() {
            return Err(Error::Verification(format!("crossings {pending:?} were met only once")));
        }
        Ok(state)
    }

    /// Apply one step of a walk along the component on leg `leg`; the legs after the
    /// component legs hold the unmatched crossings in `pending`, in order.
    #[allow(clippy::too_many_arguments)]
    fn step(
        &self,
        state: TensorElem,
        leg: usize,
        a: Color,
        s: &Step,
        pending: &mut Vec<usize>,
        crossings: &[CrossingInfo],
        colors: &[Color],
        conv: BeadConvention,
    ) -> Result<TensorElem> {
        let base = state.arity() - pending.len();
        match *s {
            Step::Cap { left_to_right: true } => self.mul_leg(&state, leg, &self.pivot(a), true),
            Step::Cup { left_to_right: true } => self.mul_leg(&state, leg, &self.pivot_inv(a), true),
            Step::Cap { .. } | Step::Cup { .. } => Ok(state),
            Step::Crossing { id, over, .. } => {
                if let Some(j) = pending.iter().position(|&p| p == id) {
                    pending.remove(j);
                    self.absorb(&state, base + j, leg)
                } else {
                    let t = self.crossing_tensor(&crossings[id], colors, conv)?;
                    let mine = usize::from(over != (conv == BeadConvention::OverFirst));
                    pending.push(id);
                    self.attach(&state, &t, mine, leg)
                }
            }
        }
    }

    /// Apply one linear form per leg.
    pub fn evaluate(&self, t: &TensorElem, forms: &[Evaluator]) -> Result<Scalar> {
        if forms.len() != t.arity() {
            return Err(Error::Input(format!("{} forms for {} legs", forms.len(), t.arity())));
        }
        let modules = t
            .grades
            .iter()
            .zip(forms)
            .map(|(g, f)| match f {
                Evaluator::ModuleTrace(k) => self.build_module(*g, *k).map(Some),
                _ => Ok(None),
            })
            .collect::<Result<Vec<_>>>()?;
        let apply = |i: usize, x: &AlgElem| -> Result<Scalar> {
            match forms[i] {
                Evaluator::Mu => Ok(self.mu(x)),
                Evaluator::MuMod => self.mu_mod(x),
                Evaluator::ModuleTrace(_) => Ok(self.represent(x, modules[i].as_ref().unwrap())?.trace()),
            }
        };
        let mut acc = t.clone();
        while acc.arity() > 0 {
            let last = acc.arity() - 1;
            acc = self.contract_leg(&acc, last, |x| apply(last, x))?;
        }
        Ok(acc.terms.into_values().sum::<Scalar>().canonical())
    }
}
