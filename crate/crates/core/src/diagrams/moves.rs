use std::path::Path;

use serde::Serialize;

use super::{BeadConvention, Evaluator, GDiagram};
use crate::error::{Error, Result};
use crate::pbw::{Color, TensorElem, Uq};
use crate::scalar::Scalar;

/// Outcome of comparing two invariants leg by leg.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Comparison {
    pub evaluations: usize,
    pub mismatches: Vec<String>,
}

impl Comparison {
    pub fn agree(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// A named pair of diagrams that present the same colored tangle.
#[derive(Clone, Debug)]
pub struct MovePair {
    pub name: String,
    pub left: GDiagram,
    pub right: GDiagram,
}

impl MovePair {
    /// Read every `<name>.left.txt` / `<name>.right.txt` pair in `dir`, sorted by name.
    pub fn load_dir(dir: &Path) -> Result<Vec<MovePair>> {
        let io = |e: std::io::Error| Error::Input(format!("{}: {e}", dir.display()));
        let mut names: Vec<String> = std::fs::read_dir(dir)
            .map_err(io)?
            .filter_map(|e| e.ok()?.file_name().to_str()?.strip_suffix(".left.txt").map(str::to_owned))
            .collect();
        names.sort();
        names
            .into_iter()
            .map(|name| {
                let read = |side: &str| -> Result<GDiagram> {
                    let path = dir.join(format!("{name}.{side}.txt"));
                    let text = std::fs::read_to_string(&path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
                    GDiagram::parse(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
                };
                Ok(MovePair { left: read("left")?, right: read("right")?, name })
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MoveResult {
    pub name: String,
    pub evaluations: usize,
    pub mismatches: Vec<String>,
}

impl Uq {
    /// Cyclic linear forms available on a closed leg of grade `a`.
    pub fn closed_forms(&self, a: Color) -> Vec<Evaluator> {
        let mut forms = vec![Evaluator::Mu];
        if a.in_gprime() {
            forms.extend((0..self.ellp()).map(Evaluator::ModuleTrace));
            if self.solve_z(a).is_ok() {
                forms.push(Evaluator::MuMod);
            }
        }
        forms
    }

    pub(crate) fn apply_form(&self, t: &TensorElem, leg: usize, f: Evaluator) -> Result<TensorElem> {
        let m = match f {
            Evaluator::ModuleTrace(k) => Some(self.build_module(t.grades[leg], k)?),
            _ => None,
        };
        self.contract_leg(t, leg, |x| match f {
            Evaluator::Mu => Ok(self.mu(x)),
            Evaluator::MuMod => self.mu_mod(x),
            Evaluator::ModuleTrace(_) => Ok(self.represent(x, m.as_ref().unwrap())?.trace()),
        })
    }

    /// Compare two invariants with the same grades: every closed leg (not listed in `open`) is
    /// contracted with every available cyclic form, and what remains is compared exactly.
    pub fn compare_invariants(&self, x: &TensorElem, y: &TensorElem, open: &[usize]) -> Result<Comparison> {
        let mut cmp = Comparison::default();
        if x.grades != y.grades {
            cmp.mismatches.push(format!("grades {:?} vs {:?}", x.grades, y.grades));
            return Ok(cmp);
        }
        let closed: Vec<usize> = (0..x.arity()).filter(|i| !open.contains(i)).collect();
        let families: Vec<Vec<Evaluator>> = closed.iter().map(|&i| self.closed_forms(x.grades[i])).collect();
        let mut choice = vec![0usize; closed.len()];
        loop {
            let (mut a, mut b) = (x.clone(), y.clone());
            for (k, &leg) in closed.iter().enumerate().rev() {
                a = self.apply_form(&a, leg, families[k][choice[k]])?;
                b = self.apply_form(&b, leg, families[k][choice[k]])?;
            }
            cmp.evaluations += 1;
            if !a.equals(&b) {
                let forms: Vec<String> = choice.iter().zip(&families).map(|(c, f)| format!("{:?}", f[*c])).collect();
                let describe = |t: &TensorElem| if t.arity() == 0 { t.terms.values().cloned().sum::<Scalar>().to_string() } else { format!("{} terms", t.len()) };
                cmp.mismatches.push(format!("forms [{}]: {} vs {}", forms.join(", "), describe(&a), describe(&b)));
            }
            let mut k = 0;
            loop {
                if k == choice.len() {
                    return Ok(cmp);
                }
                choice[k] += 1;
                if choice[k] < families[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    /// Compare the universal invariants of every pair under one bead convention.
    pub fn check_moves(&self, pairs: &[MovePair], conv: BeadConvention) -> Result<Vec<MoveResult>> {
        pairs
            .iter()
            .map(|p| {
                let x = self.universal_invariant_with(&p.left, conv)?;
                let y = self.universal_invariant_with(&p.right, conv)?;
                let cmp = self.compare_invariants(&x, &y, &p.left.open)?;
                Ok(MoveResult { name: p.name.clone(), evaluations: cmp.evaluations, mismatches: cmp.mismatches })
            })
            .collect()
    }

    /// The conventions under which every pair agrees.
    pub fn passing_conventions(&self, pairs: &[MovePair]) -> Result<Vec<BeadConvention>> {
        let mut out = Vec::new();
        for conv in [BeadConvention::OverFirst, BeadConvention::UnderFirst] {
            if self.check_moves(pairs, conv)?.iter().all(|r| r.mismatches.is_empty()) {
                out.push(conv);
            }
        }
        Ok(out)
    }
}
