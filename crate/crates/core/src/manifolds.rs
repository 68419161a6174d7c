//! Surgery presentations of `G`-manifolds and the invariants `HV` and `HV'`.
//!
//! The anomaly is normalized by `delta_+^{-b_+} delta_-^{-b_-}`, where `b_±` count the positive
//! and negative eigenvalues of the linking matrix.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::diagrams::{ComponentSpec, Evaluator, Event, EventKind, GDiagram, Orient};
use crate::error::{Error, Result};
use crate::pbw::{Color, Uq};
use crate::scalar::Scalar;

/// Linking matrix of a framed link and its inertia.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkingData {
    pub matrix: Vec<Vec<i64>>,
    pub b_plus: usize,
    pub b_minus: usize,
    pub signature: i64,
}

/// Numbers of positive and negative eigenvalues of a symmetric integer matrix.
pub fn inertia(m: &[Vec<i64>]) -> (usize, usize) {
    let mut a: Vec<Vec<BigRational>> = m.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    let (mut pos, mut neg) = (0, 0);
    while !a.is_empty() {
        let n = a.len();
        if let Some(k) = (0..n).find(|&k| !a[k][k].is_zero()) {
            a.swap(0, k);
            for r in &mut a {
                r.swap(0, k);
            }
        } else if let Some((i, j)) = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero()) {
            // row and column i += row and column j makes the diagonal entry 2 a_ij
            for c in 0..n {
                let v = a[j][c].clone();
                a[i][c] += v;
            }
            for r in &mut a {
                let v = r[j].clone();
                r[i] += v;
            }
            a.swap(0, i);
            for r in &mut a {
                r.swap(0, i);
            }
        } else {
            break;
        }
        let p = a[0][0].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        let rest: Vec<Vec<BigRational>> =
            (1..n).map(|i| (1..n).map(|j| &a[i][j] - &a[i][0] * &a[0][j] / &p).collect()).collect();
        a = rest;
    }
    (pos, neg)
}

pub fn linking_data(d: &GDiagram) -> Result<LinkingData> {
    if !d.is_closed() {
        return Err(Error::Input("linking data needs a closed diagram".into()));
    }
    let n = d.num_components();
    let matrix: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| if i == j { d.writhe(i) } else { d.linking_number(i, j) }).collect()).collect();
    let (b_plus, b_minus) = inertia(&matrix);
    Ok(LinkingData { matrix, b_plus, b_minus, signature: b_plus as i64 - b_minus as i64 })
}

/// A closed blackboard-framed diagram whose colors are the values of the cohomology class on
/// the oriented meridians.
#[derive(Clone, Debug)]
pub struct SurgeryPresentation {
    pub diagram: GDiagram,
    pub linking: LinkingData,
}

/// Result of evaluating `HV` or `HV'`.
#[derive(Clone, Debug, Serialize)]
pub struct InvResult {
    pub value: Scalar,
    pub ell: u32,
    pub eta: Scalar,
    pub colors: Vec<Color>,
    pub b_plus: usize,
    pub b_minus: usize,
    pub cut_component: Option<usize>,
    pub normalization: &'static str,
}

impl SurgeryPresentation {
    /// Rejects colorings that do not vanish on the longitudes.
    pub fn new(diagram: GDiagram) -> Result<Self> {
        let linking = linking_data(&diagram)?;
        let colors = diagram.colors();
        for (i, row) in linking.matrix.iter().enumerate() {
            let mut sum = Color::zero();
            for (&m, &a) in row.iter().zip(&colors) {
                let a = if m < 0 { -a } else { a };
                for _ in 0..m.abs() {
                    sum = sum + a;
                }
            }
            if !sum.is_zero() {
                return Err(Error::Input(format!("colors are inconsistent along the longitude of component {i}: it carries {sum}")));
            }
        }
        Ok(SurgeryPresentation { diagram, linking })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(GDiagram::parse(text)?)
    }

    pub fn colors(&self) -> Vec<Color> {
        self.diagram.colors()
    }

    /// Some component is colored in `G'`.
    pub fn is_computable(&self) -> bool {
        self.colors().iter().any(|c| c.in_gprime())
    }

    /// Append a disjoint `sign`-framed unknot colored 0 above the diagram.
    pub fn kirby1(&self, sign: i32) -> Result<SurgeryPresentation> {
        let d = &self.diagram;
        let crossing = match sign {
            1 => EventKind::Over,
            -1 => EventKind::Under,
            _ => return Err(Error::Input(format!("framing sign must be 1 or -1, got {sign}"))),
        };
        let mut rows = d.rows.clone();
        for (kind, pos) in [(EventKind::Cup, 0), (EventKind::Cup, 1), (crossing, 0), (EventKind::Cap, 1), (EventKind::Cap, 0)] {
            rows.push(vec![Event { kind, pos }]);
        }
        let mut components = d.components.clone();
        components.push(ComponentSpec { color: Color::zero(), orient: Orient::Up });
        Self::new(GDiagram::with_ring(d.ring.clone(), components, Vec::new(), rows)?)
    }

    /// Make the presentation computable by encircling the strands `start..start + count` of
    /// `level`: a 0-colored +1-framed unknot links them and a new 0-framed unknot whose color
    /// is their signed sum. Returns the new presentation and the index of the new unknot.
    pub fn stabilize_computable(&self, level: usize, start: usize, count: usize) -> Result<(SurgeryPresentation, usize)> {
        let (d, map) = self.diagram.stabilize(level, start, count)?;
        let k = map[self.diagram.num_components() + 1];
        let color = d.components[k].color;
        if !color.in_gprime() {
            return Err(Error::NotComputable(format!("the selected strands sum to {color}, which is not in G'")));
        }
        Ok((Self::new(d)?, k))
    }

    fn anomaly(&self, u: &Uq) -> Result<Scalar> {
        let (plus, minus) = u.delta_pm()?;
        Ok(&plus.pow(-(self.linking.b_plus as i64))? * &minus.pow(-(self.linking.b_minus as i64))?)
    }

    fn result(&self, u: &Uq, value: Scalar, cut_component: Option<usize>) -> InvResult {
        InvResult {
            value: value.canonical(),
            ell: u.ell(),
            eta: u.root.eta.clone(),
            colors: self.colors(),
            b_plus: self.linking.b_plus,
            b_minus: self.linking.b_minus,
            cut_component,
            normalization: "bpm",
        }
    }

    /// `HV`: the right integral on every factor of `J`, normalized.
    pub fn hv(&self, u: &Uq) -> Result<InvResult> {
        let norm = self.anomaly(u)?;
        let v = u.invariant_value(&self.diagram, &vec![Evaluator::Mu; self.diagram.num_components()])?;
        Ok(self.result(u, &norm * &v, None))
    }

    /// `HV'`: cut component `j`, apply the modified trace form to the open factor and the
    /// right integral to the others, normalized.
    pub fn hv_mod(&self, u: &Uq, j: usize) -> Result<InvResult> {
        let a = self.diagram.components.get(j).ok_or_else(|| Error::Input(format!("no component {j}")))?.color;
        if !a.in_gprime() {
            return Err(Error::NotComputable(format!("component {j} is colored {a}, which is not in G'")));
        }
        let norm = self.anomaly(u)?;
        let (t, map) = self.diagram.cut_component(j)?;
        let forms: Vec<Evaluator> = (0..t.num_components()).map(|i| if i == map[j] { Evaluator::MuMod } else { Evaluator::Mu }).collect();
        let v = u.invariant_value(&t, &forms)?;
        Ok(self.result(u, &norm * &v, Some(j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOPF: &str = "component 0 color=0\ncomponent 1 color=0\nrow: cup@0\nrow: cup@1\nrow: x+@0\nrow: x+@0\nrow: cap@1\nrow: cap@0\n";
    pub(crate) const LENS3: &str = "component 0 color=2/3\ncomponent 1 color=2/3\n\
        row: cup@0\nrow: cup@1\nrow: x+@0\nrow: x+@0\n\
        row: cup@4\nrow: x+@3\nrow: cap@4\nrow: cup@4\nrow: x+@3\nrow: cap@4\n\
        row: cup@3\nrow: x+@2\nrow: cap@3\nrow: cup@3\nrow: x+@2\nrow: cap@3\n\
        row: cap@1\nrow: cap@0\n";

    fn unknot(color: &str) -> SurgeryPresentation {
        SurgeryPresentation::parse(&format!("component 0 color={color}\nrow: cup@0\nrow: cap@0\n")).unwrap()
    }

    fn empty() -> SurgeryPresentation {
        SurgeryPresentation::parse("").unwrap()
    }

    #[test]
    fn linking_matrices() {
        let l = unknot("1/2").linking;
        assert_eq!((l.matrix.clone(), l.signature), (vec![vec![0]], 0));
        let p = empty().kirby1(1).unwrap().linking;
        assert_eq!((p.matrix.clone(), p.b_plus), (vec![vec![1]], 1));
        let h = SurgeryPresentation::parse(HOPF).unwrap().linking;
        assert_eq!(h.matrix, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!((h.b_plus, h.b_minus, h.signature), (1, 1, 0));
        let lens = SurgeryPresentation::parse(LENS3).unwrap().linking;
        assert_eq!(lens.matrix, vec![vec![2, 1], vec![1, 2]]);
        assert_eq!((lens.b_plus, lens.b_minus), (2, 0));
        assert_eq!(inertia(&[vec![0, 0, 3], vec![0, -1, 0], vec![3, 0, 0]]), (1, 2));
        assert_eq!(inertia(&[vec![0, 0], vec![0, 0]]), (0, 0));
    }

    #[test]
    fn inconsistent_colors_are_rejected() {
        assert!(SurgeryPresentation::parse(&HOPF.replace("component 1 color=0", "component 1 color=1/2")).is_err());
        assert!(SurgeryPresentation::parse(&LENS3.replace("component 1 color=2/3", "component 1 color=1/3")).is_err());
    }

    #[test]
    fn spheres_and_kirby_one() {
        for ell in [3, 4, 5, 6] {
            let u = Uq::with_ell(ell).unwrap();
            assert!(empty().hv(&u).unwrap().value.is_one());
            for sign in [1, -1] {
                let s = empty().kirby1(sign).unwrap();
                assert!(s.hv(&u).unwrap().value.is_one(), "ell {ell} sign {sign}");
            }
            let both = empty().kirby1(1).unwrap().kirby1(-1).unwrap();
            assert!(both.hv(&u).unwrap().value.is_one());
            assert!(SurgeryPresentation::parse(HOPF).unwrap().hv(&u).unwrap().value.is_one(), "ell {ell}");
        }
    }

    #[test]
    fn s2_times_s1() {
        for ell in [3, 4, 5, 6] {
            let u = Uq::with_ell(ell).unwrap();
            for a in ["0", "1", "1/2", "1/3"] {
                assert!(unknot(a).hv(&u).unwrap().value.is_zero());
            }
            for a in ["1/4", "1/3", "6/5"] {
                let p = unknot(a);
                let c = Color::from(a.parse::<crate::GaussQ>().unwrap());
                let direct = u.mu(&u.solve_z(c).unwrap());
                let v = p.hv_mod(&u, 0).unwrap().value;
                assert_eq!(v, direct, "ell {ell} a {a}: {v} vs {direct}");
                let k = p.kirby1(1).unwrap().kirby1(-1).unwrap();
                assert!(k.hv_mod(&u, 0).unwrap().value == direct);
            }
            assert!(matches!(unknot("0").hv_mod(&u, 0), Err(Error::NotComputable(_))));
        }
    }

    #[test]
    fn cut_component_does_not_matter() {
        for ell in [3, 4] {
            let u = Uq::with_ell(ell).unwrap();
            let p = SurgeryPresentation::parse(LENS3).unwrap();
            let x = p.hv_mod(&u, 0).unwrap().value;
            let y = p.hv_mod(&u, 1).unwrap().value;
            assert_eq!(x, y, "ell {ell}: {x} vs {y}");
            let r = SurgeryPresentation::new(p.diagram.reverse_component(1).unwrap()).unwrap();
            assert!(r.hv_mod(&u, 0).unwrap().value == x);
            assert!(r.hv(&u).unwrap().value == p.hv(&u).unwrap().value);
        }
    }

    #[test]
    fn stabilizing_keeps_the_invariants() {
        let u = Uq::with_ell(3).unwrap();
        let p = unknot("1/3");
        let (s, k) = p.stabilize_computable(1, 0, 1).unwrap();
        assert_eq!(s.diagram.num_components(), 3);
        assert!(s.hv(&u).unwrap().value.is_zero());
        let before = p.hv_mod(&u, 0).unwrap().value;
        assert!(s.hv_mod(&u, k).unwrap().value == before);
        assert!(s.hv_mod(&u, 0).unwrap().value == before);

        let plus = empty().kirby1(1).unwrap();
        assert!(matches!(plus.stabilize_computable(1, 0, 1), Err(Error::NotComputable(_))));
        assert!(plus.stabilize_computable(1, 0, 0).is_err());

        let lens = SurgeryPresentation::parse(LENS3).unwrap();
        let (s, k) = lens.stabilize_computable(2, 0, 2).unwrap();
        assert!(s.is_computable());
        assert!(s.colors()[k].in_gprime());
    }
}
