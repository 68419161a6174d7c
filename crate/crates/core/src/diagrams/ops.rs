use super::layout::Layout;
use super::{ComponentSpec, Event, EventKind, GDiagram, Orient};
use crate::error::{Error, Result};
use crate::pbw::Color;

/// A strand of the new diagram whose color, direction and source component are known.
struct Mark {
    level: usize,
    pos: usize,
    color: Color,
    up: bool,
    id: usize,
}

fn ev(kind: EventKind, pos: usize) -> Vec<Event> {
    vec![Event { kind, pos }]
}

/// Assemble a diagram from rows, naming each discovered component after a marked strand on
/// it. Also returns the new index of every mark id.
fn assemble(d: &GDiagram, rows: Vec<Vec<Event>>, nopen: usize, marks: &[Mark]) -> Result<(GDiagram, Vec<usize>)> {
    let lay = Layout::discover(&rows, nopen)?;
    let mut specs: Vec<Option<ComponentSpec>> = vec![None; lay.steps.len()];
    let mut map = vec![usize::MAX; marks.iter().map(|m| m.id + 1).max().unwrap_or(0)];
    for m in marks {
        let (c, up) = lay.strands[m.level][m.pos];
        let orient = if up == m.up { Orient::Up } else { Orient::Down };
        specs[c].get_or_insert(ComponentSpec { color: m.color, orient });
        map[m.id] = c;
    }
    let components = specs
        .into_iter()
        .enumerate()
        .map(|(c, s)| s.ok_or_else(|| Error::Verification(format!("component {c} of the rebuilt diagram is unaccounted for"))))
        .collect::<Result<Vec<_>>>()?;
    Ok((GDiagram::with_ring(d.ring.clone(), components, (0..nopen).collect(), rows)?, map))
}

impl GDiagram {
    /// Same diagram with one event per row, and the new index of every component.
    pub fn elementary(&self) -> Result<(GDiagram, Vec<usize>)> {
        let mut rows = Vec::new();
        let mut marks = self.marks_at(0, 0, |p| vec![p]);
        for (r, row) in self.rows.iter().enumerate() {
            // right to left keeps the positions of the remaining events valid
            let mut evs: Vec<Event> = row.iter().filter(|e| e.kind != EventKind::Id).copied().collect();
            evs.sort_by_key(|e| (e.pos, e.kind != EventKind::Cup));
            for e in evs.into_iter().rev() {
                rows.push(vec![e]);
            }
            marks.extend(self.marks_at(r + 1, rows.len(), |p| vec![p]));
        }
        assemble(self, rows, self.open.len(), &marks)
    }

    /// Marks copying each strand of `level` to the listed positions of `new_level`.
    fn marks_at(&self, level: usize, new_level: usize, place: impl Fn(usize) -> Vec<usize>) -> Vec<Mark> {
        (0..self.layout.widths[level])
            .flat_map(|p| {
                let (id, up) = self.layout.strands[level][p];
                let color = self.components[id].color;
                place(p).into_iter().map(move |pos| Mark { level: new_level, pos, color, up, id })
            })
            .collect()
    }

    /// Reverse the orientation of component `i` and negate its color.
    pub fn reverse_component(&self, i: usize) -> Result<GDiagram> {
        if i >= self.components.len() {
            return Err(Error::Input(format!("no component {i}")));
        }
        if self.open.contains(&i) {
            return Err(Error::Input(format!("component {i} is open")));
        }
        let mut components = self.components.clone();
        components[i] = ComponentSpec { color: -components[i].color, orient: components[i].orient.flip() };
        GDiagram::with_ring(self.ring.clone(), components, self.open.clone(), self.rows.clone())
    }

    /// Replace component `i` by two blackboard-parallel copies colored `a` and `b`; on each
    /// strand the copy colored `a` lies on the left of the direction of travel. The map sends
    /// old indices to new ones, with `i` going to the `a` copy and one extra entry for the `b` copy.
    pub fn double_component(&self, i: usize, a: Color, b: Color) -> Result<(GDiagram, Vec<usize>)> {
        let spec = self.components.get(i).ok_or_else(|| Error::Input(format!("no component {i}")))?;
        if a + b != spec.color {
            return Err(Error::Input(format!("colors {a} and {b} do not sum to {}", spec.color)));
        }
        let (d, emap) = self.elementary()?;
        let n = self.components.len();
        let back: Vec<usize> = (0..n).map(|c| emap.iter().position(|&x| x == c).unwrap()).collect();
        let ie = emap[i];
        let lay = &d.layout;
        let mult = |lv: usize, p: usize| if lay.strands[lv][p].0 == ie { 2 } else { 1 };
        let newpos = |lv: usize, p: usize| (0..p).map(|q| mult(lv, q)).sum::<usize>();
        let marks_at = |lv: usize, new_level: usize| -> Vec<Mark> {
            let mut out = Vec::new();
            for p in 0..lay.widths[lv] {
                let (c, up) = lay.strands[lv][p];
                let at = newpos(lv, p);
                if c == ie {
                    let (l, r) = if up { ((a, i), (b, n)) } else { ((b, n), (a, i)) };
                    out.push(Mark { level: new_level, pos: at, color: l.0, up, id: l.1 });
                    out.push(Mark { level: new_level, pos: at + 1, color: r.0, up, id: r.1 });
                } else {
                    out.push(Mark { level: new_level, pos: at, color: d.components[c].color, up, id: back[c] });
                }
            }
            out
        };
        let mut rows = Vec::new();
        let mut marks = marks_at(0, 0);
        for (r, row) in d.rows.iter().enumerate() {
            let e = row[0];
            let at = newpos(r, e.pos);
            match e.kind {
                EventKind::Cup => {
                    let top = lay.blocks[r].iter().find(|b| b.kind == EventKind::Cup).unwrap().top;
                    if lay.strands[r + 1][top].0 == ie {
                        rows.push(ev(EventKind::Cup, at));
                        rows.push(ev(EventKind::Cup, at + 1));
                    } else {
                        rows.push(ev(EventKind::Cup, at));
                    }
                }
                EventKind::Cap => {
                    if mult(r, e.pos) == 2 {
                        rows.push(ev(EventKind::Cap, at + 1));
                        rows.push(ev(EventKind::Cap, at));
                    } else {
                        rows.push(ev(EventKind::Cap, at));
                    }
                }
                EventKind::Over | EventKind::Under => {
                    let (mx, my) = (mult(r, e.pos), mult(r, e.pos + 1));
                    for x in (0..mx).rev() {
                        for y in 0..my {
                            rows.push(ev(e.kind, at + x + y));
                        }
                    }
                }
                EventKind::Id => unreachable!("elementary rows have no identity events"),
            }
            marks.extend(marks_at(r + 1, rows.len()));
        }
        let nopen = d.open.len() + usize::from(d.open.contains(&ie));
        assemble(self, rows, nopen, &marks)
    }

    /// Close the single open strand on its right, so that its factor of `J` becomes `g J`.
    pub fn closure(&self) -> Result<(GDiagram, Vec<usize>)> {
        if self.open.len() != 1 {
            return Err(Error::Input(format!("closure needs exactly one open strand, found {}", self.open.len())));
        }
        let mut rows = vec![ev(EventKind::Cup, 0)];
        rows.extend(self.rows.iter().cloned());
        rows.push(ev(EventKind::Cap, 0));
        let mut marks = Vec::new();
        for lv in 0..self.layout.widths.len() {
            marks.extend(self.marks_at(lv, lv + 1, |p| vec![p]));
        }
        assemble(self, rows, 0, &marks)
    }

    /// Cut closed component `j` open on an upward strand and pull both ends to the boundary
    /// along the left edge, keeping the framing. The cut component becomes the open strand.
    pub fn cut_component(&self, j: usize) -> Result<(GDiagram, Vec<usize>)> {
        if !self.open.is_empty() {
            return Err(Error::Input("cutting needs a closed diagram".into()));
        }
        if j >= self.components.len() {
            return Err(Error::Input(format!("no component {j}")));
        }
        let lay = &self.layout;
        let (level, p) = (1..lay.widths.len())
            .flat_map(|lv| (0..lay.widths[lv]).map(move |p| (lv, p)))
            .find(|&(lv, p)| lay.strands[lv][p] == (j, true))
            .ok_or_else(|| Error::Verification(format!("component {j} has no upward strand")))?;
        let shift = |row: &Vec<Event>| row.iter().map(|e| Event { kind: e.kind, pos: e.pos + 1 }).collect::<Vec<_>>();
        // a positive curl on the new strand cancels the crossing of the two ends
        let mut rows = vec![ev(EventKind::Cup, 1), ev(EventKind::Over, 0), ev(EventKind::Cap, 1)];
        let base = rows.len();
        rows.extend(self.rows[..level].iter().map(shift));
        // the lower end moves left over everything, then the upper end moves right over everything
        for q in (1..=p).rev() {
            rows.push(ev(EventKind::Under, q));
        }
        rows.push(ev(EventKind::Under, 0));
        for q in 1..=p {
            rows.push(ev(EventKind::Over, q));
        }
        let inserted = 2 * p + 1;
        rows.extend(self.rows[level..].iter().map(shift));
        let mut marks = Vec::new();
        for lv in 0..lay.widths.len() {
            let new_level = base + lv + if lv > level { inserted } else { 0 };
            marks.extend(self.marks_at(lv, new_level, |q| vec![q + 1]));
        }
        assemble(self, rows, 1, &marks)
    }
    /// Encircle the strands `start..start + count` of `level` together with one strand of a new
    /// 0-framed unknot `K` by a new +1-framed unknot `U` colored 0. `K` gets the color that makes
    /// the coloring consistent along the longitude of `U`. The map sends old indices to new ones,
    /// with two extra entries for `U` and `K`.
    pub fn stabilize(&self, level: usize, start: usize, count: usize) -> Result<(GDiagram, Vec<usize>)> {
        if !self.open.is_empty() {
            return Err(Error::Input("stabilizing needs a closed diagram".into()));
        }
        let lay = &self.layout;
        if level >= lay.widths.len() || start + count > lay.widths[level] {
            return Err(Error::Input(format!("strands {start}..{} are not on level {level}", start + count)));
        }
        if count == 0 {
            return Err(Error::Input("no strands selected".into()));
        }
        let n = self.components.len();
        let (p, last) = (start, start + count);
        let mut rows = self.rows[..level].to_vec();
        rows.push(ev(EventKind::Cup, p));
        rows.push(ev(EventKind::Cup, p + 1));
        let inner = rows.len();
        rows.extend([ev(EventKind::Cup, p + 2), ev(EventKind::Over, p + 1), ev(EventKind::Cap, p + 2)]);
        rows.extend((p + 2..=last + 2).map(|q| ev(EventKind::Over, q)));
        rows.extend((p + 1..=last + 1).map(|q| ev(EventKind::Under, q)));
        rows.push(ev(EventKind::Cap, last + 2));
        rows.push(ev(EventKind::Cap, p));
        let inserted = rows.len() - level;
        rows.extend(self.rows[level..].iter().cloned());
        let mut marks = vec![
            Mark { level: inner, pos: p + 1, color: Color::zero(), up: true, id: n },
            Mark { level: inner, pos: p, color: Color::zero(), up: true, id: n + 1 },
        ];
        for lv in 0..lay.widths.len() {
            marks.extend(self.marks_at(lv, lv + if lv >= level { inserted } else { 0 }, |q| vec![q]));
        }
        let (d, map) = assemble(self, rows, 0, &marks)?;
        let (u, k) = (map[n], map[n + 1]);
        let lk_uk = d.linking_number(u, k);
        let mut sum = Color::zero();
        for c in 0..n {
            let lk = d.linking_number(u, map[c]);
            let a = if lk > 0 { self.components[c].color } else { -self.components[c].color };
            for _ in 0..lk.abs() {
                sum = sum + a;
            }
        }
        let mut components = d.components.clone();
        components[k].color = if lk_uk > 0 { -sum } else { sum };
        Ok((GDiagram::with_ring(d.ring.clone(), components, Vec::new(), d.rows.clone())?, map))
    }
}
