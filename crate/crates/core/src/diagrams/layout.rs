use std::collections::HashMap;

use super::{ComponentSpec, Event, EventKind, Orient};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Up {
    Pass(usize),
    Cap(usize),
    Cross(usize, usize, bool),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Down {
    Pass(usize),
    Cup(usize),
    Cross(usize, usize, bool),
}

/// One crossing with the components and directions of its two strands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingInfo {
    pub row: usize,
    pub positive_kind: bool,
    pub over_comp: usize,
    pub under_comp: usize,
    pub over_up: bool,
    pub under_up: bool,
    pub sign: i64,
}

/// One event of a row with its first bottom and first top position; pass-through
/// strands appear as `Id`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub kind: EventKind,
    pub bottom: usize,
    pub top: usize,
}

/// What a component meets while it is traversed along its orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Crossing { id: usize, over: bool, up: bool },
    Cap { left_to_right: bool },
    Cup { left_to_right: bool },
}

#[derive(Clone, Debug, Default)]
pub struct Layout {
    pub widths: Vec<usize>,
    pub crossings: Vec<CrossingInfo>,
    /// Steps of each component in the order of its orientation.
    pub steps: Vec<Vec<Step>>,
    /// Component and upward direction of every strand at every level.
    pub strands: Vec<Vec<(usize, bool)>>,
    pub blocks: Vec<Vec<Block>>,
}

fn rerr(row: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line: row + 1, msg: msg.into() }
}

struct Wiring {
    up: Vec<Vec<Up>>,
    down: Vec<Vec<Down>>,
    widths: Vec<usize>,
    crossing_rows: Vec<(usize, bool)>,
    blocks: Vec<Vec<Block>>,
}

fn wire(rows: &[Vec<Event>], bottom: usize) -> Result<Wiring> {
    let mut w = Wiring { up: Vec::new(), down: Vec::new(), widths: vec![bottom], crossing_rows: Vec::new(), blocks: Vec::new() };
    for (r, row) in rows.iter().enumerate() {
        let width = *w.widths.last().unwrap();
        let mut at: HashMap<usize, EventKind> = HashMap::new();
        let mut cups: Vec<usize> = Vec::new();
        let mut used = vec![false; width];
        for e in row {
            let (inn, _) = e.kind.arity();
            if e.kind == EventKind::Cup {
                if e.pos > width {
                    return Err(rerr(r, format!("cup@{} is outside the row of width {width}", e.pos)));
                }
                if cups.contains(&e.pos) {
                    return Err(rerr(r, format!("two cups at position {}", e.pos)));
                }
                cups.push(e.pos);
                continue;
            }
            if e.pos + inn > width {
                return Err(rerr(r, format!("{}@{} needs strands beyond the row of width {width}", e.kind.token(), e.pos)));
            }
            for u in &mut used[e.pos..e.pos + inn] {
                if *u {
                    return Err(rerr(r, format!("events overlap at position {}", e.pos)));
                }
                *u = true;
            }
            at.insert(e.pos, e.kind);
        }
        let mut up = vec![Up::Pass(0); width];
        let mut down = Vec::new();
        let mut blocks = Vec::new();
        let mut p = 0;
        loop {
            if cups.contains(&p) {
                let t = down.len();
                blocks.push(Block { kind: EventKind::Cup, bottom: p, top: t });
                down.push(Down::Cup(t + 1));
                down.push(Down::Cup(t));
            }
            if p >= width {
                break;
            }
            match at.get(&p).copied() {
                None | Some(EventKind::Id) => {
                    blocks.push(Block { kind: EventKind::Id, bottom: p, top: down.len() });
                    up[p] = Up::Pass(down.len());
                    down.push(Down::Pass(p));
                    p += 1;
                }
                Some(EventKind::Cap) => {
                    blocks.push(Block { kind: EventKind::Cap, bottom: p, top: down.len() });
                    up[p] = Up::Cap(p + 1);
                    up[p + 1] = Up::Cap(p);
                    p += 2;
                }
                Some(kind) => {
                    let id = w.crossing_rows.len();
                    w.crossing_rows.push((r, kind == EventKind::Over));
                    let t = down.len();
                    blocks.push(Block { kind, bottom: p, top: t });
                    up[p] = Up::Cross(id, t + 1, true);
                    up[p + 1] = Up::Cross(id, t, false);
                    down.push(Down::Cross(id, p + 1, false));
                    down.push(Down::Cross(id, p, true));
                    p += 2;
                }
            }
        }
        w.widths.push(down.len());
        w.up.push(up);
        w.down.push(down);
        w.blocks.push(blocks);
    }
    Ok(w)
}

enum Walk {
    Closed,
    Boundary,
}

impl Layout {
    pub fn build(rows: &[Vec<Event>], components: &[ComponentSpec], open: &[usize]) -> Result<Layout> {
        let lay = Self::walk(rows, Some(components), open.len())?;
        let open_found: Vec<usize> = (0..open.len()).collect();
        if lay.steps.len() != components.len() {
            return Err(Error::Input(format!("diagram has {} components but {} are declared", lay.steps.len(), components.len())));
        }
        if open_found != open {
            return Err(Error::Input(format!("open components are {open_found:?} but {open:?} were declared")));
        }
        Ok(lay)
    }

    /// Layout with every component seeded upward, for diagrams whose components are not known yet.
    pub(crate) fn discover(rows: &[Vec<Event>], nopen: usize) -> Result<Layout> {
        Self::walk(rows, None, nopen)
    }

    fn walk(rows: &[Vec<Event>], components: Option<&[ComponentSpec]>, nopen: usize) -> Result<Layout> {
        let nrows = rows.len();
        let w = wire(rows, nopen)?;
        if *w.widths.last().unwrap() != nopen {
            return Err(rerr(
                nrows.saturating_sub(1),
                format!("top width {} differs from the {nopen} open strands", w.widths.last().unwrap()),
            ));
        }
        let mut seen: Vec<Vec<bool>> = w.widths.iter().map(|&n| vec![false; n]).collect();
        let mut strands: Vec<Vec<(usize, bool)>> = w.widths.iter().map(|&n| vec![(0, true); n]).collect();
        let mut steps: Vec<Vec<Step>> = Vec::new();

        for level in 0..w.widths.len() {
            for pos in 0..w.widths[level] {
                if seen[level][pos] {
                    continue;
                }
                let c = steps.len();
                let orient = match components {
                    Some(specs) => {
                        specs
                            .get(c)
                            .ok_or_else(|| Error::Input(format!("diagram has more than the {} declared components", specs.len())))?
                            .orient
                    }
                    None => Orient::Up,
                };
                let is_open = level == 0;
                let start_up = is_open || orient == Orient::Up;
                let mut st = Vec::new();
                let (mut lv, mut p, mut goes_up) = (level, pos, start_up);
                let end = loop {
                    seen[lv][p] = true;
                    strands[lv][p] = (c, goes_up);
                    if goes_up {
                        if lv == nrows {
                            break Walk::Boundary;
                        }
                        match w.up[lv][p] {
                            Up::Pass(t) => {
                                lv += 1;
                                p = t;
                            }
                            Up::Cap(q) => {
                                st.push(Step::Cap { left_to_right: q > p });
                                p = q;
                                goes_up = false;
                            }
                            Up::Cross(id, t, from_left) => {
                                st.push(Step::Crossing { id, over: from_left == w.crossing_rows[id].1, up: true });
                                lv += 1;
                                p = t;
                            }
                        }
                    } else {
                        if lv == 0 {
                            break Walk::Boundary;
                        }
                        match w.down[lv - 1][p] {
                            Down::Pass(q) => {
                                lv -= 1;
                                p = q;
                            }
                            Down::Cup(t) => {
                                st.push(Step::Cup { left_to_right: t > p });
                                p = t;
                                goes_up = true;
                            }
                            Down::Cross(id, q, from_left) => {
                                st.push(Step::Crossing { id, over: from_left == w.crossing_rows[id].1, up: false });
                                lv -= 1;
                                p = q;
                            }
                        }
                    }
                    if (lv, p, goes_up) == (level, pos, start_up) {
                        break Walk::Closed;
                    }
                };
                match (is_open, end) {
                    (true, Walk::Boundary) if lv == nrows => {
                        if orient == Orient::Down {
                            for s in strands.iter_mut().flatten().filter(|s| s.0 == c) {
                                s.1 = !s.1;
                            }
                            st.reverse();
                            for s in &mut st {
                                match s {
                                    Step::Crossing { up, .. } => *up = !*up,
                                    Step::Cap { left_to_right } | Step::Cup { left_to_right } => *left_to_right = !*left_to_right,
                                }
                            }
                        }
                    }
                    (true, _) => return Err(Error::Input(format!("open component {c} must run from the bottom to the top"))),
                    (false, Walk::Closed) => {}
                    (false, Walk::Boundary) => unreachable!("closed walks cannot reach the boundary"),
                }
                steps.push(st);
            }
        }
        // (crossing id) -> [(component, up) of the over strand, of the under strand]
        let mut strand_of: Vec<[Option<(usize, bool)>; 2]> = vec![[None, None]; w.crossing_rows.len()];
        for (c, st) in steps.iter().enumerate() {
            for s in st {
                if let Step::Crossing { id, over, up } = *s {
                    strand_of[id][usize::from(!over)] = Some((c, up));
                }
            }
        }
        let crossings = w
            .crossing_rows
            .iter()
            .zip(&strand_of)
            .map(|(&(row, positive_kind), s)| {
                let (over, under) = (s[0].unwrap(), s[1].unwrap());
                let dir = |from_left: bool, up: bool| -> (i64, i64) {
                    let dx = if from_left { 1 } else { -1 };
                    if up {
                        (dx, 1)
                    } else {
                        (-dx, -1)
                    }
                };
                let vo = dir(positive_kind, over.1);
                let vu = dir(!positive_kind, under.1);
                let cross = vo.0 * vu.1 - vo.1 * vu.0;
                CrossingInfo {
                    row,
                    positive_kind,
                    over_comp: over.0,
                    under_comp: under.0,
                    over_up: over.1,
                    under_up: under.1,
                    sign: cross.signum(),
                }
            })
            .collect();
        Ok(Layout { widths: w.widths, crossings, steps, strands, blocks: w.blocks })
    }
}
