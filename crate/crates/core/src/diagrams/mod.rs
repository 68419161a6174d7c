//! G-colored framed tangle diagrams in Morse form and their universal invariant.
//!
//! A diagram is a stack of rows read bottom to top. Each row holds events at strand
//! positions counted at the bottom of the row: `id`, `cup`, `cap`, `x+` (the strand from
//! bottom left to top right passes over) and `x-` (the strand from bottom right to top left
//! passes over). Strands not mentioned in a row pass straight through.

mod invariant;
mod layout;
mod moves;
mod ops;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::GaussQ;
use crate::pbw::Color;

pub use invariant::{BeadConvention, Evaluator};
pub use layout::{Block, CrossingInfo, Layout, Step};
pub use moves::{Comparison, MovePair, MoveResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventKind {
    #[serde(rename = "id")]
    Id,
    #[serde(rename = "cup")]
    Cup,
    #[serde(rename = "cap")]
    Cap,
    #[serde(rename = "x+")]
    Over,
    #[serde(rename = "x-")]
    Under,
}

impl EventKind {
    fn token(self) -> &'static str {
        match self {
            EventKind::Id => "id",
            EventKind::Cup => "cup",
            EventKind::Cap => "cap",
            EventKind::Over => "x+",
            EventKind::Under => "x-",
        }
    }

    /// Strands consumed at the bottom and produced at the top.
    pub(crate) fn arity(self) -> (usize, usize) {
        match self {
            EventKind::Id => (1, 1),
            EventKind::Cup => (0, 2),
            EventKind::Cap => (2, 0),
            EventKind::Over | EventKind::Under => (2, 2),
        }
    }
}

impl FromStr for EventKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "id" => EventKind::Id,
            "cup" => EventKind::Cup,
            "cap" => EventKind::Cap,
            "x+" => EventKind::Over,
            "x-" => EventKind::Under,
            _ => return Err(format!("unknown event '{s}'")),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub kind: EventKind,
    pub pos: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orient {
    #[default]
    Up,
    Down,
}

impl Orient {
    pub fn flip(self) -> Orient {
        match self {
            Orient::Up => Orient::Down,
            Orient::Down => Orient::Up,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub color: Color,
    #[serde(default)]
    pub orient: Orient,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ring {
    pub ell: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<GaussQ>,
}

/// A colored diagram together with its derived layout.
#[derive(Clone, Debug)]
pub struct GDiagram {
    pub ring: Option<Ring>,
    pub components: Vec<ComponentSpec>,
    pub open: Vec<usize>,
    pub rows: Vec<Vec<Event>>,
    layout: Layout,
}

/// Machine-readable form of a diagram.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<Ring>,
    pub components: Vec<ComponentSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub open: Vec<usize>,
    pub rows: Vec<Vec<Event>>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

impl GDiagram {
    pub fn new(components: Vec<ComponentSpec>, open: Vec<usize>, rows: Vec<Vec<Event>>) -> Result<Self> {
        Self::with_ring(None, components, open, rows)
    }

    pub fn with_ring(ring: Option<Ring>, components: Vec<ComponentSpec>, open: Vec<usize>, rows: Vec<Vec<Event>>) -> Result<Self> {
        let mut rows = rows;
        for r in &mut rows {
            r.sort_by_key(|e| e.pos);
        }
        let layout = Layout::build(&rows, &components, &open)?;
        Ok(GDiagram { ring, components, open, rows, layout })
    }

    /// Parse the line-oriented text format; row numbers in errors are 1-based file lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut ring = None;
        let mut comps: Vec<(usize, ComponentSpec, usize)> = Vec::new();
        let mut open = Vec::new();
        let mut rows = Vec::new();
        let mut row_lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().unwrap();
            match head {
                "ring" => {
                    let mut ell = None;
                    let mut eta = None;
                    for w in words {
                        match w.split_once('=') {
                            Some(("ell", v)) => ell = Some(v.parse::<u32>().map_err(|e| perr(ln, format!("bad ell '{v}': {e}")))?),
                            Some(("eta", v)) => eta = Some(v.parse::<GaussQ>().map_err(|e| perr(ln, format!("bad eta '{v}': {e}")))?),
                            _ => return Err(perr(ln, format!("unexpected '{w}' in ring line"))),
                        }
                    }
                    let ell = ell.ok_or_else(|| perr(ln, "ring line needs ell=<int>"))?;
                    ring = Some(Ring { ell, eta });
                }
                "component" => {
                    let idx = words
                        .next()
                        .and_then(|w| w.parse::<usize>().ok())
                        .ok_or_else(|| perr(ln, "component line needs an index"))?;
                    let mut color = None;
                    let mut orient = Orient::Up;
                    for w in words {
                        match w.split_once('=') {
                            Some(("color", v)) => {
                                color = Some(Color::new(v.parse::<GaussQ>().map_err(|e| perr(ln, format!("bad color '{v}': {e}")))?))
                            }
                            Some(("orient", "up")) => orient = Orient::Up,
                            Some(("orient", "down")) => orient = Orient::Down,
                            _ => return Err(perr(ln, format!("unexpected '{w}' in component line"))),
                        }
                    }
                    let color = color.ok_or_else(|| perr(ln, "component line needs color=<value>"))?;
                    comps.push((idx, ComponentSpec { color, orient }, ln));
                }
                "open" => {
                    for w in words {
                        open.push(w.parse::<usize>().map_err(|_| perr(ln, format!("bad open index '{w}'")))?);
                    }
                }
                "row:" => {
                    let mut row = Vec::new();
                    for w in words {
                        let (k, p) = w.split_once('@').ok_or_else(|| perr(ln, format!("event '{w}' needs the form kind@pos")))?;
                        let kind = k.parse::<EventKind>().map_err(|e| perr(ln, e))?;
                        let pos = p.parse::<usize>().map_err(|_| perr(ln, format!("bad position in '{w}'")))?;
                        row.push(Event { kind, pos });
                    }
                    rows.push(row);
                    row_lines.push(ln);
                }
                _ => return Err(perr(ln, format!("unknown directive '{head}'"))),
            }
        }
        comps.sort_by_key(|c| c.0);
        for (want, (idx, _, ln)) in comps.iter().enumerate() {
            if *idx != want {
                return Err(perr(*ln, format!("component indices must be 0..n without gaps, found {idx}")));
            }
        }
        let components = comps.into_iter().map(|c| c.1).collect();
        Self::with_ring(ring, components, open, rows).map_err(|e| match e {
            // layout errors carry the row index; report the file line instead
            Error::Parse { line, msg } if line > 0 && line <= row_lines.len() => Error::Parse { line: row_lines[line - 1], msg },
            e => e,
        })
    }

    pub fn from_doc(doc: DiagramDoc) -> Result<Self> {
        Self::with_ring(doc.ring, doc.components, doc.open, doc.rows)
    }

    pub fn to_doc(&self) -> DiagramDoc {
        DiagramDoc { ring: self.ring.clone(), components: self.components.clone(), open: self.open.clone(), rows: self.rows.clone() }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: DiagramDoc = serde_json::from_str(s).map_err(|e| Error::Input(format!("diagram document: {e}")))?;
        Self::from_doc(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("diagram documents serialize")
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn colors(&self) -> Vec<Color> {
        self.components.iter().map(|c| c.color).collect()
    }

    pub fn is_closed(&self) -> bool {
        self.open.is_empty()
    }

    /// Blackboard framing of component `i`: the signed count of its self-crossings.
    pub fn writhe(&self, i: usize) -> i64 {
        self.layout.crossings.iter().filter(|c| c.over_comp == i && c.under_comp == i).map(|c| c.sign).sum()
    }

    /// Linking number of two distinct components.
    pub fn linking_number(&self, i: usize, j: usize) -> i64 {
        let s: i64 = self
            .layout
            .crossings
            .iter()
            .filter(|c| (c.over_comp == i && c.under_comp == j) || (c.over_comp == j && c.under_comp == i))
            .map(|c| c.sign)
            .sum();
        s / 2
    }
}

impl fmt::Display for GDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = &self.ring {
            write!(f, "ring ell={}", r.ell)?;
            if let Some(eta) = r.eta {
                write!(f, " eta={eta}")?;
            }
            writeln!(f)?;
        }
        for (i, c) in self.components.iter().enumerate() {
            let o = if c.orient == Orient::Up { "up" } else { "down" };
            writeln!(f, "component {i} color={} orient={o}", c.color)?;
        }
        if !self.open.is_empty() {
            let ids: Vec<String> = self.open.iter().map(|i| i.to_string()).collect();
            writeln!(f, "open {}", ids.join(" "))?;
        }
        for row in &self.rows {
            write!(f, "row:")?;
            for e in row {
                write!(f, " {}@{}", e.kind.token(), e.pos)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbw::Uq;

    pub(crate) fn diagram(text: &str) -> GDiagram {
        GDiagram::parse(text).unwrap()
    }

    #[test]
    fn parse_and_print_round_trip() {
        let d = diagram("component 0 color=1/3\nopen 0\nrow: cup@1\nrow: x+@0\nrow: cap@1\n");
        let again = GDiagram::parse(&d.to_string()).unwrap();
        assert_eq!(again.to_doc(), d.to_doc());
        let j = GDiagram::from_json(&d.to_json()).unwrap();
        assert_eq!(j.to_doc(), d.to_doc());
        assert_eq!(d.writhe(0), 1);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let bad = ["component 0 color=1/3\nrow: cup@0\nrow: cap@1\n", "component 0 color=1/3\nrow: cup@0\nrow: x+@0\nrow: bogus@0\n"];
        let lines = [3, 4];
        for (b, l) in bad.iter().zip(lines) {
            match GDiagram::parse(b) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, l),
                other => panic!("expected a parse error, got {other:?}"),
            }
        }
        assert!(GDiagram::parse("component 0 color=1/3\ncomponent 1 color=0\nrow: cup@0\nrow: cap@0\n").is_err());
    }

    #[test]
    fn unknot_and_kink() {
        let u = Uq::with_ell(3).unwrap();
        let a = Color::frac(1, 3);
        let unknot = diagram("component 0 color=1/3\nrow: cup@0\nrow: cap@0\n");
        let j = u.universal_invariant(&unknot).unwrap().into_alg().unwrap();
        assert!(j.equals(&u.pivot(a)));
        let ccw = diagram("component 0 color=1/3 orient=down\nrow: cup@0\nrow: cap@0\n");
        let j = u.universal_invariant(&ccw).unwrap().into_alg().unwrap();
        assert!(j.equals(&u.pivot_inv(a)));
        let kink = diagram("component 0 color=1/3\nopen 0\nrow: cup@1\nrow: x+@0\nrow: cap@1\n");
        let j = u.universal_invariant(&kink).unwrap().into_alg().unwrap();
        assert!(j.equals(&u.twist(a).unwrap()));
        let neg = diagram("component 0 color=1/3\nopen 0\nrow: cup@1\nrow: x-@0\nrow: cap@1\n");
        assert_eq!(neg.writhe(0), -1);
        let j = u.universal_invariant(&neg).unwrap().into_alg().unwrap();
        assert!(j.equals(&u.twist_inv(a).unwrap()));
    }
}
