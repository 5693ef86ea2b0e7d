//! Planar link diagrams in PD notation.
//!
//! A crossing `X(p0,p1,p2,p3)` lists arc ids counterclockwise; `p0`/`p2` form
//! the under-strand and `p1`/`p3` the over-strand. When the code is oriented,
//! `p0` is the incoming under-strand. `O(m)` adds a crossingless circle and
//! `N(k,f)` places planar piece `k` (1-based) inside face `f` of another piece.
//!
//! Internally arcs are re-indexed `0..` in increasing order of their ids, so
//! "least arc id" and "least arc index" agree.

mod faces;
mod orient;
mod state;

pub use faces::{CircleLayout, Coloring, Face, Shade};
pub use orient::Orientation;
pub use state::{smoothing_pairs, Circles, KauffmanState, Transition};

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{invalid, parse_err, Result};
use crate::unionfind::UnionFind;

/// `(crossing, slot)`.
pub type End = (usize, usize);

/// An arc traversed in one direction. `rev == false` runs from the arc's
/// first occurrence in the input to its second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub arc: usize,
    pub rev: bool,
}

impl Dart {
    pub fn reversed(self) -> Dart {
        Dart { arc: self.arc, rev: !self.rev }
    }

    pub fn index(self) -> usize {
        2 * self.arc + self.rev as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<[usize; 4]>,
    arc_ids: Vec<u64>,
    /// Two ends for crossing arcs, none for free circles.
    arc_ends: Vec<Vec<End>>,
    /// Link components as stored traversals; ordered by least arc.
    components: Vec<Vec<Dart>>,
    arc_component: Vec<usize>,
    /// Direction of each arc within its component's stored traversal.
    arc_stored_rev: Vec<bool>,
    nestings: Vec<(usize, usize)>,
}

#[derive(Debug)]
enum Term {
    X([u64; 4]),
    O(u64),
    N(usize, usize),
}

fn tokenize(text: &str) -> Result<Vec<Term>> {
    let mut terms = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        let mut rest = line.trim();
        while !rest.is_empty() {
            let open = rest.find('(').ok_or_else(|| parse_err!("malformed token near '{rest}'"))?;
            let close = rest.find(')').ok_or_else(|| parse_err!("unclosed term near '{rest}'"))?;
            if close < open {
                return Err(parse_err!("malformed token near '{rest}'"));
            }
            let head = rest[..open].trim();
            let body = &rest[open + 1..close];
            let nums = body
                .split(',')
                .map(|t| t.trim().parse::<u64>().map_err(|_| parse_err!("malformed token '{}'", &rest[..=close])))
                .collect::<Result<Vec<_>>>()?;
            let term = match (head, nums.len()) {
                ("X", 4) => Term::X([nums[0], nums[1], nums[2], nums[3]]),
                ("O", 1) => Term::O(nums[0]),
                ("N", 2) => Term::N(nums[0] as usize, nums[1] as usize),
                _ => return Err(parse_err!("malformed token '{}'", &rest[..=close])),
            };
            terms.push(term);
            rest = rest[close + 1..].trim_start_matches([' ', '\t', ',', ';']).trim();
        }
    }
    Ok(terms)
}

impl LinkDiagram {
    /// Parses PD text: `X(i,j,k,l)`, `O(m)` and `N(k,f)` terms separated by
    /// whitespace; `#` starts a comment.
    pub fn parse_pd(text: &str) -> Result<Self> {
        let terms = tokenize(text)?;
        if terms.iter().all(|t| matches!(t, Term::N(..))) {
            return Err(parse_err!("empty diagram"));
        }
        let mut raw_crossings = Vec::new();
        let mut free = Vec::new();
        let mut nestings = Vec::new();
        for t in terms {
            match t {
                Term::X(q) => raw_crossings.push(q),
                Term::O(m) => free.push(m),
                Term::N(k, f) => nestings.push((k, f)),
            }
        }

        let mut mult: BTreeMap<u64, usize> = BTreeMap::new();
        for q in &raw_crossings {
            for id in q {
                *mult.entry(*id).or_default() += 1;
            }
        }
        let bad: Vec<String> = mult.iter().filter(|(_, &m)| m != 2).map(|(id, m)| format!("{id} (x{m})")).collect();
        if !bad.is_empty() {
            return Err(invalid!("arc ids must occur exactly twice; offending: {}", bad.join(", ")));
        }
        for m in &free {
            if mult.insert(*m, 0).is_some() {
                return Err(invalid!("free circle id {m} collides with another arc id"));
            }
        }

        let arc_ids: Vec<u64> = mult.keys().copied().collect();
        let index: BTreeMap<u64, usize> = arc_ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
        let crossings: Vec<[usize; 4]> = raw_crossings.iter().map(|q| q.map(|id| index[&id])).collect();
        let mut arc_ends = vec![Vec::new(); arc_ids.len()];
        for (c, q) in crossings.iter().enumerate() {
            for (p, &a) in q.iter().enumerate() {
                arc_ends[a].push((c, p));
            }
        }

        let mut d = LinkDiagram {
            crossings,
            arc_ids,
            arc_ends,
            components: Vec::new(),
            arc_component: Vec::new(),
            arc_stored_rev: Vec::new(),
            nestings,
        };
        d.trace_components();
        d.check_planar()?;
        Ok(d)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        Self::parse_pd(&std::fs::read_to_string(path)?)
    }

    fn trace_components(&mut self) {
        let n_arcs = self.arc_ids.len();
        let mut comp = vec![usize::MAX; n_arcs];
        let mut rev = vec![false; n_arcs];
        let mut components = Vec::new();
        for start_arc in 0..n_arcs {
            if comp[start_arc] != usize::MAX {
                continue;
            }
            // Collect the strand's arcs first, then pick the stored direction.
            let mut members = vec![start_arc];
            let mut d = Dart { arc: start_arc, rev: false };
            while let Some(next) = self.strand_next(d) {
                if next.arc == start_arc {
                    break;
                }
                members.push(next.arc);
                d = next;
            }
            let start = self
                .crossings
                .iter()
                .enumerate()
                .find(|(_, q)| members.contains(&q[0]))
                .map(|(c, q)| {
                    let arc = q[0];
                    Dart { arc, rev: self.arc_ends[arc][0] == (c, 0) }
                })
                .unwrap_or(Dart { arc: start_arc, rev: false });
            let id = components.len();
            let mut walk = vec![start];
            let mut d = start;
            while let Some(next) = self.strand_next(d) {
                if next == start {
                    break;
                }
                walk.push(next);
                d = next;
            }
            for w in &walk {
                comp[w.arc] = id;
                rev[w.arc] = w.rev;
            }
            components.push(walk);
        }
        self.components = components;
        self.arc_component = comp;
        self.arc_stored_rev = rev;
    }

    /// Continues a dart straight through the crossing at its head.
    fn strand_next(&self, d: Dart) -> Option<Dart> {
        let (c, p) = self.head(d)?;
        Some(self.leaving((c, (p + 2) % 4)))
    }

    fn check_planar(&self) -> Result<()> {
        let faces = faces::trace_faces(self);
        for piece in 0..self.piece_count() {
            let v = self.crossings_of_piece(piece).len();
            if v == 0 {
                continue;
            }
            let e = self.arcs_of_piece(piece).len();
            let f = faces.iter().filter(|fc| fc.piece == piece).count();
            if v as isize - e as isize + f as isize != 2 {
                return Err(invalid!("PD code is not planar: piece {} has V-E+F = {}-{}+{} != 2", piece + 1, v, e, f));
            }
        }
        Ok(())
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_ids.len()
    }

    pub fn arc_id(&self, arc: usize) -> u64 {
        self.arc_ids[arc]
    }

    pub fn crossing(&self, c: usize) -> [usize; 4] {
        self.crossings[c]
    }

    pub fn crossings(&self) -> &[[usize; 4]] {
        &self.crossings
    }

    pub fn is_free_arc(&self, arc: usize) -> bool {
        self.arc_ends[arc].is_empty()
    }

    pub fn free_circle_count(&self) -> usize {
        self.arc_ends.iter().filter(|e| e.is_empty()).count()
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<Dart>] {
        &self.components
    }

    pub fn arc_component(&self, arc: usize) -> usize {
        self.arc_component[arc]
    }

    pub fn stored_direction(&self, arc: usize) -> bool {
        self.arc_stored_rev[arc]
    }

    pub fn nestings(&self) -> &[(usize, usize)] {
        &self.nestings
    }

    pub fn head(&self, d: Dart) -> Option<End> {
        let ends = &self.arc_ends[d.arc];
        (!ends.is_empty()).then(|| if d.rev { ends[0] } else { ends[1] })
    }

    pub fn tail(&self, d: Dart) -> Option<End> {
        self.head(d.reversed())
    }

    /// The dart leaving a crossing through the given slot.
    pub fn leaving(&self, (c, p): End) -> Dart {
        let arc = self.crossings[c][p];
        Dart { arc, rev: self.arc_ends[arc][0] != (c, p) }
    }

    /// Planar pieces: connected components of the underlying 4-valent graph
    /// (free circles are pieces of their own). Numbered by least arc.
    pub fn pieces(&self) -> (Vec<usize>, usize) {
        let mut uf = UnionFind::new(self.arc_count());
        for q in &self.crossings {
            for p in 1..4 {
                uf.union(q[0], q[p]);
            }
        }
        uf.classes()
    }

    pub fn piece_count(&self) -> usize {
        self.pieces().1
    }

    pub fn arcs_of_piece(&self, piece: usize) -> Vec<usize> {
        let (label, _) = self.pieces();
        (0..self.arc_count()).filter(|&a| label[a] == piece).collect()
    }

    pub fn crossings_of_piece(&self, piece: usize) -> Vec<usize> {
        let (label, _) = self.pieces();
        (0..self.crossing_count()).filter(|&c| label[self.crossings[c][0]] == piece).collect()
    }

    /// Components of the strands at a crossing: (under, over).
    pub fn strand_components(&self, c: usize) -> (usize, usize) {
        let q = self.crossings[c];
        (self.arc_component[q[0]], self.arc_component[q[1]])
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = self
            .crossings
            .iter()
            .map(|q| {
                let ids = q.map(|a| self.arc_ids[a]);
                format!("X({},{},{},{})", ids[0], ids[1], ids[2], ids[3])
            })
            .collect();
        terms.extend((0..self.arc_count()).filter(|&a| self.is_free_arc(a)).map(|a| format!("O({})", self.arc_ids[a])));
        terms.extend(self.nestings.iter().map(|(k, fc)| format!("N({k},{fc})")));
        write!(f, "{}", terms.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hopf_has_two_components() {
        let d = LinkDiagram::parse_pd("X(1,4,2,3) X(3,2,4,1)").unwrap();
        assert_eq!(d.crossing_count(), 2);
        assert_eq!(d.component_count(), 2);
    }

    #[test]
    fn free_circle() {
        let d = LinkDiagram::parse_pd("O(1)").unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.component_count(), 1);
    }

    #[test]
    fn multiplicity_errors() {
        let err = LinkDiagram::parse_pd("X(1,1,2,3)").unwrap_err().to_string();
        assert!(err.contains("2 (x1)") && err.contains("3 (x1)"), "{err}");
    }

    #[test]
    fn malformed_and_empty() {
        assert!(LinkDiagram::parse_pd("").is_err());
        assert!(LinkDiagram::parse_pd("# only a comment\n").is_err());
        assert!(LinkDiagram::parse_pd("X(1,2,3)").is_err());
        assert!(LinkDiagram::parse_pd("Y(1,2,3,4)").is_err());
        assert!(LinkDiagram::parse_pd("X(1,a,2,2)").is_err());
        assert!(LinkDiagram::parse_pd("X(1,1,2,2").is_err());
        assert!(LinkDiagram::parse_pd("O(1) O(1)").is_err());
    }

    #[test]
    fn stored_traversal_follows_under_strand() {
        // trefoil: every crossing's p0 is the incoming under-strand
        let d = LinkDiagram::parse_pd("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)").unwrap();
        assert_eq!(d.component_count(), 1);
        for c in 0..3 {
            let under_in = d.crossing(c)[0];
            let dart = Dart { arc: under_in, rev: d.stored_direction(under_in) };
            assert_eq!(d.head(dart), Some((c, 0)));
        }
    }

    #[test]
    fn rejects_non_planar_codes() {
        // each arc twice, but the rotation system has genus 1
        let err = LinkDiagram::parse_pd("X(1,3,2,4) X(1,3,2,4)");
        if let Ok(d) = err {
            panic!("accepted non-planar code {d}");
        }
    }

    #[test]
    fn display_round_trips() {
        let text = "X(1,4,2,3) X(3,2,4,1) O(7)";
        let d = LinkDiagram::parse_pd(text).unwrap();
        assert_eq!(d.to_string(), text);
        assert_eq!(LinkDiagram::parse_pd(&d.to_string()).unwrap(), d);
    }
}
