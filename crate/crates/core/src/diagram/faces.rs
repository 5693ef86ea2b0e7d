//! Faces of the 4-valent map, checkerboard shading and circle nesting.
//!
//! Face tracing uses the rotation system: after arriving at slot `p` of a
//! crossing, leave through slot `p + 1`. Each orbit is the face lying to the
//! right of its darts.

use std::collections::VecDeque;
use std::fmt;

use super::state::{smoothing_pairs, Circles, KauffmanState};
use super::{Dart, LinkDiagram};
use crate::error::{invalid, Error, Result};
use crate::unionfind::UnionFind;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: usize,
    pub piece: usize,
    /// Darts having this face on their right, in boundary order.
    pub darts: Vec<Dart>,
}

impl Face {
    pub fn boundary_len(&self) -> usize {
        self.darts.len()
    }

    pub fn least_arc(&self) -> usize {
        self.darts.iter().map(|d| d.arc).min().unwrap_or(usize::MAX)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shade {
    White,
    Black,
}

impl Shade {
    pub fn flip(self) -> Shade {
        match self {
            Shade::White => Shade::Black,
            Shade::Black => Shade::White,
        }
    }
}

impl fmt::Display for Shade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shade::White => "white",
            Shade::Black => "black",
        })
    }
}

pub(super) fn next_dart(d: &LinkDiagram, dart: Dart) -> Dart {
    match d.head(dart) {
        None => dart,
        Some((c, p)) => d.leaving((c, (p + 1) % 4)),
    }
}

pub(super) fn trace_faces(d: &LinkDiagram) -> Vec<Face> {
    let (piece_of_arc, _) = d.pieces();
    let mut seen = vec![false; 2 * d.arc_count()];
    let mut faces = Vec::new();
    for arc in 0..d.arc_count() {
        for rev in [false, true] {
            let start = Dart { arc, rev };
            if seen[start.index()] {
                continue;
            }
            let mut darts = Vec::new();
            let mut cur = start;
            loop {
                seen[cur.index()] = true;
                darts.push(cur);
                cur = next_dart(d, cur);
                if cur == start {
                    break;
                }
            }
            faces.push(Face { id: faces.len(), piece: piece_of_arc[arc], darts });
        }
    }
    faces
}

/// A two-colouring of the faces with the unbounded face white.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub faces: Vec<Face>,
    /// Face to the right of each dart (by `Dart::index`).
    dart_face: Vec<usize>,
    /// Faces identified across planar pieces share a group.
    pub group: Vec<usize>,
    pub outer: usize,
    /// Face through which each planar piece touches its surroundings.
    pub piece_exterior: Vec<usize>,
    pub shade: Vec<Shade>,
}

/// Per-state circle geometry relative to a colouring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleLayout {
    /// Dart of the least arc, forward: the stored traversal of each circle.
    pub start: Vec<Dart>,
    pub left_region: Vec<usize>,
    pub right_region: Vec<usize>,
    pub inside_region: Vec<usize>,
    /// Number of circles strictly enclosing each circle.
    pub depth: Vec<usize>,
    /// Is the stored traversal counterclockwise (inside on its left)?
    pub ccw: Vec<bool>,
    pub region_shade: Vec<Shade>,
    pub outer_region: usize,
}

impl CircleLayout {
    pub fn outside_shade(&self, circle: usize) -> Shade {
        let r = if self.inside_region[circle] == self.left_region[circle] {
            self.right_region[circle]
        } else {
            self.left_region[circle]
        };
        self.region_shade[r]
    }
}

fn default_exterior(faces: &[Face], piece: usize) -> usize {
    faces
        .iter()
        .filter(|f| f.piece == piece)
        .max_by(|a, b| {
            a.boundary_len().cmp(&b.boundary_len()).then(b.least_arc().cmp(&a.least_arc())).then(b.id.cmp(&a.id))
        })
        .map(|f| f.id)
        .expect("every piece has a face")
}

impl LinkDiagram {
    pub fn faces(&self) -> Vec<Face> {
        trace_faces(self)
    }

    /// Checkerboard colouring. `outer` overrides the unbounded face; by
    /// default it is the longest face of the first piece, ties broken by
    /// least arc id.
    pub fn checkerboard(&self, outer: Option<usize>) -> Result<Coloring> {
        let faces = trace_faces(self);
        let n_pieces = self.piece_count();
        let mut dart_face = vec![0; 2 * self.arc_count()];
        for f in &faces {
            for dart in &f.darts {
                dart_face[dart.index()] = f.id;
            }
        }

        let mut parent: Vec<Option<usize>> = vec![None; n_pieces];
        for &(k, f) in self.nestings() {
            if k == 0 || k > n_pieces {
                return Err(invalid!("N({k},{f}): no planar piece {k} (have {n_pieces})"));
            }
            let face = faces.get(f).ok_or_else(|| invalid!("N({k},{f}): no face {f}"))?;
            if face.piece == k - 1 {
                return Err(invalid!("N({k},{f}): face {f} belongs to piece {k} itself"));
            }
            if parent[k - 1].replace(f).is_some() {
                return Err(invalid!("piece {k} is nested twice"));
            }
        }
        for start in 0..n_pieces {
            let mut p = start;
            for _ in 0..=n_pieces {
                match parent[p] {
                    Some(f) => p = faces[f].piece,
                    None => break,
                }
                if p == start {
                    return Err(invalid!("nesting declarations form a cycle"));
                }
            }
        }

        let mut piece_exterior: Vec<usize> = (0..n_pieces).map(|p| default_exterior(&faces, p)).collect();
        let outer = match outer {
            Some(o) => {
                let face = faces.get(o).ok_or_else(|| invalid!("outer face {o} does not exist"))?;
                if parent[face.piece].is_some() {
                    return Err(invalid!("outer face {o} lies in a nested piece"));
                }
                piece_exterior[face.piece] = o;
                o
            }
            None => {
                let root = (0..n_pieces).find(|&p| parent[p].is_none()).expect("acyclic nesting has a root");
                piece_exterior[root]
            }
        };

        let mut uf = UnionFind::new(faces.len());
        for p in 0..n_pieces {
            match parent[p] {
                Some(f) => uf.union(piece_exterior[p], f),
                None => uf.union(piece_exterior[p], outer),
            };
        }
        let (group, n_groups) = uf.classes();

        let mut adj = vec![Vec::new(); n_groups];
        for arc in 0..self.arc_count() {
            let g1 = group[dart_face[Dart { arc, rev: false }.index()]];
            let g2 = group[dart_face[Dart { arc, rev: true }.index()]];
            if g1 == g2 {
                return Err(colouring_conflict(self.arc_id(arc)));
            }
            adj[g1].push((g2, arc));
            adj[g2].push((g1, arc));
        }
        let mut gshade: Vec<Option<Shade>> = vec![None; n_groups];
        gshade[group[outer]] = Some(Shade::White);
        let mut queue = VecDeque::from([group[outer]]);
        while let Some(g) = queue.pop_front() {
            let s = gshade[g].unwrap();
            for &(h, arc) in &adj[g] {
                match gshade[h] {
                    None => {
                        gshade[h] = Some(s.flip());
                        queue.push_back(h);
                    }
                    Some(t) if t == s => return Err(colouring_conflict(self.arc_id(arc))),
                    Some(_) => {}
                }
            }
        }
        let shade = group
            .iter()
            .map(|&g| gshade[g].ok_or_else(|| invalid!("face group {g} unreachable from the outer face")))
            .collect::<Result<Vec<_>>>()?;

        Ok(Coloring { faces, dart_face, group, outer, piece_exterior, shade })
    }

    /// The darts of a circle in traversal order, starting from `start`.
    pub fn circle_darts(&self, state: KauffmanState, start: Dart) -> Vec<Dart> {
        let mut out = vec![start];
        let mut cur = start;
        while let Some((c, p)) = self.head(cur) {
            let bit = state.bit(c);
            let q = smoothing_pairs(bit)
                .iter()
                .find_map(|&(x, y)| {
                    if x == p {
                        Some(y)
                    } else if y == p {
                        Some(x)
                    } else {
                        None
                    }
                })
                .expect("slot is paired");
            cur = self.leaving((c, q));
            if cur == start {
                break;
            }
            out.push(cur);
        }
        out
    }
}

fn colouring_conflict(arc_id: u64) -> Error {
    Error::Internal(format!("colouring conflict across arc {arc_id}"))
}

impl Coloring {
    pub fn face_right_of(&self, d: Dart) -> usize {
        self.dart_face[d.index()]
    }

    /// Regions of the smoothed picture, the side of each circle that faces
    /// the unbounded region, and the induced nesting.
    pub fn layout(&self, d: &LinkDiagram, state: KauffmanState, circles: &Circles) -> Result<CircleLayout> {
        let mut uf = UnionFind::new(self.faces.len());
        let mut by_group = vec![usize::MAX; self.faces.len()];
        for f in 0..self.faces.len() {
            let g = self.group[f];
            if by_group[g] == usize::MAX {
                by_group[g] = f;
            } else {
                uf.union(by_group[g], f);
            }
        }
        let corner = |c: usize, p: usize| self.face_right_of(d.leaving((c, (p + 1) % 4)));
        for c in 0..d.crossing_count() {
            if state.bit(c) {
                uf.union(corner(c, 0), corner(c, 2));
            } else {
                uf.union(corner(c, 1), corner(c, 3));
            }
        }
        let (region_of_face, n_regions) = uf.classes();

        let mut region_shade: Vec<Option<Shade>> = vec![None; n_regions];
        for (f, &r) in region_of_face.iter().enumerate() {
            match region_shade[r] {
                None => region_shade[r] = Some(self.shade[f]),
                Some(s) if s != self.shade[f] => {
                    return Err(Error::Internal(format!("region {r} mixes shades")));
                }
                Some(_) => {}
            }
        }
        let region_shade: Vec<Shade> = region_shade.into_iter().map(|s| s.expect("region has a face")).collect();

        let k = circles.len();
        if n_regions != k + 1 {
            return Err(Error::Internal(format!("{k} circles bound {n_regions} regions")));
        }
        let mut start = Vec::with_capacity(k);
        let mut left = Vec::with_capacity(k);
        let mut right = Vec::with_capacity(k);
        let mut adj = vec![Vec::new(); n_regions];
        for circ in 0..k {
            let dart = Dart { arc: circles.least_arc(circ), rev: false };
            let r = region_of_face[self.face_right_of(dart)];
            let l = region_of_face[self.face_right_of(dart.reversed())];
            if l == r {
                return Err(Error::Internal(format!("circle {circ} does not separate")));
            }
            start.push(dart);
            left.push(l);
            right.push(r);
            adj[l].push((r, circ));
            adj[r].push((l, circ));
        }

        let outer_region = region_of_face[self.outer];
        let mut dist = vec![usize::MAX; n_regions];
        dist[outer_region] = 0;
        let mut queue = VecDeque::from([outer_region]);
        while let Some(r) = queue.pop_front() {
            for &(s, _) in &adj[r] {
                if dist[s] == usize::MAX {
                    dist[s] = dist[r] + 1;
                    queue.push_back(s);
                }
            }
        }
        let mut inside = Vec::with_capacity(k);
        let mut depth = Vec::with_capacity(k);
        let mut ccw = Vec::with_capacity(k);
        for circ in 0..k {
            let (l, r) = (left[circ], right[circ]);
            if dist[l] == usize::MAX || dist[r] == usize::MAX || dist[l].abs_diff(dist[r]) != 1 {
                return Err(Error::Internal(format!("circle {circ} is not a tree edge of the region graph")));
            }
            let (ins, out) = if dist[l] > dist[r] { (l, r) } else { (r, l) };
            inside.push(ins);
            depth.push(dist[out]);
            ccw.push(ins == l);
            let expected = if dist[out] % 2 == 0 { Shade::White } else { Shade::Black };
            if region_shade[out] != expected {
                return Err(Error::Internal(format!("circle {circ}: shade outside disagrees with nesting parity")));
            }
        }
        Ok(CircleLayout {
            start,
            left_region: left,
            right_region: right,
            inside_region: inside,
            depth,
            ccw,
            region_shade,
            outer_region,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_counts() {
        let hopf = LinkDiagram::parse_pd("X(1,4,2,3) X(3,2,4,1)").unwrap();
        assert_eq!(hopf.faces().len(), 4);
        let unknot = LinkDiagram::parse_pd("O(1)").unwrap();
        assert_eq!(unknot.faces().len(), 2);
        let two_kink = LinkDiagram::parse_pd("X(1,1,2,4) X(2,3,3,4)").unwrap();
        assert_eq!(two_kink.faces().len(), 4);
    }

    #[test]
    fn checkerboard_is_proper() {
        let trefoil = LinkDiagram::parse_pd("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)").unwrap();
        let col = trefoil.checkerboard(None).unwrap();
        assert_eq!(col.shade[col.outer], Shade::White);
        for arc in 0..trefoil.arc_count() {
            let a = col.face_right_of(Dart { arc, rev: false });
            let b = col.face_right_of(Dart { arc, rev: true });
            assert_ne!(col.shade[a], col.shade[b]);
        }
    }

    #[test]
    fn default_outer_face_is_longest() {
        let trefoil = LinkDiagram::parse_pd("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)").unwrap();
        let col = trefoil.checkerboard(None).unwrap();
        let max = col.faces.iter().map(|f| f.boundary_len()).max().unwrap();
        assert_eq!(col.faces[col.outer].boundary_len(), max);
    }

    #[test]
    fn outer_override_and_errors() {
        let hopf = LinkDiagram::parse_pd("X(1,4,2,3) X(3,2,4,1)").unwrap();
        for o in 0..4 {
            let col = hopf.checkerboard(Some(o)).unwrap();
            assert_eq!(col.outer, o);
            assert_eq!(col.shade[o], Shade::White);
        }
        assert!(hopf.checkerboard(Some(9)).is_err());
    }

    #[test]
    fn split_diagram_side_by_side_and_nested() {
        let d = LinkDiagram::parse_pd("X(1,4,2,3) X(3,2,4,1) O(5)").unwrap();
        assert_eq!(d.piece_count(), 2);
        let col = d.checkerboard(None).unwrap();
        // the free circle sits in the unbounded region
        let s = KauffmanState(0);
        let circles = d.circles(s);
        let lay = col.layout(&d, s, &circles).unwrap();
        let free = circles.of_arc(4);
        assert_eq!(lay.depth[free], 0);

        // nest the circle inside a black face of the Hopf diagram
        let black = col.faces.iter().find(|f| f.piece == 0 && col.shade[f.id] == Shade::Black).unwrap().id;
        let nested = LinkDiagram::parse_pd(&format!("X(1,4,2,3) X(3,2,4,1) O(5) N(2,{black})")).unwrap();
        let col = nested.checkerboard(None).unwrap();
        let lay = col.layout(&nested, s, &circles).unwrap();
        assert_eq!(lay.outside_shade(free), Shade::Black);
        assert_eq!(lay.depth[free] % 2, 1);

        assert!(LinkDiagram::parse_pd("O(1) O(2) N(1,2) N(2,0)").unwrap().checkerboard(None).is_err());
        assert!(LinkDiagram::parse_pd("O(1) N(1,0)").unwrap().checkerboard(None).is_err());
    }

    #[test]
    fn nested_unlink_depths() {
        // O(1) inside the inner face of O(2): depth 1, same direction -> opposite ccw roles
        let d = LinkDiagram::parse_pd("O(1) O(2) N(1,3)").unwrap();
        let col = d.checkerboard(None).unwrap();
        let circles = d.circles(KauffmanState(0));
        let lay = col.layout(&d, KauffmanState(0), &circles).unwrap();
        assert_eq!(lay.depth, vec![1, 0]);
    }
}
