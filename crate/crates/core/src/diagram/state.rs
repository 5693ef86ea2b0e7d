use super::LinkDiagram;
use crate::unionfind::UnionFind;

/// One smoothing bit per crossing; bit `c` set means crossing `c` carries
/// the 1-smoothing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KauffmanState(pub u64);

impl KauffmanState {
    pub fn bit(self, c: usize) -> bool {
        self.0 >> c & 1 == 1
    }

    pub fn with(self, c: usize) -> Self {
        KauffmanState(self.0 | 1 << c)
    }

    pub fn toggled(self, c: usize) -> Self {
        KauffmanState(self.0 ^ 1 << c)
    }

    /// Number of 1-smoothings.
    pub fn weight(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn all(n: usize) -> impl Iterator<Item = KauffmanState> {
        (0..1u64 << n).map(KauffmanState)
    }

    /// Bit string in crossing order, crossing 1 first.
    pub fn bits(self, n: usize) -> String {
        (0..n).map(|c| if self.bit(c) { '1' } else { '0' }).collect()
    }

    pub fn from_bits(s: &str) -> Option<Self> {
        let mut v = 0u64;
        for (c, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => v |= 1 << c,
                _ => return None,
            }
        }
        Some(KauffmanState(v))
    }
}

/// Slot pairs joined by each smoothing.
pub fn smoothing_pairs(bit: bool) -> [(usize, usize); 2] {
    if bit {
        [(0, 3), (1, 2)]
    } else {
        [(0, 1), (2, 3)]
    }
}

/// The circles of a Kauffman state as a partition of the arcs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circles {
    /// Circle index of each arc.
    pub arc_circle: Vec<usize>,
    /// Arcs of each circle; circles ordered by least arc.
    pub members: Vec<Vec<usize>>,
}

impl Circles {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn of_arc(&self, arc: usize) -> usize {
        self.arc_circle[arc]
    }

    /// Least arc on each circle.
    pub fn least_arc(&self, circle: usize) -> usize {
        self.members[circle][0]
    }
}

/// How the circles change along the cube edge `s -> s + {c}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transition {
    Merge { from: [usize; 2], to: usize, others: Vec<(usize, usize)> },
    Split { from: usize, to: [usize; 2], others: Vec<(usize, usize)> },
}

impl Transition {
    /// Untouched circles, as (circle in s, circle in s').
    pub fn others(&self) -> &[(usize, usize)] {
        match self {
            Transition::Merge { others, .. } | Transition::Split { others, .. } => others,
        }
    }
}

impl LinkDiagram {
    pub fn circles(&self, state: KauffmanState) -> Circles {
        let mut uf = UnionFind::new(self.arc_count());
        for (c, q) in self.crossings().iter().enumerate() {
            for (p, r) in smoothing_pairs(state.bit(c)) {
                uf.union(q[p], q[r]);
            }
        }
        let (arc_circle, count) = uf.classes();
        let mut members = vec![Vec::new(); count];
        for (arc, &circ) in arc_circle.iter().enumerate() {
            members[circ].push(arc);
        }
        Circles { arc_circle, members }
    }

    /// The circles of `s` that the two smoothing strands at `c` lie on.
    pub fn strands_at(&self, circles: &Circles, state: KauffmanState, c: usize) -> [usize; 2] {
        let q = self.crossing(c);
        let [(p0, _), (p1, _)] = smoothing_pairs(state.bit(c));
        [circles.of_arc(q[p0]), circles.of_arc(q[p1])]
    }

    /// Merge or split along `s -> s + {c}`; `s` must have bit `c` clear.
    pub fn transition(&self, s: KauffmanState, c: usize) -> Transition {
        assert!(!s.bit(c), "transition needs crossing {c} 0-smoothed");
        let before = self.circles(s);
        let after = self.circles(s.with(c));
        self.transition_between(&before, &after, s, c)
    }

    pub fn transition_between(&self, before: &Circles, after: &Circles, s: KauffmanState, c: usize) -> Transition {
        let q = self.crossing(c);
        let [u, v] = self.strands_at(before, s, c);
        let touched_after = [after.of_arc(q[0]), after.of_arc(q[1])];
        let others =
            (0..before.len()).filter(|&i| i != u && i != v).map(|i| (i, after.of_arc(before.least_arc(i)))).collect();
        if u != v {
            debug_assert_eq!(touched_after[0], touched_after[1]);
            Transition::Merge { from: sorted(u, v), to: touched_after[0], others }
        } else {
            debug_assert_ne!(touched_after[0], touched_after[1]);
            Transition::Split { from: u, to: sorted(touched_after[0], touched_after[1]), others }
        }
    }
}

fn sorted(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}
