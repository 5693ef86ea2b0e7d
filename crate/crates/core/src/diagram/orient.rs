use std::fmt;

use super::state::{smoothing_pairs, KauffmanState};
use super::{Dart, LinkDiagram};

/// One bit per link component: `true` reverses the stored traversal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orientation(pub Vec<bool>);

impl Orientation {
    pub fn forward(components: usize) -> Self {
        Orientation(vec![false; components])
    }

    pub fn reversed_all(&self) -> Self {
        Orientation(self.0.iter().map(|b| !b).collect())
    }

    pub fn bits(&self) -> String {
        self.0.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn from_bits(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Orientation)
    }

    /// Components reversed relative to `base`.
    pub fn differs_from(&self, base: &Orientation) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] != base.0[i]).collect()
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bits())
    }
}

impl LinkDiagram {
    /// All 2^|L| orientations, component 1 in the first bit.
    pub fn enumerate_orientations(&self) -> Vec<Orientation> {
        let k = self.component_count();
        (0..1u64 << k).map(|m| Orientation((0..k).map(|i| m >> i & 1 == 1).collect())).collect()
    }

    /// The dart along which `o` traverses `arc`.
    pub fn oriented_dart(&self, o: &Orientation, arc: usize) -> Dart {
        Dart { arc, rev: self.stored_direction(arc) ^ o.0[self.arc_component(arc)] }
    }

    fn incoming(&self, o: &Orientation, c: usize) -> [bool; 4] {
        let q = self.crossing(c);
        std::array::from_fn(|p| self.head(self.oriented_dart(o, q[p])) == Some((c, p)))
    }

    /// +1 for a right-handed crossing, -1 for a left-handed one.
    pub fn crossing_sign(&self, o: &Orientation, c: usize) -> i32 {
        let inc = self.incoming(o, c);
        let u = if inc[0] { 0 } else { 2 };
        let v = if inc[1] { 1 } else { 3 };
        if v == (u + 3) % 4 {
            1
        } else {
            -1
        }
    }

    /// The smoothing at every crossing that respects `o`.
    pub fn oriented_resolution(&self, o: &Orientation) -> KauffmanState {
        let mut s = KauffmanState(0);
        for c in 0..self.crossing_count() {
            let inc = self.incoming(o, c);
            let compatible = |bit: bool| smoothing_pairs(bit).iter().all(|&(x, y)| inc[x] != inc[y]);
            if compatible(true) {
                debug_assert!(!compatible(false));
                s = s.with(c);
            }
        }
        s
    }

    pub fn n_minus(&self, o: &Orientation) -> usize {
        (0..self.crossing_count()).filter(|&c| self.crossing_sign(o, c) < 0).count()
    }

    pub fn n_plus(&self, o: &Orientation) -> usize {
        self.crossing_count() - self.n_minus(o)
    }

    /// Half the signed count of crossings between components `i` and `j`.
    pub fn linking_number(&self, o: &Orientation, i: usize, j: usize) -> i64 {
        if i == j {
            return 0;
        }
        let total: i64 = (0..self.crossing_count())
            .filter(|&c| {
                let (a, b) = self.strand_components(c);
                (a == i && b == j) || (a == j && b == i)
            })
            .map(|c| self.crossing_sign(o, c) as i64)
            .sum();
        debug_assert_eq!(total % 2, 0);
        total / 2
    }
}
