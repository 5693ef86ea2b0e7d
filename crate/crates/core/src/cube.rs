//! The signed cube of resolutions and the cochain complex it carries.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::algebra::{FrobeniusAlgebra, Table};
use crate::diagram::{Circles, KauffmanState, LinkDiagram, Orientation, Transition};
use crate::error::{invalid, Error, Result};
use crate::homology::{Chain, CochainComplex};
use crate::matrix::Matrix;
use crate::ring::{Coeff, RingSpec};

/// Cube dimension beyond which dense complexes are refused.
pub const MAX_CROSSINGS: usize = 16;

/// A Kauffman state with a label (basis index 0 or 1) on every circle;
/// bit `i` of `labels` is the label of circle `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EnhancedState {
    pub state: KauffmanState,
    pub labels: u64,
}

impl EnhancedState {
    pub fn new(state: KauffmanState, labels: u64) -> Self {
        EnhancedState { state, labels }
    }

    pub fn label(&self, circle: usize) -> usize {
        (self.labels >> circle & 1) as usize
    }

    pub fn with_label(mut self, circle: usize, label: usize) -> Self {
        self.labels = (self.labels & !(1 << circle)) | ((label as u64) << circle);
        self
    }

    /// `s<bits>_<labels>` with labels written `a`/`b` per circle.
    pub fn name(&self, crossings: usize, circles: usize) -> String {
        let labels: String = (0..circles).map(|i| if self.label(i) == 0 { 'a' } else { 'b' }).collect();
        format!("s{}_{}", self.state.bits(crossings), labels)
    }

    fn sort_key(&self) -> (u64, u64) {
        (self.state.0, self.labels.reverse_bits())
    }
}

impl Ord for EnhancedState {
    /// State as an integer, then circle labels lexicographically with a < b.
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for EnhancedState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sign of the cube edge `s -> s + {c}`: (-1)^(number of earlier crossings
/// carrying a 1-smoothing).
pub fn sign(s: KauffmanState, c: usize) -> i32 {
    let below = s.0 & ((1u64 << c) - 1);
    if below.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Circles of every Kauffman state, indexed by the state's integer value.
#[derive(Clone, Debug)]
pub struct StateTable {
    pub crossings: usize,
    circles: Vec<Circles>,
}

impl StateTable {
    pub fn new(diagram: &LinkDiagram) -> Result<Self> {
        let n = diagram.crossing_count();
        if n > MAX_CROSSINGS {
            return Err(invalid!("{n} crossings exceeds the limit of {MAX_CROSSINGS}"));
        }
        let circles = KauffmanState::all(n).map(|s| diagram.circles(s)).collect();
        Ok(StateTable { crossings: n, circles })
    }

    pub fn circles(&self, s: KauffmanState) -> &Circles {
        &self.circles[s.0 as usize]
    }

    pub fn states(&self) -> impl Iterator<Item = KauffmanState> {
        KauffmanState::all(self.crossings)
    }

    pub fn enhanced_count(&self) -> usize {
        self.circles.iter().map(|c| 1usize << c.len()).sum()
    }

    pub fn transition(&self, diagram: &LinkDiagram, s: KauffmanState, c: usize) -> Transition {
        diagram.transition_between(self.circles(s), self.circles(s.with(c)), s, c)
    }
}

/// Images of `e` under the edge map along crossing `c` (bit `c` of `e`
/// clear), including the cube sign. Zero coefficients are omitted.
pub fn edge_images(
    diagram: &LinkDiagram,
    table: &StateTable,
    algebra: &FrobeniusAlgebra,
    comult: &Table,
    e: EnhancedState,
    c: usize,
) -> Vec<(EnhancedState, Coeff)> {
    let ring = algebra.ring;
    let target = e.state.with(c);
    let t = table.transition(diagram, e.state, c);
    let mut base = EnhancedState::new(target, 0);
    for &(from, to) in t.others() {
        base = base.with_label(to, e.label(from));
    }
    let sgn = ring.sign(sign(e.state, c));
    let mut out = Vec::new();
    match t {
        Transition::Merge { from: [u, v], to, .. } => {
            let coeffs = &algebra.mult[e.label(u)][e.label(v)];
            for (y, k) in coeffs.iter().enumerate() {
                if !k.is_zero() {
                    out.push((base.with_label(to, y), ring.mul(k, &sgn)));
                }
            }
        }
        Transition::Split { from, to: [u, v], .. } => {
            let coeffs = &comult[e.label(from)];
            for (y1, row) in coeffs.iter().enumerate() {
                for (y2, k) in row.iter().enumerate() {
                    if !k.is_zero() {
                        out.push((base.with_label(u, y1).with_label(v, y2), ring.mul(k, &sgn)));
                    }
                }
            }
        }
    }
    out
}

/// The coefficient [x : x'] of `target` in the differential of `source`;
/// zero unless the underlying states are in covering relation.
pub fn matrix_component(
    diagram: &LinkDiagram,
    table: &StateTable,
    algebra: &FrobeniusAlgebra,
    comult: &Table,
    source: EnhancedState,
    target: EnhancedState,
) -> Coeff {
    let diff = source.state.0 ^ target.state.0;
    if diff.count_ones() != 1 || source.state.0 & diff != 0 {
        return algebra.ring.zero();
    }
    let c = diff.trailing_zeros() as usize;
    edge_images(diagram, table, algebra, comult, source, c)
        .into_iter()
        .find(|(t, _)| *t == target)
        .map_or_else(|| algebra.ring.zero(), |(_, k)| k)
}

/// The Khovanov-type complex of a diagram: basis of enhanced states in each
/// degree plus the differential matrices.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub table: StateTable,
    /// Degrees are `|s| - shift`; `shift` is n₋ of the base orientation.
    pub shift: isize,
    pub base_orientation: Option<Orientation>,
    bases: Vec<Vec<EnhancedState>>,
    index: HashMap<EnhancedState, usize>,
    pub complex: CochainComplex,
}

impl ChainComplex {
    pub fn ring(&self) -> RingSpec {
        self.complex.ring
    }

    pub fn degree_of_weight(&self, weight: usize) -> isize {
        weight as isize - self.shift
    }

    pub fn degree_of(&self, e: &EnhancedState) -> isize {
        self.degree_of_weight(e.state.weight())
    }

    /// Ordered basis in a degree (empty outside the support).
    pub fn basis(&self, degree: isize) -> &[EnhancedState] {
        let w = degree + self.shift;
        if w < 0 {
            return &[];
        }
        self.bases.get(w as usize).map_or(&[], |b| b.as_slice())
    }

    /// Position of `e` within its degree's basis.
    pub fn index_of(&self, e: &EnhancedState) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn all_states(&self) -> impl Iterator<Item = &EnhancedState> {
        self.bases.iter().flatten()
    }

    pub fn total_rank(&self) -> usize {
        self.bases.iter().map(Vec::len).sum()
    }

    pub fn circle_count(&self, e: &EnhancedState) -> usize {
        self.table.circles(e.state).len()
    }

    pub fn name(&self, e: &EnhancedState) -> String {
        e.name(self.table.crossings, self.circle_count(e))
    }

    /// The basis element `e` as a chain.
    pub fn chain_of(&self, e: &EnhancedState) -> Option<Chain> {
        let i = self.index_of(e)?;
        let degree = self.degree_of(e);
        Some(Chain::basis(self.ring(), degree, self.basis(degree).len(), i))
    }

    pub fn differential(&self, degree: isize) -> Option<&Matrix> {
        self.complex.diff_from(degree)
    }
}

impl fmt::Display for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for degree in self.complex.degrees() {
            writeln!(f, "C^{degree}: rank {}", self.complex.dim(degree))?;
        }
        write!(f, "degree shift: {}", self.shift)
    }
}

/// Builds the complex; the algebra must pass validation. Verifies d∘d = 0.
pub fn build_complex(
    diagram: &LinkDiagram,
    algebra: &FrobeniusAlgebra,
    base: Option<&Orientation>,
) -> Result<ChainComplex> {
    algebra.validate().into_result()?;
    let comult = algebra.comult_table()?;
    let table = StateTable::new(diagram)?;
    let n = diagram.crossing_count();
    if let Some(o) = base {
        if o.0.len() != diagram.component_count() {
            return Err(invalid!(
                "base orientation has {} bits, diagram has {} components",
                o.0.len(),
                diagram.component_count()
            ));
        }
    }
    let shift = base.map_or(0, |o| diagram.n_minus(o) as isize);

    let mut bases = vec![Vec::new(); n + 1];
    for s in table.states() {
        let k = table.circles(s).len();
        for labels in 0..1u64 << k {
            bases[s.weight()].push(EnhancedState::new(s, labels));
        }
    }
    for b in &mut bases {
        b.sort();
    }
    let mut index = HashMap::new();
    for b in &bases {
        for (i, e) in b.iter().enumerate() {
            index.insert(*e, i);
        }
    }

    let ring = algebra.ring;
    let mut diffs = Vec::with_capacity(n);
    for w in 0..n {
        let mut m = Matrix::zeros(bases[w + 1].len(), bases[w].len());
        for (j, e) in bases[w].iter().enumerate() {
            for c in (0..n).filter(|&c| !e.state.bit(c)) {
                for (t, k) in edge_images(diagram, &table, algebra, &comult, *e, c) {
                    let i = index[&t];
                    let v = ring.add(m.get(i, j), &k);
                    m.set(i, j, v);
                }
            }
        }
        diffs.push(m);
    }
    let dims = bases.iter().map(Vec::len).collect();
    let complex = CochainComplex::new(ring, -shift, dims, diffs)?;
    complex.check_d_squared().map_err(|e| match e {
        Error::Internal(msg) => Error::Internal(format!("{msg} for {diagram}")),
        other => other,
    })?;
    Ok(ChainComplex { table, shift, base_orientation: base.cloned(), bases, index, complex })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraSpec;

    fn lee() -> FrobeniusAlgebra {
        AlgebraSpec::preset("lee").unwrap().instantiate(RingSpec::Rationals).unwrap()
    }

    #[test]
    fn sign_examples() {
        assert_eq!(sign(KauffmanState::from_bits("00").unwrap(), 0), 1);
        assert_eq!(sign(KauffmanState::from_bits("10").unwrap(), 1), -1);
    }

    #[test]
    fn squares_anticommute() {
        let n = 5;
        for s in KauffmanState::all(n) {
            for c in 0..n {
                for d in c + 1..n {
                    if s.bit(c) || s.bit(d) {
                        continue;
                    }
                    let path1 = sign(s, c) * sign(s.with(c), d);
                    let path2 = sign(s, d) * sign(s.with(d), c);
                    assert_eq!(path1, -path2);
                }
            }
        }
    }

    #[test]
    fn lee_components() {
        let hopf = LinkDiagram::parse_pd("X(1,4,2,3) X(3,2,4,1)").unwrap();
        let alg = lee();
        let comult = alg.comult_table().unwrap();
        let table = StateTable::new(&hopf).unwrap();
        let s00 = KauffmanState(0);
        let aa = EnhancedState::new(s00, 0b00);
        let ab = EnhancedState::new(s00, 0b10);
        // crossing 0 merges the two circles of 00
        let img = edge_images(&hopf, &table, &alg, &comult, aa, 0);
        assert_eq!(img.len(), 1);
        assert_eq!(img[0].1, alg.ring.one());
        assert!(edge_images(&hopf, &table, &alg, &comult, ab, 0).is_empty());

        // 10 is one circle; crossing 1 splits it. b -> -2 b⊗b, sign -1
        let s10 = KauffmanState::from_bits("10").unwrap();
        let b = EnhancedState::new(s10, 1);
        let img = edge_images(&hopf, &table, &alg, &comult, b, 1);
        assert_eq!(img.len(), 1);
        assert_eq!(img[0].1, alg.ring.from_i64(2));
        assert_eq!(img[0].0.labels, 0b11);
    }

    #[test]
    fn matrix_component_vanishes_off_covers() {
        let hopf = LinkDiagram::parse_pd("X(1,4,2,3) X(3,2,4,1)").unwrap();
        let alg = lee();
        let comult = alg.comult_table().unwrap();
        let table = StateTable::new(&hopf).unwrap();
        let e = EnhancedState::new(KauffmanState(0), 0);
        let far = EnhancedState::new(KauffmanState(0b11), 0);
        assert!(matrix_component(&hopf, &table, &alg, &comult, e, far).is_zero());
        assert!(matrix_component(&hopf, &table, &alg, &comult, e, e).is_zero());
        let up = EnhancedState::new(KauffmanState(0b01), 0);
        assert_eq!(matrix_component(&hopf, &table, &alg, &comult, e, up), alg.ring.one());
        assert!(matrix_component(&hopf, &table, &alg, &comult, up, e).is_zero());
    }

    #[test]
    fn basis_sizes() {
        let alg = lee();
        let hopf = LinkDiagram::parse_pd("X(1,4,2,3) X(3,2,4,1)").unwrap();
        assert_eq!(build_complex(&hopf, &alg, None).unwrap().total_rank(), 12);
        let kinks = LinkDiagram::parse_pd("X(1,1,2,4) X(2,3,3,4)").unwrap();
        assert_eq!(build_complex(&kinks, &alg, None).unwrap().total_rank(), 18);
        let o = LinkDiagram::parse_pd("O(1)").unwrap();
        let c = build_complex(&o, &alg, None).unwrap();
        assert_eq!(c.complex.dims, vec![2]);
        assert!(c.complex.diffs.is_empty());
    }

    #[test]
    fn basis_order() {
        let s = KauffmanState(1);
        let mut v = [
            EnhancedState::new(s, 0b01),
            EnhancedState::new(KauffmanState(0), 0b11),
            EnhancedState::new(s, 0b10),
            EnhancedState::new(s, 0b00),
        ];
        v.sort();
        // (a,a) < (a,b) < (b,a): circle 0 is most significant
        assert_eq!(v[0].state, KauffmanState(0));
        assert_eq!(v[1].labels, 0b00);
        assert_eq!(v[2].labels, 0b10);
        assert_eq!(v[3].labels, 0b01);
    }

    #[test]
    fn base_orientation_shift() {
        let alg = lee();
        let neg = LinkDiagram::parse_pd("X(1,4,2,3) X(3,2,4,1)").unwrap();
        let c = build_complex(&neg, &alg, Some(&Orientation::forward(2))).unwrap();
        assert_eq!(c.shift, 2);
        assert_eq!(c.complex.first_degree, -2);
        assert!(build_complex(&neg, &alg, Some(&Orientation::forward(1))).is_err());
    }
}
