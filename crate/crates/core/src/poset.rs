//! The poset of enhanced states and its splitting into Boolean lattices.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::algebra::FrobeniusAlgebra;
use crate::cube::{build_complex, ChainComplex, EnhancedState};
use crate::diagram::{smoothing_pairs, Circles, KauffmanState, LinkDiagram, Orientation};
use crate::error::{invalid, violation, Result};
use crate::homology::{homology, CochainComplex, HomologySummary};
use crate::ring::Coeff;
use crate::unionfind::UnionFind;

/// A covering pair with nonzero matrix component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub crossing: usize,
    pub coeff: Coeff,
}

#[derive(Clone, Debug)]
pub struct EnhancedPoset {
    pub diagram: LinkDiagram,
    pub algebra: FrobeniusAlgebra,
    pub complex: ChainComplex,
    /// Ordered by degree, then by the complex's basis order.
    pub nodes: Vec<EnhancedState>,
    pub edges: Vec<Edge>,
    index: HashMap<EnhancedState, usize>,
    up: Vec<Vec<usize>>,
}

/// Arc-set as a crossing mask (bit c is crossing c).
pub type ArcSet = u64;

/// Circles of a state joined along the arcs of its arc-set, with the common
/// label of each piece. Pieces are numbered by least arc.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArcResolution {
    pub arc_set: ArcSet,
    pub piece_of_arc: Vec<usize>,
    pub labels: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanComponent {
    /// Node indices, ascending.
    pub members: Vec<usize>,
    pub base: usize,
    pub rank: usize,
    pub arc_set: ArcSet,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub components: Vec<BooleanComponent>,
    pub component_of: Vec<usize>,
}

impl Decomposition {
    /// Component count per rank.
    pub fn census(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for c in &self.components {
            *out.entry(c.rank).or_insert(0) += 1;
        }
        out
    }

    /// `rank2:2 rank1:4 rank0:2`, highest rank first.
    pub fn census_string(&self) -> String {
        self.census().iter().rev().map(|(r, n)| format!("rank{r}:{n}")).collect::<Vec<_>>().join(" ")
    }

    pub fn rank_multiset(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.components.iter().map(|c| c.rank).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

/// Crossings whose surgery arc bridges equally labelled circle sections;
/// `circles` must be the circles of `e.state`.
pub fn arc_set(diagram: &LinkDiagram, circles: &Circles, e: &EnhancedState) -> ArcSet {
    let mut s = 0;
    for c in 0..diagram.crossing_count() {
        let [u, v] = diagram.strands_at(circles, e.state, c);
        if u == v || e.label(u) == e.label(v) {
            s |= 1 << c;
        }
    }
    s
}

/// Builds the complex and reads the poset off its nonzero matrix entries.
pub fn enhance(diagram: &LinkDiagram, algebra: &FrobeniusAlgebra, base: Option<&Orientation>) -> Result<EnhancedPoset> {
    let complex = build_complex(diagram, algebra, base)?;
    let nodes: Vec<EnhancedState> = complex.all_states().copied().collect();
    let index: HashMap<EnhancedState, usize> = nodes.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let mut edges = Vec::new();
    let mut up = vec![Vec::new(); nodes.len()];
    for degree in complex.complex.degrees() {
        let Some(d) = complex.differential(degree) else { continue };
        let src = complex.basis(degree);
        let dst = complex.basis(degree + 1);
        let mut entries: Vec<_> = d.nonzero_entries().map(|(i, j, k)| (j, i, k.clone())).collect();
        entries.sort();
        for (j, i, coeff) in entries {
            let (s, t) = (src[j], dst[i]);
            let crossing = (s.state.0 ^ t.state.0).trailing_zeros() as usize;
            up[index[&s]].push(edges.len());
            edges.push(Edge { source: index[&s], target: index[&t], crossing, coeff });
        }
    }
    Ok(EnhancedPoset { diagram: diagram.clone(), algebra: algebra.clone(), complex, nodes, edges, index, up })
}

impl EnhancedPoset {
    pub fn node_index(&self, e: &EnhancedState) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn crossings(&self) -> usize {
        self.diagram.crossing_count()
    }

    pub fn arc_set(&self, e: &EnhancedState) -> ArcSet {
        arc_set(&self.diagram, self.complex.table.circles(e.state), e)
    }

    pub fn arc_resolution(&self, e: &EnhancedState) -> Result<ArcResolution> {
        let arc_set = self.arc_set(e);
        let circles = self.complex.table.circles(e.state);
        let mut uf = UnionFind::new(self.diagram.arc_count());
        for (c, q) in self.diagram.crossings().iter().enumerate() {
            let mut pairs = smoothing_pairs(e.state.bit(c)).to_vec();
            if arc_set >> c & 1 == 1 {
                pairs.extend([(0, 1), (0, 2), (0, 3)]);
            }
            for (p, r) in pairs {
                uf.union(q[p], q[r]);
            }
        }
        let (piece_of_arc, n) = uf.classes();
        let mut labels = vec![usize::MAX; n];
        for (arc, &piece) in piece_of_arc.iter().enumerate() {
            let l = e.label(circles.of_arc(arc));
            if labels[piece] == usize::MAX {
                labels[piece] = l;
            } else if labels[piece] != l {
                return Err(violation!("arc-resolution of {} joins differently labelled circles", self.name(e)));
            }
        }
        Ok(ArcResolution { arc_set, piece_of_arc, labels })
    }

    /// Every enhanced state reached by surgering a subset of the arc-set,
    /// labels induced through the arc-resolution. Sorted.
    pub fn surgery_orbit(&self, e: &EnhancedState) -> Result<Vec<EnhancedState>> {
        let res = self.arc_resolution(e)?;
        let crossings: Vec<usize> = (0..self.crossings()).filter(|&c| res.arc_set >> c & 1 == 1).collect();
        let mut out = Vec::with_capacity(1 << crossings.len());
        for t in 0..1u64 << crossings.len() {
            let mut s = e.state;
            for (k, &c) in crossings.iter().enumerate() {
                if t >> k & 1 == 1 {
                    s = s.toggled(c);
                }
            }
            let circles = self.complex.table.circles(s);
            let mut labels = 0;
            for circ in 0..circles.len() {
                labels |= (res.labels[res.piece_of_arc[circles.least_arc(circ)]] as u64) << circ;
            }
            out.push(EnhancedState::new(s, labels));
        }
        out.sort();
        Ok(out)
    }

    /// Nodes with empty arc-set; their number must be 2^|L|.
    pub fn degenerate_generators(&self) -> Result<Vec<EnhancedState>> {
        let out: Vec<EnhancedState> = self.nodes.iter().filter(|e| self.arc_set(e) == 0).copied().collect();
        let expected = 1usize << self.diagram.component_count();
        if out.len() != expected {
            return Err(violation!("{} enhanced states with empty arc-set, expected {expected}", out.len()));
        }
        Ok(out)
    }

    pub fn name(&self, e: &EnhancedState) -> String {
        self.complex.name(e)
    }

    /// Connected components of the Hasse diagram, each checked to be the
    /// Boolean lattice on its base's arc-set and to equal the surgery orbit.
    pub fn decompose(&self) -> Result<Decomposition> {
        if !self.algebra.is_diagonal() {
            return Err(invalid!(
                "decomposition requires a diagonal algebra (a² = a, b² = b, ab = 0 in the given basis)"
            ));
        }
        let ring = self.algebra.ring;
        let mut uf = UnionFind::new(self.nodes.len());
        for edge in &self.edges {
            uf.union(edge.source, edge.target);
        }
        let (component_of, n) = uf.classes();
        let mut members = vec![Vec::new(); n];
        for (i, &c) in component_of.iter().enumerate() {
            members[c].push(i);
        }
        let mut edge_count = vec![0usize; n];
        for edge in &self.edges {
            if !ring.is_unit(&edge.coeff) {
                return Err(violation!(
                    "edge {} -> {} has non-invertible coefficient {}",
                    self.name(&self.nodes[edge.source]),
                    self.name(&self.nodes[edge.target]),
                    edge.coeff
                ));
            }
            edge_count[component_of[edge.source]] += 1;
        }

        let mut components = Vec::with_capacity(n);
        for (k, m) in members.into_iter().enumerate() {
            let comp = self.check_boolean(m, edge_count[k])?;
            components.push(comp);
        }
        Ok(Decomposition { components, component_of })
    }

    fn check_boolean(&self, members: Vec<usize>, edges: usize) -> Result<BooleanComponent> {
        let min_weight = members.iter().map(|&i| self.nodes[i].state.weight()).min().expect("nonempty");
        let minimal: Vec<usize> =
            members.iter().copied().filter(|&i| self.nodes[i].state.weight() == min_weight).collect();
        let base = minimal[0];
        let b = self.nodes[base];
        let fail = |why: &str| violation!("component of {} is not Boolean: {why}", self.name(&b));
        if minimal.len() != 1 {
            return Err(fail("several minimal elements"));
        }
        let res = self.arc_resolution(&b)?;
        let rank = res.arc_set.count_ones() as usize;
        if b.state.0 & res.arc_set != 0 {
            return Err(fail("base has a 1-smoothing inside its arc-set"));
        }
        if members.len() != 1 << rank {
            return Err(fail(&format!("{} members for rank {rank}", members.len())));
        }
        let mut seen = HashSet::new();
        for &i in &members {
            let e = self.nodes[i];
            let t = e.state.0 ^ b.state.0;
            if t & !res.arc_set != 0 || e.state.0 & b.state.0 != b.state.0 || !seen.insert(t) {
                return Err(fail(&format!("member {} outside the lattice", self.name(&e))));
            }
            if self.arc_resolution(&e)? != res {
                return Err(violation!(
                    "{} and {} in one component have different arc-resolutions",
                    self.name(&b),
                    self.name(&e)
                ));
            }
        }
        if edges != rank << rank >> 1 {
            return Err(fail(&format!("{edges} covering edges for rank {rank}")));
        }
        let orbit = self.surgery_orbit(&b)?;
        let mut as_states: Vec<EnhancedState> = members.iter().map(|&i| self.nodes[i]).collect();
        as_states.sort();
        if orbit != as_states {
            return Err(violation!("surgery orbit of {} differs from its Hasse component", self.name(&b)));
        }
        Ok(BooleanComponent { members, base, rank, arc_set: res.arc_set })
    }

    /// Every nonzero matrix entry joins two nodes of one component.
    pub fn check_block_diagonal(&self, dec: &Decomposition) -> Result<()> {
        let c = &self.complex;
        for degree in c.complex.degrees() {
            let Some(d) = c.differential(degree) else { continue };
            for (i, j, _) in d.nonzero_entries() {
                let s = self.index[&c.basis(degree)[j]];
                let t = self.index[&c.basis(degree + 1)[i]];
                if dec.component_of[s] != dec.component_of[t] {
                    return Err(violation!(
                        "differential entry {} -> {} crosses components",
                        self.name(&self.nodes[s]),
                        self.name(&self.nodes[t])
                    ));
                }
            }
        }
        Ok(())
    }

    /// The differential restricted to one component.
    pub fn component_complex(&self, comp: &BooleanComponent) -> Result<CochainComplex> {
        let c = &self.complex;
        let mut positions: BTreeMap<isize, Vec<usize>> = BTreeMap::new();
        for &m in &comp.members {
            let e = &self.nodes[m];
            positions.entry(c.degree_of(e)).or_default().push(c.index_of(e).expect("node in basis"));
        }
        for v in positions.values_mut() {
            v.sort_unstable();
        }
        let first = *positions.keys().next().expect("nonempty");
        let last = *positions.keys().next_back().expect("nonempty");
        let empty = Vec::new();
        let at = |d: isize| positions.get(&d).unwrap_or(&empty);
        let dims = (first..=last).map(|d| at(d).len()).collect();
        let diffs =
            (first..last).map(|d| c.differential(d).expect("inner degree").submatrix(at(d + 1), at(d))).collect();
        CochainComplex::new(c.ring(), first, dims, diffs)
    }

    /// Zero for positive rank, one free summand for rank 0.
    pub fn component_homology(&self, comp: &BooleanComponent) -> Result<HomologySummary> {
        let h = homology(&self.component_complex(comp)?)?;
        let b = self.name(&self.nodes[comp.base]);
        if comp.rank > 0 && !h.is_zero() {
            return Err(violation!("rank-{} component of {b} is not acyclic", comp.rank));
        }
        if comp.rank == 0 && (h.total_free() != 1 || h.has_torsion()) {
            return Err(violation!("rank-0 component {b} does not carry one free summand"));
        }
        Ok(h)
    }

    /// Pairs (e, e') with e <= e' in the Hasse order whose arc-resolutions
    /// differ; also returns the number of related pairs examined.
    pub fn related_pair_counterexamples(&self) -> Result<(usize, Vec<(usize, usize)>)> {
        let res: Vec<ArcResolution> = self.nodes.iter().map(|e| self.arc_resolution(e)).collect::<Result<_>>()?;
        let mut checked = 0;
        let mut bad = Vec::new();
        for start in 0..self.nodes.len() {
            let mut seen = vec![false; self.nodes.len()];
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(x) = queue.pop_front() {
                for &k in &self.up[x] {
                    let y = self.edges[k].target;
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                        checked += 1;
                        if res[start] != res[y] {
                            bad.push((start, y));
                        }
                    }
                }
            }
        }
        Ok((checked, bad))
    }

    /// Graphviz export: one cluster per component.
    pub fn to_dot(&self, dec: &Decomposition) -> String {
        let n = self.crossings();
        let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n");
        for (k, comp) in dec.components.iter().enumerate() {
            writeln!(out, "  subgraph cluster_{k} {{").unwrap();
            writeln!(out, "    rank=\"{}\";", comp.rank).unwrap();
            writeln!(out, "    label=\"rank {}\";", comp.rank).unwrap();
            for &m in &comp.members {
                let e = &self.nodes[m];
                writeln!(out, "    {} [projection=\"{}\"];", self.name(e), e.state.bits(n)).unwrap();
            }
            out.push_str("  }\n");
        }
        for edge in &self.edges {
            writeln!(
                out,
                "  {} -> {} [label=\"{}\"];",
                self.name(&self.nodes[edge.source]),
                self.name(&self.nodes[edge.target]),
                edge.coeff
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }

    pub fn projection(&self, node: usize) -> KauffmanState {
        self.nodes[node].state
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraSpec;
    use crate::ring::RingSpec;

    fn poset(pd: &str, preset: &str, ring: RingSpec) -> EnhancedPoset {
        let alg = AlgebraSpec::preset(preset).unwrap().instantiate(ring).unwrap();
        enhance(&LinkDiagram::parse_pd(pd).unwrap(), &alg, None).unwrap()
    }

    const HOPF: &str = "X(1,4,2,3) X(3,2,4,1)";
    const KINKS: &str = "X(1,1,2,4) X(2,3,3,4)";

    #[test]
    fn node_counts() {
        assert_eq!(poset(KINKS, "lee", RingSpec::Rationals).nodes.len(), 18);
        assert_eq!(poset(HOPF, "lee", RingSpec::Rationals).nodes.len(), 12);
        let o = poset("O(1)", "lee", RingSpec::Rationals);
        assert_eq!((o.nodes.len(), o.edges.len()), (2, 0));
    }

    #[test]
    fn hopf_arc_sets() {
        let p = poset(HOPF, "lee", RingSpec::Rationals);
        let aa = EnhancedState::new(KauffmanState(0), 0b00);
        let ab = EnhancedState::new(KauffmanState(0), 0b10);
        assert_eq!(p.arc_set(&aa), 0b11);
        assert_eq!(p.arc_set(&ab), 0);
        assert_eq!(p.surgery_orbit(&aa).unwrap().len(), 4);
        assert_eq!(p.surgery_orbit(&ab).unwrap(), vec![ab]);
    }

    #[test]
    fn self_abutting_crossing_is_in_the_arc_set() {
        let p = poset("X(1,2,2,1)", "lee", RingSpec::Rationals);
        for e in &p.nodes {
            let circles = p.complex.table.circles(e.state);
            let [u, v] = p.diagram.strands_at(circles, e.state, 0);
            if u == v {
                assert_eq!(p.arc_set(e), 1);
            }
        }
    }

    #[test]
    fn two_kink_census() {
        let p = poset(KINKS, "lee", RingSpec::Rationals);
        let dec = p.decompose().unwrap();
        assert_eq!(dec.census_string(), "rank2:2 rank1:4 rank0:2");
        p.check_block_diagonal(&dec).unwrap();
        for c in &dec.components {
            p.component_homology(c).unwrap();
        }
        assert_eq!(p.degenerate_generators().unwrap().len(), 2);
        let (checked, bad) = p.related_pair_counterexamples().unwrap();
        assert!(checked > 0);
        assert!(bad.is_empty());
    }

    #[test]
    fn census_sums_to_node_count() {
        let p = poset(HOPF, "lee", RingSpec::Rationals);
        let dec = p.decompose().unwrap();
        let total: usize = dec.components.iter().map(|c| 1 << c.rank).sum();
        assert_eq!(total, 12);
        assert_eq!(p.degenerate_generators().unwrap().len(), 4);
    }

    #[test]
    fn non_diagonal_decomposition_refused() {
        let p = poset(HOPF, "khovanov", RingSpec::Rationals);
        let err = p.decompose().unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn dot_is_deterministic() {
        let p = poset(HOPF, "lee", RingSpec::Rationals);
        let dec = p.decompose().unwrap();
        let a = p.to_dot(&dec);
        assert_eq!(a, p.to_dot(&dec));
        assert!(a.contains("rank=\"2\""));
        assert!(a.contains("s00_aa"));
    }
}
