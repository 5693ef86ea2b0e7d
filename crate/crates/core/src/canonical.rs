//! Canonical generators: orientations to empty-arc-set enhanced states and back.
//!
//! A circle of the oriented resolution gets label `a` iff the parity of its
//! nesting depth (even when the region just outside it is white) differs
//! from "clockwise" for the direction induced by the orientation. The
//! outermost counterclockwise circle is labelled `a`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::algebra::FrobeniusAlgebra;
use crate::cube::{build_complex, ChainComplex, EnhancedState};
use crate::diagram::{Coloring, Dart, LinkDiagram, Orientation};
use crate::error::{invalid, violation, Result};
use crate::homology::{homology, independent_in_homology, is_cycle, Chain, HomologySummary};
use crate::poset::arc_set;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalGenerator {
    pub orientation: Orientation,
    pub state: EnhancedState,
    pub degree: isize,
}

impl CanonicalGenerator {
    /// `<orientation> <state bits> <labels> <degree>`.
    pub fn report_line(&self, diagram: &LinkDiagram) -> String {
        let n = diagram.crossing_count();
        let circles = diagram.circles(self.state.state).len();
        let name = self.state.name(n, circles);
        let labels = name.split('_').nth(1).unwrap_or("");
        format!(
            "orientation={} state={} labels={} degree={}",
            self.orientation,
            self.state.state.bits(n),
            labels,
            self.degree
        )
    }
}

/// |s| − n₋(base).
pub fn generator_degree(diagram: &LinkDiagram, g: &EnhancedState, base: &Orientation) -> isize {
    g.state.weight() as isize - diagram.n_minus(base) as isize
}

pub fn lee_generator(
    diagram: &LinkDiagram,
    o: &Orientation,
    coloring: &Coloring,
    base: &Orientation,
) -> Result<CanonicalGenerator> {
    let s = diagram.oriented_resolution(o);
    let circles = diagram.circles(s);
    let layout = coloring.layout(diagram, s, &circles)?;
    let mut labels = 0u64;
    for i in 0..circles.len() {
        let along = diagram.oriented_dart(o, circles.least_arc(i));
        let cw = !(layout.ccw[i] ^ along.rev);
        let even = layout.depth[i] % 2 == 0;
        if !(even ^ cw) {
            labels |= 1 << i;
        }
    }
    let e = EnhancedState::new(s, labels);
    if arc_set(diagram, &circles, &e) != 0 {
        return Err(violation!("generator for orientation {o} has a nonempty arc-set"));
    }
    Ok(CanonicalGenerator { orientation: o.clone(), state: e, degree: generator_degree(diagram, &e, base) })
}

/// Inverse of [`lee_generator`] on enhanced states with empty arc-set.
pub fn orientation_of(diagram: &LinkDiagram, e: &EnhancedState, coloring: &Coloring) -> Result<Orientation> {
    let circles = diagram.circles(e.state);
    if arc_set(diagram, &circles, e) != 0 {
        return Err(invalid!("enhanced state has a nonempty arc-set"));
    }
    let layout = coloring.layout(diagram, e.state, &circles)?;
    let mut arc_rev = vec![false; diagram.arc_count()];
    for i in 0..circles.len() {
        let even = layout.depth[i] % 2 == 0;
        let cw = (e.label(i) == 0) ^ even;
        let start = Dart { arc: circles.least_arc(i), rev: cw == layout.ccw[i] };
        for d in diagram.circle_darts(e.state, start) {
            arc_rev[d.arc] = d.rev;
        }
    }
    for (c, q) in diagram.crossings().iter().enumerate() {
        let inc: Vec<bool> =
            (0..4).map(|p| diagram.head(Dart { arc: q[p], rev: arc_rev[q[p]] }) == Some((c, p))).collect();
        if inc[0] == inc[2] || inc[1] == inc[3] {
            return Err(violation!("strands at crossing {} are not co-oriented", c + 1));
        }
    }
    let mut flip: Vec<Option<bool>> = vec![None; diagram.component_count()];
    for (arc, &rev) in arc_rev.iter().enumerate() {
        let k = diagram.arc_component(arc);
        let f = rev != diagram.stored_direction(arc);
        match flip[k] {
            None => flip[k] = Some(f),
            Some(g) if g != f => {
                return Err(violation!("component {} receives inconsistent directions", k + 1));
            }
            Some(_) => {}
        }
    }
    let o = Orientation(flip.into_iter().map(|f| f.expect("every component has an arc")).collect());
    if diagram.oriented_resolution(&o) != e.state {
        return Err(violation!("orientation {o} does not resolve to the given state"));
    }
    Ok(o)
}

#[derive(Clone, Debug)]
pub struct BasisReport {
    pub base: Orientation,
    pub generators: Vec<CanonicalGenerator>,
    pub homology: HomologySummary,
}

impl fmt::Display for BasisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "base orientation: {}", self.base)?;
        writeln!(f, "generators: {}", self.generators.len())?;
        writeln!(f, "homology free rank: {}", self.homology.total_free())?;
        write!(f, "cycles: yes, independent: yes")
    }
}

/// The basis chain of `e`.
fn chain_of(c: &ChainComplex, e: &EnhancedState) -> Result<Chain> {
    c.chain_of(e).ok_or_else(|| violation!("generator is not a basis element of the complex"))
}

/// Round trips in both directions, then checks the generators form a
/// homology basis of rank 2^|L|.
pub fn verify_basis(
    diagram: &LinkDiagram,
    algebra: &FrobeniusAlgebra,
    coloring: &Coloring,
    base: &Orientation,
) -> Result<BasisReport> {
    if !algebra.is_diagonal() {
        return Err(invalid!("canonical generators require a diagonal algebra"));
    }
    let complex = build_complex(diagram, algebra, Some(base))?;
    let h = homology(&complex.complex)?;

    let mut generators = Vec::new();
    let mut states = HashSet::new();
    for o in diagram.enumerate_orientations() {
        let g = lee_generator(diagram, &o, coloring, base)?;
        let back = orientation_of(diagram, &g.state, coloring)?;
        if back != o {
            return Err(violation!("orientation {o} round-trips to {back}"));
        }
        if !states.insert(g.state) {
            return Err(violation!("two orientations give the generator {}", complex.name(&g.state)));
        }
        generators.push(g);
    }
    for e in complex.all_states() {
        if arc_set(diagram, complex.table.circles(e.state), e) != 0 {
            continue;
        }
        let o = orientation_of(diagram, e, coloring)?;
        if lee_generator(diagram, &o, coloring, base)?.state != *e {
            return Err(violation!("{} does not round-trip through orientation {o}", complex.name(e)));
        }
        if !states.contains(e) {
            return Err(violation!("{} has empty arc-set but no orientation", complex.name(e)));
        }
    }

    let expected = 1usize << diagram.component_count();
    if generators.len() != expected || h.total_free() != expected || h.has_torsion() {
        return Err(violation!(
            "{} generators, homology free rank {}, torsion {}; expected {expected}",
            generators.len(),
            h.total_free(),
            h.has_torsion()
        ));
    }
    let mut by_degree: BTreeMap<isize, Vec<Chain>> = BTreeMap::new();
    for g in &generators {
        let chain = chain_of(&complex, &g.state)?;
        if !is_cycle(&complex.complex, &chain)? {
            return Err(violation!("generator for {} is not a cycle", g.orientation));
        }
        by_degree.entry(g.degree).or_default().push(chain);
    }
    for (degree, chains) in &by_degree {
        if h.free_at(*degree) != chains.len() || !independent_in_homology(&complex.complex, chains)? {
            return Err(violation!("generators in degree {degree} are not a homology basis"));
        }
    }
    Ok(BasisReport { base: base.clone(), generators, homology: h })
}

/// For every orientation: (orientation, degree of its generator, 2·Σ lk_base
/// over reversed/unreversed component pairs).
pub fn linking_degree_table(
    diagram: &LinkDiagram,
    coloring: &Coloring,
    base: &Orientation,
) -> Result<Vec<(Orientation, isize, i64)>> {
    let k = diagram.component_count();
    let mut out = Vec::new();
    for o in diagram.enumerate_orientations() {
        let g = lee_generator(diagram, &o, coloring, base)?;
        let reversed = o.differs_from(base);
        let mut lk = 0;
        for &i in &reversed {
            for j in (0..k).filter(|j| !reversed.contains(j)) {
                lk += diagram.linking_number(base, i, j);
            }
        }
        out.push((o, g.degree, 2 * lk));
    }
    Ok(out)
}
