#![allow(dead_code, clippy::needless_range_loop)]

use std::path::PathBuf;

use khdegen::{AlgebraSpec, FrobeniusAlgebra, LinkDiagram, RingSpec};
use num_rational::Rational64;
use num_traits::Zero;

pub const CORPUS: &[&str] =
    &["unknot0", "unknot_1kink", "unknot_2kink", "hopf_pos", "hopf_neg", "trefoil", "figure8", "cinquefoil", "chain3"];

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus_path(name: &str) -> PathBuf {
    corpus_dir().join(format!("{name}.pd"))
}

pub fn load(name: &str) -> LinkDiagram {
    LinkDiagram::from_file(&corpus_path(name)).unwrap()
}

pub fn algebra(preset: &str, ring: RingSpec) -> FrobeniusAlgebra {
    AlgebraSpec::preset(preset).unwrap().instantiate(ring).unwrap()
}

/// The diagonal (algebra, ring) pairs every corpus diagram is run against.
pub fn diagonal_algebras() -> Vec<(&'static str, FrobeniusAlgebra)> {
    vec![
        ("Lee/Q", algebra("lee", RingSpec::Rationals)),
        ("Lee/F3", algebra("lee", RingSpec::PrimeField(3))),
        ("Lee/F5", algebra("lee", RingSpec::PrimeField(5))),
        ("Bar-Natan/F2", algebra("barnatan", RingSpec::PrimeField(2))),
        ("split/Z", algebra("split", RingSpec::Integers)),
    ]
}

/// Crossings as raw label quadruples, read straight from PD text.
pub fn raw_crossings(text: &str) -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    let mut rest = text;
    while let Some(i) = rest.find("X(") {
        let tail = &rest[i + 2..];
        let j = tail.find(')').unwrap();
        let v: Vec<i64> = tail[..j].split(',').map(|t| t.trim().parse().unwrap()).collect();
        out.push([v[0], v[1], v[2], v[3]]);
        rest = &tail[j..];
    }
    out
}

/// Circles of a smoothing, found by depth-first search over arc labels.
/// Returns the circle index of each distinct label, in label order.
pub fn oracle_circles(crossings: &[[i64; 4]], state: u64) -> (Vec<i64>, Vec<usize>) {
    let mut labels: Vec<i64> = crossings.iter().flatten().copied().collect();
    labels.sort_unstable();
    labels.dedup();
    let pos = |l: i64| labels.binary_search(&l).unwrap();
    let mut adj = vec![Vec::new(); labels.len()];
    for (c, q) in crossings.iter().enumerate() {
        let pairs = if state >> c & 1 == 0 { [(0, 1), (2, 3)] } else { [(0, 3), (1, 2)] };
        for (x, y) in pairs {
            adj[pos(q[x])].push(pos(q[y]));
            adj[pos(q[y])].push(pos(q[x]));
        }
    }
    let mut circle = vec![usize::MAX; labels.len()];
    let mut count = 0;
    for s in 0..labels.len() {
        if circle[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        circle[s] = count;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if circle[y] == usize::MAX {
                    circle[y] = count;
                    stack.push(y);
                }
            }
        }
        count += 1;
    }
    (labels, circle)
}

pub fn oracle_circle_count(crossings: &[[i64; 4]], state: u64) -> usize {
    let (_, circle) = oracle_circles(crossings, state);
    circle.iter().max().map_or(0, |m| m + 1)
}

/// Σ over states of 2^(circles), with no O(m) terms.
pub fn oracle_node_count(crossings: &[[i64; 4]]) -> usize {
    (0..1u64 << crossings.len()).map(|s| 1usize << oracle_circle_count(crossings, s)).sum()
}

fn rank(mut m: Vec<Vec<Rational64>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c] / m[r][c];
                for j in 0..cols {
                    let v = m[r][j];
                    m[i][j] -= f * v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Khovanov homology over ℚ of a diagram without free circles, computed in
/// the polynomial model A^{⊗k} = ℚ[X_1..X_k]/(X_i²): merging identifies
/// variables, splitting substitutes and multiplies by (X_u + X_v).
/// Returns (degree, rank) pairs with rank > 0, degree = |s| − `n_minus`.
pub fn oracle_khovanov_q(crossings: &[[i64; 4]], n_minus: usize) -> Vec<(isize, usize)> {
    let n = crossings.len();
    // a generator is the set of circles carrying X
    let circles: Vec<usize> = (0..1u64 << n).map(|s| oracle_circle_count(crossings, s)).collect();
    let mut basis: Vec<Vec<(u64, u64)>> = vec![Vec::new(); n + 1];
    for s in 0..1u64 << n {
        for x in 0..1u64 << circles[s as usize] {
            basis[s.count_ones() as usize].push((s, x));
        }
    }
    let index = |w: usize, s: u64, x: u64| basis[w].iter().position(|&g| g == (s, x)).unwrap();

    let mut ranks = Vec::new();
    for w in 0..n {
        let mut m = vec![vec![Rational64::zero(); basis[w].len()]; basis[w + 1].len()];
        for (j, &(s, x)) in basis[w].iter().enumerate() {
            let (labels, before) = oracle_circles(crossings, s);
            for c in (0..n).filter(|c| s >> c & 1 == 0) {
                let t = s | 1 << c;
                let (labels2, after) = oracle_circles(crossings, t);
                assert_eq!(labels, labels2);
                let sign = if (s & ((1 << c) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
                // monomial as a map circle -> exponent, then pushed through
                // the label correspondence
                let kb = before.iter().max().unwrap() + 1;
                let ka = after.iter().max().unwrap() + 1;
                let image_of = |circ: usize| {
                    let l = before.iter().position(|&b| b == circ).unwrap();
                    after[l]
                };
                let merged = ka + 1 == kb;
                let mut terms: Vec<(u64, i64)> = Vec::new();
                if merged {
                    let mut y = 0u64;
                    let mut zero = false;
                    for circ in (0..kb).filter(|&i| x >> i & 1 == 1) {
                        let k = image_of(circ);
                        if y >> k & 1 == 1 {
                            zero = true;
                        }
                        y |= 1 << k;
                    }
                    if !zero {
                        terms.push((y, sign));
                    }
                } else {
                    assert_eq!(ka, kb + 1);
                    // the split circle: the one whose labels land on two circles
                    let split_old = (0..kb)
                        .find(|&i| {
                            let mut targets: Vec<usize> =
                                (0..labels.len()).filter(|&l| before[l] == i).map(|l| after[l]).collect();
                            targets.sort_unstable();
                            targets.dedup();
                            targets.len() == 2
                        })
                        .unwrap();
                    let mut targets: Vec<usize> =
                        (0..labels.len()).filter(|&l| before[l] == split_old).map(|l| after[l]).collect();
                    targets.sort_unstable();
                    targets.dedup();
                    let (u, v) = (targets[0], targets[1]);
                    let mut y = 0u64;
                    for circ in (0..kb).filter(|&i| i != split_old && x >> i & 1 == 1) {
                        y |= 1 << image_of(circ);
                    }
                    if x >> split_old & 1 == 1 {
                        terms.push((y | 1 << u | 1 << v, sign));
                    } else {
                        terms.push((y | 1 << u, sign));
                        terms.push((y | 1 << v, sign));
                    }
                }
                for (y, k) in terms {
                    let i = index(w + 1, t, y);
                    m[i][j] += Rational64::from_integer(k);
                }
            }
        }
        ranks.push(rank(m));
    }
    let mut out = Vec::new();
    for w in 0..=n {
        let r_out = if w < n { ranks[w] } else { 0 };
        let r_in = if w > 0 { ranks[w - 1] } else { 0 };
        let h = basis[w].len() - r_out - r_in;
        if h > 0 {
            out.push((w as isize - n_minus as isize, h));
        }
    }
    out
}

/// U·M·V = D with U, V unimodular and D a diagonal divisibility chain,
/// recomputed here entry by entry.
pub fn snf_postcondition(rows: &[Vec<i64>]) -> Result<(), String> {
    use khdegen::smith::{invariant_factors, smith_normal_form, IntMatrix};
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::Signed;

    let m = IntMatrix::from_rows(rows);
    let f = smith_normal_form(&m).map_err(|e| e.to_string())?;
    let (r, c) = (m.rows(), m.cols());
    let prod = |a: &IntMatrix, b: &IntMatrix| {
        let mut out = IntMatrix::zeros(a.rows(), b.cols());
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let mut s = BigInt::zero();
                for k in 0..a.cols() {
                    s += &a[(i, k)] * &b[(k, j)];
                }
                out[(i, j)] = s;
            }
        }
        out
    };
    let umv = prod(&prod(&f.u, &m), &f.v);
    for i in 0..r {
        for j in 0..c {
            if umv[(i, j)] != f.d[(i, j)] {
                return Err(format!("U·M·V differs from D at ({i},{j})"));
            }
            if i != j && !f.d[(i, j)].is_zero() {
                return Err(format!("D has off-diagonal entry at ({i},{j})"));
            }
        }
    }
    for (name, x) in [("U", &f.u), ("V", &f.v)] {
        if x.determinant().abs() != BigInt::from(1) {
            return Err(format!("{name} is not unimodular"));
        }
    }
    let diag: Vec<BigInt> = (0..r.min(c)).map(|i| f.d[(i, i)].clone()).collect();
    for w in diag.windows(2) {
        if w[0].is_negative() || (w[0].is_zero() && !w[1].is_zero()) || (!w[0].is_zero() && !w[1].is_multiple_of(&w[0]))
        {
            return Err(format!("diagonal {w:?} breaks the divisibility chain"));
        }
    }
    let nonzero: Vec<BigInt> = diag.into_iter().filter(|x| !x.is_zero()).collect();
    if invariant_factors(&m).map_err(|e| e.to_string())? != nonzero {
        return Err("transform-free invariant factors disagree".into());
    }
    Ok(())
}
