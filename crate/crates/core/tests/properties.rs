mod common;

use common::*;
use khdegen::algebra::AlgebraSpec;
use khdegen::canonical::lee_generator;
use khdegen::cube::build_complex;
use khdegen::homology::{homology, CochainComplex};
use khdegen::matrix::Matrix;
use khdegen::poset::enhance;
use khdegen::{KauffmanState, Orientation, RingSpec};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r))
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn diagonal_spec(ea: BigRational, eb: BigRational) -> AlgebraSpec {
    let mut spec = AlgebraSpec::preset("split").unwrap();
    spec.ring = None;
    spec.counit = [ea, eb];
    spec.unit = None;
    spec.comult = None;
    spec
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn smith_form_postcondition(rows in int_matrix()) {
        prop_assert_eq!(snf_postcondition(&rows), Ok(()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn one_flip_changes_circle_count_by_one(k in 0usize..CORPUS.len(), s in any::<u64>(), c in 0usize..8) {
        let d = load(CORPUS[k]);
        let n = d.crossing_count();
        prop_assume!(n > 0);
        let c = c % n;
        let s = KauffmanState(s & ((1 << n) - 1));
        let a = d.circles(s).len() as i64;
        let b = d.circles(s.toggled(c)).len() as i64;
        prop_assert_eq!((a - b).abs(), 1);
    }

    #[test]
    fn diagonal_algebras_satisfy_the_lemma(
        an in prop::sample::select(vec![-7i64, -3, -2, -1, 1, 2, 3, 5]),
        ad in 1i64..6,
        bn in prop::sample::select(vec![-5i64, -2, -1, 1, 3, 4]),
        bd in 1i64..6,
    ) {
        let spec = diagonal_spec(q(an, ad), q(bn, bd));
        let alg = spec.instantiate(RingSpec::Rationals).unwrap();
        prop_assert!(alg.is_diagonal());
        let one = alg.ring.one();
        prop_assert_eq!(alg.unit_vec().unwrap(), [one.clone(), one]);
        let derived = alg.derive_comultiplication().unwrap();
        let ea = alg.ring.inv(&alg.counit[0]).unwrap();
        let eb = alg.ring.inv(&alg.counit[1]).unwrap();
        prop_assert_eq!(&derived[0][0][0], &ea);
        prop_assert_eq!(&derived[1][1][1], &eb);
        let report = alg.with_comult(derived).validate();
        prop_assert!(report.passed(), "{}", report);
    }

    #[test]
    fn rank_matches_invariant_factor_count(rows in int_matrix()) {
        let z = RingSpec::Integers;
        let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| z.from_i64(x)).collect()).collect());
        let f = khdegen::smith::invariant_factors(&khdegen::smith::IntMatrix::from_rows(&rows)).unwrap();
        prop_assert_eq!(m.rank(z), f.len());
    }

    #[test]
    fn two_term_homology_counts(rows in int_matrix(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let f = RingSpec::PrimeField(p);
        let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect());
        let (b, a) = (m.rows(), m.cols());
        let r = m.rank(f);
        let c = CochainComplex::new(f, 0, vec![a, b], vec![m]).unwrap();
        let h = homology(&c).unwrap();
        prop_assert_eq!(h.free_at(0), a - r);
        prop_assert_eq!(h.free_at(1), b - r);
        prop_assert_eq!(h.euler_characteristic(), a as i64 - b as i64);
    }
}

#[test]
fn reversing_all_components_swaps_every_label() {
    for name in CORPUS {
        let d = load(name);
        let col = d.checkerboard(None).unwrap();
        let base = Orientation::forward(d.component_count());
        for o in d.enumerate_orientations() {
            let g = lee_generator(&d, &o, &col, &base).unwrap().state;
            let r = lee_generator(&d, &o.reversed_all(), &col, &base).unwrap().state;
            let k = d.circles(g.state).len();
            assert_eq!(g.state, r.state, "{name}");
            assert_eq!(g.labels ^ r.labels, (1u64 << k) - 1, "{name} {o}");
        }
    }
}

#[test]
fn node_count_identity_and_component_sizes() {
    for name in CORPUS {
        let d = load(name);
        let p = enhance(&d, &algebra("lee", RingSpec::Rationals), None).unwrap();
        let expected: usize = KauffmanState::all(d.crossing_count()).map(|s| 1usize << d.circles(s).len()).sum();
        assert_eq!(p.nodes.len(), expected, "{name}");
        let dec = p.decompose().unwrap();
        let total: usize = dec.components.iter().map(|c| 1usize << c.rank).sum();
        assert_eq!(total, expected, "{name}");
        for comp in &dec.components {
            assert_eq!(comp.members.len(), 1 << comp.rank);
            for &m in &comp.members {
                assert_eq!(p.arc_set(&p.nodes[m]).count_ones() as usize, comp.rank);
            }
        }
        let rank0 = dec.components.iter().filter(|c| c.rank == 0).count();
        assert_eq!(rank0, 1 << d.component_count(), "{name}");
    }
}

#[test]
fn edge_exists_iff_component_nonzero() {
    let d = load("trefoil");
    let alg = algebra("lee", RingSpec::Rationals);
    let p = enhance(&d, &alg, None).unwrap();
    let comult = alg.comult_table().unwrap();
    let table = &p.complex.table;
    let mut count = 0;
    for (i, e) in p.nodes.iter().enumerate() {
        for (j, f) in p.nodes.iter().enumerate() {
            let k = khdegen::cube::matrix_component(&d, table, &alg, &comult, *e, *f);
            let edge = p.edges.iter().find(|x| x.source == i && x.target == j);
            assert_eq!(edge.is_some(), !k.is_zero());
            if let Some(x) = edge {
                assert_eq!(x.coeff, k);
                count += 1;
            }
        }
    }
    assert_eq!(count, p.edges.len());
}

#[test]
fn degrees_shift_with_the_base_orientation() {
    let d = load("hopf_neg");
    let alg = algebra("lee", RingSpec::Rationals);
    for o in d.enumerate_orientations() {
        let c = build_complex(&d, &alg, Some(&o)).unwrap();
        assert_eq!(c.shift, d.n_minus(&o) as isize);
    }
}
