//! Invariants checked on random inputs and, where cheap, exhaustively.

mod common;

use std::sync::OnceLock;

use proptest::prelude::*;

use tropmod_core::matroid::{
    default_spanning_tree, mk4_matrix, realize_matroid_iso, simplify, tu_representation_with_tree, verify_realization,
    BinaryMatroid,
};
use tropmod_core::quadform::{classify_g2, g2_equivalent, in_fundamental_cone, rat, Rational};
use tropmod_core::torelli::{torelli_cell_image, tropical_jacobian};
use tropmod_core::{build_moduli_poset, CellPoset, IntMatrix, MetricCurve, QuadForm, WeightedGraph};

fn poset(g: usize) -> &'static CellPoset {
    static P: [OnceLock<CellPoset>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    P[g - 2].get_or_init(|| build_moduli_poset(g).unwrap())
}

fn any_cell(max_genus: usize) -> impl Strategy<Value = WeightedGraph> {
    (2..=max_genus).prop_flat_map(|g| {
        let cells = &poset(g).cells;
        (0..cells.len()).prop_map(move |i| cells[i].graph.clone())
    })
}

fn shuffled(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn unimodular2() -> impl Strategy<Value = IntMatrix> {
    // products of elementary matrices
    prop::collection::vec((0..4u8, -3i64..=3), 1..6).prop_map(|ops| {
        let mut x = IntMatrix::identity(2);
        for (kind, k) in ops {
            let e = match kind {
                0 => IntMatrix::from_rows(&[vec![1, k], vec![0, 1]]).unwrap(),
                1 => IntMatrix::from_rows(&[vec![1, 0], vec![k, 1]]).unwrap(),
                2 => IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap(),
                _ => IntMatrix::from_rows(&[vec![-1, 0], vec![0, 1]]).unwrap(),
            };
            x = x.mul(&e).unwrap();
        }
        x
    })
}

fn psd2() -> impl Strategy<Value = QuadForm> {
    // Gram matrices of two integer vectors, scaled by a rational
    (prop::array::uniform4(-4i64..=4), 1i64..=6, 1i64..=6).prop_map(|(v, p, q)| {
        let m = IntMatrix::from_rows(&[vec![v[0], v[1]], vec![v[2], v[3]]]).unwrap();
        let gram = m.transpose().mul(&m).unwrap();
        QuadForm::from_ints(&gram.to_rows()).unwrap().scale(&Rational::new(p.into(), q.into()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn certificate_ignores_labels((graph, perm) in any_cell(4).prop_flat_map(|g| {
        let n = g.num_vertices();
        (Just(g), shuffled(n))
    })) {
        let relabeled = graph.relabel(&perm);
        prop_assert_eq!(graph.canonical_certificate().unwrap(), relabeled.canonical_certificate().unwrap());
        prop_assert_eq!(graph.automorphism_edge_group_order().unwrap(), relabeled.automorphism_edge_group_order().unwrap());
    }

    #[test]
    fn text_encoding_round_trips(graph in any_cell(4)) {
        let back: WeightedGraph = graph.to_text().parse().unwrap();
        prop_assert_eq!(back, graph);
    }

    #[test]
    fn contraction_keeps_genus((graph, e) in any_cell(4).prop_flat_map(|g| {
        let m = g.num_edges().max(1);
        (Just(g), 0..m)
    })) {
        prop_assume!(graph.num_edges() > 0);
        let g = graph.genus().unwrap();
        let c = graph.contract_edge(e).unwrap();
        prop_assert_eq!(c.genus().unwrap(), g);
        prop_assert!(c.is_valid_type(g));
    }

    #[test]
    fn simplify_is_idempotent(cols in prop::collection::vec(0u64..32, 0..10)) {
        let m = BinaryMatroid::from_columns(&cols).unwrap();
        let (s, map) = simplify(&m);
        prop_assert!(s.is_simple());
        let (t, again) = simplify(&s);
        prop_assert_eq!(&t, &s);
        prop_assert!(again.iter().enumerate().all(|(i, x)| *x == Some(i)));
        prop_assert_eq!(map.iter().flatten().count(), s.ground_size());
    }

    #[test]
    fn realize_witness_meets_contract(cols in prop::sample::subsequence((0..6).collect::<Vec<usize>>(), 0..=6), k in 0usize..24) {
        // a column subset of MK4 against its image under an automorphism
        let a = mk4_matrix();
        let auts = a.binary_matroid().to_matroid().automorphisms().unwrap();
        let sigma = &auts[k];
        let image: Vec<usize> = cols.iter().map(|&c| sigma[c]).collect();
        let (ra, rb) = (a.select_columns(&cols), a.select_columns(&image));
        let ident: Vec<usize> = (0..cols.len()).collect();
        let x = realize_matroid_iso(&ra, &rb, &ident).unwrap();
        prop_assert!(verify_realization(&ra, &rb, &ident, &x));
    }

    #[test]
    fn equivalence_is_invariant(q in psd2(), x in unimodular2()) {
        prop_assert!(g2_equivalent(&q, &q.transform(&x)).unwrap());
    }

    #[test]
    fn reduction_is_sound(q in psd2()) {
        let r = classify_g2(&q).unwrap();
        prop_assert!(r.transform.is_unimodular());
        prop_assert_eq!(q.transform(&r.transform), r.reduced.clone());
        if q.is_definite() {
            prop_assert!(in_fundamental_cone(&r.reduced));
        }
    }

    #[test]
    fn jacobian_scales_linearly((graph, lengths) in any_cell(4).prop_flat_map(|g| {
        let m = g.num_edges();
        (Just(g), prop::collection::vec(1i64..20, m))
    }), t in 1i64..9, s in 1i64..9) {
        let curve = MetricCurve::new(graph, lengths.into_iter().map(rat).collect()).unwrap();
        let t = Rational::new(t.into(), s.into());
        let scaled = tropical_jacobian(&curve.scale(&t).unwrap()).unwrap();
        prop_assert_eq!(scaled, tropical_jacobian(&curve).unwrap().scale(&t));
    }
}

fn all_spanning_trees(g: &WeightedGraph) -> Vec<Vec<usize>> {
    let n = g.num_vertices();
    let m = g.num_edges();
    (0..1u64 << m)
        .filter(|mask| mask.count_ones() as usize == n - 1)
        .map(|mask| (0..m).filter(|&e| mask >> e & 1 == 1).collect::<Vec<_>>())
        .filter(|tree: &Vec<usize>| {
            let mut mask = 0u64;
            for e in 0..m {
                if !tree.contains(&e) {
                    mask |= 1 << e;
                }
            }
            !tree.iter().any(|&e| g.is_loop(e)) && !common::disconnects(g, mask)
        })
        .collect()
}

#[test]
fn genus_two_jacobian_independent_of_tree() {
    for cell in &poset(2).cells {
        let g = &cell.graph;
        if g.num_edges() == 0 || g.total_weight() > 0 {
            continue;
        }
        let lengths: Vec<Rational> = (0..g.num_edges()).map(|e| rat(e as i64 + 2)).collect();
        let base = tropical_jacobian(&MetricCurve::new(g.clone(), lengths.clone()).unwrap()).unwrap();
        for tree in all_spanning_trees(g) {
            let b = tu_representation_with_tree(g, &tree).unwrap();
            let rows: Vec<Vec<Rational>> = (0..2)
                .map(|i| {
                    (0..2)
                        .map(|j| {
                            (0..g.num_edges()).map(|e| &lengths[e] * rat(b.matrix()[(i, e)] * b.matrix()[(j, e)])).sum()
                        })
                        .collect()
                })
                .collect();
            assert!(g2_equivalent(&base, &QuadForm::new(rows).unwrap()).unwrap(), "{g} tree {tree:?}");
        }
    }
}

#[test]
fn every_tree_gives_a_totally_unimodular_matrix() {
    for g in [WeightedGraph::k4(), WeightedGraph::theta(), WeightedGraph::dumbbell()] {
        for tree in all_spanning_trees(&g) {
            let b = tu_representation_with_tree(&g, &tree).unwrap();
            assert_eq!(tropmod_core::matroid::is_totally_unimodular(b.matrix()), Ok(true));
        }
    }
    let k4 = WeightedGraph::k4();
    assert_eq!(default_spanning_tree(&k4).len(), 3);
}

/// Contracting an edge maps the Torelli image to a deletion of it, or to
/// itself, up to isomorphism.
#[test]
fn torelli_images_are_monotone() {
    for g in 2..=4 {
        let p = poset(g);
        let images: Vec<_> = p.cells.iter().map(|c| torelli_cell_image(&c.graph).unwrap().to_matroid()).collect();
        for &(lo, hi) in &p.covers {
            let (small, big) = (&images[lo], &images[hi]);
            let ok = small.is_isomorphic(big).unwrap()
                || (0..big.ground_size()).any(|e| {
                    let d = BinaryMatroid::from_columns(
                        &torelli_cell_image(&p.cells[hi].graph)
                            .unwrap()
                            .columns()
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != e)
                            .map(|(_, &c)| c)
                            .collect::<Vec<_>>(),
                    )
                    .unwrap();
                    simplify(&d).0.to_matroid().is_isomorphic(small).unwrap()
                });
            assert!(ok, "cover {lo} < {hi} in genus {g}");
        }
    }
}

/// For genus three, two trees give cycle matrices related by a unimodular
/// `X` with `X b_e = ± b'_e`, so the Jacobians are related by `X Q X^T`.
#[test]
fn genus_three_jacobian_independent_of_tree() {
    for cell in &poset(3).cells {
        let g = &cell.graph;
        if g.total_weight() > 0 {
            continue;
        }
        let lengths: Vec<Rational> =
            (0..g.num_edges()).map(|e| Rational::new((e as i64 + 1).into(), 3.into())).collect();
        let curve = MetricCurve::new(g.clone(), lengths.clone()).unwrap();
        let base = tropical_jacobian(&curve).unwrap();
        let b0 = tu_representation_with_tree(g, &default_spanning_tree(g)).unwrap();
        let ident: Vec<usize> = (0..g.num_edges()).collect();
        for tree in all_spanning_trees(g) {
            let b = tu_representation_with_tree(g, &tree).unwrap();
            let x = realize_matroid_iso(&b0, &b, &ident).unwrap();
            let rows: Vec<Vec<Rational>> = (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| {
                            (0..g.num_edges()).map(|e| &lengths[e] * rat(b.matrix()[(i, e)] * b.matrix()[(j, e)])).sum()
                        })
                        .collect()
                })
                .collect();
            assert_eq!(base.transform(&x.transpose()), QuadForm::new(rows).unwrap(), "{g} tree {tree:?}");
        }
    }
}
