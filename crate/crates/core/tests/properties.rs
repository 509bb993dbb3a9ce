mod common;

use common::{dims, gnp, random_labeling, weighted};
use lapsep::decomposition::{joint_decompose, joint_decompose_edgewise};
use lapsep::entanglement::{degree_criterion, degree_criterion_multipartite, partial_transpose_matrix};
use lapsep::graph::{laplacian, laplacian_density, row_sum_diag, TRACE_TOLERANCE};
use lapsep::labeling::{
    apply_labeling, grid_symmetries, partial_transpose_graph, single_factor_splits,
};
use lapsep::products::{complement_mask, product_adjacency, ProductMask};
use lapsep::{DimVector, Graph, VertexLabeling};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dims_strategy() -> impl Strategy<Value = DimVector> {
    prop::sample::select(vec![
        vec![2, 2],
        vec![2, 3],
        vec![3, 2],
        vec![2, 4],
        vec![3, 3],
        vec![2, 2, 2],
    ])
    .prop_map(|v| DimVector::new(v).unwrap())
}

/// (dims, graph, seed) with a random unweighted graph on `dims.product()` vertices.
fn grid_graph() -> impl Strategy<Value = (DimVector, Graph, u64)> {
    (dims_strategy(), 0.0..1.0f64, any::<u64>()).prop_map(|(d, p, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gnp(&mut rng, d.product(), p);
        (d, g, seed)
    })
}

fn rdd_pair(n: usize, seed: u64) -> (DVector<f64>, DMatrix<f64>) {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = if rng.random_bool(0.3) { rng.random_range(-1.0..1.0) } else { 0.0 };
        for j in 0..i {
            if rng.random_bool(0.6) {
                let w = rng.random_range(-1.0..1.0);
                a[(i, j)] = w;
                a[(j, i)] = w;
            }
        }
    }
    let d = DVector::from_fn(n, |i, _| {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
        a[(i, i)] + off + rng.random_range(0.0..0.5)
    });
    (d, a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn normalized_laplacian_is_a_density_matrix(n in 2usize..9, p in 0.05..1.0f64, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = weighted(&mut rng, n, p);
        prop_assume!(!g.is_trivial());
        let rho = laplacian_density(&g).unwrap();
        prop_assert!((rho.matrix().trace() - 1.0).abs() < TRACE_TOLERANCE);
        prop_assert_eq!(laplacian(&g), g.laplacian());
    }

    #[test]
    fn complement_is_an_involution(n in 1usize..10, p in 0.0..1.0f64, seed: u64) {
        let g = gnp(&mut ChaCha8Rng::seed_from_u64(seed), n, p);
        let c = g.complement().unwrap();
        prop_assert_eq!(c.edge_count() + g.edge_count(), n * (n - 1) / 2);
        prop_assert_eq!(c.complement().unwrap(), g);
    }

    #[test]
    fn partial_transpose_is_an_involution((d, g, _) in grid_graph()) {
        for split in single_factor_splits(&d) {
            let pt = partial_transpose_graph(&g, &d, &split).unwrap();
            prop_assert_eq!(pt.total_weight(), g.total_weight());
            prop_assert_eq!(partial_transpose_graph(&pt, &d, &split).unwrap(), g.clone());
        }
    }

    #[test]
    fn partial_transpose_graph_matches_matrix((d, g, _) in grid_graph()) {
        // off the diagonal, the partial transpose of the adjacency is the pT graph's adjacency
        for split in single_factor_splits(&d) {
            let pt = partial_transpose_graph(&g, &d, &split).unwrap();
            let m = partial_transpose_matrix(g.adjacency(), &d, &split).unwrap();
            prop_assert_eq!(&m, pt.adjacency());
        }
    }

    #[test]
    fn degree_criterion_invariant_under_grid_symmetries((d, g, seed) in grid_graph()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let lab = random_labeling(&mut rng, &d);
        let base = degree_criterion_multipartite(&apply_labeling(&g, &lab).unwrap(), &d)
            .unwrap()
            .passed();
        for sigma in grid_symmetries(&d) {
            let moved: Vec<usize> = lab.cells().iter().map(|&c| sigma[c]).collect();
            let lab2 = VertexLabeling::new(d.clone(), moved).unwrap();
            let canon = apply_labeling(&g, &lab2).unwrap();
            prop_assert_eq!(degree_criterion_multipartite(&canon, &d).unwrap().passed(), base);
        }
    }

    #[test]
    fn degree_criterion_shared_with_complement((d, g, _) in grid_graph()) {
        let c = g.complement().unwrap();
        for split in single_factor_splits(&d) {
            prop_assert_eq!(
                degree_criterion(&g, &d, &split).unwrap().passed(),
                degree_criterion(&c, &d, &split).unwrap().passed()
            );
        }
    }

    #[test]
    fn joint_decompositions_reconstruct(n in 1usize..9, seed: u64) {
        let (d, a) = rdd_pair(n, seed);
        for jd in [joint_decompose(&d, &a).unwrap(), joint_decompose_edgewise(&d, &a).unwrap()] {
            prop_assert!((jd.rebuild_d() - DMatrix::from_diagonal(&d)).amax() < 1e-10);
            prop_assert!((jd.rebuild_a() - &a).amax() < 1e-10);
            for (m, l) in jd.mu.iter().zip(&jd.lambda) {
                prop_assert!(*m >= *l - 1e-12);
            }
        }
    }

    #[test]
    fn product_masks_are_additive(m1: u8, m2: u8, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, h) = (gnp(&mut rng, 3, 0.5), gnp(&mut rng, 4, 0.5));
        let (a, b) = (ProductMask(m1 & !m2), ProductMask(m2));
        let union = product_adjacency(ProductMask(a.0 | b.0), &g, &h).unwrap();
        let sum = product_adjacency(a, &g, &h).unwrap().adjacency()
            + product_adjacency(b, &g, &h).unwrap().adjacency();
        prop_assert_eq!(union.adjacency(), &sum);
    }

    #[test]
    fn complement_of_product_is_complement_mask(mask: u8, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, h) = (gnp(&mut rng, 3, 0.5), gnp(&mut rng, 2, 0.5));
        let mask = ProductMask(mask);
        prop_assert_eq!(
            product_adjacency(mask, &g, &h).unwrap().complement().unwrap(),
            product_adjacency(complement_mask(mask), &g, &h).unwrap()
        );
    }

    #[test]
    fn row_sums_of_kronecker_products_factor(seed: u64) {
        // r(A (x) B) = r(A) (x) r(B) for nonnegative A, B
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = weighted(&mut rng, 3, 0.7).adjacency().clone() + DMatrix::identity(3, 3) * 0.5;
        let b = weighted(&mut rng, 4, 0.7).adjacency().clone();
        let lhs = row_sum_diag(&a.kronecker(&b));
        let rhs = row_sum_diag(&a).kronecker(&row_sum_diag(&b));
        prop_assert!((lhs - rhs).amax() < 1e-12);
    }
}

#[test]
fn reduced_labelings_agree_with_full_enumeration() {
    use lapsep::experiments::{classify_labelings, Classification};
    use lapsep::labeling::{all_labelings, reduced_labelings};
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let choices = [vec![2, 2], vec![2, 3], vec![3, 2]];
    for case in 0..50 {
        let d = dims(&choices[case % choices.len()]);
        let g = loop {
            let g = gnp(&mut rng, d.product(), 0.5);
            if !g.is_trivial() {
                break g;
            }
        };
        let full: Vec<VertexLabeling> = all_labelings(&d).collect();
        let a = classify_labelings(&g, &reduced_labelings(&d)).unwrap();
        let b = classify_labelings(&g, &full).unwrap();
        assert_eq!(a.classification, b.classification, "case {case}");
        assert_eq!(
            a.counts.entangled > 0,
            b.counts.entangled > 0,
            "case {case}: any-entangled differs"
        );
        if b.classification == Classification::AllEntangled {
            assert_eq!(a.counts.entangled, a.counts.examined);
        }
    }
}
