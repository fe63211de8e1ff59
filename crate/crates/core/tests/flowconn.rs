mod common;

use common::{component_count, dense_rows, random_block, source_oracle, transient_oracle};
use graph_realize::binmat::IndexSet;
use graph_realize::flowconn::{
    check_full_connectivity, check_irreducible, has_kirchhoff_row, source_connectivity, transient_connectivity,
    FullConnectivity, Irreducibility,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn transient_product_matches_direct_evaluation(seed in any::<u64>()) {
        let b = random_block(&mut ChaCha8Rng::seed_from_u64(seed), false);
        let c = transient_connectivity(&b);
        prop_assert_eq!(&c.matrix, &transient_oracle(&b));
        prop_assert_eq!(&c.row_arcs, &b.out_arcs);
        match check_full_connectivity(&c) {
            FullConnectivity::Pass => prop_assert_eq!(c.matrix.count_ones(), c.matrix.nrows() * c.matrix.ncols()),
            FullConnectivity::Fail { row, col } => {
                prop_assert!(!c.matrix.get(row, col));
                let first = (0..c.matrix.nrows()).flat_map(|i| (0..c.matrix.ncols()).map(move |j| (i, j)));
                prop_assert!(first.take_while(|&p| p != (row, col)).all(|(i, j)| c.matrix.get(i, j)));
            }
        }
    }

    #[test]
    fn source_product_matches_direct_evaluation(seed in any::<u64>()) {
        let b = random_block(&mut ChaCha8Rng::seed_from_u64(seed), true);
        let c = source_connectivity(&b).unwrap();
        prop_assert_eq!(&c.matrix, &source_oracle(&b));
        prop_assert!(c.matrix.is_symmetric());
        let n = component_count(&c.matrix);
        match check_irreducible(&c).unwrap() {
            Irreducibility::Pass => prop_assert_eq!(n, 1),
            Irreducibility::Fail { components } => {
                prop_assert_eq!(components.len(), n);
                prop_assert!(IndexSet::is_partition_of(&components, c.matrix.nrows()));
            }
        }
    }

    #[test]
    fn a_dense_row_gives_full_connectivity(seed in any::<u64>(), source in any::<bool>()) {
        let b = random_block(&mut ChaCha8Rng::seed_from_u64(seed), source);
        let dense = dense_rows(&b);
        prop_assert_eq!(has_kirchhoff_row(&b), dense.first().copied());
        if !dense.is_empty() {
            if source {
                prop_assert!(check_irreducible(&source_connectivity(&b).unwrap()).unwrap().passed());
            } else {
                prop_assert!(check_full_connectivity(&transient_connectivity(&b)).passed());
            }
        }
    }
}
