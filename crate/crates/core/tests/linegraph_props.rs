mod support;

use ffsc::lattice::{builtin, enlarge_cell, BUILTIN_NAMES};
use ffsc::laurent::torus_truncate;
use ffsc::linegraph::{canonical_isomorphic, find_claw, line_graph, recognize, Recognition};
use proptest::prelude::*;
use support::compact_graph;

#[test]
fn builtin_roots_round_trip() {
    for name in BUILTIN_NAMES {
        let r = builtin(name).unwrap();
        let a = line_graph(&r).unwrap();
        let rec = recognize(&a).unwrap();
        let root = rec.root().unwrap_or_else(|| panic!("{name}: {rec:?}"));
        assert!(
            canonical_isomorphic(&line_graph(&root.root).unwrap(), &a).unwrap(),
            "{name}"
        );
        let expected = enlarge_cell(&r, &root.coarsening).unwrap();
        assert!(
            canonical_isomorphic(&root.root, &expected).unwrap(),
            "{name}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn recognition_is_consistent(a in compact_graph()) {
        match recognize(&a).unwrap() {
            Recognition::LineGraph(root) => {
                prop_assert!(canonical_isomorphic(&line_graph(&root.root).unwrap(), &a).unwrap());
                let l = vec![5; a.dim()];
                if let Ok(t) = torus_truncate(&a, &l) {
                    prop_assert!(find_claw(&t).is_none());
                }
            }
            Recognition::NotLineGraph { .. } | Recognition::AmbiguousAfterCoarsening { .. } => {}
        }
    }

    #[test]
    fn line_graphs_are_recognised(r in compact_graph()) {
        let a = line_graph(&r).unwrap();
        match recognize(&a).unwrap() {
            Recognition::LineGraph(root) => {
                prop_assert!(canonical_isomorphic(&line_graph(&root.root).unwrap(), &a).unwrap());
            }
            Recognition::NotLineGraph { obstruction } => prop_assert!(false, "{}", obstruction),
            Recognition::AmbiguousAfterCoarsening { .. } => {}
        }
    }
}
