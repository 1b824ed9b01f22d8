mod support;

use ffsc::fermion::{build_h, SingleParticleH};
use ffsc::lattice::{
    abelian_cover, builtin, elementary_orientation, enlarge_cell, BaseGraph, OrientationFamily,
    BUILTIN_NAMES,
};
use ffsc::laurent::{torus_truncate, torus_truncate_signed, Monomial};
use proptest::prelude::*;
use support::compact_graph;

fn family() -> impl Strategy<Value = (OrientationFamily, u64)> {
    (
        prop::sample::select(vec![
            "comb",
            "square",
            "honeycomb",
            "kagome",
            "ladder_11",
            "hourglass_20",
            "checkerboard",
        ]),
        1usize..=2,
    )
        .prop_flat_map(|(name, mult)| {
            let g = builtin(name).unwrap();
            let fam = OrientationFamily::new(&g, &vec![mult; g.dim()]).unwrap();
            let len = fam.len();
            (Just(fam), 0..len)
        })
}

fn spectrum_on(s: &ffsc::laurent::SignedCompact, l: &[usize]) -> Vec<f64> {
    SingleParticleH::new(torus_truncate_signed(s, l).unwrap())
        .unwrap()
        .hermitian_spectrum()
}

fn base_graph() -> impl Strategy<Value = BaseGraph> {
    (1usize..=2, 1usize..=3).prop_flat_map(|(dim, n)| {
        let edge = (0..n, 0..n, prop::collection::vec(-1i32..=1, dim));
        prop::collection::vec(edge, 0..=6).prop_map(move |raw| {
            let mut edges: Vec<(usize, usize, Monomial)> = Vec::new();
            for (u, v, e) in raw {
                let m = Monomial::new(e);
                let (u, v, m) = if u <= v {
                    (u, v, m)
                } else {
                    (v, u, m.inverse())
                };
                let dup = edges.iter().any(|(a, b, x)| {
                    *a == u && *b == v && (*x == m || (u == v && *x == m.inverse()))
                });
                if !(u == v && m.is_one()) && !dup {
                    edges.push((u, v, m));
                }
            }
            BaseGraph {
                dim,
                n_vertices: n,
                edges,
            }
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn gauge_transformations_preserve_flux_and_spectrum((fam, pattern) in family(), gauge in any::<u64>()) {
        let signs = fam.signs(pattern);
        let g = |v: usize| if gauge >> (v % 64) & 1 == 1 { -1i8 } else { 1 };
        let moved: Vec<i8> = fam.edges.iter().zip(&signs).map(|((i, j, _), s)| s * g(*i) * g(*j)).collect();
        prop_assert_eq!(fam.signature(&moved), fam.signature(&signs));
        let l = vec![3; fam.enlarged.dim()];
        let a = spectrum_on(&fam.oriented(&signs), &l);
        let b = spectrum_on(&fam.oriented(&moved), &l);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn cover_has_one_edge_per_label_and_cell(b in base_graph()) {
        let g = abelian_cover(&b).unwrap();
        let l = vec![3; b.dim];
        let t = torus_truncate(&g, &l).unwrap();
        let ones: usize = (0..t.rows()).map(|r| t.row(r).count_ones()).sum();
        prop_assert_eq!(ones / 2, b.edges.len() * 3usize.pow(b.dim as u32));
    }

    #[test]
    fn enlarging_the_last_axis_is_a_relabelled_torus(g in compact_graph(), f in 2usize..=3) {
        let mut mult = vec![1; g.dim()];
        *mult.last_mut().unwrap() = f;
        let big = enlarge_cell(&g, &mult).unwrap();
        let small_l = vec![3; g.dim()];
        let mut l = small_l.clone();
        *l.last_mut().unwrap() = 3 * f;
        prop_assert_eq!(torus_truncate(&big, &small_l).unwrap(), torus_truncate(&g, &l).unwrap());
    }
}

#[test]
fn elementary_orientation_matches_unoriented_spectrum() {
    let mut checked = 0;
    for name in BUILTIN_NAMES {
        let g = builtin(name).unwrap();
        let Ok(cfg) = elementary_orientation(&g) else {
            continue;
        };
        let l = vec![4; g.dim()];
        let oriented = build_h(&g, &cfg, &l).unwrap().hermitian_spectrum();
        let adj = torus_truncate(&enlarge_cell(&g, &cfg.multiplier).unwrap(), &l).unwrap();
        let n = adj.rows();
        let dense = nalgebra::DMatrix::from_fn(n, n, |i, j| if adj.get(i, j) { 1.0 } else { 0.0 });
        let mut plain: Vec<f64> = dense.symmetric_eigenvalues().iter().copied().collect();
        plain.sort_by(f64::total_cmp);
        for (a, b) in oriented.iter().zip(&plain) {
            assert!((a - b).abs() < 1e-9, "{name}");
        }
        checked += 1;
    }
    assert!(checked >= 3);
}
