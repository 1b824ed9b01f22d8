//! Independent oracles and generators shared by the integration and acceptance tests.
#![allow(dead_code)]

use ffsc::codes::{CompactHamiltonian, Factor};
use ffsc::gf2::BitMatrix;
use ffsc::laurent::{CompactGraph, Monomial, F2};
use ffsc::pauli::{symplectic_form, Pauli, PauliTerm};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

pub fn non_identity() -> impl Strategy<Value = Pauli> {
    prop_oneof![Just(Pauli::X), Just(Pauli::Y), Just(Pauli::Z)]
}

pub fn any_pauli() -> impl Strategy<Value = Pauli> {
    prop_oneof![
        Just(Pauli::I),
        Just(Pauli::X),
        Just(Pauli::Y),
        Just(Pauli::Z)
    ]
}

pub fn pauli_term(n: usize) -> impl Strategy<Value = PauliTerm> {
    prop::collection::vec(any_pauli(), n).prop_map(move |ps| {
        let mut t = PauliTerm::identity(n);
        for (q, p) in ps.into_iter().enumerate() {
            t.set(q, p);
        }
        t
    })
}

/// Random term classes: dimension 1 or 2, up to 3 qubits per cell and 4 classes, offsets in {-1, 0, 1}.
pub fn compact_hamiltonian() -> impl Strategy<Value = CompactHamiltonian> {
    (1usize..=2, 1usize..=3, 1usize..=4).prop_flat_map(|(dim, m, t)| {
        let factor = (0..m, prop::collection::vec(-1i32..=1, dim), non_identity());
        let term = prop::collection::vec(factor, 1..=3);
        prop::collection::vec(term, t).prop_map(move |raw| {
            let terms = raw
                .into_iter()
                .map(|fs| {
                    let mut out: Vec<Factor> = Vec::new();
                    for (q, cell, p) in fs {
                        if !out.iter().any(|f| f.q == q && f.cell == cell) {
                            out.push(Factor { q, cell, p });
                        }
                    }
                    out
                })
                .collect();
            CompactHamiltonian::new(dim, m, terms).expect("generated classes are valid")
        })
    })
}

/// Random symmetric compact adjacency without a constant diagonal.
pub fn compact_graph() -> impl Strategy<Value = CompactGraph> {
    (1usize..=2, 1usize..=3).prop_flat_map(|(dim, n)| {
        let entry = (0..n, 0..n, prop::collection::vec(-1i32..=1, dim));
        prop::collection::vec(entry, 0..=6).prop_map(move |raw| {
            let mut g = CompactGraph::zeros(dim, n, n);
            for (i, j, e) in raw {
                let m = Monomial::new(e);
                if i == j && m.is_one() {
                    continue;
                }
                if g.get(i, j).coeff(&m) == F2(false) {
                    g.add_term(i, j, m.clone(), F2(true));
                    if !(i == j && m == m.inverse()) {
                        g.add_term(j, i, m.inverse(), F2(true));
                    }
                }
            }
            g
        })
    })
}

/// Pairwise anticommutation of explicit operators.
pub fn commutation_matrix(terms: &[PauliTerm]) -> BitMatrix {
    let n = terms.len();
    let mut a = BitMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a.set(i, j, symplectic_form(&terms[i], &terms[j]).unwrap());
        }
    }
    a
}

/// Dense `2^n × 2^n` sum of the terms with unit coefficients; qubit `q` is bit `q` of the index.
pub fn dense_hamiltonian(terms: &[PauliTerm]) -> DMatrix<Complex64> {
    let n = terms.first().map_or(0, PauliTerm::n_qubits);
    let dim = 1usize << n;
    let mut h = DMatrix::zeros(dim, dim);
    for t in terms {
        for b in 0..dim {
            let mut phase = Complex64::new(1.0, 0.0);
            let mut out = b;
            for q in 0..n {
                let bit = (b >> q) & 1;
                let sign = if bit == 1 { -1.0 } else { 1.0 };
                match t.get(q) {
                    Pauli::I => {}
                    Pauli::X => out ^= 1 << q,
                    Pauli::Z => phase *= sign,
                    Pauli::Y => {
                        out ^= 1 << q;
                        phase *= Complex64::new(0.0, sign);
                    }
                }
            }
            h[(out, b)] += phase;
        }
    }
    h
}

pub fn sorted_eigenvalues(h: DMatrix<Complex64>) -> Vec<f64> {
    let mut e: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Open XY chain: `X_i X_{i+1}` and `Y_i Y_{i+1}`.
pub fn xy_chain(n: usize) -> Vec<PauliTerm> {
    let mut out = Vec::new();
    for i in 0..n - 1 {
        for p in [Pauli::X, Pauli::Y] {
            out.push(PauliTerm::from_sparse(n, &[(i, p), (i + 1, p)]).unwrap());
        }
    }
    out
}

pub fn cycle_edges(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .map(|i| (i.min((i + 1) % n), i.max((i + 1) % n)))
        .collect()
}

pub fn complete_edges(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

pub fn cube_edges() -> Vec<(usize, usize)> {
    (0..8usize)
        .flat_map(|u| (0..3).map(move |b| (u, u ^ (1 << b))))
        .filter(|(u, v)| u < v)
        .collect()
}

/// Antisymmetric matrix with `h[u][v] = s` for edge `(u, v)` with sign `s`.
pub fn oriented_matrix(n: usize, edges: &[(usize, usize)], signs: &[i64]) -> DMatrix<i64> {
    let mut h = DMatrix::zeros(n, n);
    for (&(u, v), &s) in edges.iter().zip(signs) {
        h[(u, v)] = s;
        h[(v, u)] = -s;
    }
    h
}

/// Sum of singular values.
pub fn skew_energy(h: &DMatrix<i64>) -> f64 {
    h.map(|v| v as f64).singular_values().iter().sum()
}

/// Simple cycles as traversals `(edge index, traversed from u to v)`, found by brute force over
/// edge subsets in which every vertex has degree 0 or 2 and the edges are connected.
pub fn cycles_by_subsets(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<(usize, bool)>> {
    assert!(edges.len() <= 16);
    let mut out = Vec::new();
    for mask in 1u32..1 << edges.len() {
        let chosen: Vec<usize> = (0..edges.len()).filter(|&e| mask >> e & 1 == 1).collect();
        let mut deg = vec![0; n];
        for &e in &chosen {
            deg[edges[e].0] += 1;
            deg[edges[e].1] += 1;
        }
        if deg.iter().any(|&d| d != 0 && d != 2) {
            continue;
        }
        let start = edges[chosen[0]].0;
        let mut walk = Vec::new();
        let mut at = start;
        let mut used = vec![false; edges.len()];
        while let Some(&e) = chosen
            .iter()
            .find(|&&e| !used[e] && (edges[e].0 == at || edges[e].1 == at))
        {
            used[e] = true;
            let forward = edges[e].0 == at;
            at = if forward { edges[e].1 } else { edges[e].0 };
            walk.push((e, forward));
            if at == start {
                break;
            }
        }
        if walk.len() == chosen.len() {
            out.push(walk);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremOutcome {
    pub orientations: usize,
    /// Orientations in which every even cycle is oddly oriented.
    pub qualifying: usize,
    pub max_energy: f64,
    /// Largest shortfall of a qualifying orientation below the maximum.
    pub worst_shortfall: f64,
}

pub fn orientation_theorem(n: usize, edges: &[(usize, usize)]) -> TheoremOutcome {
    let even: Vec<_> = cycles_by_subsets(n, edges)
        .into_iter()
        .filter(|c| c.len() % 2 == 0)
        .collect();
    let total = 1usize << edges.len();
    let mut energies = Vec::with_capacity(total);
    let mut qualifies = Vec::with_capacity(total);
    for pattern in 0..total {
        let signs: Vec<i64> = (0..edges.len())
            .map(|e| if pattern >> e & 1 == 1 { -1 } else { 1 })
            .collect();
        energies.push(skew_energy(&oriented_matrix(n, edges, &signs)));
        qualifies.push(
            even.iter()
                .all(|c| c.iter().filter(|&&(e, fwd)| fwd == (signs[e] == 1)).count() % 2 == 1),
        );
    }
    let max_energy = energies.iter().copied().fold(f64::MIN, f64::max);
    let worst_shortfall = energies
        .iter()
        .zip(&qualifies)
        .filter(|(_, &q)| q)
        .map(|(e, _)| max_energy - e)
        .fold(0.0, f64::max);
    TheoremOutcome {
        orientations: total,
        qualifying: qualifies.iter().filter(|&&q| q).count(),
        max_energy,
        worst_shortfall,
    }
}
