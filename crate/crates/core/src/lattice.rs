//! Root-graph generators: Abelian covers, cell enlargement, the built-in library and
//! orientation (flux) enumeration.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{solve_affine, BitMatrix, BitVec};
use crate::laurent::{
    torus_truncate_signed, Coeff, CompactGraph, CompactMatrix, Monomial, SignedCompact, F2,
};
use crate::linegraph::{edge_classes, line_graph};

/// Largest number of non-tree edges whose sign patterns are enumerated.
pub const MAX_NON_TREE: usize = 20;
pub const DEFAULT_MAX_MULTIPLIER: usize = 4;

/// Base graph with translation labels on its edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseGraph {
    pub dim: usize,
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize, Monomial)>,
}

impl BaseGraph {
    pub fn validate(&self) -> Result<()> {
        for (u, v, m) in &self.edges {
            if u > v {
                return Err(Error::Invariant(format!(
                    "edge ({u}, {v}) must list the smaller endpoint first"
                )));
            }
            if *v >= self.n_vertices {
                return Err(Error::Dimension(format!(
                    "edge endpoint {v} outside {} vertices",
                    self.n_vertices
                )));
            }
            if m.dim() != self.dim {
                return Err(Error::Dimension(format!(
                    "label {m} in dimension {}",
                    self.dim
                )));
            }
            if u == v && m.is_one() {
                return Err(Error::Invariant(format!(
                    "self-loop at {u} needs a non-constant label"
                )));
            }
            m.check_bound(crate::laurent::DEFAULT_EXPONENT_BOUND)?;
        }
        Ok(())
    }
}

/// Abelian cover: edge `(u, v, m)` joins `u` of cell 0 to `v` of cell `m`.
pub fn abelian_cover(b: &BaseGraph) -> Result<CompactGraph> {
    b.validate()?;
    let mut out = CompactGraph::zeros(b.dim, b.n_vertices, b.n_vertices);
    for (u, v, m) in &b.edges {
        let dup = out.get(*u, *v).coeff(m).0;
        if dup {
            return Err(Error::Multiplicity(format!("({u}, {v}, {m})")));
        }
        out.add_term(*u, *v, m.clone(), F2(true));
        out.add_term(*v, *u, m.inverse(), F2(true));
    }
    Ok(out)
}

/// Replicates the cell `∏ n_i` times; sub-cell `c` (row-major) holds vertices `c·N .. (c+1)·N`.
pub fn enlarge_cell<C: Coeff>(m: &CompactMatrix<C>, n: &[usize]) -> Result<CompactMatrix<C>> {
    if n.len() != m.dim() {
        return Err(Error::Dimension(format!(
            "{} multipliers for dimension {}",
            n.len(),
            m.dim()
        )));
    }
    if n.contains(&0) {
        return Err(Error::Invariant("cell multipliers must be positive".into()));
    }
    let subcells = crate::laurent::torus_cells(n);
    let (r, c) = (m.rows(), m.cols());
    let k = subcells.len();
    let mut out = CompactMatrix::<C>::zeros(m.dim(), k * r, k * c);
    for (si, sub) in subcells.iter().enumerate() {
        for i in 0..r {
            for j in 0..c {
                for (mono, coeff) in m.get(i, j).terms() {
                    let mut q = Vec::with_capacity(n.len());
                    let mut target = Vec::with_capacity(n.len());
                    for ((&s, &e), &side) in sub.iter().zip(mono.exponents()).zip(n) {
                        let t = s + e as i64;
                        q.push(t.div_euclid(side as i64) as i32);
                        target.push(t.rem_euclid(side as i64));
                    }
                    let tj = crate::laurent::torus_index(&target, n);
                    out.add_term(si * r + i, tj * c + j, Monomial::new(q), coeff);
                }
            }
        }
    }
    Ok(out)
}

pub const BUILTIN_NAMES: [&str; 10] = [
    "comb",
    "triangle_path",
    "square",
    "honeycomb",
    "kagome",
    "checkerboard",
    "ladder_11",
    "hourglass_20",
    "nanotube_11",
    "nanotube_20",
];

/// Built-in compact adjacency matrices.
pub fn builtin(name: &str) -> Result<CompactGraph> {
    let p = CompactGraph::parse_rows;
    let m = match name {
        "comb" => p(1, &[&["x + x^-1", "1"], &["1", "0"]])?,
        "triangle_path" => line_graph(&builtin("comb")?)?,
        "square" => p(2, &[&["x + x^-1 + y + y^-1"]])?,
        "honeycomb" => p(2, &[&["0", "1 + x + x y"], &["1 + x^-1 + x^-1 y^-1", "0"]])?,
        "kagome" => p(
            2,
            &[
                &["0", "1 + x^-1", "x^-1 + y"],
                &["1 + x", "0", "1 + y"],
                &["x + y^-1", "1 + y^-1", "0"],
            ],
        )?,
        "checkerboard" => line_graph(&builtin("square")?)?,
        "ladder_11" | "nanotube_11" => p(
            1,
            &[
                &["0", "1", "1 + x^-1", "0"],
                &["1", "0", "0", "1 + x^-1"],
                &["1 + x", "0", "0", "1"],
                &["0", "1 + x", "1", "0"],
            ],
        )?,
        "hourglass_20" | "nanotube_20" => p(
            1,
            &[
                &["0", "1", "0", "1 + x"],
                &["1", "0", "1 + x^-1", "0"],
                &["0", "1 + x", "0", "1"],
                &["1 + x^-1", "0", "1", "0"],
            ],
        )?,
        other => return Err(Error::UnknownBuiltin(other.to_string())),
    };
    Ok(m)
}

/// Signs on the edge orbits of a magnetic cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationConfig {
    pub multiplier: Vec<usize>,
    /// Keyed by [`edge_key`]; `+1` orients the edge from its first to its second endpoint.
    pub signs: BTreeMap<String, i8>,
}

pub fn edge_key(i: usize, j: usize, m: &Monomial) -> String {
    format!("{i}-{j}@{m}")
}

/// Oriented adjacency of `m` on the magnetic cell of `cfg`.
pub fn apply_orientation(m: &CompactGraph, cfg: &OrientationConfig) -> Result<SignedCompact> {
    let big = enlarge_cell(m, &cfg.multiplier)?;
    let classes = edge_classes(&big);
    let mut used = 0usize;
    let mut out = SignedCompact::zeros(big.dim(), big.rows(), big.cols());
    for (i, j, mono) in &classes {
        let key = edge_key(*i, *j, mono);
        let s = *cfg
            .signs
            .get(&key)
            .ok_or_else(|| Error::IncompleteOrientation(format!("no sign for edge {key}")))?;
        if s != 1 && s != -1 {
            return Err(Error::Invariant(format!("sign {s} on edge {key}")));
        }
        used += 1;
        out.add_term(*i, *j, mono.clone(), s as i64);
        out.add_term(*j, *i, mono.inverse(), -(s as i64));
    }
    if used != cfg.signs.len() {
        let known: BTreeSet<String> = classes
            .iter()
            .map(|(i, j, m)| edge_key(*i, *j, m))
            .collect();
        let extra = cfg
            .signs
            .keys()
            .find(|k| !known.contains(*k))
            .cloned()
            .unwrap_or_default();
        return Err(Error::Invariant(format!(
            "sign given for unknown edge {extra}"
        )));
    }
    Ok(out)
}

/// Reads signs back from an oriented matrix (inverse of [`apply_orientation`]).
pub fn orientation_from_signed(
    s: &SignedCompact,
    multiplier: Vec<usize>,
) -> Result<OrientationConfig> {
    s.validate_oriented()?;
    let support = s.support();
    let signs = edge_classes(&support)
        .into_iter()
        .map(|(i, j, m)| {
            let c = s.get(i, j).coeff(&m);
            (edge_key(i, j, &m), c as i8)
        })
        .collect();
    Ok(OrientationConfig { multiplier, signs })
}

/// All orientations of one magnetic cell, parametrised by the signs of non-tree edges.
#[derive(Debug, Clone)]
pub struct OrientationFamily {
    pub multiplier: Vec<usize>,
    pub enlarged: CompactGraph,
    pub edges: Vec<(usize, usize, Monomial)>,
    pub tree: Vec<bool>,
    pub non_tree: Vec<usize>,
    /// Fundamental cycle of each non-tree edge: `(edge index, traversed forward)` steps.
    cycles: Vec<Vec<(usize, bool)>>,
}

impl OrientationFamily {
    pub fn new(m: &CompactGraph, multiplier: &[usize]) -> Result<Self> {
        m.validate_adjacency()?;
        let enlarged = enlarge_cell(m, multiplier)?;
        let edges = edge_classes(&enlarged);
        let n = enlarged.rows();
        let mut incident: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); n];
        for (e, (i, j, _)) in edges.iter().enumerate() {
            incident[*i].push((e, *j, true));
            if i != j {
                incident[*j].push((e, *i, false));
            }
        }
        for list in &mut incident {
            list.sort_by_key(|&(e, _, _)| e);
        }
        // parent edge of each vertex: (edge, forward from parent to child)
        let mut parent: Vec<Option<(usize, usize, bool)>> = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        let mut tree = vec![false; edges.len()];
        if n > 0 {
            depth[0] = 0;
            let mut queue = VecDeque::from([0usize]);
            while let Some(u) = queue.pop_front() {
                for &(e, v, fwd) in &incident[u] {
                    if depth[v] == usize::MAX {
                        depth[v] = depth[u] + 1;
                        parent[v] = Some((e, u, fwd));
                        tree[e] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        if depth.contains(&usize::MAX) {
            return Err(Error::Invariant(format!(
                "magnetic cell {multiplier:?} has a disconnected quotient graph"
            )));
        }
        let non_tree: Vec<usize> = (0..edges.len()).filter(|&e| !tree[e]).collect();
        let up = |mut v: usize, target_depth: usize, steps: &mut Vec<(usize, bool)>| -> usize {
            while depth[v] > target_depth {
                let (e, p, fwd) = parent[v].expect("non-root");
                // walking child → parent reverses the parent → child direction
                steps.push((e, !fwd));
                v = p;
            }
            v
        };
        let cycles = non_tree
            .iter()
            .map(|&e| {
                let (i, j, _) = &edges[e];
                // i → j along e, then j back to i through the tree
                let mut steps = vec![(e, true)];
                let mut a = *j;
                let mut b = *i;
                let mut tail = Vec::new();
                let da = depth[a];
                let db = depth[b];
                if da > db {
                    a = up(a, db, &mut steps);
                } else {
                    b = up(b, da, &mut tail);
                }
                while a != b {
                    a = up(a, depth[a] - 1, &mut steps);
                    b = up(b, depth[b] - 1, &mut tail);
                }
                // tail was recorded walking i upwards; traverse it in reverse order and direction
                steps.extend(tail.into_iter().rev().map(|(e, f)| (e, !f)));
                steps
            })
            .collect();
        Ok(Self {
            multiplier: multiplier.to_vec(),
            enlarged,
            edges,
            tree,
            non_tree,
            cycles,
        })
    }

    pub fn non_tree_count(&self) -> usize {
        self.non_tree.len()
    }

    pub fn len(&self) -> u64 {
        1u64 << self.non_tree.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sign of every edge orbit; bit `b` of `pattern` reverses the `b`-th non-tree edge.
    pub fn signs(&self, pattern: u64) -> Vec<i8> {
        let mut s = vec![1i8; self.edges.len()];
        for (b, &e) in self.non_tree.iter().enumerate() {
            if pattern >> b & 1 == 1 {
                s[e] = -1;
            }
        }
        s
    }

    pub fn config(&self, pattern: u64) -> OrientationConfig {
        self.config_from_signs(&self.signs(pattern))
    }

    pub fn config_from_signs(&self, signs: &[i8]) -> OrientationConfig {
        OrientationConfig {
            multiplier: self.multiplier.clone(),
            signs: self
                .edges
                .iter()
                .zip(signs)
                .map(|((i, j, m), &s)| (edge_key(*i, *j, m), s))
                .collect(),
        }
    }

    pub fn oriented(&self, signs: &[i8]) -> SignedCompact {
        let g = &self.enlarged;
        let mut out = SignedCompact::zeros(g.dim(), g.rows(), g.cols());
        for ((i, j, m), &s) in self.edges.iter().zip(signs) {
            out.add_term(*i, *j, m.clone(), s as i64);
            out.add_term(*j, *i, m.inverse(), -(s as i64));
        }
        out
    }

    /// Loop phase exponent `q` (phase `i^q`) around each fundamental cycle: `|C| + 2τ(C) mod 4`.
    pub fn signature(&self, signs: &[i8]) -> Vec<u8> {
        self.cycles
            .iter()
            .map(|steps| {
                let reversals = steps
                    .iter()
                    .filter(|&&(e, fwd)| (signs[e] == 1) != fwd)
                    .count();
                ((steps.len() + 2 * reversals) % 4) as u8
            })
            .collect()
    }

    /// Signs of the orientation, read from a configuration on the same magnetic cell.
    pub fn signs_of(&self, cfg: &OrientationConfig) -> Result<Vec<i8>> {
        if cfg.multiplier != self.multiplier {
            return Err(Error::Dimension(format!(
                "configuration multiplier {:?} vs {:?}",
                cfg.multiplier, self.multiplier
            )));
        }
        self.edges
            .iter()
            .map(|(i, j, m)| {
                let key = edge_key(*i, *j, m);
                cfg.signs
                    .get(&key)
                    .copied()
                    .ok_or(Error::IncompleteOrientation(key))
            })
            .collect()
    }
}

/// Magnetic cell multipliers `(n_1, …, n_d)` with every `n_i ≤ max`, lexicographic.
pub fn multipliers(dim: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v| (1..=max).map(move |k| [v.clone(), vec![k]].concat()))
            .collect();
    }
    out
}

/// One family per multiplier, each checked against the non-tree limit.
pub fn orientation_families(
    m: &CompactGraph,
    max_multiplier: usize,
) -> Result<Vec<OrientationFamily>> {
    multipliers(m.dim(), max_multiplier)
        .iter()
        .map(|mult| {
            let f = OrientationFamily::new(m, mult)?;
            if f.non_tree_count() > MAX_NON_TREE {
                return Err(Error::CombinatorialBlowup {
                    count: f.non_tree_count(),
                    limit: MAX_NON_TREE,
                });
            }
            Ok(f)
        })
        .collect()
}

/// Orientation with its magnetic cell and flux signature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FluxOrientation {
    pub config: OrientationConfig,
    pub pattern: u64,
    pub signature: Vec<u8>,
}

/// Every sign pattern of every magnetic cell, deduplicated by flux signature within a cell.
pub fn enumerate_orientations(
    m: &CompactGraph,
    max_multiplier: usize,
) -> Result<Vec<FluxOrientation>> {
    let mut out = Vec::new();
    for f in orientation_families(m, max_multiplier)? {
        let mut seen = BTreeSet::new();
        for p in 0..f.len() {
            let s = f.signs(p);
            let sig = f.signature(&s);
            if seen.insert(sig.clone()) {
                out.push(FluxOrientation {
                    config: f.config_from_signs(&s),
                    pattern: p,
                    signature: sig,
                });
            }
        }
    }
    Ok(out)
}

/// Arcs from one sublattice to the other, doubling the cell along axes where the
/// two-colouring alternates between cells.
pub fn elementary_orientation(m: &CompactGraph) -> Result<OrientationConfig> {
    m.validate_adjacency()?;
    let n = m.rows();
    let d = m.dim();
    let classes = edge_classes(m);
    // unknowns: colour of each vertex, then the parity of each lattice axis
    let build = |with_axes: bool| -> (BitMatrix, BitVec) {
        let cols = n + if with_axes { d } else { 0 };
        let mut a = BitMatrix::zeros(classes.len(), cols);
        for (r, (i, j, mono)) in classes.iter().enumerate() {
            a.flip(r, *i);
            a.flip(r, *j);
            if with_axes {
                for (ax, &e) in mono.exponents().iter().enumerate() {
                    if e.rem_euclid(2) == 1 {
                        a.flip(r, n + ax);
                    }
                }
            }
        }
        let mut rhs = BitVec::zeros(classes.len());
        for r in 0..classes.len() {
            rhs.set(r, true);
        }
        (a, rhs)
    };
    let (a0, b0) = build(false);
    let solution = match solve_affine(&a0, &b0) {
        Some(x) => x.concat(&BitVec::zeros(d)),
        None => {
            let (a1, b1) = build(true);
            solve_affine(&a1, &b1)
                .ok_or_else(|| Error::NonBipartite("odd cycle in the infinite graph".into()))?
        }
    };
    let mult: Vec<usize> = (0..d)
        .map(|ax| if solution.get(n + ax) { 2 } else { 1 })
        .collect();
    let subcells = crate::laurent::torus_cells(&mult);
    let colour = |v: usize| -> bool {
        let (sub, i) = (v / n, v % n);
        let parity = subcells[sub]
            .iter()
            .enumerate()
            .filter(|(ax, &c)| solution.get(n + ax) && c % 2 == 1)
            .count();
        solution.get(i) ^ (parity % 2 == 1)
    };
    let big = enlarge_cell(m, &mult)?;
    let mut signs = BTreeMap::new();
    for (i, j, mono) in edge_classes(&big) {
        let (ci, cj) = (colour(i), colour(j));
        debug_assert_ne!(ci, cj, "edge {i}-{j} joins one colour class");
        signs.insert(edge_key(i, j, &mono), if ci { -1 } else { 1 });
    }
    Ok(OrientationConfig {
        multiplier: mult,
        signs,
    })
}

/// Cycle of a finite graph with its orientation data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleInfo {
    pub vertices: Vec<usize>,
    /// Number of arcs traversed against their direction.
    pub reversals: usize,
    /// `(-1)^{τ + ℓ}` for even cycles of length `2ℓ`; absent for odd cycles.
    pub eigenvalue: Option<i8>,
    pub oddly_oriented: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewMaxReport {
    pub cycles: Vec<CycleInfo>,
    /// Every checked even cycle is oddly oriented.
    pub holds: bool,
}

/// Orientation data of a closed walk `v_0 → v_1 → … → v_0` in an antisymmetric matrix.
pub fn cycle_info(h: &nalgebra::DMatrix<i64>, cycle: &[usize]) -> CycleInfo {
    let len = cycle.len();
    let reversals = (0..len)
        .filter(|&k| h[(cycle[k], cycle[(k + 1) % len])] < 0)
        .count();
    let eigenvalue = (len % 2 == 0).then(|| {
        if (reversals + len / 2) % 2 == 0 {
            1
        } else {
            -1
        }
    });
    CycleInfo {
        vertices: cycle.to_vec(),
        reversals,
        eigenvalue,
        oddly_oriented: reversals % 2 == 1,
    }
}

const MAX_COMPOSITE_LENGTH: usize = 12;

/// Checks "every even cycle is oddly oriented" on a cycle basis of the torus plus every
/// pairwise composite that is itself a cycle of length ≤ 12. A partial check.
pub fn check_skew_max_condition(
    m: &CompactGraph,
    cfg: &OrientationConfig,
    l: &[usize],
) -> Result<SkewMaxReport> {
    let h = torus_truncate_signed(&apply_orientation(m, cfg)?, l)?;
    let cycles = basis_and_composites(&h);
    let infos: Vec<CycleInfo> = cycles.iter().map(|c| cycle_info(&h, c)).collect();
    let holds = infos
        .iter()
        .all(|c| c.eigenvalue.is_none() || c.oddly_oriented);
    Ok(SkewMaxReport {
        cycles: infos,
        holds,
    })
}

/// Eigenvalue `±1` of each even basis or composite cycle on the torus.
pub fn cycle_eigenvalues(
    m: &CompactGraph,
    cfg: &OrientationConfig,
    l: &[usize],
) -> Result<BTreeMap<Vec<usize>, i8>> {
    let report = check_skew_max_condition(m, cfg, l)?;
    Ok(report
        .cycles
        .into_iter()
        .filter_map(|c| c.eigenvalue.map(|e| (c.vertices, e)))
        .collect())
}

fn basis_and_composites(h: &nalgebra::DMatrix<i64>) -> Vec<Vec<usize>> {
    let n = h.nrows();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|u| (0..n).filter(|&v| h[(u, v)] != 0).collect())
        .collect();
    let mut edge_id = BTreeMap::new();
    for u in 0..n {
        for &v in &adj[u] {
            if u < v {
                let k = edge_id.len();
                edge_id.insert((u, v), k);
            }
        }
    }
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut tree = BTreeSet::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = u;
                    tree.insert((u.min(v), u.max(v)));
                    queue.push_back(v);
                }
            }
        }
    }
    let path_to_root = |mut v: usize| {
        let mut p = vec![v];
        while parent[v] != usize::MAX {
            v = parent[v];
            p.push(v);
        }
        p
    };
    let edge_set = |cycle: &[usize]| -> BTreeSet<(usize, usize)> {
        (0..cycle.len())
            .map(|k| {
                let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
                (a.min(b), a.max(b))
            })
            .collect()
    };
    let mut basis: Vec<BTreeSet<(usize, usize)>> = Vec::new();
    for &(u, v) in edge_id.keys() {
        if tree.contains(&(u, v)) {
            continue;
        }
        let pu = path_to_root(u);
        let pv = path_to_root(v);
        let lca = *pu.iter().find(|x| pv.contains(x)).expect("same component");
        let mut cycle: Vec<usize> = pu.iter().take_while(|&&x| x != lca).copied().collect();
        cycle.push(lca);
        let back: Vec<usize> = pv.iter().take_while(|&&x| x != lca).copied().collect();
        cycle.extend(back.into_iter().rev());
        basis.push(edge_set(&cycle));
    }
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    for b in &basis {
        if let Some(c) = edges_to_cycle(b) {
            out.insert(c);
        }
    }
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            let sym: BTreeSet<(usize, usize)> = a.symmetric_difference(b).copied().collect();
            if sym.len() <= MAX_COMPOSITE_LENGTH {
                if let Some(c) = edges_to_cycle(&sym) {
                    out.insert(c);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Vertex sequence of an edge set forming one simple cycle, starting at its smallest vertex
/// and heading to the smaller neighbour.
fn edges_to_cycle(edges: &BTreeSet<(usize, usize)>) -> Option<Vec<usize>> {
    let mut nb: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in edges {
        nb.entry(a).or_default().push(b);
        nb.entry(b).or_default().push(a);
    }
    if nb.is_empty() || nb.values().any(|v| v.len() != 2) {
        return None;
    }
    let start = *nb.keys().next()?;
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = *nb[&start].iter().min()?;
    while cur != start {
        cycle.push(cur);
        let next = nb[&cur]
            .iter()
            .copied()
            .find(|&x| x != prev)
            .unwrap_or(prev);
        prev = cur;
        cur = next;
    }
    (cycle.len() == nb.len()).then_some(cycle)
}

/// All simple cycles of a small finite graph, each once (smallest vertex first, then the
/// smaller of its two cycle neighbours).
pub fn simple_cycles(adj: &BitMatrix) -> Vec<Vec<usize>> {
    let n = adj.rows();
    let mut out = Vec::new();
    for s in 0..n {
        let mut path = vec![s];
        let mut on = vec![false; n];
        on[s] = true;
        extend_cycles(adj, s, &mut path, &mut on, &mut out);
    }
    out
}

fn extend_cycles(
    adj: &BitMatrix,
    s: usize,
    path: &mut Vec<usize>,
    on: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let u = *path.last().expect("non-empty");
    for v in adj.row(u).ones() {
        if v == s && path.len() >= 3 && path[1] < u {
            out.push(path.clone());
        } else if v > s && !on[v] {
            on[v] = true;
            path.push(v);
            extend_cycles(adj, s, path, on, out);
            path.pop();
            on[v] = false;
        }
    }
}
