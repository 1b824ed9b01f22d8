//! Line graphs of translation-invariant graphs and their recognition.
//!
//! Recognition follows the Krausz characterisation: a graph is a line graph iff its edges
//! split into cliques with every vertex in exactly two of them. The constant block is
//! decomposed first, then cliques of cell 0 are glued to translated cliques along every
//! cross-cell block, and the glued family is validated against the whole infinite graph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::laurent::{CompactGraph, Monomial, Poly2, F2};

/// Largest unit cell accepted by the finite Krausz search.
pub const MAX_KRAUSZ_VERTICES: usize = 64;
/// Largest unit cell accepted by [`canonical_isomorphic`].
pub const MAX_ISO_VERTICES: usize = 16;
/// Largest total cell blow-up tried when resolving ambiguous decompositions.
pub const MAX_COARSENING: usize = 8;
const MAX_FINITE_SOLUTIONS: usize = 64;

/// Krausz decomposition of a finite graph. Singleton cliques stand in for the empty
/// cliques that bring every vertex up to exactly two.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteKrausz {
    pub cliques: Vec<Vec<usize>>,
    pub vertex_to_cliques: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum KrauszOutcome {
    Found {
        decomposition: FiniteKrausz,
        ambiguous: bool,
    },
    NotLineGraph {
        certificate: Vec<usize>,
        reason: String,
    },
}

fn check_simple(g: &BitMatrix) -> Result<()> {
    if !g.is_symmetric() {
        return Err(Error::Invariant(
            "finite graph adjacency is not symmetric".into(),
        ));
    }
    if let Some(v) = (0..g.rows()).find(|&v| g.get(v, v)) {
        return Err(Error::Invariant(format!("vertex {v} has a self-loop")));
    }
    Ok(())
}

/// Enumerates Krausz decompositions of a finite simple graph, at most `limit` of them.
pub fn krausz_all(g: &BitMatrix, limit: usize) -> Result<Vec<FiniteKrausz>> {
    check_simple(g)?;
    let n = g.rows();
    if n > MAX_KRAUSZ_VERTICES {
        return Err(Error::Scale(format!(
            "{n} vertices exceeds the Krausz limit {MAX_KRAUSZ_VERTICES}"
        )));
    }
    let mut search = KrauszSearch {
        g,
        uncovered: g.clone(),
        count: vec![0; n],
        cliques: Vec::new(),
        found: Vec::new(),
        limit,
    };
    search.run();
    Ok(search.found)
}

/// Finite Krausz decomposition with a non-uniqueness flag, or an obstruction certificate.
pub fn krausz_finite(g: &BitMatrix) -> Result<KrauszOutcome> {
    let mut all = krausz_all(g, 2)?;
    if all.is_empty() {
        let (certificate, reason) = match find_claw(g) {
            Some(c) => (c, "induced claw".to_string()),
            None => (
                (0..g.rows()).collect(),
                "no clique partition with every vertex in two cliques".to_string(),
            ),
        };
        return Ok(KrauszOutcome::NotLineGraph {
            certificate,
            reason,
        });
    }
    let ambiguous = all.len() > 1;
    Ok(KrauszOutcome::Found {
        decomposition: all.swap_remove(0),
        ambiguous,
    })
}

/// Centre followed by three pairwise non-adjacent neighbours.
pub fn find_claw(g: &BitMatrix) -> Option<Vec<usize>> {
    let n = g.rows();
    for c in 0..n {
        let nb: Vec<usize> = g.row(c).ones().collect();
        for (ai, &a) in nb.iter().enumerate() {
            for (bi, &b) in nb.iter().enumerate().skip(ai + 1) {
                if g.get(a, b) {
                    continue;
                }
                for &d in &nb[bi + 1..] {
                    if !g.get(a, d) && !g.get(b, d) {
                        return Some(vec![c, a, b, d]);
                    }
                }
            }
        }
    }
    None
}

struct KrauszSearch<'a> {
    g: &'a BitMatrix,
    uncovered: BitMatrix,
    count: Vec<u8>,
    cliques: Vec<Vec<usize>>,
    found: Vec<FiniteKrausz>,
    limit: usize,
}

impl KrauszSearch<'_> {
    fn first_uncovered(&self) -> Option<(usize, usize)> {
        (0..self.g.rows()).find_map(|u| {
            self.uncovered
                .row(u)
                .ones()
                .find(|&v| v > u)
                .map(|v| (u, v))
        })
    }

    fn run(&mut self) {
        if self.found.len() >= self.limit {
            return;
        }
        let Some((u, v)) = self.first_uncovered() else {
            self.found.push(self.finish());
            return;
        };
        if self.count[u] >= 2 || self.count[v] >= 2 {
            return;
        }
        let forced = |w: usize| -> Option<Vec<usize>> {
            let mut k: Vec<usize> = self.uncovered.row(w).ones().collect();
            k.push(w);
            k.sort_unstable();
            Some(k)
        };
        let candidates: Vec<Vec<usize>> = if self.count[u] == 1 {
            forced(u).into_iter().collect()
        } else if self.count[v] == 1 {
            forced(v).into_iter().collect()
        } else {
            let common: Vec<usize> = self
                .uncovered
                .row(u)
                .ones()
                .filter(|&w| w != v && self.uncovered.get(v, w))
                .collect();
            if common.len() > 20 {
                // K_n-like neighbourhoods: only the maximal choice is tractable.
                let mut k = common.clone();
                k.extend([u, v]);
                k.sort_unstable();
                vec![k]
            } else {
                let mut out = Vec::new();
                for mask in 0u32..(1 << common.len()) {
                    let mut k: Vec<usize> = (0..common.len())
                        .filter(|&i| mask >> i & 1 == 1)
                        .map(|i| common[i])
                        .collect();
                    k.extend([u, v]);
                    k.sort_unstable();
                    out.push(k);
                }
                out
            }
        };
        for k in candidates {
            if !self.is_uncovered_clique(&k) || k.iter().any(|&w| self.count[w] >= 2) {
                continue;
            }
            self.apply(&k, true);
            if k.iter()
                .all(|&w| self.count[w] < 2 || self.uncovered.row(w).is_zero())
            {
                self.cliques.push(k.clone());
                self.run();
                self.cliques.pop();
            }
            self.apply(&k, false);
            if self.found.len() >= self.limit {
                return;
            }
        }
    }

    fn is_uncovered_clique(&self, k: &[usize]) -> bool {
        k.iter()
            .enumerate()
            .all(|(i, &a)| k[i + 1..].iter().all(|&b| self.uncovered.get(a, b)))
    }

    fn apply(&mut self, k: &[usize], cover: bool) {
        for (i, &a) in k.iter().enumerate() {
            for &b in &k[i + 1..] {
                self.uncovered.set(a, b, !cover);
                self.uncovered.set(b, a, !cover);
            }
            if cover {
                self.count[a] += 1;
            } else {
                self.count[a] -= 1;
            }
        }
    }

    fn finish(&self) -> FiniteKrausz {
        let n = self.g.rows();
        let mut cliques = self.cliques.clone();
        cliques.sort();
        let mut memb: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (id, k) in cliques.iter().enumerate() {
            for &v in k {
                memb[v].push(id);
            }
        }
        for v in 0..n {
            while memb[v].len() < 2 {
                memb[v].push(cliques.len());
                cliques.push(vec![v]);
            }
        }
        FiniteKrausz {
            cliques,
            vertex_to_cliques: memb.into_iter().map(|m| [m[0], m[1]]).collect(),
        }
    }
}

/// Clique of the infinite graph: members `(vertex, cell)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clique {
    pub id: usize,
    pub members: Vec<(usize, Monomial)>,
}

/// Krausz decomposition of a translation-invariant graph, one clique per orbit. Vertex `p` of
/// cell 0 lies in clique `c` translated by `t` for both entries `(c, t)` of its list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KrauszDecomposition {
    pub cliques: Vec<Clique>,
    pub vertex_to_cliques: Vec<[(usize, Monomial); 2]>,
}

/// Root endpoints of frustration vertex `vertex` of cell 0; other cells follow by translation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiEntry {
    pub vertex: usize,
    pub ends: [(usize, Monomial); 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootGraphResult {
    pub root: CompactGraph,
    pub phi: Vec<PhiEntry>,
    pub decomposition: KrauszDecomposition,
    /// Cell multiplier applied to the input before recognition (all ones when none was needed).
    pub coarsening: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Recognition {
    LineGraph(Box<RootGraphResult>),
    NotLineGraph { obstruction: String },
    AmbiguousAfterCoarsening { reason: String },
}

impl Recognition {
    pub fn root(&self) -> Option<&RootGraphResult> {
        match self {
            Recognition::LineGraph(r) => Some(r),
            _ => None,
        }
    }
}

/// Recognises a translation-invariant line graph and reconstructs its root.
pub fn recognize(a: &CompactGraph) -> Result<Recognition> {
    a.validate_adjacency()?;
    let ones = vec![1; a.dim()];
    let first = recognize_cell(a)?;
    let successes = match first {
        CellOutcome::Unique(r) => return Ok(Recognition::LineGraph(Box::new(finish(r, ones)))),
        CellOutcome::Failed(obstruction) => return Ok(Recognition::NotLineGraph { obstruction }),
        CellOutcome::Disagree(s) => s,
    };
    if a.dim() == 0 {
        return Ok(Recognition::AmbiguousAfterCoarsening {
            reason: format!("{} inequivalent roots for a finite graph", successes.len()),
        });
    }
    let mut mult = ones;
    let mut axis = 0;
    loop {
        mult[axis] *= 2;
        axis = (axis + 1) % a.dim();
        if mult.iter().product::<usize>() > MAX_COARSENING {
            return Ok(Recognition::AmbiguousAfterCoarsening {
                reason: format!("roots still disagree at total blow-up {MAX_COARSENING}"),
            });
        }
        let big = crate::lattice::enlarge_cell(a, &mult)?;
        match recognize_cell(&big)? {
            CellOutcome::Unique(r) => return Ok(Recognition::LineGraph(Box::new(finish(r, mult)))),
            CellOutcome::Failed(obstruction) => {
                return Ok(Recognition::NotLineGraph { obstruction })
            }
            CellOutcome::Disagree(_) => {}
        }
    }
}

fn finish(mut r: RootGraphResult, mult: Vec<usize>) -> RootGraphResult {
    r.coarsening = mult;
    r
}

enum CellOutcome {
    Unique(RootGraphResult),
    Failed(String),
    Disagree(Vec<RootGraphResult>),
}

fn recognize_cell(a: &CompactGraph) -> Result<CellOutcome> {
    let n = a.rows();
    let one = Monomial::one(a.dim());
    let mut constant = BitMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            constant.set(i, j, a.get(i, j).coeff(&one).0);
        }
    }
    let decomps = krausz_all(&constant, MAX_FINITE_SOLUTIONS)?;
    if decomps.is_empty() {
        let why = match find_claw(&constant) {
            Some(c) => format!("constant block has an induced claw on vertices {c:?}"),
            None => "constant block admits no Krausz decomposition".to_string(),
        };
        return Ok(CellOutcome::Failed(why));
    }
    let mut successes: Vec<RootGraphResult> = Vec::new();
    let mut last_failure = String::new();
    for d in &decomps {
        match glue(a, d) {
            Ok(r) => successes.push(r),
            Err(why) => last_failure = why,
        }
    }
    if successes.is_empty() {
        return Ok(CellOutcome::Failed(last_failure));
    }
    let first = &successes[0].root;
    let mut agree = true;
    for s in &successes[1..] {
        if !canonical_isomorphic(first, &s.root).unwrap_or(false) {
            agree = false;
            break;
        }
    }
    if agree {
        Ok(CellOutcome::Unique(successes.swap_remove(0)))
    } else {
        Ok(CellOutcome::Disagree(successes))
    }
}

/// Union-find over cell-0 cliques; `pos(K)` is the translation of the infinite clique
/// whose cell-0 part is `K`.
#[derive(Clone)]
struct OffsetUnionFind {
    parent: Vec<usize>,
    offset: Vec<Monomial>,
}

impl OffsetUnionFind {
    fn new(n: usize, dim: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            offset: vec![Monomial::one(dim); n],
        }
    }

    /// Root and `pos(k) - pos(root)`.
    fn find(&self, mut k: usize) -> (usize, Monomial) {
        let mut acc = self.offset[k].clone();
        while self.parent[k] != k {
            k = self.parent[k];
            acc = acc.times(&self.offset[k]);
        }
        (k, acc)
    }

    /// Imposes `pos(x) - pos(y) = m`; false on contradiction.
    fn union(&mut self, x: usize, y: usize, m: &Monomial) -> bool {
        let (rx, ox) = self.find(x);
        let (ry, oy) = self.find(y);
        if rx == ry {
            return ox.divide(&oy) == *m;
        }
        self.parent[ry] = rx;
        self.offset[ry] = ox.divide(&oy).divide(m);
        true
    }
}

type CrossEdge = (usize, usize, Monomial);

struct Glue<'a> {
    a: &'a CompactGraph,
    d: &'a FiniteKrausz,
    edges: Vec<CrossEdge>,
    index: BTreeMap<CrossEdge, usize>,
    covered: Vec<bool>,
    failure: String,
    steps: usize,
}

const MAX_GLUE_STEPS: usize = 200_000;

fn glue(a: &CompactGraph, d: &FiniteKrausz) -> std::result::Result<RootGraphResult, String> {
    let mut edges = Vec::new();
    for m in a.monomials().into_iter().filter(Monomial::is_positive) {
        for p in 0..a.rows() {
            for q in 0..a.rows() {
                if a.get(p, q).coeff(&m).0 {
                    edges.push((p, q, m.clone()));
                }
            }
        }
    }
    let index = edges
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    let covered = vec![false; edges.len()];
    let mut g = Glue {
        a,
        d,
        edges,
        index,
        covered,
        failure: String::new(),
        steps: 0,
    };
    let uf = OffsetUnionFind::new(d.cliques.len(), a.dim());
    match g.search(uf) {
        Some(r) => Ok(r),
        None if g.failure.is_empty() => {
            Err("cliques cannot be glued consistently across cells".into())
        }
        None => Err(g.failure),
    }
}

impl Glue<'_> {
    fn search(&mut self, uf: OffsetUnionFind) -> Option<RootGraphResult> {
        self.steps += 1;
        if self.steps > MAX_GLUE_STEPS {
            self.failure = "clique gluing search exhausted its step budget".into();
            return None;
        }
        let Some(e) = self.covered.iter().position(|c| !c) else {
            return match validate_and_build(self.a, self.d, &uf) {
                Ok(r) => Some(r),
                Err(why) => {
                    self.failure = why;
                    None
                }
            };
        };
        let (p, q, m) = self.edges[e].clone();
        let mut any_shape = false;
        for &x in &self.d.vertex_to_cliques[p] {
            for &y in &self.d.vertex_to_cliques[q] {
                let mut ids = Vec::new();
                let mut ok = true;
                'outer: for &u in &self.d.cliques[x] {
                    for &w in &self.d.cliques[y] {
                        match self.index.get(&(u, w, m.clone())) {
                            Some(&i) if !self.covered[i] => ids.push(i),
                            _ => {
                                ok = false;
                                break 'outer;
                            }
                        }
                    }
                }
                if !ok {
                    continue;
                }
                any_shape = true;
                let mut next = uf.clone();
                if !next.union(x, y, &m) {
                    self.failure = format!(
                        "clique of vertex {p} would be identified with its own translate by {m}"
                    );
                    continue;
                }
                for &i in &ids {
                    self.covered[i] = true;
                }
                let r = self.search(next);
                for &i in &ids {
                    self.covered[i] = false;
                }
                if r.is_some() {
                    return r;
                }
            }
        }
        if !any_shape {
            self.failure = format!(
                "edge {p}@1 -- {q}@{m} is not part of a complete bipartite block between cell-0 cliques"
            );
        }
        None
    }
}

fn validate_and_build(
    a: &CompactGraph,
    d: &FiniteKrausz,
    uf: &OffsetUnionFind,
) -> std::result::Result<RootGraphResult, String> {
    let dim = a.dim();
    let n = a.rows();
    // Infinite cliques keyed by union-find root, members normalised to translation 0.
    let mut classes: BTreeMap<usize, BTreeSet<(usize, Monomial)>> = BTreeMap::new();
    for (k, members) in d.cliques.iter().enumerate() {
        let (r, pos) = uf.find(k);
        let set = classes.entry(r).or_default();
        for &p in members {
            if !set.insert((p, pos.inverse())) {
                return Err(format!("vertex {p} appears twice in one glued clique"));
            }
        }
    }
    for members in classes.values() {
        let v: Vec<_> = members.iter().collect();
        for (i, (p, op)) in v.iter().enumerate() {
            for (q, oq) in &v[i + 1..] {
                if !a.get(*p, *q).coeff(&oq.divide(op)).0 {
                    return Err(format!(
                        "glued clique contains non-adjacent vertices {p}@{op} and {q}@{oq}"
                    ));
                }
            }
        }
    }
    let place = |p: usize| -> [(usize, Monomial); 2] {
        let [k1, k2] = d.vertex_to_cliques[p];
        let (r1, o1) = uf.find(k1);
        let (r2, o2) = uf.find(k2);
        [(r1, o1), (r2, o2)]
    };
    for p in 0..n {
        let [c1, c2] = place(p);
        if c1 == c2 {
            return Err(format!("both cliques of vertex {p} coincide"));
        }
    }
    for p in 0..n {
        for q in 0..n {
            for (m, _) in a.get(p, q).terms() {
                let cp = place(p);
                let cq = place(q).map(|(r, o)| (r, o.times(m)));
                let shared = cp.iter().filter(|c| cq.contains(c)).count();
                if shared != 1 {
                    return Err(format!("edge {p} -- {q}@{m} lies in {shared} cliques"));
                }
            }
        }
    }
    // Root vertices: classes normalised so the smallest member sits in cell 0.
    let mut normalised: Vec<(Vec<(usize, Monomial)>, usize, Monomial)> = classes
        .iter()
        .map(|(&r, members)| {
            let (_, m0) = members.iter().next().expect("non-empty clique").clone();
            let shifted: Vec<_> = members.iter().map(|(p, o)| (*p, o.divide(&m0))).collect();
            (shifted, r, m0)
        })
        .collect();
    normalised.sort();
    let mut root_index: BTreeMap<usize, (usize, Monomial)> = BTreeMap::new();
    for (idx, (_, r, m0)) in normalised.iter().enumerate() {
        root_index.insert(*r, (idx, m0.clone()));
    }
    // Vertex p@0 lies in clique Ĉ translated by pos, i.e. root vertex (idx, pos + m0).
    let root_place = |p: usize| -> [(usize, Monomial); 2] {
        place(p).map(|(r, pos)| {
            let (idx, m0) = &root_index[&r];
            (*idx, pos.times(m0))
        })
    };
    let nr = normalised.len();
    let mut root = CompactGraph::zeros(dim, nr, nr);
    for p in 0..n {
        let [(ia, ta), (ib, tb)] = root_place(p);
        let mab = tb.divide(&ta);
        if root.get(ia, ib).coeff(&mab).0 {
            return Err(format!("vertex {p} duplicates a root edge"));
        }
        root.add_term(ia, ib, mab.clone(), F2(true));
        root.add_term(ib, ia, mab.inverse(), F2(true));
    }
    // Gauge shifts so that breadth-first tree edges carry the constant monomial.
    let shifts = tree_gauge(&root);
    let ident: Vec<usize> = (0..nr).collect();
    let root = root.relabel(&ident, &shifts);
    let phi = (0..n)
        .map(|p| {
            let ends = root_place(p).map(|(i, t)| (i, t.times(&shifts[i])));
            PhiEntry { vertex: p, ends }
        })
        .collect();
    let cliques = normalised
        .iter()
        .enumerate()
        .map(|(id, (members, _, _))| Clique {
            id,
            members: members
                .iter()
                .map(|(p, o)| (*p, o.times(&shifts[id].inverse())))
                .collect(),
        })
        .collect();
    let vertex_to_cliques = (0..n)
        .map(|p| root_place(p).map(|(i, t)| (i, t.times(&shifts[i]))))
        .collect();
    Ok(RootGraphResult {
        root,
        phi,
        decomposition: KrauszDecomposition {
            cliques,
            vertex_to_cliques,
        },
        coarsening: vec![1; dim],
    })
}

/// Per-vertex cell shifts that make breadth-first spanning-tree edges constant.
fn tree_gauge(g: &CompactGraph) -> Vec<Monomial> {
    let n = g.rows();
    let dim = g.dim();
    let mut shift: Vec<Option<Monomial>> = vec![None; n];
    for start in 0..n {
        if shift[start].is_some() {
            continue;
        }
        shift[start] = Some(Monomial::one(dim));
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let su = shift[u].clone().expect("visited");
            for v in 0..n {
                if shift[v].is_some() {
                    continue;
                }
                if let Some(m) = g.get(u, v).min_monomial() {
                    // m + s_v - s_u = 0
                    shift[v] = Some(su.divide(m));
                    queue.push_back(v);
                }
            }
        }
    }
    shift.into_iter().map(|s| s.expect("all visited")).collect()
}

/// Edge orbits `(i, j, m)` with `i < j`, or `i == j` and `m` positive, sorted.
pub fn edge_classes(r: &CompactGraph) -> Vec<(usize, usize, Monomial)> {
    let mut out = Vec::new();
    for i in 0..r.rows() {
        for j in i..r.cols() {
            for m in r.get(i, j).monomials() {
                if i < j || m.is_positive() {
                    out.push((i, j, m.clone()));
                }
            }
        }
    }
    out
}

/// Line graph: one vertex per edge orbit of `r`, ordered as in [`edge_classes`].
pub fn line_graph(r: &CompactGraph) -> Result<CompactGraph> {
    r.validate_adjacency()?;
    let dim = r.dim();
    let classes = edge_classes(r);
    let ends = |e: &(usize, usize, Monomial)| [(e.0, Monomial::one(dim)), (e.1, e.2.clone())];
    let n = classes.len();
    let mut out = CompactGraph::zeros(dim, n, n);
    for (a, ea) in classes.iter().enumerate() {
        for (b, eb) in classes.iter().enumerate() {
            let mut entry = Poly2::zero(dim);
            for (va, oa) in ends(ea) {
                for (vb, ob) in ends(eb) {
                    if va != vb {
                        continue;
                    }
                    let t = oa.divide(&ob);
                    if a == b && t.is_one() {
                        continue;
                    }
                    entry.set_coeff(t, F2(true));
                }
            }
            out.set(a, b, entry);
        }
    }
    Ok(out)
}

/// Whether two graphs agree up to vertex relabelling and per-vertex shifts of cell origin.
pub fn canonical_isomorphic(a: &CompactGraph, b: &CompactGraph) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!(
            "dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let n = a.rows();
    if n > MAX_ISO_VERTICES || b.rows() > MAX_ISO_VERTICES {
        return Err(Error::Scale(format!(
            "unit cell above {MAX_ISO_VERTICES} vertices"
        )));
    }
    if n != b.rows() || !a.is_square() || !b.is_square() {
        return Ok(false);
    }
    let profile = |g: &CompactGraph, v: usize| -> (usize, usize, Poly2) {
        let deg: usize = (0..n).map(|j| g.get(v, j).len()).sum();
        let nonzero = (0..n).filter(|&j| !g.get(v, j).is_zero()).count();
        (deg, nonzero, g.get(v, v).clone())
    };
    let pa: Vec<_> = (0..n).map(|v| profile(a, v)).collect();
    let pb: Vec<_> = (0..n).map(|v| profile(b, v)).collect();
    let mut sa = pa.clone();
    let mut sb = pb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return Ok(false);
    }
    // Breadth-first order over the quotient so each new vertex has an assigned neighbour.
    let mut order = Vec::with_capacity(n);
    let mut anchor: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for v in 0..n {
                if !seen[v] && !a.get(u, v).is_zero() {
                    seen[v] = true;
                    anchor[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
    }
    let mut iso = IsoSearch {
        a,
        b,
        pa,
        pb,
        order,
        anchor,
        perm: vec![usize::MAX; n],
        shift: vec![Monomial::one(a.dim()); n],
        used: vec![false; n],
    };
    Ok(iso.search(0))
}

struct IsoSearch<'a> {
    a: &'a CompactGraph,
    b: &'a CompactGraph,
    pa: Vec<(usize, usize, Poly2)>,
    pb: Vec<(usize, usize, Poly2)>,
    order: Vec<usize>,
    anchor: Vec<Option<usize>>,
    perm: Vec<usize>,
    shift: Vec<Monomial>,
    used: Vec<bool>,
}

impl IsoSearch<'_> {
    fn search(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        for c in 0..self.b.rows() {
            if self.used[c] || self.pa[v] != self.pb[c] {
                continue;
            }
            let s = match self.anchor[v] {
                None => Monomial::one(self.a.dim()),
                Some(u) => {
                    let (Some(mb), Some(ma)) = (
                        self.b.get(self.perm[u], c).min_monomial(),
                        self.a.get(u, v).min_monomial(),
                    ) else {
                        continue;
                    };
                    // B[πu][πv] = A[u][v] shifted by s_v - s_u
                    self.shift[u].times(&mb.divide(ma))
                }
            };
            self.perm[v] = c;
            self.shift[v] = s;
            let consistent = self.order[..=depth].iter().all(|&w| {
                let d = self.shift[v].divide(&self.shift[w]);
                *self.b.get(self.perm[w], c) == self.a.get(w, v).shift(&d)
                    && *self.b.get(c, self.perm[w]) == self.a.get(v, w).shift(&d.inverse())
            });
            if consistent {
                self.used[c] = true;
                if self.search(depth + 1) {
                    return true;
                }
                self.used[c] = false;
            }
        }
        self.perm[v] = usize::MAX;
        false
    }
}
