//! Translation-invariant spin Hamiltonians: bosonizations of frustration and root graphs,
//! torus instantiation and the logical-operator analysis of the resulting subsystem codes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{intersection, kernel, BitMatrix, BitVec};
use crate::laurent::{
    check_admissible, compact_frustration, torus_cells, torus_index, CompactGraph, Monomial, F2,
};
use crate::linegraph::{canonical_isomorphic, edge_classes, line_graph};
use crate::pauli::{symplectic_dot, Pauli, PauliTerm};

/// Largest qubit count handled by [`centralizer`].
pub const MAX_QUBITS: usize = 512;

/// Pauli `p` on qubit `q` of the cell displaced by `cell` from the term's anchor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Factor {
    pub q: usize,
    pub cell: Vec<i32>,
    pub p: Pauli,
}

impl Factor {
    pub fn new(q: usize, cell: &Monomial, p: Pauli) -> Self {
        Self {
            q,
            cell: cell.exponents().to_vec(),
            p,
        }
    }

    pub fn offset(&self) -> Monomial {
        Monomial::new(self.cell.clone())
    }
}

/// Term classes; each class stands for all its lattice translates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactHamiltonian {
    pub dim: usize,
    pub qubits_per_cell: usize,
    pub terms: Vec<Vec<Factor>>,
}

impl CompactHamiltonian {
    pub fn new(dim: usize, qubits_per_cell: usize, terms: Vec<Vec<Factor>>) -> Result<Self> {
        let h = Self {
            dim,
            qubits_per_cell,
            terms,
        };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<()> {
        if self.qubits_per_cell == 0 && !self.is_degenerate() {
            return Err(Error::Invariant(
                "terms act on qubits but the cell has none".into(),
            ));
        }
        for (i, t) in self.terms.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for f in t {
                if f.q >= self.qubits_per_cell {
                    return Err(Error::Dimension(format!(
                        "term {i}: qubit {} of {}",
                        f.q, self.qubits_per_cell
                    )));
                }
                if f.cell.len() != self.dim {
                    return Err(Error::Dimension(format!(
                        "term {i}: offset {:?} in dimension {}",
                        f.cell, self.dim
                    )));
                }
                if !seen.insert((f.q, f.cell.clone())) {
                    return Err(Error::Invariant(format!(
                        "term {i} acts twice on qubit {} at {:?}",
                        f.q, f.cell
                    )));
                }
            }
        }
        Ok(())
    }

    /// Every term is the identity.
    pub fn is_degenerate(&self) -> bool {
        self.terms.iter().all(|t| t.iter().all(|f| f.p == Pauli::I))
    }

    /// Compact bosonization matrix: row per term class, three 3-tuple columns per qubit.
    pub fn compile(&self) -> Result<CompactGraph> {
        self.validate()?;
        let mut b = CompactGraph::zeros(self.dim, self.terms.len(), 3 * self.qubits_per_cell);
        for (i, t) in self.terms.iter().enumerate() {
            for f in t {
                let g = f.p.to_tuple3();
                for bit in 0..3 {
                    if g >> (2 - bit) & 1 == 1 {
                        b.add_term(i, 3 * f.q + bit, f.offset(), F2(true));
                    }
                }
            }
        }
        Ok(b)
    }

    pub fn frustration(&self) -> Result<CompactGraph> {
        compact_frustration(&self.compile()?)
    }

    /// Exchanges X and Z on every factor.
    pub fn flip_xz(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                t.iter()
                    .map(|f| Factor {
                        p: f.p.flip_xz(),
                        ..f.clone()
                    })
                    .collect()
            })
            .collect();
        Self {
            terms,
            ..self.clone()
        }
    }

    /// Concatenates term lists over a shared qubit layout.
    pub fn union(parts: &[&CompactHamiltonian]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Invariant("empty union".into()))?;
        if let Some(p) = parts
            .iter()
            .find(|p| p.dim != first.dim || p.qubits_per_cell != first.qubits_per_cell)
        {
            return Err(Error::Dimension(format!(
                "qubit layout {}x{} vs {}x{}",
                p.dim, p.qubits_per_cell, first.dim, first.qubits_per_cell
            )));
        }
        Self::new(
            first.dim,
            first.qubits_per_cell,
            parts.iter().flat_map(|p| p.terms.clone()).collect(),
        )
    }

    fn max_abs_offsets(&self) -> Vec<i32> {
        (0..self.dim)
            .map(|a| {
                self.terms
                    .iter()
                    .flatten()
                    .map(|f| f.cell[a].abs())
                    .max()
                    .unwrap_or(0)
            })
            .collect()
    }
}

/// One qubit per edge class of the frustration graph: the term of vertex `v` has `X` on
/// edges where `v` is the first endpoint and `Z` where it is the second.
pub fn fiducial_bosonization(a: &CompactGraph) -> Result<CompactHamiltonian> {
    a.validate_adjacency()?;
    let edges = edge_classes(a);
    let mut terms = vec![Vec::new(); a.rows()];
    for (q, (i, j, m)) in edges.iter().enumerate() {
        terms[*i].push(Factor::new(q, &Monomial::one(a.dim()), Pauli::X));
        terms[*j].push(Factor::new(q, &m.inverse(), Pauli::Z));
    }
    for t in &mut terms {
        t.sort();
    }
    let h = CompactHamiltonian::new(a.dim(), edges.len(), terms)?;
    if !h.is_degenerate() && h.frustration()? != *a {
        return Err(Error::Invariant(
            "fiducial bosonization does not reproduce its frustration graph".into(),
        ));
    }
    Ok(h)
}

/// Pauli labels `(at the first end, at the second end)` per edge key `"i-j@m"`.
pub type EdgeLabels = BTreeMap<String, (Pauli, Pauli)>;

/// One qubit per root vertex; edge `(i, j, m)` becomes `P ⊗ Q` on qubit `i` and qubit `j` of cell `m`.
/// Unlabelled ends take the first free label of `X, Y, Z` at their vertex, in edge order.
pub fn honeycomb_bosonization(r: &CompactGraph, labels: &EdgeLabels) -> Result<CompactHamiltonian> {
    r.validate_adjacency()?;
    if let Some(v) = r.degrees().iter().position(|&d| d > 3) {
        return Err(Error::Applicability(format!(
            "vertex {v} has degree {}",
            r.degrees()[v]
        )));
    }
    let edges = edge_classes(r);
    let keys: BTreeSet<String> = edges
        .iter()
        .map(|(i, j, m)| crate::lattice::edge_key(*i, *j, m))
        .collect();
    if let Some(k) = labels.keys().find(|k| !keys.contains(*k)) {
        return Err(Error::Assignment(format!("label for unknown edge {k}")));
    }
    let mut used: Vec<BTreeSet<Pauli>> = vec![BTreeSet::new(); r.rows()];
    let mut ends: Vec<[Option<Pauli>; 2]> = vec![[None, None]; edges.len()];
    for (e, (i, j, m)) in edges.iter().enumerate() {
        if let Some(&(p, q)) = labels.get(&crate::lattice::edge_key(*i, *j, m)) {
            claim(&mut used, *i, p, "first end")?;
            claim(&mut used, *j, q, "second end")?;
            ends[e] = [Some(p), Some(q)];
        }
    }
    for (e, (i, j, _)) in edges.iter().enumerate() {
        for (side, v) in [(0, *i), (1, *j)] {
            if ends[e][side].is_none() {
                let p = [Pauli::X, Pauli::Y, Pauli::Z]
                    .into_iter()
                    .find(|p| !used[v].contains(p))
                    .ok_or_else(|| Error::Assignment(format!("no label left at vertex {v}")))?;
                claim(&mut used, v, p, "automatic")?;
                ends[e][side] = Some(p);
            }
        }
    }
    let one = Monomial::one(r.dim());
    let terms = edges
        .iter()
        .zip(&ends)
        .map(|((i, j, m), [p, q])| {
            vec![
                Factor::new(*i, &one, p.expect("assigned")),
                Factor::new(*j, m, q.expect("assigned")),
            ]
        })
        .collect();
    let h = CompactHamiltonian::new(r.dim(), r.rows(), terms)?;
    if !canonical_isomorphic(&h.frustration()?, &line_graph(r)?)? {
        return Err(Error::Invariant(
            "root-graph bosonization does not reproduce the line graph".into(),
        ));
    }
    Ok(h)
}

fn claim(used: &mut [BTreeSet<Pauli>], v: usize, p: Pauli, what: &str) -> Result<()> {
    if p == Pauli::I || !used[v].insert(p) {
        return Err(Error::Assignment(format!(
            "label {} reused or invalid at vertex {v} ({what})",
            p.as_char()
        )));
    }
    Ok(())
}

/// All translates on an `L_1 × … × L_d` torus, term index `cell · t + class`, qubit index
/// `cell · M + q`.
pub fn instantiate_torus(h: &CompactHamiltonian, l: &[usize]) -> Result<Vec<PauliTerm>> {
    h.validate()?;
    if l.len() != h.dim {
        return Err(Error::Dimension(format!(
            "{} torus sides for dimension {}",
            l.len(),
            h.dim
        )));
    }
    check_admissible(&h.max_abs_offsets(), l)?;
    let cells = torus_cells(l);
    let n = cells.len() * h.qubits_per_cell;
    let mut out = Vec::with_capacity(cells.len() * h.terms.len());
    for cell in &cells {
        for t in &h.terms {
            let mut term = PauliTerm::identity(n);
            for f in t {
                let target: Vec<i64> = cell
                    .iter()
                    .zip(&f.cell)
                    .map(|(&c, &o)| c + o as i64)
                    .collect();
                term.set(torus_index(&target, l) * h.qubits_per_cell + f.q, f.p);
            }
            out.push(term);
        }
    }
    Ok(out)
}

fn symplectic_rows(terms: &[PauliTerm]) -> Result<(usize, BitMatrix)> {
    let n = terms.first().map_or(0, PauliTerm::n_qubits);
    if let Some(t) = terms.iter().find(|t| t.n_qubits() != n) {
        return Err(Error::Dimension(format!(
            "terms on {} and {n} qubits",
            t.n_qubits()
        )));
    }
    let rows = terms.iter().map(PauliTerm::symplectic_vector).collect();
    Ok((n, BitMatrix::from_rows(2 * n, rows)?))
}

/// Basis of all Pauli operators (as `x‖z` vectors) commuting with every term.
pub fn centralizer(terms: &[PauliTerm]) -> Result<Vec<BitVec>> {
    let (n, g) = symplectic_rows(terms)?;
    if n > MAX_QUBITS {
        return Err(Error::Scale(format!("{n} qubits (limit {MAX_QUBITS})")));
    }
    // ⟨v, t⟩ = t_x·v_z + t_z·v_x, so swap the halves of every term
    let swapped: Vec<BitVec> = g
        .row_vecs()
        .iter()
        .map(|r| r.slice(n, 2 * n).concat(&r.slice(0, n)))
        .collect();
    Ok(kernel(&BitMatrix::from_rows(2 * n, swapped)?).into_rows())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalPair {
    pub x: PauliTerm,
    pub z: PauliTerm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeAnalysis {
    pub torus: Vec<usize>,
    pub n_qubits: usize,
    pub n_terms: usize,
    pub commutant_dim: usize,
    /// Elements of the commutant that commute with all of it; they lie in the term span.
    pub stabilizers: Vec<PauliTerm>,
    pub logical_pairs: usize,
    pub logicals: Vec<LogicalPair>,
}

/// Splits the commutant into central elements and monogamous anticommuting pairs.
pub fn monogamize(
    c0: Vec<BitVec>,
    span: &[BitVec],
    n_qubits: usize,
) -> Result<(Vec<BitVec>, Vec<(BitVec, BitVec)>)> {
    let mut rest = c0;
    rest.reverse();
    let mut central = Vec::new();
    let mut pairs = Vec::new();
    while let Some(c) = rest.pop() {
        let Some(pos) = rest.iter().rposition(|d| symplectic_dot(&c, d)) else {
            central.push(c);
            continue;
        };
        let d = rest.remove(pos);
        for e in rest.iter_mut() {
            let with_d = symplectic_dot(e, &d);
            let with_c = symplectic_dot(e, &c);
            if with_d {
                e.xor_assign(&c);
            }
            if with_c {
                e.xor_assign(&d);
            }
        }
        pairs.push((c, d));
    }
    verify_blocks(&central, &pairs)?;
    if !span.is_empty() {
        let s = BitMatrix::from_rows(2 * n_qubits, span.to_vec())?;
        let rank = s.rank();
        for (x, z) in &pairs {
            for v in [x, z] {
                let mut t = s.clone();
                t.push_row(v.clone())?;
                if t.rank() == rank {
                    return Err(Error::Invariant(
                        "a logical operator lies in the term span".into(),
                    ));
                }
            }
        }
    }
    Ok((central, pairs))
}

fn verify_blocks(central: &[BitVec], pairs: &[(BitVec, BitVec)]) -> Result<()> {
    let all: Vec<&BitVec> = central
        .iter()
        .chain(pairs.iter().flat_map(|(x, z)| [x, z]))
        .collect();
    let k = central.len();
    for (a, va) in all.iter().enumerate() {
        for (b, vb) in all.iter().enumerate().skip(a + 1) {
            let expected = a >= k && b == a + 1 && (a - k) % 2 == 0;
            if symplectic_dot(va, vb) != expected {
                return Err(Error::Invariant(format!(
                    "commutation pattern broken between {a} and {b}"
                )));
            }
        }
    }
    Ok(())
}

/// Instantiates every Hamiltonian and stabilizer class on the torus and extracts logical pairs.
pub fn analyze(parts: &[&CompactHamiltonian], l: &[usize]) -> Result<CodeAnalysis> {
    let h = CompactHamiltonian::union(parts)?;
    let terms = instantiate_torus(&h, l)?;
    let n = terms.first().map_or(0, PauliTerm::n_qubits);
    let c0 = centralizer(&terms)?;
    let commutant_dim = c0.len();
    let span: Vec<BitVec> = terms.iter().map(PauliTerm::symplectic_vector).collect();
    let (central, pairs) = monogamize(c0, &span, n)?;
    let to_term = |v: &BitVec| PauliTerm::from_symplectic(v);
    Ok(CodeAnalysis {
        torus: l.to_vec(),
        n_qubits: n,
        n_terms: terms.len(),
        commutant_dim,
        stabilizers: central.iter().map(to_term).collect::<Result<_>>()?,
        logical_pairs: pairs.len(),
        logicals: pairs
            .iter()
            .map(|(x, z)| {
                Ok(LogicalPair {
                    x: to_term(x)?,
                    z: to_term(z)?,
                })
            })
            .collect::<Result<_>>()?,
    })
}

/// `(dim C₀ − dim(C₀ ∩ span))/2`, computed without monogamization.
pub fn logical_count(terms: &[PauliTerm]) -> Result<usize> {
    let (n, g) = symplectic_rows(terms)?;
    let c0 = centralizer(terms)?;
    let dim = c0.len();
    let c = BitMatrix::from_rows(2 * n, c0)?;
    let inter = intersection(&c, &g)?.rows();
    Ok((dim - inter) / 2)
}

/// Every operator supported on a `w × … × w` block of cells that commutes with all terms,
/// as new term classes anchored at the block corner. One automated round of the
/// iterative search: local commuting operators are promoted to Hamiltonian terms.
pub fn local_commutant(parts: &[&CompactHamiltonian], window: usize) -> Result<CompactHamiltonian> {
    let h = CompactHamiltonian::union(parts)?;
    if window == 0 {
        return Err(Error::Invariant(
            "window must cover at least one cell".into(),
        ));
    }
    let reach = h.max_abs_offsets();
    let l: Vec<usize> = reach.iter().map(|&e| window + 2 * e as usize + 1).collect();
    let terms = instantiate_torus(&h, &l)?;
    let m = h.qubits_per_cell;
    let cells = torus_cells(&l);
    let inside: Vec<usize> = (0..cells.len() * m)
        .filter(|&q| cells[q / m].iter().all(|&c| (c as usize) < window))
        .collect();
    let n = cells.len() * m;
    let k = inside.len();
    // ⟨v, t⟩ restricted to the block: t_z pairs with v_x, t_x with v_z
    let rows = terms
        .iter()
        .map(|t| {
            let v = t.symplectic_vector();
            let mut r = BitVec::zeros(2 * k);
            for (c, &q) in inside.iter().enumerate() {
                r.set(c, v.get(n + q));
                r.set(k + c, v.get(q));
            }
            r
        })
        .collect();
    let ker = kernel(&BitMatrix::from_rows(2 * k, rows)?);
    let classes = ker
        .row_vecs()
        .iter()
        .map(|r| {
            inside
                .iter()
                .enumerate()
                .filter_map(|(c, &q)| {
                    let p = Pauli::from_bits(r.get(c), r.get(k + c));
                    (p != Pauli::I).then(|| Factor {
                        q: q % m,
                        cell: cells[q / m].iter().map(|&x| x as i32).collect(),
                        p,
                    })
                })
                .collect()
        })
        .collect();
    let local = CompactHamiltonian::new(h.dim, m, classes)?;
    let joint = CompactHamiltonian::union(&[&h, &local])?.frustration()?;
    let t = h.terms.len();
    if (0..t).any(|i| (t..joint.cols()).any(|j| !joint.get(i, j).is_zero())) {
        return Err(Error::Invariant(
            "a block operator fails to commute on the infinite lattice".into(),
        ));
    }
    Ok(local)
}

/// Qubit of the fiducial bosonization sitting on the frustration-graph edge between
/// vertex `a` of cell 0 and vertex `b` of cell `m`, with the cell of the qubit.
pub fn edge_qubit(
    frustration: &CompactGraph,
    a: usize,
    b: usize,
    m: &Monomial,
) -> Option<(usize, Monomial)> {
    edge_classes(frustration)
        .iter()
        .enumerate()
        .find_map(|(q, (i, j, mm))| {
            if *i == a && *j == b && mm == m {
                Some((q, Monomial::one(m.dim())))
            } else if *i == b && *j == a && *mm == m.inverse() {
                Some((q, m.clone()))
            } else {
                None
            }
        })
}

/// Product of `p` over the fiducial qubits of a closed walk `(v_k, cell_k)` in the frustration graph.
pub fn cycle_operator(
    frustration: &CompactGraph,
    walk: &[(usize, Monomial)],
    p: Pauli,
) -> Result<Vec<Factor>> {
    let mut out: BTreeMap<(usize, Vec<i32>), Pauli> = BTreeMap::new();
    for k in 0..walk.len() {
        let (a, ca) = &walk[k];
        let (b, cb) = &walk[(k + 1) % walk.len()];
        let (q, cell) = edge_qubit(frustration, *a, *b, &cb.divide(ca))
            .ok_or_else(|| Error::Invariant(format!("{a}@{ca} and {b}@{cb} are not adjacent")))?;
        let key = (q, cell.times(ca).exponents().to_vec());
        if out.insert(key, p).is_some() {
            return Err(Error::Invariant(format!(
                "walk uses the edge {a}@{ca}–{b}@{cb} twice"
            )));
        }
    }
    Ok(out
        .into_iter()
        .map(|((q, cell), p)| Factor { q, cell, p })
        .collect())
}

/// Two-qubit operator of vertex `v`: on two of its fiducial qubits, the Pauli that
/// anticommutes with its own term's factor there and matches its neighbour's.
pub fn dimer_operator(
    h0: &CompactHamiltonian,
    v: usize,
    e: usize,
    f: usize,
) -> Result<Vec<Factor>> {
    let t = h0
        .terms
        .get(v)
        .ok_or_else(|| Error::Dimension(format!("no term {v}")))?;
    let pick = |k: usize| -> Result<Factor> {
        let fac = t
            .get(k)
            .ok_or_else(|| Error::Dimension(format!("term {v} has no factor {k}")))?;
        let p = match fac.p {
            Pauli::X => Pauli::Z,
            Pauli::Z => Pauli::X,
            other => {
                return Err(Error::Applicability(format!(
                    "dimer on a {} factor",
                    other.as_char()
                )))
            }
        };
        Ok(Factor { p, ..fac.clone() })
    };
    Ok(vec![pick(e)?, pick(f)?])
}

/// Checkerboard fixture: the two bosonizations, the Y-cycle seed and the dimer seed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckerboardFixture {
    pub version: u32,
    pub frustration: CompactGraph,
    pub h0: CompactHamiltonian,
    pub h1: CompactHamiltonian,
    pub y_cycles: CompactHamiltonian,
    pub dimers: CompactHamiltonian,
}

pub const CHECKERBOARD_FIXTURE: &str = include_str!("../fixtures/checkerboard.json");

pub fn checkerboard_fixture() -> Result<CheckerboardFixture> {
    serde_json::from_str(CHECKERBOARD_FIXTURE).map_err(|e| Error::Parse(e.to_string()))
}

/// Builds the fixture from the checkerboard lattice (line graph of the square lattice).
pub fn build_checkerboard_fixture() -> Result<CheckerboardFixture> {
    let square = crate::lattice::builtin("square")?;
    let a = line_graph(&square)?;
    // line-graph vertices are the square-lattice edge classes, in edge order
    let sq_edges = edge_classes(&square);
    let x = Monomial::new(vec![1, 0]);
    let y = Monomial::new(vec![0, 1]);
    let hor = sq_edges
        .iter()
        .position(|e| e.2 == x)
        .ok_or_else(|| Error::Invariant("no x edge".into()))?;
    let ver = sq_edges
        .iter()
        .position(|e| e.2 == y)
        .ok_or_else(|| Error::Invariant("no y edge".into()))?;
    let h0 = fiducial_bosonization(&a)?;
    let h1 = h0.flip_xz();
    let o = Monomial::one(2);
    let xb = x.inverse();
    let yb = y.inverse();
    // the four edges at a square-lattice site form a K4; three of its triangles and one plaquette
    let walks = [
        vec![(hor, o.clone()), (hor, xb.clone()), (ver, o.clone())],
        vec![(hor, o.clone()), (hor, xb.clone()), (ver, yb.clone())],
        vec![(hor, o.clone()), (ver, o.clone()), (ver, yb)],
        vec![(hor, o.clone()), (ver, x), (hor, y), (ver, o)],
    ];
    let y_terms = walks
        .iter()
        .map(|w| cycle_operator(&a, w, Pauli::Y))
        .collect::<Result<Vec<_>>>()?;
    let y_cycles = CompactHamiltonian::new(2, h0.qubits_per_cell, y_terms)?;
    let dimers = commuting_dimers(&h0)?;
    Ok(CheckerboardFixture {
        version: 1,
        frustration: a,
        h0,
        h1,
        y_cycles,
        dimers,
    })
}

/// Greedy maximal set of dimer classes whose translates mutually commute, in (vertex, pair) order.
pub fn commuting_dimers(h0: &CompactHamiltonian) -> Result<CompactHamiltonian> {
    let mut kept: Vec<Vec<Factor>> = Vec::new();
    for (v, t) in h0.terms.iter().enumerate() {
        for e in 0..t.len() {
            for f in e + 1..t.len() {
                let cand = dimer_operator(h0, v, e, f)?;
                let mut trial = kept.clone();
                trial.push(cand);
                let h = CompactHamiltonian::new(h0.dim, h0.qubits_per_cell, trial.clone())?;
                if h.frustration()?.monomials().is_empty() {
                    kept = trial;
                }
            }
        }
    }
    CompactHamiltonian::new(h0.dim, h0.qubits_per_cell, kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::builtin;

    fn t(s: &str) -> PauliTerm {
        s.parse().unwrap()
    }

    #[test]
    fn fiducial_single_edge() {
        let a = CompactGraph::parse_rows(0, &[&["0", "1"], &["1", "0"]]).unwrap();
        let h = fiducial_bosonization(&a).unwrap();
        assert_eq!(h.qubits_per_cell, 1);
        let terms = instantiate_torus(&h, &[]).unwrap();
        assert_eq!(terms, vec![t("X"), t("Z")]);
    }

    #[test]
    fn fiducial_edgeless_is_degenerate() {
        let a = CompactGraph::parse_rows(0, &[&["0", "0"], &["0", "0"]]).unwrap();
        let h = fiducial_bosonization(&a).unwrap();
        assert!(h.is_degenerate());
        assert_eq!(h.qubits_per_cell, 0);
    }

    #[test]
    fn fiducial_checkerboard_weight_six() {
        let a = builtin("checkerboard").unwrap();
        let h = fiducial_bosonization(&a).unwrap();
        assert!(h.terms.iter().all(|t| t.len() == 6));
        let terms = instantiate_torus(&h, &[4, 4]).unwrap();
        assert_eq!(terms.len(), 32);
        assert_eq!(terms[0].n_qubits(), 96);
        assert!(terms.iter().all(|t| t.weight() == 6));
    }

    #[test]
    fn fiducial_self_loop_lattice() {
        let a = builtin("comb").unwrap();
        let h = fiducial_bosonization(&a).unwrap();
        assert_eq!(h.frustration().unwrap(), a);
    }

    #[test]
    fn honeycomb_kitaev_bonds() {
        let r = builtin("honeycomb").unwrap();
        let h = honeycomb_bosonization(&r, &EdgeLabels::new()).unwrap();
        let kinds: Vec<(Pauli, Pauli)> = h.terms.iter().map(|t| (t[0].p, t[1].p)).collect();
        assert_eq!(
            kinds,
            vec![
                (Pauli::X, Pauli::X),
                (Pauli::Y, Pauli::Y),
                (Pauli::Z, Pauli::Z)
            ]
        );
        assert!(
            canonical_isomorphic(&h.frustration().unwrap(), &builtin("kagome").unwrap()).unwrap()
        );
    }

    #[test]
    fn honeycomb_single_edge_and_star() {
        let k2 = CompactGraph::parse_rows(0, &[&["0", "1"], &["1", "0"]]).unwrap();
        let h = honeycomb_bosonization(&k2, &EdgeLabels::new()).unwrap();
        assert_eq!(instantiate_torus(&h, &[]).unwrap(), vec![t("XX")]);
        let star = CompactGraph::parse_rows(
            0,
            &[
                &["0", "1", "1", "1"],
                &["1", "0", "0", "0"],
                &["1", "0", "0", "0"],
                &["1", "0", "0", "0"],
            ],
        )
        .unwrap();
        let h = honeycomb_bosonization(&star, &EdgeLabels::new()).unwrap();
        let terms = instantiate_torus(&h, &[]).unwrap();
        for a in 0..3 {
            for b in a + 1..3 {
                assert!(crate::pauli::symplectic_form(&terms[a], &terms[b]).unwrap());
            }
        }
    }

    #[test]
    fn honeycomb_errors() {
        let k5 = CompactGraph::parse_rows(
            0,
            &[
                &["0", "1", "1", "1", "1"],
                &["1", "0", "0", "0", "0"],
                &["1", "0", "0", "0", "0"],
                &["1", "0", "0", "0", "0"],
                &["1", "0", "0", "0", "0"],
            ],
        )
        .unwrap();
        assert!(matches!(
            honeycomb_bosonization(&k5, &EdgeLabels::new()),
            Err(Error::Applicability(_))
        ));
        let path =
            CompactGraph::parse_rows(0, &[&["0", "1", "0"], &["1", "0", "1"], &["0", "1", "0"]])
                .unwrap();
        let mut labels = EdgeLabels::new();
        labels.insert("0-1@1".into(), (Pauli::X, Pauli::Z));
        labels.insert("1-2@1".into(), (Pauli::Z, Pauli::X));
        assert!(matches!(
            honeycomb_bosonization(&path, &labels),
            Err(Error::Assignment(_))
        ));
    }

    #[test]
    fn instantiate_xy_chain() {
        let h = CompactHamiltonian::new(
            1,
            2,
            vec![
                vec![
                    Factor::new(0, &Monomial::one(1), Pauli::X),
                    Factor::new(1, &Monomial::one(1), Pauli::X),
                ],
                vec![
                    Factor::new(1, &Monomial::one(1), Pauli::Z),
                    Factor::new(0, &Monomial::new(vec![1]), Pauli::Z),
                ],
            ],
        )
        .unwrap();
        let terms = instantiate_torus(&h, &[4]).unwrap();
        assert_eq!(terms.len(), 8);
        assert_eq!(terms[7], t("ZIIIIIIZ"));
        assert_eq!(terms[0], t("XXIIIIII"));
    }

    #[test]
    fn centralizer_small() {
        assert!(centralizer(&[t("X"), t("Z")]).unwrap().is_empty());
        let c = centralizer(&[t("Z")]).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(PauliTerm::from_symplectic(&c[0]).unwrap(), t("Z"));
    }

    #[test]
    fn centralizer_matches_exhaustive_count() {
        let n = 6;
        let terms: Vec<PauliTerm> = (0..n)
            .flat_map(|i| {
                let mut a = PauliTerm::identity(n);
                a.set(i, Pauli::X);
                a.set((i + 1) % n, Pauli::X);
                let mut b = PauliTerm::identity(n);
                b.set(i, Pauli::Y);
                b.set((i + 1) % n, Pauli::Y);
                [a, b]
            })
            .collect();
        let dim = centralizer(&terms).unwrap().len();
        let mut count = 0usize;
        for bits in 0u32..1 << (2 * n) {
            let v = BitVec::from_bools(&(0..2 * n).map(|k| bits >> k & 1 == 1).collect::<Vec<_>>());
            let p = PauliTerm::from_symplectic(&v).unwrap();
            if terms
                .iter()
                .all(|s| !crate::pauli::symplectic_form(&p, s).unwrap())
            {
                count += 1;
            }
        }
        assert_eq!(count, 1 << dim);
    }

    #[test]
    fn paramagnet_has_no_logicals() {
        let h = CompactHamiltonian::new(
            1,
            1,
            vec![vec![Factor::new(0, &Monomial::one(1), Pauli::Y)]],
        )
        .unwrap();
        let a = analyze(&[&h], &[5]).unwrap();
        assert_eq!(a.logical_pairs, 0);
        assert_eq!(a.stabilizers.len(), 5);
    }

    #[test]
    fn fixture_matches_construction() {
        assert_eq!(
            checkerboard_fixture().unwrap(),
            build_checkerboard_fixture().unwrap()
        );
    }
}
