//! On-disk formats: compact graph files with symmetric completion and base-graph files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::BaseGraph;
use crate::laurent::{
    Coeff, CompactGraph, CompactMatrix, Monomial, SignedCompact, MAX_DIM, VARIABLES,
};

/// `{ "dim", "cell_vertices", "blocks": { "<monomial>": [[0/1…]…] }, "sign_blocks": … }`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub dim: usize,
    pub cell_vertices: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub blocks: BTreeMap<String, Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_blocks: Option<BTreeMap<String, Vec<Vec<i64>>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphInput {
    Unoriented(CompactGraph),
    Oriented(SignedCompact),
}

impl GraphInput {
    pub fn unoriented(&self) -> CompactGraph {
        match self {
            GraphInput::Unoriented(g) => g.clone(),
            GraphInput::Oriented(s) => s.support(),
        }
    }
}

/// Fills in the adjoint of every block; explicit blocks that disagree with it are an error.
fn complete<C: Coeff>(
    dim: usize,
    n: usize,
    raw: &BTreeMap<String, Vec<Vec<i64>>>,
    skew: bool,
) -> Result<CompactMatrix<C>> {
    if dim > MAX_DIM {
        return Err(Error::Dimension(format!(
            "dimension {dim} exceeds {MAX_DIM}"
        )));
    }
    let mut blocks: BTreeMap<Monomial, Vec<Vec<C>>> = BTreeMap::new();
    let mut explicit = BTreeMap::new();
    for (k, b) in raw {
        let m = Monomial::parse(k, dim)?;
        if b.len() != n || b.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("block {k} is not {n}x{n}")));
        }
        let b = b
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| C::from_i64(v))
                    .collect::<Result<Vec<C>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if explicit.insert(m.clone(), b).is_some() {
            return Err(Error::Parse(format!("block {k} given twice")));
        }
    }
    for (m, b) in &explicit {
        let adj: Vec<Vec<C>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if skew { b[j][i].neg() } else { b[j][i] })
                    .collect()
            })
            .collect();
        let inv = m.inverse();
        if let Some(other) = explicit.get(&inv) {
            if *other != adj {
                return Err(Error::Invariant(format!(
                    "blocks {m} and {inv} are not adjoint"
                )));
            }
        }
        blocks.insert(m.clone(), b.clone());
        blocks.insert(inv, adj);
    }
    CompactMatrix::from_blocks(dim, n, n, &blocks)
}

fn half_blocks<C: Coeff>(m: &CompactMatrix<C>) -> BTreeMap<String, Vec<Vec<i64>>> {
    m.blocks()
        .into_iter()
        .filter(|(mono, _)| mono.is_one() || mono.is_positive())
        .map(|(mono, b)| {
            (
                mono.to_string(),
                b.into_iter()
                    .map(|r| r.into_iter().map(C::to_i64).collect())
                    .collect(),
            )
        })
        .collect()
}

pub fn parse_graph(json: &str) -> Result<GraphInput> {
    let f: GraphFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    match &f.sign_blocks {
        Some(sb) => {
            let s: SignedCompact = complete(f.dim, f.cell_vertices, sb, true)?;
            s.validate_oriented()?;
            if !f.blocks.is_empty() {
                let g: CompactGraph = complete(f.dim, f.cell_vertices, &f.blocks, false)?;
                if g != s.support() {
                    return Err(Error::Invariant("sign_blocks disagree with blocks".into()));
                }
            }
            Ok(GraphInput::Oriented(s))
        }
        None => {
            let g: CompactGraph = complete(f.dim, f.cell_vertices, &f.blocks, false)?;
            g.validate_adjacency()?;
            Ok(GraphInput::Unoriented(g))
        }
    }
}

pub fn graph_file(g: &CompactGraph) -> GraphFile {
    GraphFile {
        dim: g.dim(),
        cell_vertices: g.rows(),
        blocks: half_blocks(g),
        sign_blocks: None,
    }
}

pub fn oriented_file(s: &SignedCompact) -> GraphFile {
    GraphFile {
        dim: s.dim(),
        cell_vertices: s.rows(),
        blocks: half_blocks(&s.support()),
        sign_blocks: Some(half_blocks(s)),
    }
}

pub fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| Error::Parse(e.to_string()))
}

pub fn from_json<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

/// `{ "vertices": n, "edges": [[u, v, "<monomial>"]…] }`, with an optional `"dim"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseGraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub vertices: usize,
    pub edges: Vec<(usize, usize, String)>,
}

fn inferred_dim(labels: &[&str]) -> usize {
    labels
        .iter()
        .flat_map(|s| s.chars())
        .filter_map(|c| VARIABLES.iter().position(|&v| v == c))
        .map(|i| i + 1)
        .max()
        .unwrap_or(0)
}

pub fn parse_base_graph(json: &str) -> Result<BaseGraph> {
    let f: BaseGraphFile = from_json(json)?;
    let dim = f
        .dim
        .unwrap_or_else(|| inferred_dim(&f.edges.iter().map(|e| e.2.as_str()).collect::<Vec<_>>()));
    let mut edges = Vec::with_capacity(f.edges.len());
    for (u, v, s) in &f.edges {
        let m = Monomial::parse(s, dim)?;
        edges.push(if u <= v {
            (*u, *v, m)
        } else {
            (*v, *u, m.inverse())
        });
    }
    let b = BaseGraph {
        dim,
        n_vertices: f.vertices,
        edges,
    };
    b.validate()?;
    Ok(b)
}

pub fn base_graph_file(b: &BaseGraph) -> BaseGraphFile {
    BaseGraphFile {
        dim: Some(b.dim),
        vertices: b.n_vertices,
        edges: b
            .edges
            .iter()
            .map(|(u, v, m)| (*u, *v, m.to_string()))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{apply_orientation, builtin, elementary_orientation};

    #[test]
    fn symmetric_completion() {
        let json = r#"{"dim":1,"cell_vertices":2,"blocks":{"1":[[0,1],[1,0]],"x":[[1,0],[0,0]]}}"#;
        let g = parse_graph(json).unwrap().unoriented();
        assert_eq!(g, builtin("comb").unwrap());
    }

    #[test]
    fn conflicting_blocks_rejected() {
        let json = r#"{"dim":1,"cell_vertices":1,"blocks":{"x":[[1]],"x^-1":[[0]]}}"#;
        assert!(matches!(parse_graph(json), Err(Error::Invariant(_))));
        let asym = r#"{"dim":0,"cell_vertices":2,"blocks":{"1":[[0,1],[0,0]]}}"#;
        assert!(parse_graph(asym).is_err());
    }

    #[test]
    fn round_trips() {
        for name in crate::lattice::BUILTIN_NAMES {
            let g = builtin(name).unwrap();
            let json = to_json(&graph_file(&g)).unwrap();
            assert_eq!(parse_graph(&json).unwrap(), GraphInput::Unoriented(g));
        }
        let g = builtin("honeycomb").unwrap();
        let s = apply_orientation(&g, &elementary_orientation(&g).unwrap()).unwrap();
        let json = to_json(&oriented_file(&s)).unwrap();
        assert_eq!(parse_graph(&json).unwrap(), GraphInput::Oriented(s));
    }

    #[test]
    fn bad_monomial_key() {
        let json = r#"{"dim":1,"cell_vertices":1,"blocks":{"x^1":[[1]]}}"#;
        assert!(matches!(parse_graph(json), Err(Error::Parse(_))));
    }

    #[test]
    fn base_graph_file_round_trip() {
        let json = r#"{"vertices":2,"edges":[[0,0,"x"],[0,1,"1"],[1,1,"x"]]}"#;
        let b = parse_base_graph(json).unwrap();
        assert_eq!(b.dim, 1);
        let back = parse_base_graph(&to_json(&base_graph_file(&b)).unwrap()).unwrap();
        assert_eq!(back, b);
    }
}
