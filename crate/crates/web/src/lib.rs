//! Browser bindings: line-graph recognition, band structures and densities of states.
//!
//! The `*_json` functions hold the logic and are plain Rust; the exported wrappers only
//! convert errors for JavaScript.

use serde_json::json;
use wasm_bindgen::prelude::*;

use ffsc::fermion::{band_structure, default_grid, dos};
use ffsc::formats::{self, GraphInput};
use ffsc::lattice::{
    apply_orientation, builtin, elementary_orientation, OrientationFamily, BUILTIN_NAMES,
};
use ffsc::laurent::{BlochHamiltonian, SignedCompact};
use ffsc::linegraph::{line_graph, recognize, Recognition};

/// Largest k-grid side accepted from the page.
const MAX_KGRID: usize = 2001;

fn graph(input: &str) -> Result<GraphInput, String> {
    let input = input.trim();
    if input.starts_with('{') {
        formats::parse_graph(input).map_err(|e| e.to_string())
    } else {
        builtin(input)
            .map(GraphInput::Unoriented)
            .map_err(|e| e.to_string())
    }
}

fn oriented(g: GraphInput, orientation: &str) -> Result<SignedCompact, String> {
    let m = g.unoriented();
    match (orientation, g) {
        ("input", GraphInput::Oriented(s)) => Ok(s),
        ("input", GraphInput::Unoriented(_)) => Err("the graph carries no signs".into()),
        ("elementary", _) => {
            let cfg = elementary_orientation(&m).map_err(|e| e.to_string())?;
            apply_orientation(&m, &cfg).map_err(|e| e.to_string())
        }
        // spanning-tree gauge, every edge from its first to its second endpoint
        ("tree", _) => {
            let fam = OrientationFamily::new(&m, &vec![1; m.dim()]).map_err(|e| e.to_string())?;
            Ok(fam.oriented(&fam.signs(0)))
        }
        (other, _) => Err(format!("unknown orientation {other:?}")),
    }
}

fn check_kgrid(kgrid: usize) -> Result<(), String> {
    if kgrid == 0 || kgrid > MAX_KGRID {
        return Err(format!("k-grid must be between 1 and {MAX_KGRID}"));
    }
    Ok(())
}

pub fn builtins_json() -> String {
    json!(BUILTIN_NAMES).to_string()
}

/// Recognition report plus, on success, the line graph of the recovered root for comparison.
pub fn recognize_json(input: &str) -> Result<String, String> {
    let g = graph(input)?.unoriented();
    let rec = recognize(&g).map_err(|e| e.to_string())?;
    let summary = match &rec {
        Recognition::LineGraph(r) => {
            let root = formats::graph_file(&r.root);
            let check = line_graph(&r.root).map_err(|e| e.to_string())?;
            json!({ "status": "line_graph", "root": root, "root_line_graph": formats::graph_file(&check) })
        }
        Recognition::NotLineGraph { obstruction } => {
            json!({ "status": "not_line_graph", "obstruction": obstruction })
        }
        Recognition::AmbiguousAfterCoarsening { reason } => {
            json!({ "status": "ambiguous", "reason": reason })
        }
    };
    Ok(summary.to_string())
}

/// Bands along `k_1` with the other momenta at zero: `{"k": [...], "bands": [[...], ...]}`.
pub fn bands_json(input: &str, orientation: &str, kgrid: usize) -> Result<String, String> {
    check_kgrid(kgrid)?;
    let s = oriented(graph(input)?, orientation)?;
    if s.dim() == 0 {
        return Err("a finite graph has no bands".into());
    }
    let bloch = BlochHamiltonian::new(&s).map_err(|e| e.to_string())?;
    let ks: Vec<f64> = (0..=kgrid)
        .map(|j| -std::f64::consts::PI + 2.0 * std::f64::consts::PI * j as f64 / kgrid as f64)
        .collect();
    let mut bands = vec![Vec::with_capacity(ks.len()); s.rows()];
    for &k in &ks {
        let mut point = vec![0.0; s.dim()];
        point[0] = k;
        for (b, e) in bloch.eigenvalues(&point).into_iter().enumerate() {
            bands[b].push(e);
        }
    }
    Ok(json!({ "k": ks, "bands": bands }).to_string())
}

/// Histogram over the full Brillouin-zone grid: `{"energies": [...], "counts": [...]}`.
pub fn dos_json(
    input: &str,
    orientation: &str,
    kgrid: usize,
    bins: usize,
) -> Result<String, String> {
    check_kgrid(kgrid)?;
    let s = oriented(graph(input)?, orientation)?;
    let grid = if s.dim() == 1 {
        vec![kgrid]
    } else {
        vec![kgrid.min(default_grid(s.dim())[0]); s.dim()]
    };
    let b = band_structure(&s, &grid).map_err(|e| e.to_string())?;
    let e_max = b.values().map(f64::abs).fold(0.0, f64::max).max(1e-9);
    let d = dos(&b, bins, e_max).map_err(|e| e.to_string())?;
    Ok(json!({ "grid": grid, "energies": d.energies, "counts": d.counts }).to_string())
}

#[wasm_bindgen]
pub fn builtins() -> String {
    builtins_json()
}

#[wasm_bindgen(js_name = recognize)]
pub fn recognize_js(input: &str) -> Result<String, JsError> {
    recognize_json(input).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn bands(input: &str, orientation: &str, kgrid: usize) -> Result<String, JsError> {
    bands_json(input, orientation, kgrid).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = densityOfStates)]
pub fn density_of_states(
    input: &str,
    orientation: &str,
    kgrid: usize,
    bins: usize,
) -> Result<String, JsError> {
    dos_json(input, orientation, kgrid, bins).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn recognizes_kagome_and_rejects_square() {
        let v: Value = serde_json::from_str(&recognize_json("kagome").unwrap()).unwrap();
        assert_eq!(v["status"], "line_graph");
        assert_eq!(v["root"]["cell_vertices"], 2);
        let v: Value = serde_json::from_str(&recognize_json("square").unwrap()).unwrap();
        assert_eq!(v["status"], "not_line_graph");
    }

    #[test]
    fn custom_json_input() {
        let json = r#"{"dim":1,"cell_vertices":1,"blocks":{"x":[[1]]}}"#;
        let v: Value = serde_json::from_str(&bands_json(json, "tree", 8).unwrap()).unwrap();
        let band = v["bands"][0].as_array().unwrap();
        assert_eq!(band.len(), 9);
        // single chain: |E(k)| = 2 |sin k|, and k = pi/2 at index 6
        assert!((band[6].as_f64().unwrap().abs() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn dos_counts_every_state() {
        let v: Value =
            serde_json::from_str(&dos_json("hourglass_20", "elementary", 101, 41).unwrap())
                .unwrap();
        let total: u64 = v["counts"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c.as_u64().unwrap())
            .sum();
        assert_eq!(total, 4 * 101);
    }

    #[test]
    fn bad_requests_are_errors() {
        assert!(recognize_json("triangle").is_err());
        assert!(bands_json("kagome", "elementary", 10).is_err());
        assert!(bands_json("comb", "tree", 0).is_err());
        assert!(dos_json("comb", "sideways", 10, 10).is_err());
    }
}
