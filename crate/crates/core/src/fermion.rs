//! Free-fermion energetics of oriented root graphs: Williamson eigenvalues, band
//! structures, densities of states and the spin-model gap.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{
    apply_orientation, elementary_orientation, orientation_families, FluxOrientation,
    OrientationConfig, OrientationFamily,
};
use crate::laurent::{
    hermitian_eigenvalues, torus_cells, torus_truncate_signed, BlochHamiltonian, CompactGraph,
    SignedCompact,
};

pub const ZERO_TOLERANCE: f64 = 1e-9;
/// Gaps below this are indistinguishable from gapless at the default grids.
pub const GAPLESS_THRESHOLD: f64 = 0.02;
/// Sector energies closer than this are treated as degenerate.
pub const ENERGY_TOLERANCE: f64 = 1e-4;
pub const MAX_SPECTRUM_VERTICES: usize = 24;

/// Real antisymmetric hopping matrix with entries in {-1, 0, 1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleParticleH {
    h: DMatrix<i64>,
}

impl SingleParticleH {
    pub fn new(h: DMatrix<i64>) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::Dimension(format!(
                "{}x{} hopping matrix",
                h.nrows(),
                h.ncols()
            )));
        }
        let n = h.nrows();
        for i in 0..n {
            for j in 0..n {
                if h[(i, j)] != -h[(j, i)] {
                    return Err(Error::Invariant(format!(
                        "h[{i},{j}] = {} but h[{j},{i}] = {}",
                        h[(i, j)],
                        h[(j, i)]
                    )));
                }
                if h[(i, j)].abs() > 1 {
                    return Err(Error::Invariant(format!("h[{i},{j}] = {}", h[(i, j)])));
                }
            }
        }
        Ok(Self { h })
    }

    pub fn size(&self) -> usize {
        self.h.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<i64> {
        &self.h
    }

    /// Eigenvalues of the Hermitian matrix `i·h`, ascending.
    pub fn hermitian_spectrum(&self) -> Vec<f64> {
        let ih = self.h.map(|v| Complex64::new(0.0, v as f64));
        hermitian_eigenvalues(ih)
    }
}

/// Single-particle Hamiltonian of an oriented lattice on an `L_1 × … × L_d` torus of magnetic cells.
pub fn build_h(m: &CompactGraph, cfg: &OrientationConfig, l: &[usize]) -> Result<SingleParticleH> {
    SingleParticleH::new(torus_truncate_signed(&apply_orientation(m, cfg)?, l)?)
}

/// Williamson eigenvalues `λ_1 ≥ … ≥ λ_{⌊n/2⌋} ≥ 0`; an odd size leaves one further exact zero.
pub fn williamson(h: &SingleParticleH) -> Vec<f64> {
    let mut e = h.hermitian_spectrum();
    e.reverse();
    e.truncate(h.size() / 2);
    e.iter().map(|v| v.max(0.0)).collect()
}

/// All `2^{⌊n/2⌋}` many-body energies `Σ ±λ_j`, ascending.
pub fn spectrum(h: &SingleParticleH) -> Result<Vec<f64>> {
    if h.size() > MAX_SPECTRUM_VERTICES {
        return Err(Error::Scale(format!(
            "{} vertices (limit {MAX_SPECTRUM_VERTICES})",
            h.size()
        )));
    }
    let lambda = williamson(h);
    let mut out = vec![-lambda.iter().sum::<f64>()];
    for l in &lambda {
        let flipped: Vec<f64> = out.iter().map(|e| e + 2.0 * l).collect();
        out.extend(flipped);
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// `-Σ λ_j`, minus half the skew energy.
pub fn ground_energy(h: &SingleParticleH) -> f64 {
    -williamson(h).iter().sum::<f64>()
}

/// Uniform grid `k_j = 2π (j - ⌊N/2⌋) / N` per axis, row-major with the last axis fastest.
pub fn k_grid(grid: &[usize]) -> Vec<Vec<f64>> {
    torus_cells(grid)
        .into_iter()
        .map(|c| {
            c.iter()
                .zip(grid)
                .map(|(&j, &n)| 2.0 * PI * (j - (n / 2) as i64) as f64 / n as f64)
                .collect()
        })
        .collect()
}

/// Default points per axis: 201 in one dimension, 101 otherwise.
pub fn default_grid(dim: usize) -> Vec<usize> {
    vec![if dim == 1 { 201 } else { 101 }; dim]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandData {
    pub grid: Vec<usize>,
    pub k_points: Vec<Vec<f64>>,
    /// Ascending eigenvalues of `H(k)` at each grid point.
    pub eigenvalues: Vec<Vec<f64>>,
}

impl BandData {
    pub fn n_bands(&self) -> usize {
        self.eigenvalues.first().map_or(0, Vec::len)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.eigenvalues.iter().flatten().copied()
    }

    /// Smallest `|E|` over the grid and its grid index.
    pub fn min_abs(&self) -> (f64, usize) {
        self.eigenvalues
            .iter()
            .enumerate()
            .map(|(i, e)| (e.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min), i))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .unwrap_or((f64::INFINITY, 0))
    }

    /// Header `kx,…,band_1,…`, one row per k-point.
    pub fn to_csv(&self) -> String {
        let axes = ["kx", "ky", "kz"];
        let mut out = String::new();
        let mut header: Vec<String> = axes[..self.grid.len()]
            .iter()
            .map(|s| s.to_string())
            .collect();
        header.extend((1..=self.n_bands()).map(|b| format!("band_{b}")));
        out.push_str(&header.join(","));
        out.push('\n');
        for (k, e) in self.k_points.iter().zip(&self.eigenvalues) {
            let row: Vec<String> = k.iter().chain(e).map(|&v| fmt_float(v)).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Fixed 12-digit rendering with negative zero folded into zero.
pub fn fmt_float(v: f64) -> String {
    let s = format!("{v:.12}");
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

pub fn band_structure(m: &SignedCompact, grid: &[usize]) -> Result<BandData> {
    if grid.len() != m.dim() {
        return Err(Error::Dimension(format!(
            "{}-axis grid for dimension {}",
            grid.len(),
            m.dim()
        )));
    }
    if grid.contains(&0) {
        return Err(Error::Invariant(
            "grid needs at least one point per axis".into(),
        ));
    }
    let bloch = BlochHamiltonian::new(m)?;
    let k_points = k_grid(grid);
    let eigenvalues = par_map(&k_points, |k| bloch.eigenvalues(k));
    Ok(BandData {
        grid: grid.to_vec(),
        k_points,
        eigenvalues,
    })
}

#[cfg(feature = "parallel")]
fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.iter().map(f).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dos {
    pub e_max: f64,
    /// Bin centres.
    pub energies: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Dos {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn bin_of(&self, e: f64) -> usize {
        bin_index(e, self.e_max, self.counts.len())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("energy,count\n");
        for (e, c) in self.energies.iter().zip(&self.counts) {
            let _ = writeln!(out, "{},{c}", fmt_float(*e));
        }
        out
    }
}

fn bin_index(e: f64, e_max: f64, bins: usize) -> usize {
    let t = ((e + e_max) / (2.0 * e_max) * bins as f64).floor();
    (t.max(0.0) as usize).min(bins - 1)
}

/// Histogram of all band values over `[-e_max, e_max]`.
pub fn dos(b: &BandData, bins: usize, e_max: f64) -> Result<Dos> {
    if b.eigenvalues.is_empty() || bins == 0 || e_max <= 0.0 {
        return Err(Error::Invariant(
            "density of states needs bands, bins and a positive range".into(),
        ));
    }
    let mut counts = vec![0u64; bins];
    for v in b.values() {
        counts[bin_index(v, e_max, bins)] += 1;
    }
    let width = 2.0 * e_max / bins as f64;
    let energies = (0..bins)
        .map(|i| -e_max + (i as f64 + 0.5) * width)
        .collect();
    Ok(Dos {
        e_max,
        energies,
        counts,
    })
}

/// `-(1/n_cell)·mean_k Σ_j |E_j(k)|`.
pub fn energy_per_site(b: &BandData) -> f64 {
    let total: f64 = b
        .eigenvalues
        .iter()
        .map(|e| e.iter().map(|v| v.abs()).sum::<f64>())
        .sum();
    -total / (b.eigenvalues.len() as f64 * b.n_bands() as f64)
}

/// Refines `2·min_k min_j |E_j(k)|` from the grid minimum by compass search.
pub fn refined_gap(m: &SignedCompact, b: &BandData) -> Result<f64> {
    let bloch = BlochHamiltonian::new(m)?;
    let (best, idx) = b.min_abs();
    if b.k_points.is_empty() {
        return Ok(2.0 * best);
    }
    Ok(2.0 * compass(&bloch, b.k_points[idx].clone(), best, &b.grid))
}

fn min_abs_at(bloch: &BlochHamiltonian, k: &[f64]) -> f64 {
    bloch
        .eigenvalues(k)
        .iter()
        .map(|v| v.abs())
        .fold(f64::INFINITY, f64::min)
}

fn compass(bloch: &BlochHamiltonian, mut k: Vec<f64>, mut best: f64, grid: &[usize]) -> f64 {
    let mut step: Vec<f64> = grid.iter().map(|&n| PI / n as f64).collect();
    while step.iter().any(|&s| s > 1e-10) && best > ZERO_TOLERANCE {
        let mut moved = false;
        for axis in 0..k.len() {
            for dir in [-1.0, 1.0] {
                let mut t = k.clone();
                t[axis] += dir * step[axis];
                let v = min_abs_at(bloch, &t);
                if v < best {
                    best = v;
                    k = t;
                    moved = true;
                }
            }
        }
        if !moved {
            step.iter_mut().for_each(|s| *s /= 2.0);
        }
    }
    best
}

/// Grid indices up to `k → -k`, with multiplicity 1 or 2. The spectrum at `-k` is the
/// negated spectrum at `k`, so `|E|` statistics only need one of each pair.
fn half_grid(grid: &[usize]) -> Vec<(usize, f64)> {
    let cells = torus_cells(grid);
    cells
        .iter()
        .enumerate()
        .filter_map(|(i, c)| {
            let mirror: Vec<i64> = c
                .iter()
                .zip(grid)
                .map(|(&j, &n)| 2 * (n / 2) as i64 - j)
                .collect();
            let mi = crate::laurent::torus_index(&mirror, grid);
            match i.cmp(&mi) {
                Ordering::Less => Some((i, 2.0)),
                Ordering::Equal => Some((i, 1.0)),
                Ordering::Greater => None,
            }
        })
        .collect()
}

/// Energetics of one orientation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientationRecord {
    pub multiplier: Vec<usize>,
    pub pattern: u64,
    pub signature: Vec<u8>,
    pub cell_vertices: usize,
    pub energy_per_site: f64,
    /// `2·min |E|` over the grid.
    pub grid_gap: f64,
    /// Grid gap refined off-grid; never larger.
    pub single_particle_gap: f64,
    /// Energy per site after adding one excitation of the odd-parity sector on the sampled torus.
    pub parity_corrected_energy: f64,
}

impl OrientationRecord {
    fn order_key(&self) -> (&[usize], &[u8]) {
        (&self.multiplier, &self.signature)
    }

    pub fn is_gapless(&self) -> bool {
        self.single_particle_gap < GAPLESS_THRESHOLD
    }
}

pub fn evaluate_orientation(
    family: &OrientationFamily,
    signs: &[i8],
    pattern: u64,
    grid: &[usize],
) -> Result<OrientationRecord> {
    let oriented = family.oriented(signs);
    if grid.len() != oriented.dim() || grid.contains(&0) {
        return Err(Error::Dimension(format!(
            "grid {grid:?} for dimension {}",
            oriented.dim()
        )));
    }
    let bloch = BlochHamiltonian::new(&oriented)?;
    let k_points = k_grid(grid);
    let mut total = 0.0;
    let mut best = (f64::INFINITY, 0usize);
    for (i, w) in half_grid(grid) {
        let e = bloch.eigenvalues(&k_points[i]);
        total += w * e.iter().map(|v| v.abs()).sum::<f64>();
        let m = e.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
        if m < best.0 {
            best = (m, i);
        }
    }
    let n_cell = oriented.rows();
    let n_k = k_points.len();
    let energy = -total / (n_k * n_cell) as f64;
    let gap = 2.0 * compass(&bloch, k_points[best.1].clone(), best.0, grid);
    Ok(OrientationRecord {
        multiplier: family.multiplier.clone(),
        pattern,
        signature: family.signature(signs),
        cell_vertices: n_cell,
        energy_per_site: energy,
        grid_gap: 2.0 * best.0,
        single_particle_gap: gap,
        parity_corrected_energy: energy + gap / (n_cell * n_k) as f64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub records: Vec<OrientationRecord>,
    pub tau1: usize,
    pub tau2: Option<usize>,
    pub single_particle_gap: f64,
    pub sector_gap: Option<f64>,
    pub delta: f64,
    pub parity_corrected_sector_gap: Option<f64>,
    pub parity_corrected_delta: f64,
    /// Elementary orientation of a bipartite root graph, when one exists.
    pub elementary: Option<OrientationRecord>,
    /// The search covers a finite family of magnetic cells, so `delta` bounds the true gap from above.
    pub upper_bound: bool,
}

impl GapReport {
    pub fn tau1(&self) -> &OrientationRecord {
        &self.records[self.tau1]
    }

    pub fn tau2(&self) -> Option<&OrientationRecord> {
        self.tau2.map(|i| &self.records[i])
    }
}

fn cmp_records(a: &OrientationRecord, b: &OrientationRecord) -> Ordering {
    a.order_key().cmp(&b.order_key())
}

/// Index of the lowest value among `candidates`, treating values within the tolerance as tied.
fn select(
    records: &[OrientationRecord],
    candidates: &[usize],
    value: impl Fn(&OrientationRecord) -> f64,
) -> Option<usize> {
    let best = candidates
        .iter()
        .map(|&i| value(&records[i]))
        .fold(f64::INFINITY, f64::min);
    candidates
        .iter()
        .copied()
        .filter(|&i| value(&records[i]) <= best + ENERGY_TOLERANCE)
        .min_by(|&a, &b| cmp_records(&records[a], &records[b]))
}

/// Selects `τ₁`, `τ₂` and the gap from already evaluated records.
pub fn summarize(
    records: Vec<OrientationRecord>,
    elementary: Option<OrientationRecord>,
) -> Result<GapReport> {
    let all: Vec<usize> = (0..records.len()).collect();
    let tau1 = select(&records, &all, |r| r.energy_per_site)
        .ok_or_else(|| Error::Invariant("no orientations".into()))?;
    let e1 = records[tau1].energy_per_site;
    let excited: Vec<usize> = all
        .iter()
        .copied()
        .filter(|&i| records[i].energy_per_site > e1 + ENERGY_TOLERANCE)
        .collect();
    let tau2 = select(&records, &excited, |r| r.energy_per_site);
    let gap = records[tau1].single_particle_gap;
    let sector_gap = tau2.map(|i| records[i].energy_per_site - e1);
    let corrected = select(&records, &excited, |r| r.parity_corrected_energy)
        .map(|i| records[i].parity_corrected_energy - e1);
    Ok(GapReport {
        delta: sector_gap.map_or(gap, |s| s.min(gap)),
        parity_corrected_delta: corrected.map_or(gap, |s| s.min(gap)),
        parity_corrected_sector_gap: corrected,
        records,
        tau1,
        tau2,
        single_particle_gap: gap,
        sector_gap,
        elementary,
        upper_bound: true,
    })
}

/// Evaluates every orientation up to `max_multiplier` and selects `τ₁`, `τ₂` and `Δ`.
pub fn gap_scan(m: &CompactGraph, max_multiplier: usize, grid: &[usize]) -> Result<GapReport> {
    let mut jobs: Vec<(usize, u64)> = Vec::new();
    let families = orientation_families(m, max_multiplier)?;
    for (fi, f) in families.iter().enumerate() {
        jobs.extend((0..f.len()).map(|p| (fi, p)));
    }
    let records = par_map(&jobs, |&(fi, p)| {
        let f = &families[fi];
        evaluate_orientation(f, &f.signs(p), p, grid)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let elementary = match elementary_orientation(m) {
        Ok(cfg) => Some(evaluate_config(m, &cfg, grid)?),
        Err(Error::NonBipartite(_)) => None,
        Err(e) => return Err(e),
    };
    summarize(records, elementary)
}

/// Record for an explicit orientation.
pub fn evaluate_config(
    m: &CompactGraph,
    cfg: &OrientationConfig,
    grid: &[usize],
) -> Result<OrientationRecord> {
    let family = OrientationFamily::new(m, &cfg.multiplier)?;
    let signs = family.signs_of(cfg)?;
    let pattern = family
        .non_tree
        .iter()
        .enumerate()
        .fold(0u64, |acc, (b, &e)| acc | (u64::from(signs[e] == -1) << b));
    let tree_flipped = family.tree.iter().zip(&signs).any(|(&t, &s)| t && s == -1);
    let mut rec = evaluate_orientation(&family, &signs, pattern, grid)?;
    if tree_flipped {
        // outside the tree gauge: the pattern only names the non-tree signs
        rec.pattern = u64::MAX;
    }
    Ok(rec)
}

/// Orientation of the enumerated family matching a flux signature.
pub fn find_by_signature(
    list: &[FluxOrientation],
    multiplier: &[usize],
    signature: &[u8],
) -> Option<FluxOrientation> {
    list.iter()
        .find(|o| o.config.multiplier == multiplier && o.signature == signature)
        .cloned()
}
