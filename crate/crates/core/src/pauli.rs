//! Pauli strings over GF(2), the 3-tuple encoding and frustration matrices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf2::{intersection, kernel, row_space, BitMatrix, BitVec};

/// Single-qubit Pauli label, phases dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// `(j_x, j_z)` bits.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// 3-tuple group as bits `(b0, b1, b2)` packed little-first into a `u8` read left to right,
    /// i.e. X = 011 is returned as `0b011`.
    pub fn to_tuple3(self) -> u8 {
        // (b0, b1, b2) = [[0,1],[1,1],[1,0]] · (j_x, j_z)
        let (x, z) = self.bits();
        let b0 = z as u8;
        let b1 = (x ^ z) as u8;
        let b2 = x as u8;
        (b0 << 2) | (b1 << 1) | b2
    }

    pub fn from_tuple3(group: u8) -> Result<Pauli> {
        match group {
            0b000 => Ok(Pauli::I),
            0b011 => Ok(Pauli::X),
            0b101 => Ok(Pauli::Y),
            0b110 => Ok(Pauli::Z),
            g => Err(Error::Encoding(g)),
        }
    }

    /// X and Z swapped, Y and I fixed.
    pub fn flip_xz(self) -> Pauli {
        match self {
            Pauli::X => Pauli::Z,
            Pauli::Z => Pauli::X,
            p => p,
        }
    }

    pub fn anticommutes(self, other: Pauli) -> bool {
        self != Pauli::I && other != Pauli::I && self != other
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl TryFrom<char> for Pauli {
    type Error = Error;
    fn try_from(c: char) -> Result<Pauli> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            _ => Err(Error::Parse(format!("invalid Pauli label {c:?}"))),
        }
    }
}

/// A Pauli string `⊗ σ^{j}` stored as x and z bit strings.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliTerm {
    x: BitVec,
    z: BitVec,
}

impl PauliTerm {
    pub fn identity(n_qubits: usize) -> Self {
        Self {
            x: BitVec::zeros(n_qubits),
            z: BitVec::zeros(n_qubits),
        }
    }

    pub fn from_bits(x: BitVec, z: BitVec) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::Dimension(format!(
                "x has {} bits but z has {}",
                x.len(),
                z.len()
            )));
        }
        Ok(Self { x, z })
    }

    /// Inverse of [`PauliTerm::symplectic_vector`].
    pub fn from_symplectic(v: &BitVec) -> Result<Self> {
        if v.len() % 2 != 0 {
            return Err(Error::Dimension("symplectic vector of odd length".into()));
        }
        let n = v.len() / 2;
        Self::from_bits(v.slice(0, n), v.slice(n, 2 * n))
    }

    pub fn from_sparse(n_qubits: usize, factors: &[(usize, Pauli)]) -> Result<Self> {
        let mut t = Self::identity(n_qubits);
        for &(q, p) in factors {
            if q >= n_qubits {
                return Err(Error::Dimension(format!(
                    "qubit {q} outside {n_qubits} qubits"
                )));
            }
            t.set(q, p);
        }
        Ok(t)
    }

    pub fn n_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x.get(q), self.z.get(q))
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        let (x, z) = p.bits();
        self.x.set(q, x);
        self.z.set(q, z);
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn weight(&self) -> usize {
        (0..self.n_qubits())
            .filter(|&q| self.get(q) != Pauli::I)
            .count()
    }

    /// Product up to phase.
    pub fn mul(&self, other: &PauliTerm) -> PauliTerm {
        let mut out = self.clone();
        out.x.xor_assign(&other.x);
        out.z.xor_assign(&other.z);
        out
    }

    /// `x ‖ z`, the vector used for symplectic linear algebra.
    pub fn symplectic_vector(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    /// Row of the encoding matrix: one 3-bit group per qubit.
    pub fn tuple3_row(&self) -> BitVec {
        let n = self.n_qubits();
        let mut row = BitVec::zeros(3 * n);
        for q in 0..n {
            let g = self.get(q).to_tuple3();
            for b in 0..3 {
                row.set(3 * q + b, (g >> (2 - b)) & 1 == 1);
            }
        }
        row
    }

    pub fn from_tuple3_row(row: &BitVec) -> Result<Self> {
        if row.len() % 3 != 0 {
            return Err(Error::Dimension(format!(
                "encoded row length {} is not a multiple of 3",
                row.len()
            )));
        }
        let n = row.len() / 3;
        let mut t = Self::identity(n);
        for q in 0..n {
            let g = (0..3).fold(0u8, |acc, b| (acc << 1) | row.get(3 * q + b) as u8);
            t.set(q, Pauli::from_tuple3(g)?);
        }
        Ok(t)
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n_qubits() {
            write!(f, "{}", self.get(q).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliTerm({self})")
    }
}

impl FromStr for PauliTerm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let labels: Vec<Pauli> = s.chars().map(Pauli::try_from).collect::<Result<_>>()?;
        let mut t = Self::identity(labels.len());
        for (q, p) in labels.into_iter().enumerate() {
            t.set(q, p);
        }
        Ok(t)
    }
}

impl Serialize for PauliTerm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliTerm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Symplectic form `j_x·k_z + j_z·k_x mod 2`; true iff the terms anticommute.
pub fn symplectic_form(a: &PauliTerm, b: &PauliTerm) -> Result<bool> {
    if a.n_qubits() != b.n_qubits() {
        return Err(Error::Dimension(format!(
            "{} vs {} qubits",
            a.n_qubits(),
            b.n_qubits()
        )));
    }
    Ok(a.x.dot(&b.z) ^ a.z.dot(&b.x))
}

/// Symplectic form on `x ‖ z` vectors of equal length.
pub fn symplectic_dot(a: &BitVec, b: &BitVec) -> bool {
    let n = a.len() / 2;
    let mut acc = false;
    for i in a.ones() {
        let j = if i < n { i + n } else { i - n };
        acc ^= b.get(j);
    }
    acc
}

/// Encoding matrix 𝐁: one row per term, one 3-bit group per qubit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingMatrix {
    n_qubits: usize,
    rows: BitMatrix,
}

impl EncodingMatrix {
    pub fn from_rows(n_qubits: usize, rows: BitMatrix) -> Result<Self> {
        if rows.cols() != 3 * n_qubits {
            return Err(Error::Dimension(format!(
                "{} columns for {n_qubits} qubits",
                rows.cols()
            )));
        }
        for r in rows.row_vecs() {
            PauliTerm::from_tuple3_row(r)?;
        }
        Ok(Self { n_qubits, rows })
    }

    pub fn n_terms(&self) -> usize {
        self.rows.rows()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn rows(&self) -> &BitMatrix {
        &self.rows
    }

    pub fn terms(&self) -> Vec<PauliTerm> {
        self.rows
            .row_vecs()
            .iter()
            .map(|r| PauliTerm::from_tuple3_row(r).expect("validated rows"))
            .collect()
    }

    /// Constraint matrix 𝐄: row q has ones on the three bits of qubit q.
    pub fn constraint_matrix(&self) -> BitMatrix {
        let n = self.n_qubits;
        let mut e = BitMatrix::zeros(n, 3 * n);
        for q in 0..n {
            for b in 0..3 {
                e.set(q, 3 * q + b, true);
            }
        }
        e
    }
}

pub fn build_encoding(terms: &[PauliTerm], n_qubits: usize) -> Result<EncodingMatrix> {
    let mut rows = BitMatrix::zeros(0, 3 * n_qubits);
    for t in terms {
        if t.n_qubits() != n_qubits {
            return Err(Error::Dimension(format!(
                "term on {} qubits in a {n_qubits}-qubit list",
                t.n_qubits()
            )));
        }
        rows.push_row(t.tuple3_row())?;
    }
    Ok(EncodingMatrix { n_qubits, rows })
}

/// 𝐀 = 𝐁·𝐁ᵀ mod 2, the frustration-graph adjacency matrix.
pub fn frustration_matrix(b: &EncodingMatrix) -> BitMatrix {
    b.rows
        .mul(&b.rows.transpose())
        .expect("conformable by construction")
}

/// Dimensions of the symmetry spaces attached to a Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryStructure {
    pub dim_ker_a: usize,
    /// Products of terms equal to the identity: dim ker 𝐁ᵀ.
    pub dim_identity_products: usize,
    /// Products of terms commuting with every term: dim(im 𝐁ᵀ ∩ ker 𝐁).
    pub dim_pauli_symmetries: usize,
    /// dim((ker 𝐁 ∩ ker 𝐄) / im 𝐁ᵀ).
    pub dim_logicals: usize,
}

pub fn symmetry_structure(b: &EncodingMatrix) -> SymmetryStructure {
    let bm = &b.rows;
    let a = frustration_matrix(b);
    let dim_ker_a = kernel(&a).rows();
    let dim_identity_products = kernel(&bm.transpose()).rows();
    let im_bt = row_space(bm);
    let ker_b = kernel(bm);
    let dim_pauli_symmetries = intersection(&im_bt, &ker_b)
        .expect("same ambient space")
        .rows();
    let ker_e = kernel(&b.constraint_matrix());
    let commutant = intersection(&ker_b, &ker_e).expect("same ambient space");
    let trivial = intersection(&im_bt, &commutant).expect("same ambient space");
    SymmetryStructure {
        dim_ker_a,
        dim_identity_products,
        dim_pauli_symmetries,
        dim_logicals: commutant.rows() - trivial.rows(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> PauliTerm {
        s.parse().unwrap()
    }

    #[test]
    fn symplectic_examples() {
        assert!(symplectic_form(&t("X"), &t("Z")).unwrap());
        assert!(!symplectic_form(&t("X"), &t("X")).unwrap());
        assert!(!symplectic_form(&t("XX"), &t("YZ")).unwrap());
        assert!(symplectic_form(&t("X"), &t("XX")).is_err());
    }

    #[test]
    fn tuple3_table() {
        assert_eq!(Pauli::X.to_tuple3(), 0b011);
        assert_eq!(Pauli::Y.to_tuple3(), 0b101);
        assert_eq!(Pauli::Z.to_tuple3(), 0b110);
        assert_eq!(Pauli::I.to_tuple3(), 0b000);
        for p in Pauli::ALL {
            assert_eq!(Pauli::from_tuple3(p.to_tuple3()).unwrap(), p);
        }
        assert_eq!(Pauli::from_tuple3(0b111), Err(Error::Encoding(0b111)));
        assert!(Pauli::from_tuple3(0b100).is_err());
    }

    #[test]
    fn tuple_dot_is_anticommutation() {
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                let dot = (a.to_tuple3() & b.to_tuple3()).count_ones() % 2 == 1;
                assert_eq!(dot, a.anticommutes(b), "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn encoding_examples() {
        let b = build_encoding(&[t("ZZ")], 2).unwrap();
        assert_eq!(b.rows().row(0).to_bit_string(), "110110");
        let empty = build_encoding(&[], 3).unwrap();
        assert_eq!((empty.n_terms(), empty.rows().cols()), (0, 9));
        let xz = build_encoding(&[t("X"), t("Z")], 1).unwrap();
        assert_eq!(xz.rows().row(1).to_bit_string(), "110");
        assert_eq!(xz.rows().row(0).to_bit_string(), "011");
        let be = xz.rows().mul(&xz.constraint_matrix().transpose()).unwrap();
        assert!(be.is_zero());
    }

    #[test]
    fn frustration_examples() {
        let a = frustration_matrix(&build_encoding(&[t("X"), t("Z")], 1).unwrap());
        assert_eq!(
            a,
            BitMatrix::from_bools(&[vec![false, true], vec![true, false]]).unwrap()
        );
        let c = frustration_matrix(&build_encoding(&[t("XX"), t("ZZ")], 2).unwrap());
        assert!(c.is_zero());
    }

    #[test]
    fn structure_single_zz() {
        let s = symmetry_structure(&build_encoding(&[t("ZZ")], 2).unwrap());
        assert_eq!(s.dim_ker_a, 1);
        assert_eq!(s.dim_logicals, 2);
    }

    #[test]
    fn structure_xz_single_qubit() {
        let s = symmetry_structure(&build_encoding(&[t("X"), t("Z")], 1).unwrap());
        assert_eq!(s.dim_ker_a, 0);
        assert_eq!(s.dim_logicals, 0);
    }

    #[test]
    fn structure_periodic_xy_chain() {
        let terms = [t("XXII"), t("IYYI"), t("IIXX"), t("YIIY")];
        let s = symmetry_structure(&build_encoding(&terms, 4).unwrap());
        assert!(s.dim_ker_a >= 1);
        assert_eq!(
            s.dim_ker_a,
            s.dim_identity_products + s.dim_pauli_symmetries
        );
        // exhaustive products: subsets whose product commutes with every term
        let mut count = 0;
        for mask in 1u32..16 {
            let mut p = PauliTerm::identity(4);
            for (i, term) in terms.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    p = p.mul(term);
                }
            }
            if terms.iter().all(|x| !symplectic_form(&p, x).unwrap()) {
                count += 1;
            }
        }
        assert_eq!(count + 1, 1 << s.dim_ker_a);
    }
}
