//! Dense linear algebra over GF(2).

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const W: usize = 64;

/// Packed bit vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(W)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / W] >> (i % W)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i % W);
        if b {
            self.words[i / W] |= m;
        } else {
            self.words[i / W] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / W] ^= 1u64 << (i % W);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * W + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    pub fn slice(&self, start: usize, end: usize) -> BitVec {
        let mut out = BitVec::zeros(end - start);
        for i in start..end {
            if self.get(i) {
                out.set(i - start, true);
            }
        }
        out
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut v = BitVec::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => {
                    return Err(Error::Parse(format!(
                        "invalid bit character {c:?} in {s:?}"
                    )))
                }
            }
        }
        Ok(v)
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({})", self.to_bit_string())
    }
}

impl Serialize for BitVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_bit_string())
    }
}

impl<'de> Deserialize<'de> for BitVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BitVec::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Row-major bit matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    data: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Dimension(format!(
                "row of length {} in a matrix with {cols} columns",
                r.len()
            )));
        }
        Ok(Self { cols, data: rows })
    }

    pub fn from_bools(rows: &[Vec<bool>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(cols, rows.iter().map(|r| BitVec::from_bools(r)).collect())
    }

    pub fn rows(&self) -> usize {
        self.data.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        self.data[r].set(c, b)
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r].flip(c)
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    pub fn row_vecs(&self) -> &[BitVec] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.data
    }

    pub fn push_row(&mut self, row: BitVec) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::Dimension(format!(
                "row of length {} pushed to {} columns",
                row.len(),
                self.cols
            )));
        }
        self.data.push(row);
        Ok(())
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows());
        for (r, row) in self.data.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols,
                other.rows(),
                other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows(), other.cols);
        for (r, row) in self.data.iter().enumerate() {
            for k in row.ones() {
                out.data[r].xor_assign(&other.data[k]);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.rows());
        for (r, row) in self.data.iter().enumerate() {
            out.set(r, row.dot(v));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVec::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows() == self.cols && *self == self.transpose()
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot stack {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(BitMatrix {
            cols: self.cols,
            data,
        })
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == m.len() {
                break;
            }
            let Some(p) = (r..m.len()).find(|&i| m[i].get(c)) else {
                continue;
            };
            m.swap(r, p);
            let pivot = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.truncate(r);
        (
            BitMatrix {
                cols: self.cols,
                data: m,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows(), self.cols)?;
        for row in &self.data {
            writeln!(f, "  {}", row.to_bit_string())?;
        }
        write!(f, "]")
    }
}

impl Serialize for BitMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.data.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BitMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<BitVec>::deserialize(d)?;
        let cols = rows.first().map_or(0, BitVec::len);
        BitMatrix::from_rows(cols, rows).map_err(serde::de::Error::custom)
    }
}

/// Kernel, image and rank of a matrix `M` acting on column vectors.
#[derive(Debug, Clone)]
pub struct Gf2Solution {
    /// Basis of `{v : M v = 0}`, one vector per row, in reduced echelon form.
    pub kernel: BitMatrix,
    /// Basis of the column space of `M`, one vector per row, in reduced echelon form.
    pub image: BitMatrix,
    pub rank: usize,
}

pub fn gf2_solve(m: &BitMatrix) -> Gf2Solution {
    let kernel = kernel(m);
    let image = row_space(&m.transpose());
    let rank = image.rows();
    Gf2Solution {
        kernel,
        image,
        rank,
    }
}

/// Basis of the row space in reduced echelon form.
pub fn row_space(m: &BitMatrix) -> BitMatrix {
    m.rref().0
}

/// Null space basis, reduced to echelon form.
pub fn kernel(m: &BitMatrix) -> BitMatrix {
    let (r, pivots) = m.rref();
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = BitVec::zeros(n);
        v.set(free, true);
        for (row, &p) in r.row_vecs().iter().zip(&pivots) {
            if row.get(free) {
                v.set(p, true);
            }
        }
        basis.push(v);
    }
    let k = BitMatrix {
        cols: n,
        data: basis,
    };
    k.rref().0
}

/// Basis of the intersection of two row spaces, in reduced echelon form.
pub fn intersection(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
    if a.cols() != b.cols() {
        return Err(Error::Dimension(
            "intersection of subspaces of different ambient dimension".into(),
        ));
    }
    let a = row_space(a);
    let b = row_space(b);
    // Combinations (s, t) with s·A = t·B; the image s·A spans the intersection.
    let stacked = a.stack(&b)?;
    let deps = kernel(&stacked.transpose());
    let mut out = BitMatrix::zeros(0, a.cols());
    for d in deps.row_vecs() {
        let mut v = BitVec::zeros(a.cols());
        for i in d.ones().take_while(|&i| i < a.rows()) {
            v.xor_assign(a.row(i));
        }
        out.push_row(v)?;
    }
    Ok(row_space(&out))
}

/// Reduces `v` modulo the row space of an RREF matrix with the given pivots.
pub fn reduce(v: &BitVec, rref: &BitMatrix, pivots: &[usize]) -> BitVec {
    let mut out = v.clone();
    for (row, &p) in rref.row_vecs().iter().zip(pivots) {
        if out.get(p) {
            out.xor_assign(row);
        }
    }
    out
}

/// Solves `M x = b`; returns one solution (free variables zero) if consistent.
pub fn solve_affine(m: &BitMatrix, b: &BitVec) -> Option<BitVec> {
    let n = m.cols();
    let mut aug = BitMatrix::zeros(0, n + 1);
    for (r, row) in m.row_vecs().iter().enumerate() {
        let mut v = row.concat(&BitVec::zeros(1));
        v.set(n, b.get(r));
        aug.push_row(v).ok()?;
    }
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = BitVec::zeros(n);
    for (row, &p) in r.row_vecs().iter().zip(&pivots) {
        if row.get(n) {
            x.set(p, true);
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> BitMatrix {
        let rows: Vec<BitVec> = rows.iter().map(|r| BitVec::parse(r).unwrap()).collect();
        BitMatrix::from_rows(rows[0].len(), rows).unwrap()
    }

    #[test]
    fn identity_has_empty_kernel() {
        let s = gf2_solve(&BitMatrix::identity(5));
        assert_eq!(s.kernel.rows(), 0);
        assert_eq!(s.rank, 5);
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let s = gf2_solve(&BitMatrix::zeros(3, 7));
        assert_eq!(s.kernel.rows(), 7);
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn kernel_is_exhaustive_on_fixed_matrix() {
        let a = m(&[
            "10110100", "01101001", "11011101", "00000011", "10101010", "01100110",
        ]);
        let s = gf2_solve(&a);
        let span: std::collections::BTreeSet<u32> = (0u32..1 << s.kernel.rows())
            .map(|mask| {
                let mut v = BitVec::zeros(8);
                for (i, row) in s.kernel.row_vecs().iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        v.xor_assign(row);
                    }
                }
                (0..8).filter(|&i| v.get(i)).map(|i| 1u32 << i).sum()
            })
            .collect();
        let brute: std::collections::BTreeSet<u32> = (0u32..256)
            .filter(|x| {
                let v = BitVec::from_bools(&(0..8).map(|i| x >> i & 1 == 1).collect::<Vec<_>>());
                a.mul_vec(&v).is_zero()
            })
            .collect();
        assert_eq!(span, brute);
        assert_eq!(s.rank + s.kernel.rows(), 8);
    }

    #[test]
    fn intersection_of_overlapping_planes() {
        let a = m(&["1100", "0011"]);
        let b = m(&["1111", "1000"]);
        let i = intersection(&a, &b).unwrap();
        assert_eq!(i, m(&["1111"]));
    }

    #[test]
    fn affine_solve() {
        let a = m(&["110", "011"]);
        let x = solve_affine(&a, &BitVec::parse("10").unwrap()).unwrap();
        assert_eq!(a.mul_vec(&x), BitVec::parse("10").unwrap());
        let inconsistent = m(&["11", "11"]);
        assert!(solve_affine(&inconsistent, &BitVec::parse("10").unwrap()).is_none());
    }

    #[test]
    fn bit_string_round_trip() {
        let v = BitVec::parse("0110010").unwrap();
        assert_eq!(v.to_bit_string(), "0110010");
        assert!(BitVec::parse("012").is_err());
    }
}
