//! Laurent polynomials in commuting translation variables and matrices of them.
//!
//! An entry `(i, j)` of an adjacency-type [`CompactMatrix`] containing `x^m` means that
//! vertex `i` of cell 0 is joined to vertex `j` of cell `m`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

pub const VARIABLES: [char; 3] = ['x', 'y', 'z'];
pub const MAX_DIM: usize = 3;
/// Default bound on |exponent| for parsed input.
pub const DEFAULT_EXPONENT_BOUND: i32 = 8;

/// Translation monomial `x^v`, compared lexicographically on `v`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<i32>);

impl Monomial {
    pub fn one(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    pub fn new(exponents: Vec<i32>) -> Self {
        assert!(
            exponents.len() <= MAX_DIM,
            "at most {MAX_DIM} translation variables"
        );
        Monomial(exponents)
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = vec![0; dim];
        v[axis] = 1;
        Monomial(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// First non-zero exponent is positive.
    pub fn is_positive(&self) -> bool {
        self.0.iter().find(|&&e| e != 0).is_some_and(|&e| e > 0)
    }

    pub fn max_abs(&self) -> i32 {
        self.0.iter().map(|e| e.abs()).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|e| -e).collect())
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.dim(), other.dim());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divide(&self, other: &Monomial) -> Monomial {
        self.times(&other.inverse())
    }

    pub fn check_bound(&self, bound: i32) -> Result<()> {
        match self.0.iter().find(|e| e.abs() > bound) {
            Some(&e) => Err(Error::Overflow {
                value: e as i64,
                bound,
            }),
            None => Ok(()),
        }
    }

    pub fn parse(s: &str, dim: usize) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid monomial {s:?} for dimension {dim}"));
        if dim > MAX_DIM {
            return Err(bad());
        }
        let mut e = vec![0i32; dim];
        if s == "1" {
            return Ok(Monomial(e));
        }
        let mut last: Option<usize> = None;
        if s.is_empty() || s.starts_with(' ') || s.ends_with(' ') || s.contains("  ") {
            return Err(bad());
        }
        for factor in s.split(' ') {
            let (var, exp) = match factor.split_once('^') {
                Some((v, x)) => {
                    let x: i32 = x.parse().map_err(|_| bad())?;
                    if x == 0 || x == 1 || x.to_string() != factor[v.len() + 1..] {
                        return Err(bad());
                    }
                    (v, x)
                }
                None => (factor, 1),
            };
            let mut chars = var.chars();
            let (Some(c), None) = (chars.next(), chars.next()) else {
                return Err(bad());
            };
            let axis = VARIABLES.iter().position(|&v| v == c).ok_or_else(bad)?;
            if axis >= dim || last.is_some_and(|l| l >= axis) {
                return Err(bad());
            }
            last = Some(axis);
            e[axis] = exp;
        }
        Ok(Monomial(e))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (axis, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}", VARIABLES[axis])?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Deserializes by inferring the dimension as the number of variables admitted (3);
/// callers that know the dimension should re-pad with [`Monomial::with_dim`].
impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Monomial::parse(&s, MAX_DIM).map_err(serde::de::Error::custom)
    }
}

impl Monomial {
    /// Truncates or zero-pads to `dim` axes; fails if a dropped axis carries an exponent.
    pub fn with_dim(&self, dim: usize) -> Result<Monomial> {
        if self.0.iter().skip(dim).any(|&e| e != 0) {
            return Err(Error::Dimension(format!(
                "monomial {self} has variables beyond dimension {dim}"
            )));
        }
        let mut v = self.0.clone();
        v.resize(dim, 0);
        Ok(Monomial(v))
    }
}

/// Coefficient ring of a Laurent polynomial.
pub trait Coeff: Copy + Eq + Ord + std::hash::Hash + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(self, other: Self) -> Self;
    fn mul(self, other: Self) -> Self;
    fn neg(self) -> Self;
    fn to_i64(self) -> i64;
    fn from_i64(v: i64) -> Result<Self>;
    fn is_zero(self) -> bool {
        self == Self::zero()
    }
}

/// GF(2) coefficient.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct F2(pub bool);

impl Coeff for F2 {
    fn zero() -> Self {
        F2(false)
    }
    fn one() -> Self {
        F2(true)
    }
    fn add(self, o: Self) -> Self {
        F2(self.0 ^ o.0)
    }
    fn mul(self, o: Self) -> Self {
        F2(self.0 & o.0)
    }
    fn neg(self) -> Self {
        self
    }
    fn to_i64(self) -> i64 {
        self.0 as i64
    }
    fn from_i64(v: i64) -> Result<Self> {
        match v {
            0 | 1 => Ok(F2(v == 1)),
            _ => Err(Error::Parse(format!("GF(2) entry {v}"))),
        }
    }
}

impl Coeff for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn neg(self) -> Self {
        -self
    }
    fn to_i64(self) -> i64 {
        self
    }
    fn from_i64(v: i64) -> Result<Self> {
        Ok(v)
    }
}

/// Laurent polynomial with canonical (sorted, zero-free) term storage.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<C: Coeff> {
    dim: usize,
    terms: BTreeMap<Monomial, C>,
}

pub type Poly2 = Poly<F2>;
pub type ZPoly = Poly<i64>;

impl<C: Coeff> Poly<C> {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::monomial(Monomial::one(dim), C::one())
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        let mut p = Self::zero(m.dim());
        p.add_term(m, c);
        p
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(dim);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).copied().unwrap_or(C::zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, C)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.terms.keys()
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        debug_assert_eq!(m.dim(), self.dim);
        let new = self.coeff(&m).add(c);
        if new.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, new);
        }
    }

    pub fn set_coeff(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, c);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                out.add_term(a.times(b), ca.mul(cb));
            }
        }
        out
    }

    /// Product with every exponent of the result kept within `bound`.
    pub fn checked_mul(&self, other: &Self, bound: i32) -> Result<Self> {
        let p = self.mul(other);
        p.check_bound(bound)?;
        Ok(p)
    }

    pub fn checked_add(&self, other: &Self, bound: i32) -> Result<Self> {
        let p = self.add(other);
        p.check_bound(bound)?;
        Ok(p)
    }

    /// `x^v → x^{-v}`.
    pub fn adjoint(&self) -> Self {
        Self::from_terms(self.dim, self.terms().map(|(m, c)| (m.inverse(), c)))
    }

    pub fn negate(&self) -> Self {
        Self::from_terms(self.dim, self.terms().map(|(m, c)| (m.clone(), c.neg())))
    }

    pub fn shift(&self, by: &Monomial) -> Self {
        Self::from_terms(self.dim, self.terms().map(|(m, c)| (m.times(by), c)))
    }

    pub fn max_abs_exponent(&self, axis: usize) -> i32 {
        self.terms
            .keys()
            .map(|m| m.0[axis].abs())
            .max()
            .unwrap_or(0)
    }

    pub fn check_bound(&self, bound: i32) -> Result<()> {
        self.terms.keys().try_for_each(|m| m.check_bound(bound))
    }

    /// Lexicographically smallest monomial.
    pub fn min_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next()
    }
}

impl<C: Coeff> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: Self) -> Poly<C> {
        Poly::add(self, rhs)
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        self.negate()
    }
}

impl<C: Coeff> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let one = C::one();
        for (i, (m, c)) in self.terms().enumerate() {
            let sign_neg = c == one.neg() && one.neg() != one;
            match (i, sign_neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if c != one && !sign_neg {
                write!(f, "{c:?}·")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Poly2 {
    /// Parses `"1 + x + x^-1 y"` style sums over GF(2).
    pub fn parse(s: &str, dim: usize) -> Result<Self> {
        let mut p = Self::zero(dim);
        if s.trim() == "0" {
            return Ok(p);
        }
        for part in s.split('+') {
            p.add_term(Monomial::parse(part.trim(), dim)?, F2(true));
        }
        Ok(p)
    }
}

/// Matrix of Laurent polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CompactMatrix<C: Coeff> {
    dim: usize,
    rows: usize,
    cols: usize,
    entries: Vec<Poly<C>>,
}

/// Unoriented adjacency, frustration graphs and bosonization matrices.
pub type CompactGraph = CompactMatrix<F2>;
/// Oriented adjacency with entries in {-1, 0, +1}.
pub type SignedCompact = CompactMatrix<i64>;

impl<C: Coeff> CompactMatrix<C> {
    pub fn zeros(dim: usize, rows: usize, cols: usize) -> Self {
        Self {
            dim,
            rows,
            cols,
            entries: vec![Poly::zero(dim); rows * cols],
        }
    }

    pub fn from_entries(
        dim: usize,
        rows: usize,
        cols: usize,
        entries: Vec<Poly<C>>,
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(p) = entries.iter().find(|p| p.dim() != dim) {
            return Err(Error::Dimension(format!(
                "entry of dimension {} in a dimension {dim} matrix",
                p.dim()
            )));
        }
        Ok(Self {
            dim,
            rows,
            cols,
            entries,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<C> {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Poly<C> {
        &mut self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly<C>) {
        debug_assert_eq!(p.dim(), self.dim);
        self.entries[i * self.cols + j] = p;
    }

    pub fn add_term(&mut self, i: usize, j: usize, m: Monomial, c: C) {
        self.entries[i * self.cols + j].add_term(m, c);
    }

    /// Entry-wise adjoint of the transpose, `M(x̄)ᵀ`.
    pub fn adjoint_transpose(&self) -> Self {
        let mut out = Self::zeros(self.dim, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).adjoint());
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows || self.dim != other.dim {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.dim, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero(self.dim);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// `M(x̄)ᵀ = M(x)`.
    pub fn is_self_adjoint(&self) -> bool {
        self.is_square() && self.adjoint_transpose() == *self
    }

    /// `M(x̄)ᵀ = -M(x)`.
    pub fn is_skew_adjoint(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let t = self.adjoint_transpose();
        t.entries
            .iter()
            .zip(&self.entries)
            .all(|(a, b)| *a == b.negate())
    }

    pub fn max_abs_exponents(&self) -> Vec<i32> {
        (0..self.dim)
            .map(|a| {
                self.entries
                    .iter()
                    .map(|p| p.max_abs_exponent(a))
                    .max()
                    .unwrap_or(0)
            })
            .collect()
    }

    pub fn check_bound(&self, bound: i32) -> Result<()> {
        self.entries.iter().try_for_each(|p| p.check_bound(bound))
    }

    /// Coefficient blocks keyed by monomial, each `rows × cols`.
    pub fn blocks(&self) -> BTreeMap<Monomial, Vec<Vec<C>>> {
        let mut out: BTreeMap<Monomial, Vec<Vec<C>>> = BTreeMap::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                for (m, c) in self.get(i, j).terms() {
                    out.entry(m.clone())
                        .or_insert_with(|| vec![vec![C::zero(); self.cols]; self.rows])[i][j] = c;
                }
            }
        }
        out
    }

    pub fn from_blocks(
        dim: usize,
        rows: usize,
        cols: usize,
        blocks: &BTreeMap<Monomial, Vec<Vec<C>>>,
    ) -> Result<Self> {
        let mut out = Self::zeros(dim, rows, cols);
        for (m, b) in blocks {
            if m.dim() != dim {
                return Err(Error::Dimension(format!("monomial {m} in dimension {dim}")));
            }
            if b.len() != rows || b.iter().any(|r| r.len() != cols) {
                return Err(Error::Dimension(format!("block {m} is not {rows}x{cols}")));
            }
            for (i, row) in b.iter().enumerate() {
                for (j, &c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        out.add_term(i, j, m.clone(), c);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Every monomial appearing anywhere.
    pub fn monomials(&self) -> std::collections::BTreeSet<Monomial> {
        self.entries
            .iter()
            .flat_map(|p| p.monomials().cloned())
            .collect()
    }

    /// Relabels vertices and shifts cell origins: vertex `i` moves to `perm[i]` with
    /// origin shifted by `shift[i]`, so `(i@0, j@m)` becomes `(perm i @ 0, perm j @ m + s_j - s_i)`.
    pub fn relabel(&self, perm: &[usize], shift: &[Monomial]) -> Self {
        assert!(self.is_square());
        let mut out = Self::zeros(self.dim, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = shift[j].divide(&shift[i]);
                out.set(perm[i], perm[j], self.get(i, j).shift(&d));
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    dim: usize,
    rows: usize,
    cols: usize,
    blocks: BTreeMap<String, Vec<Vec<i64>>>,
}

impl<C: Coeff> Serialize for CompactMatrix<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let blocks = self
            .blocks()
            .into_iter()
            .map(|(m, b)| {
                (
                    m.to_string(),
                    b.into_iter()
                        .map(|r| r.into_iter().map(C::to_i64).collect())
                        .collect(),
                )
            })
            .collect();
        MatrixRepr {
            dim: self.dim,
            rows: self.rows,
            cols: self.cols,
            blocks,
        }
        .serialize(s)
    }
}

impl<'de, C: Coeff> Deserialize<'de> for CompactMatrix<C> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = MatrixRepr::deserialize(d)?;
        let convert = || -> Result<Self> {
            let mut blocks = BTreeMap::new();
            for (k, b) in &r.blocks {
                let m = Monomial::parse(k, r.dim)?;
                let b = b
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|&v| C::from_i64(v))
                            .collect::<Result<Vec<C>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                blocks.insert(m, b);
            }
            Self::from_blocks(r.dim, r.rows, r.cols, &blocks)
        };
        convert().map_err(D::Error::custom)
    }
}

impl<C: Coeff> fmt::Debug for CompactMatrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl CompactGraph {
    /// Builds a GF(2) matrix from strings like `"x + x^-1"`.
    pub fn parse_rows(dim: usize, rows: &[&[&str]]) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map_or(0, |r| r.len());
        let mut out = Self::zeros(dim, n, cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension("ragged matrix".into()));
            }
            for (j, s) in row.iter().enumerate() {
                out.set(i, j, Poly2::parse(s, dim)?);
            }
        }
        Ok(out)
    }

    /// Square, self-adjoint and free of constant diagonal terms.
    pub fn validate_adjacency(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::Invariant(format!(
                "adjacency is {}x{}",
                self.rows, self.cols
            )));
        }
        if !self.is_self_adjoint() {
            return Err(Error::Invariant(
                "adjacency is not symmetric under x → x̄ with transposition".into(),
            ));
        }
        let one = Monomial::one(self.dim);
        if let Some(i) = (0..self.rows).find(|&i| self.get(i, i).coeff(&one).0) {
            return Err(Error::Invariant(format!(
                "vertex {i} is adjacent to itself"
            )));
        }
        Ok(())
    }

    /// Lifts to integer coefficients (each GF(2) term becomes +1).
    pub fn to_signed(&self) -> SignedCompact {
        let entries = self
            .entries
            .iter()
            .map(|p| ZPoly::from_terms(self.dim, p.terms().map(|(m, _)| (m.clone(), 1))))
            .collect();
        SignedCompact {
            dim: self.dim,
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Number of neighbours of each vertex in the infinite graph.
    pub fn degrees(&self) -> Vec<usize> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).len()).sum())
            .collect()
    }
}

impl SignedCompact {
    /// Coefficients restricted to {-1, 0, 1} and skew-adjoint.
    pub fn validate_oriented(&self) -> Result<()> {
        if let Some(p) = self
            .entries
            .iter()
            .find(|p| p.terms().any(|(_, c)| c.abs() != 1))
        {
            return Err(Error::Invariant(format!(
                "oriented entry {p} has a coefficient outside ±1"
            )));
        }
        if !self.is_skew_adjoint() {
            return Err(Error::Invariant(
                "oriented adjacency is not skew-adjoint".into(),
            ));
        }
        Ok(())
    }

    /// The underlying unoriented graph.
    pub fn support(&self) -> CompactGraph {
        let entries = self
            .entries
            .iter()
            .map(|p| Poly2::from_terms(self.dim, p.terms().map(|(m, _)| (m.clone(), F2(true)))))
            .collect();
        CompactGraph {
            dim: self.dim,
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }
}

/// Checks the 3-tuple alphabet per monomial for a `t × 3M` bosonization matrix.
pub fn validate_bosonization(b: &CompactGraph) -> Result<()> {
    if b.cols % 3 != 0 {
        return Err(Error::Dimension(format!(
            "{} columns is not a multiple of 3",
            b.cols
        )));
    }
    for i in 0..b.rows {
        for q in 0..b.cols / 3 {
            let mut seen: BTreeMap<&Monomial, u8> = BTreeMap::new();
            for bit in 0..3 {
                for m in b.get(i, 3 * q + bit).monomials() {
                    *seen.entry(m).or_default() |= 1 << (2 - bit);
                }
            }
            for (_, g) in seen {
                crate::pauli::Pauli::from_tuple3(g)?;
            }
        }
    }
    Ok(())
}

/// 𝒜 = ℬ·ℬ† mod 2 with constant diagonal terms removed.
pub fn compact_frustration(b: &CompactGraph) -> Result<CompactGraph> {
    validate_bosonization(b)?;
    let mut a = b.mul(&b.adjoint_transpose())?;
    let one = Monomial::one(b.dim);
    for i in 0..a.rows {
        a.get_mut(i, i).set_coeff(one.clone(), F2(false));
    }
    Ok(a)
}

/// Cells of an `L_1 × … × L_d` torus in row-major order (last axis fastest).
pub fn torus_cells(l: &[usize]) -> Vec<Vec<i64>> {
    let mut cells = vec![vec![]];
    for &side in l {
        cells = cells
            .into_iter()
            .flat_map(|c| {
                (0..side as i64).map(move |x| {
                    let mut c = c.clone();
                    c.push(x);
                    c
                })
            })
            .collect();
    }
    cells
}

/// Row-major index of a cell after wrapping each coordinate.
pub fn torus_index(cell: &[i64], l: &[usize]) -> usize {
    cell.iter().zip(l).fold(0usize, |acc, (&c, &side)| {
        acc * side + c.rem_euclid(side as i64) as usize
    })
}

/// Admissibility: distinct monomials of absolute size ≤ e stay distinct modulo L ≥ 2e + 1.
pub fn check_admissible(max_abs: &[i32], l: &[usize]) -> Result<()> {
    if max_abs.len() != l.len() {
        return Err(Error::Dimension(format!(
            "{} torus sides for dimension {}",
            l.len(),
            max_abs.len()
        )));
    }
    for (axis, (&e, &side)) in max_abs.iter().zip(l).enumerate() {
        let min = (2 * e as usize + 1).max(1);
        if side < min {
            return Err(Error::Truncation { axis, side, min });
        }
    }
    Ok(())
}

fn truncate_with<C: Coeff>(
    m: &CompactMatrix<C>,
    l: &[usize],
    mut emit: impl FnMut(usize, usize, C),
) -> Result<()> {
    check_admissible(&m.max_abs_exponents(), l)?;
    let cells = torus_cells(l);
    for (ci, cell) in cells.iter().enumerate() {
        for i in 0..m.rows {
            for j in 0..m.cols {
                for (mono, c) in m.get(i, j).terms() {
                    let target: Vec<i64> = cell
                        .iter()
                        .zip(mono.exponents())
                        .map(|(&a, &b)| a + b as i64)
                        .collect();
                    let cj = torus_index(&target, l);
                    emit(ci * m.rows + i, cj * m.cols + j, c);
                }
            }
        }
    }
    Ok(())
}

/// Block-circulant finite matrix on a periodic torus (GF(2) accumulation).
pub fn torus_truncate(m: &CompactGraph, l: &[usize]) -> Result<BitMatrix> {
    let n = torus_cells(l).len();
    let mut out = BitMatrix::zeros(n * m.rows, n * m.cols);
    truncate_with(m, l, |r, c, _| out.flip(r, c))?;
    Ok(out)
}

/// Integer version of [`torus_truncate`].
pub fn torus_truncate_signed(m: &SignedCompact, l: &[usize]) -> Result<DMatrix<i64>> {
    let n = torus_cells(l).len();
    let mut out = DMatrix::<i64>::zeros(n * m.rows, n * m.cols);
    truncate_with(m, l, |r, c, v| out[(r, c)] += v)?;
    Ok(out)
}

/// Precompiled Bloch Hamiltonian `H(k) = i·𝒜(k)`, `x_j → e^{i k_j}`.
#[derive(Debug, Clone)]
pub struct BlochHamiltonian {
    n: usize,
    dim: usize,
    terms: Vec<(usize, usize, f64, Vec<f64>)>,
}

impl BlochHamiltonian {
    pub fn new(m: &SignedCompact) -> Result<Self> {
        if !m.is_skew_adjoint() {
            return Err(Error::Invariant(
                "Bloch evaluation requires a skew-adjoint matrix".into(),
            ));
        }
        let mut terms = Vec::new();
        for i in 0..m.rows {
            for j in 0..m.cols {
                for (mono, c) in m.get(i, j).terms() {
                    terms.push((
                        i,
                        j,
                        c as f64,
                        mono.exponents().iter().map(|&e| e as f64).collect(),
                    ));
                }
            }
        }
        Ok(Self {
            n: m.rows,
            dim: m.dim,
            terms,
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, k: &[f64]) -> DMatrix<Complex64> {
        debug_assert_eq!(k.len(), self.dim);
        let mut h = DMatrix::<Complex64>::zeros(self.n, self.n);
        for (i, j, c, e) in &self.terms {
            let phase: f64 = e.iter().zip(k).map(|(a, b)| a * b).sum();
            // i · c · e^{iφ}
            h[(*i, *j)] += Complex64::new(-c * phase.sin(), c * phase.cos());
        }
        h
    }

    /// Ascending eigenvalues of `H(k)`.
    pub fn eigenvalues(&self, k: &[f64]) -> Vec<f64> {
        hermitian_eigenvalues(self.eval(k))
    }
}

pub fn bloch_evaluate(m: &SignedCompact, k: &[f64]) -> Result<DMatrix<Complex64>> {
    if k.len() != m.dim {
        return Err(Error::Dimension(format!(
            "k has {} components for dimension {}",
            k.len(),
            m.dim
        )));
    }
    Ok(BlochHamiltonian::new(m)?.eval(k))
}

/// Sorted eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(h: DMatrix<Complex64>) -> Vec<f64> {
    let n = h.nrows();
    let mut ev: Vec<f64> = match n {
        0 => vec![],
        1 => vec![h[(0, 0)].re],
        _ => h.symmetric_eigenvalues().iter().copied().collect(),
    };
    ev.sort_by(f64::total_cmp);
    ev
}
