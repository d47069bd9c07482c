//! Subspaces of `F_q^n`, their canonical forms, and the graphs `J_q(n,m,t)`.
//!
//! Every subspace is held by its unique RREF basis. The pivot columns of
//! that basis form the identifying vector, and enumeration walks the
//! identifying vectors in subset-lexicographic order (pivot position lists
//! compared lexicographically), then the free RREF entries as a base-`q`
//! counter over row-major positions with the last position fastest.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::ff::{FieldError, FieldSpec};
use crate::matq::{self, MatrixError, MatrixFq};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrassmannError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("adjacency is undefined for a vertex and itself")]
    SameVertex,
    #[error("subspaces live in different spaces: {0}")]
    Mismatch(String),
    #[error("cannot parse subspace encoding: {0}")]
    Parse(String),
}

/// A binary vector of length at most 64. Bit `i` is coordinate `i`
/// (0-based).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryVector {
    len: usize,
    bits: u64,
}

impl BinaryVector {
    pub fn new(len: usize, bits: u64) -> Self {
        assert!(len <= 64);
        assert!(len == 64 || bits >> len == 0, "bits beyond length");
        BinaryVector { len, bits }
    }

    pub fn from_ones(len: usize, ones: &[usize]) -> Self {
        Self::new(len, ones.iter().fold(0, |acc, &i| acc | 1 << i))
    }

    pub fn from_slice(v: &[u8]) -> Self {
        let ones: Vec<usize> = (0..v.len()).filter(|&i| v[i] != 0).collect();
        Self::from_ones(v.len(), &ones)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn ones(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    pub fn zeros(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| !self.get(i)).collect()
    }

    /// Coordinate-wise product.
    pub fn schur(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len);
        Self::new(self.len, self.bits & other.bits)
    }

    pub fn hamming_distance(&self, other: &Self) -> usize {
        assert_eq!(self.len, other.len);
        (self.bits ^ other.bits).count_ones() as usize
    }

    pub fn to_vec(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    /// All weight-`m` vectors of length `n`, in subset-lexicographic order
    /// of their support.
    pub fn all_of_weight(n: usize, m: usize) -> Vec<Self> {
        let mut out = Vec::new();
        if m > n {
            return out;
        }
        let mut idx: Vec<usize> = (0..m).collect();
        loop {
            out.push(Self::from_ones(n, &idx));
            let Some(i) = (0..m).rev().find(|&i| idx[i] != i + n - m) else {
                return out;
            };
            idx[i] += 1;
            for j in i + 1..m {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
}

impl fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryVector({self})")
    }
}

/// An `m`-dimensional subspace of `F_q^n` held by its RREF basis.
#[derive(Clone)]
pub struct Subspace {
    basis: MatrixFq,
    idvec: BinaryVector,
}

impl Subspace {
    /// The row space of any matrix (zero rows and dependencies allowed).
    pub fn from_generators(generators: &MatrixFq) -> Self {
        let (r, pivots) = generators.rref();
        let basis = r.select_rows(&(0..pivots.len()).collect::<Vec<_>>());
        let idvec = BinaryVector::from_ones(generators.cols(), &pivots);
        Subspace { basis, idvec }
    }

    /// Wraps a matrix that must already be a full-rank RREF basis.
    pub fn from_rref(basis: MatrixFq) -> Result<Self, GrassmannError> {
        if !basis.is_rref() || basis.rank() != basis.rows() {
            return Err(GrassmannError::Parse(
                "basis is not a full-rank RREF matrix".into(),
            ));
        }
        let pivots: Vec<usize> = (0..basis.rows())
            .map(|i| basis.row(i).iter().position(|&x| x != 0).unwrap())
            .collect();
        let idvec = BinaryVector::from_ones(basis.cols(), &pivots);
        Ok(Subspace { basis, idvec })
    }

    pub fn basis(&self) -> &MatrixFq {
        &self.basis
    }

    pub fn field(&self) -> &FieldSpec {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    /// Pivot positions of the RREF basis.
    pub fn identifying_vector(&self) -> BinaryVector {
        self.idvec
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.idvec.ones()
    }

    pub fn intersection_dim(&self, other: &Self) -> Result<usize, GrassmannError> {
        Ok(matq::intersection_dim(&self.basis, &other.basis)?)
    }

    /// Canonical text key: `q=<q>;n=<n>;m=<m>;rows=[[..],[..]]`, each entry
    /// written as its base-`p` coefficient digits, constant term first.
    pub fn encode(&self) -> String {
        let f = self.field();
        let rows: Vec<String> = (0..self.dim())
            .map(|i| {
                let entries: Vec<String> = self
                    .basis
                    .row(i)
                    .iter()
                    .map(|&x| encode_entry(f, x))
                    .collect();
                format!("[{}]", entries.join(","))
            })
            .collect();
        format!(
            "q={};n={};m={};rows=[{}]",
            f.order(),
            self.ambient_dim(),
            self.dim(),
            rows.join(",")
        )
    }

    pub fn parse(s: &str) -> Result<Self, GrassmannError> {
        let field_of = |key: &str, part: Option<&str>| -> Result<String, GrassmannError> {
            let part = part.ok_or_else(|| GrassmannError::Parse(format!("missing {key}")))?;
            part.strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .map(str::to_string)
                .ok_or_else(|| GrassmannError::Parse(format!("expected {key}= in {part:?}")))
        };
        let mut parts = s.splitn(4, ';');
        let num = |v: String| {
            v.parse::<u64>()
                .map_err(|_| GrassmannError::Parse(format!("bad integer {v:?}")))
        };
        let q = num(field_of("q", parts.next())?)?;
        let n = num(field_of("n", parts.next())?)? as usize;
        let m = num(field_of("m", parts.next())?)? as usize;
        let rows = field_of("rows", parts.next())?;
        let field = FieldSpec::with_order(q)?;
        let inner = rows
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| GrassmannError::Parse("rows must be bracketed".into()))?;
        let mut data = Vec::with_capacity(n * m);
        let mut count = 0;
        if !inner.is_empty() {
            for row in inner.split("],[") {
                let row = row.trim_start_matches('[').trim_end_matches(']');
                let entries: Vec<&str> = if row.is_empty() {
                    vec![]
                } else {
                    row.split(',').collect()
                };
                if entries.len() != n {
                    return Err(GrassmannError::Parse(format!(
                        "row of length {} for n={n}",
                        entries.len()
                    )));
                }
                for e in entries {
                    data.push(decode_entry(&field, e)?);
                }
                count += 1;
            }
        }
        if count != m {
            return Err(GrassmannError::Parse(format!("{count} rows for m={m}")));
        }
        let basis = MatrixFq::from_vec(&field, m, n, data)?;
        let sub = Self::from_rref(basis)?;
        Ok(sub)
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.basis.cols().hash(state);
        self.basis.data().hash(state);
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace({})", self.encode())
    }
}

fn encode_entry(field: &FieldSpec, x: u32) -> String {
    let p = field.characteristic();
    let digits = field.coeffs(x);
    if p <= 36 {
        digits
            .iter()
            .map(|&d| char::from_digit(d, 36).unwrap())
            .collect()
    } else {
        let parts: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
        parts.join(".")
    }
}

fn decode_entry(field: &FieldSpec, s: &str) -> Result<u32, GrassmannError> {
    let p = field.characteristic();
    let digits: Option<Vec<u32>> = if p <= 36 {
        s.chars().map(|c| c.to_digit(36)).collect()
    } else {
        s.split('.').map(|d| d.parse().ok()).collect()
    };
    let digits = digits.ok_or_else(|| GrassmannError::Parse(format!("bad entry {s:?}")))?;
    field
        .from_coeffs(&digits)
        .map_err(|_| GrassmannError::Parse(format!("bad entry {s:?}")))
}

/// Validated `(q, n, m, t)` with `1 <= t < m < n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassmannParams {
    pub q: u64,
    pub n: usize,
    pub m: usize,
    pub t: usize,
    field: FieldSpec,
}

impl GrassmannParams {
    pub fn new(q: u64, n: usize, m: usize, t: usize) -> Result<Self, GrassmannError> {
        let field = FieldSpec::with_order(q)?;
        if !(1 <= t && t < m && m < n) {
            return Err(GrassmannError::Params(format!(
                "need 1 <= t < m < n, got n={n} m={m} t={t}"
            )));
        }
        if n > 64 {
            return Err(GrassmannError::Params(format!("n={n} exceeds 64")));
        }
        Ok(GrassmannParams { q, n, m, t, field })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn vertex_count(&self) -> BigUint {
        matq::gaussian_binomial_or_zero(self.n as u64, self.m as u64, self.q)
    }
}

impl fmt::Display for GrassmannParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J_{}({},{},{})", self.q, self.n, self.m, self.t)
    }
}

/// The set of `m`-subspaces of `F_q^n` with ranking and unranking.
#[derive(Clone, Debug)]
pub struct Grassmannian {
    field: FieldSpec,
    n: usize,
    m: usize,
    idvecs: Vec<BinaryVector>,
    offsets: Vec<u64>,
    position: HashMap<u64, usize>,
}

/// Free RREF positions `(row, col)` for pivot set `u`, row-major.
pub fn free_positions(u: &BinaryVector) -> Vec<(usize, usize)> {
    let pivots = u.ones();
    let mut out = Vec::new();
    for (row, &r) in pivots.iter().enumerate() {
        for c in r + 1..u.len() {
            if !u.get(c) {
                out.push((row, c));
            }
        }
    }
    out
}

impl Grassmannian {
    pub fn new(field: &FieldSpec, n: usize, m: usize) -> Result<Self, GrassmannError> {
        if m < 1 || m > n || n > 64 {
            return Err(GrassmannError::Params(format!(
                "need 1 <= m <= n <= 64, got n={n} m={m}"
            )));
        }
        let q = field.order() as u64;
        let idvecs = BinaryVector::all_of_weight(n, m);
        let mut offsets = Vec::with_capacity(idvecs.len() + 1);
        let mut total = 0u64;
        for u in &idvecs {
            offsets.push(total);
            let block = q
                .checked_pow(free_positions(u).len() as u32)
                .and_then(|b| b.checked_add(total))
                .ok_or_else(|| GrassmannError::Params("Grassmannian too large to index".into()))?;
            total = block;
        }
        offsets.push(total);
        let position = idvecs
            .iter()
            .enumerate()
            .map(|(i, u)| (u.bits(), i))
            .collect();
        Ok(Grassmannian {
            field: field.clone(),
            n,
            m,
            idvecs,
            offsets,
            position,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> u64 {
        *self.offsets.last().unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn identifying_vectors(&self) -> &[BinaryVector] {
        &self.idvecs
    }

    fn build(&self, u: &BinaryVector, mut counter: u64) -> Subspace {
        let q = self.field.order() as u64;
        let free = free_positions(u);
        let mut basis = MatrixFq::zeros(&self.field, self.m, self.n);
        for (row, c) in u.ones().into_iter().enumerate() {
            basis.set(row, c, 1);
        }
        for &(row, c) in free.iter().rev() {
            basis.set(row, c, (counter % q) as u32);
            counter /= q;
        }
        Subspace { basis, idvec: *u }
    }

    /// The vertex at position `index` of the canonical enumeration.
    pub fn subspace_at(&self, index: u64) -> Option<Subspace> {
        if index >= self.len() {
            return None;
        }
        let block = self.offsets.partition_point(|&o| o <= index) - 1;
        Some(self.build(&self.idvecs[block], index - self.offsets[block]))
    }

    /// Position of `s` in the canonical enumeration.
    pub fn index_of(&self, s: &Subspace) -> Result<u64, GrassmannError> {
        if s.field() != &self.field || s.dim() != self.m || s.ambient_dim() != self.n {
            return Err(GrassmannError::Mismatch(format!(
                "{s:?} is not an {}-subspace of {}^{}",
                self.m, self.field, self.n
            )));
        }
        let u = s.identifying_vector();
        let block = self.position[&u.bits()];
        let q = self.field.order() as u64;
        let counter = free_positions(&u)
            .iter()
            .fold(0u64, |acc, &(row, c)| acc * q + s.basis.get(row, c) as u64);
        Ok(self.offsets[block] + counter)
    }

    pub fn iter(&self) -> impl Iterator<Item = Subspace> + '_ {
        self.idvecs.iter().flat_map(move |u| {
            let size = self.field.order() as u64;
            let count = size.pow(free_positions(u).len() as u32);
            (0..count).map(move |c| self.build(u, c))
        })
    }

    /// All subspaces with identifying vector `u`, in counter order.
    pub fn with_identifying_vector<'a>(
        &'a self,
        u: &'a BinaryVector,
    ) -> impl Iterator<Item = Subspace> + 'a {
        let count = (self.field.order() as u64).pow(free_positions(u).len() as u32);
        (0..count).map(move |c| self.build(u, c))
    }
}

/// Every `m`-subspace of `F_q^n` once, in canonical order.
pub fn enumerate_subspaces(q: u64, n: usize, m: usize) -> Result<Vec<Subspace>, GrassmannError> {
    let field = FieldSpec::with_order(q)?;
    let g = Grassmannian::new(&field, n, m)?;
    Ok(g.iter().collect())
}

/// Adjacency in `J_q(n,m,t)`: the intersection has dimension at least `t`.
pub fn adjacent(s: &Subspace, t_space: &Subspace, t: usize) -> Result<bool, GrassmannError> {
    if s == t_space {
        return Err(GrassmannError::SameVertex);
    }
    if s.dim() != t_space.dim() {
        return Err(GrassmannError::Mismatch("dimensions differ".into()));
    }
    Ok(s.intersection_dim(t_space)? >= t)
}

/// Number of `m`-spaces meeting a fixed `m`-space in exactly dimension `i`.
pub fn meet_count(q: u64, n: usize, m: usize, i: usize) -> BigUint {
    let (n, m, i) = (n as u64, m as u64, i as u64);
    matq::gaussian_binomial_or_zero(m, i, q)
        * matq::gaussian_binomial_or_zero(n - m, m - i, q)
        * BigUint::from(q).pow(((m - i) * (m - i)) as u32)
}

/// Valency of `J_q(n,m,t)`.
pub fn degree_formula(params: &GrassmannParams) -> BigUint {
    (params.t..params.m).fold(BigUint::zero(), |acc, i| {
        acc + meet_count(params.q, params.n, params.m, i)
    })
}

/// The orthogonal complement, as a canonical subspace.
pub fn dualize(s: &Subspace) -> Subspace {
    let c = matq::orthogonal_complement(s.basis()).expect("canonical bases have full rank");
    Subspace::from_rref(c).expect("complement is returned in RREF")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u64) -> FieldSpec {
        FieldSpec::with_order(q).unwrap()
    }

    fn span_of(q: u64, rows: &[Vec<u32>]) -> Subspace {
        Subspace::from_generators(&MatrixFq::from_rows(&field(q), rows).unwrap())
    }

    fn e(n: usize, i: usize) -> Vec<u32> {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    }

    #[test]
    fn weight_vectors_in_subset_order() {
        let vs: Vec<String> = BinaryVector::all_of_weight(4, 2)
            .iter()
            .map(|v| v.to_string())
            .collect();
        assert_eq!(vs, ["1100", "1010", "1001", "0110", "0101", "0011"]);
        assert_eq!(BinaryVector::all_of_weight(3, 0).len(), 1);
        assert!(BinaryVector::all_of_weight(2, 3).is_empty());
    }

    #[test]
    fn enumeration_small_cases() {
        assert_eq!(enumerate_subspaces(2, 2, 2).unwrap().len(), 1);
        let lines = enumerate_subspaces(2, 2, 1).unwrap();
        let mut got: Vec<Vec<u32>> = lines.iter().map(|s| s.basis().row(0).to_vec()).collect();
        got.sort();
        assert_eq!(got, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(enumerate_subspaces(2, 4, 2).unwrap().len(), 35);
    }

    #[test]
    fn enumeration_counts_match_gaussian_binomials() {
        for q in [2u64, 3] {
            for n in 1..=6usize {
                for m in 1..=n {
                    if q == 3 && n == 6 && (m == 3) {
                        continue; // 33880 vertices; covered by the 2-case and index tests
                    }
                    let g = Grassmannian::new(&field(q), n, m).unwrap();
                    let all: Vec<Subspace> = g.iter().collect();
                    assert_eq!(
                        BigUint::from(all.len()),
                        matq::gaussian_binomial(n as u64, m as u64, q).unwrap()
                    );
                    assert_eq!(all.len() as u64, g.len());
                    let distinct: std::collections::HashSet<_> = all.iter().collect();
                    assert_eq!(distinct.len(), all.len());
                    assert!(all.iter().all(|s| s.basis().is_rref() && s.dim() == m));
                }
            }
        }
    }

    #[test]
    fn ranking_round_trips() {
        let g = Grassmannian::new(&field(3), 5, 2).unwrap();
        for (i, s) in g.iter().enumerate() {
            assert_eq!(g.index_of(&s).unwrap(), i as u64);
            assert_eq!(g.subspace_at(i as u64).unwrap(), s);
        }
        assert!(g.subspace_at(g.len()).is_none());
    }

    #[test]
    fn identifying_vectors() {
        // Pivots at 1-based positions 1, 2, 4 in F^6.
        let s = span_of(
            3,
            &[
                vec![1, 0, 2, 0, 1, 1],
                vec![0, 1, 1, 0, 2, 0],
                vec![0, 0, 0, 1, 1, 2],
            ],
        );
        assert_eq!(s.identifying_vector().to_vec(), vec![1, 1, 0, 1, 0, 0]);
        let full = span_of(2, &[e(3, 0), e(3, 1), e(3, 2)]);
        assert_eq!(full.identifying_vector().to_vec(), vec![1, 1, 1]);
        let e3 = span_of(5, &[e(5, 2)]);
        assert_eq!(e3.identifying_vector().to_vec(), vec![0, 0, 1, 0, 0]);
    }

    #[test]
    fn adjacency_examples() {
        let a = span_of(2, &[e(4, 0), e(4, 1)]);
        let b = span_of(2, &[e(4, 0), e(4, 2)]);
        let c = span_of(2, &[e(4, 2), e(4, 3)]);
        assert!(adjacent(&a, &b, 1).unwrap());
        assert!(!adjacent(&a, &c, 1).unwrap());
        assert_eq!(adjacent(&a, &a, 1), Err(GrassmannError::SameVertex));
    }

    #[test]
    fn degree_formula_examples() {
        let p = GrassmannParams::new(2, 4, 2, 1).unwrap();
        assert_eq!(degree_formula(&p), BigUint::from(18u32));
        let p = GrassmannParams::new(2, 5, 2, 1).unwrap();
        assert_eq!(degree_formula(&p), BigUint::from(42u32));
        let p = GrassmannParams::new(3, 6, 3, 2).unwrap();
        assert_eq!(degree_formula(&p), meet_count(3, 6, 3, 2));
    }

    #[test]
    fn every_vertex_has_formula_degree() {
        for (q, n, m, t) in [
            (2u64, 4usize, 2usize, 1usize),
            (2, 5, 2, 1),
            (2, 5, 3, 2),
            (3, 4, 2, 1),
        ] {
            let params = GrassmannParams::new(q, n, m, t).unwrap();
            let all = enumerate_subspaces(q, n, m).unwrap();
            let expected = degree_formula(&params);
            for s in &all {
                let deg = all
                    .iter()
                    .filter(|x| *x != s && s.intersection_dim(x).unwrap() >= t)
                    .count();
                assert_eq!(BigUint::from(deg), expected, "{s:?}");
            }
        }
    }

    #[test]
    fn params_validation() {
        assert!(GrassmannParams::new(2, 4, 2, 0).is_err());
        assert!(GrassmannParams::new(2, 4, 2, 2).is_err());
        assert!(GrassmannParams::new(2, 4, 4, 1).is_err());
        assert!(GrassmannParams::new(6, 4, 2, 1).is_err());
        assert!(GrassmannParams::new(4, 4, 2, 1).is_ok());
    }

    #[test]
    fn duality_examples() {
        let a = span_of(2, &[e(4, 0), e(4, 1)]);
        assert_eq!(dualize(&a), span_of(2, &[e(4, 2), e(4, 3)]));
        for s in enumerate_subspaces(2, 5, 3).unwrap() {
            let d = dualize(&s);
            assert_eq!(d.dim(), 2);
            assert_eq!(dualize(&d), s);
        }
    }

    #[test]
    fn duality_preserves_adjacency_exhaustively() {
        let all = enumerate_subspaces(2, 5, 3).unwrap();
        let duals: Vec<Subspace> = all.iter().map(dualize).collect();
        let distinct: std::collections::HashSet<_> = duals.iter().collect();
        assert_eq!(distinct.len(), 155);
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                assert_eq!(
                    adjacent(&all[i], &all[j], 2).unwrap(),
                    adjacent(&duals[i], &duals[j], 1).unwrap()
                );
            }
        }
    }

    #[test]
    fn intersection_bounded_by_schur_weight() {
        for (q, n, m) in [(2u64, 5usize, 2usize), (2, 6, 3), (3, 4, 2)] {
            let all = enumerate_subspaces(q, n, m).unwrap();
            for (i, s) in all.iter().enumerate() {
                for t in all.iter().skip(i + 1).step_by(3) {
                    let bound = s
                        .identifying_vector()
                        .schur(&t.identifying_vector())
                        .weight();
                    assert!(s.intersection_dim(t).unwrap() <= bound);
                }
            }
        }
    }

    #[test]
    fn hamming_schur_identity() {
        for len in 0..=10usize {
            let max = 1u64 << len;
            for a in 0..max {
                for b in (0..max).step_by(if len > 7 { 13 } else { 1 }) {
                    let u = BinaryVector::new(len, a);
                    let v = BinaryVector::new(len, b);
                    assert_eq!(
                        u.hamming_distance(&v),
                        u.weight() + v.weight() - 2 * u.schur(&v).weight()
                    );
                }
            }
        }
    }

    #[test]
    fn encoding_is_bit_exact_and_round_trips() {
        let s = span_of(2, &[vec![1, 0, 1, 1], vec![0, 1, 0, 1]]);
        assert_eq!(s.encode(), "q=2;n=4;m=2;rows=[[1,0,1,1],[0,1,0,1]]");
        assert_eq!(Subspace::parse(&s.encode()).unwrap(), s);
        // GF(4): the class of x is written "01" (constant term first).
        let f4 = field(4);
        let s4 = Subspace::from_generators(&MatrixFq::from_rows(&f4, &[[1u32, 2, 3]]).unwrap());
        assert_eq!(s4.encode(), "q=4;n=3;m=1;rows=[[10,01,11]]");
        assert_eq!(Subspace::parse(&s4.encode()).unwrap(), s4);
        for bad in [
            "q=2;n=4;m=2;rows=[[1,0,1,1]]",
            "q=2;n=4;m=1;rows=[[0,1,1,1],[1,0,0,0]]",
            "q=2;n=2;m=1;rows=[[1,1,0]]",
            "q=6;n=2;m=1;rows=[[1,0]]",
            "q=2;n=2;m=1;rows=[[0,1]]x",
            "n=2;q=2;m=1;rows=[[1,0]]",
        ] {
            assert!(Subspace::parse(bad).is_err(), "{bad}");
        }
        // Non-canonical basis is rejected.
        assert!(Subspace::parse("q=2;n=2;m=1;rows=[[1,1]]").is_ok());
        assert!(Subspace::parse("q=3;n=2;m=1;rows=[[2,1]]").is_err());
    }
}
