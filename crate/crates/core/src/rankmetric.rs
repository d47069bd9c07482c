//! Gabidulin codes in `M_{m x h}(F_q)`, their cosets, and the lifting maps.
//!
//! Codewords are evaluations `(f(g_1), .., f(g_m))` of linearized
//! polynomials `f = sum_{i<k} a_i x^{q^i}` with `a_i` in `F_{q^h}` and
//! `g_j = theta^{j-1}`. Coordinate `c_j` becomes row `j` of the matrix,
//! written over the basis `(1, theta, .., theta^{h-1})` of `F_{q^h}/F_q`.
//!
//! Cosets of the code are indexed through a fixed complement: the
//! non-pivot coordinates of the code's RREF generator matrix.

use num_bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

use crate::ff::{FieldError, FieldSpec};
use crate::grassmann::{BinaryVector, Subspace};
use crate::matq::{MatrixError, MatrixFq};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("invalid code parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("minimum distance needs at least two codewords")]
    TooSmall,
    #[error("coset index {index} out of range (have {count} cosets)")]
    CosetOutOfRange { index: u64, count: u64 },
    #[error("lifting: {0}")]
    Lift(String),
}

/// `F_{q^h}` as an `h`-dimensional vector space over `F_q`.
#[derive(Clone, Debug)]
pub struct Extension {
    base: FieldSpec,
    ext: FieldSpec,
    degree: usize,
    // base code -> ext code
    embed: Vec<u32>,
    // F_p-coordinates of the ext element -> (theta^j * omega^l) coordinates
    to_basis: MatrixFq,
    prime: FieldSpec,
}

impl Extension {
    pub fn new(base: &FieldSpec, degree: usize) -> Result<Self, CodeError> {
        if degree == 0 {
            return Err(CodeError::Params(
                "extension degree must be positive".into(),
            ));
        }
        let p = base.characteristic();
        let k = base.degree() as usize;
        let ext = if degree == 1 {
            base.clone()
        } else {
            FieldSpec::new(p as u64, (k * degree) as u32)?
        };
        let prime = FieldSpec::new(p as u64, 1)?;
        // Image of the base field's modulus root inside the extension.
        let beta = if k == 1 || degree == 1 {
            base.modulus_root()
        } else {
            ext.codes()
                .find(|&x| {
                    let value = base
                        .modulus()
                        .iter()
                        .rev()
                        .fold(0u32, |acc, &c| ext.add(ext.mul(acc, x), c));
                    value == 0
                })
                .expect("the base field embeds in its extension")
        };
        let embed: Vec<u32> = base
            .codes()
            .map(|c| {
                if k == 1 || degree == 1 {
                    c
                } else {
                    base.coeffs(c)
                        .iter()
                        .rev()
                        .fold(0u32, |acc, &a| ext.add(ext.mul(acc, beta), a))
                }
            })
            .collect();
        let theta = if degree == 1 { 1 } else { ext.modulus_root() };
        let kh = k * degree;
        let mut columns = MatrixFq::zeros(&prime, kh, kh);
        for j in 0..degree {
            let tj = ext.pow(theta, j as i64).unwrap();
            for l in 0..k {
                let omega_l = if k == 1 {
                    1
                } else {
                    base.pow(base.modulus_root(), l as i64).unwrap()
                };
                let b = ext.mul(embed[omega_l as usize], tj);
                for (row, c) in ext.coeffs(b).into_iter().enumerate() {
                    columns.set(row, j * k + l, c);
                }
            }
        }
        let to_basis = columns
            .inverse()
            .ok_or_else(|| CodeError::Params("power basis is dependent".into()))?;
        Ok(Extension {
            base: base.clone(),
            ext,
            degree,
            embed,
            to_basis,
            prime,
        })
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn ext(&self) -> &FieldSpec {
        &self.ext
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `theta`, the generator whose powers form the `F_q`-basis.
    pub fn theta(&self) -> u32 {
        if self.degree == 1 {
            1
        } else {
            self.ext.modulus_root()
        }
    }

    pub fn embed(&self, c: u32) -> u32 {
        self.embed[c as usize]
    }

    /// Coordinates of `y` over `(1, theta, .., theta^{h-1})`.
    pub fn to_coords(&self, y: u32) -> Vec<u32> {
        let k = self.base.degree() as usize;
        let yc = self.ext.coeffs(y);
        let kh = yc.len();
        let p = &self.prime;
        let mut x = vec![0u32; kh];
        for (r, xr) in x.iter_mut().enumerate() {
            *xr = (0..kh).fold(0, |acc, c| {
                p.add(acc, p.mul(self.to_basis.get(r, c), yc[c]))
            });
        }
        (0..self.degree)
            .map(|j| self.base.from_coeffs(&x[j * k..(j + 1) * k]).unwrap())
            .collect()
    }

    pub fn from_coords(&self, coords: &[u32]) -> u32 {
        let theta = self.theta();
        coords.iter().rev().fold(0u32, |acc, &c| {
            self.ext.add(self.ext.mul(acc, theta), self.embed(c))
        })
    }

    /// `y^(q^i)`.
    pub fn frobenius(&self, y: u32, i: usize) -> u32 {
        let mut out = y;
        for _ in 0..i {
            out = self.ext.pow(out, self.base.order() as i64).unwrap();
        }
        out
    }
}

/// A Gabidulin MRD code in `M_{m x h}(F_q)` with minimum rank distance `d`.
#[derive(Clone, Debug)]
pub struct GabidulinCode {
    extension: Extension,
    m: usize,
    h: usize,
    d: usize,
    k: usize,
    points: Vec<u32>,
    generator: MatrixFq,
    pivots: Vec<usize>,
    complement: Vec<usize>,
}

impl GabidulinCode {
    pub fn build(q: u64, m: usize, h: usize, d: usize) -> Result<Self, CodeError> {
        if !(1 <= d && d <= m) {
            return Err(CodeError::Params(format!(
                "need 1 <= d <= m, got d={d} m={m}"
            )));
        }
        if m > h {
            return Err(CodeError::Params(format!(
                "need m <= h, got m={m} h={h}; transpose the problem"
            )));
        }
        let base = FieldSpec::with_order(q)?;
        let extension = Extension::new(&base, h)?;
        let ext = extension.ext().clone();
        let theta = extension.theta();
        let points: Vec<u32> = (0..m).map(|j| ext.pow(theta, j as i64).unwrap()).collect();
        let k = m - d + 1;
        let mut code = GabidulinCode {
            extension,
            m,
            h,
            d,
            k,
            points,
            generator: MatrixFq::zeros(&base, 0, m * h),
            pivots: vec![],
            complement: vec![],
        };
        let mut rows = Vec::with_capacity(h * k);
        for i in 0..k {
            for l in 0..h {
                let mut coeffs = vec![0u32; k];
                coeffs[i] = ext.pow(theta, l as i64).unwrap();
                rows.push(code.encode(&coeffs)?.data().to_vec());
            }
        }
        let gen = MatrixFq::from_rows(&base, &rows)?;
        let (r, pivots) = gen.rref();
        if pivots.len() != h * k {
            return Err(CodeError::Params("evaluation map is not injective".into()));
        }
        code.complement = (0..m * h).filter(|c| !pivots.contains(c)).collect();
        code.generator = r;
        code.pivots = pivots;
        Ok(code)
    }

    pub fn base(&self) -> &FieldSpec {
        self.extension.base()
    }

    pub fn extension(&self) -> &Extension {
        &self.extension
    }

    pub fn q(&self) -> u64 {
        self.base().order() as u64
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn design_distance(&self) -> usize {
        self.d
    }

    /// Number of linearized-polynomial coefficients (dimension over `F_{q^h}`).
    pub fn k(&self) -> usize {
        self.k
    }

    /// Dimension over `F_q`.
    pub fn dimension(&self) -> usize {
        self.h * self.k
    }

    pub fn evaluation_points(&self) -> &[u32] {
        &self.points
    }

    pub fn size(&self) -> BigUint {
        BigUint::from(self.q()).pow(self.dimension() as u32)
    }

    /// RREF generator matrix; each row is a codeword flattened row-major.
    pub fn generator(&self) -> &MatrixFq {
        &self.generator
    }

    /// The codeword for linearized-polynomial coefficients `a_0..a_{k-1}`
    /// in `F_{q^h}`.
    pub fn encode(&self, coeffs: &[u32]) -> Result<MatrixFq, CodeError> {
        if coeffs.len() != self.k {
            return Err(CodeError::Params(format!(
                "expected {} coefficients, got {}",
                self.k,
                coeffs.len()
            )));
        }
        let ext = self.extension.ext();
        let mut data = Vec::with_capacity(self.m * self.h);
        for &g in &self.points {
            let value = coeffs.iter().enumerate().fold(0u32, |acc, (i, &a)| {
                ext.add(acc, ext.mul(a, self.extension.frobenius(g, i)))
            });
            data.extend(self.extension.to_coords(value));
        }
        Ok(MatrixFq::from_vec(self.base(), self.m, self.h, data)?)
    }

    fn combination(&self, mut counter: u64) -> MatrixFq {
        let f = self.base();
        let q = self.q();
        let mut data = vec![0u32; self.m * self.h];
        for r in (0..self.generator.rows()).rev() {
            let c = (counter % q) as u32;
            counter /= q;
            if c == 0 {
                continue;
            }
            for (x, &g) in data.iter_mut().zip(self.generator.row(r)) {
                *x = f.add(*x, f.mul(c, g));
            }
        }
        MatrixFq::from_vec(f, self.m, self.h, data).unwrap()
    }

    fn count_u64(&self) -> Option<u64> {
        self.q().checked_pow(self.dimension() as u32)
    }

    /// Every codeword, zero first.
    pub fn codewords(&self) -> impl Iterator<Item = MatrixFq> + '_ {
        let count = self.count_u64().expect("code too large to enumerate");
        (0..count).map(move |c| self.combination(c))
    }

    /// Minimum rank over nonzero codewords, by exhaustive scan.
    pub fn min_rank_distance(&self) -> Result<usize, CodeError> {
        let count = self
            .count_u64()
            .ok_or_else(|| CodeError::Params("code too large to enumerate".into()))?;
        if count < 2 {
            return Err(CodeError::TooSmall);
        }
        Ok((1..count)
            .into_par_iter()
            .map(|c| self.combination(c).rank())
            .min()
            .unwrap())
    }

    pub fn coset_count(&self) -> u64 {
        self.q().pow(self.complement.len() as u32)
    }

    fn check_shape(&self, a: &MatrixFq) -> Result<(), CodeError> {
        if a.field() != self.base() {
            return Err(CodeError::Matrix(MatrixError::FieldMismatch));
        }
        if (a.rows(), a.cols()) != (self.m, self.h) {
            return Err(CodeError::Matrix(MatrixError::Shape(format!(
                "expected {}x{}, got {}x{}",
                self.m,
                self.h,
                a.rows(),
                a.cols()
            ))));
        }
        Ok(())
    }

    /// Complement coordinates of `a`, read as a base-`q` integer (first
    /// coordinate most significant). Equal iff the difference is a codeword.
    pub fn coset_index(&self, a: &MatrixFq) -> Result<u64, CodeError> {
        self.check_shape(a)?;
        let f = self.base();
        let mut v = a.data().to_vec();
        for (r, &pc) in self.pivots.iter().enumerate() {
            let coef = v[pc];
            if coef == 0 {
                continue;
            }
            let neg = f.neg(coef);
            for (x, &g) in v.iter_mut().zip(self.generator.row(r)) {
                *x = f.add(*x, f.mul(neg, g));
            }
        }
        let q = self.q();
        Ok(self
            .complement
            .iter()
            .fold(0u64, |acc, &c| acc * q + v[c] as u64))
    }

    pub fn contains(&self, a: &MatrixFq) -> Result<bool, CodeError> {
        Ok(self.coset_index(a)? == 0)
    }

    /// The coset representative with complement coordinates `index` and no
    /// code component.
    pub fn coset_representative(&self, index: u64) -> Result<MatrixFq, CodeError> {
        let count = self.coset_count();
        if index >= count {
            return Err(CodeError::CosetOutOfRange { index, count });
        }
        let q = self.q();
        let mut data = vec![0u32; self.m * self.h];
        let mut rest = index;
        for &c in self.complement.iter().rev() {
            data[c] = (rest % q) as u32;
            rest /= q;
        }
        Ok(MatrixFq::from_vec(self.base(), self.m, self.h, data)?)
    }
}

/// `L_u(A)`: identity columns at the ones of `u`, columns of `A` in order
/// at the zeros.
pub fn lift(u: &BinaryVector, a: &MatrixFq) -> Result<MatrixFq, CodeError> {
    let m = u.weight();
    if a.rows() != m || a.cols() + m != u.len() {
        return Err(CodeError::Lift(format!(
            "u has weight {m} and length {}, A is {}x{}",
            u.len(),
            a.rows(),
            a.cols()
        )));
    }
    let mut out = MatrixFq::zeros(a.field(), m, u.len());
    for (i, r) in u.ones().into_iter().enumerate() {
        out.set(i, r, 1);
    }
    for (kcol, s) in u.zeros().into_iter().enumerate() {
        for i in 0..m {
            out.set(i, s, a.get(i, kcol));
        }
    }
    Ok(out)
}

/// Inverse of [`lift`] on canonical bases: the identifying vector and the
/// non-pivot columns of the RREF basis.
pub fn unlift(s: &Subspace) -> (BinaryVector, MatrixFq) {
    let u = s.identifying_vector();
    (u, s.basis().select_columns(&u.zeros()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::Grassmannian;
    use crate::matq::intersection_dim;
    use std::collections::HashMap;

    fn all_matrices(field: &FieldSpec, rows: usize, cols: usize) -> Vec<MatrixFq> {
        let q = field.order() as u64;
        let n = rows * cols;
        (0..q.pow(n as u32))
            .map(|mut idx| {
                let data = (0..n)
                    .map(|_| {
                        let d = (idx % q) as u32;
                        idx /= q;
                        d
                    })
                    .collect();
                MatrixFq::from_vec(field, rows, cols, data).unwrap()
            })
            .collect()
    }

    #[test]
    fn extension_coordinates_round_trip() {
        for (q, h) in [(2u64, 3usize), (3, 2), (4, 2), (4, 3), (9, 2), (5, 1)] {
            let base = FieldSpec::with_order(q).unwrap();
            let ext = Extension::new(&base, h).unwrap();
            assert_eq!(ext.ext().order() as u64, q.pow(h as u32));
            for y in ext.ext().codes() {
                let c = ext.to_coords(y);
                assert_eq!(c.len(), h);
                assert_eq!(ext.from_coords(&c), y);
            }
            // The embedding is a ring homomorphism.
            for a in base.codes() {
                for b in base.codes() {
                    assert_eq!(
                        ext.embed(base.mul(a, b)),
                        ext.ext().mul(ext.embed(a), ext.embed(b))
                    );
                    assert_eq!(
                        ext.embed(base.add(a, b)),
                        ext.ext().add(ext.embed(a), ext.embed(b))
                    );
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_the_base_field() {
        let base = FieldSpec::with_order(4).unwrap();
        let ext = Extension::new(&base, 2).unwrap();
        for c in base.codes() {
            assert_eq!(ext.frobenius(ext.embed(c), 1), ext.embed(c));
        }
        for y in ext.ext().codes() {
            assert_eq!(ext.frobenius(y, 2), y);
        }
    }

    #[test]
    fn small_codes_sizes_and_distances() {
        let c = GabidulinCode::build(2, 2, 2, 2).unwrap();
        assert_eq!(c.codewords().count(), 4);
        assert_eq!(c.min_rank_distance().unwrap(), 2);
        let c = GabidulinCode::build(2, 2, 3, 2).unwrap();
        assert_eq!(c.codewords().count(), 8);
        assert_eq!(c.size(), BigUint::from(8u32));
        assert_eq!(c.min_rank_distance().unwrap(), 2);
        let c = GabidulinCode::build(3, 2, 2, 2).unwrap();
        assert_eq!(c.codewords().count(), 9);
        assert_eq!(c.min_rank_distance().unwrap(), 2);
    }

    #[test]
    fn distance_one_is_the_full_space() {
        for (q, m, h) in [(2u64, 2usize, 2usize), (3, 1, 2), (2, 2, 3)] {
            let c = GabidulinCode::build(q, m, h, 1).unwrap();
            assert_eq!(c.size(), BigUint::from(q).pow((m * h) as u32));
            assert_eq!(c.coset_count(), 1);
            assert_eq!(c.min_rank_distance().unwrap(), 1);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            GabidulinCode::build(2, 3, 2, 2),
            Err(CodeError::Params(_))
        ));
        assert!(matches!(
            GabidulinCode::build(2, 2, 2, 3),
            Err(CodeError::Params(_))
        ));
        assert!(matches!(
            GabidulinCode::build(2, 2, 2, 0),
            Err(CodeError::Params(_))
        ));
        assert!(matches!(
            GabidulinCode::build(6, 2, 2, 1),
            Err(CodeError::Field(_))
        ));
        let tiny = GabidulinCode::build(2, 1, 1, 1).unwrap();
        assert_eq!(tiny.size(), BigUint::from(2u32));
    }

    #[test]
    fn mrd_property_over_several_fields() {
        for (q, m, h, d) in [
            (2u64, 2usize, 4usize, 2usize),
            (2, 3, 3, 2),
            (2, 3, 3, 3),
            (2, 3, 4, 2),
            (3, 2, 3, 2),
            (4, 2, 2, 2),
            (5, 2, 2, 2),
        ] {
            let c = GabidulinCode::build(q, m, h, d).unwrap();
            let singleton = BigUint::from(q).pow((h.max(m) * (h.min(m) - d + 1)) as u32);
            assert_eq!(c.size(), singleton);
            assert_eq!(c.min_rank_distance().unwrap(), d, "({q},{m},{h},{d})");
        }
    }

    #[test]
    fn code_is_linear_and_matches_evaluation_route() {
        let c = GabidulinCode::build(2, 3, 3, 2).unwrap();
        let ext = c.extension().ext().clone();
        let words: Vec<MatrixFq> = c.codewords().collect();
        for a in words.iter().step_by(3) {
            for b in words.iter().step_by(5) {
                assert!(c.contains(&a.add(b).unwrap()).unwrap());
            }
        }
        for a0 in ext.codes() {
            for a1 in ext.codes().step_by(3) {
                let w = c.encode(&[a0, a1]).unwrap();
                assert!(c.contains(&w).unwrap());
                let w2 = c.encode(&[ext.add(a0, 1), a1]).unwrap();
                let diff = c.encode(&[1, 0]).unwrap();
                assert_eq!(w.add(&diff).unwrap(), w2);
            }
        }
    }

    #[test]
    fn coset_fibres_partition_the_ambient_space() {
        let c = GabidulinCode::build(2, 2, 2, 2).unwrap();
        let all = all_matrices(c.base(), 2, 2);
        let mut fibres: HashMap<u64, Vec<MatrixFq>> = HashMap::new();
        for a in &all {
            fibres
                .entry(c.coset_index(a).unwrap())
                .or_default()
                .push(a.clone());
        }
        assert_eq!(fibres.len(), 4);
        assert!(fibres.values().all(|v| v.len() == 4));
        for a in &all {
            for b in &all {
                // Membership of the difference checked by enumeration.
                let diff = a.sub(b).unwrap();
                let in_code = c.codewords().any(|w| w == diff);
                assert_eq!(
                    c.coset_index(a).unwrap() == c.coset_index(b).unwrap(),
                    in_code
                );
            }
        }
        for w in c.codewords() {
            assert_eq!(c.coset_index(&w).unwrap(), 0);
        }
    }

    #[test]
    fn coset_representatives() {
        for (q, m, h, d) in [(2u64, 2usize, 2usize, 2usize), (3, 2, 2, 2), (2, 2, 3, 2)] {
            let c = GabidulinCode::build(q, m, h, d).unwrap();
            assert!(c.coset_representative(0).unwrap().is_zero());
            let reps: Vec<MatrixFq> = (0..c.coset_count())
                .map(|i| c.coset_representative(i).unwrap())
                .collect();
            for (i, r) in reps.iter().enumerate() {
                assert_eq!(c.coset_index(r).unwrap(), i as u64);
                for s in &reps[i + 1..] {
                    assert!(!c.codewords().any(|w| w == r.sub(s).unwrap()));
                }
            }
            assert!(matches!(
                c.coset_representative(c.coset_count()),
                Err(CodeError::CosetOutOfRange { .. })
            ));
        }
    }

    #[test]
    fn lift_layouts() {
        let f = FieldSpec::with_order(3).unwrap();
        let a = MatrixFq::from_rows(&f, &[[1u32, 2, 0], [0, 1, 2]]).unwrap();
        let leading = BinaryVector::from_slice(&[1, 1, 0, 0, 0]);
        assert_eq!(
            lift(&leading, &a).unwrap(),
            MatrixFq::from_rows(&f, &[[1u32, 0, 1, 2, 0], [0, 1, 0, 1, 2]]).unwrap()
        );
        // n=5, m=2, u=(1,0,1,0,0): columns of A land at positions 2, 4, 5.
        let u = BinaryVector::from_slice(&[1, 0, 1, 0, 0]);
        assert_eq!(
            lift(&u, &a).unwrap(),
            MatrixFq::from_rows(&f, &[[1u32, 1, 0, 2, 0], [0, 0, 1, 1, 2]]).unwrap()
        );
        let zero = MatrixFq::zeros(&f, 2, 3);
        assert_eq!(
            lift(&u, &zero).unwrap(),
            MatrixFq::from_rows(&f, &[[1u32, 0, 0, 0, 0], [0, 0, 1, 0, 0]]).unwrap()
        );
        assert!(matches!(
            lift(&BinaryVector::from_slice(&[1, 1, 1, 0, 0]), &a),
            Err(CodeError::Lift(_))
        ));
    }

    #[test]
    fn unlift_round_trips() {
        let f = FieldSpec::with_order(2).unwrap();
        let g = Grassmannian::new(&f, 4, 2).unwrap();
        for s in g.iter() {
            let (u, a) = unlift(&s);
            assert_eq!(&lift(&u, &a).unwrap(), s.basis());
        }
        let full = Grassmannian::new(&f, 3, 3).unwrap().iter().next().unwrap();
        let (u, a) = unlift(&full);
        assert_eq!(u.weight(), 3);
        assert_eq!((a.rows(), a.cols()), (3, 0));
    }

    #[test]
    fn unlift_extracts_non_pivot_columns() {
        // Pivots at 1-based 1, 2, 4; non-pivot columns 3, 5, 6.
        let f = FieldSpec::with_order(3).unwrap();
        let basis = MatrixFq::from_rows(
            &f,
            &[
                [1u32, 0, 2, 0, 1, 1],
                [0, 1, 1, 0, 2, 0],
                [0, 0, 0, 1, 1, 2],
            ],
        )
        .unwrap();
        let s = Subspace::from_rref(basis).unwrap();
        let (_, a) = unlift(&s);
        assert_eq!(
            a,
            MatrixFq::from_rows(&f, &[[2u32, 1, 1], [1, 2, 0], [0, 1, 2]]).unwrap()
        );
    }

    #[test]
    fn lifting_lemma_exhaustive_small() {
        let f = FieldSpec::with_order(2).unwrap();
        let mats = all_matrices(&f, 2, 2);
        for u in BinaryVector::all_of_weight(4, 2) {
            for a in &mats {
                for b in &mats {
                    let la = lift(&u, a).unwrap();
                    let lb = lift(&u, b).unwrap();
                    assert_eq!(
                        intersection_dim(&la, &lb).unwrap(),
                        2 - a.sub(b).unwrap().rank()
                    );
                }
            }
        }
    }
}
