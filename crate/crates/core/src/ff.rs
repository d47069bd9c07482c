//! Finite field arithmetic over `GF(p^k)`.
//!
//! A field is presented by a monic irreducible polynomial over `GF(p)`.
//! Elements are stored as compact integer codes: the coefficient vector
//! `(c_0, .., c_{k-1})` of `c_0 + c_1 x + .. + c_{k-1} x^{k-1}` is packed as
//! `sum c_i p^i`. Fields up to [`TABLE_LIMIT`] elements also carry
//! exp/log tables for multiplication.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 24;

/// Fields at or below this order get exp/log tables.
pub const TABLE_LIMIT: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{k} exceeds the supported size")]
    TooLarge { p: u64, k: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("inverse of zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("base is not a primitive element")]
    NotPrimitive,
    #[error("logarithm of zero")]
    LogOfZero,
    #[error("invalid element: {0}")]
    InvalidElement(String),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits `q` as `p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut k = 0;
    let mut rest = q;
    while rest > 1 {
        rest /= p;
        k += 1;
    }
    Some((p, k))
}

/// A finite field `GF(p^k)`. Cloning is cheap; clones share tables.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Inner>,
}

struct Inner {
    p: u32,
    k: u32,
    order: u32,
    modulus: Vec<u32>,
    primitive: u32,
    tables: Option<Tables>,
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

// Raw polynomial helpers over GF(p), coefficients constant term first.

fn poly_rem_monic(a: &mut Vec<u32>, b: &[u32], p: u32) {
    let db = b.len() - 1;
    while a.len() > db {
        let lead = *a.last().unwrap();
        if lead != 0 {
            let shift = a.len() - 1 - db;
            for (i, &bc) in b.iter().enumerate() {
                let v = a[shift + i] as u64 + (p as u64 - lead as u64) * bc as u64;
                a[shift + i] = (v % p as u64) as u32;
            }
        }
        a.pop();
    }
}

fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let k = modulus.len() - 1;
    if k == 1 {
        return true;
    }
    if modulus[0] == 0 {
        return false;
    }
    for d in 1..=k / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut rest = idx;
            for _ in 0..d {
                divisor.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            divisor.push(1);
            let mut r = modulus.to_vec();
            poly_rem_monic(&mut r, &divisor, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Maps a position in canonical order to the element code. Canonical order
/// compares coefficient vectors lexicographically, constant term first.
fn canonical_coeffs(idx: u64, p: u32, k: u32) -> Vec<u32> {
    let mut coeffs = vec![0u32; k as usize];
    let mut rest = idx;
    for j in (0..k as usize).rev() {
        coeffs[j] = (rest % p as u64) as u32;
        rest /= p as u64;
    }
    coeffs
}

impl FieldSpec {
    /// Builds `GF(p^k)` with the lexicographically smallest monic
    /// irreducible modulus (constant term compared first).
    pub fn new(p: u64, k: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k < 1 {
            return Err(FieldError::ZeroDegree);
        }
        let order = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if order > MAX_FIELD_ORDER as u128 {
            return Err(FieldError::TooLarge { p, k });
        }
        let p32 = p as u32;
        let order = order as u32;
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            (0..order as u64)
                .map(|idx| {
                    let mut m = canonical_coeffs(idx, p32, k);
                    m.push(1);
                    m
                })
                .find(|m| is_irreducible(m, p32))
                .expect("an irreducible polynomial exists in every degree")
        };
        let spec = FieldSpec {
            inner: Arc::new(Inner {
                p: p32,
                k,
                order,
                modulus,
                primitive: 0,
                tables: None,
            }),
        };
        let primitive = spec.find_primitive();
        let tables = ((order as u64) <= TABLE_LIMIT).then(|| spec.build_tables(primitive));
        let mut inner = Arc::try_unwrap(spec.inner).ok().expect("sole owner");
        inner.primitive = primitive;
        inner.tables = tables;
        Ok(FieldSpec {
            inner: Arc::new(inner),
        })
    }

    /// The field with `q` elements.
    pub fn with_order(q: u64) -> Result<Self, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, k)
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.k
    }

    pub fn order(&self) -> u32 {
        self.inner.order
    }

    /// Modulus coefficients, constant term first, including the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    /// Class of `x` modulo the modulus. Zero for prime fields.
    pub fn modulus_root(&self) -> u32 {
        if self.inner.k == 1 {
            0
        } else {
            self.inner.p
        }
    }

    fn find_primitive(&self) -> u32 {
        let q = self.inner.order as u64;
        let factors = prime_factors(q - 1);
        (0..q)
            .map(|idx| self.pack(&canonical_coeffs(idx, self.inner.p, self.inner.k)))
            .find(|&a| a != 0 && factors.iter().all(|&l| self.pow_u64(a, (q - 1) / l) != 1))
            .expect("the multiplicative group is cyclic")
    }

    fn build_tables(&self, g: u32) -> Tables {
        let q1 = self.inner.order as usize - 1;
        let mut exp = vec![0u32; 2 * q1.max(1)];
        let mut log = vec![0u32; self.inner.order as usize];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().take(q1.max(1)).enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = self.mul_slow(x, g);
        }
        for i in q1..exp.len() {
            exp[i] = exp[i - q1];
        }
        Tables { exp, log }
    }

    pub fn coeffs(&self, a: u32) -> Vec<u32> {
        let p = self.inner.p;
        let mut rest = a;
        (0..self.inner.k)
            .map(|_| {
                let c = rest % p;
                rest /= p;
                c
            })
            .collect()
    }

    fn pack(&self, coeffs: &[u32]) -> u32 {
        coeffs
            .iter()
            .rev()
            .fold(0u32, |acc, &c| acc * self.inner.p + c)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<u32, FieldError> {
        if coeffs.len() != self.inner.k as usize || coeffs.iter().any(|&c| c >= self.inner.p) {
            return Err(FieldError::InvalidElement(format!("{coeffs:?}")));
        }
        Ok(self.pack(coeffs))
    }

    pub fn contains(&self, a: u32) -> bool {
        a < self.inner.order
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.inner.p;
        if p == 2 {
            return a ^ b;
        }
        if self.inner.k == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.inner.k {
            let s = (a % p + b % p) % p;
            out += s * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.inner.p;
        if p == 2 {
            return a;
        }
        if self.inner.k == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.inner.k {
            out += ((p - a % p) % p) * place;
            place *= p;
            a /= p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.inner.k == 1 {
            return ((a as u64 * b as u64) % self.inner.p as u64) as u32;
        }
        if let Some(t) = &self.inner.tables {
            return t.exp[(t.log[a as usize] + t.log[b as usize]) as usize];
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.inner.p as u64;
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let mut prod = vec![0u64; ca.len() + cb.len() - 1];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let mut prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        poly_rem_monic(&mut prod, &self.inner.modulus, self.inner.p);
        prod.resize(self.inner.k as usize, 0);
        self.pack(&prod)
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if let Some(t) = &self.inner.tables {
            let q1 = self.inner.order - 1;
            return Some(t.exp[((q1 - t.log[a as usize]) % q1) as usize]);
        }
        Some(self.pow_u64(a, self.inner.order as u64 - 2))
    }

    fn pow_u64(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_any(acc, base);
            }
            base = self.mul_any(base, base);
            e >>= 1;
        }
        acc
    }

    // Usable before tables exist.
    fn mul_any(&self, a: u32, b: u32) -> u32 {
        if self.inner.tables.is_some() || self.inner.k == 1 {
            self.mul(a, b)
        } else if a == 0 || b == 0 {
            0
        } else {
            self.mul_slow(a, b)
        }
    }

    /// `a^e`; negative exponents go through the inverse.
    pub fn pow(&self, a: u32, e: i64) -> Option<u32> {
        if e < 0 {
            let inv = self.inv(a)?;
            Some(self.pow_u64(inv, e.unsigned_abs()))
        } else {
            Some(self.pow_u64(a, e as u64))
        }
    }

    pub fn multiplicative_order(&self, a: u32) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let mut order = self.inner.order as u64 - 1;
        for l in prime_factors(order) {
            while order.is_multiple_of(l) && self.pow_u64(a, order / l) == 1 {
                order /= l;
            }
        }
        Some(order)
    }

    pub fn is_primitive(&self, a: u32) -> bool {
        self.multiplicative_order(a) == Some(self.inner.order as u64 - 1)
    }

    /// The canonically smallest primitive element.
    pub fn primitive_element(&self) -> FieldElement {
        self.element(self.inner.primitive)
    }

    /// The exponent `e` in `[0, order - 1)` with `base^e = x`.
    pub fn discrete_log(&self, base: u32, x: u32) -> Result<u64, FieldError> {
        if x == 0 {
            return Err(FieldError::LogOfZero);
        }
        if !self.is_primitive(base) {
            return Err(FieldError::NotPrimitive);
        }
        let q1 = self.inner.order as u64 - 1;
        if let Some(t) = &self.inner.tables {
            if base == self.inner.primitive {
                return Ok(t.log[x as usize] as u64 % q1);
            }
        }
        // Baby-step giant-step.
        let step = (q1 as f64).sqrt().ceil() as u64;
        let mut baby = std::collections::HashMap::with_capacity(step as usize);
        let mut acc = 1u32;
        for j in 0..step {
            baby.entry(acc).or_insert(j);
            acc = self.mul(acc, base);
        }
        let giant = self.pow_u64(self.inv(base).unwrap(), step);
        let mut y = x;
        for i in 0..=step {
            if let Some(&j) = baby.get(&y) {
                return Ok((i * step + j) % q1);
            }
            y = self.mul(y, giant);
        }
        unreachable!("a primitive element generates every nonzero element")
    }

    pub fn element(&self, code: u32) -> FieldElement {
        assert!(self.contains(code), "element code {code} out of range");
        FieldElement {
            field: self.clone(),
            code,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// Every element code, ascending.
    pub fn codes(&self) -> std::ops::Range<u32> {
        0..self.inner.order
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.inner.p)
            .field("k", &self.inner.k)
            .field("modulus", &self.inner.modulus)
            .finish()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.k == 1 {
            write!(f, "GF({})", self.inner.p)
        } else {
            write!(f, "GF({}^{})", self.inner.p, self.inner.k)
        }
    }
}

/// An element bound to its field. Operations on elements of different
/// fields fail with [`FieldError::MixedFields`].
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: FieldSpec,
    code: u32,
}

impl FieldElement {
    pub fn from_coeffs(field: &FieldSpec, coeffs: &[u32]) -> Result<Self, FieldError> {
        Ok(field.element(field.from_coeffs(coeffs)?))
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.code)
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn same_field(&self, other: &Self) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::MixedFields)
        }
    }

    fn wrap(&self, code: u32) -> Self {
        FieldElement {
            field: self.field.clone(),
            code,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add(self.code, other.code)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(self.code, other.code)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(self.code, other.code)))
    }

    pub fn neg(&self) -> Self {
        self.wrap(self.field.neg(self.code))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        self.field
            .inv(self.code)
            .map(|c| self.wrap(c))
            .ok_or(FieldError::DivisionByZero)
    }

    pub fn pow(&self, e: i64) -> Result<Self, FieldError> {
        self.field
            .pow(self.code, e)
            .map(|c| self.wrap(c))
            .ok_or(FieldError::DivisionByZero)
    }

    /// Discrete logarithm of `self` to the primitive base `base`.
    pub fn log(&self, base: &Self) -> Result<u64, FieldError> {
        self.same_field(base)?;
        self.field.discrete_log(base.code, self.code)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.degree() == 1 {
            return write!(f, "{}", self.code);
        }
        let terms: Vec<String> = self
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}
