//! Powers of Johnson graphs `J(n,m,t)`: colourings and bounds.
//!
//! Vertices are `m`-subsets of `{0..n-1}` held as [`BinaryVector`]s and
//! ordered subset-lexicographically. Two subsets are adjacent when they
//! share at least `t` elements.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use thiserror::Error;

use crate::ff::{self, FieldError, FieldSpec, MAX_FIELD_ORDER};
use crate::grassmann::BinaryVector;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JohnsonError {
    #[error("invalid Johnson parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("Bose-Chowla construction for p={p}, h={h} failed its sum-distinctness check")]
    BoseChowlaFailed { p: u64, h: usize },
    #[error("no B_{h} set of size {size} found in Z_{modulus}")]
    SearchFailed { modulus: u64, h: usize, size: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum JohnsonMethod {
    Greedy,
    GrahamSloane,
}

impl JohnsonMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            JohnsonMethod::Greedy => "greedy",
            JohnsonMethod::GrahamSloane => "gs",
        }
    }
}

impl fmt::Display for JohnsonMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for JohnsonMethod {
    type Err = JohnsonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(JohnsonMethod::Greedy),
            "gs" => Ok(JohnsonMethod::GrahamSloane),
            other => Err(JohnsonError::Params(format!("unknown method {other:?}"))),
        }
    }
}

pub fn validate(n: usize, m: usize, t: usize) -> Result<(), JohnsonError> {
    if !(1 <= t && t < m && m < n) || n > 64 {
        return Err(JohnsonError::Params(format!(
            "need 1 <= t < m < n <= 64, got n={n} m={m} t={t}"
        )));
    }
    Ok(())
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

pub fn smallest_prime_geq(x: u64) -> u64 {
    (x.max(2)..).find(|&c| ff::is_prime(c)).unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoseChowlaOrigin {
    /// Discrete logs of a projective line in `F_{p^{h+1}}`.
    ProjectiveLine,
    /// Exhaustive search fallback.
    Search,
}

/// A set of residues mod `modulus` whose `h`-fold sums (with repetition)
/// are pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoseChowlaSet {
    pub p: u64,
    pub h: usize,
    pub modulus: u64,
    pub elements: Vec<u64>,
    pub origin: BoseChowlaOrigin,
}

fn multisets(len: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, len: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            cur.push(i);
            rec(i, len, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, len, size, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive check that all `h`-element multiset sums are distinct mod `modulus`.
pub fn has_distinct_sums(elements: &[u64], h: usize, modulus: u64) -> bool {
    let mut seen = HashSet::new();
    multisets(elements.len(), h)
        .into_iter()
        .all(|ms| seen.insert(ms.iter().map(|&i| elements[i]).sum::<u64>() % modulus))
}

/// Size-`p+1` `B_h` set modulo `(p^{h+1}-1)/(p-1)`: logarithms of the
/// points `1` and `theta + a` (`a` in `F_p`) for a primitive `theta` of
/// `F_{p^{h+1}}`. The result is verified exhaustively.
pub fn bose_chowla(p: u64, h: usize) -> Result<BoseChowlaSet, JohnsonError> {
    if h < 1 {
        return Err(JohnsonError::Params("B_h needs h >= 1".into()));
    }
    if (p as u128).pow(h as u32 + 1) > MAX_FIELD_ORDER as u128 {
        return Err(JohnsonError::Field(FieldError::TooLarge {
            p,
            k: h as u32 + 1,
        }));
    }
    let field = FieldSpec::new(p, h as u32 + 1)?;
    let theta = field.primitive_element().code();
    let modulus = (p.pow(h as u32 + 1) - 1) / (p - 1);
    let mut elements = vec![0u64];
    for a in 0..p as u32 {
        let point = field.add(theta, a);
        elements.push(field.discrete_log(theta, point)? % modulus);
    }
    elements.sort_unstable();
    elements.dedup();
    if elements.len() != p as usize + 1 || !has_distinct_sums(&elements, h, modulus) {
        return Err(JohnsonError::BoseChowlaFailed { p, h });
    }
    Ok(BoseChowlaSet {
        p,
        h,
        modulus,
        elements,
        origin: BoseChowlaOrigin::ProjectiveLine,
    })
}

/// Depth-first search for a `B_h` set of `size` residues mod `modulus`.
pub fn search_bh_set(modulus: u64, h: usize, size: usize) -> Option<Vec<u64>> {
    // partial[s] holds the sums of all s-element multisets of the chosen set.
    fn extend(partial: &[Vec<u64>], x: u64, modulus: u64) -> Vec<Vec<u64>> {
        let mut out = partial.to_vec();
        for s in 1..partial.len() {
            for uses in 1..=s {
                for &base in &partial[s - uses] {
                    out[s].push((base + uses as u64 * x) % modulus);
                }
            }
        }
        out
    }
    fn fits(partial: &[Vec<u64>], full: &HashSet<u64>, x: u64, h: usize, modulus: u64) -> bool {
        let mut fresh = HashSet::new();
        (1..=h).all(|uses| {
            partial[h - uses].iter().all(|&base| {
                let s = (base + uses as u64 * x) % modulus;
                !full.contains(&s) && fresh.insert(s)
            })
        })
    }
    fn rec(
        chosen: &mut Vec<u64>,
        partial: &[Vec<u64>],
        full: &HashSet<u64>,
        next: u64,
        modulus: u64,
        h: usize,
        size: usize,
    ) -> bool {
        if chosen.len() == size {
            return true;
        }
        for x in next..modulus {
            if !fits(partial, full, x, h, modulus) {
                continue;
            }
            let mut grown = extend(partial, x, modulus);
            grown.push(Vec::new());
            for uses in 1..=h {
                for &base in &partial[h - uses] {
                    grown[h].push((base + uses as u64 * x) % modulus);
                }
            }
            let full_sums: HashSet<u64> = grown
                .pop()
                .unwrap()
                .into_iter()
                .chain(full.iter().copied())
                .collect();
            chosen.push(x);
            if rec(chosen, &grown, &full_sums, x + 1, modulus, h, size) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut partial = vec![Vec::new(); h];
    partial[0].push(0);
    let mut chosen = Vec::new();
    rec(&mut chosen, &partial, &HashSet::new(), 0, modulus, h, size).then_some(chosen)
}

/// A proper colouring of `J(n,m,t)` with dense colour ids.
#[derive(Clone, Debug)]
pub struct JohnsonColouring {
    pub n: usize,
    pub m: usize,
    pub t: usize,
    pub method: JohnsonMethod,
    subsets: Vec<BinaryVector>,
    colours: Vec<u32>,
    palette: usize,
    index: HashMap<u64, usize>,
    bose_chowla: Option<BoseChowlaSet>,
}

impl JohnsonColouring {
    fn new(
        n: usize,
        m: usize,
        t: usize,
        method: JohnsonMethod,
        subsets: Vec<BinaryVector>,
        colours: Vec<u32>,
        bose_chowla: Option<BoseChowlaSet>,
    ) -> Self {
        let palette = colours.iter().copied().collect::<HashSet<_>>().len();
        let index = subsets
            .iter()
            .enumerate()
            .map(|(i, s)| (s.bits(), i))
            .collect();
        JohnsonColouring {
            n,
            m,
            t,
            method,
            subsets,
            colours,
            palette,
            index,
            bose_chowla,
        }
    }

    pub fn subsets(&self) -> &[BinaryVector] {
        &self.subsets
    }

    pub fn colours(&self) -> &[u32] {
        &self.colours
    }

    /// Number of colours used.
    pub fn palette(&self) -> usize {
        self.palette
    }

    pub fn bose_chowla(&self) -> Option<&BoseChowlaSet> {
        self.bose_chowla.as_ref()
    }

    pub fn colour_of(&self, subset: &BinaryVector) -> Option<u32> {
        self.index.get(&subset.bits()).map(|&i| self.colours[i])
    }

    /// Subsets grouped by colour id.
    pub fn classes(&self) -> Vec<Vec<BinaryVector>> {
        let mut out = vec![Vec::new(); self.palette];
        for (s, &c) in self.subsets.iter().zip(&self.colours) {
            out[c as usize].push(*s);
        }
        out
    }

    /// First same-coloured pair sharing `t` or more elements, if any.
    pub fn violation(&self) -> Option<(BinaryVector, BinaryVector)> {
        for i in 0..self.subsets.len() {
            for j in i + 1..self.subsets.len() {
                if self.colours[i] == self.colours[j]
                    && self.subsets[i].schur(&self.subsets[j]).weight() >= self.t
                {
                    return Some((self.subsets[i], self.subsets[j]));
                }
            }
        }
        None
    }

    pub fn is_proper(&self) -> bool {
        self.violation().is_none()
    }
}

pub fn colouring(
    n: usize,
    m: usize,
    t: usize,
    method: JohnsonMethod,
) -> Result<JohnsonColouring, JohnsonError> {
    match method {
        JohnsonMethod::Greedy => greedy_colouring(n, m, t),
        JohnsonMethod::GrahamSloane => gs_colouring(n, m, t),
    }
}

/// DSATUR over `J(n,m,t)`: highest saturation first, then most uncoloured
/// neighbours, then lowest subset index.
pub fn greedy_colouring(n: usize, m: usize, t: usize) -> Result<JohnsonColouring, JohnsonError> {
    validate(n, m, t)?;
    let subsets = BinaryVector::all_of_weight(n, m);
    let count = subsets.len();
    let adjacent = |a: usize, b: usize| {
        a != b && (subsets[a].bits() & subsets[b].bits()).count_ones() as usize >= t
    };
    let mut colours: Vec<Option<u32>> = vec![None; count];
    let mut neighbour_colours: Vec<HashSet<u32>> = vec![HashSet::new(); count];
    let mut uncoloured_degree: Vec<usize> = (0..count)
        .map(|v| (0..count).filter(|&w| adjacent(v, w)).count())
        .collect();
    for _ in 0..count {
        let v = (0..count)
            .filter(|&v| colours[v].is_none())
            .max_by(|&a, &b| {
                (neighbour_colours[a].len(), uncoloured_degree[a])
                    .cmp(&(neighbour_colours[b].len(), uncoloured_degree[b]))
                    .then(b.cmp(&a))
            })
            .unwrap();
        let c = (0..).find(|c| !neighbour_colours[v].contains(c)).unwrap();
        colours[v] = Some(c);
        for w in 0..count {
            if adjacent(v, w) {
                neighbour_colours[w].insert(c);
                uncoloured_degree[w] -= 1;
            }
        }
    }
    let colours = colours.into_iter().map(Option::unwrap).collect();
    Ok(JohnsonColouring::new(
        n,
        m,
        t,
        JohnsonMethod::Greedy,
        subsets,
        colours,
        None,
    ))
}

/// The Bose-Chowla set used for `J(n,m,t)`, falling back to search when
/// the algebraic construction fails its check or the field is too large.
pub fn gs_set(n: usize, m: usize, t: usize) -> Result<BoseChowlaSet, JohnsonError> {
    validate(n, m, t)?;
    let p = smallest_prime_geq(n as u64 + 1);
    let h = m - t;
    match bose_chowla(p, h) {
        Ok(set) => Ok(set),
        Err(
            JohnsonError::BoseChowlaFailed { .. }
            | JohnsonError::Field(FieldError::TooLarge { .. }),
        ) => {
            let modulus = (p.pow(h as u32 + 1) - 1) / (p - 1);
            let elements = search_bh_set(modulus, h, n).ok_or(JohnsonError::SearchFailed {
                modulus,
                h,
                size: n,
            })?;
            Ok(BoseChowlaSet {
                p,
                h,
                modulus,
                elements,
                origin: BoseChowlaOrigin::Search,
            })
        }
        Err(e) => Err(e),
    }
}

/// Colour `S` by `sum_{a in S} phi(a) mod r`, with `phi` the
/// order-preserving injection into the sorted Bose-Chowla set. Residues are
/// renumbered densely in increasing order.
pub fn gs_colouring(n: usize, m: usize, t: usize) -> Result<JohnsonColouring, JohnsonError> {
    let set = gs_set(n, m, t)?;
    let subsets = BinaryVector::all_of_weight(n, m);
    let residues: Vec<u64> = subsets
        .iter()
        .map(|s| s.ones().iter().map(|&a| set.elements[a]).sum::<u64>() % set.modulus)
        .collect();
    let mut used: Vec<u64> = residues.clone();
    used.sort_unstable();
    used.dedup();
    let colours = residues
        .iter()
        .map(|r| used.binary_search(r).unwrap() as u32)
        .collect();
    Ok(JohnsonColouring::new(
        n,
        m,
        t,
        JohnsonMethod::GrahamSloane,
        subsets,
        colours,
        Some(set),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JohnsonBounds {
    /// `ceil(C(n,m) C(m,t) / C(n,t))`.
    pub lower: BigUint,
    /// Modulus `r` of the Graham-Sloane colouring.
    pub gs_upper: u64,
}

pub fn johnson_bounds(n: usize, m: usize, t: usize) -> Result<JohnsonBounds, JohnsonError> {
    validate(n, m, t)?;
    let (n, m, t) = (n as u64, m as u64, t as u64);
    let num = binomial(n, m) * binomial(m, t);
    let lower = Integer::div_ceil(&num, &binomial(n, t));
    let p = smallest_prime_geq(n + 1);
    let gs_upper = (p.pow((m - t) as u32 + 1) - 1) / (p - 1);
    Ok(JohnsonBounds { lower, gs_upper })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert_eq!(smallest_prime_geq(5), 5);
        assert_eq!(smallest_prime_geq(6), 7);
        assert_eq!(smallest_prime_geq(9), 11);
        assert_eq!(smallest_prime_geq(2), 2);
    }

    #[test]
    fn bose_chowla_examples() {
        let b = bose_chowla(5, 1).unwrap();
        assert_eq!((b.modulus, b.elements.len()), (6, 6));
        let b = bose_chowla(7, 2).unwrap();
        assert_eq!((b.modulus, b.elements.len()), (57, 8));
        assert_eq!(multisets(8, 2).len(), 36);
        let b = bose_chowla(5, 2).unwrap();
        assert_eq!((b.modulus, b.elements.len()), (31, 6));
        assert_eq!(multisets(6, 2).len(), 21);
    }

    #[test]
    fn bose_chowla_sets_pass_brute_force_checks() {
        for (p, h) in [
            (2u64, 1usize),
            (3, 2),
            (5, 2),
            (7, 2),
            (3, 3),
            (5, 3),
            (2, 4),
            (11, 2),
        ] {
            let b = bose_chowla(p, h).unwrap();
            assert_eq!(b.origin, BoseChowlaOrigin::ProjectiveLine);
            // Independent check over ordered h-tuples.
            let mut by_sum: HashMap<u64, Vec<u64>> = HashMap::new();
            let k = b.elements.len();
            for mut idx in 0..(k as u64).pow(h as u32) {
                let mut tuple = Vec::new();
                for _ in 0..h {
                    tuple.push(b.elements[(idx % k as u64) as usize]);
                    idx /= k as u64;
                }
                let s = tuple.iter().sum::<u64>() % b.modulus;
                tuple.sort_unstable();
                let prev = by_sum.entry(s).or_insert_with(|| tuple.clone());
                assert_eq!(*prev, tuple, "p={p} h={h}");
            }
        }
    }

    #[test]
    fn distinct_sums_detects_collisions() {
        assert!(!has_distinct_sums(&[0, 1, 2], 2, 100));
        assert!(has_distinct_sums(&[0, 1, 3], 2, 100));
    }

    #[test]
    fn search_finds_sidon_sets() {
        let s = search_bh_set(31, 2, 6).unwrap();
        assert!(has_distinct_sums(&s, 2, 31));
        assert_eq!(s.len(), 6);
        assert!(search_bh_set(7, 2, 6).is_none());
    }

    #[test]
    fn gs_colourings_are_proper() {
        let c = gs_colouring(4, 2, 1).unwrap();
        assert_eq!(c.bose_chowla().unwrap().modulus, 6);
        assert!(c.palette() <= 6);
        assert!(c.is_proper());
        let c = gs_colouring(6, 3, 1).unwrap();
        assert_eq!(c.bose_chowla().unwrap().p, 7);
        assert!(c.palette() <= 57);
        assert!(c.is_proper());
    }

    #[test]
    fn colourings_are_proper_up_to_n8() {
        for n in 3..=8 {
            for m in 2..n {
                for t in 1..m {
                    for method in [JohnsonMethod::Greedy, JohnsonMethod::GrahamSloane] {
                        let c = colouring(n, m, t, method).unwrap();
                        assert!(c.is_proper(), "{method} n={n} m={m} t={t}");
                        let b = johnson_bounds(n, m, t).unwrap();
                        assert!(BigUint::from(c.palette()) >= b.lower);
                        if method == JohnsonMethod::GrahamSloane {
                            assert!(c.palette() as u64 <= b.gs_upper);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gs_classes_are_constant_weight_codes() {
        for (n, m, t) in [(6usize, 3usize, 1usize), (7, 3, 2), (8, 4, 2)] {
            let c = gs_colouring(n, m, t).unwrap();
            for class in c.classes() {
                for (i, a) in class.iter().enumerate() {
                    assert_eq!(a.weight(), m);
                    for b in &class[i + 1..] {
                        assert!(a.hamming_distance(b) >= 2 * (m - t + 1));
                    }
                }
            }
        }
    }

    #[test]
    fn adjacent_by_one_swap_always_differ_under_gs() {
        let c = gs_colouring(7, 3, 2).unwrap();
        for a in c.subsets() {
            for b in c.subsets() {
                if a.schur(b).weight() == 2 {
                    assert_ne!(c.colour_of(a), c.colour_of(b));
                }
            }
        }
    }

    #[test]
    fn greedy_palettes() {
        assert_eq!(greedy_colouring(3, 2, 1).unwrap().palette(), 3);
        assert_eq!(greedy_colouring(4, 2, 1).unwrap().palette(), 3);
        assert_eq!(greedy_colouring(6, 3, 1).unwrap().palette(), 10);
    }

    #[test]
    fn bounds_examples() {
        let b = johnson_bounds(4, 2, 1).unwrap();
        assert_eq!(
            b,
            JohnsonBounds {
                lower: BigUint::from(3u32),
                gs_upper: 6
            }
        );
        let b = johnson_bounds(6, 3, 1).unwrap();
        assert_eq!(b.lower, BigUint::from(10u32));
        assert_eq!(b.gs_upper, 57);
        assert!(johnson_bounds(4, 2, 2).is_err());
    }

    #[test]
    fn method_names() {
        assert_eq!(
            "gs".parse::<JohnsonMethod>().unwrap(),
            JohnsonMethod::GrahamSloane
        );
        assert_eq!(JohnsonMethod::Greedy.to_string(), "greedy");
        assert!("dsatur".parse::<JohnsonMethod>().is_err());
    }
}
