//! Exact ground truth for small graphs: maximum clique, chromatic number,
//! and DIMACS import/export.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use thiserror::Error;

use crate::grassmann::{BinaryVector, GrassmannError, GrassmannParams, Grassmannian, Subspace};

pub const DEFAULT_GRAPH_CAP: u64 = 5_000;
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("{vertices} vertices exceed the cap of {cap}")]
    TooLarge { vertices: BigUint, cap: u64 },
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
    #[error("DIMACS line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Undirected simple graph with bitset rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseGraph {
    labels: Vec<String>,
    words: usize,
    rows: Vec<Vec<u64>>,
}

fn bit_iter(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(w, &word)| {
        let mut x = word;
        std::iter::from_fn(move || {
            if x == 0 {
                return None;
            }
            let b = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(w * 64 + b)
        })
    })
}

fn first_bit(set: &[u64]) -> Option<usize> {
    set.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
}

fn count_bits(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

impl DenseGraph {
    pub fn new(labels: Vec<String>) -> Self {
        let v = labels.len();
        let words = v.div_ceil(64).max(1);
        DenseGraph {
            labels,
            words,
            rows: vec![vec![0; words]; v],
        }
    }

    /// Vertices labelled `1..=v`.
    pub fn unlabelled(v: usize) -> Self {
        DenseGraph::new((1..=v).map(|i| i.to_string()).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Adds `{a, b}`; loops are ignored.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.rows[a][b / 64] |= 1 << (b % 64);
        self.rows[b][a / 64] |= 1 << (a % 64);
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.rows[a][b / 64] >> (b % 64) & 1 == 1
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bit_iter(&self.rows[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        count_bits(&self.rows[v])
    }

    pub fn edge_count(&self) -> usize {
        (0..self.vertex_count())
            .map(|v| self.degree(v))
            .sum::<usize>()
            / 2
    }

    /// Edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.vertex_count())
            .flat_map(|i| {
                self.neighbours(i)
                    .filter(move |&j| j > i)
                    .map(move |j| (i, j))
            })
            .collect()
    }

    pub fn complement(&self) -> DenseGraph {
        let mut g = DenseGraph::new(self.labels.clone());
        for i in 0..self.vertex_count() {
            for j in i + 1..self.vertex_count() {
                if !self.has_edge(i, j) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(x, &a)| vs[x + 1..].iter().all(|&b| self.has_edge(a, b)))
    }

    pub fn is_proper_colouring(&self, colours: &[u32]) -> bool {
        colours.len() == self.vertex_count()
            && self.edges().iter().all(|&(a, b)| colours[a] != colours[b])
    }

    fn full_set(&self) -> Vec<u64> {
        let mut set = vec![0u64; self.words];
        for v in 0..self.vertex_count() {
            set[v / 64] |= 1 << (v % 64);
        }
        set
    }
}

/// `J_q(n,m,t)` on the canonical enumeration, labelled by encodings.
pub fn build_graph(params: &GrassmannParams, cap: u64) -> Result<DenseGraph, OracleError> {
    let vertices = params.vertex_count();
    let count = match vertices.to_u64() {
        Some(c) if c <= cap => c,
        _ => return Err(OracleError::TooLarge { vertices, cap }),
    };
    let g = Grassmannian::new(params.field(), params.n, params.m)?;
    let subspaces: Vec<Subspace> = (0..count).map(|i| g.subspace_at(i).unwrap()).collect();
    let t = params.t;
    let adjacency: Vec<Vec<usize>> = (0..subspaces.len())
        .into_par_iter()
        .map(|i| {
            (i + 1..subspaces.len())
                .filter(|&j| subspaces[i].intersection_dim(&subspaces[j]).unwrap() >= t)
                .collect()
        })
        .collect();
    let mut graph = DenseGraph::new(subspaces.iter().map(Subspace::encode).collect());
    for (i, row) in adjacency.iter().enumerate() {
        for &j in row {
            graph.add_edge(i, j);
        }
    }
    Ok(graph)
}

/// `J(n,m,t)` on subset-lexicographic `m`-subsets.
pub fn johnson_graph(n: usize, m: usize, t: usize) -> DenseGraph {
    let subsets = BinaryVector::all_of_weight(n, m);
    let mut g = DenseGraph::new(subsets.iter().map(|s| s.to_string()).collect());
    for i in 0..subsets.len() {
        for j in i + 1..subsets.len() {
            if subsets[i].schur(&subsets[j]).weight() >= t {
                g.add_edge(i, j);
            }
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueResult {
    pub size: usize,
    pub witness: Vec<usize>,
    /// False when the node budget ran out; `size` is then a lower bound.
    pub exact: bool,
    pub nodes: u64,
}

struct CliqueSearch<'a> {
    g: &'a DenseGraph,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    best: Vec<usize>,
}

impl CliqueSearch<'_> {
    /// Greedy colouring of `p` in index order: vertices listed class by
    /// class with their colour numbers, so `bound[k]` caps any clique
    /// inside the first `k+1` entries.
    fn colour_sort(&self, p: &[u64]) -> (Vec<usize>, Vec<usize>) {
        let mut uncoloured = p.to_vec();
        let mut order = Vec::new();
        let mut bound = Vec::new();
        let mut colour = 0;
        while uncoloured.iter().any(|&w| w != 0) {
            colour += 1;
            let mut q = uncoloured.clone();
            while let Some(v) = first_bit(&q) {
                uncoloured[v / 64] &= !(1 << (v % 64));
                for (x, n) in q.iter_mut().zip(&self.g.rows[v]) {
                    *x &= !n;
                }
                q[v / 64] &= !(1 << (v % 64));
                order.push(v);
                bound.push(colour);
            }
        }
        (order, bound)
    }

    fn expand(&mut self, r: &mut Vec<usize>, mut p: Vec<u64>) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let (order, bound) = self.colour_sort(&p);
        for k in (0..order.len()).rev() {
            if r.len() + bound[k] <= self.best.len() {
                return;
            }
            let v = order[k];
            r.push(v);
            let next: Vec<u64> = p.iter().zip(&self.g.rows[v]).map(|(a, b)| a & b).collect();
            if next.iter().all(|&w| w == 0) {
                if r.len() > self.best.len() {
                    self.best = r.clone();
                }
            } else {
                self.expand(r, next);
            }
            r.pop();
            p[v / 64] &= !(1 << (v % 64));
            if self.exhausted {
                return;
            }
        }
    }
}

fn greedy_clique(g: &DenseGraph) -> Vec<usize> {
    let mut clique: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    for v in order {
        if clique.iter().all(|&c| g.has_edge(c, v)) {
            clique.push(v);
        }
    }
    clique.sort_unstable();
    clique
}

/// Branch and bound with greedy-colouring bounds. `budget` counts search
/// nodes.
pub fn max_clique(g: &DenseGraph, budget: u64) -> CliqueResult {
    if g.vertex_count() == 0 {
        return CliqueResult {
            size: 0,
            witness: vec![],
            exact: true,
            nodes: 0,
        };
    }
    let mut search = CliqueSearch {
        g,
        budget,
        nodes: 0,
        exhausted: false,
        best: greedy_clique(g),
    };
    search.expand(&mut Vec::new(), g.full_set());
    let mut witness = search.best;
    witness.sort_unstable();
    CliqueResult {
        size: witness.len(),
        witness,
        exact: !search.exhausted,
        nodes: search.nodes,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChromaticResult {
    /// Colours used by `colouring`; the chromatic number when `exact`.
    pub upper: usize,
    /// Clique size.
    pub lower: usize,
    pub colouring: Vec<u32>,
    pub exact: bool,
    pub nodes: u64,
}

struct ColourSearch<'a> {
    g: &'a DenseGraph,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    lower: usize,
    colours: Vec<Option<u32>>,
    /// `counts[v][c]`: neighbours of `v` coloured `c`.
    counts: Vec<Vec<u32>>,
    saturation: Vec<usize>,
    best: Vec<u32>,
    best_used: usize,
}

impl ColourSearch<'_> {
    fn assign(&mut self, v: usize, c: u32) {
        self.colours[v] = Some(c);
        for w in bit_iter(&self.g.rows[v]) {
            let slot = &mut self.counts[w][c as usize];
            if *slot == 0 {
                self.saturation[w] += 1;
            }
            *slot += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.colours[v].take().unwrap();
        for w in bit_iter(&self.g.rows[v]) {
            let slot = &mut self.counts[w][c as usize];
            *slot -= 1;
            if *slot == 0 {
                self.saturation[w] -= 1;
            }
        }
    }

    /// Highest saturation, then most uncoloured neighbours, then lowest index.
    fn select(&self) -> Option<usize> {
        let mut pick: Option<(usize, usize, usize)> = None;
        for v in 0..self.g.vertex_count() {
            if self.colours[v].is_some() {
                continue;
            }
            let free = bit_iter(&self.g.rows[v])
                .filter(|&w| self.colours[w].is_none())
                .count();
            let key = (self.saturation[v], free);
            if pick.is_none_or(|(_, s, f)| key > (s, f)) {
                pick = Some((v, key.0, key.1));
            }
        }
        pick.map(|(v, _, _)| v)
    }

    fn search(&mut self, used: usize) {
        if self.exhausted || self.best_used == self.lower {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let Some(v) = self.select() else {
            if used < self.best_used {
                self.best_used = used;
                self.best = self.colours.iter().map(|c| c.unwrap()).collect();
            }
            return;
        };
        let limit = (used + 1).min(self.best_used - 1);
        for c in 0..limit {
            if self.counts[v][c] > 0 {
                continue;
            }
            self.assign(v, c as u32);
            self.search(used.max(c + 1));
            self.unassign(v);
            if self.exhausted || self.best_used == self.lower {
                return;
            }
        }
    }
}

/// DSATUR colouring without backtracking.
pub fn dsatur(g: &DenseGraph) -> Vec<u32> {
    let v = g.vertex_count();
    let mut s = ColourSearch {
        g,
        budget: 0,
        nodes: 0,
        exhausted: false,
        lower: 0,
        colours: vec![None; v],
        counts: vec![vec![0; v + 1]; v],
        saturation: vec![0; v],
        best: vec![],
        best_used: 0,
    };
    while let Some(x) = s.select() {
        let c = (0..).find(|&c| s.counts[x][c] == 0).unwrap();
        s.assign(x, c as u32);
    }
    s.colours.into_iter().map(Option::unwrap).collect()
}

/// Exact chromatic number by DSATUR branch and bound, with a maximum clique
/// precoloured. Within `budget` search nodes the answer is exact; otherwise
/// `[lower, upper]` brackets it.
pub fn exact_chromatic(g: &DenseGraph, budget: u64) -> ChromaticResult {
    let v = g.vertex_count();
    if v == 0 {
        return ChromaticResult {
            upper: 0,
            lower: 0,
            colouring: vec![],
            exact: true,
            nodes: 0,
        };
    }
    let clique = max_clique(g, budget);
    let greedy = dsatur(g);
    let greedy_used = *greedy.iter().max().unwrap() as usize + 1;
    let mut s = ColourSearch {
        g,
        budget,
        nodes: 0,
        exhausted: false,
        lower: clique.size,
        colours: vec![None; v],
        counts: vec![vec![0; v + 1]; v],
        saturation: vec![0; v],
        best: greedy,
        best_used: greedy_used,
    };
    for (c, &x) in clique.witness.iter().enumerate() {
        s.assign(x, c as u32);
    }
    s.search(clique.size);
    ChromaticResult {
        upper: s.best_used,
        lower: clique.size,
        colouring: s.best,
        exact: (s.best_used == clique.size || !s.exhausted) && clique.exact,
        nodes: s.nodes + clique.nodes,
    }
}

/// `p edge V E` followed by sorted 1-indexed `e i j` lines.
pub fn to_dimacs(g: &DenseGraph) -> String {
    let edges = g.edges();
    let mut out = format!("p edge {} {}\n", g.vertex_count(), edges.len());
    for (i, j) in edges {
        writeln!(out, "e {} {}", i + 1, j + 1).unwrap();
    }
    out
}

/// One `index label` line per vertex, 1-indexed.
pub fn labels_sidecar(g: &DenseGraph) -> String {
    g.labels
        .iter()
        .enumerate()
        .map(|(i, l)| format!("{} {l}\n", i + 1))
        .collect()
}

/// Parse DIMACS edge format; `c` lines are skipped. Labels default to
/// `1..=V`.
pub fn from_dimacs(text: &str, labels: Option<&str>) -> Result<DenseGraph, OracleError> {
    let err = |line: usize, message: &str| OracleError::Parse {
        line,
        message: message.to_string(),
    };
    let mut graph: Option<DenseGraph> = None;
    let mut declared_edges = 0usize;
    for (no, line) in text.lines().enumerate() {
        let no = no + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            [] | ["c", ..] => {}
            ["p", "edge" | "col", v, e] => {
                if graph.is_some() {
                    return Err(err(no, "second problem line"));
                }
                let v: usize = v.parse().map_err(|_| err(no, "bad vertex count"))?;
                declared_edges = e.parse().map_err(|_| err(no, "bad edge count"))?;
                graph = Some(DenseGraph::unlabelled(v));
            }
            ["e", a, b] => {
                let g = graph
                    .as_mut()
                    .ok_or_else(|| err(no, "edge before problem line"))?;
                let a: usize = a.parse().map_err(|_| err(no, "bad endpoint"))?;
                let b: usize = b.parse().map_err(|_| err(no, "bad endpoint"))?;
                if a == 0 || b == 0 || a > g.vertex_count() || b > g.vertex_count() {
                    return Err(err(no, "endpoint out of range"));
                }
                g.add_edge(a - 1, b - 1);
            }
            _ => return Err(err(no, "unrecognised line")),
        }
    }
    let mut g = graph.ok_or_else(|| err(0, "missing problem line"))?;
    if g.edge_count() != declared_edges {
        return Err(err(
            0,
            &format!(
                "header declares {declared_edges} edges, found {}",
                g.edge_count()
            ),
        ));
    }
    if let Some(text) = labels {
        for (no, line) in text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
        {
            let (i, label) = line
                .split_once(' ')
                .ok_or_else(|| err(no + 1, "expected `index label`"))?;
            let i: usize = i.parse().map_err(|_| err(no + 1, "bad index"))?;
            if i == 0 || i > g.vertex_count() {
                return Err(err(no + 1, "index out of range"));
            }
            g.labels[i - 1] = label.to_string();
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann;

    fn complete(v: usize) -> DenseGraph {
        let mut g = DenseGraph::unlabelled(v);
        for i in 0..v {
            for j in i + 1..v {
                g.add_edge(i, j);
            }
        }
        g
    }

    fn cycle(v: usize) -> DenseGraph {
        let mut g = DenseGraph::unlabelled(v);
        for i in 0..v {
            g.add_edge(i, (i + 1) % v);
        }
        g
    }

    /// Smallest `k` admitting a proper colouring, by trying all `k^V`.
    fn brute_chromatic(g: &DenseGraph) -> usize {
        let v = g.vertex_count();
        let edges = g.edges();
        (1..=v)
            .find(|&k| {
                (0..(k as u64).pow(v as u32)).any(|mut code| {
                    let colours: Vec<u64> = (0..v)
                        .map(|_| {
                            let c = code % k as u64;
                            code /= k as u64;
                            c
                        })
                        .collect();
                    edges.iter().all(|&(a, b)| colours[a] != colours[b])
                })
            })
            .unwrap_or(0)
    }

    fn brute_clique(g: &DenseGraph) -> usize {
        let v = g.vertex_count();
        (0u32..1 << v)
            .filter(|mask| {
                let vs: Vec<usize> = (0..v).filter(|i| mask >> i & 1 == 1).collect();
                g.is_clique(&vs)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn trivial_graphs() {
        let k3 = complete(3);
        assert_eq!(max_clique(&k3, DEFAULT_BUDGET).size, 3);
        assert_eq!(exact_chromatic(&k3, DEFAULT_BUDGET).upper, 3);
        let empty = DenseGraph::unlabelled(5);
        assert_eq!(max_clique(&empty, DEFAULT_BUDGET).size, 1);
        let r = exact_chromatic(&empty, DEFAULT_BUDGET);
        assert_eq!((r.upper, r.exact), (1, true));
        let c5 = cycle(5);
        let r = exact_chromatic(&c5, DEFAULT_BUDGET);
        assert_eq!((r.upper, r.lower, r.exact), (3, 2, true));
    }

    #[test]
    fn agrees_with_brute_force_on_pseudorandom_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let v = rng.gen_range(1..=8);
            let density = rng.gen_range(0.1..0.9);
            let mut g = DenseGraph::unlabelled(v);
            for i in 0..v {
                for j in i + 1..v {
                    if rng.gen_bool(density) {
                        g.add_edge(i, j);
                    }
                }
            }
            let clique = max_clique(&g, DEFAULT_BUDGET);
            assert_eq!(clique.size, brute_clique(&g));
            assert!(g.is_clique(&clique.witness));
            let chi = exact_chromatic(&g, DEFAULT_BUDGET);
            assert!(chi.exact);
            assert_eq!(chi.upper, brute_chromatic(&g));
            assert!(g.is_proper_colouring(&chi.colouring));
        }
    }

    #[test]
    fn grassmann_graph_sizes() {
        let g = build_graph(
            &GrassmannParams::new(2, 4, 2, 1).unwrap(),
            DEFAULT_GRAPH_CAP,
        )
        .unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (35, 315));
        let c = g.complement();
        assert!((0..35).all(|v| c.degree(v) == 16));
        let g = build_graph(
            &GrassmannParams::new(2, 5, 2, 1).unwrap(),
            DEFAULT_GRAPH_CAP,
        )
        .unwrap();
        assert_eq!(g.vertex_count(), 155);
        assert!((0..155).all(|v| g.degree(v) == 42));
        assert!(matches!(
            build_graph(&GrassmannParams::new(2, 5, 2, 1).unwrap(), 100),
            Err(OracleError::TooLarge { .. })
        ));
    }

    #[test]
    fn grassmann_graph_exact_values() {
        let params = GrassmannParams::new(2, 4, 2, 1).unwrap();
        let g = build_graph(&params, DEFAULT_GRAPH_CAP).unwrap();
        let clique = max_clique(&g, DEFAULT_BUDGET);
        assert_eq!((clique.size, clique.exact), (7, true));
        let chi = exact_chromatic(&g, DEFAULT_BUDGET);
        assert_eq!((chi.upper, chi.exact), (7, true));
        assert!(g.is_proper_colouring(&chi.colouring));
        // Either all seven lines pass through one point, or they lie in
        // one plane: the intersection of all of them, or their span, has
        // dimension 1 or 3.
        let subs: Vec<Subspace> = clique
            .witness
            .iter()
            .map(|&i| Subspace::parse(&g.labels()[i]).unwrap())
            .collect();
        let stack = |ms: Vec<crate::matq::MatrixFq>| {
            ms.iter()
                .skip(1)
                .fold(ms[0].clone(), |a, b| a.vstack(b).unwrap())
        };
        let span = stack(subs.iter().map(|s| s.basis().clone()).collect()).rank();
        let meet = 4 - stack(
            subs.iter()
                .map(|s| grassmann::dualize(s).basis().clone())
                .collect(),
        )
        .rank();
        assert!(meet == 1 || span == 3, "meet {meet}, span {span}");
    }

    #[test]
    fn johnson_graph_exact_values() {
        assert_eq!(
            exact_chromatic(&johnson_graph(4, 2, 1), DEFAULT_BUDGET).upper,
            3
        );
        let r = exact_chromatic(&johnson_graph(6, 3, 1), DEFAULT_BUDGET);
        assert_eq!((r.upper, r.exact), (10, true));
    }

    #[test]
    fn dimacs_round_trip() {
        let g = johnson_graph(5, 2, 1);
        let text = to_dimacs(&g);
        assert!(text.starts_with("p edge 10 "));
        let lines: Vec<&str> = text.lines().skip(1).collect();
        let mut sorted = lines.clone();
        sorted.sort_by_key(|l| {
            let v: Vec<usize> = l.split(' ').skip(1).map(|x| x.parse().unwrap()).collect();
            (v[0], v[1])
        });
        assert_eq!(lines, sorted);
        let back = from_dimacs(&format!("c comment\n{text}"), Some(&labels_sidecar(&g))).unwrap();
        assert_eq!(back, g);
        assert!(from_dimacs("e 1 2\n", None).is_err());
        assert!(from_dimacs("p edge 2 1\ne 1 3\n", None).is_err());
        assert!(from_dimacs("p edge 2 2\ne 1 2\n", None).is_err());
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let g = build_graph(
            &GrassmannParams::new(2, 4, 2, 1).unwrap(),
            DEFAULT_GRAPH_CAP,
        )
        .unwrap();
        let r = max_clique(&g, 1);
        assert!(!r.exact);
        assert!(g.is_clique(&r.witness));
    }
}
