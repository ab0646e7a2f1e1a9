//! Uniform hypergraphs, layered hypergraphs, complexes, and ground partitions.
//!
//! Vertices are dense `0..n` integers. Every edge is stored as a sorted
//! `Vec<usize>` and edge sets are `BTreeSet`s, so iteration order is the
//! lexicographic order of sorted edges and all outputs are deterministic.

use std::collections::{BTreeSet, HashSet};
use std::ops::Deref;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// Default bound on the number of subsets any single construction may
/// enumerate.
pub const DEFAULT_SUBSET_CAP: u128 = 1 << 24;

pub type Edge = Vec<usize>;

fn mask_of(set: &[usize]) -> u128 {
    set.iter().fold(0u128, |m, &v| m | (1u128 << v))
}

/// Sorted copy of `set`.
pub fn canonical(set: &[usize]) -> Edge {
    let mut e = set.to_vec();
    e.sort_unstable();
    e
}

/// Membership oracle for k-sets; lets walks and searches run over any host.
pub trait EdgeOracle {
    fn uniformity(&self) -> usize;
    fn vertex_count(&self) -> usize;
    /// `set` may be in any order; it is an edge only if its vertices are distinct.
    fn has_edge(&self, set: &[usize]) -> bool;
}

/// A k-uniform hypergraph on `0..n`.
#[derive(Debug, Clone)]
pub struct KGraph {
    k: usize,
    n: usize,
    edges: BTreeSet<Edge>,
    masks: Option<HashSet<u128>>,
}

impl PartialEq for KGraph {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.n == other.n && self.edges == other.edges
    }
}

impl Eq for KGraph {}

impl KGraph {
    /// Builds a k-graph, rejecting wrong arity, out-of-range or repeated
    /// vertices, and duplicate edges.
    pub fn new<I>(k: usize, n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut g = Self::empty(k, n)?;
        for e in edges {
            g.insert(e)?;
        }
        Ok(g)
    }

    pub fn empty(k: usize, n: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidGraph("uniformity must be at least 1".into()));
        }
        Ok(Self {
            k,
            n,
            edges: BTreeSet::new(),
            masks: (n <= 128).then(HashSet::new),
        })
    }

    /// All k-subsets of `0..n`.
    pub fn complete(n: usize, k: usize) -> Result<Self> {
        Self::new(k, n, (0..n).combinations(k))
    }

    /// Builds from edges that are known valid; duplicates are merged.
    pub(crate) fn from_sorted_unchecked<I: IntoIterator<Item = Edge>>(k: usize, n: usize, edges: I) -> Self {
        let edges: BTreeSet<Edge> = edges.into_iter().collect();
        let masks = (n <= 128).then(|| edges.iter().map(|e| mask_of(e)).collect());
        Self { k, n, edges, masks }
    }

    fn insert(&mut self, mut e: Edge) -> Result<()> {
        if e.len() != self.k {
            return Err(Error::InvalidGraph(format!(
                "edge {e:?} has {} vertices, expected {}",
                e.len(),
                self.k
            )));
        }
        e.sort_unstable();
        if let Some(&v) = e.iter().find(|&&v| v >= self.n) {
            return Err(Error::InvalidGraph(format!("vertex {v} out of range 0..{}", self.n)));
        }
        if e.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("edge {e:?} repeats a vertex")));
        }
        if let Some(m) = self.masks.as_mut() {
            m.insert(mask_of(&e));
        }
        if !self.edges.insert(e.clone()) {
            return Err(Error::InvalidGraph(format!("duplicate edge {e:?}")));
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter()
    }

    pub fn edge_set(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    /// Membership for a sorted edge.
    pub fn contains(&self, sorted: &[usize]) -> bool {
        self.edges.contains(sorted)
    }

    /// Number of edges containing every vertex of `s`. Only sets smaller
    /// than `k` are valid queries; `|s| = k - 1` gives the codegree.
    pub fn degree(&self, s: &[usize]) -> Result<usize> {
        if s.len() >= self.k {
            return Err(Error::InvalidQuery(format!(
                "degree of a {}-set in a {}-graph",
                s.len(),
                self.k
            )));
        }
        if let Some(&v) = s.iter().find(|&&v| v >= self.n) {
            return Err(Error::InvalidQuery(format!("vertex {v} out of range")));
        }
        Ok(self.edges.iter().filter(|e| s.iter().all(|v| e.binary_search(v).is_ok())).count())
    }

    /// Sub-hypergraph induced on `vertices`, keeping the original labels.
    pub fn induced(&self, vertices: &[usize]) -> KGraph {
        let keep: HashSet<usize> = vertices.iter().copied().collect();
        Self::from_sorted_unchecked(
            self.k,
            self.n,
            self.edges.iter().filter(|e| e.iter().all(|v| keep.contains(v))).cloned(),
        )
    }

    /// Restriction to an edge subset, keeping the vertex set.
    pub fn with_edges<'a, I: IntoIterator<Item = &'a Edge>>(&self, edges: I) -> KGraph {
        Self::from_sorted_unchecked(self.k, self.n, edges.into_iter().cloned())
    }

    /// Edge density `e(G) / C(n, k)`.
    pub fn density(&self) -> Rational {
        crate::rational::ratio_or_zero(self.edge_count() as u64, crate::rational::binomial(self.n, self.k))
    }

    /// Vertices lying in at least one edge.
    pub fn covered_vertices(&self) -> BTreeSet<usize> {
        self.edges.iter().flatten().copied().collect()
    }
}

impl EdgeOracle for KGraph {
    fn uniformity(&self) -> usize {
        self.k
    }

    fn vertex_count(&self) -> usize {
        self.n
    }

    fn has_edge(&self, set: &[usize]) -> bool {
        if set.len() != self.k || set.iter().any(|&v| v >= self.n) {
            return false;
        }
        match &self.masks {
            Some(masks) => {
                let m = mask_of(set);
                m.count_ones() as usize == self.k && masks.contains(&m)
            }
            None => {
                let e = canonical(set);
                e.windows(2).all(|w| w[0] != w[1]) && self.edges.contains(&e)
            }
        }
    }
}

/// A hypergraph with edges of sizes `0..=max_level`, stored level by level.
/// No closure property is assumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    levels: Vec<BTreeSet<Edge>>,
}

impl Hypergraph {
    pub fn new(n: usize, max_level: usize) -> Self {
        Self {
            n,
            levels: vec![BTreeSet::new(); max_level + 1],
        }
    }

    /// Collects arbitrary sets (any sizes up to `max_level`) level by level.
    pub fn from_sets<I: IntoIterator<Item = Edge>>(n: usize, max_level: usize, sets: I) -> Result<Self> {
        let mut h = Self::new(n, max_level);
        for s in sets {
            h.insert(s)?;
        }
        Ok(h)
    }

    /// Inserts a set; returns whether it was new.
    pub fn insert(&mut self, mut e: Edge) -> Result<bool> {
        e.sort_unstable();
        if e.len() > self.max_level() {
            return Err(Error::InvalidGraph(format!(
                "edge {e:?} exceeds max level {}",
                self.max_level()
            )));
        }
        if let Some(&v) = e.iter().find(|&&v| v >= self.n) {
            return Err(Error::InvalidGraph(format!("vertex {v} out of range 0..{}", self.n)));
        }
        if e.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("edge {e:?} repeats a vertex")));
        }
        Ok(self.levels[e.len()].insert(e))
    }

    pub fn remove(&mut self, e: &[usize]) -> bool {
        e.len() < self.levels.len() && self.levels[e.len()].remove(e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, i: usize) -> &BTreeSet<Edge> {
        &self.levels[i]
    }

    pub fn levels(&self) -> &[BTreeSet<Edge>] {
        &self.levels
    }

    /// Membership for a sorted set.
    pub fn contains(&self, sorted: &[usize]) -> bool {
        sorted.len() < self.levels.len() && self.levels[sorted.len()].contains(sorted)
    }

    /// `e_0, ..., e_k`.
    pub fn level_counts(&self) -> Vec<usize> {
        self.levels.iter().map(BTreeSet::len).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.iter().all(BTreeSet::is_empty)
    }

    /// Level `i` as an `i`-graph (`i >= 1`).
    pub fn level_graph(&self, i: usize) -> Result<KGraph> {
        if i == 0 || i > self.max_level() {
            return Err(Error::InvalidQuery(format!("level {i} has no k-graph view")));
        }
        Ok(KGraph::from_sorted_unchecked(i, self.n, self.levels[i].iter().cloned()))
    }

    pub fn is_down_closed(&self) -> bool {
        self.levels.iter().flatten().all(|e| {
            e.is_empty()
                || (0..e.len()).all(|skip| {
                    let sub: Edge = e.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                    self.contains(&sub)
                })
        })
    }

    /// Number of `v` with `e ∪ {v}` an edge one level up.
    pub fn up_degree(&self, e: &[usize]) -> usize {
        if e.len() + 1 >= self.levels.len() {
            return 0;
        }
        self.levels[e.len() + 1].iter().filter(|f| is_subset(e, f)).count()
    }
}

/// Sorted-slice subset test.
pub fn is_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|v| it.by_ref().any(|w| w == v))
}

/// All subsets of a sorted set, including the empty set and the set itself.
pub fn all_subsets(e: &[usize]) -> impl Iterator<Item = Edge> + '_ {
    (0..=e.len()).flat_map(move |r| e.iter().copied().combinations(r))
}

/// A down-closed hypergraph. Derefs to [`Hypergraph`] for read access.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complex(Hypergraph);

impl Deref for Complex {
    type Target = Hypergraph;

    fn deref(&self) -> &Hypergraph {
        &self.0
    }
}

impl Complex {
    pub fn empty(n: usize, max_level: usize) -> Self {
        Complex(Hypergraph::new(n, max_level))
    }

    /// Wraps a hypergraph after checking it is down-closed.
    pub fn from_hypergraph(h: Hypergraph) -> Result<Self> {
        if !h.is_down_closed() {
            return Err(Error::InvalidGraph("hypergraph is not down-closed".into()));
        }
        Ok(Complex(h))
    }

    /// Down-closure of arbitrary generating sets, with the default subset cap.
    pub fn generated_by<I: IntoIterator<Item = Edge>>(n: usize, max_level: usize, sets: I) -> Result<Self> {
        Self::generated_by_with_cap(n, max_level, sets, DEFAULT_SUBSET_CAP)
    }

    pub fn generated_by_with_cap<I: IntoIterator<Item = Edge>>(
        n: usize,
        max_level: usize,
        sets: I,
        cap: u128,
    ) -> Result<Self> {
        let gens: Vec<Edge> = sets.into_iter().collect();
        let needed: u128 = gens.iter().map(|e| 1u128 << e.len().min(127)).sum();
        if needed > cap {
            return Err(Error::Capacity {
                what: "down-closure",
                needed,
                cap,
            });
        }
        let mut h = Hypergraph::new(n, max_level);
        for g in gens {
            let g = canonical(&g);
            if h.contains(&g) {
                continue;
            }
            h.insert(g.clone())?;
            for sub in all_subsets(&g) {
                h.insert(sub)?;
            }
        }
        Ok(Complex(h))
    }

    pub fn as_hypergraph(&self) -> &Hypergraph {
        &self.0
    }

    pub fn into_hypergraph(self) -> Hypergraph {
        self.0
    }

    /// Removes `e` together with every edge containing it.
    pub fn delete_with_supersets(&mut self, e: &[usize]) {
        for level in self.0.levels.iter_mut().skip(e.len()) {
            level.retain(|f| !is_subset(e, f));
        }
    }

    pub(crate) fn from_levels_unchecked(n: usize, levels: Vec<BTreeSet<Edge>>) -> Self {
        Complex(Hypergraph { n, levels })
    }
}

/// The complex of all subsets of edges of `g`.
pub fn down_closure(g: &KGraph) -> Result<Complex> {
    down_closure_with_cap(g, DEFAULT_SUBSET_CAP)
}

pub fn down_closure_with_cap(g: &KGraph, cap: u128) -> Result<Complex> {
    Complex::generated_by_with_cap(g.n(), g.k(), g.edges().cloned(), cap)
}

/// `e_i` for every level of `c`.
pub fn level_counts(c: &Complex) -> Vec<usize> {
    c.level_counts()
}

/// `K_i(H)`: the `i`-sets all of whose `(i-1)`-subsets are edges of `h`.
/// Exhaustive over `C(n, i)` candidates.
pub fn supported_sets(h: &KGraph, i: usize) -> Result<KGraph> {
    supported_sets_with_cap(h, i, DEFAULT_SUBSET_CAP)
}

pub fn supported_sets_with_cap(h: &KGraph, i: usize, cap: u128) -> Result<KGraph> {
    if h.k() + 1 != i {
        return Err(Error::InvalidQuery(format!(
            "K_{i} needs an ({})-graph, got a {}-graph",
            i - 1,
            h.k()
        )));
    }
    let needed = crate::rational::binomial(h.n(), i) as u128;
    if needed > cap {
        return Err(Error::Capacity {
            what: "supported sets",
            needed,
            cap,
        });
    }
    // Only vertices covered by h can lie in a supported set.
    let covered: Vec<usize> = h.covered_vertices().into_iter().collect();
    let sets = covered
        .into_iter()
        .combinations(i)
        .filter(|s| s.iter().copied().combinations(i - 1).all(|sub| h.contains(&sub)));
    Ok(KGraph::from_sorted_unchecked(i, h.n(), sets))
}

/// Partition of `0..n` into `t` labeled parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundPartition {
    parts: usize,
    assignment: Vec<usize>,
    equal_size: bool,
}

impl GroundPartition {
    /// `assignment[v]` is the part of vertex `v`. Every part id below `parts`
    /// must be used when `equal_size` is requested.
    pub fn new(parts: usize, assignment: Vec<usize>, equal_size: bool) -> Result<Self> {
        if let Some(&p) = assignment.iter().find(|&&p| p >= parts) {
            return Err(Error::Parameter(format!("part id {p} out of range 0..{parts}")));
        }
        let p = Self {
            parts,
            assignment,
            equal_size,
        };
        if equal_size {
            let sizes = p.part_sizes();
            if sizes.iter().any(|&s| s != sizes[0]) {
                return Err(Error::Parameter(format!("parts have unequal sizes {sizes:?}")));
            }
        }
        Ok(p)
    }

    /// Builds from explicit parts, which must be disjoint and cover `0..n`.
    pub fn from_parts(n: usize, parts: &[Vec<usize>]) -> Result<Self> {
        let mut assignment = vec![usize::MAX; n];
        for (i, part) in parts.iter().enumerate() {
            for &v in part {
                if v >= n {
                    return Err(Error::Parameter(format!("vertex {v} out of range")));
                }
                if assignment[v] != usize::MAX {
                    return Err(Error::Parameter(format!("vertex {v} lies in two parts")));
                }
                assignment[v] = i;
            }
        }
        if let Some(v) = assignment.iter().position(|&p| p == usize::MAX) {
            return Err(Error::Parameter(format!("vertex {v} is in no part")));
        }
        let equal = parts.iter().all(|p| p.len() == parts[0].len());
        Self::new(parts.len(), assignment, equal)
    }

    /// `t` consecutive blocks of size `m`: part `i` is `i*m .. (i+1)*m`.
    pub fn blocks(t: usize, m: usize) -> Self {
        Self {
            parts: t,
            assignment: (0..t * m).map(|v| v / m.max(1)).collect(),
            equal_size: true,
        }
    }

    pub fn part_count(&self) -> usize {
        self.parts
    }

    pub fn vertex_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_equal_size(&self) -> bool {
        self.equal_size
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.parts];
        for &p in &self.assignment {
            sizes[p] += 1;
        }
        sizes
    }

    pub fn members(&self, part: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&v| self.assignment[v] == part).collect()
    }

    pub fn parts(&self) -> Vec<Vec<usize>> {
        (0..self.parts).map(|p| self.members(p)).collect()
    }

    /// Sorted part ids met by `set`, or `None` when two vertices share a part.
    pub fn index(&self, set: &[usize]) -> Option<Vec<usize>> {
        let mut idx: Vec<usize> = set.iter().map(|&v| self.assignment[v]).collect();
        idx.sort_unstable();
        idx.windows(2).all(|w| w[0] != w[1]).then_some(idx)
    }

    pub fn is_partite(&self, set: &[usize]) -> bool {
        self.index(set).is_some()
    }
}

fn index_matches(p: &GroundPartition, e: &[usize], a: &[usize], strict_below: bool) -> bool {
    match p.index(e) {
        None => false,
        Some(idx) if strict_below => idx.len() < a.len() && is_subset(&idx, a),
        Some(idx) => idx == a,
    }
}

/// `H_A`: edges of `g` with index exactly `a`. With `strict_below` the
/// result is `H_{A^<}`, the edges whose index is a proper subset of `a`,
/// which for a k-graph is empty unless `|a| > k`.
pub fn partite_restrict_graph(g: &KGraph, p: &GroundPartition, a: &[usize], strict_below: bool) -> KGraph {
    let a = canonical(a);
    KGraph::from_sorted_unchecked(
        g.k(),
        g.n(),
        g.edges().filter(|e| index_matches(p, e, &a, strict_below)).cloned(),
    )
}

/// `H_A` for a complex: the edges with index exactly `a` (all of size `|a|`).
pub fn partite_restrict_exact(c: &Hypergraph, p: &GroundPartition, a: &[usize]) -> BTreeSet<Edge> {
    let a = canonical(a);
    if a.len() > c.max_level() {
        return BTreeSet::new();
    }
    c.level(a.len()).iter().filter(|e| index_matches(p, e, &a, false)).cloned().collect()
}

/// `H_{A^<}` for a complex: every edge whose index is a proper subset of
/// `a`. The result is again down-closed.
pub fn partite_restrict_below(c: &Complex, p: &GroundPartition, a: &[usize]) -> Complex {
    let a = canonical(a);
    let levels = c
        .levels()
        .iter()
        .map(|lvl| lvl.iter().filter(|e| index_matches(p, e, &a, true)).cloned().collect())
        .collect();
    Complex::from_levels_unchecked(c.n(), levels)
}

/// `e_{i-1}(C) - i/(n-i+1) e_i(C)`, non-negative for every complex.
pub fn local_lym_margin(c: &Complex, i: usize) -> Result<Rational> {
    let n = c.n();
    if i == 0 || i > c.max_level() {
        return Err(Error::InvalidQuery(format!("level {i} outside 1..={}", c.max_level())));
    }
    if n < i {
        return Err(Error::InvalidQuery(format!("n = {n} is smaller than i = {i}")));
    }
    let counts = c.level_counts();
    let coeff = Rational::new((i as i64).into(), ((n - i + 1) as i64).into());
    Ok(int(counts[i - 1] as u64) - coeff * int(counts[i] as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{ratio, zero};

    fn c6() -> KGraph {
        KGraph::new(
            3,
            6,
            vec![vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4], vec![3, 4, 5], vec![4, 5, 0], vec![5, 0, 1]],
        )
        .unwrap()
    }

    #[test]
    fn rejects_malformed_graphs() {
        assert!(KGraph::new(3, 4, vec![vec![0, 1]]).is_err());
        assert!(KGraph::new(3, 4, vec![vec![0, 1, 4]]).is_err());
        assert!(KGraph::new(3, 4, vec![vec![0, 1, 1]]).is_err());
        assert!(KGraph::new(3, 4, vec![vec![0, 1, 2], vec![2, 1, 0]]).is_err());
        assert!(KGraph::empty(0, 3).is_err());
    }

    #[test]
    fn down_closure_counts() {
        let k5 = KGraph::complete(5, 3).unwrap();
        assert_eq!(level_counts(&down_closure(&k5).unwrap()), vec![1, 5, 10, 10]);
        let k6 = KGraph::complete(6, 3).unwrap();
        assert_eq!(level_counts(&down_closure(&k6).unwrap()), vec![1, 6, 15, 20]);
        let empty = KGraph::empty(3, 4).unwrap();
        let c = down_closure(&empty).unwrap();
        assert_eq!(level_counts(&c), vec![0, 0, 0, 0]);
        assert!(c.is_empty());
        // Pairs inside edges of C_6: six consecutive pairs plus six pairs at distance two.
        assert_eq!(level_counts(&down_closure(&c6()).unwrap()), vec![1, 6, 12, 6]);
    }

    #[test]
    fn capacity_guard_trips() {
        let k6 = KGraph::complete(6, 3).unwrap();
        let err = down_closure_with_cap(&k6, 100).unwrap_err();
        assert!(matches!(err, Error::Capacity { needed: 160, .. }));
    }

    #[test]
    fn degrees() {
        let k5 = KGraph::complete(5, 3).unwrap();
        assert_eq!(k5.degree(&[0, 1]).unwrap(), 3);
        let g = c6();
        assert_eq!(g.degree(&[0, 1]).unwrap(), 2);
        assert_eq!(g.degree(&[0]).unwrap(), 3);
        assert_eq!(g.degree(&[]).unwrap(), 6);
        assert!(matches!(g.degree(&[0, 1, 2]), Err(Error::InvalidQuery(_))));
    }

    #[test]
    fn supported_sets_examples() {
        let k4 = KGraph::complete(4, 2).unwrap();
        assert_eq!(supported_sets(&k4, 3).unwrap().edge_count(), 4);
        let h = KGraph::new(2, 4, vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![2, 3]]).unwrap();
        let s = supported_sets(&h, 3).unwrap();
        assert_eq!(s.edges().cloned().collect::<Vec<_>>(), vec![vec![0, 1, 2]]);
        assert!(supported_sets(&KGraph::empty(2, 4).unwrap(), 3).unwrap().is_empty());
        assert!(supported_sets(&h, 4).is_err());
    }

    #[test]
    fn partite_restriction() {
        let g = c6();
        let p = GroundPartition::from_parts(6, &[vec![0, 3], vec![1, 4], vec![2, 5]]).unwrap();
        assert_eq!(partite_restrict_graph(&g, &p, &[0, 1, 2], false).edge_count(), 6);
        assert_eq!(partite_restrict_graph(&g, &p, &[0, 1, 2], true).edge_count(), 0);
        let c = down_closure(&g).unwrap();
        assert_eq!(
            partite_restrict_exact(&c, &p, &[]).into_iter().collect::<Vec<_>>(),
            vec![Vec::<usize>::new()]
        );
        // Pairs of C_6's closure crossing parts {0,3} and {1,4}.
        let cross: Vec<_> = partite_restrict_exact(&c, &p, &[0, 1]).into_iter().collect();
        assert_eq!(cross, vec![vec![0, 1], vec![0, 4], vec![1, 3], vec![3, 4]]);
        let below = partite_restrict_below(&c, &p, &[0, 1]);
        assert_eq!(below.level_counts(), vec![1, 4, 0, 0]);
        assert!(below.is_down_closed());
    }

    #[test]
    fn lym_examples() {
        let k4 = down_closure(&KGraph::complete(4, 3).unwrap()).unwrap();
        assert_eq!(local_lym_margin(&k4, 3).unwrap(), zero());
        let k5 = down_closure(&KGraph::complete(5, 3).unwrap()).unwrap();
        assert_eq!(local_lym_margin(&k5, 3).unwrap(), zero());
        assert_eq!(local_lym_margin(&k5, 2).unwrap(), int(5) - ratio(2, 4) * int(10));
        let empty = Complex::empty(4, 3);
        assert_eq!(local_lym_margin(&empty, 2).unwrap(), zero());
        assert!(local_lym_margin(&Complex::empty(2, 3), 3).is_err());
    }

    #[test]
    fn ground_partition_validation() {
        assert!(GroundPartition::from_parts(4, &[vec![0, 1], vec![1, 2, 3]]).is_err());
        assert!(GroundPartition::from_parts(4, &[vec![0, 1], vec![2]]).is_err());
        assert!(GroundPartition::new(2, vec![0, 0, 1], true).is_err());
        let p = GroundPartition::blocks(3, 2);
        assert_eq!(p.parts(), vec![vec![0, 1], vec![2, 3], vec![4, 5]]);
        assert_eq!(p.index(&[5, 0]), Some(vec![0, 2]));
        assert_eq!(p.index(&[0, 1]), None);
    }
}
