//! Tight walks, paths, and cycles: validation, tight components, shortest
//! walks between edges, walk algebra for cycle planning, and a backtracking
//! search oracle.

use std::collections::{BTreeMap, HashMap, VecDeque};

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{canonical, Edge, EdgeOracle, KGraph};
use crate::rational::{int, Rational};

/// A validated vertex sequence whose windows of `k` consecutive vertices
/// (wrapping when cyclic) are all edges of its host.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TightWalk {
    k: usize,
    vertices: Vec<usize>,
    cyclic: bool,
}

impl TightWalk {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    /// Number of edges traversed: windows for a walk, vertices for a cycle.
    pub fn length(&self) -> usize {
        if self.cyclic {
            self.vertices.len()
        } else {
            self.vertices.len() + 1 - self.k
        }
    }

    pub fn initial_tuple(&self) -> &[usize] {
        &self.vertices[..self.k - 1]
    }

    pub fn terminal_tuple(&self) -> &[usize] {
        &self.vertices[self.vertices.len() + 1 - self.k..]
    }

    pub fn is_path(&self) -> bool {
        self.vertices.iter().all_unique()
    }
}

/// Why a sequence is not a tight walk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TightViolation {
    /// Fewer than `k - 1` vertices for a walk, or at most `k` for a cycle.
    TooShort { len: usize },
    OutOfRange { position: usize, vertex: usize },
    RepeatedVertex { position: usize, vertex: usize },
    /// The window starting at `window` is not an edge.
    NotAnEdge { window: usize, vertices: Vec<usize> },
}

/// Checks `seq` window by window. Non-cyclic sequences of exactly `k - 1`
/// vertices are accepted as tight paths of length zero. Cycles must have
/// distinct vertices and more than `k` of them.
pub fn verify_tight<H: EdgeOracle + ?Sized>(
    seq: &[usize],
    host: &H,
    cyclic: bool,
    require_path: bool,
) -> std::result::Result<TightWalk, TightViolation> {
    let k = host.uniformity();
    let min_len = if cyclic { k + 1 } else { k - 1 };
    if seq.len() < min_len {
        return Err(TightViolation::TooShort { len: seq.len() });
    }
    let n = host.vertex_count();
    if let Some((position, &vertex)) = seq.iter().find_position(|&&v| v >= n) {
        return Err(TightViolation::OutOfRange { position, vertex });
    }
    if require_path || cyclic {
        let mut seen = HashMap::new();
        for (position, &vertex) in seq.iter().enumerate() {
            if seen.insert(vertex, position).is_some() {
                return Err(TightViolation::RepeatedVertex { position, vertex });
            }
        }
    }
    let windows = if cyclic { seq.len() } else { seq.len() + 1 - k };
    let mut window = Vec::with_capacity(k);
    for start in 0..windows {
        window.clear();
        window.extend((0..k).map(|i| seq[(start + i) % seq.len()]));
        if !host.has_edge(&window) {
            return Err(TightViolation::NotAnEdge {
                window: start,
                vertices: window.clone(),
            });
        }
    }
    Ok(TightWalk {
        k,
        vertices: seq.to_vec(),
        cyclic,
    })
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Tight-component label for every edge. Components are numbered in order
/// of their lexicographically smallest edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightComponentLabels {
    labels: BTreeMap<Edge, usize>,
    count: usize,
}

impl TightComponentLabels {
    pub fn component_count(&self) -> usize {
        self.count
    }

    pub fn label(&self, edge: &[usize]) -> Option<usize> {
        self.labels.get(&canonical(edge)).copied()
    }

    pub fn labels(&self) -> &BTreeMap<Edge, usize> {
        &self.labels
    }

    /// Edges of component `c`, in lexicographic order.
    pub fn members(&self, c: usize) -> Vec<Edge> {
        self.labels.iter().filter(|(_, &l)| l == c).map(|(e, _)| e.clone()).collect()
    }

    /// Component sizes indexed by label.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count];
        for &l in self.labels.values() {
            sizes[l] += 1;
        }
        sizes
    }
}

/// Groups edges by shared `(k-1)`-subsets and unions each group.
pub fn tight_components(g: &KGraph) -> TightComponentLabels {
    let edges: Vec<&Edge> = g.edges().collect();
    let mut uf = UnionFind::new(edges.len());
    let mut first_owner: HashMap<Edge, usize> = HashMap::new();
    for (idx, e) in edges.iter().enumerate() {
        for sub in e.iter().copied().combinations(g.k() - 1) {
            match first_owner.get(&sub) {
                Some(&owner) => {
                    uf.union(owner, idx);
                }
                None => {
                    first_owner.insert(sub, idx);
                }
            }
        }
    }
    let mut root_label: HashMap<usize, usize> = HashMap::new();
    let mut labels = BTreeMap::new();
    for (idx, e) in edges.iter().enumerate() {
        let root = uf.find(idx);
        let next = root_label.len();
        let label = *root_label.entry(root).or_insert(next);
        labels.insert((*e).clone(), label);
    }
    TightComponentLabels {
        count: root_label.len(),
        labels,
    }
}

/// Shortest tight walk starting with the vertices of `e` and ending with
/// those of `f`, by breadth-first search over ordered `(k-1)`-tuples.
/// Orderings of `e` and extension vertices are tried in lexicographic order.
pub fn min_tight_walk<H: EdgeOracle + ?Sized>(host: &H, e: &[usize], f: &[usize]) -> Result<TightWalk> {
    let k = host.uniformity();
    let (e, f) = (canonical(e), canonical(f));
    for x in [&e, &f] {
        if !host.has_edge(x) {
            return Err(Error::InvalidQuery(format!("{x:?} is not an edge of the host")));
        }
    }
    if e == f {
        return Ok(TightWalk {
            k,
            vertices: e,
            cyclic: false,
        });
    }
    let n = host.vertex_count();
    // parent[state] = (previous state, or None with the first vertex of the seed ordering)
    let mut parent: HashMap<Vec<usize>, (Option<Vec<usize>>, usize)> = HashMap::new();
    let mut queue = VecDeque::new();
    for order in e.iter().copied().permutations(k) {
        let state = order[1..].to_vec();
        parent.insert(state.clone(), (None, order[0]));
        queue.push_back(state);
    }
    let mut window = Vec::with_capacity(k);
    while let Some(state) = queue.pop_front() {
        for v in 0..n {
            if state.contains(&v) {
                continue;
            }
            window.clear();
            window.extend_from_slice(&state);
            window.push(v);
            if !host.has_edge(&window) {
                continue;
            }
            if canonical(&window) == f {
                return Ok(TightWalk {
                    k,
                    vertices: rebuild(&parent, &state, v),
                    cyclic: false,
                });
            }
            let next: Vec<usize> = window[1..].to_vec();
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), (Some(state.clone()), v));
                queue.push_back(next);
            }
        }
    }
    Err(Error::NotTightlyConnected)
}

fn rebuild(parent: &HashMap<Vec<usize>, (Option<Vec<usize>>, usize)>, last: &[usize], final_vertex: usize) -> Vec<usize> {
    let mut appended = vec![final_vertex];
    let mut state = last.to_vec();
    loop {
        let (prev, added) = &parent[&state];
        match prev {
            Some(p) => {
                appended.push(*added);
                state = p.clone();
            }
            None => {
                let mut walk = vec![*added];
                walk.extend_from_slice(&state);
                walk.extend(appended.iter().rev());
                return walk;
            }
        }
    }
}

/// `W + W'`: the shared `(k-1)`-tuple appears once and lengths add.
pub fn concatenate(w: &TightWalk, w2: &TightWalk) -> Result<TightWalk> {
    if w.k != w2.k || w.cyclic || w2.cyclic {
        return Err(Error::InvalidQuery("concatenation needs two open walks of equal uniformity".into()));
    }
    if w.terminal_tuple() != w2.initial_tuple() {
        return Err(Error::TupleMismatch {
            left: w.terminal_tuple().to_vec(),
            right: w2.initial_tuple().to_vec(),
        });
    }
    let mut vertices = w.vertices.clone();
    vertices.extend_from_slice(&w2.vertices[w.k - 1..]);
    Ok(TightWalk {
        k: w.k,
        vertices,
        cyclic: false,
    })
}

/// Writes the `(k-1)`-tuples of `w` from last to first. The result runs from
/// the terminal tuple of `w` back to its initial tuple and has length
/// `(k-1) * length(w)`.
pub fn reverse_to_ws(w: &TightWalk) -> TightWalk {
    let k = w.k;
    let tuples = w.vertices.len() + 2 - k;
    let mut vertices = Vec::with_capacity(tuples * (k - 1));
    for start in (0..tuples).rev() {
        vertices.extend_from_slice(&w.vertices[start..start + k - 1]);
    }
    TightWalk {
        k,
        vertices,
        cyclic: false,
    }
}

/// Optional bounds `0 <= n_i <= (1 - 3 alpha) w_i m` on the fill counts.
#[derive(Debug, Clone)]
pub struct FillBounds {
    pub alpha: Rational,
    pub weights: Vec<Rational>,
    pub cluster_size: u64,
}

/// Cycle length `(3 + sum n_i) k + (sum l(W_i)) (k + 1)` produced by the
/// walk-following embedding; the walk total must be a multiple of `k`.
pub fn plan_cycle_length(k: usize, fills: &[u64], walk_lengths: &[u64], bounds: Option<&FillBounds>) -> Result<u64> {
    let total: u64 = walk_lengths.iter().sum();
    if !total.is_multiple_of(k as u64) {
        return Err(Error::WalkTotalNotDivisible { total, k });
    }
    if let Some(b) = bounds {
        if b.weights.len() != fills.len() {
            return Err(Error::Parameter(format!(
                "{} weights for {} fill counts",
                b.weights.len(),
                fills.len()
            )));
        }
        let factor = int(1) - int(3) * &b.alpha;
        for (index, (&value, w)) in fills.iter().zip(&b.weights).enumerate() {
            let bound = &factor * w * int(b.cluster_size);
            if int(value) > bound {
                return Err(Error::FillBound {
                    index: index + 1,
                    value,
                    bound: bound.to_string(),
                });
            }
        }
    }
    let k = k as u64;
    Ok((3 + fills.iter().sum::<u64>()) * k + total * (k + 1))
}

/// What [`search_tight`] looks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchGoal {
    /// A tight cycle on exactly this many vertices.
    Cycle(usize),
    LongestCycle,
    LongestPath,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    /// Maximum number of node expansions.
    pub budget: u64,
    /// Smallest cycle considered; `k + 1` unless overridden.
    pub min_cycle_len: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            budget: 50_000_000,
            min_cycle_len: None,
        }
    }
}

/// Three-valued search answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(TightWalk),
    ExhaustiveNegative,
    /// Budget ran out; `best` is the best witness seen (for longest goals).
    BudgetExhausted { best: Option<TightWalk> },
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&TightWalk> {
        match self {
            SearchOutcome::Found(w) => Some(w),
            SearchOutcome::BudgetExhausted { best } => best.as_ref(),
            SearchOutcome::ExhaustiveNegative => None,
        }
    }
}

struct Budget {
    left: u64,
}

impl Budget {
    fn spend(&mut self) -> bool {
        if self.left == 0 {
            return false;
        }
        self.left -= 1;
        true
    }
}

/// Backtracking search. Cycles are enumerated starting from their smallest
/// vertex; branching is in increasing vertex order so the first witness
/// found is the lexicographically smallest such sequence.
pub fn search_tight<H: EdgeOracle + ?Sized>(host: &H, goal: SearchGoal, config: SearchConfig) -> SearchOutcome {
    let k = host.uniformity();
    let n = host.vertex_count();
    let min_cycle = config.min_cycle_len.unwrap_or(k + 1).max(k);
    let mut budget = Budget { left: config.budget };
    match goal {
        SearchGoal::Cycle(len) => {
            if len < min_cycle || len > n {
                return SearchOutcome::ExhaustiveNegative;
            }
            match find_cycle(host, len, &mut budget) {
                Some(Some(w)) => SearchOutcome::Found(w),
                Some(None) => SearchOutcome::ExhaustiveNegative,
                None => SearchOutcome::BudgetExhausted { best: None },
            }
        }
        SearchGoal::LongestCycle => {
            for len in (min_cycle..=n).rev() {
                match find_cycle(host, len, &mut budget) {
                    Some(Some(w)) => return SearchOutcome::Found(w),
                    Some(None) => continue,
                    None => return SearchOutcome::BudgetExhausted { best: None },
                }
            }
            SearchOutcome::ExhaustiveNegative
        }
        SearchGoal::LongestPath => longest_path(host, &mut budget),
    }
}

/// `Some(Some(w))` found, `Some(None)` exhausted, `None` out of budget.
fn find_cycle<H: EdgeOracle + ?Sized>(host: &H, len: usize, budget: &mut Budget) -> Option<Option<TightWalk>> {
    let n = host.vertex_count();
    let k = host.uniformity();
    let mut seq = Vec::with_capacity(len);
    let mut used = vec![false; n];
    for start in 0..n {
        if n - start < len {
            break;
        }
        seq.clear();
        seq.push(start);
        used[start] = true;
        let r = cycle_dfs(host, k, len, &mut seq, &mut used, budget);
        used[start] = false;
        match r {
            Some(true) => {
                return Some(Some(TightWalk {
                    k,
                    vertices: seq,
                    cyclic: true,
                }))
            }
            Some(false) => {}
            None => return None,
        }
    }
    Some(None)
}

fn window_ok<H: EdgeOracle + ?Sized>(host: &H, k: usize, seq: &[usize]) -> bool {
    seq.len() < k || host.has_edge(&seq[seq.len() - k..])
}

fn closes<H: EdgeOracle + ?Sized>(host: &H, k: usize, seq: &[usize]) -> bool {
    let len = seq.len();
    let mut window = Vec::with_capacity(k);
    (len + 1 - k..len).all(|start| {
        window.clear();
        window.extend((0..k).map(|i| seq[(start + i) % len]));
        host.has_edge(&window)
    })
}

fn cycle_dfs<H: EdgeOracle + ?Sized>(
    host: &H,
    k: usize,
    len: usize,
    seq: &mut Vec<usize>,
    used: &mut [bool],
    budget: &mut Budget,
) -> Option<bool> {
    if !budget.spend() {
        return None;
    }
    if seq.len() == len {
        return Some(closes(host, k, seq));
    }
    let start = seq[0];
    for v in start + 1..used.len() {
        if used[v] {
            continue;
        }
        seq.push(v);
        if window_ok(host, k, seq) {
            used[v] = true;
            let r = cycle_dfs(host, k, len, seq, used, budget);
            used[v] = false;
            match r {
                Some(true) => return Some(true),
                Some(false) => {}
                None => return None,
            }
        }
        seq.pop();
    }
    Some(false)
}

fn longest_path<H: EdgeOracle + ?Sized>(host: &H, budget: &mut Budget) -> SearchOutcome {
    let n = host.vertex_count();
    let k = host.uniformity();
    let mut best: Vec<usize> = Vec::new();
    let mut used = vec![false; n];
    let mut seq = Vec::with_capacity(n);
    // Every path with at least one edge starts with an ordering of an edge.
    for first in (0..n).combinations(k) {
        if !host.has_edge(&first) {
            continue;
        }
        for order in first.iter().copied().permutations(k) {
            seq.clear();
            seq.extend_from_slice(&order);
            for &v in &order {
                used[v] = true;
            }
            let r = path_dfs(host, k, &mut seq, &mut used, &mut best, budget);
            for &v in &order {
                used[v] = false;
            }
            match r {
                PathStep::Continue => {}
                PathStep::Complete => return SearchOutcome::Found(make_path(k, best)),
                PathStep::OutOfBudget => {
                    return SearchOutcome::BudgetExhausted {
                        best: (!best.is_empty()).then(|| make_path(k, best)),
                    }
                }
            }
        }
    }
    if best.is_empty() {
        SearchOutcome::ExhaustiveNegative
    } else {
        SearchOutcome::Found(make_path(k, best))
    }
}

fn make_path(k: usize, vertices: Vec<usize>) -> TightWalk {
    TightWalk {
        k,
        vertices,
        cyclic: false,
    }
}

enum PathStep {
    Continue,
    /// A Hamilton path was found; nothing longer exists.
    Complete,
    OutOfBudget,
}

fn path_dfs<H: EdgeOracle + ?Sized>(
    host: &H,
    k: usize,
    seq: &mut Vec<usize>,
    used: &mut [bool],
    best: &mut Vec<usize>,
    budget: &mut Budget,
) -> PathStep {
    if !budget.spend() {
        return PathStep::OutOfBudget;
    }
    if seq.len() > best.len() {
        best.clear();
        best.extend_from_slice(seq);
        if best.len() == used.len() {
            return PathStep::Complete;
        }
    }
    for v in 0..used.len() {
        if used[v] {
            continue;
        }
        seq.push(v);
        if window_ok(host, k, seq) {
            used[v] = true;
            let r = path_dfs(host, k, seq, used, best, budget);
            used[v] = false;
            if !matches!(r, PathStep::Continue) {
                seq.pop();
                return r;
            }
        }
        seq.pop();
    }
    PathStep::Continue
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c6() -> KGraph {
        KGraph::new(
            3,
            6,
            vec![vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4], vec![3, 4, 5], vec![4, 5, 0], vec![5, 0, 1]],
        )
        .unwrap()
    }

    fn walk(g: &KGraph, seq: &[usize]) -> TightWalk {
        verify_tight(seq, g, false, false).unwrap()
    }

    #[test]
    fn verify_examples() {
        let g = c6();
        let cyc = verify_tight(&[0, 1, 2, 3, 4, 5], &g, true, true).unwrap();
        assert_eq!(cyc.length(), 6);
        assert_eq!(
            verify_tight(&[0, 1, 2, 4], &g, false, false),
            Err(TightViolation::NotAnEdge {
                window: 1,
                vertices: vec![1, 2, 4]
            })
        );
        let degenerate = verify_tight(&[0, 1], &g, false, true).unwrap();
        assert_eq!(degenerate.length(), 0);
        assert!(matches!(
            verify_tight(&[0, 9, 1], &g, false, false),
            Err(TightViolation::OutOfRange { position: 1, vertex: 9 })
        ));
        assert!(matches!(
            verify_tight(&[0, 1, 2, 0, 1], &g, false, true),
            Err(TightViolation::RepeatedVertex { position: 3, vertex: 0 })
        ));
        assert!(matches!(verify_tight(&[0], &g, false, false), Err(TightViolation::TooShort { .. })));
        assert!(matches!(verify_tight(&[0, 1, 2], &g, true, true), Err(TightViolation::TooShort { .. })));
    }

    #[test]
    fn component_examples() {
        assert_eq!(tight_components(&c6()).component_count(), 1);
        let two_k4 = KGraph::new(
            3,
            8,
            (0..4usize)
                .combinations(3)
                .chain((4..8usize).combinations(3)),
        )
        .unwrap();
        let labels = tight_components(&two_k4);
        assert_eq!(labels.component_count(), 2);
        assert_eq!(labels.sizes(), vec![4, 4]);
        let disjoint = KGraph::new(3, 6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert_eq!(tight_components(&disjoint).component_count(), 2);
    }

    #[test]
    fn shortest_walks() {
        let g = c6();
        let w = min_tight_walk(&g, &[0, 1, 2], &[3, 4, 5]).unwrap();
        assert_eq!(w.vertices(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(w.length(), 4);
        let same = min_tight_walk(&g, &[2, 1, 0], &[0, 1, 2]).unwrap();
        assert_eq!(same.length(), 1);
        let disjoint = KGraph::new(3, 6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert_eq!(min_tight_walk(&disjoint, &[0, 1, 2], &[3, 4, 5]), Err(Error::NotTightlyConnected));
        assert!(min_tight_walk(&g, &[0, 1, 3], &[3, 4, 5]).is_err());
    }

    #[test]
    fn shortest_walk_with_long_detour() {
        // 012 -> 123 -> 234 -> 345 -> 456 on a tight path; 012 to 456 needs length 5.
        let path = KGraph::new(3, 7, (0..5usize).map(|i| vec![i, i + 1, i + 2])).unwrap();
        let w = min_tight_walk(&path, &[0, 1, 2], &[4, 5, 6]).unwrap();
        assert_eq!(w.vertices(), &[0, 1, 2, 3, 4, 5, 6]);
        verify_tight(w.vertices(), &path, false, false).unwrap();
    }

    #[test]
    fn concatenation() {
        let g = c6();
        let w = walk(&g, &[0, 1, 2, 3]);
        let w2 = walk(&g, &[2, 3, 4, 5]);
        let joined = concatenate(&w, &w2).unwrap();
        assert_eq!(joined.vertices(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(joined.length(), 4);
        let unit = walk(&g, &[2, 3]);
        assert_eq!(concatenate(&w, &unit).unwrap(), w);
        let a = walk(&g, &[0, 1, 2]);
        let b = walk(&g, &[3, 4, 5]);
        assert!(matches!(concatenate(&a, &b), Err(Error::TupleMismatch { .. })));
    }

    #[test]
    fn reversal_construction() {
        let k4 = KGraph::complete(4, 3).unwrap();
        let w = walk(&k4, &[0, 1, 2, 3]);
        let ws = reverse_to_ws(&w);
        assert_eq!(ws.vertices(), &[2, 3, 1, 2, 0, 1]);
        let checked = verify_tight(ws.vertices(), &k4, false, false).unwrap();
        assert_eq!(checked.length(), 4);
        assert_eq!(ws.initial_tuple(), w.terminal_tuple());
        assert_eq!(ws.terminal_tuple(), w.initial_tuple());
        let zero = walk(&k4, &[1, 3]);
        assert_eq!(reverse_to_ws(&zero).length(), 0);
    }

    #[test]
    fn cycle_lengths() {
        assert_eq!(plan_cycle_length(3, &[2], &[1, 2], None).unwrap(), 27);
        assert_eq!(plan_cycle_length(3, &[0], &[], None).unwrap(), 9);
        assert!(matches!(
            plan_cycle_length(3, &[0], &[4], None),
            Err(Error::WalkTotalNotDivisible { total: 4, k: 3 })
        ));
        let bounds = FillBounds {
            alpha: crate::rational::ratio(1, 10),
            weights: vec![crate::rational::ratio(1, 2)],
            cluster_size: 10,
        };
        // (1 - 3/10) * 1/2 * 10 = 7/2
        assert!(plan_cycle_length(3, &[3], &[], Some(&bounds)).is_ok());
        assert!(matches!(
            plan_cycle_length(3, &[4], &[], Some(&bounds)),
            Err(Error::FillBound { index: 1, value: 4, .. })
        ));
    }

    #[test]
    fn search_examples() {
        let g = c6();
        let cfg = SearchConfig::default();
        assert_eq!(
            search_tight(&g, SearchGoal::Cycle(6), cfg).witness().unwrap().vertices(),
            &[0, 1, 2, 3, 4, 5]
        );
        assert_eq!(search_tight(&g, SearchGoal::Cycle(5), cfg), SearchOutcome::ExhaustiveNegative);
        assert_eq!(search_tight(&g, SearchGoal::Cycle(3), cfg), SearchOutcome::ExhaustiveNegative);
        let star = KGraph::new(3, 6, (0..6usize).combinations(3).filter(|e| e.contains(&0))).unwrap();
        let p = search_tight(&star, SearchGoal::LongestPath, cfg);
        assert_eq!(p.witness().unwrap().vertices().len(), 5);
        let tiny = SearchConfig {
            budget: 3,
            min_cycle_len: None,
        };
        assert!(matches!(
            search_tight(&KGraph::complete(7, 3).unwrap(), SearchGoal::Cycle(7), tiny),
            SearchOutcome::BudgetExhausted { .. }
        ));
        assert_eq!(
            search_tight(&KGraph::empty(3, 5).unwrap(), SearchGoal::LongestPath, cfg),
            SearchOutcome::ExhaustiveNegative
        );
    }
}
