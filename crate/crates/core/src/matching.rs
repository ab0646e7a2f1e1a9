//! Matchings and fractional matchings: exact matching number, exact LP
//! optimum with a dual certificate, the partite perfect-fractional-matching
//! hypothesis, and the greedy construction of tightly connected matchings
//! in partite hypergraphs.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hypergraph::{all_subsets, Edge, EdgeOracle, GroundPartition, Hypergraph, KGraph};
use crate::lp::LinearProgram;
use crate::rational::{int, one, zero, Rational};
use crate::tight::{tight_components, verify_tight, TightWalk};

/// Pairwise vertex-disjoint edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Matching {
    pub edges: Vec<Edge>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Checks disjointness and that every member is an edge of `host`.
    pub fn validate<H: EdgeOracle + ?Sized>(&self, host: &H) -> Result<()> {
        let mut seen = vec![false; host.vertex_count()];
        for e in &self.edges {
            if !host.has_edge(e) {
                return Err(Error::Consistency(format!("{e:?} is not a host edge")));
            }
            for &v in e {
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::Consistency(format!("vertex {v} is covered twice")));
                }
            }
        }
        Ok(())
    }
}

/// Exact matching number with a maximum matching, by branch and bound on
/// the smallest undecided vertex.
pub fn matching_number(g: &KGraph) -> (usize, Matching) {
    let n = g.n();
    let k = g.k();
    let mut incident: Vec<Vec<&Edge>> = vec![Vec::new(); n];
    for e in g.edges() {
        incident[e[0]].push(e);
    }
    let mut state = MatchSearch {
        k,
        incident,
        blocked: vec![false; n],
        current: Vec::new(),
        best: Vec::new(),
        live: g.covered_vertices().len(),
    };
    state.search(0);
    let best: Vec<Edge> = state.best.into_iter().cloned().collect();
    (best.len(), Matching { edges: best })
}

struct MatchSearch<'a> {
    k: usize,
    // edges indexed by their smallest vertex
    incident: Vec<Vec<&'a Edge>>,
    blocked: Vec<bool>,
    current: Vec<&'a Edge>,
    best: Vec<&'a Edge>,
    // unblocked vertices that lie in some edge, an upper-bound helper
    live: usize,
}

impl<'a> MatchSearch<'a> {
    fn search(&mut self, from: usize) {
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if self.current.len() + self.live / self.k <= self.best.len() {
            return;
        }
        let Some(v) = (from..self.blocked.len()).find(|&v| !self.blocked[v] && !self.incident[v].is_empty()) else {
            return;
        };
        let options: Vec<&'a Edge> = self.incident[v]
            .iter()
            .copied()
            .filter(|e| e.iter().all(|&u| !self.blocked[u]))
            .collect();
        for e in options {
            for &u in e {
                self.blocked[u] = true;
            }
            self.current.push(e);
            let before = self.live;
            self.live = self.recount();
            self.search(v + 1);
            self.live = before;
            self.current.pop();
            for &u in e {
                self.blocked[u] = false;
            }
        }
        // v stays unmatched; edges whose smallest vertex is v are dropped
        self.blocked[v] = true;
        let before = self.live;
        self.live = self.recount();
        self.search(v + 1);
        self.live = before;
        self.blocked[v] = false;
    }

    fn recount(&self) -> usize {
        let mut live = vec![false; self.blocked.len()];
        for list in &self.incident {
            for e in list {
                if e.iter().all(|&u| !self.blocked[u]) {
                    for &u in e.iter() {
                        live[u] = true;
                    }
                }
            }
        }
        live.into_iter().filter(|&b| b).count()
    }
}

/// Edge weights in `[0, 1]` with every vertex load at most one. Only
/// non-zero weights are stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FractionalMatching {
    weights: BTreeMap<Edge, Rational>,
}

impl FractionalMatching {
    pub fn from_weights(weights: BTreeMap<Edge, Rational>) -> Self {
        Self {
            weights: weights.into_iter().filter(|(_, w)| !w.is_zero()).collect(),
        }
    }

    pub fn weights(&self) -> &BTreeMap<Edge, Rational> {
        &self.weights
    }

    pub fn weight(&self) -> Rational {
        self.weights.values().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = &Edge> {
        self.weights.keys()
    }

    pub fn loads(&self, n: usize) -> Vec<Rational> {
        let mut loads = vec![zero(); n];
        for (e, w) in &self.weights {
            for &v in e {
                loads[v] += w;
            }
        }
        loads
    }

    pub fn validate(&self, g: &KGraph) -> Result<()> {
        for (e, w) in &self.weights {
            if !g.contains(e) {
                return Err(Error::Consistency(format!("{e:?} carries weight but is not an edge")));
            }
            if w.is_negative() || *w > one() {
                return Err(Error::Consistency(format!("weight {w} on {e:?} outside [0,1]")));
            }
        }
        if let Some((v, l)) = self.loads(g.n()).iter().enumerate().find(|(_, l)| **l > one()) {
            return Err(Error::Consistency(format!("vertex {v} has load {l}")));
        }
        Ok(())
    }

    /// Perfect when the weight equals `n / k`.
    pub fn is_perfect(&self, n: usize, k: usize) -> bool {
        self.weight() * int(k as u64) == int(n as u64)
    }
}

impl Serialize for FractionalMatching {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.weights.len()))?;
        for (e, w) in &self.weights {
            let key = e.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            map.serialize_entry(&key, &w.to_string())?;
        }
        map.end()
    }
}

/// A fractional vertex cover: `y >= 0` with `sum_{v in e} y_v >= 1` on every
/// edge. Equal totals certify optimality of both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCover {
    pub y: Vec<Rational>,
}

impl VertexCover {
    pub fn total(&self) -> Rational {
        self.y.iter().sum()
    }
}

/// Checks primal feasibility, dual feasibility, and equal objective values.
pub fn certify_optimal(g: &KGraph, fm: &FractionalMatching, cover: &VertexCover) -> Result<()> {
    fm.validate(g)?;
    if cover.y.len() != g.n() || cover.y.iter().any(Signed::is_negative) {
        return Err(Error::Consistency("cover has a negative or missing entry".into()));
    }
    for e in g.edges() {
        let s: Rational = e.iter().map(|&v| &cover.y[v]).sum();
        if s < one() {
            return Err(Error::Consistency(format!("edge {e:?} is covered only {s}")));
        }
    }
    if cover.total() != fm.weight() {
        return Err(Error::Consistency(format!(
            "cover total {} differs from matching weight {}",
            cover.total(),
            fm.weight()
        )));
    }
    Ok(())
}

/// Optimal fractional matching together with its dual certificate.
#[derive(Debug, Clone)]
pub struct FractionalSolution {
    pub matching: FractionalMatching,
    pub cover: VertexCover,
}

/// Maximum fractional matching by exact simplex, restricted to one tight
/// component when `restrict_to` is given. The dual certificate is checked
/// before returning.
pub fn max_fractional_matching(g: &KGraph, restrict_to: Option<usize>) -> Result<FractionalSolution> {
    let host = match restrict_to {
        None => g.clone(),
        Some(c) => {
            let labels = tight_components(g);
            if c >= labels.component_count() {
                return Err(Error::InvalidQuery(format!(
                    "component {c} does not exist ({} components)",
                    labels.component_count()
                )));
            }
            g.with_edges(labels.labels().iter().filter(|(_, &l)| l == c).map(|(e, _)| e))
        }
    };
    let edges: Vec<&Edge> = host.edges().collect();
    let vertices: Vec<usize> = host.covered_vertices().into_iter().collect();
    let row_of: BTreeMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut rows = vec![vec![zero(); edges.len()]; vertices.len()];
    for (j, e) in edges.iter().enumerate() {
        for v in e.iter() {
            rows[row_of[v]][j] = one();
        }
    }
    let lp = LinearProgram {
        objective: vec![one(); edges.len()],
        rows,
        rhs: vec![one(); vertices.len()],
    };
    let sol = lp.solve()?;
    let matching = FractionalMatching::from_weights(edges.iter().map(|e| (*e).clone()).zip(sol.primal).collect());
    let mut y = vec![zero(); g.n()];
    for (i, &v) in vertices.iter().enumerate() {
        y[v] = sol.dual[i].clone();
    }
    let cover = VertexCover { y };
    certify_optimal(&host, &matching, &cover)?;
    Ok(FractionalSolution { matching, cover })
}

fn check_partite_shape(h: &Hypergraph, parts: &GroundPartition) -> Result<(usize, usize)> {
    let k = h.max_level();
    if parts.vertex_count() != h.n() || parts.part_count() != k || !parts.is_equal_size() || k == 0 {
        return Err(Error::Parameter(format!(
            "expected {k} equal parts covering {} vertices",
            h.n()
        )));
    }
    let t = parts.part_sizes()[0];
    if let Some(e) = h.levels().iter().flatten().find(|e| !parts.is_partite(e)) {
        return Err(Error::Parameter(format!("edge {e:?} is not partite")));
    }
    Ok((k, t))
}

fn extensions_into(h: &Hypergraph, e: &[usize], part: &[usize]) -> usize {
    let mut buf = Vec::with_capacity(e.len() + 1);
    part.iter()
        .filter(|&&v| {
            buf.clear();
            buf.extend_from_slice(e);
            buf.push(v);
            buf.sort_unstable();
            h.contains(&buf)
        })
        .count()
}

/// First failure of the partite extension condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionViolation {
    pub level: usize,
    pub part: usize,
    pub edge: Edge,
    pub count: usize,
    #[serde(with = "crate::rational::serde_rational")]
    pub required: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FarkasReport {
    pub holds: bool,
    pub violation: Option<ExtensionViolation>,
    /// LP optimum over the top level, when the conclusion was checked.
    pub lp_weight: Option<String>,
    /// Whether the top level has a perfect fractional matching (weight `t`).
    pub conclusion_holds: Option<bool>,
}

/// Checks, for every level `0 <= i <= k-1` and part `X_j`, that each level-`i`
/// edge missing `X_j` extends into `X_j` in at least `t - i t / k` ways. When
/// that holds and `verify_conclusion` is set, solves the LP on the top level
/// and compares its optimum with `t`.
pub fn check_farkas_hypothesis(h: &Hypergraph, parts: &GroundPartition, verify_conclusion: bool) -> Result<FarkasReport> {
    let (k, t) = check_partite_shape(h, parts)?;
    if !h.contains(&[]) {
        return Err(Error::Precondition("the empty set is not an edge".into()));
    }
    let members = parts.parts();
    for i in 0..k {
        let required = int(t as u64) - Rational::new(((i * t) as i64).into(), (k as i64).into());
        for (j, part) in members.iter().enumerate() {
            for e in h.level(i) {
                if e.iter().any(|&v| parts.part_of(v) == j) {
                    continue;
                }
                let count = extensions_into(h, e, part);
                if int(count as u64) < required {
                    return Ok(FarkasReport {
                        holds: false,
                        violation: Some(ExtensionViolation {
                            level: i,
                            part: j,
                            edge: e.clone(),
                            count,
                            required,
                        }),
                        lp_weight: None,
                        conclusion_holds: None,
                    });
                }
            }
        }
    }
    let (lp_weight, conclusion_holds) = if verify_conclusion {
        let top = h.level_graph(k)?;
        let sol = max_fractional_matching(&top, None)?;
        let w = sol.matching.weight();
        let perfect = w == int(t as u64);
        (Some(w.to_string()), Some(perfect))
    } else {
        (None, None)
    };
    Ok(FarkasReport {
        holds: true,
        violation: None,
        lp_weight,
        conclusion_holds,
    })
}

/// True iff every subset of `e` (including `∅` and `e`) is an edge of `r`.
pub fn is_excellent(e: &[usize], r: &Hypergraph) -> bool {
    let e = crate::hypergraph::canonical(e);
    let excellent = all_subsets(&e).all(|s| r.contains(&s));
    excellent
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectedMatchingMode {
    Matching,
    PerfectFractional,
}

#[derive(Debug, Clone)]
pub enum ConnectedMatching {
    /// `floor(alpha t)` disjoint edges, each in the same tight component.
    /// `path` is the tight path through the matching edges in part order;
    /// every `k`-th window is a matching edge.
    Matching {
        matching: Matching,
        path: TightWalk,
        component: usize,
    },
    /// Perfect fractional matching of the top level, which is a single tight
    /// component.
    Fractional {
        solution: FractionalSolution,
        component_count: usize,
    },
}

fn check_connected_matching_conditions(
    r: &Hypergraph,
    parts: &GroundPartition,
    alpha: &Rational,
    beta: &Rational,
) -> Result<(usize, usize)> {
    let (k, t) = check_partite_shape(r, parts)?;
    if alpha.is_negative() || *alpha >= one() || !beta.is_positive() {
        return Err(Error::Parameter(format!("need 0 <= alpha < 1 and beta > 0, got {alpha}, {beta}")));
    }
    if !r.contains(&[]) || (0..r.n()).any(|v| !r.contains(&[v])) {
        return Err(Error::HypothesisViolated("(i): the empty set and every singleton must be edges".into()));
    }
    let tq = int(t as u64);
    let members = parts.parts();
    let need_ii = (one() - beta) * &tq;
    for i in 1..k.saturating_sub(1) {
        for (j, part) in members.iter().enumerate() {
            for e in r.level(i) {
                if e.iter().any(|&v| parts.part_of(v) == j) {
                    continue;
                }
                let count = extensions_into(r, e, part);
                if int(count as u64) < need_ii {
                    return Err(Error::HypothesisViolated(format!(
                        "(ii): {e:?} extends into part {j} only {count} times, needs {need_ii}"
                    )));
                }
            }
        }
    }
    let need_iii = (alpha + int((1u64 << k) + 1) * beta) * &tq;
    for e in r.level(k - 1) {
        let count = r.up_degree(e);
        if int(count as u64) < need_iii {
            return Err(Error::HypothesisViolated(format!(
                "(iii): {e:?} lies in {count} top edges, needs {need_iii}"
            )));
        }
    }
    Ok((k, t))
}

/// Builds a tightly connected matching (or, for `alpha >= 1/2`, a perfect
/// fractional matching of a tightly connected top level) in a `k`-partite
/// hypergraph satisfying the degree conditions (i)-(iii).
///
/// The matching greedy starts from the lexicographically first excellent
/// edge and repeatedly swaps in, part by part, the smallest uncovered vertex
/// keeping the current edge excellent.
pub fn partite_connected_matching(
    r: &Hypergraph,
    parts: &GroundPartition,
    alpha: &Rational,
    beta: &Rational,
    mode: ConnectedMatchingMode,
) -> Result<ConnectedMatching> {
    let (k, t) = check_connected_matching_conditions(r, parts, alpha, beta)?;
    let top = r.level_graph(k)?;
    let labels = tight_components(&top);
    match mode {
        ConnectedMatchingMode::PerfectFractional => {
            if *alpha < crate::rational::ratio(1, 2) {
                return Err(Error::Parameter("perfect fractional mode needs alpha >= 1/2".into()));
            }
            let solution = max_fractional_matching(&top, None)?;
            if solution.matching.weight() != int(t as u64) {
                return Err(Error::Consistency(format!(
                    "fractional optimum {} is not perfect (t = {t})",
                    solution.matching.weight()
                )));
            }
            if labels.component_count() != 1 {
                return Err(Error::Consistency(format!(
                    "top level has {} tight components",
                    labels.component_count()
                )));
            }
            Ok(ConnectedMatching::Fractional {
                solution,
                component_count: 1,
            })
        }
        ConnectedMatchingMode::Matching => {
            let target = (alpha * int(t as u64)).floor().to_integer();
            let target: usize = target.try_into().unwrap_or(0);
            let by_part = |e: &[usize]| {
                let mut e = e.to_vec();
                e.sort_by_key(|&v| parts.part_of(v));
                e
            };
            let seed = top
                .edges()
                .find(|e| is_excellent(e, r))
                .ok_or_else(|| Error::Consistency("greedy stuck: no excellent edge".into()))?;
            let members = parts.parts();
            let mut covered = vec![false; r.n()];
            let mut current = by_part(seed);
            let mut path = current.clone();
            let mut edges = Vec::new();
            if target > 0 {
                edges.push(current.clone());
                current.iter().for_each(|&v| covered[v] = true);
            }
            while edges.len() < target {
                let mut next = current.clone();
                for i in 0..k {
                    let choice = members[i].iter().copied().find(|&v| {
                        if covered[v] {
                            return false;
                        }
                        next[i] = v;
                        is_excellent(&next, r)
                    });
                    match choice {
                        Some(v) => next[i] = v,
                        None => {
                            return Err(Error::Consistency(format!(
                                "greedy stuck extending {current:?} in part {i} after {} edges",
                                edges.len()
                            )))
                        }
                    }
                }
                next.iter().for_each(|&v| covered[v] = true);
                path.extend_from_slice(&next);
                edges.push(next.clone());
                current = next;
            }
            let path = verify_tight(&path, &top, false, true)
                .map_err(|v| Error::Consistency(format!("greedy path is not tight: {v:?}")))?;
            let matching = Matching {
                edges: edges.into_iter().map(|e| crate::hypergraph::canonical(&e)).collect(),
            };
            matching.validate(&top)?;
            let component = labels.label(seed).expect("seed is a top edge");
            if matching.edges.iter().any(|e| labels.label(e) != Some(component)) {
                return Err(Error::Consistency("matching edges span several tight components".into()));
            }
            Ok(ConnectedMatching::Matching {
                matching,
                path,
                component,
            })
        }
    }
}
