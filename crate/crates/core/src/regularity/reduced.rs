//! Reduced graphs of a k-graph over a slice, and the counting quantities
//! compared between a graph and its reduced graph.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{all_subsets, is_subset, Edge, KGraph};
use crate::rational::{binomial, decimal, falling, int, one, ratio_or_zero, to_f64, zero, Rational};
use crate::regularity::density::{regularity_falsify, FalsifyMode, Verdict};
use crate::regularity::family::MaterializedSlice;

/// Any k-uniform host whose k-sets carry weights in `[0, 1]`.
pub trait WeightedHost {
    fn uniformity(&self) -> usize;
    fn vertex_count(&self) -> usize;
    /// Weight of a sorted k-set; zero for non-edges.
    fn weight(&self, sorted: &[usize]) -> Rational;
}

impl WeightedHost for KGraph {
    fn uniformity(&self) -> usize {
        self.k()
    }

    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn weight(&self, sorted: &[usize]) -> Rational {
        if self.contains(sorted) {
            one()
        } else {
            zero()
        }
    }
}

/// The complete weighted k-graph on the clusters, weighting each k-set of
/// clusters by the relative density of `G` on its polyad.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedReducedGraph {
    pub t: usize,
    pub k: usize,
    pub weights: BTreeMap<Edge, Rational>,
    /// `|K_k(polyad)|` for each k-set of clusters.
    pub supported: BTreeMap<Edge, usize>,
}

impl WeightedHost for WeightedReducedGraph {
    fn uniformity(&self) -> usize {
        self.k
    }

    fn vertex_count(&self) -> usize {
        self.t
    }

    fn weight(&self, sorted: &[usize]) -> Rational {
        self.weights.get(sorted).cloned().unwrap_or_else(zero)
    }
}

impl Serialize for WeightedReducedGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let weights: BTreeMap<String, String> = self
            .weights
            .iter()
            .map(|(e, w)| (e.iter().join(","), w.to_string()))
            .collect();
        let mut st = s.serialize_struct("WeightedReducedGraph", 3)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("t", &self.t)?;
        st.serialize_field("weights", &weights)?;
        st.end()
    }
}

/// Transversal k-sets over the clusters in `x` all of whose (k-1)-subsets
/// lie in the slice.
pub fn polyad_cliques(slice: &MaterializedSlice, x: &[usize]) -> Vec<Edge> {
    let top = slice.k - 1;
    let parts = slice.ground.parts();
    x.iter()
        .map(|&c| parts[c].iter().copied())
        .multi_cartesian_product()
        .map(|mut e| {
            e.sort_unstable();
            e
        })
        .filter(|e| {
            e.iter()
                .combinations(top)
                .all(|f| slice.complex.contains(&f.into_iter().copied().collect::<Edge>()))
        })
        .collect()
}

/// The polyad over `x` as a (k-1)-graph on the full vertex set.
pub fn polyad(slice: &MaterializedSlice, x: &[usize]) -> Result<KGraph> {
    let top = slice.k - 1;
    let edges = x.iter().copied().combinations(top).flat_map(|sub| slice.cells_on(&sub));
    KGraph::new(top, slice.ground.vertex_count(), edges)
}

pub fn weighted_reduced(g: &KGraph, slice: &MaterializedSlice) -> Result<WeightedReducedGraph> {
    check_cover(g, slice)?;
    let t = slice.cluster_count();
    let mut weights = BTreeMap::new();
    let mut supported = BTreeMap::new();
    for x in (0..t).combinations(g.k()) {
        let cliques = polyad_cliques(slice, &x);
        let hits = cliques.iter().filter(|e| g.contains(e)).count();
        weights.insert(x.clone(), ratio_or_zero(hits as u64, cliques.len() as u64));
        supported.insert(x, cliques.len());
    }
    Ok(WeightedReducedGraph {
        t,
        k: g.k(),
        weights,
        supported,
    })
}

fn check_cover(g: &KGraph, slice: &MaterializedSlice) -> Result<()> {
    if g.n() != slice.ground.vertex_count() || g.k() != slice.k {
        return Err(Error::InvalidQuery(format!(
            "graph has n = {}, k = {}; slice covers {} vertices with k = {}",
            g.n(),
            g.k(),
            slice.ground.vertex_count(),
            slice.k
        )));
    }
    Ok(())
}

/// Threshold, regularity parameters and search policy for `R_d(G)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityParams {
    pub d: Rational,
    pub eps: Rational,
    pub eps_k: Rational,
    pub r: usize,
    /// Polyads with at most this many edges are checked exhaustively.
    pub exhaustive_cap: usize,
    /// Tuples drawn per polyad otherwise.
    pub sampled_trials: u64,
    pub seed: u64,
}

impl RegularityParams {
    pub fn new(d: Rational, eps: Rational, eps_k: Rational, r: usize) -> Result<Self> {
        let unit = |q: &Rational| q.is_positive() && *q <= one();
        if !unit(&eps) || !unit(&eps_k) || r == 0 || d.is_negative() {
            return Err(Error::Parameter(format!(
                "need 0 < eps, eps_k <= 1, r >= 1, d >= 0; got eps = {eps}, eps_k = {eps_k}, r = {r}, d = {d}"
            )));
        }
        Ok(Self {
            d,
            eps,
            eps_k,
            r,
            exhaustive_cap: crate::regularity::density::DEFAULT_EXHAUSTIVE_CAP,
            sampled_trials: 200,
            seed: 0,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolyadCheck {
    pub clusters: Edge,
    /// `"exhaustive"` or `"sampled(N)"`.
    pub mode: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct DReduced {
    pub graph: KGraph,
    pub weighted: WeightedReducedGraph,
    /// k-sets of clusters with a falsifying witness.
    pub irregular: BTreeSet<Edge>,
    pub checks: Vec<PolyadCheck>,
}

impl DReduced {
    pub fn irregular_fraction(&self) -> Rational {
        ratio_or_zero(self.irregular.len() as u64, binomial(self.weighted.t, self.weighted.k))
    }
}

/// Judges each polyad at target density `reld(X)` with `(eps_k, r)`, then
/// keeps the k-sets that are not falsified and have `reld(X) >= d`. A polyad
/// that is not falsified within the search budget counts as regular.
pub fn d_reduced(g: &KGraph, slice: &MaterializedSlice, params: &RegularityParams) -> Result<DReduced> {
    let weighted = weighted_reduced(g, slice)?;
    let mut irregular = BTreeSet::new();
    let mut checks = Vec::new();
    let mut kept = Vec::new();
    for (idx, (x, w)) in weighted.weights.iter().enumerate() {
        let base = polyad(slice, x)?;
        let exhaustive = FalsifyMode::Exhaustive {
            cap: params.exhaustive_cap,
        };
        let sampled = FalsifyMode::Sampled {
            trials: params.sampled_trials,
            seed: params.seed.wrapping_add(idx as u64),
        };
        let (mode, verdict) = match regularity_falsify(g, &base, Some(&slice.ground), w, &params.eps_k, params.r, &exhaustive) {
            Ok(v) => ("exhaustive".to_string(), v),
            Err(Error::Capacity { .. }) => (
                format!("sampled({})", params.sampled_trials),
                regularity_falsify(g, &base, Some(&slice.ground), w, &params.eps_k, params.r, &sampled)?,
            ),
            Err(e) => return Err(e),
        };
        if verdict.is_falsified() {
            irregular.insert(x.clone());
        } else if *w >= params.d && !w.is_zero() {
            kept.push(x.clone());
        }
        checks.push(PolyadCheck {
            clusters: x.clone(),
            mode,
            verdict,
        });
    }
    Ok(DReduced {
        graph: KGraph::new(g.k(), weighted.t, kept)?,
        weighted,
        irregular,
        checks,
    })
}

/// Sum over injections `V(H) -> domain` fixing `fixed[j] = (x_j, v_j)` of
/// the product of host weights on the images of `H`'s edges. `accept` may
/// veto partial maps; it sees the images of `H` vertices `0..=u` in
/// assignment order.
fn sum_injections<W: WeightedHost + ?Sized>(
    host: &W,
    h: &KGraph,
    domain: &[usize],
    fixed: &[(usize, usize)],
    accept: &dyn Fn(&[Option<usize>], usize) -> bool,
) -> Rational {
    let hn = h.n();
    let mut order: Vec<usize> = fixed.iter().map(|&(x, _)| x).collect();
    order.extend((0..hn).filter(|u| !fixed.iter().any(|&(x, _)| x == *u)));
    let position: Vec<usize> = {
        let mut p = vec![0; hn];
        for (i, &u) in order.iter().enumerate() {
            p[u] = i;
        }
        p
    };
    // edges completed when the vertex at each position is placed
    let mut completes: Vec<Vec<&Edge>> = vec![Vec::new(); hn];
    for e in h.edges() {
        let last = e.iter().map(|&u| position[u]).max().expect("edges are non-empty");
        completes[last].push(e);
    }
    let mut image: Vec<Option<usize>> = vec![None; hn];
    let mut used = BTreeSet::new();
    let mut total = zero();
    struct Ctx<'a, W: ?Sized> {
        host: &'a W,
        domain: &'a [usize],
        order: &'a [usize],
        completes: &'a [Vec<&'a Edge>],
        fixed: &'a [(usize, usize)],
        accept: &'a dyn Fn(&[Option<usize>], usize) -> bool,
    }
    fn go<W: WeightedHost + ?Sized>(
        ctx: &Ctx<'_, W>,
        pos: usize,
        image: &mut Vec<Option<usize>>,
        used: &mut BTreeSet<usize>,
        acc: Rational,
        total: &mut Rational,
    ) {
        if pos == ctx.order.len() {
            *total += acc;
            return;
        }
        let u = ctx.order[pos];
        let candidates: Vec<usize> = match ctx.fixed.get(pos) {
            Some(&(_, v)) => vec![v],
            None => ctx.domain.to_vec(),
        };
        for v in candidates {
            if used.contains(&v) {
                continue;
            }
            image[u] = Some(v);
            if !(ctx.accept)(image, u) {
                image[u] = None;
                continue;
            }
            let mut w = acc.clone();
            for e in &ctx.completes[pos] {
                let mut mapped: Edge = e.iter().map(|&x| image[x].expect("placed")).collect();
                mapped.sort_unstable();
                w *= ctx.host.weight(&mapped);
                if w.is_zero() {
                    break;
                }
            }
            if !w.is_zero() {
                used.insert(v);
                go(ctx, pos + 1, image, used, w, total);
                used.remove(&v);
            }
            image[u] = None;
        }
    }
    let ctx = Ctx {
        host,
        domain,
        order: &order,
        completes: &completes,
        fixed,
        accept,
    };
    go(&ctx, 0, &mut image, &mut used, one(), &mut total);
    total
}

fn always(_: &[Option<usize>], _: usize) -> bool {
    true
}

/// `d_H` of the host restricted to `domain`: the mean over injections
/// `V(H) -> domain` of the product of weights on the images of `H`'s edges.
/// Zero when `domain` is smaller than `V(H)`.
pub fn h_density_on<W: WeightedHost + ?Sized>(host: &W, h: &KGraph, domain: &[usize]) -> Result<Rational> {
    if h.k() != host.uniformity() {
        return Err(Error::InvalidQuery(format!("H is {}-uniform, host is {}-uniform", h.k(), host.uniformity())));
    }
    let maps = falling(domain.len(), h.n());
    if maps == 0 {
        return Ok(zero());
    }
    Ok(sum_injections(host, h, domain, &[], &always) / int(maps))
}

pub fn h_density<W: WeightedHost + ?Sized>(host: &W, h: &KGraph) -> Result<Rational> {
    let all: Vec<usize> = (0..host.vertex_count()).collect();
    h_density_on(host, h, &all)
}

/// Weight of k-sets `S ∪ T` with `T ⊆ X \ S`, averaged over the
/// `C(|X \ S|, k - |S|)` choices of `T`; zero when there are none.
pub fn rel_degree<W: WeightedHost + ?Sized>(s: &[usize], host: &W, x: &[usize]) -> Result<Rational> {
    let k = host.uniformity();
    if s.is_empty() || s.len() >= k {
        return Err(Error::InvalidQuery(format!("relative degree needs 1 <= |S| <= k-1, got {}", s.len())));
    }
    let rest: Vec<usize> = x.iter().copied().filter(|v| !s.contains(v)).sorted().dedup().collect();
    let need = k - s.len();
    let count = binomial(rest.len(), need);
    if count == 0 {
        return Ok(zero());
    }
    let sum: Rational = rest
        .iter()
        .copied()
        .combinations(need)
        .map(|t| {
            let mut e: Edge = s.iter().copied().chain(t).collect();
            e.sort_unstable();
            host.weight(&e)
        })
        .sum();
    Ok(sum / int(count))
}

/// Mean of [`rel_degree`] over a collection of sets, or `None` when empty.
pub fn rel_degree_mean<W: WeightedHost + ?Sized>(sets: &[Edge], host: &W, x: &[usize]) -> Result<Option<Rational>> {
    if sets.is_empty() {
        return Ok(None);
    }
    let mut sum = zero();
    for s in sets {
        sum += rel_degree(s, host, x)?;
    }
    Ok(Some(sum / int(sets.len() as u64)))
}

/// Root vertices `roots[j]` of `H` pinned to `targets[j]` in `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootQuery {
    pub h: KGraph,
    pub roots: Vec<usize>,
    pub targets: Vec<usize>,
}

fn check_roots(g: &KGraph, q: &RootQuery) -> Result<()> {
    let distinct = |v: &[usize]| v.iter().all_unique();
    if q.roots.len() != q.targets.len()
        || !distinct(&q.roots)
        || !distinct(&q.targets)
        || q.roots.iter().any(|&x| x >= q.h.n())
        || q.targets.iter().any(|&v| v >= g.n())
        || q.h.n() > g.n()
    {
        return Err(Error::InvalidQuery("roots must be distinct and in range, one target each".into()));
    }
    if q.h.k() != g.k() {
        return Err(Error::InvalidQuery("H and G differ in uniformity".into()));
    }
    Ok(())
}

/// Share of injections extending the root map that embed `H` in `G`.
pub fn rooted_density(g: &KGraph, q: &RootQuery) -> Result<Rational> {
    check_roots(g, q)?;
    let l = q.roots.len();
    let fixed: Vec<(usize, usize)> = q.roots.iter().copied().zip(q.targets.iter().copied()).collect();
    let domain: Vec<usize> = (0..g.n()).collect();
    let count = sum_injections(g, &q.h, &domain, &fixed, &always);
    Ok(count / int(falling(g.n() - l, q.h.n() - l)))
}

/// Edges of sizes 2..k-1 of the down-closure of `H` avoiding the roots.
fn skeleton_edges(q: &RootQuery) -> Vec<Edge> {
    let k = q.h.k();
    let mut out = BTreeSet::new();
    for e in q.h.edges() {
        for s in all_subsets(e) {
            if s.len() >= 2 && s.len() < k && !s.iter().any(|v| q.roots.contains(v)) {
                out.insert(s);
            }
        }
    }
    out.into_iter().collect()
}

/// Rooted density supported by the slice: rooted copies whose non-root
/// vertices sit in distinct clusters with the skeleton mapped into the
/// slice, over the number of such skeleton copies in the slice.
pub fn rooted_density_in_slice(g: &KGraph, q: &RootQuery, slice: &MaterializedSlice) -> Result<Rational> {
    check_roots(g, q)?;
    check_cover(g, slice)?;
    let skeleton = skeleton_edges(q);
    let free: Vec<usize> = (0..q.h.n()).filter(|u| !q.roots.contains(u)).collect();
    let ground = &slice.ground;
    let complex = &slice.complex;
    let accept = |image: &[Option<usize>], u: usize| -> bool {
        if q.roots.contains(&u) {
            return true;
        }
        let cluster = ground.part_of(image[u].expect("just placed"));
        let clash = free
            .iter()
            .any(|&w| w != u && image[w].is_some_and(|v| ground.part_of(v) == cluster));
        if clash {
            return false;
        }
        skeleton.iter().filter(|s| s.contains(&u)).all(|s| {
            let placed: Option<Vec<usize>> = s.iter().map(|&x| image[x]).collect();
            match placed {
                Some(mut m) => {
                    m.sort_unstable();
                    complex.contains(&m)
                }
                None => true,
            }
        })
    };
    let fixed: Vec<(usize, usize)> = q.roots.iter().copied().zip(q.targets.iter().copied()).collect();
    let domain: Vec<usize> = (0..g.n()).collect();
    let count = sum_injections(g, &q.h, &domain, &fixed, &accept);

    // copies of the skeleton alone: an edgeless host over the free vertices
    let relabel: BTreeMap<usize, usize> = free.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let skel_free: Vec<Edge> = skeleton.iter().map(|s| s.iter().map(|u| relabel[u]).collect()).collect();
    let accept_free = |image: &[Option<usize>], u: usize| -> bool {
        let cluster = ground.part_of(image[u].expect("just placed"));
        if (0..image.len()).any(|w| w != u && image[w].is_some_and(|v| ground.part_of(v) == cluster)) {
            return false;
        }
        skel_free.iter().filter(|s| s.contains(&u)).all(|s| {
            let placed: Option<Vec<usize>> = s.iter().map(|&x| image[x]).collect();
            match placed {
                Some(mut m) => {
                    m.sort_unstable();
                    complex.contains(&m)
                }
                None => true,
            }
        })
    };
    let empty_h = KGraph::empty(g.k(), free.len())?;
    let copies = sum_injections(g, &empty_h, &domain, &[], &accept_free);
    if copies.is_zero() {
        return Err(Error::UndefinedDensity("no copy of the skeleton lies in the slice".into()));
    }
    Ok(count / copies)
}

/// Both reduced-graph inequalities as exact left-minus-right slacks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DdSlack {
    #[serde(with = "crate::rational::serde_rational")]
    pub density: Rational,
    /// One entry per queried `Y`.
    pub degree: Vec<DegreeSlack>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSlack {
    pub y: Edge,
    #[serde(with = "crate::rational::serde_rational")]
    pub slack: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub zeta: Rational,
}

impl DdSlack {
    pub fn holds(&self) -> bool {
        !self.density.is_negative() && self.degree.iter().all(|d| !d.slack.is_negative())
    }
}

/// `d_H(R_d[X]) - d_H(R[X]) + d + e(H) m / C(|X|, k)` where `m` is the
/// number of irregular k-sets, and for each `Y`,
/// `reldeg(Y; R_d, X) - reldeg(Y; R, X) + d + zeta(Y)`.
pub fn reduced_dd_slack(reduced: &DReduced, d: &Rational, h: &KGraph, x: &[usize], ys: &[Edge]) -> Result<DdSlack> {
    let r = &reduced.weighted;
    let rd = &reduced.graph;
    let k = r.k;
    let pairs = binomial(x.len(), k);
    if pairs == 0 {
        return Err(Error::InvalidQuery(format!("X has fewer than k = {k} clusters")));
    }
    let loss = int(h.edge_count() as u64 * reduced.irregular.len() as u64) / int(pairs);
    let density = h_density_on(rd, h, x)? - h_density_on(r, h, x)? + d + loss;
    let mut degree = Vec::new();
    for y in ys {
        let rest: Vec<usize> = x.iter().copied().filter(|v| !y.contains(v)).collect();
        let need = k - y.len();
        let total = binomial(rest.len(), need);
        let bad = rest
            .iter()
            .copied()
            .combinations(need)
            .filter(|t| {
                let mut z: Edge = y.iter().copied().chain(t.iter().copied()).collect();
                z.sort_unstable();
                reduced.irregular.contains(&z)
            })
            .count();
        let zeta = ratio_or_zero(bad as u64, total);
        let slack = rel_degree(y, rd, x)? - rel_degree(y, r, x)? + d + &zeta;
        degree.push(DegreeSlack {
            y: y.clone(),
            slack,
            zeta,
        });
    }
    Ok(DdSlack { density, degree })
}

/// Mean binary entropy of the weights over all k-sets of clusters, with
/// `h(0) = h(1) = 0`.
pub fn reduced_entropy(r: &WeightedReducedGraph) -> f64 {
    let count = binomial(r.t, r.k);
    if count == 0 {
        return 0.0;
    }
    let sum: f64 = r.weights.values().map(|w| binary_entropy(to_f64(w))).sum();
    sum / count as f64
}

pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// A measured gap between a reduced-graph quantity and its counterpart in
/// `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Gap {
    pub label: String,
    #[serde(with = "crate::rational::serde_rational")]
    pub reduced: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub direct: Rational,
    /// `|reduced - direct|` as a decimal string.
    pub gap: String,
}

impl Gap {
    fn new(label: String, reduced: Rational, direct: Rational) -> Self {
        let gap = decimal(&(&reduced - &direct).abs());
        Self {
            label,
            reduced,
            direct,
            gap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountingDeviation {
    pub clusters: Edge,
    pub measured: usize,
    #[serde(with = "crate::rational::serde_rational")]
    pub expected: Rational,
    /// `measured / expected - 1` as a decimal string.
    pub deviation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootGap {
    pub roots: Vec<usize>,
    pub targets: Vec<usize>,
    #[serde(with = "crate::rational::serde_rational")]
    pub plain: Rational,
    /// `None` when no skeleton copy lies in the slice.
    pub supported: Option<String>,
    pub gap: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QualityReport {
    /// `|d_H(R(G)[X]) - d_H(G[∪X])|` per H.
    pub h_density: Vec<Gap>,
    /// `|reldeg(Y; R(G), X) - reldeg(J_Y; G, ∪X)|` per cluster set `Y`.
    pub degree: Vec<Gap>,
    pub rooted: Vec<RootGap>,
    /// Exact slacks of the two reduced-graph inequalities, per H.
    pub dd_slack: Vec<DdSlack>,
    pub counting: Vec<CountingDeviation>,
    #[serde(with = "crate::rational::serde_rational")]
    pub irregular_fraction: Rational,
}

/// Measures how well the reduced graph of `G` over `slice` reflects `G`:
/// H-densities on `X`, relative degrees of every cluster set `Y` of size at
/// most `k-1` inside `X`, rooted densities, the reduced-graph inequalities
/// (hard-checked), the clique-count identity on each k-set of clusters of
/// `X` and its proper subsets, and the share of irregular polyads.
pub fn slice_quality_report(
    g: &KGraph,
    slice: &MaterializedSlice,
    params: &RegularityParams,
    hs: &[KGraph],
    x: &[usize],
    roots: &[RootQuery],
) -> Result<QualityReport> {
    let reduced = d_reduced(g, slice, params)?;
    let r = &reduced.weighted;
    let k = g.k();
    let x: Vec<usize> = x.iter().copied().sorted().dedup().collect();
    if x.iter().any(|&c| c >= slice.cluster_count()) {
        return Err(Error::InvalidQuery("X names a cluster that does not exist".into()));
    }
    let parts = slice.ground.parts();
    let union: Vec<usize> = x.iter().flat_map(|&c| parts[c].iter().copied()).sorted().collect();

    let mut h_density = Vec::new();
    let mut dd_slack = Vec::new();
    let ys: Vec<Edge> = (1..k).flat_map(|j| x.iter().copied().combinations(j)).collect();
    for (i, h) in hs.iter().enumerate() {
        h_density.push(Gap::new(format!("H{i}"), h_density_on(r, h, &x)?, h_density_on(g, h, &union)?));
        if x.len() >= k {
            let slack = reduced_dd_slack(&reduced, &params.d, h, &x, &ys)?;
            if !slack.holds() {
                return Err(Error::Consistency(format!("reduced-graph inequality fails for H{i}: {slack:?}")));
            }
            dd_slack.push(slack);
        }
    }

    let mut degree = Vec::new();
    for y in &ys {
        let cells = slice.cells_on(y);
        let direct = rel_degree_mean(&cells, g, &union)?;
        if let Some(direct) = direct {
            degree.push(Gap::new(format!("Y={}", y.iter().join(",")), rel_degree(y, r, &x)?, direct));
        }
    }

    let mut rooted = Vec::new();
    for q in roots {
        let plain = rooted_density(g, q)?;
        let (supported, gap) = match rooted_density_in_slice(g, q, slice) {
            Ok(s) => (Some(decimal(&s)), Some(decimal(&(&s - &plain).abs()))),
            Err(Error::UndefinedDensity(_)) => (None, None),
            Err(e) => return Err(e),
        };
        rooted.push(RootGap {
            roots: q.roots.clone(),
            targets: q.targets.clone(),
            plain,
            supported,
            gap,
        });
    }

    let m = int(slice.cluster_size() as u64);
    let product = |size: usize| -> Rational {
        let mut p = one();
        for i in 2..(size + 1).min(k) {
            for _ in 0..binomial(size, i) {
                p *= slice.densities.get(i);
            }
        }
        p
    };
    let mut counting = Vec::new();
    for xk in x.iter().copied().combinations(k) {
        for size in 1..=k {
            for sub in xk.iter().copied().combinations(size) {
                let measured = if size == k {
                    r.supported[&sub]
                } else {
                    slice.cells_on(&sub).len()
                };
                let mut expected = product(size);
                for _ in 0..size {
                    expected *= &m;
                }
                let deviation = decimal(&(ratio_of(measured, &expected) - one()));
                counting.push(CountingDeviation {
                    clusters: sub,
                    measured,
                    expected,
                    deviation,
                });
            }
        }
    }
    counting.sort_by(|a, b| a.clusters.cmp(&b.clusters));
    counting.dedup_by(|a, b| a.clusters == b.clusters);

    Ok(QualityReport {
        h_density,
        degree,
        rooted,
        dd_slack,
        counting,
        irregular_fraction: reduced.irregular_fraction(),
    })
}

fn ratio_of(measured: usize, expected: &Rational) -> Rational {
    if expected.is_zero() {
        return one();
    }
    int(measured as u64) / expected
}

/// True iff every edge of `sub` lies inside some edge of `sup`.
pub fn edges_covered(sub: &[Edge], sup: &[Edge]) -> bool {
    sub.iter().all(|e| sup.iter().any(|f| is_subset(e, f)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::GroundPartition;
    use crate::rational::ratio;
    use crate::regularity::family::{sample_slice, DensityVector, PartitionFamily};

    fn c6() -> KGraph {
        KGraph::new(3, 6, [[0, 1, 2], [1, 2, 3], [2, 3, 4], [3, 4, 5], [0, 4, 5], [0, 1, 5]].map(|e| e.to_vec())).unwrap()
    }

    fn trivial_slice(ground: GroundPartition, k: usize) -> MaterializedSlice {
        let f = PartitionFamily::constant(ground, k, DensityVector::trivial(k)).unwrap();
        sample_slice(&f, 0).materialize(&f).unwrap()
    }

    fn c6_slice() -> MaterializedSlice {
        trivial_slice(GroundPartition::from_parts(6, &[vec![0, 3], vec![1, 4], vec![2, 5]]).unwrap(), 3)
    }

    fn params() -> RegularityParams {
        RegularityParams::new(ratio(1, 2), ratio(1, 4), ratio(1, 4), 1).unwrap()
    }

    #[test]
    fn c6_reduced_weight() {
        let r = weighted_reduced(&c6(), &c6_slice()).unwrap();
        assert_eq!(r.weights[&vec![0, 1, 2]], ratio(3, 4));
        assert_eq!(r.supported[&vec![0, 1, 2]], 8);
    }

    #[test]
    fn extreme_graphs() {
        let slice = trivial_slice(GroundPartition::blocks(4, 2), 3);
        let full = KGraph::complete(8, 3).unwrap();
        let r = weighted_reduced(&full, &slice).unwrap();
        assert!(r.weights.values().all(|w| *w == one()));
        let empty = KGraph::empty(3, 8).unwrap();
        let rd = d_reduced(&empty, &slice, &params()).unwrap();
        assert_eq!(rd.graph.edge_count(), 0);
        assert!(rd.weighted.weights.values().all(|w| w.is_zero()));
    }

    #[test]
    fn densities_on_c6() {
        let g = c6();
        let edge = KGraph::new(3, 3, [vec![0, 1, 2]]).unwrap();
        assert_eq!(h_density(&g, &edge).unwrap(), ratio(6, 20));
        assert_eq!(h_density(&KGraph::complete(5, 3).unwrap(), &KGraph::complete(5, 3).unwrap()).unwrap(), one());
        assert_eq!(rel_degree(&[0, 1], &g, &[0, 1, 2, 3, 4, 5]).unwrap(), ratio(1, 2));
        let q = RootQuery {
            h: edge,
            roots: vec![0],
            targets: vec![0],
        };
        assert_eq!(rooted_density(&g, &q).unwrap(), ratio(3, 10));
    }

    #[test]
    fn slice_supported_rooted_density() {
        let g = c6();
        let q = RootQuery {
            h: KGraph::new(3, 3, [vec![0, 1, 2]]).unwrap(),
            roots: vec![0],
            targets: vec![0],
        };
        // Skeleton is an edge on two vertices in distinct clusters; vertex 0
        // has link {12, 45, 15} of which 12, 45, 15 are crossing pairs.
        let crossing = 12 * 2;
        let s = rooted_density_in_slice(&g, &q, &c6_slice()).unwrap();
        assert_eq!(s, ratio(6, crossing));
        // A slice that picks the empty cell on every pair of clusters
        // supports no skeleton copy.
        let ground = GroundPartition::from_parts(6, &[vec![0, 3], vec![1, 4], vec![2, 5]]).unwrap();
        let f = PartitionFamily::constant(ground, 3, DensityVector::uniform(3, 2).unwrap()).unwrap();
        let empty = crate::regularity::family::enumerate_slices(&f)
            .unwrap()
            .into_iter()
            .map(|sl| sl.materialize(&f).unwrap())
            .find(|m| m.complex.level(2).is_empty())
            .unwrap();
        assert!(matches!(rooted_density_in_slice(&g, &q, &empty), Err(Error::UndefinedDensity(_))));
    }

    #[test]
    fn weighted_and_thresholded_densities_agree_on_01_weights() {
        let slice = trivial_slice(GroundPartition::blocks(4, 2), 3);
        let g = KGraph::complete(8, 3).unwrap();
        let rd = d_reduced(&g, &slice, &params()).unwrap();
        let h = KGraph::new(3, 4, [vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        assert_eq!(h_density(&rd.weighted, &h).unwrap(), h_density(&rd.graph, &h).unwrap());
    }

    #[test]
    fn dd_slacks_and_report() {
        let slice = c6_slice();
        let g = c6();
        let p = params();
        let rd = d_reduced(&g, &slice, &p).unwrap();
        let h = KGraph::new(3, 3, [vec![0, 1, 2]]).unwrap();
        let ys = vec![vec![0], vec![0, 1]];
        assert!(reduced_dd_slack(&rd, &p.d, &h, &[0, 1, 2], &ys).unwrap().holds());
        let report = slice_quality_report(&g, &slice, &p, &[h], &[0, 1, 2], &[]).unwrap();
        // R has one triple of weight 3/4; G restricted to all 6 vertices has density 6/20.
        assert_eq!(report.h_density[0].reduced, ratio(3, 4));
        assert_eq!(report.h_density[0].direct, ratio(3, 10));
        let triple = report.counting.iter().find(|c| c.clusters == vec![0, 1, 2]).unwrap();
        assert_eq!((triple.measured, triple.expected.clone()), (8, ratio(8, 1)));
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["h_density"][0]["gap"], "0.45");
    }

    #[test]
    fn complete_graph_report_has_no_gaps() {
        let slice = trivial_slice(GroundPartition::blocks(3, 2), 3);
        let g = KGraph::complete(6, 3).unwrap();
        let edge = KGraph::new(3, 3, [vec![0, 1, 2]]).unwrap();
        let report = slice_quality_report(&g, &slice, &params(), &[edge], &[0, 1, 2], &[]).unwrap();
        assert_eq!(report.h_density[0].gap, "0");
        assert!(report.degree.iter().all(|d| d.gap == "0"));
        assert!(report.irregular_fraction.is_zero());
    }

    #[test]
    fn entropy() {
        let mk = |ws: &[Rational]| WeightedReducedGraph {
            t: 4,
            k: 3,
            weights: (0..4).combinations(3).zip(ws.iter().cloned()).collect(),
            supported: BTreeMap::new(),
        };
        let half = ratio(1, 2);
        assert!((reduced_entropy(&mk(&[half.clone(), half.clone(), half.clone(), half.clone()])) - 1.0).abs() < 1e-12);
        assert_eq!(reduced_entropy(&mk(&[zero(), one(), one(), zero()])), 0.0);
        assert!((reduced_entropy(&mk(&[zero(), half.clone(), zero(), half])) - 0.5).abs() < 1e-12);
    }
}
