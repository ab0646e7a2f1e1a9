//! Relative densities `d(H_i | H_{i-1})` and `d(H_i | Q)`, and a
//! three-valued search for witnesses against `(d, eps, r)`-regularity.

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{supported_sets, Edge, GroundPartition, KGraph};
use crate::rational::{int, ratio_or_zero, Rational};

/// Default limit on base edges for exhaustive falsification.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 20;

/// Upper limit on the number of subgraph tuples visited exhaustively when
/// `r > 1`.
pub const EXHAUSTIVE_TUPLE_CAP: u128 = 1 << 22;

/// `i`-sets supported on `base` (all `(i-1)`-subsets are edges), restricted
/// to `partition`-partite sets when a partition is given.
pub fn clique_sets(base: &KGraph, partition: Option<&GroundPartition>) -> Result<Vec<Edge>> {
    let all = supported_sets(base, base.k() + 1)?;
    Ok(all
        .edges()
        .filter(|e| partition.is_none_or(|p| p.is_partite(e)))
        .cloned()
        .collect())
}

fn check_arity(h: &KGraph, base_k: usize) -> Result<()> {
    if h.k() != base_k + 1 {
        return Err(Error::InvalidQuery(format!(
            "density of a {}-graph over a {base_k}-graph",
            h.k()
        )));
    }
    Ok(())
}

/// `|K_i(base) ∩ H| / |K_i(base)|`, or zero when nothing is supported.
pub fn relative_density(h: &KGraph, base: &KGraph, partition: Option<&GroundPartition>) -> Result<Rational> {
    check_arity(h, base.k())?;
    let cliques = clique_sets(base, partition)?;
    let hits = cliques.iter().filter(|e| h.contains(e)).count();
    Ok(ratio_or_zero(hits as u64, cliques.len() as u64))
}

/// Density of `H` over `K_i(Q_1) ∪ ... ∪ K_i(Q_r)`.
pub fn relative_density_tuple(h: &KGraph, qs: &[KGraph], partition: Option<&GroundPartition>) -> Result<Rational> {
    let mut union = std::collections::BTreeSet::new();
    for q in qs {
        check_arity(h, q.k())?;
        union.extend(clique_sets(q, partition)?);
    }
    let hits = union.iter().filter(|e| h.contains(e)).count();
    Ok(ratio_or_zero(hits as u64, union.len() as u64))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FalsifyMode {
    Exhaustive { cap: usize },
    Sampled { trials: u64, seed: u64 },
}

impl FalsifyMode {
    pub fn exhaustive() -> Self {
        Self::Exhaustive {
            cap: DEFAULT_EXHAUSTIVE_CAP,
        }
    }
}

/// An `r`-tuple of base subgraphs supporting more than an `eps` share of
/// the cliques, on which the density misses `d` by more than `eps`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub subgraphs: Vec<Vec<Edge>>,
    pub support: usize,
    #[serde(with = "crate::rational::serde_rational")]
    pub density: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Falsified(Witness),
    /// Every tuple was checked.
    ExactlyRegular,
    /// No witness among this many sampled tuples.
    NotFalsified { trials: u64 },
}

impl Verdict {
    pub fn is_falsified(&self) -> bool {
        matches!(self, Verdict::Falsified(_))
    }
}

struct Setup {
    base_edges: Vec<Edge>,
    cliques: Vec<Edge>,
    in_h: Vec<bool>,
    // indices into base_edges of each clique's facets
    needs: Vec<Vec<usize>>,
    total: usize,
}

impl Setup {
    fn new(h: &KGraph, base: &KGraph, partition: Option<&GroundPartition>) -> Result<Self> {
        check_arity(h, base.k())?;
        let base_edges: Vec<Edge> = base.edges().cloned().collect();
        let cliques = clique_sets(base, partition)?;
        let in_h = cliques.iter().map(|e| h.contains(e)).collect();
        let needs = cliques
            .iter()
            .map(|c| {
                c.iter()
                    .combinations(c.len() - 1)
                    .map(|f| {
                        let f: Edge = f.into_iter().copied().collect();
                        base_edges.binary_search(&f).expect("clique facets are base edges")
                    })
                    .collect()
            })
            .collect();
        let total = base_edges.len();
        Ok(Self {
            base_edges,
            cliques,
            in_h,
            needs,
            total,
        })
    }

    /// Judges a tuple given which cliques it supports.
    fn judge(&self, supported: &FixedBitSet, d: &Rational, eps: &Rational) -> Option<(usize, Rational)> {
        let support = supported.count_ones(..);
        if int(support as u64) <= eps * int(self.cliques.len() as u64) {
            return None;
        }
        let hits = supported.ones().filter(|&c| self.in_h[c]).count();
        let density = ratio_or_zero(hits as u64, support as u64);
        ((&density - d).abs() > *eps).then_some((support, density))
    }

    fn supported_by(&self, q: &FixedBitSet) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.cliques.len());
        for (c, need) in self.needs.iter().enumerate() {
            if need.iter().all(|&i| q.contains(i)) {
                s.insert(c);
            }
        }
        s
    }

    fn edges_of(&self, q: &FixedBitSet) -> Vec<Edge> {
        q.ones().map(|i| self.base_edges[i].clone()).collect()
    }
}

/// Searches for an `r`-tuple of subgraphs of `base` with
/// `|K_i(Q)| > eps |K_i(base)|` and `d(H | Q) ≠ d ± eps`.
///
/// Exhaustive mode visits all subgraphs (for `r = 1`, in increasing bitmask
/// order over the sorted base edges) and needs `e(base) <= cap`. Sampled mode
/// draws each subgraph from a mixed pool of vertex-induced, random-edge and
/// link-derived subgraphs.
pub fn regularity_falsify(
    h: &KGraph,
    base: &KGraph,
    partition: Option<&GroundPartition>,
    d: &Rational,
    eps: &Rational,
    r: usize,
    mode: &FalsifyMode,
) -> Result<Verdict> {
    if r == 0 || !eps.is_positive() {
        return Err(Error::Parameter(format!("need r >= 1 and eps > 0, got r = {r}, eps = {eps}")));
    }
    let setup = Setup::new(h, base, partition)?;
    match mode {
        FalsifyMode::Exhaustive { cap } => exhaustive(&setup, d, eps, r, *cap),
        FalsifyMode::Sampled { trials, seed } => Ok(sampled(&setup, h, d, eps, r, *trials, *seed)),
    }
}

fn mask_set(mask: u64, len: usize) -> FixedBitSet {
    let mut q = FixedBitSet::with_capacity(len);
    for i in 0..len {
        if mask >> i & 1 == 1 {
            q.insert(i);
        }
    }
    q
}

fn exhaustive(setup: &Setup, d: &Rational, eps: &Rational, r: usize, cap: usize) -> Result<Verdict> {
    let e = setup.total;
    if e > cap || e >= 64 {
        return Err(Error::Capacity {
            what: "exhaustive regularity check",
            needed: 1u128.checked_shl(e as u32).unwrap_or(u128::MAX),
            cap: 1u128 << cap.min(127),
        });
    }
    let masks = 1u64 << e;
    if r == 1 {
        let needs: Vec<u64> = setup.needs.iter().map(|n| n.iter().fold(0u64, |m, &i| m | 1 << i)).collect();
        let mut supported = FixedBitSet::with_capacity(setup.cliques.len());
        for mask in 0..masks {
            supported.clear();
            for (c, &need) in needs.iter().enumerate() {
                if mask & need == need {
                    supported.insert(c);
                }
            }
            if let Some((support, density)) = setup.judge(&supported, d, eps) {
                return Ok(Verdict::Falsified(Witness {
                    subgraphs: vec![setup.edges_of(&mask_set(mask, e))],
                    support,
                    density,
                }));
            }
        }
        return Ok(Verdict::ExactlyRegular);
    }
    let tuples = multiset_count(masks as u128, r);
    if tuples > EXHAUSTIVE_TUPLE_CAP {
        return Err(Error::Capacity {
            what: "exhaustive regularity tuples",
            needed: tuples,
            cap: EXHAUSTIVE_TUPLE_CAP,
        });
    }
    let per_mask: Vec<FixedBitSet> = (0..masks).map(|m| setup.supported_by(&mask_set(m, e))).collect();
    for tuple in (0..masks as usize).combinations_with_replacement(r) {
        let mut supported = per_mask[tuple[0]].clone();
        for &m in &tuple[1..] {
            supported.union_with(&per_mask[m]);
        }
        if let Some((support, density)) = setup.judge(&supported, d, eps) {
            return Ok(Verdict::Falsified(Witness {
                subgraphs: tuple.iter().map(|&m| setup.edges_of(&mask_set(m as u64, e))).collect(),
                support,
                density,
            }));
        }
    }
    Ok(Verdict::ExactlyRegular)
}

fn multiset_count(items: u128, r: usize) -> u128 {
    // C(items + r - 1, r), saturating
    let mut acc: u128 = 1;
    for i in 0..r as u128 {
        acc = acc.saturating_mul(items + i) / (i + 1);
    }
    acc
}

fn sampled(setup: &Setup, h: &KGraph, d: &Rational, eps: &Rational, r: usize, trials: u64, seed: u64) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices: Vec<usize> = setup.base_edges.iter().flatten().copied().sorted().dedup().collect();
    let h_vertices: Vec<usize> = h.covered_vertices().into_iter().collect();
    for _ in 0..trials {
        let qs: Vec<FixedBitSet> = (0..r).map(|_| draw_subgraph(setup, h, &vertices, &h_vertices, &mut rng)).collect();
        let mut supported = FixedBitSet::with_capacity(setup.cliques.len());
        for q in &qs {
            supported.union_with(&setup.supported_by(q));
        }
        if let Some((support, density)) = setup.judge(&supported, d, eps) {
            return Verdict::Falsified(Witness {
                subgraphs: qs.iter().map(|q| setup.edges_of(q)).collect(),
                support,
                density,
            });
        }
    }
    Verdict::NotFalsified { trials }
}

fn draw_subgraph(setup: &Setup, h: &KGraph, vertices: &[usize], h_vertices: &[usize], rng: &mut ChaCha8Rng) -> FixedBitSet {
    let mut q = FixedBitSet::with_capacity(setup.total);
    let kind = rng.random_range(0..3u8);
    match kind {
        0 => {
            let kept: Vec<usize> = vertices.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
            for (i, e) in setup.base_edges.iter().enumerate() {
                if e.iter().all(|v| kept.binary_search(v).is_ok()) {
                    q.insert(i);
                }
            }
        }
        2 if !h_vertices.is_empty() => {
            let v = h_vertices[rng.random_range(0..h_vertices.len())];
            let link: Vec<&Edge> = h.edges().filter(|f| f.contains(&v)).collect();
            for (i, e) in setup.base_edges.iter().enumerate() {
                if link.iter().any(|f| crate::hypergraph::is_subset(e, f)) {
                    q.insert(i);
                }
            }
        }
        _ => {
            for i in 0..setup.total {
                if rng.random_bool(0.5) {
                    q.insert(i);
                }
            }
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    // a, b, c, d = 0, 1, 2, 3 with classes {a, b} and {c, d}
    fn bipartite() -> (KGraph, GroundPartition) {
        let base = KGraph::new(1, 4, (0..4).map(|v| vec![v])).unwrap();
        (base, GroundPartition::blocks(2, 2))
    }

    #[test]
    fn relative_density_examples() {
        let (base, parts) = bipartite();
        let h = KGraph::new(2, 4, [vec![0, 2], vec![1, 3]]).unwrap();
        assert_eq!(relative_density(&h, &base, Some(&parts)).unwrap(), ratio(1, 2));
        let full = KGraph::new(2, 4, [vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]).unwrap();
        assert_eq!(relative_density(&full, &base, Some(&parts)).unwrap(), int(1));
        let empty = KGraph::empty(1, 4).unwrap();
        assert_eq!(relative_density(&h, &empty, Some(&parts)).unwrap(), int(0));
        let q = KGraph::new(1, 4, [vec![0], vec![2]]).unwrap();
        assert_eq!(relative_density_tuple(&h, &[q], Some(&parts)).unwrap(), int(1));
    }

    #[test]
    fn falsify_examples() {
        let (base, parts) = bipartite();
        let h = KGraph::new(2, 4, [vec![0, 2], vec![1, 3]]).unwrap();
        let v = regularity_falsify(&h, &base, Some(&parts), &ratio(1, 2), &ratio(1, 8), 1, &FalsifyMode::exhaustive()).unwrap();
        match v {
            Verdict::Falsified(w) => {
                assert_eq!(w.subgraphs, vec![vec![vec![0], vec![2]]]);
                assert_eq!(w.density, int(1));
            }
            other => panic!("{other:?}"),
        }
        // At eps = 1/4 a single pair supports exactly eps |K_2|, which the
        // strict inequality excludes; two pairs are needed and balance out.
        let v = regularity_falsify(&h, &base, Some(&parts), &ratio(1, 2), &ratio(1, 4), 1, &FalsifyMode::exhaustive()).unwrap();
        assert_eq!(v, Verdict::ExactlyRegular);

        let full = KGraph::new(2, 4, [vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]).unwrap();
        let v = regularity_falsify(&full, &base, Some(&parts), &int(1), &ratio(1, 10), 2, &FalsifyMode::exhaustive()).unwrap();
        assert_eq!(v, Verdict::ExactlyRegular);
    }

    #[test]
    fn sampled_mode_and_caps() {
        let base = KGraph::complete(30, 1).unwrap();
        let parts = GroundPartition::blocks(2, 15);
        let edges = (0..15usize).cartesian_product(15..30usize).map(|(a, b)| vec![a, b]);
        let h = KGraph::new(2, 30, edges).unwrap();
        let v = regularity_falsify(&h, &base, Some(&parts), &int(1), &ratio(1, 10), 1, &FalsifyMode::Sampled { trials: 200, seed: 3 }).unwrap();
        assert_eq!(v, Verdict::NotFalsified { trials: 200 });
        assert!(matches!(
            regularity_falsify(&h, &base, Some(&parts), &int(1), &ratio(1, 10), 1, &FalsifyMode::exhaustive()),
            Err(Error::Capacity { .. })
        ));
        assert!(regularity_falsify(&h, &base, Some(&parts), &int(1), &int(0), 1, &FalsifyMode::exhaustive()).is_err());
    }
}
