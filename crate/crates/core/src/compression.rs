//! Shifts `S_ij`, low-degree pruning, and the matching extractor for
//! complexes with `e_k >= (r-1) e_{k-1} + 1`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{down_closure, Complex, Edge, Hypergraph, KGraph};
use crate::matching::{matching_number, Matching};
use crate::rational::{int, ratio_or_zero, Rational};
use crate::tight::tight_components;

/// Instances up to this many vertices get their original matching number
/// checked by branch and bound.
pub const ORACLE_MAX_N: usize = 12;

fn shift(e: &[usize], i: usize, j: usize) -> Option<Edge> {
    if !e.contains(&j) || e.contains(&i) {
        return None;
    }
    let mut s: Edge = e.iter().map(|&v| if v == j { i } else { v }).collect();
    s.sort_unstable();
    Some(s)
}

fn shift_level(level: &BTreeSet<Edge>, i: usize, j: usize) -> (BTreeSet<Edge>, usize) {
    let mut moved = 0;
    let out = level
        .iter()
        .map(|e| match shift(e, i, j) {
            Some(s) if !level.contains(&s) => {
                moved += 1;
                s
            }
            _ => e.clone(),
        })
        .collect();
    (out, moved)
}

fn compress_counting(c: &Complex, i: usize, j: usize) -> (Complex, usize) {
    let mut moved = 0;
    let levels = c
        .levels()
        .iter()
        .map(|level| {
            let (out, m) = shift_level(level, i, j);
            moved += m;
            out
        })
        .collect();
    (Complex::from_levels_unchecked(c.n(), levels), moved)
}

/// Applies `S_ij` to every level: each edge containing `j` but not `i`
/// moves to `e - j + i` unless that set is already present.
pub fn compress_ij(c: &Complex, i: usize, j: usize) -> Result<Complex> {
    if i >= j || j >= c.n() {
        return Err(Error::InvalidQuery(format!(
            "need i < j < n, got i = {i}, j = {j}, n = {}",
            c.n()
        )));
    }
    Ok(compress_counting(c, i, j).0)
}

/// Sweeps all pairs `i < j` in lexicographic order until a full pass
/// changes nothing. Returns the fixpoint and the number of moved edges.
pub fn fully_compress_counting(c: &Complex) -> (Complex, usize) {
    let mut current = c.clone();
    let mut total = 0;
    loop {
        let mut changed = 0;
        for j in 1..c.n() {
            for i in 0..j {
                let (next, moved) = compress_counting(&current, i, j);
                if moved > 0 {
                    current = next;
                    changed += moved;
                }
            }
        }
        if changed == 0 {
            return (current, total);
        }
        total += changed;
    }
}

pub fn fully_compress(c: &Complex) -> Complex {
    fully_compress_counting(c).0
}

/// True iff `S_ij` fixes the hypergraph for every `i < j`.
pub fn is_fully_compressed(h: &Hypergraph) -> bool {
    h.levels().iter().flatten().all(|e| {
        e.iter()
            .all(|&j| (0..j).all(|i| shift(e, i, j).is_none_or(|s| h.contains(&s))))
    })
}

fn prune_counting(c: &Complex, r: usize) -> Result<(Complex, Vec<usize>)> {
    if r == 0 {
        return Err(Error::Parameter("r must be at least 1".into()));
    }
    let k = c.max_level();
    let mut current = c.clone();
    let mut removed = vec![0; k + 1];
    loop {
        let mut low: Vec<Edge> = Vec::new();
        for l in 0..k {
            let threshold = (k - l) * r;
            low.extend(current.level(l).iter().filter(|e| current.up_degree(e) < threshold).cloned());
        }
        if low.is_empty() {
            return Ok((current, removed));
        }
        let before = current.level_counts();
        for e in &low {
            current.delete_with_supersets(e);
        }
        for (slot, (b, a)) in removed.iter_mut().zip(before.iter().zip(current.level_counts())) {
            *slot += b - a;
        }
    }
}

/// Deletes, until none remains, every level-`l` edge (`l <= k-1`, the empty
/// set included) lying in fewer than `(k-l) r` edges one level up, together
/// with all its supersets.
pub fn prune_low_degree(c: &Complex, r: usize) -> Result<Complex> {
    prune_counting(c, r).map(|(c, _)| c)
}

/// `(r-1) e_{k-1} + 1 - e_k` when positive, else zero.
pub fn ratio_deficit(c: &Complex, r: usize) -> u64 {
    let k = c.max_level();
    let counts = c.level_counts();
    let (ek, ek1) = (counts[k] as u64, if k == 0 { 0 } else { counts[k - 1] as u64 });
    ((r as u64).saturating_sub(1) * ek1 + 1).saturating_sub(ek)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "stage", rename_all = "snake_case")]
pub enum PipelineStage {
    /// Edges removed per level during one prune-to-fixpoint run.
    Prune { removed: Vec<usize>, counts: Vec<usize> },
    /// Edges moved during one compress-to-fixpoint run.
    Compress { moved: usize, counts: Vec<usize> },
}

#[derive(Debug, Clone)]
pub struct RatioMatching {
    /// The pruned, fully compressed complex the matching lives in.
    pub compressed: Complex,
    pub matching: Matching,
    pub trace: Vec<PipelineStage>,
    /// Matching number of the original top level, for instances up to
    /// [`ORACLE_MAX_N`] vertices.
    pub oracle_nu: Option<usize>,
}

/// Alternates prune-to-fixpoint and compress-to-fixpoint until neither
/// changes anything, then returns the `r` disjoint edges
/// `{m, m + r, ..., m + (k-1) r}` for `m < r` of the result.
pub fn ratio_matching(c: &Complex, r: usize) -> Result<RatioMatching> {
    let k = c.max_level();
    if k == 0 || r == 0 {
        return Err(Error::Parameter(format!("need k >= 1 and r >= 1, got k = {k}, r = {r}")));
    }
    let deficit = ratio_deficit(c, r);
    if deficit > 0 {
        return Err(Error::RatioHypothesis { deficit });
    }
    let mut trace = Vec::new();
    let mut current = c.clone();
    loop {
        let (pruned, removed) = prune_counting(&current, r)?;
        let pruned_any = removed.iter().any(|&x| x > 0);
        if pruned_any {
            trace.push(PipelineStage::Prune {
                removed,
                counts: pruned.level_counts(),
            });
        }
        let (compressed, moved) = fully_compress_counting(&pruned);
        if moved > 0 {
            trace.push(PipelineStage::Compress {
                moved,
                counts: compressed.level_counts(),
            });
        }
        current = compressed;
        if !pruned_any && moved == 0 {
            break;
        }
    }
    if ratio_deficit(&current, r) > 0 {
        return Err(Error::Consistency("pruning broke the ratio inequality".into()));
    }
    let vertices = current.level(1).len();
    if vertices < k * r {
        return Err(Error::Consistency(format!(
            "pruned complex has {vertices} vertices, fewer than kr = {}",
            k * r
        )));
    }
    let edges: Vec<Edge> = (0..r).map(|m| (0..k).map(|q| m + q * r).collect()).collect();
    if let Some(e) = edges.iter().find(|e| !current.contains(e)) {
        return Err(Error::Consistency(format!("{e:?} is missing from the compressed complex")));
    }
    let matching = Matching { edges };
    let oracle_nu = if c.n() <= ORACLE_MAX_N {
        let (nu, _) = matching_number(&c.level_graph(k)?);
        if nu < r {
            return Err(Error::Consistency(format!("original matching number {nu} is below r = {r}")));
        }
        Some(nu)
    } else {
        None
    };
    Ok(RatioMatching {
        compressed: current,
        matching,
        trace,
        oracle_nu,
    })
}

/// A tight component with the level sizes of its down-closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DenseComponent {
    pub component: usize,
    pub top: usize,
    pub shadow: usize,
}

impl DenseComponent {
    pub fn ratio(&self) -> Rational {
        ratio_or_zero(self.top as u64, self.shadow as u64)
    }
}

/// The tight component maximising `e_k / e_{k-1}` of its down-closure
/// (lowest id on ties), or `None` for an edgeless graph.
pub fn densest_component(g: &KGraph) -> Result<Option<DenseComponent>> {
    let labels = tight_components(g);
    let mut best: Option<DenseComponent> = None;
    for c in 0..labels.component_count() {
        let members = labels.members(c);
        let sub = g.with_edges(members.iter());
        let counts = down_closure(&sub)?.level_counts();
        let candidate = DenseComponent {
            component: c,
            top: counts[g.k()],
            shadow: counts[g.k() - 1],
        };
        if best.as_ref().is_none_or(|b| candidate.ratio() > b.ratio()) {
            best = Some(candidate);
        }
    }
    Ok(best)
}

/// `e_k(G*) * C(n, k-1) - e_{k-1}(G*) * e(G)` for the densest component;
/// never negative.
pub fn densest_component_slack(g: &KGraph) -> Result<Rational> {
    let Some(best) = densest_component(g)? else {
        return Ok(int(0));
    };
    let lhs = int(best.top as u64) * int(crate::rational::binomial(g.n(), g.k() - 1));
    let rhs = int(best.shadow as u64) * int(g.edge_count() as u64);
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::down_closure;

    fn complex(n: usize, k: usize, gens: &[&[usize]]) -> Complex {
        Complex::generated_by(n, k, gens.iter().map(|g| g.to_vec())).unwrap()
    }

    #[test]
    fn single_shift() {
        let c = complex(4, 2, &[&[2, 3]]);
        let s = compress_ij(&c, 1, 2).unwrap();
        assert!(s.contains(&[1, 3]) && !s.contains(&[2, 3]));
        assert!(s.is_down_closed());
        let both = complex(4, 2, &[&[2, 3], &[1, 3]]);
        assert_eq!(compress_ij(&both, 1, 2).unwrap(), both);
        let k5 = down_closure(&KGraph::complete(5, 3).unwrap()).unwrap();
        assert_eq!(compress_ij(&k5, 0, 4).unwrap(), k5);
        assert!(compress_ij(&k5, 2, 2).is_err());
        assert!(compress_ij(&k5, 3, 1).is_err());
    }

    #[test]
    fn full_compression() {
        let c = complex(4, 1, &[&[3]]);
        let f = fully_compress(&c);
        assert_eq!(f.level(1).iter().cloned().collect::<Vec<_>>(), vec![vec![0]]);
        let c = complex(4, 2, &[&[2, 3]]);
        let f = fully_compress(&c);
        assert_eq!(f.level(2).iter().cloned().collect::<Vec<_>>(), vec![vec![0, 1]]);
        assert!(is_fully_compressed(&f));
        assert!(!is_fully_compressed(&c));
        let k5 = down_closure(&KGraph::complete(5, 3).unwrap()).unwrap();
        assert_eq!(fully_compress(&k5), k5);
    }

    #[test]
    fn pruning() {
        let k6 = down_closure(&KGraph::complete(6, 3).unwrap()).unwrap();
        assert_eq!(prune_low_degree(&k6, 2).unwrap(), k6);
        let one = complex(6, 3, &[&[0, 1, 2]]);
        assert!(prune_low_degree(&one, 2).unwrap().is_empty());
        let empty = Complex::empty(5, 3);
        assert!(prune_low_degree(&empty, 3).unwrap().is_empty());
        assert!(prune_low_degree(&k6, 0).is_err());
    }

    #[test]
    fn ratio_examples() {
        let k6 = down_closure(&KGraph::complete(6, 3).unwrap()).unwrap();
        let out = ratio_matching(&k6, 2).unwrap();
        assert_eq!(out.matching.edges, vec![vec![0, 2, 4], vec![1, 3, 5]]);
        assert_eq!(out.oracle_nu, Some(2));
        let k5 = down_closure(&KGraph::complete(5, 3).unwrap()).unwrap();
        assert_eq!(ratio_matching(&k5, 2).unwrap_err(), Error::RatioHypothesis { deficit: 1 });
        let out = ratio_matching(&k5, 1).unwrap();
        assert_eq!(out.matching.size(), 1);
    }

    #[test]
    fn densest_component_of_two_blocks() {
        // K_4^(3) on {0..3} and a single edge on {4,5,6}.
        let mut edges: Vec<Edge> = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
        edges.push(vec![4, 5, 6]);
        let g = KGraph::new(3, 7, edges).unwrap();
        let best = densest_component(&g).unwrap().unwrap();
        assert_eq!((best.top, best.shadow), (4, 6));
        assert!(densest_component_slack(&g).unwrap() >= int(0));
        assert_eq!(densest_component(&KGraph::empty(3, 4).unwrap()).unwrap(), None);
    }
}
