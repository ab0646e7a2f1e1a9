//! Random refinement of a family of partitions and the density test for
//! random subsets of one part.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num_traits::Signed;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, GroundPartition, KGraph};
use crate::rational::{ratio_or_zero, to_f64, Rational};
use crate::regularity::family::{partite_sets, PartitionFamily};

/// Splits every cluster of `f` uniformly at random into `p` equal parts.
/// Cluster `c` becomes clusters `c*p .. c*p + p`. Sets partite for the old
/// clusters keep their labels; the remaining partite sets get uniform
/// labels.
pub fn random_refinement(f: &PartitionFamily, p: usize, seed: u64) -> Result<PartitionFamily> {
    let m = f.cluster_size();
    if p == 0 || !m.is_multiple_of(p) {
        return Err(Error::Parameter(format!("cluster size {m} is not divisible by p = {p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = f.ground().vertex_count();
    let mut assignment = vec![0; n];
    for (c, part) in f.ground().parts().iter().enumerate() {
        let mut members = part.clone();
        members.shuffle(&mut rng);
        for (chunk, vs) in members.chunks(m / p).enumerate() {
            for &v in vs {
                assignment[v] = c * p + chunk;
            }
        }
    }
    let ground = GroundPartition::new(f.cluster_count() * p, assignment, true)?;
    let labels = (2..f.k())
        .map(|i| {
            let cells = f.densities().cells(i);
            partite_sets(&ground, i)
                .into_iter()
                .map(|e| {
                    let l = f.label(&e).unwrap_or_else(|| rng.random_range(1..=cells));
                    (e, l)
                })
                .collect::<BTreeMap<Edge, u32>>()
        })
        .collect();
    PartitionFamily::from_labels(ground, f.k(), f.densities().clone(), labels)
}

/// Whether every cell of `fine` on sets partite for `coarse` is the
/// restriction of one cell of `coarse` to the clusters of `fine` it spans.
pub fn generated_from_check(fine: &PartitionFamily, coarse: &PartitionFamily) -> Result<bool> {
    let (fg, cg) = (fine.ground(), coarse.ground());
    if fine.k() != coarse.k() || fg.vertex_count() != cg.vertex_count() {
        return Err(Error::InvalidQuery("families differ in k or vertex count".into()));
    }
    let nested = (0..fg.vertex_count())
        .into_group_map_by(|&v| fg.part_of(v))
        .values()
        .all(|vs| vs.iter().map(|&v| cg.part_of(v)).all_equal());
    if !nested {
        return Ok(false);
    }
    let fine_ids = fine.cell_ids();
    let coarse_ids = coarse.cell_ids();
    for i in 1..fine.k() {
        // fine cell -> coarse cell of its coarse-partite members
        let mut image: HashMap<usize, usize> = HashMap::new();
        // (coarse cell, fine index) -> fine cell
        let mut back: HashMap<(usize, Edge), usize> = HashMap::new();
        for (e, &fc) in &fine_ids[i] {
            let Some(&cc) = coarse_ids[i].get(e) else {
                continue;
            };
            if *image.entry(fc).or_insert(cc) != cc {
                return Ok(false);
            }
            let index = fg.index(e).expect("fine cells are fine-partite");
            if *back.entry((cc, index)).or_insert(fc) != fc {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of repeatedly sampling `B' = B[V', V_2, ..., V_s]` for random
/// `V' ⊆ V_1` of size `|V_1|/p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetDensityStats {
    pub trials: u64,
    pub successes: u64,
    pub frequency: f64,
    /// `1 - (4/delta) exp(-delta^4 |V_1| / (32 p^2))`; may be negative.
    pub bound: f64,
    /// Binomial standard deviation of the frequency at `max(bound, 0)`.
    pub sigma: f64,
    pub passes: bool,
}

/// `e(B) / (|V_1| ... |V_s|)`.
pub fn partite_density(b: &KGraph, parts: &[Vec<usize>]) -> Rational {
    let cells: u64 = parts.iter().map(|p| p.len() as u64).product();
    let mut part = vec![usize::MAX; b.n()];
    for (i, p) in parts.iter().enumerate() {
        for &v in p {
            part[v] = i;
        }
    }
    let hits = b
        .edges()
        .filter(|e| {
            let mut seen = vec![false; parts.len()];
            e.iter().all(|&v| {
                let i = part[v];
                i != usize::MAX && !std::mem::replace(&mut seen[i], true)
            })
        })
        .count();
    ratio_or_zero(hits as u64, cells)
}

pub fn subset_density_test(
    b: &KGraph,
    parts: &[Vec<usize>],
    p: usize,
    delta: &Rational,
    trials: u64,
    seed: u64,
) -> Result<SubsetDensityStats> {
    if parts.len() != b.k() || parts.is_empty() {
        return Err(Error::InvalidQuery(format!("B is {}-uniform but {} parts were given", b.k(), parts.len())));
    }
    let v1 = parts[0].len();
    if p == 0 || !v1.is_multiple_of(p) {
        return Err(Error::Parameter(format!("|V_1| = {v1} is not divisible by p = {p}")));
    }
    if !delta.is_positive() {
        return Err(Error::Parameter("delta must be positive".into()));
    }
    let full = partite_density(b, parts);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut successes = 0;
    let mut sub = parts.to_vec();
    for _ in 0..trials {
        sub[0] = parts[0].choose_multiple(&mut rng, v1 / p).copied().collect();
        if (partite_density(b, &sub) - &full).abs() <= *delta {
            successes += 1;
        }
    }
    let d = to_f64(delta);
    let bound = 1.0 - (4.0 / d) * (-(d.powi(4)) * v1 as f64 / (32.0 * (p * p) as f64)).exp();
    let q = bound.clamp(0.0, 1.0);
    let sigma = if trials == 0 { 0.0 } else { (q * (1.0 - q) / trials as f64).sqrt() };
    let frequency = if trials == 0 { 1.0 } else { successes as f64 / trials as f64 };
    Ok(SubsetDensityStats {
        trials,
        successes,
        frequency,
        bound,
        sigma,
        passes: frequency >= bound - 3.0 * sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::random_kgraph;
    use crate::rational::{int, ratio};
    use crate::regularity::family::DensityVector;

    fn family(seed: u64) -> PartitionFamily {
        PartitionFamily::random(GroundPartition::blocks(3, 4), 3, DensityVector::uniform(3, 2).unwrap(), seed).unwrap()
    }

    #[test]
    fn identity_refinement() {
        let f = family(3);
        let same = random_refinement(&f, 1, 9).unwrap();
        assert_eq!(same, f);
        assert!(generated_from_check(&same, &f).unwrap());
    }

    #[test]
    fn refinements_are_generated_from_the_original() {
        let f = family(5);
        for seed in 0..5 {
            let g = random_refinement(&f, 2, seed).unwrap();
            assert_eq!(g.cluster_count(), 6);
            assert_eq!(g.cluster_size(), 2);
            assert!(generated_from_check(&g, &f).unwrap());
            g.audit_cells().unwrap();
        }
        assert!(random_refinement(&f, 3, 0).is_err());
    }

    #[test]
    fn relabelled_refinement_is_not_generated() {
        let f = family(5);
        let fine = random_refinement(&f, 2, 0).unwrap();
        let mut labels = fine.labels().to_vec();
        let (e, l) = labels[0].iter().find(|(e, _)| f.label(e).is_some()).map(|(e, &l)| (e.clone(), l)).unwrap();
        labels[0].insert(e, 3 - l);
        let tampered = PartitionFamily::from_labels(fine.ground().clone(), 3, fine.densities().clone(), labels).unwrap();
        assert!(!generated_from_check(&tampered, &f).unwrap());
    }

    #[test]
    fn complete_bipartite_density_is_stable() {
        let parts = vec![(0..8).collect::<Vec<_>>(), (8..16).collect()];
        let b = KGraph::new(2, 16, parts[0].iter().flat_map(|&a| parts[1].iter().map(move |&c| vec![a, c]))).unwrap();
        let s = subset_density_test(&b, &parts, 2, &ratio(1, 10), 50, 1).unwrap();
        assert_eq!(s.successes, 50);
        assert!(s.passes);
        assert_eq!(partite_density(&b, &parts), int(1));
    }

    #[test]
    fn random_bipartite_reports_bound() {
        let parts = vec![(0..64).collect::<Vec<_>>(), (64..128).collect()];
        let g = random_kgraph(128, 2, 0.5, 4).unwrap();
        let edges: Vec<Edge> = g.edges().filter(|e| e[0] < 64 && e[1] >= 64).cloned().collect();
        let b = KGraph::new(2, 128, edges).unwrap();
        let s = subset_density_test(&b, &parts, 2, &ratio(1, 5), 2000, 7).unwrap();
        assert!(s.bound < 0.0);
        assert!(s.passes);
        assert!(s.frequency > 0.9);
    }
}
