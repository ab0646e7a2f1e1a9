//! Explicit extremal constructions and seeded random k-graphs.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{down_closure, Complex, Edge, GroundPartition, KGraph};
use crate::matching::matching_number;
use crate::rational::{binomial, int, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstructionSpec {
    Complete { n: usize, k: usize },
    CompletePartite { sizes: Vec<usize>, k: usize },
    /// Edges meeting `A = {0, .., a-1}`.
    Star { n: usize, k: usize, a: usize },
    /// Edges inside `A = {0, .., a-1}` or with at least `r` vertices outside it.
    CliquePlus { n: usize, k: usize, a: usize, r: usize },
    /// `k` parts of `n` vertices, each split into a first block of
    /// `(1 - alpha) n` and a second of `alpha n`; transversals meeting an odd
    /// number of second blocks are edges.
    Parity { n: usize, k: usize, alpha: Rational },
    TightCycle { len: usize, k: usize },
    TightPath { vertices: usize, k: usize },
}

/// The two blocks of one part of the parity construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartHalves {
    pub zero: Vec<usize>,
    pub one: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Construction {
    pub graph: KGraph,
    pub partition: Option<GroundPartition>,
    pub halves: Option<Vec<PartHalves>>,
}

fn need(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Parameter(msg()))
    }
}

fn plain(graph: KGraph) -> Construction {
    Construction {
        graph,
        partition: None,
        halves: None,
    }
}

fn partite_blocks(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut start = 0;
    sizes
        .iter()
        .map(|&s| {
            let block = (start..start + s).collect();
            start += s;
            block
        })
        .collect()
}

pub fn construct(spec: &ConstructionSpec) -> Result<Construction> {
    match spec {
        &ConstructionSpec::Complete { n, k } => Ok(plain(KGraph::complete(n, k)?)),
        ConstructionSpec::CompletePartite { sizes, k } => {
            need(sizes.len() == *k, || format!("{} part sizes given for k = {k}", sizes.len()))?;
            let n = sizes.iter().sum();
            let blocks = partite_blocks(sizes);
            let graph = KGraph::new(*k, n, blocks.iter().map(|b| b.iter().copied()).multi_cartesian_product())?;
            let partition = GroundPartition::from_parts(n, &blocks)?;
            Ok(Construction {
                graph,
                partition: Some(partition),
                halves: None,
            })
        }
        &ConstructionSpec::Star { n, k, a } => {
            need(a <= n, || format!("a = {a} exceeds n = {n}"))?;
            let edges = (0..n).combinations(k).filter(|e| e[0] < a);
            Ok(plain(KGraph::new(k, n, edges)?))
        }
        &ConstructionSpec::CliquePlus { n, k, a, r } => {
            need(a <= n && r <= k, || format!("need a <= n and r <= k, got a = {a}, r = {r}"))?;
            let edges = (0..n).combinations(k).filter(|e| {
                let outside = e.iter().filter(|&&v| v >= a).count();
                outside == 0 || outside >= r
            });
            Ok(plain(KGraph::new(k, n, edges)?))
        }
        ConstructionSpec::Parity { n, k, alpha } => {
            let (n, k) = (*n, *k);
            need(!alpha.is_negative() && *alpha <= int(1), || format!("alpha = {alpha} outside [0,1]"))?;
            let ones = alpha * int(n as u64);
            need(ones.is_integer(), || format!("alpha n = {ones} is not an integer"))?;
            let ones = ones.to_integer().to_usize().unwrap_or(0);
            let blocks = partite_blocks(&vec![n; k]);
            let halves: Vec<PartHalves> = blocks
                .iter()
                .map(|b| PartHalves {
                    zero: b[..n - ones].to_vec(),
                    one: b[n - ones..].to_vec(),
                })
                .collect();
            let edges = blocks
                .iter()
                .map(|b| b.iter().copied())
                .multi_cartesian_product()
                .filter(|e: &Edge| e.iter().filter(|&&v| v % n >= n - ones).count() % 2 == 1);
            let graph = KGraph::new(k, n * k, edges)?;
            Ok(Construction {
                graph,
                partition: Some(GroundPartition::blocks(k, n)),
                halves: Some(halves),
            })
        }
        &ConstructionSpec::TightCycle { len, k } => {
            need(len > k, || format!("a tight cycle needs more than k = {k} vertices, got {len}"))?;
            Ok(plain(KGraph::new(k, len, (0..len).map(|i| (0..k).map(|j| (i + j) % len).collect()))?))
        }
        &ConstructionSpec::TightPath { vertices, k } => {
            need(vertices + 1 >= k, || format!("a tight path needs at least k - 1 vertices, got {vertices}"))?;
            let windows = (vertices + 1).saturating_sub(k);
            Ok(plain(KGraph::new(k, vertices, (0..windows).map(|i| (i..i + k).collect()))?))
        }
    }
}

impl fmt::Display for ConstructionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Complete { n, k } => write!(f, "complete:{n}:{k}"),
            Self::CompletePartite { sizes, .. } => write!(f, "complete-partite:{}", sizes.iter().join(",")),
            Self::Star { n, k, a } => write!(f, "star:{n}:{k}:{a}"),
            Self::CliquePlus { n, k, a, r } => write!(f, "clique-plus:{n}:{k}:{a}:{r}"),
            Self::Parity { n, k, alpha } => write!(f, "parity:{n}:{k}:{alpha}"),
            Self::TightCycle { len, k } => write!(f, "tight-cycle:{len}:{k}"),
            Self::TightPath { vertices, k } => write!(f, "tight-path:{vertices}:{k}"),
        }
    }
}

/// Parses the colon-separated form produced by `Display`, for example
/// `star:6:3:1`, `complete-partite:2,2,2` or `parity:2:3:1/2`.
impl FromStr for ConstructionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fields: Vec<&str> = s.trim().split(':').collect();
        let bad = || Error::Parameter(format!("unrecognised construction {s:?}"));
        let num = |i: usize| -> Result<usize> { fields.get(i).and_then(|x| x.parse().ok()).ok_or_else(bad) };
        let arity = |want: usize| if fields.len() == want + 1 { Ok(()) } else { Err(bad()) };
        let spec = match fields[0] {
            "complete" => {
                arity(2)?;
                Self::Complete { n: num(1)?, k: num(2)? }
            }
            "complete-partite" => {
                arity(1)?;
                let sizes = fields[1]
                    .split(',')
                    .map(|x| x.trim().parse().map_err(|_| bad()))
                    .collect::<Result<Vec<usize>>>()?;
                Self::CompletePartite { k: sizes.len(), sizes }
            }
            "star" => {
                arity(3)?;
                Self::Star { n: num(1)?, k: num(2)?, a: num(3)? }
            }
            "clique-plus" => {
                arity(4)?;
                Self::CliquePlus {
                    n: num(1)?,
                    k: num(2)?,
                    a: num(3)?,
                    r: num(4)?,
                }
            }
            "parity" => {
                arity(3)?;
                Self::Parity {
                    n: num(1)?,
                    k: num(2)?,
                    alpha: parse_rational(fields[3])?,
                }
            }
            "tight-cycle" => {
                arity(2)?;
                Self::TightCycle { len: num(1)?, k: num(2)? }
            }
            "tight-path" => {
                arity(2)?;
                Self::TightPath { vertices: num(1)?, k: num(2)? }
            }
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

/// Each `k`-subset of `0..n` is kept independently with probability `p`,
/// visiting subsets in lexicographic order.
pub fn random_kgraph(n: usize, k: usize, p: f64, seed: u64) -> Result<KGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Parameter(format!("edge probability {p} outside [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    KGraph::new(k, n, (0..n).combinations(k).filter(|_| rng.random_bool(p)))
}

/// Down-closure of `K_{kr-1}^(k)`, checked against
/// `e_k = (r-1) e_{k-1}` and `nu = r - 1`.
pub fn tightness_complex(k: usize, r: usize) -> Result<Complex> {
    if k < 2 || r < 1 {
        return Err(Error::Parameter(format!("need k >= 2 and r >= 1, got k = {k}, r = {r}")));
    }
    let n = k * r - 1;
    let g = KGraph::complete(n, k)?;
    let c = down_closure(&g)?;
    let counts = c.level_counts();
    let (ek, ek1) = (counts[k] as u64, counts.get(k - 1).copied().unwrap_or(0) as u64);
    if ek != binomial(n, k) || ek != (r as u64 - 1) * ek1 {
        return Err(Error::Consistency(format!("e_k = {ek}, e_(k-1) = {ek1} for r = {r}")));
    }
    let (nu, _) = matching_number(&g);
    if nu != r - 1 {
        return Err(Error::Consistency(format!("matching number {nu}, expected {}", r - 1)));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn edges_of(spec: &str) -> usize {
        construct(&spec.parse().unwrap()).unwrap().graph.edge_count()
    }

    #[test]
    fn construction_counts() {
        assert_eq!(edges_of("complete-partite:2,2,2"), 8);
        assert_eq!(edges_of("star:6:3:1"), 10);
        assert_eq!(edges_of("parity:2:3:1/2"), 4);
        assert_eq!(edges_of("tight-cycle:7:3"), 7);
        assert_eq!(edges_of("tight-path:5:3"), 3);
        assert_eq!(edges_of("tight-path:2:3"), 0);
        // checked against a direct count
        let g = construct(&"clique-plus:6:3:3:2".parse().unwrap()).unwrap().graph;
        let direct = (0..6usize)
            .combinations(3)
            .filter(|e| {
                let out = e.iter().filter(|&&v| v >= 3).count();
                out == 0 || out >= 2
            })
            .count();
        assert_eq!(g.edge_count(), direct);
    }

    #[test]
    fn star_closed_form() {
        for n in 3..=12 {
            for a in 0..=n {
                let g = construct(&ConstructionSpec::Star { n, k: 3, a }).unwrap().graph;
                assert_eq!(g.edge_count() as u64, binomial(n, 3) - binomial(n - a, 3));
            }
        }
    }

    #[test]
    fn parity_metadata() {
        let c = construct(&ConstructionSpec::Parity {
            n: 2,
            k: 3,
            alpha: ratio(1, 2),
        })
        .unwrap();
        let halves = c.halves.unwrap();
        assert_eq!(halves[1], PartHalves { zero: vec![2], one: vec![3] });
        assert_eq!(c.partition.unwrap().part_count(), 3);
        assert!(construct(&ConstructionSpec::Parity {
            n: 3,
            k: 3,
            alpha: ratio(1, 2)
        })
        .is_err());
    }

    #[test]
    fn spec_round_trip() {
        for s in ["complete:5:3", "complete-partite:1,2,3", "star:6:3:1", "clique-plus:7:3:4:2", "parity:3:3:1/3", "tight-cycle:6:3", "tight-path:4:3"] {
            assert_eq!(s.parse::<ConstructionSpec>().unwrap().to_string(), s);
        }
        assert!("star:6:3".parse::<ConstructionSpec>().is_err());
        assert!("wheel:6".parse::<ConstructionSpec>().is_err());
        assert!(construct(&"tight-cycle:3:3".parse().unwrap()).is_err());
    }

    #[test]
    fn random_graphs() {
        assert!(random_kgraph(8, 3, 0.0, 1).unwrap().is_empty());
        assert_eq!(random_kgraph(8, 3, 1.0, 1).unwrap().edge_count(), 56);
        assert_eq!(random_kgraph(8, 3, 0.5, 7).unwrap(), random_kgraph(8, 3, 0.5, 7).unwrap());
        assert!(random_kgraph(8, 3, 1.5, 7).is_err());
        // 3 sigma of Binomial(56, 1/2) is about 11.2
        let mean = (0..100).map(|s| random_kgraph(8, 3, 0.5, s).unwrap().edge_count()).sum::<usize>() as f64 / 100.0;
        assert!((mean - 28.0).abs() < 3.0 * (14.0f64).sqrt() / 10.0, "{mean}");
    }

    #[test]
    fn tightness_examples() {
        let c = tightness_complex(3, 2).unwrap();
        assert_eq!(c.level_counts()[2..], [10, 10]);
        let c = tightness_complex(3, 1).unwrap();
        assert_eq!(c.level(3).len(), 0);
        let c = tightness_complex(3, 3).unwrap();
        assert_eq!(c.level_counts()[2..], [28, 56]);
    }
}
