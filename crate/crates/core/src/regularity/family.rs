//! Families of partitions in the label model, slices through them, and
//! the slice-taking algorithm with its exact selection probability.
//!
//! Every ground-partite `i`-set (`2 <= i <= k-1`) carries a label in
//! `1..=1/d_i`. The cell of a set is the pair (cells of its `(i-1)`-subsets,
//! own label), so the refinement condition holds by construction and each
//! polyad supports exactly `1/d_i` cells.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hypergraph::{Complex, Edge, GroundPartition};
use crate::rational::{binomial, Rational};

/// Upper limit on the number of slices [`enumerate_slices`] will list.
pub const SLICE_ENUMERATION_CAP: u128 = 1 << 20;

/// Densities `d_2, ..., d_{k-1}`, each the reciprocal of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityVector {
    d: Vec<Rational>,
}

impl DensityVector {
    /// `densities[0]` is `d_2`.
    pub fn new(densities: Vec<Rational>) -> Result<Self> {
        for (i, d) in densities.iter().enumerate() {
            let ok = *d > Rational::from_integer(0.into()) && d.numer().is_one();
            if !ok {
                return Err(Error::Parameter(format!("d_{} = {d} is not 1/m for a positive integer m", i + 2)));
            }
        }
        Ok(Self { d: densities })
    }

    /// All-ones vector for uniformity `k`.
    pub fn trivial(k: usize) -> Self {
        Self {
            d: vec![Rational::one(); k.saturating_sub(2)],
        }
    }

    /// `1 / d_i` repeated, for uniformity `k`.
    pub fn uniform(k: usize, cells: u32) -> Result<Self> {
        Self::new(vec![Rational::new(1.into(), cells.into()); k.saturating_sub(2)])
    }

    /// `d_i` for `2 <= i <= k-1`.
    pub fn get(&self, i: usize) -> &Rational {
        &self.d[i - 2]
    }

    /// `1 / d_i`.
    pub fn cells(&self, i: usize) -> u32 {
        self.get(i).denom().to_u32().unwrap_or(u32::MAX)
    }

    pub fn values(&self) -> &[Rational] {
        &self.d
    }

    /// The `k` this vector is for.
    pub fn uniformity(&self) -> usize {
        self.d.len() + 2
    }
}

impl Serialize for DensityVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.d.iter().map(|d| d.to_string()))
    }
}

fn key(e: &[usize]) -> String {
    e.iter().join(",")
}

struct LabelMaps<'a>(&'a [BTreeMap<Edge, u32>]);

impl Serialize for LabelMaps<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|m| m.iter().map(|(e, v)| (key(e), v)).collect::<BTreeMap<_, _>>()))
    }
}

/// A `(k-1)`-family of partitions on the vertex set of `ground`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionFamily {
    ground: GroundPartition,
    k: usize,
    densities: DensityVector,
    // labels[i - 2]: ground-partite i-set -> label in 1..=1/d_i
    labels: Vec<BTreeMap<Edge, u32>>,
}

pub(crate) fn partite_sets(ground: &GroundPartition, i: usize) -> Vec<Edge> {
    let parts = ground.parts();
    (0..parts.len())
        .combinations(i)
        .flat_map(|clusters| {
            clusters
                .into_iter()
                .map(|c| parts[c].clone())
                .multi_cartesian_product()
                .map(|mut e| {
                    e.sort_unstable();
                    e
                })
                .collect::<Vec<_>>()
        })
        .sorted()
        .collect()
}

impl PartitionFamily {
    /// Labels drawn independently and uniformly, in lexicographic order of
    /// the partite sets at each level.
    pub fn random(ground: GroundPartition, k: usize, densities: DensityVector, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::check_shape(&ground, k, &densities)?;
        let labels = (2..k)
            .map(|i| {
                let cells = densities.cells(i);
                partite_sets(&ground, i)
                    .into_iter()
                    .map(|e| (e, rng.random_range(1..=cells)))
                    .collect()
            })
            .collect();
        Ok(Self {
            ground,
            k,
            densities,
            labels,
        })
    }

    /// Every label equal to one.
    pub fn constant(ground: GroundPartition, k: usize, densities: DensityVector) -> Result<Self> {
        Self::check_shape(&ground, k, &densities)?;
        let labels = (2..k).map(|i| partite_sets(&ground, i).into_iter().map(|e| (e, 1)).collect()).collect();
        Ok(Self {
            ground,
            k,
            densities,
            labels,
        })
    }

    /// Explicit labels; every partite set must be labelled within range.
    pub fn from_labels(
        ground: GroundPartition,
        k: usize,
        densities: DensityVector,
        labels: Vec<BTreeMap<Edge, u32>>,
    ) -> Result<Self> {
        Self::check_shape(&ground, k, &densities)?;
        if labels.len() != k - 2 {
            return Err(Error::Parameter(format!("expected {} label levels, got {}", k - 2, labels.len())));
        }
        for (i, level) in (2..k).zip(&labels) {
            let expected = partite_sets(&ground, i);
            if level.len() != expected.len() || !expected.iter().all(|e| level.contains_key(e)) {
                return Err(Error::Parameter(format!("level {i} labels do not cover the partite {i}-sets")));
            }
            let cells = densities.cells(i);
            if let Some((e, l)) = level.iter().find(|(_, &l)| l == 0 || l > cells) {
                return Err(Error::Parameter(format!("label {l} on {e:?} outside 1..={cells}")));
            }
        }
        Ok(Self {
            ground,
            k,
            densities,
            labels,
        })
    }

    fn check_shape(ground: &GroundPartition, k: usize, densities: &DensityVector) -> Result<()> {
        if k < 3 {
            return Err(Error::Parameter(format!("families need k >= 3, got {k}")));
        }
        if densities.uniformity() != k {
            return Err(Error::Parameter(format!(
                "density vector has {} entries, expected {}",
                densities.values().len(),
                k - 2
            )));
        }
        if !ground.is_equal_size() || ground.part_count() < k {
            return Err(Error::Parameter(format!(
                "need at least k = {k} equal clusters, got sizes {:?}",
                ground.part_sizes()
            )));
        }
        Ok(())
    }

    pub fn ground(&self) -> &GroundPartition {
        &self.ground
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn densities(&self) -> &DensityVector {
        &self.densities
    }

    pub fn cluster_count(&self) -> usize {
        self.ground.part_count()
    }

    pub fn cluster_size(&self) -> usize {
        self.ground.part_sizes()[0]
    }

    pub fn label(&self, set: &[usize]) -> Option<u32> {
        self.labels.get(set.len().checked_sub(2)?)?.get(set).copied()
    }

    pub fn labels(&self) -> &[BTreeMap<Edge, u32>] {
        &self.labels
    }

    /// Interned cell ids: `ids[i][S]` for every partite `i`-set with
    /// `1 <= i <= k-1`. One-cells are the clusters.
    pub fn cell_ids(&self) -> Vec<HashMap<Edge, usize>> {
        let mut ids: Vec<HashMap<Edge, usize>> = vec![HashMap::new(); self.k];
        ids[1] = (0..self.ground.vertex_count()).map(|v| (vec![v], self.ground.part_of(v))).collect();
        for i in 2..self.k {
            let mut intern: HashMap<(Vec<usize>, u32), usize> = HashMap::new();
            let mut level = HashMap::new();
            for (e, &l) in &self.labels[i - 2] {
                let lower: Vec<usize> = e
                    .iter()
                    .combinations(i - 1)
                    .map(|f| ids[i - 1][&f.into_iter().copied().collect::<Edge>()])
                    .collect();
                let next = intern.len();
                let id = *intern.entry((lower, l)).or_insert(next);
                level.insert(e.clone(), id);
            }
            ids[i] = level;
        }
        ids
    }

    /// Checks the refinement condition and that no polyad supports more than
    /// `1/d_i` non-empty cells.
    pub fn audit_cells(&self) -> Result<CellAudit> {
        let ids = self.cell_ids();
        let mut polyads = 0;
        let mut max_cells = 0;
        for i in 2..self.k {
            let mut members: HashMap<usize, Vec<&Edge>> = HashMap::new();
            for (e, &c) in &ids[i] {
                members.entry(c).or_default().push(e);
            }
            // refinement: restrictions of same-cell sets to any index share a cell
            for sets in members.values() {
                let first = sets[0];
                for other in &sets[1..] {
                    for j in 1..i {
                        for pos in (0..i).combinations(j) {
                            let a: Edge = pos.iter().map(|&p| first[p]).collect();
                            let b: Edge = pos.iter().map(|&p| other[p]).collect();
                            if ids[j][&a] != ids[j][&b] {
                                return Err(Error::Consistency(format!(
                                    "{first:?} and {other:?} share a cell but {a:?}, {b:?} do not"
                                )));
                            }
                        }
                    }
                }
            }
            let mut per_polyad: HashMap<Vec<usize>, std::collections::BTreeSet<u32>> = HashMap::new();
            for (e, &l) in &self.labels[i - 2] {
                let lower: Vec<usize> = e
                    .iter()
                    .combinations(i - 1)
                    .map(|f| ids[i - 1][&f.into_iter().copied().collect::<Edge>()])
                    .collect();
                per_polyad.entry(lower).or_default().insert(l);
            }
            let bound = self.densities.cells(i) as usize;
            for used in per_polyad.values() {
                if used.len() > bound {
                    return Err(Error::Consistency(format!("a level-{i} polyad supports {} cells", used.len())));
                }
                max_cells = max_cells.max(used.len());
            }
            polyads += per_polyad.len();
        }
        Ok(CellAudit { polyads, max_cells })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellAudit {
    pub polyads: usize,
    /// Most non-empty cells seen on one polyad; never above `1/d_i`.
    pub max_cells: usize,
}

impl Serialize for PartitionFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PartitionFamily", 4)?;
        st.serialize_field("densities", &self.densities)?;
        st.serialize_field("ground", &self.ground.parts())?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("labels", &LabelMaps(&self.labels))?;
        st.end()
    }
}

/// One cell per set of clusters: `choices[i - 2][A]` is the label chosen
/// for the `i`-set `A` of clusters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slice {
    pub clusters: usize,
    pub k: usize,
    pub choices: Vec<BTreeMap<Edge, u32>>,
}

impl Serialize for Slice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Slice", 3)?;
        st.serialize_field("choices", &LabelMaps(&self.choices))?;
        st.serialize_field("clusters", &self.clusters)?;
        st.serialize_field("k", &self.k)?;
        st.end()
    }
}

/// A slice together with its `(k-1)`-complex.
#[derive(Debug, Clone)]
pub struct MaterializedSlice {
    pub ground: GroundPartition,
    pub k: usize,
    pub densities: DensityVector,
    pub complex: Complex,
}

impl MaterializedSlice {
    pub fn cluster_count(&self) -> usize {
        self.ground.part_count()
    }

    pub fn cluster_size(&self) -> usize {
        self.ground.part_sizes()[0]
    }

    /// The members of the slice with index exactly `clusters`.
    pub fn cells_on(&self, clusters: &[usize]) -> Vec<Edge> {
        self.complex
            .level(clusters.len())
            .iter()
            .filter(|e| self.ground.index(e).as_deref() == Some(clusters))
            .cloned()
            .collect()
    }
}

impl Slice {
    pub fn belongs_to(&self, f: &PartitionFamily) -> Result<()> {
        let foreign = |msg: String| Err(Error::ForeignSlice(msg));
        if self.clusters != f.cluster_count() || self.k != f.k() || self.choices.len() != f.k() - 2 {
            return foreign(format!(
                "slice has {} clusters and k = {}, family has {} and k = {}",
                self.clusters,
                self.k,
                f.cluster_count(),
                f.k()
            ));
        }
        for (i, level) in (2..self.k).zip(&self.choices) {
            let cells = f.densities().cells(i);
            if level.len() as u64 != binomial(self.clusters, i) {
                return foreign(format!("level {i} does not choose a cell for every cluster set"));
            }
            for (a, &l) in level {
                if a.len() != i || a.iter().any(|&c| c >= self.clusters) || a.windows(2).any(|w| w[0] >= w[1]) {
                    return foreign(format!("{a:?} is not an {i}-set of clusters"));
                }
                if l == 0 || l > cells {
                    return foreign(format!("label {l} on {a:?} outside 1..={cells}"));
                }
            }
        }
        Ok(())
    }

    /// Builds the `(k-1)`-complex: empty set, all singletons, and at level
    /// `i` every partite set whose label matches the choice for its index and
    /// whose `(i-1)`-subsets are already present.
    pub fn materialize(&self, f: &PartitionFamily) -> Result<MaterializedSlice> {
        self.belongs_to(f)?;
        let ground = f.ground().clone();
        let n = ground.vertex_count();
        let mut h = crate::hypergraph::Hypergraph::new(n, self.k - 1);
        h.insert(Vec::new())?;
        for v in 0..n {
            h.insert(vec![v])?;
        }
        for i in 2..self.k {
            for (e, &l) in f.labels()[i - 2].iter() {
                let index = ground.index(e).expect("labelled sets are partite");
                if self.choices[i - 2][&index] != l {
                    continue;
                }
                let supported = e.iter().combinations(i - 1).all(|s| h.contains(&s.into_iter().copied().collect::<Edge>()));
                if supported {
                    h.insert(e.clone())?;
                }
            }
        }
        Ok(MaterializedSlice {
            ground,
            k: self.k,
            densities: f.densities().clone(),
            complex: Complex::from_hypergraph(h)?,
        })
    }
}

/// Chooses, for `i = 2, ..., k-1` and each `i`-set of clusters in
/// lexicographic order, a uniform label among the `1/d_i` cells supported
/// on the cells already chosen.
pub fn sample_slice(f: &PartitionFamily, seed: u64) -> Slice {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = f.cluster_count();
    let choices = (2..f.k())
        .map(|i| {
            let cells = f.densities().cells(i);
            (0..t).combinations(i).map(|a| (a, rng.random_range(1..=cells))).collect()
        })
        .collect();
    Slice {
        clusters: t,
        k: f.k(),
        choices,
    }
}

/// Every slice, in lexicographic order of label assignments.
pub fn enumerate_slices(f: &PartitionFamily) -> Result<Vec<Slice>> {
    let t = f.cluster_count();
    let slots: Vec<(usize, Edge)> = (2..f.k()).flat_map(|i| (0..t).combinations(i).map(move |a| (i, a))).collect();
    let count = slots
        .iter()
        .try_fold(1u128, |acc, (i, _)| acc.checked_mul(f.densities().cells(*i) as u128))
        .unwrap_or(u128::MAX);
    if count > SLICE_ENUMERATION_CAP {
        return Err(Error::Capacity {
            what: "slice enumeration",
            needed: count,
            cap: SLICE_ENUMERATION_CAP,
        });
    }
    let slices = slots
        .iter()
        .map(|(i, _)| 1..=f.densities().cells(*i))
        .multi_cartesian_product()
        .map(|labels| {
            let mut choices = vec![BTreeMap::new(); f.k() - 2];
            for ((i, a), l) in slots.iter().zip(labels) {
                choices[i - 2].insert(a.clone(), l);
            }
            Slice {
                clusters: t,
                k: f.k(),
                choices,
            }
        });
    // an empty product still yields the single empty assignment
    let mut out: Vec<Slice> = slices.collect();
    if slots.is_empty() {
        out = vec![Slice {
            clusters: t,
            k: f.k(),
            choices: vec![BTreeMap::new(); f.k() - 2],
        }];
    }
    Ok(out)
}

/// `prod_i d_i^C(t, i)`, the probability that the sampler returns `s`.
pub fn slice_probability(f: &PartitionFamily, s: &Slice) -> Result<Rational> {
    s.belongs_to(f)?;
    let t = f.cluster_count();
    let mut p = Rational::one();
    for i in 2..f.k() {
        let exp = binomial(t, i);
        for _ in 0..exp {
            p *= f.densities().get(i);
        }
    }
    Ok(p)
}
