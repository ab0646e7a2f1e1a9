use std::path::Path;

use hyperslice::compression::{densest_component, fully_compress_counting, is_fully_compressed, ratio_matching};
use hyperslice::generators::{construct, random_kgraph, tightness_complex, ConstructionSpec};
use hyperslice::hypergraph::{down_closure, local_lym_margin, Edge};
use hyperslice::khg::{parse_khg, write_khg};
use hyperslice::matching::{certify_optimal, matching_number, max_fractional_matching};
use hyperslice::rational::{binomial, int, parse_rational, ratio_or_zero, Rational};
use hyperslice::regularity::family::{
    enumerate_slices, sample_slice, slice_probability, DensityVector, PartitionFamily, SLICE_ENUMERATION_CAP,
};
use hyperslice::regularity::reduced::{
    reduced_entropy, slice_quality_report, weighted_reduced, RegularityParams, RootQuery,
};
use hyperslice::tight::{search_tight, tight_components, verify_tight, SearchConfig, SearchGoal, SearchOutcome, TightWalk};
use hyperslice::{Error, GroundPartition, KGraph};
use itertools::Itertools;
use num_traits::{One, ToPrimitive};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::report::{Cell, Report};
use crate::CliError;

/// What a command produced, and whether a search budget ran out on the way.
pub struct Outcome {
    pub report: Report,
    pub budget_exhausted: bool,
}

impl Outcome {
    fn done(report: Report) -> Self {
        Self {
            report,
            budget_exhausted: false,
        }
    }
}

/// Sub-seed number `counter` of stream `stream`, drawn from the ChaCha8
/// keystream of `master`, so every sub-experiment can be rerun on its own.
pub fn split_seed(master: u64, stream: u64, counter: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng.set_word_pos(u128::from(counter) * 2);
    rng.next_u64()
}

pub fn read_graph(path: &Path) -> Result<KGraph, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_khg(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn edges_json<'a>(edges: impl IntoIterator<Item = &'a Edge>) -> Value {
    Value::from(edges.into_iter().map(|e| Value::from(e.clone())).collect::<Vec<_>>())
}

fn walk_json(w: &TightWalk) -> Value {
    json!({ "cyclic": w.is_cyclic(), "length": w.length(), "vertices": w.vertices() })
}

fn rational_map(weights: impl IntoIterator<Item = (String, Rational)>) -> Value {
    Value::Object(weights.into_iter().map(|(k, w)| (k, Value::from(w.to_string()))).collect())
}

/// Clusters `{v : v mod t = c}`, when `t` divides `n` and `t >= k`.
fn modular_clusters(n: usize, t: usize, k: usize) -> Option<GroundPartition> {
    if t < k || t == 0 || !n.is_multiple_of(t) {
        return None;
    }
    GroundPartition::new(t, (0..n).map(|v| v % t).collect(), true).ok()
}

pub fn analyze(g: &KGraph, clusters: Option<usize>) -> Result<Outcome, CliError> {
    let labels = tight_components(g);
    let (nu, matching) = matching_number(g);
    let fractional = max_fractional_matching(g, None)?;
    certify_optimal(g, &fractional.matching, &fractional.cover)?;
    let closure = down_closure(g)?;
    let lym: Vec<Value> = (1..=g.k())
        .map(|i| local_lym_margin(&closure, i).map(|m| Value::from(m.to_string())))
        .collect::<Result<_, _>>()?;
    let densest = match densest_component(g)? {
        Some(d) => json!({
            "component": d.component,
            "ratio": d.ratio().to_string(),
            "shadow": d.shadow,
            "top": d.top,
        }),
        None => Value::Null,
    };
    let t = clusters.unwrap_or(g.k());
    let reduced = match (g.k() >= 3, modular_clusters(g.n(), t, g.k())) {
        (true, Some(ground)) => {
            let family = PartitionFamily::constant(ground, g.k(), DensityVector::trivial(g.k()))?;
            let slice = sample_slice(&family, 0).materialize(&family)?;
            let r = weighted_reduced(g, &slice)?;
            json!({
                "clusters": t,
                "entropy": hyperslice::rational::format_decimal(reduced_entropy(&r)),
                "weights": rational_map(r.weights.iter().map(|(e, w)| (e.iter().join(","), w.clone()))),
            })
        }
        _ => Value::Null,
    };
    let frac_weight = fractional.matching.weight();
    Ok(Outcome::done(Report::Doc(json!({
        "components": labels.component_count(),
        "component_sizes": labels.sizes(),
        "densest_component": densest,
        "edges": g.edge_count(),
        "fractional": {
            "cover": fractional.cover.y.iter().map(|y| y.to_string()).collect::<Vec<_>>(),
            "perfect": fractional.matching.is_perfect(g.n(), g.k()),
            "weight": frac_weight.to_string(),
            "weights": serde_json::to_value(&fractional.matching).expect("serializable"),
        },
        "k": g.k(),
        "lym_margins": lym,
        "matching": edges_json(&matching.edges),
        "n": g.n(),
        "nu": nu,
        "reduced": reduced,
    }))))
}

pub fn search(g: &KGraph, goal: SearchGoal, budget: u64) -> Result<Outcome, CliError> {
    let outcome = search_tight(g, goal, SearchConfig { budget, min_cycle_len: None });
    let cyclic = !matches!(goal, SearchGoal::LongestPath);
    if let Some(w) = outcome.witness() {
        verify_tight(w.vertices(), g, cyclic, true)
            .map_err(|v| CliError::Violated(format!("search returned an invalid witness: {v:?}")))?;
    }
    let (status, witness) = match &outcome {
        SearchOutcome::Found(w) => ("found", walk_json(w)),
        SearchOutcome::ExhaustiveNegative => ("exhaustive_negative", Value::Null),
        SearchOutcome::BudgetExhausted { best } => ("budget_exhausted", best.as_ref().map_or(Value::Null, walk_json)),
    };
    let goal_json = match goal {
        SearchGoal::Cycle(l) => json!({ "cycle": l }),
        SearchGoal::LongestCycle => json!("longest_cycle"),
        SearchGoal::LongestPath => json!("longest_path"),
    };
    Ok(Outcome {
        report: Report::Doc(json!({ "budget": budget, "goal": goal_json, "status": status, "witness": witness })),
        budget_exhausted: matches!(outcome, SearchOutcome::BudgetExhausted { .. }),
    })
}

/// Grid `lo, lo + step, ...` up to and including `hi`, as exact rationals.
pub fn parse_grid(s: &str) -> Result<Vec<Rational>, CliError> {
    let bad = || CliError::Input(format!("grid {s:?} is not lo:hi:step with lo <= hi and step > 0"));
    let parts: Vec<&str> = s.split(':').collect();
    let nums = match parts.as_slice() {
        [single] => vec![parse_rational(single).map_err(|_| bad())?],
        [lo, hi, step] => {
            let (lo, hi, step) = (
                parse_rational(lo).map_err(|_| bad())?,
                parse_rational(hi).map_err(|_| bad())?,
                parse_rational(step).map_err(|_| bad())?,
            );
            if lo > hi || step <= Rational::from_integer(0.into()) {
                return Err(bad());
            }
            let mut out = Vec::new();
            let mut x = lo;
            while x <= hi {
                out.push(x.clone());
                x += &step;
            }
            out
        }
        _ => return Err(bad()),
    };
    if nums.iter().any(|p| *p < int(0) || *p > Rational::one()) {
        return Err(CliError::Input(format!("grid {s:?} leaves [0, 1]")));
    }
    Ok(nums)
}

struct CycleResult {
    length: usize,
    exhausted: bool,
}

fn longest_cycle(g: &KGraph, budget: u64) -> Result<CycleResult, CliError> {
    let outcome = search_tight(g, SearchGoal::LongestCycle, SearchConfig { budget, min_cycle_len: None });
    if let Some(w) = outcome.witness() {
        verify_tight(w.vertices(), g, true, true)
            .map_err(|v| CliError::Violated(format!("cycle witness failed re-validation: {v:?}")))?;
    }
    let length = outcome.witness().map_or(0, |w| w.vertices().len());
    if length > g.n() {
        return Err(CliError::Violated(format!("cycle on {length} vertices in a graph on {}", g.n())));
    }
    Ok(CycleResult {
        length,
        exhausted: matches!(outcome, SearchOutcome::BudgetExhausted { .. }),
    })
}

fn to_prob(p: &Rational) -> f64 {
    p.to_f64().unwrap_or(0.0)
}

pub struct SweepArgs {
    pub grid: Vec<Rational>,
    pub trials: u64,
    pub seed: u64,
    pub budget: u64,
}

fn run_grid<F>(args: &SweepArgs, header: Vec<&'static str>, cell: F) -> Result<Outcome, CliError>
where
    F: Fn(&Rational, u64) -> Result<(Vec<Cell>, bool), CliError> + Sync,
{
    let jobs: Vec<(usize, u64)> = (0..args.grid.len()).cartesian_product(0..args.trials).collect();
    let mut rows: Vec<((usize, u64), Vec<Cell>, bool)> = jobs
        .par_iter()
        .map(|&(i, trial)| {
            let seed = split_seed(args.seed, i as u64, trial);
            cell(&args.grid[i], seed).map(|(row, ex)| ((i, trial), row, ex))
        })
        .collect::<Result<_, _>>()?;
    rows.sort_by_key(|(key, _, _)| *key);
    let budget_exhausted = rows.iter().any(|(_, _, ex)| *ex);
    Ok(Outcome {
        report: Report::Table {
            header,
            rows: rows.into_iter().map(|(_, row, _)| row).collect(),
        },
        budget_exhausted,
    })
}

/// Random k-graphs on `n` vertices; the longest tight cycle per draw.
pub fn sweep_eg(n: usize, k: usize, args: &SweepArgs) -> Result<Outcome, CliError> {
    if k == 0 || k > n {
        return Err(CliError::Input(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    run_grid(args, vec!["p", "seed", "edges", "longest_cycle"], |p, seed| {
        let g = random_kgraph(n, k, to_prob(p), seed)?;
        let c = longest_cycle(&g, args.budget)?;
        Ok((
            vec![Cell::Rat(p.clone()), Cell::Text(seed.to_string()), Cell::Int(g.edge_count() as i64), Cell::Int(c.length as i64)],
            c.exhausted,
        ))
    })
}

/// Random k-partite k-graphs with parts of size `t`: the minimum partite
/// codegree, its share of `t`, and the longest tight cycle.
pub fn sweep_partite(t: usize, k: usize, args: &SweepArgs) -> Result<Outcome, CliError> {
    if k < 2 || t == 0 {
        return Err(CliError::Input(format!("need k >= 2 and t >= 1, got k = {k}, t = {t}")));
    }
    let ground = GroundPartition::blocks(k, t);
    let parts = ground.parts();
    run_grid(args, vec!["p", "seed", "edges", "min_codegree", "alpha", "longest_cycle"], |p, seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let prob = to_prob(p);
        let edges: Vec<Edge> = parts
            .iter()
            .map(|part| part.iter().copied())
            .multi_cartesian_product()
            .filter(|_| rng.random_bool(prob))
            .collect();
        let g = KGraph::new(k, k * t, edges)?;
        let mut min_codegree = usize::MAX;
        for missing in 0..k {
            let others: Vec<&Vec<usize>> = parts.iter().enumerate().filter(|(j, _)| *j != missing).map(|(_, p)| p).collect();
            for s in others.iter().map(|p| p.iter().copied()).multi_cartesian_product() {
                let count = parts[missing]
                    .iter()
                    .filter(|&&v| {
                        let mut e = s.clone();
                        e.push(v);
                        e.sort_unstable();
                        g.contains(&e)
                    })
                    .count();
                min_codegree = min_codegree.min(count);
            }
        }
        let c = longest_cycle(&g, args.budget)?;
        Ok((
            vec![
                Cell::Rat(p.clone()),
                Cell::Text(seed.to_string()),
                Cell::Int(g.edge_count() as i64),
                Cell::Int(min_codegree as i64),
                Cell::Rat(ratio_or_zero(min_codegree as u64, t as u64)),
                Cell::Int(c.length as i64),
            ],
            c.exhausted,
        ))
    })
}

pub struct SliceArgs {
    pub t: usize,
    pub k: usize,
    pub m: usize,
    pub cells: Vec<u32>,
    pub samples: u64,
    pub seed: u64,
    pub graph: Option<KGraph>,
    pub p: f64,
    pub d: Rational,
    pub eps: Rational,
}

pub fn slice_stats(a: &SliceArgs) -> Result<Outcome, CliError> {
    if a.cells.len() + 2 != a.k {
        return Err(CliError::Input(format!("--cells needs k - 2 = {} entries", a.k.saturating_sub(2))));
    }
    let densities = DensityVector::new(a.cells.iter().map(|&c| ratio_or_zero(1, u64::from(c))).collect())?;
    let ground = GroundPartition::blocks(a.t, a.m);
    let family = PartitionFamily::random(ground, a.k, densities.clone(), split_seed(a.seed, 0, 0))?;
    let mut expected = Rational::one();
    for i in 2..a.k {
        for _ in 0..binomial(a.t, i) {
            expected *= densities.get(i);
        }
    }

    // counts[level][cluster set][label - 1]
    let mut counts: Vec<std::collections::BTreeMap<Edge, Vec<u64>>> = vec![Default::default(); a.k - 2];
    let mut mismatches = 0u64;
    let mut first = None;
    for i in 0..a.samples {
        let s = sample_slice(&family, split_seed(a.seed, 1, i));
        if slice_probability(&family, &s)? != expected {
            mismatches += 1;
        }
        for (lvl, level) in s.choices.iter().enumerate() {
            let cells = densities.cells(lvl + 2) as usize;
            for (set, &l) in level {
                counts[lvl].entry(set.clone()).or_insert_with(|| vec![0; cells])[l as usize - 1] += 1;
            }
        }
        first.get_or_insert(s);
    }
    let mut worst_sigma = 0.0f64;
    for (lvl, level) in counts.iter().enumerate() {
        let q = 1.0 / f64::from(densities.cells(lvl + 2));
        let sigma = (q * (1.0 - q) / a.samples as f64).sqrt();
        for c in level.values().flatten() {
            if sigma > 0.0 {
                worst_sigma = worst_sigma.max((*c as f64 / a.samples as f64 - q).abs() / sigma);
            }
        }
    }
    let enumeration = match enumerate_slices(&family) {
        Ok(all) => {
            let total: Rational = all.iter().map(|s| slice_probability(&family, s)).sum::<Result<Rational, Error>>()?;
            json!({ "slices": all.len(), "total_probability": total.to_string() })
        }
        Err(Error::Capacity { .. }) => json!({ "skipped": format!("more than {SLICE_ENUMERATION_CAP} slices") }),
        Err(e) => return Err(e.into()),
    };

    let quality = match &first {
        Some(s) => {
            let slice = s.materialize(&family)?;
            let n = a.t * a.m;
            let g = match &a.graph {
                Some(g) => g.clone(),
                None => random_kgraph(n, a.k, a.p, split_seed(a.seed, 2, 0))?,
            };
            let params = RegularityParams {
                seed: split_seed(a.seed, 3, 0),
                ..RegularityParams::new(a.d.clone(), a.eps.clone(), a.eps.clone(), 1)?
            };
            let edge = KGraph::new(a.k, a.k, [(0..a.k).collect::<Edge>()])?;
            let roots = vec![RootQuery {
                h: edge.clone(),
                roots: vec![0],
                targets: vec![0],
            }];
            let x: Vec<usize> = (0..a.t).collect();
            let report = slice_quality_report(&g, &slice, &params, &[edge], &x, &roots)?;
            serde_json::to_value(&report).expect("serializable")
        }
        None => Value::Null,
    };
    Ok(Outcome::done(Report::Doc(json!({
        "clusters": a.t,
        "cluster_size": a.m,
        "densities": serde_json::to_value(&densities).expect("serializable"),
        "enumeration": enumeration,
        "expected_probability": expected.to_string(),
        "k": a.k,
        "label_frequency_max_sigma": hyperslice::rational::format_decimal(worst_sigma),
        "probability_mismatches": mismatches,
        "quality": quality,
        "samples": a.samples,
    }))))
}

pub fn compress(g: &KGraph, r: Option<usize>) -> Result<Outcome, CliError> {
    let c = down_closure(g)?;
    let before = c.level_counts();
    let doc = match r {
        Some(r) => {
            let out = ratio_matching(&c, r)?;
            json!({
                "compressed_counts": out.compressed.level_counts(),
                "counts": before,
                "matching": edges_json(&out.matching.edges),
                "oracle_nu": out.oracle_nu,
                "r": r,
                "trace": serde_json::to_value(&out.trace).expect("serializable"),
            })
        }
        None => {
            let (f, moved) = fully_compress_counting(&c);
            if f.level_counts() != before || !is_fully_compressed(&f) {
                return Err(CliError::Violated("compression changed level sizes or did not reach a fixpoint".into()));
            }
            json!({
                "compressed_counts": f.level_counts(),
                "counts": before,
                "moved": moved,
                "top": edges_json(f.level(g.k())),
            })
        }
    };
    Ok(Outcome::done(Report::Doc(doc)))
}

/// A named construction or `random:n:k:p:seed`.
pub fn generate(spec: &str) -> Result<(KGraph, String), CliError> {
    if let Some(rest) = spec.strip_prefix("random:") {
        let f: Vec<&str> = rest.split(':').collect();
        let bad = || CliError::Input(format!("expected random:n:k:p:seed, got {spec:?}"));
        if f.len() != 4 {
            return Err(bad());
        }
        let n = f[0].parse().map_err(|_| bad())?;
        let k = f[1].parse().map_err(|_| bad())?;
        let p = parse_rational(f[2]).map_err(|_| bad())?;
        let seed = f[3].parse().map_err(|_| bad())?;
        let g = random_kgraph(n, k, to_prob(&p), seed)?;
        return Ok((g, format!("random:{n}:{k}:{p}:{seed}")));
    }
    let parsed: ConstructionSpec = spec.parse().map_err(|e: Error| CliError::Input(e.to_string()))?;
    Ok((construct(&parsed)?.graph, parsed.to_string()))
}

pub fn gen_text(spec: &str) -> Result<String, CliError> {
    let (g, canonical) = generate(spec)?;
    Ok(write_khg(&g, Some(&format!("hyperslice gen {canonical}"))))
}

pub const BUNDLED: [(&str, &str); 4] = [
    ("c6.khg", include_str!("../fixtures/c6.khg")),
    ("k4.khg", include_str!("../fixtures/k4.khg")),
    ("star-7-3-1.khg", include_str!("../fixtures/star-7-3-1.khg")),
    ("partite-2-2-2.khg", include_str!("../fixtures/partite-2-2-2.khg")),
];

fn check(map: &mut Map<String, Value>, name: &str, result: Result<(), String>) {
    let v = match result {
        Ok(()) => "pass".to_string(),
        Err(e) => format!("fail: {e}"),
    };
    map.insert(name.to_string(), Value::from(v));
}

fn fixture_checks(text: &str) -> Map<String, Value> {
    let mut out = Map::new();
    let g = match parse_khg(text) {
        Ok(g) => g,
        Err(e) => {
            check(&mut out, "parse", Err(e.to_string()));
            return out;
        }
    };
    check(&mut out, "round_trip", {
        let again = parse_khg(&write_khg(&g, None)).map_err(|e| e.to_string());
        again.and_then(|h| if h == g { Ok(()) } else { Err("graph changed".into()) })
    });
    let (nu, _) = matching_number(&g);
    check(&mut out, "lp_certificate", {
        max_fractional_matching(&g, None).map_err(|e| e.to_string()).and_then(|s| {
            certify_optimal(&g, &s.matching, &s.cover).map_err(|e| e.to_string())?;
            if int(nu as u64) <= s.matching.weight() {
                Ok(())
            } else {
                Err(format!("nu = {nu} exceeds the fractional optimum"))
            }
        })
    });
    check(&mut out, "compression", {
        down_closure(&g).map_err(|e| e.to_string()).and_then(|c| {
            let (f, _) = fully_compress_counting(&c);
            let top = f.level_graph(g.k()).map_err(|e| e.to_string())?;
            if f.level_counts() != c.level_counts() {
                Err("level sizes changed".into())
            } else if !is_fully_compressed(&f) {
                Err("not a fixpoint".into())
            } else if matching_number(&top).0 > nu {
                Err("matching number grew".into())
            } else {
                Ok(())
            }
        })
    });
    check(&mut out, "local_lym", {
        down_closure(&g).map_err(|e| e.to_string()).and_then(|c| {
            for i in 1..=g.k() {
                let m = local_lym_margin(&c, i).map_err(|e| e.to_string())?;
                if m < int(0) {
                    return Err(format!("margin {m} at level {i}"));
                }
            }
            Ok(())
        })
    });
    check(&mut out, "densest_component", {
        hyperslice::compression::densest_component_slack(&g)
            .map_err(|e| e.to_string())
            .and_then(|s| if s >= int(0) { Ok(()) } else { Err(format!("slack {s}")) })
    });
    out
}

fn global_checks() -> Map<String, Value> {
    let mut out = Map::new();
    check(&mut out, "tightness_complex", {
        (1..=3).try_for_each(|r| {
            let c = tightness_complex(3, r).map_err(|e| e.to_string())?;
            let counts = c.level_counts();
            let (nu, _) = matching_number(&c.level_graph(3).map_err(|e| e.to_string())?);
            if counts[3] == (r - 1) * counts[2] && nu == r - 1 {
                Ok(())
            } else {
                Err(format!("r = {r}: counts {counts:?}, nu = {nu}"))
            }
        })
    });
    check(&mut out, "slice_probabilities", {
        let run = || -> Result<(), Error> {
            let f = PartitionFamily::random(GroundPartition::blocks(3, 2), 3, DensityVector::uniform(3, 2)?, 0)?;
            let total: Rational = enumerate_slices(&f)?.iter().map(|s| slice_probability(&f, s)).sum::<Result<_, _>>()?;
            if total == Rational::one() {
                Ok(())
            } else {
                Err(Error::Consistency(format!("total {total}")))
            }
        };
        run().map_err(|e| e.to_string())
    });
    out
}

/// Runs the invariant checks on the bundled fixtures and any `.khg` files
/// in `dir`.
pub fn verify(dir: Option<&Path>) -> Result<Outcome, CliError> {
    let mut fixtures: Vec<(String, String)> = BUNDLED.iter().map(|(n, t)| (n.to_string(), t.to_string())).collect();
    if let Some(dir) = dir {
        let entries = std::fs::read_dir(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        let mut paths: Vec<_> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "khg"))
            .collect();
        paths.sort();
        for p in paths {
            let text = std::fs::read_to_string(&p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            fixtures.push((p.display().to_string(), text));
        }
    }
    let mut results = Map::new();
    for (name, text) in &fixtures {
        results.insert(name.clone(), Value::Object(fixture_checks(text)));
    }
    let global = global_checks();
    let failed = results
        .values()
        .flat_map(|v| v.as_object().expect("objects").values())
        .chain(global.values())
        .filter(|v| v.as_str() != Some("pass"))
        .count();
    let doc = json!({ "failed": failed, "fixtures": results, "global": global, "passed": failed == 0 });
    if failed > 0 {
        return Err(CliError::Report(Report::Doc(doc), format!("{failed} checks failed")));
    }
    Ok(Outcome::done(Report::Doc(doc)))
}
