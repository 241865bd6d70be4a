//! Cross-checks the flow-based `v`-rank against path-system enumeration and
//! the numeric rank of the path matrix block, over every mixed graph on a
//! few vertices and over sampled larger ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::admg::{GraphDoc, MixedGraph};
use crate::error::{Error, Result};
use crate::ident::{build_flow_network_with_split_capacity, max_flow, removable_ancestors};
use crate::oracle::{brute_force_v_rank, numeric_rank, path_matrix, random_params, GENERIC_DRAWS};
use crate::simulate::random_admg;

/// Largest graph the exhaustive sweep covers.
pub const EXHAUSTIVE_LIMIT: usize = 4;
pub const MAX_VERTICES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub max_vertices: usize,
    /// Graphs sampled per size above [`EXHAUSTIVE_LIMIT`].
    pub samples: usize,
    pub seed: u64,
    /// Split-arc capacity handed to the flow construction; 1 is correct.
    pub split_capacity: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { max_vertices: 5, samples: 1000, seed: 0, split_capacity: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub graph: GraphDoc,
    pub vertex: String,
    pub q: Vec<String>,
    pub flow: usize,
    pub path_systems: usize,
    pub numeric: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub graphs: usize,
    pub checks: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn mode(values: &[usize]) -> usize {
    let mut best = (0, usize::MAX);
    for &x in values {
        let count = values.iter().filter(|&&y| y == x).count();
        if count > best.0 || (count == best.0 && x < best.1) {
            best = (count, x);
        }
    }
    best.1
}

/// Every ADMG on `p` labelled vertices: each pair is empty, `u→v` or `v→u`,
/// with or without `u↔v`, keeping only acyclic directed parts.
pub fn all_admgs(p: usize) -> impl Iterator<Item = MixedGraph> {
    let pairs: Vec<(usize, usize)> = (0..p).flat_map(|u| (u + 1..p).map(move |v| (u, v))).collect();
    let total = 6usize.pow(pairs.len() as u32);
    (0..total).filter_map(move |mut code| {
        let (mut directed, mut bidirected) = (Vec::new(), Vec::new());
        for &(u, v) in &pairs {
            let state = code % 6;
            code /= 6;
            match state % 3 {
                1 => directed.push((u, v)),
                2 => directed.push((v, u)),
                _ => {}
            }
            if state >= 3 {
                bidirected.push((u, v));
            }
        }
        let g = MixedGraph::from_indices(p, &directed, &bidirected).expect("valid indices");
        g.is_acyclic().then_some(g)
    })
}

/// Checks every `(v, Q ⊆ pa(v))` of one graph; returns the number of checks and any disagreements.
pub fn verify_graph(g: &MixedGraph, seed: u64, split_capacity: u32) -> Result<(usize, Vec<Mismatch>)> {
    let matrices =
        (0..GENERIC_DRAWS as u64).map(|d| path_matrix(g, &random_params(g, seed, d))).collect::<Result<Vec<_>>>()?;
    let mut checks = 0;
    let mut mismatches = Vec::new();
    for v in 0..g.len() {
        let removable = removable_ancestors(g, v)?;
        for q in g.pa(v).subsets() {
            checks += 1;
            let flow = max_flow(&build_flow_network_with_split_capacity(g, v, &q, split_capacity)?) as usize;
            let path_systems = brute_force_v_rank(g, v, &q)?;
            let ranks: Vec<usize> = matrices.iter().map(|m| numeric_rank(&m.block(&q, &removable))).collect();
            let numeric = mode(&ranks);
            if flow != path_systems || flow != numeric {
                mismatches.push(Mismatch {
                    graph: g.to_doc(),
                    vertex: g.name(v).to_string(),
                    q: g.set_names(&q),
                    flow,
                    path_systems,
                    numeric,
                });
            }
        }
    }
    Ok((checks, mismatches))
}

fn sampled(p: usize, samples: usize, seed: u64) -> Result<Vec<MixedGraph>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(p as u64);
    (0..samples).map(|_| random_admg(p, rng.random_range(0.1..=1.0), rng.random())).collect()
}

fn run(graphs: &[MixedGraph], seed: u64, split_capacity: u32, summary: &mut VerifySummary) -> Result<()> {
    let results = graphs.par_iter().map(|g| verify_graph(g, seed, split_capacity)).collect::<Result<Vec<_>>>()?;
    summary.graphs += graphs.len();
    for (checks, mismatches) in results {
        summary.checks += checks;
        summary.mismatches.extend(mismatches);
    }
    Ok(())
}

/// Exhaustive over sizes `1..=min(k, 4)`, sampled over `5..=k`.
pub fn verify(opts: &VerifyOptions) -> Result<VerifySummary> {
    if opts.max_vertices > MAX_VERTICES {
        return Err(Error::Invalid(format!("max vertices {} exceeds {MAX_VERTICES}", opts.max_vertices)));
    }
    let mut summary = VerifySummary { graphs: 0, checks: 0, mismatches: Vec::new() };
    for p in 1..=opts.max_vertices.min(EXHAUSTIVE_LIMIT) {
        let graphs: Vec<MixedGraph> = all_admgs(p).collect();
        run(&graphs, opts.seed, opts.split_capacity, &mut summary)?;
    }
    for p in EXHAUSTIVE_LIMIT + 1..=opts.max_vertices {
        run(&sampled(p, opts.samples, opts.seed)?, opts.seed, opts.split_capacity, &mut summary)?;
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn admg_counts() {
        // acyclic orientations times bidirected subsets
        assert_eq!(all_admgs(1).count(), 1);
        assert_eq!(all_admgs(2).count(), 3 * 2);
        assert_eq!(all_admgs(3).count(), 25 * 8);
    }

    #[test]
    fn worked_example_agrees() {
        let (checks, bad) = verify_graph(&fixtures::four_node(), 1, 1).unwrap();
        assert_eq!(checks, 1 + 2 + 2 + 4);
        assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn small_sweep_passes() {
        let s = verify(&VerifyOptions { max_vertices: 3, ..Default::default() }).unwrap();
        assert_eq!(s.graphs, 1 + 6 + 200);
        assert!(s.passed());
    }

    #[test]
    fn broken_split_is_caught() {
        let s = verify(&VerifyOptions { max_vertices: 3, split_capacity: 2, ..Default::default() }).unwrap();
        assert!(!s.passed());
        let m = &s.mismatches[0];
        assert!(m.flow > m.path_systems);
    }

    #[test]
    fn rejects_large_sweeps() {
        assert!(verify(&VerifyOptions { max_vertices: 7, ..Default::default() }).is_err());
    }
}
