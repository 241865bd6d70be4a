use crate::admg::{MixedGraph, VertexSet};
use crate::error::{Error, Result};

/// Cap on partial states visited by one enumeration.
pub const MAX_STATES: usize = 1_000_000;

/// Vertex-disjoint directed paths; `paths[k]` starts at the `k`-th source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSystem {
    pub paths: Vec<Vec<usize>>,
}

impl PathSystem {
    /// Index into the sorted target set reached by each path.
    pub fn target_permutation(&self, targets: &VertexSet) -> Vec<usize> {
        self.paths
            .iter()
            .map(|p| {
                let end = *p.last().expect("paths are non-empty");
                targets.as_slice().binary_search(&end).expect("path ends in target set")
            })
            .collect()
    }

    /// `λ^Π`: product of edge weights over all paths.
    pub fn monomial(&self, weight: impl Fn(usize, usize) -> f64) -> f64 {
        self.paths.iter().flat_map(|p| p.windows(2)).map(|w| weight(w[0], w[1])).product()
    }
}

struct Enumerator<'a> {
    g: &'a MixedGraph,
    sources: &'a [usize],
    targets: &'a VertexSet,
    used: Vec<bool>,
    target_taken: Vec<bool>,
    current: Vec<Vec<usize>>,
    states: usize,
    stop_at_first: bool,
    found: Vec<PathSystem>,
}

impl Enumerator<'_> {
    fn tick(&mut self) -> Result<()> {
        self.states += 1;
        if self.states > MAX_STATES {
            return Err(Error::TooLarge(MAX_STATES));
        }
        Ok(())
    }

    fn done(&self) -> bool {
        self.stop_at_first && !self.found.is_empty()
    }

    /// Route source `k` onwards.
    fn route(&mut self, k: usize) -> Result<()> {
        if k == self.sources.len() {
            self.found.push(PathSystem { paths: self.current.clone() });
            return Ok(());
        }
        // every source is pre-marked as used, so no path runs through another source
        let s = self.sources[k];
        self.current.push(vec![s]);
        self.walk(k, s)?;
        self.current.pop();
        Ok(())
    }

    /// Extend the path of source `k`, currently ending at `at`.
    fn walk(&mut self, k: usize, at: usize) -> Result<()> {
        self.tick()?;
        if let Ok(t) = self.targets.as_slice().binary_search(&at) {
            // a target on the path cannot be reached by any other path, so stop here
            if !self.target_taken[t] {
                self.target_taken[t] = true;
                self.route(k + 1)?;
                self.target_taken[t] = false;
            }
            return Ok(());
        }
        for &c in self.g.children(at) {
            if self.used[c] {
                continue;
            }
            self.used[c] = true;
            self.current[k].push(c);
            self.walk(k, c)?;
            self.current[k].pop();
            self.used[c] = false;
            if self.done() {
                return Ok(());
            }
        }
        Ok(())
    }
}

fn run(g: &MixedGraph, sources: &VertexSet, targets: &VertexSet, stop_at_first: bool) -> Result<Vec<PathSystem>> {
    if sources.len() != targets.len() {
        return Err(Error::SizeMismatch(format!("{} sources but {} targets", sources.len(), targets.len())));
    }
    for v in sources.iter().chain(targets.iter()) {
        g.check_vertex(v)?;
    }
    let mut used = vec![false; g.len()];
    for s in sources {
        used[s] = true;
    }
    let mut e = Enumerator {
        g,
        sources: sources.as_slice(),
        targets,
        used,
        target_taken: vec![false; targets.len()],
        current: Vec::new(),
        states: 0,
        stop_at_first,
        found: Vec::new(),
    };
    e.route(0)?;
    Ok(e.found)
}

/// Every system of vertex-disjoint directed paths taking `sources` onto `targets`.
///
/// A path may be trivial when a source is also a target. Systems are listed in
/// depth-first order: earlier sources first, children in adjacency order.
pub fn enumerate_path_systems(g: &MixedGraph, sources: &VertexSet, targets: &VertexSet) -> Result<Vec<PathSystem>> {
    run(g, sources, targets, false)
}

/// Whether at least one system exists; stops at the first.
pub fn has_path_system(g: &MixedGraph, sources: &VertexSet, targets: &VertexSet) -> Result<bool> {
    Ok(!run(g, sources, targets, true)?.is_empty())
}

fn subsets_of_size(set: &VertexSet, k: usize) -> impl Iterator<Item = VertexSet> + '_ {
    set.subsets().filter(move |s| s.len() == k)
}

/// Largest `k` with a non-intersecting system from some `k`-subset of `R_v` onto some `k`-subset of `q`.
pub fn brute_force_v_rank(g: &MixedGraph, v: usize, q: &VertexSet) -> Result<usize> {
    let removable = crate::ident::removable_ancestors(g, v)?;
    for k in (1..=removable.len().min(q.len())).rev() {
        for i in subsets_of_size(&removable, k) {
            for p in subsets_of_size(q, k) {
                if has_path_system(g, &i, &p)? {
                    return Ok(k);
                }
            }
        }
    }
    Ok(0)
}
