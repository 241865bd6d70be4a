use serde::Serialize;

use crate::admg::{LatentFactorGraph, VertexSet};
use crate::error::Result;

/// Verdict of the clique condition for one projected edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeGenericity {
    pub u: usize,
    pub v: usize,
    pub sufficient: bool,
    /// A clique meeting the latent count, if one was found.
    pub clique: Option<VertexSet>,
}

/// Clique condition for every bidirected edge of the latent projection.
///
/// Edge `u ↔ v` passes when some clique `C ⊇ {u, v}` of the projection has at
/// least `|C| − 1` latents whose children all lie in `C`. The search is
/// exhaustive over cliques through `{u, v}`, so it is exponential in the
/// number of common neighbours; bidirected components up to about 20 vertices
/// are fine.
pub fn genericity_sufficient(l: &LatentFactorGraph) -> Result<Vec<EdgeGenericity>> {
    let g = l.latent_projection();
    let latent_children: Vec<VertexSet> =
        (0..l.latents().len()).map(|i| l.children(i).iter().copied().collect()).collect();
    Ok(g.bidirected()
        .iter()
        .map(|&(u, v)| {
            let common: Vec<usize> = g.siblings(u).iter().copied().filter(|&w| g.has_bidirected(w, v)).collect();
            let mut search = Search { g: &g, latent_children: &latent_children, common: &common };
            let clique = search.extend(VertexSet::from([u, v]), 0);
            EdgeGenericity { u, v, sufficient: clique.is_some(), clique }
        })
        .collect())
}

struct Search<'a> {
    g: &'a crate::admg::MixedGraph,
    latent_children: &'a [VertexSet],
    common: &'a [usize],
}

impl Search<'_> {
    fn passes(&self, c: &VertexSet) -> bool {
        let inside = self.latent_children.iter().filter(|ch| !ch.is_empty() && ch.is_subset(c)).count();
        inside + 1 >= c.len()
    }

    /// Depth-first over cliques `c ∪ S` with `S ⊆ common[from..]`.
    fn extend(&mut self, c: VertexSet, from: usize) -> Option<VertexSet> {
        if self.passes(&c) {
            return Some(c);
        }
        for i in from..self.common.len() {
            let w = self.common[i];
            if c.iter().all(|x| self.g.has_bidirected(x, w)) {
                let mut next = c.clone();
                next.insert(w);
                if let Some(found) = self.extend(next, i + 1) {
                    return Some(found);
                }
            }
        }
        None
    }
}
