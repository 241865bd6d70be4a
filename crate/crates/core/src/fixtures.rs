//! Small named graphs that come up repeatedly in tests, benches and docs.

use crate::admg::{LatentFactorGraph, MixedGraph};

/// `v1→v2, v1→v3, v2→v4, v3→v4` with `v1↔v2, v2↔v4, v3↔v4`.
pub fn four_node() -> MixedGraph {
    MixedGraph::from_indices(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], &[(0, 1), (1, 3), (2, 3)]).expect("valid")
}

/// `v2→v4, v3→v4` with `v1↔v2, v2↔v4, v3↔v4`: only `λ_{v2,v4}` is identifiable.
pub fn one_identifiable_edge() -> MixedGraph {
    MixedGraph::from_indices(4, &[(1, 3), (2, 3)], &[(0, 1), (1, 3), (2, 3)]).expect("valid")
}

/// `v1→v2, v2→v3, v1→v3` with `v1↔v2, v1↔v3`.
pub fn double_confounder() -> MixedGraph {
    MixedGraph::from_indices(3, &[(0, 1), (1, 2), (0, 2)], &[(0, 1), (0, 2)]).expect("valid")
}

/// Instrumental variable: `v1→v2→v3` with `v2↔v3`.
pub fn iv() -> MixedGraph {
    MixedGraph::from_indices(3, &[(0, 1), (1, 2)], &[(1, 2)]).expect("valid")
}

/// `v1→v2`, the feedback pair `v2⇄v3`, and `v2↔v3`.
pub fn feedback_with_confounding() -> MixedGraph {
    MixedGraph::from_indices(3, &[(0, 1), (1, 2), (2, 1)], &[(1, 2)]).expect("valid")
}

pub fn two_cycle() -> MixedGraph {
    k_cycle(2)
}

/// `v1→v2→…→vk→v1`.
pub fn k_cycle(k: usize) -> MixedGraph {
    let edges: Vec<(usize, usize)> = (0..k).map(|i| (i, (i + 1) % k)).collect();
    MixedGraph::from_indices(k, &edges, &[]).expect("valid")
}

/// Factor model with `l1→{v1..v4}`, `l2→{v4,v5}`, `l3→{v3,v5}`.
pub fn factor_graph_violating() -> LatentFactorGraph {
    let obs = ["v1", "v2", "v3", "v4", "v5"];
    LatentFactorGraph::new(
        &obs,
        &["l1", "l2", "l3"],
        &[
            ("l1", "v1"),
            ("l1", "v2"),
            ("l1", "v3"),
            ("l1", "v4"),
            ("l2", "v4"),
            ("l2", "v5"),
            ("l3", "v3"),
            ("l3", "v5"),
        ],
        None,
    )
    .expect("valid")
}

/// Same projection as [`factor_graph_violating`], plus `l4→{v1,v3,v4}`.
pub fn factor_graph_extra_latent() -> LatentFactorGraph {
    let obs = ["v1", "v2", "v3", "v4", "v5"];
    LatentFactorGraph::new(
        &obs,
        &["l1", "l2", "l3", "l4"],
        &[
            ("l1", "v1"),
            ("l1", "v2"),
            ("l1", "v3"),
            ("l1", "v4"),
            ("l2", "v4"),
            ("l2", "v5"),
            ("l3", "v3"),
            ("l3", "v5"),
            ("l4", "v1"),
            ("l4", "v3"),
            ("l4", "v4"),
        ],
        None,
    )
    .expect("valid")
}

/// Same projection again, with three latents loading on `{v1..v4}`.
pub fn factor_graph_satisfying() -> LatentFactorGraph {
    let obs = ["v1", "v2", "v3", "v4", "v5"];
    let mut loadings = Vec::new();
    for l in ["l1", "l4", "l5"] {
        for v in ["v1", "v2", "v3", "v4"] {
            loadings.push((l, v));
        }
    }
    loadings.extend([("l2", "v4"), ("l2", "v5"), ("l3", "v3"), ("l3", "v5")]);
    LatentFactorGraph::new(&obs, &["l1", "l2", "l3", "l4", "l5"], &loadings, None).expect("valid")
}

/// The mixed graph (directed part included) whose bidirected part the factor graphs project to.
pub fn factor_projection() -> MixedGraph {
    MixedGraph::from_indices(5, &[(3, 4), (2, 4)], &[(0, 1), (1, 2), (2, 3), (0, 2), (0, 3), (1, 3), (2, 4), (3, 4)])
        .expect("valid")
}
