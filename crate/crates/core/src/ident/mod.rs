//! Identifiability decisions for direct causal effects.
//!
//! For a vertex `v` the identifying linear system is indexed by its
//! removable ancestors `R_v`. How many parent coordinates that system pins
//! down is the `v`-rank: the size of a largest vertex-disjoint path system
//! from `R_v` into a parent subset. That number is computed as a max-flow on
//! a node-split network.

mod cyclic;
pub mod flow;
mod genericity;
mod report;

use crate::admg::{MixedGraph, VertexSet};
use crate::error::{Error, Result};

pub use cyclic::{
    cycle_decomposition, cycle_decomposition_identifiable, cyclic_necessary_condition, CycleDecomposition,
};
pub use flow::{FlowArc, FlowNetwork, FlowNode, MaxFlow};
pub use genericity::{genericity_sufficient, EdgeGenericity};
pub use report::{ColumnReport, IdentReport};

/// `R_v = {u ∈ an(v) : Sib(u) \ Sib(v) ≠ ∅}`.
pub fn removable_ancestors(g: &MixedGraph, v: usize) -> Result<VertexSet> {
    g.check_vertex(v)?;
    let sib_v = g.sib_closed(v);
    Ok(g.ancestors(v).iter().filter(|&u| !g.sib_closed(u).is_subset(&sib_v)).collect())
}

fn check_parent_subset(g: &MixedGraph, v: usize, q: &VertexSet) -> Result<()> {
    for u in q {
        g.check_vertex(u)?;
        if !g.has_directed(u, v) {
            return Err(Error::NotAParentSubset { vertex: g.name(u).to_string(), child: g.name(v).to_string() });
        }
    }
    Ok(())
}

/// Network whose max-flow is the `v`-rank of `q`.
///
/// Nodes are `an(v) \ {v}`, each split into an in/out pair joined by a
/// unit arc, plus `s` and `t`. Arcs: `s → u` for `u ∈ R_v`, `u → t` for
/// `u ∈ q`, and every directed edge of `g` inside `an(v) \ {v}`. All arcs
/// other than the split arcs get capacity `|V| + 1`.
pub fn build_flow_network(g: &MixedGraph, v: usize, q: &VertexSet) -> Result<FlowNetwork> {
    build_flow_network_with_split_capacity(g, v, q, 1)
}

/// [`build_flow_network`] with a configurable split-arc capacity.
/// Anything other than 1 breaks the reduction; exists to test the verifier.
#[doc(hidden)]
pub fn build_flow_network_with_split_capacity(
    g: &MixedGraph,
    v: usize,
    q: &VertexSet,
    split_capacity: u32,
) -> Result<FlowNetwork> {
    g.check_vertex(v)?;
    check_parent_subset(g, v, q)?;
    let removable = removable_ancestors(g, v)?;
    let mut inner = g.ancestors(v);
    inner.remove(v);

    let big_m = g.len() as u32 + 1;
    let mut net = FlowNetwork::new(big_m);
    let mut in_node = vec![usize::MAX; g.len()];
    let mut out_node = vec![usize::MAX; g.len()];
    for u in &inner {
        in_node[u] = net.add_node(FlowNode::In(u));
        out_node[u] = net.add_node(FlowNode::Out(u));
    }
    let (s, t) = (net.source(), net.sink());
    for u in &removable {
        net.add_arc(s, in_node[u], big_m);
    }
    for u in &inner {
        net.add_arc(in_node[u], out_node[u], split_capacity);
    }
    for &(a, b) in g.directed() {
        if inner.contains(a) && inner.contains(b) {
            net.add_arc(out_node[a], in_node[b], big_m);
        }
    }
    for u in q {
        net.add_arc(out_node[u], t, big_m);
    }
    Ok(net)
}

/// Value of a maximum integral `s`–`t` flow.
pub fn max_flow(net: &FlowNetwork) -> u32 {
    net.max_flow().value
}

/// `r^v_q` computed as `maxflow(G^v_q)`.
pub fn v_rank(g: &MixedGraph, v: usize, q: &VertexSet) -> Result<usize> {
    Ok(max_flow(&build_flow_network(g, v, q)?) as usize)
}

fn require_acyclic(g: &MixedGraph) -> Result<()> {
    if g.is_acyclic() {
        Ok(())
    } else {
        Err(Error::CyclicGraph)
    }
}

/// Whether `λ_{q,v}` is generically identifiable: `r^v_{pa(v)\q} = r^v_{pa(v)} − |q|`.
pub fn is_identifiable(g: &MixedGraph, v: usize, q: &VertexSet) -> Result<bool> {
    require_acyclic(g)?;
    g.check_vertex(v)?;
    check_parent_subset(g, v, q)?;
    let pa = g.pa(v);
    let full = v_rank(g, v, &pa)?;
    let rest = v_rank(g, v, &pa.difference(q))?;
    Ok(rest + q.len() == full)
}

/// Whether `λ_{q,v}` is generically identifiable once `λ_{k,v}` is known.
///
/// Holds iff `r^v_{pa(v)\(k∪q)} = r^v_{pa(v)\k} − |q ∪ k| + |k|`, which is the
/// statement that fixing `q` on top of `k` does not shrink the solution set.
pub fn is_identifiable_with_knowledge(g: &MixedGraph, v: usize, q: &VertexSet, k: &VertexSet) -> Result<bool> {
    require_acyclic(g)?;
    g.check_vertex(v)?;
    check_parent_subset(g, v, q)?;
    check_parent_subset(g, v, k)?;
    let pa = g.pa(v);
    let qk = q.union(k);
    let without_k = v_rank(g, v, &pa.difference(k))?;
    let without_qk = v_rank(g, v, &pa.difference(&qk))?;
    Ok(without_qk + qk.len() == without_k + k.len())
}

/// Whether every column passes: `r^v_{pa(v)} = |pa(v)|` for all `v`.
pub fn is_fully_identifiable(g: &MixedGraph) -> Result<bool> {
    require_acyclic(g)?;
    for v in 0..g.len() {
        let pa = g.pa(v);
        if !pa.is_empty() && v_rank(g, v, &pa)? < pa.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Column and edge verdicts for every vertex, with flow witnesses.
pub fn is_matrix_identifiable(g: &MixedGraph) -> Result<IdentReport> {
    require_acyclic(g)?;
    report::build(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn removable_ancestors_of_worked_examples() {
        let g = fixtures::four_node();
        assert!(removable_ancestors(&g, 1).unwrap().is_empty());
        assert_eq!(removable_ancestors(&g, 3).unwrap(), VertexSet::from([0, 1]));
        let g = fixtures::one_identifiable_edge();
        assert_eq!(removable_ancestors(&g, 3).unwrap(), VertexSet::from([1]));
        assert!(removable_ancestors(&g, 7).is_err());
    }

    fn collapsed(g: &MixedGraph, net: &FlowNetwork) -> Vec<(String, String)> {
        let label = |n: FlowNode| match n {
            FlowNode::Source => "s".to_string(),
            FlowNode::Sink => "t".to_string(),
            FlowNode::In(u) | FlowNode::Out(u) => g.name(u).to_string(),
        };
        let mut out: Vec<_> = net
            .arcs()
            .iter()
            .filter(
                |a| !matches!((net.nodes()[a.from], net.nodes()[a.to]), (FlowNode::In(x), FlowNode::Out(y)) if x == y),
            )
            .map(|a| (label(net.nodes()[a.from]), label(net.nodes()[a.to])))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn network_for_v2_has_no_source_arcs() {
        let g = fixtures::four_node();
        let net = build_flow_network(&g, 1, &g.pa(1)).unwrap();
        assert_eq!(collapsed(&g, &net), vec![("v1".into(), "t".into())]);
        assert_eq!(max_flow(&net), 0);
    }

    #[test]
    fn network_for_v4_matches_worked_example() {
        let g = fixtures::four_node();
        let net = build_flow_network(&g, 3, &g.pa(3)).unwrap();
        let expected: Vec<(String, String)> =
            [("s", "v1"), ("s", "v2"), ("v1", "v2"), ("v1", "v3"), ("v2", "t"), ("v3", "t")]
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect();
        assert_eq!(collapsed(&g, &net), expected);
        let flow = net.max_flow();
        assert_eq!(flow.value, 2);
        let mut paths = net.decompose(&flow);
        paths.sort();
        assert_eq!(paths, vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn empty_target_set_gives_zero_flow() {
        let g = fixtures::four_node();
        let net = build_flow_network(&g, 3, &VertexSet::new()).unwrap();
        assert!(net.arcs().iter().all(|a| a.to != net.sink()));
        assert_eq!(max_flow(&net), 0);
    }

    #[test]
    fn non_parent_targets_are_rejected() {
        let g = fixtures::four_node();
        let err = build_flow_network(&g, 3, &VertexSet::from([0])).unwrap_err();
        assert!(matches!(err, Error::NotAParentSubset { .. }));
    }

    #[test]
    fn v_ranks() {
        let g = fixtures::four_node();
        assert_eq!(v_rank(&g, 3, &VertexSet::from([1, 2])).unwrap(), 2);
        assert_eq!(v_rank(&g, 1, &g.pa(1)).unwrap(), 0);
        let g = fixtures::one_identifiable_edge();
        assert_eq!(v_rank(&g, 3, &VertexSet::from([1, 2])).unwrap(), 1);
    }

    #[test]
    fn single_parameter_verdicts() {
        let g = fixtures::four_node();
        assert!(!is_identifiable(&g, 1, &VertexSet::from([0])).unwrap());
        let g = fixtures::one_identifiable_edge();
        assert!(is_identifiable(&g, 3, &VertexSet::from([1])).unwrap());
        assert!(!is_identifiable(&g, 3, &VertexSet::from([2])).unwrap());
        let g = fixtures::iv();
        assert!(is_identifiable(&g, 2, &VertexSet::from([1])).unwrap());
        assert!(is_identifiable(&g, 1, &VertexSet::from([0])).unwrap());
    }

    #[test]
    fn identifiability_rejects_cycles() {
        let g = fixtures::two_cycle();
        assert_eq!(is_identifiable(&g, 0, &VertexSet::from([1])).unwrap_err(), Error::CyclicGraph);
    }

    #[test]
    fn knowledge_reduces_to_plain_check() {
        let g = fixtures::one_identifiable_edge();
        for q in g.pa(3).subsets() {
            assert_eq!(
                is_identifiable_with_knowledge(&g, 3, &q, &VertexSet::new()).unwrap(),
                is_identifiable(&g, 3, &q).unwrap()
            );
        }
    }

    #[test]
    fn known_parameters_are_identifiable() {
        let g = fixtures::one_identifiable_edge();
        let k = VertexSet::from([2]);
        assert!(is_identifiable_with_knowledge(&g, 3, &k, &k).unwrap());
        // knowing λ_{v2,v4} does not pin down λ_{v3,v4}
        assert!(!is_identifiable_with_knowledge(&g, 3, &VertexSet::from([2]), &VertexSet::from([1])).unwrap());
    }
}
