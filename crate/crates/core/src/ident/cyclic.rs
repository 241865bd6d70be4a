use crate::admg::{MixedGraph, VertexSet};
use crate::error::{Error, Result};

use super::v_rank;

/// Per vertex: is there a non-intersecting system from `R_v` onto all of `pa(v)`?
///
/// Any `false` certifies that `Λ` is not identifiable. On cyclic graphs the
/// condition is necessary only.
pub fn cyclic_necessary_condition(g: &MixedGraph) -> Vec<bool> {
    (0..g.len())
        .map(|v| {
            let pa = g.pa(v);
            pa.is_empty() || v_rank(g, v, &pa).expect("parents are a parent subset") == pa.len()
        })
        .collect()
}

/// Partition of a bidirected-free graph into simple directed cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    /// Strongly connected components in topological order.
    pub components: Vec<VertexSet>,
    /// 2-cycles `(v1, v2)` whose members share the same outside parents.
    pub failing_two_cycles: Vec<(usize, usize)>,
}

impl CycleDecomposition {
    pub fn identifiable(&self) -> bool {
        self.failing_two_cycles.is_empty()
    }
}

fn is_simple_cycle(g: &MixedGraph, c: &VertexSet) -> bool {
    let inside = |u: &usize| c.contains(*u);
    c.iter().all(|v| {
        g.parents(v).iter().filter(|u| inside(u)).count() == 1
            && g.children(v).iter().filter(|u| inside(u)).count() == 1
    })
}

/// Decomposes `g` into its cycles and finds the 2-cycles that break identifiability.
///
/// Singleton components are accepted as trivial. A 2-cycle `{v1, v2}` breaks
/// identifiability exactly when `pa(v1) \ C = pa(v2) \ C`: the two equations
/// can then be swapped without leaving the graph's support.
pub fn cycle_decomposition(g: &MixedGraph) -> Result<CycleDecomposition> {
    if !g.bidirected().is_empty() {
        return Err(Error::NotCycleDecomposable("graph has bidirected edges".into()));
    }
    let components = g.strongly_connected_components();
    let mut failing = Vec::new();
    for c in &components {
        if c.len() > 1 && !is_simple_cycle(g, c) {
            return Err(Error::NotCycleDecomposable(format!(
                "component {{{}}} is not a simple cycle",
                g.set_names(c).join(", ")
            )));
        }
        if let [a, b] = *c.as_slice() {
            if g.pa(a).difference(c) == g.pa(b).difference(c) {
                failing.push((a, b));
            }
        }
    }
    Ok(CycleDecomposition { components, failing_two_cycles: failing })
}

/// Identifiability of `Λ` for graphs that split into simple directed cycles.
pub fn cycle_decomposition_identifiable(g: &MixedGraph) -> Result<bool> {
    Ok(cycle_decomposition(g)?.identifiable())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn feedback_graph_fails_at_v2() {
        let g = fixtures::feedback_with_confounding();
        assert_eq!(cyclic_necessary_condition(&g), vec![true, false, true]);
    }

    #[test]
    fn two_cycle_passes_necessary_condition() {
        assert!(cyclic_necessary_condition(&fixtures::two_cycle()).iter().all(|&b| b));
    }

    #[test]
    fn k_cycles() {
        assert!(!cycle_decomposition_identifiable(&fixtures::two_cycle()).unwrap());
        for k in 3..=6 {
            assert!(cycle_decomposition_identifiable(&fixtures::k_cycle(k)).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn two_cycle_with_distinct_outside_parents() {
        // v1→v2→v3→v1 feeds v4⇄v5
        let shared =
            MixedGraph::from_indices(5, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 3), (0, 3), (0, 4)], &[]).unwrap();
        let d = cycle_decomposition(&shared).unwrap();
        assert_eq!(d.components.len(), 2);
        assert_eq!(d.failing_two_cycles, vec![(3, 4)]);

        let split = MixedGraph::from_indices(5, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 3), (0, 3)], &[]).unwrap();
        assert!(cycle_decomposition_identifiable(&split).unwrap());
    }

    #[test]
    fn rejects_non_decomposable() {
        let g = fixtures::feedback_with_confounding();
        assert!(matches!(cycle_decomposition(&g), Err(Error::NotCycleDecomposable(_))));
        // two cycles sharing v1
        let g = MixedGraph::from_indices(3, &[(0, 1), (1, 0), (0, 2), (2, 0)], &[]).unwrap();
        let err = cycle_decomposition(&g).unwrap_err();
        assert!(err.to_string().contains("v1"));
    }

    #[test]
    fn dag_is_trivially_decomposable() {
        let g = MixedGraph::from_indices(3, &[(0, 1), (1, 2)], &[]).unwrap();
        assert!(cycle_decomposition_identifiable(&g).unwrap());
    }
}
