use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::admg::{edge_key, MixedGraph, VertexSet};
use crate::error::Result;

use super::{build_flow_network, removable_ancestors, v_rank};

/// Verdict for one column `λ_{pa(v),v}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnReport {
    pub removable: Vec<String>,
    /// `r^v_{pa(v)}`.
    pub rank: usize,
    pub identifiable: bool,
    /// Non-intersecting paths from `R_v` onto `pa(v)`; empty unless identifiable.
    pub witness: Vec<Vec<String>>,
}

/// Column and per-edge identifiability of a whole graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentReport {
    pub columns: IndexMap<String, ColumnReport>,
    /// Keyed `"u->v"`.
    pub edges: IndexMap<String, bool>,
}

impl IdentReport {
    /// Whether the whole matrix `Λ` is identifiable.
    pub fn all_identifiable(&self) -> bool {
        self.columns.values().all(|c| c.identifiable)
    }

    pub fn edge(&self, u: &str, v: &str) -> Option<bool> {
        self.edges.get(&edge_key(u, v)).copied()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub(super) fn build(g: &MixedGraph) -> Result<IdentReport> {
    let mut columns = IndexMap::new();
    let mut edges = IndexMap::new();
    for v in 0..g.len() {
        let pa = g.pa(v);
        let removable = removable_ancestors(g, v)?;
        let net = build_flow_network(g, v, &pa)?;
        let flow = net.max_flow();
        let rank = flow.value as usize;
        let identifiable = rank == pa.len();
        let witness = if identifiable {
            net.decompose(&flow).into_iter().map(|p| p.into_iter().map(|u| g.name(u).to_string()).collect()).collect()
        } else {
            Vec::new()
        };
        for u in &pa {
            let ok = identifiable || v_rank(g, v, &pa.difference(&VertexSet::singleton(u)))? + 1 == rank;
            edges.insert(edge_key(g.name(u), g.name(v)), ok);
        }
        columns.insert(
            g.name(v).to_string(),
            ColumnReport { removable: g.set_names(&removable), rank, identifiable, witness },
        );
    }
    // edge order follows the graph's directed list
    let ordered = g
        .directed()
        .iter()
        .map(|&(u, v)| {
            let k = edge_key(g.name(u), g.name(v));
            let b = edges[&k];
            (k, b)
        })
        .collect();
    Ok(IdentReport { columns, edges: ordered })
}
