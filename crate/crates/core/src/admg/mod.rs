//! Mixed graphs over named vertices: directed edges carry direct effects,
//! bidirected edges mark pairs whose errors may be dependent.
//!
//! Vertex ids are opaque strings. Internally every vertex gets a dense index
//! in input order, and all algorithms work on those indices.

mod latent;
mod vertex_set;

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use latent::{LatentFactorDoc, LatentFactorGraph};
pub use vertex_set::VertexSet;

/// Key for a directed edge in JSON maps: `"u->v"`.
pub fn edge_key(u: &str, v: &str) -> String {
    format!("{u}->{v}")
}

/// Raw graph document as it appears on disk.
///
/// ```json
/// {"vertices": ["v1", "v2"], "directed": [["v1", "v2"]], "bidirected": []}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub directed: Vec<(String, String)>,
    #[serde(default)]
    pub bidirected: Vec<(String, String)>,
}

impl GraphDoc {
    /// Checks the structural invariants without building the graph.
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for v in &self.vertices {
            if !seen.insert(v.as_str()) {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        for (u, v) in self.directed.iter().chain(&self.bidirected) {
            for w in [u, v] {
                if !seen.contains(w.as_str()) {
                    return Err(Error::UnknownVertex(w.clone()));
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u.clone()));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// `G = (V, E→, E↔)`. Immutable once built; every invariant holds by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    directed: Vec<(usize, usize)>,
    bidirected: Vec<(usize, usize)>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    siblings: Vec<Vec<usize>>,
}

/// Genealogical relations of a single vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relations {
    pub pa: VertexSet,
    pub ch: VertexSet,
    pub an: VertexSet,
    pub de: VertexSet,
    pub sib: VertexSet,
    /// `sib(v) ∪ {v}`.
    pub sib_closed: VertexSet,
}

impl MixedGraph {
    /// Builds and validates a graph from vertex names and edge name pairs.
    /// Repeated edges collapse; bidirected pairs are order-insensitive.
    pub fn new<S: AsRef<str>>(vertices: &[S], directed: &[(S, S)], bidirected: &[(S, S)]) -> Result<Self> {
        let doc = GraphDoc {
            vertices: vertices.iter().map(|s| s.as_ref().to_string()).collect(),
            directed: directed.iter().map(|(u, v)| (u.as_ref().to_string(), v.as_ref().to_string())).collect(),
            bidirected: bidirected.iter().map(|(u, v)| (u.as_ref().to_string(), v.as_ref().to_string())).collect(),
        };
        Self::from_doc(&doc)
    }

    pub fn from_doc(doc: &GraphDoc) -> Result<Self> {
        doc.validate()?;
        let index: HashMap<String, usize> = doc.vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let directed = doc.directed.iter().map(|(u, v)| (index[u], index[v])).collect();
        let bidirected = doc.bidirected.iter().map(|(u, v)| (index[u], index[v])).collect();
        Ok(Self::assemble(doc.vertices.clone(), index, directed, bidirected))
    }

    /// Builds a graph on `p` vertices named `v1..vp` from index pairs.
    pub fn from_indices(p: usize, directed: &[(usize, usize)], bidirected: &[(usize, usize)]) -> Result<Self> {
        let names: Vec<String> = (1..=p).map(|i| format!("v{i}")).collect();
        for &(u, v) in directed.iter().chain(bidirected) {
            for w in [u, v] {
                if w >= p {
                    return Err(Error::UnknownVertex(format!("v{}", w + 1)));
                }
            }
            if u == v {
                return Err(Error::SelfLoop(names[u].clone()));
            }
        }
        let index = names.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        Ok(Self::assemble(names, index, directed.to_vec(), bidirected.to_vec()))
    }

    fn assemble(
        names: Vec<String>,
        index: HashMap<String, usize>,
        mut directed: Vec<(usize, usize)>,
        bidirected: Vec<(usize, usize)>,
    ) -> Self {
        let p = names.len();
        directed.sort_unstable();
        directed.dedup();
        let mut bidirected: Vec<(usize, usize)> = bidirected.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        bidirected.sort_unstable();
        bidirected.dedup();

        let mut parents = vec![Vec::new(); p];
        let mut children = vec![Vec::new(); p];
        let mut siblings = vec![Vec::new(); p];
        for &(u, v) in &directed {
            parents[v].push(u);
            children[u].push(v);
        }
        for &(u, v) in &bidirected {
            siblings[u].push(v);
            siblings[v].push(u);
        }
        for list in parents.iter_mut().chain(children.iter_mut()).chain(siblings.iter_mut()) {
            list.sort_unstable();
        }
        Self { names, index, directed, bidirected, parents, children, siblings }
    }

    pub fn to_doc(&self) -> GraphDoc {
        let pair = |&(u, v): &(usize, usize)| (self.names[u].clone(), self.names[v].clone());
        GraphDoc {
            vertices: self.names.clone(),
            directed: self.directed.iter().map(pair).collect(),
            bidirected: self.bidirected.iter().map(pair).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    /// Dense index of a vertex id.
    pub fn vertex(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    /// Resolves a list of vertex ids into a set.
    pub fn set<S: AsRef<str>>(&self, ids: &[S]) -> Result<VertexSet> {
        ids.iter().map(|s| self.vertex(s.as_ref())).collect()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(format!("#{v}")))
        }
    }

    pub fn set_names(&self, set: &VertexSet) -> Vec<String> {
        set.iter().map(|v| self.names[v].clone()).collect()
    }

    /// Directed edges `(u, v)` meaning `u → v`, sorted.
    pub fn directed(&self) -> &[(usize, usize)] {
        &self.directed
    }

    /// Bidirected edges stored as `(min, max)`, sorted.
    pub fn bidirected(&self) -> &[(usize, usize)] {
        &self.bidirected
    }

    pub fn has_directed(&self, u: usize, v: usize) -> bool {
        self.directed.binary_search(&(u, v)).is_ok()
    }

    pub fn has_bidirected(&self, u: usize, v: usize) -> bool {
        self.bidirected.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn siblings(&self, v: usize) -> &[usize] {
        &self.siblings[v]
    }

    pub fn pa(&self, v: usize) -> VertexSet {
        self.parents[v].iter().copied().collect()
    }

    /// `Sib(v) = sib(v) ∪ {v}`.
    pub fn sib_closed(&self, v: usize) -> VertexSet {
        let mut s: VertexSet = self.siblings[v].iter().copied().collect();
        s.insert(v);
        s
    }

    /// Ancestors of `v`, including `v` itself.
    pub fn ancestors(&self, v: usize) -> VertexSet {
        self.reach(v, &self.parents)
    }

    /// Descendants of `v`, including `v` itself.
    pub fn descendants(&self, v: usize) -> VertexSet {
        self.reach(v, &self.children)
    }

    fn reach(&self, start: usize, adjacency: &[Vec<usize>]) -> VertexSet {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            for &w in &adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        (0..self.len()).filter(|&u| seen[u]).collect()
    }

    pub fn relations(&self, v: usize) -> Result<Relations> {
        self.check_vertex(v)?;
        Ok(Relations {
            pa: self.pa(v),
            ch: self.children[v].iter().copied().collect(),
            an: self.ancestors(v),
            de: self.descendants(v),
            sib: self.siblings[v].iter().copied().collect(),
            sib_closed: self.sib_closed(v),
        })
    }

    pub fn is_acyclic(&self) -> bool {
        self.causal_order().is_ok()
    }

    /// Kahn's algorithm; among ready vertices the one earliest in input order goes first.
    pub fn causal_order(&self) -> Result<Vec<usize>> {
        let mut indegree: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..self.len()).filter(|&v| indegree[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(self.len());
        while let Some(Reverse(u)) = ready.pop() {
            order.push(u);
            for &w in &self.children[u] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.push(Reverse(w));
                }
            }
        }
        if order.len() == self.len() {
            Ok(order)
        } else {
            Err(Error::CyclicGraph)
        }
    }

    /// Connected components of the bidirected part, each sorted, ordered by smallest member.
    pub fn bidirected_components(&self) -> Vec<VertexSet> {
        self.components_with(|u| &self.siblings[u])
    }

    fn components_with<'a>(&'a self, adjacent: impl Fn(usize) -> &'a [usize]) -> Vec<VertexSet> {
        let mut label = vec![usize::MAX; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if label[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            label[start] = id;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &w in adjacent(u) {
                    if label[w] == usize::MAX {
                        label[w] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            out.push(members.into_iter().collect());
        }
        out
    }

    /// Strongly connected components of the directed part (Tarjan), each sorted,
    /// listed so that every edge between components points forward.
    pub fn strongly_connected_components(&self) -> Vec<VertexSet> {
        struct State {
            next: usize,
            index: Vec<Option<usize>>,
            low: Vec<usize>,
            on_stack: Vec<bool>,
            stack: Vec<usize>,
            out: Vec<VertexSet>,
        }
        fn visit(g: &MixedGraph, v: usize, s: &mut State) {
            s.index[v] = Some(s.next);
            s.low[v] = s.next;
            s.next += 1;
            s.stack.push(v);
            s.on_stack[v] = true;
            for &w in &g.children[v] {
                match s.index[w] {
                    None => {
                        visit(g, w, s);
                        s.low[v] = s.low[v].min(s.low[w]);
                    }
                    Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                    Some(_) => {}
                }
            }
            if Some(s.low[v]) == s.index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = s.stack.pop().expect("tarjan stack underflow");
                    s.on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                s.out.push(comp.into_iter().collect());
            }
        }
        let p = self.len();
        let mut state = State {
            next: 0,
            index: vec![None; p],
            low: vec![0; p],
            on_stack: vec![false; p],
            stack: Vec::new(),
            out: Vec::new(),
        };
        for v in 0..p {
            if state.index[v].is_none() {
                visit(self, v, &mut state);
            }
        }
        // Tarjan emits sinks first.
        state.out.reverse();
        state.out
    }

    /// Copy of the graph with every bidirected edge removed.
    pub fn directed_part(&self) -> MixedGraph {
        Self::assemble(self.names.clone(), self.index.clone(), self.directed.clone(), Vec::new())
    }
}
