//! Integral max-flow on small capacitated digraphs (Dinitz: BFS level graph
//! plus blocking flow), with node capacities realized by vertex splitting.

use std::collections::VecDeque;

use serde::Serialize;

/// A node of a split flow network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FlowNode {
    Source,
    Sink,
    /// Entry half of a split vertex.
    In(usize),
    /// Exit half of a split vertex.
    Out(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub capacity: u32,
}

/// Capacitated digraph with designated source and sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    nodes: Vec<FlowNode>,
    arcs: Vec<FlowArc>,
    source: usize,
    sink: usize,
    /// Capacity standing in for "unbounded".
    big_m: u32,
}

/// A maximum flow: total value and per-arc flow aligned with [`FlowNetwork::arcs`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFlow {
    pub value: u32,
    pub arc_flow: Vec<u32>,
}

impl FlowNetwork {
    /// Empty network holding only the source and sink.
    pub fn new(big_m: u32) -> Self {
        Self { nodes: vec![FlowNode::Source, FlowNode::Sink], arcs: Vec::new(), source: 0, sink: 1, big_m }
    }

    pub fn add_node(&mut self, node: FlowNode) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// # Panics
    /// If the arc enters the source or leaves the sink.
    pub fn add_arc(&mut self, from: usize, to: usize, capacity: u32) -> usize {
        assert!(to != self.source && from != self.sink, "arc {from}->{to} touches s/t the wrong way");
        self.arcs.push(FlowArc { from, to, capacity });
        self.arcs.len() - 1
    }

    pub fn nodes(&self) -> &[FlowNode] {
        &self.nodes
    }

    pub fn arcs(&self) -> &[FlowArc] {
        &self.arcs
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn big_m(&self) -> u32 {
        self.big_m
    }

    pub fn max_flow(&self) -> MaxFlow {
        Dinitz::new(self).run()
    }

    /// Splits a flow into unit source-to-sink paths of original vertices.
    ///
    /// Arcs are followed in insertion order, so ties resolve the same way the
    /// network was built. Only meaningful when every split arc has capacity 1.
    pub fn decompose(&self, flow: &MaxFlow) -> Vec<Vec<usize>> {
        let mut remaining = flow.arc_flow.clone();
        let mut out_arcs = vec![Vec::new(); self.nodes.len()];
        for (i, a) in self.arcs.iter().enumerate() {
            out_arcs[a.from].push(i);
        }
        let mut paths = Vec::new();
        loop {
            let mut node = self.source;
            let mut path = Vec::new();
            let mut steps = 0;
            while node != self.sink {
                let Some(&arc) = out_arcs[node].iter().find(|&&i| remaining[i] > 0) else {
                    break;
                };
                remaining[arc] -= 1;
                node = self.arcs[arc].to;
                if let FlowNode::In(v) = self.nodes[node] {
                    path.push(v);
                }
                steps += 1;
                debug_assert!(steps <= self.arcs.len() * 2 + 2);
            }
            if node != self.sink {
                break;
            }
            paths.push(path);
        }
        paths
    }
}

struct Edge {
    to: usize,
    cap: u32,
}

struct Dinitz<'a> {
    net: &'a FlowNetwork,
    /// Residual edges: `2i` forward copy of arc `i`, `2i + 1` its reverse.
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    level: Vec<i32>,
    next: Vec<usize>,
}

impl<'a> Dinitz<'a> {
    fn new(net: &'a FlowNetwork) -> Self {
        let n = net.nodes.len();
        let mut edges = Vec::with_capacity(net.arcs.len() * 2);
        let mut adj = vec![Vec::new(); n];
        for a in &net.arcs {
            adj[a.from].push(edges.len());
            edges.push(Edge { to: a.to, cap: a.capacity });
            adj[a.to].push(edges.len());
            edges.push(Edge { to: a.from, cap: 0 });
        }
        Self { net, edges, adj, level: vec![-1; n], next: vec![0; n] }
    }

    fn bfs(&mut self) -> bool {
        self.level.fill(-1);
        let s = self.net.source;
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let Edge { to, cap } = self.edges[e];
                if cap > 0 && self.level[to] < 0 {
                    self.level[to] = self.level[u] + 1;
                    queue.push_back(to);
                }
            }
        }
        self.level[self.net.sink] >= 0
    }

    fn dfs(&mut self, u: usize, pushed: u32) -> u32 {
        if u == self.net.sink {
            return pushed;
        }
        while self.next[u] < self.adj[u].len() {
            let e = self.adj[u][self.next[u]];
            let Edge { to, cap } = self.edges[e];
            if cap > 0 && self.level[to] == self.level[u] + 1 {
                let got = self.dfs(to, pushed.min(cap));
                if got > 0 {
                    self.edges[e].cap -= got;
                    self.edges[e ^ 1].cap += got;
                    return got;
                }
            }
            self.next[u] += 1;
        }
        0
    }

    fn run(mut self) -> MaxFlow {
        let mut value = 0u32;
        while self.bfs() {
            self.next.fill(0);
            loop {
                let f = self.dfs(self.net.source, u32::MAX);
                if f == 0 {
                    break;
                }
                value += f;
            }
        }
        let arc_flow = self.net.arcs.iter().enumerate().map(|(i, a)| a.capacity - self.edges[2 * i].cap).collect();
        MaxFlow { value, arc_flow }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain capacitated network, nodes 2.. are `In(i)` placeholders.
    fn plain(n_inner: usize, arcs: &[(usize, usize, u32)]) -> FlowNetwork {
        let mut net = FlowNetwork::new(1000);
        for i in 0..n_inner {
            net.add_node(FlowNode::In(i));
        }
        for &(a, b, c) in arcs {
            net.add_arc(a, b, c);
        }
        net
    }

    #[test]
    fn textbook_network() {
        // s=0, t=1, inner 2..=5
        let net =
            plain(4, &[(0, 2, 10), (0, 3, 10), (2, 4, 4), (2, 5, 8), (3, 5, 9), (4, 1, 10), (5, 4, 6), (5, 1, 10)]);
        let f = net.max_flow();
        assert_eq!(f.value, 19);
        for (a, &fl) in net.arcs().iter().zip(&f.arc_flow) {
            assert!(fl <= a.capacity);
        }
    }

    #[test]
    fn disconnected_has_zero_flow() {
        let net = plain(2, &[(0, 2, 5), (3, 1, 5)]);
        assert_eq!(net.max_flow().value, 0);
    }

    #[test]
    fn single_split_node_carries_one_unit() {
        let mut net = FlowNetwork::new(3);
        let i = net.add_node(FlowNode::In(0));
        let o = net.add_node(FlowNode::Out(0));
        net.add_arc(0, i, 3);
        net.add_arc(i, o, 1);
        net.add_arc(o, 1, 3);
        let f = net.max_flow();
        assert_eq!(f.value, 1);
        assert_eq!(net.decompose(&f), vec![vec![0]]);
    }

    #[test]
    fn conservation_holds() {
        let net = plain(3, &[(0, 2, 3), (0, 3, 2), (2, 3, 1), (2, 4, 2), (3, 4, 3), (4, 1, 4)]);
        let f = net.max_flow();
        assert_eq!(f.value, 4);
        for node in 2..5 {
            let inflow: u32 = net.arcs().iter().zip(&f.arc_flow).filter(|(a, _)| a.to == node).map(|(_, &x)| x).sum();
            let outflow: u32 =
                net.arcs().iter().zip(&f.arc_flow).filter(|(a, _)| a.from == node).map(|(_, &x)| x).sum();
            assert_eq!(inflow, outflow);
        }
    }
}
