use std::fmt::Write;

use mixid::ident::{build_flow_network, removable_ancestors, FlowNode};
use mixid::MixedGraph;
use serde::Serialize;

use crate::failure::Failure;
use crate::io::{emit, load_graph};
use crate::FlowArgs;

#[derive(Debug, Serialize)]
struct ArcDump {
    from: String,
    to: String,
    capacity: u32,
    flow: u32,
}

#[derive(Debug, Serialize)]
struct FlowDump {
    node: String,
    set: Vec<String>,
    removable: Vec<String>,
    nodes: Vec<String>,
    arcs: Vec<ArcDump>,
    value: u32,
    paths: Vec<Vec<String>>,
}

fn node_label(g: &MixedGraph, n: FlowNode) -> String {
    match n {
        FlowNode::Source => "s".into(),
        FlowNode::Sink => "t".into(),
        FlowNode::In(u) => format!("{}:in", g.name(u)),
        FlowNode::Out(u) => format!("{}:out", g.name(u)),
    }
}

pub fn run(args: &FlowArgs, human: bool) -> Result<(), Failure> {
    let g = load_graph(&args.graph)?;
    let v = g.vertex(&args.node)?;
    let q = g.set(&args.set)?;
    let net = build_flow_network(&g, v, &q)?;
    let flow = net.max_flow();
    let labels: Vec<String> = net.nodes().iter().map(|&n| node_label(&g, n)).collect();
    let dump = FlowDump {
        node: g.name(v).to_string(),
        set: g.set_names(&q),
        removable: g.set_names(&removable_ancestors(&g, v)?),
        nodes: labels.clone(),
        arcs: net
            .arcs()
            .iter()
            .zip(&flow.arc_flow)
            .map(|(a, &f)| ArcDump {
                from: labels[a.from].clone(),
                to: labels[a.to].clone(),
                capacity: a.capacity,
                flow: f,
            })
            .collect(),
        value: flow.value,
        paths: net
            .decompose(&flow)
            .into_iter()
            .map(|p| p.into_iter().map(|u| g.name(u).to_string()).collect())
            .collect(),
    };
    let text = human.then(|| {
        let mut s = format!("max flow {} for {} with Q = {{{}}}\n", dump.value, dump.node, dump.set.join(", "));
        for a in &dump.arcs {
            let _ = writeln!(s, "  {} -> {}  {}/{}", a.from, a.to, a.flow, a.capacity);
        }
        for p in &dump.paths {
            let _ = writeln!(s, "  path {}", p.join(" -> "));
        }
        s
    });
    emit(&dump, text, None)
}
