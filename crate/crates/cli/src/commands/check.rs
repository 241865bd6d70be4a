use std::fmt::Write;

use indexmap::IndexMap;
use mixid::admg::edge_key;
use mixid::ident::{
    cycle_decomposition, cyclic_necessary_condition, is_identifiable, is_identifiable_with_knowledge,
    is_matrix_identifiable,
};
use mixid::{Error, MixedGraph, VertexSet};
use serde::Serialize;

use crate::failure::Failure;
use crate::io::{emit, load_graph};
use crate::CheckArgs;

#[derive(Debug, Serialize)]
struct EdgeVerdict {
    edge: String,
    identifiable: bool,
    known: Vec<String>,
}

#[derive(Debug, Serialize)]
struct Decomposition {
    components: Vec<Vec<String>>,
    failing_two_cycles: Vec<(String, String)>,
}

#[derive(Debug, Serialize)]
struct CyclicReport {
    cyclic: bool,
    /// `identifiable`, `not identifiable` or `necessary-only`.
    verdict: &'static str,
    criterion: &'static str,
    reason: String,
    necessary_condition: IndexMap<String, bool>,
    cycle_decomposition: Option<Decomposition>,
}

fn cyclic_report(g: &MixedGraph) -> Result<CyclicReport, Failure> {
    let necessary = cyclic_necessary_condition(g);
    let failing: Vec<&str> = (0..g.len()).filter(|&v| !necessary[v]).map(|v| g.name(v)).collect();
    let decomposition = match cycle_decomposition(g) {
        Ok(d) => Some(d),
        Err(Error::NotCycleDecomposable(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let names = |s: &VertexSet| g.set_names(s);
    let (verdict, criterion, reason) = if !failing.is_empty() {
        ("not identifiable", "path-system", format!("no full path system into the parents of {}", failing.join(", ")))
    } else if let Some(d) = &decomposition {
        match d.failing_two_cycles.first() {
            Some(&(a, b)) => (
                "not identifiable",
                "cycle-decomposition",
                format!("2-cycle {} <-> {} with equal outside parents", g.name(a), g.name(b)),
            ),
            None => ("identifiable", "cycle-decomposition", "every 2-cycle has distinct outside parents".into()),
        }
    } else if g.is_acyclic() {
        ("identifiable", "path-system", "every column has a full path system".into())
    } else {
        ("necessary-only", "path-system", "necessary condition holds; sufficiency is not established".into())
    };
    Ok(CyclicReport {
        cyclic: !g.is_acyclic(),
        verdict,
        criterion,
        reason,
        necessary_condition: (0..g.len()).map(|v| (g.name(v).to_string(), necessary[v])).collect(),
        cycle_decomposition: decomposition.map(|d| Decomposition {
            components: d.components.iter().map(names).collect(),
            failing_two_cycles: d
                .failing_two_cycles
                .iter()
                .map(|&(a, b)| (g.name(a).to_string(), g.name(b).to_string()))
                .collect(),
        }),
    })
}

fn parse_edge(g: &MixedGraph, text: &str) -> Result<(usize, usize), Failure> {
    let (u, v) = text.split_once(',').ok_or_else(|| Failure::parse(format!("--edge expects `u,v`, got `{text}`")))?;
    Ok((g.vertex(u.trim())?, g.vertex(v.trim())?))
}

pub fn run(args: &CheckArgs, human: bool) -> Result<(), Failure> {
    let g = load_graph(&args.graph)?;
    let out = args.out.as_deref();
    if let Some(text) = &args.edge {
        let (u, v) = parse_edge(&g, text)?;
        if !g.is_acyclic() {
            return Err(Failure::invalid("single-edge checks need an acyclic graph; run without --edge"));
        }
        let q = VertexSet::singleton(u);
        let known = g.set(&args.known)?;
        let identifiable = if known.is_empty() {
            is_identifiable(&g, v, &q)?
        } else {
            is_identifiable_with_knowledge(&g, v, &q, &known)?
        };
        let verdict = EdgeVerdict { edge: edge_key(g.name(u), g.name(v)), identifiable, known: g.set_names(&known) };
        let text = human.then(|| format!("{}: {}\n", verdict.edge, label(identifiable)));
        return emit(&verdict, text, out);
    }
    if args.cyclic || !g.is_acyclic() {
        let report = cyclic_report(&g)?;
        let text = human.then(|| {
            let mut s = format!("{} ({})\n", report.verdict, report.reason);
            for (v, ok) in &report.necessary_condition {
                let _ = writeln!(s, "  {v}: necessary condition {}", if *ok { "holds" } else { "fails" });
            }
            s
        });
        return emit(&report, text, out);
    }
    let report = is_matrix_identifiable(&g)?;
    let text = human.then(|| {
        let mut s = String::new();
        for (edge, ok) in &report.edges {
            let _ = writeln!(s, "{edge}: {}", label(*ok));
        }
        let _ = writeln!(s, "matrix: {}", label(report.all_identifiable()));
        s
    });
    emit(&report, text, out)
}

fn label(ok: bool) -> &'static str {
    if ok {
        "identifiable"
    } else {
        "not identifiable"
    }
}
