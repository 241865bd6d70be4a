use std::fmt::Write;

use indexmap::IndexMap;
use mixid::admg::edge_key;
use mixid::estimate::{
    fit, fit_multistart, normalized_frobenius_loss, random_init, regression_init, EstimateDoc, FitOptions, InitKind,
    KernelSpec,
};
use serde::Serialize;

use crate::failure::Failure;
use crate::io::{emit, load_data, load_graph, load_params};
use crate::{EstimateArgs, InitArg, KernelArg};

#[derive(Debug, Serialize)]
struct Report {
    #[serde(flatten)]
    result: EstimateDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    loss: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    edge_errors: Option<IndexMap<String, f64>>,
}

pub fn run(args: &EstimateArgs, human: bool) -> Result<(), Failure> {
    let g = load_graph(&args.graph)?;
    let data = load_data(&args.data)?;
    data.check_binding(&g)?;
    let truth = args.true_params.as_deref().map(|p| load_params(&g, p)).transpose()?;
    let spec = match args.kernel {
        KernelArg::Poly2 => KernelSpec::default(),
        KernelArg::Rbf => KernelSpec::rbf_median(),
    };

    let first = match args.init {
        InitArg::Reg => (InitKind::Regression, regression_init(&g, &data)?),
        InitArg::Tv => {
            let lam = truth.clone().ok_or_else(|| Failure::parse("--init tv needs --true-params"))?;
            (InitKind::TrueValue, lam)
        }
        InitArg::Random => (InitKind::Random, random_init(&g, args.seed)),
        InitArg::Custom => {
            let path =
                args.init_params.as_deref().ok_or_else(|| Failure::parse("--init custom needs --init-params"))?;
            (InitKind::Custom, load_params(&g, path)?)
        }
    };
    let mut starts = vec![first];
    for i in 1..=args.random_starts as u64 {
        starts.push((InitKind::Random, random_init(&g, args.seed.wrapping_add(i))));
    }
    let opts = FitOptions { max_iter: args.max_iter, ..FitOptions::default() };
    let result = match starts.as_slice() {
        [(kind, init)] => fit(&g, &data, &spec, init, *kind, &opts)?,
        _ => fit_multistart(&g, &data, &spec, &starts, &opts)?,
    };

    let (loss, edge_errors) = match &truth {
        Some(lam) => {
            let errors = g
                .directed()
                .iter()
                .map(|&(u, v)| (edge_key(g.name(u), g.name(v)), (result.lam_hat.get(u, v) - lam.get(u, v)).abs()))
                .collect();
            let loss = normalized_frobenius_loss(&result.lam_hat, lam).ok();
            (loss, Some(errors))
        }
        None => (None, None),
    };
    let report = Report { result: result.to_doc(), loss, edge_errors };

    let text = human.then(|| {
        let mut s = format!(
            "objective {:.6e} after {} iterations ({}), start: {}\n",
            result.objective,
            result.iterations,
            if result.converged { "converged" } else { "not converged" },
            result.init_kind
        );
        for (k, &(u, v)) in g.directed().iter().enumerate() {
            let _ = write!(s, "  {}: {:.6}", edge_key(g.name(u), g.name(v)), result.lam_hat.values()[k]);
            if let Some(lam) = &truth {
                let _ = write!(s, " (true {:.6})", lam.get(u, v));
            }
            s.push('\n');
        }
        if let Some(l) = loss {
            let _ = writeln!(s, "normalized loss {l:.6}");
        }
        s
    });
    emit(&report, text, args.out.as_deref())
}
