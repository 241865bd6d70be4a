use mixid::simulate::{generate_data, sample_errors, sample_parameters, ErrorModel, Provenance};
use serde::Serialize;
use serde_json::json;

use crate::failure::Failure;
use crate::io::{emit, load_graph, provenance_path, to_json, write};
use crate::{Dist, SimulateArgs};

#[derive(Debug, Serialize)]
struct Summary {
    n: usize,
    columns: Vec<String>,
    seed: u64,
    params_out: String,
    data_out: String,
}

fn csv(ds: &mixid::Dataset) -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    ds.write_csv(&mut buf)?;
    Ok(buf)
}

pub fn run(args: &SimulateArgs, human: bool) -> Result<(), Failure> {
    let g = load_graph(&args.graph)?;
    if args.n == 0 {
        return Err(Failure::parse("--n must be at least 1"));
    }
    let model = match args.dist {
        Dist::Laplace => ErrorModel::laplace(),
        Dist::Uniform => ErrorModel::uniform(),
    };
    let lam = sample_parameters(&g, args.seed)?;
    let eps = sample_errors(&g, &model, args.n, args.seed)?;
    let x = generate_data(&g, &lam, &eps)?;
    let provenance = Provenance::new(
        Some(args.seed),
        "mixid simulate",
        json!({ "n": args.n, "model": model, "graph": g.to_doc(), "params": lam.to_doc() }),
    );

    write(&args.params_out, to_json(&lam.to_doc()).as_bytes())?;
    write(&args.data_out, &csv(&x)?)?;
    write(&provenance_path(&args.data_out), to_json(&provenance).as_bytes())?;
    if let Some(path) = &args.errors_out {
        write(path, &csv(&eps)?)?;
    }

    let summary = Summary {
        n: args.n,
        columns: g.names().to_vec(),
        seed: args.seed,
        params_out: args.params_out.display().to_string(),
        data_out: args.data_out.display().to_string(),
    };
    let text = human
        .then(|| format!("wrote {} rows over {} to {}\n", summary.n, summary.columns.join(", "), summary.data_out));
    emit(&summary, text, None)
}
