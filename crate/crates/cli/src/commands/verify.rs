use mixid::verify::{verify, VerifyOptions};

use crate::failure::Failure;
use crate::io::{emit, to_json};
use crate::VerifyArgs;

pub fn run(args: &VerifyArgs, human: bool) -> Result<(), Failure> {
    let opts = VerifyOptions {
        max_vertices: args.max_vertices as usize,
        samples: args.samples,
        seed: args.seed,
        split_capacity: if args.inject_fault { 2 } else { 1 },
    };
    let summary = verify(&opts)?;
    let text = human.then(|| {
        let mut s = format!(
            "{} graphs, {} checks, {} mismatches: {}\n",
            summary.graphs,
            summary.checks,
            summary.mismatches.len(),
            if summary.passed() { "pass" } else { "FAIL" }
        );
        if let Some(m) = summary.mismatches.first() {
            s.push_str("first counterexample:\n");
            s.push_str(&to_json(m));
        }
        s
    });
    emit(&summary, text, None)?;
    if summary.passed() {
        Ok(())
    } else {
        Err(Failure::new(
            1,
            format!("{} mismatches between flow, path enumeration and numeric rank", summary.mismatches.len()),
        ))
    }
}
