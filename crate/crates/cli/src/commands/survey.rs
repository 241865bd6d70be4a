use std::fmt::Write;

use mixid::survey::{parse_density_grid, survey, write_csv};

use crate::failure::Failure;
use crate::io::{emit, write};
use crate::SurveyArgs;

pub fn run(args: &SurveyArgs, human: bool) -> Result<(), Failure> {
    let densities = parse_density_grid(&args.densities).map_err(|e| Failure::parse(e.to_string()))?;
    let rows = survey(args.p, &densities, args.reps, args.seed)?;
    if let Some(path) = &args.out {
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf)?;
        write(path, &buf)?;
    }
    let text = human.then(|| {
        let mut s = format!("p = {}, {} graphs per density\n", args.p, args.reps);
        for r in &rows {
            let _ = writeln!(s, "  density {:.3}: {:.3} identifiable", r.density, r.proportion_identifiable);
        }
        s
    });
    emit(&rows, text, None)
}
