//! Proportion of randomly sampled mixed graphs whose whole coefficient
//! matrix is generically identifiable.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ident::is_fully_identifiable;
use crate::simulate::random_admg;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub p: usize,
    pub density: f64,
    pub graphs_sampled: usize,
    pub proportion_identifiable: f64,
    pub seed: u64,
}

/// Seed of the `i`-th graph at `density`; independent of the rest of the grid.
pub fn graph_seed(seed: u64, density: f64, i: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(density.to_bits());
    rng.set_word_pos(2 * i as u128);
    rng.next_u64()
}

/// One row: `reps` graphs at a single density.
pub fn survey_density(p: usize, density: f64, reps: usize, seed: u64) -> Result<SurveyRow> {
    let verdicts = (0..reps)
        .into_par_iter()
        .map(|i| is_fully_identifiable(&random_admg(p, density, graph_seed(seed, density, i))?))
        .collect::<Result<Vec<bool>>>()?;
    let hits = verdicts.iter().filter(|&&b| b).count();
    Ok(SurveyRow {
        p,
        density,
        graphs_sampled: reps,
        proportion_identifiable: if reps == 0 { 0.0 } else { hits as f64 / reps as f64 },
        seed,
    })
}

/// One row per density, in the given order. No rows when `reps` is 0.
pub fn survey(p: usize, densities: &[f64], reps: usize, seed: u64) -> Result<Vec<SurveyRow>> {
    if reps == 0 {
        return Ok(Vec::new());
    }
    densities.iter().map(|&d| survey_density(p, d, reps, seed)).collect()
}

/// `a:b:step` inclusive of `b` up to rounding.
pub fn parse_density_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || crate::Error::Invalid(format!("density grid `{text}` is not `start:stop:step`"));
    let parts: Vec<f64> =
        text.split(':').map(|s| s.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
    let &[start, stop, step] = parts.as_slice() else {
        return Err(bad());
    };
    if !(step > 0.0) || !(start <= stop) || !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9).collect())
}

/// Writes rows as CSV with a header.
pub fn write_csv<W: std::io::Write>(rows: &[SurveyRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["p", "density", "graphs_sampled", "proportion_identifiable", "seed"])?;
    for r in rows {
        out.serialize((r.p, r.density, r.graphs_sampled, r.proportion_identifiable, r.seed))?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_density_grid("0.1:0.9:0.1").unwrap(), vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]);
        assert_eq!(parse_density_grid("0.5:0.5:0.1").unwrap(), vec![0.5]);
        assert!(parse_density_grid("0.5:0.1:0.1").is_err());
        assert!(parse_density_grid("0.1:0.9").is_err());
        assert!(parse_density_grid("a:b:c").is_err());
    }

    #[test]
    fn rows_are_deterministic() {
        let a = survey(8, &[0.2, 0.6], 40, 3).unwrap();
        assert_eq!(a, survey(8, &[0.2, 0.6], 40, 3).unwrap());
        // a row does not depend on its neighbours in the grid
        assert_eq!(a[1], survey_density(8, 0.6, 40, 3).unwrap());
    }

    #[test]
    fn zero_reps_gives_no_rows() {
        assert!(survey(5, &[0.3], 0, 1).unwrap().is_empty());
    }

    #[test]
    fn sparse_beats_dense() {
        let rows = survey(10, &[0.1, 0.9], 100, 7).unwrap();
        assert!(rows[0].proportion_identifiable > rows[1].proportion_identifiable);
        assert!(rows.iter().all(|r| (0.0..=1.0).contains(&r.proportion_identifiable)));
    }

    #[test]
    fn csv_layout() {
        let rows = vec![SurveyRow { p: 5, density: 0.5, graphs_sampled: 4, proportion_identifiable: 0.25, seed: 1 }];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "p,density,graphs_sampled,proportion_identifiable,seed\n5,0.5,4,0.25,1\n"
        );
    }
}
