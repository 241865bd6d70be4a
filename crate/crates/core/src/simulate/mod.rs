//! Random mixed graphs, parameters and non-Gaussian errors, data from the
//! structural equations, and k-statistic cumulant estimates.
//!
//! Every random quantity comes from a ChaCha8 generator seeded with the
//! caller's seed and a stream chosen per vertex, edge or latent, so draws for
//! one vertex do not shift when others are added.

mod dataset;

use nalgebra::DMatrix;
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::admg::{LatentFactorGraph, MixedGraph};
use crate::error::{Error, Result};
use crate::oracle::path_matrix;
use crate::params::ParamMatrix;

pub use dataset::{Dataset, Provenance};

const EDGE_STREAMS: u64 = 1 << 32;
/// Redraws allowed when `I − Λ` comes out singular.
pub const MAX_REDRAWS: usize = 100;

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Marginal law of the independent error sources.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Noise {
    Laplace,
    Uniform,
}

impl Noise {
    /// One zero-mean draw with standard deviation `sd`.
    pub fn sample<R: Rng>(self, rng: &mut R, sd: f64) -> f64 {
        let u: f64 = rng.random::<f64>() - 0.5;
        match self {
            Noise::Laplace => {
                let b = sd / std::f64::consts::SQRT_2;
                -b * u.signum() * (1.0 - 2.0 * u.abs()).ln()
            }
            Noise::Uniform => 2.0 * u * sd * 3f64.sqrt(),
        }
    }
}

/// Shared-latent error recipe: every vertex gets its own source, every
/// bidirected edge two sources that load on both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorModel {
    pub noise: Noise,
    /// Standard deviations are drawn uniformly from this range.
    pub sd_range: (f64, f64),
    /// Loadings are drawn uniformly from `[-weight_bound, weight_bound]`.
    pub weight_bound: f64,
}

impl ErrorModel {
    pub fn laplace() -> Self {
        Self { noise: Noise::Laplace, sd_range: (0.2, 3.0), weight_bound: 5.0 }
    }

    pub fn uniform() -> Self {
        Self { noise: Noise::Uniform, ..Self::laplace() }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.sd_range;
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(Error::Invalid(format!("standard deviation range ({lo}, {hi}) is not inside (0, inf)")));
        }
        if !(self.weight_bound >= 0.0 && self.weight_bound.is_finite()) {
            return Err(Error::Invalid(format!("weight bound {} must be finite and non-negative", self.weight_bound)));
        }
        Ok(())
    }

    fn sd<R: Rng>(&self, rng: &mut R) -> f64 {
        let (lo, hi) = self.sd_range;
        if lo == hi {
            lo
        } else {
            rng.random_range(lo..hi)
        }
    }

    fn weight<R: Rng>(&self, rng: &mut R) -> f64 {
        if self.weight_bound == 0.0 {
            0.0
        } else {
            rng.random_range(-self.weight_bound..self.weight_bound)
        }
    }
}

/// Random mixed graph with `e = ⌊density · p(p−1)⌋` edges in total.
///
/// `e_d` is drawn uniformly from `1..=e` and then clamped to
/// `[e − M, M]` with `M = p(p−1)/2`, so that both parts fit. The DAG follows
/// a uniformly random causal order with `e_d` forward pairs chosen without
/// replacement; the bidirected part is `e − e_d` uniformly chosen pairs.
pub fn random_admg(p: usize, density: f64, seed: u64) -> Result<MixedGraph> {
    if p < 2 {
        return Err(Error::Invalid(format!("need at least 2 vertices, got {p}")));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidDensity { p, density });
    }
    let e = (density * (p * (p - 1)) as f64).floor() as usize;
    if e < 1 {
        return Err(Error::InvalidDensity { p, density });
    }
    let m = p * (p - 1) / 2;
    let mut rng = rng(seed, 0);
    let e_d = rng.random_range(1..=e).clamp(e.saturating_sub(m), m);

    let mut order: Vec<usize> = (0..p).collect();
    order.shuffle(&mut rng);
    let mut forward = Vec::with_capacity(m);
    for i in 0..p {
        for j in i + 1..p {
            forward.push((order[i], order[j]));
        }
    }
    let directed: Vec<(usize, usize)> = index::sample(&mut rng, m, e_d).iter().map(|k| forward[k]).collect();

    let mut pairs = Vec::with_capacity(m);
    for u in 0..p {
        for v in u + 1..p {
            pairs.push((u, v));
        }
    }
    let bidirected: Vec<(usize, usize)> = index::sample(&mut rng, m, e - e_d).iter().map(|k| pairs[k]).collect();
    MixedGraph::from_indices(p, &directed, &bidirected)
}

/// `λ_{uv} ~ U(−5, 5)` on every directed edge, redrawn while `det(I − Λ)` is
/// within `1e-8` of zero.
pub fn sample_parameters(g: &MixedGraph, seed: u64) -> Result<ParamMatrix> {
    let mut streams: Vec<ChaCha8Rng> = (0..g.directed().len()).map(|i| rng(seed, i as u64)).collect();
    for _ in 0..MAX_REDRAWS {
        let values = streams.iter_mut().map(|r| r.random_range(-5.0..5.0)).collect();
        let lam = ParamMatrix::from_values(g, values)?;
        if g.is_acyclic() || path_matrix(g, &lam).is_ok() {
            return Ok(lam);
        }
    }
    Err(Error::DegenerateParameters(MAX_REDRAWS))
}

fn column_major(cols: Vec<Vec<f64>>, n: usize) -> DMatrix<f64> {
    let p = cols.len();
    DMatrix::from_iterator(n, p, cols.into_iter().flatten())
}

/// `ε_v = η_v + Σ_{u↔v} (w^{v,1}_{uv} η¹_{uv} + w^{v,2}_{uv} η²_{uv})`.
pub fn sample_errors(g: &MixedGraph, model: &ErrorModel, n: usize, seed: u64) -> Result<Dataset> {
    model.validate()?;
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    let mut cols: Vec<Vec<f64>> = (0..g.len())
        .into_par_iter()
        .map(|v| {
            let mut r = rng(seed, v as u64);
            let sd = model.sd(&mut r);
            (0..n).map(|_| model.noise.sample(&mut r, sd)).collect()
        })
        .collect();
    let shared: Vec<_> = g
        .bidirected()
        .par_iter()
        .enumerate()
        .map(|(k, _)| {
            let mut r = rng(seed, EDGE_STREAMS + k as u64);
            let sd = [model.sd(&mut r), model.sd(&mut r)];
            // [w^{u,1}, w^{u,2}, w^{v,1}, w^{v,2}]
            let w: Vec<f64> = (0..4).map(|_| model.weight(&mut r)).collect();
            let eta: Vec<Vec<f64>> =
                sd.iter().map(|&s| (0..n).map(|_| model.noise.sample(&mut r, s)).collect()).collect();
            (w, eta)
        })
        .collect();
    for (&(u, v), (w, eta)) in g.bidirected().iter().zip(&shared) {
        for (target, wa, wb) in [(u, w[0], w[1]), (v, w[2], w[3])] {
            for i in 0..n {
                cols[target][i] += wa * eta[0][i] + wb * eta[1][i];
            }
        }
    }
    let prov = Provenance::new(Some(seed), "shared-latent", json!({ "n": n, "model": model }));
    Dataset::new(g.names().to_vec(), column_major(cols, n), prov)
}

/// `ε = Hᵀ η_L + η_V` with unit-variance Laplace sources. Missing loadings are drawn from `U(−5, 5)`.
pub fn sample_factor_errors(l: &LatentFactorGraph, n: usize, seed: u64) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    let p = l.observed().len();
    let mut cols: Vec<Vec<f64>> = (0..p)
        .into_par_iter()
        .map(|v| {
            let mut r = rng(seed, v as u64);
            (0..n).map(|_| Noise::Laplace.sample(&mut r, 1.0)).collect()
        })
        .collect();
    for li in 0..l.latents().len() {
        let mut r = rng(seed, EDGE_STREAMS + li as u64);
        let weights: Vec<f64> = match l.weights(li) {
            Some(w) => w.to_vec(),
            None => l.children(li).iter().map(|_| r.random_range(-5.0..5.0)).collect(),
        };
        let eta: Vec<f64> = (0..n).map(|_| Noise::Laplace.sample(&mut r, 1.0)).collect();
        for (&v, &w) in l.children(li).iter().zip(&weights) {
            for i in 0..n {
                cols[v][i] += w * eta[i];
            }
        }
    }
    let prov = Provenance::new(Some(seed), "factor", json!({ "n": n, "latents": l.latents() }));
    Dataset::new(l.observed().to_vec(), column_major(cols, n), prov)
}

/// `X = B_Λ ε` per sample, i.e. `X_v = Σ_{u∈pa(v)} λ_{uv} X_u + ε_v`.
pub fn generate_data(g: &MixedGraph, lam: &ParamMatrix, errors: &Dataset) -> Result<Dataset> {
    errors.check_binding(g)?;
    let b = path_matrix(g, lam)?;
    let x = errors.values() * b.matrix().transpose();
    let mut prov = errors.provenance().clone();
    prov.generator = format!("sem({})", prov.generator);
    Dataset::new(g.names().to_vec(), x, prov)
}

/// k-statistic estimate of the joint cumulant of the listed columns (order 2, 3 or 4).
pub fn empirical_cumulant(ds: &Dataset, indices: &[usize]) -> Result<f64> {
    let k = indices.len();
    if !(2..=4).contains(&k) {
        return Err(Error::UnsupportedOrder(k));
    }
    let n = ds.n();
    if n < k.max(2) {
        return Err(Error::Invalid(format!("order {k} needs at least {} samples, got {n}", k.max(2))));
    }
    for &j in indices {
        if j >= ds.p() {
            return Err(Error::Invalid(format!("column {j} out of range")));
        }
    }
    let centered: Vec<Vec<f64>> = indices
        .iter()
        .map(|&j| {
            let c = ds.column(j);
            let mean = c.iter().sum::<f64>() / n as f64;
            c.iter().map(|x| x - mean).collect()
        })
        .collect();
    let s = |which: &[usize]| -> f64 { (0..n).map(|i| which.iter().map(|&a| centered[a][i]).product::<f64>()).sum() };
    let nf = n as f64;
    Ok(match k {
        2 => s(&[0, 1]) / (nf - 1.0),
        3 => nf * s(&[0, 1, 2]) / ((nf - 1.0) * (nf - 2.0)),
        _ => {
            let pairs = s(&[0, 1]) * s(&[2, 3]) + s(&[0, 2]) * s(&[1, 3]) + s(&[0, 3]) * s(&[1, 2]);
            (nf * (nf + 1.0) * s(&[0, 1, 2, 3]) - (nf - 1.0) * pairs) / ((nf - 1.0) * (nf - 2.0) * (nf - 3.0))
        }
    })
}

/// Columns rescaled to unit sample standard deviation; constant columns are left as they are.
pub fn standardized(ds: &Dataset) -> Dataset {
    let n = ds.n() as f64;
    let mut values = ds.values().clone();
    for mut col in values.column_iter_mut() {
        let mean = col.sum() / n;
        let var = col.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
        if var > 0.0 {
            let sd = var.sqrt();
            col.apply(|x| *x /= sd);
        }
    }
    Dataset::new(ds.columns().to_vec(), values, ds.provenance().clone()).expect("scaling keeps values finite")
}
