//! Estimation of `Λ` by minimizing the summed HSIC between residual columns
//! whose vertices share no bidirected edge.

mod hsic;
mod kernel;
pub mod lbfgs;
mod objective;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::admg::MixedGraph;
use crate::error::{Error, Result};
use crate::params::{ParamDoc, ParamMatrix};
use crate::simulate::Dataset;

pub use crate::params::normalized_frobenius_loss;
pub use hsic::{hsic_biased, hsic_gradient};
pub use kernel::{median_distance, Bandwidth, Kernel, KernelSpec};
pub use lbfgs::{LbfgsOptions, Minimum};
pub use objective::{gradient, objective, objective_pairs, residuals, Objective};

/// Optimizer settings for [`fit`].
pub type FitOptions = LbfgsOptions;

/// Where a fit started.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitKind {
    Regression,
    TrueValue,
    Random,
    Custom,
}

impl std::fmt::Display for InitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InitKind::Regression => "regression",
            InitKind::TrueValue => "true-value",
            InitKind::Random => "random",
            InitKind::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateResult {
    pub lam_hat: ParamMatrix,
    pub objective: f64,
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub init_kind: InitKind,
    pub kernels: Vec<Kernel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateDoc {
    pub lam_hat: ParamDoc,
    pub objective: f64,
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub init_kind: InitKind,
    pub kernels: Vec<Kernel>,
}

impl EstimateResult {
    pub fn to_doc(&self) -> EstimateDoc {
        EstimateDoc {
            lam_hat: self.lam_hat.to_doc(),
            objective: self.objective,
            objective_trace: self.objective_trace.clone(),
            iterations: self.iterations,
            converged: self.converged,
            init_kind: self.init_kind,
            kernels: self.kernels.clone(),
        }
    }
}

/// OLS of each `X_v` on its centred parent columns, without intercept.
pub fn regression_init(g: &MixedGraph, ds: &Dataset) -> Result<ParamMatrix> {
    ds.check_binding(g)?;
    let n = ds.n();
    let x = ds.values();
    let means: Vec<f64> = (0..g.len()).map(|j| ds.column(j).iter().sum::<f64>() / n as f64).collect();
    let centered = DMatrix::from_fn(n, g.len(), |i, j| x[(i, j)] - means[j]);
    let mut lam = ParamMatrix::zeros(g);
    for v in 0..g.len() {
        let pa = g.parents(v);
        if pa.is_empty() {
            continue;
        }
        let singular = || Error::RankDeficientParents(g.name(v).to_string());
        if n <= pa.len() {
            return Err(singular());
        }
        let xp = centered.select_columns(pa);
        let gram = xp.transpose() * &xp;
        let rhs = xp.transpose() * centered.column(v);
        let scale = gram.diagonal().max();
        if !(scale > 0.0) {
            return Err(singular());
        }
        let svd = gram.clone().svd(false, false);
        if svd.singular_values.min() <= 1e-12 * scale {
            return Err(singular());
        }
        let beta: DVector<f64> = gram.cholesky().ok_or_else(singular)?.solve(&rhs);
        for (&u, b) in pa.iter().zip(beta.iter()) {
            lam.set(u, v, *b)?;
        }
    }
    Ok(lam)
}

/// `λ̃_{uv} ~ U(−5, 5)` on each edge, one stream per edge.
pub fn random_init(g: &MixedGraph, seed: u64) -> ParamMatrix {
    let values = (0..g.directed().len())
        .map(|i| {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            r.set_stream(i as u64);
            r.random_range(-5.0..5.0)
        })
        .collect();
    ParamMatrix::from_values(g, values).expect("one value per edge")
}

/// Local minimizer of the sample objective started at `init`.
pub fn fit(
    g: &MixedGraph,
    ds: &Dataset,
    spec: &KernelSpec,
    init: &ParamMatrix,
    init_kind: InitKind,
    opts: &FitOptions,
) -> Result<EstimateResult> {
    let obj = Objective::new(g, ds, spec, init)?;
    let mut lam = init.clone();
    let min = lbfgs::minimize(
        |x: &[f64]| {
            lam.values_mut().copy_from_slice(x);
            obj.value_and_gradient(&lam)
        },
        init.values(),
        opts,
    )?;
    Ok(EstimateResult {
        lam_hat: ParamMatrix::from_values(g, min.x)?,
        objective: min.value,
        objective_trace: min.trace,
        iterations: min.iterations,
        converged: min.converged,
        init_kind,
        kernels: obj.kernels().to_vec(),
    })
}

/// Fits from every start in parallel and keeps the lowest final objective.
///
/// Ties go to the earliest start. Starts that diverge are skipped unless all do.
pub fn fit_multistart(
    g: &MixedGraph,
    ds: &Dataset,
    spec: &KernelSpec,
    starts: &[(InitKind, ParamMatrix)],
    opts: &FitOptions,
) -> Result<EstimateResult> {
    if starts.is_empty() {
        return Err(Error::Invalid("no starting points".into()));
    }
    let fits: Vec<Result<EstimateResult>> =
        starts.par_iter().map(|(kind, init)| fit(g, ds, spec, init, *kind, opts)).collect();
    let mut best: Option<EstimateResult> = None;
    let mut first_err = None;
    for r in fits {
        match r {
            Ok(f) => {
                if best.as_ref().is_none_or(|b| f.objective < b.objective) {
                    best = Some(f);
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    best.ok_or_else(|| first_err.expect("at least one start"))
}
