use nalgebra::DMatrix;
use rayon::prelude::*;

use super::hsic::{hsic_gradient_prepared, hsic_prepared, Prepared};
use super::kernel::{Kernel, KernelSpec};
use crate::admg::MixedGraph;
use crate::error::Result;
use crate::params::ParamMatrix;
use crate::simulate::Dataset;

/// Unordered pairs `u < v` with no bidirected edge between them.
pub fn objective_pairs(g: &MixedGraph) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in 0..g.len() {
        for v in u + 1..g.len() {
            if !g.has_bidirected(u, v) {
                out.push((u, v));
            }
        }
    }
    out
}

fn residual_matrix(x: &DMatrix<f64>, lam: &ParamMatrix) -> DMatrix<f64> {
    let mut r = x.clone();
    for (&(u, v), &l) in lam.edges().iter().zip(lam.values()) {
        if l != 0.0 {
            let xu = x.column(u).clone_owned();
            r.column_mut(v).axpy(-l, &xu, 1.0);
        }
    }
    r
}

/// Column `v` is `X_v − Σ_{u∈pa(v)} λ̃_{uv} X_u`.
pub fn residuals(g: &MixedGraph, lam_tilde: &ParamMatrix, ds: &Dataset) -> Result<Dataset> {
    ds.check_binding(g)?;
    lam_tilde.check_binding(g)?;
    let r = residual_matrix(ds.values(), lam_tilde);
    Dataset::new(ds.columns().to_vec(), r, ds.provenance().clone())
}

/// Sum of HSIC over residual pairs with kernels fixed once at construction.
#[derive(Debug, Clone)]
pub struct Objective<'a> {
    data: &'a Dataset,
    pairs: Vec<(usize, usize)>,
    kernels: Vec<Kernel>,
}

impl<'a> Objective<'a> {
    /// Resolves each column's kernel on the residuals at `at` and keeps it fixed afterwards.
    pub fn new(g: &MixedGraph, data: &'a Dataset, spec: &KernelSpec, at: &ParamMatrix) -> Result<Self> {
        data.check_binding(g)?;
        at.check_binding(g)?;
        spec.validate()?;
        let r = residual_matrix(data.values(), at);
        let kernels = (0..g.len()).map(|v| spec.resolve(r.column(v).as_slice())).collect::<Result<_>>()?;
        Ok(Self { data, pairs: objective_pairs(g), kernels })
    }

    pub fn kernels(&self) -> &[Kernel] {
        &self.kernels
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    fn prepare(&self, lam: &ParamMatrix) -> Vec<Option<Prepared>> {
        let r = residual_matrix(self.data.values(), lam);
        let mut used = vec![false; self.kernels.len()];
        for &(u, v) in &self.pairs {
            used[u] = true;
            used[v] = true;
        }
        (0..self.kernels.len())
            .into_par_iter()
            .map(|v| used[v].then(|| Prepared::new(r.column(v).as_slice(), self.kernels[v])))
            .collect()
    }

    pub fn value(&self, lam: &ParamMatrix) -> f64 {
        let prep = self.prepare(lam);
        self.pairs.par_iter().map(|&(u, v)| hsic_prepared(prep[u].as_ref().unwrap(), prep[v].as_ref().unwrap())).sum()
    }

    /// Objective value and its partial derivatives, aligned with `lam.values()`.
    pub fn value_and_gradient(&self, lam: &ParamMatrix) -> (f64, Vec<f64>) {
        let prep = self.prepare(lam);
        let n = self.data.n();
        let terms: Vec<(f64, Vec<f64>, Vec<f64>)> = self
            .pairs
            .par_iter()
            .map(|&(u, v)| {
                let (a, b) = (prep[u].as_ref().unwrap(), prep[v].as_ref().unwrap());
                (hsic_prepared(a, b), hsic_gradient_prepared(a, b), hsic_gradient_prepared(b, a))
            })
            .collect();
        let mut value = 0.0;
        // d objective / d residual column
        let mut dr = vec![vec![0.0; n]; self.kernels.len()];
        for (&(u, v), (h, gu, gv)) in self.pairs.iter().zip(&terms) {
            value += h;
            for (acc, x) in dr[u].iter_mut().zip(gu) {
                *acc += x;
            }
            for (acc, x) in dr[v].iter_mut().zip(gv) {
                *acc += x;
            }
        }
        let grad = lam
            .edges()
            .iter()
            .map(|&(u, v)| -self.data.column(u).iter().zip(&dr[v]).map(|(x, d)| x * d).sum::<f64>())
            .collect();
        (value, grad)
    }
}

/// `Σ_{u↔v ∉ G} HSIC(r_u, r_v)` with kernels resolved on the residuals at `lam_tilde`.
pub fn objective(g: &MixedGraph, lam_tilde: &ParamMatrix, ds: &Dataset, spec: &KernelSpec) -> Result<f64> {
    Ok(Objective::new(g, ds, spec, lam_tilde)?.value(lam_tilde))
}

/// Analytic gradient of [`objective`], with data-dependent bandwidths held fixed.
pub fn gradient(g: &MixedGraph, lam_tilde: &ParamMatrix, ds: &Dataset, spec: &KernelSpec) -> Result<ParamMatrix> {
    let (_, grad) = Objective::new(g, ds, spec, lam_tilde)?.value_and_gradient(lam_tilde);
    ParamMatrix::from_values(g, grad)
}
