//! Coefficient matrices supported on a graph's directed edges.

use indexmap::IndexMap;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::admg::{edge_key, MixedGraph};
use crate::error::{Error, Result};

/// `Λ` with one entry per directed edge of the bound graph and zeros elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamMatrix {
    vertices: Vec<String>,
    /// Directed edges of the bound graph, in the graph's order.
    edges: Vec<(usize, usize)>,
    values: Vec<f64>,
}

/// On-disk form: `{"vertices": [...], "edges": {"u->v": value}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamDoc {
    pub vertices: Vec<String>,
    pub edges: IndexMap<String, f64>,
}

impl ParamMatrix {
    pub fn zeros(g: &MixedGraph) -> Self {
        Self { vertices: g.names().to_vec(), edges: g.directed().to_vec(), values: vec![0.0; g.directed().len()] }
    }

    /// Values aligned with `g.directed()`.
    pub fn from_values(g: &MixedGraph, values: Vec<f64>) -> Result<Self> {
        if values.len() != g.directed().len() {
            return Err(Error::SizeMismatch(format!(
                "{} values for {} directed edges",
                values.len(),
                g.directed().len()
            )));
        }
        Ok(Self { values, ..Self::zeros(g) })
    }

    pub fn from_doc(g: &MixedGraph, doc: &ParamDoc) -> Result<Self> {
        if doc.vertices != g.names() {
            return Err(Error::BindingMismatch("vertex lists differ".into()));
        }
        let mut lam = Self::zeros(g);
        for (key, &x) in &doc.edges {
            let (u, v) = key
                .split_once("->")
                .ok_or_else(|| Error::Invalid(format!("edge key `{key}` is not of the form u->v")))?;
            lam.set(g.vertex(u.trim())?, g.vertex(v.trim())?, x)?;
        }
        Ok(lam)
    }

    pub fn to_doc(&self) -> ParamDoc {
        let edges = self
            .edges
            .iter()
            .zip(&self.values)
            .map(|(&(u, v), &x)| (edge_key(&self.vertices[u], &self.vertices[v]), x))
            .collect();
        ParamDoc { vertices: self.vertices.clone(), edges }
    }

    /// Number of vertices, i.e. the side of the dense matrix.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    fn position(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.iter().position(|&e| e == (u, v))
    }

    /// `λ_{uv}`, zero off the support.
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.position(u, v).map_or(0.0, |i| self.values[i])
    }

    pub fn set(&mut self, u: usize, v: usize, x: f64) -> Result<()> {
        let i = self.position(u, v).ok_or_else(|| {
            Error::BindingMismatch(format!("{} is not a directed edge", edge_key(&self.vertices[u], &self.vertices[v])))
        })?;
        self.values[i] = x;
        Ok(())
    }

    /// Errors unless `self` was built for a graph with the same vertices and directed edges.
    pub fn check_binding(&self, g: &MixedGraph) -> Result<()> {
        if self.vertices != g.names() {
            return Err(Error::BindingMismatch("vertex lists differ".into()));
        }
        if self.edges != g.directed() {
            return Err(Error::BindingMismatch("directed edge sets differ".into()));
        }
        Ok(())
    }

    /// Dense `p × p` matrix with `Λ[(u, v)] = λ_{uv}`.
    pub fn dense(&self) -> DMatrix<f64> {
        let p = self.vertices.len();
        let mut m = DMatrix::zeros(p, p);
        for (&(u, v), &x) in self.edges.iter().zip(&self.values) {
            m[(u, v)] = x;
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// `‖Λ̂ − Λ‖_F / ‖Λ‖_F`.
pub fn normalized_frobenius_loss(lam_hat: &ParamMatrix, lam_true: &ParamMatrix) -> Result<f64> {
    if lam_hat.edges != lam_true.edges || lam_hat.vertices != lam_true.vertices {
        return Err(Error::BindingMismatch("estimates and truth are bound to different graphs".into()));
    }
    let norm = lam_true.frobenius_norm();
    if norm == 0.0 {
        return Err(Error::ZeroTrueMatrix);
    }
    let diff: f64 = lam_hat.values.iter().zip(&lam_true.values).map(|(a, b)| (a - b).powi(2)).sum();
    Ok(diff.sqrt() / norm)
}
