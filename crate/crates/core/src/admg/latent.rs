use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::MixedGraph;
use crate::error::{Error, Result};

/// On-disk latent factor document. Extends the graph document with latents,
/// loadings `[l, v]`, and optional per-loading weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatentFactorDoc {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub directed: Vec<(String, String)>,
    #[serde(default)]
    pub bidirected: Vec<(String, String)>,
    pub latents: Vec<String>,
    pub loadings: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

/// Pure factor graph: latent source nodes loading onto observed vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentFactorGraph {
    observed: Vec<String>,
    latents: Vec<String>,
    /// `children[l]`: observed indices loaded by latent `l`, sorted.
    children: Vec<Vec<usize>>,
    /// Loading weights aligned with `children`, when given.
    weights: Option<Vec<Vec<f64>>>,
}

impl LatentFactorGraph {
    pub fn new<S: AsRef<str>>(
        observed: &[S],
        latents: &[S],
        loadings: &[(S, S)],
        weights: Option<&[f64]>,
    ) -> Result<Self> {
        let observed: Vec<String> = observed.iter().map(|s| s.as_ref().to_string()).collect();
        let latents: Vec<String> = latents.iter().map(|s| s.as_ref().to_string()).collect();
        let mut names = HashSet::new();
        for v in observed.iter().chain(&latents) {
            if !names.insert(v.as_str()) {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let obs_index: HashMap<&str, usize> = observed.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let lat_index: HashMap<&str, usize> = latents.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        if let Some(w) = weights {
            if w.len() != loadings.len() {
                return Err(Error::InvalidFactorGraph(format!("{} weights for {} loadings", w.len(), loadings.len())));
            }
        }

        let mut children: Vec<Vec<(usize, f64)>> = vec![Vec::new(); latents.len()];
        for (k, (l, v)) in loadings.iter().enumerate() {
            let (l, v) = (l.as_ref(), v.as_ref());
            let Some(&li) = lat_index.get(l) else {
                if obs_index.contains_key(l) {
                    return Err(Error::InvalidFactorGraph(format!("loading {l} -> {v} starts at an observed vertex")));
                }
                return Err(Error::UnknownVertex(l.to_string()));
            };
            let Some(&vi) = obs_index.get(v) else {
                if lat_index.contains_key(v) {
                    return Err(Error::InvalidFactorGraph(format!("loading {l} -> {v} targets a latent")));
                }
                return Err(Error::UnknownVertex(v.to_string()));
            };
            let w = weights.map_or(f64::NAN, |w| w[k]);
            if children[li].iter().any(|&(c, _)| c == vi) {
                return Err(Error::InvalidFactorGraph(format!("duplicate loading {l} -> {v}")));
            }
            children[li].push((vi, w));
        }
        for list in &mut children {
            list.sort_by_key(|&(c, _)| c);
        }
        let weights = weights.map(|_| children.iter().map(|c| c.iter().map(|&(_, w)| w).collect()).collect());
        let children = children.into_iter().map(|c| c.into_iter().map(|(v, _)| v).collect()).collect();
        Ok(Self { observed, latents, children, weights })
    }

    pub fn from_doc(doc: &LatentFactorDoc) -> Result<Self> {
        if !doc.directed.is_empty() || !doc.bidirected.is_empty() {
            return Err(Error::InvalidFactorGraph(
                "only latent-to-observed loadings are supported; observed edges found".into(),
            ));
        }
        Self::new(&doc.vertices, &doc.latents, &doc.loadings, doc.weights.as_deref())
    }

    pub fn observed(&self) -> &[String] {
        &self.observed
    }

    pub fn latents(&self) -> &[String] {
        &self.latents
    }

    /// Observed children of latent `l`.
    pub fn children(&self, l: usize) -> &[usize] {
        &self.children[l]
    }

    /// Loading weights of latent `l`, aligned with [`children`](Self::children).
    pub fn weights(&self, l: usize) -> Option<&[f64]> {
        self.weights.as_ref().map(|w| w[l].as_slice())
    }

    /// Bidirected graph on the observed vertices: `u ↔ v` iff some latent loads both.
    pub fn latent_projection(&self) -> MixedGraph {
        let mut edges = Vec::new();
        for ch in &self.children {
            for (i, &u) in ch.iter().enumerate() {
                for &v in &ch[i + 1..] {
                    edges.push((self.observed[u].as_str(), self.observed[v].as_str()));
                }
            }
        }
        MixedGraph::new(&self.observed.iter().map(String::as_str).collect::<Vec<_>>(), &[], &edges)
            .expect("projection of a validated factor graph is valid")
    }
}
