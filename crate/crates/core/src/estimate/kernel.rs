use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How an RBF bandwidth is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bandwidth {
    Fixed(f64),
    /// Median of the non-zero pairwise distances.
    Median,
}

/// Kernel family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KernelSpec {
    /// `k(x, y) = (x y + offset)^degree`.
    Polynomial { degree: u32, offset: f64 },
    /// `k(x, y) = exp(−(x − y)² / (2σ²))`.
    Rbf { bandwidth: Bandwidth },
}

impl Default for KernelSpec {
    fn default() -> Self {
        KernelSpec::Polynomial { degree: 2, offset: 1.0 }
    }
}

impl KernelSpec {
    pub fn rbf_median() -> Self {
        KernelSpec::Rbf { bandwidth: Bandwidth::Median }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Polynomial { degree, offset } => {
                if degree == 0 {
                    return Err(Error::Invalid("polynomial degree must be at least 1".into()));
                }
                if !(offset >= 0.0 && offset.is_finite()) {
                    return Err(Error::Invalid(format!("polynomial offset {offset} must be finite and >= 0")));
                }
            }
            KernelSpec::Rbf { bandwidth: Bandwidth::Fixed(s) } if !(s > 0.0 && s.is_finite()) => {
                return Err(Error::Invalid(format!("bandwidth {s} must be positive")));
            }
            KernelSpec::Rbf { .. } => {}
        }
        Ok(())
    }

    /// Fixes data-dependent parameters using the sample `x`.
    pub fn resolve(&self, x: &[f64]) -> Result<Kernel> {
        self.validate()?;
        Ok(match *self {
            KernelSpec::Polynomial { degree, offset } => Kernel::Polynomial { degree, offset },
            KernelSpec::Rbf { bandwidth: Bandwidth::Fixed(sigma) } => Kernel::Rbf { sigma },
            KernelSpec::Rbf { bandwidth: Bandwidth::Median } => {
                Kernel::Rbf { sigma: median_distance(x).unwrap_or(1.0) }
            }
        })
    }
}

/// A kernel with every parameter fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Kernel {
    Polynomial { degree: u32, offset: f64 },
    Rbf { sigma: f64 },
}

impl Kernel {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match *self {
            Kernel::Polynomial { degree, offset } => (x * y + offset).powi(degree as i32),
            Kernel::Rbf { sigma } => (-(x - y).powi(2) / (2.0 * sigma * sigma)).exp(),
        }
    }

    /// `∂k(x, y)/∂x`.
    pub fn d_first(&self, x: f64, y: f64) -> f64 {
        match *self {
            Kernel::Polynomial { degree, offset } => degree as f64 * y * (x * y + offset).powi(degree as i32 - 1),
            Kernel::Rbf { sigma } => -(x - y) / (sigma * sigma) * self.eval(x, y),
        }
    }
}

/// Median of `|x_i − x_j|` over pairs `i < j` with `x_i ≠ x_j`; `None` for constant input.
pub fn median_distance(x: &[f64]) -> Option<f64> {
    let mut d = Vec::with_capacity(x.len() * x.len().saturating_sub(1) / 2);
    for (i, a) in x.iter().enumerate() {
        for b in &x[i + 1..] {
            let dist = (a - b).abs();
            if dist > 0.0 {
                d.push(dist);
            }
        }
    }
    if d.is_empty() {
        return None;
    }
    let mid = d.len() / 2;
    let (_, &mut upper, _) = d.select_nth_unstable_by(mid, f64::total_cmp);
    if d.len() % 2 == 1 {
        return Some(upper);
    }
    let lower = d[..mid].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Some(0.5 * (lower + upper))
}
