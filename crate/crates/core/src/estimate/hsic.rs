//! Biased HSIC, `trace(K_x H K_y H) / n²`, and its derivative in the first sample.
//!
//! Polynomial kernels have a finite feature map `φ_k(x) = √(C(d,k) c^{d−k}) x^k`,
//! so `K = Φ Φᵀ` and the trace collapses to `‖Φ̃_xᵀ Φ̃_y‖²_F / n²` with
//! column-centred features, which costs `O(n d²)`. Other pairs use the
//! `O(n²)` sum `Σ_ij K_x[i,j] (H K_y H)[i,j]` with entries formed on the fly.

use super::kernel::{Kernel, KernelSpec};
use crate::error::{Error, Result};

/// A sample with its kernel and the quantities reused across pairs.
#[derive(Debug, Clone)]
pub struct Prepared {
    x: Vec<f64>,
    kernel: Kernel,
    /// Row sums of the Gram matrix and their total.
    row_sums: Vec<f64>,
    total: f64,
    features: Option<Features>,
}

/// Column-centred features and raw feature derivatives, both `n × (d+1)` row-major.
#[derive(Debug, Clone)]
struct Features {
    width: usize,
    centered: Vec<f64>,
    deriv: Vec<f64>,
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl Features {
    fn new(x: &[f64], degree: u32, offset: f64) -> (Self, Vec<f64>) {
        let width = degree as usize + 1;
        let scale: Vec<f64> =
            (0..=degree).map(|k| (binomial(degree, k) * offset.powi((degree - k) as i32)).sqrt()).collect();
        let n = x.len();
        let mut raw = vec![0.0; n * width];
        let mut deriv = vec![0.0; n * width];
        for (i, &xi) in x.iter().enumerate() {
            let mut pow = 1.0;
            for k in 0..width {
                raw[i * width + k] = scale[k] * pow;
                if k + 1 < width {
                    deriv[i * width + k + 1] = scale[k + 1] * (k + 1) as f64 * pow;
                }
                pow *= xi;
            }
        }
        let mut col_sums = vec![0.0; width];
        for row in raw.chunks(width) {
            for (s, v) in col_sums.iter_mut().zip(row) {
                *s += v;
            }
        }
        let row_sums = raw.chunks(width).map(|row| row.iter().zip(&col_sums).map(|(a, b)| a * b).sum()).collect();
        let means: Vec<f64> = col_sums.iter().map(|s| s / n as f64).collect();
        let mut centered = raw;
        for row in centered.chunks_mut(width) {
            for (v, m) in row.iter_mut().zip(&means) {
                *v -= m;
            }
        }
        (Self { width, centered, deriv }, row_sums)
    }
}

impl Prepared {
    pub fn new(x: &[f64], kernel: Kernel) -> Self {
        let (features, row_sums) = match kernel {
            Kernel::Polynomial { degree, offset } => {
                let (f, r) = Features::new(x, degree, offset);
                (Some(f), r)
            }
            Kernel::Rbf { .. } => {
                let r = x.iter().map(|&a| x.iter().map(|&b| kernel.eval(a, b)).sum()).collect();
                (None, r)
            }
        };
        let total = row_sums.iter().sum();
        Self { x: x.to_vec(), kernel, row_sums, total, features }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    /// `(H K H)[i, j]`.
    fn centered(&self, i: usize, j: usize) -> f64 {
        let n = self.len() as f64;
        self.kernel.eval(self.x[i], self.x[j]) - self.row_sums[i] / n - self.row_sums[j] / n + self.total / (n * n)
    }
}

/// `Φ̃_aᵀ Φ̃_b`, row-major `wa × wb`.
fn cross(a: &Features, b: &Features, n: usize) -> Vec<f64> {
    let mut c = vec![0.0; a.width * b.width];
    for i in 0..n {
        let ra = &a.centered[i * a.width..(i + 1) * a.width];
        let rb = &b.centered[i * b.width..(i + 1) * b.width];
        for (k, x) in ra.iter().enumerate() {
            for (l, y) in rb.iter().enumerate() {
                c[k * b.width + l] += x * y;
            }
        }
    }
    c
}

/// HSIC of two prepared samples of equal length.
pub fn hsic_prepared(a: &Prepared, b: &Prepared) -> f64 {
    let n = a.len();
    let nf = n as f64;
    if let (Some(fa), Some(fb)) = (&a.features, &b.features) {
        let c = cross(fa, fb, n);
        // both summation orders, so swapping the arguments gives the same bits
        let by_row: f64 = c.chunks(fb.width).map(|row| row.iter().map(|x| x * x).sum::<f64>()).sum();
        let by_col: f64 = (0..fb.width).map(|l| c.iter().skip(l).step_by(fb.width).map(|x| x * x).sum::<f64>()).sum();
        return 0.5 * (by_row + by_col) / (nf * nf);
    }
    // Σ (HKH) ∘ (HLH), equal to trace(KHLH) because H is idempotent
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            sum += a.centered(i, j) * b.centered(i, j);
        }
    }
    sum / (nf * nf)
}

/// `∂ HSIC(a, b) / ∂ a_j` for every `j`.
pub fn hsic_gradient_prepared(a: &Prepared, b: &Prepared) -> Vec<f64> {
    let n = a.len();
    let nf = n as f64;
    let scale = 2.0 / (nf * nf);
    if let (Some(fa), Some(fb)) = (&a.features, &b.features) {
        let c = cross(fa, fb, n);
        // u[l] per sample: Σ_k C[k,l] φ'_k(a_j), then dot with φ̃(b_j)
        return (0..n)
            .map(|j| {
                let da = &fa.deriv[j * fa.width..(j + 1) * fa.width];
                let rb = &fb.centered[j * fb.width..(j + 1) * fb.width];
                let mut g = 0.0;
                for (k, d) in da.iter().enumerate() {
                    if *d == 0.0 {
                        continue;
                    }
                    let row = &c[k * fb.width..(k + 1) * fb.width];
                    g += d * row.iter().zip(rb).map(|(x, y)| x * y).sum::<f64>();
                }
                scale * g
            })
            .collect();
    }
    (0..n).map(|j| scale * (0..n).map(|i| a.kernel.d_first(a.x[j], a.x[i]) * b.centered(j, i)).sum::<f64>()).collect()
}

fn check_lengths(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(Error::Invalid(format!("HSIC needs at least 2 samples, got {}", x.len())));
    }
    Ok(())
}

/// Biased HSIC estimate between two samples.
pub fn hsic_biased(x: &[f64], y: &[f64], kx: &KernelSpec, ky: &KernelSpec) -> Result<f64> {
    check_lengths(x, y)?;
    let a = Prepared::new(x, kx.resolve(x)?);
    let b = Prepared::new(y, ky.resolve(y)?);
    Ok(hsic_prepared(&a, &b))
}

/// Gradient of [`hsic_biased`] in `x`, bandwidths held at their values for the given samples.
pub fn hsic_gradient(x: &[f64], y: &[f64], kx: &KernelSpec, ky: &KernelSpec) -> Result<Vec<f64>> {
    check_lengths(x, y)?;
    let a = Prepared::new(x, kx.resolve(x)?);
    let b = Prepared::new(y, ky.resolve(y)?);
    Ok(hsic_gradient_prepared(&a, &b))
}
