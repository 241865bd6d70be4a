//! Limited-memory BFGS on a box `[-bound, bound]^m`.
//!
//! Coordinates sitting on the box with the gradient pointing outwards are
//! frozen for the step; the search direction comes from the two-loop
//! recursion on the remaining ones. The strong-Wolfe line search never steps
//! past the box boundary and accepts the boundary point when it satisfies the
//! sufficient-decrease condition. When no Wolfe step exists, one projected
//! gradient step with backtracking is tried before giving up.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const C1: f64 = 1e-4;
const C2: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LbfgsOptions {
    pub max_iter: usize,
    /// Stop once the projected gradient norm is at most this.
    pub grad_tol: f64,
    /// Stop once an accepted step lowers the objective by at most this fraction.
    pub ftol: f64,
    pub memory: usize,
    pub bound: f64,
}

impl Default for LbfgsOptions {
    fn default() -> Self {
        Self { max_iter: 500, grad_tol: 1e-6, ftol: 1e-10, memory: 10, bound: 50.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    /// Objective at the start and after every accepted step.
    pub trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

struct Problem<F> {
    f: F,
    bound: f64,
}

impl<F: FnMut(&[f64]) -> (f64, Vec<f64>)> Problem<F> {
    fn eval(&mut self, x: &[f64]) -> (f64, Vec<f64>) {
        (self.f)(x)
    }

    fn project(&self, x: &mut [f64]) {
        for xi in x {
            *xi = xi.clamp(-self.bound, self.bound);
        }
    }

    /// Gradient with components zeroed where the box blocks descent.
    fn projected_gradient(&self, x: &[f64], g: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(g)
            .map(|(&xi, &gi)| if (xi >= self.bound && gi < 0.0) || (xi <= -self.bound && gi > 0.0) { 0.0 } else { gi })
            .collect()
    }

    fn max_step(&self, x: &[f64], d: &[f64]) -> f64 {
        x.iter()
            .zip(d)
            .map(|(&xi, &di)| {
                if di > 0.0 {
                    (self.bound - xi) / di
                } else if di < 0.0 {
                    (-self.bound - xi) / di
                } else {
                    f64::INFINITY
                }
            })
            .fold(f64::INFINITY, f64::min)
            .max(0.0)
    }
}

struct Trial {
    alpha: f64,
    x: Vec<f64>,
    f: f64,
    g: Vec<f64>,
}

fn step<F: FnMut(&[f64]) -> (f64, Vec<f64>)>(p: &mut Problem<F>, x: &[f64], d: &[f64], alpha: f64) -> (Trial, f64) {
    let mut xn: Vec<f64> = x.iter().zip(d).map(|(a, b)| a + alpha * b).collect();
    p.project(&mut xn);
    let (f, g) = p.eval(&xn);
    let slope = dot(&g, d);
    (Trial { alpha, x: xn, f, g }, slope)
}

/// Strong-Wolfe search on `[0, alpha_max]`.
fn line_search<F: FnMut(&[f64]) -> (f64, Vec<f64>)>(
    p: &mut Problem<F>,
    x: &[f64],
    f0: f64,
    d: &[f64],
    slope0: f64,
    alpha_init: f64,
    alpha_max: f64,
) -> Option<Trial> {
    let armijo = |a: f64, f: f64| f.is_finite() && f <= f0 + C1 * a * slope0;
    let mut prev = (0.0, f0, slope0);
    let mut alpha = alpha_init.min(alpha_max);
    for i in 0..30 {
        let (t, slope) = step(p, x, d, alpha);
        if !armijo(alpha, t.f) || (i > 0 && t.f >= prev.1) {
            return zoom(p, x, f0, d, slope0, prev, (alpha, t.f, slope));
        }
        if slope.abs() <= -C2 * slope0 {
            return Some(t);
        }
        if slope >= 0.0 {
            return zoom(p, x, f0, d, slope0, (alpha, t.f, slope), prev);
        }
        if alpha >= alpha_max {
            return Some(t);
        }
        prev = (alpha, t.f, slope);
        alpha = (2.0 * alpha).min(alpha_max);
    }
    None
}

fn zoom<F: FnMut(&[f64]) -> (f64, Vec<f64>)>(
    p: &mut Problem<F>,
    x: &[f64],
    f0: f64,
    d: &[f64],
    slope0: f64,
    mut lo: (f64, f64, f64),
    mut hi: (f64, f64, f64),
) -> Option<Trial> {
    let mut best: Option<Trial> = None;
    for _ in 0..40 {
        let (a_lo, a_hi) = (lo.0, hi.0);
        if (a_hi - a_lo).abs() <= 1e-14 * a_lo.abs().max(a_hi.abs()).max(1e-300) {
            break;
        }
        // cubic-free safeguard: quadratic through lo's value and slope, else bisection
        let mut alpha = 0.5 * (a_lo + a_hi);
        let denom = 2.0 * (hi.1 - lo.1 - lo.2 * (a_hi - a_lo));
        if hi.1.is_finite() && denom > 0.0 {
            let q = a_lo - lo.2 * (a_hi - a_lo).powi(2) / denom;
            let (l, h) = (a_lo.min(a_hi), a_lo.max(a_hi));
            let margin = 0.1 * (h - l);
            if q > l + margin && q < h - margin {
                alpha = q;
            }
        }
        let (t, slope) = step(p, x, d, alpha);
        if !(t.f.is_finite() && t.f <= f0 + C1 * alpha * slope0) || t.f >= lo.1 {
            hi = (alpha, t.f, slope);
        } else {
            if slope.abs() <= -C2 * slope0 {
                return Some(t);
            }
            if slope * (a_hi - a_lo) >= 0.0 {
                hi = lo;
            }
            lo = (alpha, t.f, slope);
            best = Some(t);
        }
    }
    best.filter(|t| t.f < f0)
}

/// Projected steepest descent with halving until sufficient decrease.
fn fallback<F: FnMut(&[f64]) -> (f64, Vec<f64>)>(p: &mut Problem<F>, x: &[f64], f0: f64, pg: &[f64]) -> Option<Trial> {
    let mut alpha = 1.0 / norm(pg).max(1e-300);
    for _ in 0..60 {
        let mut xn: Vec<f64> = x.iter().zip(pg).map(|(a, g)| a - alpha * g).collect();
        p.project(&mut xn);
        let moved: Vec<f64> = x.iter().zip(&xn).map(|(a, b)| a - b).collect();
        let (f, g) = p.eval(&xn);
        if f.is_finite() && f <= f0 - C1 * dot(pg, &moved) && f < f0 {
            return Some(Trial { alpha, x: xn, f, g });
        }
        alpha *= 0.5;
    }
    None
}

/// Two-loop recursion: approximates `H · q`.
fn two_loop(q: &[f64], memory: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut r = q.to_vec();
    let mut alphas = Vec::with_capacity(memory.len());
    for (s, y, rho) in memory.iter().rev() {
        let a = rho * dot(s, &r);
        for (ri, yi) in r.iter_mut().zip(y) {
            *ri -= a * yi;
        }
        alphas.push(a);
    }
    if let Some((s, y, _)) = memory.back() {
        let gamma = dot(s, y) / dot(y, y);
        for ri in &mut r {
            *ri *= gamma;
        }
    }
    for ((s, y, rho), a) in memory.iter().zip(alphas.into_iter().rev()) {
        let b = rho * dot(y, &r);
        for (ri, si) in r.iter_mut().zip(s) {
            *ri += (a - b) * si;
        }
    }
    r
}

/// Minimizes `f` (returning value and gradient) from `x0` inside the box.
pub fn minimize<F: FnMut(&[f64]) -> (f64, Vec<f64>)>(f: F, x0: &[f64], opts: &LbfgsOptions) -> Result<Minimum> {
    let mut p = Problem { f, bound: opts.bound };
    let mut x = x0.to_vec();
    p.project(&mut x);
    let (mut fx, mut g) = p.eval(&x);
    if !fx.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteObjective { iterations: 0, last: x });
    }
    let mut trace = vec![fx];
    let mut memory: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(opts.memory);
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        let pg = p.projected_gradient(&x, &g);
        if norm(&pg) <= opts.grad_tol {
            converged = true;
            break;
        }
        let mut d: Vec<f64> = two_loop(&pg, &memory).iter().map(|v| -v).collect();
        for (di, gi) in d.iter_mut().zip(&pg) {
            if *gi == 0.0 {
                *di = 0.0;
            }
        }
        let mut slope = dot(&d, &g);
        if !(slope < 0.0) {
            memory.clear();
            d = pg.iter().map(|v| -v).collect();
            slope = dot(&d, &g);
        }
        let alpha_max = p.max_step(&x, &d);
        let alpha_init = if memory.is_empty() { (1.0 / norm(&d)).min(1.0) } else { 1.0 };
        let trial = if alpha_max > 0.0 { line_search(&mut p, &x, fx, &d, slope, alpha_init, alpha_max) } else { None };
        let trial = match trial {
            Some(t) => Some(t),
            None => {
                memory.clear();
                fallback(&mut p, &x, fx, &pg)
            }
        };
        let Some(t) = trial else {
            // no descent step left
            converged = true;
            break;
        };
        iterations += 1;
        if t.g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteObjective { iterations, last: t.x });
        }
        let s: Vec<f64> = t.x.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = t.g.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm(&s) * norm(&y) {
            if memory.len() == opts.memory {
                memory.pop_front();
            }
            memory.push_back((s, y, 1.0 / sy));
        }
        let decrease = fx - t.f;
        let _ = t.alpha;
        x = t.x;
        g = t.g;
        fx = t.f;
        trace.push(fx);
        if decrease <= opts.ftol * fx.abs().max(trace[0].abs() * 1e-12).max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
    }
    Ok(Minimum { x, value: fx, trace, iterations, converged })
}
