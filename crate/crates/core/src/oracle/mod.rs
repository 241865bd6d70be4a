//! Brute-force cross-checks for the flow-based criteria: exhaustive path
//! enumeration, path-matrix determinants and ranks, the A-matrix, and the
//! dimension of the solution set of the identifying linear system.

mod paths;

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::admg::{MixedGraph, VertexSet};
use crate::error::{Error, Result};
use crate::ident::{removable_ancestors, v_rank};
pub use crate::params::ParamMatrix;

pub use paths::{brute_force_v_rank, enumerate_path_systems, has_path_system, PathSystem, MAX_STATES};

/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOLERANCE: f64 = 1e-8;
/// Number of random draws behind a modal (generic) rank.
pub const GENERIC_DRAWS: usize = 5;
const SINGULAR_TOLERANCE: f64 = 1e-8;

/// `B_Λ = (I − Λ)^{-T}`; `b_{uv}` sums the monomials of directed paths `v → u`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathMatrix(pub DMatrix<f64>);

impl PathMatrix {
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.0[(u, v)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// Submatrix with the given rows and columns.
    pub fn block(&self, rows: &VertexSet, cols: &VertexSet) -> DMatrix<f64> {
        DMatrix::from_fn(rows.len(), cols.len(), |i, j| self.0[(rows.as_slice()[i], cols.as_slice()[j])])
    }
}

/// Computes `B_Λ`.
///
/// On acyclic bindings the columns are filled by the path recursion in causal
/// order, so entries outside `de(u)` are exact zeros. Otherwise `I − Λ` is
/// inverted and a determinant below `1e-8` in magnitude is treated as singular.
pub fn path_matrix(g: &MixedGraph, lam: &ParamMatrix) -> Result<PathMatrix> {
    lam.check_binding(g)?;
    let p = g.len();
    if let Ok(order) = g.causal_order() {
        let mut b = DMatrix::zeros(p, p);
        for u in 0..p {
            b[(u, u)] = 1.0;
        }
        for &v in &order {
            for &w in g.parents(v) {
                let l = lam.get(w, v);
                for u in 0..p {
                    let bw = b[(w, u)];
                    if bw != 0.0 {
                        b[(v, u)] += l * bw;
                    }
                }
            }
        }
        return Ok(PathMatrix(b));
    }
    let m = DMatrix::identity(p, p) - lam.dense();
    let lu = m.clone().lu();
    if lu.determinant().abs() < SINGULAR_TOLERANCE {
        return Err(Error::SingularMatrix);
    }
    let inv = lu.try_inverse().ok_or(Error::SingularMatrix)?;
    Ok(PathMatrix(inv.transpose()))
}

/// Numerical rank by SVD with relative tolerance [`RANK_TOLERANCE`].
pub fn numeric_rank(m: &DMatrix<f64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let max = sv.max();
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOLERANCE * max).count()
}

/// Entries uniform on `[-1, 1]` minus `(-0.05, 0.05)`; `draw` picks an independent stream.
pub fn random_params(g: &MixedGraph, seed: u64, draw: u64) -> ParamMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(draw);
    let values = g
        .directed()
        .iter()
        .map(|_| {
            let mag = rng.random_range(0.05..=1.0);
            if rng.random_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect();
    ParamMatrix::from_values(g, values).expect("one value per edge")
}

fn mode(values: &[usize]) -> usize {
    let mut best = (0, usize::MAX);
    for &x in values {
        let count = values.iter().filter(|&&y| y == x).count();
        if count > best.0 || (count == best.0 && x < best.1) {
            best = (count, x);
        }
    }
    best.1
}

/// Modal rank of `(B_Λ)_{rows, cols}` over [`GENERIC_DRAWS`] random `Λ`.
pub fn generic_block_rank(g: &MixedGraph, rows: &VertexSet, cols: &VertexSet, seed: u64) -> Result<usize> {
    let ranks = (0..GENERIC_DRAWS as u64)
        .map(|d| Ok(numeric_rank(&path_matrix(g, &random_params(g, seed, d))?.block(rows, cols))))
        .collect::<Result<Vec<_>>>()?;
    Ok(mode(&ranks))
}

/// Determinant of `(B_Λ)_{I,J}` next to the signed sum over non-intersecting systems from `J` onto `I`.
pub fn gvl_check(g: &MixedGraph, lam: &ParamMatrix, rows: &VertexSet, cols: &VertexSet) -> Result<(f64, f64)> {
    if rows.len() != cols.len() {
        return Err(Error::SizeMismatch(format!("{} rows but {} columns", rows.len(), cols.len())));
    }
    if !g.is_acyclic() {
        return Err(Error::CyclicGraph);
    }
    let b = path_matrix(g, lam)?;
    let det = b.block(rows, cols).determinant();
    let sum = enumerate_path_systems(g, cols, rows)?
        .iter()
        .map(|s| permutation_sign(&s.target_permutation(rows)) * s.monomial(|u, v| lam.get(u, v)))
        .sum();
    Ok((det, sum))
}

fn permutation_sign(perm: &[usize]) -> f64 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1.0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// `A = (I − Λ̃)ᵀ B_Λ`, entrywise `a_{vu} = b_{vu} − Σ_{w ∈ pa(v) ∩ de(u)} λ̃_{wv} b_{wu}`.
pub fn a_matrix(g: &MixedGraph, lam: &ParamMatrix, lam_tilde: &ParamMatrix) -> Result<DMatrix<f64>> {
    lam_tilde.check_binding(g)?;
    if !g.is_acyclic() {
        return Err(Error::CyclicGraph);
    }
    let b = path_matrix(g, lam)?;
    let p = g.len();
    let de: Vec<VertexSet> = (0..p).map(|u| g.descendants(u)).collect();
    Ok(DMatrix::from_fn(p, p, |v, u| {
        let mut a = b.get(v, u);
        for &w in g.parents(v) {
            if de[u].contains(w) {
                a -= lam_tilde.get(w, v) * b.get(w, u);
            }
        }
        a
    }))
}

/// Coefficient block `[(B_Λ)_{pa(v),R_v}]ᵀ` and right side `[(B_Λ)_{v,R_v}]ᵀ` of the identifying system.
pub fn identifying_system(g: &MixedGraph, lam: &ParamMatrix, v: usize) -> Result<(DMatrix<f64>, Vec<f64>)> {
    let b = path_matrix(g, lam)?;
    let removable = removable_ancestors(g, v)?;
    let pa = g.pa(v);
    let coef = b.block(&pa, &removable).transpose();
    let rhs = removable.iter().map(|r| b.get(v, r)).collect();
    Ok((coef, rhs))
}

fn columns(m: &DMatrix<f64>, pa: &VertexSet, keep: &VertexSet) -> DMatrix<f64> {
    let idx: Vec<usize> = keep.iter().map(|u| pa.as_slice().binary_search(&u).expect("subset of parents")).collect();
    DMatrix::from_fn(m.nrows(), idx.len(), |i, j| m[(i, idx[j])])
}

fn check_parents(g: &MixedGraph, v: usize, s: &VertexSet) -> Result<()> {
    for u in s {
        if !g.has_directed(u, v) {
            return Err(Error::NotAParentSubset { vertex: g.name(u).to_string(), child: g.name(v).to_string() });
        }
    }
    Ok(())
}

/// Dimension of the solution set of the identifying system for column `v`
/// once the coordinates in `pinned` are fixed to their true values.
pub fn fiber_dimension(g: &MixedGraph, lam: &ParamMatrix, v: usize, pinned: &VertexSet) -> Result<usize> {
    g.check_vertex(v)?;
    check_parents(g, v, pinned)?;
    let pa = g.pa(v);
    let (coef, _) = identifying_system(g, lam, v)?;
    let free = pa.difference(pinned);
    Ok(free.len() - numeric_rank(&columns(&coef, &pa, &free)))
}

/// Modal [`fiber_dimension`] over [`GENERIC_DRAWS`] random `Λ`.
pub fn generic_fiber_dimension(g: &MixedGraph, v: usize, pinned: &VertexSet, seed: u64) -> Result<usize> {
    let dims = (0..GENERIC_DRAWS as u64)
        .map(|d| fiber_dimension(g, &random_params(g, seed, d), v, pinned))
        .collect::<Result<Vec<_>>>()?;
    Ok(mode(&dims))
}

/// Whether the `q`-coordinates of column `v` are constant on the solution set
/// of the identifying system with the `known` coordinates pinned.
pub fn coordinates_identified(
    g: &MixedGraph,
    lam: &ParamMatrix,
    v: usize,
    q: &VertexSet,
    known: &VertexSet,
) -> Result<bool> {
    g.check_vertex(v)?;
    check_parents(g, v, q)?;
    check_parents(g, v, known)?;
    let pa = g.pa(v);
    let (coef, _) = identifying_system(g, lam, v)?;
    let free = pa.difference(known);
    let asked = q.difference(known);
    let rest = free.difference(&asked);
    Ok(numeric_rank(&columns(&coef, &pa, &free)) == numeric_rank(&columns(&coef, &pa, &rest)) + asked.len())
}

/// Majority vote of [`coordinates_identified`] over [`GENERIC_DRAWS`] random `Λ`.
pub fn generic_coordinates_identified(
    g: &MixedGraph,
    v: usize,
    q: &VertexSet,
    known: &VertexSet,
    seed: u64,
) -> Result<bool> {
    let mut yes = 0;
    for d in 0..GENERIC_DRAWS as u64 {
        if coordinates_identified(g, &random_params(g, seed, d), v, q, known)? {
            yes += 1;
        }
    }
    Ok(2 * yes > GENERIC_DRAWS)
}

/// Whether `lam` lies where `(B_Λ)^v` drops below its generic rank `r^v_{pa(v)}`.
pub fn nongeneric_locus_check(g: &MixedGraph, lam: &ParamMatrix, v: usize) -> Result<bool> {
    let (coef, _) = identifying_system(g, lam, v)?;
    Ok(numeric_rank(&coef) < v_rank(g, v, &g.pa(v))?)
}

/// Identifiability of `Λ` on a graph without bidirected edges, cycles allowed,
/// by searching for row permutations of `(I − Λ)ᵀ` that stay inside the graph.
///
/// With independent errors, `Λ̃` is equivalent to `Λ` iff `(I − Λ̃)ᵀ` is a
/// rescaled row permutation of `(I − Λ)ᵀ` with unit diagonal. For generic `Λ`
/// row `σ(v)` may sit at position `v` exactly when `σ(v) = v`, or `v → σ(v)`
/// and `{σ(v)} ∪ pa(σ(v)) ⊆ {v} ∪ pa(v)`. `Λ` is identifiable iff the identity
/// is the only admissible permutation.
pub fn permutation_oracle_identifiable(g: &MixedGraph) -> Result<bool> {
    if !g.bidirected().is_empty() {
        return Err(Error::Invalid("permutation oracle needs a graph without bidirected edges".into()));
    }
    let p = g.len();
    let admissible: Vec<Vec<usize>> = (0..p)
        .map(|v| {
            let mut own = g.pa(v);
            own.insert(v);
            let mut ok = vec![v];
            for &w in g.children(v) {
                let mut row = g.pa(w);
                row.insert(w);
                if row.is_subset(&own) {
                    ok.push(w);
                }
            }
            ok
        })
        .collect();
    let mut taken = vec![false; p];
    Ok(!non_identity_exists(&admissible, 0, &mut taken, false))
}

fn non_identity_exists(admissible: &[Vec<usize>], v: usize, taken: &mut [bool], moved: bool) -> bool {
    if v == admissible.len() {
        return moved;
    }
    for &w in &admissible[v] {
        if taken[w] {
            continue;
        }
        taken[w] = true;
        let found = non_identity_exists(admissible, v + 1, taken, moved || w != v);
        taken[w] = false;
        if found {
            return true;
        }
    }
    false
}
