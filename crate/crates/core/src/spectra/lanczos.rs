//! Lanczos iteration with full reorthogonalization for the top of the
//! spectrum of a large symmetric operator.
//!
//! Plain Krylov iteration sees only one copy of a repeated eigenvalue, so the
//! top `k` pairs are found one at a time: each run is deflated against the
//! caller's `orthogonal_to` vector and every pair locked by earlier runs.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{CayleyGraph, SparseAdjacency};

pub const MAX_ITERATIONS: usize = 3000;
pub const MAX_K: usize = 20;
pub const DEFAULT_SEED: u64 = 0x5eed_0b9e;
/// Relative residual target, scaled by `‖A‖₁`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

/// Real symmetric linear operator given by its action on vectors.
pub trait SymmetricOperator: Sync {
    fn dimension(&self) -> usize;
    /// `y = A x`.
    fn apply(&self, x: &[f64], y: &mut [f64]);
    /// `‖A‖₁` or an upper bound on it.
    fn norm_one(&self) -> f64;
}

impl SymmetricOperator for SparseAdjacency {
    fn dimension(&self) -> usize {
        SparseAdjacency::dimension(self)
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.mul_vec(x, y);
    }

    fn norm_one(&self) -> f64 {
        (0..SparseAdjacency::dimension(self))
            .map(|u| self.row(u).len())
            .max()
            .unwrap_or(0) as f64
    }
}

/// Matrix-free operator that recomputes neighbors on every product.
impl SymmetricOperator for CayleyGraph {
    fn dimension(&self) -> usize {
        self.vertex_count()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        use rayon::prelude::*;
        y.par_iter_mut().enumerate().for_each(|(u, yu)| {
            *yu = self
                .neighbors(u)
                .expect("vertex in range")
                .into_iter()
                .map(|v| x[v])
                .sum();
        });
    }

    fn norm_one(&self) -> f64 {
        self.degree() as f64
    }
}

impl SymmetricOperator for DMatrix<f64> {
    fn dimension(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    fn norm_one(&self) -> f64 {
        self.column_iter()
            .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct LanczosOptions {
    pub k: usize,
    pub orthogonal_to: Option<Vec<f64>>,
    pub seed: u64,
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl LanczosOptions {
    pub fn top(k: usize) -> Self {
        Self {
            k,
            orthogonal_to: None,
            seed: DEFAULT_SEED,
            max_iterations: MAX_ITERATIONS,
            tolerance: RESIDUAL_TOLERANCE,
        }
    }

    pub fn orthogonal_to(mut self, v: Vec<f64>) -> Self {
        self.orthogonal_to = Some(v);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RitzValue {
    pub value: f64,
    /// `‖A x − θ x‖₂` for the unit Ritz vector `x`.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LanczosReport {
    /// Descending.
    pub values: Vec<RitzValue>,
    pub norm_one: f64,
    /// Absolute residual bound every value satisfies, `tolerance · ‖A‖₁`.
    pub residual_bound: f64,
    pub seed: u64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn project_out(w: &mut [f64], basis: &[Vec<f64>]) {
    for q in basis {
        let c = dot(q, w);
        axpy(-c, q, w);
    }
}

/// Top eigenvalues of `op`, each with a verified residual.
pub fn lanczos_extremal<O: SymmetricOperator + ?Sized>(
    op: &O,
    options: &LanczosOptions,
) -> Result<LanczosReport> {
    let dim = op.dimension();
    if options.k == 0 || options.k > MAX_K {
        return Err(Error::DimensionMismatch {
            expected: MAX_K,
            got: options.k,
        });
    }
    let mut locked: Vec<Vec<f64>> = Vec::new();
    if let Some(v) = &options.orthogonal_to {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.len(),
            });
        }
        let nv = norm(v);
        if nv > 0.0 {
            locked.push(v.iter().map(|x| x / nv).collect());
        }
    }
    if options.k + locked.len() > dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: options.k + locked.len(),
        });
    }
    let norm_one = op.norm_one().max(f64::MIN_POSITIVE);
    let bound = options.tolerance * norm_one;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut values = Vec::with_capacity(options.k);
    for _ in 0..options.k {
        let (theta, x, residual, iterations) =
            top_pair(op, &locked, &mut rng, options.max_iterations, bound)?;
        values.push(RitzValue {
            value: theta,
            residual,
            iterations,
        });
        locked.push(x);
    }
    values.sort_by(|a, b| b.value.total_cmp(&a.value));
    Ok(LanczosReport {
        values,
        norm_one,
        residual_bound: bound,
        seed: options.seed,
    })
}

/// One deflated Lanczos run for the largest eigenvalue of `op` restricted to
/// the complement of `deflate` (orthonormal).
fn top_pair<O: SymmetricOperator + ?Sized>(
    op: &O,
    deflate: &[Vec<f64>],
    rng: &mut ChaCha8Rng,
    max_iterations: usize,
    bound: f64,
) -> Result<(f64, Vec<f64>, f64, usize)> {
    let dim = op.dimension();
    let cap = max_iterations.min(dim - deflate.len());
    let mut q: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    project_out(&mut q, deflate);
    project_out(&mut q, deflate);
    let nq = norm(&q);
    q.iter_mut().for_each(|x| *x /= nq);

    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; dim];
    let mut best = f64::INFINITY;
    let breakdown = 1e-12 * op.norm_one().max(1.0);

    for j in 0..cap {
        op.apply(&basis[j], &mut w);
        let a = dot(&basis[j], &w);
        axpy(-a, &basis[j], &mut w);
        if j > 0 {
            axpy(-beta[j - 1], &basis[j - 1], &mut w);
        }
        for _ in 0..2 {
            project_out(&mut w, deflate);
            project_out(&mut w, &basis);
        }
        alpha.push(a);
        let b = norm(&w);
        let exhausted = b < breakdown || j + 1 == cap;

        if exhausted || j % 5 == 4 {
            let m = j + 1;
            let mut t = DMatrix::zeros(m, m);
            for i in 0..m {
                t[(i, i)] = alpha[i];
                if i + 1 < m {
                    t[(i, i + 1)] = beta[i];
                    t[(i + 1, i)] = beta[i];
                }
            }
            let eig = SymmetricEigen::new(t);
            let (top, theta) = eig
                .eigenvalues
                .iter()
                .copied()
                .enumerate()
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .expect("nonempty tridiagonal");
            let s = eig.eigenvectors.column(top);
            let estimate = b * s[m - 1].abs();
            if estimate <= bound || exhausted {
                let mut x = vec![0.0; dim];
                for (i, qi) in basis.iter().enumerate() {
                    axpy(s[i], qi, &mut x);
                }
                let nx = norm(&x);
                x.iter_mut().for_each(|v| *v /= nx);
                let mut ax = vec![0.0; dim];
                op.apply(&x, &mut ax);
                axpy(-theta, &x, &mut ax);
                let residual = norm(&ax);
                best = best.min(residual);
                if residual <= bound {
                    return Ok((theta, x, residual, m));
                }
                if exhausted {
                    break;
                }
            }
        }
        beta.push(b);
        w.iter_mut().for_each(|x| *x /= b);
        basis.push(std::mem::replace(&mut w, vec![0.0; dim]));
    }
    Err(Error::NonConvergence {
        iterations: alpha.len(),
        best_residual: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::dense::dense_spectrum;
    use std::f64::consts::SQRT_2;

    fn adjacency(n: usize) -> SparseAdjacency {
        CayleyGraph::burnt(n)
            .unwrap()
            .build_sparse_adjacency()
            .unwrap()
    }

    #[test]
    fn perron_value_bp3() {
        let r = lanczos_extremal(&adjacency(3), &LanczosOptions::top(1)).unwrap();
        assert!((r.values[0].value - 3.0).abs() < 1e-8);
        assert!(r.values[0].residual <= r.residual_bound);
    }

    #[test]
    fn bp2_top_three_with_multiplicity() {
        let r = lanczos_extremal(&adjacency(2), &LanczosOptions::top(3)).unwrap();
        let v: Vec<f64> = r.values.iter().map(|x| x.value).collect();
        assert!((v[0] - 2.0).abs() < 1e-8);
        assert!((v[1] - SQRT_2).abs() < 1e-8);
        assert!((v[2] - SQRT_2).abs() < 1e-8);
    }

    #[test]
    fn deflated_bp4_matches_dense_second_value() {
        let a = adjacency(4);
        let dense = dense_spectrum(&a.to_dense()).unwrap();
        let opts = LanczosOptions::top(1).orthogonal_to(vec![1.0; 384]);
        let r = lanczos_extremal(&a, &opts).unwrap();
        assert!((r.values[0].value - dense.eigenvalues[1]).abs() < 1e-6);
    }

    #[test]
    fn implicit_operator_agrees_with_explicit() {
        let g = CayleyGraph::burnt(3).unwrap();
        let opts = LanczosOptions::top(2);
        let a = lanczos_extremal(&g, &opts).unwrap();
        let b = lanczos_extremal(&adjacency(3), &opts).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x.value - y.value).abs() < 1e-8);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let opts = LanczosOptions::top(2).orthogonal_to(vec![1.0; 48]);
        let a = lanczos_extremal(&adjacency(3), &opts).unwrap();
        let b = lanczos_extremal(&adjacency(3), &opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn perron_check_through_5() {
        for n in 1..=5 {
            let r = lanczos_extremal(&adjacency(n), &LanczosOptions::top(1)).unwrap();
            assert!((r.values[0].value - n as f64).abs() < 1e-8, "n = {n}");
        }
    }

    #[test]
    fn rejects_bad_requests() {
        let a = adjacency(2);
        assert!(lanczos_extremal(&a, &LanczosOptions::top(0)).is_err());
        assert!(lanczos_extremal(&a, &LanczosOptions::top(21)).is_err());
        let short = LanczosOptions::top(1).orthogonal_to(vec![1.0; 3]);
        assert!(lanczos_extremal(&a, &short).is_err());
    }

    #[test]
    fn dense_operator() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0]);
        let r = lanczos_extremal(&m, &LanczosOptions::top(1)).unwrap();
        assert!((r.values[0].value - (2.0 + SQRT_2)).abs() < 1e-8);
    }
}
