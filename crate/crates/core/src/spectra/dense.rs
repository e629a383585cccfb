use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest dimension accepted by [`dense_spectrum`].
pub const MAX_DENSE_DIMENSION: usize = 5000;
/// Default clustering tolerance for multiplicities.
pub const CLUSTER_TOLERANCE: f64 = 1e-6;
/// Per-pair residual bound `‖Mv − λv‖∞ ≤ RESIDUAL_FACTOR · dimension`.
pub const RESIDUAL_FACTOR: f64 = 1e-9;

/// Distinct eigenvalue with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: usize,
}

/// Sorted spectrum of a real symmetric matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    /// All eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Distinct values, descending.
    pub clusters: Vec<Cluster>,
    pub tolerance: f64,
    /// Largest `‖Mv − λv‖∞` over all computed pairs.
    pub max_residual: f64,
}

impl Spectrum {
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>, tolerance: f64, max_residual: f64) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        let clusters = cluster(&eigenvalues, tolerance);
        Self {
            eigenvalues,
            clusters,
            tolerance,
            max_residual,
        }
    }

    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Number of eigenvalues within `tol` of `x`.
    pub fn multiplicity_near(&self, x: f64, tol: f64) -> usize {
        self.eigenvalues
            .iter()
            .filter(|&&e| (e - x).abs() <= tol)
            .count()
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.multiplicity_near(x, tol) > 0
    }

    /// Distance from `x` to the nearest eigenvalue.
    pub fn distance_to(&self, x: f64) -> f64 {
        self.eigenvalues
            .iter()
            .map(|e| (e - x).abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Second largest distinct value.
    pub fn second_distinct(&self) -> Option<f64> {
        self.clusters.get(1).map(|c| c.value)
    }

    /// `value,multiplicity` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("value,multiplicity\n");
        for c in &self.clusters {
            s.push_str(&format!("{:.12},{}\n", c.value, c.multiplicity));
        }
        s
    }
}

/// Groups a descending list: a new cluster starts whenever the gap to the
/// previous value exceeds `tol`. Cluster value is the mean of its members.
pub fn cluster(sorted_desc: &[f64], tol: f64) -> Vec<Cluster> {
    let mut out: Vec<Cluster> = Vec::new();
    let mut sum = 0.0;
    let mut prev = f64::NAN;
    for &e in sorted_desc {
        let start_new = out.is_empty() || (prev - e) > tol;
        if start_new {
            if let Some(last) = out.last_mut() {
                last.value = sum / last.multiplicity as f64;
            }
            out.push(Cluster {
                value: e,
                multiplicity: 1,
            });
            sum = e;
        } else {
            let last = out.last_mut().unwrap();
            last.multiplicity += 1;
            sum += e;
        }
        prev = e;
    }
    if let Some(last) = out.last_mut() {
        last.value = sum / last.multiplicity as f64;
    }
    out
}

/// Full symmetric eigendecomposition, with every pair's residual checked.
pub fn dense_spectrum(m: &DMatrix<f64>) -> Result<Spectrum> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::NotSymmetric);
    }
    if n > MAX_DENSE_DIMENSION {
        return Err(Error::BudgetExceeded {
            what: "dense eigensolver dimension",
            requested: n as u128,
            limit: MAX_DENSE_DIMENSION as u128,
        });
    }
    let scale = m.amax().max(1.0);
    for i in 0..n {
        for j in 0..i {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::NotSymmetric);
            }
        }
    }
    let eig = m.clone().symmetric_eigen();
    let mut residual = m * &eig.eigenvectors;
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        let mut col = residual.column_mut(j);
        col.axpy(-lambda, &eig.eigenvectors.column(j), 1.0);
    }
    let max_residual = residual.amax();
    let bound = RESIDUAL_FACTOR * n as f64;
    if max_residual > bound {
        return Err(Error::Verification(format!(
            "dense eigensolver residual {max_residual:e} exceeds {bound:e}"
        )));
    }
    Ok(Spectrum::from_eigenvalues(
        eig.eigenvalues.iter().copied().collect(),
        CLUSTER_TOLERANCE,
        max_residual,
    ))
}
