//! Finite-`n` evidence for the open questions about `sp(BP_n)`: which
//! integers in `[−(n−1), n]` are eigenvalues, and the gap `n − λ₂`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::dense::{dense_spectrum, Spectrum, CLUSTER_TOLERANCE, RESIDUAL_FACTOR};
use super::lanczos::{lanczos_extremal, LanczosOptions, RESIDUAL_TOLERANCE};
use super::theorem::{integer_eigenvalues_in, lift_and_verify_with, theorem_eigenpairs};
use super::Method;
use crate::error::{Error, Result};
use crate::exact::{exact_nullspace, ExactMatrix, ExactVector};
use crate::graphs::CayleyGraph;
use crate::quotient::{plain_quotient_sum, position_partition};

/// Largest `n` whose full adjacency spectrum is computed densely.
pub const MAX_DENSE_N: usize = 5;
/// Exact absence proofs (`ker(A − λI) = 0`) only up to this many vertices.
pub const MAX_EXACT_ABSENCE_VERTICES: usize = 400;

fn unsupported(op: &'static str, n: usize, min: usize, max: usize) -> Error {
    Error::UnsupportedN { op, n, min, max }
}

/// Dense spectrum of the adjacency of `BP_n`.
pub fn burnt_dense_spectrum(n: usize) -> Result<Spectrum> {
    if !(1..=MAX_DENSE_N).contains(&n) {
        return Err(unsupported("burnt_dense_spectrum", n, 1, MAX_DENSE_N));
    }
    let a = CayleyGraph::burnt(n)?.build_sparse_adjacency()?;
    dense_spectrum(&a.to_dense())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub n: usize,
    /// Fixed to the degree by regularity.
    pub lambda1: f64,
    pub lambda2: f64,
    pub gap: f64,
    pub method: Method,
    /// Residual of the eigenpair(s) behind `lambda2`.
    pub residual: f64,
    /// Bound the residual was required to meet.
    pub tolerance: f64,
}

impl GapReport {
    /// `0 < gap < 1`.
    pub fn in_unit_interval(&self) -> bool {
        self.gap > 0.0 && self.gap < 1.0
    }
}

pub fn gap_from_spectrum(n: usize, spectrum: &Spectrum) -> GapReport {
    let lambda2 = spectrum.eigenvalues[1];
    GapReport {
        n,
        lambda1: n as f64,
        lambda2,
        gap: n as f64 - lambda2,
        method: Method::Dense,
        residual: spectrum.max_residual,
        tolerance: RESIDUAL_FACTOR * spectrum.dimension() as f64,
    }
}

/// `λ₂` from Lanczos deflated against the all-ones Perron vector, with an
/// absolute residual of at most `1e-8` (`‖A‖₁ = n`).
pub fn lanczos_gap(n: usize) -> Result<GapReport> {
    let a = CayleyGraph::burnt(n)?.build_sparse_adjacency()?;
    let mut opts = LanczosOptions::top(1).orthogonal_to(vec![1.0; a.dimension()]);
    opts.tolerance = RESIDUAL_TOLERANCE / n.max(1) as f64;
    let r = lanczos_extremal(&a, &opts)?;
    let top = r.values[0];
    Ok(GapReport {
        n,
        lambda1: n as f64,
        lambda2: top.value,
        gap: n as f64 - top.value,
        method: Method::Lanczos,
        residual: top.residual,
        tolerance: r.residual_bound,
    })
}

/// Dense for `n ≤ 4`, Lanczos for `n = 5, 6`.
pub fn spectral_gap(n: usize) -> Result<GapReport> {
    match n {
        2..=4 => Ok(gap_from_spectrum(n, &burnt_dense_spectrum(n)?)),
        5 | 6 => lanczos_gap(n),
        _ => Err(unsupported("spectral_gap", n, 2, 6)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// A quotient certificate lifted and checked exactly on `BP_n`.
    LiftedCertificate,
    /// Nearest dense eigenvalue within `tolerance`.
    DenseMatch {
        distance: f64,
        multiplicity: usize,
        tolerance: f64,
    },
    /// Nearest dense eigenvalue farther than `tolerance`.
    DenseAbsent { distance: f64, tolerance: f64 },
    /// `A − λI` is nonsingular in exact arithmetic.
    ExactAbsent,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegerEntry {
    pub lambda: i64,
    pub present: bool,
    pub method: Method,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegerScan {
    pub n: usize,
    pub entries: Vec<IntegerEntry>,
    pub absent: Vec<i64>,
}

impl IntegerScan {
    pub fn all_present(&self) -> bool {
        self.absent.is_empty()
    }
}

/// Scans `[−(n−1), n]`, `3 ≤ n ≤ 5`, against a precomputed dense spectrum.
pub fn integer_membership_scan_with(n: usize, spectrum: &Spectrum) -> Result<IntegerScan> {
    if !(3..=MAX_DENSE_N).contains(&n) {
        return Err(unsupported("integer_membership_scan", n, 3, MAX_DENSE_N));
    }
    let graph = CayleyGraph::burnt(n)?;
    if spectrum.dimension() != graph.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.vertex_count(),
            got: spectrum.dimension(),
        });
    }
    let partition = position_partition(n)?;
    let certs = theorem_eigenpairs(n)?;
    let mut dense_a: Option<ExactMatrix> = None;
    let mut entries = Vec::new();
    for lambda in -(n as i64 - 1)..=n as i64 {
        let entry = if let Some(c) = certs.iter().find(|c| c.lambda == lambda) {
            lift_and_verify_with(&graph, &partition, c)?;
            IntegerEntry {
                lambda,
                present: true,
                method: Method::Exact,
                evidence: Evidence::LiftedCertificate,
            }
        } else {
            let distance = spectrum.distance_to(lambda as f64);
            if distance <= CLUSTER_TOLERANCE {
                IntegerEntry {
                    lambda,
                    present: true,
                    method: Method::Dense,
                    evidence: Evidence::DenseMatch {
                        distance,
                        multiplicity: spectrum.multiplicity_near(lambda as f64, CLUSTER_TOLERANCE),
                        tolerance: CLUSTER_TOLERANCE,
                    },
                }
            } else if graph.vertex_count() <= MAX_EXACT_ABSENCE_VERTICES {
                let a = dense_a.get_or_insert_with(|| exact_adjacency(&graph));
                let shifted = a.shift(&BigRational::from_integer(BigInt::from(lambda)))?;
                if !exact_nullspace(&shifted).is_empty() {
                    return Err(Error::Verification(format!(
                        "λ = {lambda} is in ker(A − λI) but {distance:e} from every dense eigenvalue"
                    )));
                }
                IntegerEntry {
                    lambda,
                    present: false,
                    method: Method::Exact,
                    evidence: Evidence::ExactAbsent,
                }
            } else {
                IntegerEntry {
                    lambda,
                    present: false,
                    method: Method::Dense,
                    evidence: Evidence::DenseAbsent {
                        distance,
                        tolerance: CLUSTER_TOLERANCE,
                    },
                }
            }
        };
        entries.push(entry);
    }
    let absent = entries
        .iter()
        .filter(|e| !e.present)
        .map(|e| e.lambda)
        .collect();
    Ok(IntegerScan { n, entries, absent })
}

pub fn integer_membership_scan(n: usize) -> Result<IntegerScan> {
    if !(3..=MAX_DENSE_N).contains(&n) {
        return Err(unsupported("integer_membership_scan", n, 3, MAX_DENSE_N));
    }
    integer_membership_scan_with(n, &burnt_dense_spectrum(n)?)
}

fn exact_adjacency(graph: &CayleyGraph) -> ExactMatrix {
    let n = graph.vertex_count();
    let mut m = ExactMatrix::zeros(n, n);
    let one = BigRational::from_integer(BigInt::from(1));
    for u in 0..n {
        for v in graph.neighbors(u).expect("vertex in range") {
            m.add_at(u, v, &one);
        }
    }
    m
}

/// Integer eigenvalues of the plain pancake quotient `Σ_{i≥2} P(r_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlainCrosscheck {
    pub n: usize,
    pub expected: Vec<i64>,
    pub found: Vec<(i64, ExactVector)>,
    pub missing: Vec<i64>,
}

impl PlainCrosscheck {
    pub fn passed(&self) -> bool {
        self.missing.is_empty()
    }
}

/// Checks `[−1, n−1] ∖ {⌊(n−2)/2⌋}` by exact nullspaces, `3 ≤ n ≤ 8`.
pub fn plain_quotient_crosscheck(n: usize) -> Result<PlainCrosscheck> {
    if !(3..=8).contains(&n) {
        return Err(unsupported("plain_quotient_crosscheck", n, 3, 8));
    }
    let q = plain_quotient_sum(n)?;
    let skip = ((n - 2) / 2) as i64;
    let expected: Vec<i64> = (-1..=n as i64 - 1).filter(|&x| x != skip).collect();
    let found = integer_eigenvalues_in(&q, -1..=n as i64 - 1)?;
    let missing = expected
        .iter()
        .copied()
        .filter(|x| !found.iter().any(|(l, _)| l == x))
        .collect();
    Ok(PlainCrosscheck {
        n,
        expected,
        found,
        missing,
    })
}
