//! The four-vertex weighted projection `B̃` of `BP_n` and the covering
//! conditions it is claimed to satisfy.
//!
//! Self-loops count once: a loop of weight `c` adds `c` to the degree and `c`
//! to the adjacency diagonal, so `L = D − A` has zero row sums.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{characteristic_polynomial, rational_json, rational_roots, ExactMatrix};
use crate::graphs::CayleyGraph;
use crate::quotient::{
    compute_quotient, fiber_partition, merged_fiber_partition, verify_equitable, VertexPartition,
};
use crate::spectra::dense::{dense_spectrum, Spectrum, CLUSTER_TOLERANCE};
use crate::spectra::scans::burnt_dense_spectrum;

/// Exhaustive covering checks materialize `BP_n` up to this size.
pub const MAX_CHECK_N: usize = 5;
/// Tolerance for the numeric `ℒ(B̃)` eigenvalues.
pub const LAPLACIAN_TOLERANCE: f64 = 1e-10;

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn ser_rat<S: Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    rational_json(v).serialize(s)
}

fn ser_opt_rat<S: Serializer>(
    v: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    v.as_ref().map(rational_json).serialize(s)
}

/// Small graph with symmetric nonnegative rational weights, loops allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    weights: ExactMatrix,
    labels: Vec<String>,
}

impl WeightedGraph {
    pub fn new(weights: ExactMatrix, labels: Vec<String>) -> Result<Self> {
        if !weights.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if labels.len() != weights.rows() {
            return Err(Error::DimensionMismatch {
                expected: weights.rows(),
                got: labels.len(),
            });
        }
        for i in 0..weights.rows() {
            for j in 0..weights.cols() {
                if *weights.get(i, j) < BigRational::zero() {
                    return Err(Error::Verification(format!(
                        "negative weight at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { weights, labels })
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.rows()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weight(&self, u: usize, v: usize) -> &BigRational {
        self.weights.get(u, v)
    }

    /// Weighted adjacency, loops on the diagonal.
    pub fn adjacency(&self) -> &ExactMatrix {
        &self.weights
    }

    pub fn degree(&self, u: usize) -> BigRational {
        (0..self.vertex_count()).map(|v| self.weight(u, v)).sum()
    }

    pub fn degrees(&self) -> Vec<BigRational> {
        (0..self.vertex_count()).map(|u| self.degree(u)).collect()
    }

    fn positive_degrees(&self) -> Result<Vec<BigRational>> {
        let d = self.degrees();
        if let Some(u) = d.iter().position(Zero::is_zero) {
            return Err(Error::ZeroDegree(u));
        }
        Ok(d)
    }
}

/// `B̃`: loops `n−1` at `v1, v2`, `2` at `v3`, `2(n−2)(n−1)` at `v4`; edges
/// `v1v3 = v2v3 = 1`, `v3v4 = 2(n−2)`.
pub fn build_btilde(n: usize) -> Result<WeightedGraph> {
    if n < 3 {
        return Err(Error::UnsupportedN {
            op: "build_btilde",
            n,
            min: 3,
            max: usize::MAX,
        });
    }
    let k = n as i64;
    let rows = vec![
        vec![k - 1, 0, 1, 0],
        vec![0, k - 1, 1, 0],
        vec![1, 1, 2, 2 * (k - 2)],
        vec![0, 0, 2 * (k - 2), 2 * (k - 2) * (k - 1)],
    ];
    let labels = ["v1", "v2", "v3", "v4"].map(String::from).to_vec();
    WeightedGraph::new(ExactMatrix::from_integer_rows(&rows)?, labels)
}

/// `L = D − A`.
pub fn laplacian(g: &WeightedGraph) -> Result<ExactMatrix> {
    let d = g.positive_degrees()?;
    let mut l = ExactMatrix::zeros(g.vertex_count(), g.vertex_count());
    for i in 0..g.vertex_count() {
        for j in 0..g.vertex_count() {
            let mut v = -g.weight(i, j).clone();
            if i == j {
                v += &d[i];
            }
            l.set(i, j, v);
        }
    }
    Ok(l)
}

/// `D^{-1} L`, similar to `ℒ` and rational, used for exact eigenvalues.
pub fn random_walk_laplacian(g: &WeightedGraph) -> Result<ExactMatrix> {
    let d = g.positive_degrees()?;
    let l = laplacian(g)?;
    let mut m = l.clone();
    for i in 0..g.vertex_count() {
        for j in 0..g.vertex_count() {
            m.set(i, j, l.get(i, j) / &d[i]);
        }
    }
    Ok(m)
}

/// `ℒ = D^{-1/2} L D^{-1/2}`.
pub fn normalized_laplacian(g: &WeightedGraph) -> Result<DMatrix<f64>> {
    let d: Vec<f64> = g
        .positive_degrees()?
        .iter()
        .map(|x| x.to_f64().unwrap_or(f64::NAN))
        .collect();
    let l = laplacian(g)?.to_f64();
    let k = g.vertex_count();
    Ok(DMatrix::from_fn(k, k, |i, j| {
        l[(i, j)] / (d[i] * d[j]).sqrt()
    }))
}

/// Surjection from `BP_n` (unit weights) onto a weighted target via fibers.
#[derive(Debug, Clone)]
pub struct CoveringMap {
    graph: CayleyGraph,
    target: WeightedGraph,
    fibers: VertexPartition,
}

impl CoveringMap {
    pub fn new(graph: CayleyGraph, target: WeightedGraph, fibers: VertexPartition) -> Result<Self> {
        if fibers.vertex_count() != graph.vertex_count() {
            return Err(Error::DimensionMismatch {
                expected: graph.vertex_count(),
                got: fibers.vertex_count(),
            });
        }
        if fibers.class_count() != target.vertex_count() {
            return Err(Error::DimensionMismatch {
                expected: target.vertex_count(),
                got: fibers.class_count(),
            });
        }
        Ok(Self {
            graph,
            target,
            fibers,
        })
    }

    pub fn graph(&self) -> &CayleyGraph {
        &self.graph
    }

    pub fn target(&self) -> &WeightedGraph {
        &self.target
    }

    pub fn fibers(&self) -> &VertexPartition {
        &self.fibers
    }

    /// Image of a source vertex.
    pub fn image(&self, vertex: usize) -> usize {
        self.fibers.class_of(vertex)
    }
}

/// F1–F4 onto `v1`–`v4` of `B̃`.
pub fn fiber_map(n: usize) -> Result<CoveringMap> {
    CoveringMap::new(
        CayleyGraph::burnt(n)?,
        build_btilde(n)?,
        fiber_partition(n)?,
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub vertex: String,
    pub sum: usize,
}

/// Condition (1) for one fiber and one target vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberWeightCheck {
    pub fiber: String,
    pub target: String,
    pub passed: bool,
    /// The shared sum when the check passes.
    pub common_sum: Option<usize>,
    pub witnesses: Option<(Witness, Witness)>,
}

/// Condition (2) for one unordered pair of target vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexCheck {
    pub a: String,
    pub b: String,
    /// `Σ_{u ∈ p⁻¹(a), v ∈ p⁻¹(b)} w(u, v)` over ordered pairs.
    #[serde(serialize_with = "ser_rat")]
    pub total: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub weight: BigRational,
    /// `total / weight` when the target edge has positive weight.
    #[serde(serialize_with = "ser_opt_rat")]
    pub quotient: Option<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoveringReport {
    pub n: usize,
    pub condition1: Vec<FiberWeightCheck>,
    pub condition2: Vec<IndexCheck>,
    /// Single index `m` if every weighted target edge agrees.
    #[serde(serialize_with = "ser_opt_rat")]
    pub index: Option<BigRational>,
    pub inconsistencies: Vec<String>,
}

impl CoveringReport {
    pub fn condition1_holds(&self) -> bool {
        self.condition1.iter().all(|c| c.passed)
    }

    pub fn condition1_failures(&self) -> Vec<(&str, &str)> {
        self.condition1
            .iter()
            .filter(|c| !c.passed)
            .map(|c| (c.fiber.as_str(), c.target.as_str()))
            .collect()
    }
}

/// Evaluates both covering conditions literally over every source vertex.
pub fn check_covering(map: &CoveringMap) -> Result<CoveringReport> {
    let g = &map.graph;
    if g.n() > MAX_CHECK_N {
        return Err(Error::UnsupportedN {
            op: "check_covering",
            n: g.n(),
            min: 1,
            max: MAX_CHECK_N,
        });
    }
    let k = map.target.vertex_count();
    let fiber_labels = map.fibers.labels();
    let target_labels = map.target.labels();

    // first[a][t]: first vertex of fiber a and its neighbor count into fiber t.
    let mut first: Vec<Vec<Option<(usize, usize)>>> = vec![vec![None; k]; k];
    // (vertex, sum, vertex, sum) for the first disagreement.
    type Disagreement = (usize, usize, usize, usize);
    let mut witness: Vec<Vec<Option<Disagreement>>> = vec![vec![None; k]; k];
    let mut totals = vec![vec![0u64; k]; k];
    for u in 0..g.vertex_count() {
        let a = map.image(u);
        let mut counts = vec![0usize; k];
        for v in g.neighbors(u)? {
            counts[map.image(v)] += 1;
        }
        for t in 0..k {
            totals[a][t] += counts[t] as u64;
            match first[a][t] {
                None => first[a][t] = Some((u, counts[t])),
                Some((w, c)) if c != counts[t] && witness[a][t].is_none() => {
                    witness[a][t] = Some((w, c, u, counts[t]));
                }
                _ => {}
            }
        }
    }

    let mut condition1 = Vec::new();
    for a in 0..k {
        for t in 0..k {
            let check = match witness[a][t] {
                None => FiberWeightCheck {
                    fiber: fiber_labels[a].clone(),
                    target: target_labels[t].clone(),
                    passed: true,
                    common_sum: first[a][t].map(|(_, c)| c),
                    witnesses: None,
                },
                Some((w1, c1, w2, c2)) => FiberWeightCheck {
                    fiber: fiber_labels[a].clone(),
                    target: target_labels[t].clone(),
                    passed: false,
                    common_sum: None,
                    witnesses: Some((
                        Witness {
                            vertex: g.vertex(w1)?.to_string(),
                            sum: c1,
                        },
                        Witness {
                            vertex: g.vertex(w2)?.to_string(),
                            sum: c2,
                        },
                    )),
                },
            };
            condition1.push(check);
        }
    }

    let mut condition2 = Vec::new();
    let mut inconsistencies = Vec::new();
    let mut index: Option<BigRational> = None;
    let mut consistent = true;
    for a in 0..k {
        for b in a..k {
            let total = int(totals[a][b] as i64);
            let weight = map.target.weight(a, b).clone();
            let quotient = if weight.is_zero() {
                if !total.is_zero() {
                    inconsistencies.push(format!(
                        "{}–{}: zero target weight but fiber total {total}",
                        target_labels[a], target_labels[b]
                    ));
                    consistent = false;
                }
                None
            } else {
                let q = &total / &weight;
                match &index {
                    None => index = Some(q.clone()),
                    Some(m) if *m != q => {
                        inconsistencies.push(format!(
                            "{}–{}: index {q} differs from {m}",
                            target_labels[a], target_labels[b]
                        ));
                        consistent = false;
                    }
                    _ => {}
                }
                Some(q)
            };
            condition2.push(IndexCheck {
                a: target_labels[a].clone(),
                b: target_labels[b].clone(),
                total,
                weight,
                quotient,
            });
        }
    }
    Ok(CoveringReport {
        n: g.n(),
        condition1,
        condition2,
        index: if consistent { index } else { None },
        inconsistencies,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactRoot {
    #[serde(serialize_with = "ser_rat")]
    pub value: BigRational,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BtildeSpectrumReport {
    pub n: usize,
    /// Ascending eigenvalues of `ℒ(B̃)`.
    pub numeric: Vec<f64>,
    pub expected: Vec<f64>,
    pub max_error: f64,
    pub tolerance: f64,
    /// Rational roots of `det(xI − D⁻¹L)`, descending.
    pub exact_roots: Vec<ExactRoot>,
    pub exact_match: bool,
    /// `μ = n(1 − λ)`, descending.
    pub converted: Vec<f64>,
    pub trace: f64,
    pub expected_trace: f64,
}

impl BtildeSpectrumReport {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance && self.exact_match
    }
}

/// Eigenvalues of `ℒ(B̃)` against `{0, 1/n, 1/n, 1}`, numerically and exactly.
pub fn btilde_spectrum_check(n: usize) -> Result<BtildeSpectrumReport> {
    let g = build_btilde(n)?;
    let l = normalized_laplacian(&g)?;
    let trace = l.trace();
    let lap = dense_spectrum(&l)?;
    let mut numeric = lap.eigenvalues.clone();
    numeric.reverse();
    let inv = 1.0 / n as f64;
    let expected = vec![0.0, inv, inv, 1.0];
    let max_error = numeric
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let poly = characteristic_polynomial(&random_walk_laplacian(&g)?)?;
    let (roots, rest) = rational_roots(&poly)
        .ok_or_else(|| Error::Verification("characteristic polynomial too large".into()))?;
    let one_over_n = BigRational::new(BigInt::from(1), BigInt::from(n as i64));
    let want = vec![(int(1), 1), (one_over_n, 2), (BigRational::zero(), 1)];
    let exact_match = rest.degree() == 0 && roots == want;
    let converted = lap
        .eigenvalues
        .iter()
        .map(|l| n as f64 * (1.0 - l))
        .rev()
        .collect();
    Ok(BtildeSpectrumReport {
        n,
        numeric,
        expected,
        max_error,
        tolerance: LAPLACIAN_TOLERANCE,
        exact_roots: roots
            .into_iter()
            .map(|(value, multiplicity)| ExactRoot {
                value,
                multiplicity,
            })
            .collect(),
        exact_match,
        converted,
        trace,
        expected_trace: (n as f64 + 2.0) / n as f64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplicityReport {
    pub n: usize,
    pub value: i64,
    pub multiplicity: usize,
    pub tolerance: f64,
    pub contains_zero: bool,
    pub contains_degree: bool,
}

impl MultiplicityReport {
    pub fn passed(&self) -> bool {
        self.multiplicity >= 2 && self.contains_zero && self.contains_degree
    }
}

pub fn multiplicity_crosscheck_with(n: usize, spectrum: &Spectrum) -> MultiplicityReport {
    MultiplicityReport {
        n,
        value: n as i64 - 1,
        multiplicity: spectrum.multiplicity_near(n as f64 - 1.0, CLUSTER_TOLERANCE),
        tolerance: CLUSTER_TOLERANCE,
        contains_zero: spectrum.contains(0.0, CLUSTER_TOLERANCE),
        contains_degree: spectrum.contains(n as f64, CLUSTER_TOLERANCE),
    }
}

/// Multiplicity of `n − 1` in the dense spectrum of `BP_n`, `3 ≤ n ≤ 4`.
pub fn multiplicity_crosscheck(n: usize) -> Result<MultiplicityReport> {
    if !(3..=4).contains(&n) {
        return Err(Error::UnsupportedN {
            op: "multiplicity_crosscheck",
            n,
            min: 3,
            max: 4,
        });
    }
    Ok(multiplicity_crosscheck_with(n, &burnt_dense_spectrum(n)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MergedQuotientReport {
    pub n: usize,
    pub matrix: Option<Vec<Vec<i64>>>,
    pub equitable: bool,
    pub exact_roots: Vec<ExactRoot>,
    pub expected: Vec<i64>,
}

impl MergedQuotientReport {
    pub fn passed(&self) -> bool {
        let got: Vec<(i64, usize)> = self
            .exact_roots
            .iter()
            .filter_map(|r| r.value.to_integer().to_i64().map(|v| (v, r.multiplicity)))
            .collect();
        let want: Vec<(i64, usize)> = self.expected.iter().map(|&v| (v, 1)).collect();
        self.equitable && got == want && self.exact_roots.iter().all(|r| r.value.is_integer())
    }
}

/// Quotient of `{F1 ∪ F2, F3, F4}` and its exact spectrum.
pub fn merged_quotient_spectrum(n: usize) -> Result<MergedQuotientReport> {
    if n > MAX_CHECK_N {
        return Err(Error::UnsupportedN {
            op: "merged_quotient_spectrum",
            n,
            min: 3,
            max: MAX_CHECK_N,
        });
    }
    let g = CayleyGraph::burnt(n)?;
    let p = merged_fiber_partition(n)?;
    let outcome = compute_quotient(&g, &p)?;
    let expected = vec![n as i64, n as i64 - 1, 0];
    let Some(q) = outcome.matrix() else {
        return Ok(MergedQuotientReport {
            n,
            matrix: None,
            equitable: false,
            exact_roots: Vec::new(),
            expected,
        });
    };
    let equitable = verify_equitable(&g, &p, q)?;
    let (roots, rest) = rational_roots(&characteristic_polynomial(q)?)
        .ok_or_else(|| Error::Verification("characteristic polynomial too large".into()))?;
    let mut exact_roots: Vec<ExactRoot> = roots
        .into_iter()
        .map(|(value, multiplicity)| ExactRoot {
            value,
            multiplicity,
        })
        .collect();
    if rest.degree() > 0 {
        exact_roots.clear();
    }
    Ok(MergedQuotientReport {
        n,
        matrix: q.to_integer_rows(),
        equitable,
        exact_roots,
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::SignedPermutation;

    #[test]
    fn btilde_weights_and_degrees() {
        let g3 = build_btilde(3).unwrap();
        assert_eq!(g3.weight(0, 0), &int(2));
        assert_eq!(g3.weight(2, 2), &int(2));
        assert_eq!(g3.weight(2, 3), &int(2));
        assert_eq!(g3.weight(3, 3), &int(4));
        assert_eq!(g3.degrees(), vec![int(3), int(3), int(6), int(6)]);
        assert_eq!(
            g3.adjacency().to_integer_rows().unwrap(),
            vec![
                vec![2, 0, 1, 0],
                vec![0, 2, 1, 0],
                vec![1, 1, 2, 2],
                vec![0, 0, 2, 4]
            ]
        );
        for n in 3..=12i64 {
            let g = build_btilde(n as usize).unwrap();
            assert_eq!(
                g.degrees(),
                vec![int(n), int(n), int(2 * n), int(2 * n * (n - 2))]
            );
        }
        assert!(build_btilde(2).is_err());
    }

    #[test]
    fn normalized_laplacian_entries() {
        let l3 = normalized_laplacian(&build_btilde(3).unwrap()).unwrap();
        let s2 = std::f64::consts::SQRT_2;
        let expected = [
            [1.0 / 3.0, 0.0, -1.0 / (3.0 * s2), 0.0],
            [0.0, 1.0 / 3.0, -1.0 / (3.0 * s2), 0.0],
            [-1.0 / (3.0 * s2), -1.0 / (3.0 * s2), 2.0 / 3.0, -1.0 / 3.0],
            [0.0, 0.0, -1.0 / 3.0, 1.0 / 3.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!((l3[(i, j)] - expected[i][j]).abs() < 1e-14);
            }
        }
        let l4 = normalized_laplacian(&build_btilde(4).unwrap()).unwrap();
        assert!((l4[(0, 2)] + 1.0 / (4.0 * s2)).abs() < 1e-14);
    }

    #[test]
    fn zero_is_always_a_laplacian_eigenvalue() {
        for n in 3..=8 {
            let g = build_btilde(n).unwrap();
            let l = normalized_laplacian(&g).unwrap();
            let root_d = nalgebra::DVector::from_iterator(
                4,
                g.degrees().iter().map(|d| d.to_f64().unwrap().sqrt()),
            );
            assert!((&l * root_d).amax() < 1e-12);
            let lap = laplacian(&g).unwrap();
            assert!(lap.row_sums().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn zero_degree_is_rejected() {
        let w = ExactMatrix::from_integer_rows(&[vec![0, 0], vec![0, 1]]).unwrap();
        let g = WeightedGraph::new(w, vec!["a".into(), "b".into()]).unwrap();
        assert!(matches!(laplacian(&g), Err(Error::ZeroDegree(0))));
        assert!(matches!(
            normalized_laplacian(&g),
            Err(Error::ZeroDegree(0))
        ));
        let asym = ExactMatrix::from_integer_rows(&[vec![0, 1], vec![0, 0]]).unwrap();
        assert!(WeightedGraph::new(asym, vec!["a".into(), "b".into()]).is_err());
    }

    #[test]
    fn fiber_map_images() {
        let map = fiber_map(3).unwrap();
        let g = map.graph();
        let at = |t: &str| map.image(g.rank_of(&SignedPermutation::parse(t).unwrap()).unwrap());
        assert_eq!(at("1 2 3"), 0);
        assert_eq!(at("-3 -2 -1"), 2);
        assert_eq!(at("1 2 -3"), 1);
        assert_eq!(map.fibers().class_sizes(), vec![8, 8, 16, 16]);
        let map4 = fiber_map(4).unwrap();
        let v = map4
            .graph()
            .rank_of(&SignedPermutation::parse("1 -4 3 2").unwrap())
            .unwrap();
        assert_eq!(map4.image(v), 3);
        assert!(fiber_map(2).is_err());
    }

    #[test]
    fn covering_conditions_n3_n4() {
        for n in [3usize, 4] {
            let r = check_covering(&fiber_map(n).unwrap()).unwrap();
            let m: i64 = (1 << (n - 1)) * (1..n as i64).product::<i64>();
            assert_eq!(r.index, Some(int(m)), "n = {n}");
            assert!(r.inconsistencies.is_empty());
            let mut failures = r.condition1_failures();
            failures.sort();
            assert_eq!(failures, vec![("F3", "v1"), ("F3", "v2")]);
            for c in r.condition1.iter().filter(|c| !c.passed) {
                let (a, b) = c.witnesses.as_ref().unwrap();
                let mut sums = [a.sum, b.sum];
                sums.sort();
                assert_eq!(sums, [0, 1]);
                let firsts: Vec<i32> = [a, b]
                    .iter()
                    .map(|w| SignedPermutation::parse(&w.vertex).unwrap().entries()[0])
                    .collect();
                assert!(firsts.contains(&(n as i32)) && firsts.contains(&-(n as i32)));
            }
        }
    }

    #[test]
    fn btilde_spectrum_small() {
        let r = btilde_spectrum_check(3).unwrap();
        assert!(r.passed(), "{r:?}");
        for (a, b) in r.converted.iter().zip([3.0, 2.0, 2.0, 0.0]) {
            assert!((a - b).abs() < 1e-10);
        }
        let r5 = btilde_spectrum_check(5).unwrap();
        for (a, b) in r5.numeric.iter().zip([0.0, 0.2, 0.2, 1.0]) {
            assert!((a - b).abs() < 1e-10);
        }
        let sum: f64 = r5.numeric.iter().sum();
        assert!((sum - r5.expected_trace).abs() < 1e-12);
        assert!((r5.trace - r5.expected_trace).abs() < 1e-12);
    }

    #[test]
    fn laplacian_eigenvalues_within_range() {
        for n in 3..=12 {
            let r = btilde_spectrum_check(n).unwrap();
            assert!(r
                .numeric
                .iter()
                .all(|&x| (-1e-12..=2.0 + 1e-12).contains(&x)));
        }
    }

    #[test]
    fn multiplicity_and_merged_quotient() {
        let m3 = multiplicity_crosscheck(3).unwrap();
        assert!(m3.passed());
        assert_eq!(m3.multiplicity, 5);
        assert!(multiplicity_crosscheck(5).is_err());
        let q = merged_quotient_spectrum(4).unwrap();
        assert_eq!(
            q.matrix,
            Some(vec![vec![3, 1, 0], vec![1, 1, 2], vec![0, 1, 3]])
        );
        assert!(q.passed(), "{q:?}");
    }
}
