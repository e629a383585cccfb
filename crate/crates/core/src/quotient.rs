//! Quotient matrices of pancake graphs.
//!
//! Rows and columns of the `2n × 2n` matrices are indexed by `±[n]` in
//! increasing order `−n < … < −1 < 1 < … < n` ([`PlusMinusOrdering`]). The
//! partition realizing `Σ P(r_i)` groups vertices by the signed position of
//! the value `n`: since neighbors are `σ ∘ r_i`, that position moves from `j`
//! to `r_i(j)`, so the class-to-class counts are exactly the entries of the
//! signed permutation matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{ExactMatrix, ExactVector};
use crate::graphs::{CayleyGraph, Family};
use crate::group::{reversal_as_element, SignedPermutation};

/// Bijection between row positions `0..2n` and the elements of `±[n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlusMinusOrdering {
    n: usize,
}

impl PlusMinusOrdering {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn len(&self) -> usize {
        2 * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// 0-based row of an element of `±[n]`.
    pub fn index_of(&self, element: i32) -> usize {
        let n = self.n as i32;
        assert!(
            element != 0 && element.abs() <= n,
            "{element} not in ±[{n}]"
        );
        if element < 0 {
            (element + n) as usize
        } else {
            (element + n - 1) as usize
        }
    }

    /// Element of `±[n]` at a 0-based row.
    pub fn element_at(&self, index: usize) -> i32 {
        let n = self.n as i32;
        let p = index as i32;
        if p < n {
            p - n
        } else {
            p - n + 1
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.len()).map(move |p| self.element_at(p))
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `P(r_i)` as a signed permutation of `±[n]`: a 1 in row `a`, column `r_i(a)`.
pub fn permutation_matrix(n: usize, i: usize) -> Result<ExactMatrix> {
    let r = reversal_as_element(n, i)?;
    let ord = PlusMinusOrdering::new(n);
    let mut m = ExactMatrix::zeros(2 * n, 2 * n);
    for a in ord.elements() {
        m.set(ord.index_of(a), ord.index_of(r.eval(a)), BigRational::one());
    }
    Ok(m)
}

/// `Σ_{i=1}^{n} P(r_i)`.
pub fn quotient_sum(n: usize) -> Result<ExactMatrix> {
    let mut acc = permutation_matrix(n, 1)?;
    for i in 2..=n {
        acc = acc.add(&permutation_matrix(n, i)?)?;
    }
    Ok(acc)
}

/// The block matrix `[[A_n, D_nᵀ], [D_n, C_n]]` with `A_n = diag(n−1, …, 0)`,
/// `C_n = diag(0, …, n−1)` and `D_n` upper triangular all-ones.
pub fn quotient_block(n: usize) -> Result<ExactMatrix> {
    if n == 0 {
        return Err(Error::UnsupportedN {
            op: "quotient_block",
            n,
            min: 1,
            max: usize::MAX,
        });
    }
    let mut m = ExactMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m.set(i, i, int((n - 1 - i) as i64));
        m.set(n + i, n + i, int(i as i64));
        for j in i..n {
            // D_n at rows n.., columns 0..; D_nᵀ mirrored.
            m.set(n + i, j, BigRational::one());
            m.set(j, n + i, BigRational::one());
        }
    }
    Ok(m)
}

/// `Σ_{i=2}^{n} P(r_i)` for the unsigned reversals acting on `[n]`.
pub fn plain_quotient_sum(n: usize) -> Result<ExactMatrix> {
    if n < 2 {
        return Err(Error::UnsupportedN {
            op: "plain_quotient_sum",
            n,
            min: 2,
            max: usize::MAX,
        });
    }
    let mut m = ExactMatrix::zeros(n, n);
    let one = BigRational::one();
    for i in 2..=n {
        for a in 1..=n {
            let b = if a <= i { i - a + 1 } else { a };
            m.add_at(a - 1, b - 1, &one);
        }
    }
    Ok(m)
}

/// Assignment of every vertex of a Cayley graph to one of `k` classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPartition {
    family: Family,
    n: usize,
    class_of: Vec<u32>,
    labels: Vec<String>,
}

impl VertexPartition {
    /// Validates totality and that every class is nonempty.
    pub fn new(graph: &CayleyGraph, class_of: Vec<u32>, labels: Vec<String>) -> Result<Self> {
        if class_of.len() != graph.vertex_count() {
            return Err(Error::DimensionMismatch {
                expected: graph.vertex_count(),
                got: class_of.len(),
            });
        }
        let mut sizes = vec![0usize; labels.len()];
        for &c in &class_of {
            let c = c as usize;
            if c >= labels.len() {
                return Err(Error::DimensionMismatch {
                    expected: labels.len(),
                    got: c + 1,
                });
            }
            sizes[c] += 1;
        }
        if let Some(empty) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::Verification(format!(
                "class {} is empty",
                labels[empty]
            )));
        }
        Ok(Self {
            family: graph.family(),
            n: graph.n(),
            class_of,
            labels,
        })
    }

    fn from_classifier<F>(graph: &CayleyGraph, labels: Vec<String>, mut classify: F) -> Result<Self>
    where
        F: FnMut(&SignedPermutation) -> u32,
    {
        let class_of = (0..graph.vertex_count())
            .map(|k| graph.vertex(k).map(|s| classify(&s)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(graph, class_of, labels)
    }

    pub fn class_count(&self) -> usize {
        self.labels.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.class_of.len()
    }

    pub fn class_of(&self, vertex: usize) -> usize {
        self.class_of[vertex] as usize
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.class_count()];
        for &c in &self.class_of {
            sizes[c as usize] += 1;
        }
        sizes
    }

    pub fn members(&self, class: usize) -> impl Iterator<Item = usize> + '_ {
        self.class_of
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c as usize == class)
            .map(|(u, _)| u)
    }

    fn check_graph(&self, graph: &CayleyGraph) -> Result<()> {
        if graph.family() != self.family || graph.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.vertex_count(),
                got: graph.vertex_count(),
            });
        }
        Ok(())
    }
}

/// Classes `C_j = {σ : σ^{-1}(n) = j}` for `j ∈ ±[n]`, labeled in [`PlusMinusOrdering`].
pub fn position_partition(n: usize) -> Result<VertexPartition> {
    let g = CayleyGraph::burnt(n)?;
    let ord = PlusMinusOrdering::new(n);
    let labels = ord.elements().map(|j| j.to_string()).collect();
    VertexPartition::from_classifier(&g, labels, |s| {
        ord.index_of(s.signed_position(n as i32)) as u32
    })
}

/// Classes by the position of `n` in a plain permutation (`n` classes).
pub fn plain_position_partition(n: usize) -> Result<VertexPartition> {
    let g = CayleyGraph::plain(n)?;
    let labels = (1..=n).map(|j| j.to_string()).collect();
    VertexPartition::from_classifier(&g, labels, |s| (s.signed_position(n as i32) - 1) as u32)
}

fn require_fibers(n: usize, op: &'static str) -> Result<()> {
    if n < 3 {
        return Err(Error::UnsupportedN {
            op,
            n,
            min: 3,
            max: usize::MAX,
        });
    }
    Ok(())
}

/// 0 = F1 (`u_n = n`), 1 = F2 (`u_n = −n`), 2 = F3 (`|u_1| = n`), 3 = F4 (otherwise).
pub(crate) fn fiber_index(s: &SignedPermutation) -> u32 {
    let n = s.n() as i32;
    let e = s.entries();
    match (e[0], e[e.len() - 1]) {
        (_, last) if last == n => 0,
        (_, last) if last == -n => 1,
        (first, _) if first.abs() == n => 2,
        _ => 3,
    }
}

/// The four fibers F1–F4 of the weighted projection.
pub fn fiber_partition(n: usize) -> Result<VertexPartition> {
    require_fibers(n, "fiber_partition")?;
    let g = CayleyGraph::burnt(n)?;
    let labels = ["F1", "F2", "F3", "F4"].map(String::from).to_vec();
    VertexPartition::from_classifier(&g, labels, fiber_index)
}

/// `{F1 ∪ F2, F3, F4}`.
pub fn merged_fiber_partition(n: usize) -> Result<VertexPartition> {
    require_fibers(n, "merged_fiber_partition")?;
    let g = CayleyGraph::burnt(n)?;
    let labels = ["G1", "G3", "G4"].map(String::from).to_vec();
    VertexPartition::from_classifier(&g, labels, |s| fiber_index(s).saturating_sub(1))
}

/// A class pair `(from, to)` where two vertices of `from` see different
/// numbers of neighbors in `to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NotEquitable {
    pub from_class: String,
    pub to_class: String,
    pub witness_a: String,
    pub count_a: usize,
    pub witness_b: String,
    pub count_b: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotientOutcome {
    Equitable(ExactMatrix),
    NotEquitable(NotEquitable),
}

impl QuotientOutcome {
    pub fn matrix(&self) -> Option<&ExactMatrix> {
        match self {
            QuotientOutcome::Equitable(m) => Some(m),
            QuotientOutcome::NotEquitable(_) => None,
        }
    }
}

fn class_counts(graph: &CayleyGraph, p: &VertexPartition, u: usize) -> Result<Vec<usize>> {
    let mut counts = vec![0; p.class_count()];
    for v in graph.neighbors(u)? {
        counts[p.class_of(v)] += 1;
    }
    Ok(counts)
}

/// `b_ij = |N(u) ∩ V_j|` for `u ∈ V_i`, or the first violating class pair.
pub fn compute_quotient(graph: &CayleyGraph, p: &VertexPartition) -> Result<QuotientOutcome> {
    p.check_graph(graph)?;
    let k = p.class_count();
    let mut representative: Vec<Option<(usize, Vec<usize>)>> = vec![None; k];
    for u in 0..graph.vertex_count() {
        let counts = class_counts(graph, p, u)?;
        let ci = p.class_of(u);
        match &representative[ci] {
            None => representative[ci] = Some((u, counts)),
            Some((w, expected)) => {
                if let Some(j) = (0..k).find(|&j| expected[j] != counts[j]) {
                    return Ok(QuotientOutcome::NotEquitable(NotEquitable {
                        from_class: p.labels[ci].clone(),
                        to_class: p.labels[j].clone(),
                        witness_a: graph.vertex(*w)?.to_string(),
                        count_a: expected[j],
                        witness_b: graph.vertex(u)?.to_string(),
                        count_b: counts[j],
                    }));
                }
            }
        }
    }
    let mut b = ExactMatrix::zeros(k, k);
    for (i, rep) in representative.into_iter().enumerate() {
        let (_, counts) = rep.expect("classes are nonempty");
        for (j, c) in counts.into_iter().enumerate() {
            b.set(i, j, int(c as i64));
        }
    }
    Ok(QuotientOutcome::Equitable(b))
}

/// Checks `A S_P = S_P B` vertex by vertex without forming `S_P`.
pub fn verify_equitable(graph: &CayleyGraph, p: &VertexPartition, b: &ExactMatrix) -> Result<bool> {
    p.check_graph(graph)?;
    let k = p.class_count();
    if b.rows() != k || b.cols() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: b.rows().max(b.cols()),
        });
    }
    let Some(expected) = b.to_integer_rows() else {
        return Ok(false);
    };
    for u in 0..graph.vertex_count() {
        let counts = class_counts(graph, p, u)?;
        let row = &expected[p.class_of(u)];
        if counts.iter().zip(row).any(|(&c, &e)| c as i64 != e) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `S_P v`: vertex `u` gets `v[class(u)]`.
pub fn lift_vector(p: &VertexPartition, v: &ExactVector) -> Result<ExactVector> {
    if v.len() != p.class_count() {
        return Err(Error::DimensionMismatch {
            expected: p.class_count(),
            got: v.len(),
        });
    }
    Ok(ExactVector(
        p.class_of
            .iter()
            .map(|&c| v.0[c as usize].clone())
            .collect(),
    ))
}

/// Indicator vector of one class, as a lift of a unit vector.
pub fn class_indicator(p: &VertexPartition, class: usize) -> Result<ExactVector> {
    let mut unit = vec![BigInt::zero(); p.class_count()];
    unit[class] = BigInt::one();
    lift_vector(p, &ExactVector(unit))
}

/// Row sums as integers, if all are integral.
pub fn integer_row_sums(m: &ExactMatrix) -> Option<Vec<i64>> {
    m.row_sums()
        .iter()
        .map(|s| s.is_integer().then(|| s.to_integer().to_i64()).flatten())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_integer_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn ordering_is_bijective() {
        for n in 1..=6 {
            let ord = PlusMinusOrdering::new(n);
            for p in 0..2 * n {
                assert_eq!(ord.index_of(ord.element_at(p)), p);
            }
            assert_eq!(ord.element_at(0), -(n as i32));
            assert_eq!(ord.element_at(2 * n - 1), n as i32);
        }
    }

    #[test]
    fn small_quotients() {
        assert_eq!(quotient_sum(1).unwrap(), mat(&[&[0, 1], &[1, 0]]));
        // P(r_1) + P(r_2) for n = 2, summed by hand.
        let expected = mat(&[&[1, 0, 1, 0], &[0, 0, 1, 1], &[1, 1, 0, 0], &[0, 1, 0, 1]]);
        assert_eq!(quotient_sum(2).unwrap(), expected);
        assert_eq!(quotient_block(2).unwrap(), expected);
    }

    #[test]
    fn block_structure_n4() {
        let m = quotient_block(4).unwrap().to_integer_rows().unwrap();
        for i in 0..4 {
            assert_eq!(m[i][i], 3 - i as i64);
            assert_eq!(m[4 + i][4 + i], i as i64);
            for j in 0..4 {
                assert_eq!(m[4 + i][j], (j >= i) as i64);
                assert_eq!(m[j][4 + i], (j >= i) as i64);
            }
        }
    }

    #[test]
    fn permutation_matrices_are_symmetric_involutions() {
        for n in 1..=8 {
            let id = ExactMatrix::identity(2 * n);
            for i in 1..=n {
                let p = permutation_matrix(n, i).unwrap();
                assert!(p.is_symmetric());
                assert_eq!(p.mul(&p).unwrap(), id);
                assert!(integer_row_sums(&p).unwrap().iter().all(|&s| s == 1));
            }
        }
        assert!(permutation_matrix(3, 0).is_err());
        assert!(permutation_matrix(3, 4).is_err());
    }

    #[test]
    fn block_equals_sum_through_8() {
        for n in 1..=8 {
            let s = quotient_sum(n).unwrap();
            assert_eq!(quotient_block(n).unwrap(), s);
            assert!(s.is_symmetric());
            assert!(integer_row_sums(&s).unwrap().iter().all(|&r| r == n as i64));
        }
    }

    #[test]
    fn position_partition_classes() {
        let p3 = position_partition(3).unwrap();
        assert_eq!(p3.class_count(), 6);
        assert!(p3.class_sizes().iter().all(|&s| s == 8));
        assert_eq!(p3.labels()[p3.class_of(0)], "3");
        let p2 = position_partition(2).unwrap();
        assert!(p2.class_sizes().iter().all(|&s| s == 2));
        let g2 = CayleyGraph::burnt(2).unwrap();
        assert_eq!(
            compute_quotient(&g2, &p2).unwrap().matrix(),
            Some(&quotient_sum(2).unwrap())
        );
    }

    #[test]
    fn position_partition_realizes_block_matrix() {
        for n in 1..=5 {
            let g = CayleyGraph::burnt(n).unwrap();
            let p = position_partition(n).unwrap();
            let b = compute_quotient(&g, &p).unwrap();
            let m = quotient_block(n).unwrap();
            assert_eq!(b.matrix(), Some(&m), "n = {n}");
            assert!(verify_equitable(&g, &p, &m).unwrap());
        }
    }

    #[test]
    fn perturbed_quotient_is_rejected() {
        let g = CayleyGraph::burnt(3).unwrap();
        let p = position_partition(3).unwrap();
        let m = quotient_block(3).unwrap();
        let bumped = m.add(&ExactMatrix::identity(6)).unwrap();
        assert!(!verify_equitable(&g, &p, &bumped).unwrap());
        assert!(verify_equitable(&g, &p, &ExactMatrix::identity(4)).is_err());
    }

    #[test]
    fn fiber_sizes() {
        let sizes = |n| fiber_partition(n).unwrap().class_sizes();
        assert_eq!(sizes(3), vec![8, 8, 16, 16]);
        assert_eq!(sizes(4), vec![48, 48, 96, 192]);
        assert_eq!(
            merged_fiber_partition(3).unwrap().class_sizes(),
            vec![16, 16, 16]
        );
        assert!(fiber_partition(2).is_err());
        assert!(merged_fiber_partition(1).is_err());
    }

    #[test]
    fn merged_fibers_are_equitable_but_fibers_are_not() {
        let g = CayleyGraph::burnt(4).unwrap();
        let merged = merged_fiber_partition(4).unwrap();
        let expected = mat(&[&[3, 1, 0], &[1, 1, 2], &[0, 1, 3]]);
        assert_eq!(
            compute_quotient(&g, &merged).unwrap().matrix(),
            Some(&expected)
        );
        assert!(verify_equitable(&g, &merged, &expected).unwrap());

        let fibers = fiber_partition(4).unwrap();
        match compute_quotient(&g, &fibers).unwrap() {
            QuotientOutcome::NotEquitable(report) => {
                assert_eq!(report.from_class, "F3");
                assert!(report.to_class == "F1" || report.to_class == "F2");
                assert_ne!(report.count_a, report.count_b);
                let counts = [report.count_a, report.count_b];
                assert!(counts.contains(&0) && counts.contains(&1));
            }
            QuotientOutcome::Equitable(_) => panic!("fiber partition should not be equitable"),
        }
    }

    #[test]
    fn lifting() {
        let p = position_partition(3).unwrap();
        let ones = lift_vector(&p, &ExactVector::from_i64(&[1; 6])).unwrap();
        assert_eq!(ones.len(), 48);
        assert!(ones.0.iter().all(|x| x.is_one()));
        let v = lift_vector(&p, &ExactVector::from_i64(&[1, -1, 0, 0, -1, 1])).unwrap();
        for u in 0..48 {
            assert_eq!(
                v.0[u],
                ExactVector::from_i64(&[1, -1, 0, 0, -1, 1]).0[p.class_of(u)]
            );
        }
        let ind = class_indicator(&p, 2).unwrap();
        assert_eq!(ind.0.iter().filter(|x| x.is_one()).count(), 8);
        assert!(lift_vector(&p, &ExactVector::from_i64(&[1, 2])).is_err());
    }

    #[test]
    fn plain_quotient_matches_plain_partition() {
        for n in 2..=5 {
            let g = CayleyGraph::plain(n).unwrap();
            let p = plain_position_partition(n).unwrap();
            let q = plain_quotient_sum(n).unwrap();
            assert_eq!(compute_quotient(&g, &p).unwrap().matrix(), Some(&q));
        }
    }
}
