//! Integer eigenpairs of the quotient `M(BP_n)` and their lifts to `BP_n`.
//!
//! Two eigenvector families cover `[0, n] ∖ {⌊n/2⌋}` together with the
//! all-ones vector for `λ = n`:
//!
//! - `λ = n − i`, `1 ≤ i ≤ ⌈n/2⌉ − 1`:
//!   `(0^{i−1}, n−2i, (−1)^{n−2i}, 0^{2i}, (−1)^{n−2i}, n−2i, 0^{i−1})`
//! - `λ = a`, `0 ≤ a ≤ ⌊n/2⌋ − 1`, with `b = n − 2a − 1`:
//!   `(0^a, 1^b, −b, 0^{2a}, −b, 1^b, 0^a)`
//!
//! The published listing differs in two places (the trailing entry of the
//! first family, and the length of the odd-`n` second family);
//! [`printed_form_audit`] reproduces those tuples and records how each fails.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{exact_nullspace, ExactMatrix, ExactVector};
use crate::graphs::CayleyGraph;
use crate::quotient::{
    lift_vector, position_partition, quotient_block, PlusMinusOrdering, VertexPartition,
};

/// Largest `n` for which certificates are lifted to the full graph.
pub const MAX_LIFT_N: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Quotient,
    Lifted,
}

/// An exactly verified eigenpair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenPairCertificate {
    pub n: usize,
    pub lambda: i64,
    pub scope: Scope,
    pub vector: ExactVector,
    pub verified: bool,
}

/// `M v = λ v` in exact arithmetic. A zero vector is never an eigenvector.
pub fn verify_eigenpair_exact(m: &ExactMatrix, lambda: i64, v: &ExactVector) -> Result<bool> {
    Ok(first_failing_row(m, lambda, v)?.is_none() && !v.is_zero())
}

/// A row where `(M v)_r ≠ λ v_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowFailure {
    /// 0-based row index.
    pub row: usize,
    /// The element of `±[n]` labelling that row.
    pub row_element: i32,
    pub lhs: String,
    pub rhs: String,
}

fn first_failing_row(m: &ExactMatrix, lambda: i64, v: &ExactVector) -> Result<Option<RowFailure>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            got: m.cols(),
        });
    }
    let mv = m.mul_vec(v)?;
    let lam = BigRational::from_integer(BigInt::from(lambda));
    let ord = PlusMinusOrdering::new(m.rows() / 2);
    Ok(mv.iter().enumerate().find_map(|(r, lhs)| {
        let rhs = &lam * BigRational::from_integer(v.0[r].clone());
        (*lhs != rhs).then(|| RowFailure {
            row: r,
            row_element: if m.rows().is_multiple_of(2) {
                ord.element_at(r)
            } else {
                0
            },
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        })
    }))
}

fn run(out: &mut Vec<i64>, value: i64, count: usize) {
    out.extend(std::iter::repeat_n(value, count));
}

/// The `λ = n − i` vector.
pub fn first_family_vector(n: usize, i: usize) -> ExactVector {
    let (n, i) = (n as i64, i as i64);
    let mut v = Vec::with_capacity(2 * n as usize);
    run(&mut v, 0, (i - 1) as usize);
    v.push(n - 2 * i);
    run(&mut v, -1, (n - 2 * i) as usize);
    run(&mut v, 0, (2 * i) as usize);
    run(&mut v, -1, (n - 2 * i) as usize);
    v.push(n - 2 * i);
    run(&mut v, 0, (i - 1) as usize);
    ExactVector::from_i64(&v)
}

/// The `λ = a` vector with `b = n − 2a − 1`.
pub fn second_family_vector(n: usize, a: usize) -> ExactVector {
    let b = n - 2 * a - 1;
    let mut v = Vec::with_capacity(2 * n);
    run(&mut v, 0, a);
    run(&mut v, 1, b);
    v.push(-(b as i64));
    run(&mut v, 0, 2 * a);
    v.push(-(b as i64));
    run(&mut v, 1, b);
    run(&mut v, 0, a);
    ExactVector::from_i64(&v)
}

fn candidates(n: usize) -> Vec<(i64, ExactVector)> {
    let mut out = vec![(n as i64, ExactVector::from_i64(&vec![1; 2 * n]))];
    for i in 1..n.div_ceil(2) {
        out.push(((n - i) as i64, first_family_vector(n, i)));
    }
    for a in (0..n / 2).rev() {
        out.push((a as i64, second_family_vector(n, a)));
    }
    out
}

/// The `n` quotient-scope certificates, each verified before return.
pub fn theorem_eigenpairs(n: usize) -> Result<Vec<EigenPairCertificate>> {
    let m = quotient_block(n)?;
    candidates(n)
        .into_iter()
        .map(|(lambda, vector)| {
            if !verify_eigenpair_exact(&m, lambda, &vector)? {
                return Err(Error::Verification(format!(
                    "candidate eigenpair λ = {lambda}, v = {vector} of M(BP_{n})"
                )));
            }
            Ok(EigenPairCertificate {
                n,
                lambda,
                scope: Scope::Quotient,
                vector,
                verified: true,
            })
        })
        .collect()
}

/// Lifts a quotient certificate through the position partition and checks
/// `Σ_{w ∈ N(u)} x_w = λ x_u` at every vertex.
pub fn lift_and_verify(
    n: usize,
    certificate: &EigenPairCertificate,
) -> Result<EigenPairCertificate> {
    if n > MAX_LIFT_N {
        return Err(Error::UnsupportedN {
            op: "lift_and_verify",
            n,
            min: 1,
            max: MAX_LIFT_N,
        });
    }
    let graph = CayleyGraph::burnt(n)?;
    let partition = position_partition(n)?;
    lift_and_verify_with(&graph, &partition, certificate)
}

pub fn lift_and_verify_with(
    graph: &CayleyGraph,
    partition: &VertexPartition,
    certificate: &EigenPairCertificate,
) -> Result<EigenPairCertificate> {
    if certificate.scope != Scope::Quotient || certificate.n != graph.n() {
        return Err(Error::Verification(format!(
            "expected a quotient certificate for n = {}",
            graph.n()
        )));
    }
    let x = lift_vector(partition, &certificate.vector)?;
    let lambda = BigInt::from(certificate.lambda);
    for u in 0..graph.vertex_count() {
        let sum: BigInt = graph.neighbors(u)?.into_iter().map(|w| &x.0[w]).sum();
        if sum != &lambda * &x.0[u] {
            return Err(Error::Verification(format!(
                "lifted λ = {} fails at vertex {}: neighbor sum {sum}, expected {}",
                certificate.lambda,
                graph.vertex(u)?,
                &lambda * &x.0[u]
            )));
        }
    }
    Ok(EigenPairCertificate {
        n: certificate.n,
        lambda: certificate.lambda,
        scope: Scope::Lifted,
        vector: x,
        verified: true,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PrintedOutcome {
    Verified,
    FailsAtRow(RowFailure),
    DimensionMismatch { length: usize, expected: usize },
}

/// One tuple from the published eigenvector listing, checked as written.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrintedFormAudit {
    pub label: String,
    pub lambda: i64,
    pub printed: ExactVector,
    pub outcome: PrintedOutcome,
    /// The certificate shipped for the same eigenvalue.
    pub corrected: ExactVector,
    pub corrected_verified: bool,
}

fn printed_first_general(n: usize, i: usize) -> ExactVector {
    let mut v = first_family_vector(n, i).0;
    let k = v.len() - i;
    v[k] = BigInt::from((n - i) as i64);
    ExactVector(v)
}

/// The `⌊n/2⌋ − 1 − j` tuples as listed, of length `4⌊n/2⌋`.
fn printed_second(n: usize, j: usize) -> ExactVector {
    let m = n / 2;
    let zeros = m - 1 - j;
    let mut v = Vec::new();
    run(&mut v, 0, zeros);
    if j == 0 {
        v.extend([1, -1]);
    } else {
        run(&mut v, 1, 2 * j + 1);
        v.push(-(2 * j as i64) - 1);
    }
    run(&mut v, 0, 2 * zeros);
    if j == 0 {
        v.extend([-1, 1]);
    } else {
        v.push(-(2 * j as i64) - 1);
        run(&mut v, 1, 2 * j + 1);
    }
    run(&mut v, 0, zeros);
    ExactVector::from_i64(&v)
}

/// Every tuple of the published listing for this `n`, checked exactly.
pub fn printed_form_audit(n: usize) -> Result<Vec<PrintedFormAudit>> {
    let m = quotient_block(n)?;
    let certs = theorem_eigenpairs(n)?;
    let corrected = |lambda: i64| {
        certs
            .iter()
            .find(|c| c.lambda == lambda)
            .map(|c| c.vector.clone())
            .expect("certificate for every listed eigenvalue")
    };
    let half = n / 2;
    let first_max = if n.is_multiple_of(2) {
        half.saturating_sub(1)
    } else {
        half
    };
    let mut listed: Vec<(String, i64, ExactVector)> = Vec::new();
    listed.push((
        "all-ones".into(),
        n as i64,
        ExactVector::from_i64(&vec![1; 2 * n]),
    ));
    if first_max >= 1 {
        listed.push((
            "first family, i = 1 line".into(),
            n as i64 - 1,
            first_family_vector(n, 1),
        ));
    }
    for i in 1..=first_max {
        listed.push((
            format!("first family, general i = {i}"),
            (n - i) as i64,
            printed_first_general(n, i),
        ));
    }
    if half >= 1 {
        for j in 0..half {
            listed.push((
                format!("second family, j = {j}"),
                (half - 1 - j) as i64,
                printed_second(n, j),
            ));
        }
    }
    listed
        .into_iter()
        .map(|(label, lambda, printed)| {
            let outcome = if printed.len() != 2 * n {
                PrintedOutcome::DimensionMismatch {
                    length: printed.len(),
                    expected: 2 * n,
                }
            } else {
                match first_failing_row(&m, lambda, &printed)? {
                    None => PrintedOutcome::Verified,
                    Some(f) => PrintedOutcome::FailsAtRow(f),
                }
            };
            let fixed = corrected(lambda);
            let ok = verify_eigenpair_exact(&m, lambda, &fixed)?;
            Ok(PrintedFormAudit {
                label,
                lambda,
                printed,
                outcome,
                corrected: fixed,
                corrected_verified: ok,
            })
        })
        .collect()
}

/// Everything `verify-theorem` reports for one `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub n: usize,
    pub certificates: Vec<EigenPairCertificate>,
    pub lambda_set: Vec<i64>,
    pub expected_set: Vec<i64>,
    pub excluded: i64,
    /// `ker(M − ⌊n/2⌋ I)` is trivial.
    pub excluded_absent: bool,
    pub lifted: Vec<LiftSummary>,
    pub printed_forms: Vec<PrintedFormAudit>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftSummary {
    pub lambda: i64,
    pub vertex_count: usize,
    pub verified: bool,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.lambda_set == self.expected_set
            && self.excluded_absent
            && self.certificates.iter().all(|c| c.verified)
            && self.lifted.iter().all(|l| l.verified)
            && self.printed_forms.iter().all(|p| p.corrected_verified)
    }
}

pub fn verify_theorem(n: usize, lift: bool) -> Result<TheoremReport> {
    let certificates = theorem_eigenpairs(n)?;
    let mut lambda_set: Vec<i64> = certificates.iter().map(|c| c.lambda).collect();
    lambda_set.sort_unstable();
    let excluded = (n / 2) as i64;
    let expected_set: Vec<i64> = (0..=n as i64).filter(|&x| x != excluded).collect();
    let m = quotient_block(n)?;
    let shifted = m.shift(&BigRational::from_integer(BigInt::from(excluded)))?;
    let excluded_absent = exact_nullspace(&shifted).is_empty();
    let lifted = if lift {
        let graph = CayleyGraph::burnt(n)?;
        if n > MAX_LIFT_N {
            return Err(Error::UnsupportedN {
                op: "verify_theorem --lift",
                n,
                min: 1,
                max: MAX_LIFT_N,
            });
        }
        let partition = position_partition(n)?;
        certificates
            .iter()
            .map(|c| {
                let l = lift_and_verify_with(&graph, &partition, c)?;
                Ok(LiftSummary {
                    lambda: l.lambda,
                    vertex_count: l.vector.len(),
                    verified: l.verified,
                })
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Ok(TheoremReport {
        n,
        certificates,
        lambda_set,
        expected_set,
        excluded,
        excluded_absent,
        lifted,
        printed_forms: printed_form_audit(n)?,
    })
}

/// Integer eigenvalues of an integer matrix in `range`, each with a kernel
/// basis vector of `M − λI`.
pub fn integer_eigenvalues_in(
    m: &ExactMatrix,
    range: std::ops::RangeInclusive<i64>,
) -> Result<Vec<(i64, ExactVector)>> {
    let mut out = Vec::new();
    for lambda in range {
        let shifted = m.shift(&BigRational::from_integer(BigInt::from(lambda)))?;
        if let Some(v) = exact_nullspace(&shifted).into_iter().next() {
            out.push((lambda, v));
        }
    }
    Ok(out)
}

/// Converts small certificates for display.
pub fn vector_as_i64(v: &ExactVector) -> Vec<i64> {
    v.0.iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn lambdas(n: usize) -> Vec<i64> {
        let mut l: Vec<i64> = theorem_eigenpairs(n)
            .unwrap()
            .iter()
            .map(|c| c.lambda)
            .collect();
        l.sort_unstable();
        l
    }

    #[test]
    fn n3_certificates_match_nullspace_oracle() {
        let m = quotient_block(3).unwrap();
        let certs = theorem_eigenpairs(3).unwrap();
        assert_eq!(certs.len(), 3);
        for c in &certs {
            let shifted = m
                .shift(&BigRational::from_integer(BigInt::from(c.lambda)))
                .unwrap();
            let kernel = exact_nullspace(&shifted);
            assert_eq!(kernel.len(), 1, "λ = {}", c.lambda);
            assert_eq!(kernel[0], c.vector.normalized());
        }
        let by = |l| certs.iter().find(|c| c.lambda == l).unwrap().vector.clone();
        assert_eq!(by(3), ExactVector::from_i64(&[1; 6]));
        assert_eq!(by(2), ExactVector::from_i64(&[1, -1, 0, 0, -1, 1]));
        assert_eq!(by(0), ExactVector::from_i64(&[1, 1, -2, -2, 1, 1]));
    }

    #[test]
    fn n4_and_n6_vectors() {
        let certs = theorem_eigenpairs(4).unwrap();
        let find = |l: i64| certs.iter().find(|c| c.lambda == l).unwrap().vector.clone();
        assert_eq!(find(0), ExactVector::from_i64(&[1, 1, 1, -3, -3, 1, 1, 1]));
        assert_eq!(find(1), ExactVector::from_i64(&[0, 1, -1, 0, 0, -1, 1, 0]));
        let six = theorem_eigenpairs(6).unwrap();
        let v4 = six.iter().find(|c| c.lambda == 4).unwrap();
        assert_eq!(
            v4.vector,
            ExactVector::from_i64(&[0, 2, -1, -1, 0, 0, 0, 0, -1, -1, 2, 0])
        );
        let m6 = quotient_block(6).unwrap();
        let shifted = m6
            .shift(&BigRational::from_integer(BigInt::from(4)))
            .unwrap();
        assert_eq!(exact_nullspace(&shifted), vec![v4.vector.normalized()]);
    }

    #[test]
    fn lambda_sets_through_10() {
        for n in 1..=10 {
            let expected: Vec<i64> = (0..=n as i64).filter(|&x| x != (n / 2) as i64).collect();
            assert_eq!(lambdas(n), expected, "n = {n}");
        }
        assert_eq!(lambdas(1), vec![1]);
    }

    #[test]
    fn verification_examples() {
        let m3 = quotient_block(3).unwrap();
        assert!(verify_eigenpair_exact(&m3, 3, &ExactVector::from_i64(&[1; 6])).unwrap());
        assert!(!verify_eigenpair_exact(&m3, 1, &ExactVector::from_i64(&[1; 6])).unwrap());
        assert!(!verify_eigenpair_exact(&m3, 0, &ExactVector::from_i64(&[0; 6])).unwrap());
        assert!(verify_eigenpair_exact(&m3, 0, &ExactVector::from_i64(&[1; 5])).is_err());
        let m4 = quotient_block(4).unwrap();
        assert!(verify_eigenpair_exact(
            &m4,
            0,
            &ExactVector::from_i64(&[1, 1, 1, -3, -3, 1, 1, 1])
        )
        .unwrap());
    }

    #[test]
    fn excluded_value_is_not_a_quotient_eigenvalue() {
        for n in 2..=10 {
            let m = quotient_block(n).unwrap();
            let shifted = m
                .shift(&BigRational::from_integer(BigInt::from((n / 2) as i64)))
                .unwrap();
            assert!(exact_nullspace(&shifted).is_empty(), "n = {n}");
        }
        let m3 = quotient_block(3).unwrap();
        assert!(exact_nullspace(&m3.shift(&BigRational::one()).unwrap()).is_empty());
        let m1 = quotient_block(1).unwrap();
        assert_eq!(
            exact_nullspace(&m1.shift(&BigRational::one()).unwrap()),
            vec![ExactVector::from_i64(&[1, 1])]
        );
    }

    #[test]
    fn lifting_small_cases() {
        let certs = theorem_eigenpairs(3).unwrap();
        for c in &certs {
            let lifted = lift_and_verify(3, c).unwrap();
            assert_eq!(lifted.scope, Scope::Lifted);
            assert_eq!(lifted.vector.len(), 48);
        }
        let zero = theorem_eigenpairs(4)
            .unwrap()
            .into_iter()
            .find(|c| c.lambda == 0)
            .unwrap();
        assert_eq!(lift_and_verify(4, &zero).unwrap().vector.len(), 384);
        assert!(lift_and_verify(6, &zero).is_err());

        let mut bogus = zero.clone();
        bogus.lambda = 1;
        assert!(matches!(
            lift_and_verify(4, &bogus),
            Err(Error::Verification(_))
        ));
    }

    #[test]
    fn printed_general_vector_fails_at_n6() {
        let audit = printed_form_audit(6).unwrap();
        let i2 = audit
            .iter()
            .find(|a| a.label == "first family, general i = 2")
            .unwrap();
        assert_eq!(
            i2.printed,
            ExactVector::from_i64(&[0, 2, -1, -1, 0, 0, 0, 0, -1, -1, 4, 0])
        );
        assert!(matches!(i2.outcome, PrintedOutcome::FailsAtRow(_)));
        assert!(i2.corrected_verified);
        // The explicit n − 1 line and the even second family are fine as printed.
        assert!(audit
            .iter()
            .filter(|a| !a.label.starts_with("first family, general"))
            .all(|a| a.outcome == PrintedOutcome::Verified));
    }

    #[test]
    fn printed_odd_second_family_has_wrong_length() {
        for n in [3, 5, 7] {
            let audit = printed_form_audit(n).unwrap();
            let second: Vec<_> = audit
                .iter()
                .filter(|a| a.label.starts_with("second"))
                .collect();
            assert_eq!(second.len(), n / 2);
            for a in second {
                assert_eq!(
                    a.outcome,
                    PrintedOutcome::DimensionMismatch {
                        length: 2 * n - 2,
                        expected: 2 * n
                    }
                );
                assert!(a.corrected_verified);
            }
        }
    }

    #[test]
    fn report_for_small_n() {
        let r = verify_theorem(1, false).unwrap();
        assert_eq!(r.lambda_set, vec![1]);
        assert!(r.passed());
        let r = verify_theorem(4, true).unwrap();
        assert_eq!(r.lifted.len(), 4);
        assert!(r.lifted.iter().all(|l| l.vertex_count == 384));
        assert!(r.passed());
    }
}
