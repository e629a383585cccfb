//! Exact rational matrices, integer vectors, and the elimination routines
//! used to certify eigenvectors: fraction-free nullspaces, characteristic
//! polynomials and rational root extraction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};

/// Dense matrix of exact rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

/// Integer vector used for eigenvector certificates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactVector(pub Vec<BigInt>);

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn from_integer_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m.data[i * cols + j] = rat(v);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &BigRational) {
        self.data[i * self.cols + j] += v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self − λ I`.
    pub fn shift(&self, lambda: &BigRational) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let mut m = self.clone();
        for i in 0..self.rows {
            m.data[i * self.cols + i] -= lambda;
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &ExactVector) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| !self.get(i, j).is_zero() && !v.0[j].is_zero())
                    .map(|j| self.get(i, j) * BigRational::from_integer(v.0[j].clone()))
                    .fold(BigRational::zero(), |acc, x| acc + x)
            })
            .collect())
    }

    pub fn row_sums(&self) -> Vec<BigRational> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).sum())
            .collect()
    }

    pub fn trace(&self) -> BigRational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Integer entries as `i64`, or `None` if any entry is fractional or too large.
    pub fn to_integer_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let v = self.get(i, j);
                        if v.is_integer() {
                            v.to_integer().to_i64()
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).to_f64().unwrap_or(f64::NAN)
        })
    }

    /// One row per line, entries comma-separated, rationals as `p/q`.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    /// Row-major JSON: integers as numbers, fractions as `"p/q"` strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| {
                    serde_json::Value::Array(
                        (0..self.cols)
                            .map(|j| rational_json(self.get(i, j)))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

pub(crate) fn rational_json(v: &BigRational) -> serde_json::Value {
    match v.is_integer().then(|| v.to_integer().to_i64()).flatten() {
        Some(i) => serde_json::Value::from(i),
        None => serde_json::Value::String(v.to_string()),
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl ExactVector {
    pub fn from_i64(values: &[i64]) -> Self {
        Self(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0
            .iter()
            .map(|v| v.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Divides by the gcd of the entries and makes the first nonzero entry positive.
    pub fn normalized(&self) -> Self {
        let g = self.0.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return self.clone();
        }
        let sign = match self.0.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => -BigInt::one(),
            _ => BigInt::one(),
        };
        Self(self.0.iter().map(|x| x / &g * &sign).collect())
    }
}

impl fmt::Display for ExactVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for ExactVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for v in &self.0 {
            match v.to_i64() {
                Some(i) => seq.serialize_element(&i)?,
                None => seq.serialize_element(&v.to_string())?,
            }
        }
        seq.end()
    }
}

/// Rows scaled by the lcm of their denominators, giving an integer matrix
/// with the same row space.
fn integer_rows(m: &ExactMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| {
            let lcm = (0..m.cols()).fold(BigInt::one(), |acc, j| acc.lcm(m.get(i, j).denom()));
            (0..m.cols())
                .map(|j| {
                    let v = m.get(i, j);
                    v.numer() * (&lcm / v.denom())
                })
                .collect()
        })
        .collect()
}

/// Bareiss fraction-free forward elimination. Returns the echelon rows and
/// the pivot column of each nonzero row.
fn bareiss_echelon(mut a: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                // Exact by Sylvester's identity.
                let (q, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero());
                a[i][j] = q;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Rank over the rationals.
pub fn rank(m: &ExactMatrix) -> usize {
    bareiss_echelon(integer_rows(m), m.cols()).1.len()
}

/// Basis of `ker(M)` with primitive integer vectors (content 1, first nonzero
/// entry positive). Empty iff `M` has full column rank.
pub fn exact_nullspace(m: &ExactMatrix) -> Vec<ExactVector> {
    let cols = m.cols();
    let (echelon, pivots) = bareiss_echelon(integer_rows(m), cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); cols];
            x[f] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate().rev() {
                let row = &echelon[r];
                let s: BigRational = (pc + 1..cols)
                    .filter(|&j| !row[j].is_zero() && !x[j].is_zero())
                    .map(|j| BigRational::from_integer(row[j].clone()) * &x[j])
                    .sum();
                x[pc] = -s / BigRational::from_integer(row[pc].clone());
            }
            let lcm = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            ExactVector(x.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()).normalized()
        })
        .collect()
}

/// Polynomial with rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial(pub Vec<BigRational>);

impl Polynomial {
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Divides by `(x − r)`, assuming `r` is a root.
    fn deflate(&self, r: &BigRational) -> Self {
        let d = self.degree();
        let mut q = vec![BigRational::zero(); d];
        let mut carry = BigRational::zero();
        for k in (1..=d).rev() {
            carry = &self.0[k] + carry * r;
            q[k - 1] = carry.clone();
        }
        Self(q)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})x"),
                _ => format!("({c})x^{k}"),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// `det(xI − M)` by Faddeev–LeVerrier, exact over the rationals.
pub fn characteristic_polynomial(m: &ExactMatrix) -> Result<Polynomial> {
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.cols(),
        });
    }
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut mk = ExactMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = m.mul(&mk)?;
        for i in 0..n {
            next.add_at(i, i, &coeffs[n - k + 1]);
        }
        mk = next;
        let am = m.mul(&mk)?;
        coeffs[n - k] = -am.trace() / rat(k as i64);
    }
    Ok(Polynomial(coeffs))
}

fn divisors(v: &BigInt) -> Option<Vec<BigInt>> {
    let v = v.abs().to_u64()?;
    if v > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(BigInt::from(d));
            if d != v / d {
                out.push(BigInt::from(v / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// All rational roots with multiplicity, plus the unfactored remainder.
/// Returns `None` when the coefficients are too large for divisor search.
pub fn rational_roots(p: &Polynomial) -> Option<(Vec<(BigRational, usize)>, Polynomial)> {
    let mut rest = p.clone();
    while rest.0.len() > 1 && rest.0.last().is_some_and(Zero::is_zero) {
        rest.0.pop();
    }
    let mut roots: Vec<(BigRational, usize)> = Vec::new();
    let push = |roots: &mut Vec<(BigRational, usize)>, r: BigRational| match roots
        .iter_mut()
        .find(|(x, _)| *x == r)
    {
        Some(e) => e.1 += 1,
        None => roots.push((r, 1)),
    };
    while rest.degree() > 0 && rest.0[0].is_zero() {
        rest = Polynomial(rest.0[1..].to_vec());
        push(&mut roots, BigRational::zero());
    }
    loop {
        if rest.degree() == 0 {
            break;
        }
        let lcm = rest
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = rest
            .0
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let ps = divisors(&ints[0])?;
        let qs = divisors(ints.last().unwrap())?;
        let mut found = None;
        'search: for q in &qs {
            for p in &ps {
                for s in [BigInt::one(), -BigInt::one()] {
                    let cand = BigRational::new(p * &s, q.clone());
                    if rest.eval(&cand).is_zero() {
                        found = Some(cand);
                        break 'search;
                    }
                }
            }
        }
        match found {
            Some(r) => {
                rest = rest.deflate(&r);
                push(&mut roots, r);
            }
            None => break,
        }
    }
    roots.sort_by(|a, b| b.0.cmp(&a.0));
    Some((roots, rest))
}
