//! Burnt and plain pancake graphs as Cayley graphs of prefix reversals.
//!
//! Vertices are identified by their rank (see [`SignedPermutation::rank`]);
//! plain pancake vertices use the unsigned Lehmer rank. The adjacency is
//! available implicitly through [`CayleyGraph::neighbors`] and explicitly as a
//! [`SparseAdjacency`] in compressed row form.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ReversalMode};
use crate::group::{group_order, symmetric_order, ReversalIndex, SignedPermutation};

/// Upper bound on stored nonzeros for an explicit adjacency.
pub const MAX_NONZEROS: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `BP_n` on `B_n`, generators `r_1..r_n`.
    Burnt,
    /// `P_n` on `S_n`, generators `r_2..r_n`.
    Plain,
}

impl Family {
    pub fn mode(self) -> ReversalMode {
        match self {
            Family::Burnt => ReversalMode::Signed,
            Family::Plain => ReversalMode::Unsigned,
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "burnt" => Ok(Family::Burnt),
            "plain" => Ok(Family::Plain),
            other => Err(format!(
                "unknown family {other:?} (expected burnt or plain)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CayleyGraph {
    family: Family,
    n: usize,
    vertex_count: usize,
}

impl CayleyGraph {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        let order = match family {
            Family::Burnt => group_order(n)?,
            Family::Plain => symmetric_order(n)?,
        };
        let vertex_count = usize::try_from(order).map_err(|_| Error::BudgetExceeded {
            what: "vertex count",
            requested: order as u128,
            limit: usize::MAX as u128,
        })?;
        Ok(Self {
            family,
            n,
            vertex_count,
        })
    }

    pub fn burnt(n: usize) -> Result<Self> {
        Self::new(Family::Burnt, n)
    }

    pub fn plain(n: usize) -> Result<Self> {
        Self::new(Family::Plain, n)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn degree(&self) -> usize {
        match self.family {
            Family::Burnt => self.n,
            Family::Plain => self.n - 1,
        }
    }

    /// Generator indices in the order neighbors are produced.
    pub fn generators(&self) -> std::ops::RangeInclusive<usize> {
        match self.family {
            Family::Burnt => 1..=self.n,
            Family::Plain => 2..=self.n,
        }
    }

    pub fn vertex(&self, k: usize) -> Result<SignedPermutation> {
        self.check_vertex(k)?;
        match self.family {
            Family::Burnt => SignedPermutation::unrank(self.n, k as u64),
            Family::Plain => SignedPermutation::unsigned_unrank(self.n, k as u64),
        }
    }

    pub fn rank_of(&self, s: &SignedPermutation) -> Result<usize> {
        if s.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: s.n(),
            });
        }
        let r = match self.family {
            Family::Burnt => s.rank()?,
            Family::Plain => s.unsigned_rank()?,
        };
        Ok(r as usize)
    }

    fn check_vertex(&self, k: usize) -> Result<()> {
        if k >= self.vertex_count {
            return Err(Error::RankOutOfRange {
                rank: k as u64,
                order: self.vertex_count as u64,
            });
        }
        Ok(())
    }

    /// Neighbor ranks of vertex `k`, one per generator, in generator order.
    pub fn neighbors(&self, k: usize) -> Result<Vec<usize>> {
        let s = self.vertex(k)?;
        self.neighbors_of(&s)
    }

    /// Neighbors of an explicit vertex, as `(generator index, neighbor)` pairs.
    pub fn neighbor_words(&self, s: &SignedPermutation) -> Result<Vec<(usize, SignedPermutation)>> {
        let mode = self.family.mode();
        self.generators()
            .map(|i| Ok((i, s.apply_reversal(ReversalIndex::new(i, self.n, mode)?)?)))
            .collect()
    }

    fn neighbors_of(&self, s: &SignedPermutation) -> Result<Vec<usize>> {
        self.neighbor_words(s)?
            .iter()
            .map(|(_, t)| self.rank_of(t))
            .collect()
    }

    pub fn build_sparse_adjacency(&self) -> Result<SparseAdjacency> {
        let nnz = self.vertex_count as u128 * self.degree() as u128;
        if nnz > MAX_NONZEROS {
            return Err(Error::BudgetExceeded {
                what: "adjacency nonzeros",
                requested: nnz,
                limit: MAX_NONZEROS,
            });
        }
        let rows: Vec<Vec<usize>> = (0..self.vertex_count)
            .into_par_iter()
            .map(|k| {
                let mut row = self.neighbors(k)?;
                row.sort_unstable();
                Ok(row)
            })
            .collect::<Result<_>>()?;
        let mut offsets = Vec::with_capacity(self.vertex_count + 1);
        offsets.push(0);
        let mut columns = Vec::with_capacity(nnz as usize);
        for row in rows {
            columns.extend_from_slice(&row);
            offsets.push(columns.len());
        }
        Ok(SparseAdjacency {
            dimension: self.vertex_count,
            offsets,
            columns,
        })
    }

    /// BFS from vertex 0 on the implicit neighbor function.
    pub fn connectivity_check(&self) -> Result<Connectivity> {
        let mut component = vec![usize::MAX; self.vertex_count];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.vertex_count {
            if component[start] != usize::MAX {
                continue;
            }
            component[start] = count;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbors(u)? {
                    if component[v] == usize::MAX {
                        component[v] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        Ok(Connectivity {
            connected: count == 1,
            component_count: count,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connectivity {
    pub connected: bool,
    pub component_count: usize,
}

/// Symmetric 0/1 matrix in compressed row form with sorted column indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseAdjacency {
    dimension: usize,
    offsets: Vec<usize>,
    columns: Vec<usize>,
}

impl SparseAdjacency {
    /// Builds from an undirected edge list; duplicates and loops are rejected.
    pub fn from_edges(dimension: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut rows = vec![Vec::new(); dimension];
        for &(u, v) in edges {
            if u >= dimension || v >= dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    got: u.max(v) + 1,
                });
            }
            if u == v {
                return Err(Error::MatrixMarket(format!("self-loop at {u}")));
            }
            rows[u].push(v);
            rows[v].push(u);
        }
        let mut offsets = vec![0];
        let mut columns = Vec::new();
        for mut row in rows {
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::MatrixMarket("duplicate edge".into()));
            }
            columns.extend(row);
            offsets.push(columns.len());
        }
        Ok(Self {
            dimension,
            offsets,
            columns,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn nonzeros(&self) -> usize {
        self.columns.len()
    }

    pub fn row(&self, u: usize) -> &[usize] {
        &self.columns[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.row(u).binary_search(&v).is_ok()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dimension).all(|u| self.row(u).iter().all(|&v| self.contains(v, u)))
    }

    pub fn trace(&self) -> usize {
        (0..self.dimension).filter(|&u| self.contains(u, u)).count()
    }

    /// `trace(A²) = Σ_u Σ_v A_uv A_vu`, which for a symmetric 0/1 matrix is the nonzero count.
    pub fn trace_of_square(&self) -> usize {
        (0..self.dimension)
            .map(|u| self.row(u).iter().filter(|&&v| self.contains(v, u)).count())
            .sum()
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dimension);
        assert_eq!(y.len(), self.dimension);
        y.par_iter_mut().enumerate().for_each(|(u, yu)| {
            *yu = self.row(u).iter().map(|&v| x[v]).sum();
        });
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.dimension, self.dimension);
        for u in 0..self.dimension {
            for &v in self.row(u) {
                m[(u, v)] = 1.0;
            }
        }
        m
    }

    /// Writes `coordinate pattern symmetric` Matrix Market: 1-based, lower
    /// triangle only, rows ascending then columns ascending, LF endings.
    pub fn export_matrix_market<W: Write>(&self, mut out: W) -> Result<()> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let lower: usize = (0..self.dimension)
            .map(|u| self.row(u).iter().filter(|&&v| v <= u).count())
            .sum();
        writeln!(out, "%%MatrixMarket matrix coordinate pattern symmetric")?;
        writeln!(out, "{} {} {}", self.dimension, self.dimension, lower)?;
        for u in 0..self.dimension {
            for &v in self.row(u).iter().filter(|&&v| v <= u) {
                writeln!(out, "{} {}", u + 1, v + 1)?;
            }
        }
        out.flush()?;
        Ok(())
    }

    /// Reads the format written by [`SparseAdjacency::export_matrix_market`].
    pub fn import_matrix_market<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::MatrixMarket("empty file".into()))??;
        let fields: Vec<String> = header
            .split_whitespace()
            .map(str::to_ascii_lowercase)
            .collect();
        if fields
            != [
                "%%matrixmarket",
                "matrix",
                "coordinate",
                "pattern",
                "symmetric",
            ]
        {
            return Err(Error::MatrixMarket(format!(
                "unsupported header {header:?}"
            )));
        }
        let mut size: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('%') {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::MatrixMarket(format!("bad token {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            match (size, nums.as_slice()) {
                (None, &[r, c, nnz]) => {
                    if r != c {
                        return Err(Error::MatrixMarket(format!("non-square {r}x{c}")));
                    }
                    size = Some((r, nnz));
                    edges.reserve(nnz);
                }
                (Some((dim, _)), &[i, j]) => {
                    if i == 0 || j == 0 || i > dim || j > dim {
                        return Err(Error::MatrixMarket(format!("index out of range: {line}")));
                    }
                    edges.push((i - 1, j - 1));
                }
                _ => return Err(Error::MatrixMarket(format!("unexpected line {line:?}"))),
            }
        }
        let (dim, nnz) = size.ok_or_else(|| Error::MatrixMarket("missing size line".into()))?;
        if edges.len() != nnz {
            return Err(Error::MatrixMarket(format!(
                "declared {nnz} entries, found {}",
                edges.len()
            )));
        }
        Self::from_edges(dim, &edges)
    }
}
