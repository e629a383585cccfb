//! Signed permutations (the hyperoctahedral group `B_n`) and prefix reversals.
//!
//! A [`SignedPermutation`] is stored in one-line notation `σ_1 … σ_n`; the
//! full bijection on `±[n]` is implied by `σ(−i) = −σ(i)`. Negative entries
//! are written with an ASCII minus in all text I/O, e.g. `3 -2 4 -5 1`.
//!
//! The prefix reversal `r_i` acts on the word directly: the first `i`
//! entries are reversed and (in signed mode) negated. As a group element this
//! is right multiplication, `r_i(σ) = σ ∘ r_i`, see [`SignedPermutation::compose`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result, ReversalMode};

/// Largest word length whose group order `2^n n!` fits in a `u64` rank.
pub const MAX_RANK_N: usize = 16;

/// An element of `B_n` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermutation {
    entries: Vec<i32>,
}

/// Generator index `i` of a prefix reversal, validated against `n` and mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReversalIndex {
    i: usize,
    mode: ReversalMode,
}

impl ReversalIndex {
    /// Signed mode accepts `1 ≤ i ≤ n`, unsigned mode `2 ≤ i ≤ n`.
    pub fn new(i: usize, n: usize, mode: ReversalMode) -> Result<Self> {
        let lo = match mode {
            ReversalMode::Signed => 1,
            ReversalMode::Unsigned => 2,
        };
        if i < lo || i > n {
            return Err(Error::IndexOutOfRange { index: i, n, mode });
        }
        Ok(Self { i, mode })
    }

    pub fn signed(i: usize, n: usize) -> Result<Self> {
        Self::new(i, n, ReversalMode::Signed)
    }

    pub fn unsigned(i: usize, n: usize) -> Result<Self> {
        Self::new(i, n, ReversalMode::Unsigned)
    }

    pub fn get(self) -> usize {
        self.i
    }

    pub fn mode(self) -> ReversalMode {
        self.mode
    }
}

impl SignedPermutation {
    /// Builds a signed permutation, checking that the magnitudes are exactly `{1, …, n}`.
    pub fn new(entries: Vec<i32>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut seen = vec![false; n + 1];
        for &e in &entries {
            if e == 0 {
                return Err(Error::ZeroEntry);
            }
            let m = e.unsigned_abs();
            if m as usize > n {
                return Err(Error::MagnitudeTooLarge { magnitude: m, n });
            }
            if seen[m as usize] {
                return Err(Error::DuplicateMagnitude(m));
            }
            seen[m as usize] = true;
        }
        Ok(Self { entries })
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "B_0 has no one-line representative");
        Self {
            entries: (1..=n as i32).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[i32] {
        &self.entries
    }

    /// `σ(p)` for `p ∈ ±[n]`, using `σ(−p) = −σ(p)`.
    pub fn eval(&self, p: i32) -> i32 {
        let v = self.entries[p.unsigned_abs() as usize - 1];
        if p < 0 {
            -v
        } else {
            v
        }
    }

    /// `(self ∘ other)(p) = self(other(p))`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n(), "composition of different word lengths");
        Self {
            entries: other.entries.iter().map(|&p| self.eval(p)).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut entries = vec![0; self.n()];
        for (p, &v) in self.entries.iter().enumerate() {
            let pos = p as i32 + 1;
            entries[v.unsigned_abs() as usize - 1] = if v < 0 { -pos } else { pos };
        }
        Self { entries }
    }

    /// Applies `r_i`: the first `i` entries are reversed, and negated in signed mode.
    pub fn apply_reversal(&self, i: ReversalIndex) -> Result<Self> {
        let n = self.n();
        // Revalidate: the index may have been built for another n.
        ReversalIndex::new(i.i, n, i.mode)?;
        if i.mode == ReversalMode::Unsigned && !self.is_unsigned() {
            return Err(Error::NegativeEntry);
        }
        let mut entries = self.entries.clone();
        entries[..i.i].reverse();
        if i.mode == ReversalMode::Signed {
            entries[..i.i].iter_mut().for_each(|e| *e = -*e);
        }
        Ok(Self { entries })
    }

    /// Unsigned prefix reversal on an all-positive word, `2 ≤ i ≤ n`.
    pub fn apply_unsigned_reversal(&self, i: usize) -> Result<Self> {
        if !self.is_unsigned() {
            return Err(Error::NegativeEntry);
        }
        self.apply_reversal(ReversalIndex::unsigned(i, self.n())?)
    }

    pub fn is_unsigned(&self) -> bool {
        self.entries.iter().all(|&e| e > 0)
    }

    /// Returns `j` with `σ(j) = v` under the signed convention, i.e. `σ^{-1}(v)`.
    pub fn signed_position(&self, v: i32) -> i32 {
        let target = v.unsigned_abs() as i32;
        let p = self
            .entries
            .iter()
            .position(|e| e.abs() == target)
            .expect("|v| ≤ n") as i32
            + 1;
        if self.entries[p as usize - 1] == v {
            p
        } else {
            -p
        }
    }

    /// Position-major rank: Lehmer code of `|σ|` in factorial base, then the
    /// `n` sign bits (bit `p` set when `σ_{p+1} < 0`) as the low digits.
    pub fn rank(&self) -> Result<u64> {
        let n = self.n();
        if n > MAX_RANK_N {
            return Err(Error::BudgetExceeded {
                what: "rank word length",
                requested: n as u128,
                limit: MAX_RANK_N as u128,
            });
        }
        let mags: Vec<u32> = self.entries.iter().map(|e| e.unsigned_abs()).collect();
        let mut lehmer = 0u64;
        for p in 0..n {
            let smaller_after = mags[p + 1..].iter().filter(|&&m| m < mags[p]).count() as u64;
            lehmer = lehmer * (n - p) as u64 + smaller_after;
        }
        let signs = self
            .entries
            .iter()
            .enumerate()
            .filter(|(_, &e)| e < 0)
            .fold(0u64, |acc, (p, _)| acc | (1 << p));
        Ok((lehmer << n) | signs)
    }

    pub fn unrank(n: usize, k: u64) -> Result<Self> {
        let order = group_order(n)?;
        if k >= order {
            return Err(Error::RankOutOfRange { rank: k, order });
        }
        let signs = k & ((1u64 << n) - 1);
        let mut lehmer = k >> n;
        let mut digits = vec![0usize; n];
        for p in (0..n).rev() {
            let radix = (n - p) as u64;
            digits[p] = (lehmer % radix) as usize;
            lehmer /= radix;
        }
        let mut pool: Vec<i32> = (1..=n as i32).collect();
        let entries = digits
            .into_iter()
            .enumerate()
            .map(|(p, d)| {
                let m = pool.remove(d);
                if signs >> p & 1 == 1 {
                    -m
                } else {
                    m
                }
            })
            .collect();
        Ok(Self { entries })
    }

    /// Rank of an all-positive word within `S_n` (Lehmer code only).
    pub fn unsigned_rank(&self) -> Result<u64> {
        if !self.is_unsigned() {
            return Err(Error::NegativeEntry);
        }
        Ok(self.rank()? >> self.n())
    }

    pub fn unsigned_unrank(n: usize, k: u64) -> Result<Self> {
        let order = symmetric_order(n)?;
        if k >= order {
            return Err(Error::RankOutOfRange { rank: k, order });
        }
        Self::unrank(n, k << n)
    }

    /// Parses whitespace- and/or comma-separated signed integers.
    pub fn parse(text: &str) -> Result<Self> {
        let entries = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                let digits = t.strip_prefix('-').unwrap_or(t);
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::MalformedToken(t.to_string()));
                }
                t.parse::<i32>()
                    .map_err(|_| Error::MalformedToken(t.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}

/// The one-line word of `r_i` as a group element, `r_i` applied to the identity.
pub fn reversal_as_element(n: usize, i: usize) -> Result<SignedPermutation> {
    SignedPermutation::identity(n).apply_reversal(ReversalIndex::signed(i, n)?)
}

/// `|B_n| = 2^n n!`.
pub fn group_order(n: usize) -> Result<u64> {
    if n == 0 || n > MAX_RANK_N {
        return Err(Error::UnsupportedN {
            op: "group order",
            n,
            min: 1,
            max: MAX_RANK_N,
        });
    }
    Ok(symmetric_order(n)? << n)
}

/// `|S_n| = n!`.
pub fn symmetric_order(n: usize) -> Result<u64> {
    if n == 0 || n > MAX_RANK_N {
        return Err(Error::UnsupportedN {
            op: "group order",
            n,
            min: 1,
            max: MAX_RANK_N,
        });
    }
    Ok((1..=n as u64).product())
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, e) in self.entries.iter().enumerate() {
            if p > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for SignedPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}
