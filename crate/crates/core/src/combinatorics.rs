//! Exact counts of set partitions and their path counterparts.
//!
//! All counts are returned as [`BigUint`]; Stirling numbers leave the 64-bit
//! range around k = 25 and nothing here should fail silently below that.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::{Error, Result};

/// A partition of `{1, …, k}` into non-empty blocks.
///
/// Blocks are sorted internally and listed by their smallest element, so
/// block `j` holds the smallest element not covered by blocks `1..j`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetPartition {
    k: usize,
    blocks: Vec<Vec<u32>>,
}

impl SetPartition {
    /// Builds a partition from arbitrary blocks, validating coverage and
    /// normalising the block order.
    pub fn new(k: usize, mut blocks: Vec<Vec<u32>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::argument("k", "ground set must be non-empty"));
        }
        let mut seen = vec![false; k];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::argument("blocks", "blocks must be non-empty"));
            }
            block.sort_unstable();
            for &x in block.iter() {
                let idx = x as usize;
                if idx == 0 || idx > k {
                    return Err(Error::argument(
                        "blocks",
                        alloc::format!("element {x} is outside 1..={k}"),
                    ));
                }
                if seen[idx - 1] {
                    return Err(Error::argument(
                        "blocks",
                        alloc::format!("element {x} appears in more than one block"),
                    ));
                }
                seen[idx - 1] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::argument(
                "blocks",
                alloc::format!("element {} is not covered", missing + 1),
            ));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Self { k, blocks })
    }

    /// Partition whose block `ℓ` is the set of positions carrying label `ℓ`
    /// in a restricted-growth string (labels `1..=r`).
    pub(crate) fn from_labels(labels: &[u32]) -> Self {
        let r = labels.iter().copied().max().unwrap_or(0) as usize;
        let mut blocks = vec![Vec::new(); r];
        for (pos, &label) in labels.iter().enumerate() {
            blocks[label as usize - 1].push(pos as u32 + 1);
        }
        Self {
            k: labels.len(),
            blocks,
        }
    }

    /// Label of every element, `1..=r`, in ground-set order.
    pub(crate) fn labels(&self) -> Vec<u32> {
        let mut labels = vec![0u32; self.k];
        for (j, block) in self.blocks.iter().enumerate() {
            for &x in block {
                labels[x as usize - 1] = j as u32 + 1;
            }
        }
        labels
    }

    pub fn ground_size(&self) -> usize {
        self.k
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (j, block) in self.blocks.iter().enumerate() {
            if j > 0 {
                f.write_str("|")?;
            }
            for (i, x) in block.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
        }
        f.write_str("}")
    }
}

fn check_range(k: usize, r: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::argument("k", "must be at least 1"));
    }
    if r == 0 || r > k {
        return Err(Error::argument(
            "r",
            alloc::format!("must lie in 1..={k}, got {r}"),
        ));
    }
    Ok(())
}

/// Row `k` of the Stirling triangle, `S(k, 0..=k)`, with `S(0, 0) = 1`.
fn stirling2_row(k: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for n in 1..=k {
        let mut next = vec![BigUint::zero(); n + 1];
        for (j, slot) in next.iter_mut().enumerate().skip(1) {
            let mut v = if j < n {
                &row[j] * BigUint::from(j)
            } else {
                BigUint::zero()
            };
            v += &row[j - 1];
            *slot = v;
        }
        row = next;
    }
    row
}

/// `S(k, r)` for any `k, r ≥ 0` (zero outside the triangle).
pub(crate) fn stirling2_unchecked(k: usize, r: usize) -> BigUint {
    if r > k {
        return BigUint::zero();
    }
    stirling2_row(k).swap_remove(r)
}

pub(crate) fn bell_unchecked(k: usize) -> BigUint {
    stirling2_row(k).into_iter().sum()
}

/// Stirling number of the second kind: the number of `r`-partitions of a
/// `k`-set.
pub fn stirling2(k: usize, r: usize) -> Result<BigUint> {
    check_range(k, r)?;
    Ok(stirling2_unchecked(k, r))
}

/// Bell number: the number of partitions of a `k`-set.
pub fn bell(k: usize) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::argument("k", "must be at least 1"));
    }
    Ok(bell_unchecked(k))
}

/// 2-associated Stirling number: `r`-partitions of a `k`-set whose blocks all
/// have at least two elements.
///
/// Uses `B₂(k+1, r) = r·B₂(k, r) + k·B₂(k−1, r−1)` with `B₂(0, 0) = 1`.
pub fn stirling2_assoc(k: usize, r: usize) -> BigUint {
    if 2 * r > k {
        return if k == 0 && r == 0 {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    // table[n][j] = B₂(n, j)
    let mut table: Vec<Vec<BigUint>> = Vec::with_capacity(k + 1);
    for n in 0..=k {
        let mut row = vec![BigUint::zero(); r + 1];
        if n == 0 {
            row[0] = BigUint::one();
        } else if n >= 2 {
            let m = n - 1;
            for (j, slot) in row.iter_mut().enumerate().skip(1) {
                if 2 * j > n {
                    break;
                }
                let mut v = &table[m][j] * BigUint::from(j);
                v += &table[m - 1][j - 1] * BigUint::from(m);
                *slot = v;
            }
        }
        table.push(row);
    }
    table[k][r].clone()
}

/// Canonical `r`-paths of length `k` with no run, counting the wrap-around
/// pair `(i_k, i_1)` as adjacent.
///
/// For `r ≥ 2` this is `Σ_{j=0}^{k−r} (−1)^j S(k−j−1, r−1)`. A single-vertex
/// path of length ≥ 2 always has a run; the length-one path `(1)` has none.
pub fn count_norun_paths(k: usize, r: usize) -> Result<BigUint> {
    check_range(k, r)?;
    if r == 1 {
        return Ok(if k == 1 {
            BigUint::one()
        } else {
            BigUint::zero()
        });
    }
    let mut total = BigInt::zero();
    for j in 0..=(k - r) {
        let term = BigInt::from(stirling2_unchecked(k - j - 1, r - 1));
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
        .to_biguint()
        .ok_or_else(|| Error::Inconsistent(alloc::format!("negative no-run count at ({k}, {r})")))
}

pub(crate) fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// Number of completely reducible canonical `r`-paths of length `k`, the
/// Narayana number `(1/r)·C(k, r−1)·C(k−1, r−1)`.
pub fn count_c0(k: usize, r: usize) -> Result<BigUint> {
    check_range(k, r)?;
    Ok(binomial(k, r - 1) * binomial(k - 1, r - 1) / BigUint::from(r))
}

/// Restricted-growth strings of length `k` with labels starting at 1, in
/// lexicographic order.
///
/// Optionally restricted to exactly `blocks` distinct labels and to strings
/// extending a fixed prefix.
#[derive(Debug, Clone)]
pub(crate) struct RestrictedGrowth {
    labels: Vec<u32>,
    prefix_len: usize,
    blocks: Option<u32>,
    done: bool,
}

impl RestrictedGrowth {
    /// `prefix` must itself be a restricted-growth string (checked by callers).
    pub(crate) fn new(k: usize, blocks: Option<usize>, prefix: &[u32]) -> Self {
        let mut it = Self {
            labels: Vec::with_capacity(k),
            prefix_len: prefix.len().max(1),
            blocks: blocks.map(|b| b as u32),
            done: false,
        };
        if k == 0 || prefix.len() > k {
            it.done = true;
            return it;
        }
        it.labels.extend_from_slice(prefix);
        if it.labels.is_empty() {
            it.labels.push(1);
        }
        let max = it.labels.iter().copied().max().unwrap_or(1);
        let start = it.labels.len();
        it.labels.resize(k, 0);
        if !it.fill_suffix(start, max) {
            it.done = true;
        }
        it
    }

    /// Writes the lexicographically smallest completion of `labels[from..]`
    /// given the running maximum; false when the block target is unreachable.
    fn fill_suffix(&mut self, from: usize, max: u32) -> bool {
        let k = self.labels.len();
        let need = match self.blocks {
            Some(b) => {
                if b < max {
                    return false;
                }
                (b - max) as usize
            }
            None => 0,
        };
        if need > k - from {
            return false;
        }
        let ones = k - from - need;
        for slot in &mut self.labels[from..from + ones] {
            *slot = 1;
        }
        for (i, slot) in self.labels[from + ones..].iter_mut().enumerate() {
            *slot = max + 1 + i as u32;
        }
        true
    }

    fn advance(&mut self) {
        let k = self.labels.len();
        let mut prefix_max = Vec::with_capacity(k);
        let mut m = 0;
        for &l in &self.labels {
            m = m.max(l);
            prefix_max.push(m);
        }
        for j in (self.prefix_len..k).rev() {
            let before = prefix_max[j - 1];
            let v = self.labels[j] + 1;
            if v > before + 1 {
                continue;
            }
            let new_max = before.max(v);
            if let Some(b) = self.blocks {
                if v > b || (b - new_max) as usize > k - 1 - j {
                    continue;
                }
            }
            self.labels[j] = v;
            if self.fill_suffix(j + 1, new_max) {
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for RestrictedGrowth {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.labels.clone();
        self.advance();
        Some(out)
    }
}

/// Every `r`-partition of `{1, …, k}` exactly once, in lexicographic order
/// of the restricted-growth strings.
pub fn enumerate_partitions(k: usize, r: usize) -> Result<Partitions> {
    check_range(k, r)?;
    Ok(Partitions {
        inner: RestrictedGrowth::new(k, Some(r), &[]),
    })
}

/// Stream returned by [`enumerate_partitions`].
#[derive(Debug, Clone)]
pub struct Partitions {
    inner: RestrictedGrowth,
}

impl Iterator for Partitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        self.inner.next().map(|l| SetPartition::from_labels(&l))
    }
}
