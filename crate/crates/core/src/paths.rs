//! Canonical paths, their correspondence with set partitions, and the
//! path-shortening reduction.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use crate::combinatorics::{RestrictedGrowth, SetPartition};
use crate::{Error, Limits, Result};

/// A sequence of positive vertex labels. The empty path stands for `∅`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(Vec<u32>);

impl Path {
    /// Wraps a vertex sequence; every label must be positive.
    pub fn new(vertices: Vec<u32>) -> Result<Self> {
        if vertices.contains(&0) {
            return Err(Error::argument("path", "vertex labels must be positive"));
        }
        Ok(Self(vertices))
    }

    pub(crate) fn from_raw(vertices: Vec<u32>) -> Self {
        Self(vertices)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// The path `(1, 1, …, 1)` of length `k`.
    pub fn constant(k: usize) -> Self {
        Self(vec![1; k])
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of distinct vertices.
    pub fn num_distinct(&self) -> usize {
        let mut v = self.0.clone();
        v.sort_unstable();
        v.dedup();
        v.len()
    }

    /// Starts at 1 and never exceeds the running maximum by more than one.
    pub fn is_canonical(&self) -> bool {
        let mut max = 0;
        for &x in &self.0 {
            if x > max + 1 {
                return false;
            }
            max = max.max(x);
        }
        true
    }

    /// Number of times each label `1..=max` occurs.
    pub(crate) fn occurrences(&self) -> Vec<u32> {
        let max = self.0.iter().copied().max().unwrap_or(0) as usize;
        let mut counts = vec![0u32; max + 1];
        for &x in &self.0 {
            counts[x as usize] += 1;
        }
        counts
    }
}

impl fmt::Display for Path {
    /// Comma-separated labels; `∅` prints as the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl core::str::FromStr for Path {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let vertices = s
            .split(',')
            .map(|tok| {
                tok.trim().parse::<u32>().map_err(|_| {
                    Error::argument(
                        "path",
                        alloc::format!("`{}` is not a positive integer", tok.trim()),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(vertices)
    }
}

/// Relabels vertices in order of first appearance.
pub fn canonicalize(path: &Path) -> Path {
    let mut map: Vec<(u32, u32)> = Vec::new();
    let out = path
        .0
        .iter()
        .map(|&x| match map.iter().find(|(from, _)| *from == x) {
            Some(&(_, to)) => to,
            None => {
                let to = map.len() as u32 + 1;
                map.push((x, to));
                to
            }
        })
        .collect();
    Path(out)
}

/// Block `ℓ` of the partition is the set of positions carrying label `ℓ`.
pub fn path_to_partition(path: &Path) -> Result<SetPartition> {
    if path.is_empty() {
        return Err(Error::argument("path", "the empty path has no partition"));
    }
    if !path.is_canonical() {
        return Err(Error::argument("path", "path is not canonical"));
    }
    Ok(SetPartition::from_labels(&path.0))
}

/// Inverse of [`path_to_partition`].
pub fn partition_to_path(partition: &SetPartition) -> Path {
    Path(partition.labels())
}

/// Outcome of the path-shortening reduction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PsResult {
    /// Canonical form of the irreducible remainder `S(I)`.
    pub shortened: Path,
    /// Number of run erasures.
    pub runs: usize,
    /// Number of simple vertices deleted.
    pub simples: usize,
}

/// Erases the leftmost cyclic run until none is left. Returns the number of
/// erasures.
///
/// A single vertex is not treated as a run with itself: the check only
/// applies to paths of length at least two.
fn erase_runs(v: &mut Vec<u32>) -> usize {
    let mut runs = 0;
    'restart: while v.len() >= 2 {
        let l = v.len();
        for j in 0..l {
            if v[j] == v[(j + 1) % l] {
                v.remove(j);
                runs += 1;
                continue 'restart;
            }
        }
        break;
    }
    runs
}

/// Deletes every vertex occurring exactly once. Returns how many there were.
fn delete_simples(v: &mut Vec<u32>, counts: &mut Vec<u32>) -> usize {
    let max = v.iter().copied().max().unwrap_or(0) as usize;
    counts.clear();
    counts.resize(max + 1, 0);
    for &x in v.iter() {
        counts[x as usize] += 1;
    }
    let simples = counts.iter().filter(|&&c| c == 1).count();
    if simples > 0 {
        v.retain(|&x| counts[x as usize] != 1);
    }
    simples
}

/// Path-shortening: alternately erase runs and delete simple vertices until
/// the path stops changing.
pub fn shorten(path: &Path) -> PsResult {
    let mut v = path.0.clone();
    let mut counts = Vec::new();
    let mut runs = 0;
    let mut simples = 0;
    loop {
        let before = v.len();
        runs += erase_runs(&mut v);
        simples += delete_simples(&mut v, &mut counts);
        // Both steps only ever delete, so an unchanged length means a fixpoint.
        if v.len() == before {
            break;
        }
    }
    PsResult {
        shortened: canonicalize(&Path(v)),
        runs,
        simples,
    }
}

/// Reducibility class of a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathClass {
    /// Shortens to `∅` (the class `C⁰`).
    CompletelyReducible,
    /// Fixed by the reduction (the class `C¹`).
    Irreducible,
    /// Shortens to a proper non-empty path (the class `C²`).
    PartiallyReducible,
}

impl PathClass {
    pub fn of(result: &PsResult, path: &Path) -> Self {
        if result.shortened.is_empty() {
            Self::CompletelyReducible
        } else if result.runs == 0 && result.simples == 0 && !path.is_empty() {
            Self::Irreducible
        } else {
            Self::PartiallyReducible
        }
    }
}

pub fn classify(path: &Path) -> PathClass {
    PathClass::of(&shorten(path), path)
}

/// Lexicographic stream of canonical paths of a fixed length.
#[derive(Debug, Clone)]
pub struct CanonicalPaths {
    inner: RestrictedGrowth,
}

impl CanonicalPaths {
    /// Canonical paths of length `k` extending `prefix`, optionally with
    /// exactly `r` distinct vertices.
    pub fn with_prefix(k: usize, r: Option<usize>, prefix: &Path) -> Result<Self> {
        if k == 0 {
            return Err(Error::argument("k", "must be at least 1"));
        }
        if let Some(r) = r {
            if r == 0 || r > k {
                return Err(Error::argument(
                    "r",
                    alloc::format!("must lie in 1..={k}, got {r}"),
                ));
            }
        }
        if !prefix.is_canonical() || prefix.len() > k {
            return Err(Error::argument(
                "prefix",
                "must be a canonical path no longer than k",
            ));
        }
        Ok(Self {
            inner: RestrictedGrowth::new(k, r, &prefix.0),
        })
    }
}

impl Iterator for CanonicalPaths {
    type Item = Path;

    fn next(&mut self) -> Option<Path> {
        self.inner.next().map(Path)
    }
}

/// Every canonical `r`-path of length `k` (the set `C_{r,k}`).
pub fn enumerate_canonical_paths(k: usize, r: usize) -> Result<CanonicalPaths> {
    CanonicalPaths::with_prefix(k, Some(r), &Path::empty())
}

/// Canonical `r`-paths of length `k` in the given class.
pub fn enumerate_class(k: usize, r: usize, class: PathClass) -> Result<impl Iterator<Item = Path>> {
    Ok(enumerate_canonical_paths(k, r)?.filter(move |p| classify(p) == class))
}

/// Canonical `r`-paths of length `k` that do not shorten to `∅` and lose
/// exactly `q` simple vertices (the set `C^{(q)}_{r,k}`).
pub fn enumerate_with_simples(k: usize, r: usize, q: usize) -> Result<impl Iterator<Item = Path>> {
    Ok(enumerate_canonical_paths(k, r)?.filter(move |p| {
        let ps = shorten(p);
        !ps.shortened.is_empty() && ps.simples == q
    }))
}

/// `M(k, r)`: the number of `r`-partitions of `{1, …, k}` with every block of
/// size at least two and no two cyclically adjacent elements (including `k`
/// and `1`) in the same block.
///
/// Counted by a pruned walk over restricted-growth strings with the default
/// enumeration limit.
pub fn count_irreducible(k: usize, r: usize) -> Result<BigUint> {
    count_irreducible_with_limits(k, r, &Limits::default())
}

pub fn count_irreducible_with_limits(k: usize, r: usize, limits: &Limits) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::argument("k", "must be at least 1"));
    }
    if r == 0 || r > k {
        return Err(Error::argument(
            "r",
            alloc::format!("must lie in 1..={k}, got {r}"),
        ));
    }
    limits.check(k)?;
    if k < 2 * r {
        return Ok(BigUint::default());
    }
    let mut walk = IrreducibleWalk {
        k,
        r: r as u32,
        labels: vec![0; k],
        sizes: vec![0; r + 1],
        singletons: 0,
        count: 0,
    };
    walk.labels[0] = 1;
    walk.sizes[1] = 1;
    walk.singletons = 1;
    walk.extend(1, 1);
    Ok(BigUint::from(walk.count))
}

struct IrreducibleWalk {
    k: usize,
    r: u32,
    labels: Vec<u32>,
    sizes: Vec<u32>,
    singletons: usize,
    count: u128,
}

impl IrreducibleWalk {
    fn extend(&mut self, pos: usize, max: u32) {
        let remaining = self.k - pos;
        // every singleton block needs one more element, every unopened block two
        let unopened = (self.r - max) as usize;
        if self.singletons + 2 * unopened > remaining {
            return;
        }
        if remaining == 0 {
            if self.labels[self.k - 1] != self.labels[0] {
                self.count += 1;
            }
            return;
        }
        let prev = self.labels[pos - 1];
        let top = (max + 1).min(self.r);
        for label in 1..=top {
            if label == prev || (pos == self.k - 1 && label == self.labels[0]) {
                continue;
            }
            let size = &mut self.sizes[label as usize];
            *size += 1;
            match *size {
                1 => self.singletons += 1,
                2 => self.singletons -= 1,
                _ => {}
            }
            self.labels[pos] = label;
            self.extend(pos + 1, max.max(label));
            let size = &mut self.sizes[label as usize];
            match *size {
                1 => self.singletons -= 1,
                2 => self.singletons += 1,
                _ => {}
            }
            *size -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{count_c0, count_norun_paths, enumerate_partitions, stirling2};
    use alloc::collections::BTreeSet;

    fn p(v: &[u32]) -> Path {
        Path::new(v.to_vec()).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(canonicalize(&p(&[9, 6, 9, 6])), p(&[1, 2, 1, 2]));
        assert_eq!(canonicalize(&p(&[1, 2, 1, 2])), p(&[1, 2, 1, 2]));
        assert_eq!(canonicalize(&p(&[3, 3, 1])), p(&[1, 1, 2]));
        assert!(!p(&[3, 3, 1]).is_canonical());
        assert!(Path::new(vec![1, 0]).is_err());
    }

    #[test]
    fn parse_and_display() {
        let path: Path = "1, 2,1,2".parse().unwrap();
        assert_eq!(path, p(&[1, 2, 1, 2]));
        assert_eq!(alloc::format!("{path}"), "1,2,1,2");
        assert!("1,x".parse::<Path>().is_err());
        assert!("1,0".parse::<Path>().is_err());
    }

    #[test]
    fn partition_examples() {
        let part = path_to_partition(&p(&[1, 2, 1, 2])).unwrap();
        assert_eq!(part.blocks(), &[vec![1, 3], vec![2, 4]]);
        let singles = SetPartition::new(3, vec![vec![1], vec![2], vec![3]]).unwrap();
        assert_eq!(partition_to_path(&singles), p(&[1, 2, 3]));
        assert!(path_to_partition(&p(&[2, 1])).is_err());
    }

    #[test]
    fn partition_round_trip() {
        for k in 1..=6 {
            for r in 1..=k {
                for path in enumerate_canonical_paths(k, r).unwrap() {
                    let part = path_to_partition(&path).unwrap();
                    assert_eq!(partition_to_path(&part), path);
                }
                for part in enumerate_partitions(k, r).unwrap() {
                    assert_eq!(path_to_partition(&partition_to_path(&part)).unwrap(), part);
                }
            }
        }
    }

    #[test]
    fn shorten_examples() {
        assert_eq!(
            shorten(&p(&[1, 1, 2, 2])),
            PsResult {
                shortened: Path::empty(),
                runs: 2,
                simples: 2
            }
        );
        assert_eq!(
            shorten(&p(&[1, 2, 1, 2, 3, 3])),
            PsResult {
                shortened: p(&[1, 2, 1, 2]),
                runs: 1,
                simples: 1
            }
        );
        assert_eq!(
            shorten(&p(&[1, 2, 1, 2])),
            PsResult {
                shortened: p(&[1, 2, 1, 2]),
                runs: 0,
                simples: 0
            }
        );
        assert_eq!(
            shorten(&Path::empty()),
            PsResult {
                shortened: Path::empty(),
                runs: 0,
                simples: 0
            }
        );
        // wrap-around run between the last and first vertex
        assert_eq!(shorten(&p(&[1, 2, 1, 2, 1])).runs, 1);
        // (1) is one simple vertex, (1,1) one run then one simple vertex
        assert_eq!(
            shorten(&p(&[1])),
            PsResult {
                shortened: Path::empty(),
                runs: 0,
                simples: 1
            }
        );
        assert_eq!(
            shorten(&p(&[1, 1])),
            PsResult {
                shortened: Path::empty(),
                runs: 1,
                simples: 1
            }
        );
    }

    #[test]
    fn shorten_non_canonical_input() {
        let ps = shorten(&p(&[7, 4, 7, 4, 9, 9]));
        assert_eq!(ps.shortened, p(&[1, 2, 1, 2]));
        assert_eq!((ps.runs, ps.simples), (1, 1));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&p(&[1, 2, 3])), PathClass::CompletelyReducible);
        assert_eq!(classify(&p(&[1, 2, 1, 2])), PathClass::Irreducible);
        assert_eq!(
            classify(&p(&[1, 2, 1, 2, 3, 3])),
            PathClass::PartiallyReducible
        );
    }

    #[test]
    fn irreducible_length_four_and_five() {
        let c1: Vec<_> = (1..=4)
            .flat_map(|r| enumerate_class(4, r, PathClass::Irreducible).unwrap())
            .collect();
        assert_eq!(c1, vec![p(&[1, 2, 1, 2])]);
        let c1_5: usize = (1..=5)
            .map(|r| {
                enumerate_class(5, r, PathClass::Irreducible)
                    .unwrap()
                    .count()
            })
            .sum();
        assert_eq!(c1_5, 0);
    }

    #[test]
    fn simples_classes_length_five() {
        let c0_25: BTreeSet<_> = enumerate_with_simples(5, 2, 0).unwrap().collect();
        let expected: BTreeSet<_> = [
            [1, 1, 2, 1, 2],
            [1, 2, 1, 1, 2],
            [1, 2, 1, 2, 1],
            [1, 2, 2, 1, 2],
            [1, 2, 1, 2, 2],
        ]
        .iter()
        .map(|v| p(v))
        .collect();
        assert_eq!(c0_25, expected);
        assert_eq!(enumerate_with_simples(5, 3, 0).unwrap().count(), 0);
        let c1_35: BTreeSet<_> = enumerate_with_simples(5, 3, 1).unwrap().collect();
        let expected: BTreeSet<_> = [
            [1, 2, 3, 1, 2],
            [1, 2, 1, 3, 2],
            [1, 2, 1, 2, 3],
            [1, 2, 3, 1, 3],
            [1, 2, 3, 2, 3],
        ]
        .iter()
        .map(|v| p(v))
        .collect();
        assert_eq!(c1_35, expected);
    }

    /// Whether a path has a run, counting the wrap-around pair.
    fn has_cyclic_run(v: &[u32]) -> bool {
        let l = v.len();
        l >= 2 && (0..l).any(|j| v[j] == v[(j + 1) % l])
    }

    #[test]
    fn counting_oracles_up_to_eight() {
        for k in 1..=8 {
            for r in 1..=k {
                let paths: Vec<_> = enumerate_canonical_paths(k, r).unwrap().collect();
                assert_eq!(BigUint::from(paths.len()), stirling2(k, r).unwrap());
                let mut c0 = 0usize;
                let mut c1 = 0usize;
                let mut norun = 0usize;
                for path in &paths {
                    match classify(path) {
                        PathClass::CompletelyReducible => c0 += 1,
                        PathClass::Irreducible => c1 += 1,
                        PathClass::PartiallyReducible => {}
                    }
                    if k == 1 || !has_cyclic_run(path.vertices()) {
                        norun += 1;
                    }
                }
                assert_eq!(BigUint::from(c0), count_c0(k, r).unwrap(), "C0 ({k},{r})");
                assert_eq!(
                    BigUint::from(c1),
                    count_irreducible(k, r).unwrap(),
                    "C1 ({k},{r})"
                );
                assert_eq!(
                    BigUint::from(norun),
                    count_norun_paths(k, r).unwrap(),
                    "norun ({k},{r})"
                );
            }
        }
    }

    #[test]
    fn irreducible_count_examples() {
        assert_eq!(count_irreducible(4, 2).unwrap(), BigUint::from(1u8));
        assert_eq!(count_irreducible(5, 2).unwrap(), BigUint::from(0u8));
        for k in 1..=10 {
            for r in 1..=k {
                if k < 2 * r {
                    assert_eq!(count_irreducible(k, r).unwrap(), BigUint::from(0u8));
                }
            }
        }
        assert!(matches!(
            count_irreducible(13, 3),
            Err(Error::Capability { .. })
        ));
        assert!(count_irreducible_with_limits(13, 3, &Limits::new(13)).is_ok());
    }

    #[test]
    fn shortened_path_properties_exhaustive() {
        for k in 1..=8 {
            for path in CanonicalPaths::with_prefix(k, None, &Path::empty()).unwrap() {
                let r = path.num_distinct();
                let ps = shorten(&path);
                assert_eq!(k, ps.shortened.len() + ps.runs + ps.simples);
                assert_eq!(ps.simples, r - ps.shortened.num_distinct());
                assert_ne!(ps.simples + 1, r, "{path}");
                let l = ps.shortened.len();
                assert!(l == 0 || l == 4 || l >= 6, "{path} -> {}", ps.shortened);
                let again = shorten(&ps.shortened);
                assert_eq!(again.shortened, ps.shortened);
                if l > 0 {
                    assert_eq!((again.runs, again.simples), (0, 0));
                }
            }
        }
    }

    #[test]
    fn prefix_stream_partitions_the_full_stream() {
        let k = 6;
        let all: Vec<_> = CanonicalPaths::with_prefix(k, Some(3), &Path::empty())
            .unwrap()
            .collect();
        let mut pieces = Vec::new();
        for prefix in CanonicalPaths::with_prefix(3, None, &Path::empty()).unwrap() {
            pieces.extend(CanonicalPaths::with_prefix(k, Some(3), &prefix).unwrap());
        }
        assert_eq!(all, pieces);
        assert!(CanonicalPaths::with_prefix(3, None, &p(&[2])).is_err());
    }
}
