//! Bipartite multigraphs `Δ(I, T)` and the sets `C_{s,k}(I)` of index paths
//! `T` whose graph is an even tree.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::paths::{canonicalize, classify, CanonicalPaths, Path, PathClass};
use crate::{Error, Limits, Result};

/// `Δ(I, T)`: step `ℓ` walks down from `i_ℓ` to `t_ℓ` and up from `t_ℓ` to
/// `i_{ℓ+1}`, with `i_{k+1} = i_1`. Orientation is discarded and repeated
/// traversals accumulate in the edge degree `m_it`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaGraph {
    i_vertices: Vec<u32>,
    t_vertices: Vec<u32>,
    edges: BTreeMap<(u32, u32), u32>,
}

pub fn build_delta(i_path: &Path, t_path: &Path) -> Result<DeltaGraph> {
    let (iv, tv) = (i_path.vertices(), t_path.vertices());
    if iv.is_empty() {
        return Err(Error::argument("i_path", "must be non-empty"));
    }
    if iv.len() != tv.len() {
        return Err(Error::argument(
            "t_path",
            alloc::format!("length {} differs from |I| = {}", tv.len(), iv.len()),
        ));
    }
    let k = iv.len();
    let mut edges = BTreeMap::new();
    for l in 0..k {
        *edges.entry((iv[l], tv[l])).or_insert(0) += 1;
        *edges.entry((iv[(l + 1) % k], tv[l])).or_insert(0) += 1;
    }
    let mut i_vertices = iv.to_vec();
    i_vertices.sort_unstable();
    i_vertices.dedup();
    let mut t_vertices = tv.to_vec();
    t_vertices.sort_unstable();
    t_vertices.dedup();
    Ok(DeltaGraph {
        i_vertices,
        t_vertices,
        edges,
    })
}

impl DeltaGraph {
    pub fn i_vertices(&self) -> &[u32] {
        &self.i_vertices
    }

    pub fn t_vertices(&self) -> &[u32] {
        &self.t_vertices
    }

    /// `m_it` keyed by `(i, t)`, in ascending key order.
    pub fn edge_degrees(&self) -> &BTreeMap<(u32, u32), u32> {
        &self.edges
    }

    /// `N_e`: number of distinct edges of the skeleton.
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// `d_i`: number of distinct `T`-neighbours of `i`.
    pub fn i_degree(&self, i: u32) -> usize {
        self.edges.keys().filter(|&&(a, _)| a == i).count()
    }

    pub fn is_even(&self) -> bool {
        self.edges.values().all(|m| m % 2 == 0)
    }

    pub fn is_connected(&self) -> bool {
        // union-find over I-vertices followed by T-vertices
        let ni = self.i_vertices.len();
        let index_i = |i: u32| self.i_vertices.binary_search(&i).unwrap_or(usize::MAX);
        let index_t = |t: u32| ni + self.t_vertices.binary_search(&t).unwrap_or(usize::MAX - ni);
        let n = ni + self.t_vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = n;
        for &(i, t) in self.edges.keys() {
            let a = find(&mut parent, index_i(i));
            let b = find(&mut parent, index_t(t));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components == 1
    }

    /// Connected with `N_e = #I-vertices + #T-vertices − 1`.
    pub fn is_tree_skeleton(&self) -> bool {
        self.num_edges() + 1 == self.i_vertices.len() + self.t_vertices.len() && self.is_connected()
    }
}

/// Levels `C_{1,k}(I), C_{2,k}(I), …` up to the last non-empty one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContributingSets {
    /// `levels[s − 1]` is `C_{s,k}(I)`, sorted.
    pub levels: Vec<Vec<Path>>,
}

impl ContributingSets {
    /// `t*(I)`: the last non-empty level.
    pub fn t_star(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, s: usize) -> &[Path] {
        s.checked_sub(1)
            .and_then(|j| self.levels.get(j))
            .map_or(&[], |v| v.as_slice())
    }
}

/// How the levels beyond `C_{1,k}` are found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generation {
    /// Split one block of each member of the previous level.
    Refinement,
    /// Filter every canonical `s`-path of length `k`.
    BruteForce,
}

/// [`contributing_sets_with`] using refinement and the default limits.
pub fn contributing_sets(i_path: &Path) -> Result<ContributingSets> {
    contributing_sets_with(i_path, Generation::Refinement, &Limits::default())
}

pub fn contributing_sets_with(
    i_path: &Path,
    mode: Generation,
    limits: &Limits,
) -> Result<ContributingSets> {
    let k = i_path.len();
    if k == 0 || !i_path.is_canonical() {
        return Err(Error::argument(
            "i_path",
            "must be a non-empty canonical path",
        ));
    }
    limits.check(k)?;
    if k > MAX_MASK_LEN {
        return Err(Error::argument(
            "i_path",
            alloc::format!("length {k} exceeds the supported {MAX_MASK_LEN}"),
        ));
    }
    if classify(i_path) != PathClass::Irreducible {
        return Err(Error::argument(
            "i_path",
            "path is reducible; shorten it first",
        ));
    }
    let r = i_path.num_distinct();
    let s_bound = k - r + 1;
    let first = vec![Path::constant(k)];
    match mode {
        Generation::Refinement => {
            let masks = StepMasks::new(i_path);
            let mut levels = vec![first];
            loop {
                let mut next = BTreeSet::new();
                for t in levels.last().into_iter().flatten() {
                    for cand in pruned_refinements(t, &masks, true) {
                        if build_delta(i_path, &cand)?.is_tree_skeleton() {
                            next.insert(cand);
                        }
                    }
                }
                if next.is_empty() {
                    break;
                }
                if levels.len() + 1 > s_bound {
                    return Err(Error::Inconsistent(alloc::format!(
                        "{i_path}: even tree with more than k − r + 1 = {s_bound} index vertices"
                    )));
                }
                levels.push(next.into_iter().collect());
            }
            Ok(ContributingSets { levels })
        }
        Generation::BruteForce => {
            let mut levels = vec![first];
            let mut empty_at = None;
            for s in 2..=s_bound {
                let level: Vec<Path> = CanonicalPaths::with_prefix(k, Some(s), &Path::empty())?
                    .filter(|t| {
                        build_delta(i_path, t).is_ok_and(|g| g.is_even() && g.is_tree_skeleton())
                    })
                    .collect();
                match (level.is_empty(), empty_at) {
                    (true, None) => empty_at = Some(s),
                    (false, Some(e)) => {
                        return Err(Error::Inconsistent(alloc::format!(
                            "{i_path}: level {s} non-empty after empty level {e}"
                        )))
                    }
                    (false, None) => levels.push(level),
                    (true, Some(_)) => {}
                }
            }
            Ok(ContributingSets { levels })
        }
    }
}

const MAX_MASK_LEN: usize = 64;

/// Per-step bitmasks over `I`-vertices (bit `i − 1` for vertex `i`).
struct StepMasks {
    /// Vertices whose edge to `t_ℓ` step `ℓ` traverses an odd number of
    /// times: both endpoints, unless `i_ℓ = i_{ℓ+1}`.
    parity: Vec<u64>,
    /// Vertices joined to `t_ℓ` by step `ℓ`.
    touch: Vec<u64>,
}

impl StepMasks {
    fn new(i_path: &Path) -> Self {
        let v = i_path.vertices();
        let k = v.len();
        let bit = |l: usize| 1u64 << (v[l % k] - 1);
        Self {
            parity: (0..k).map(|l| bit(l) ^ bit(l + 1)).collect(),
            touch: (0..k).map(|l| bit(l) | bit(l + 1)).collect(),
        }
    }
}

/// Splits of `positions` into `(A, B)` with `A` holding the first position
/// and `B` non-empty, as bitmasks over indices into `positions`.
fn block_splits(len: usize) -> impl Iterator<Item = u64> {
    // bit 0 always in A; iterate over which of the other positions go to B
    let rest = len.saturating_sub(1);
    (1u64..(1u64 << rest)).map(|b| b << 1)
}

fn relabel_split(t: &Path, positions: &[usize], to_b: u64, new_label: u32) -> Path {
    let mut v = t.vertices().to_vec();
    for (j, &pos) in positions.iter().enumerate() {
        if to_b & (1 << j) != 0 {
            v[pos] = new_label;
        }
    }
    canonicalize(&Path::from_raw(v))
}

fn blocks_of(t: &Path) -> Vec<Vec<usize>> {
    let s = t.vertices().iter().copied().max().unwrap_or(0) as usize;
    let mut blocks = vec![Vec::new(); s];
    for (pos, &x) in t.vertices().iter().enumerate() {
        blocks[x as usize - 1].push(pos);
    }
    blocks
}

/// Refinements of `t` that keep every edge degree even, assuming `Δ(I, t)`
/// is even.
///
/// With `tree_only`, `Δ(I, t)` must also be a tree, and only splits that keep
/// it a tree are returned: splitting `t`-vertex `b` into `A` and `B` adds one
/// vertex, so the skeleton stays a tree exactly when the `I`-neighbourhoods of
/// `A` and `B` share a single vertex.
fn pruned_refinements(t: &Path, masks: &StepMasks, tree_only: bool) -> BTreeSet<Path> {
    let new_label = t.num_distinct() as u32 + 1;
    let mut out = BTreeSet::new();
    for positions in blocks_of(t) {
        for to_b in block_splits(positions.len()) {
            let (mut parity, mut touch_a, mut touch_b) = (0u64, 0u64, 0u64);
            for (j, &pos) in positions.iter().enumerate() {
                if to_b & (1 << j) != 0 {
                    parity ^= masks.parity[pos];
                    touch_b |= masks.touch[pos];
                } else {
                    touch_a |= masks.touch[pos];
                }
            }
            if parity == 0 && (!tree_only || (touch_a & touch_b).count_ones() == 1) {
                out.insert(relabel_split(t, &positions, to_b, new_label));
            }
        }
    }
    out
}

/// Every canonical path whose partition is a 1-refinement of the partition
/// of `t` (one block split in two), sorted and without duplicates.
pub fn one_refinements(t: &Path) -> Result<Vec<Path>> {
    if t.is_empty() || !t.is_canonical() {
        return Err(Error::argument(
            "t_path",
            "must be a non-empty canonical path",
        ));
    }
    let new_label = t.num_distinct() as u32 + 1;
    let mut out = BTreeSet::new();
    for positions in blocks_of(t) {
        if positions.len() > MAX_MASK_LEN {
            return Err(Error::argument("t_path", "block too large to split"));
        }
        for to_b in block_splits(positions.len()) {
            out.insert(relabel_split(t, &positions, to_b, new_label));
        }
    }
    Ok(out.into_iter().collect())
}

/// The 1-refinements of `t` for which `Δ(I, ·)` keeps all edge degrees even.
///
/// `Δ(I, t)` itself must be even. The tree condition is not applied here.
pub fn refine_candidates(t_path: &Path, i_path: &Path) -> Result<Vec<Path>> {
    let g = build_delta(i_path, t_path)?;
    if !t_path.is_canonical() {
        return Err(Error::argument("t_path", "must be canonical"));
    }
    if !g.is_even() {
        return Err(Error::argument("t_path", "Δ(I, T) has an odd edge degree"));
    }
    if i_path.len() > MAX_MASK_LEN {
        return Err(Error::argument(
            "i_path",
            alloc::format!(
                "length {} exceeds the supported {MAX_MASK_LEN}",
                i_path.len()
            ),
        ));
    }
    if i_path.vertices().iter().any(|&x| x as usize > MAX_MASK_LEN) {
        return Err(Error::argument(
            "i_path",
            "vertex labels above 64 are not supported",
        ));
    }
    Ok(pruned_refinements(t_path, &StepMasks::new(i_path), false)
        .into_iter()
        .collect())
}
