//! Exact and Monte Carlo machinery for the limiting spectral distribution of
//! sample correlation matrices built from heavy-tailed data.
//!
//! The crate is `no_std` and only needs `alloc`. It is organised bottom-up:
//!
//! * [`combinatorics`]: Stirling, Bell and related counts as big integers,
//!   plus set-partition enumeration in restricted-growth order.
//! * [`paths`]: canonical paths, the path/partition bijection and the
//!   path-shortening algorithm with its reducibility classes.
//! * [`delta`]: the bipartite multigraph attached to a pair of paths and the
//!   sets of index paths that contribute at leading order.
//! * [`moments`]: Marčenko–Pastur moments, the per-path limits and the
//!   moments of the α-heavy Marčenko–Pastur law.
//! * [`boundary`]: the α → 0 and α → 2 boundary laws.
//! * [`simulation`]: heavy-tailed sampling, correlation matrices, a dense
//!   symmetric eigensolver and empirical spectral moments.
//!
//! IO, file formats, threading and the command line live in the `heavymp`
//! companion crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

use alloc::string::ToString;

#[cfg(test)]
extern crate std;

pub mod boundary;
pub mod combinatorics;
pub mod delta;
mod error;
pub mod moments;
pub mod paths;
pub mod simulation;
pub mod special;

pub use crate::error::{Error, Result};

/// Default cap on the path length visited by exhaustive enumeration.
///
/// Bell(12) = 4,213,597 canonical paths; each extra unit of length multiplies
/// the work by roughly `k / ln k` (Bell(13) ≈ 2.8·10⁷, Bell(14) ≈ 1.9·10⁸).
pub const DEFAULT_K_MAX: usize = 12;

/// Enumeration limits shared by the exhaustive engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub k_max: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            k_max: DEFAULT_K_MAX,
        }
    }
}

impl Limits {
    pub fn new(k_max: usize) -> Self {
        Self { k_max }
    }

    /// Rejects orders above the cap with an error that quotes the Bell number.
    pub fn check(&self, k: usize) -> Result<()> {
        if k > self.k_max {
            return Err(Error::Capability {
                k,
                k_max: self.k_max,
                paths: combinatorics::bell_unchecked(k).to_string(),
            });
        }
        Ok(())
    }
}
