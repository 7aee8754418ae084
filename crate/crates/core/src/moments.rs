//! Limiting spectral moments: Marčenko–Pastur moments `β_k(γ)`, the per-path
//! limits of `p^{r−1} F(I)`, and the heavy-tailed moments `μ_k(α, γ)`.
//!
//! `μ_k = β_k + d_k` is evaluated path by path. Every canonical path `I` of
//! length `k` is shortened; paths that vanish contribute `γ^{r−1}` to `β_k`,
//! the others contribute `γ^{r−1} h(Ĩ, α)` to `d_k`, where `Ĩ = S(I)` and `h`
//! only depends on `Ĩ`. The census of `(r, Ĩ)` pairs is integer-valued, so it
//! can be assembled in any order; the floating sum runs over the sorted census.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::combinatorics::count_c0;
use crate::delta::{build_delta, contributing_sets, ContributingSets};
use crate::paths::{shorten, CanonicalPaths, Path};
use crate::special::ln_gamma;
use crate::{Error, Limits, Result};

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::argument(
            "alpha",
            alloc::format!("must lie in the open interval (0, 2), got {alpha}"),
        ));
    }
    Ok(())
}

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::argument(
            "gamma",
            alloc::format!("must be positive and finite, got {gamma}"),
        ));
    }
    Ok(())
}

fn check_order(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::argument("k", "must be at least 1"));
    }
    Ok(())
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `β_k(γ) = Σ_r #C⁰_{r,k} γ^{r−1}` in exact arithmetic.
pub fn mp_moment_rational(gamma: &BigRational, k: usize) -> Result<BigRational> {
    check_order(k)?;
    if gamma <= &BigRational::zero() {
        return Err(Error::argument("gamma", "must be positive"));
    }
    let mut total = BigRational::zero();
    let mut power = BigRational::one();
    for r in 1..=k {
        total += &power * BigRational::from_integer(BigInt::from(count_c0(k, r)?));
        power *= gamma;
    }
    Ok(total)
}

/// `β_k(γ)`: the exact rational value at the binary value of `gamma`, rounded
/// once.
pub fn mp_moment(gamma: f64, k: usize) -> Result<f64> {
    check_gamma(gamma)?;
    let g =
        BigRational::from_float(gamma).ok_or_else(|| Error::argument("gamma", "must be finite"))?;
    Ok(to_f64(&mp_moment_rational(&g, k)?))
}

/// Limit of `C(n, r) E[Y_{11}^{2k_1} ⋯ Y_{1r}^{2k_r}]` for self-normalised
/// entries `Y_{1t} = X_{1t} / ‖X_{1·}‖`:
/// `(α/2)^{r−1} ∏ Γ(k_j − α/2) / (r Γ(1 − α/2)^r Γ(k))` with `k = Σ k_j`.
pub fn self_normalized_moment_limit(k_parts: &[usize], alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if k_parts.is_empty() || k_parts.contains(&0) {
        return Err(Error::argument(
            "k_parts",
            "must be a non-empty list of positive integers",
        ));
    }
    let r = k_parts.len();
    let k: usize = k_parts.iter().sum();
    let half = alpha / 2.0;
    let mut log = (r as f64 - 1.0) * libm::log(half)
        - libm::log(r as f64)
        - r as f64 * ln_gamma(1.0 - half)
        - ln_gamma(k as f64);
    for &kj in k_parts {
        log += ln_gamma(kj as f64 - half);
    }
    Ok(libm::exp(log))
}

/// `h(Ĩ, α)`, the `γ`-free part of `lim p^{r−1} F(Ĩ)`:
/// `Σ_s (α/2)^{s−1} Γ(1−α/2)^{−(r−1)−s} Σ_{T ∈ C_{s,k}(Ĩ)} ∏_i Γ(d_i)/Γ(N_i) ∏_e Γ((m_e−α)/2)`.
pub fn weight_from_sets(i_path: &Path, sets: &ContributingSets, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let r = i_path.num_distinct() as f64;
    let occ = i_path.occurrences();
    let half = alpha / 2.0;
    let ln_half = libm::log(half);
    let ln_g1 = ln_gamma(1.0 - half);
    let mut total = 0.0;
    for (j, level) in sets.levels.iter().enumerate() {
        let s = (j + 1) as f64;
        let level_log = (s - 1.0) * ln_half - (r - 1.0 + s) * ln_g1;
        for t in level {
            let g = build_delta(i_path, t)?;
            let mut log = level_log;
            for &i in g.i_vertices() {
                log += ln_gamma(g.i_degree(i) as f64) - ln_gamma(occ[i as usize] as f64);
            }
            for &m in g.edge_degrees().values() {
                log += ln_gamma((m as f64 - alpha) / 2.0);
            }
            total += libm::exp(log);
        }
    }
    Ok(total)
}

/// `h(Ĩ, α)` for an irreducible canonical path, see [`weight_from_sets`].
pub fn path_weight(i_path: &Path, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let sets = contributing_sets(i_path)?;
    weight_from_sets(i_path, &sets, alpha)
}

/// `lim p^{r−1} F(I)` for an irreducible canonical `r`-path `I`.
pub fn limit_pf(i_path: &Path, alpha: f64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let h = path_weight(i_path, alpha)?;
    let r = i_path.num_distinct() as i32;
    Ok(libm::pow(gamma, (r - 1) as f64) * h)
}

/// Integer census of the canonical paths of one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCensus {
    k: usize,
    /// `c0[r]`: completely reducible `r`-paths.
    c0: Vec<u64>,
    /// Paths with `r` vertices shortening to `Ĩ`, keyed by `(Ĩ, r)`.
    reduced: BTreeMap<(Path, usize), u64>,
    total: u64,
}

impl PathCensus {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            c0: vec![0; k + 1],
            reduced: BTreeMap::new(),
            total: 0,
        }
    }

    /// Census over every canonical path of length `k`.
    pub fn build(k: usize, limits: &Limits) -> Result<Self> {
        check_order(k)?;
        limits.check(k)?;
        let mut census = Self::new(k);
        census.extend(CanonicalPaths::with_prefix(k, None, &Path::empty())?);
        census.validate()
    }

    pub fn add(&mut self, path: &Path) {
        let r = path.num_distinct();
        let ps = shorten(path);
        if ps.shortened.is_empty() {
            self.c0[r] += 1;
        } else {
            *self.reduced.entry((ps.shortened, r)).or_insert(0) += 1;
        }
        self.total += 1;
    }

    pub fn extend(&mut self, paths: impl IntoIterator<Item = Path>) {
        for p in paths {
            self.add(&p);
        }
    }

    pub fn merge(&mut self, other: Self) -> Result<()> {
        if other.k != self.k {
            return Err(Error::Inconsistent(alloc::format!(
                "cannot merge censuses of lengths {} and {}",
                self.k,
                other.k
            )));
        }
        for (a, b) in self.c0.iter_mut().zip(other.c0) {
            *a += b;
        }
        for (key, n) in other.reduced {
            *self.reduced.entry(key).or_insert(0) += n;
        }
        self.total += other.total;
        Ok(())
    }

    /// Checks the totals against the Bell number and the Narayana counts.
    pub fn validate(self) -> Result<Self> {
        let bell = crate::combinatorics::bell_unchecked(self.k);
        if BigUint::from(self.total) != bell {
            return Err(Error::Inconsistent(alloc::format!(
                "census of length {} saw {} paths, expected {bell}",
                self.k,
                self.total
            )));
        }
        for r in 1..=self.k {
            let expected = count_c0(self.k, r)?;
            if BigUint::from(self.c0[r]) != expected {
                return Err(Error::Inconsistent(alloc::format!(
                    "{} completely reducible {r}-paths of length {}, expected {expected}",
                    self.c0[r],
                    self.k
                )));
            }
        }
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of completely reducible `r`-paths.
    pub fn completely_reducible(&self, r: usize) -> u64 {
        self.c0.get(r).copied().unwrap_or(0)
    }

    pub fn reduced(&self) -> &BTreeMap<(Path, usize), u64> {
        &self.reduced
    }

    /// Distinct shortened paths `Ĩ`, sorted.
    pub fn distinct_reduced(&self) -> Vec<Path> {
        let mut out: Vec<Path> = self.reduced.keys().map(|(p, _)| p.clone()).collect();
        out.dedup();
        out
    }

    /// `Σ_r #C⁰_{r,k} γ^{r−1}` exactly.
    pub fn beta_part(&self, gamma: &BigRational) -> BigRational {
        let mut total = BigRational::zero();
        let mut power = BigRational::one();
        for r in 1..=self.k {
            total += &power * BigRational::from_integer(BigInt::from(self.c0[r]));
            power *= gamma;
        }
        total
    }

    /// `d_k = Σ_{(Ĩ, r)} count · γ^{r−1} h(Ĩ)`, summed in key order. `weights`
    /// must hold `h(Ĩ)` for every `Ĩ` of the census.
    pub fn gap(&self, weights: &BTreeMap<Path, f64>, gamma: f64) -> Result<f64> {
        let mut total = 0.0;
        for ((path, r), &count) in &self.reduced {
            let h = weights.get(path).ok_or_else(|| {
                Error::Inconsistent(alloc::format!("no weight for shortened path {path}"))
            })?;
            total += count as f64 * libm::pow(gamma, (*r - 1) as f64) * h;
        }
        Ok(total)
    }
}

/// `μ_k(α, γ)` with the default enumeration limit.
pub fn heavy_mp_moment(alpha: f64, gamma: f64, k: usize) -> Result<f64> {
    heavy_mp_moment_with_limits(alpha, gamma, k, &Limits::default())
}

pub fn heavy_mp_moment_with_limits(
    alpha: f64,
    gamma: f64,
    k: usize,
    limits: &Limits,
) -> Result<f64> {
    let table = MomentTable::compute(alpha, gamma, k, limits)?;
    Ok(table.mu[k - 1])
}

/// How a row of a [`MomentTable`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermSource {
    /// `k ≤ 3`: `μ_k = β_k` without enumeration.
    ClosedForm,
    /// Path census over `paths` canonical paths with `reduced` distinct `Ĩ`.
    PathEnumeration { paths: u64, reduced: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    pub alpha: f64,
    pub gamma: f64,
    pub k_max: usize,
    /// `beta[k − 1] = β_k(γ)`.
    pub beta: Vec<f64>,
    /// `d[k − 1] = d_k(α, γ)`, zero for `k ≤ 3`.
    pub d: Vec<f64>,
    /// `mu[k − 1] = β_k + d_k`.
    pub mu: Vec<f64>,
    pub sources: Vec<TermSource>,
}

impl MomentTable {
    /// Sequential evaluation for `k = 1..=k_max`.
    pub fn compute(alpha: f64, gamma: f64, k_max: usize, limits: &Limits) -> Result<Self> {
        Self::validate_args(alpha, gamma, k_max, limits)?;
        let mut censuses = Vec::new();
        for k in 4..=k_max {
            censuses.push(PathCensus::build(k, limits)?);
        }
        let mut weights = BTreeMap::new();
        for census in &censuses {
            for path in census.distinct_reduced() {
                if let Entry::Vacant(slot) = weights.entry(path) {
                    let h = path_weight(slot.key(), alpha)?;
                    slot.insert(h);
                }
            }
        }
        Self::assemble(alpha, gamma, k_max, &censuses, &weights)
    }

    pub fn validate_args(alpha: f64, gamma: f64, k_max: usize, limits: &Limits) -> Result<()> {
        check_alpha(alpha)?;
        check_gamma(gamma)?;
        check_order(k_max)?;
        limits.check(k_max)
    }

    /// Builds the table from censuses for `k = 4..=k_max` (in that order)
    /// and the weights of every shortened path they contain.
    pub fn assemble(
        alpha: f64,
        gamma: f64,
        k_max: usize,
        censuses: &[PathCensus],
        weights: &BTreeMap<Path, f64>,
    ) -> Result<Self> {
        let g = BigRational::from_float(gamma)
            .ok_or_else(|| Error::argument("gamma", "must be finite"))?;
        let mut table = Self {
            alpha,
            gamma,
            k_max,
            beta: Vec::with_capacity(k_max),
            d: Vec::with_capacity(k_max),
            mu: Vec::with_capacity(k_max),
            sources: Vec::with_capacity(k_max),
        };
        for k in 1..=k_max {
            let beta_exact = mp_moment_rational(&g, k)?;
            let beta = to_f64(&beta_exact);
            let (d, source) = if k <= 3 {
                (0.0, TermSource::ClosedForm)
            } else {
                let census = censuses.get(k - 4).filter(|c| c.k() == k).ok_or_else(|| {
                    Error::Inconsistent(alloc::format!("missing census for k = {k}"))
                })?;
                if census.beta_part(&g) != beta_exact {
                    return Err(Error::Inconsistent(alloc::format!(
                        "completely reducible paths of length {k} disagree with β_k"
                    )));
                }
                (
                    census.gap(weights, gamma)?,
                    TermSource::PathEnumeration {
                        paths: census.total(),
                        reduced: census.distinct_reduced().len(),
                    },
                )
            };
            table.beta.push(beta);
            table.d.push(d);
            table.mu.push(beta + d);
            table.sources.push(source);
        }
        Ok(table)
    }
}
